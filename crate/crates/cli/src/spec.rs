//! Shorthand grammar for maps, weights and conjugations on the command line.
//!
//! Maps:
//!   `identity` | `phi_p:P` | `lf:a,b,c,d` | `nf:a0,a1` |
//!   `eq3:zeta=Z,r=R,t=T` | `eq4:zeta=Z,r=R,t=T` | `eq5:zeta=Z,t=T` |
//!   a JSON object `{"a":[re,im],…}` | `@path.json`
//!
//! Weights:
//!   a complex constant (`1`, `0.5-2i`) | `psi_p:p=P,c=C` | `jw:b,a0` |
//!   `rat:n0,n1,…/d0,d1,…` (ascending coefficients) | JSON | `@path.json`
//!
//! Conjugations: `J` | `wj:p_re,p_im[,c_re,c_im]` | `rot:l_re,l_im`.
//!
//! Complex literals use the `a+bi` form; in `phi_p:` a single `re,im` pair
//! is also accepted.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use wcop::moebius::{build_normal_form, phi_p, psi_p, HalfPlaneForm};
use wcop::scalar::parse_complex;
use wcop::symmetry::ConjugationSpec;
use wcop::{Error, LFMap, Poly, Rational, Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn json_or_file<T: DeserializeOwned>(s: &str) -> Option<Result<T>> {
    let text = if let Some(path) = s.strip_prefix('@') {
        match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return Some(Err(parse_err(format!("cannot read {path}: {e}")))),
        }
    } else if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        return None;
    };
    Some(serde_json::from_str(&text).map_err(|e| parse_err(format!("invalid JSON: {e}"))))
}

fn list(body: &str, expected: usize, what: &str) -> Result<Vec<C64>> {
    let items: Vec<C64> = body.split(',').map(parse_complex).collect::<Result<_>>()?;
    if items.len() != expected {
        return Err(parse_err(format!("{what} expects {expected} values, got {}", items.len())));
    }
    Ok(items)
}

fn keyed(body: &str) -> Result<BTreeMap<String, C64>> {
    body.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| parse_err(format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), parse_complex(v)?))
        })
        .collect()
}

fn take(map: &BTreeMap<String, C64>, key: &str, default: Option<C64>) -> Result<C64> {
    map.get(key).copied().or(default).ok_or_else(|| parse_err(format!("missing `{key}=`")))
}

pub fn parse_map(s: &str) -> Result<LFMap> {
    if let Some(parsed) = json_or_file::<LFMap>(s) {
        let m = parsed?;
        return LFMap::new(m.a, m.b, m.c, m.d);
    }
    let s = s.trim();
    if s == "identity" {
        return Ok(LFMap::identity());
    }
    let (kind, body) = s.split_once(':').ok_or_else(|| parse_err(format!("unknown map `{s}`")))?;
    match kind {
        "phi_p" => phi_p(parse_complex(body)?),
        "lf" => {
            let q = list(body, 4, "lf:")?;
            LFMap::new(q[0], q[1], q[2], q[3])
        }
        "nf" => {
            let q = list(body, 2, "nf:")?;
            LFMap::from_j_form(q[0], q[1])
        }
        "eq3" | "eq4" | "eq5" => {
            let kv = keyed(body)?;
            let zeta = take(&kv, "zeta", Some(ONE))?;
            let t = take(&kv, "t", None)?;
            let form = match kind {
                "eq3" => HalfPlaneForm::BoundaryHyperbolic,
                "eq4" => HalfPlaneForm::InteriorHyperbolic,
                _ => HalfPlaneForm::Parabolic,
            };
            let r = kv.get("r").map(|r| r.re);
            build_normal_form(form, zeta, r, t)
        }
        _ => Err(parse_err(format!("unknown map kind `{kind}`"))),
    }
}

pub fn parse_weight(s: &str) -> Result<Rational> {
    if let Some(parsed) = json_or_file::<Rational>(s) {
        return parsed;
    }
    let s = s.trim();
    let Some((kind, body)) = s.split_once(':') else {
        return Ok(Rational::constant(parse_complex(s)?));
    };
    match kind {
        "psi_p" => {
            let kv = keyed(body)?;
            psi_p(take(&kv, "p", None)?, take(&kv, "c", Some(ONE))?)
        }
        "jw" => {
            let q = list(body, 2, "jw:")?;
            Ok(Rational::j_weight(q[0], q[1]))
        }
        "rat" => {
            let (num, den) = body.split_once('/').ok_or_else(|| parse_err("rat: expects numerator/denominator"))?;
            let coeffs = |t: &str| -> Result<Poly> { Ok(Poly::new(t.split(',').map(parse_complex).collect::<Result<_>>()?)) };
            Ok(Rational::new(coeffs(num)?, coeffs(den)?))
        }
        _ => Err(parse_err(format!("unknown weight kind `{kind}`"))),
    }
}

pub fn parse_conj(s: &str) -> Result<ConjugationSpec> {
    let s = s.trim();
    if s == "J" {
        return Ok(ConjugationSpec::J);
    }
    let (kind, body) = s.split_once(':').ok_or_else(|| parse_err(format!("unknown conjugation `{s}`")))?;
    let nums: Vec<f64> = body
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| parse_err(format!("invalid number `{t}` in `{s}`"))))
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("wj", [pr, pi]) => ConjugationSpec::weighted_j(C64::new(*pr, *pi), ONE),
        ("wj", [pr, pi, cr, ci]) => ConjugationSpec::weighted_j(C64::new(*pr, *pi), C64::new(*cr, *ci)),
        ("rot", [lr, li]) => ConjugationSpec::rot_j(C64::new(*lr, *li)),
        _ => Err(parse_err(format!("malformed conjugation `{s}`"))),
    }
}

/// `a0,a1[,b]` with `b = 1` by default.
pub fn parse_nf(s: &str) -> Result<wcop::moebius::NormalFormJ> {
    let q: Vec<C64> = s.split(',').map(parse_complex).collect::<Result<_>>()?;
    match q.as_slice() {
        [a0, a1] => wcop::moebius::NormalFormJ::new(*a0, *a1, ONE),
        [a0, a1, b] => wcop::moebius::NormalFormJ::new(*a0, *a1, *b),
        _ => Err(parse_err(format!("normal form expects a0,a1[,b], got `{s}`"))),
    }
}
