//! `wcop`: classification, complex-symmetry checks and spectrum comparisons
//! for weighted composition operators on the Hardy space.
//!
//! Exit codes: 0 pass, 1 fail, 2 bad input, 3 symbol is not a self-map,
//! 4 hypothesis of the requested theorem violated.

mod config;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wcop::hardy::weighted_composition_matrix;
use wcop::moebius::{MapAnalysis, NormalFormJ};
use wcop::scalar::parse_complex;
use wcop::spectra::{
    compare_spectrum, eigenvalues, interior_point_set, power_compact, theorem, MatchedPair, SpectrumKind,
    SpectrumPrediction, TheoremParams,
};
use wcop::suite::{criteria, SuiteConfig};
use wcop::symmetry::{
    example24_operator, is_c_symmetric, phase_scan, thm25_construct, thm25_factor, ConjugationSpec, Factorization,
    SymmetryReport,
};
use wcop::{Error, LFMap, Rational, C64};

use config::{Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "wcop", version, about = "Weighted composition operators: symmetry and spectra at finite truncation")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation size.
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// Leading block used for residuals (default N/2).
    #[arg(long = "M", global = true)]
    m: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of leading eigenvalues compared against point-set predictions.
    #[arg(long, global = true)]
    eigen_k: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Omit the `timestamp` field so identical runs are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct PairArgs {
    /// Symbol φ: `identity`, `phi_p:P`, `nf:a0,a1`, `lf:a,b,c,d`, `eq3:…`, `eq4:…`, `eq5:…`, JSON or `@file`.
    #[arg(long, allow_hyphen_values = true)]
    map: Option<String>,
    /// Weight ψ: a constant, `psi_p:p=P,c=C`, `jw:b,a0`, `rat:n…/d…`, JSON or `@file`.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    psi: String,
    /// Take the pair from the J-symmetric normal form `a0,a1[,b]` instead.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "map")]
    nf: Option<String>,
    /// Apply the symmetric construction for this conjugation to `--nf`.
    #[arg(long, requires = "nf")]
    construct: Option<String>,
}

#[derive(clap::Args, Debug, Default)]
struct ThmArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    psi0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    #[arg(long)]
    m_max: Option<usize>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed points, Denjoy–Wolff point and class of a linear-fractional map.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Test `C_{ψ,φ}` for complex symmetry with respect to a conjugation.
    CsCheck {
        #[command(flatten)]
        pair: PairArgs,
        /// `J`, `wj:p_re,p_im[,c_re,c_im]` or `rot:l_re,l_im`.
        #[arg(long)]
        conj: String,
    },
    /// Build the operator that is complex symmetric for `--conj` from a J-symmetric normal form.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        nf: String,
        #[arg(long)]
        conj: String,
    },
    /// Recover the J-symmetric factor of an operator symmetric for `--conj`.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        psi: String,
        #[arg(long)]
        conj: String,
    },
    /// Predicted spectrum against the eigenvalues of the truncation.
    Spectrum {
        /// Registered theorem id (3.4–3.8); without it `--map/--psi` are used.
        #[arg(long)]
        thm: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        map: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        psi: String,
        #[command(flatten)]
        params: ThmArgs,
        /// Relative tolerance for point-set matching.
        #[arg(long, default_value_t = 1e-4)]
        rel_tol: f64,
        /// Write all eigenvalues of the truncation as CSV (`re,im`).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The Toeplitz operator with symbol `(p - z)/|1 - pz|` against `C_{ψ_p,φ_p}J`.
    Example24 {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        c: String,
        /// Phases tried when the given `c` fails.
        #[arg(long, default_value_t = 360)]
        scan: usize,
    },
    /// Export the truncated matrix of `C_{ψ,φ}`.
    Matrix {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: MatrixFormat,
    },
    /// Run every acceptance criterion.
    Suite {
        /// Randomized cases per property.
        #[arg(long)]
        cases: Option<usize>,
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

/// A command's result: the JSON body and the exit status it implies.
struct Done {
    json: String,
    code: u8,
    /// Written to stderr after the JSON.
    note: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

struct Ctx {
    cfg: RunConfig,
    timestamp: bool,
}

impl Ctx {
    fn emit<T: Serialize>(&self, body: &T, code: u8) -> Result<Done, Error> {
        let timestamp = self.timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        let json = wcop::json::to_string(&Envelope { body, timestamp })
            .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
        Ok(Done { json, code, note: None })
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotSelfMap => 3,
        Error::Hypothesis(_) => 4,
        Error::NotFactorable { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let over = Overrides { n: cli.n, m: cli.m, tol: cli.tol, eigen_k: cli.eigen_k, output: cli.output, seed: cli.seed };
    let result = RunConfig::load(cli.config.as_deref(), over)
        .and_then(|cfg| run(&Ctx { cfg, timestamp: !cli.no_timestamp }, cli.command));
    match result {
        Ok((done, output)) => {
            let written = match output {
                Some(path) => std::fs::write(&path, format!("{}\n", done.json))
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    // A closed pipe (`wcop … | head`) is not an error worth reporting.
                    let _ = writeln!(std::io::stdout(), "{}", done.json);
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            if let Some(note) = done.note {
                eprintln!("{note}");
            }
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<(Done, Option<PathBuf>), Error> {
    let done = match command {
        Command::Classify { map } => cmd_classify(ctx, &map)?,
        Command::CsCheck { pair, conj } => cmd_cs_check(ctx, &pair, &conj)?,
        Command::Construct { nf, conj } => cmd_construct(ctx, &nf, &conj)?,
        Command::Factor { map, psi, conj } => cmd_factor(ctx, &map, &psi, &conj)?,
        Command::Spectrum { thm, map, psi, params, rel_tol, csv } => {
            cmd_spectrum(ctx, thm.as_deref(), map.as_deref(), &psi, &params, rel_tol, csv)?
        }
        Command::Example24 { p, c, scan } => cmd_example24(ctx, &p, &c, scan)?,
        Command::Matrix { pair, format } => cmd_matrix(ctx, &pair, format)?,
        Command::Suite { cases, criterion } => cmd_suite(ctx, cases, criterion)?,
    };
    Ok((done, ctx.cfg.output.clone()))
}

fn self_map(s: &str) -> Result<LFMap, Error> {
    let phi = spec::parse_map(s)?;
    if !phi.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    Ok(phi)
}

fn resolve_pair(pair: &PairArgs) -> Result<(Rational, LFMap), Error> {
    if let Some(nf) = &pair.nf {
        let nf = spec::parse_nf(nf)?;
        return match &pair.construct {
            Some(conj) => thm25_construct(&spec::parse_conj(conj)?, &nf),
            None => Ok((nf.weight(), nf.map()?)),
        };
    }
    let map = pair.map.as_deref().ok_or_else(|| Error::Parse("either --map or --nf is required".into()))?;
    Ok((spec::parse_weight(&pair.psi)?, self_map(map)?))
}

fn cmd_classify(ctx: &Ctx, map: &str) -> Result<Done, Error> {
    let phi = self_map(map)?;
    #[derive(Serialize)]
    struct Out {
        map: LFMap,
        analysis: MapAnalysis,
    }
    ctx.emit(&Out { map: phi, analysis: phi.analyze()? }, 0)
}

fn symmetry_report(ctx: &Ctx, psi: &Rational, phi: &LFMap, conj: &ConjugationSpec) -> Result<SymmetryReport, Error> {
    let a = weighted_composition_matrix(psi, phi, ctx.cfg.n)?;
    is_c_symmetric(&a, conj, ctx.cfg.block(), ctx.cfg.tol)
}

fn cmd_cs_check(ctx: &Ctx, pair: &PairArgs, conj: &str) -> Result<Done, Error> {
    let conj = spec::parse_conj(conj)?;
    let (psi, phi) = resolve_pair(pair)?;
    let report = symmetry_report(ctx, &psi, &phi, &conj)?;
    ctx.emit(&report, u8::from(!report.verdict))
}

fn cmd_construct(ctx: &Ctx, nf: &str, conj: &str) -> Result<Done, Error> {
    let nf = spec::parse_nf(nf)?;
    let conj = spec::parse_conj(conj)?;
    let (psi, phi) = thm25_construct(&conj, &nf)?;
    #[derive(Serialize)]
    struct Out {
        normal_form: NormalFormJ,
        conjugation: ConjugationSpec,
        psi: Rational,
        phi: LFMap,
        report: SymmetryReport,
    }
    let report = symmetry_report(ctx, &psi, &phi, &conj)?;
    let code = u8::from(!report.verdict);
    ctx.emit(&Out { normal_form: nf, conjugation: conj, psi, phi, report }, code)
}

fn cmd_factor(ctx: &Ctx, map: &str, psi: &str, conj: &str) -> Result<Done, Error> {
    let conj = spec::parse_conj(conj)?;
    let psi = spec::parse_weight(psi)?;
    let phi = self_map(map)?;
    let f: Factorization = thm25_factor(&psi, &phi, &conj, ctx.cfg.n)?;
    ctx.emit(&f, 0)
}

fn complex_opt(s: &Option<String>) -> Result<Option<C64>, Error> {
    s.as_deref().map(parse_complex).transpose()
}

fn theorem_params(a: &ThmArgs) -> Result<TheoremParams, Error> {
    let d = TheoremParams::default();
    Ok(TheoremParams {
        p: complex_opt(&a.p)?,
        c: complex_opt(&a.c)?.unwrap_or(d.c),
        a0: complex_opt(&a.a0)?,
        a1: complex_opt(&a.a1)?,
        b: complex_opt(&a.b)?,
        t: complex_opt(&a.t)?,
        psi0: complex_opt(&a.psi0)?,
        lambda: complex_opt(&a.lambda)?,
        zeta: complex_opt(&a.zeta)?,
        m_max: a.m_max.unwrap_or(d.m_max),
    })
}

#[derive(Serialize)]
struct EigenSummary {
    leading: Vec<C64>,
    count: usize,
    converged: bool,
    max_backward_error: f64,
}

#[derive(Serialize)]
struct Comparison {
    rel_tol: f64,
    k: usize,
    pairs: Vec<MatchedPair>,
    pass: bool,
}

#[derive(Serialize)]
struct SpectrumOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<String>,
    #[serde(rename = "N")]
    n: usize,
    psi: Rational,
    phi: LFMap,
    prediction: SpectrumPrediction,
    eigen: EigenSummary,
    /// Present only for point-set predictions.
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

fn cmd_spectrum(
    ctx: &Ctx,
    thm: Option<&str>,
    map: Option<&str>,
    psi: &str,
    args: &ThmArgs,
    rel_tol: f64,
    csv: Option<PathBuf>,
) -> Result<Done, Error> {
    let (label, summary, psi, phi, prediction) = match thm {
        Some(id) => {
            let t = theorem(id).ok_or_else(|| Error::Parse(format!("unknown theorem id `{id}` (known: 3.4–3.8)")))?;
            let params = theorem_params(args)?;
            // Hypotheses are checked by `predict` before any matrix is built.
            let prediction = t.predict(&params).map_err(|e| name_theorem(id, e))?;
            let (psi, phi) = t.operator(&params).map_err(|e| name_theorem(id, e))?;
            (Some(id.to_string()), Some(t.summary().to_string()), psi, phi, prediction)
        }
        None => {
            let map = map.ok_or_else(|| Error::Parse("spectrum needs --thm or --map".into()))?;
            let psi = spec::parse_weight(psi)?;
            let phi = self_map(map)?;
            if !power_compact(&phi) {
                return Err(Error::Hypothesis("the symbol has a fixed point on the circle, so C_φ is not power compact".into()));
            }
            let m_max = args.m_max.unwrap_or(TheoremParams::default().m_max);
            let prediction = interior_point_set(&psi, &phi, m_max)?;
            (None, None, psi, phi, prediction)
        }
    };
    let a = weighted_composition_matrix(&psi, &phi, ctx.cfg.n)?;
    let eig = eigenvalues(&a);
    if let Some(path) = csv {
        let mut body = String::from("re,im\n");
        for z in &eig.eigenvalues {
            body.push_str(&format!("{},{}\n", wcop::json::fmt_f64(z.re), wcop::json::fmt_f64(z.im)));
        }
        std::fs::write(&path, body).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let k = ctx.cfg.eigen_k;
    let comparison = if prediction.kind == SpectrumKind::PointSet {
        let r = compare_spectrum(&eig, &prediction, k, rel_tol)?;
        Some(Comparison { rel_tol, k, pairs: r.pairs, pass: r.pass })
    } else {
        None
    };
    let code = u8::from(comparison.as_ref().is_some_and(|c| !c.pass));
    let eigen = EigenSummary {
        leading: eig.leading(k).to_vec(),
        count: eig.eigenvalues.len(),
        converged: eig.converged,
        max_backward_error: eig.backward_errors.iter().copied().fold(0.0, f64::max),
    };
    ctx.emit(&SpectrumOut { theorem: label, summary, n: ctx.cfg.n, psi, phi, prediction, eigen, comparison }, code)
}

fn name_theorem(id: &str, e: Error) -> Error {
    match e {
        Error::Hypothesis(msg) => Error::Hypothesis(format!("theorem {id}: {msg}")),
        other => other,
    }
}

fn cmd_example24(ctx: &Ctx, p: &str, c: &str, scan: usize) -> Result<Done, Error> {
    let p = parse_complex(p)?;
    let c = parse_complex(c)?;
    if p.im != 0.0 {
        return Err(Error::Domain(format!("p = {p} must be real")));
    }
    let ex = example24_operator(p, c, ctx.cfg.n)?;
    let m = ctx.cfg.block();
    let report = is_c_symmetric(&ex.operator, &ex.conjugation, m, ctx.cfg.tol)?;
    #[derive(Serialize)]
    struct Scan {
        steps: usize,
        best_theta: f64,
        best_residual: f64,
        pass: bool,
    }
    #[derive(Serialize)]
    struct Out {
        report: SymmetryReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        phase_scan: Option<Scan>,
        pass: bool,
    }
    let phase_scan = if report.verdict || scan == 0 {
        None
    } else {
        let (theta, residual) = phase_scan(&ex.operator, p, m, scan)?;
        Some(Scan { steps: scan, best_theta: theta, best_residual: residual, pass: residual <= ctx.cfg.tol })
    };
    let pass = report.verdict || phase_scan.as_ref().is_some_and(|s| s.pass);
    ctx.emit(&Out { report, phase_scan, pass }, u8::from(!pass))
}

fn cmd_matrix(ctx: &Ctx, pair: &PairArgs, format: MatrixFormat) -> Result<Done, Error> {
    let (psi, phi) = resolve_pair(pair)?;
    let a = weighted_composition_matrix(&psi, &phi, ctx.cfg.n)?;
    match format {
        MatrixFormat::Json => ctx.emit(&a, 0),
        MatrixFormat::Csv => Ok(Done { json: a.to_csv().trim_end().to_string(), code: 0, note: None }),
    }
}

fn cmd_suite(ctx: &Ctx, cases: Option<usize>, only: Option<u32>) -> Result<Done, Error> {
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig { n: ctx.cfg.n, seed: ctx.cfg.seed, cases: cases.unwrap_or(defaults.cases) };
    let selected: Vec<_> = criteria().into_iter().filter(|c| only.is_none_or(|id| c.id() == id)).collect();
    if selected.is_empty() {
        return Err(Error::Parse(format!("no criterion with id {}", only.unwrap_or_default())));
    }
    let outcomes: Vec<_> = selected.iter().map(|c| c.run(&cfg)).collect();
    for o in &outcomes {
        eprintln!("{}", o.summary_line());
    }
    let first_failure = outcomes.iter().find(|o| !o.pass);
    let note = first_failure.map(|o| format!("first failing criterion: {} ({})", o.id, o.title));
    let report = wcop::suite::SuiteReport {
        config: cfg,
        pass: first_failure.is_none(),
        first_failure: first_failure.map(|o| o.id),
        criteria: outcomes.clone(),
    };
    let mut done = ctx.emit(&report, u8::from(!report.pass))?;
    done.note = note;
    Ok(done)
}
