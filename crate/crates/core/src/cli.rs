//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 affirmative, 1 negative, 2 undecided or boundary, 3 solver
//! error, 4 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::io::{read_tensor, write_tensor};
use crate::linalg::{Matrix, SymmetricEigen};
use crate::mclass::{classify, ClassificationReport, ClassifyOptions, ConditionStatus, Verdict};
use crate::meig::{
    enumerate_spectrum, power_method_max, power_method_min, EnumerateDiagnostics, EnumerateOptions, MEigenpair,
    PowerDiagnostics, PowerOptions,
};
use crate::pocs::{pocs_verify, PocsDiagnostics, PocsOptions, PocsStatus};
use crate::tensor::{ElasticityTensor, FourthOrder, UnfoldMode};

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "elasticity-se", version, about = "Strong ellipticity checks for fourth-order elasticity tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a tensor: symmetry, entry ranges, Z-pattern, unfolding spectrum.
    Info {
        #[command(flatten)]
        common: Common,
        /// Also write the tensor back out in the dense file layout.
        #[arg(long, value_name = "PATH")]
        write_dense: Option<PathBuf>,
    },
    /// Compute extremal M-eigenvalues and, for n <= 3, the whole M-spectrum.
    Meig {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: SpectrumArgs,
    },
    /// Search for a sum-of-squares certificate, falling back to M-eigenvalues.
    CheckSe {
        #[command(flatten)]
        common: Common,
        /// Strictness shift; defaults to 1e-6 * max |a_iikk|.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the certificate JSON here when one is found.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
    /// Place the tensor on the Z / M-tensor ladder and run conditions C1-C13.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Sample vectors per sampled condition.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Off-diagonal entries up to this value still count as non-positive.
        #[arg(long, default_value_t = 0.0)]
        z_tol: f64,
    },
    /// Print the x- or y-unfolding as an n^2 x n^2 matrix.
    Unfold {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::X)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Tensor file (JSON).
    #[arg(short, long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Convergence tolerance of the power method.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Iteration cap; defaults to 10000 for power iterations and 50000 for POCS.
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Grid points per sphere for spectrum enumeration.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Skip spectrum enumeration.
    #[arg(long)]
    pub no_enumerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    X,
    Y,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out` (or the `--output` file), errors to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_AFFIRMATIVE };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok((report, code)) => {
            let common = common_of(&cli.command);
            match &common.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &report) {
                        let _ = writeln!(err, "error: {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
                None => {
                    let _ = out.write_all(report.as_bytes());
                }
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Input problems map to 4, everything else a solver raises to 3.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::SymmetryViolation { .. }
        | Error::NonFiniteEntry(_)
        | Error::DimensionTooSmall(_)
        | Error::ShapeMismatch { .. }
        | Error::InvalidOption(_) => EXIT_INPUT,
        _ => EXIT_SOLVER,
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Info { common, .. }
        | Command::Meig { common, .. }
        | Command::CheckSe { common, .. }
        | Command::Classify { common, .. }
        | Command::Unfold { common, .. } => common,
    }
}

fn dispatch(cmd: &Command) -> Result<(String, i32), Error> {
    let common = common_of(cmd);
    if !(common.tol > 0.0) {
        return Err(Error::InvalidOption(format!("--tol must be positive, got {}", common.tol)));
    }
    let a: ElasticityTensor<f64> = read_tensor(&common.input)?;
    match cmd {
        Command::Info { write_dense, .. } => cmd_info(&a, common, write_dense.as_deref()),
        Command::Meig { spectrum, .. } => cmd_meig(&a, common, spectrum),
        Command::CheckSe { epsilon, certificate, .. } => cmd_check_se(&a, common, *epsilon, certificate.as_deref()),
        Command::Classify { spectrum, samples, z_tol, .. } => cmd_classify(&a, common, spectrum, *samples, *z_tol),
        Command::Unfold { mode, .. } => cmd_unfold(&a, common, *mode),
    }
}

fn power_options(common: &Common) -> PowerOptions {
    PowerOptions {
        tol: common.tol,
        max_iter: common.max_iter.unwrap_or(10_000),
        seed: common.seed,
        ..PowerOptions::default()
    }
}

fn enumerate_options(spectrum: &SpectrumArgs) -> Result<EnumerateOptions, Error> {
    if spectrum.grid == Some(0) {
        return Err(Error::InvalidOption("--grid must be positive".into()));
    }
    Ok(EnumerateOptions { grid_density: spectrum.grid, ..EnumerateOptions::default() })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn fmt_vec(v: &[f64]) -> String {
    // + 0.0 folds -0 into 0
    let parts: Vec<String> = v.iter().map(|c| format!("{:.6}", c + 0.0)).collect();
    format!("({})", parts.join(", "))
}

/// Sign of a decision quantity with a dead band of `tol`.
fn sign_code(value: f64, tol: f64) -> i32 {
    if value > tol {
        EXIT_AFFIRMATIVE
    } else if value < -tol {
        EXIT_NEGATIVE
    } else {
        EXIT_UNDECIDED
    }
}

fn decision_tol(a: &ElasticityTensor<f64>) -> f64 {
    1e-8 * a.max_abs().max(1.0)
}

#[derive(Debug, Serialize)]
struct EntryRange {
    min: f64,
    max: f64,
}

#[derive(Debug, Serialize)]
struct InfoReport {
    n: usize,
    symmetric: bool,
    diagonal: EntryRange,
    off_diagonal: EntryRange,
    z_pattern: bool,
    z_violations: usize,
    unfolding_eigenvalues: Vec<f64>,
    unfolding_range: EntryRange,
    unfolding_psd: bool,
}

fn cmd_info(a: &ElasticityTensor<f64>, common: &Common, write_dense: Option<&Path>) -> Result<(String, i32), Error> {
    let n = a.n();
    let mut diag = Vec::new();
    let mut off = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = a.get(i, j, k, l);
                    if ElasticityTensor::<f64>::is_diagonal_index([i, j, k, l]) {
                        diag.push(v);
                    } else {
                        off.push(v);
                    }
                }
            }
        }
    }
    let range = |v: &[f64]| EntryRange {
        min: v.iter().copied().fold(f64::INFINITY, f64::min),
        max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let z = crate::mclass::z_pattern(a, 0.0);
    let eig = SymmetricEigen::new(&a.unfold(UnfoldMode::X).matrix);
    let psd_tol = 1e-12 * a.max_abs().max(1.0);
    let report = InfoReport {
        n,
        symmetric: true,
        diagonal: range(&diag),
        off_diagonal: range(&off),
        z_pattern: z.is_z,
        z_violations: z.violations.len(),
        unfolding_range: EntryRange { min: eig.min(), max: eig.max() },
        unfolding_psd: eig.min() >= -psd_tol,
        unfolding_eigenvalues: eig.values.clone(),
    };
    if let Some(path) = write_dense {
        write_tensor(a, path)?;
    }
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = String::new();
            s += &format!("n = {n}\n");
            s += "symmetry: a_ijkl = a_jikl = a_ijlk holds\n";
            s += &format!("diagonal entries a_iikk: min {}, max {}\n", report.diagonal.min, report.diagonal.max);
            s += &format!("off-diagonal entries: min {}, max {}\n", report.off_diagonal.min, report.off_diagonal.max);
            s += &format!(
                "Z-pattern: {}\n",
                if z.is_z { "yes".to_string() } else { format!("no ({} positive off-diagonal orbits)", z.violations.len()) }
            );
            s += &format!("unfolding eigenvalues: {}\n", fmt_vec(&report.unfolding_eigenvalues));
            s += &format!("unfolding range: [{:.6}, {:.6}]\n", report.unfolding_range.min, report.unfolding_range.max);
            s += &format!("unfolding PSD: {}\n", if report.unfolding_psd { "yes" } else { "no" });
            s
        }
    };
    Ok((text, EXIT_AFFIRMATIVE))
}

#[derive(Debug, Serialize)]
struct PairReport {
    lambda: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    residual: f64,
}

impl PairReport {
    fn new(p: &MEigenpair<f64>, a: &ElasticityTensor<f64>) -> Self {
        Self { lambda: p.lambda, x: p.x.clone(), y: p.y.clone(), residual: p.residual(a) }
    }
}

#[derive(Debug, Serialize)]
struct PowerReport {
    pair: PairReport,
    diagnostics: PowerDiagnostics,
}

#[derive(Debug, Serialize)]
struct SpectrumPairReport {
    #[serde(flatten)]
    pair: PairReport,
    degenerate: bool,
}

#[derive(Debug, Serialize)]
struct SpectrumReport {
    pairs: Vec<SpectrumPairReport>,
    distinct_eigenvalues: Vec<f64>,
    complete: bool,
    diagnostics: EnumerateDiagnostics,
}

#[derive(Debug, Serialize)]
struct MeigReport {
    max: PowerReport,
    min: PowerReport,
    spectrum: Option<SpectrumReport>,
    min_eigenvalue: f64,
    decision_tol: f64,
    verdict: &'static str,
}

fn cmd_meig(a: &ElasticityTensor<f64>, common: &Common, spectrum: &SpectrumArgs) -> Result<(String, i32), Error> {
    let popts = power_options(common);
    let max = power_method_max(a, &popts)?;
    let min = power_method_min(a, &popts)?;
    let spec = if !spectrum.no_enumerate && a.n() <= 3 {
        Some(enumerate_spectrum(a, &enumerate_options(spectrum)?)?)
    } else {
        None
    };
    let mut min_lambda = min.pair.lambda;
    if let Some(last) = spec.as_ref().and_then(|s| s.min()) {
        min_lambda = min_lambda.min(last);
    }
    let tol = decision_tol(a);
    let code = sign_code(min_lambda, tol);
    let verdict = match code {
        EXIT_AFFIRMATIVE => "strongly elliptic",
        EXIT_NEGATIVE => "not strongly elliptic",
        _ => "boundary",
    };
    let report = MeigReport {
        max: PowerReport { pair: PairReport::new(&max.pair, a), diagnostics: max.diagnostics },
        min: PowerReport { pair: PairReport::new(&min.pair, a), diagnostics: min.diagnostics },
        spectrum: spec.as_ref().map(|s| SpectrumReport {
            pairs: s
                .entries
                .iter()
                .map(|e| SpectrumPairReport { pair: PairReport::new(&e.pair, a), degenerate: e.degenerate })
                .collect(),
            distinct_eigenvalues: s.distinct_eigenvalues(1e-6),
            complete: s.complete,
            diagnostics: s.diagnostics.clone(),
        }),
        min_eigenvalue: min_lambda,
        decision_tol: tol,
        verdict,
    };
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = String::new();
            if let Some(sp) = &report.spectrum {
                s += &format!(
                    "M-spectrum ({} pairs, {} distinct eigenvalues; grid enumeration, completeness is heuristic):\n",
                    sp.pairs.len(),
                    sp.distinct_eigenvalues.len()
                );
                for p in &sp.pairs {
                    s += &format!(
                        "  {:>12.6}  x = {}  y = {}  residual {:.1e}{}\n",
                        p.pair.lambda,
                        fmt_vec(&p.pair.x),
                        fmt_vec(&p.pair.y),
                        p.pair.residual,
                        if p.degenerate { "  [degenerate manifold]" } else { "" }
                    );
                }
            }
            for (name, r) in [("max", &report.max), ("min", &report.min)] {
                s += &format!(
                    "power method {name}: {:.6}  x = {}  y = {}  ({} iterations)\n",
                    r.pair.lambda,
                    fmt_vec(&r.pair.x),
                    fmt_vec(&r.pair.y),
                    r.diagnostics.iterations
                );
            }
            s += &match code {
                EXIT_AFFIRMATIVE => format!(
                    "min M-eigenvalue {min_lambda:.6} > 0: strongly elliptic (SE holds iff every M-eigenvalue is positive)\n"
                ),
                EXIT_NEGATIVE => format!(
                    "min M-eigenvalue {min_lambda:.6} < 0: not strongly elliptic (the minimizing pair gives A x^2 y^2 < 0)\n"
                ),
                _ => format!("min M-eigenvalue {min_lambda:.3e} is zero within {tol:.1e}: boundary, undecided\n"),
            };
            s
        }
    };
    Ok((text, code))
}

#[derive(Debug, Serialize)]
struct CertificateSummary {
    terms: usize,
    reconstruction_error: f64,
    alphas: Vec<f64>,
    #[serde(rename = "U")]
    u: Vec<Matrix<f64>>,
}

#[derive(Debug, Serialize)]
struct CheckSeReport {
    pocs_status: PocsStatus,
    pocs: PocsDiagnostics,
    certificate: Option<CertificateSummary>,
    min_eigenvalue: Option<PairReport>,
    verdict: String,
}

fn cmd_check_se(
    a: &ElasticityTensor<f64>,
    common: &Common,
    epsilon: Option<f64>,
    certificate_path: Option<&Path>,
) -> Result<(String, i32), Error> {
    let opts = PocsOptions { epsilon, max_iter: common.max_iter.unwrap_or(50_000), ..PocsOptions::default() };
    let outcome = pocs_verify(a, &opts)?;
    let eps = outcome.diagnostics.epsilon;
    let tol = decision_tol(a);

    let mut cross = None;
    let (code, verdict) = match outcome.status {
        PocsStatus::CertifiedMPd => (
            EXIT_AFFIRMATIVE,
            format!("strongly elliptic: A - {eps:.3e} E is a sum of rank-one PSD terms, so A x^2 y^2 >= {eps:.3e}"),
        ),
        status => {
            let min = power_method_min(a, &power_options(common))?;
            let lambda = min.pair.lambda;
            cross = Some(PairReport::new(&min.pair, a));
            match (status, sign_code(lambda, tol)) {
                (_, EXIT_AFFIRMATIVE) => (
                    EXIT_AFFIRMATIVE,
                    format!("SE holds via M-eigenvalues: min M-eigenvalue {lambda:.6} > 0"),
                ),
                (PocsStatus::CertifiedMPsd, _) => (
                    EXIT_UNDECIDED,
                    format!("M-PSD certified (A x^2 y^2 >= 0), strict positivity undecided: min M-eigenvalue {lambda:.3e}"),
                ),
                (_, EXIT_NEGATIVE) => (
                    EXIT_NEGATIVE,
                    format!("strong ellipticity fails: min M-eigenvalue {lambda:.6} < 0"),
                ),
                _ => (
                    EXIT_UNDECIDED,
                    format!("undecided: POCS sufficient condition not met and min M-eigenvalue {lambda:.3e} is zero within {tol:.1e}"),
                ),
            }
        }
    };

    if let (Some(path), Some(cert)) = (certificate_path, &outcome.certificate) {
        std::fs::write(path, cert.to_json(a) + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    let report = CheckSeReport {
        pocs_status: outcome.status,
        certificate: outcome.certificate.as_ref().map(|c| CertificateSummary {
            terms: c.terms.len(),
            reconstruction_error: c.reconstruction_error(a),
            alphas: c.terms.iter().map(|t| t.alpha).collect(),
            u: c.terms.iter().map(|t| t.u.clone()).collect(),
        }),
        pocs: outcome.diagnostics,
        min_eigenvalue: cross,
        verdict,
    };
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let d = &report.pocs;
            let mut s = format!(
                "POCS: {} (epsilon {:.3e}, {} iterations, residual {:.3e}, stop: {:?})\n",
                report.pocs_status, d.epsilon, d.iterations, d.residual, d.stop
            );
            match &report.certificate {
                Some(c) => {
                    s += &format!(
                        "certificate: {} rank-one terms, reconstruction error {:.1e} (sum-of-squares sufficient condition)\n",
                        c.terms, c.reconstruction_error
                    );
                }
                None => s += "no certificate: the sufficient condition is not met, which proves nothing either way\n",
            }
            if let Some(p) = &report.min_eigenvalue {
                s += &format!(
                    "cross-check: min M-eigenvalue {:.6} at x = {}, y = {}\n",
                    p.lambda,
                    fmt_vec(&p.x),
                    fmt_vec(&p.y)
                );
            }
            s += &format!("verdict: {}\n", report.verdict);
            s
        }
    };
    Ok((text, code))
}

fn cmd_classify(
    a: &ElasticityTensor<f64>,
    common: &Common,
    spectrum: &SpectrumArgs,
    samples: usize,
    z_tol: f64,
) -> Result<(String, i32), Error> {
    if !(z_tol >= 0.0) {
        return Err(Error::InvalidOption(format!("--z-tol must be >= 0, got {z_tol}")));
    }
    let opts = ClassifyOptions {
        z_tol,
        power: power_options(common),
        n_samples: samples,
        seed: common.seed,
        enumerate: !spectrum.no_enumerate,
        enumerate_opts: enumerate_options(spectrum)?,
        ..ClassifyOptions::default()
    };
    let report = classify(a, &opts)?;
    let code = match report.verdict {
        _ if !report.discrepancies.is_empty() => EXIT_UNDECIDED,
        Verdict::NonsingularM => EXIT_AFFIRMATIVE,
        Verdict::NotM | Verdict::NotZ => EXIT_NEGATIVE,
        Verdict::SingularMBoundary => EXIT_UNDECIDED,
    };
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Text => classify_text(&report),
    };
    Ok((text, code))
}

fn classify_text(r: &ClassificationReport) -> String {
    let mut s = String::new();
    s += &format!("verdict: {}\n", r.verdict);
    match r.verdict {
        Verdict::NotZ => {
            s += &format!(
                "  {} positive off-diagonal orbit(s); M-tensor notions need sE - B with B >= 0\n",
                r.z_pattern.violations.len()
            );
            for v in r.z_pattern.violations.iter().take(5) {
                s += &format!("  a{:?} = {}\n", v.index, v.value);
            }
        }
        _ => {
            let rho = r.rho_shift.unwrap_or(f64::NAN);
            s += &format!(
                "  alpha = {}, rho_M(alpha E - A) = {rho:.9}, margin {:.3e} (tolerance {:.1e}; nonsingular iff alpha > rho_M(alpha E - A))\n",
                r.alpha,
                r.margin.unwrap_or(f64::NAN),
                r.margin_tol
            );
        }
    }
    if let Some(m) = r.min_m_eigenvalue {
        s += &format!("  min M-eigenvalue {m:.6}\n");
    }
    s += "conditions:\n";
    for c in r.conditions.values() {
        let status = match c.status {
            ConditionStatus::Pass => "pass",
            ConditionStatus::PassSampled => "pass (sampled)",
            ConditionStatus::Fail => "FAIL",
            ConditionStatus::Skipped => "skipped",
        };
        s += &format!("  {:<4} {:<15} {}  [{}]\n", c.id.to_string(), status, c.id.description(), c.detail);
        if let Some(w) = &c.witness {
            s += &format!("       witness {}\n", fmt_vec(w));
        }
    }
    for d in &r.discrepancies {
        s += &format!("DISCREPANCY: {d}\n");
    }
    s
}

#[derive(Debug, Serialize)]
struct UnfoldReport {
    n: usize,
    mode: UnfoldMode,
    matrix: Matrix<f64>,
}

fn cmd_unfold(a: &ElasticityTensor<f64>, common: &Common, mode: ModeArg) -> Result<(String, i32), Error> {
    let mode = match mode {
        ModeArg::X => UnfoldMode::X,
        ModeArg::Y => UnfoldMode::Y,
    };
    let m = a.unfold(mode).matrix;
    let text = match common.format {
        Format::Json => to_json(&UnfoldReport { n: a.n(), mode, matrix: m }),
        Format::Text => {
            let mut s = String::new();
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
                s += &row.join(" ");
                s += "\n";
            }
            s
        }
    };
    Ok((text, EXIT_AFFIRMATIVE))
}
