//! Command-line front end for the `williamson` crate.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code: 0 on success, 1 on bad input, 2 when a binding bound whose
//! preconditions hold is violated.

pub mod matrix_io;
pub mod report;

use std::fmt::Write as _;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use williamson::gaussian::{entanglement_entropy, entropy_difference_bound, reduced_state};
use williamson::perturb::{
    self, bound_bhatia_jain, bound_gram, bound_s, bound_spectrum, check_eigvec_bound,
    check_inv_lemma, check_kappa_growth, check_projection_bound, check_sqrt_lemma,
    check_woodbury_norm, counterexample_scaling, degenerate_demo, BoundSelector,
    PerturbationCase,
};
use williamson::{norm, random, symplectic_spectrum, williamson, BoundReport, NormKind};

pub use matrix_io::{format_matrix, parse_matrix, ParseError};
pub use report::{emit_report, Format, ReportRow, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Core(#[from] williamson::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "williamson", version, about = "Williamson normal forms, symplectic spectra and perturbation bounds")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Norm used by bounds that accept one: op, fro or trace.
    #[arg(long, global = true, default_value = "op", value_parser = parse_norm)]
    pub norm: NormKind,
    /// Seed for randomly generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    /// Relative residual tolerance accepted by `decompose`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            norm: NormKind::Operator,
            seed: 0,
            format: Format::Text,
            bits: false,
            tol: 1e-8,
        }
    }
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<Range<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range like 0..2, got `{s}`"))?;
    let a = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok(a..b)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the symplectic spectrum in descending order.
    Spectrum { matrix: PathBuf },
    /// Williamson decomposition with residuals.
    Decompose {
        matrix: PathBuf,
        /// Write the symplectic diagonalizer to this file.
        #[arg(long)]
        write_s: Option<PathBuf>,
    },
    /// Evaluate one bound on a pair of matrices.
    ///
    /// SECOND is the perturbed matrix, or the perturbation direction when
    /// --eps is given. The diagonalizer, gram, woodbury, kappa-growth and
    /// eigenvector bounds always need --eps.
    Check {
        #[arg(value_enum)]
        bound: CheckBound,
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        /// Ascending eigenvalue indices of the first matrix, e.g. 0..1.
        #[arg(long, value_parser = parse_range, default_value = "0..1")]
        first_range: Range<usize>,
        /// Ascending eigenvalue indices of the second matrix.
        #[arg(long, value_parser = parse_range)]
        second_range: Option<Range<usize>>,
    },
    /// Evaluate a bound over a grid of perturbation sizes and fit the slope.
    Sweep {
        /// Base matrix; a random SPD matrix is drawn when omitted.
        matrix: Option<PathBuf>,
        /// Perturbation direction; random when omitted.
        #[arg(long)]
        direction: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        random_dim: usize,
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
        #[arg(long, default_value = "spectrum")]
        bound: BoundSelector,
        #[arg(long, default_value_t = 1e-6)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-2)]
        eps_max: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
        /// Explicit comma-separated grid, overriding the log grid.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Entropy of a Gaussian state, optionally reduced to some modes.
    Entropy {
        covariance: PathBuf,
        /// Zero-based modes to keep, comma-separated.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<usize>>,
    },
    /// Reproduce the scaling counterexample for diag(x, 1).
    Counterexample {
        #[arg(long, default_value_t = 33.0)]
        x: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Gauge behaviour at a degenerate symplectic spectrum.
    DemoDegenerate {
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4,1e-5")]
        eps: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckBound {
    Spectrum,
    BhatiaJain,
    Diagonalizer,
    Gram,
    Woodbury,
    KappaGrowth,
    Sqrt,
    Inverse,
    Eigenvector,
    Projection,
    EntropyContinuity,
}

impl CheckBound {
    /// Whether SECOND is always a direction scaled by --eps.
    fn needs_eps(self) -> bool {
        matches!(
            self,
            CheckBound::Diagonalizer
                | CheckBound::Gram
                | CheckBound::Woodbury
                | CheckBound::KappaGrowth
                | CheckBound::Eigenvector
        )
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, &cli.config) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if outcome.violation {
                let _ = writeln!(err, "error: a bound was violated although its preconditions hold");
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub violation: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            violation: false,
        }
    }
}

pub fn execute(command: &Command, cfg: &RunConfig) -> CliResult<Outcome> {
    match command {
        Command::Spectrum { matrix } => cmd_spectrum(matrix, cfg),
        Command::Decompose { matrix, write_s } => cmd_decompose(matrix, write_s.as_deref(), cfg),
        Command::Check {
            bound,
            first,
            second,
            eps,
            first_range,
            second_range,
        } => cmd_check(*bound, first, second, *eps, first_range, second_range.as_ref(), cfg),
        Command::Sweep {
            matrix,
            direction,
            random_dim,
            kappa,
            bound,
            eps_min,
            eps_max,
            points,
            grid,
        } => {
            let grid = match grid {
                Some(g) => g.clone(),
                None => log_grid(*eps_min, *eps_max, *points)?,
            };
            cmd_sweep(
                matrix.as_deref(),
                direction.as_deref(),
                *random_dim,
                *kappa,
                *bound,
                &grid,
                cfg,
            )
        }
        Command::Entropy { covariance, modes } => cmd_entropy(covariance, modes.as_deref(), cfg),
        Command::Counterexample { x, eps, c } => cmd_counterexample(*x, *eps, *c, cfg),
        Command::DemoDegenerate { eps } => cmd_demo(eps, cfg),
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|&x| report::fmt_float(x)).collect::<Vec<_>>().join(" ")
}

/// `points` values spaced evenly in `ln ε` from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || points < 2 {
        return Err(CliError::Usage(format!(
            "need 0 < eps-min < eps-max and at least two points, got {lo}, {hi}, {points}"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| match k {
            0 => lo,
            _ if k == points - 1 => hi,
            _ => (a + step * k as f64).exp(),
        })
        .collect())
}

fn cmd_spectrum(path: &Path, cfg: &RunConfig) -> CliResult<Outcome> {
    let m = matrix_io::read_matrix(path)?;
    let d = symplectic_spectrum(&m)?;
    let text = match cfg.format {
        Format::Text => d.iter().map(|&v| report::fmt_float(v) + "\n").collect(),
        Format::Csv => {
            let mut s = String::from("mode,d\n");
            for (k, &v) in d.iter().enumerate() {
                let _ = writeln!(s, "{k},{}", report::fmt_fixed17(v));
            }
            s
        }
        Format::Json => json(&serde_json::json!({ "d": d })),
    };
    Ok(Outcome::ok(text))
}

fn cmd_decompose(path: &Path, write_s: Option<&Path>, cfg: &RunConfig) -> CliResult<Outcome> {
    let m = matrix_io::read_matrix(path)?;
    let f = williamson(&m)?;
    let scale = norm(&m, NormKind::Operator)?;
    let accurate = f.residual_diag <= cfg.tol * scale && f.residual_symp <= cfg.tol;
    if let Some(p) = write_s {
        std::fs::write(p, format_matrix(&f.s)).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
    }
    let text = match cfg.format {
        Format::Json => json(&f),
        Format::Csv => {
            let mut s = String::from("mode,d\n");
            for (k, &v) in f.d.iter().enumerate() {
                let _ = writeln!(s, "{k},{}", report::fmt_fixed17(v));
            }
            let _ = writeln!(s, "# residual_diag,{}", report::fmt_fixed17(f.residual_diag));
            let _ = writeln!(s, "# residual_symp,{}", report::fmt_fixed17(f.residual_symp));
            s
        }
        Format::Text => {
            let mut s = format!("d: {}\n", fmt_list(&f.d));
            let _ = writeln!(s, "residual_diag: {}", report::fmt_float(f.residual_diag));
            let _ = writeln!(s, "residual_symp: {}", report::fmt_float(f.residual_symp));
            let _ = writeln!(s, "pairing_deviation: {}", report::fmt_float(f.pairing_deviation));
            s.push_str("S:\n");
            s.push_str(&format_matrix(&f.s));
            s
        }
    };
    Ok(Outcome {
        text,
        violation: !accurate,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    bound: CheckBound,
    first: &Path,
    second: &Path,
    eps: Option<f64>,
    first_range: &Range<usize>,
    second_range: Option<&Range<usize>>,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let m = matrix_io::read_matrix(first)?;
    let other = matrix_io::read_matrix(second)?;
    let kind = cfg.norm;
    if bound.needs_eps() && eps.is_none() {
        return Err(CliError::Usage(format!(
            "bound {} needs --eps",
            bound.to_possible_value().expect("named").get_name()
        )));
    }
    let mp = match eps {
        Some(e) if !bound.needs_eps() => PerturbationCase::new(&m, &other, e)?.perturbed(),
        _ => other.clone(),
    };
    let report: BoundReport = match bound {
        CheckBound::Spectrum => bound_spectrum(&m, &mp, kind)?,
        CheckBound::BhatiaJain => bound_bhatia_jain(&m, &mp)?.report,
        CheckBound::Sqrt => check_sqrt_lemma(&m, &mp, kind)?,
        CheckBound::Inverse => check_inv_lemma(&m, &mp, kind)?,
        CheckBound::EntropyContinuity => entropy_difference_bound(&m, &mp)?,
        CheckBound::Projection => {
            let s2 = second_range.cloned().unwrap_or_else(|| first_range.clone());
            check_projection_bound(&m, &mp, first_range.clone(), s2, kind)?
        }
        CheckBound::Diagonalizer | CheckBound::Gram => {
            let case = PerturbationCase::new(&m, &other, eps.expect("checked"))?;
            if bound == CheckBound::Gram {
                bound_gram(&case)?
            } else {
                bound_s(&case)?
            }
        }
        CheckBound::Woodbury => check_woodbury_norm(&m, &other, eps.expect("checked"))?,
        CheckBound::KappaGrowth => check_kappa_growth(&m, &other, eps.expect("checked"))?,
        CheckBound::Eigenvector => check_eigvec_bound(&m, &other, eps.expect("checked"))?,
    };
    let violation = report.is_violation();
    Ok(Outcome {
        text: emit_report(&[ReportRow::new(eps, report)], cfg.format),
        violation,
    })
}

fn cmd_sweep(
    matrix: Option<&Path>,
    direction: Option<&Path>,
    dim: usize,
    kappa: f64,
    selector: BoundSelector,
    grid: &[f64],
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let mut rng = random::rng(cfg.seed);
    let m = match matrix {
        Some(p) => matrix_io::read_matrix(p)?,
        None => {
            if dim == 0 || dim % 2 != 0 || !(kappa >= 1.0) {
                return Err(CliError::Usage(format!(
                    "random-dim must be even and positive and kappa at least 1, got {dim} and {kappa}"
                )));
            }
            random::spd(&mut rng, dim, kappa)
        }
    };
    let e = match direction {
        Some(p) => matrix_io::read_matrix(p)?,
        None => random::unit_symmetric(&mut rng, m.rows()),
    };
    let sw = perturb::sweep(&m, &e, grid, selector, cfg.norm)?;
    let violation = sw.any_violation();
    let rows: Vec<ReportRow> = sw
        .reports()
        .map(|(eps, r)| ReportRow::new(Some(eps), r.clone()))
        .collect();
    let skipped: Vec<String> = sw
        .points
        .iter()
        .filter_map(|p| {
            p.error
                .as_ref()
                .map(|e| format!("epsilon={}: {e}", report::fmt_float(p.epsilon)))
        })
        .collect();
    let slope = sw.slope.map_or("nan".to_string(), report::fmt_fixed17);
    let text = match cfg.format {
        Format::Json => json(&serde_json::json!({
            "description": sw.description,
            "bound": selector.as_str(),
            "reports": rows,
            "skipped": skipped,
            "slope": sw.slope,
            "fitted": sw.fitted,
        })),
        Format::Csv => {
            let mut s = emit_report(&rows, Format::Csv);
            for line in &skipped {
                let _ = writeln!(s, "# skipped {line}");
            }
            let _ = writeln!(s, "# slope,{slope}");
            let _ = writeln!(s, "# fitted,{}", sw.fitted);
            s
        }
        Format::Text => {
            let mut s = format!("{}\n", sw.description);
            s.push_str(&emit_report(&rows, Format::Text));
            for line in &skipped {
                let _ = writeln!(s, "skipped {line}");
            }
            let _ = writeln!(
                s,
                "slope: {} ({} points)",
                sw.slope.map_or("n/a".to_string(), report::fmt_float),
                sw.fitted
            );
            s
        }
    };
    Ok(Outcome { text, violation })
}

fn cmd_entropy(path: &Path, modes: Option<&[usize]>, cfg: &RunConfig) -> CliResult<Outcome> {
    let mut cov = matrix_io::read_matrix(path)?;
    if let Some(modes) = modes {
        cov = reduced_state(&cov, modes)?;
    }
    let mut h = entanglement_entropy(&cov)?;
    if cfg.bits {
        h = h.in_bits();
    }
    let unit = if cfg.bits { "bits" } else { "nats" };
    let text = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&h).expect("serializable");
            v["unit"] = unit.into();
            json(&v)
        }
        Format::Csv => {
            let mut s = String::from("mode,d,term\n");
            for (k, (&d, &t)) in h.symplectic_eigenvalues.iter().zip(&h.per_mode_terms).enumerate() {
                let _ = writeln!(s, "{k},{},{}", report::fmt_fixed17(d), report::fmt_fixed17(t));
            }
            let _ = writeln!(s, "# entropy,{},{unit}", report::fmt_fixed17(h.entropy));
            s
        }
        Format::Text => {
            let mut s = format!("{}\n", report::fmt_float(h.entropy));
            for (k, (&d, &t)) in h.symplectic_eigenvalues.iter().zip(&h.per_mode_terms).enumerate() {
                let _ = writeln!(
                    s,
                    "mode {k}: d={} term={}",
                    report::fmt_float(d),
                    report::fmt_float(t)
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_counterexample(x: f64, eps: f64, c: f64, cfg: &RunConfig) -> CliResult<Outcome> {
    let r = counterexample_scaling(x, eps, c)?;
    let text = match cfg.format {
        Format::Json => json(&r),
        Format::Csv => emit_report(&[ReportRow::new(Some(eps), r.report.clone())], Format::Csv),
        Format::Text => {
            let f = report::fmt_float;
            let mut s = String::new();
            let _ = writeln!(s, "fires={}", r.report.holds);
            let _ = writeln!(s, "lhs={}", f(r.report.lhs));
            let _ = writeln!(s, "rhs={}", f(r.report.rhs));
            let _ = writeln!(s, "x0={}", r.x0);
            let _ = writeln!(s, "d_closed={}", f(r.d_closed));
            let _ = writeln!(s, "d_computed={}", f(r.d_computed));
            let _ = writeln!(s, "d_eps_closed={}", f(r.d_eps_closed));
            let _ = writeln!(s, "d_eps_computed={}", f(r.d_eps_computed));
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_demo(eps: &[f64], cfg: &RunConfig) -> CliResult<Outcome> {
    let demos = eps
        .iter()
        .map(|&e| degenerate_demo(e))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match cfg.format {
        Format::Json => json(&demos),
        Format::Csv => {
            let mut s = String::from(
                "epsilon,s_dist_canonical,s_dist_aligned,angle1_deg,angle2_deg,gram_dist,commutator_norm\n",
            );
            for d in &demos {
                let g = report::fmt_fixed17;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    g(d.epsilon),
                    g(d.s_dist_canonical),
                    g(d.s_dist_aligned),
                    d.best_angles_deg[0],
                    d.best_angles_deg[1],
                    g(d.gram_dist),
                    g(d.commutator_norm)
                );
            }
            s
        }
        Format::Text => {
            let f = report::fmt_float;
            let mut s = String::new();
            for d in &demos {
                let _ = writeln!(
                    s,
                    "epsilon={} canonical={} aligned={} angles={},{} gram={} commutator={}",
                    f(d.epsilon),
                    f(d.s_dist_canonical),
                    f(d.s_dist_aligned),
                    d.best_angles_deg[0],
                    d.best_angles_deg[1],
                    f(d.gram_dist),
                    f(d.commutator_norm)
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}
