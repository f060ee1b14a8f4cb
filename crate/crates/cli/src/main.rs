//! `imslab`: classification, integral means spectra, Schwarzian norms and
//! Bergman multiplier bounds from the command line.

mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use imslab::bergman::{koebe_target, multiplier_lower_bound, shimorin_report, ShimorinReport};
use imslab::catalog::Catalog;
use imslab::classifier::{classify, closed_form_pieces, closed_form_spectrum, Family};
use imslab::config::{OutputFormat, RunConfig};
use imslab::ims::{coefficient_growth_spectrum, estimate_spectrum, AnalyticDerivative, RationalDerivative};
use imslab::schwarzian::{pre_schwarzian, pre_schwarzian_norm, schwarzian, schwarzian_norm, weighted_sup_norm};
use imslab::verify::{run_suite, Suite};
use imslab::Error;

use input::{parse_complex, parse_list, parse_rational, parse_target, Target};

#[derive(Parser)]
#[command(name = "imslab", version, about = "Integral means spectra of rational maps")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads (default: every core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Extra catalog entries (TOML, same layout as the built-in catalog).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        }
    }
}

#[derive(Args)]
struct FunctionArg {
    /// `catalog:NAME`, a catalog name, or `num=c0,c1,…;den=d0,d1,…`.
    #[arg(required_unless_present = "num", conflicts_with_all = ["num", "den"])]
    function: Option<String>,
    /// Numerator coefficients, ascending (`a` or `a+bi` each).
    #[arg(long, allow_hyphen_values = true)]
    num: Option<String>,
    /// Denominator coefficients, ascending; defaults to 1.
    #[arg(long, allow_hyphen_values = true, requires = "num")]
    den: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Mode {
    Closed,
    Numeric,
    Both,
    Coeff,
}

#[derive(Subcommand)]
enum Command {
    /// Class label and circle factorization of a rational map.
    Classify(FunctionArg),
    /// Integral means spectrum at one τ.
    Spectrum {
        #[command(flatten)]
        function: FunctionArg,
        /// Real `a` or complex `a+bi`.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        /// Also write the radius ladder as CSV (numeric modes).
        #[arg(long)]
        ladder: Option<PathBuf>,
        /// Number of Taylor coefficients in coeff mode.
        #[arg(long, default_value_t = 4096)]
        coefficients: usize,
    },
    /// Weighted sup norms of the Schwarzian and pre-Schwarzian derivatives.
    Norms(FunctionArg),
    /// Lower bound for the Bergman multiplier norm of the Schwarzian derivative.
    Multiplier {
        #[command(flatten)]
        function: FunctionArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Multiplier lower bounds against the Koebe target over several weights.
    Shimorin {
        #[command(flatten)]
        function: FunctionArg,
        /// Comma-separated weights α > 0.
        #[arg(long, default_value = "0.5,1,2")]
        alphas: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run acceptance checks; exits 1 if any selected criterion fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// List the catalog.
    CatalogList,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::Config(_) | Error::UnknownEntry(_) | Error::Io(_) => 2,
            Error::RootFindingFailed(_)
            | Error::BranchTrackingFailed(_)
            | Error::QuadratureBudgetExceeded { .. }
            | Error::TruncationUnreliable { .. } => 4,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

/// The report and whether it counts as success.
type Outcome = Result<(Value, bool), Failure>;

struct Context {
    cfg: RunConfig,
    catalog: Catalog,
}

impl Context {
    fn target(&self, f: &FunctionArg) -> Result<Target, Failure> {
        match (&f.function, &f.num) {
            (Some(spec), _) => parse_target(spec, &self.catalog).map_err(Failure::parse),
            (None, Some(num)) => parse_rational(num, f.den.as_deref().unwrap_or("1"))
                .map(Target::Inline)
                .map_err(Failure::parse),
            (None, None) => Err(Failure::parse("no function given")),
        }
    }

    fn derivative(&self, t: &Target) -> Result<Box<dyn AnalyticDerivative>, Failure> {
        Ok(match t {
            Target::Entry(e) => e.derivative()?,
            Target::Inline(r) => Box::new(RationalDerivative::from_map(r, &self.cfg.root_config())?),
        })
    }
}

fn rational_only(t: &Target) -> Result<&imslab::poly::RationalFn, Failure> {
    t.rational()
        .ok_or_else(|| Failure::unsupported(format!("{} is not a rational map", t.name())))
}

fn cmd_classify(ctx: &Context, f: &FunctionArg) -> Outcome {
    let t = ctx.target(f)?;
    let r = rational_only(&t)?;
    let c = classify(r, &ctx.cfg.root_config())?;
    let classified = c.label.family != Family::NotClassified;
    let verdict = if !classified {
        "not classified: circle pole of order three or more"
    } else if !c.label.in_r_o {
        "classified, outside R_O: multiple circle zero of R′"
    } else {
        "classified"
    };
    let mut report = json!({
        "function": t.name(),
        "map": r,
        "label": c.label,
        "verdict": verdict,
        "circle_poles": c.circle_poles.roots,
    });
    if let Some(fd) = &c.factorization {
        report["circle_critical_points"] = json!(fd.on_circle_zeros.roots);
        report["derivative"] = json!(fd.derivative);
    }
    if classified && c.label.in_r_o {
        report["closed_form"] = json!(closed_form_pieces(&c.label)?);
    }
    Ok((report, true))
}

fn cmd_spectrum(ctx: &Context, f: &FunctionArg, tau: &str, mode: Mode, ladder: Option<&PathBuf>, n: usize) -> Outcome {
    let tau = parse_complex(tau).map_err(Failure::parse)?;
    let t = ctx.target(f)?;
    let mut report = json!({"function": t.name(), "tau_re": tau.re, "tau_im": tau.im, "mode": mode_name(mode)});

    let closed = if matches!(mode, Mode::Closed | Mode::Both) {
        if tau.im != 0.0 {
            return Err(Failure::unsupported("no closed form for complex τ; use --mode numeric"));
        }
        let r = rational_only(&t)?;
        let label = classify(r, &ctx.cfg.root_config())?.label;
        let v = closed_form_spectrum(&label, tau.re)?;
        report["closed"] = json!(v);
        Some(v)
    } else {
        None
    };

    match mode {
        Mode::Numeric | Mode::Both => {
            let d = ctx.derivative(&t)?;
            let est = estimate_spectrum(&*d, tau, ctx.cfg.k_min, ctx.cfg.k_max, &ctx.cfg.quad_config())?;
            report["numeric"] = json!(est.value());
            report["estimate"] = json!(est);
            if let Some(c) = closed {
                report["discrepancy"] = json!((c - est.value()).abs());
            }
            if let Some(path) = ladder {
                std::fs::write(path, est.ladder_csv()).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            }
        }
        Mode::Coeff => {
            let derivative = match &t {
                Target::Entry(e) => match &e.function {
                    imslab::catalog::EntryFunction::Derivative(d) => d.clone(),
                    _ => rational_only(&t)?.derivative()?,
                },
                Target::Inline(r) => r.derivative()?,
            };
            let g = coefficient_growth_spectrum(&derivative, tau, n)?;
            report["coefficient"] = json!(g.beta);
            report["growth"] = json!(g);
        }
        Mode::Closed => {}
    }
    Ok((report, true))
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Closed => "closed",
        Mode::Numeric => "numeric",
        Mode::Both => "both",
        Mode::Coeff => "coeff",
    }
}

fn cmd_norms(ctx: &Context, f: &FunctionArg) -> Outcome {
    let t = ctx.target(f)?;
    let grid = ctx.cfg.norm_grid();
    let (s, n) = match t.rational() {
        Some(r) => (
            weighted_sup_norm(&schwarzian(r)?, 2, &grid)?,
            weighted_sup_norm(&pre_schwarzian(r)?, 1, &grid)?,
        ),
        None => {
            let d = ctx.derivative(&t)?;
            (schwarzian_norm(&*d, &grid), pre_schwarzian_norm(&*d, &grid))
        }
    };
    Ok((
        json!({"function": t.name(), "schwarzian": s, "pre_schwarzian": n}),
        true,
    ))
}

fn cmd_multiplier(ctx: &Context, f: &FunctionArg, alpha: f64) -> Outcome {
    let t = ctx.target(f)?;
    let s = schwarzian(rational_only(&t)?)?;
    let w = multiplier_lower_bound(&s, alpha, &ctx.cfg.multiplier_grid())?;
    let target = koebe_target(alpha);
    Ok((
        json!({
            "function": t.name(),
            "alpha": alpha,
            "lower_bound": w.ratio,
            "witness": w,
            "koebe_target": target,
            "ratio_to_target": w.ratio / target,
        }),
        true,
    ))
}

fn cmd_shimorin(ctx: &Context, f: &FunctionArg, alphas: &str, tol: f64) -> Outcome {
    let alphas = parse_list(alphas).map_err(Failure::parse)?;
    let t = ctx.target(f)?;
    let s = schwarzian(rational_only(&t)?)?;
    let rep = shimorin_report(&s, &alphas, &ctx.cfg.multiplier_grid(), tol)?;
    Ok((
        json!({
            "function": t.name(),
            "rows": rep,
            "tol": tol,
            "verdict": rep.verdict(),
            "note": ShimorinReport::NOTE,
        }),
        true,
    ))
}

fn cmd_catalog_list(ctx: &Context) -> Outcome {
    let entries: Vec<Value> = ctx
        .catalog
        .entries()
        .iter()
        .map(|e| json!({"name": e.name, "aliases": e.aliases, "kind": e.kind(), "expected": e.expected}))
        .collect();
    Ok((json!(entries), true))
}

fn run(cli: &Cli) -> Result<(Value, bool, OutputFormat), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f.into();
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    cfg.validate()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::parse(e.to_string()))?;
    }
    let catalog = match &cli.catalog {
        Some(p) => Catalog::with_extension(p)?,
        None => Catalog::builtin(),
    };
    let ctx = Context { cfg, catalog };
    let (report, ok) = match &cli.command {
        Command::Classify(f) => cmd_classify(&ctx, f),
        Command::Spectrum { function, tau, mode, ladder, coefficients } => {
            cmd_spectrum(&ctx, function, tau, *mode, ladder.as_ref(), *coefficients)
        }
        Command::Norms(f) => cmd_norms(&ctx, f),
        Command::Multiplier { function, alpha } => cmd_multiplier(&ctx, function, *alpha),
        Command::Shimorin { function, alphas, tol } => cmd_shimorin(&ctx, function, alphas, *tol),
        Command::Verify { suite } => {
            let rep = run_suite(*suite, &ctx.cfg);
            let passed = rep.passed;
            Ok((json!(rep), passed))
        }
        Command::CatalogList => cmd_catalog_list(&ctx),
    }?;
    Ok((report, ok, ctx.cfg.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, ok, format)) => {
            let text = render::render(&report, format);
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
