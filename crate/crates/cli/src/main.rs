use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_wronskian::asymptotics::{self, AsymptoticConstants, DEFAULT_THETAS};
use jacobi_wronskian::integrals::{partial_integral_jacobi_closed, partial_integral_quadrature, IntegralResult};
use jacobi_wronskian::polyeval::{eval_jacobi, eval_jacobi_derivative, wronskian};
use jacobi_wronskian::quadrature::DEFAULT_TOL;
use jacobi_wronskian::JacobiParams;
use jacobi_wronskian_cli::format::g17;
use jacobi_wronskian_cli::study::{run_study, OutputFormat, StudyConfig};
use jacobi_wronskian_cli::verify::{run_all, VerifyOptions};
use jacobi_wronskian_cli::{exit_code, with_pool};

#[derive(Parser)]
#[command(name = "jacobi-wronskian", version, about = "Partial integrals of Jacobi polynomial products and their large-n asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate P_n(x), its derivative, or the Wronskian P_m P_n' - P_n P_m'.
    Eval(EvalArgs),
    /// Partial integral of P_n P_m w from x to 1.
    Integral(IntegralArgs),
    /// Leading-order large-n estimates at x = cos(theta).
    Asympt(AsymptArgs),
    /// Convergence study of the integral asymptotic over a geometric n-grid.
    Study(StudyArgs),
    /// Run the seeded invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Family {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
}

impl Family {
    fn params(&self) -> anyhow::Result<JacobiParams> {
        Ok(JacobiParams::new(self.alpha, self.beta)?)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Second degree, required with --wronskian.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, conflicts_with = "wronskian")]
    deriv: bool,
    #[arg(long)]
    wronskian: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegralMethod {
    Closed,
    Quad,
}

#[derive(Args)]
struct IntegralArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "closed")]
    method: IntegralMethod,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimate {
    Poly,
    Shifted,
    Integral,
}

#[derive(Args)]
struct AsymptArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long)]
    theta: f64,
    #[arg(long, value_enum, default_value = "integral")]
    kind: Estimate,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Comma-separated angles in (0, pi); defaults to 0.5,1,pi/2,2,2.6.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    n_min: usize,
    #[arg(long, default_value_t = 2000)]
    n_max: usize,
    #[arg(long, default_value_t = 24)]
    n_points: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reduced sweep with n <= 50.
    #[arg(long)]
    quick: bool,
    /// Perturb the recurrence's P_{k-2} coefficient by this relative amount.
    #[arg(long, value_name = "EPS", allow_hyphen_values = true)]
    inject_fault: Option<f64>,
}

fn key_values(pairs: &[(&str, String)], format: OutputFormat) -> anyhow::Result<String> {
    Ok(match format {
        OutputFormat::Csv => pairs.iter().map(|(k, v)| format!("{k} {v}\n")).collect(),
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = pairs
                .iter()
                .map(|(k, v)| {
                    let value = v
                        .parse::<f64>()
                        .ok()
                        .and_then(serde_json::Number::from_f64)
                        .map_or_else(|| serde_json::Value::String(v.clone()), serde_json::Value::Number);
                    (k.to_string(), value)
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&map)?)
        }
    })
}

fn cmd_eval(args: &EvalArgs) -> anyhow::Result<String> {
    let p = args.family.params()?;
    let value = if args.wronskian {
        let m = args.m.context("--wronskian requires --m")?;
        wronskian(p, args.n, m, args.x)?.value
    } else if args.deriv {
        eval_jacobi_derivative(p, args.n, args.x)?
    } else {
        eval_jacobi(p, args.n, args.x)?
    };
    Ok(format!("{}\n", g17(value)))
}

fn integral_fields(r: &IntegralResult) -> Vec<(&'static str, String)> {
    vec![
        ("value", g17(r.value)),
        ("method", r.method.as_str().to_string()),
        ("abs_error_estimate", g17(r.abs_error_estimate)),
        ("n", r.n.to_string()),
        ("m", r.m.to_string()),
        ("alpha", g17(r.params.alpha())),
        ("beta", g17(r.params.beta())),
        ("lower_limit", g17(r.lower_limit)),
    ]
}

fn cmd_integral(args: &IntegralArgs) -> anyhow::Result<String> {
    let p = args.family.params()?;
    let r = match args.method {
        IntegralMethod::Closed => partial_integral_jacobi_closed(p, args.n, args.m, args.x)?,
        IntegralMethod::Quad => partial_integral_quadrature(p, args.n, args.m, args.x, args.tol)?,
    };
    key_values(&integral_fields(&r), args.format)
}

fn cmd_asympt(args: &AsymptArgs) -> anyhow::Result<String> {
    let p = args.family.params()?;
    let (n, m, theta) = (args.n, args.m, args.theta);
    let (estimate, exact) = match args.kind {
        Estimate::Poly => (asymptotics::asymptotic_poly(p, n, theta)?, eval_jacobi(p, n, theta.cos())?),
        Estimate::Shifted => (
            asymptotics::asymptotic_shifted_poly(p, n, theta)?,
            eval_jacobi(p.raised(), n - 1, theta.cos())?,
        ),
        Estimate::Integral => (
            asymptotics::asymptotic_integral(p, n, m, theta)?,
            partial_integral_jacobi_closed(p, n, m, theta.cos())?.value,
        ),
    };
    let c = AsymptoticConstants::new(p, n, m, theta)?;
    let mut fields = vec![
        ("estimate", g17(estimate)),
        ("exact", g17(exact)),
        ("abs_err", g17((exact - estimate).abs())),
        ("big_n", g17(c.big_n)),
        ("gamma", g17(c.gamma)),
        ("k_theta", g17(c.k_theta)),
    ];
    if matches!(args.kind, Estimate::Integral) {
        fields.push(("ell_theta", g17(c.ell_theta)));
    }
    fields.push(("phase", g17(asymptotics::phase(p, n, theta))));
    key_values(&fields, args.format)
}

fn cmd_study(args: &StudyArgs) -> anyhow::Result<()> {
    let config = StudyConfig {
        alpha: args.alpha,
        beta: args.beta,
        m: args.m,
        thetas: if args.theta.is_empty() { DEFAULT_THETAS.to_vec() } else { args.theta.clone() },
        n_min: args.n_min,
        n_max: args.n_max,
        n_points: args.n_points,
        tol: args.tol,
        format: args.format,
        seed: args.seed,
    };
    let report = with_pool(|| run_study(&config))??;
    let text = report.render()?;
    match &args.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let opts = VerifyOptions { seed: args.seed, quick: args.quick, fault: args.inject_fault };
    if let Some(eps) = opts.fault {
        if !eps.is_finite() {
            bail!("--inject-fault must be finite");
        }
    }
    let reports = with_pool(|| run_all(&opts))?;
    let fault = opts.fault.map_or_else(|| "none".to_string(), g17);
    let mut out = format!(
        "verify seed={} mode={} fault={fault}\n",
        opts.seed,
        if opts.quick { "quick" } else { "full" }
    );
    for r in &reports {
        out.push_str(&r.render());
    }
    let ok = reports.iter().all(|r| r.passed());
    out.push_str(if ok { "all suites passed\n" } else { "some suites failed\n" });
    std::io::stdout().write_all(out.as_bytes())?;
    Ok(ok)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let printed = match &cli.command {
        Command::Eval(a) => cmd_eval(a)?,
        Command::Integral(a) => cmd_integral(a)?,
        Command::Asympt(a) => cmd_asympt(a)?,
        Command::Study(a) => {
            cmd_study(a)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Verify(a) => {
            return Ok(if cmd_verify(a)? { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    std::io::stdout().write_all(printed.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
