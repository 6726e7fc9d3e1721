//! Command-line interface: analyze, bound, probe, sweep, product, power,
//! convert, milnor, diagram.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 hypotheses undecided and
//! not assumed (the conditional result is still printed), 4 guard
//! exceeded.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use loja::bounds::{
    bound_general_with, bound_product, eta_theta_convert, milnor_number, Assumptions,
    BoundStatus, ConvertDirection, ProductFamily,
};
use loja::config::Config;
use loja::curve::{probe_with, Curve};
use loja::poly::{parse_polynomial, Polynomial};
use loja::rational::{format_rational, parse_rational};
use loja::report::{
    analyze, bound_report_json, emit_diagram_json, emit_diagram_svg, probe_result_json,
    AnalysisOptions,
};
use loja::sweep::sweep_monomial_curves_with;
use loja::LojaError;

#[derive(Parser)]
#[command(name = "loja", version, about = "Newton-boundary bounds for the gradient Lojasiewicz exponent")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the maximum ambient dimension guard.
    #[arg(long, global = true)]
    max_n: Option<usize>,

    /// Override the maximum support size guard.
    #[arg(long, global = true)]
    max_support: Option<usize>,

    /// Override the probe truncation bound.
    #[arg(long, global = true)]
    truncation: Option<u64>,

    /// Override the numeric zero tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Args, Clone, Copy, Default)]
struct AssumeFlags {
    /// Assume non-degeneracy where it cannot be certified.
    #[arg(long = "assume-nondegenerate")]
    nondegenerate: bool,

    /// Assume inv-tameness where it cannot be certified.
    #[arg(long = "assume-inv-tame")]
    inv_tame: bool,

    /// Assume complete-intersection non-degeneracy of a product family.
    #[arg(long = "assume-ci-nondegenerate")]
    ci_nondegenerate: bool,
}

impl From<AssumeFlags> for Assumptions {
    fn from(f: AssumeFlags) -> Assumptions {
        Assumptions {
            nondegenerate: f.nondegenerate,
            inv_tame: f.inv_tame,
            ci_nondegenerate: f.ci_nondegenerate,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report for one polynomial.
    Analyze {
        file: String,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<String>,
        #[command(flatten)]
        assume: AssumeFlags,
        /// Also run the monomial-curve sweep with this exponent budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Coefficient samples per sweep tuple.
        #[arg(long, default_value_t = 8)]
        samples: u32,
    },
    /// Upper bound for theta0; with --refine also a probe lower bound.
    Bound {
        file: String,
        /// Use the sharpened per-cell contributions and probe for a witness.
        #[arg(long)]
        refine: bool,
        #[command(flatten)]
        assume: AssumeFlags,
        /// Sweep exponent budget for the witness search.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 8)]
        samples: u32,
    },
    /// Orders of f and its gradient along a curve.
    Probe {
        file: String,
        #[arg(long)]
        curve: String,
    },
    /// Search monomial curves for the best ratio witness.
    Sweep {
        file: String,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        samples: u32,
    },
    /// Axis bound for a product of convenient polynomials.
    Product {
        files: Vec<String>,
        /// Comma-separated multiplicities, one per file.
        #[arg(long)]
        mult: Option<String>,
        #[command(flatten)]
        assume: AssumeFlags,
    },
    /// Axis bound for the m-th power of a convenient polynomial.
    Power {
        file: String,
        #[arg(short)]
        m: u32,
        #[command(flatten)]
        assume: AssumeFlags,
    },
    /// Convert between the two exponent conventions.
    Convert {
        /// Distance-type exponent eta0 to convert into theta0.
        #[arg(long)]
        eta: Option<String>,
        /// Gradient-type exponent theta0 to convert into eta0.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Newton-number Milnor cross-check (n <= 3).
    Milnor { file: String },
    /// Weight-cone section picture (SVG needs n = 3).
    Diagram {
        file: String,
        #[arg(long, default_value = "svg")]
        format: String,
        #[arg(short, long)]
        output: Option<String>,
    },
}

fn load_polynomial(path: &str) -> Result<Polynomial, LojaError> {
    let text = fs::read_to_string(path)
        .map_err(|e| LojaError::Io(format!("cannot read {path}: {e}")))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| LojaError::Io(format!("invalid JSON in {path}: {e}")))?;
        Polynomial::from_json(&value)
    } else {
        parse_polynomial(text.trim(), None)
    }
}

fn load_curve(path: &str) -> Result<Curve, LojaError> {
    let text = fs::read_to_string(path)
        .map_err(|e| LojaError::Io(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| LojaError::Io(format!("invalid JSON in {path}: {e}")))?;
    Curve::from_json(&value)
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), LojaError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| LojaError::Io(format!("cannot write {p}: {e}"))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn weight_label(weight: &[u64]) -> String {
    let parts: Vec<String> = weight.iter().map(|w| w.to_string()).collect();
    format!("({})", parts.join(","))
}

fn run(cli: Cli) -> Result<BoundStatus, LojaError> {
    let mut cfg = Config::from_env()?;
    if let Some(v) = cli.max_n {
        cfg.max_n = v;
    }
    if let Some(v) = cli.max_support {
        cfg.max_support = v;
    }
    if let Some(v) = cli.truncation {
        cfg.truncation = Some(v);
    }
    if let Some(v) = cli.tolerance {
        cfg.tolerance = v;
    }
    let mut status = BoundStatus::Certified;

    match cli.command {
        Command::Analyze {
            file,
            json,
            assume,
            budget,
            samples,
        } => {
            let f = load_polynomial(&file)?;
            let sweep = budget.map(|b| (b, samples));
            let options = AnalysisOptions {
                assume: assume.into(),
                sweep,
                config: cfg,
            };
            let analysis = analyze(&f, &options)?;
            println!("input: {}", f.to_text());
            println!(
                "bound (general): {}  [{}]",
                format_rational(&analysis.general.bound),
                analysis.general.status.as_str()
            );
            println!(
                "bound (refined): {}  [{}]",
                format_rational(&analysis.refined.bound),
                analysis.refined.status.as_str()
            );
            if let Some(c) = &analysis.convenient {
                println!(
                    "bound (convenient): {}  [{}]",
                    format_rational(&c.bound),
                    c.status.as_str()
                );
            }
            if let Some(s) = &analysis.sweep {
                println!(
                    "probe: theta >= {} at weight {}",
                    format_rational(&s.result.theta),
                    weight_label(&s.weight)
                );
            }
            if let Some(path) = json {
                let body = serde_json::to_string_pretty(&analysis.json)
                    .map_err(|e| LojaError::Io(e.to_string()))?;
                fs::write(&path, body)
                    .map_err(|e| LojaError::Io(format!("cannot write {path}: {e}")))?;
            }
            status = analysis.general.status.min_with(analysis.refined.status);
        }
        Command::Bound {
            file,
            refine,
            assume,
            budget,
            samples,
        } => {
            let f = load_polynomial(&file)?;
            let assume: Assumptions = assume.into();
            if refine {
                let report = loja::bounds::refine_bound_with(&f, &assume, &cfg)?;
                let budget = match budget {
                    Some(b) => b,
                    None => loja::sweep::suggested_budget(&f, &cfg)?,
                };
                let sweep = sweep_monomial_curves_with(&f, budget, samples, &cfg)?;
                match &sweep {
                    Some(s) => println!(
                        "theta0 in [{}, {}] (refined; probe witness weight {})",
                        format_rational(&s.result.theta),
                        format_rational(&report.bound),
                        weight_label(&s.weight)
                    ),
                    None => println!(
                        "theta0 in [?, {}] (refined; no probe witness found)",
                        format_rational(&report.bound)
                    ),
                }
                status = report.status;
            } else {
                let report = bound_general_with(&f, &assume, &cfg)?;
                println!(
                    "theta0 <= {} (general: theta~ = {}, region max = {})",
                    format_rational(&report.bound),
                    report
                        .theta_tilde
                        .as_ref()
                        .map(format_rational)
                        .unwrap_or_else(|| "-".into()),
                    report
                        .region_max
                        .as_ref()
                        .map(format_rational)
                        .unwrap_or_else(|| "-".into()),
                );
                status = report.status;
            }
        }
        Command::Probe { file, curve } => {
            let f = load_polynomial(&file)?;
            let c = load_curve(&curve)?;
            let r = probe_with(&f, &c, &cfg)?;
            println!(
                "ord f = {}, ord grad = {}, theta = {}",
                format_rational(&r.ord_f),
                format_rational(&r.ord_grad),
                format_rational(&r.theta)
            );
            println!(
                "{}",
                serde_json::to_string(&probe_result_json(&r))
                    .map_err(|e| LojaError::Io(e.to_string()))?
            );
        }
        Command::Sweep {
            file,
            budget,
            samples,
        } => {
            let f = load_polynomial(&file)?;
            match sweep_monomial_curves_with(&f, budget, samples, &cfg)? {
                Some(s) => {
                    println!(
                        "theta >= {} at weight {}",
                        format_rational(&s.result.theta),
                        weight_label(&s.weight)
                    );
                    println!(
                        "{}",
                        serde_json::to_string(&s.witness.to_json())
                            .map_err(|e| LojaError::Io(e.to_string()))?
                    );
                }
                None => println!("no admissible monomial curve found"),
            }
        }
        Command::Product { files, mult, assume } => {
            if files.is_empty() {
                return Err(LojaError::Domain("product needs at least one file".into()));
            }
            let members = files
                .iter()
                .map(|p| load_polynomial(p))
                .collect::<Result<Vec<_>, _>>()?;
            let multiplicities = match mult {
                None => vec![1u32; members.len()],
                Some(s) => s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<u32>()
                            .map_err(|_| LojaError::Domain(format!("bad multiplicity {x:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let family = ProductFamily::new(members, multiplicities)?;
            let report = bound_product(&family, &assume.into())?;
            println!(
                "theta0 <= {} (axis sum B = {})",
                format_rational(&report.bound),
                report
                    .axis_bound
                    .as_ref()
                    .map(|b| b.to_string())
                    .unwrap_or_default()
            );
            match &report.equality_certificate {
                Some(c) => println!(
                    "equality witness: axis z{}, curve z{} = t with t^{} padding",
                    c.axis, c.axis, c.padding_exponent
                ),
                None => println!("no equality witness (bound may not be attained)"),
            }
            println!(
                "{}",
                serde_json::to_string(&bound_report_json(&report))
                    .map_err(|e| LojaError::Io(e.to_string()))?
            );
            status = report.status;
        }
        Command::Power { file, m, assume } => {
            let f = load_polynomial(&file)?;
            let family = ProductFamily::new(vec![f], vec![m])?;
            let report = bound_product(&family, &assume.into())?;
            println!(
                "theta0(f^{m}) <= {} (axis sum B = {})",
                format_rational(&report.bound),
                report
                    .axis_bound
                    .as_ref()
                    .map(|b| b.to_string())
                    .unwrap_or_default()
            );
            status = report.status;
        }
        Command::Convert { eta, theta } => match (eta, theta) {
            (Some(e), None) => {
                let v = parse_rational(&e)?;
                let t = eta_theta_convert(&v, ConvertDirection::EtaToTheta)?;
                println!("theta0 = {}", format_rational(&t));
            }
            (None, Some(t)) => {
                let v = parse_rational(&t)?;
                let e = eta_theta_convert(&v, ConvertDirection::ThetaToEta)?;
                println!("eta0 = {}", format_rational(&e));
            }
            _ => {
                return Err(LojaError::Domain(
                    "pass exactly one of --eta or --theta".into(),
                ))
            }
        },
        Command::Milnor { file } => {
            let f = load_polynomial(&file)?;
            println!("{}", milnor_number(&f)?);
        }
        Command::Diagram {
            file,
            format,
            output,
        } => {
            let f = load_polynomial(&file)?;
            match format.as_str() {
                "svg" => {
                    let svg = emit_diagram_svg(&f, &cfg)?;
                    write_output(output.as_deref(), &svg)?;
                }
                "json" => {
                    let v = emit_diagram_json(&f, &cfg)?;
                    let body = serde_json::to_string_pretty(&v)
                        .map_err(|e| LojaError::Io(e.to_string()))?;
                    write_output(output.as_deref(), &body)?;
                }
                other => {
                    return Err(LojaError::Domain(format!(
                        "unknown diagram format {other:?} (svg or json)"
                    )))
                }
            }
        }
    }
    Ok(status)
}

trait StatusMin {
    fn min_with(self, other: BoundStatus) -> BoundStatus;
}

impl StatusMin for BoundStatus {
    fn min_with(self, other: BoundStatus) -> BoundStatus {
        if self == BoundStatus::Conditional || other == BoundStatus::Conditional {
            BoundStatus::Conditional
        } else {
            BoundStatus::Certified
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(BoundStatus::Certified) => ExitCode::from(0),
        Ok(BoundStatus::Conditional) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                LojaError::GuardExceeded(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
