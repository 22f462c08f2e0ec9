//! Command-line surface for the syzygy-bundle calculator.
//!
//! Exit codes: 0 success, 1 usage/parse errors, 2 verdicts blocked on
//! undecidable facts, 3 contradictory input data, 4 internal assertion
//! failures.

mod expr;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use syzygy_core::error::{Error, Result};
use syzygy_core::moduli::moduli_report_for;
use syzygy_core::sheaf::{assert_global_generation, load_str, Resolver, SheafContext, VarietySpec};
use syzygy_core::syzygy::build_syzygy_with;
use syzygy_core::tower::{tower_run, TowerPolicy, WChoice};

use report::{
    render_describe, render_moduli, render_syzygy, render_tower, render_verify, BundleOut,
    DescribeReport, ModuliOut, SyzygyReport, TowerOut,
};

#[derive(Parser)]
#[command(
    name = "syzygy",
    version,
    about = "Exact calculator for generalized syzygy bundles: Chern classes, cohomology tables, \
             membership and embedding verdicts, moduli dimensions, and the recursive tower"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resolve and print the facts of a bundle expression.
    Describe {
        /// Catalog variety: P2, P3, P4, CY3-quintic.
        #[arg(long)]
        variety: Option<String>,
        /// Bundle expression, e.g. "syz(O(3),3)".
        #[arg(long)]
        bundle: String,
        /// JSON file with a custom variety and/or opaque bundles.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Record a global-generation assertion for the expression.
        #[arg(long)]
        assert_gg: Option<bool>,
    },
    /// Build the syzygy bundle for (F, w) and print all verdicts.
    Syzygy {
        #[arg(long)]
        variety: Option<String>,
        #[arg(long)]
        bundle: String,
        #[arg(short, long)]
        w: usize,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dimension report for the moduli spaces attached to (F, w).
    Moduli {
        #[arg(long)]
        variety: Option<String>,
        #[arg(long)]
        bundle: String,
        #[arg(short, long)]
        w: usize,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the recursive tower construction.
    Tower {
        #[arg(long)]
        variety: Option<String>,
        /// Starting bundle expression.
        #[arg(long)]
        start: String,
        /// Section-space policy: "full", "max-grassmann", or a fixed number.
        #[arg(long, default_value = "full")]
        policy: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Demand the open-embedding conditions at every step.
        #[arg(long, default_value_t = false)]
        require_v: bool,
        /// Upward twist scan bound.
        #[arg(long, default_value_t = 50)]
        scan_cap: i64,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recompute the built-in worked-example values and compare.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn make_context(variety: &Option<String>, input: &Option<PathBuf>) -> Result<SheafContext> {
    let base = variety
        .as_deref()
        .map(VarietySpec::catalog)
        .transpose()?;
    match input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            load_str(&text, base)
        }
        None => {
            let variety = base.ok_or_else(|| {
                Error::InvalidInput("pass --variety or --input to select the ambient".into())
            })?;
            SheafContext::new(variety)
        }
    }
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: String) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{text}"),
    }
    Ok(())
}

fn parse_policy(s: &str) -> Result<WChoice> {
    match s {
        "full" => Ok(WChoice::Full),
        "max-grassmann" => Ok(WChoice::MaxGrassmann),
        other => other
            .parse::<usize>()
            .map(WChoice::Fixed)
            .map_err(|_| Error::Parse(format!("policy must be full, max-grassmann, or a number; got `{other}`"))),
    }
}

/// Returns the process exit code for success paths (blocked verdicts exit 2).
fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Describe {
            variety,
            bundle,
            input,
            format,
            assert_gg,
        } => {
            let ctx = make_context(&variety, &input)?;
            let e = expr::parse_expr(&bundle)?;
            let mut facts = syzygy_core::sheaf::resolve_facts(&e, &ctx)?;
            assert_global_generation(&mut facts, assert_gg)?;
            let report = DescribeReport {
                command: "describe",
                variety: ctx.variety.name.clone(),
                bundle: BundleOut::from_facts(&facts),
            };
            emit(format, &report, render_describe(&report))?;
            Ok(0)
        }
        Cmd::Syzygy {
            variety,
            bundle,
            w,
            input,
            format,
        } => {
            let ctx = make_context(&variety, &input)?;
            let e = expr::parse_expr(&bundle)?;
            let mut resolver = Resolver::new(&ctx);
            let result = build_syzygy_with(&mut resolver, &e, w)?;
            let report = SyzygyReport::from_result(&ctx.variety.name, &result);
            emit(format, &report, render_syzygy(&report))?;
            if result.blocked() {
                eprintln!(
                    "verdict blocked: membership in U is undetermined; supply the missing facts \
                     (assertions or tables) to decide"
                );
                return Ok(2);
            }
            Ok(0)
        }
        Cmd::Moduli {
            variety,
            bundle,
            w,
            input,
            format,
        } => {
            let ctx = make_context(&variety, &input)?;
            let e = expr::parse_expr(&bundle)?;
            let mut resolver = Resolver::new(&ctx);
            let result = build_syzygy_with(&mut resolver, &e, w)?;
            let moduli = moduli_report_for(&mut resolver, &result)?;
            let report = ModuliOut {
                command: "moduli",
                variety: ctx.variety.name.clone(),
                bundle: e.normalize().to_string(),
                report: moduli,
                membership: result.membership.clone(),
                embedding: result.embedding,
            };
            emit(format, &report, render_moduli(&report))?;
            if result.blocked() {
                eprintln!("verdict blocked: membership in U is undetermined");
                return Ok(2);
            }
            Ok(0)
        }
        Cmd::Tower {
            variety,
            start,
            policy,
            steps,
            require_v,
            scan_cap,
            input,
            format,
        } => {
            let ctx = make_context(&variety, &input)?;
            let e = expr::parse_expr(&start)?;
            let mut pol = TowerPolicy::new(parse_policy(&policy)?, steps).require_v(require_v);
            pol.twist_scan_cap = scan_cap;
            let run = tower_run(&e, pol, &ctx)?;
            let blocked = run.halt.as_ref().map(|h| h.blocked).unwrap_or(false);
            let report = TowerOut {
                command: "tower",
                variety: ctx.variety.name.clone(),
                start: e.normalize().to_string(),
                run,
            };
            emit(format, &report, render_tower(&report))?;
            if blocked {
                eprintln!("tower blocked on undecidable facts; see the halt reason");
                return Ok(2);
            }
            Ok(0)
        }
        Cmd::VerifyPaper { format } => {
            let report = verify::verify_paper()?;
            emit(format, &report, render_verify(&report))?;
            if report.all_pass {
                Ok(0)
            } else {
                eprintln!(
                    "{} checks failed",
                    report.rows.iter().filter(|r| !r.pass).count()
                );
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
