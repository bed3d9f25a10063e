use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toricfrob::classes::ClassGroup;
use toricfrob::cli::catalog::{catalog, standard_names};
use toricfrob::cli::fanfile::parse_fan;
use toricfrob::cli::report::{run_report, to_json, to_text, ReportOptions};
use toricfrob::cli::svg::plot_ns;
use toricfrob::fan::Fan;
use toricfrob::frobenius::{fsupp, pushforward_decomposition, signatures};
use toricfrob::mori::{blowdown_chain, extremal_contractions, mori_cone};
use toricfrob::Error;

#[derive(Parser)]
#[command(name = "toricfrob", version, about = "Frobenius splitting data of complete simplicial toric varieties")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check that the fan is complete and simplicial.
    Validate(Common),
    /// Everything: cones, Frobenius support, signatures, contractions, checks.
    Report {
        #[command(flatten)]
        common: Common,
        /// Record per-section wall time (makes output non-deterministic).
        #[arg(long)]
        timing: bool,
        /// Skip the cross-checks.
        #[arg(long)]
        no_checks: bool,
    },
    /// Frobenius support with densities and positivity flags.
    Fsupp(Common),
    /// Summands of F^e_* O(-D) for each e.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Torus-invariant divisor D as comma-separated coefficients (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        divisor: Option<Vec<i64>>,
    },
    /// Ample and nef F-signatures.
    Signatures(Common),
    /// Mori cone and extremal contractions.
    Mori(Common),
    /// Blow-down chain to a fan with Eff = Nef.
    Chain(Common),
    /// SVG diagram of the Néron–Severi plane (Picard rank two).
    Plot(Common),
    /// Catalog names.
    Catalog {
        /// Print every name (the default action).
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// JSON fan document.
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    fan: Option<PathBuf>,
    /// Built-in fan such as `hirzebruch(2)` or `fatal_example`.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, num_args = 1.., default_values_t = [1u32, 2, 3])]
    e: Vec<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
}

fn load(common: &Common) -> Result<(Fan, Vec<String>), Error> {
    match (&common.fan, &common.catalog) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            parse_fan(&text)
        }
        (None, Some(name)) => Ok((catalog(name)?, Vec::new())),
        (None, None) => Err(Error::Parse("one of --fan or --catalog is required".into())),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output values always serialize")
}

/// Writes to stdout, ending with a newline. A closed pipe (`| head`) is not an error.
fn write_stdout(body: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(body.as_bytes());
    if !body.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn emit(common: &Common, body: String) -> Result<(), Error> {
    match &common.out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Validation(format!("writing {}: {e}", path.display()))),
        None => {
            write_stdout(&body);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.verb {
        Verb::Catalog { format, .. } => {
            let names = standard_names();
            if format == Format::Text {
                write_stdout(&names.join("\n"));
            } else {
                write_stdout(&pretty(&names));
            }
            Ok(())
        }
        Verb::Validate(common) => {
            let (fan, warnings) = load(&common)?;
            let diag = fan.validate();
            let body = if common.format == Some(Format::Text) {
                let mut s = format!(
                    "simplicial {} complete {} smooth {}\n",
                    diag.simplicial, diag.complete, diag.smooth
                );
                for w in warnings.iter().chain(&diag.problems) {
                    s.push_str(&format!("  {w}\n"));
                }
                s
            } else {
                pretty(&json!({ "diagnostics": diag, "warnings": warnings }))
            };
            emit(&common, body)?;
            if diag.is_valid() {
                Ok(())
            } else {
                Err(Error::Validation(diag.problems.join("; ")))
            }
        }
        Verb::Report { common, timing, no_checks } => {
            let (fan, _) = load(&common)?;
            let options = ReportOptions { p: common.p, e_list: common.e.clone(), checks: !no_checks, timing };
            let report = run_report(&fan, &options)?;
            let body = match common.format {
                Some(Format::Text) => to_text(&report),
                _ => to_json(&report),
            };
            emit(&common, body)
        }
        Verb::Fsupp(common) => {
            let (fan, _) = load(&common)?;
            let cg = ClassGroup::new(&fan)?;
            let entries = fsupp(&fan, &cg)?;
            let body = if common.format == Some(Format::Text) {
                entries
                    .iter()
                    .map(|e| format!("{:?} alpha {} big {} nef {} ample {}\n", e.class, e.alpha, e.big, e.nef, e.ample))
                    .collect()
            } else {
                pretty(&entries)
            };
            emit(&common, body)
        }
        Verb::Decompose { common, divisor } => {
            let (fan, _) = load(&common)?;
            let cg = ClassGroup::new(&fan)?;
            let divisor = divisor.unwrap_or_else(|| vec![0; fan.num_rays()]);
            let mut blocks = Vec::new();
            for &e in &common.e {
                blocks.push((e, pushforward_decomposition(&fan, &cg, &divisor, common.p, e)?));
            }
            let body = if common.format == Some(Format::Text) {
                let mut s = String::new();
                for (e, dec) in &blocks {
                    s.push_str(&format!("p = {}, e = {e}\n", common.p));
                    for (c, m) in dec {
                        let torsion = if c.torsion.is_empty() { String::new() } else { format!(" + torsion {:?}", c.torsion) };
                        s.push_str(&format!("  E = {:?}{torsion}  x{m}\n", c.free));
                    }
                }
                s
            } else {
                let out: Vec<_> = blocks
                    .iter()
                    .map(|(e, dec)| {
                        let rows: Vec<_> = dec.iter().map(|(c, m)| json!({ "class": c, "multiplicity": m })).collect();
                        json!({ "p": common.p, "e": e, "summands": rows })
                    })
                    .collect();
                pretty(&out)
            };
            emit(&common, body)
        }
        Verb::Signatures(common) => {
            let (fan, _) = load(&common)?;
            let cg = ClassGroup::new(&fan)?;
            let sig = signatures(&fsupp(&fan, &cg)?);
            let body = if common.format == Some(Format::Text) {
                format!("a = {}\nn = {}\n", sig.a, sig.n)
            } else {
                pretty(&sig)
            };
            emit(&common, body)
        }
        Verb::Mori(common) => {
            let (fan, _) = load(&common)?;
            let mc = mori_cone(&fan)?;
            let contractions = extremal_contractions(&fan)?;
            let body = if common.format == Some(Format::Text) {
                contractions
                    .iter()
                    .map(|c| format!("{:?} {:?} inert {} fiber dim {}\n", c.kind, c.relation().coeffs, c.inert, c.fiber_dim))
                    .collect()
            } else {
                let rays: Vec<Vec<String>> = mc
                    .cone
                    .extreme_rays()?
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect())
                    .collect();
                pretty(&json!({ "relations": mc.relations, "mori_rays": rays, "contractions": contractions }))
            };
            emit(&common, body)
        }
        Verb::Chain(common) => {
            let (fan, _) = load(&common)?;
            let steps = blowdown_chain(&fan)?;
            let body = if common.format == Some(Format::Text) {
                steps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| format!("step {}: contract ray {} via {:?}, {} rays left\n", i + 1, s.ray, s.relation.coeffs, s.fan.num_rays()))
                    .collect()
            } else {
                pretty(&steps)
            };
            emit(&common, body)
        }
        Verb::Plot(common) => {
            let (fan, _) = load(&common)?;
            if matches!(common.format, Some(Format::Json | Format::Text)) {
                return Err(Error::Parse("plot only writes svg".into()));
            }
            emit(&common, plot_ns(&fan)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::UnknownName(_) => 2,
                Error::BudgetExceeded(..) => 3,
                _ => 1,
            })
        }
    }
}
