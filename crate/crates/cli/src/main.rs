use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use exacthom::exactalg::ExactError;
use exacthom_cli::scenarios::{run_scenario, Params, ScenarioError};
use exacthom_cli::table::Format;
use exacthom_cli::{exit_codes, parse_presentation};

#[derive(Parser)]
#[command(
    name = "exacthom",
    about = "Exact computational homological algebra over Q and Q[x]",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification scenario and print its result table.
    Verify {
        /// Scenario name (see `exacthom list`).
        scenario: String,
        /// Family parameter n.
        #[arg(long)]
        n: Option<u32>,
        /// Homological degree window, written a:b.
        #[arg(long)]
        window: Option<String>,
        /// Truncation order in the degree −2 direction.
        #[arg(long)]
        u_order: Option<usize>,
        /// Weight (or word-length) bound.
        #[arg(long)]
        weight_bound: Option<i64>,
        /// Tensor levels for the homotopy scenario.
        #[arg(long)]
        length: Option<usize>,
        /// Output format.
        #[arg(long, default_value = "text")]
        format: String,
        /// Degrees kept away from untrusted window edges.
        #[arg(long)]
        trust_margin: Option<i64>,
        /// Sparse-elimination nonzero cap (overrides EXACTHOM_MAX_NONZEROS).
        #[arg(long)]
        limit_nonzeros: Option<usize>,
        /// Seed for randomized property scenarios.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and validate a presentation file, printing a summary.
    Parse {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// List the known scenarios.
    List,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window '{}' is not of the form a:b", s))?;
    let a: i64 = a.parse().map_err(|_| format!("'{}' is not an integer", a))?;
    let b: i64 = b.parse().map_err(|_| format!("'{}' is not an integer", b))?;
    if a > b {
        return Err(format!("window {}:{} is empty", a, b));
    }
    Ok((a, b))
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(exit_codes::USAGE as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::List => {
            for s in exacthom_cli::SCENARIOS {
                println!("{}", s);
            }
            ExitCode::from(exit_codes::PASS as u8)
        }
        Cmd::Parse { file, format } => {
            let format: Format = match format.parse() {
                Ok(f) => f,
                Err(e) => return usage_error(&e),
            };
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return usage_error(&format!("cannot read {}: {}", file.display(), e)),
            };
            match parse_presentation(&text) {
                Ok(p) => {
                    print!("{}", summarize(&p, format));
                    ExitCode::from(exit_codes::PASS as u8)
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        Cmd::Verify {
            scenario,
            n,
            window,
            u_order,
            weight_bound,
            length,
            format,
            trust_margin,
            limit_nonzeros,
            seed,
        } => {
            let format: Format = match format.parse() {
                Ok(f) => f,
                Err(e) => return usage_error(&e),
            };
            let mut params = Params::default();
            if let Ok(cap) = std::env::var("EXACTHOM_MAX_NONZEROS") {
                match cap.parse() {
                    Ok(v) => params.limit_nonzeros = v,
                    Err(_) => {
                        return usage_error(&format!(
                            "EXACTHOM_MAX_NONZEROS '{}' is not an integer",
                            cap
                        ))
                    }
                }
            }
            if let Some(v) = n {
                params.n = v;
            }
            if let Some(s) = &window {
                match parse_window(s) {
                    Ok(w) => params.window = Some(w),
                    Err(e) => return usage_error(&e),
                }
            }
            if let Some(v) = u_order {
                params.u_order = v;
            }
            if let Some(v) = weight_bound {
                params.weight_bound = v;
            }
            if let Some(v) = length {
                params.length = v;
            }
            if let Some(v) = trust_margin {
                params.trust_margin = v;
            }
            if let Some(v) = limit_nonzeros {
                params.limit_nonzeros = v;
            }
            if let Some(v) = seed {
                params.seed = v;
            }

            match run_scenario(&scenario, &params) {
                Ok(table) => {
                    for w in &table.warnings {
                        eprintln!("warning: {}", w);
                    }
                    print!("{}", table.emit(format));
                    if table.pass {
                        ExitCode::from(exit_codes::PASS as u8)
                    } else {
                        ExitCode::from(exit_codes::MISMATCH as u8)
                    }
                }
                Err(ScenarioError::Usage(m)) => usage_error(&m),
                Err(ScenarioError::Exact(ExactError::ResourceLimit { nonzeros, limit })) => {
                    eprintln!(
                        "error: resource limit exceeded ({} nonzeros, limit {})",
                        nonzeros, limit
                    );
                    ExitCode::from(exit_codes::RESOURCE as u8)
                }
                Err(ScenarioError::Exact(e)) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(exit_codes::MISMATCH as u8)
                }
            }
        }
    }
}

fn summarize(p: &exacthom::dgcore::DgPresentation, format: Format) -> String {
    use exacthom::exactalg::RingTag;
    let base = match p.base {
        RingTag::Q => "Q",
        RingTag::Qx => "Q[x]",
    };
    let kind = match p.kind {
        exacthom::dgcore::MulKind::GradedCommutative => "commutative",
        exacthom::dgcore::MulKind::FreeAssociative => "associative",
    };
    match format {
        Format::Json => {
            let gens: Vec<serde_json::Value> = p
                .gens
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    serde_json::json!({
                        "name": g.name,
                        "degree": g.degree,
                        "weight": g.weight,
                        "nilpotent_power": p.nilpotency.get(&i),
                        "differential": p.diff[i].display(p).to_string(),
                    })
                })
                .collect();
            let v = serde_json::json!({
                "schema_version": exacthom_cli::SCHEMA_VERSION,
                "base": base,
                "kind": kind,
                "generators": gens,
                "curvature": p.curvature.display(p).to_string(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("summary serializes"))
        }
        _ => {
            let mut out = format!("base {}\nkind {}\n", base, kind);
            for (i, g) in p.gens.iter().enumerate() {
                out.push_str(&format!(
                    "generator {} degree {} weight {}\n",
                    g.name, g.degree, g.weight
                ));
                if let Some(k) = p.nilpotency.get(&i) {
                    out.push_str(&format!("relation {}^{} = 0\n", g.name, k));
                }
                if !p.diff[i].is_zero() {
                    out.push_str(&format!("d {} = {}\n", g.name, p.diff[i].display(p)));
                }
            }
            if !p.curvature.is_zero() {
                out.push_str(&format!("curvature = {}\n", p.curvature.display(p)));
            }
            out
        }
    }
}
