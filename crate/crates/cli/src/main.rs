use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use foliate_core::holonomy::{analyze_group, simulate_pseudo_orbit};
use foliate_core::{parse_group_request, parse_orbit_request, parse_request, run_pipeline, OutputFormat};

#[derive(Parser)]
#[command(name = "foliate", version, about = "Exact analysis of singular foliation germs in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve, classify and decide the stability dichotomy for a germ.
    Analyze {
        /// Request file, or `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        jet_order: Option<u32>,
        #[arg(long)]
        max_blowups: Option<usize>,
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Classify the group generated by germs of diffeomorphisms.
    Group {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        word_budget: Option<usize>,
    },
    /// Explore a pseudo-orbit numerically.
    Orbit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        u_radius: Option<f64>,
        #[arg(long)]
        v_radius: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>, String> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, String> {
    match cli.command {
        Command::Analyze {
            input,
            jet_order,
            max_blowups,
            degree_bound,
            format,
        } => {
            let mut req = parse_request(&read_input(&input)?).map_err(|e| e.to_string())?;
            if let Some(n) = jet_order {
                req.options.jet_order = n.max(1);
            }
            if let Some(n) = max_blowups {
                req.options.max_blowups = n;
            }
            if let Some(n) = degree_bound {
                req.options.degree_bound = n;
            }
            let format = format.unwrap_or(req.format);
            let report = run_pipeline(&req).map_err(|e| e.to_string())?;
            Ok(report.emit(format))
        }
        Command::Group { input, word_budget } => {
            let req = parse_group_request(&read_input(&input)?).map_err(|e| e.to_string())?;
            let budget = word_budget.unwrap_or(req.word_budget);
            Ok(json(&analyze_group(&req.generators, req.jet_order, budget)))
        }
        Command::Orbit {
            input,
            u_radius,
            v_radius,
            steps,
        } => {
            let mut req = parse_orbit_request(&read_input(&input)?).map_err(|e| e.to_string())?;
            req.u_radius = u_radius.or(req.u_radius);
            req.v_radius = v_radius.or(req.v_radius);
            req.steps = steps.or(req.steps);
            let (gens, params) = req.into_parts();
            let out = simulate_pseudo_orbit(&gens, &params).map_err(|e| e.to_string())?;
            Ok(json(&out))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
