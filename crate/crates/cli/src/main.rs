use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcorr::channels::evolve_params;
use qcorr::dynamics::transitions;
use qcorr::measures::{discord_bd, discord_filtered, one_norm_gqd_bd, one_norm_gqd_filtered};
use qcorr::scenario::{render_transitions, run_sweep, Scenario};
use qcorr::states::order_correlations;
use qcorr::verify::{run_verify, VerifyCounts};
use qcorr::ChannelKind;

const EXIT_VALIDATION: u8 = 1;
const EXIT_VERIFY: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Discord and one-norm geometric discord under flip channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep p over [0, 1]; CSV to --out or stdout, report to stderr.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario's grid size.
        #[arg(long)]
        grid: Option<usize>,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the oracle-equivalence suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per suite; the defaults follow the acceptance counts.
        #[arg(long)]
        counts: Option<usize>,
    },
    /// Print the analytic transition report.
    Transitions {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate every measure at a single p.
    Measure {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        p: f64,
    },
}

fn load(path: &PathBuf) -> Result<Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Scenario::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn sweep_cmd(config: &PathBuf, out: Option<&PathBuf>, grid: Option<usize>, seed: Option<u64>) -> Result<(), String> {
    let mut scenario = load(config)?;
    if let Some(g) = grid {
        scenario.grid = g;
    }
    if let Some(s) = seed {
        scenario.seed = s;
    }
    let output = run_sweep(&scenario).map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, &output.csv).map_err(|e| format!("{}: {e}", path.display()))?,
        None => std::io::stdout()
            .write_all(output.csv.as_bytes())
            .map_err(|e| e.to_string())?,
    }
    eprint!("{}", output.report);
    Ok(())
}

fn transitions_cmd(config: &PathBuf) -> Result<(), String> {
    let scenario = load(config)?;
    let params = scenario.params().map_err(|e| e.to_string())?;
    let filter = scenario.filter().map_err(|e| e.to_string())?;
    let t = transitions(scenario.channel, &params, filter.as_ref());
    eprint!("{}", render_transitions(&scenario, &params, &t));
    Ok(())
}

fn measure_cmd(config: &PathBuf, p: f64) -> Result<(), String> {
    let scenario = load(config)?;
    let params = scenario.params().map_err(|e| e.to_string())?;
    let filter = scenario.filter().map_err(|e| e.to_string())?;
    let framed = params.permuted(scenario.channel.phase_flip_frame());
    let evolved = evolve_params(ChannelKind::PhaseFlip, p, &framed).map_err(|e| e.to_string())?;
    let q = discord_bd(&evolved);
    let g = one_norm_gqd_bd(&evolved);
    let mut out = format!(
        "p={p}\nI={:.16e}\nC={:.16e}\nQD={:.16e}\nGQD1={:.16e}\n",
        q.mutual_information, q.classical_correlation, q.discord, g.value
    );
    if let Some(f) = filter {
        let qk = discord_filtered(&f, &evolved);
        let gk = one_norm_gqd_filtered(&f, &order_correlations(&evolved));
        out.push_str(&format!(
            "I_k={:.16e}\nC_k={:.16e}\nQD_k={:.16e}\nGQD1_k={:.16e}\n",
            qk.mutual_information, qk.classical_correlation, qk.discord, gk.value
        ));
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Sweep {
            config,
            out,
            grid,
            seed,
        } => sweep_cmd(config, out.as_ref(), *grid, *seed),
        Command::Transitions { config } => transitions_cmd(config),
        Command::Measure { config, p } => measure_cmd(config, *p),
        Command::Verify { seed, counts } => {
            let counts = counts.map_or_else(VerifyCounts::default, VerifyCounts::uniform);
            let report = run_verify(*seed, &counts);
            eprintln!("{report}");
            return if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
