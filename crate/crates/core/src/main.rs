use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qubobs::protocols::{bb84_run, teleport_classical, teleport_full, Bb84Params};
use qubobs::scenario::{run_scenario, run_session, write_output, Artifact, RunOutput, ScenarioError};
use qubobs::{render_svg, render_text, Layout, RenderSpec};

#[derive(Parser)]
#[command(name = "qubobs", version, about = "Slice-disk qubit simulator with an exact audit track")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for transcript.txt, audit.txt and renders.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario script.
    Run { file: PathBuf },
    /// Run BB84 key distribution.
    Bb84 {
        #[arg(long, default_value_t = 8)]
        rounds: usize,
        #[arg(long)]
        eve: bool,
        #[arg(long, default_value_t = 0.5)]
        sample_fraction: f64,
    },
    /// Teleport one qubit with the given blue fraction.
    Teleport {
        stage: StageArg,
        blue_frac: f64,
        /// Put a minus sign on the orange slice (full stage only).
        #[arg(long)]
        negative: bool,
    },
    /// Render the final disk of a scenario script.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long, value_enum, default_value_t = LayoutArg::Side)]
        layout: LayoutArg,
    },
    /// Serve the interactive session over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Classical,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Side,
    Stacked,
}

fn read(file: &Path) -> Result<String, ScenarioError> {
    Ok(std::fs::read_to_string(file)?)
}

fn runtime(source: qubobs::Error) -> ScenarioError {
    ScenarioError::Runtime { step: 0, line: 0, source }
}

fn protocol_output(transcript: String, audit: String) -> RunOutput {
    RunOutput { transcript, audit, artifacts: Vec::new(), reports: Vec::new() }
}

fn execute(cli: &Cli) -> Result<(), ScenarioError> {
    let output = match &cli.command {
        Command::Run { file } => run_scenario(&read(file)?, cli.seed, None)?,
        Command::Bb84 { rounds, eve, sample_fraction } => {
            let params = Bb84Params {
                rounds: *rounds,
                eve_present: *eve,
                seed: cli.seed,
                sample_fraction: *sample_fraction,
            };
            let run = bb84_run(&params).map_err(runtime)?;
            let audit = format!(
                "steps {} breakdowns {} max_gap {:.9}\n",
                run.audit.steps, run.audit.breakdowns, run.audit.max_gap
            );
            protocol_output(run.transcript(), audit)
        }
        Command::Teleport { stage, blue_frac, negative } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let t = match stage {
                StageArg::Classical => teleport_classical(*blue_frac, rng.random()),
                StageArg::Full => {
                    let b = blue_frac.clamp(0.0, 1.0);
                    let beta = (1.0 - b).sqrt() * if *negative { -1.0 } else { 1.0 };
                    teleport_full(b.sqrt(), beta, [rng.random(), rng.random()])
                }
            }
            .map_err(runtime)?;
            protocol_output(t.transcript(), qubobs::verifier::audit_table(&t.steps))
        }
        Command::Render { file, format, layout } => {
            let session = run_session(&read(file)?, cli.seed)?;
            let disk = session.disk().ok_or_else(|| {
                runtime(qubobs::Error::InvalidParameter("script prepares no qubits".into()))
            })?;
            let layout = match layout {
                LayoutArg::Side => Layout::SideBySide,
                LayoutArg::Stacked => Layout::Stacked,
            };
            let artifact = match format {
                Format::Svg => Artifact {
                    file: "render.svg".into(),
                    contents: render_svg(disk, &RenderSpec { layout, ..Default::default() })
                        .map_err(runtime)?,
                },
                Format::Text => {
                    Artifact { file: "render.txt".into(), contents: format!("{}\n{disk}", render_text(disk)) }
                }
            };
            let mut out = session.output();
            out.artifacts.push(artifact);
            out
        }
        Command::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(qubobs::service::serve(addr, cli.seed))?;
            return Ok(());
        }
    };
    write_output(&output, &cli.out)?;
    print!("{}", output.transcript);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
