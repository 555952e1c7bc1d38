use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use chromafan_cli::commands::{self, AnalyzeArgs, ReportFormat};
use chromafan_cli::server;

#[derive(Parser)]
#[command(
    name = "chromafan",
    version,
    about = "Polar CIELAB color classification and naming"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a color model from a reference hue wheel image
    BuildModel {
        wheel: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the reference hue wheel image
    Wheel {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = chromafan::knowledge::wheel::WHEEL_SIZE)]
        size: u32,
        #[arg(long, default_value_t = chromafan::knowledge::wheel::WHEEL_SECTORS)]
        sectors: u32,
    },
    /// Classify an image and write a report, optionally with masks
    Analyze {
        image: PathBuf,
        #[arg(short, long)]
        model: Option<PathBuf>,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
        #[arg(long)]
        masks: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Run the HTTP API used by the boundary tuning UI
    Serve {
        #[arg(short, long, default_value_t = 8080)]
        port: u16,
        #[arg(short, long)]
        model: Option<PathBuf>,
        /// Directory with the built UI bundle
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::BuildModel { wheel, output } => {
            let summary = commands::build_model(&wheel, &output)?;
            print!("{summary}");
            println!("wrote {}", output.display());
        }
        Command::Wheel {
            output,
            size,
            sectors,
        } => {
            chromafan::knowledge::wheel::reference_wheel(size, sectors).save(&output)?;
            println!("wrote {}", output.display());
        }
        Command::Analyze {
            image,
            model,
            output,
            masks,
            format,
        } => {
            let out = commands::analyze(&AnalyzeArgs {
                image: &image,
                model: model.as_deref(),
                out_dir: &output,
                masks,
                format,
            })?;
            print!("{}", out.rendered);
            eprintln!("wrote {}", out.report_path.display());
        }
        Command::Serve { port, model, ui } => {
            let (model, model_id) = commands::load_model(model.as_deref())?;
            let state = server::AppState::new(model, model_id, server::DEFAULT_SESSION_CAPACITY)?;
            let addr = SocketAddr::from(([0, 0, 0, 0], port));
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(server::serve(addr, state, ui))?;
        }
    }
    Ok(())
}
