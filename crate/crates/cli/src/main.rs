use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quincunx_core::raster::{
    build_table, decode_image, decode_raster, load_image, render_with_table, save_image, tile,
    EquirectImage, Pixel, RasterError, RenderMode, RenderOptions, Sampling, DEFAULT_STEREO_CROP,
};
use quincunx_core::warp::{ControlPoints, InterpKernel};

#[derive(Debug, Parser)]
#[command(
    name = "quincunx",
    version,
    about = "Peirce quincuncial reprojection of equirectangular panoramas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Peirce quincuncial render; warped when --controls is given.
    Project {
        #[command(flatten)]
        common: RenderArgs,
        /// Eight degrees values lon1,lat1,...,lon4,lat4.
        #[arg(long, allow_hyphen_values = true)]
        controls: Option<String>,
        #[arg(long, default_value = "linear")]
        kernel: InterpKernel,
    },
    /// Antipode perimeter square: one pole on the perimeter, the other in the middle.
    Aps {
        #[command(flatten)]
        common: RenderArgs,
        #[arg(long, value_enum, default_value_t = Variant::Zenith)]
        variant: Variant,
    },
    /// Stereographic view centred on a pole, for comparison.
    Stereo {
        #[command(flatten)]
        common: RenderArgs,
        #[arg(long, value_enum, default_value_t = Variant::Nadir)]
        variant: Variant,
        /// Latitude shown at the edge midpoints.
        #[arg(long, default_value_t = DEFAULT_STEREO_CROP, allow_hyphen_values = true)]
        crop: f64,
    },
    /// Repeats a square render as a wallpaper.
    Tile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        nx: u32,
        #[arg(long, default_value_t = 2)]
        ny: u32,
    },
    /// Runs the loopback preview service for the editor.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Panorama to load at startup.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Output pixels per side.
    #[arg(long, default_value_t = 1024)]
    size: usize,
    #[arg(long, default_value = "nearest")]
    sampling: Sampling,
    /// Evaluate every pixel instead of using the symmetric fast path.
    #[arg(long)]
    naive: bool,
    /// Value for fetches outside the panorama: one gray level or r,g,b.
    #[arg(long, default_value = "128", value_parser = parse_fill)]
    fill: Pixel,
    /// Print pixels, cn evaluations and milliseconds to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    Zenith,
    Nadir,
}

fn parse_fill(s: &str) -> Result<Pixel, String> {
    let parts = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u8>()
                .map_err(|_| format!("invalid fill component {p:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [v] => Ok(Pixel::gray(v)),
        [r, g, b] => Ok(Pixel([r, g, b])),
        _ => Err(format!("fill takes one gray value or r,g,b, got {s:?}")),
    }
}

/// Failures mapped onto exit codes: 2 for arguments and validation, 3 for I/O.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<RasterError> for CliError {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::Io { .. } | RasterError::Decode(_) | RasterError::Encode(_) => {
                Self::Io(e.to_string())
            }
            other => Self::Invalid(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<EquirectImage, CliError> {
    load_image(path).map_err(|e| match e {
        RasterError::Decode(msg) => CliError::Io(format!("{}: {msg}", path.display())),
        RasterError::Aspect { .. } => CliError::Invalid(format!("{}: {e}", path.display())),
        other => other.into(),
    })
}

fn render_to_file(
    args: &RenderArgs,
    cp: &ControlPoints,
    opts: RenderOptions,
) -> Result<(), CliError> {
    let img = load(&args.input)?;
    let start = Instant::now();
    let table = build_table(&opts)?;
    let out = render_with_table(&img, &table, cp, &opts, &|| false)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    save_image(&out, &args.out)?;
    println!(
        "wrote {} ({}x{}, {}) in {ms:.1} ms",
        args.out.display(),
        out.width(),
        out.height(),
        opts.mode
    );
    if args.stats {
        eprintln!(
            "pixels={} cn_calls={} ms={ms:.1}",
            out.width() as u64 * out.height() as u64,
            table.cn_evaluations()
        );
    }
    Ok(())
}

fn options(args: &RenderArgs, mode: RenderMode) -> RenderOptions {
    RenderOptions {
        size: args.size,
        mode,
        sampling: args.sampling,
        fast: !args.naive,
        fill: args.fill,
        ..RenderOptions::default()
    }
}

fn serve(addr: SocketAddr, input: Option<PathBuf>) -> Result<(), CliError> {
    let session = Arc::new(quincunx_service::Session::new());
    if let Some(path) = input {
        let bytes =
            std::fs::read(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let img = decode_image(&bytes).map_err(|e| match e {
            RasterError::Aspect { .. } => CliError::Invalid(format!("{}: {e}", path.display())),
            other => CliError::Io(format!("{}: {other}", path.display())),
        })?;
        session.set_panorama(img);
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(async move {
        let listener = quincunx_service::bind(addr).await.map_err(|e| match e {
            quincunx_service::ServiceError::NotLoopback(_) => CliError::Invalid(e.to_string()),
            other => CliError::Io(other.to_string()),
        })?;
        let local = listener
            .local_addr()
            .map_err(|e| CliError::Io(e.to_string()))?;
        println!("listening on http://{local}");
        quincunx_service::serve(listener, session)
            .await
            .map_err(|e| CliError::Io(e.to_string()))
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Project {
            common,
            controls,
            kernel,
        } => {
            let (cp, mode) = match controls {
                Some(c) => (
                    ControlPoints::parse(&c).map_err(|e| CliError::Invalid(e.to_string()))?,
                    RenderMode::WarpedPq,
                ),
                None => (ControlPoints::identity(), RenderMode::Pq),
            };
            let opts = RenderOptions {
                kernel,
                ..options(&common, mode)
            };
            render_to_file(&common, &cp, opts)
        }
        Command::Aps { common, variant } => {
            let mode = match variant {
                Variant::Zenith => RenderMode::ApsZenith,
                Variant::Nadir => RenderMode::ApsNadir,
            };
            render_to_file(&common, &ControlPoints::identity(), options(&common, mode))
        }
        Command::Stereo {
            common,
            variant,
            crop,
        } => {
            let mode = match variant {
                Variant::Zenith => RenderMode::StereoZenith,
                Variant::Nadir => RenderMode::StereoNadir,
            };
            let opts = RenderOptions {
                stereo_crop_lat: crop,
                ..options(&common, mode)
            };
            render_to_file(&common, &ControlPoints::identity(), opts)
        }
        Command::Tile { input, out, nx, ny } => {
            let bytes = std::fs::read(&input)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            // square renders are not panoramas, so no 2:1 check here
            let img = decode_raster(&bytes)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let tiled = tile(&img, nx, ny)?;
            save_image(&tiled, &out)?;
            println!(
                "wrote {} ({}x{})",
                out.display(),
                tiled.width(),
                tiled.height()
            );
            Ok(())
        }
        Command::Serve { addr, input } => serve(addr, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
