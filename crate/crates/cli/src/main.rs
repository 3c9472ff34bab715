//! `frametour`: CSV in, CSV out front end for tours and interpolation.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frametour::TourError;

/// Exit code for unusable input (bad flags, files or frames).
pub const EXIT_INPUT: u8 = 2;
/// Exit code for numerical breakdowns.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "frametour", version, about = "Frame interpolation, tours and projection pursuit")]
pub struct Cli {
    /// Log filter for diagnostics on stderr (error, warn, info, debug).
    #[arg(long, global = true, default_value = "warn", env = "FRAMETOUR_LOG")]
    pub log: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interpolate between two frames and write the path.
    Interpolate(InterpolateArgs),
    /// Grand tour through random target frames.
    Grand(GrandArgs),
    /// Guided tour that maximizes a projection pursuit index.
    Guided(GuidedArgs),
    /// Principal components of a data set.
    Pca(PcaArgs),
    /// Sphere or torus coordinates of paths between two frames in three dimensions.
    Geometry(GeometryArgs),
    /// Evaluate an index on a projection of a data set.
    IndexEval(IndexEvalArgs),
    /// Write one of the bundled synthetic data sets.
    Generate(GenerateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Givens,
    Geodesic,
}

impl From<Method> for frametour::Interpolator {
    fn from(m: Method) -> Self {
        match m {
            Method::Givens => frametour::Interpolator::Givens,
            Method::Geodesic => frametour::Interpolator::Geodesic,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for frametour::export::PathFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => frametour::export::PathFormat::Csv,
            Format::Json => frametour::export::PathFormat::Json,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Search {
    Better,
    Geodesic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryMethod {
    Givens,
    Geodesic,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Sine,
    SineInNoise,
    TwoFactor,
}

/// Output file; relative defaults land in `$FRAMETOUR_OUTPUT_DIR` when set.
#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Directory for outputs given without an explicit path.
    #[arg(long, env = "FRAMETOUR_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,
}

impl OutputArgs {
    pub fn resolve(&self, default_name: &str) -> PathBuf {
        match &self.output {
            Some(path) => path.clone(),
            None => self.in_dir(Path::new(default_name)),
        }
    }

    pub fn in_dir(&self, name: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if name.is_relative() => dir.join(name),
            _ => name.to_path_buf(),
        }
    }
}

/// How a data set is read.
#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Numeric CSV file with a header row.
    #[arg(long, short)]
    pub input: PathBuf,

    /// Scale every column to mean 0 and standard deviation 1.
    #[arg(long)]
    pub standardize: bool,

    /// Columns whose sign is flipped after reading (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub negate: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct InterpolateArgs {
    /// Start frame: headerless p×d CSV.
    #[arg(long)]
    pub start: PathBuf,
    /// Target frame: headerless p×d CSV.
    #[arg(long)]
    pub target: PathBuf,
    /// Interpolation between successive frames.
    #[arg(long, value_enum, default_value_t = Method::Givens)]
    pub method: Method,
    /// Number of steps; overrides --delta.
    #[arg(long, conflicts_with = "delta")]
    pub nsteps: Option<usize>,
    /// Largest rotation per step, in radians.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Path file format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GrandArgs {
    /// Data dimension; taken from --input when omitted.
    #[arg(long, required_unless_present = "input")]
    pub p: Option<usize>,
    /// Projection dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Data set whose index values are recorded along the tour.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Index recorded when --input is given: splines2d, splines2d_sym or holes.
    #[arg(long, default_value = "holes")]
    pub index: String,
    /// Number of random target frames.
    #[arg(long, default_value_t = 10)]
    pub targets: usize,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest rotation per step, in radians.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Interpolation between successive frames.
    #[arg(long, value_enum, default_value_t = Method::Givens)]
    pub method: Method,
    /// Path file format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write the trace (`step_id,target_id,event,index_value`).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GuidedArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Index: splines2d, splines2d_sym or holes.
    #[arg(long, default_value = "splines2d")]
    pub index: String,
    /// Interpolation between successive frames.
    #[arg(long, value_enum, default_value_t = Method::Givens)]
    pub method: Method,
    /// Target search: random candidates or geodesic direction walk.
    #[arg(long, value_enum, default_value_t = Search::Better)]
    pub search: Search,
    /// Projection dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Upper bound on accepted targets.
    #[arg(long, default_value_t = 30)]
    pub targets: usize,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest rotation per step, in radians.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Factor applied to the search radius after each accepted target.
    #[arg(long, default_value_t = 0.9)]
    pub cooling: f64,
    /// Candidate frames drawn per search.
    #[arg(long, default_value_t = 100)]
    pub candidates: usize,
    /// Initial search radius, in radians.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Start frame: headerless p×d CSV; random when omitted.
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// Also write every displayed frame as a path file.
    #[arg(long)]
    pub frames: Option<PathBuf>,
    /// Path file format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PcaArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Components kept in the score file; all when omitted.
    #[arg(long)]
    pub components: Option<usize>,
    /// Also write the p×p rotation (loadings) as headerless CSV.
    #[arg(long)]
    pub rotation: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    /// Start frame in three dimensions (3×1 or 3×2).
    #[arg(long)]
    pub start: PathBuf,
    /// Target frame of the same shape.
    #[arg(long)]
    pub target: PathBuf,
    /// Paths to export.
    #[arg(long, value_enum, default_value_t = GeometryMethod::Both)]
    pub method: GeometryMethod,
    /// Steps per path.
    #[arg(long, default_value_t = 50)]
    pub nsteps: usize,
    /// Random surface points added as context.
    #[arg(long, default_value_t = 500)]
    pub background: usize,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct IndexEvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Index: splines2d, splines2d_sym or holes.
    #[arg(long, default_value = "splines2d")]
    pub index: String,
    /// Projection frame (headerless p×d CSV).
    #[arg(long, conflicts_with = "columns")]
    pub frame: Option<PathBuf>,
    /// Columns used directly as the projection (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<String>,
    /// In-plane rotation applied to the projection, in degrees.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rotate: f64,
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    /// Data set to write.
    #[arg(value_enum)]
    pub kind: Generator,
    /// Number of rows; the bundled size when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Noise standard deviation; the bundled value when omitted.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Seed; the bundled seed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<TourError>() {
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .format_timestamp(None)
        .init();
    match commands::run(&cli.command) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
