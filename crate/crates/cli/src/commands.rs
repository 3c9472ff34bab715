use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use frametour::data::{
    self, generate_sine, generate_sine_in_noise, generate_two_factor, Dataset, SINE_N,
    SINE_NOISE_SD, SINE_SEED,
};
use frametour::export::{self, PathFormat};
use frametour::index::{index_by_name, ProjectedData};
use frametour::tour::{self, Scorer, SearchMethod, TourConfig, TraceEvent};
use frametour::{
    geodesic_full_path, givens_full_path, pca, Frame, Interpolator, Tolerances, TourError,
};
use log::warn;

use crate::{
    Command, DataArgs, Format, GenerateArgs, Generator, GeometryArgs, GeometryMethod, GrandArgs,
    GuidedArgs, IndexEvalArgs, InterpolateArgs, Method, PcaArgs, Search,
};

/// Frames whose orthonormality error is at most this are repaired, not rejected.
const FRAME_REPAIR_TOL: f64 = 1e-6;

/// Space-separated `key=value` pairs.
#[derive(Default)]
pub struct Summary(Vec<(&'static str, String)>);

impl Summary {
    fn add(mut self, key: &'static str, value: impl fmt::Display) -> Self {
        self.0.push((key, value.to_string()));
        self
    }

    /// Shortest round-trip form; exponent notation for very small or large values.
    fn num(mut self, key: &'static str, value: f64) -> Self {
        self.0.push((key, format!("{value:?}")));
        self
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (key, value)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{key}={value}")?;
        }
        Ok(())
    }
}

pub fn run(command: &Command) -> Result<Summary> {
    match command {
        Command::Interpolate(a) => interpolate(a),
        Command::Grand(a) => grand(a),
        Command::Guided(a) => guided(a),
        Command::Pca(a) => pca_cmd(a),
        Command::Geometry(a) => geometry(a),
        Command::IndexEval(a) => index_eval(a),
        Command::Generate(a) => generate(a),
    }
}

fn input_error(msg: String) -> anyhow::Error {
    TourError::InvalidInput(msg).into()
}

/// Creates missing parent directories of an output file.
fn writable(path: PathBuf) -> Result<PathBuf> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create directory {}", parent.display()))?;
    }
    Ok(path)
}

fn read_frame(path: &Path, tol: &Tolerances) -> Result<Frame> {
    let loaded = export::load_frame(path, FRAME_REPAIR_TOL, tol)?;
    if loaded.repaired {
        warn!(
            "{}: re-orthonormalized frame (max |FᵀF − I| was {:e})",
            path.display(),
            loaded.orthonormality_error
        );
    }
    Ok(loaded.frame)
}

fn read_data(args: &DataArgs) -> Result<Dataset> {
    let mut data = data::load_csv(&args.input)?;
    if !args.negate.is_empty() {
        data.negate_columns(&args.negate)?;
    }
    if args.standardize {
        data = data::standardize(&data)?;
    }
    Ok(data)
}

fn path_extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Givens => "givens",
        Method::Geodesic => "geodesic",
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(input_error(format!("--delta must be positive, got {delta}")));
    }
    Ok(())
}

fn interpolate(args: &InterpolateArgs) -> Result<Summary> {
    let tol = Tolerances::default();
    let start = read_frame(&args.start, &tol)?;
    let target = read_frame(&args.target, &tol)?;
    if args.nsteps == Some(0) {
        return Err(input_error("--nsteps must be at least 1".into()));
    }
    check_delta(args.delta)?;
    let (frames, total_angle, step_angle) = match args.method {
        Method::Givens => {
            let path = match args.nsteps {
                Some(n) => givens_full_path(&start, &target, n, &tol)?,
                None => frametour::givens::givens_path_with_speed(&start, &target, args.delta, &tol)?,
            };
            let (total, step) = (path.total_angle(), path.step_angle());
            (path.into_frames(), total, step)
        }
        Method::Geodesic => {
            let path = match args.nsteps {
                Some(n) => geodesic_full_path(&start, &target, n)?,
                None => frametour::geodesic::geodesic_path_with_speed(
                    &start, &target, args.delta, &tol,
                )?,
            };
            let (total, step) = (path.total_angle(), path.step_angle());
            (path.into_frames(), total, step)
        }
    };
    let last = frames.last().expect("paths hold at least one frame");
    let frame_error = last.max_distance(&target);
    let plane_error = last.plane_distance(&target);
    let output = writable(args.out.resolve(&format!("path.{}", path_extension(args.format))))?;
    export::save_path(&frames, PathFormat::from(args.format), &output)?;
    Ok(Summary::default()
        .add("method", method_name(args.method))
        .add("p", start.p())
        .add("d", start.d())
        .num("total_angle", total_angle)
        .add("nsteps", frames.len() - 1)
        .num("step_angle", step_angle)
        .num("frame_error", frame_error)
        .num("plane_error", plane_error)
        .add("output", output.display()))
}

fn grand(args: &GrandArgs) -> Result<Summary> {
    let tol = Tolerances::default();
    check_delta(args.delta)?;
    let data = args.input.as_ref().map(data::load_csv).transpose()?;
    let p = match (&data, args.p) {
        (Some(d), Some(p)) if d.p() != p => {
            return Err(input_error(format!("--p {p} but the data has {} columns", d.p())))
        }
        (Some(d), _) => d.p(),
        (None, Some(p)) => p,
        (None, None) => bail!(input_error("either --p or --input is required".into())),
    };
    let index = match &data {
        Some(_) => Some(index_by_name(&args.index)?),
        None => None,
    };
    let scorer = data
        .as_ref()
        .zip(index.as_deref())
        .map(|(d, i)| Scorer::new(d.values(), i));
    let config = TourConfig {
        interpolator: Interpolator::from(args.method),
        search: SearchMethod::Grand,
        d: args.d,
        delta: args.delta,
        max_targets: args.targets,
        seed: args.seed,
        ..TourConfig::default()
    };
    let trace = tour::grand_tour(&config, p, scorer.as_ref(), &tol)?;
    let frames: Vec<Frame> = trace.frames().map(|r| r.frame.clone()).collect();
    let output = writable(args.out.resolve(&format!("grand.{}", path_extension(args.format))))?;
    export::save_path(&frames, PathFormat::from(args.format), &output)?;
    let mut summary = Summary::default()
        .add("method", method_name(args.method))
        .add("p", p)
        .add("d", args.d)
        .add("targets", trace.events(TraceEvent::TargetProposed).count())
        .add("frames", frames.len())
        .add("output", output.display());
    if let Some(trace_path) = &args.trace {
        let trace_path = writable(args.out.in_dir(trace_path))?;
        export::save_trace(&trace, &trace_path)?;
        summary = summary.add("trace", trace_path.display());
    }
    Ok(summary)
}

fn guided(args: &GuidedArgs) -> Result<Summary> {
    let tol = Tolerances::default();
    let data = read_data(&args.data)?;
    let index = index_by_name(&args.index)?;
    let scorer = Scorer::new(data.values(), index.as_ref());
    let start = args
        .start
        .as_ref()
        .map(|p| read_frame(p, &tol))
        .transpose()?;
    let config = TourConfig {
        interpolator: Interpolator::from(args.method),
        search: match args.search {
            Search::Better => SearchMethod::Better,
            Search::Geodesic => SearchMethod::GeodesicSearch,
        },
        d: start.as_ref().map_or(args.d, Frame::d),
        delta: args.delta,
        max_targets: args.targets,
        seed: args.seed,
        cooling: args.cooling,
        n_candidates: args.candidates,
        initial_radius: args.radius,
        ..TourConfig::default()
    };
    let trace = tour::guided_tour(&config, &scorer, start, &tol)
        .context("guided tour failed")?;
    let output = writable(args.out.resolve("trace.csv"))?;
    export::save_trace(&trace, &output)?;

    let value = |r: Option<&frametour::TraceRecord>| r.and_then(|r| r.index_value).unwrap_or(f64::NAN);
    let best_accepted = trace
        .events(TraceEvent::TargetAccepted)
        .filter_map(|r| r.index_value)
        .fold(value(trace.records.first()), f64::max);
    let mut summary = Summary::default()
        .add("method", method_name(args.method))
        .add("index", index.name())
        .add("accepted", trace.accepted_count())
        .add("frames", trace.frames().count())
        .num("start_index", value(trace.records.first()))
        .num("best_accepted_index", best_accepted)
        .num("final_index", value(trace.final_frame()))
        .add("output", output.display());
    if let Some(frames_path) = &args.frames {
        let frames_path = writable(args.out.in_dir(frames_path))?;
        let frames: Vec<Frame> = trace.frames().map(|r| r.frame.clone()).collect();
        export::save_path(&frames, PathFormat::from(args.format), &frames_path)?;
        summary = summary.add("frames_output", frames_path.display());
    }
    Ok(summary)
}

fn pca_cmd(args: &PcaArgs) -> Result<Summary> {
    let data = read_data(&args.data)?;
    let result = pca(&data)?;
    let k = args.components.unwrap_or(data.p());
    let scores = result.scores_dataset(k)?;
    let output = writable(args.out.resolve("scores.csv"))?;
    data::save_csv(&scores, &output)?;
    let mut summary = Summary::default()
        .add("n", data.n())
        .add("p", data.p())
        .add("components", k)
        .num("cumulative_proportion", result.cumulative_proportion[k - 1])
        .add("output", output.display());
    if let Some(rotation_path) = &args.rotation {
        let rotation_path = writable(args.out.in_dir(rotation_path))?;
        export::save_matrix(&result.rotation, &rotation_path)?;
        summary = summary.add("rotation", rotation_path.display());
    }
    Ok(summary)
}

fn geometry(args: &GeometryArgs) -> Result<Summary> {
    let tol = Tolerances::default();
    let start = read_frame(&args.start, &tol)?;
    let target = read_frame(&args.target, &tol)?;
    if start.p() != 3 || (start.p(), start.d()) != (target.p(), target.d()) {
        return Err(input_error(format!(
            "geometry needs two frames of the same shape in three dimensions, got {}×{} and {}×{}",
            start.p(),
            start.d(),
            target.p(),
            target.d()
        )));
    }
    if args.nsteps == 0 {
        return Err(input_error("--nsteps must be at least 1".into()));
    }
    let mut points = Vec::new();
    let mut summary = Summary::default().add("d", start.d());
    if matches!(args.method, GeometryMethod::Givens | GeometryMethod::Both) {
        let path = givens_full_path(&start, &target, args.nsteps, &tol)?;
        summary = summary
            .num("givens_angle", path.total_angle())
            .num("givens_endpoint_error", path.last().max_distance(&target));
        points.extend(export::path_geometry(path.frames(), "givens")?);
    }
    if matches!(args.method, GeometryMethod::Geodesic | GeometryMethod::Both) {
        let path = geodesic_full_path(&start, &target, args.nsteps)?;
        summary = summary
            .num("geodesic_angle", path.total_angle())
            .num("geodesic_endpoint_error", path.last().max_distance(&target));
        points.extend(export::path_geometry(path.frames(), "geodesic")?);
    }
    points.extend(export::background_geometry(start.d(), args.background, args.seed)?);
    let output = writable(args.out.resolve("geometry.csv"))?;
    export::save_geometry(&points, &output)?;
    Ok(summary
        .add("points", points.len())
        .add("output", output.display()))
}

fn index_eval(args: &IndexEvalArgs) -> Result<Summary> {
    let tol = Tolerances::default();
    let data = read_data(&args.data)?;
    let index = index_by_name(&args.index)?;
    let projected = if let Some(frame_path) = &args.frame {
        ProjectedData::project(data.values(), &read_frame(frame_path, &tol)?)?
    } else if !args.columns.is_empty() {
        let cols = args
            .columns
            .iter()
            .map(|c| data.column_index(c))
            .collect::<frametour::Result<Vec<_>>>()?;
        ProjectedData::new(data.select(&cols)?.values().clone())?
    } else if data.p() <= 2 {
        ProjectedData::new(data.values().clone())?
    } else {
        return Err(input_error(format!(
            "data has {} columns; pass --frame or --columns",
            data.p()
        )));
    };
    let projected = if args.rotate != 0.0 {
        projected.rotated(args.rotate.to_radians())?
    } else {
        projected
    };
    let value = index.evaluate(&projected)?;
    Ok(Summary::default()
        .add("index", index.name())
        .num("rotate_deg", args.rotate)
        .add("n", projected.n())
        .num("value", value))
}

fn generate(args: &GenerateArgs) -> Result<Summary> {
    let n = args.n.unwrap_or(SINE_N);
    let seed = args.seed.unwrap_or(SINE_SEED);
    let (data, name) = match args.kind {
        Generator::Sine => (
            generate_sine(n, args.noise.unwrap_or(SINE_NOISE_SD), seed)?,
            "sine",
        ),
        Generator::SineInNoise => (
            generate_sine_in_noise(n, args.noise.unwrap_or(SINE_NOISE_SD), seed)?,
            "sine_in_noise",
        ),
        Generator::TwoFactor => (
            generate_two_factor(n, args.noise.unwrap_or(0.1), seed)?,
            "two_factor",
        ),
    };
    let output = writable(args.out.resolve(&format!("{name}.csv")))?;
    data::save_csv(&data, &output)?;
    Ok(Summary::default()
        .add("kind", name)
        .add("n", data.n())
        .add("p", data.p())
        .add("seed", seed)
        .add("output", output.display()))
}
