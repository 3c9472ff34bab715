//! Grand, planned and guided tours.
//!
//! A tour alternates between choosing a target frame and interpolating to
//! it. Guided tours pick targets by projection pursuit: a random search
//! around the current frame with a shrinking radius (`Better`), or a probe
//! of geodesic directions followed by a line search (`GeodesicSearch`).
//! Every frame shown is recorded in a [`TourTrace`].

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TourError};
use crate::geodesic::{geodesic_path_with_speed, GeodesicPlan};
use crate::givens::{givens_path_with_speed, GivensPlan};
use crate::index::{ProjectedData, ProjectionIndex};
use crate::linalg::{orthonormalize, Frame, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolator {
    Givens,
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// Random targets, no index.
    Grand,
    /// Best geodesic direction, followed until the index drops.
    GeodesicSearch,
    /// Random search in a neighborhood that cools after every accepted target.
    Better,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourConfig {
    pub interpolator: Interpolator,
    pub search: SearchMethod,
    /// Projection dimension of randomly drawn frames.
    pub d: usize,
    /// Largest rotation between consecutive frames, in radians.
    pub delta: f64,
    pub max_targets: usize,
    pub seed: u64,
    /// Factor applied to the search radius after each accepted target.
    pub cooling: f64,
    pub n_candidates: usize,
    pub initial_radius: f64,
    /// Stop after this many consecutive searches without improvement.
    pub max_exhausted: usize,
    /// Directions probed by the geodesic search.
    pub n_dirs: usize,
    /// Angle of the probe step along each geodesic direction.
    pub probe_angle: f64,
}

impl Default for TourConfig {
    fn default() -> Self {
        TourConfig {
            interpolator: Interpolator::Givens,
            search: SearchMethod::Better,
            d: 2,
            delta: 0.05,
            max_targets: 30,
            seed: 1,
            cooling: 0.9,
            n_candidates: 100,
            initial_radius: 1.0,
            max_exhausted: 3,
            n_dirs: 10,
            probe_angle: 0.05,
        }
    }
}

impl TourConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(TourError::InvalidInput(msg));
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return fail(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return fail(format!("cooling must lie in (0, 1), got {}", self.cooling));
        }
        if self.n_candidates == 0 {
            return fail("n_candidates must be at least 1".into());
        }
        if !(self.initial_radius > 0.0 && self.initial_radius.is_finite()) {
            return fail(format!(
                "initial_radius must be positive, got {}",
                self.initial_radius
            ));
        }
        if !(1..=2).contains(&self.d) {
            return fail(format!("d must be 1 or 2, got {}", self.d));
        }
        if self.n_dirs < 2 {
            return fail("n_dirs must be at least 2".into());
        }
        if !(self.probe_angle > 0.0 && self.probe_angle.is_finite()) {
            return fail("probe_angle must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    Interpolation,
    TargetProposed,
    TargetAccepted,
    TargetRejected,
}

impl TraceEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceEvent::Interpolation => "interpolation",
            TraceEvent::TargetProposed => "target_proposed",
            TraceEvent::TargetAccepted => "target_accepted",
            TraceEvent::TargetRejected => "target_rejected",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "interpolation" => TraceEvent::Interpolation,
            "target_proposed" => TraceEvent::TargetProposed,
            "target_accepted" => TraceEvent::TargetAccepted,
            "target_rejected" => TraceEvent::TargetRejected,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Index of the displayed frame; target events carry the step at which
    /// the target was chosen.
    pub step_id: usize,
    pub target_id: usize,
    pub frame: Frame,
    pub index_value: Option<f64>,
    pub event: TraceEvent,
    /// Rotation from the previous displayed frame (interpolation records only).
    pub step_angle: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TourTrace {
    pub records: Vec<TraceRecord>,
}

impl TourTrace {
    fn push(&mut self, record: TraceRecord) {
        self.records.push(record);
    }

    pub fn events(&self, event: TraceEvent) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(move |r| r.event == event)
    }

    /// Displayed frames, in order.
    pub fn frames(&self) -> impl Iterator<Item = &TraceRecord> {
        self.events(TraceEvent::Interpolation)
    }

    /// Last displayed frame once interpolation towards `target_id` finished.
    pub fn reached(&self, target_id: usize) -> Option<&TraceRecord> {
        self.frames().filter(|r| r.target_id <= target_id).last()
    }

    pub fn final_frame(&self) -> Option<&TraceRecord> {
        self.frames().last()
    }

    pub fn accepted_count(&self) -> usize {
        self.events(TraceEvent::TargetAccepted).count()
    }
}

/// Scores frames by projecting a fixed data matrix.
#[derive(Clone, Copy)]
pub struct Scorer<'a> {
    pub data: &'a DMatrix<f64>,
    pub index: &'a dyn ProjectionIndex,
}

impl<'a> Scorer<'a> {
    pub fn new(data: &'a DMatrix<f64>, index: &'a dyn ProjectionIndex) -> Self {
        Scorer { data, index }
    }

    pub fn score(&self, frame: &Frame) -> Result<f64> {
        self.index.evaluate(&ProjectedData::project(self.data, frame)?)
    }
}

/// Haar-distributed random frame: Gram-Schmidt of a Gaussian matrix.
pub fn random_frame<R: Rng + ?Sized>(p: usize, d: usize, rng: &mut R) -> Result<Frame> {
    if p < d {
        return Err(TourError::InvalidInput(format!(
            "cannot draw a {p}×{d} frame"
        )));
    }
    loop {
        let m = DMatrix::from_fn(p, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        match orthonormalize(&m) {
            Ok(f) => return Ok(f),
            Err(TourError::DegenerateInput(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Frames from `start` to `target` under the chosen interpolator, with the
/// per-step rotation angle.
pub fn interpolate(
    interpolator: Interpolator,
    start: &Frame,
    target: &Frame,
    delta: f64,
    tol: &Tolerances,
) -> Result<(Vec<Frame>, f64)> {
    match interpolator {
        Interpolator::Givens => {
            let path = givens_path_with_speed(start, target, delta, tol)?;
            let step = path.step_angle();
            Ok((path.into_frames(), step))
        }
        Interpolator::Geodesic => {
            let path = geodesic_path_with_speed(start, target, delta, tol)?;
            let step = path.step_angle();
            Ok((path.into_frames(), step))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Improved { target: Frame, index_value: f64 },
    /// No candidate beat the threshold; carries the best one seen, if any.
    Exhausted { best: Option<(Frame, f64)> },
}

fn best_improvement(scored: Vec<(Frame, f64)>, threshold: f64) -> SearchOutcome {
    // max_by keeps the last maximum; reversing hands ties to the earliest draw.
    let best = scored.into_iter().rev().max_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((target, index_value)) if index_value > threshold => SearchOutcome::Improved {
            target,
            index_value,
        },
        best => SearchOutcome::Exhausted { best },
    }
}

/// Random search in a neighborhood of `current`.
///
/// Each candidate lies a uniform distance in `(0, radius]` along the Givens
/// path from `current` towards a Haar-random frame, so it can be any frame,
/// including an in-plane rotation of `current`. The best candidate wins if
/// its index exceeds `threshold`; ties go to the earliest draw. Candidates
/// are scored in parallel;
/// every candidate draws from its own seeded stream, so results do not
/// depend on scheduling.
pub fn search_better<R: Rng + ?Sized>(
    current: &Frame,
    threshold: f64,
    scorer: &Scorer<'_>,
    rng: &mut R,
    radius: f64,
    n_candidates: usize,
    tol: &Tolerances,
) -> Result<SearchOutcome> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(TourError::InvalidInput(format!(
            "search radius must be positive, got {radius}"
        )));
    }
    let seeds: Vec<u64> = (0..n_candidates).map(|_| rng.random()).collect();
    let scored = seeds
        .par_iter()
        .map(|&seed| {
            let mut local = ChaCha8Rng::seed_from_u64(seed);
            let direction = random_frame(current.p(), current.d(), &mut local)?;
            let distance = radius * (1.0 - local.random::<f64>());
            let candidate = GivensPlan::new(current, &direction, tol)?.frame_at_angle(distance)?;
            let value = scorer.score(&candidate)?;
            Ok((candidate, value))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(best_improvement(scored, threshold))
}

/// Geodesic direction search.
///
/// Probes `n_dirs` random geodesic directions at `probe_angle`, keeps the
/// one with the largest index, then walks along it in `probe_angle` steps
/// while the index keeps increasing. The walk only moves the plane, never
/// spins within it.
#[allow(clippy::too_many_arguments)]
pub fn search_geodesic_dir<R: Rng + ?Sized>(
    current: &Frame,
    threshold: f64,
    scorer: &Scorer<'_>,
    rng: &mut R,
    n_dirs: usize,
    probe_angle: f64,
) -> Result<SearchOutcome> {
    if n_dirs < 2 {
        return Err(TourError::InvalidInput("n_dirs must be at least 2".into()));
    }
    let seeds: Vec<u64> = (0..n_dirs).map(|_| rng.random()).collect();
    let probes = seeds
        .par_iter()
        .map(|&seed| {
            let mut local = ChaCha8Rng::seed_from_u64(seed);
            let direction = random_frame(current.p(), current.d(), &mut local)?;
            let plan = GeodesicPlan::new(current, &direction)?;
            let frame = plan.frame_at_angle(probe_angle);
            let value = scorer.score(&frame)?;
            Ok((plan, frame, value))
        })
        .collect::<Result<Vec<_>>>()?;

    let Some((plan, mut best_frame, mut best_value)) = probes
        .into_iter()
        .filter(|(plan, _, _)| plan.total_angle() > 0.0)
        .reduce(|a, b| if b.2 > a.2 { b } else { a })
    else {
        return Ok(SearchOutcome::Exhausted { best: None });
    };

    let total = plan.total_angle();
    let mut angle = probe_angle;
    while angle < total {
        angle = (angle + probe_angle).min(total);
        let frame = plan.frame_at_angle(angle);
        let value = scorer.score(&frame)?;
        if value <= best_value {
            break;
        }
        best_frame = frame;
        best_value = value;
    }

    if best_value > threshold {
        Ok(SearchOutcome::Improved {
            target: best_frame,
            index_value: best_value,
        })
    } else {
        Ok(SearchOutcome::Exhausted {
            best: Some((best_frame, best_value)),
        })
    }
}

/// Appends the interpolation from `current` to `target`, returning the frame reached.
#[allow(clippy::too_many_arguments)]
fn travel(
    trace: &mut TourTrace,
    step_id: &mut usize,
    target_id: usize,
    current: &Frame,
    target: &Frame,
    config: &TourConfig,
    scorer: Option<&Scorer<'_>>,
    tol: &Tolerances,
) -> Result<Frame> {
    let (frames, step_angle) = interpolate(config.interpolator, current, target, config.delta, tol)?;
    let values: Vec<Option<f64>> = match scorer {
        Some(s) => frames[1..]
            .par_iter()
            .map(|f| s.score(f).map(Some))
            .collect::<Result<_>>()?,
        None => vec![None; frames.len() - 1],
    };
    for (frame, value) in frames[1..].iter().zip(values) {
        *step_id += 1;
        trace.push(TraceRecord {
            step_id: *step_id,
            target_id,
            frame: frame.clone(),
            index_value: value,
            event: TraceEvent::Interpolation,
            step_angle,
        });
    }
    Ok(frames.last().expect("paths hold at least one frame").clone())
}

fn start_record(frame: &Frame, scorer: Option<&Scorer<'_>>) -> Result<TraceRecord> {
    Ok(TraceRecord {
        step_id: 0,
        target_id: 0,
        frame: frame.clone(),
        index_value: scorer.map(|s| s.score(frame)).transpose()?,
        event: TraceEvent::Interpolation,
        step_angle: 0.0,
    })
}

/// Tour through a fixed list of frames; the first one is the start.
pub fn planned_tour(
    config: &TourConfig,
    frames: &[Frame],
    scorer: Option<&Scorer<'_>>,
    tol: &Tolerances,
) -> Result<TourTrace> {
    config.validate()?;
    let Some(start) = frames.first() else {
        return Err(TourError::InvalidInput("planned tour needs at least one frame".into()));
    };
    let mut trace = TourTrace::default();
    trace.push(start_record(start, scorer)?);
    let mut current = start.clone();
    let mut step_id = 0;
    for (k, target) in frames[1..].iter().enumerate() {
        let target_id = k + 1;
        trace.push(TraceRecord {
            step_id,
            target_id,
            frame: target.clone(),
            index_value: scorer.map(|s| s.score(target)).transpose()?,
            event: TraceEvent::TargetProposed,
            step_angle: 0.0,
        });
        current = travel(&mut trace, &mut step_id, target_id, &current, target, config, scorer, tol)?;
    }
    Ok(trace)
}

/// Grand tour over `config.max_targets` random targets in `p` dimensions.
pub fn grand_tour(
    config: &TourConfig,
    p: usize,
    scorer: Option<&Scorer<'_>>,
    tol: &Tolerances,
) -> Result<TourTrace> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut frames = Vec::with_capacity(config.max_targets + 1);
    for _ in 0..=config.max_targets {
        frames.push(random_frame(p, config.d, &mut rng)?);
    }
    planned_tour(config, &frames, scorer, tol)
}

/// Guided tour that maximizes the scorer's index.
///
/// A proposal is accepted when its index exceeds that of the last accepted
/// target (or of the start). With the Givens interpolator the tour then
/// arrives at exactly that frame; with the geodesic one it arrives at the
/// same plane, possibly turned within it, and the trace shows the index of
/// the frame actually reached.
pub fn guided_tour(
    config: &TourConfig,
    scorer: &Scorer<'_>,
    start: Option<Frame>,
    tol: &Tolerances,
) -> Result<TourTrace> {
    config.validate()?;
    if config.search == SearchMethod::Grand {
        return Err(TourError::InvalidInput(
            "guided tours need the 'better' or 'geodesic_search' search".into(),
        ));
    }
    let p = scorer.data.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut current = match start {
        Some(f) if f.p() != p => {
            return Err(TourError::InvalidInput(format!(
                "start frame has p = {} but the data has {p} columns",
                f.p()
            )))
        }
        Some(f) => f,
        None => random_frame(p, config.d, &mut rng)?,
    };

    let mut trace = TourTrace::default();
    let first = start_record(&current, Some(scorer))?;
    let mut threshold = first.index_value.expect("scored");
    trace.push(first);

    let mut radius = config.initial_radius;
    let mut step_id = 0;
    let mut accepted = 0;
    let mut exhausted = 0;
    while accepted < config.max_targets {
        let target_id = accepted + 1;
        let outcome = match config.search {
            SearchMethod::Better => search_better(
                &current,
                threshold,
                scorer,
                &mut rng,
                radius,
                config.n_candidates,
                tol,
            )?,
            SearchMethod::GeodesicSearch => search_geodesic_dir(
                &current,
                threshold,
                scorer,
                &mut rng,
                config.n_dirs,
                config.probe_angle,
            )?,
            SearchMethod::Grand => unreachable!("rejected above"),
        };
        match outcome {
            SearchOutcome::Exhausted { best } => {
                let (frame, value) = best.unwrap_or_else(|| (current.clone(), threshold));
                trace.push(TraceRecord {
                    step_id,
                    target_id,
                    frame,
                    index_value: Some(value),
                    event: TraceEvent::TargetRejected,
                    step_angle: 0.0,
                });
                exhausted += 1;
                if exhausted >= config.max_exhausted {
                    break;
                }
            }
            SearchOutcome::Improved {
                target,
                index_value,
            } => {
                trace.push(TraceRecord {
                    step_id,
                    target_id,
                    frame: target.clone(),
                    index_value: Some(index_value),
                    event: TraceEvent::TargetAccepted,
                    step_angle: 0.0,
                });
                current = travel(
                    &mut trace,
                    &mut step_id,
                    target_id,
                    &current,
                    &target,
                    config,
                    Some(scorer),
                    tol,
                )?;
                threshold = index_value;
                radius *= config.cooling;
                accepted += 1;
                exhausted = 0;
            }
        }
    }
    Ok(trace)
}
