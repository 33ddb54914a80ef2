//! The regression benchmark: a grid of anchor-to-target fitting cases,
//! aggregated error curves, and spatial error surfaces.
//!
//! The default grid places seven unit-area targets (one per aspect ratio)
//! at the disk center and scatters anchors over 5000 points uniformly drawn
//! from a disk of radius 3, with seven areas and seven aspect ratios per
//! point: 5000 x 7 x 7 x 7 = 1,715,000 cases.
//!
//! Reduction discipline: per-case errors are combined into per-point
//! partials and those partials into totals with a pairwise tree whose shape
//! depends only on the case grid, never on thread count, so `run` output is
//! bitwise identical for any parallelism.

use crate::geometry::Box2D;
use crate::loss::{LossKind, SiouParams};
use crate::regression::{fit_each, AdamConfig, ConfigError};
use crate::rng::{rng_from_seed, unit_f64, POINT_GENERATOR_ID};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Anchor-point location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Full specification of one benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub num_points: usize,
    pub center: Point,
    pub radius: f64,
    /// Anchor areas.
    pub scales: Vec<f64>,
    /// Anchor aspect ratios (w / h).
    pub aspects: Vec<f64>,
    /// Target aspect ratios; targets always have unit area.
    pub target_aspects: Vec<f64>,
    pub seed: u64,
    pub kind: LossKind,
    pub siou: SiouParams,
    pub adam: AdamConfig,
}

/// The seven-by-seven-by-seven grid with 5000 anchor points.
impl Default for SimConfig {
    fn default() -> Self {
        let aspects = vec![0.25, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0, 4.0];
        Self {
            num_points: 5000,
            center: Point { x: 10.0, y: 10.0 },
            radius: 3.0,
            scales: vec![0.5, 0.67, 0.75, 1.0, 1.33, 1.5, 2.0],
            target_aspects: aspects.clone(),
            aspects,
            seed: 0,
            kind: LossKind::Siou,
            siou: SiouParams::default(),
            adam: AdamConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("invalid optimizer config: {0}")]
    Adam(#[from] ConfigError),
    #[error("surface resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error("per-point finals cover {finals} points but {points} were given")]
    SurfaceMismatch { finals: usize, points: usize },
}

impl SimConfig {
    /// Total number of regression cases the config enumerates.
    pub fn case_count(&self) -> usize {
        self.num_points * self.scales.len() * self.aspects.len() * self.target_aspects.len()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.num_points < 1 {
            return Err(SimError::Config("num_points must be at least 1".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(SimError::Config(format!(
                "radius must be positive and finite, got {}",
                self.radius
            )));
        }
        if !(self.center.x.is_finite() && self.center.y.is_finite()) {
            return Err(SimError::Config("center must be finite".into()));
        }
        for (name, list) in [
            ("scales", &self.scales),
            ("aspects", &self.aspects),
            ("target_aspects", &self.target_aspects),
        ] {
            if list.is_empty() {
                return Err(SimError::Config(format!("{name} must be non-empty")));
            }
            if list.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(SimError::Config(format!("{name} must all be positive")));
            }
        }
        if !self.siou.theta_in_range() {
            return Err(SimError::Config(format!(
                "theta must lie in [{}, {}], got {}",
                SiouParams::THETA_MIN,
                SiouParams::THETA_MAX,
                self.siou.theta
            )));
        }
        self.adam.validate()?;
        Ok(())
    }
}

/// Anchor points uniform over the disk, reproducible from the seed alone.
///
/// Radius via square-root scaling of a unit draw, angle uniform; the
/// scheme is identified by [`POINT_GENERATOR_ID`] in run records.
pub fn generate_points(config: &SimConfig) -> Vec<Point> {
    let mut rng = rng_from_seed(config.seed);
    (0..config.num_points)
        .map(|_| {
            let r = config.radius * unit_f64(&mut rng).sqrt();
            let angle = std::f64::consts::TAU * unit_f64(&mut rng);
            Point {
                x: config.center.x + r * angle.cos(),
                y: config.center.y + r * angle.sin(),
            }
        })
        .collect()
}

/// One anchor-to-target fitting task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionCase {
    pub anchor: Box2D,
    pub target: Box2D,
    pub point_index: usize,
}

fn box_from(center: Point, area: f64, aspect: f64) -> Box2D {
    Box2D::from_parts(
        center.x,
        center.y,
        (area * aspect).sqrt(),
        (area / aspect).sqrt(),
    )
}

/// Cases for a single anchor point, in scale-major then aspect then
/// target-aspect order.
pub fn cases_for_point<'a>(
    config: &'a SimConfig,
    point_index: usize,
    point: Point,
) -> impl Iterator<Item = RegressionCase> + 'a {
    config.scales.iter().flat_map(move |&scale| {
        config.aspects.iter().flat_map(move |&aspect| {
            let anchor = box_from(point, scale, aspect);
            config.target_aspects.iter().map(move |&ta| RegressionCase {
                anchor,
                target: box_from(config.center, 1.0, ta),
                point_index,
            })
        })
    })
}

/// Lazy enumeration of the whole grid in point-major order.
pub fn generate_cases<'a>(
    config: &'a SimConfig,
    points: &'a [Point],
) -> impl Iterator<Item = RegressionCase> + 'a {
    points
        .iter()
        .enumerate()
        .flat_map(move |(i, &p)| cases_for_point(config, i, p))
}

/// Aggregated benchmark output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    /// `E(i)`: summed L1 error over all cases at each iteration,
    /// including the starting state at index 0.
    pub per_iteration_total: Vec<f64>,
    /// Final-iteration L1 error summed over each anchor point's cases.
    pub per_point_final: Vec<f64>,
    pub case_count: usize,
    /// Cases in which at least one optimizer step was rejected.
    pub flagged_cases: usize,
}

/// Sum with a fixed pairwise tree; the result depends only on the order
/// and length of the slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

struct PointPartial {
    /// Summed L1 over this point's cases, per iteration.
    totals: Vec<f64>,
    flagged: usize,
}

fn point_partial(config: &SimConfig, point_index: usize, point: Point) -> PointPartial {
    let iterations = config.adam.iterations;
    let cases: Vec<RegressionCase> = cases_for_point(config, point_index, point).collect();
    let n = cases.len();
    // scratch[it * n + ci] = L1 of case ci at iteration it
    let mut scratch = vec![0.0f64; (iterations + 1) * n];
    let mut flagged = 0usize;
    for (ci, case) in cases.iter().enumerate() {
        let summary = fit_each(
            &case.anchor,
            &case.target,
            config.kind,
            &config.siou,
            &config.adam,
            |it, _, l1| scratch[it * n + ci] = l1,
        );
        flagged += (summary.rejected_steps > 0) as usize;
    }
    let totals = (0..=iterations)
        .map(|it| pairwise_sum(&scratch[it * n..(it + 1) * n]))
        .collect();
    PointPartial { totals, flagged }
}

/// Runs every case of the grid and aggregates the error curve.
///
/// Executes on the current rayon thread pool; output is bitwise identical
/// for any number of worker threads.
pub fn run(config: &SimConfig) -> Result<ErrorSeries, SimError> {
    config.validate()?;
    let points = generate_points(config);
    Ok(run_with_points(config, &points))
}

/// [`run`] with a pre-generated point set (the points must come from
/// [`generate_points`] with the same config for records to be consistent).
pub fn run_with_points(config: &SimConfig, points: &[Point]) -> ErrorSeries {
    let iterations = config.adam.iterations;
    let partials: Vec<PointPartial> = points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| point_partial(config, i, p))
        .collect();

    let mut column = vec![0.0f64; partials.len()];
    let per_iteration_total = (0..=iterations)
        .map(|it| {
            for (slot, partial) in column.iter_mut().zip(&partials) {
                *slot = partial.totals[it];
            }
            pairwise_sum(&column)
        })
        .collect();

    ErrorSeries {
        per_iteration_total,
        per_point_final: partials.iter().map(|p| *p.totals.last().unwrap()).collect(),
        case_count: config.case_count(),
        flagged_cases: partials.iter().map(|p| p.flagged).sum(),
    }
}

/// Sequential reference runner over an explicit case list. Useful for
/// harness self-tests that need case sets the grid cannot express, such as
/// never-overlapping pairs.
pub fn run_cases(
    cases: &[RegressionCase],
    num_points: usize,
    kind: LossKind,
    params: &SiouParams,
    adam: &AdamConfig,
) -> ErrorSeries {
    let mut totals = vec![0.0f64; adam.iterations + 1];
    let mut finals = vec![0.0f64; num_points];
    let mut flagged = 0usize;
    for case in cases {
        let summary = fit_each(&case.anchor, &case.target, kind, params, adam, |it, _, l1| {
            totals[it] += l1;
        });
        finals[case.point_index] += summary.final_l1;
        flagged += (summary.rejected_steps > 0) as usize;
    }
    ErrorSeries {
        per_iteration_total: totals,
        per_point_final: finals,
        case_count: cases.len(),
        flagged_cases: flagged,
    }
}

/// One cell of the spatial error surface. `mean_error` is `None` for cells
/// containing no anchor points, which is distinct from a zero error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub count: usize,
    pub mean_error: Option<f64>,
}

/// Spatial binning of per-point final errors over the disk's bounding
/// square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSurface {
    pub resolution: usize,
    pub min: Point,
    pub max: Point,
    /// Row-major `resolution x resolution` cells, x fastest.
    pub cells: Vec<SurfaceCell>,
}

impl ErrorSurface {
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        let step_x = (self.max.x - self.min.x) / self.resolution as f64;
        let step_y = (self.max.y - self.min.y) / self.resolution as f64;
        Point {
            x: self.min.x + (ix as f64 + 0.5) * step_x,
            y: self.min.y + (iy as f64 + 0.5) * step_y,
        }
    }
}

/// Bins `series.per_point_final` into a `resolution x resolution` grid over
/// the square circumscribing the sampling disk.
pub fn surface(
    series: &ErrorSeries,
    points: &[Point],
    resolution: usize,
    center: Point,
    radius: f64,
) -> Result<ErrorSurface, SimError> {
    if resolution < 2 {
        return Err(SimError::BadResolution(resolution));
    }
    if series.per_point_final.len() != points.len() {
        return Err(SimError::SurfaceMismatch {
            finals: series.per_point_final.len(),
            points: points.len(),
        });
    }
    let min = Point {
        x: center.x - radius,
        y: center.y - radius,
    };
    let max = Point {
        x: center.x + radius,
        y: center.y + radius,
    };
    let res = resolution;
    let mut sums = vec![0.0f64; res * res];
    let mut counts = vec![0usize; res * res];
    let bin = |v: f64, lo: f64, hi: f64| -> usize {
        let t = ((v - lo) / (hi - lo) * res as f64).floor();
        (t.max(0.0) as usize).min(res - 1)
    };
    for (point, err) in points.iter().zip(&series.per_point_final) {
        let ix = bin(point.x, min.x, max.x);
        let iy = bin(point.y, min.y, max.y);
        sums[iy * res + ix] += err;
        counts[iy * res + ix] += 1;
    }
    let cells = sums
        .iter()
        .zip(&counts)
        .map(|(&sum, &count)| SurfaceCell {
            count,
            mean_error: if count > 0 {
                Some(sum / count as f64)
            } else {
                None
            },
        })
        .collect();
    Ok(ErrorSurface {
        resolution,
        min,
        max,
        cells,
    })
}

/// Self-describing record of one benchmark run, serialized to JSON next to
/// the CSV outputs so every artifact carries its own provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub generator: String,
    pub config: SimConfig,
    pub case_count: usize,
    pub flagged_cases: usize,
    pub per_iteration_total: Vec<f64>,
    pub per_point_final: Vec<f64>,
    pub points: Vec<Point>,
}

/// Runs the benchmark and wraps everything needed to reproduce or
/// post-process it.
pub fn run_record(config: &SimConfig) -> Result<RunRecord, SimError> {
    config.validate()?;
    let points = generate_points(config);
    let series = run_with_points(config, &points);
    Ok(RunRecord {
        generator: POINT_GENERATOR_ID.to_string(),
        config: config.clone(),
        case_count: series.case_count,
        flagged_cases: series.flagged_cases,
        per_iteration_total: series.per_iteration_total,
        per_point_final: series.per_point_final,
        points,
    })
}

impl RunRecord {
    pub fn series(&self) -> ErrorSeries {
        ErrorSeries {
            per_iteration_total: self.per_iteration_total.clone(),
            per_point_final: self.per_point_final.clone(),
            case_count: self.case_count,
            flagged_cases: self.flagged_cases,
        }
    }
}
