//! Bounding-box regression losses with verified gradients, plus the
//! machinery to benchmark them: a deterministic anchor-to-target fitting
//! harness, error-curve and error-surface aggregation, and a genetic
//! search for the SIoU shape exponent.
//!
//! Modules:
//! - [`geometry`]: boxes, intersection, IoU, enclosing box
//! - [`loss`]: SIoU and the IoU/GIoU/DIoU/CIoU baselines with analytic
//!   gradients
//! - [`finite_diff`]: the central-difference gradient oracle
//! - [`gradcheck`]: randomized analytic-vs-numeric agreement sweeps
//! - [`regression`]: Adam fitting of one box onto another
//! - [`sim`]: the benchmark grid, its runner, and spatial error surfaces
//! - [`tuner`]: GA search for the shape exponent
//! - [`report`]: CSV rendering of series, surfaces and trajectories

pub mod finite_diff;
pub mod geometry;
pub mod gradcheck;
pub mod loss;
pub mod regression;
pub mod report;
pub mod rng;
pub mod sim;
pub mod tuner;

pub use geometry::{enclosing, intersection_area, iou, Box2D, Enclosure};
pub use loss::{
    angle_cost, baseline_loss, distance_cost, grad, loss_value, near_kink, shape_cost, siou_loss,
    ChInterpretation, Grad4, LossBreakdown, LossKind, SiouParams,
};
pub use regression::{adam_step, fit, fit_each, l1_error, lr_at, AdamConfig, AdamState, Trajectory};
pub use sim::{generate_cases, generate_points, run, surface, ErrorSeries, ErrorSurface, SimConfig};
pub use tuner::{fitness, tune_theta, GaConfig, GaResult};
