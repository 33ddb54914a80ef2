//! Gradient-descent fitting of one anchor box onto one target box.
//!
//! Adam with bias correction and a step learning-rate schedule, operating
//! directly on `(cx, cy, w, h)` with a floor on the sizes. Everything here
//! is pure f64 arithmetic on the inputs, so trajectories are bitwise
//! reproducible across runs and thread counts.

use crate::geometry::Box2D;
use crate::loss::{grad, Grad4, LossKind, SiouParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sizes are clamped to this floor after every optimizer step.
pub const SIZE_FLOOR: f64 = 1e-6;

/// Optimizer and schedule settings for one fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    /// Initial learning rate.
    pub lr0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Iterations between learning-rate decays.
    pub step_size: usize,
    /// Multiplicative decay applied every `step_size` iterations.
    pub gamma: f64,
    /// Optimizer steps per fit.
    pub iterations: usize,
    /// L1 error below which a trajectory counts as converged.
    pub tolerance: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr0: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step_size: 80,
            gamma: 0.1,
            iterations: 100,
            tolerance: 1e-2,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("learning rate must be finite and non-negative, got {0}")]
    BadLearningRate(f64),
    #[error("beta coefficients must lie in [0, 1), got beta1={0}, beta2={1}")]
    BadBetas(f64, f64),
    #[error("eps must be positive, got {0}")]
    BadEps(f64),
    #[error("step size must be at least 1")]
    BadStepSize,
    #[error("decay factor must lie in (0, 1], got {0}")]
    BadGamma(f64),
    #[error("iteration count must be at least 1")]
    BadIterations,
    #[error("convergence tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

impl AdamConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.lr0.is_finite() || self.lr0 < 0.0 {
            return Err(ConfigError::BadLearningRate(self.lr0));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(ConfigError::BadBetas(self.beta1, self.beta2));
        }
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(ConfigError::BadEps(self.eps));
        }
        if self.step_size < 1 {
            return Err(ConfigError::BadStepSize);
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(ConfigError::BadGamma(self.gamma));
        }
        if self.iterations < 1 {
            return Err(ConfigError::BadIterations);
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(ConfigError::BadTolerance(self.tolerance));
        }
        Ok(())
    }
}

/// Adam moment accumulators over the four box parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AdamState {
    pub m: [f64; 4],
    pub v: [f64; 4],
    pub t: u64,
}

/// What happened during one optimizer step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepFlags {
    /// The gradient was non-finite and the step was skipped.
    pub rejected: bool,
    /// A size hit the floor and was clamped.
    pub clamped: bool,
}

/// Learning rate at an iteration: `lr0 * gamma^floor(i / step_size)`.
pub fn lr_at(config: &AdamConfig, iteration: usize) -> f64 {
    config.lr0 * config.gamma.powi((iteration / config.step_size) as i32)
}

/// One bias-corrected Adam step on the box parameters.
///
/// A non-finite gradient rejects the step: the state and box are returned
/// unchanged and the rejection is flagged. Sizes that would cross the
/// floor are clamped to it and flagged.
pub fn adam_step(
    config: &AdamConfig,
    state: AdamState,
    grad: &Grad4,
    lr: f64,
    current: Box2D,
) -> (AdamState, Box2D, StepFlags) {
    if !grad.is_finite() {
        return (
            state,
            current,
            StepFlags {
                rejected: true,
                clamped: false,
            },
        );
    }
    let g = grad.components();
    let mut next = state;
    next.t += 1;
    let t = next.t.min(i32::MAX as u64) as i32;
    let bias1 = 1.0 - config.beta1.powi(t);
    let bias2 = 1.0 - config.beta2.powi(t);

    let mut params = [current.cx, current.cy, current.w, current.h];
    for i in 0..4 {
        next.m[i] = config.beta1 * next.m[i] + (1.0 - config.beta1) * g[i];
        next.v[i] = config.beta2 * next.v[i] + (1.0 - config.beta2) * g[i] * g[i];
        let m_hat = next.m[i] / bias1;
        let v_hat = next.v[i] / bias2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + config.eps);
    }

    let mut clamped = false;
    for size in &mut params[2..4] {
        if *size < SIZE_FLOOR {
            *size = SIZE_FLOOR;
            clamped = true;
        }
    }
    (
        next,
        Box2D::from_parts(params[0], params[1], params[2], params[3]),
        StepFlags {
            rejected: false,
            clamped,
        },
    )
}

/// Total L1 error over the four parameters.
pub fn l1_error(a: &Box2D, b: &Box2D) -> f64 {
    (a.cx - b.cx).abs() + (a.cy - b.cy).abs() + (a.w - b.w).abs() + (a.h - b.h).abs()
}

/// Per-iteration record of one fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Box after each iteration; index 0 is the starting anchor.
    pub boxes: Vec<Box2D>,
    /// L1 error of `boxes[k]` against the target.
    pub l1_errors: Vec<f64>,
    /// First iteration index whose L1 error fell below the tolerance.
    pub converged_at: Option<usize>,
    pub rejected_steps: usize,
    pub clamped_steps: usize,
}

/// Summary returned by the streaming fit driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSummary {
    pub converged_at: Option<usize>,
    pub rejected_steps: usize,
    pub clamped_steps: usize,
    pub final_box: Box2D,
    pub final_l1: f64,
}

/// Runs the fit, invoking `observe(iteration, box, l1)` for the starting
/// state and after every step. Allocation-free so the benchmark harness can
/// stream millions of fits.
pub fn fit_each<F>(
    anchor: &Box2D,
    target: &Box2D,
    kind: LossKind,
    params: &SiouParams,
    config: &AdamConfig,
    mut observe: F,
) -> FitSummary
where
    F: FnMut(usize, &Box2D, f64),
{
    let mut current = *anchor;
    let mut state = AdamState::default();
    let mut rejected = 0usize;
    let mut clamped = 0usize;
    let mut converged_at = None;

    let mut l1 = l1_error(&current, target);
    if l1 < config.tolerance {
        converged_at = Some(0);
    }
    observe(0, &current, l1);

    for iteration in 0..config.iterations {
        let g = grad(kind, &current, target, params);
        let lr = lr_at(config, iteration);
        let (next_state, next_box, flags) = adam_step(config, state, &g, lr, current);
        state = next_state;
        current = next_box;
        rejected += flags.rejected as usize;
        clamped += flags.clamped as usize;

        l1 = l1_error(&current, target);
        if converged_at.is_none() && l1 < config.tolerance {
            converged_at = Some(iteration + 1);
        }
        observe(iteration + 1, &current, l1);
    }

    FitSummary {
        converged_at,
        rejected_steps: rejected,
        clamped_steps: clamped,
        final_box: current,
        final_l1: l1,
    }
}

/// Full-trajectory fit.
pub fn fit(
    anchor: &Box2D,
    target: &Box2D,
    kind: LossKind,
    params: &SiouParams,
    config: &AdamConfig,
) -> Trajectory {
    let mut boxes = Vec::with_capacity(config.iterations + 1);
    let mut l1_errors = Vec::with_capacity(config.iterations + 1);
    let summary = fit_each(anchor, target, kind, params, config, |_, b, l1| {
        boxes.push(*b);
        l1_errors.push(l1);
    });
    Trajectory {
        boxes,
        l1_errors,
        converged_at: summary.converged_at,
        rejected_steps: summary.rejected_steps,
        clamped_steps: summary.clamped_steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(cx: f64, cy: f64, w: f64, h: f64) -> Box2D {
        Box2D::new(cx, cy, w, h).unwrap()
    }

    fn g4(d: [f64; 4]) -> Grad4 {
        Grad4::from_parts(d, false)
    }

    #[test]
    fn lr_schedule_decays_in_steps() {
        let cfg = AdamConfig::default();
        assert_eq!(lr_at(&cfg, 0), 0.1);
        assert_eq!(lr_at(&cfg, 79), 0.1);
        assert!((lr_at(&cfg, 80) - 0.01).abs() < 1e-15);
        assert!((lr_at(&cfg, 160) - 0.001).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient_leaves_box_unchanged() {
        let cfg = AdamConfig::default();
        let start = b(1.0, 2.0, 3.0, 4.0);
        let (state, after, flags) = adam_step(&cfg, AdamState::default(), &g4([0.0; 4]), 0.1, start);
        assert_eq!(after, start);
        assert_eq!(state.t, 1);
        assert_eq!(flags, StepFlags::default());
    }

    #[test]
    fn first_step_magnitude_is_about_lr() {
        // with bias correction the first update is lr * g / (|g| + eps'),
        // so each coordinate with a nonzero gradient moves by about lr
        let cfg = AdamConfig::default();
        let start = b(1.0, 2.0, 3.0, 4.0);
        let (_, after, _) = adam_step(
            &cfg,
            AdamState::default(),
            &g4([0.5, -2.0, 0.0, 1e-3]),
            0.1,
            start,
        );
        assert!((start.cx - after.cx - 0.1).abs() < 1e-6);
        assert!((after.cy - start.cy - 0.1).abs() < 1e-6);
        assert_eq!(after.w, start.w);
        assert!((start.h - after.h - 0.1).abs() < 1e-4);
    }

    #[test]
    fn sizes_clamp_at_the_floor() {
        let cfg = AdamConfig {
            lr0: 10.0,
            ..AdamConfig::default()
        };
        let start = b(1.0, 1.0, 0.5, 0.5);
        let (_, after, flags) = adam_step(&cfg, AdamState::default(), &g4([0.0, 0.0, 5.0, 5.0]), 10.0, start);
        assert_eq!(after.w, SIZE_FLOOR);
        assert_eq!(after.h, SIZE_FLOOR);
        assert!(flags.clamped);
    }

    #[test]
    fn non_finite_gradient_rejects_the_step() {
        let cfg = AdamConfig::default();
        let start = b(1.0, 1.0, 1.0, 1.0);
        let state = AdamState {
            m: [0.5; 4],
            v: [0.1; 4],
            t: 3,
        };
        let (after_state, after, flags) =
            adam_step(&cfg, state, &g4([f64::NAN, 0.0, 0.0, 0.0]), 0.1, start);
        assert!(flags.rejected);
        assert_eq!(after, start);
        assert_eq!(after_state, state);
    }

    #[test]
    fn l1_error_examples() {
        let p = b(1.0, 1.0, 2.0, 2.0);
        let g = b(0.0, 0.0, 2.0, 2.0);
        assert_eq!(l1_error(&p, &p), 0.0);
        assert_eq!(l1_error(&p, &g), 2.0);
        assert_eq!(
            l1_error(&b(10.0, 10.0, 1.0, 4.0), &b(10.0, 10.0, 2.0, 2.0)),
            3.0
        );
    }

    #[test]
    fn fit_from_the_target_stays_there() {
        let target = b(10.0, 10.0, 1.0, 1.0);
        let traj = fit(
            &target,
            &target,
            LossKind::Siou,
            &SiouParams::default(),
            &AdamConfig::default(),
        );
        assert_eq!(traj.converged_at, Some(0));
        assert!(traj.l1_errors.iter().all(|&e| e == 0.0));
        assert_eq!(traj.boxes.len(), 101);
        assert_eq!(traj.l1_errors.len(), 101);
    }

    #[test]
    fn on_axis_fit_descends() {
        let anchor = b(10.0, 8.0, 1.0, 1.0);
        let target = b(10.0, 10.0, 1.0, 1.0);
        let traj = fit(
            &anchor,
            &target,
            LossKind::Siou,
            &SiouParams::default(),
            &AdamConfig::default(),
        );
        assert!(traj.l1_errors.last().unwrap() < &traj.l1_errors[0]);
        assert_eq!(traj.rejected_steps, 0);
    }

    #[test]
    fn trajectory_l1_recomputes_from_boxes() {
        let anchor = b(9.0, 10.5, 2.0, 0.5);
        let target = b(10.0, 10.0, 1.0, 1.0);
        let traj = fit(
            &anchor,
            &target,
            LossKind::Ciou,
            &SiouParams::default(),
            &AdamConfig::default(),
        );
        for (bx, l1) in traj.boxes.iter().zip(&traj.l1_errors) {
            assert_eq!(l1_error(bx, &target), *l1);
        }
    }

    #[test]
    fn zero_learning_rate_freezes_the_trajectory() {
        let anchor = b(8.5, 9.0, 2.0, 0.5);
        let target = b(10.0, 10.0, 1.0, 1.0);
        let cfg = AdamConfig {
            lr0: 0.0,
            ..AdamConfig::default()
        };
        let traj = fit(&anchor, &target, LossKind::Siou, &SiouParams::default(), &cfg);
        assert!(traj.boxes.iter().all(|bx| *bx == anchor));
    }

    #[test]
    fn fits_are_bitwise_deterministic() {
        let anchor = b(8.2, 11.3, 0.7, 1.9);
        let target = b(10.0, 10.0, 2.0, 0.5);
        let run = || {
            fit(
                &anchor,
                &target,
                LossKind::Siou,
                &SiouParams::default(),
                &AdamConfig::default(),
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let ok = AdamConfig::default();
        assert!(ok.validate().is_ok());
        assert!(AdamConfig { lr0: -1.0, ..ok }.validate().is_err());
        assert!(AdamConfig { beta1: 1.0, ..ok }.validate().is_err());
        assert!(AdamConfig { gamma: 0.0, ..ok }.validate().is_err());
        assert!(AdamConfig { step_size: 0, ..ok }.validate().is_err());
        assert!(AdamConfig { iterations: 0, ..ok }.validate().is_err());
        assert!(AdamConfig { tolerance: 0.0, ..ok }.validate().is_err());
    }
}
