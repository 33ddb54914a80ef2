//! Bounding-box regression losses and their analytic gradients.
//!
//! The SIoU loss combines four penalties: the IoU term, an angle cost that
//! pulls the center-offset vector onto the nearest coordinate axis, a
//! distance cost whose exponent is modulated by the angle cost, and a shape
//! cost with a configurable exponent `theta`. IoU, GIoU, DIoU and CIoU are
//! provided as comparison baselines.
//!
//! Gradients are exact chain-rule derivatives computed by forward-mode
//! differentiation over the four box parameters (see [`dual`]), with fixed
//! subgradient conventions at the kinks of `|.|`, `min` and `max`:
//! `d|u|/du = 0` at `u = 0`, and ties in `min`/`max` split the derivative
//! equally. Under these conventions every loss is stationary at
//! `pred == gt`.

use crate::geometry::{self, Box2D};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The loss families the benchmark can regress with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    Iou,
    Giou,
    Diou,
    Ciou,
    Siou,
}

impl LossKind {
    pub const ALL: [LossKind; 5] = [
        LossKind::Iou,
        LossKind::Giou,
        LossKind::Diou,
        LossKind::Ciou,
        LossKind::Siou,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LossKind::Iou => "iou",
            LossKind::Giou => "giou",
            LossKind::Diou => "diou",
            LossKind::Ciou => "ciou",
            LossKind::Siou => "siou",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iou" => Ok(LossKind::Iou),
            "giou" => Ok(LossKind::Giou),
            "diou" => Ok(LossKind::Diou),
            "ciou" => Ok(LossKind::Ciou),
            "siou" => Ok(LossKind::Siou),
            other => Err(format!(
                "unknown loss kind '{other}' (expected iou, giou, diou, ciou or siou)"
            )),
        }
    }
}

/// Which denominator normalizes the y component of the distance cost.
///
/// The `c_h` symbol is used for two different quantities in the SIoU
/// formulation: the center y-offset (angle cost) and the enclosing-box
/// height. `Enclosing` is the default reading; it bounds the normalized
/// offset into `[0, 1]`. `CenterOffset` is available for sensitivity
/// analysis: it saturates the y penalty to a constant whenever the centers
/// differ vertically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChInterpretation {
    #[default]
    Enclosing,
    CenterOffset,
}

impl fmt::Display for ChInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChInterpretation::Enclosing => "enclosing",
            ChInterpretation::CenterOffset => "center-offset",
        })
    }
}

impl FromStr for ChInterpretation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "enclosing" => Ok(ChInterpretation::Enclosing),
            "center-offset" | "center_offset" => Ok(ChInterpretation::CenterOffset),
            other => Err(format!(
                "unknown c_h interpretation '{other}' (expected enclosing or center-offset)"
            )),
        }
    }
}

/// SIoU-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiouParams {
    /// Shape-cost exponent, meaningful in `[2, 6]`.
    pub theta: f64,
    /// Distance-cost y-denominator reading.
    #[serde(default)]
    pub ch: ChInterpretation,
}

impl SiouParams {
    pub const THETA_MIN: f64 = 2.0;
    pub const THETA_MAX: f64 = 6.0;

    pub fn with_theta(theta: f64) -> Self {
        Self {
            theta,
            ch: ChInterpretation::Enclosing,
        }
    }

    pub fn theta_in_range(&self) -> bool {
        (Self::THETA_MIN..=Self::THETA_MAX).contains(&self.theta) && self.theta.is_finite()
    }
}

impl Default for SiouParams {
    fn default() -> Self {
        Self::with_theta(4.0)
    }
}

/// Per-component record of one SIoU evaluation.
///
/// `total` is composed from the stored components, so recomputing
/// `1 - iou + (distance_cost + shape_cost) / 2` from this struct reproduces
/// it bitwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub iou: f64,
    pub angle_cost: f64,
    pub distance_cost: f64,
    pub shape_cost: f64,
    pub total: f64,
}

/// Gradient of a loss with respect to the four parameters of the predicted
/// box. `at_kink` is set when the evaluation point hit a nondifferentiable
/// configuration exactly and a subgradient convention was applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grad4 {
    pub d_cx: f64,
    pub d_cy: f64,
    pub d_w: f64,
    pub d_h: f64,
    pub at_kink: bool,
}

impl Grad4 {
    pub fn components(&self) -> [f64; 4] {
        [self.d_cx, self.d_cy, self.d_w, self.d_h]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    pub(crate) fn from_parts(d: [f64; 4], at_kink: bool) -> Self {
        Self {
            d_cx: d[0],
            d_cy: d[1],
            d_w: d[2],
            d_h: d[3],
            at_kink,
        }
    }
}

/// `base^theta` with a fast path for the integral exponents the shape cost
/// uses in practice.
fn pow_theta(base: f64, theta: f64) -> f64 {
    if theta == theta.trunc() && (0.0..=16.0).contains(&theta) {
        base.powi(theta as i32)
    } else {
        base.powf(theta)
    }
}

/// Angle cost. Zero when the centers are axis-aligned, one when the
/// center line sits at 45 degrees, and `sin(2*alpha)` in general.
///
/// Computed by the defining formula `1 - 2*sin^2(asin(x) - pi/4)`. The
/// angle is measured to the nearest axis, so `x` is the smaller of the two
/// offset ratios; the same function by the alpha-to-beta reflection, but it
/// keeps `asin` away from its ill-conditioned region near 1 and makes the
/// axis-swap symmetry exact. Coincident centers return 0 by convention
/// (the distance penalty vanishes there, so the choice is inert).
pub fn angle_cost(pred: &Box2D, gt: &Box2D) -> f64 {
    let dx = gt.cx - pred.cx;
    let dy = gt.cy - pred.cy;
    let sigma_sq = dx * dx + dy * dy;
    if sigma_sq == 0.0 || dx == 0.0 || dy == 0.0 {
        // axis-aligned or coincident: the formula gives 0 up to rounding
        return 0.0;
    }
    let x = (dx.abs().min(dy.abs()) / sigma_sq.sqrt()).clamp(0.0, 1.0);
    let s = (x.asin() - std::f64::consts::FRAC_PI_4).sin();
    (1.0 - 2.0 * s * s).clamp(0.0, 1.0)
}

/// Distance cost `sum_t (1 - exp(-gamma * rho_t))` with `gamma = 2 - lambda`.
///
/// `rho_x` is the squared center x-offset normalized by the enclosing-box
/// width; `rho_y` is normalized according to `ch`.
pub fn distance_cost(pred: &Box2D, gt: &Box2D, lambda: f64, ch: ChInterpretation) -> f64 {
    let enc = geometry::enclosing(pred, gt);
    let dx = gt.cx - pred.cx;
    let dy = gt.cy - pred.cy;
    let rho_x = (dx / enc.cw) * (dx / enc.cw);
    let rho_y = match ch {
        ChInterpretation::Enclosing => (dy / enc.ch) * (dy / enc.ch),
        ChInterpretation::CenterOffset => {
            if dy == 0.0 {
                0.0
            } else {
                1.0
            }
        }
    };
    let gamma = 2.0 - lambda;
    (1.0 - (-gamma * rho_x).exp()) + (1.0 - (-gamma * rho_y).exp())
}

/// Shape cost `sum_t (1 - exp(-omega_t))^theta` over relative size
/// mismatches `omega_t = |t - t_gt| / max(t, t_gt)`.
pub fn shape_cost(pred: &Box2D, gt: &Box2D, params: &SiouParams) -> f64 {
    let omega_w = (pred.w - gt.w).abs() / pred.w.max(gt.w);
    let omega_h = (pred.h - gt.h).abs() / pred.h.max(gt.h);
    pow_theta(1.0 - (-omega_w).exp(), params.theta) + pow_theta(1.0 - (-omega_h).exp(), params.theta)
}

/// Full SIoU evaluation: `1 - IoU + (distance + shape) / 2`, with every
/// component reported.
pub fn siou_loss(pred: &Box2D, gt: &Box2D, params: &SiouParams) -> LossBreakdown {
    let iou = geometry::iou(pred, gt);
    let lambda = angle_cost(pred, gt);
    let delta = distance_cost(pred, gt, lambda, params.ch);
    let omega = shape_cost(pred, gt, params);
    LossBreakdown {
        iou,
        angle_cost: lambda,
        distance_cost: delta,
        shape_cost: omega,
        total: 1.0 - iou + 0.5 * (delta + omega),
    }
}

/// Comparison losses. SIoU is evaluated with the supplied parameters so
/// every [`LossKind`] can be driven through one entry point.
pub fn loss_value(kind: LossKind, pred: &Box2D, gt: &Box2D, params: &SiouParams) -> f64 {
    match kind {
        LossKind::Iou => 1.0 - geometry::iou(pred, gt),
        LossKind::Giou => {
            let iou = geometry::iou(pred, gt);
            let enc = geometry::enclosing(pred, gt);
            let c = enc.cw * enc.ch;
            let union = pred.area() + gt.area() - geometry::intersection_area(pred, gt);
            1.0 - iou + (c - union) / c
        }
        LossKind::Diou => 1.0 - geometry::iou(pred, gt) + center_distance_penalty(pred, gt),
        LossKind::Ciou => {
            let iou = geometry::iou(pred, gt);
            let v = aspect_term(pred, gt);
            let alpha = ciou_alpha(iou, v);
            1.0 - iou + center_distance_penalty(pred, gt) + alpha * v
        }
        LossKind::Siou => siou_loss(pred, gt, params).total,
    }
}

/// Baseline loss with default SIoU parameters when `kind` is SIoU.
pub fn baseline_loss(kind: LossKind, pred: &Box2D, gt: &Box2D) -> f64 {
    loss_value(kind, pred, gt, &SiouParams::default())
}

/// `sigma^2 / d^2`: squared center distance over squared enclosing-box
/// diagonal.
fn center_distance_penalty(pred: &Box2D, gt: &Box2D) -> f64 {
    let enc = geometry::enclosing(pred, gt);
    let dx = gt.cx - pred.cx;
    let dy = gt.cy - pred.cy;
    (dx * dx + dy * dy) / (enc.cw * enc.cw + enc.ch * enc.ch)
}

/// CIoU aspect-consistency term `v`.
fn aspect_term(pred: &Box2D, gt: &Box2D) -> f64 {
    let d = (gt.w / gt.h).atan() - (pred.w / pred.h).atan();
    4.0 / (std::f64::consts::PI * std::f64::consts::PI) * d * d
}

/// CIoU trade-off factor, treated as a constant during differentiation.
/// Defined as 0 when `v = 0` so the loss is exactly 0 for identical boxes.
fn ciou_alpha(iou: f64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v / ((1.0 - iou) + v)
    }
}

/// The trade-off factor at a given pair, exposed so the finite-difference
/// oracle can hold it fixed the way differentiation does.
pub(crate) fn ciou_alpha_at(pred: &Box2D, gt: &Box2D) -> f64 {
    ciou_alpha(geometry::iou(pred, gt), aspect_term(pred, gt))
}

/// CIoU with the trade-off factor pinned to an externally supplied value.
pub(crate) fn ciou_frozen_alpha(pred: &Box2D, gt: &Box2D, alpha: f64) -> f64 {
    1.0 - geometry::iou(pred, gt) + center_distance_penalty(pred, gt) + alpha * aspect_term(pred, gt)
}

/// True when the pair sits within `margin` of any nondifferentiable
/// configuration of the loss family: an edge tie in the overlap or
/// enclosure `min`/`max`, a touching-overlap boundary, an axis-aligned or
/// coincident center, or a size tie.
pub fn near_kink(pred: &Box2D, gt: &Box2D, margin: f64) -> bool {
    let dx = gt.cx - pred.cx;
    let dy = gt.cy - pred.cy;
    let iw = geometry::overlap_1d(pred.cx, pred.w, gt.cx, gt.w);
    let ih = geometry::overlap_1d(pred.cy, pred.h, gt.cy, gt.h);
    // edge alignment on either axis: |center offset| = |size difference|/2
    let edge_x = dx.abs() - 0.5 * (pred.w - gt.w).abs();
    let edge_y = dy.abs() - 0.5 * (pred.h - gt.h).abs();
    [
        edge_x,
        edge_y,
        iw,
        ih,
        dx,
        dy,
        pred.w - gt.w,
        pred.h - gt.h,
    ]
    .iter()
    .any(|d| d.abs() <= margin)
}

/// Analytic gradient of the chosen loss at `pred`, holding `gt` fixed.
///
/// Matches central finite differences to a relative error of 1e-6 away
/// from kinks; at kinks the subgradient conventions from the module docs
/// apply and `at_kink` is set.
pub fn grad(kind: LossKind, pred: &Box2D, gt: &Box2D, params: &SiouParams) -> Grad4 {
    debug_assert!(pred.w > 1e-6 * 0.5 && pred.h > 1e-6 * 0.5);
    dual::grad(kind, pred, gt, params)
}

/// Forward-mode differentiation over the four box parameters.
///
/// A [`Dual`](dual::Dual) carries a value and its four partials; arithmetic
/// propagates them by the chain rule, and `min`/`max`/`abs` encode the
/// subgradient conventions. The loss formulas below mirror the scalar
/// implementations exactly, except the angle cost: its derivative path uses
/// the algebraic identity `lambda = 2*|dx|*|dy| / sigma^2`, which is the
/// same function without the removable `asin` singularity at `|x| = 1`.
mod dual {
    use super::{ciou_alpha, ChInterpretation, Grad4, LossKind, SiouParams};
    use crate::geometry::Box2D;
    use std::ops::{Add, Div, Mul, Neg, Sub};

    #[derive(Debug, Clone, Copy)]
    pub(super) struct Dual {
        v: f64,
        d: [f64; 4],
    }

    fn scaled(d: [f64; 4], k: f64) -> [f64; 4] {
        [d[0] * k, d[1] * k, d[2] * k, d[3] * k]
    }

    impl Dual {
        const fn constant(v: f64) -> Self {
            Dual { v, d: [0.0; 4] }
        }

        fn seed(v: f64, i: usize) -> Self {
            let mut d = [0.0; 4];
            d[i] = 1.0;
            Dual { v, d }
        }

        fn exp(self) -> Self {
            let e = self.v.exp();
            Dual {
                v: e,
                d: scaled(self.d, e),
            }
        }

        /// `|u|` with derivative 0 at `u = 0`.
        fn abs(self) -> Self {
            let s = if self.v > 0.0 {
                1.0
            } else if self.v < 0.0 {
                -1.0
            } else {
                0.0
            };
            Dual {
                v: self.v.abs(),
                d: scaled(self.d, s),
            }
        }

        /// `atan(u)` for finite `u`.
        fn atan(self) -> Self {
            Dual {
                v: self.v.atan(),
                d: scaled(self.d, 1.0 / (1.0 + self.v * self.v)),
            }
        }

        /// `u^theta` for `u >= 0` and constant `theta > 1`.
        fn pow_theta(self, theta: f64) -> Self {
            if theta == theta.trunc() && (1.0..=16.0).contains(&theta) {
                let below = self.v.powi(theta as i32 - 1);
                Dual {
                    v: below * self.v,
                    d: scaled(self.d, theta * below),
                }
            } else {
                let v = self.v.powf(theta);
                let slope = if self.v == 0.0 {
                    0.0
                } else {
                    theta * self.v.powf(theta - 1.0)
                };
                Dual {
                    v,
                    d: scaled(self.d, slope),
                }
            }
        }

        /// `min` with an even derivative split at ties.
        fn min(self, other: Dual) -> Dual {
            if self.v < other.v {
                self
            } else if self.v > other.v {
                other
            } else {
                Dual {
                    v: self.v,
                    d: [
                        0.5 * (self.d[0] + other.d[0]),
                        0.5 * (self.d[1] + other.d[1]),
                        0.5 * (self.d[2] + other.d[2]),
                        0.5 * (self.d[3] + other.d[3]),
                    ],
                }
            }
        }

        /// `max` with an even derivative split at ties.
        fn max(self, other: Dual) -> Dual {
            if self.v > other.v {
                self
            } else if self.v < other.v {
                other
            } else {
                Dual {
                    v: self.v,
                    d: [
                        0.5 * (self.d[0] + other.d[0]),
                        0.5 * (self.d[1] + other.d[1]),
                        0.5 * (self.d[2] + other.d[2]),
                        0.5 * (self.d[3] + other.d[3]),
                    ],
                }
            }
        }
    }

    impl Add for Dual {
        type Output = Dual;
        fn add(self, o: Dual) -> Dual {
            Dual {
                v: self.v + o.v,
                d: [
                    self.d[0] + o.d[0],
                    self.d[1] + o.d[1],
                    self.d[2] + o.d[2],
                    self.d[3] + o.d[3],
                ],
            }
        }
    }

    impl Sub for Dual {
        type Output = Dual;
        fn sub(self, o: Dual) -> Dual {
            Dual {
                v: self.v - o.v,
                d: [
                    self.d[0] - o.d[0],
                    self.d[1] - o.d[1],
                    self.d[2] - o.d[2],
                    self.d[3] - o.d[3],
                ],
            }
        }
    }

    impl Mul for Dual {
        type Output = Dual;
        fn mul(self, o: Dual) -> Dual {
            Dual {
                v: self.v * o.v,
                d: [
                    self.d[0] * o.v + self.v * o.d[0],
                    self.d[1] * o.v + self.v * o.d[1],
                    self.d[2] * o.v + self.v * o.d[2],
                    self.d[3] * o.v + self.v * o.d[3],
                ],
            }
        }
    }

    impl Div for Dual {
        type Output = Dual;
        fn div(self, o: Dual) -> Dual {
            // q must come from a true division: equal operands then cancel
            // exactly in the derivative, keeping optima stationary
            let q = self.v / o.v;
            let inv = 1.0 / o.v;
            Dual {
                v: q,
                d: [
                    (self.d[0] - q * o.d[0]) * inv,
                    (self.d[1] - q * o.d[1]) * inv,
                    (self.d[2] - q * o.d[2]) * inv,
                    (self.d[3] - q * o.d[3]) * inv,
                ],
            }
        }
    }

    impl Mul<f64> for Dual {
        type Output = Dual;
        fn mul(self, k: f64) -> Dual {
            Dual {
                v: self.v * k,
                d: scaled(self.d, k),
            }
        }
    }

    impl Neg for Dual {
        type Output = Dual;
        fn neg(self) -> Dual {
            Dual {
                v: -self.v,
                d: scaled(self.d, -1.0),
            }
        }
    }

    impl Sub<Dual> for f64 {
        type Output = Dual;
        fn sub(self, o: Dual) -> Dual {
            Dual::constant(self) - o
        }
    }

    /// Seeded pred-box parameters plus the pieces shared by every loss.
    struct Overlap {
        iou: Dual,
        union: Dual,
        cw: Dual,
        ch: Dual,
        at_kink: bool,
    }

    fn overlap(px: Dual, py: Dual, pw: Dual, ph: Dual, gt: &Box2D) -> Overlap {
        let gw = Dual::constant(gt.w);
        let gh = Dual::constant(gt.h);
        let off_x = (px - Dual::constant(gt.cx)).abs();
        let off_y = (py - Dual::constant(gt.cy)).abs();

        // center form of min/max over edges, matching geometry::overlap_1d
        let iw_raw = pw.min(gw).min((pw + gw) * 0.5 - off_x);
        let ih_raw = ph.min(gh).min((ph + gh) * 0.5 - off_y);
        let cw = pw.max(gw).max((pw + gw) * 0.5 + off_x);
        let ch = ph.max(gh).max((ph + gh) * 0.5 + off_y);

        // kinks: an aligned pair of edges or a touching overlap
        let aligned = |off: f64, a: f64, b: f64| off == 0.5 * (a - b).abs();
        let at_kink = aligned(off_x.v, pw.v, gt.w)
            || aligned(off_y.v, ph.v, gt.h)
            || iw_raw.v == 0.0
            || ih_raw.v == 0.0;

        let zero = Dual::constant(0.0);
        let inter = iw_raw.max(zero) * ih_raw.max(zero);
        let union = pw * ph + Dual::constant(gt.w * gt.h) - inter;
        Overlap {
            iou: inter / union,
            union,
            cw,
            ch,
            at_kink,
        }
    }

    pub(super) fn grad(kind: LossKind, pred: &Box2D, gt: &Box2D, params: &SiouParams) -> Grad4 {
        let px = Dual::seed(pred.cx, 0);
        let py = Dual::seed(pred.cy, 1);
        let pw = Dual::seed(pred.w, 2);
        let ph = Dual::seed(pred.h, 3);
        let ov = overlap(px, py, pw, ph, gt);
        let one_minus_iou = 1.0 - ov.iou;
        let dx = Dual::constant(gt.cx) - px;
        let dy = Dual::constant(gt.cy) - py;

        match kind {
            LossKind::Iou => Grad4::from_parts(one_minus_iou.d, ov.at_kink),
            LossKind::Giou => {
                let c = ov.cw * ov.ch;
                let total = one_minus_iou + (c - ov.union) / c;
                Grad4::from_parts(total.d, ov.at_kink)
            }
            LossKind::Diou => {
                let total = one_minus_iou + diagonal_penalty(dx, dy, &ov);
                Grad4::from_parts(total.d, ov.at_kink)
            }
            LossKind::Ciou => {
                let ga = (gt.w / gt.h).atan();
                let diff = Dual::constant(ga) - (pw / ph).atan();
                let v = diff * diff * (4.0 / (std::f64::consts::PI * std::f64::consts::PI));
                let alpha = ciou_alpha(ov.iou.v, v.v);
                let total = one_minus_iou + diagonal_penalty(dx, dy, &ov) + v * alpha;
                Grad4::from_parts(total.d, ov.at_kink)
            }
            LossKind::Siou => {
                let sigma_sq = dx * dx + dy * dy;
                let centers_coincide = sigma_sq.v == 0.0;
                let lambda = if centers_coincide {
                    Dual::constant(0.0)
                } else {
                    dx.abs() * dy.abs() * 2.0 / sigma_sq
                };
                let angle_kink = centers_coincide || dx.v == 0.0 || dy.v == 0.0;

                let gamma = 2.0 - lambda;
                let rx = dx / ov.cw;
                let rho_x = rx * rx;
                let rho_y = match params.ch {
                    ChInterpretation::Enclosing => {
                        let ry = dy / ov.ch;
                        ry * ry
                    }
                    ChInterpretation::CenterOffset => {
                        // The offset reading collapses rho_y to an indicator
                        // of any vertical offset; constant almost everywhere.
                        if dy.v == 0.0 {
                            Dual::constant(0.0)
                        } else {
                            Dual::constant(1.0)
                        }
                    }
                };
                let delta = (1.0 - (-(gamma * rho_x)).exp()) + (1.0 - (-(gamma * rho_y)).exp());

                let size_kink = pred.w == gt.w || pred.h == gt.h;
                let omega_w = (pw - Dual::constant(gt.w)).abs() / pw.max(Dual::constant(gt.w));
                let omega_h = (ph - Dual::constant(gt.h)).abs() / ph.max(Dual::constant(gt.h));
                let omega = (1.0 - (-omega_w).exp()).pow_theta(params.theta)
                    + (1.0 - (-omega_h).exp()).pow_theta(params.theta);

                let total = one_minus_iou + (delta + omega) * 0.5;
                Grad4::from_parts(total.d, ov.at_kink || angle_kink || size_kink)
            }
        }
    }

    fn diagonal_penalty(dx: Dual, dy: Dual, ov: &Overlap) -> Dual {
        (dx * dx + dy * dy) / (ov.cw * ov.cw + ov.ch * ov.ch)
    }
}
