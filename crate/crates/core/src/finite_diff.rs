//! Central finite differences over the four box parameters.
//!
//! This is the independent oracle the analytic gradients are checked
//! against; it only ever evaluates the scalar loss.

use crate::geometry::Box2D;
use crate::loss::{loss_value, Grad4, LossKind, SiouParams};

/// Central-difference gradient of an arbitrary scalar function of a box.
///
/// Requires `at.w > 2h` and `at.h > 2h` so every perturbed box stays valid.
pub fn gradient<F>(f: F, at: &Box2D, h: f64) -> Grad4
where
    F: Fn(&Box2D) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    assert!(
        at.w > 2.0 * h && at.h > 2.0 * h,
        "box sizes must exceed twice the step"
    );
    let nudge = |i: usize, s: f64| {
        let mut b = *at;
        match i {
            0 => b.cx += s,
            1 => b.cy += s,
            2 => b.w += s,
            _ => b.h += s,
        }
        b
    };
    let mut d = [0.0; 4];
    for (i, slot) in d.iter_mut().enumerate() {
        *slot = (f(&nudge(i, h)) - f(&nudge(i, -h))) / (2.0 * h);
    }
    Grad4::from_parts(d, false)
}

/// Numeric gradient of a loss, the counterpart of [`crate::loss::grad`].
///
/// CIoU's trade-off factor is held at its value at `pred` while
/// differencing, mirroring its constant treatment during differentiation.
pub fn grad_fd(kind: LossKind, pred: &Box2D, gt: &Box2D, params: &SiouParams, h: f64) -> Grad4 {
    match kind {
        LossKind::Ciou => {
            let alpha = crate::loss::ciou_alpha_at(pred, gt);
            gradient(|b| crate::loss::ciou_frozen_alpha(b, gt, alpha), pred, h)
        }
        _ => gradient(|b| loss_value(kind, b, gt, params), pred, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(cx: f64, cy: f64, w: f64, h: f64) -> Box2D {
        Box2D::new(cx, cy, w, h).unwrap()
    }

    #[test]
    fn recovers_quadratic_derivatives_exactly() {
        // f = cx^2 + 3*cy^2 + w*h; central differences are exact on quadratics
        let f = |x: &Box2D| x.cx * x.cx + 3.0 * x.cy * x.cy + x.w * x.h;
        let at = b(1.5, -2.0, 2.0, 3.0);
        let g = gradient(f, &at, 1e-3);
        assert!((g.d_cx - 3.0).abs() < 1e-9);
        assert!((g.d_cy + 12.0).abs() < 1e-9);
        assert!((g.d_w - 3.0).abs() < 1e-9);
        assert!((g.d_h - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_on_constant_plateau() {
        // fully disjoint boxes under the plain IoU loss sit on a flat region
        let pred = b(20.0, 20.0, 1.0, 1.0);
        let gt = b(0.0, 0.0, 2.0, 2.0);
        let g = grad_fd(LossKind::Iou, &pred, &gt, &SiouParams::default(), 1e-6);
        assert_eq!(g.components(), [0.0; 4]);
    }

    #[test]
    #[should_panic(expected = "twice the step")]
    fn rejects_steps_larger_than_the_box() {
        let at = b(0.0, 0.0, 1e-3, 1.0);
        gradient(|x| x.w, &at, 1e-3);
    }
}
