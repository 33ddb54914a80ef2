//! Axis-aligned 2D boxes and the overlap primitives every loss builds on.
//!
//! Boxes are stored as center + size. Corner form is derived on demand for
//! the overlap math and never leaves this module's function boundaries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Axis-aligned box: center `(cx, cy)` with width `w` and height `h`.
///
/// Valid boxes have strictly positive, finite sizes and finite centers.
/// Operations in this crate assume validity; construct through
/// [`Box2D::new`] when the inputs are untrusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box2D {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum BoxError {
    #[error("box sizes must be strictly positive, got w={w}, h={h}")]
    NonPositiveSize { w: f64, h: f64 },
    #[error("box fields must be finite, got ({cx}, {cy}, {w}, {h})")]
    NonFinite { cx: f64, cy: f64, w: f64, h: f64 },
}

impl Box2D {
    /// Validating constructor.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64) -> Result<Self, BoxError> {
        if !(cx.is_finite() && cy.is_finite() && w.is_finite() && h.is_finite()) {
            return Err(BoxError::NonFinite { cx, cy, w, h });
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(BoxError::NonPositiveSize { w, h });
        }
        Ok(Self { cx, cy, w, h })
    }

    /// Unchecked constructor for inputs known to be valid.
    pub fn from_parts(cx: f64, cy: f64, w: f64, h: f64) -> Self {
        debug_assert!(w > 0.0 && h > 0.0);
        Self { cx, cy, w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn is_valid(&self) -> bool {
        Box2D::new(self.cx, self.cy, self.w, self.h).is_ok()
    }

    #[cfg(test)]
    pub(crate) fn left(&self) -> f64 {
        self.cx - 0.5 * self.w
    }

    #[cfg(test)]
    pub(crate) fn right(&self) -> f64 {
        self.cx + 0.5 * self.w
    }

    #[cfg(test)]
    pub(crate) fn bottom(&self) -> f64 {
        self.cy - 0.5 * self.h
    }

    #[cfg(test)]
    pub(crate) fn top(&self) -> f64 {
        self.cy + 0.5 * self.h
    }
}

/// Smallest axis-aligned box containing two boxes, stored as its dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub cw: f64,
    pub ch: f64,
}

/// Signed overlap of two centered intervals:
/// `min(right edges) - max(left edges)` rewritten in center form as
/// `min(len_a, len_b, (len_a + len_b)/2 - |c_a - c_b|)`. The center form
/// returns the length exactly for coincident intervals and avoids the
/// cancellation of forming absolute edge coordinates.
pub(crate) fn overlap_1d(c_a: f64, len_a: f64, c_b: f64, len_b: f64) -> f64 {
    len_a
        .min(len_b)
        .min(0.5 * (len_a + len_b) - (c_a - c_b).abs())
}

/// Span of the smallest interval covering both inputs:
/// `max(len_a, len_b, (len_a + len_b)/2 + |c_a - c_b|)`.
pub(crate) fn span_1d(c_a: f64, len_a: f64, c_b: f64, len_b: f64) -> f64 {
    len_a
        .max(len_b)
        .max(0.5 * (len_a + len_b) + (c_a - c_b).abs())
}

/// Overlap area of two boxes; zero when they are disjoint or merely touch.
pub fn intersection_area(a: &Box2D, b: &Box2D) -> f64 {
    let iw = overlap_1d(a.cx, a.w, b.cx, b.w);
    let ih = overlap_1d(a.cy, a.h, b.cy, b.h);
    if iw > 0.0 && ih > 0.0 {
        iw * ih
    } else {
        0.0
    }
}

/// Intersection over union. Symmetric, in `[0, 1]`, exactly 1 for boxes
/// covering the same region and only for those.
pub fn iou(a: &Box2D, b: &Box2D) -> f64 {
    let inter = intersection_area(a, b);
    inter / (a.area() + b.area() - inter)
}

/// Dimensions of the smallest box enclosing both inputs.
pub fn enclosing(a: &Box2D, b: &Box2D) -> Enclosure {
    Enclosure {
        cw: span_1d(a.cx, a.w, b.cx, b.w),
        ch: span_1d(a.cy, a.h, b.cy, b.h),
    }
}
