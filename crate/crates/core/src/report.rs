//! Textual output formats: RFC 4180 CSV and JSON records.
//!
//! Floats are written with Rust's shortest round-trip formatting, so files
//! are bitwise reproducible for identical inputs and parse back to the
//! exact values.

use crate::loss::LossKind;
use crate::regression::Trajectory;
use crate::sim::{ErrorSeries, ErrorSurface};

const CRLF: &str = "\r\n";

/// `iteration,E` rows of an error curve.
pub fn series_csv(series: &ErrorSeries) -> String {
    let mut out = String::with_capacity(series.per_iteration_total.len() * 24);
    out.push_str("iteration,E");
    out.push_str(CRLF);
    for (i, e) in series.per_iteration_total.iter().enumerate() {
        out.push_str(&format!("{i},{e}"));
        out.push_str(CRLF);
    }
    out
}

/// Side-by-side error curves, one `E_<loss>` column per kind.
///
/// All series must have the same length.
pub fn comparison_csv(columns: &[(LossKind, &ErrorSeries)]) -> String {
    assert!(!columns.is_empty());
    let rows = columns[0].1.per_iteration_total.len();
    assert!(
        columns.iter().all(|(_, s)| s.per_iteration_total.len() == rows),
        "comparison requires equally long series"
    );
    let mut out = String::from("iteration");
    for (kind, _) in columns {
        out.push_str(&format!(",E_{kind}"));
    }
    out.push_str(CRLF);
    for i in 0..rows {
        out.push_str(&i.to_string());
        for (_, series) in columns {
            out.push_str(&format!(",{}", series.per_iteration_total[i]));
        }
        out.push_str(CRLF);
    }
    out
}

/// `cell_x_center,cell_y_center,mean_error,count` rows; empty cells are
/// omitted rather than written as zeros.
pub fn surface_csv(surface: &ErrorSurface) -> String {
    let mut out = String::from("cell_x_center,cell_y_center,mean_error,count");
    out.push_str(CRLF);
    for iy in 0..surface.resolution {
        for ix in 0..surface.resolution {
            let cell = &surface.cells[iy * surface.resolution + ix];
            if let Some(mean) = cell.mean_error {
                let c = surface.cell_center(ix, iy);
                out.push_str(&format!("{},{},{},{}", c.x, c.y, mean, cell.count));
                out.push_str(CRLF);
            }
        }
    }
    out
}

/// `iteration,cx,cy,w,h,l1_error` rows of a single fit.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("iteration,cx,cy,w,h,l1_error");
    out.push_str(CRLF);
    for (i, (b, l1)) in trajectory
        .boxes
        .iter()
        .zip(&trajectory.l1_errors)
        .enumerate()
    {
        out.push_str(&format!("{i},{},{},{},{},{l1}", b.cx, b.cy, b.w, b.h));
        out.push_str(CRLF);
    }
    out
}
