//! SVG drawings of packings. Row 0 is at the bottom.

use std::fmt::Write;

use thiserror::Error;

use crate::domain::Instance;
use crate::feasibility::{validate_packing, Packing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Pixel size of one column and one row.
    pub cell: (f64, f64),
    /// Draw sub-bin boundaries.
    pub contours: bool,
    /// Draw whatever is placed, without validating.
    pub partial: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            cell: (8.0, 24.0),
            contours: true,
            partial: false,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];

pub fn render_packing(
    instance: &Instance,
    packing: &Packing,
    options: &RenderOptions,
) -> Result<String, RenderError> {
    if !options.partial {
        let report = validate_packing(instance, packing)
            .map_err(|e| RenderError::InvalidPacking(e.to_string()))?;
        if !report.ok() {
            return Err(RenderError::InvalidPacking(report.to_string()));
        }
    }
    let periods = instance.periods();
    let (w, h) = (periods.width(), periods.bin_height());
    let (sx, sy) = options.cell;
    let (width, height) = (w as f64 * sx, h as f64 * sy);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect class="bin" x="0" y="0" width="{width}" height="{height}" fill="white" stroke="black"/>"#
    )
    .unwrap();
    for row in 1..h {
        let y = row as f64 * sy;
        writeln!(
            out,
            r##"<line class="grid" x1="0" y1="{y}" x2="{width}" y2="{y}" stroke="#dddddd"/>"##
        )
        .unwrap();
    }
    for (&id, at) in &packing.placements {
        let Some(job) = instance.job(id) else {
            continue;
        };
        let rh = periods.height(job.period);
        let x = at.x as f64 * sx;
        let y = (h.saturating_sub(at.y + rh)) as f64 * sy;
        writeln!(
            out,
            r#"<rect class="job" id="job-{id}" x="{x}" y="{y}" width="{}" height="{}" fill="{}" stroke="black"><title>job {id}: c={} T={}</title></rect>"#,
            job.c as f64 * sx,
            rh as f64 * sy,
            PALETTE[job.period % PALETTE.len()],
            job.c,
            instance.period_of(job),
        )
        .unwrap();
    }
    if options.contours {
        // Boundaries of the tallest sub-bins first; each row boundary once.
        let mut drawn = vec![false; h as usize];
        for k in 1..periods.len() {
            let step = periods.height(k);
            for row in (step..h).step_by(step as usize) {
                if std::mem::replace(&mut drawn[row as usize], true) {
                    continue;
                }
                let y = (h - row) as f64 * sy;
                writeln!(
                    out,
                    r#"<line class="contour" x1="0" y1="{y}" x2="{width}" y2="{y}" stroke="black" stroke-width="{}" stroke-dasharray="4 2"/>"#,
                    (periods.len() - k) as f64
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
