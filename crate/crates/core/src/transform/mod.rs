//! Conversions between schedules and height-divisible packings, and the
//! canonical form of a packing.
//!
//! A job with start `s = u + v * w` and period index `p` maps to the rectangle
//! at `x = u`, `y = H_p * flip(v, p, b)`. The inverse reads
//! `v = flip(y / H_p, p, bflip(b, p))`. Collision-freeness is preserved in both
//! directions.

pub mod tree;

use thiserror::Error;

use crate::domain::radix::{bflip, flip};
use crate::domain::Instance;
use crate::feasibility::{check_start, validate_packing, Packing, Point, Schedule};
use crate::Time;

pub use tree::{
    Candidate, Enumeration, NodeId, PlacedRectangle, RectId, Slot, SubBinTree, TreeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
}

/// Orders jobs by height descending, width descending, then id.
fn packing_order(instance: &Instance) -> Vec<crate::Job> {
    let mut jobs = instance.jobs().to_vec();
    jobs.sort_by_key(|j| (j.period, std::cmp::Reverse(j.c), j.id));
    jobs
}

pub fn schedule_to_packing(
    instance: &Instance,
    schedule: &Schedule,
) -> Result<Packing, TransformError> {
    let periods = instance.periods();
    let w = periods.width();
    let mut packing = Packing::default();
    for job in instance.jobs() {
        let s = schedule.start(job.id).ok_or_else(|| {
            TransformError::InvalidSchedule(format!("job {} has no start", job.id))
        })?;
        check_start(job, s, periods)
            .map_err(|e| TransformError::InvalidSchedule(format!("job {}: {e}", job.id)))?;
        let row = flip(s / w, job.period, periods.bases())
            .map_err(|e| TransformError::InvalidSchedule(e.to_string()))?;
        packing.placements.insert(
            job.id,
            Point {
                x: s % w,
                y: periods.height(job.period) * row,
            },
        );
    }
    Ok(packing)
}

pub fn packing_to_schedule(
    instance: &Instance,
    packing: &Packing,
) -> Result<Schedule, TransformError> {
    let periods = instance.periods();
    let (w, bin_h) = (periods.width(), periods.bin_height());
    let mut schedule = Schedule::default();
    for job in instance.jobs() {
        let at = packing.get(job.id).ok_or_else(|| {
            TransformError::InvalidPacking(format!("job {} is not placed", job.id))
        })?;
        let h = periods.height(job.period);
        if at.x + job.c > w || at.y + h > bin_h || at.y % h != 0 {
            return Err(TransformError::InvalidPacking(format!(
                "job {}: {}x{h} at ({}, {}) is out of bounds or misaligned",
                job.id, job.c, at.x, at.y
            )));
        }
        let flipped = bflip(periods.bases(), job.period)
            .map_err(|e| TransformError::InvalidPacking(e.to_string()))?;
        let v = flip(at.y / h, job.period, &flipped)
            .map_err(|e| TransformError::InvalidPacking(e.to_string()))?;
        schedule.starts.insert(job.id, at.x + v * w);
    }
    Ok(schedule)
}

/// Rebuilds a valid packing in canonical form: in every sub-bin the
/// rectangles of its own height come first (widest first, then by id),
/// followed by the child sub-bins.
pub fn canonicalize(instance: &Instance, packing: &Packing) -> Result<Packing, TransformError> {
    let report = validate_packing(instance, packing)
        .map_err(|e| TransformError::InvalidPacking(e.to_string()))?;
    if !report.ok() {
        return Err(TransformError::InvalidPacking(report.to_string()));
    }
    let periods = instance.periods();
    let mut tree = SubBinTree::new(periods);
    for job in packing_order(instance) {
        let y: Time = packing.placements[&job.id].y;
        let q = y / periods.height(job.period);
        tree.insert(job.period, q, RectId::Job(job.id), job.c, false)
            .map_err(|e| TransformError::InvalidPacking(e.to_string()))?;
    }
    tree.to_packing()
        .map_err(|e| TransformError::InvalidPacking(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{HarmonicPeriodSet, Job};
    use crate::feasibility::is_canonical;

    fn three_jobs() -> Instance {
        Instance::new(
            HarmonicPeriodSet::new(&[2, 4]).unwrap(),
            vec![Job::new(1, 1, 0), Job::new(2, 1, 1), Job::new(3, 1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn maps_three_job_schedule() {
        let inst = three_jobs();
        let s: Schedule = [(1, 0), (2, 1), (3, 3)].into_iter().collect();
        let p = schedule_to_packing(&inst, &s).unwrap();
        assert_eq!(p.get(1), Some(Point { x: 0, y: 0 }));
        assert_eq!(p.get(2), Some(Point { x: 1, y: 0 }));
        assert_eq!(p.get(3), Some(Point { x: 1, y: 1 }));
        assert_eq!(packing_to_schedule(&inst, &p).unwrap(), s);
    }

    #[test]
    fn worked_row_from_figure_instance() {
        // Periods 20/40/80/240; a period-240 job in schedule row 6 sits in
        // packing row 4 and back.
        let ps = HarmonicPeriodSet::new(&[20, 40, 80, 240]).unwrap();
        let inst = Instance::new(ps, vec![Job::new(11, 5, 3)]).unwrap();
        let s: Schedule = [(11, 6 * 20 + 3)].into_iter().collect();
        let p = schedule_to_packing(&inst, &s).unwrap();
        assert_eq!(p.get(11), Some(Point { x: 3, y: 4 }));
        assert_eq!(packing_to_schedule(&inst, &p).unwrap(), s);
    }

    #[test]
    fn bottom_row_maps_to_first_window() {
        let ps = HarmonicPeriodSet::new(&[3, 6, 12]).unwrap();
        let inst = Instance::new(ps, vec![Job::new(1, 2, 2)]).unwrap();
        let p: Packing = [(1, Point { x: 1, y: 0 })].into_iter().collect();
        assert_eq!(packing_to_schedule(&inst, &p).unwrap().start(1), Some(1));
    }

    #[test]
    fn rejects_invalid_inputs() {
        let inst = three_jobs();
        let s: Schedule = [(1, 2), (2, 1), (3, 3)].into_iter().collect();
        assert!(matches!(
            schedule_to_packing(&inst, &s),
            Err(TransformError::InvalidSchedule(_))
        ));
        let p: Packing = [
            (1, Point { x: 0, y: 1 }),
            (2, Point { x: 1, y: 0 }),
            (3, Point { x: 1, y: 1 }),
        ]
        .into_iter()
        .collect();
        assert!(matches!(
            packing_to_schedule(&inst, &p),
            Err(TransformError::InvalidPacking(_))
        ));
        assert!(canonicalize(&inst, &p).is_err());
    }

    #[test]
    fn canonicalize_moves_taller_left() {
        let ps = HarmonicPeriodSet::new(&[4, 8]).unwrap();
        let inst = Instance::new(ps, vec![Job::new(1, 2, 0), Job::new(2, 1, 1)]).unwrap();
        let p: Packing = [(1, Point { x: 1, y: 0 }), (2, Point { x: 0, y: 0 })]
            .into_iter()
            .collect();
        assert!(!is_canonical(&inst, &p).unwrap());
        let c = canonicalize(&inst, &p).unwrap();
        assert_eq!(c.get(1), Some(Point { x: 0, y: 0 }));
        assert_eq!(c.get(2), Some(Point { x: 2, y: 0 }));
        assert!(is_canonical(&inst, &c).unwrap());
        assert_eq!(canonicalize(&inst, &c).unwrap(), c);
    }
}
