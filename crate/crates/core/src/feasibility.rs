//! Collision predicates and validators for both views of a solution.
//!
//! A [`Schedule`] is checked pairwise with the row/column collision condition
//! for strictly periodic jobs, and independently by [`oracle_validate_schedule`]
//! which expands every occurrence over one hyper-period. A [`Packing`] is
//! checked pairwise with the height-divisible rectangle condition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{HarmonicPeriodSet, Instance, Job};
use crate::{JobId, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("job {id}: invalid placement: {reason}")]
    InvalidPlacement { id: JobId, reason: String },
    #[error("solution does not cover the instance (missing {missing:?}, unknown {unknown:?})")]
    JobSetMismatch {
        missing: Vec<JobId>,
        unknown: Vec<JobId>,
    },
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
}

/// First-occurrence start times `s_i`, relative to the origin.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub starts: BTreeMap<JobId, Time>,
}

impl Schedule {
    pub fn new(starts: BTreeMap<JobId, Time>) -> Self {
        Self { starts }
    }

    pub fn start(&self, id: JobId) -> Option<Time> {
        self.starts.get(&id).copied()
    }
}

impl FromIterator<(JobId, Time)> for Schedule {
    fn from_iter<I: IntoIterator<Item = (JobId, Time)>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Bottom-left corner of a rectangle, in columns and rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Time,
    pub y: Time,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Packing {
    pub placements: BTreeMap<JobId, Point>,
}

impl Packing {
    pub fn new(placements: BTreeMap<JobId, Point>) -> Self {
        Self { placements }
    }

    pub fn get(&self, id: JobId) -> Option<Point> {
        self.placements.get(&id).copied()
    }
}

impl FromIterator<(JobId, Point)> for Packing {
    fn from_iter<I: IntoIterator<Item = (JobId, Point)>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// A placed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: Time,
    pub y: Time,
    pub width: Time,
    pub height: Time,
}

impl Rect {
    pub fn of(instance: &Instance, job: &Job, at: Point) -> Self {
        Self {
            x: at.x,
            y: at.y,
            width: job.c,
            height: instance.periods().height(job.period),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// A time unit during which both jobs execute.
    Time(Time),
    /// A unit cell covered by both rectangles.
    Cell { x: Time, y: Time },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Bounds {
        id: JobId,
        reason: String,
    },
    Divisibility {
        id: JobId,
        y: Time,
        height: Time,
    },
    Collision {
        first: JobId,
        second: JobId,
        witness: Witness,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Bounds { id, reason } => write!(f, "job {id} out of bounds: {reason}"),
            Violation::Divisibility { id, y, height } => {
                write!(f, "job {id}: y = {y} is not a multiple of height {height}")
            }
            Violation::Collision {
                first,
                second,
                witness,
            } => match witness {
                Witness::Time(t) => write!(f, "jobs {first} and {second} both run at t = {t}"),
                Witness::Cell { x, y } => {
                    write!(
                        f,
                        "rectangles {first} and {second} overlap at cell ({x}, {y})"
                    )
                }
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_cover<'a>(
    instance: &Instance,
    ids: impl Iterator<Item = &'a JobId>,
) -> Result<(), FeasibilityError> {
    let given: BTreeSet<JobId> = ids.copied().collect();
    let wanted: BTreeSet<JobId> = instance.jobs().iter().map(|j| j.id).collect();
    if given == wanted {
        return Ok(());
    }
    Err(FeasibilityError::JobSetMismatch {
        missing: wanted.difference(&given).copied().collect(),
        unknown: given.difference(&wanted).copied().collect(),
    })
}

/// Checks `0 <= s < T`, `u + c <= w`.
pub fn check_start(job: &Job, start: Time, periods: &HarmonicPeriodSet) -> Result<(), String> {
    let period = periods.period(job.period);
    let w = periods.width();
    if start >= period {
        return Err(format!("start {start} is not below period {period}"));
    }
    let u = start % w;
    if u + job.c > w {
        return Err(format!(
            "occurrence [{u}, {}) does not fit in a window of width {w}",
            u + job.c
        ));
    }
    Ok(())
}

fn collision_time(
    a: &Job,
    sa: Time,
    b: &Job,
    sb: Time,
    periods: &HarmonicPeriodSet,
) -> Option<Time> {
    let (i, si, j, sj) = if a.period <= b.period {
        (a, sa, b, sb)
    } else {
        (b, sb, a, sa)
    };
    let w = periods.width();
    let (ui, vi) = (si % w, si / w);
    let (uj, vj) = (sj % w, sj / w);
    if !(ui < uj + j.c && uj < ui + i.c) {
        return None;
    }
    let step = periods.cumulative(i.period);
    let span = periods.cumulative(j.period) / step;
    if vj < vi || (vj - vi) % step != 0 || (vj - vi) / step >= span {
        return None;
    }
    Some(vj * w + ui.max(uj))
}

/// Whether two placed jobs ever run at the same time.
pub fn jobs_collide(
    job_i: &Job,
    s_i: Time,
    job_j: &Job,
    s_j: Time,
    periods: &HarmonicPeriodSet,
) -> Result<bool, FeasibilityError> {
    for (job, s) in [(job_i, s_i), (job_j, s_j)] {
        check_start(job, s, periods)
            .map_err(|reason| FeasibilityError::InvalidPlacement { id: job.id, reason })?;
    }
    Ok(collision_time(job_i, s_i, job_j, s_j, periods).is_some())
}

fn check_rect(r: &Rect) -> Result<(), String> {
    if r.height == 0 || r.width == 0 {
        return Err("degenerate rectangle".into());
    }
    if !r.y.is_multiple_of(r.height) {
        return Err(format!("y = {} not divisible by height {}", r.y, r.height));
    }
    Ok(())
}

fn overlap_cell(a: &Rect, b: &Rect) -> Option<(Time, Time)> {
    let (tall, short) = if b.height <= a.height { (a, b) } else { (b, a) };
    let horizontal = short.x < tall.x + tall.width && tall.x < short.x + short.width;
    let vertical = tall.y <= short.y && short.y < tall.y + tall.height;
    (horizontal && vertical).then(|| (tall.x.max(short.x), short.y))
}

/// Overlap test for two height-divisible placements with harmonic heights.
pub fn rects_collide(a: &Rect, b: &Rect) -> Result<bool, FeasibilityError> {
    for r in [a, b] {
        check_rect(r).map_err(|reason| FeasibilityError::InvalidPlacement { id: 0, reason })?;
    }
    Ok(overlap_cell(a, b).is_some())
}

pub fn validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
) -> Result<ValidationReport, FeasibilityError> {
    check_cover(instance, schedule.starts.keys())?;
    let periods = instance.periods();
    let mut report = ValidationReport::default();
    for job in instance.jobs() {
        if let Err(reason) = check_start(job, schedule.starts[&job.id], periods) {
            report
                .violations
                .push(Violation::Bounds { id: job.id, reason });
        }
    }
    if !report.ok() {
        return Ok(report);
    }
    let jobs = instance.jobs();
    for (a, job_a) in jobs.iter().enumerate() {
        let sa = schedule.starts[&job_a.id];
        for job_b in &jobs[a + 1..] {
            let sb = schedule.starts[&job_b.id];
            if let Some(t) = collision_time(job_a, sa, job_b, sb, periods) {
                report.violations.push(Violation::Collision {
                    first: job_a.id,
                    second: job_b.id,
                    witness: Witness::Time(t),
                });
            }
        }
    }
    Ok(report)
}

/// Independent check: lays out every occurrence over the observation interval
/// `[0, T_{r-1})` and looks for any overlap.
pub fn oracle_validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
) -> Result<bool, FeasibilityError> {
    check_cover(instance, schedule.starts.keys())?;
    let periods = instance.periods();
    let hyper = periods.hyperperiod();
    let w = periods.width();
    let mut intervals = Vec::new();
    for job in instance.jobs() {
        let s = schedule.starts[&job.id];
        let t = instance.period_of(job);
        if s >= t || s % w + job.c > w {
            return Ok(false);
        }
        intervals.extend((0..hyper / t).map(|j| (s + j * t, s + j * t + job.c)));
    }
    intervals.sort_unstable();
    Ok(intervals.windows(2).all(|pair| pair[0].1 <= pair[1].0))
}

pub fn validate_packing(
    instance: &Instance,
    packing: &Packing,
) -> Result<ValidationReport, FeasibilityError> {
    check_cover(instance, packing.placements.keys())?;
    let periods = instance.periods();
    let (w, bin_h) = (periods.width(), periods.bin_height());
    let mut report = ValidationReport::default();
    let rects: Vec<(JobId, Rect)> = instance
        .jobs()
        .iter()
        .map(|j| (j.id, Rect::of(instance, j, packing.placements[&j.id])))
        .collect();
    for (id, r) in &rects {
        if r.x + r.width > w || r.y + r.height > bin_h {
            report.violations.push(Violation::Bounds {
                id: *id,
                reason: format!(
                    "{}x{} at ({}, {}) leaves the {w}x{bin_h} bin",
                    r.width, r.height, r.x, r.y
                ),
            });
        }
        if !r.y.is_multiple_of(r.height) {
            report.violations.push(Violation::Divisibility {
                id: *id,
                y: r.y,
                height: r.height,
            });
        }
    }
    if !report.ok() {
        return Ok(report);
    }
    for (a, (ia, ra)) in rects.iter().enumerate() {
        for (ib, rb) in &rects[a + 1..] {
            if let Some((x, y)) = overlap_cell(ra, rb) {
                report.violations.push(Violation::Collision {
                    first: *ia,
                    second: *ib,
                    witness: Witness::Cell { x, y },
                });
            }
        }
    }
    Ok(report)
}

/// Whether every taller rectangle ends before any shorter rectangle that lies
/// within its row span begins.
pub fn is_canonical(instance: &Instance, packing: &Packing) -> Result<bool, FeasibilityError> {
    let report = validate_packing(instance, packing)?;
    if !report.ok() {
        return Err(FeasibilityError::InvalidPacking(report.to_string()));
    }
    let rects: Vec<Rect> = instance
        .jobs()
        .iter()
        .map(|j| Rect::of(instance, j, packing.placements[&j.id]))
        .collect();
    for ri in &rects {
        for rj in &rects {
            let enclosed =
                ri.height > rj.height && rj.y >= ri.y && rj.y + rj.height <= ri.y + ri.height;
            if enclosed && ri.x + ri.width > rj.x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(periods: &[Time]) -> HarmonicPeriodSet {
        HarmonicPeriodSet::new(periods).unwrap()
    }

    fn three_jobs() -> Instance {
        Instance::new(
            set(&[2, 4]),
            vec![Job::new(1, 1, 0), Job::new(2, 1, 1), Job::new(3, 1, 1)],
        )
        .unwrap()
    }

    fn rect(x: Time, y: Time, width: Time, height: Time) -> Rect {
        Rect {
            x,
            y,
            width,
            height,
        }
    }

    #[test]
    fn jobs_collide_examples() {
        let ps = set(&[4]);
        let (a, b) = (Job::new(1, 2, 0), Job::new(2, 2, 0));
        assert!(!jobs_collide(&a, 0, &b, 2, &ps).unwrap());
        assert!(jobs_collide(&a, 0, &b, 1, &ps).unwrap());

        let ps = set(&[2, 4]);
        let (a, b) = (Job::new(1, 1, 0), Job::new(2, 1, 1));
        assert!(jobs_collide(&a, 0, &b, 2, &ps).unwrap());
        assert!(jobs_collide(&b, 2, &a, 0, &ps).unwrap());
        assert!(!jobs_collide(&a, 0, &b, 1, &ps).unwrap());
    }

    #[test]
    fn jobs_collide_rejects_out_of_bounds() {
        let ps = set(&[2, 4]);
        let (a, b) = (Job::new(1, 1, 0), Job::new(2, 2, 1));
        assert!(matches!(
            jobs_collide(&a, 2, &b, 0, &ps),
            Err(FeasibilityError::InvalidPlacement { id: 1, .. })
        ));
        assert!(matches!(
            jobs_collide(&a, 0, &b, 1, &ps),
            Err(FeasibilityError::InvalidPlacement { id: 2, .. })
        ));
    }

    #[test]
    fn rects_collide_examples() {
        assert!(rects_collide(&rect(0, 0, 2, 2), &rect(1, 1, 1, 1)).unwrap());
        assert!(!rects_collide(&rect(0, 0, 2, 2), &rect(0, 2, 2, 1)).unwrap());
        assert!(!rects_collide(&rect(0, 0, 2, 2), &rect(2, 0, 1, 1)).unwrap());
        assert!(rects_collide(&rect(0, 1, 1, 2), &rect(0, 0, 1, 1)).is_err());
    }

    #[test]
    fn validate_schedule_examples() {
        let two = Instance::new(set(&[2]), vec![Job::new(1, 1, 0), Job::new(2, 1, 0)]).unwrap();
        let ok: Schedule = [(1, 0), (2, 1)].into_iter().collect();
        assert!(validate_schedule(&two, &ok).unwrap().ok());
        let clash: Schedule = [(1, 0), (2, 0)].into_iter().collect();
        let report = validate_schedule(&two, &clash).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::Collision {
                first: 1,
                second: 2,
                witness: Witness::Time(0)
            }]
        );

        let inst = three_jobs();
        let s: Schedule = [(1, 0), (2, 1), (3, 3)].into_iter().collect();
        assert!(validate_schedule(&inst, &s).unwrap().ok());
        assert!(oracle_validate_schedule(&inst, &s).unwrap());
        let bad: Schedule = [(1, 0), (2, 1), (3, 1)].into_iter().collect();
        assert!(!validate_schedule(&inst, &bad).unwrap().ok());
        assert!(!oracle_validate_schedule(&inst, &bad).unwrap());
    }

    #[test]
    fn validators_reject_mismatched_job_sets() {
        let inst = three_jobs();
        let s: Schedule = [(1, 0), (2, 1)].into_iter().collect();
        assert_eq!(
            validate_schedule(&inst, &s),
            Err(FeasibilityError::JobSetMismatch {
                missing: vec![3],
                unknown: vec![]
            })
        );
        assert!(oracle_validate_schedule(&inst, &s).is_err());
        let p: Packing = [(9, Point { x: 0, y: 0 })].into_iter().collect();
        assert!(validate_packing(&inst, &p).is_err());
    }

    #[test]
    fn bound_violations_reported_before_collisions() {
        let inst = three_jobs();
        let s: Schedule = [(1, 0), (2, 4), (3, 1)].into_iter().collect();
        let report = validate_schedule(&inst, &s).unwrap();
        assert!(matches!(
            report.violations[..],
            [Violation::Bounds { id: 2, .. }]
        ));
        assert!(!oracle_validate_schedule(&inst, &s).unwrap());
    }

    #[test]
    fn empty_instance_is_valid() {
        let inst = Instance::new(set(&[3, 6]), vec![]).unwrap();
        assert!(oracle_validate_schedule(&inst, &Schedule::default()).unwrap());
        assert!(validate_schedule(&inst, &Schedule::default()).unwrap().ok());
    }

    #[test]
    fn validate_packing_examples() {
        // 2x2 bin: widths are processing times, heights follow periods [2, 4].
        let inst = Instance::new(
            set(&[2, 4]),
            vec![Job::new(1, 1, 0), Job::new(2, 1, 1), Job::new(3, 1, 1)],
        )
        .unwrap();
        let p: Packing = [
            (1, Point { x: 0, y: 0 }),
            (2, Point { x: 1, y: 0 }),
            (3, Point { x: 1, y: 1 }),
        ]
        .into_iter()
        .collect();
        assert!(validate_packing(&inst, &p).unwrap().ok());

        let tall = Instance::new(set(&[2, 4]), vec![Job::new(1, 1, 0)]).unwrap();
        let p: Packing = [(1, Point { x: 0, y: 1 })].into_iter().collect();
        let report = validate_packing(&tall, &p).unwrap();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Divisibility {
                id: 1,
                y: 1,
                height: 2
            }
        )));

        let wide = Instance::new(set(&[4]), vec![Job::new(1, 2, 0), Job::new(2, 2, 0)]).unwrap();
        let p: Packing = [(1, Point { x: 0, y: 0 }), (2, Point { x: 1, y: 0 })]
            .into_iter()
            .collect();
        assert_eq!(
            validate_packing(&wide, &p).unwrap().violations,
            vec![Violation::Collision {
                first: 1,
                second: 2,
                witness: Witness::Cell { x: 1, y: 0 }
            }]
        );
    }

    #[test]
    fn canonical_examples() {
        // 4x2 bin: periods [4, 8].
        let inst = Instance::new(set(&[4, 8]), vec![Job::new(1, 2, 0), Job::new(2, 1, 1)]).unwrap();
        let left: Packing = [(1, Point { x: 0, y: 0 }), (2, Point { x: 2, y: 0 })]
            .into_iter()
            .collect();
        assert!(is_canonical(&inst, &left).unwrap());
        let right: Packing = [(1, Point { x: 1, y: 0 }), (2, Point { x: 0, y: 0 })]
            .into_iter()
            .collect();
        assert!(!is_canonical(&inst, &right).unwrap());

        let single = Instance::new(set(&[4, 8]), vec![Job::new(1, 3, 1)]).unwrap();
        let p: Packing = [(1, Point { x: 1, y: 1 })].into_iter().collect();
        assert!(is_canonical(&single, &p).unwrap());

        let clash: Packing = [(1, Point { x: 0, y: 0 }), (2, Point { x: 1, y: 0 })]
            .into_iter()
            .collect();
        assert!(matches!(
            is_canonical(&inst, &clash),
            Err(FeasibilityError::InvalidPacking(_))
        ));
    }
}
