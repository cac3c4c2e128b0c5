//! Rectangle-guided first fit.
//!
//! Phase 1 summarizes every height class by dummy rectangles one level up,
//! bottom-up, so that a dummy of level `k` reserves room for everything of
//! height `H_{k+1}` and below. Phase 2 packs real and dummy rectangles of each
//! height by first fit, tallest first, and drops a level's dummies once that
//! level is done.

use std::cmp::Reverse;
use std::time::Instant;

use crate::domain::Instance;
use crate::transform::{Candidate, Enumeration, RectId, SubBinTree};
use crate::Time;

use super::dummy::{build_dummies_optimistic, build_dummies_pessimistic, DummyRectangle};
use super::{HeuristicOutcome, Method, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DummyMode {
    /// Best-fit bags, no splitting.
    Pessimistic,
    /// One concatenated bag per dummy, rectangles split at the boundary.
    Optimistic,
}

impl DummyMode {
    fn method(self) -> Method {
        match self {
            DummyMode::Pessimistic => Method::RgffPes,
            DummyMode::Optimistic => Method::RgffOpt,
        }
    }
}

/// Rectangles of every level, real and dummy, before ordering.
fn build_levels(instance: &Instance, mode: DummyMode) -> Vec<Vec<(RectId, Time)>> {
    let periods = instance.periods();
    let r = periods.len();
    let mut levels: Vec<Vec<(RectId, Time)>> = vec![Vec::new(); r];
    for job in instance.jobs() {
        levels[job.period].push((RectId::Job(job.id), job.c));
    }
    let mut next_id = 0u32;
    for k in (0..r.saturating_sub(1)).rev() {
        let ratio = periods.fanout(k);
        let dummies: Vec<DummyRectangle> = match mode {
            DummyMode::Pessimistic => {
                build_dummies_pessimistic(&levels[k + 1], ratio, k, &mut next_id)
            }
            DummyMode::Optimistic => {
                build_dummies_optimistic(&levels[k + 1], ratio, k, &mut next_id)
            }
        };
        levels[k].extend(dummies.iter().map(|d| (RectId::Dummy(d.id), d.width)));
    }
    for level in &mut levels {
        // RectId orders jobs before dummies, so equal widths keep reals first.
        level.sort_by_key(|&(id, width)| (Reverse(width), id));
    }
    levels
}

/// Least utilized sub-bin among those accepted by `keep`; ties to lowest q.
fn least_used(
    tree: &SubBinTree,
    level: usize,
    keep: impl Fn(&Candidate) -> bool,
) -> Option<Candidate> {
    tree.candidates(level, Enumeration::FirstEmpty)
        .into_iter()
        .filter(keep)
        .min_by_key(|c| (c.used, c.q))
}

pub fn solve_rgff(instance: &Instance, mode: DummyMode) -> HeuristicOutcome {
    let started = Instant::now();
    let method = mode.method();
    let w = instance.periods().width();
    let levels = build_levels(instance, mode);
    let mut tree = SubBinTree::new(instance.periods());
    let mut trace = Vec::with_capacity(instance.len());
    for (k, rects) in levels.iter().enumerate() {
        if k > 0 {
            tree.remove_dummies(k - 1);
        }
        for &(id, width) in rects {
            let (cand, forced) = match tree.first_candidate(k, |c| c.residual(w) >= width) {
                Some(c) => (c, false),
                None if id.is_dummy() => (
                    least_used(&tree, k, |_| true).expect("every level has a sub-bin"),
                    true,
                ),
                None => match least_used(&tree, k, |c| c.residual_real(w) >= width) {
                    Some(c) => (c, true),
                    None => {
                        let RectId::Job(job) = id else { unreachable!() };
                        return HeuristicOutcome::failure(method, job, trace, started);
                    }
                },
            };
            let placed = tree
                .insert_at(&cand, id, width, forced)
                .expect("insertion checked or forced");
            trace.push(TraceEntry {
                id,
                level: k,
                q: placed.q,
                x: placed.x,
                forced,
            });
        }
    }
    if let Some(last) = levels.len().checked_sub(1) {
        tree.remove_dummies(last);
    }
    debug_assert!(tree.within_capacity());
    HeuristicOutcome::finish(method, instance, &tree, trace, started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{HarmonicPeriodSet, Job};
    use crate::feasibility::validate_schedule;
    use crate::heuristics::{solve_sff, Status};

    #[test]
    fn single_period_matches_sff() {
        let ps = HarmonicPeriodSet::new(&[10]).unwrap();
        let inst = Instance::new(
            ps,
            vec![Job::new(1, 4, 0), Job::new(2, 3, 0), Job::new(3, 3, 0)],
        )
        .unwrap();
        let sff = solve_sff(&inst);
        for mode in [DummyMode::Pessimistic, DummyMode::Optimistic] {
            let out = solve_rgff(&inst, mode);
            assert_eq!(out.status, sff.status);
            assert_eq!(out.schedule, sff.schedule);
            assert!(out.trace.iter().all(|t| !t.id.is_dummy()));
        }
    }

    #[test]
    fn three_job_instance() {
        let inst = Instance::new(
            HarmonicPeriodSet::new(&[2, 4]).unwrap(),
            vec![Job::new(1, 1, 0), Job::new(2, 1, 1), Job::new(3, 1, 1)],
        )
        .unwrap();
        for mode in [DummyMode::Pessimistic, DummyMode::Optimistic] {
            let out = solve_rgff(&inst, mode);
            assert!(out.solved());
            let s = out.schedule.unwrap();
            assert!(validate_schedule(&inst, &s).unwrap().ok());
            // One dummy of width 1 joins job 1 at level 0.
            assert_eq!(out.trace.iter().filter(|t| t.id.is_dummy()).count(), 1);
        }
    }

    #[test]
    fn look_ahead_beats_sff() {
        // w = 4, heights (4, 2, 1). S-FF stacks both 1-wide period-8 jobs in
        // rows 0..2, leaving room for only two of the 3-wide period-16 jobs.
        // The level-1 dummies (width 3 each) push the 1-wide jobs apart.
        let ps = HarmonicPeriodSet::new(&[4, 8, 16]).unwrap();
        let inst = Instance::new(
            ps,
            vec![
                Job::new(1, 1, 1),
                Job::new(2, 1, 1),
                Job::new(3, 3, 2),
                Job::new(4, 3, 2),
                Job::new(5, 3, 2),
            ],
        )
        .unwrap();
        let sff = solve_sff(&inst);
        assert_eq!(sff.failed_job, Some(5));
        for mode in [DummyMode::Pessimistic, DummyMode::Optimistic] {
            let out = solve_rgff(&inst, mode);
            assert!(out.solved());
            assert!(validate_schedule(&inst, out.schedule.as_ref().unwrap())
                .unwrap()
                .ok());
            let real_q: Vec<Time> = out
                .trace
                .iter()
                .filter(|t| t.level == 1 && !t.id.is_dummy())
                .map(|t| t.q)
                .collect();
            assert_eq!(real_q, vec![0, 1]);
        }
    }

    #[test]
    fn fails_when_real_rectangle_cannot_fit() {
        let inst = Instance::new(
            HarmonicPeriodSet::new(&[3, 6]).unwrap(),
            vec![Job::new(1, 2, 0), Job::new(2, 1, 1), Job::new(3, 2, 1)],
        )
        .unwrap();
        for mode in [DummyMode::Pessimistic, DummyMode::Optimistic] {
            let out = solve_rgff(&inst, mode);
            assert_eq!(out.status, Status::Failed);
            assert_eq!(out.failed_job, Some(3));
        }
    }
}
