//! Complete decision procedures.
//!
//! [`solve_exact`] searches assignments of rectangles to sub-bins of their
//! height, keeping every unit row within the bin width. [`brute_force_enumerate`]
//! tries every start time directly and serves as an independent oracle on tiny
//! instances. [`export_bin_model`] writes the constraint structure as text.

mod brute;
mod model;

use std::cmp::Reverse;
use std::time::{Duration, Instant};

use num_traits::One;

use crate::domain::{Instance, Job};
use crate::feasibility::Schedule;
use crate::transform::{packing_to_schedule, Candidate, Enumeration, NodeId, RectId, SubBinTree};
use crate::Time;

pub use brute::{brute_force_enumerate, BruteForceError, DEFAULT_BRUTE_FORCE_CAP};
pub use model::export_bin_model;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn seconds(s: f64) -> Self {
        Self {
            time_limit: Some(Duration::from_secs_f64(s)),
            node_limit: None,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Self {
            time_limit: None,
            node_limit: Some(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactStatus {
    Feasible,
    Infeasible,
    /// The budget ran out before the search finished.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub status: ExactStatus,
    pub schedule: Option<Schedule>,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Restrict first placements into empty siblings to the lowest one, and
    /// identical consecutive rectangles to non-decreasing sub-bins.
    pub symmetry_breaking: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            symmetry_breaking: true,
        }
    }
}

pub fn solve_exact(instance: &Instance, budget: SearchBudget) -> ExactOutcome {
    solve_exact_with(instance, budget, ExactOptions::default())
}

struct Frame {
    cands: Vec<Candidate>,
    next: usize,
    placed: Option<(NodeId, Time)>,
}

pub fn solve_exact_with(
    instance: &Instance,
    budget: SearchBudget,
    options: ExactOptions,
) -> ExactOutcome {
    let started = Instant::now();
    let periods = instance.periods();
    let w = periods.width();
    let done = |status, schedule, nodes| ExactOutcome {
        status,
        schedule,
        nodes,
        elapsed: started.elapsed(),
    };
    if instance.utilization() > One::one() || instance.jobs().iter().any(|j| j.c > w) {
        return done(ExactStatus::Infeasible, None, 0);
    }

    let mut items: Vec<Job> = instance.jobs().to_vec();
    items.sort_by_key(|j| (j.period, Reverse(j.c), j.id));
    let n = items.len();
    // Suffix sums of area and minima of width over the remaining items.
    let mut area = vec![0; n + 1];
    let mut min_width = vec![Time::MAX; n + 1];
    for d in (0..n).rev() {
        area[d] = area[d + 1] + items[d].c * periods.height(items[d].period);
        min_width[d] = min_width[d + 1].min(items[d].c);
    }
    let mode = if options.symmetry_breaking {
        Enumeration::FirstEmpty
    } else {
        Enumeration::Exhaustive
    };

    let mut tree = SubBinTree::new(periods);
    let mut stack: Vec<Frame> = Vec::with_capacity(n);
    let mut nodes = 0u64;
    let mut descend = true;
    loop {
        if descend {
            let d = stack.len();
            if d == n {
                let packing = tree.to_packing().expect("no dummies in exact search");
                let schedule =
                    packing_to_schedule(instance, &packing).expect("tree packings are in bounds");
                return done(ExactStatus::Feasible, Some(schedule), nodes);
            }
            let item = &items[d];
            let level = item.period;
            if !area_fits(&tree, level, w, min_width[d], area[d]) {
                descend = false;
                continue;
            }
            let floor = match stack.last() {
                Some(prev)
                    if options.symmetry_breaking
                        && items[d - 1].period == level
                        && items[d - 1].c == item.c =>
                {
                    prev.placed.map_or(0, |(_, q)| q)
                }
                _ => 0,
            };
            let cands = tree
                .candidates(level, mode)
                .into_iter()
                .filter(|c| c.q >= floor && c.residual(w) >= item.c)
                .collect();
            stack.push(Frame {
                cands,
                next: 0,
                placed: None,
            });
        }
        let Some(frame) = stack.last_mut() else {
            return done(ExactStatus::Infeasible, None, nodes);
        };
        if let Some((node, _)) = frame.placed.take() {
            tree.pop_item(node);
        }
        if frame.next == frame.cands.len() {
            stack.pop();
            descend = false;
            continue;
        }
        let cand = frame.cands[frame.next];
        frame.next += 1;
        let d = stack.len() - 1;
        let placed = tree
            .insert_at(&cand, RectId::Job(items[d].id), items[d].c, false)
            .expect("candidate was filtered by residual");
        stack.last_mut().unwrap().placed = Some((placed.node, placed.q));
        nodes += 1;
        if budget.node_limit.is_some_and(|limit| nodes >= limit)
            || (nodes.is_multiple_of(1024)
                && budget
                    .time_limit
                    .is_some_and(|limit| started.elapsed() >= limit))
        {
            return done(ExactStatus::Unknown, None, nodes);
        }
        descend = true;
    }
}

/// With only rectangles of level `level` or taller placed, every level-`level`
/// sub-bin has the same usage in all its rows, so its free area is
/// `H_level * residual`. Sub-bins narrower than every remaining rectangle are
/// useless.
fn area_fits(tree: &SubBinTree, level: usize, w: Time, min_width: Time, remaining: Time) -> bool {
    let h = tree.height(level);
    let mut usable = 0;
    for q in 0..tree.sub_bins(level) {
        let residual = tree.candidate(level, q).expect("q in range").residual(w);
        if residual >= min_width {
            usable += h * residual;
            if usable >= remaining {
                return true;
            }
        }
    }
    usable >= remaining
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::HarmonicPeriodSet;
    use crate::feasibility::oracle_validate_schedule;

    fn inst(periods: &[Time], jobs: &[(Time, usize)]) -> Instance {
        let jobs = jobs
            .iter()
            .enumerate()
            .map(|(i, &(c, p))| Job::new(i as u32 + 1, c, p))
            .collect();
        Instance::new(HarmonicPeriodSet::new(periods).unwrap(), jobs).unwrap()
    }

    #[test]
    fn three_job_instance_feasible() {
        let i = inst(&[2, 4], &[(1, 0), (1, 1), (1, 1)]);
        let out = solve_exact(&i, SearchBudget::unlimited());
        assert_eq!(out.status, ExactStatus::Feasible);
        assert!(oracle_validate_schedule(&i, out.schedule.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn wide_short_job_infeasible() {
        let i = inst(&[3, 6], &[(2, 0), (1, 1), (2, 1)]);
        let out = solve_exact(&i, SearchBudget::unlimited());
        assert_eq!(out.status, ExactStatus::Infeasible);
        assert!(out.schedule.is_none());
    }

    #[test]
    fn overloaded_instance_rejected_without_search() {
        let i = inst(&[2, 4], &[(2, 0), (1, 1)]);
        let out = solve_exact(&i, SearchBudget::unlimited());
        assert_eq!((out.status, out.nodes), (ExactStatus::Infeasible, 0));
    }

    #[test]
    fn empty_instance_feasible() {
        let i = inst(&[5], &[]);
        let out = solve_exact(&i, SearchBudget::unlimited());
        assert_eq!(out.status, ExactStatus::Feasible);
        assert_eq!(out.schedule, Some(Schedule::default()));
    }

    #[test]
    fn node_budget_yields_unknown() {
        // U = 1 but infeasible: the 2-wide period-6 job never fits beside
        // the period-3 one, which takes one node to discover.
        let i = inst(&[3, 6], &[(2, 0), (2, 1)]);
        assert_eq!(
            solve_exact(&i, SearchBudget::unlimited()).status,
            ExactStatus::Infeasible
        );
        let out = solve_exact(&i, SearchBudget::nodes(1));
        assert_eq!(out.status, ExactStatus::Unknown);
        assert_eq!(out.nodes, 1);
    }

    #[test]
    fn symmetry_toggle_keeps_verdict() {
        let i = inst(
            &[2, 4, 8],
            &[(1, 1), (1, 1), (1, 2), (1, 2), (1, 2), (1, 2)],
        );
        let on = solve_exact(&i, SearchBudget::unlimited());
        let off = solve_exact_with(
            &i,
            SearchBudget::unlimited(),
            ExactOptions {
                symmetry_breaking: false,
            },
        );
        assert_eq!(on.status, ExactStatus::Feasible);
        assert_eq!(off.status, ExactStatus::Feasible);
    }
}
