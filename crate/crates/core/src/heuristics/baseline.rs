use std::time::Instant;

use crate::domain::radix::{bflip, flip};
use crate::domain::Instance;
use crate::transform::{Candidate, Enumeration, RectId, SubBinTree};

use super::{order_jobs, HeuristicOutcome, Method, TraceEntry};

/// Places jobs one by one in rate-monotonic order; `select` picks the
/// sub-bin or gives up.
fn greedy(
    instance: &Instance,
    method: Method,
    mut select: impl FnMut(&SubBinTree, usize, u64) -> Option<Candidate>,
) -> HeuristicOutcome {
    let started = Instant::now();
    let mut tree = SubBinTree::new(instance.periods());
    let mut trace = Vec::with_capacity(instance.len());
    for job in order_jobs(instance) {
        let Some(cand) = select(&tree, job.period, job.c) else {
            return HeuristicOutcome::failure(method, job.id, trace, started);
        };
        let placed = tree
            .insert_at(&cand, RectId::Job(job.id), job.c, false)
            .expect("selected sub-bin has room");
        trace.push(TraceEntry {
            id: placed.id,
            level: placed.level,
            q: placed.q,
            x: placed.x,
            forced: false,
        });
    }
    HeuristicOutcome::finish(method, instance, &tree, trace, started)
}

/// Time-wise first fit: the earliest start time among sub-bins with room.
pub fn solve_tff(instance: &Instance) -> HeuristicOutcome {
    let w = instance.periods().width();
    let bases = instance.periods().bases().to_vec();
    greedy(instance, Method::Tff, |tree, level, width| {
        let back = bflip(&bases, level).expect("level within base vector");
        tree.candidates(level, Enumeration::EveryEmptyChild)
            .into_iter()
            .filter(|c| c.residual(w) >= width)
            .min_by_key(|c| {
                // Within one level the rows v are distinct, and u < w, so
                // ordering by (v, u) is ordering by start time.
                let v = flip(c.q, level, &back).expect("q below B_level");
                (v, c.next_x)
            })
    })
}

/// Spatial first fit: the lowest sub-bin with room.
pub fn solve_sff(instance: &Instance) -> HeuristicOutcome {
    let w = instance.periods().width();
    greedy(instance, Method::Sff, |tree, level, width| {
        tree.first_candidate(level, |c| c.residual(w) >= width)
    })
}

/// Spatial best fit: the sub-bin left with the least room, lowest first.
pub fn solve_sbf(instance: &Instance) -> HeuristicOutcome {
    let w = instance.periods().width();
    greedy(instance, Method::Sbf, |tree, level, width| {
        tree.candidates(level, Enumeration::FirstEmpty)
            .into_iter()
            .filter(|c| c.residual(w) >= width)
            .min_by_key(|c| (c.residual(w) - width, c.q))
    })
}

/// Least occupied sub-bin; fails when that one has no room.
pub fn solve_lpt(instance: &Instance) -> HeuristicOutcome {
    let w = instance.periods().width();
    greedy(instance, Method::Lpt, |tree, level, width| {
        tree.candidates(level, Enumeration::FirstEmpty)
            .into_iter()
            .min_by_key(|c| (c.used, c.q))
            .filter(|c| c.residual(w) >= width)
    })
}
