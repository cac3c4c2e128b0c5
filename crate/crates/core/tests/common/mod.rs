//! Random and exhaustive instance families shared by the integration tests.

#![allow(dead_code)]

use harmonic_sched::feasibility::Point;
use harmonic_sched::{HarmonicPeriodSet, Instance, Job, Packing, Schedule, Time};
use rand::Rng;

/// Periods `w * B_k` for a random `w <= max_w` and up to `max_r` periods with
/// ratios 2 or 3.
pub fn random_periods<R: Rng>(rng: &mut R, max_w: Time, max_r: usize) -> HarmonicPeriodSet {
    let w = rng.gen_range(1..=max_w);
    let r = rng.gen_range(1..=max_r);
    let mut periods = vec![w];
    for _ in 1..r {
        let last = *periods.last().unwrap();
        periods.push(last * rng.gen_range(2..=3));
    }
    HarmonicPeriodSet::new(&periods).unwrap()
}

pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_w: Time, max_r: usize) -> Instance {
    let periods = random_periods(rng, max_w, max_r);
    let w = periods.width();
    let n = rng.gen_range(0..=max_n);
    let jobs = (1..=n as u32)
        .map(|id| Job::new(id, rng.gen_range(1..=w), rng.gen_range(0..periods.len())))
        .collect();
    Instance::new(periods, jobs).unwrap()
}

/// Any start that keeps every occurrence inside one row of width `w`.
pub fn random_schedule<R: Rng>(rng: &mut R, instance: &Instance) -> Schedule {
    let w = instance.periods().width();
    instance
        .jobs()
        .iter()
        .map(|j| {
            let rows = instance.period_of(j) / w;
            let s = rng.gen_range(0..=w - j.c) + rng.gen_range(0..rows) * w;
            (j.id, s)
        })
        .collect()
}

/// Any in-bounds, height-aligned placement.
pub fn random_packing<R: Rng>(rng: &mut R, instance: &Instance) -> Packing {
    let ps = instance.periods();
    let w = ps.width();
    Packing::new(
        instance
            .jobs()
            .iter()
            .map(|j| {
                let h = ps.height(j.period);
                let at = Point {
                    x: rng.gen_range(0..=w - j.c),
                    y: h * rng.gen_range(0..ps.bin_height() / h),
                };
                (j.id, at)
            })
            .collect(),
    )
}

/// Every multiset of at most `max_n` jobs over periods `[w, 2w]` with
/// `1 <= c <= w`.
pub fn exhaustive_family(w: Time, max_n: usize) -> Vec<Instance> {
    let kinds: Vec<(Time, usize)> = (0..2).flat_map(|p| (1..=w).map(move |c| (c, p))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    multisets(&kinds, 0, max_n, &mut chosen, &mut |pick| {
        let jobs = pick
            .iter()
            .enumerate()
            .map(|(i, &(c, p))| Job::new(i as u32 + 1, c, p))
            .collect();
        out.push(Instance::new(HarmonicPeriodSet::new(&[w, 2 * w]).unwrap(), jobs).unwrap());
    });
    out
}

fn multisets<T: Copy>(
    kinds: &[T],
    from: usize,
    left: usize,
    chosen: &mut Vec<T>,
    emit: &mut impl FnMut(&[T]),
) {
    emit(chosen);
    if left == 0 {
        return;
    }
    for k in from..kinds.len() {
        chosen.push(kinds[k]);
        multisets(kinds, k, left - 1, chosen, emit);
        chosen.pop();
    }
}
