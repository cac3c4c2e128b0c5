use std::time::Instant;

use thiserror::Error;

use crate::domain::Instance;
use crate::feasibility::{jobs_collide, Schedule};
use crate::Time;

use super::{ExactOutcome, ExactStatus};

/// Largest number of start-time combinations enumerated by default.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("search space of {size} start combinations exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
}

/// Tries every start `s_i` in `[0, T_i)` with `u_i + c_i <= w`, checking each
/// new job against all earlier ones.
pub fn brute_force_enumerate(
    instance: &Instance,
    cap: u128,
) -> Result<ExactOutcome, BruteForceError> {
    let started = Instant::now();
    let size = instance
        .jobs()
        .iter()
        .map(|j| instance.period_of(j) as u128)
        .fold(1u128, |acc, t| acc.saturating_mul(t));
    if size > cap {
        return Err(BruteForceError::TooLarge { size, cap });
    }
    let periods = instance.periods();
    let w = periods.width();
    let jobs = instance.jobs();
    let mut starts: Vec<Time> = Vec::with_capacity(jobs.len());
    let mut nodes = 0u64;

    fn extend(instance: &Instance, w: Time, starts: &mut Vec<Time>, nodes: &mut u64) -> bool {
        let jobs = instance.jobs();
        let d = starts.len();
        if d == jobs.len() {
            return true;
        }
        let job = &jobs[d];
        for s in 0..instance.period_of(job) {
            if s % w + job.c > w {
                continue;
            }
            *nodes += 1;
            let clash = jobs[..d].iter().zip(starts.iter()).any(|(other, &so)| {
                jobs_collide(other, so, job, s, instance.periods()).expect("starts are in range")
            });
            if clash {
                continue;
            }
            starts.push(s);
            if extend(instance, w, starts, nodes) {
                return true;
            }
            starts.pop();
        }
        false
    }

    let found = extend(instance, w, &mut starts, &mut nodes);
    let schedule = found.then(|| {
        jobs.iter()
            .map(|j| j.id)
            .zip(starts.iter().copied())
            .collect::<Schedule>()
    });
    Ok(ExactOutcome {
        status: if found {
            ExactStatus::Feasible
        } else {
            ExactStatus::Infeasible
        },
        schedule,
        nodes,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{HarmonicPeriodSet, Job};
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
    fn three_job_instance() {
        let i = inst(&[2, 4], &[(1, 0), (1, 1), (1, 1)]);
        let out = brute_force_enumerate(&i, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(out.status, ExactStatus::Feasible);
        assert!(oracle_validate_schedule(&i, out.schedule.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn infeasible_instance() {
        let i = inst(&[3, 6], &[(2, 0), (1, 1), (2, 1)]);
        let out = brute_force_enumerate(&i, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(out.status, ExactStatus::Infeasible);
    }

    #[test]
    fn job_wider_than_window() {
        let i = inst(&[2, 4], &[(3, 1)]);
        let out = brute_force_enumerate(&i, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(out.status, ExactStatus::Infeasible);
    }

    #[test]
    fn cap_guards_large_spaces() {
        let i = inst(&[10, 100], &[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(
            brute_force_enumerate(&i, 999_999),
            Err(BruteForceError::TooLarge {
                size: 1_000_000,
                cap: 999_999
            })
        );
    }
}
