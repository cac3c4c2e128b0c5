//! Constructive heuristics over the sub-bin tree.
//!
//! Every method processes jobs in rate-monotonic order (shortest period
//! first, then longest processing time first) and puts each job's rectangle
//! into one sub-bin of the matching level. They differ only in which sub-bin
//! they pick, except RG-FF, which first inserts look-ahead dummy rectangles.

mod baseline;
pub mod dummy;
mod rgff;

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::domain::{Instance, Job};
use crate::feasibility::Schedule;
use crate::transform::{packing_to_schedule, RectId, SubBinTree};
use crate::{JobId, Time};

pub use baseline::{solve_lpt, solve_sbf, solve_sff, solve_tff};
pub use dummy::{build_dummies_optimistic, build_dummies_pessimistic, Bag, DummyRectangle};
pub use rgff::{solve_rgff, DummyMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Tff,
    Sff,
    Sbf,
    Lpt,
    RgffPes,
    RgffOpt,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Lpt,
        Method::Tff,
        Method::Sff,
        Method::Sbf,
        Method::RgffPes,
        Method::RgffOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tff => "tff",
            Method::Sff => "sff",
            Method::Sbf => "sbf",
            Method::Lpt => "lpt",
            Method::RgffPes => "rgff-pes",
            Method::RgffOpt => "rgff-opt",
        }
    }

    pub fn run(self, instance: &Instance) -> HeuristicOutcome {
        match self {
            Method::Tff => solve_tff(instance),
            Method::Sff => solve_sff(instance),
            Method::Sbf => solve_sbf(instance),
            Method::Lpt => solve_lpt(instance),
            Method::RgffPes => solve_rgff(instance, DummyMode::Pessimistic),
            Method::RgffOpt => solve_rgff(instance, DummyMode::Optimistic),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown heuristic `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Solved,
    Failed,
}

/// One rectangle placement made during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub id: RectId,
    pub level: usize,
    pub q: Time,
    pub x: Time,
    pub forced: bool,
}

#[derive(Debug, Clone)]
pub struct HeuristicOutcome {
    pub method: Method,
    pub status: Status,
    pub schedule: Option<Schedule>,
    /// The job that could not be placed, on failure.
    pub failed_job: Option<JobId>,
    pub trace: Vec<TraceEntry>,
    pub elapsed: Duration,
}

impl HeuristicOutcome {
    pub fn solved(&self) -> bool {
        self.status == Status::Solved
    }

    fn finish(
        method: Method,
        instance: &Instance,
        tree: &SubBinTree,
        trace: Vec<TraceEntry>,
        started: Instant,
    ) -> Self {
        let packing = tree
            .to_packing()
            .expect("heuristic leaves no dummies behind");
        let schedule =
            packing_to_schedule(instance, &packing).expect("tree packings are in bounds");
        Self {
            method,
            status: Status::Solved,
            schedule: Some(schedule),
            failed_job: None,
            trace,
            elapsed: started.elapsed(),
        }
    }

    fn failure(method: Method, job: JobId, trace: Vec<TraceEntry>, started: Instant) -> Self {
        Self {
            method,
            status: Status::Failed,
            schedule: None,
            failed_job: Some(job),
            trace,
            elapsed: started.elapsed(),
        }
    }
}

/// Rate-monotonic order: period ascending, processing time descending, id.
pub fn order_jobs(instance: &Instance) -> Vec<Job> {
    let mut jobs = instance.jobs().to_vec();
    jobs.sort_by_key(|j| (j.period, Reverse(j.c), j.id));
    jobs
}

#[derive(Debug, Clone)]
pub struct PortfolioOutcome {
    pub outcomes: Vec<HeuristicOutcome>,
}

impl PortfolioOutcome {
    pub fn solved(&self) -> bool {
        self.outcomes.iter().any(HeuristicOutcome::solved)
    }

    pub fn solved_by(&self) -> Vec<Method> {
        self.outcomes
            .iter()
            .filter(|o| o.solved())
            .map(|o| o.method)
            .collect()
    }

    /// Schedule of the first successful method in list order.
    pub fn schedule(&self) -> Option<&Schedule> {
        self.outcomes.iter().find_map(|o| o.schedule.as_ref())
    }
}

/// Runs each method independently on the same instance.
pub fn run_portfolio(instance: &Instance, methods: &[Method]) -> PortfolioOutcome {
    PortfolioOutcome {
        outcomes: methods.iter().map(|m| m.run(instance)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::HarmonicPeriodSet;

    #[test]
    fn orders_rate_monotonic() {
        let ps = HarmonicPeriodSet::new(&[2, 4]).unwrap();
        let inst = Instance::new(ps, vec![Job::new(1, 1, 1), Job::new(2, 2, 0)]).unwrap();
        let ids: Vec<JobId> = order_jobs(&inst).iter().map(|j| j.id).collect();
        assert_eq!(ids, vec![2, 1]);

        let ps = HarmonicPeriodSet::new(&[8]).unwrap();
        let inst = Instance::new(
            ps,
            vec![
                Job::new(3, 2, 0),
                Job::new(1, 5, 0),
                Job::new(4, 2, 0),
                Job::new(2, 2, 0),
            ],
        )
        .unwrap();
        let ids: Vec<JobId> = order_jobs(&inst).iter().map(|j| j.id).collect();
        assert_eq!(ids, vec![1, 2, 3, 4]);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("exact".parse::<Method>().is_err());
    }
}
