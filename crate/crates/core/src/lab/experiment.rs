//! Success-rate and utilization experiments over instance sets.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::Instance;
use crate::exact::{solve_exact, ExactStatus, SearchBudget};
use crate::feasibility::Schedule;
use crate::heuristics::Method;
use crate::{Time, Utilization};

/// Anything that can be asked to solve an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Heuristic(Method),
    Exact(SearchBudget),
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Heuristic(m) => m.name(),
            Solver::Exact(_) => "exact",
        }
    }

    pub fn solve(&self, instance: &Instance) -> (RunStatus, Option<Schedule>) {
        match self {
            Solver::Heuristic(m) => {
                let out = m.run(instance);
                let status = if out.solved() {
                    RunStatus::Solved
                } else {
                    RunStatus::Failed
                };
                (status, out.schedule)
            }
            Solver::Exact(budget) => {
                let out = solve_exact(instance, *budget);
                let status = match out.status {
                    ExactStatus::Feasible => RunStatus::Solved,
                    ExactStatus::Infeasible => RunStatus::Failed,
                    ExactStatus::Unknown => RunStatus::Unknown,
                };
                (status, out.schedule)
            }
        }
    }

    /// Parses a method name; `exact` takes `budget`.
    pub fn parse(name: &str, budget: SearchBudget) -> Result<Self, String> {
        if name == "exact" {
            Ok(Solver::Exact(budget))
        } else {
            Method::from_str(name).map(Solver::Heuristic)
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Solved,
    Failed,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance: String,
    pub method: String,
    pub status: RunStatus,
    pub u_final_num: Option<Time>,
    pub u_final_den: Option<Time>,
    pub jobs_removed: usize,
    pub elapsed_ms: f64,
}

impl ExperimentRecord {
    pub fn u_final(&self) -> Option<Utilization> {
        Some(Ratio::new(self.u_final_num?, self.u_final_den?))
    }
}

/// Record label of an instance: its name, else its position.
fn label(index: usize, instance: &Instance) -> String {
    instance.name.clone().unwrap_or_else(|| format!("#{index}"))
}

fn pairs<'a>(
    instances: &'a [Instance],
    solvers: &'a [Solver],
) -> Vec<(String, &'a Instance, &'a Solver)> {
    instances
        .iter()
        .enumerate()
        .flat_map(|(k, i)| solvers.iter().map(move |s| (label(k, i), i, s)))
        .collect()
}

/// One record per (instance, solver), in instance-major order.
pub fn run_success_experiment(instances: &[Instance], solvers: &[Solver]) -> Vec<ExperimentRecord> {
    pairs(instances, solvers)
        .into_par_iter()
        .map(|(name, instance, solver)| {
            let started = Instant::now();
            let (status, _) = solver.solve(instance);
            ExperimentRecord {
                instance: name,
                method: solver.name().to_string(),
                status,
                u_final_num: None,
                u_final_den: None,
                jobs_removed: 0,
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect()
}

/// Utilization below which the utilization experiment gives up.
pub fn cutoff() -> Utilization {
    Ratio::new(7, 10)
}

/// Removes the job with the smallest utilization, then the smallest `c`,
/// then the largest id.
pub fn remove_next_job(instance: &Instance) -> Option<Instance> {
    let victim = instance
        .jobs()
        .iter()
        .min_by_key(|j| (instance.job_utilization(j), j.c, Reverse(j.id)))?;
    Some(instance.without(victim.id))
}

/// Drops jobs until the solver succeeds or utilization falls below the
/// cutoff, recording the final utilization either way.
pub fn run_utilization_experiment(
    instances: &[Instance],
    solvers: &[Solver],
) -> Vec<ExperimentRecord> {
    pairs(instances, solvers)
        .into_par_iter()
        .map(|(name, instance, solver)| {
            let started = Instant::now();
            let mut current = instance.clone();
            let mut removed = 0;
            let status = loop {
                if current.utilization() < cutoff() {
                    break RunStatus::Failed;
                }
                if solver.solve(&current).0 == RunStatus::Solved {
                    break RunStatus::Solved;
                }
                match remove_next_job(&current) {
                    Some(next) => current = next,
                    None => break RunStatus::Failed,
                }
                removed += 1;
            };
            let u = current.utilization();
            ExperimentRecord {
                instance: name,
                method: solver.name().to_string(),
                status,
                u_final_num: Some(*u.numer()),
                u_final_den: Some(*u.denom()),
                jobs_removed: removed,
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect()
}

/// Named method combinations: an instance counts as solved by a portfolio
/// when any member solves it.
pub const PORTFOLIOS: [(&str, &[&str]); 4] = [
    ("M1", &["rgff-opt", "rgff-pes"]),
    ("M2", &["rgff-opt", "sbf"]),
    ("M3", &["rgff-opt", "tff"]),
    ("MA", &["lpt", "tff", "sff", "sbf", "rgff-pes", "rgff-opt"]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessSummary {
    pub instances: usize,
    /// Solved count per method, in first-seen order.
    pub methods: Vec<(String, usize)>,
    /// Portfolios whose members all appear in the records.
    pub portfolios: Vec<(String, usize)>,
}

impl SuccessSummary {
    pub fn count(&self, name: &str) -> Option<usize> {
        self.methods
            .iter()
            .chain(&self.portfolios)
            .find(|(n, _)| n == name)
            .map(|&(_, c)| c)
    }
}

pub fn summarize_success(records: &[ExperimentRecord]) -> SuccessSummary {
    let mut order: Vec<String> = Vec::new();
    let mut solved: BTreeMap<&str, BTreeMap<&str, bool>> = BTreeMap::new();
    for r in records {
        if !order.contains(&r.method) {
            order.push(r.method.clone());
        }
        *solved
            .entry(r.instance.as_str())
            .or_default()
            .entry(r.method.as_str())
            .or_default() |= r.status == RunStatus::Solved;
    }
    let count = |members: &[&str]| {
        solved
            .values()
            .filter(|by| members.iter().any(|m| by.get(m).copied().unwrap_or(false)))
            .count()
    };
    SuccessSummary {
        instances: solved.len(),
        methods: order.iter().map(|m| (m.clone(), count(&[m]))).collect(),
        portfolios: PORTFOLIOS
            .iter()
            .filter(|(_, members)| members.iter().all(|m| order.iter().any(|o| o == m)))
            .map(|(name, members)| (name.to_string(), count(members)))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilizationSummary {
    pub method: String,
    pub successes: usize,
    /// Mean final utilization over successful runs.
    pub mean_u_final: f64,
}

pub fn summarize_utilization(records: &[ExperimentRecord]) -> Vec<UtilizationSummary> {
    let mut order: Vec<&str> = Vec::new();
    let mut acc: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for r in records {
        if !order.contains(&r.method.as_str()) {
            order.push(&r.method);
        }
        let e = acc.entry(&r.method).or_default();
        if r.status == RunStatus::Solved {
            e.0 += 1;
            e.1 += r.u_final().and_then(|u| u.to_f64()).unwrap_or(0.0);
        }
    }
    order
        .into_iter()
        .map(|m| {
            let (n, sum) = acc[m];
            UtilizationSummary {
                method: m.to_string(),
                successes: n,
                mean_u_final: if n == 0 { 0.0 } else { sum / n as f64 },
            }
        })
        .collect()
}

pub fn write_records<W: Write>(out: W, records: &[ExperimentRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> csv::Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
