//! Instances of the single-machine strictly periodic scheduling problem with
//! harmonic periods.

pub mod radix;

use std::collections::BTreeSet;

use num_rational::Ratio;
use thiserror::Error;

use crate::{JobId, Time, Utilization};

pub use radix::{bflip, compose, decompose, flip, MixedRadixDigits, Radix, RadixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("period list is empty")]
    Empty,
    #[error("period must be positive")]
    NonPositive,
    #[error("period {longer} is not a multiple of {shorter}")]
    NonHarmonic { shorter: Time, longer: Time },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate job id {0}")]
    DuplicateId(JobId),
    #[error("job {id}: period index {index} out of range (r = {r})")]
    PeriodIndex { id: JobId, index: usize, r: usize },
    #[error("job {id}: processing time {c} must lie in [1, {period}]")]
    ProcessingTime { id: JobId, c: Time, period: Time },
}

/// A sorted set of distinct harmonic periods `T_0 < T_1 < ... < T_{r-1}`.
///
/// The packing view derived from it uses a bin of `width() = T_0` columns and
/// `bin_height() = T_{r-1} / T_0` rows; a job of period index `k` becomes a
/// rectangle of height `height(k) = bin_height() / B_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HarmonicPeriodSet {
    periods: Vec<Time>,
    bases: Vec<Time>,
    cumulative: Vec<Time>,
}

impl HarmonicPeriodSet {
    pub fn new(periods: &[Time]) -> Result<Self, PeriodError> {
        if periods.is_empty() {
            return Err(PeriodError::Empty);
        }
        if periods.contains(&0) {
            return Err(PeriodError::NonPositive);
        }
        let periods: Vec<Time> = periods
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut bases = Vec::with_capacity(periods.len() - 1);
        for pair in periods.windows(2) {
            if pair[1] % pair[0] != 0 {
                return Err(PeriodError::NonHarmonic {
                    shorter: pair[0],
                    longer: pair[1],
                });
            }
            bases.push(pair[1] / pair[0]);
        }
        let mut cumulative = vec![1];
        for &b in &bases {
            cumulative.push(cumulative.last().unwrap() * b);
        }
        Ok(Self {
            periods,
            bases,
            cumulative,
        })
    }

    /// Number of distinct periods `r`.
    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn periods(&self) -> &[Time] {
        &self.periods
    }

    pub fn period(&self, k: usize) -> Time {
        self.periods[k]
    }

    pub fn index_of(&self, period: Time) -> Option<usize> {
        self.periods.binary_search(&period).ok()
    }

    /// Base vector `(b_1, ..., b_{r-1})`.
    pub fn bases(&self) -> &[Time] {
        &self.bases
    }

    /// `B_k`, the number of base periods in `T_k`.
    pub fn cumulative(&self, k: usize) -> Time {
        self.cumulative[k]
    }

    pub fn width(&self) -> Time {
        self.periods[0]
    }

    pub fn bin_height(&self) -> Time {
        *self.cumulative.last().unwrap()
    }

    /// `H_k = H / B_k`.
    pub fn height(&self, k: usize) -> Time {
        self.bin_height() / self.cumulative[k]
    }

    pub fn heights(&self) -> Vec<Time> {
        (0..self.len()).map(|k| self.height(k)).collect()
    }

    pub fn hyperperiod(&self) -> Time {
        *self.periods.last().unwrap()
    }

    /// `b_{k+1} = H_k / H_{k+1}`: how many level-`k+1` sub-bins one level-`k`
    /// sub-bin splits into.
    pub fn fanout(&self, k: usize) -> Time {
        self.bases[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: JobId,
    /// Processing time `c_i`.
    pub c: Time,
    /// Index of the job's period in the period set.
    pub period: usize,
}

impl Job {
    pub fn new(id: JobId, c: Time, period: usize) -> Self {
        Self { id, c, period }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    periods: HarmonicPeriodSet,
    jobs: Vec<Job>,
}

impl Instance {
    pub fn new(periods: HarmonicPeriodSet, jobs: Vec<Job>) -> Result<Self, InstanceError> {
        let mut seen = BTreeSet::new();
        for job in &jobs {
            if !seen.insert(job.id) {
                return Err(InstanceError::DuplicateId(job.id));
            }
            if job.period >= periods.len() {
                return Err(InstanceError::PeriodIndex {
                    id: job.id,
                    index: job.period,
                    r: periods.len(),
                });
            }
            let t = periods.period(job.period);
            if job.c == 0 || job.c > t {
                return Err(InstanceError::ProcessingTime {
                    id: job.id,
                    c: job.c,
                    period: t,
                });
            }
        }
        Ok(Self {
            name: None,
            periods,
            jobs,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn periods(&self) -> &HarmonicPeriodSet {
        &self.periods
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, id: JobId) -> Option<&Job> {
        self.jobs.iter().find(|j| j.id == id)
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn period_of(&self, job: &Job) -> Time {
        self.periods.period(job.period)
    }

    pub fn job_utilization(&self, job: &Job) -> Utilization {
        Ratio::new(job.c, self.period_of(job))
    }

    /// Exact total utilization `sum c_i / T_i`.
    pub fn utilization(&self) -> Utilization {
        let hyper = self.periods.hyperperiod();
        let busy: Time = self
            .jobs
            .iter()
            .map(|j| j.c * (hyper / self.period_of(j)))
            .sum();
        Ratio::new(busy, hyper)
    }

    /// A copy of the instance without job `id`.
    pub fn without(&self, id: JobId) -> Instance {
        Instance {
            name: self.name.clone(),
            periods: self.periods.clone(),
            jobs: self.jobs.iter().copied().filter(|j| j.id != id).collect(),
        }
    }
}
