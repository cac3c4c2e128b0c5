//! Benchmark generators. Every instance has utilization exactly 1 and comes
//! with a feasible schedule built alongside it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{HarmonicPeriodSet, Instance, Job, PeriodError};
use crate::feasibility::{Packing, Point, Schedule};
use crate::transform::packing_to_schedule;
use crate::{JobId, Time};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid generator config: {0}")]
    ConfigInvalid(String),
}

impl From<PeriodError> for GenerateError {
    fn from(e: PeriodError) -> Self {
        GenerateError::ConfigInvalid(e.to_string())
    }
}

/// An instance and a schedule proving it feasible.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub certificate: Schedule,
}

/// Parameters of the split/divide scheme and its "saved jobs" variant.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitGenConfig {
    pub base_period: Time,
    /// Ratios `T_k / T_{k-1}`.
    pub bases: Vec<Time>,
    pub iterations: usize,
    pub seed: u64,
    /// Zero gives the original scheme.
    pub save_probability: f64,
    /// Chance of dividing rather than splitting a drawn job.
    pub divide_probability: f64,
    pub min_processing: Time,
    /// Split at a uniform point instead of the middle.
    pub random_split: bool,
}

impl Default for SplitGenConfig {
    fn default() -> Self {
        Self {
            base_period: 30,
            bases: vec![2, 2, 2, 3, 2],
            iterations: 80,
            seed: 0,
            save_probability: 0.0,
            divide_probability: 0.5,
            min_processing: 1,
            random_split: false,
        }
    }
}

impl SplitGenConfig {
    pub fn modified() -> Self {
        Self {
            save_probability: 0.2,
            ..Self::default()
        }
    }

    fn periods(&self) -> Result<HarmonicPeriodSet, GenerateError> {
        let mut periods = vec![self.base_period];
        for &b in &self.bases {
            if b < 2 {
                return Err(GenerateError::ConfigInvalid(format!(
                    "base {b} must be at least 2"
                )));
            }
            periods.push(periods.last().unwrap() * b);
        }
        Ok(HarmonicPeriodSet::new(&periods)?)
    }

    fn check(&self) -> Result<(), GenerateError> {
        for (name, p) in [
            ("save probability", self.save_probability),
            ("divide probability", self.divide_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenerateError::ConfigInvalid(format!(
                    "{name} {p} outside [0, 1]"
                )));
            }
        }
        if self.min_processing == 0 || self.min_processing > self.base_period {
            return Err(GenerateError::ConfigInvalid(format!(
                "minimum processing time {} outside [1, {}]",
                self.min_processing, self.base_period
            )));
        }
        Ok(())
    }
}

struct Draft {
    c: Time,
    level: usize,
    start: Time,
    saved: bool,
}

fn finish(periods: HarmonicPeriodSet, drafts: Vec<Draft>, name: String) -> Generated {
    let jobs = drafts
        .iter()
        .enumerate()
        .map(|(i, d)| Job::new(i as JobId + 1, d.c, d.level))
        .collect();
    let certificate = drafts
        .iter()
        .enumerate()
        .map(|(i, d)| (i as JobId + 1, d.start))
        .collect();
    let instance = Instance::new(periods, jobs)
        .expect("generated jobs are valid")
        .with_name(name);
    Generated {
        instance,
        certificate,
    }
}

pub fn generate_split_scheme(config: &SplitGenConfig) -> Result<Generated, GenerateError> {
    if config.save_probability != 0.0 {
        return Err(GenerateError::ConfigInvalid(
            "the original scheme saves no jobs; use generate_modified_scheme".into(),
        ));
    }
    run_scheme(config, format!("split-{}", config.seed))
}

pub fn generate_modified_scheme(config: &SplitGenConfig) -> Result<Generated, GenerateError> {
    run_scheme(config, format!("modified-{}", config.seed))
}

fn run_scheme(config: &SplitGenConfig, name: String) -> Result<Generated, GenerateError> {
    config.check()?;
    let periods = config.periods()?;
    let r = periods.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut drafts = vec![Draft {
        c: config.base_period,
        level: 0,
        start: 0,
        saved: false,
    }];
    for _ in 0..config.iterations {
        // Saved jobs can still be divided, which is what makes them long
        // jobs of long periods.
        let eligible: Vec<usize> = (0..drafts.len())
            .filter(|&i| !drafts[i].saved || drafts[i].level + 1 < r)
            .collect();
        let Some(&pick) = eligible.choose(&mut rng) else {
            break;
        };
        if config.save_probability > 0.0 && !drafts[pick].saved {
            let util = |d: &Draft| d.c as f64 / periods.period(d.level) as f64;
            let max = eligible
                .iter()
                .map(|&i| util(&drafts[i]))
                .fold(0.0, f64::max);
            if rng.gen_bool(config.save_probability * util(&drafts[pick]) / max) {
                drafts[pick].saved = true;
                continue;
            }
        }
        let Draft {
            c,
            level,
            start,
            saved,
        } = drafts[pick];
        if saved || rng.gen_bool(config.divide_probability) {
            if level + 1 == r {
                continue;
            }
            let shorter = periods.period(level);
            drafts[pick].level = level + 1;
            for j in 1..periods.fanout(level) {
                drafts.push(Draft {
                    c,
                    level: level + 1,
                    start: start + j * shorter,
                    saved,
                });
            }
        } else {
            let first = if config.random_split && c > 1 {
                rng.gen_range(1..c)
            } else {
                c.div_ceil(2)
            };
            let second = c - first;
            if first.min(second) < config.min_processing {
                continue;
            }
            drafts[pick].c = first;
            drafts.push(Draft {
                c: second,
                level,
                start: start + first,
                saved: false,
            });
        }
    }
    Ok(finish(periods, drafts, name))
}

/// Parameters of the canonical-form generator. Periods are
/// `base_period * ratio^k` for `k < levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultGenConfig {
    pub base_period: Time,
    pub ratio: Time,
    pub levels: usize,
    pub seed: u64,
    pub c_min: Time,
    /// Required share of jobs with `c >= c_min`; instances are redrawn until met.
    pub long_fraction: f64,
    /// Chance, per draw, that a non-leaf sub-bin takes one more rectangle of
    /// its own height before handing the rest to its children.
    pub place_probability: f64,
}

impl Default for DifficultGenConfig {
    fn default() -> Self {
        Self {
            base_period: 800,
            ratio: 2,
            levels: 6,
            seed: 0,
            c_min: 14,
            long_fraction: 0.6,
            place_probability: 0.45,
        }
    }
}

const MAX_REDRAWS: usize = 1000;

pub fn generate_difficult(config: &DifficultGenConfig) -> Result<Generated, GenerateError> {
    if config.levels < 2 || config.ratio < 2 {
        return Err(GenerateError::ConfigInvalid(
            "need at least 2 levels and ratio >= 2".into(),
        ));
    }
    if config.c_min == 0 || config.c_min > config.base_period {
        return Err(GenerateError::ConfigInvalid(format!(
            "c_min {} outside [1, {}]",
            config.c_min, config.base_period
        )));
    }
    if !(0.0..=1.0).contains(&config.long_fraction)
        || !(0.0..1.0).contains(&config.place_probability)
    {
        return Err(GenerateError::ConfigInvalid(
            "probabilities outside [0, 1)".into(),
        ));
    }
    let periods: Vec<Time> = (0..config.levels as u32)
        .map(|k| config.base_period * config.ratio.pow(k))
        .collect();
    let periods = HarmonicPeriodSet::new(&periods)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..MAX_REDRAWS {
        let mut rects = Vec::new();
        fill(&periods, config, &mut rng, 0, 0, 0, &mut rects);
        let long = rects.iter().filter(|&&(c, _, _)| c >= config.c_min).count();
        if (long as f64) < config.long_fraction * rects.len() as f64 {
            continue;
        }
        let jobs: Vec<Job> = rects
            .iter()
            .enumerate()
            .map(|(i, &(c, level, _))| Job::new(i as JobId + 1, c, level))
            .collect();
        let packing: Packing = rects
            .iter()
            .enumerate()
            .map(|(i, &(_, _, at))| (i as JobId + 1, at))
            .collect();
        let instance = Instance::new(periods.clone(), jobs)
            .expect("generated jobs are valid")
            .with_name(format!(
                "difficult-{}-{}-{}",
                config.ratio, config.levels, config.seed
            ));
        let certificate =
            packing_to_schedule(&instance, &packing).expect("generated packing is in bounds");
        return Ok(Generated {
            instance,
            certificate,
        });
    }
    Err(GenerateError::ConfigInvalid(format!(
        "no instance with {:.0}% long jobs after {MAX_REDRAWS} draws",
        config.long_fraction * 100.0
    )))
}

/// Fills sub-bin (`level`, `q`) whose rows are free from column `x` on.
fn fill(
    periods: &HarmonicPeriodSet,
    config: &DifficultGenConfig,
    rng: &mut ChaCha8Rng,
    level: usize,
    q: Time,
    mut x: Time,
    out: &mut Vec<(Time, usize, Point)>,
) {
    let w = periods.width();
    let y = q * periods.height(level);
    let leaf = level + 1 == periods.len();
    let place = |x: &mut Time, c: Time, out: &mut Vec<_>| {
        out.push((c, level, Point { x: *x, y }));
        *x += c;
    };
    if leaf {
        while x < w {
            let rest = w - x;
            let mut c = if rest < 2 * config.c_min {
                rest
            } else {
                rng.gen_range(config.c_min..=rest)
            };
            if rest - c < config.c_min {
                c = rest;
            }
            place(&mut x, c, out);
        }
        return;
    }
    while w - x >= config.c_min && rng.gen_bool(config.place_probability) {
        let c = rng.gen_range(config.c_min..=w - x);
        place(&mut x, c, out);
    }
    let fanout = periods.fanout(level);
    for child in q * fanout..(q + 1) * fanout {
        fill(periods, config, rng, level + 1, child, x, out);
    }
}
