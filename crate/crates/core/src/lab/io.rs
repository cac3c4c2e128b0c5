//! JSON files for instances and schedules.
//!
//! ```json
//! {"name": "demo", "periods": [2, 4], "jobs": [{"id": 1, "period": 2, "c": 1}]}
//! {"instance": "demo", "starts": {"1": 0}}
//! ```
//!
//! A job's `period` is the period value, which must appear in `periods`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{HarmonicPeriodSet, Instance, Job};
use crate::feasibility::Schedule;
use crate::{JobId, Time};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    SchemaViolation { path: PathBuf, message: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobRecord {
    id: JobId,
    period: Time,
    c: Time,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    periods: Vec<Time>,
    jobs: Vec<JobRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    instance: Option<String>,
    starts: BTreeMap<JobId, Time>,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: String) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn instance_from_str(path: &Path, text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = parse(path, text)?;
    let violation = |message: String| IoError::SchemaViolation {
        path: path.to_owned(),
        message,
    };
    if file.periods.windows(2).any(|p| p[0] >= p[1]) {
        return Err(violation("periods must be strictly ascending".into()));
    }
    let periods = HarmonicPeriodSet::new(&file.periods).map_err(|e| violation(e.to_string()))?;
    let jobs = file
        .jobs
        .iter()
        .map(|j| {
            let k = periods.index_of(j.period).ok_or_else(|| {
                violation(format!(
                    "job {}: period {} is not in the period set",
                    j.id, j.period
                ))
            })?;
            Ok(Job::new(j.id, j.c, k))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let instance = Instance::new(periods, jobs).map_err(|e| violation(e.to_string()))?;
    Ok(match file.name {
        Some(name) => instance.with_name(name),
        None => instance,
    })
}

pub fn instance_to_string(instance: &Instance) -> String {
    let file = InstanceFile {
        name: instance.name.clone(),
        periods: instance.periods().periods().to_vec(),
        jobs: instance
            .jobs()
            .iter()
            .map(|j| JobRecord {
                id: j.id,
                period: instance.period_of(j),
                c: j.c,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    let path = path.as_ref();
    instance_from_str(path, &read(path)?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), instance_to_string(instance))
}

/// Schedule and the instance name it was written for, if any.
pub fn load_schedule(path: impl AsRef<Path>) -> Result<(Schedule, Option<String>), IoError> {
    let path = path.as_ref();
    let file: ScheduleFile = parse(path, &read(path)?)?;
    Ok((Schedule::new(file.starts), file.instance))
}

pub fn save_schedule(
    schedule: &Schedule,
    instance: Option<&str>,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    let file = ScheduleFile {
        instance: instance.map(str::to_owned),
        starts: schedule.starts.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("plain data serializes");
    text.push('\n');
    write(path.as_ref(), text)
}
