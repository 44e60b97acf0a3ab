//! On-disk JSON form of a pulse schedule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use siqc_core::schedule::{Pulse, PulseSchedule};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseRecord {
    pub t_s: f64,
    pub qubit: usize,
    #[serde(default = "default_axis")]
    pub axis: String,
    pub angle_rad: f64,
}

fn default_axis() -> String {
    "x".to_owned()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub slot_duration_s: f64,
    pub pulse_time_s: f64,
    pub cycle_time_s: f64,
    pub slots: usize,
    #[serde(default)]
    pub recoupled_pair: Option<[usize; 2]>,
    pub pulses: Vec<PulseRecord>,
    pub toggling: BTreeMap<usize, Vec<i8>>,
}

impl From<&PulseSchedule> for ScheduleFile {
    fn from(s: &PulseSchedule) -> Self {
        Self {
            slot_duration_s: s.slot_duration,
            pulse_time_s: s.pulse_time,
            cycle_time_s: s.cycle_time,
            slots: s.slots,
            recoupled_pair: s.recoupled_pair.map(|(i, j)| [i, j]),
            pulses: s
                .pulses
                .iter()
                .map(|p| PulseRecord { t_s: p.time, qubit: p.qubit, axis: default_axis(), angle_rad: p.angle })
                .collect(),
            toggling: s.toggling.iter().map(|(&q, v)| (q, v.clone())).collect(),
        }
    }
}

impl TryFrom<ScheduleFile> for PulseSchedule {
    type Error = CliError;

    fn try_from(f: ScheduleFile) -> Result<Self, CliError> {
        let bad = |m: &str| CliError::InvalidConfig(format!("schedule file: {m}"));
        if !(f.slot_duration_s > 0.0 && f.pulse_time_s > 0.0 && f.cycle_time_s > 0.0) || f.slots == 0 {
            return Err(bad("durations and slot count must be positive"));
        }
        if (f.cycle_time_s - f.slots as f64 * f.slot_duration_s).abs() > 1e-9 * f.cycle_time_s {
            return Err(bad("cycle_time_s must equal slots * slot_duration_s"));
        }
        let n = f.toggling.len();
        if f.toggling.keys().enumerate().any(|(i, &q)| i != q) {
            return Err(bad("toggling must list qubits 0..n without gaps"));
        }
        for row in f.toggling.values() {
            if row.len() != f.slots || row.iter().any(|&s| s != 1 && s != -1) {
                return Err(bad("every toggling row needs one ±1 sign per slot"));
            }
        }
        let mut pulses = Vec::with_capacity(f.pulses.len());
        for p in &f.pulses {
            if p.axis != "x" {
                return Err(bad("only x-axis pulses are supported"));
            }
            if p.qubit >= n {
                return Err(bad("pulse qubit index out of range"));
            }
            if !(p.t_s.is_finite() && p.t_s >= 0.0 && p.angle_rad.is_finite()) {
                return Err(bad("pulse times and angles must be finite"));
            }
            if (p.angle_rad - std::f64::consts::PI).abs() > 1e-12 {
                return Err(bad("only π pulses are supported"));
            }
            pulses.push(Pulse { time: p.t_s, qubit: p.qubit, angle: p.angle_rad });
        }
        let mut counts = vec![0usize; n];
        for p in &pulses {
            counts[p.qubit] += 1;
        }
        if counts.iter().any(|c| c % 2 == 1) {
            return Err(bad("every qubit needs an even number of π pulses to close the cycle"));
        }
        let schedule = PulseSchedule {
            slot_duration: f.slot_duration_s,
            pulse_time: f.pulse_time_s,
            slots: f.slots,
            pulses,
            toggling: f.toggling,
            recoupled_pair: f.recoupled_pair.map(|[i, j]| (i, j)),
            cycle_time: f.cycle_time_s,
        };
        if schedule.reconstruct_toggling() != schedule.toggling {
            return Err(bad("pulses do not reproduce the toggling signs"));
        }
        Ok(schedule)
    }
}

impl ScheduleFile {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::InvalidConfig(format!("schedule file: {e}")))
    }
}
