//! Path amplitudes, exclusion signs and vacuum normalisation.
//!
//! Each experiment lists its diagrams by hand as [`DiagramTerm`]s. The
//! squared relative amplitudes are then scaled by the vacuum persistence
//! probability `P_v`, which counts every pair-creation channel.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::linalg::{real, C64};

/// Beam-splitter reflection amplitude.
pub const BS_REFLECT: C64 = C64::new(0.0, FRAC_1_SQRT_2);
/// Beam-splitter transmission amplitude.
pub const BS_TRANSMIT: C64 = C64::new(FRAC_1_SQRT_2, 0.0);

/// Tolerance on the completeness audit of a report.
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// Free propagation phase `e^{-i E t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFactor {
    pub energy: f64,
    pub time: f64,
}

impl PhaseFactor {
    pub fn new(energy: f64, time: f64) -> Self {
        PhaseFactor { energy, time }
    }

    pub fn value(&self) -> C64 {
        C64::from_polar(1.0, -self.energy * self.time)
    }
}

/// Sign attached to a diagram by fermion exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// One path: a product of coefficients times an exchange sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramTerm {
    pub factors: Vec<C64>,
    pub parity: Parity,
}

impl DiagramTerm {
    pub fn new(factors: impl IntoIterator<Item = C64>) -> Self {
        DiagramTerm {
            factors: factors.into_iter().collect(),
            parity: Parity::Even,
        }
    }

    pub fn exchanged(mut self) -> Self {
        self.parity = self.parity.flip();
        self
    }

    pub fn with(mut self, factor: C64) -> Self {
        self.factors.push(factor);
        self
    }

    pub fn with_phase(self, phase: PhaseFactor) -> Self {
        self.with(phase.value())
    }

    pub fn amplitude(&self) -> C64 {
        self.factors.iter().fold(real(self.parity.sign()), |acc, f| acc * f)
    }
}

/// Relative amplitude `sum_k parity_k prod factors_k`.
pub fn compose_path(terms: &[DiagramTerm]) -> C64 {
    terms.iter().map(DiagramTerm::amplitude).sum()
}

/// An independent pair-creation channel of reflectivity `R`, present
/// `multiplicity` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairChannel {
    pub reflectivity: f64,
    pub multiplicity: u32,
}

/// All pair-creation channels of an experiment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VacuumSpec {
    pub channels: Vec<PairChannel>,
}

impl VacuumSpec {
    pub fn new(channels: Vec<PairChannel>) -> Result<Self> {
        for c in &channels {
            ensure_non_negative("R", c.reflectivity)?;
            if c.multiplicity == 0 {
                return Err(Error::invalid("multiplicity", "must be at least 1"));
            }
        }
        Ok(VacuumSpec { channels })
    }

    /// `multiplicity` identical channels of reflectivity `R`.
    pub fn uniform(reflectivity: f64, multiplicity: u32) -> Result<Self> {
        VacuumSpec::new(vec![PairChannel {
            reflectivity,
            multiplicity,
        }])
    }

    pub fn union(&self, other: &VacuumSpec) -> VacuumSpec {
        VacuumSpec {
            channels: self.channels.iter().chain(&other.channels).copied().collect(),
        }
    }
}

/// `P_v = prod_i (1 + R_i)^{-m_i}`.
pub fn vacuum_probability(spec: &VacuumSpec) -> f64 {
    spec.channels
        .iter()
        .map(|c| (1.0 + c.reflectivity).powi(-(c.multiplicity as i32)))
        .product()
}

/// Probability of a detection in mode 1 when `others` unmeasured modes
/// also create pairs: `P_v(all) T_1 prod_{i>1} (1 + R_i)`.
///
/// The unmeasured factors cancel, leaving `T_1 / (1 + R_1)`.
pub fn measured_mode_probability(t1: f64, r1: f64, others: &[f64]) -> f64 {
    let spec = VacuumSpec {
        channels: std::iter::once(r1)
            .chain(others.iter().copied())
            .map(|reflectivity| PairChannel {
                reflectivity,
                multiplicity: 1,
            })
            .collect(),
    };
    let spectators: f64 = others.iter().map(|r| 1.0 + r).product();
    vacuum_probability(&spec) * t1 * spectators
}

/// Outcome probabilities of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub outcomes: BTreeMap<String, f64>,
    pub vacuum_probability: f64,
    /// Sum of `outcomes`; equals one for a complete outcome set.
    pub sum_check: f64,
}

impl ExperimentReport {
    pub fn get(&self, label: &str) -> f64 {
        self.outcomes.get(label).copied().unwrap_or(f64::NAN)
    }
}

/// Scale squared relative amplitudes by `P_v` and audit completeness.
pub fn normalize_report(raw: BTreeMap<String, f64>, spec: &VacuumSpec) -> Result<ExperimentReport> {
    let report = partial_report(raw, spec)?;
    let residual = (report.sum_check - 1.0).abs();
    if !(residual <= COMPLETENESS_TOL) {
        return Err(Error::Incomplete {
            sum: report.sum_check,
            residual,
        });
    }
    Ok(report)
}

/// As [`normalize_report`] for an outcome subset, without the audit.
pub fn partial_report(raw: BTreeMap<String, f64>, spec: &VacuumSpec) -> Result<ExperimentReport> {
    let pv = vacuum_probability(spec);
    partial_report_with(raw, pv)
}

/// Scale by an explicitly computed vacuum probability.
pub fn partial_report_with(raw: BTreeMap<String, f64>, pv: f64) -> Result<ExperimentReport> {
    ensure_finite("vacuumProbability", pv)?;
    let mut outcomes = BTreeMap::new();
    for (label, weight) in raw {
        ensure_finite("probability", weight)?;
        outcomes.insert(label, weight * pv);
    }
    let sum_check = outcomes.values().sum();
    Ok(ExperimentReport {
        outcomes,
        vacuum_probability: pv,
        sum_check,
    })
}

/// Audit an already normalised report.
pub fn check_complete(report: ExperimentReport) -> Result<ExperimentReport> {
    let residual = (report.sum_check - 1.0).abs();
    if residual <= COMPLETENESS_TOL {
        Ok(report)
    } else {
        Err(Error::Incomplete {
            sum: report.sum_check,
            residual,
        })
    }
}

/// `e^{i x}`.
pub fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn single_term_product() {
        let t = C64::new(1.2, 0.4);
        let ph = PhaseFactor::new(1.7, 2.3);
        let a = compose_path(&[DiagramTerm::new([t]).with_phase(ph)]);
        assert_abs_diff_eq!((a - t * C64::from_polar(1.0, -1.7 * 2.3)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(ph.value().norm(), 1.0);
    }

    #[test]
    fn exchange_pair_is_a_difference() {
        let c = DiagramTerm::new([C64::new(0.3, 0.1), C64::new(2.0, 0.0)]);
        let d = DiagramTerm::new([C64::new(-0.5, 0.7)]).exchanged();
        let amp = compose_path(&[c.clone(), d.clone()]);
        assert_abs_diff_eq!(
            (amp - (C64::new(0.6, 0.2) - C64::new(-0.5, 0.7))).norm(),
            0.0,
            epsilon = 1e-15
        );
        // swapping which term carries the sign flips the total
        let swapped = compose_path(&[c.exchanged(), d.exchanged()]);
        assert_abs_diff_eq!((swapped + amp).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn vacuum_for_known_experiments() {
        assert_eq!(vacuum_probability(&VacuumSpec::default()), 1.0);
        assert_eq!(vacuum_probability(&VacuumSpec::uniform(0.0, 3).unwrap()), 1.0);
        let r = 1.7;
        let two = vacuum_probability(&VacuumSpec::uniform(r, 2).unwrap());
        assert_abs_diff_eq!(two * (1.0 + r) * (1.0 + r), 1.0, epsilon = 1e-15);
        assert!(VacuumSpec::uniform(-1.0, 1).is_err());
        assert!(VacuumSpec::uniform(1.0, 0).is_err());
    }

    #[test]
    fn incomplete_reports_are_rejected() {
        let spec = VacuumSpec::uniform(1.0, 2).unwrap();
        let raw = BTreeMap::from([("a".to_string(), 1.0)]);
        assert!(matches!(normalize_report(raw, &spec), Err(Error::Incomplete { .. })));
        let empty = BTreeMap::from([("t".to_string(), 1.0)]);
        let rep = normalize_report(empty, &VacuumSpec::uniform(0.0, 1).unwrap()).unwrap();
        assert_eq!(rep.sum_check, 1.0);
    }

    #[test]
    fn report_serialises_with_documented_keys() {
        let rep = partial_report(BTreeMap::from([("x".to_string(), 0.5)]), &VacuumSpec::default()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(json, r#"{"outcomes":{"x":0.5},"vacuumProbability":1.0,"sumCheck":0.5}"#);
    }

    proptest! {
        #[test]
        fn vacuum_factorises(a in prop::collection::vec(0.0..10.0f64, 0..5), b in prop::collection::vec(0.0..10.0f64, 0..5)) {
            let mk = |v: &Vec<f64>| VacuumSpec::new(v.iter().map(|&r| PairChannel { reflectivity: r, multiplicity: 1 }).collect()).unwrap();
            let (sa, sb) = (mk(&a), mk(&b));
            let joint = vacuum_probability(&sa.union(&sb));
            let split = vacuum_probability(&sa) * vacuum_probability(&sb);
            prop_assert!((joint - split).abs() <= 1e-15 * split.max(1e-300));
        }

        #[test]
        fn unmeasured_modes_cancel(n in prop::sample::select(vec![2usize, 5, 10]), r1 in 0.0..5.0f64, seed in prop::collection::vec(0.0..5.0f64, 9)) {
            let others = &seed[..n - 1];
            let p = measured_mode_probability(1.0 + r1, r1, others);
            prop_assert!((p - (1.0 + r1) / (1.0 + r1)).abs() < 1e-12);
        }
    }
}
