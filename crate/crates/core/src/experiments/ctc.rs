//! Closed timelike curves built from a cavity loop.
//!
//! Ring: a beam splitter feeds a loop through two cavities and a gate
//! `U`; the loop output re-enters the splitter in the past. The loop
//! amplitudes solve the linear self-consistency system
//!
//! ```text
//! c = a/sqrt2 + i d/sqrt2,   b = i a/sqrt2 + d/sqrt2,   d = r r' e^{i xi} U c
//! ```
//!
//! Deutsch arrangement: the looped branch meets the other branch at a
//! second splitter instead of itself.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::amplitude::{check_complete, cis, compose_path, partial_report_with, DiagramTerm, ExperimentReport};
use crate::cavity::CavityCoeffs;
use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::linalg::{real, Mat2, C64, I};
use crate::spinor::{plane_wave, spin_matrix_element, EnergySign, Spin, Spinor2, UnitaryMatrix2};

/// Largest condition number accepted for `I + zeta U`.
pub const MAX_CONDITION: f64 = 1e12;
/// Smallest singular value accepted for `I + zeta U`, whose scale is set by `I`.
pub const MIN_SINGULAR: f64 = 1e-12;

pub const D1_ONLY: &str = "D1_noD2D3";
pub const D3_ONLY: &str = "D3_noD1D2";
pub const D1_DEUTSCH: &str = "D1_noD2D3D4";

/// Which squared cavity amplitude enters the pair-channel matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairCoefficient {
    /// `t_tot^2`, as in the channel matrices.
    TransmissionSquared,
    /// `r_tot^2`, as in the self-consistency system.
    ReflectionSquared,
}

impl PairCoefficient {
    pub const ALL: [PairCoefficient; 2] = [PairCoefficient::TransmissionSquared, PairCoefficient::ReflectionSquared];

    pub fn name(self) -> &'static str {
        match self {
            PairCoefficient::TransmissionSquared => "t-squared",
            PairCoefficient::ReflectionSquared => "r-squared",
        }
    }

    fn value(self, c: &CavityCoeffs) -> C64 {
        match self {
            PairCoefficient::TransmissionSquared => c.t_tot * c.t_tot,
            PairCoefficient::ReflectionSquared => c.r_tot * c.r_tot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CtcSpec {
    pub u: UnitaryMatrix2,
    pub xi: f64,
    pub cavity: CavityCoeffs,
    /// Reflectivity correction of the splitter for negative-energy waves.
    pub alpha: f64,
    pub input: Spinor2,
    /// Magnitude of the momentum along the loop; non-zero.
    pub momentum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairChannels {
    pub coefficient: PairCoefficient,
    /// Vacuum sector: no pair and channels A to E. Complete by construction.
    pub report: ExperimentReport,
    /// `|1 - (P_v + P_A + ... + P_E)|`.
    pub sum_rule_residual: f64,
    /// `|P_v - 1|` for the same gate and phase with the field switched off.
    pub zero_field_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CtcReport {
    pub detections: ExperimentReport,
    pub b: [C64; 2],
    pub c: [C64; 2],
    pub d: [C64; 2],
    pub fixed_point_residual: f64,
    pub condition_number: f64,
    pub min_singular_value: f64,
    pub channels: Vec<PairChannels>,
}

fn mode_matrix(u: &UnitaryMatrix2, k: f64, sign: EnergySign) -> Result<Mat2> {
    let mut m = Mat2::zero();
    for (j, sj) in Spin::ALL.into_iter().enumerate() {
        let psi = plane_wave([0.0, 0.0, k], sign, Spinor2::basis(sj), 1.0, 1.0)?;
        for (i, si) in Spin::ALL.into_iter().enumerate() {
            m.0[i][j] = spin_matrix_element(si, u, &psi)?;
        }
    }
    Ok(m)
}

/// Inverse, condition number and smallest singular value.
fn resolvent(op: Mat2) -> Result<(Mat2, f64, f64)> {
    let (hi, lo) = op.singular_values();
    let condition = if lo == 0.0 { f64::INFINITY } else { hi / lo };
    if !(condition <= MAX_CONDITION && lo >= MIN_SINGULAR) {
        return Err(Error::SingularFixedPoint {
            condition: hi.max(1.0) / lo,
        });
    }
    let inv = op.inverse().ok_or(Error::SingularFixedPoint { condition })?;
    Ok((inv, condition, lo))
}

fn gram_trace(m: &Mat2) -> f64 {
    (m.adjoint() * *m).trace().re
}

fn channels(spec: &CtcSpec, um: &Mat2, vm: &Mat2, coefficient: PairCoefficient) -> Result<PairChannels> {
    let c = &spec.cavity;
    let k = coefficient.value(c);
    let (rr, tt) = (c.reflectivity(), c.transmissivity());
    let z = I * k * cis(spec.xi) * FRAC_1_SQRT_2;
    let id = Mat2::identity();
    let (inv_u, _, _) = resolvent(id + *um * z)?;
    let zc = z * spec.alpha.sqrt();
    let (inv_v, _, _) = resolvent(id - *vm * zc)?;
    let ma = id + *um * z * inv_u;
    let mb = *um * inv_u;
    let mc = id - *vm * zc * inv_v;
    let (ta, tb, tc) = (gram_trace(&ma), gram_trace(&mb), gram_trace(&mc));
    let weights = BTreeMap::from([
        ("none".to_string(), 1.0),
        ("pair_A".to_string(), rr * ta),
        ("pair_B".to_string(), 0.5 * tt * tb),
        ("pair_C".to_string(), rr * tc),
        ("pair_D".to_string(), rr * rr * ta * tc),
        ("pair_E".to_string(), 0.5 * rr * tt * tb * tc),
    ]);
    let pv = 1.0 / weights.values().sum::<f64>();
    let report = partial_report_with(weights, pv)?;
    let sum_rule_residual = (report.sum_check - 1.0).abs();
    let report = check_complete(report)?;
    let zero_field_residual = if rr == 0.0 {
        (pv - 1.0).abs()
    } else {
        let mut free = *spec;
        free.cavity = CavityCoeffs::from_reflectivity(0.0)?;
        channels(&free, um, vm, coefficient)?.report.vacuum_probability - 1.0
    }
    .abs();
    Ok(PairChannels {
        coefficient,
        report,
        sum_rule_residual,
        zero_field_residual,
    })
}

/// Solve the ring and evaluate both pair-channel readings. Detection
/// probabilities use `P_v` from `normalization`.
pub fn ctc_ring(spec: &CtcSpec, normalization: PairCoefficient) -> Result<CtcReport> {
    ensure_finite("xi", spec.xi)?;
    ensure_non_negative("alpha", spec.alpha)?;
    ensure_finite("momentum", spec.momentum)?;
    if spec.momentum == 0.0 {
        return Err(Error::DegenerateRestMode);
    }
    let a = spec.input.normalized()?;
    let p = spec.momentum;
    let um = mode_matrix(&spec.u, p, EnergySign::Positive)?;
    let vm = mode_matrix(&spec.u.adjoint(), -p, EnergySign::Negative)?;

    let c = &spec.cavity;
    let e = cis(spec.xi);
    let zeta = I * c.r_tot * c.r_tot * e * FRAC_1_SQRT_2;
    let (inv, condition_number, min_singular_value) = resolvent(Mat2::identity() + um * zeta)?;
    let cv = inv.mul_vec(a.0).map(|x| x * FRAC_1_SQRT_2);
    let ucv = um.mul_vec(cv);
    let zuc = um.mul_vec(inv.mul_vec(a.0)).map(|x| x * zeta);
    let bv = [0, 1].map(|s| I * FRAC_1_SQRT_2 * (a.0[s] + zuc[s]));
    let dv = ucv.map(|x| x * c.r_tot * c.r_tot_prime * e);

    let s2 = real(FRAC_1_SQRT_2);
    let mut residual: f64 = 0.0;
    for s in 0..2 {
        residual = residual.max((cv[s] - (I * s2 * dv[s] + s2 * a.0[s])).norm());
        residual = residual.max((bv[s] - (s2 * dv[s] + I * s2 * a.0[s])).norm());
    }

    let all: Vec<PairChannels> = PairCoefficient::ALL
        .into_iter()
        .map(|k| channels(spec, &um, &vm, k))
        .collect::<Result<_>>()?;
    let pv = all
        .iter()
        .find(|ch| ch.coefficient == normalization)
        .map(|ch| ch.report.vacuum_probability)
        .unwrap_or(f64::NAN);
    let norm2 = |v: &[C64; 2]| v[0].norm_sqr() + v[1].norm_sqr();
    let detections = partial_report_with(
        BTreeMap::from([
            (D1_ONLY.to_string(), norm2(&bv)),
            (D3_ONLY.to_string(), c.transmissivity() * norm2(&cv)),
        ]),
        pv,
    )?;
    Ok(CtcReport {
        detections,
        b: bv,
        c: cv,
        d: dv,
        fixed_point_residual: residual,
        condition_number,
        min_singular_value,
        channels: all,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeutschReport {
    pub detections: ExperimentReport,
    /// No pair, one pair, two pairs. Complete.
    pub vacuum_channels: ExperimentReport,
    /// Residual amplitude left in the suppressed port.
    pub suppressed_amplitude: f64,
}

/// Deutsch arrangement with `U = 1` and unit input. The loop phase is
/// set so that `r^2 e^{i xi} = e^{i phase} R`, which cancels the
/// suppressed port exactly when `R = 1`.
pub fn deutsch_ctc(alpha: f64, reflectivity: f64, phase: f64, strict: bool) -> Result<DeutschReport> {
    ensure_non_negative("alpha", alpha)?;
    ensure_finite("phase", phase)?;
    if strict && reflectivity != 1.0 {
        return Err(Error::NotDeutschRegime { reflectivity });
    }
    let c = CavityCoeffs::from_reflectivity(reflectivity)?;
    let xi = phase - (c.r_tot * c.r_tot).arg();
    let direct = cis(phase);
    let suppressed = compose_path(&[
        DiagramTerm::new([I * 0.5, direct]),
        DiagramTerm::new([I * 0.5, c.r_tot, c.r_tot_prime, cis(xi)]),
    ]);
    let d1 = compose_path(&[
        DiagramTerm::new([real(FRAC_1_SQRT_2), direct]),
        DiagramTerm::new([real(FRAC_1_SQRT_2), c.r_tot, c.r_tot, cis(xi)]),
    ]);
    let (rr, tt) = (c.reflectivity(), c.transmissivity());
    let weights = BTreeMap::from([
        ("none".to_string(), 1.0),
        ("single_pair".to_string(), tt * rr * (1.0 + alpha)),
        ("double_pair".to_string(), alpha * tt * tt * rr * rr),
    ]);
    let pv = 1.0 / weights.values().sum::<f64>();
    let vacuum_channels = check_complete(partial_report_with(weights, pv)?)?;
    let detections = partial_report_with(BTreeMap::from([(D1_DEUTSCH.to_string(), d1.norm_sqr())]), pv)?;
    Ok(DeutschReport {
        detections,
        vacuum_channels,
        suppressed_amplitude: suppressed.norm(),
    })
}
