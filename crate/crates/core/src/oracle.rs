//! Independent check of the sharp-step coefficients: integrate the
//! time-dependent Dirac equation through a smoothed potential and
//! extrapolate the smoothing width to zero.
//!
//! The potential profile is `eA f(t)` with logistic steps of width `eps`.
//! Modes are referenced to `t = 0` (`e^{-iEt}` for positive energy), so
//! the propagator expressed in mode coordinates is directly comparable
//! with the sharp-interface amplitudes.

use serde::{Deserialize, Serialize};

use crate::cavity::{cavity_coefficients, CavityCoeffs, CavityParams};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::interface::{FieldStep, Incidence, InterfaceCoeffs, InterfaceConfig};
use crate::linalg::{real, Mat2, C64, I, ZERO};
use crate::ode::{richardson, Dopri5};
use crate::spinor::{overlap, plane_wave, Bispinor, EnergySign, Spinor2};

/// Number of widths integrated on each side of a step.
const TAIL_WIDTHS: f64 = 40.0;

/// Shape of the smoothed potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// A single step switching the field on (or off) at `t = 0`.
    Step(FieldStep),
    /// Field on during `0 < t < tau`.
    Cavity { tau: f64 },
}

/// Oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Largest smoothing width; the others are `eps/2, eps/4, ...`.
    pub eps: f64,
    /// Number of widths, at least two.
    pub levels: usize,
    /// Largest accepted Richardson residual, relative to `1 + |value|`.
    pub max_residual: f64,
    pub integrator: Dopri5,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            eps: 1e-2,
            levels: 3,
            max_residual: 1e-2,
            integrator: Dopri5::default(),
        }
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Profile {
    fn value(&self, t: f64, eps: f64) -> f64 {
        match *self {
            Profile::Step(FieldStep::On) => logistic(t / eps),
            Profile::Step(FieldStep::Off) => logistic(-t / eps),
            Profile::Cavity { tau } => logistic(t / eps) - logistic((t - tau) / eps),
        }
    }

    fn window(&self, eps: f64) -> (f64, f64) {
        let pad = TAIL_WIDTHS * eps;
        match *self {
            Profile::Step(_) => (-pad, pad),
            Profile::Cavity { tau } => (-pad, tau + pad),
        }
    }

    /// Kinetic momentum before and after the profile.
    fn asymptotic_momenta(&self, p: f64, ea: f64) -> (f64, f64) {
        match *self {
            Profile::Step(FieldStep::On) => (p, p - ea),
            Profile::Step(FieldStep::Off) => (p - ea, p),
            Profile::Cavity { .. } => (p, p),
        }
    }
}

/// `i dpsi/dt = [alpha_z (p - eA f) + beta m] psi` in the Dirac representation.
fn dirac_rhs(k: f64, m: f64, y: &[C64; 4]) -> [C64; 4] {
    // alpha_z = [[0, sigma_z], [sigma_z, 0]], beta = diag(1, 1, -1, -1)
    let h = [
        y[2] * k + y[0] * m,
        -y[3] * k + y[1] * m,
        y[0] * k - y[2] * m,
        -y[1] * k - y[3] * m,
    ];
    [-I * h[0], -I * h[1], -I * h[2], -I * h[3]]
}

fn axial(k: f64, sign: EnergySign, m: f64) -> Result<Bispinor> {
    plane_wave([0.0, 0.0, k], sign, Spinor2::up(), m, 1.0)
}

fn to_bispinor(c: [C64; 4], like: &Bispinor) -> Bispinor {
    Bispinor::from_parts(
        Spinor2::new(c[0], c[1]),
        Spinor2::new(c[2], c[3]),
        like.momentum(),
        like.energy(),
        like.mass(),
        like.volume(),
    )
}

/// Propagator in mode coordinates: `M[i][j]` is the amplitude of outgoing
/// mode `i` (0 = positive, 1 = negative energy) for incoming mode `j`.
pub fn mode_propagator(profile: Profile, p: f64, ea: f64, m: f64, eps: f64, ode: &Dopri5) -> Result<Mat2> {
    ensure_positive("eps", eps)?;
    ensure_non_negative("eA", ea)?;
    ensure_positive("m", m)?;
    if let Profile::Cavity { tau } = profile {
        ensure_positive("tau", tau)?;
    }
    let (k_in, k_out) = profile.asymptotic_momenta(p, ea);
    let modes_in = [
        axial(k_in, EnergySign::Positive, m)?,
        axial(k_in, EnergySign::Negative, m)?,
    ];
    let modes_out = [
        axial(k_out, EnergySign::Positive, m)?,
        axial(k_out, EnergySign::Negative, m)?,
    ];
    let (ta, tb) = profile.window(eps);
    let mut columns = [[ZERO; 2]; 2];
    for (j, mode) in modes_in.iter().enumerate() {
        let phase = C64::from_polar(1.0, -mode.energy() * ta);
        let y0 = mode.components().map(|c| c * phase);
        let rhs = |t: f64, y: &[C64; 4]| dirac_rhs(p - ea * profile.value(t, eps), m, y);
        let yb = ode.integrate(rhs, ta, y0, tb)?;
        for (i, out) in modes_out.iter().enumerate() {
            let amp = overlap(out, &to_bispinor(yb, out))?;
            columns[j][i] = amp * C64::from_polar(1.0, out.energy() * tb);
        }
    }
    Ok(Mat2::from_columns(columns[0], columns[1]))
}

/// `(r, t)` for a given incidence from a mode propagator.
fn scatter(m: &Mat2, incidence: Incidence) -> Result<(C64, C64)> {
    match incidence {
        Incidence::ElectronFromPast => {
            // incoming (1, r), outgoing (t, 0)
            let d = m.get(1, 1);
            if d.norm() == 0.0 {
                return Err(Error::Integrator("vanishing negative-energy amplitude".into()));
            }
            let r = -m.get(1, 0) / d;
            Ok((r, m.get(0, 0) + m.get(0, 1) * r))
        }
        Incidence::PositronFromFuture => {
            // incoming (0, t), outgoing (r, 1)
            let d = m.get(1, 1);
            if d.norm() == 0.0 {
                return Err(Error::Integrator("vanishing negative-energy amplitude".into()));
            }
            let t = real(1.0) / d;
            Ok((m.get(0, 1) * t, t))
        }
    }
}

/// Oracle output: the extrapolated coefficients and the raw samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleRun<T> {
    pub value: T,
    pub widths: Vec<f64>,
    pub samples_r: Vec<C64>,
    pub samples_t: Vec<C64>,
    pub residual: f64,
}

fn widths(opts: &OracleOptions) -> Result<Vec<f64>> {
    ensure_positive("eps", opts.eps)?;
    if opts.levels < 2 {
        return Err(Error::invalid("levels", "need at least two smoothing widths"));
    }
    Ok((0..opts.levels).map(|i| opts.eps / f64::powi(2.0, i as i32)).collect())
}

fn extrapolate(samples: &[C64], opts: &OracleOptions) -> Result<(C64, f64)> {
    let (v, res) = richardson(samples);
    let rel = res / (1.0 + v.norm());
    if !(rel <= opts.max_residual) {
        return Err(Error::NonConvergence { residual: rel });
    }
    Ok((v, rel))
}

/// Single-interface oracle.
pub fn interface_oracle(
    cfg: &InterfaceConfig,
    p: f64,
    m: f64,
    opts: &OracleOptions,
) -> Result<OracleRun<InterfaceCoeffs>> {
    let ws = widths(opts)?;
    let profile = Profile::Step(cfg.kind.step);
    let mut rs = Vec::new();
    let mut ts = Vec::new();
    for &eps in &ws {
        let prop = mode_propagator(profile, p, cfg.ea, m, eps, &opts.integrator)?;
        let (r, t) = scatter(&prop, cfg.kind.incidence)?;
        rs.push(r);
        ts.push(t);
    }
    let (r, res_r) = extrapolate(&rs, opts)?;
    let (t, res_t) = extrapolate(&ts, opts)?;
    let q = p - cfg.ea;
    Ok(OracleRun {
        value: InterfaceCoeffs {
            r,
            t,
            e: p.hypot(m),
            e_prime: q.hypot(m),
            p,
            q,
        },
        widths: ws,
        samples_r: rs,
        samples_t: ts,
        residual: res_r.max(res_t),
    })
}

/// Cavity oracle, converted to the `t = 0` referenced convention of
/// [`cavity_coefficients`]: the time-domain `t` and `t'` carry an extra
/// `e^{iE tau}`, and `r'` an extra `e^{2iE tau}`.
pub fn cavity_oracle(params: &CavityParams, opts: &OracleOptions) -> Result<OracleRun<CavityCoeffs>> {
    params.validate()?;
    let ws = widths(opts)?;
    let profile = Profile::Cavity { tau: params.tau };
    let e = params.p.hypot(params.m);
    let shift = C64::from_polar(1.0, -e * params.tau);
    let mut samples = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for &eps in &ws {
        let prop = mode_propagator(profile, params.p, params.ea, params.m, eps, &opts.integrator)?;
        let (r, t) = scatter(&prop, Incidence::ElectronFromPast)?;
        let (rp, tp) = scatter(&prop, Incidence::PositronFromFuture)?;
        samples[0].push(r);
        samples[1].push(t * shift);
        samples[2].push(rp * shift * shift);
        samples[3].push(tp * shift);
    }
    let mut vals = [ZERO; 4];
    let mut residual: f64 = 0.0;
    for (v, s) in vals.iter_mut().zip(&samples) {
        let (x, res) = extrapolate(s, opts)?;
        *v = x;
        residual = residual.max(res);
    }
    // Kinematic fields from the sharp model.
    let sharp = cavity_coefficients(params).ok();
    let e_prime = (params.p - params.ea).hypot(params.m);
    let denom = sharp.map(|c| c.denom_magnitude).unwrap_or(f64::NAN);
    let [r_s, t_s, _, _] = samples;
    Ok(OracleRun {
        value: CavityCoeffs {
            r_tot: vals[0],
            t_tot: vals[1],
            r_tot_prime: vals[2],
            t_tot_prime: vals[3],
            e,
            e_prime,
            delta: -e_prime * params.tau,
            denom_magnitude: denom,
        },
        widths: ws,
        samples_r: r_s,
        samples_t: t_s,
        residual,
    })
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn relative_error(a: C64, b: C64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
