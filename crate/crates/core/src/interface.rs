//! Scattering at a single sharp temporal step of a vector potential.
//!
//! Geometry is collinear: the potential `A` is parallel to the momentum,
//! so every mode is fixed by the scalar pair of [`axial_mode`]. The
//! canonical momentum `p` is conserved across the step, the kinetic one
//! jumps to `q = p - eA` wherever the field is on.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::linalg::{real, Mat2, C64};
use crate::spinor::{axial_mode, EnergySign};

/// Largest condition number accepted for the continuity system.
pub const MAX_CONDITION: f64 = 1e12;

/// Which way the potential steps at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldStep {
    /// `A = 0` before, `A` after.
    On,
    /// `A` before, `A = 0` after.
    Off,
}

/// Which mode is incident on the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Incidence {
    /// Positive-energy electron arriving from the past.
    ElectronFromPast,
    /// Negative-energy wave arriving from the future.
    PositronFromFuture,
}

/// The four single-interface scattering configurations.
///
/// With `E` the field-free and `E'` the in-field energy, the coefficients
/// produced are
///
/// | step | incidence | coefficients |
/// |------|-----------|--------------|
/// | on   | electron  | `r(E,E')`, `t(E,E')` |
/// | on   | positron  | `r(-E',-E)`, `t(-E',-E)` |
/// | off  | electron  | `r(E',E)`, `t(E',E)` |
/// | off  | positron  | `r(-E,-E')`, `t(-E,-E')` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterfaceKind {
    pub step: FieldStep,
    pub incidence: Incidence,
}

impl InterfaceKind {
    pub const ENTER: InterfaceKind = InterfaceKind {
        step: FieldStep::On,
        incidence: Incidence::ElectronFromPast,
    };
    pub const ENTER_REVERSED: InterfaceKind = InterfaceKind {
        step: FieldStep::On,
        incidence: Incidence::PositronFromFuture,
    };
    pub const EXIT: InterfaceKind = InterfaceKind {
        step: FieldStep::Off,
        incidence: Incidence::ElectronFromPast,
    };
    pub const EXIT_REVERSED: InterfaceKind = InterfaceKind {
        step: FieldStep::Off,
        incidence: Incidence::PositronFromFuture,
    };

    pub const ALL: [InterfaceKind; 4] = [
        InterfaceKind::ENTER,
        InterfaceKind::ENTER_REVERSED,
        InterfaceKind::EXIT,
        InterfaceKind::EXIT_REVERSED,
    ];

    /// Short stable name used in reports.
    pub fn name(&self) -> &'static str {
        match (self.step, self.incidence) {
            (FieldStep::On, Incidence::ElectronFromPast) => "enter",
            (FieldStep::On, Incidence::PositronFromFuture) => "enter-reversed",
            (FieldStep::Off, Incidence::ElectronFromPast) => "exit",
            (FieldStep::Off, Incidence::PositronFromFuture) => "exit-reversed",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        InterfaceKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// A configuration plus the potential strength `eA >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceConfig {
    pub kind: InterfaceKind,
    pub ea: f64,
}

impl InterfaceConfig {
    pub fn new(kind: InterfaceKind, ea: f64) -> Result<Self> {
        ensure_non_negative("eA", ea)?;
        Ok(InterfaceConfig { kind, ea })
    }
}

/// Reflection and transmission amplitudes of one interface.
///
/// `e`, `p` belong to the field-free side, `e_prime`, `q` to the field side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceCoeffs {
    pub r: C64,
    pub t: C64,
    pub e: f64,
    pub e_prime: f64,
    pub p: f64,
    pub q: f64,
}

impl InterfaceCoeffs {
    pub fn reflectivity(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmissivity(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// `| |t|^2 - |r|^2 - 1 |`.
    pub fn conservation_residual(&self) -> f64 {
        (self.transmissivity() - self.reflectivity() - 1.0).abs()
    }
}

#[derive(Debug, Clone, Copy)]
struct Kinematics {
    e: f64,
    e_prime: f64,
    p: f64,
    q: f64,
}

fn kinematics(p: f64, ea: f64, m: f64) -> Result<Kinematics> {
    ensure_finite("p", p)?;
    ensure_non_negative("eA", ea)?;
    ensure_positive("m", m)?;
    let q = p - ea;
    Ok(Kinematics {
        e: p.hypot(m),
        e_prime: q.hypot(m),
        p,
        q,
    })
}

fn col(v: [f64; 2]) -> [C64; 2] {
    [real(v[0]), real(v[1])]
}

/// Solve the continuity conditions at `t = 0` for one configuration.
///
/// With incident mode `i`, reflected mode `rho` and transmitted mode
/// `tau`, matching both spinor blocks gives `-r rho + t tau = i`.
pub fn solve_interface(cfg: &InterfaceConfig, p: f64, m: f64) -> Result<InterfaceCoeffs> {
    let k = kinematics(p, cfg.ea, m)?;
    if cfg.ea == 0.0 {
        // No step: the continuity system is the identity.
        return Ok(InterfaceCoeffs {
            r: real(0.0),
            t: real(1.0),
            e: k.e,
            e_prime: k.e_prime,
            p: k.p,
            q: k.q,
        });
    }
    let (free_k, field_k) = (k.p, k.q);
    let (before, after) = match cfg.kind.step {
        FieldStep::On => (free_k, field_k),
        FieldStep::Off => (field_k, free_k),
    };
    use EnergySign::{Negative, Positive};
    let (incident, reflected, transmitted) = match cfg.kind.incidence {
        Incidence::ElectronFromPast => (
            axial_mode(before, Positive, m),
            axial_mode(before, Negative, m),
            axial_mode(after, Positive, m),
        ),
        Incidence::PositronFromFuture => (
            axial_mode(after, Negative, m),
            axial_mode(after, Positive, m),
            axial_mode(before, Negative, m),
        ),
    };
    let neg = [-reflected[0], -reflected[1]];
    let system = Mat2::from_columns(col(neg), col(transmitted));
    let [r, t] = system
        .solve(col(incident), MAX_CONDITION)
        .map_err(|condition| Error::SingularSystem { condition })?;
    Ok(InterfaceCoeffs {
        r,
        t,
        e: k.e,
        e_prime: k.e_prime,
        p: k.p,
        q: k.q,
    })
}

/// Coefficients of every configuration at one `(p, eA)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSet {
    pub enter: InterfaceCoeffs,
    pub enter_reversed: InterfaceCoeffs,
    pub exit: InterfaceCoeffs,
    pub exit_reversed: InterfaceCoeffs,
}

impl InterfaceSet {
    /// Direct continuity solve for each configuration.
    pub fn solve(p: f64, ea: f64, m: f64) -> Result<Self> {
        let get = |kind| solve_interface(&InterfaceConfig { kind, ea }, p, m);
        Ok(InterfaceSet {
            enter: get(InterfaceKind::ENTER)?,
            enter_reversed: get(InterfaceKind::ENTER_REVERSED)?,
            exit: get(InterfaceKind::EXIT)?,
            exit_reversed: get(InterfaceKind::EXIT_REVERSED)?,
        })
    }

    /// The other three configurations obtained from the `enter`
    /// coefficients by energy and momentum substitution.
    pub fn from_substitution(enter: &InterfaceCoeffs, m: f64) -> Result<Self> {
        let get = |kind| derive_config_coeffs(kind, enter, m);
        Ok(InterfaceSet {
            enter: *enter,
            enter_reversed: get(InterfaceKind::ENTER_REVERSED)?,
            exit: get(InterfaceKind::EXIT)?,
            exit_reversed: get(InterfaceKind::EXIT_REVERSED)?,
        })
    }

    pub fn get(&self, kind: InterfaceKind) -> &InterfaceCoeffs {
        match (kind.step, kind.incidence) {
            (FieldStep::On, Incidence::ElectronFromPast) => &self.enter,
            (FieldStep::On, Incidence::PositronFromFuture) => &self.enter_reversed,
            (FieldStep::Off, Incidence::ElectronFromPast) => &self.exit,
            (FieldStep::Off, Incidence::PositronFromFuture) => &self.exit_reversed,
        }
    }
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Real reflection amplitude `r(E,E')` for an electron entering the field.
///
/// Evaluated as `sgn(p) (p(E'+m) - q(E+m)) / ((E+m)(E'+m) + pq)`, which
/// equals `sqrt((E+m)/(E-m)) (E-m - pq/(E'+m)) / (E+m + pq/(E'+m))` for
/// `E > m` and tends to `-q/(E'+m)` as `p -> 0`.
pub fn closed_form_r(e: f64, e_prime: f64, p: f64, q: f64, m: f64) -> Result<f64> {
    for (name, v) in [("E", e), ("Eprime", e_prime), ("p", p), ("q", q)] {
        ensure_finite(name, v)?;
    }
    ensure_positive("m", m)?;
    if e <= m {
        return Err(Error::invalid("E", format!("closed form needs E > m, got E = {e}")));
    }
    let num = p * (e_prime + m) - q * (e + m);
    let den = (e + m) * (e_prime + m) + p * q;
    Ok(sgn(p) * num / den)
}

/// Transmission amplitude `t(E,E')` from the upper-block continuity
/// condition: `sqrt(E'/E) sqrt((E+m)/(E'+m)) 2E / (E+m + pq/(E'+m))`.
pub fn closed_form_t(e: f64, e_prime: f64, p: f64, q: f64, m: f64) -> Result<f64> {
    closed_form_r(e, e_prime, p, q, m)?;
    Ok(analytic_t(real(e), real(e_prime), real(p), real(q), m).re)
}

/// The transmission expression without the `sqrt(E'/E)` factor.
pub fn bare_sqrt_form_t(e: f64, e_prime: f64, p: f64, q: f64, m: f64) -> f64 {
    let ratio = ((e + m) / (e_prime + m)).sqrt();
    ratio * 2.0 * e / (e + m + p * q / (e_prime + m))
}

/// Principal-branch continuation of the reflection closed form, valid
/// for the signed energies produced by the substitution rules.
fn analytic_r(e: C64, e_prime: C64, p: C64, q: C64, m: f64) -> C64 {
    let m = real(m);
    let s = ((e + m) / (e - m)).sqrt();
    let x = p * q / (e_prime + m);
    s * (e - m - x) / (e + m + x)
}

fn analytic_t(e: C64, e_prime: C64, p: C64, q: C64, m: f64) -> C64 {
    let m = real(m);
    let x = p * q / (e_prime + m);
    (e_prime / e).sqrt() * ((e + m) / (e_prime + m)).sqrt() * real(2.0) * e / (e + m + x)
}

/// Coefficients of `kind` from the `enter` coefficients by the
/// substitution rules
///
/// * enter-reversed: `E -> -E'`, `E' -> -E`, `p <-> q`
/// * exit: `E <-> E'`, `p <-> q`
/// * exit-reversed: `E -> -E`, `E' -> -E'`
///
/// The closed forms are continued on the principal branch; the rest
/// points `p = 0` or `q = 0` are outside their domain.
pub fn derive_config_coeffs(kind: InterfaceKind, base: &InterfaceCoeffs, m: f64) -> Result<InterfaceCoeffs> {
    ensure_positive("m", m)?;
    if base.p == 0.0 || base.q == 0.0 {
        return Err(Error::invalid(
            "p",
            "substitution rules need non-zero kinetic momentum on both sides",
        ));
    }
    let (e, ep, p, q) = (real(base.e), real(base.e_prime), real(base.p), real(base.q));
    let (a, b, c, d) = match (kind.step, kind.incidence) {
        (FieldStep::On, Incidence::ElectronFromPast) => return Ok(*base),
        (FieldStep::On, Incidence::PositronFromFuture) => (-ep, -e, q, p),
        (FieldStep::Off, Incidence::ElectronFromPast) => (ep, e, q, p),
        (FieldStep::Off, Incidence::PositronFromFuture) => (-e, -ep, p, q),
    };
    let r = analytic_r(a, b, c, d, m);
    let t = analytic_t(a, b, c, d, m);
    if !(r.is_finite() && t.is_finite()) {
        return Err(Error::SingularSystem {
            condition: f64::INFINITY,
        });
    }
    Ok(InterfaceCoeffs { r, t, ..*base })
}
