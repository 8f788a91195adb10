//! Two-component spinors, Dirac plane waves and the PT map.
//!
//! Dirac representation: the bispinor is `(upper, lower)` with
//! `gamma0 = diag(1, -1)`. Positive-energy modes carry
//! `lower = (sigma.p)/(E+m) upper`; negative-energy modes (energy `-E`)
//! carry `lower = -(sigma.p)/(E-m) upper`, evaluated in product form so
//! that the rest limit never divides by `E - m`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linalg::{real, vdot, Mat2, C64, I, ONE, ZERO};

const UNIT_TOL: f64 = 1e-12;
const SHELL_TOL: f64 = 1e-9;

/// A two-component complex spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor2(pub [C64; 2]);

impl Spinor2 {
    pub const fn new(a: C64, b: C64) -> Self {
        Spinor2([a, b])
    }

    pub const fn up() -> Self {
        Spinor2([ONE, ZERO])
    }

    pub const fn down() -> Self {
        Spinor2([ZERO, ONE])
    }

    /// Basis spinor for spin projection `s` along the quantization axis.
    pub const fn basis(s: Spin) -> Self {
        match s {
            Spin::Up => Spinor2::up(),
            Spin::Down => Spinor2::down(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < UNIT_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(real(1.0 / n)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Spinor2([self.0[0] * s, self.0[1] * s])
    }

    pub fn conj(&self) -> Self {
        Spinor2([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn dot(&self, other: &Spinor2) -> C64 {
        vdot(&self.0, &other.0)
    }

    pub fn apply(&self, m: &Mat2) -> Self {
        Spinor2(m.mul_vec(self.0))
    }

    pub fn distance(&self, other: &Spinor2) -> f64 {
        ((self.0[0] - other.0[0]).norm_sqr() + (self.0[1] - other.0[1]).norm_sqr()).sqrt()
    }

    /// Multiply by the phase that makes the largest-magnitude component
    /// real and positive.
    pub fn canonical_phase(&self) -> Self {
        let k = if self.0[0].norm() >= self.0[1].norm() { 0 } else { 1 };
        let z = self.0[k];
        if z.norm() == 0.0 {
            return *self;
        }
        self.scale(z.conj() / z.norm())
    }
}

/// Spin projection label `s = +-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];
}

/// Sign of the mode energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn factor(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            EnergySign::Positive => EnergySign::Negative,
            EnergySign::Negative => EnergySign::Positive,
        }
    }
}

/// A 2x2 spin-space matrix checked to be unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct UnitaryMatrix2(Mat2);

impl UnitaryMatrix2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let deviation = m.unitarity_defect();
        if deviation.is_finite() && deviation < UNIT_TOL * 10.0 {
            Ok(UnitaryMatrix2(m))
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    pub fn identity() -> Self {
        UnitaryMatrix2(Mat2::identity())
    }

    pub fn pauli_x() -> Self {
        UnitaryMatrix2(Mat2::pauli_x())
    }

    pub fn pauli_y() -> Self {
        UnitaryMatrix2(Mat2::pauli_y())
    }

    pub fn pauli_z() -> Self {
        UnitaryMatrix2(Mat2::pauli_z())
    }

    pub fn hadamard() -> Self {
        UnitaryMatrix2((Mat2::pauli_x() + Mat2::pauli_z()) * real(std::f64::consts::FRAC_1_SQRT_2))
    }

    /// exp(-i angle/2 sigma.n) for a unit axis n.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("axis", "rotation axis must be non-zero"));
        }
        ensure_finite("angle", angle)?;
        let unit = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = (0.5 * angle).sin_cos();
        Ok(UnitaryMatrix2(
            Mat2::identity() * real(c) - Mat2::sigma_dot(unit) * (I * s),
        ))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix2(self.0.adjoint())
    }

    pub fn compose(&self, then: &UnitaryMatrix2) -> Self {
        UnitaryMatrix2(then.0 * self.0)
    }
}

impl TryFrom<Mat2> for UnitaryMatrix2 {
    type Error = Error;
    fn try_from(m: Mat2) -> Result<Self> {
        UnitaryMatrix2::new(m)
    }
}

impl From<UnitaryMatrix2> for Mat2 {
    fn from(u: UnitaryMatrix2) -> Mat2 {
        u.0
    }
}

/// A spacetime event `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub x: [f64; 3],
}

impl Event {
    pub fn origin() -> Self {
        Event { t: 0.0, x: [0.0; 3] }
    }

    pub fn reflected(&self) -> Self {
        Event {
            t: -self.t,
            x: [-self.x[0], -self.x[1], -self.x[2]],
        }
    }
}

/// A Dirac plane-wave mode in a box of volume `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bispinor {
    upper: Spinor2,
    lower: Spinor2,
    momentum: [f64; 3],
    energy: f64,
    mass: f64,
    volume: f64,
}

fn norm3(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

impl Bispinor {
    /// Assemble a bispinor from raw parts; no on-shell check is made.
    pub fn from_parts(upper: Spinor2, lower: Spinor2, momentum: [f64; 3], energy: f64, mass: f64, volume: f64) -> Self {
        Bispinor {
            upper,
            lower,
            momentum,
            energy,
            mass,
            volume,
        }
    }

    pub fn upper(&self) -> Spinor2 {
        self.upper
    }

    pub fn lower(&self) -> Spinor2 {
        self.lower
    }

    pub fn momentum(&self) -> [f64; 3] {
        self.momentum
    }

    /// Signed energy.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn energy_sign(&self) -> EnergySign {
        if self.energy >= 0.0 {
            EnergySign::Positive
        } else {
            EnergySign::Negative
        }
    }

    pub fn components(&self) -> [C64; 4] {
        [self.upper.0[0], self.upper.0[1], self.lower.0[0], self.lower.0[1]]
    }

    /// `psi^dag psi V`.
    pub fn density(&self) -> f64 {
        (self.upper.norm_sqr() + self.lower.norm_sqr()) * self.volume
    }

    /// `|E^2 - p^2 - m^2|`.
    pub fn shell_residual(&self) -> f64 {
        let p = norm3(self.momentum);
        (self.energy * self.energy - p * p - self.mass * self.mass).abs()
    }

    /// Two-component spinor `chi` labelling this mode, recovered from
    /// whichever block carries the larger prefactor.
    pub fn label(&self) -> Result<Spinor2> {
        let e = self.energy.abs();
        let m = self.mass;
        let p = self.momentum;
        let pn = norm3(p);
        match self.energy_sign() {
            EnergySign::Positive => {
                let pref = ((e + m) / (2.0 * e * self.volume)).sqrt();
                Ok(self.upper.scale(real(1.0 / pref)))
            }
            EnergySign::Negative => {
                if pn == 0.0 {
                    return Err(Error::DegenerateRestMode);
                }
                // lower = -sigma.p_hat sqrt((E+m)/2EV) chi
                let pref = ((e + m) / (2.0 * e * self.volume)).sqrt();
                let hat = [p[0] / pn, p[1] / pn, p[2] / pn];
                Ok(self.lower.apply(&Mat2::sigma_dot(hat)).scale(real(-1.0 / pref)))
            }
        }
    }

    /// Phase `e^{i(p.x - E t)}` of the mode at an event.
    pub fn phase_at(&self, event: &Event) -> C64 {
        let px: f64 = (0..3).map(|i| self.momentum[i] * event.x[i]).sum();
        C64::from_polar(1.0, px - self.energy * event.t)
    }

    /// The PT image of this mode: the spinor part becomes
    /// `diag(-sigma_y, sigma_y) psi*`, evaluated at the reflected event.
    ///
    /// For a mode labelled by `chi` the image is the same `(E, p)` mode
    /// labelled by `-sigma_y chi*`. Applying the map twice gives `-psi`.
    pub fn pt_transform(&self, event: &Event) -> (Bispinor, Event) {
        let sy = Mat2::pauli_y();
        // Time reversal i gamma^1 gamma^3 = diag(-sigma_y, -sigma_y), then parity gamma^0.
        let t_upper = self.upper.conj().apply(&sy).scale(real(-1.0));
        let t_lower = self.lower.conj().apply(&sy).scale(real(-1.0));
        let image = Bispinor {
            upper: t_upper,
            lower: t_lower.scale(real(-1.0)),
            ..*self
        };
        (image, event.reflected())
    }

    /// Act with a spin-space unitary on the label and rebuild on shell.
    pub fn rotate_spin(&self, u: &UnitaryMatrix2) -> Result<Bispinor> {
        let chi = self.label()?.apply(u.matrix());
        plane_wave(self.momentum, self.energy_sign(), chi, self.mass, self.volume)
    }

    pub fn distance(&self, other: &Bispinor) -> f64 {
        self.upper
            .distance(&other.upper)
            .hypot(self.lower.distance(&other.lower))
    }
}

/// Normalised Dirac plane wave of momentum `p`, energy sign `sign`
/// and spin label `chi`, with `psi^dag psi V = 1`.
pub fn plane_wave(p: [f64; 3], sign: EnergySign, chi: Spinor2, m: f64, volume: f64) -> Result<Bispinor> {
    ensure_positive("m", m)?;
    ensure_positive("V", volume)?;
    for c in p {
        ensure_finite("p", c)?;
    }
    let n = chi.norm_sqr();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroNorm);
    }
    if (n - 1.0).abs() >= UNIT_TOL {
        return Err(Error::invalid("chi", format!("must be unit-normalised, |chi|^2 = {n}")));
    }
    let pn = norm3(p);
    let e = pn.hypot(m);
    let plus = ((e + m) / (2.0 * e * volume)).sqrt();
    let sp = Mat2::sigma_dot(p);
    let (upper, lower, energy) = match sign {
        EnergySign::Positive => (chi.scale(real(plus)), chi.apply(&sp).scale(real(plus / (e + m))), e),
        EnergySign::Negative => {
            if pn == 0.0 {
                return Err(Error::DegenerateRestMode);
            }
            let minus = pn / ((2.0 * e * volume) * (e + m)).sqrt();
            let hat = [p[0] / pn, p[1] / pn, p[2] / pn];
            (
                chi.scale(real(minus)),
                chi.apply(&Mat2::sigma_dot(hat)).scale(real(-plus)),
                -e,
            )
        }
    };
    Ok(Bispinor {
        upper,
        lower,
        momentum: p,
        energy,
        mass: m,
        volume,
    })
}

/// `a^dag b V` for two modes in the same momentum sector.
pub fn overlap(a: &Bispinor, b: &Bispinor) -> Result<C64> {
    let scale = 1.0 + norm3(a.momentum).max(norm3(b.momentum));
    let same_p = (0..3).all(|i| (a.momentum[i] - b.momentum[i]).abs() <= 1e-12 * scale);
    let same_v = (a.volume - b.volume).abs() <= 1e-12 * a.volume.max(b.volume);
    if !same_p || !same_v {
        return Err(Error::MomentumMismatch);
    }
    Ok(vdot(&a.components(), &b.components()) * a.volume)
}

/// `C_s = psi_s^dag U psi_0`, with `U` acting on the spin label of
/// `psi_0` and the rotated mode rebuilt on shell.
pub fn spin_matrix_element(s: Spin, u: &UnitaryMatrix2, psi0: &Bispinor) -> Result<C64> {
    let residual = psi0.shell_residual();
    if !(residual <= SHELL_TOL * (1.0 + psi0.energy * psi0.energy)) {
        return Err(Error::OffShell { residual });
    }
    let rotated = psi0.rotate_spin(u)?;
    let basis = plane_wave(
        psi0.momentum,
        psi0.energy_sign(),
        Spinor2::basis(s),
        psi0.mass,
        psi0.volume,
    )?;
    overlap(&basis, &rotated)
}

/// Scalar coefficients `(a, b)` of an axial mode with momentum `k` along
/// the quantization axis, `psi = (a chi, b sigma_z chi)` up to `1/sqrt(V)`.
///
/// The negative-energy branch uses `sgn(0) = +1` for the axis direction.
pub fn axial_mode(k: f64, sign: EnergySign, m: f64) -> [f64; 2] {
    let e = k.hypot(m);
    let big = ((e + m) / (2.0 * e)).sqrt();
    let small = k.abs() / (2.0 * e * (e + m)).sqrt();
    let dir = if k < 0.0 { -1.0 } else { 1.0 };
    match sign {
        EnergySign::Positive => [big, dir * small],
        EnergySign::Negative => [small, -dir * big],
    }
}
