//! Relativistic electron scattering at temporal interfaces of a vector
//! potential, temporal Fabry-Perot cavities, and the vacuum-normalised
//! diagram probabilities of the experiments built on them.
//!
//! Units are natural with `m = 1`; momenta and potentials are in units
//! of `m`, times in units of `1/m`.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod cavity;
pub mod error;
pub mod experiments;
pub mod interface;
pub mod ledger;
pub mod linalg;
pub mod ode;
pub mod optimize;
pub mod oracle;
pub mod spinor;
pub mod sweep;

pub use amplitude::{
    compose_path, normalize_report, vacuum_probability, DiagramTerm, ExperimentReport, PhaseFactor, VacuumSpec,
};
pub use cavity::{
    cavity_coefficients, find_rmax, verify_symmetries, CavityCoeffs, CavityParams, KGrid, RmaxPoint, SymmetryReport,
};
pub use error::{Error, Result};
pub use interface::{
    closed_form_r, closed_form_t, derive_config_coeffs, solve_interface, FieldStep, Incidence, InterfaceCoeffs,
    InterfaceConfig, InterfaceKind, InterfaceSet,
};
pub use linalg::{Mat2, C64};
pub use spinor::{
    overlap, plane_wave, spin_matrix_element, Bispinor, EnergySign, Event, Spin, Spinor2, UnitaryMatrix2,
};
