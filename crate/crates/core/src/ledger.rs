//! Measured checks of the places where the reference formulas and the
//! computed physics disagree or leave a choice open.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::amplitude::cis;
use crate::cavity::{cavity_coefficients, CavityCoeffs};
use crate::cavity::{global_max, rmax_scan, CavityParams, KGrid, RmaxPoint};
use crate::error::Result;
use crate::experiments::ctc::{ctc_ring, deutsch_ctc, CtcSpec, PairCoefficient};
use crate::experiments::switch::{quantum_switch, SwitchSpec, D2_ONLY, D3_ONLY};
use crate::experiments::GOLDEN_REFLECTIVITY;
use crate::interface::solve_interface;
use crate::interface::{bare_sqrt_form_t, closed_form_t, InterfaceConfig, InterfaceKind};
use crate::optimize::linspace;
use crate::oracle::{cavity_oracle, relative_error, OracleOptions};
use crate::spinor::{Spinor2, UnitaryMatrix2};

/// Reference peak reflectivity, its potential, and the efficiency there.
pub const REFERENCE_RMAX: f64 = 143.13;
pub const REFERENCE_POTENTIAL: f64 = 46.45;
pub const REFERENCE_ETA: f64 = 0.9862;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub title: String,
    pub finding: String,
    pub measurements: Vec<Measurement>,
    /// Set when the computed value departs from the reference one.
    pub flagged: bool,
}

impl LedgerEntry {
    fn new(title: &str) -> Self {
        LedgerEntry {
            title: title.to_string(),
            finding: String::new(),
            measurements: Vec::new(),
            flagged: false,
        }
    }

    fn measure(&mut self, label: impl Into<String>, value: f64) {
        self.measurements.push(Measurement {
            label: label.into(),
            value,
        });
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.measurements.iter().find(|m| m.label == label).map(|m| m.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn entry(&self, title: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.title == title)
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "[{}] {}", if e.flagged { "FLAGGED" } else { "ok" }, e.title)?;
            writeln!(f, "  {}", e.finding)?;
            for m in &e.measurements {
                writeln!(f, "  {:<48} {:.16e}", m.label, m.value)?;
            }
        }
        Ok(())
    }
}

/// Settings for the expensive parts of the ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerOptions {
    pub m_tau: f64,
    pub ea_start: f64,
    pub ea_stop: f64,
    pub ea_count: usize,
    pub grid: KGrid,
    pub oracle: OracleOptions,
}

impl Default for LedgerOptions {
    fn default() -> Self {
        LedgerOptions {
            m_tau: 1.5,
            ea_start: 1.0,
            ea_stop: 60.0,
            ea_count: 600,
            grid: KGrid::default(),
            oracle: OracleOptions {
                eps: 2e-3,
                ..OracleOptions::default()
            },
        }
    }
}

pub const T_ENTRY: &str = "t=1+r vs conservation";
pub const PEAK_ENTRY: &str = "Fig5c agreement";
pub const CTC_ENTRY: &str = "CTC M-matrix variant";
pub const SWITCH_ENTRY: &str = "switch D3 second-term order";
pub const PAIR_ENTRY: &str = "double-cavity pair amplitude";
pub const DEUTSCH_ENTRY: &str = "Deutsch phase condition";

/// Reference `(p, eA)` points for interface checks.
pub const INTERFACE_POINTS: [(f64, f64); 5] = [(1.0, 3.0), (0.5, 1.0), (2.0, 10.0), (5.0, 4.5), (10.0, 10.2)];

fn transmission_entry() -> Result<LedgerEntry> {
    let mut e = LedgerEntry::new(T_ENTRY);
    let mut worst_one_plus_r: f64 = 0.0;
    let mut worst_bare: f64 = 0.0;
    let mut worst_fixed: f64 = 0.0;
    for (p, ea) in INTERFACE_POINTS {
        let c = solve_interface(&InterfaceConfig::new(InterfaceKind::ENTER, ea)?, p, 1.0)?;
        let one_plus_r = (1.0 + c.r).norm_sqr() - (1.0 + c.reflectivity());
        let bare = (bare_sqrt_form_t(c.e, c.e_prime, c.p, c.q, 1.0) - c.t.re).abs();
        let fixed = (closed_form_t(c.e, c.e_prime, c.p, c.q, 1.0)? - c.t.re).abs();
        e.measure(format!("|1+r|^2-(1+|r|^2) p={p} eA={ea}"), one_plus_r);
        e.measure(format!("|t_sqrt - t_solve| p={p} eA={ea}"), bare);
        e.measure(format!("|t_sqrt*sqrt(E'/E) - t_solve| p={p} eA={ea}"), fixed);
        worst_one_plus_r = worst_one_plus_r.max(one_plus_r.abs());
        worst_bare = worst_bare.max(bare);
        worst_fixed = worst_fixed.max(fixed);
    }
    e.flagged = true;
    e.finding = format!(
        "continuity solve is authoritative; t=1+r breaks T=1+R (worst {worst_one_plus_r:.3e}); \
         the literal sqrt form misses sqrt(E'/E) (worst {worst_bare:.3e}); with it restored the \
         residual is {worst_fixed:.3e}"
    );
    Ok(e)
}

fn peak_entry(opts: &LedgerOptions) -> Result<(LedgerEntry, Vec<RmaxPoint>)> {
    let mut e = LedgerEntry::new(PEAK_ENTRY);
    let potentials = linspace(opts.ea_start, opts.ea_stop, opts.ea_count);
    let rows = rmax_scan(opts.m_tau, &potentials, &opts.grid)?;
    let best = global_max(&rows).expect("non-empty scan");
    let near = rows
        .iter()
        .copied()
        .min_by(|a, b| {
            (a.ea_over_m - REFERENCE_POTENTIAL)
                .abs()
                .total_cmp(&(b.ea_over_m - REFERENCE_POTENTIAL).abs())
        })
        .expect("non-empty scan");
    let rel = |x: f64, reference: f64| (x - reference).abs() / reference;
    e.measure("scan argmax eA/m", best.ea_over_m);
    e.measure("scan argmax k/m", best.k_star);
    e.measure("scan Rmax", best.r_max);
    e.measure("scan eta", best.eta);
    e.measure("rel err Rmax vs 143.13", rel(best.r_max, REFERENCE_RMAX));
    e.measure("rel err eA vs 46.45", rel(best.ea_over_m, REFERENCE_POTENTIAL));
    e.measure("rel err eta vs 0.9862", rel(best.eta, REFERENCE_ETA));
    e.measure("grid row nearest 46.45: eA/m", near.ea_over_m);
    e.measure("grid row nearest 46.45: Rmax", near.r_max);
    e.measure("grid row nearest 46.45: eta", near.eta);
    e.measure("rel err Rmax(46.45 row) vs 143.13", rel(near.r_max, REFERENCE_RMAX));
    for (tag, row) in [("argmax", best), ("46.45 row", near)] {
        let params = CavityParams::new(row.ea_over_m, opts.m_tau, row.k_star)?;
        let sharp = cavity_coefficients(&params)?;
        let oracle = cavity_oracle(&params, &opts.oracle)?;
        e.measure(format!("oracle R at {tag}"), oracle.value.reflectivity());
        e.measure(
            format!("oracle rel err r_tot at {tag}"),
            relative_error(oracle.value.r_tot, sharp.r_tot, 1.0),
        );
    }
    let within = rel(best.r_max, REFERENCE_RMAX) <= 0.02
        && rel(best.ea_over_m, REFERENCE_POTENTIAL) <= 0.02
        && rel(best.eta, REFERENCE_ETA) <= 0.002;
    e.flagged = !within;
    e.finding = if within {
        "scan reproduces the reference peak".to_string()
    } else {
        format!(
            "scan maximum R={:.6e} at eA/m={:.6}, k/m={:.6} (pole of the cavity denominator); \
             at eA/m~46.45 the refined peak is R={:.4} (eta={:.6}); ODE oracle confirms both; \
             reference 143.13 @ 46.45 not reproduced",
            best.r_max, best.ea_over_m, best.k_star, near.r_max, near.eta
        )
    };
    Ok((e, rows))
}

/// Reference ring used for the variant comparison.
pub fn reference_ring() -> Result<CtcSpec> {
    Ok(CtcSpec {
        u: UnitaryMatrix2::rotation([0.3, 1.0, -0.2], 1.1)?,
        xi: 0.3,
        cavity: CavityCoeffs::from_reflectivity(0.5)?,
        alpha: 1.0,
        input: Spinor2::up(),
        momentum: 1.0,
    })
}

fn ctc_entry() -> Result<LedgerEntry> {
    let mut e = LedgerEntry::new(CTC_ENTRY);
    let rep = ctc_ring(&reference_ring()?, PairCoefficient::TransmissionSquared)?;
    let mut best: Option<(PairCoefficient, f64)> = None;
    for ch in &rep.channels {
        e.measure(
            format!("{} sum-rule residual", ch.coefficient.name()),
            ch.sum_rule_residual,
        );
        e.measure(
            format!("{} zero-field |P_v-1|", ch.coefficient.name()),
            ch.zero_field_residual,
        );
        e.measure(format!("{} P_v", ch.coefficient.name()), ch.report.vacuum_probability);
        if best.filter(|(_, r)| *r <= ch.zero_field_residual).is_none() {
            best = Some((ch.coefficient, ch.zero_field_residual));
        }
    }
    let (winner, _) = best.expect("two variants");
    e.flagged = true;
    e.finding = format!(
        "P_v is defined by the sum rule, so both variants close it to rounding; the zero-field \
         check (P_v must be 1 without a field) favours {} but neither passes it because the \
         B channel carries T instead of R",
        winner.name()
    );
    Ok(e)
}

fn switch_entry() -> Result<LedgerEntry> {
    let mut e = LedgerEntry::new(SWITCH_ENTRY);
    let r = 1.3;
    let cavity = CavityCoeffs::from_reflectivity(r)?;
    let (ua, ub) = (UnitaryMatrix2::pauli_x(), UnitaryMatrix2::pauli_z());
    let mut used = Vec::new();
    let mut literal = Vec::new();
    for i in 0..32 {
        let xi = i as f64 * 0.2;
        let rep = quantum_switch(&SwitchSpec {
            ua,
            ub,
            psi0: Spinor2::up(),
            xi,
            cavity,
            momentum: 1.0,
        })?;
        used.push(rep.detections.get(D2_ONLY) + rep.detections.get(D3_ONLY));
        let pv = rep.detections.vacuum_probability;
        let (t2, r2) = (cavity.t_tot * cavity.t_tot, cavity.r_tot * cavity.r_tot);
        let ph = cis(xi);
        let mut lit = 0.0;
        for s in 0..2 {
            let d2 = t2 * rep.c_forward[s] - r2 * ph * rep.c_backward[s];
            let d3 = t2 * rep.c_forward[s] + r2 * ph * rep.c_forward[s];
            lit += 0.25 * pv * (d2.norm_sqr() + d3.norm_sqr());
        }
        literal.push(lit);
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    e.measure("xi-spread of P(D2)+P(D3), backward order in D3", spread(&used));
    e.measure("xi-spread of P(D2)+P(D3), forward order in D3", spread(&literal));
    e.flagged = true;
    e.finding = "taken literally, the D3 amplitude has C(A<B) in both terms; only the reading with \
                 C(B<A) in the zigzag term keeps P(D2)+P(D3) independent of xi, so it is used"
        .to_string();
    Ok(e)
}

fn pair_entry() -> Result<LedgerEntry> {
    let mut e = LedgerEntry::new(PAIR_ENTRY);
    let c = CavityCoeffs::from_reflectivity(GOLDEN_REFLECTIVITY)?;
    let (r, rp, t, tp) = (c.r_tot, c.r_tot_prime, c.t_tot, c.t_tot_prime);
    let rr = c.reflectivity();
    e.measure("|r r' r - r' t t'|^2 / R", (r * rp * r - rp * t * tp).norm_sqr() / rr);
    e.measure("|r r' r - r t t'|^2 / R", (r * rp * r - r * t * tp).norm_sqr() / rr);
    e.flagged = true;
    e.finding = "taken literally, the pair amplitude r r' r - r' t t' has modulus sqrt(R)(1+2R) since \
                 r' = -r; the stated value R needs a common factor r, so the crossed diagram is \
                 taken as r t t'"
        .to_string();
    Ok(e)
}

fn deutsch_entry() -> Result<LedgerEntry> {
    let mut e = LedgerEntry::new(DEUTSCH_ENTRY);
    for alpha in [0.0, 1.0] {
        let rep = deutsch_ctc(alpha, 1.0, 0.0, true)?;
        e.measure(
            format!("P(D1) alpha={alpha}"),
            rep.detections.get(crate::experiments::ctc::D1_DEUTSCH),
        );
        e.measure(format!("suppressed amplitude alpha={alpha}"), rep.suppressed_amplitude);
    }
    e.finding = "the literal delay E(t_BS2 - t_BS2) vanishes identically; the loop phase is a \
                 free parameter chosen to cancel the suppressed port"
        .to_string();
    Ok(e)
}

/// Evaluate every ledger entry.
pub fn build_ledger(opts: &LedgerOptions) -> Result<Ledger> {
    let (peak, _) = peak_entry(opts)?;
    Ok(Ledger {
        entries: vec![
            transmission_entry()?,
            peak,
            ctc_entry()?,
            switch_entry()?,
            pair_entry()?,
            deutsch_entry()?,
        ],
    })
}

/// The resonance scan alone, for callers that need the rows.
pub fn peak_scan(opts: &LedgerOptions) -> Result<(LedgerEntry, Vec<RmaxPoint>)> {
    peak_entry(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_entries() {
        let t = transmission_entry().unwrap();
        assert_eq!(t.measurements.len(), 15);
        assert!(t.value("|t_sqrt*sqrt(E'/E) - t_solve| p=1 eA=3").unwrap() < 1e-12);
        let s = switch_entry().unwrap();
        assert!(s.value("xi-spread of P(D2)+P(D3), backward order in D3").unwrap() < 1e-12);
        assert!(s.value("xi-spread of P(D2)+P(D3), forward order in D3").unwrap() > 1e-3);
        let p = pair_entry().unwrap();
        assert!((p.value("|r r' r - r t t'|^2 / R").unwrap() - 1.0).abs() < 1e-12);
        let c = ctc_entry().unwrap();
        assert!(c.value("t-squared sum-rule residual").unwrap() < 1e-12);
        let d = deutsch_entry().unwrap();
        assert!((d.value("P(D1) alpha=0").unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }
}
