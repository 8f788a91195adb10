use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use zigzag_core::cavity::{cavity_coefficients_with_floor, rmax_scan, verify_symmetries, KGrid};
use zigzag_core::experiments::ctc::{ctc_ring, deutsch_ctc, CtcSpec};
use zigzag_core::experiments::double_cavity::double_cavity_with;
use zigzag_core::experiments::game::{retro_game_at, Trials};
use zigzag_core::experiments::gyni::gyni_gain;
use zigzag_core::experiments::interferometer::{interferometer, visibility};
use zigzag_core::experiments::switch::{quantum_switch, SwitchSpec};
use zigzag_core::experiments::Timing;
use zigzag_core::ledger::{build_ledger, LedgerOptions};
use zigzag_core::oracle::{cavity_oracle, interface_oracle, relative_error, OracleOptions};
use zigzag_core::sweep::{rmax_table, run_sweep, SweepSpec};
use zigzag_core::{cavity_coefficients, solve_interface, CavityCoeffs, CavityParams, InterfaceConfig, InterfaceKind};

use crate::args::*;
use crate::error::{CliError, CliResult};

/// Rendered command output and its file extension.
pub struct Output {
    pub body: String,
    pub extension: &'static str,
}

impl Output {
    fn json<T: Serialize>(value: &T) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("serialisable report");
        body.push('\n');
        Output {
            body,
            extension: "json",
        }
    }

    fn csv(body: String) -> Self {
        Output { body, extension: "csv" }
    }
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Interface(_) => "interface",
        Command::Cavity(_) => "cavity",
        Command::Sweep(_) => "sweep",
        Command::Rmax(_) => "rmax",
        Command::DoubleCavity(_) => "double-cavity",
        Command::Interferometer(_) => "interferometer",
        Command::Game(_) => "game",
        Command::Gyni(_) => "gyni",
        Command::Switch(_) => "switch",
        Command::Ctc(_) => "ctc",
        Command::Deutsch(_) => "deutsch",
        Command::Oracle(_) => "oracle",
        Command::Ledger(_) => "ledger",
    }
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Interface(a) => interface(a),
        Command::Cavity(a) => cavity(a),
        Command::Sweep(a) => sweep(a),
        Command::Rmax(a) => rmax(a),
        Command::DoubleCavity(a) => Ok(Output::json(&double_cavity_with(&a.resolve()?, &Timing::default())?)),
        Command::Interferometer(a) => {
            let c = a.cavity.resolve()?;
            let report = interferometer(&c, a.theta)?;
            Ok(Output::json(&json!({
                "theta": a.theta,
                "reflectivity": c.reflectivity(),
                "visibility": visibility(c.reflectivity()),
                "report": report,
            })))
        }
        Command::Game(a) => {
            let trials = a.trials.map(|count| Trials { count, seed: a.seed });
            Ok(Output::json(&retro_game_at(a.r, trials)?))
        }
        Command::Gyni(a) => Ok(Output::json(&json!({ "R": a.r, "gain": gyni_gain(a.r)? }))),
        Command::Switch(a) => {
            let spec = SwitchSpec {
                ua: a.ua,
                ub: a.ub,
                psi0: a.psi0,
                xi: a.xi,
                cavity: a.cavity.resolve()?,
                momentum: a.momentum,
            };
            Ok(Output::json(&quantum_switch(&spec)?))
        }
        Command::Ctc(a) => {
            let spec = CtcSpec {
                u: a.u,
                xi: a.xi,
                cavity: a.cavity.resolve()?,
                alpha: a.alpha,
                input: a.input,
                momentum: a.momentum,
            };
            Ok(Output::json(&ctc_ring(&spec, a.pair_coefficient.into())?))
        }
        Command::Deutsch(a) => Ok(Output::json(&deutsch_ctc(a.alpha, a.r, a.phase, a.strict)?)),
        Command::Oracle(a) => oracle(a),
        Command::Ledger(a) => ledger(a),
    }
}

impl CavitySource {
    pub fn resolve(&self) -> CliResult<CavityCoeffs> {
        match (self.r, self.k_over_m, self.ea_over_m, self.m_tau) {
            (Some(r), None, None, None) => Ok(CavityCoeffs::from_reflectivity(r)?),
            (None, Some(k), Some(ea), Some(mt)) => Ok(cavity_coefficients(&CavityParams::new(ea, mt, k)?)?),
            _ => Err(CliError::Usage(
                "give either --r or all of --k-over-m, --ea-over-m and --m-tau".to_string(),
            )),
        }
    }
}

fn interface(a: &InterfaceArgs) -> CliResult<Output> {
    let rows = a
        .kind
        .kinds()
        .into_iter()
        .map(|kind| {
            let c = solve_interface(&InterfaceConfig::new(kind, a.ea_over_m)?, a.k_over_m, 1.0)?;
            Ok(json!({
                "config": kind.name(),
                "r": c.r,
                "t": c.t,
                "R": c.reflectivity(),
                "T": c.transmissivity(),
                "conservationResidual": c.conservation_residual(),
                "E": c.e,
                "EPrime": c.e_prime,
            }))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    Ok(Output::json(&json!({
        "kOverM": a.k_over_m,
        "eAOverM": a.ea_over_m,
        "interfaces": rows,
    })))
}

fn cavity(a: &CavityArgs) -> CliResult<Output> {
    let params = CavityParams::new(a.ea_over_m, a.m_tau, a.k_over_m)?;
    let c = cavity_coefficients_with_floor(&params, a.floor)?;
    let identities = verify_symmetries(&c);
    Ok(Output::json(&json!({
        "kOverM": a.k_over_m,
        "eAOverM": a.ea_over_m,
        "mTau": a.m_tau,
        "Rtot": c.reflectivity(),
        "Ttot": c.transmissivity(),
        "phaseR": c.phase_r(),
        "phaseT": c.phase_t(),
        "denomMag": c.denom_magnitude,
        "schwingerFlag": params.beyond_schwinger_limit(),
        "coefficients": c,
        "identities": identities,
        "maxIdentityResidual": identities.max_violation(),
    })))
}

fn sweep(a: &SweepArgs) -> CliResult<Output> {
    let mut fixed = BTreeMap::new();
    for (v, x) in &a.fixed {
        if fixed.insert(*v, *x).is_some() {
            return Err(CliError::Usage(format!("{v} fixed twice")));
        }
    }
    let spec = SweepSpec {
        variable: a.variable,
        range: a.range,
        fixed,
        experiment: a.experiment,
    };
    Ok(Output::csv(run_sweep(&spec)?.to_csv()))
}

fn rmax(a: &RmaxArgs) -> CliResult<Output> {
    let grid = KGrid {
        half_width: a.k_half_width,
        count: a.k_count,
        min_k: a.min_k,
    };
    let rows = rmax_scan(a.m_tau, &a.ea_over_m_range.points(), &grid)?;
    Ok(Output::csv(rmax_table(a.m_tau, &rows).to_csv()))
}

fn oracle(a: &OracleArgs) -> CliResult<Output> {
    let mut opts = OracleOptions {
        levels: a.levels,
        ..OracleOptions::default()
    };
    match a.target {
        OracleTarget::Interface => {
            if a.m_tau.is_some() {
                return Err(CliError::Usage("--m-tau applies to the cavity target only".to_string()));
            }
            opts.eps = a.eps.unwrap_or(1e-2);
            let rows = a
                .kind
                .kinds()
                .into_iter()
                .map(|kind: InterfaceKind| {
                    let cfg = InterfaceConfig::new(kind, a.ea_over_m)?;
                    let sharp = solve_interface(&cfg, a.k_over_m, 1.0)?;
                    let run = interface_oracle(&cfg, a.k_over_m, 1.0, &opts)?;
                    Ok(json!({
                        "config": kind.name(),
                        "oracle": { "r": run.value.r, "t": run.value.t },
                        "sharp": { "r": sharp.r, "t": sharp.t },
                        "relErrR": relative_error(run.value.r, sharp.r, 1.0),
                        "relErrT": relative_error(run.value.t, sharp.t, 1.0),
                        "richardsonResidual": run.residual,
                        "widths": run.widths,
                    }))
                })
                .collect::<CliResult<Vec<Value>>>()?;
            Ok(Output::json(&json!({
                "kOverM": a.k_over_m,
                "eAOverM": a.ea_over_m,
                "interfaces": rows,
            })))
        }
        OracleTarget::Cavity => {
            let m_tau = a
                .m_tau
                .ok_or_else(|| CliError::Usage("--m-tau is required for the cavity target".to_string()))?;
            opts.eps = a.eps.unwrap_or(2e-3);
            let params = CavityParams::new(a.ea_over_m, m_tau, a.k_over_m)?;
            let sharp = cavity_coefficients(&params)?;
            let run = cavity_oracle(&params, &opts)?;
            let v = &run.value;
            let err = |x, y| relative_error(x, y, 1.0);
            Ok(Output::json(&json!({
                "kOverM": a.k_over_m,
                "eAOverM": a.ea_over_m,
                "mTau": m_tau,
                "oracle": v,
                "sharp": sharp,
                "relErrRtot": err(v.r_tot, sharp.r_tot),
                "relErrTtot": err(v.t_tot, sharp.t_tot),
                "relErrRtotPrime": err(v.r_tot_prime, sharp.r_tot_prime),
                "relErrTtotPrime": err(v.t_tot_prime, sharp.t_tot_prime),
                "richardsonResidual": run.residual,
                "widths": run.widths,
            })))
        }
    }
}

fn ledger(a: &LedgerArgs) -> CliResult<Output> {
    let opts = LedgerOptions {
        m_tau: a.m_tau,
        ea_start: a.ea_over_m_range.start,
        ea_stop: a.ea_over_m_range.stop,
        ea_count: a.ea_over_m_range.count,
        ..LedgerOptions::default()
    };
    let ledger = build_ledger(&opts)?;
    if a.json {
        Ok(Output::json(&ledger))
    } else {
        Ok(Output {
            body: ledger.to_string(),
            extension: "txt",
        })
    }
}
