//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Runtime budgets are checked as printed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zigzag_core::cavity::verify_symmetries;
use zigzag_core::experiments::ctc::{ctc_ring, deutsch_ctc, CtcSpec, PairCoefficient, D1_DEUTSCH};
use zigzag_core::experiments::double_cavity::double_cavity;
use zigzag_core::experiments::game::{retro_game, Trials, CLASSICAL_BOUND};
use zigzag_core::experiments::gyni::gyni_gain;
use zigzag_core::experiments::interferometer::{interferometer, visibility, D1_D2_D3, D1_ONLY, D3_ONLY};
use zigzag_core::experiments::switch::{quantum_switch, SwitchSpec, D2_ONLY, D3_ONLY as SW_D3_ONLY};
use zigzag_core::experiments::{GOLDEN_REFLECTIVITY, GYNI_THRESHOLD};
use zigzag_core::ledger::{peak_scan, LedgerOptions, REFERENCE_ETA, REFERENCE_POTENTIAL, REFERENCE_RMAX};
use zigzag_core::oracle::{cavity_oracle, interface_oracle, relative_error, OracleOptions};
use zigzag_core::{
    cavity_coefficients, solve_interface, CavityCoeffs, CavityParams, Error, InterfaceConfig, InterfaceKind, Spinor2,
    UnitaryMatrix2,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
}

fn conservation() -> Outcome {
    let mut g = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = 60.0 * (1.0 - g.gen::<f64>());
        let ea = 50.0 * g.gen::<f64>();
        let kind = InterfaceKind::ALL[g.gen_range(0..4)];
        let c = solve_interface(&InterfaceConfig::new(kind, ea).unwrap(), p, 1.0).unwrap();
        worst = worst.max(c.conservation_residual());
    }
    outcome(
        worst < 1e-12,
        format!("max ||t|^2-|r|^2-1| = {worst:.3e} over 1e4 solves (tol 1e-12)"),
    )
}

fn cavity_identities() -> Outcome {
    let mut g = rng(2);
    let (mut worst, mut n, mut skipped) = (0.0f64, 0, 0);
    while n < 1000 {
        let ea = 50.0 * g.gen::<f64>();
        let tau = 0.1 + 4.9 * g.gen::<f64>();
        let k = 60.0 * (1.0 - g.gen::<f64>());
        match cavity_coefficients(&CavityParams::new(ea, tau, k).unwrap()) {
            Ok(c) => {
                let s = verify_symmetries(&c);
                worst = worst
                    .max(s.reflection_antisymmetry)
                    .max(s.transmission_modulus)
                    .max(s.unit_determinant)
                    .max(s.quadrature);
                n += 1;
            }
            Err(Error::Resonance { .. }) => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    outcome(
        worst < 1e-10,
        format!("max identity residual {worst:.3e} over 1e3 points, {skipped} resonant draws redrawn (tol 1e-10)"),
    )
}

fn oracle_equivalence() -> Outcome {
    let iface_opts = OracleOptions::default();
    let mut worst_iface: f64 = 0.0;
    for (p, ea) in [(1.0, 3.0), (2.5, 1.2), (0.4, 6.0)] {
        for kind in InterfaceKind::ALL {
            let cfg = InterfaceConfig::new(kind, ea).unwrap();
            let sharp = solve_interface(&cfg, p, 1.0).unwrap();
            let run = interface_oracle(&cfg, p, 1.0, &iface_opts).unwrap();
            worst_iface = worst_iface
                .max(relative_error(run.value.r, sharp.r, 1e-3))
                .max(relative_error(run.value.t, sharp.t, 1e-3));
        }
    }
    let cav_opts = OracleOptions {
        eps: 2e-3,
        ..OracleOptions::default()
    };
    let mut worst_cav: f64 = 0.0;
    for (ea, tau, k) in [
        (10.0, 1.5, 10.0),
        (10.0, 1.5, 9.888),
        (46.45, 1.5, 46.45),
        (3.0, 1.5, 1.0),
        (5.0, 0.7, 4.2),
    ] {
        let params = CavityParams::new(ea, tau, k).unwrap();
        let sharp = cavity_coefficients(&params).unwrap();
        let run = cavity_oracle(&params, &cav_opts).unwrap();
        let v = run.value;
        for (a, b) in [
            (v.r_tot, sharp.r_tot),
            (v.t_tot, sharp.t_tot),
            (v.r_tot_prime, sharp.r_tot_prime),
            (v.t_tot_prime, sharp.t_tot_prime),
        ] {
            worst_cav = worst_cav.max(relative_error(a, b, 1e-3));
        }
    }
    outcome(
        worst_iface < 1e-4 && worst_cav < 1e-3,
        format!("interfaces {worst_iface:.3e} (tol 1e-4, 12 cases), cavities {worst_cav:.3e} (tol 1e-3, 5 points)"),
    )
}

fn resonance_peak() -> Outcome {
    let opts = LedgerOptions::default();
    let (entry, _) = peak_scan(&opts).unwrap();
    let v = |l: &str| entry.value(l).unwrap();
    let rel_r = v("rel err Rmax vs 143.13");
    let rel_a = v("rel err eA vs 46.45");
    let rel_e = v("rel err eta vs 0.9862");
    let within = rel_r <= 0.02 && rel_a <= 0.02 && rel_e <= 0.002;
    let confirmed = v("oracle rel err r_tot at argmax") < 1e-3 && v("oracle rel err r_tot at 46.45 row") < 1e-3;
    let detail = format!(
        "scan max R={:.6e} at eA/m={:.4} eta={:.6}; reference {REFERENCE_RMAX} at {REFERENCE_POTENTIAL} eta {REFERENCE_ETA}; \
         eA/m~46.45 row R={:.4}; oracle agreement {:.1e}/{:.1e}",
        v("scan Rmax"),
        v("scan argmax eA/m"),
        v("scan eta"),
        v("grid row nearest 46.45: Rmax"),
        v("oracle rel err r_tot at argmax"),
        v("oracle rel err r_tot at 46.45 row"),
    );
    if within {
        outcome(true, detail)
    } else {
        outcome(
            confirmed && entry.flagged,
            format!("flagged ledger entry, outside tolerance but oracle-confirmed: {detail}"),
        )
    }
}

fn double_cavity_normalisation() -> Outcome {
    let mut g = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let r = 1e3 * g.gen::<f64>();
        worst = worst.max((double_cavity(r).unwrap().sum_check - 1.0).abs());
    }
    outcome(
        worst < 1e-10,
        format!("max |sumCheck-1| = {worst:.3e} over 1e3 R (tol 1e-10)"),
    )
}

fn closed_interferometer(r: f64, theta: f64) -> [f64; 3] {
    let t = 1.0 + r;
    let pv = 1.0 / (t * t);
    let v = 2.0 * r * t.sqrt() / (t + r * r);
    [
        0.5 * pv * (t + r * r) * (1.0 + v * theta.sin()),
        0.5 * pv * r * (2.0 + r) - 0.5 * pv * (t + r * r) * v * theta.sin(),
        0.5 * pv * (1.0 + r),
    ]
}

fn interferometer_checks() -> Outcome {
    let mut g = rng(6);
    let mut closed: f64 = 0.0;
    for _ in 0..1000 {
        let r = 50.0 * g.gen::<f64>();
        let theta = PI * (2.0 * g.gen::<f64>() - 1.0);
        let rep = interferometer(&CavityCoeffs::from_reflectivity(r).unwrap(), theta).unwrap();
        for (label, e) in [D1_ONLY, D1_D2_D3, D3_ONLY].iter().zip(closed_interferometer(r, theta)) {
            closed = closed.max((rep.get(label) - e).abs());
        }
    }
    let c = CavityCoeffs::from_reflectivity(2.7).unwrap();
    let marg: Vec<f64> = (0..100)
        .map(|i| {
            let rep = interferometer(&c, -PI + 2.0 * PI * i as f64 / 99.0).unwrap();
            rep.get(D1_ONLY) + rep.get(D1_D2_D3)
        })
        .collect();
    let flat = spread(&marg);
    let golden = CavityCoeffs::from_reflectivity(GOLDEN_REFLECTIVITY).unwrap();
    let dark = interferometer(&golden, -FRAC_PI_2).unwrap().get(D1_ONLY);
    let vis = (visibility(GOLDEN_REFLECTIVITY) - 1.0).abs();
    outcome(
        closed < 1e-10 && flat < 1e-10 && dark.abs() < 1e-15 && vis < 1e-12,
        format!(
            "closed forms {closed:.1e}, D1 marginal spread {flat:.1e}, P(D1 only) at (R0,-pi/2) {dark:.1e}, |V(R0)-1| {vis:.1e}"
        ),
    )
}

fn game() -> Outcome {
    let rep = retro_game(Some(Trials {
        count: 1_000_000,
        seed: 2024,
    }))
    .unwrap();
    let r0 = GOLDEN_REFLECTIVITY;
    let expect = 0.75 - r0 / (4.0 * (1.0 + r0) * (1.0 + r0));
    let mc = rep.monte_carlo.unwrap();
    let z = (mc.gain - rep.gain) / mc.standard_error;
    outcome(
        (rep.gain - expect).abs() < 1e-12
            && (rep.gain - 0.690_983_005_625_052_6).abs() < 1e-12
            && z.abs() < 3.0
            && rep.postselected_gain == 1.0
            && rep.classical_bound == 0.5
            && CLASSICAL_BOUND == 0.5,
        format!(
            "gain {:.15}, MC {:.6} ({z:+.2} sigma, 1e6 trials), postselected {}, classical bound {}",
            rep.gain, mc.gain, rep.postselected_gain, rep.classical_bound
        ),
    )
}

fn gyni() -> Outcome {
    let at_threshold = gyni_gain(GYNI_THRESHOLD).unwrap();
    let high = gyni_gain(143.13).unwrap();
    outcome(
        (at_threshold - 0.5).abs() < 1e-12 && (high - 0.9862).abs() < 1e-4,
        format!("gain(1+sqrt2) = {at_threshold:.16}, gain(143.13) = {high:.6}"),
    )
}

fn switch_spec(ua: UnitaryMatrix2, ub: UnitaryMatrix2, xi: f64, r: f64) -> SwitchSpec {
    SwitchSpec {
        ua,
        ub,
        psi0: Spinor2::up(),
        xi,
        cavity: CavityCoeffs::from_reflectivity(r).unwrap(),
        momentum: 1.0,
    }
}

fn switch() -> Outcome {
    let gates = [
        (UnitaryMatrix2::pauli_x(), UnitaryMatrix2::pauli_z()),
        (UnitaryMatrix2::hadamard(), UnitaryMatrix2::pauli_y()),
        (
            UnitaryMatrix2::rotation([0.3, -1.0, 0.4], 0.9).unwrap(),
            UnitaryMatrix2::rotation([1.0, 0.2, 0.0], 2.2).unwrap(),
        ),
    ];
    let (mut xi_spread, mut complete): (f64, f64) = (0.0, 0.0);
    for (ua, ub) in gates {
        for r in [0.3, 1.3, 7.0] {
            let sums: Vec<f64> = (0..64)
                .map(|i| {
                    let rep = quantum_switch(&switch_spec(ua, ub, 2.0 * PI * i as f64 / 64.0, r)).unwrap();
                    complete = complete.max((rep.vacuum_channels.sum_check - 1.0).abs());
                    rep.detections.get(D2_ONLY) + rep.detections.get(SW_D3_ONLY)
                })
                .collect();
            xi_spread = xi_spread.max(spread(&sums));
        }
    }
    let rep = quantum_switch(&switch_spec(
        UnitaryMatrix2::pauli_x(),
        UnitaryMatrix2::pauli_z(),
        0.4,
        1.3,
    ))
    .unwrap();
    let again = quantum_switch(&switch_spec(
        UnitaryMatrix2::pauli_x(),
        UnitaryMatrix2::pauli_z(),
        0.4,
        1.3,
    ))
    .unwrap();
    let (d2, d3) = (rep.detections.get(D2_ONLY), rep.detections.get(SW_D3_ONLY));
    let fixture = (d2 - 0.013_150_818_284_871_985).abs() < 1e-15 && (d3 - 0.111_562_858_410_108_25).abs() < 1e-15;
    outcome(
        xi_spread < 1e-10 && complete < 1e-10 && fixture && rep == again,
        format!(
            "xi spread {xi_spread:.1e}, vacuum-sector |sum-1| {complete:.1e}, (x,z) fixture D2={d2:.17} D3={d3:.17}"
        ),
    )
}

fn ctc() -> Outcome {
    let mut g = rng(10);
    let mut residual: f64 = 0.0;
    let mut sum_rule = [0.0f64; 2];
    for _ in 0..200 {
        let spec = CtcSpec {
            u: UnitaryMatrix2::rotation([g.gen(), g.gen(), g.gen::<f64>() - 0.5], 6.0 * g.gen::<f64>()).unwrap(),
            xi: PI * (2.0 * g.gen::<f64>() - 1.0),
            cavity: CavityCoeffs::from_reflectivity(0.9 * g.gen::<f64>()).unwrap(),
            alpha: 1.0,
            input: Spinor2::up(),
            momentum: 1.0,
        };
        let rep = ctc_ring(&spec, PairCoefficient::TransmissionSquared).unwrap();
        residual = residual.max(rep.fixed_point_residual);
        for (i, ch) in rep.channels.iter().enumerate() {
            sum_rule[i] = sum_rule[i].max(ch.sum_rule_residual);
        }
    }
    let d0 = deutsch_ctc(0.0, 1.0, 0.0, true).unwrap().detections.get(D1_DEUTSCH);
    let d1 = deutsch_ctc(1.0, 1.0, 0.0, true).unwrap().detections.get(D1_DEUTSCH);
    outcome(
        residual < 1e-12 && (d0 - 2.0 / 3.0).abs() < 1e-15 && (d1 - 2.0 / 9.0).abs() < 1e-15,
        format!(
            "fixed-point residual {residual:.1e}, Deutsch P(D1) {d0:.16} / {d1:.16}, sum-rule residual {}={:.1e} {}={:.1e}",
            PairCoefficient::ALL[0].name(),
            sum_rule[0],
            PairCoefficient::ALL[1].name(),
            sum_rule[1]
        ),
    )
}

const CLI_CASES: &[&[&str]] = &[
    &["interface", "--k-over-m", "1", "--ea-over-m", "3"],
    &["cavity", "--k-over-m", "10", "--ea-over-m", "10", "--m-tau", "1.5"],
    &[
        "sweep",
        "--variable",
        "kOverM",
        "--range",
        "0.1:20:1024",
        "--fixed",
        "eAOverM=10",
        "--fixed",
        "mTau=1.5",
    ],
    &["rmax", "--m-tau", "1.5", "--ea-over-m-range", "1:60:600"],
    &["double-cavity", "--r", "1.618"],
    &[
        "interferometer",
        "--k-over-m",
        "9.95",
        "--ea-over-m",
        "10",
        "--m-tau",
        "1.5",
        "--theta",
        "0.3",
    ],
    &["game", "--trials", "100000", "--seed", "3"],
    &["gyni", "--r", "2.4142135624"],
    &["switch", "--r", "1.3", "--ua", "x", "--ub", "z", "--xi", "0.4"],
    &["ctc", "--r", "0.5", "--u", "h", "--xi", "0.3"],
    &["deutsch", "--alpha", "0"],
    &["oracle", "--target", "interface", "--k-over-m", "1", "--ea-over-m", "3"],
    &["ledger"],
];

fn zigzag(args: &[&str], workers: &str, out_dir: Option<&Path>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zigzag"));
    cmd.arg("--workers")
        .arg(workers)
        .args(args)
        .env_remove("ZIGZAG_OUT_DIR");
    if let Some(dir) = out_dir {
        cmd.env("ZIGZAG_OUT_DIR", dir);
    }
    let out = cmd.output().expect("run zigzag");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let mut failures = Vec::new();
    for args in CLI_CASES {
        let serial = zigzag(args, "1", None);
        let parallel = zigzag(args, "4", None);
        let dir = tempfile::tempdir().unwrap();
        zigzag(args, "4", Some(dir.path()));
        let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let written = std::fs::read(file).unwrap();
        if serial.is_empty() || serial != parallel || serial != written {
            failures.push(args[0]);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} subcommands byte-identical across serial, 4-worker and file runs; mismatches: {failures:?}",
            CLI_CASES.len()
        ),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "interface conservation", Duration::from_secs(1), conservation),
        (2, "cavity identities", Duration::from_secs(1), cavity_identities),
        (3, "oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        (4, "resonance peak scan", Duration::from_secs(120), resonance_peak),
        (
            5,
            "double-cavity normalisation",
            Duration::from_millis(100),
            double_cavity_normalisation,
        ),
        (6, "interferometer", Duration::from_secs(1), interferometer_checks),
        (7, "retrocausal game", Duration::from_secs(10), game),
        (8, "GYNI gain", Duration::from_millis(100), gyni),
        (9, "quantum switch", Duration::from_secs(1), switch),
        (10, "closed timelike curves", Duration::from_secs(1), ctc),
        (11, "CLI determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let ok = out.pass && elapsed <= budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name}: {} [{:.3}s, budget {:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs_f64()
        );
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
