use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use zigzag_core::experiments::ctc::{ctc_ring, CtcSpec, PairCoefficient};
use zigzag_core::experiments::double_cavity::double_cavity;
use zigzag_core::experiments::game::{retro_game, Trials, CLASSICAL_BOUND};
use zigzag_core::experiments::gyni::gyni_gain;
use zigzag_core::experiments::interferometer::{interferometer, visibility, D1_D2_D3, D1_ONLY, D3_ONLY};
use zigzag_core::experiments::switch::{quantum_switch, SwitchSpec, D2_ONLY, D3_ONLY as SW_D3};
use zigzag_core::experiments::{theta_from_xi, GOLDEN_REFLECTIVITY};
use zigzag_core::{cavity_coefficients, CavityCoeffs, CavityParams, Spinor2, UnitaryMatrix2};

/// Interferometer probabilities in closed form.
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

#[test]
fn golden_reflectivity_interferometer() {
    let c = CavityCoeffs::from_reflectivity(GOLDEN_REFLECTIVITY).unwrap();
    assert!((visibility(GOLDEN_REFLECTIVITY) - 1.0).abs() < 1e-12);
    let rep = interferometer(&c, -FRAC_PI_2).unwrap();
    assert!(rep.get(D1_ONLY).abs() < 1e-15);
}

#[test]
fn interferometer_on_a_physical_cavity() {
    let c = cavity_coefficients(&CavityParams::new(10.0, 1.5, 9.95).unwrap()).unwrap();
    let r = c.reflectivity();
    for theta in [-2.0, -0.3, 0.0, 1.1, 2.9] {
        let rep = interferometer(&c, theta).unwrap();
        let expect = closed_interferometer(r, theta);
        for (label, e) in [D1_ONLY, D1_D2_D3, D3_ONLY].iter().zip(expect) {
            assert!((rep.get(label) - e).abs() < 1e-10, "{label}");
        }
    }
}

#[test]
fn theta_marginal_at_d1_is_flat() {
    let c = CavityCoeffs::from_reflectivity(2.7).unwrap();
    let vals: Vec<f64> = (0..100)
        .map(|i| {
            let rep = interferometer(&c, -PI + 2.0 * PI * i as f64 / 99.0).unwrap();
            rep.get(D1_ONLY) + rep.get(D1_D2_D3)
        })
        .collect();
    let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-10);
}

#[test]
fn game_gain() {
    let r0 = GOLDEN_REFLECTIVITY;
    let rep = retro_game(Some(Trials {
        count: 200_000,
        seed: 7,
    }))
    .unwrap();
    let expect = 0.75 - r0 / (4.0 * (1.0 + r0) * (1.0 + r0));
    assert!((rep.gain - expect).abs() < 1e-12);
    assert!((rep.gain - 0.690_983_005_625_052_6).abs() < 1e-12);
    assert_eq!(rep.postselected_gain, 1.0);
    assert_eq!(rep.classical_bound, CLASSICAL_BOUND);
    let mc = rep.monte_carlo.unwrap();
    assert!((mc.gain - expect).abs() < 3.0 * mc.standard_error);
}

#[test]
fn gyni_values() {
    assert!((gyni_gain(143.13).unwrap() - 0.9862).abs() < 1e-4);
    assert_eq!(gyni_gain(0.0).unwrap(), 0.0);
}

#[test]
fn switch_identity_gates() {
    let r: f64 = 1.3;
    let t = 1.0 + r;
    for xi in [0.0, 0.7, 2.5] {
        let rep = quantum_switch(&switch_spec(
            UnitaryMatrix2::identity(),
            UnitaryMatrix2::identity(),
            xi,
            r,
        ))
        .unwrap();
        let pv = (1.0 + r).powi(-4);
        let sum = rep.detections.get(D2_ONLY) + rep.detections.get(SW_D3);
        assert!((sum - 0.5 * pv * (t * t + r * r)).abs() < 1e-14);
    }
}

#[test]
fn switch_order_fixture() {
    // With psi0 = up: C(A<B) = sigma_z sigma_x up = -down, C(B<A) = sigma_x sigma_z up = down,
    // so D2 ~ |T - R e^{i xi}|^2 / 4 and D3 ~ |T + R e^{i xi}|^2 / 4.
    let r: f64 = 1.3;
    let t = 1.0 + r;
    let xi = 0.4;
    let rep = quantum_switch(&switch_spec(
        UnitaryMatrix2::pauli_x(),
        UnitaryMatrix2::pauli_z(),
        xi,
        r,
    ))
    .unwrap();
    let pv = (1.0 + r).powi(-4);
    let e = num_complex::Complex64::from_polar(1.0, xi);
    let d2 = 0.25 * pv * (t - r * e).norm_sqr();
    let d3 = 0.25 * pv * (t + r * e).norm_sqr();
    assert!((rep.detections.get(D2_ONLY) - d2).abs() < 1e-15);
    assert!((rep.detections.get(SW_D3) - d3).abs() < 1e-15);
    assert!((d2 - 0.013_150_818_284_871_985).abs() < 1e-15);
    assert!((d3 - 0.111_562_858_410_108_25).abs() < 1e-15);
    let same = quantum_switch(&switch_spec(
        UnitaryMatrix2::pauli_x(),
        UnitaryMatrix2::pauli_x(),
        xi,
        r,
    ))
    .unwrap();
    assert!((same.detections.get(D2_ONLY) - rep.detections.get(D2_ONLY)).abs() > 1e-3);
}

proptest! {
    #[test]
    fn double_cavity_is_normalised(r in 0.0..1e3f64) {
        let rep = double_cavity(r).unwrap();
        prop_assert!((rep.sum_check - 1.0).abs() < 1e-10);
    }

    #[test]
    fn interferometer_matches_closed_forms(r in 0.0..50.0f64, theta in -PI..PI) {
        let c = CavityCoeffs::from_reflectivity(r).unwrap();
        let rep = interferometer(&c, theta).unwrap();
        let expect = closed_interferometer(r, theta);
        for (label, e) in [D1_ONLY, D1_D2_D3, D3_ONLY].iter().zip(expect) {
            prop_assert!((rep.get(label) - e).abs() < 1e-10);
        }
        prop_assert!((rep.sum_check - 1.0).abs() < 1e-10);
    }

    #[test]
    fn visibility_below_one(r in 0.0..1e3f64) {
        prop_assume!((r - GOLDEN_REFLECTIVITY).abs() > 1e-6);
        prop_assert!(visibility(r) < 1.0);
    }

    #[test]
    fn switch_sum_is_xi_independent(ax in -1.0..1.0f64, ay in -1.0..1.0f64, ang in 0.0..6.0f64, r in 0.0..5.0f64) {
        prop_assume!(ax.abs() + ay.abs() > 1e-3);
        let ua = UnitaryMatrix2::rotation([ax, ay, 0.3], ang).unwrap();
        let ub = UnitaryMatrix2::rotation([0.2, ay, ax], 1.7 * ang).unwrap();
        let sums: Vec<f64> = (0..16).map(|i| {
            let rep = quantum_switch(&switch_spec(ua, ub, i as f64 * 0.4, r)).unwrap();
            prop_assert!((rep.vacuum_channels.sum_check - 1.0).abs() < 1e-10);
            Ok(rep.detections.get(D2_ONLY) + rep.detections.get(SW_D3))
        }).collect::<Result<_, TestCaseError>>()?;
        let spread = sums.iter().cloned().fold(f64::MIN, f64::max) - sums.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert!(spread < 1e-10);
    }

    #[test]
    fn ring_fixed_point(r in 0.0..1.0f64, xi in -PI..PI, ang in 0.0..6.0f64) {
        let spec = CtcSpec {
            u: UnitaryMatrix2::rotation([1.0, 0.5, -0.3], ang).unwrap(),
            xi,
            cavity: CavityCoeffs::from_reflectivity(r).unwrap(),
            alpha: 1.0,
            input: Spinor2::up(),
            momentum: 1.0,
        };
        let rep = ctc_ring(&spec, PairCoefficient::TransmissionSquared).unwrap();
        prop_assert!(rep.fixed_point_residual < 1e-12);
    }
}

#[test]
fn theta_helper_matches_cavity_phases() {
    let c = cavity_coefficients(&CavityParams::new(3.0, 1.5, 1.0).unwrap()).unwrap();
    let theta = theta_from_xi(0.0, &c);
    assert!((theta - (2.0 * c.r_tot.arg() - c.t_tot.arg())).abs() < 1e-15);
}
