use proptest::prelude::*;

use subpoisson_core::dispersion::{propagate, GvdSign};
use subpoisson_core::model::trapz;
use subpoisson_core::paraxial::{
    mean_photons_paraxial, min_duration_phase, q_paraxial, v_factor, BranchConvention,
    ParaxialPoint,
};
use subpoisson_core::scenario::{dispersion_lengths, LabScenario};
use subpoisson_core::spm::{apply_spm, apply_spm_with};
use subpoisson_core::statistics::DispersedField;
use subpoisson_core::{
    make_gaussian_pulse, response_function, Complex64, ComplexEnvelope, DetectionParams,
    DispersionParams, MediumParams, PhaseConvention, PhaseMode, PropagationMethod, PulseParams,
    QuadratureSpec, SpectralPropagator, SpmOptions, TimeGrid,
};

fn sign() -> impl Strategy<Value = GvdSign> {
    prop_oneof![Just(GvdSign::Anomalous), Just(GvdSign::Normal)]
}

fn chirped(psi0: f64, mode: PhaseMode) -> (ComplexEnvelope, MediumParams) {
    let m = MediumParams::with_ratio(psi0, 10.0, 1.0).unwrap();
    let a = make_gaussian_pulse(PulseParams::new(1.0, 1.0).unwrap(), TimeGrid::default()).unwrap();
    (
        apply_spm_with(&a, &m, &SpmOptions::new(mode, PhaseConvention::ClosedForm)),
        m,
    )
}

fn energy(env: &ComplexEnvelope) -> f64 {
    env.samples().iter().map(|z| z.norm_sqr()).sum()
}

#[test]
fn gaussian_pulse_area() {
    let a = make_gaussian_pulse(PulseParams::new(2.5, 1.0).unwrap(), TimeGrid::default()).unwrap();
    let want = std::f64::consts::PI.sqrt() * 2.5;
    assert!((a.photon_number() - want).abs() < 1e-10 * want);
}

#[test]
fn response_area_is_grid_converged() {
    let m = MediumParams::new(1.0, 0.1, 1.0).unwrap();
    let area = |g: TimeGrid| {
        trapz(
            &g.times()
                .map(|t| response_function(&m, t))
                .collect::<Vec<_>>(),
            g.dt(),
        )
    };
    let g = TimeGrid::default();
    let (coarse, fine) = (area(g), area(g.refined()));
    assert!((coarse - fine).abs() < 1e-12);
    assert!((fine - std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn pulse_is_refinement_invariant() {
    let p = PulseParams::new(1.0, 1.0).unwrap();
    let g = TimeGrid::default();
    let a = make_gaussian_pulse(p, g).unwrap();
    let b = make_gaussian_pulse(p, g.refined()).unwrap();
    for (k, z) in a.samples().iter().enumerate() {
        assert_eq!(*z, b.samples()[2 * k]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn spectral_conserves_photons(psi0 in 0.0f64..4.0, phi in 0.05f64..2.0, s in sign()) {
        let (f, _) = chirped(psi0, PhaseMode::Exact);
        let dp = DispersionParams::new(s, phi, 10.0).unwrap();
        if let Ok(out) = propagate(&f, &dp, PropagationMethod::Spectral) {
            prop_assert!((energy(&out) / energy(&f) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn spectral_group_property(phi1 in 0.0f64..1.0, phi2 in 0.0f64..1.0, s in sign()) {
        let (f, _) = chirped(1.0, PhaseMode::Exact);
        let prop = SpectralPropagator::new(*f.grid());
        let dp = |phi| DispersionParams::new(s, phi, 10.0).unwrap();
        let two = prop.propagate_samples(&prop.propagate_samples(f.samples(), &dp(phi1)), &dp(phi2));
        let one = prop.propagate_samples(f.samples(), &dp(phi1 + phi2));
        let err = two.iter().zip(&one).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-8);
    }

    #[test]
    fn even_input_gives_even_output(psi0 in 0.0f64..2.0, phi in 0.05f64..1.0, s in sign()) {
        let (f, _) = chirped(psi0, PhaseMode::Exact);
        let out = propagate(&f, &DispersionParams::new(s, phi, 10.0).unwrap(), PropagationMethod::Spectral).unwrap();
        let g = out.grid();
        let mid = g.index_of(0.0).unwrap();
        for j in (1..mid).step_by(37) {
            prop_assert!((out.samples()[mid - j].norm() - out.samples()[mid + j].norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn spm_keeps_modulus_and_composes(a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let env = make_gaussian_pulse(PulseParams::new(1.0, 1.0).unwrap(), TimeGrid::default()).unwrap();
        let m = |psi0| MediumParams::new(psi0, 0.1, 1.0).unwrap();
        for mode in [PhaseMode::Exact, PhaseMode::Paraxial] {
            let two = apply_spm(&apply_spm(&env, &m(a), mode), &m(b), mode);
            let one = apply_spm(&env, &m(a + b), mode);
            for ((x, y), z) in two.samples().iter().zip(one.samples()).zip(env.samples()) {
                prop_assert!((x - y).norm() < 1e-13);
                prop_assert!((x.norm_sqr() - z.norm_sqr()).abs() <= 4.0 * f64::EPSILON * z.norm_sqr());
            }
        }
    }

    #[test]
    fn numeric_q_vanishes_without_dispersion(psi0 in 0.0f64..6.0, k in 1900usize..2200) {
        let (f, m) = chirped(psi0, PhaseMode::Exact);
        let field = DispersedField::new(f, m, DispersionParams::new(GvdSign::Anomalous, 0.0, 10.0).unwrap()).unwrap();
        let r = field.mandel_at(k, &DetectionParams::new(0.125).unwrap(), &QuadratureSpec::default()).unwrap();
        prop_assert!(r.q.abs() < 1e-9);
    }

    #[test]
    fn numeric_q_depends_on_psi0_not_on_photon_number(nbar0 in 0.1f64..100.0, phi in 0.15f64..0.6, s in sign()) {
        let q = |nbar0: f64| {
            let m = MediumParams::with_ratio(1.5, 10.0, nbar0).unwrap();
            let a = make_gaussian_pulse(PulseParams::new(nbar0, 1.0).unwrap(), TimeGrid::default()).unwrap();
            let f = apply_spm_with(&a, &m, &SpmOptions::new(PhaseMode::Exact, PhaseConvention::ClosedForm));
            let field = DispersedField::new(f, m, DispersionParams::new(s, phi, 10.0).unwrap()).unwrap();
            field.mandel_at(2048, &DetectionParams::new(0.125).unwrap(), &QuadratureSpec::default()).unwrap()
        };
        let (base, scaled) = (q(1.0), q(nbar0));
        prop_assert!(((scaled.q - base.q) / base.q).abs() < 1e-8);
        prop_assert!(((scaled.epsilon / base.epsilon) - nbar0).abs() < 1e-8 * nbar0);
    }

    #[test]
    fn closed_form_scales_with_window(psi0 in 0.1f64..6.0, phi in 0.01f64..2.0, s in sign(), t in 0.01f64..0.125) {
        let p = ParaxialPoint::new(psi0, s, phi, t, 10.0).unwrap();
        let double = ParaxialPoint { t_ratio: 2.0 * t, ..p };
        for conv in [BranchConvention::PrincipalArctan, BranchConvention::ContinuousArg] {
            if let (Ok(a), Ok(b)) = (q_paraxial(&p, conv), q_paraxial(&double, conv)) {
                prop_assert_eq!(b, 2.0 * a);
            }
        }
    }

    #[test]
    fn closed_form_vanishes_at_small_phi(psi0 in 0.0f64..6.0, s in sign()) {
        let p = ParaxialPoint::new(psi0, s, 1e-6, 0.125, 10.0).unwrap();
        let q = q_paraxial(&p, BranchConvention::PrincipalArctan).unwrap();
        prop_assert!(q.abs() <= 1e-3 * psi0 * 0.125);
    }

    #[test]
    fn closed_form_photon_number_is_conserved(psi0 in 0.0f64..6.0, s in sign(), phi in 0.0f64..1.0) {
        let area = |phi: f64| {
            let p = ParaxialPoint::new(psi0, s, phi, 0.125, 10.0).unwrap();
            let (v, _) = v_factor(&p);
            let g = TimeGrid::centered(4096, 12.0 * v.max(1.0)).unwrap();
            let n: Vec<f64> = g.times().map(|t| mean_photons_paraxial(&p, t, 1.0, 0.125).unwrap()).collect();
            trapz(&n, g.dt())
        };
        prop_assert!((area(phi) / area(0.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn min_duration_minimises_width(psi0 in 0.0f64..8.0, phi in 0.0f64..2.0) {
        let (phi_md, v_min) = min_duration_phase(psi0);
        let v = |phi| v_factor(&ParaxialPoint::new(psi0, GvdSign::Anomalous, phi, 0.125, 10.0).unwrap()).0;
        prop_assert!((v(phi_md) - v_min).abs() < 1e-12);
        prop_assert!(v(phi) >= v_min - 1e-12);
    }

    #[test]
    fn scenario_round_trip(
        lambda_um in 0.4f64..2.0,
        intensity in 1e9f64..1e13,
        length in 1.0f64..1e3,
        tau_ps in 0.1f64..50.0,
        r in 1.5f64..50.0,
        window in 0.01f64..0.25,
        s in sign(),
    ) {
        let sc = LabScenario {
            wavelength: lambda_um * 1e-6,
            peak_intensity: intensity,
            fiber_length: length,
            sign: s,
            tau_p: tau_ps * 1e-12,
            tau_r: tau_ps * 1e-12 / r,
            t_window: window * tau_ps * 1e-12,
            ..LabScenario::paper_fiber()
        };
        let dim = sc.to_dimensionless().unwrap();
        prop_assert!((dim.phi_d() / dim.phi - dim.r_ratio * dim.r_ratio).abs() <= 1e-12 * dim.r_ratio * dim.r_ratio);
        let back = dim.to_lab(&sc);
        prop_assert_eq!(back.sign, sc.sign);
        for (a, b) in [
            (back.wavelength, sc.wavelength),
            (back.peak_intensity, sc.peak_intensity),
            (back.fiber_length, sc.fiber_length),
            (back.tau_p, sc.tau_p),
            (back.tau_r, sc.tau_r),
            (back.t_window, sc.t_window),
            (back.k2_abs, sc.k2_abs),
        ] {
            prop_assert!(((a - b) / b).abs() < 1e-12, "{} vs {}", a, b);
        }
    }

    #[test]
    fn dispersion_length_is_homogeneous(a in 0.1f64..10.0) {
        let sc = LabScenario::paper_fiber();
        let scaled = LabScenario { tau_p: a * sc.tau_p, k2_abs: a * a * sc.k2_abs, ..sc };
        let (d0, _) = dispersion_lengths(&sc);
        let (d1, _) = dispersion_lengths(&scaled);
        prop_assert!(((d1 - d0) / d0).abs() < 1e-14);
    }
}

#[test]
fn numeric_q_is_even_in_time() {
    let (f, m) = chirped(2.0, PhaseMode::Exact);
    let field = DispersedField::new(
        f,
        m,
        DispersionParams::new(GvdSign::Normal, 0.4, 10.0).unwrap(),
    )
    .unwrap();
    let det = DetectionParams::new(0.125).unwrap();
    let spec = QuadratureSpec::default();
    for j in [17, 120, 300] {
        let a = field.mandel_at(2048 - j, &det, &spec).unwrap().q;
        let b = field.mandel_at(2048 + j, &det, &spec).unwrap().q;
        assert!((a - b).abs() < 1e-6 * a.abs().max(1e-3), "{a} vs {b}");
    }
    let zero = Complex64::new(0.0, 0.0);
    assert_ne!(field.i1().samples()[2048], zero);
}
