//! Property tests for Krein signs, the circulatory thresholds and the
//! example systems.

use dissipstab::hurwitz::hurwitz_h;
use dissipstab::krein::{collision_scan, energy_form, krein_spectrum, negative_square_count, IndefiniteMetric};
use dissipstab::models::*;
use dissipstab::msystem::{char_quartic, spectrum, system_abscissa, MechanicalSystem};
use dissipstab::paradox::circulatory_thresholds;
use dissipstab::smallalg::{matrix_eigen, RMatrix, SmallMatrix};
use dissipstab::{tol, Error};
use proptest::prelude::*;

fn sym(a: f64, b: f64, d: f64) -> RMatrix {
    RMatrix::from_rows(&[&[a, b], &[b, d]]).unwrap()
}

fn spd(l11: f64, l21: f64, l22: f64) -> RMatrix {
    sym(l11 * l11 + 0.2, l11 * l21, l21 * l21 + l22 * l22 + 0.2)
}

/// Largest `|(λ − λ̄) ūᵀGu|` over unit eigenvectors, relative to `‖G‖(1 + |λ|)`.
fn indefinite_identity_residual(b: &SmallMatrix, g: &IndefiniteMetric) -> f64 {
    let gn = g.gram().norm_fro();
    let mut worst = 0.0f64;
    for e in matrix_eigen(b, tol::EIG).unwrap() {
        for u in &e.vectors {
            let lam = e.value;
            let r = ((lam - lam.conj()) * g.form(u, u)).norm() / (gn * (1.0 + lam.norm()));
            worst = worst.max(r);
        }
    }
    worst
}

fn sum_rule_holds(b: &SmallMatrix, g: &IndefiniteMetric) -> Option<bool> {
    let s = krein_spectrum(b, g, tol::EIG).unwrap();
    let simple_real = s.iter().all(|e| e.value.im == 0.0 && e.alg_mult == 1);
    if !simple_real || s.len() != g.dim() {
        return None;
    }
    Some(s.iter().filter(|e| e.sign == -1).count() == negative_square_count(g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sobolev_indefinite_identity(c in 0.2f64..5.0, rho in 0.1f64..3.0, a1 in 0.0f64..0.5, m2 in 0.0f64..2.0, l2 in -1.0f64..1.0, g in 0.0f64..2.0, om in 0.5f64..3.0) {
        prop_assume!((c - 1.0).abs() > 1e-3);
        let p = SobolevParams { a1, m2, l2, g, l1: 0.3, m1: 1.0, c1: 0.2, omega: om, ..SobolevParams::massless(1.0, c, rho) };
        match build_sobolev(&p) {
            Ok(m) => prop_assert!(indefinite_identity_residual(&m.b, &m.metric) < 1e-9),
            Err(Error::SingularA) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn sobolev_gram_symmetry(c in 0.2f64..5.0, rho in 0.1f64..3.0, a1 in 0.0f64..0.5, c1 in 0.0f64..0.5, m1 in 0.0f64..2.0, l1 in -1.0f64..1.0, m2 in 0.0f64..2.0, l2 in -1.0f64..1.0, g in 0.0f64..2.0, om in 0.5f64..3.0) {
        let p = SobolevParams { a: 1.0, c, a1, c1, m1, l1, m2, l2, rho, omega: om, g };
        match build_sobolev(&p) {
            Ok(m) => {
                let gb = m.metric.gram().checked_mul(&m.b).unwrap();
                let diff = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| (gb.data()[i * 3 + j] - gb.data()[j * 3 + i].conj()).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                prop_assert!(diff <= 1e-10 * gb.norm_fro());
            }
            Err(Error::SingularA) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn sobolev_sum_rule(c in 0.2f64..6.0, rho in 0.1f64..3.0) {
        prop_assume!((c - 1.0).abs() > 1e-3 && (c - 3.0).abs() > 1e-3);
        let m = build_sobolev(&SobolevParams::massless(1.0, c, rho)).unwrap();
        let outside = !(1.0..=3.0).contains(&c);
        let holds = sum_rule_holds(&m.b, &m.metric);
        prop_assert_eq!(holds.is_some(), outside);
        if let Some(ok) = holds {
            prop_assert!(ok);
        }
    }

    #[test]
    fn maclaurin_energy_form_properties(e in 0.05f64..0.99) {
        let (a, g) = maclaurin_energy_form(e).unwrap();
        prop_assert!(indefinite_identity_residual(&a, &g) < 1e-9);
        if let Some(ok) = sum_rule_holds(&a, &g) {
            prop_assert!(ok);
        }
    }

    #[test]
    fn brouwer_energy_form_properties(k1 in -2.0f64..2.0, k2 in -2.0f64..2.0, w in 0.0f64..2.0) {
        let sys = build_brouwer(&BrouwerParams { k1, k2, omega: w, ..Default::default() }).unwrap();
        match energy_form(&sys) {
            Ok((a, g)) => {
                prop_assert!(indefinite_identity_residual(&a, &g) < 1e-9);
                if let Some(ok) = sum_rule_holds(&a, &g) {
                    prop_assert!(ok);
                }
            }
            // singular stiffness leaves no metric
            Err(_) => prop_assume!(false),
        }
    }

    #[test]
    fn sobolev_events_on_greenhill_boundaries(a in 0.5f64..2.0, rho in 0.2f64..2.0) {
        let grid: Vec<f64> = (0..48).map(|i| a * (0.4 + 0.0771 * i as f64)).collect();
        let (_, events) = collision_scan("c", &grid, |c| {
            let m = build_sobolev(&SobolevParams::massless(a, c, rho))?;
            Ok((m.b, m.metric))
        }, tol::EIG).unwrap();
        prop_assert!(!events.is_empty());
        for ev in events {
            let d = (ev.param - a).abs().min((ev.param - 3.0 * a).abs());
            prop_assert!(d < 1e-6 * a, "event at c = {} for a = {}", ev.param, a);
        }
    }

    #[test]
    fn gap_identity(k in prop::array::uniform3(-3.0f64..3.0), dl in prop::array::uniform3(-1.5f64..1.5)) {
        let kk = sym(k[0], k[1], k[2]);
        let d = spd(dl[0], dl[1], dl[2]);
        match circulatory_thresholds(&kk, &d) {
            Ok(r) => {
                let (tk, td, tkd) = (kk.trace(), d.trace(), kk.checked_mul(&d).unwrap().trace());
                let want = ((2.0 * tkd - tk * td) / (2.0 * td)).powi(2);
                prop_assert!((r.gap - want).abs() <= 1e-10 * want.max(r.nu0 * r.nu0).max(1e-300));
            }
            Err(Error::NegativeRadicand(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn critical_circulation_from_quartic(kl in prop::array::uniform3(-1.5f64..1.5), dl in prop::array::uniform3(-1.5f64..1.5)) {
        // small damping along the ray: bisect the sign change of H in ν
        let k = spd(kl[0], kl[1], kl[2]);
        let d = spd(dl[0], dl[1], dl[2]);
        let r = circulatory_thresholds(&k, &d).unwrap();
        let eps = 1e-7;
        let h = |nu: f64| {
            let n = RMatrix::from_rows(&[&[0.0, nu], &[-nu, 0.0]]).unwrap();
            let sys = MechanicalSystem::new(RMatrix::identity(2), d.scale(eps), RMatrix::zeros(2), k.clone(), n).unwrap();
            hurwitz_h(&char_quartic(&sys).unwrap())
        };
        prop_assert!(h(0.0) < 0.0);
        let (mut lo, mut hi) = (0.0, 2.0 * r.nu0 + 1.0);
        prop_assert!(h(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        prop_assert!((0.5 * (lo + hi) - r.nucr).abs() < 1e-4 * r.nu0.max(1.0), "{} vs {}", 0.5 * (lo + hi), r.nucr);
    }

    #[test]
    fn ziegler_onset_brackets_sign_change(b in 0.02f64..0.4) {
        let p = ZieglerParams { b, ..Default::default() };
        let onset = ziegler_onset(&p).unwrap();
        let h = 1e-6;
        let before = system_abscissa(&build_ziegler(&ZieglerParams { p: onset - h, ..p }).unwrap()).unwrap();
        let after = system_abscissa(&build_ziegler(&ZieglerParams { p: onset + h, ..p }).unwrap()).unwrap();
        prop_assert!(before < 0.0 && after > 0.0, "{} {}", before, after);
    }

    #[test]
    fn viscous_growth_relation(e in 0.3f64..0.99, mu in 1e-4f64..0.05) {
        let sys = build_maclaurin(&MaclaurinParams { mu, ..MaclaurinParams::new(e) }, MaclaurinVariant::Viscous).unwrap();
        let prof = maclaurin_profile(e).unwrap();
        for s in spectrum(&sys, tol::EIG).unwrap() {
            prop_assert!(growth_rate_residual(&prof, mu, s.value.re).abs() < 1e-6, "{}", s.value);
        }
    }

    #[test]
    fn radiative_blocks_have_their_symmetry(e in 0.1f64..0.99, delta in 0.0f64..0.1, q1 in -1.0f64..1.0, q2 in -1.0f64..1.0) {
        let p = MaclaurinParams { delta, q1: Some(RadCoeff::Const(q1)), q2: Some(RadCoeff::Const(q2)), ..MaclaurinParams::new(e) };
        let sys = build_maclaurin(&p, MaclaurinVariant::Radiative).unwrap();
        prop_assert!(sys.d.is_symmetric(0.0) && sys.k.is_symmetric(0.0));
        prop_assert!((&sys.g + &sys.g.transpose()).is_zero() && (&sys.n + &sys.n.transpose()).is_zero());
        let w = maclaurin_profile(e).unwrap().omega();
        prop_assert!((sys.omega() + 2.5 * w).abs() < 1e-12);
    }
}

#[test]
fn ziegler_onsets_match_closed_form() {
    for b in [0.05, 0.1, 0.2] {
        let p = ZieglerParams { b, ..Default::default() };
        let onset = ziegler_onset(&p).unwrap();
        let want = ziegler_criticals(&p).pk_damped;
        assert!((onset - want).abs() < 1e-6, "b = {b}: {onset} vs {want}");
    }
}

#[test]
fn ziegler_paradox_witness() {
    let base = ZieglerParams::default();
    let undamped = ziegler_onset(&base).unwrap();
    let weak = ziegler_onset(&ZieglerParams { b: 1e-3, ..base }).unwrap();
    assert!((undamped - weak).abs() > 0.5 * base.c / base.l, "{undamped} {weak}");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Distance of `(k1, k2, ω)` from every boundary in the case list.
fn brouwer_boundary_distance(k1: f64, k2: f64, w: f64) -> f64 {
    let (k1, k2) = if k1 >= k2 { (k1, k2) } else { (k2, k1) };
    let w2 = w * w;
    let mut d = [k1.abs(), k2.abs(), (k1 + k2).abs(), (3.0 * k1 + k2).abs(), (w2 - k1).abs(), (w2 - k2).abs(), w]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if k1 + k2 != 0.0 {
        d = d.min((w2 + (k1 - k2).powi(2) / (8.0 * (k1 + k2))).abs());
    }
    d
}

#[test]
fn brouwer_cases_match_spectrum() {
    let ks = linspace(-2.5, 2.5, 50);
    let ws = linspace(0.0, 2.0, 20);
    let mut compared = 0;
    for &k1 in &ks {
        for &k2 in &ks {
            for &w in &ws {
                if brouwer_boundary_distance(k1, k2, w) <= 1e-6 {
                    continue;
                }
                let p = BrouwerParams { k1, k2, omega: w, ..Default::default() };
                let verdict = brouwer_undamped_verdict(&p).unwrap();
                let s = spectrum(&build_brouwer(&p).unwrap(), tol::EIG).unwrap();
                let scale = s.iter().map(|e| e.value.norm()).fold(1.0, f64::max);
                let on_axis = s.iter().all(|e| e.value.re.abs() <= 1e-9 * scale);
                let semisimple = s.iter().all(|e| e.geom_mult == e.alg_mult);
                assert_eq!(verdict.stable, on_axis && semisimple, "k1={k1} k2={k2} w={w}: {:?}", verdict);
                compared += 1;
            }
        }
    }
    assert!(compared > 40_000, "{compared}");
}

#[test]
fn floquet_edges_near_closed_form() {
    for omega in [0.3, 0.7] {
        let w = sum_frequency(omega);
        for (eps, mu) in [(0.05, 0.0), (0.05, 0.05)] {
            let (lo, hi) = floquet_tongue(omega, eps, mu, 2000).unwrap();
            let half = combres_interval(mu, w).unwrap().active();
            assert!((hi - half).abs() < 5.0 * eps && (lo + half).abs() < 5.0 * eps, "omega={omega} eps={eps} mu={mu}: ({lo}, {hi}) vs {half}");
        }
    }
}

#[test]
fn ziegler_spectrum_is_finite() {
    let s = spectrum(&build_ziegler(&ZieglerParams { p: 2.2, ..Default::default() }).unwrap(), tol::EIG).unwrap();
    assert!(s.iter().all(|e| e.value.re.is_finite() && e.value.im.is_finite()));
    assert!(s.iter().any(|e| e.value.re > 0.0 && e.value.im != 0.0));
}
