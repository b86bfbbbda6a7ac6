use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use regge_area::closed_form;
use regge_area::moments::{self, ModelParams, MomentOptions, ProbePolynomial, Route, Variant};
use regge_area::series::{Elementary, TruncatedSeries};
use regge_area::xcheck::{cauchy_coefficients, elementary_value};

fn config() -> Config {
    Config {
        cases: 256,
        rng_seed: RngSeed::Fixed(20_130_517),
        failure_persistence: None,
        ..Config::default()
    }
}

fn gamma() -> impl Strategy<Value = f64> {
    (-1.3f64..1.3).prop_map(|e| 10f64.powf(e))
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Arcsin), Just(Variant::Linear)]
}

fn series_without_constant(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-1.0f64..1.0, order).prop_map(|tail| {
        let mut c = vec![0.0];
        c.extend(tail);
        TruncatedSeries::from_real(&c).unwrap()
    })
}

fn max_gap(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn composition_is_associative(
        f in series_without_constant(8),
        g in series_without_constant(8),
        h in series_without_constant(8),
    ) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(max_gap(&left, &right) < 1e-12);
    }

    #[test]
    fn product_commutes_and_differentiates(f in series_without_constant(10), g in series_without_constant(10)) {
        prop_assert!(max_gap(&(&f * &g), &(&g * &f)) < 1e-15);
        let lhs = (&f * &g).derivative().unwrap();
        let rhs = &(&f.derivative().unwrap() * &g.truncate(9)) + &(&f.truncate(9) * &g.derivative().unwrap());
        prop_assert!(max_gap(&lhs, &rhs) < 1e-13);
    }

    #[test]
    fn unrescaled_expression_is_even(g in gamma(), v in variant(), flip in any::<bool>()) {
        let c = Complex64::new(1.0, if flip { -1.0 } else { 1.0 } / g);
        let s = moments::unrescaled_series(c, v, 12).unwrap();
        let odd = s.coeffs().iter().skip(1).step_by(2).map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert_eq!(odd, 0.0);
        prop_assert!(s.is_even());
    }

    #[test]
    fn density_is_nonnegative(g in gamma(), vsq in -80.0f64..80.0, v in variant()) {
        match closed_form::distribution(Complex64::new(vsq, 0.0), g, v) {
            Ok(n) => prop_assert!(n >= 0.0 && n.is_finite(), "N({vsq}) = {n}"),
            Err(e) => prop_assert!(v == Variant::Linear && vsq == 0.0, "{e}"),
        }
    }

    #[test]
    fn density_is_even_in_w(re in -40.0f64..40.0, im in -40.0f64..40.0) {
        let w = Complex64::new(re, im);
        prop_assert_eq!(
            closed_form::ln_distribution_arcsin_w(w).to_bits(),
            closed_form::ln_distribution_arcsin_w(-w).to_bits()
        );
    }

    #[test]
    fn branch_choice_has_nonnegative_real_part(g in gamma(), vsq in -50.0f64..50.0) {
        let w = closed_form::branch_w(Complex64::new(vsq, 0.0), g);
        prop_assert!(w.re > 0.0 || (w.re == 0.0 && w.im >= 0.0));
    }

    #[test]
    fn conjugate_rescaling_conjugates_moment(g in gamma(), l in 0usize..5, v in variant()) {
        let options = MomentOptions::default();
        let c = Complex64::new(1.0, 1.0 / g);
        for route in [Route::SeriesRescaled, Route::SeriesUnrescaled] {
            let m = moments::moment_at_rescaling(l, c, v, route, &options).unwrap();
            let mc = moments::moment_at_rescaling(l, c.conj(), v, route, &options).unwrap();
            prop_assert!((mc - m.conj()).norm() <= 1e-12 * m.norm());
        }
    }

    #[test]
    fn double_zero_probes_have_no_singular_part(
        g in gamma(),
        q in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
    ) {
        let params = ModelParams::new(g, Variant::Arcsin).unwrap();
        let q: Vec<Complex64> = q.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let probe = ProbePolynomial::vanishing_at_singularity(&q, &params);
        prop_assert!(probe.admissible());
        prop_assert_eq!(moments::singular_part(&probe, &params), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn monomials_are_not_admissible(g in gamma(), l in 0usize..6) {
        let params = ModelParams::new(g, Variant::Arcsin).unwrap();
        let probe = ProbePolynomial::monomial(l, &params);
        prop_assert!(!probe.admissible());
        prop_assert!(moments::singular_part(&probe, &params).norm() > 0.0);
    }

    #[test]
    fn singular_points_avoid_the_real_axis(g in gamma(), n in 1u32..20) {
        let p = closed_form::singular_location(n, g);
        prop_assert!(p.im < 0.0);
        let expected = Complex64::new(4.0 * (n * n) as f64, 0.0) / Complex64::new(1.0, 1.0 / g).powi(2);
        prop_assert!((p - expected).norm() <= 1e-14 * expected.norm());
    }
}

#[test]
fn elementary_series_match_cauchy_oracle() {
    for kind in [
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Sqrt1m,
        Elementary::Ln1p,
        Elementary::Arcsin,
    ] {
        let series = TruncatedSeries::elementary(kind, 12);
        let oracle = cauchy_coefficients(|z| elementary_value(kind, z), 12);
        for (k, (s, o)) in series.coeffs().iter().zip(&oracle).enumerate() {
            assert!(
                (s - o).norm() < 1e-15 * 2f64.powi(k as i32 + 1),
                "{kind:?} k={k}: {s} vs {o}"
            );
        }
    }
}
