//! Randomized laws over the public API. Unit tests pin single instances;
//! these properties assert the contracts on generated inputs: exact algebra
//! on the coefficient ring, pointwise additivity of symbols under the
//! exponential map, stability of verdicts under real shifts, soundness of
//! emitted certificates against independent re-evaluation, recovery of
//! planted rational structure, and the nesting geometry of the Mellin
//! regions.
//!
//! Tolerances are stated per property. Where a comparison is exact in IEEE
//! arithmetic (integer coefficients, pure re-indexing, multiplication by
//! one) the assertion is `==` on the coefficients, not an epsilon.

use hadamard_flow::classify::{build_periodic_numerator, find_witness, WITNESS_SEARCH_BOUND};
use hadamard_flow::mellin::{
    build_hardy_witness, gamma_grid, omega_grid, AsymptoticHalfplane, GridSpec,
};
use hadamard_flow::poles::{
    analyze_sequence, fit_rational, pole_locations, reconstruct_periodic_rational, AnalyzeOptions,
    RationalForm, SequenceAnalysis,
};
use hadamard_flow::semigroup::{euler_closed_form_evolve, log_log_slope, SemigroupEvaluator};
use hadamard_flow::series::{phi_inverse, phi_map};
use hadamard_flow::symbols::{
    apply_multiplier, exp_scaled_coefficients, exp_scaled_log_moduli, symbol_add, symbol_eval,
    EulerPoly, HardyRational,
};
use hadamard_flow::{
    classify, Certificate, ExactScalar, LaurentTailSeries, MultiplierSymbol, Radius, Reason,
    TruncatedTaylorSeries, Verdict,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rat(num: i64, den: i64) -> ExactScalar {
    ExactScalar::from_ratio(num, den).expect("positive denominator")
}

fn times_i(s: &ExactScalar) -> ExactScalar {
    s.mul(&ExactScalar::i())
        .expect("rotation by i stays representable")
}

fn taylor(parts: &[(f64, f64)]) -> TruncatedTaylorSeries {
    TruncatedTaylorSeries::from_coeffs(parts.iter().map(|&(re, im)| c(re, im)).collect())
        .expect("nonempty coefficient list")
}

fn laurent(parts: &[(f64, f64)]) -> LaurentTailSeries {
    LaurentTailSeries::from_coeffs(parts.iter().map(|&(re, im)| c(re, im)).collect())
        .expect("nonempty coefficient list")
}

fn finite(radius: Radius) -> Option<f64> {
    match radius {
        Radius::Finite(r) => Some(r),
        _ => None,
    }
}

fn max_normalized_deviation(got: &TruncatedTaylorSeries, want: &TruncatedTaylorSeries) -> f64 {
    got.coeffs()
        .iter()
        .zip(want.coeffs())
        .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
        .fold(0.0, f64::max)
}

// strategies

fn coeff_parts(order: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0..3.0, -3.0..3.0), order + 1)
}

fn gaussian_parts(order: usize) -> impl Strategy<Value = Vec<(i32, i32)>> {
    prop::collection::vec((-8..=8, -8..=8), order + 1)
}

fn rational_scalar(max_num: i64, max_den: i64) -> impl Strategy<Value = ExactScalar> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| rat(n, d))
}

fn real_or_imag_scalar(max_num: i64, max_den: i64) -> impl Strategy<Value = ExactScalar> {
    (rational_scalar(max_num, max_den), any::<bool>())
        .prop_map(|(r, imag)| if imag { times_i(&r) } else { r })
}

fn nonzero_real_or_imag(max_num: i64, max_den: i64) -> impl Strategy<Value = ExactScalar> {
    (1..=max_num, 1..=max_den, any::<bool>(), any::<bool>()).prop_map(|(n, d, neg, imag)| {
        let r = rat(if neg { -n } else { n }, d);
        if imag {
            times_i(&r)
        } else {
            r
        }
    })
}

/// Polynomial coefficient lists with a nonzero top coefficient above degree
/// one, so the classifier never sees zero-padded degrees.
fn euler_coeff_lists() -> impl Strategy<Value = Vec<ExactScalar>> {
    prop_oneof![
        prop::collection::vec(real_or_imag_scalar(3, 3), 2),
        (2usize..=3).prop_flat_map(|deg| {
            (
                prop::collection::vec(real_or_imag_scalar(3, 3), deg),
                nonzero_real_or_imag(3, 3),
            )
                .prop_map(|(mut lower, top)| {
                    lower.push(top);
                    lower
                })
        }),
    ]
}

/// Real rational lists with total mass at most 3/2.
fn hardy_coeff_lists() -> impl Strategy<Value = Vec<ExactScalar>> {
    prop::collection::vec((-2i64..=2).prop_map(|n| rat(n, 4)), 1..=3)
}

/// A real symbol that generates a group: linear polynomial or decaying
/// rational expression.
fn group_symbols() -> impl Strategy<Value = MultiplierSymbol> {
    prop_oneof![
        (rational_scalar(4, 2), rational_scalar(4, 2)).prop_map(|(b, a)| {
            MultiplierSymbol::euler(vec![b, a]).expect("real linear coefficients")
        }),
        hardy_coeff_lists()
            .prop_map(|coeffs| MultiplierSymbol::hardy(coeffs).expect("real rational coefficients")),
    ]
}

// series: exact ring laws and the evaluation/radius contracts

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hadamard_product_commutes(parts_a in coeff_parts(24), parts_b in coeff_parts(24)) {
        let a = taylor(&parts_a);
        let b = taylor(&parts_b);
        let ab = a.hadamard_product(&b);
        let ba = b.hadamard_product(&a);
        prop_assert_eq!(ab.coeffs(), ba.coeffs());
    }

    #[test]
    fn all_ones_is_a_hadamard_unit(parts in coeff_parts(24)) {
        let f = taylor(&parts);
        let ones = TruncatedTaylorSeries::all_ones(24);
        let left = ones.hadamard_product(&f);
        let right = f.hadamard_product(&ones);
        prop_assert_eq!(left.coeffs(), f.coeffs());
        prop_assert_eq!(right.coeffs(), f.coeffs());

        let g = laurent(&parts);
        let l_ones = LaurentTailSeries::all_ones(24);
        let tail = l_ones.hadamard_product(&g);
        prop_assert_eq!(tail.coeffs(), g.coeffs());
    }

    #[test]
    fn hadamard_product_associates_on_gaussian_integers(
        pa in gaussian_parts(20),
        pb in gaussian_parts(20),
        pc in gaussian_parts(20),
    ) {
        // products of Gaussian integers of this size stay exact in doubles,
        // so both association orders give bitwise equal results
        let int_series = |parts: &[(i32, i32)]| {
            taylor(&parts.iter().map(|&(re, im)| (re as f64, im as f64)).collect::<Vec<_>>())
        };
        let a = int_series(&pa);
        let b = int_series(&pb);
        let q = int_series(&pc);
        let left = a.hadamard_product(&b).hadamard_product(&q);
        let right = a.hadamard_product(&b.hadamard_product(&q));
        prop_assert_eq!(left.coeffs(), right.coeffs());
    }

    #[test]
    fn phi_is_a_bijective_algebra_homomorphism(
        parts_f in coeff_parts(24),
        parts_g in coeff_parts(24),
    ) {
        let f = laurent(&parts_f);
        let g = laurent(&parts_g);
        let image_of_product = phi_map(&f.hadamard_product(&g));
        let product_of_images = phi_map(&f).hadamard_product(&phi_map(&g));
        prop_assert_eq!(image_of_product.coeffs(), product_of_images.coeffs());

        let round_trip = phi_inverse(&phi_map(&f));
        prop_assert_eq!(round_trip.coeffs(), f.coeffs());
    }

    #[test]
    fn evaluation_is_linear(
        parts_f in coeff_parts(24),
        parts_g in coeff_parts(24),
        (alpha_re, alpha_im) in (-2.0..2.0, -2.0..2.0),
        (beta_re, beta_im) in (-2.0..2.0, -2.0..2.0),
        (r, angle) in (0.0..0.9, 0.0..TAU),
    ) {
        let f = taylor(&parts_f);
        let g = taylor(&parts_g);
        let alpha = c(alpha_re, alpha_im);
        let beta = c(beta_re, beta_im);
        let z = Complex64::from_polar(r, angle);

        let combo: Vec<Complex64> = f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        let lhs = TruncatedTaylorSeries::from_coeffs(combo).unwrap().evaluate(z);
        let rhs = alpha * f.evaluate(z) + beta * g.evaluate(z);

        // natural magnitude of the evaluation, for a scale-aware tolerance
        let mut majorant = 0.0;
        let mut zn = 1.0;
        for (x, y) in f.coeffs().iter().zip(g.coeffs()) {
            majorant += (alpha.norm() * x.norm() + beta.norm() * y.norm()) * zn;
            zn *= z.norm();
        }
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + majorant));
    }

    #[test]
    fn geometric_coefficients_give_their_ratio_as_radius(u in -1.0..1.0f64) {
        let rho = 10.0f64.powf(u);
        let coeffs: Vec<Complex64> = (0..=128).map(|n| c(rho.powi(-n), 0.0)).collect();
        let est = TruncatedTaylorSeries::from_coeffs(coeffs)
            .unwrap()
            .radius_of_convergence_estimate()
            .unwrap();
        let r = finite(est.radius);
        prop_assert!(r.is_some(), "expected a finite radius, got {:?}", est.radius);
        let r = r.unwrap();
        prop_assert!((r - rho).abs() <= 0.01 * rho, "radius {} vs ratio {}", r, rho);
    }
}

// symbols: eigenvector action, pointwise addition, exponential law

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_coefficient_vectors_are_eigenvectors(
        coeffs in prop::collection::vec(real_or_imag_scalar(3, 3), 1..=3),
        n in 0usize..=32,
    ) {
        let symbol = MultiplierSymbol::euler(coeffs).unwrap();
        let e_n = TruncatedTaylorSeries::monomial(n, 32);
        let image = apply_multiplier(&symbol, &e_n).unwrap();
        let m = symbol_eval(&symbol, n).unwrap();
        for (k, got) in image.coeffs().iter().enumerate() {
            let want = if k == n { m } else { c(0.0, 0.0) };
            prop_assert_eq!(*got, want, "coefficient {}", k);
        }
    }

    #[test]
    fn symbol_addition_is_pointwise(
        pc in prop::collection::vec(real_or_imag_scalar(3, 3), 1..=4),
        qc in prop::collection::vec(real_or_imag_scalar(3, 3), 1..=4),
        hc in hardy_coeff_lists(),
        kc in hardy_coeff_lists(),
        n in 0usize..=64,
    ) {
        let pairs = [
            (MultiplierSymbol::euler(pc).unwrap(), MultiplierSymbol::euler(qc).unwrap()),
            (MultiplierSymbol::hardy(hc).unwrap(), MultiplierSymbol::hardy(kc).unwrap()),
        ];
        for (s1, s2) in pairs {
            let sum = symbol_add(&s1, &s2).unwrap();
            let lhs = symbol_eval(&sum, n).unwrap();
            let rhs = symbol_eval(&s1, n).unwrap() + symbol_eval(&s2, n).unwrap();
            prop_assert!(
                (lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()),
                "pointwise sum at n = {}: {} vs {}", n, lhs, rhs
            );
        }
    }

    #[test]
    fn exponential_turns_time_addition_into_hadamard_products(
        euler_coeffs in prop::collection::vec(real_or_imag_scalar(4, 2), 2),
        hardy_coeffs in hardy_coeff_lists(),
        explicit_parts in coeff_parts(24),
        t in -1.5..1.5f64,
        u in -1.5..1.5f64,
    ) {
        let symbols = [
            (MultiplierSymbol::euler(euler_coeffs).unwrap(), 16usize),
            (MultiplierSymbol::hardy(hardy_coeffs).unwrap(), 32),
            (
                MultiplierSymbol::explicit(
                    explicit_parts.iter().map(|&(re, im)| c(re, im)).collect(),
                )
                .unwrap(),
                24,
            ),
        ];
        for (symbol, order) in symbols {
            let joint = exp_scaled_coefficients(&symbol, t + u, order).unwrap();
            let split = exp_scaled_coefficients(&symbol, t, order)
                .unwrap()
                .hadamard_product(&exp_scaled_coefficients(&symbol, u, order).unwrap());
            for (n, (l, r)) in joint.coeffs().iter().zip(split.coeffs()).enumerate() {
                prop_assert!(
                    (l - r).norm() <= 1e-12 * r.norm(),
                    "coefficient {} of {}: {} vs {}", n, symbol.variant_name(), l, r
                );
            }
        }
    }
}

// classify: determinism, shift stability, exact decidability, soundness

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn classify_is_deterministic(coeffs in euler_coeff_lists()) {
        let symbol = MultiplierSymbol::euler(coeffs).unwrap();
        let first = classify(&symbol);
        let second = classify(&symbol);
        match (first, second) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(format!("{a:?}"), format!("{b:?}")),
            (a, b) => prop_assert!(false, "diverging outcomes: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn real_shifts_never_change_the_verdict(
        coeffs in euler_coeff_lists(),
        shifts in prop::collection::vec((-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3), 10),
    ) {
        let base = match classify(&MultiplierSymbol::euler(coeffs.clone()).unwrap()) {
            Ok(v) => v,
            Err(_) => return Ok(()),
        };
        for (cn, cd, bn, bd) in shifts {
            let mut shifted = coeffs.clone();
            shifted[0] = shifted[0].add(&rat(cn, cd)).unwrap();
            shifted[1] = shifted[1].add(&rat(bn, bd)).unwrap();
            let moved = classify(&MultiplierSymbol::euler(shifted).unwrap()).unwrap();
            prop_assert_eq!(base.verdict(), moved.verdict(), "shift {}/{} + {}/{} theta", cn, cd, bn, bd);
            prop_assert_eq!(base.reason(), moved.reason());
        }
    }

    #[test]
    fn degree_one_verdicts_follow_the_exact_imaginary_part(
        a0 in rational_scalar(3, 3),
        (p, q) in (-3i64..=3, 1i64..=3),
        (r, s) in (-3i64..=3, 1i64..=3),
        (u, v) in (-3i64..=3, 1i64..=3),
        (w, x) in (-3i64..=3, 1i64..=3),
        d in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let surd = ExactScalar::sqrt(d).unwrap();
        let re = rat(p, q).add(&rat(r, s).mul(&surd).unwrap()).unwrap();
        let im = rat(u, v).add(&rat(w, x).mul(&surd).unwrap()).unwrap();
        let a1 = re.add(&times_i(&im)).unwrap();
        let verdict = classify(&MultiplierSymbol::euler(vec![a0, a1]).unwrap()).unwrap();

        let im_is_zero = u == 0 && w == 0;
        match verdict.verdict() {
            Verdict::Generates { group } => {
                prop_assert!(im_is_zero, "generated with im = {}/{} + {}/{} surd", u, v, w, x);
                prop_assert!(group, "degree-one real symbols generate groups");
            }
            Verdict::NotGenerates => prop_assert!(!im_is_zero),
            Verdict::Unknown => prop_assert!(false, "degree one is always decided"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn root_of_unity_certificates_survive_reevaluation(
        lower in prop::collection::vec(rational_scalar(3, 3), 1..=2),
        (tn, td) in (1i64..=3, 1i64..=3),
        top_negative in any::<bool>(),
    ) {
        // purely imaginary rational polynomial with zero constant term
        let mut coeffs = vec![ExactScalar::zero()];
        coeffs.extend(lower.iter().map(times_i));
        coeffs.push(times_i(&rat(if top_negative { -tn } else { tn }, td)));
        let poly_coeffs = coeffs.clone();
        let verdict = match classify(&MultiplierSymbol::euler(coeffs).unwrap()) {
            Ok(v) => v,
            Err(_) => return Ok(()),
        };
        if verdict.reason() != Reason::RootOfUnityObstruction {
            return Ok(());
        }
        let Some(Certificate::RootOfUnityPole { s, q, n0, t0, period, pole, numerator_abs }) =
            verdict.certificate().cloned()
        else {
            prop_assert!(false, "root-of-unity verdicts carry their pole certificate");
            unreachable!()
        };
        prop_assume!(q <= 300);

        // structural facts
        prop_assert_eq!(period, 2 * q);
        prop_assert!((pole.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(pole.im.abs() > 1e-6, "pole must sit off the real axis");
        prop_assert!((pole.powu(2 * q as u32) - c(1.0, 0.0)).norm() <= 1e-10);

        // the witness data must reproduce the certificate header
        let witness = find_witness(
            &EulerPoly::new(poly_coeffs).unwrap(),
            WITNESS_SEARCH_BOUND,
        )
        .unwrap();
        prop_assert_eq!(witness.s, s);
        prop_assert_eq!(witness.q, q);
        prop_assert_eq!(witness.n0, n0);
        prop_assert!((witness.t0 - t0).abs() <= f64::EPSILON * t0.abs());

        // re-sum the periodic numerator at the certified pole
        let xi = build_periodic_numerator(witness.ptilde(), q).unwrap();
        let arg = pole.arg();
        let value: Complex64 = xi
            .iter()
            .enumerate()
            .map(|(n, coeff)| coeff * Complex64::from_polar(1.0, arg * n as f64))
            .sum();
        prop_assert!(
            (value.norm() - numerator_abs).abs() <= 1e-9,
            "numerator {} vs certified {}", value.norm(), numerator_abs
        );
    }

    #[test]
    fn blow_up_verdicts_have_zero_radius(
        lower in prop::collection::vec(real_or_imag_scalar(3, 3), 2),
        (tn, td) in (1i64..=3, 1i64..=4),
        extra in prop::option::of(real_or_imag_scalar(3, 3)),
    ) {
        // force a positive real part on top
        let mut coeffs = lower;
        if let Some(mid) = extra {
            coeffs.push(mid);
        }
        coeffs.push(rat(tn, td));
        let symbol = MultiplierSymbol::euler(coeffs).unwrap();
        let verdict = classify(&symbol).unwrap();
        prop_assert_eq!(verdict.verdict(), Verdict::NotGenerates);
        prop_assert_eq!(verdict.reason(), Reason::RealPartBlowUp);
        let Some(Certificate::BlowUp { t, l, ref log_growth, .. }) = verdict.certificate().cloned()
        else {
            prop_assert!(false, "blow-up verdicts carry growth evidence");
            unreachable!()
        };
        prop_assert_eq!(l, symbol_degree(&symbol));
        prop_assert!(log_growth.windows(2).all(|w| w[0] < w[1]));

        let logs = exp_scaled_log_moduli(&symbol, t, 128).unwrap();
        let est = hadamard_flow::series::radius_from_log_moduli(&logs).unwrap();
        prop_assert_eq!(est.radius, Radius::Zero);
    }

    #[test]
    fn real_linear_verdicts_predict_the_radius(
        (an, ad) in (-6i64..=6, 1i64..=2),
        b in rational_scalar(3, 3),
    ) {
        let a = rat(an, ad);
        let symbol = MultiplierSymbol::euler(vec![b.clone(), a.clone()]).unwrap();
        let verdict = classify(&symbol).unwrap();
        prop_assert_eq!(verdict.verdict(), Verdict::Generates { group: true });

        let logs = exp_scaled_log_moduli(&symbol, 1.0, 128).unwrap();
        let est = hadamard_flow::series::radius_from_log_moduli(&logs).unwrap();
        let r = finite(est.radius);
        prop_assert!(r.is_some(), "expected a finite radius, got {:?}", est.radius);
        // the windowed root test sees a + b/n for n in [64, 128]: the
        // constant term biases the recovered rate by at most |b| / 64
        let a_f = a.re_as_f64();
        let b_f = b.re_as_f64();
        prop_assert!(
            (r.unwrap().ln() + a_f).abs() <= b_f.abs() / 64.0 + 1e-9,
            "radius {} vs dilation rate {} under constant {}", r.unwrap(), a_f, b_f
        );
        if b_f == 0.0 {
            let expected = (-a_f).exp();
            prop_assert!((r.unwrap() - expected).abs() <= 0.01 * expected);
        }
    }
}

fn symbol_degree(symbol: &MultiplierSymbol) -> usize {
    match symbol {
        MultiplierSymbol::EulerPoly(p) => p.degree(),
        MultiplierSymbol::HardyRational(h) => h.degree(),
        MultiplierSymbol::Explicit(e) => e.len().saturating_sub(1),
    }
}

// the certified pole must show up in the pole pipeline on the evolved unit

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_poles_reappear_in_the_pipeline(
        (b1n, b1d) in (-2i64..=2, 1i64..=2),
        (b2n, b2d) in (1i64..=2, 1i64..=2),
        top_negative in any::<bool>(),
    ) {
        let coeffs = vec![
            ExactScalar::zero(),
            times_i(&rat(b1n, b1d)),
            times_i(&rat(if top_negative { -b2n } else { b2n }, b2d)),
        ];
        let symbol = MultiplierSymbol::euler(coeffs).unwrap();
        let verdict = match classify(&symbol) {
            Ok(v) => v,
            Err(_) => return Ok(()),
        };
        if verdict.reason() != Reason::RootOfUnityObstruction {
            return Ok(());
        }
        let Some(Certificate::RootOfUnityPole { q, t0, pole, numerator_abs, .. }) =
            verdict.certificate().cloned()
        else {
            prop_assert!(false, "root-of-unity verdicts carry their pole certificate");
            unreachable!()
        };
        // keep the float phases well inside the period-detection tolerance
        // and the pole visible over the numerator-vanish filter
        prop_assume!(q <= 100);
        prop_assume!(numerator_abs >= 1e-3);

        let evolved = exp_scaled_coefficients(&symbol, t0, (8 * q - 1) as usize).unwrap();
        let analysis = analyze_sequence(evolved.coeffs(), &AnalyzeOptions::default()).unwrap();
        let SequenceAnalysis::Periodic { period, ref report, .. } = analysis else {
            prop_assert!(false, "evolved unit must be detected as periodic, got {:?}", analysis);
            unreachable!()
        };
        prop_assert_eq!((2 * q) as usize % period, 0, "minimal period divides 2q");
        prop_assert!(!report.all_real, "an off-axis pole must be reported");
        let closest = report
            .poles
            .iter()
            .map(|p| (p.location - pole).norm())
            .fold(f64::INFINITY, f64::min);
        prop_assert!(closest <= 1e-8, "certified pole missed by {}", closest);
    }
}

// semigroup: law, eigen-relation, group inverses, closed form, generator

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn evolution_satisfies_the_semigroup_law(
        symbol in group_symbols(),
        parts in coeff_parts(32),
        t in 0.0..2.0f64,
        s in 0.0..2.0f64,
    ) {
        let evaluator = SemigroupEvaluator::new(symbol);
        let f = taylor(&parts);
        let deviation = evaluator.check_semigroup_law(t, s, &f).unwrap();
        prop_assert!(deviation < 1e-11, "law deviation {}", deviation);
    }

    #[test]
    fn evolution_scales_unit_vectors_by_the_exponential(
        euler_coeffs in prop::collection::vec(real_or_imag_scalar(4, 2), 2),
        hardy_coeffs in hardy_coeff_lists(),
        n in 0usize..=24,
        t in -1.0..1.0f64,
    ) {
        let symbols = [
            MultiplierSymbol::euler(euler_coeffs).unwrap(),
            MultiplierSymbol::hardy(hardy_coeffs).unwrap(),
        ];
        for symbol in symbols {
            let m = symbol_eval(&symbol, n).unwrap();
            let want = c(t * m.re, t * m.im).exp();
            let evaluator = SemigroupEvaluator::new(symbol);
            let image = evaluator.evolve(t, &TruncatedTaylorSeries::monomial(n, 24)).unwrap();
            prop_assert!((image.coeff(n) - want).norm() <= 1e-13 * want.norm());
        }
    }

    #[test]
    fn groups_invert_by_negative_time(
        symbol in group_symbols(),
        parts in coeff_parts(32),
        t in 0.01..2.0f64,
    ) {
        let evaluator = SemigroupEvaluator::new(symbol);
        let f = taylor(&parts);
        let back = evaluator.evolve(-t, &evaluator.evolve(t, &f).unwrap()).unwrap();
        prop_assert!(max_normalized_deviation(&back, &f) < 1e-11);
    }

    #[test]
    fn closed_form_dilation_matches_the_diagonal_route(
        (an, ad) in (-6i64..=6, 1i64..=2),
        b_re in rational_scalar(3, 3),
        b_im in rational_scalar(3, 3),
        parts in coeff_parts(32),
        t in -2.0..2.0f64,
    ) {
        let a = rat(an, ad);
        let b = b_re.add(&times_i(&b_im)).unwrap();
        let evaluator =
            SemigroupEvaluator::new(MultiplierSymbol::euler(vec![b.clone(), a.clone()]).unwrap());
        prop_assert!(evaluator.closed_form().is_some());
        let f = taylor(&parts);
        let diagonal = evaluator.evolve(t, &f).unwrap();
        let closed = euler_closed_form_evolve(a.re_as_f64(), b.to_complex(), t, &f).unwrap();
        prop_assert!(max_normalized_deviation(&closed, &diagonal) <= 1e-12);
    }

    #[test]
    fn zero_time_is_the_identity(
        euler_coeffs in prop::collection::vec(real_or_imag_scalar(3, 3), 1..=3),
        hardy_coeffs in hardy_coeff_lists(),
        explicit_parts in coeff_parts(24),
        parts in coeff_parts(24),
    ) {
        let symbols = [
            MultiplierSymbol::euler(euler_coeffs).unwrap(),
            MultiplierSymbol::hardy(hardy_coeffs).unwrap(),
            MultiplierSymbol::explicit(
                explicit_parts.iter().map(|&(re, im)| c(re, im)).collect(),
            )
            .unwrap(),
        ];
        let f = taylor(&parts);
        for symbol in symbols {
            let frozen = SemigroupEvaluator::new(symbol).evolve(0.0, &f).unwrap();
            prop_assert_eq!(frozen.coeffs(), f.coeffs());
        }
    }

    #[test]
    fn finite_differences_converge_at_first_order(
        (a1n, a1d) in (1i64..=2, prop::sample::select(vec![4i64])),
        a1_negative in any::<bool>(),
        (a2n, a2d) in (-2i64..=2, 4i64..=4),
        parts in coeff_parts(16),
    ) {
        let a1 = rat(if a1_negative { -a1n } else { a1n }, a1d);
        let coeffs = vec![ExactScalar::zero(), a1, rat(a2n, a2d)];
        let evaluator = SemigroupEvaluator::new(MultiplierSymbol::hardy(coeffs).unwrap());
        let f = taylor(&parts);
        let hs = [1e-2, 1e-3, 1e-4, 1e-5];
        let errors: Vec<f64> = hs
            .iter()
            .map(|&h| evaluator.generator_finite_difference(&f, h).unwrap().max_relative_error)
            .collect();
        let slope = log_log_slope(&hs, &errors);
        prop_assert!((0.9..=1.1).contains(&slope), "log-log slope {}", slope);
    }
}

// mellin: interpolation, explicit bound, region nesting, pole distance

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_interpolates_the_evolved_coefficients(
        coeffs in hardy_coeff_lists(),
        t in -2.0..2.0f64,
        n in 0usize..=64,
    ) {
        let rational = HardyRational::new(coeffs.clone()).unwrap();
        let witness = build_hardy_witness(&rational, t);
        let symbol = MultiplierSymbol::hardy(coeffs).unwrap();
        let m = symbol_eval(&symbol, n).unwrap();
        let want = c(t * m.re, t * m.im).exp();
        let got = witness.evaluate(c(n as f64, 0.0)).unwrap();
        prop_assert!((got - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn seminorms_respect_the_explicit_ceiling(
        coeffs in hardy_coeff_lists(),
        t in -2.0..2.0f64,
        j in 1usize..=5,
    ) {
        let rational = HardyRational::new(coeffs.clone()).unwrap();
        let witness = build_hardy_witness(&rational, t);
        let spec = GridSpec { rmax: 20.0, axial: 32, transverse: 8 };
        let sample = witness.seminorm(j, 1.0, &spec).unwrap();

        let mass: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| 2.0f64.powi(k as i32) * (t * a.re_as_f64()).abs())
            .sum();
        let ceiling = mass.exp() * ((1.0 + 1.0 / j as f64) / 2.0).exp();
        prop_assert!(
            sample.value <= ceiling * (1.0 + 1e-9),
            "seminorm {} above ceiling {} at j = {}", sample.value, ceiling, j
        );
    }
}

fn domains() -> impl Strategy<Value = AsymptoticHalfplane> {
    (1usize..=3).prop_flat_map(|sectors| {
        (
            -0.9..=-0.05f64,
            prop::collection::vec(-0.8..=2.0f64, sectors - 1),
            prop::collection::vec(0.1..=1.5f64, sectors),
        )
            .prop_map(|(first, rest, deltas)| {
                let mut kappas = vec![first];
                kappas.extend(rest);
                let mut ks = Vec::with_capacity(deltas.len());
                let mut acc = 0.0;
                for d in deltas {
                    acc += d;
                    ks.push(acc);
                }
                AsymptoticHalfplane::new(kappas, ks).expect("constructed within the validity rules")
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustion_regions_nest_inside_the_domain(hp in domains()) {
        let spec = GridSpec { rmax: 8.0, axial: 12, transverse: 6 };
        for j in 1..=hp.sectors() {
            let grid = gamma_grid(&hp, j, &spec).unwrap();
            let region = hp.gamma_region(j).unwrap();
            for &z in &grid {
                prop_assert!(region.contains(z));
                prop_assert!(hp.contains(z), "gamma point {} escapes the open union", z);
                if j < hp.sectors() {
                    prop_assert!(hp.gamma_region(j + 1).unwrap().contains(z));
                }
            }
        }
        let floor = 1.0 + hp.leftmost();
        for z in omega_grid(&hp, &spec).unwrap() {
            prop_assert!(hp.contains(z));
            prop_assert!(
                (z + c(1.0, 0.0)).norm() >= floor - 1e-9,
                "point {} comes closer than {} to the pole at -1", z, floor
            );
        }
    }
}

#[test]
fn default_domain_keeps_half_a_unit_from_the_pole() {
    let hp = AsymptoticHalfplane::default_domain();
    let spec = GridSpec::default();
    for z in omega_grid(&hp, &spec).unwrap() {
        assert!((z + c(1.0, 0.0)).norm() >= 0.5, "{z} is too close to -1");
    }
    for j in 1..=hp.sectors() {
        for z in gamma_grid(&hp, j, &spec).unwrap() {
            assert!((z + c(1.0, 0.0)).norm() >= 0.5, "{z} is too close to -1");
        }
    }
}

// poles: periodic round trips, planted-pole recovery, radius agreement

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn periodic_reconstruction_round_trips(
        block in prop::collection::vec((-3.0..3.0, -3.0..3.0), 1..=6),
        repeats in 4usize..=6,
    ) {
        let p = block.len();
        let tiled: Vec<Complex64> = (0..p * repeats)
            .map(|n| c(block[n % p].0, block[n % p].1))
            .collect();
        let form = reconstruct_periodic_rational(&tiled, p).unwrap();
        for (got, want) in form.expand(tiled.len()).iter().zip(&tiled) {
            prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }

        let analysis = analyze_sequence(&tiled, &AnalyzeOptions::default()).unwrap();
        let SequenceAnalysis::Periodic { period, ref form, .. } = analysis else {
            prop_assert!(false, "tiled input must be detected as periodic, got {:?}", analysis);
            unreachable!()
        };
        prop_assert_eq!(p % period, 0, "detected period must divide the tiling period");
        for (got, want) in form.expand(tiled.len()).iter().zip(&tiled) {
            prop_assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()));
        }
    }
}

fn planted_poles() -> impl Strategy<Value = Vec<Complex64>> {
    (1usize..=3)
        .prop_flat_map(|d| {
            (
                (0.2f64.ln())..=(3.1f64.ln()),
                prop::collection::vec((1.0..=1.2f64, 0.0..TAU), d),
            )
                .prop_map(|(log_base, factors)| {
                    let base = log_base.exp();
                    factors
                        .into_iter()
                        .map(|(stretch, angle)| Complex64::from_polar(base * stretch, angle))
                        .collect::<Vec<_>>()
                })
        })
        .prop_filter("poles must stay separated", |poles| {
            let base = poles.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
            poles
                .iter()
                .enumerate()
                .all(|(i, p)| poles[..i].iter().all(|q| (p - q).norm() >= 0.25 * base))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fitting_recovers_planted_poles(poles in planted_poles()) {
        let d = poles.len();
        // denominator = product of (1 - z / pole), unit numerator
        let mut denominator = vec![c(1.0, 0.0)];
        for p in &poles {
            let mut next = vec![c(0.0, 0.0); denominator.len() + 1];
            for (k, b) in denominator.iter().enumerate() {
                next[k] += b;
                next[k + 1] -= b / p;
            }
            denominator = next;
        }
        let form = RationalForm::new(vec![c(1.0, 0.0)], denominator, true).unwrap();
        let coeffs = form.expand(28);

        let fit = fit_rational(&coeffs, d).unwrap();
        prop_assert_eq!(fit.degree, d, "parsimony must stop at the true degree");
        prop_assert!(fit.residual <= 1e-6);

        let report = pole_locations(&fit.form, 1e-8).unwrap();
        prop_assert_eq!(report.poles.len(), d);
        for p in &poles {
            let closest = report
                .poles
                .iter()
                .map(|q| (q.location - p).norm())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(
                closest <= 1e-6 * (1.0 + p.norm()),
                "pole {} missed by {}", p, closest
            );
        }

        // a simple pole also fixes the convergence radius of the expansion
        if d == 1 {
            let est = TruncatedTaylorSeries::from_coeffs(coeffs)
                .unwrap()
                .radius_of_convergence_estimate()
                .unwrap();
            let r = finite(est.radius);
            prop_assert!(r.is_some(), "expected a finite radius, got {:?}", est.radius);
            let modulus = poles[0].norm();
            prop_assert!((r.unwrap() - modulus).abs() <= 0.02 * modulus);
        }
    }
}
