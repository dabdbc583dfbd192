//! Acceptance suite: one test per criterion, each printing a pass line
//! with its measured figure and asserting both the tolerance and the
//! runtime budget. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use num_complex::Complex64;
use padiclab::flow::{
    picard_iterate, sample_noise, simulate_flow, transition_histogram, FieldSpec, GroupFlowSpec,
    NoiseConfig, NoisePath, PicardCoeff, TimeLattice,
};
use padiclab::lattice::{
    fourier, inner_product, pd_kernel, riesz_integral_check, vladimirov_kernel_constant,
    vladimirov_multiplier, LatticeFunction, LatticeSpec,
};
use padiclab::mahler::{
    difference_quotient_1, difference_quotient_n, mahler_coefficients, mahler_evaluate,
};
use padiclab::measure::{
    cocycle_residual, kakutani_dichotomy, pd_of_measure, quasi_invariance_factor,
    rep::{regular_rep_apply, sample_product_points},
    CylinderSet, DichotomyVerdict, InverseCdfSampler, OneDimMeasureSpec, ProductMeasureSpec,
    QGaussianSpec, SecondTypeSpec,
};
use padiclab::padic::{matrix_exp, Ball, PAdic, PMatrix};
use padiclab::rng::DetRng;
use std::time::Instant;

const N: usize = 12;

fn finish(name: &str, started: Instant, budget_s: f64, detail: String) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("[PASS] {name}: {detail} ({elapsed:.2}s, budget {budget_s}s)");
    assert!(
        elapsed < budget_s,
        "{name} exceeded its {budget_s}s budget: {elapsed:.2}s"
    );
}

#[test]
fn criterion_1_riesz_character_integral() {
    let t0 = Instant::now();
    let mut max_err = 0.0f64;
    for (p, n, q) in [(2u32, 1u32, 1.0f64), (3, 1, 1.0), (2, 2, 1.0)] {
        let case_start = Instant::now();
        let y = PAdic::one(p, 16);
        let check = riesz_integral_check(p, n, q, &y, 6).unwrap();
        let err = (check.lattice_sum.re - check.closed_form).abs();
        assert!(
            err <= 1e-3,
            "(p={p}, n={n}, q={q}): lattice {} vs closed {} (err {err})",
            check.lattice_sum.re,
            check.closed_form
        );
        assert!(check.lattice_sum.im.abs() <= 1e-9);
        assert!(
            case_start.elapsed().as_secs_f64() < 1.0,
            "single case over 1s"
        );
        max_err = max_err.max(err);
    }
    finish(
        "criterion 1 (riesz character integral)",
        t0,
        3.0,
        format!("max error {max_err:.2e} ≤ 1e-3"),
    );
}

#[test]
fn criterion_2_fourier_suite() {
    let t0 = Instant::now();
    let mut rng = DetRng::new(2024);
    let mut worst_parseval = 0.0f64;
    let mut worst_reflect = 0.0f64;
    for case in 0..100 {
        let p = [2u32, 3, 5][case % 3];
        // sizes up to p^7, biased so each prime hits its maximum
        let total = 4 + (case % 4) as i32;
        let total = if case % 10 == 0 { 7 } else { total };
        let m = 1 + (case as i32 % (total - 1));
        let spec = LatticeSpec::new(p, m, total - m).unwrap();
        let f = LatticeFunction::from_fn(spec, |_| {
            Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0)
        });
        let g = LatticeFunction::from_fn(spec, |_| {
            Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0)
        });
        let lhs = inner_product(&f, &g).unwrap();
        let rhs = inner_product(&fourier(&f), &fourier(&g)).unwrap();
        let rel = (lhs - rhs).norm() / lhs.norm();
        assert!(
            rel <= 1e-9,
            "Parseval, case {case} (p={p}, size p^{total}): {rel}"
        );
        worst_parseval = worst_parseval.max(rel);

        let ff = fourier(&fourier(&f));
        let scale = f.max_abs();
        let mut worst = 0.0f64;
        for i in 0..spec.size() {
            let r = spec.reflect_index(i);
            worst = worst.max((ff.value(i) - f.value(r)).norm());
        }
        let rel = worst / scale;
        assert!(rel <= 1e-9, "reflection, case {case}: {rel}");
        worst_reflect = worst_reflect.max(rel);
    }
    finish(
        "criterion 2 (fourier suite)",
        t0,
        30.0,
        format!("100 cases, worst Parseval {worst_parseval:.2e}, worst reflection {worst_reflect:.2e} ≤ 1e-9"),
    );
}

#[test]
fn criterion_3_vladimirov_duality() {
    let t0 = Instant::now();
    let p = 3u32;
    let spec = LatticeSpec::new(p, 2, 3).unwrap();
    let mut rng = DetRng::new(3);
    // boundary-safe family: zero-mean, supported away from the lattice
    // boundary (the multiplier convention |0|^b := 0 kills the mean and
    // the kernel form ignores additive constants)
    let mut functions = Vec::new();
    for _ in 0..20 {
        let raw = LatticeFunction::from_fn(spec, |i| {
            if spec.norm_exp_of_index(i).is_none_or(|e| e <= 1) {
                Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        functions.push(raw.subtract_mean());
    }
    let mut worst = 0.0f64;
    for b in [0.5, 1.0, 2.0] {
        let c = vladimirov_kernel_constant(p, b);
        for f in functions.iter() {
            let mult = vladimirov_multiplier(f, b);
            for x in 0..spec.size() {
                let kernel = pd_kernel(f, b, x).unwrap();
                let diff = (kernel - c * mult.value(x)).norm();
                assert!(diff <= 1e-6, "b={b}, x={x}: {diff}");
                worst = worst.max(diff);
            }
        }
    }
    // semigroup law in multiplier form
    let mut worst_semi = 0.0f64;
    for (a, b) in [(0.5, 1.0), (0.5, 0.5), (1.0, 2.0)] {
        for f in functions.iter().take(5) {
            let two_step = vladimirov_multiplier(&vladimirov_multiplier(f, a), b);
            let one_step = vladimirov_multiplier(f, a + b);
            let rel = two_step.max_abs_diff(&one_step) / one_step.max_abs().max(1e-30);
            assert!(rel <= 1e-12, "semigroup ({a},{b}): {rel}");
            worst_semi = worst_semi.max(rel);
        }
    }
    finish(
        "criterion 3 (vladimirov duality)",
        t0,
        30.0,
        format!(
            "kernel/multiplier worst {worst:.2e} ≤ 1e-6, semigroup worst {worst_semi:.2e} ≤ 1e-12"
        ),
    );
}

fn second_type_product(k: usize) -> ProductMeasureSpec {
    let mut balls = vec![(Ball::unit(3, N), 0.5)];
    for u in 1..3i64 {
        let c = PAdic::from_rational(u, 3, 3, N).unwrap();
        balls.push((Ball::new(c, 0), 0.25));
    }
    let template = SecondTypeSpec::new(3, balls, vec![], PAdic::one(3, N)).unwrap();
    ProductMeasureSpec::second_type(&template, vec![PAdic::one(3, N); k]).unwrap()
}

fn qgaussian_product(k: usize) -> ProductMeasureSpec {
    ProductMeasureSpec::q_gaussian(3, 1.0, PAdic::zero(3, N), 1.0, vec![PAdic::one(3, N); k])
        .unwrap()
}

#[test]
fn criterion_4_kakutani_dichotomy() {
    let t0 = Instant::now();
    let lattice = LatticeSpec::new(3, 4, 4).unwrap();
    // (a) second-type с in-domain shifts: bit-exact unit affinities
    let spec = second_type_product(20);
    let z: Vec<PAdic> = (0..20)
        .map(|k| PAdic::from_integer(k as i64 % 7, 3, N))
        .collect();
    let report = kakutani_dichotomy(&spec, &z, 20, &lattice).unwrap();
    for (k, &a) in report.affinities.iter().enumerate() {
        assert!(a == 1.0, "factor {k}: α = {a} must be exactly 1.0");
    }
    assert_eq!(report.verdict, DichotomyVerdict::Equivalent);

    // (b) q-Gaussian with out-of-domain constant shifts: partial products
    // sink below 1e-8 by K ≤ 50
    let spec = qgaussian_product(50);
    let z: Vec<PAdic> = (0..50).map(|_| PAdic::one(3, N).mul_p_pow(-2)).collect();
    let report = kakutani_dichotomy(&spec, &z, 50, &lattice).unwrap();
    assert_eq!(report.verdict, DichotomyVerdict::Orthogonal);
    for w in report.partial_products.windows(2) {
        assert!(w[1] <= w[0] + 1e-15, "partial products decrease");
    }
    let first_below = report
        .partial_products
        .iter()
        .position(|&p| p < 1e-8)
        .expect("crosses the orthogonality ceiling");
    assert!(first_below < 50);
    finish(
        "criterion 4 (kakutani dichotomy)",
        t0,
        10.0,
        format!(
            "in-domain all α = 1.0 exactly; out-of-domain product < 1e-8 at K = {}",
            first_below + 1
        ),
    );
}

#[test]
fn criterion_5_cocycle_identity() {
    let t0 = Instant::now();
    let lattice = LatticeSpec::new(3, 2, 2).unwrap();
    let mut worst = 0.0f64;
    for family in 0..2 {
        let spec = if family == 0 {
            qgaussian_product(4)
        } else {
            second_type_product(4)
        };
        let samplers: Vec<InverseCdfSampler> = spec
            .factors()
            .iter()
            .map(|f| {
                let d: &dyn padiclab::measure::DensityOnQp = match f {
                    OneDimMeasureSpec::QGaussian(s) => s,
                    OneDimMeasureSpec::SecondType(s) => s,
                };
                InverseCdfSampler::new(d, lattice, 4).unwrap()
            })
            .collect();
        let mut rng = DetRng::new(500 + family as u64);
        for _ in 0..500 {
            let x: Vec<PAdic> = samplers.iter().map(|s| s.sample(&mut rng)).collect();
            let small_shift = |rng: &mut DetRng| -> Vec<PAdic> {
                (0..4)
                    .map(|_| PAdic::from_integer(rng.next_below(27) as i64, 3, N))
                    .collect()
            };
            let z = small_shift(&mut rng);
            let h = small_shift(&mut rng);
            let r = cocycle_residual(&spec, &z, &h, &x, 4).unwrap();
            assert!(r <= 1e-9, "family {family}: residual {r}");
            worst = worst.max(r);
        }
    }
    finish(
        "criterion 5 (cocycle identity)",
        t0,
        10.0,
        format!("1000 random triples, worst residual {worst:.2e} ≤ 1e-9"),
    );
}

#[test]
fn criterion_6_pseudo_differentiability() {
    let t0 = Instant::now();
    // exact-invariance direction: second-type, h = 0, |direction| ≤ 1
    let spec = second_type_product(3);
    let direction = vec![PAdic::one(3, N); 3];
    let cylinder = CylinderSet {
        balls: vec![Ball::unit(3, N), Ball::unit(3, N), Ball::unit(3, N)],
    };
    for b in [0.5, 1.0, 2.0] {
        let v = pd_of_measure(&spec, b, &direction, &cylinder, 3, 3).unwrap();
        assert!(v.norm() <= 1e-12, "exact invariance at b={b}: {v}");
    }
    // q-Gaussian products: finite and refinement-stable within 1e-4
    let spec = qgaussian_product(2);
    let direction = vec![PAdic::one(3, N).mul_p_pow(-1); 2];
    let cylinder = CylinderSet {
        balls: vec![Ball::unit(3, N), Ball::unit(3, N)],
    };
    let mut details = Vec::new();
    for b in [0.5, 1.0, 2.0] {
        let coarse = pd_of_measure(&spec, b, &direction, &cylinder, 3, 3).unwrap();
        let fine = pd_of_measure(&spec, b, &direction, &cylinder, 4, 3).unwrap();
        assert!(coarse.norm().is_finite() && coarse.norm() > 0.0);
        let gap = (coarse - fine).norm();
        assert!(gap <= 1e-4, "b={b}: refinement gap {gap}");
        details.push(format!("b={b}: {:.4e} (gap {gap:.1e})", coarse.re));
    }
    finish(
        "criterion 6 (pseudo-differentiability of measures)",
        t0,
        60.0,
        format!(
            "invariant directions exactly 0; q-Gaussian stable: {}",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_7_flow_suite() {
    let t0 = Instant::now();
    let p = 3u32;
    // shared pieces
    let measure =
        OneDimMeasureSpec::QGaussian(QGaussianSpec::new(p, 1.0, PAdic::zero(p, N), 1.0).unwrap());
    let sampler_lattice = LatticeSpec::new(p, 1, 2).unwrap();
    let scaling2 = vec![PAdic::one(p, N).mul_p_pow(1); 2];

    // (a) group closure on 10³ paths, exact digit-level check
    let drift = {
        let mut m = PMatrix::zero(p, 2, N);
        m.set(0, 1, PAdic::one(p, N).mul_p_pow(1));
        FieldSpec::Constant(m)
    };
    let basis: Vec<PMatrix> = (0..2)
        .map(|i| {
            let mut m = PMatrix::zero(p, 2, N);
            m.set(i, i, PAdic::one(p, N).mul_p_pow(1));
            m
        })
        .collect();
    let spec = GroupFlowSpec::new(PMatrix::identity(p, 2, N), drift, basis).unwrap();
    let time = TimeLattice::new(p, 0, 2).unwrap();
    for seed in 0..1000u64 {
        let noise = sample_noise(&measure, &sampler_lattice, 4, &time, 2, &scaling2, seed).unwrap();
        let traj = simulate_flow(&spec, &time, &noise).unwrap();
        for pt in traj.points.iter() {
            assert!(pt.is_congruent_identity_mod_p(), "closure at seed {seed}");
        }
    }

    // (b) pathwise left-equivariance to working precision
    let noise = sample_noise(&measure, &sampler_lattice, 4, &time, 2, &scaling2, 31337).unwrap();
    let base = simulate_flow(&spec, &time, &noise).unwrap();
    let mut g = PMatrix::identity(p, 2, N);
    g.set(0, 1, PAdic::from_integer(3, p, N));
    g.set(1, 0, PAdic::from_integer(6, p, N));
    let shifted = simulate_flow(
        &spec.with_start(g.mul(spec.start())).unwrap(),
        &time,
        &noise,
    )
    .unwrap();
    let floor = N as i64 - 2;
    for (a, b) in base.points.iter().zip(shifted.points.iter()) {
        let err = g.mul(a).sub(b);
        assert!(
            err.min_ord().is_none_or(|o| o >= floor),
            "{:?}",
            err.min_ord()
        );
    }

    // (c) abelian d = 1 refinement consistency to p^{-(precision-2)}
    let a_mat = {
        let mut m = PMatrix::zero(p, 1, N);
        m.set(0, 0, PAdic::one(p, N).mul_p_pow(1));
        m
    };
    let abelian = GroupFlowSpec::new(
        PMatrix::identity(p, 1, N),
        FieldSpec::Constant(a_mat.clone()),
        vec![a_mat.clone()],
    )
    .unwrap();
    let coarse = TimeLattice::new(p, 0, 2).unwrap();
    let fine = TimeLattice::new(p, 0, 3).unwrap();
    let scaling1 = vec![PAdic::one(p, N).mul_p_pow(1)];
    let fine_noise =
        sample_noise(&measure, &sampler_lattice, 4, &fine, 1, &scaling1, 4242).unwrap();
    let coarse_noise = NoisePath::from_increments(
        fine_noise.increments()[..coarse.step_count()].to_vec(),
        1,
        4242,
    );
    let coarse_traj = simulate_flow(&abelian, &coarse, &coarse_noise).unwrap();
    let fine_traj = simulate_flow(&abelian, &fine, &fine_noise).unwrap();
    let shared = coarse.step_count();
    let mut w_total = PAdic::zero(p, N);
    for dw in fine_noise.increments()[..shared].iter() {
        w_total = w_total.add(&dw[0]);
    }
    let exact = matrix_exp(
        &a_mat
            .scalar_mul(&PAdic::from_integer(shared as i64, p, N))
            .add(&a_mat.scalar_mul(&w_total)),
    )
    .unwrap();
    for traj in [&coarse_traj, &fine_traj] {
        let err = traj.points[shared].sub(&exact);
        assert!(
            err.min_ord().is_none_or(|o| o >= floor),
            "abelian: {:?}",
            err.min_ord()
        );
    }

    // (d) noise goodness of fit at N = 1e5 draws
    let sampler = InverseCdfSampler::new(
        match &measure {
            OneDimMeasureSpec::QGaussian(s) => s,
            _ => unreachable!(),
        },
        sampler_lattice,
        4,
    )
    .unwrap();
    let draws = 100_000usize;
    let mut rng = DetRng::new(86);
    let mut counts = vec![0usize; sampler_lattice.size()];
    for _ in 0..draws {
        let x = sampler.sample(&mut rng);
        counts[sampler.cell_of(&x).unwrap()] += 1;
    }
    let bound = 4.0 / (draws as f64).sqrt();
    let mut worst_gof = 0.0f64;
    for (i, &c) in counts.iter().enumerate() {
        let dev = (c as f64 / draws as f64 - sampler.cell_probability(i)).abs();
        assert!(dev <= bound, "cell {i}: {dev} vs {bound}");
        worst_gof = worst_gof.max(dev);
    }
    finish(
        "criterion 7 (flow suite)",
        t0,
        120.0,
        format!("closure exact on 1000 paths; equivariance and abelian refinement ≥ p^-{floor}; GoF worst {worst_gof:.2e} ≤ {bound:.2e}"),
    );
}

#[test]
fn criterion_8_regular_representation() {
    let t0 = Instant::now();
    let spec = qgaussian_product(3);
    let lattice = LatticeSpec::new(3, 4, 4).unwrap();
    let mut rng = DetRng::new(88);
    let n = 10_000usize;
    let points = sample_product_points(&spec, &lattice, 4, n, &mut rng).unwrap();
    let test_fn = |g: &[PAdic]| -> Complex64 {
        let c = padiclab::padic::additive_character(&g[0]);
        let bump = if g[1].ord().is_none_or(|o| o >= 0) {
            1.0
        } else {
            0.5
        };
        c * bump
    };
    let h = vec![
        PAdic::from_integer(4, 3, N),
        PAdic::one(3, N),
        PAdic::zero(3, N),
    ];
    let transformed = regular_rep_apply(&points, &h, &test_fn, &spec).unwrap();
    let diffs: Vec<f64> = points
        .iter()
        .zip(transformed.iter())
        .map(|(g, t)| t.norm_sqr() - test_fn(g).norm_sqr())
        .collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n as f64 - 1.0);
    let se = (var / n as f64).sqrt();
    assert!(
        mean.abs() <= 3.0 * se,
        "norm preservation: mean {mean}, se {se}"
    );

    // composition T_g T_h = T_{g+h} pointwise
    let g_shift = vec![
        PAdic::from_integer(2, 3, N),
        PAdic::zero(3, N),
        PAdic::one(3, N),
    ];
    let combined: Vec<PAdic> = (0..3).map(|i| g_shift[i].add(&h[i])).collect();
    let spec2 = spec.clone();
    let h2 = h.clone();
    let inner = move |g: &[PAdic]| {
        let rho = quasi_invariance_factor(&spec2, &h2, g, 3).unwrap();
        let translated: Vec<PAdic> = (0..3).map(|i| g[i].sub(&h2[i])).collect();
        rho.sqrt() * test_fn(&translated)
    };
    let sample: Vec<Vec<PAdic>> = points.into_iter().take(500).collect();
    let lhs = regular_rep_apply(&sample, &g_shift, &inner, &spec).unwrap();
    let rhs = regular_rep_apply(&sample, &combined, &test_fn, &spec).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in lhs.iter().zip(rhs.iter()) {
        let d = (a - b).norm();
        assert!(d <= 1e-9, "composition: {d}");
        worst = worst.max(d);
    }
    finish(
        "criterion 8 (regular representation)",
        t0,
        30.0,
        format!(
            "‖T_h f‖² within {:.2}σ of ‖f‖²; composition worst {worst:.2e} ≤ 1e-9",
            (mean / se).abs()
        ),
    );
}

#[test]
fn criterion_9_calculus_suite() {
    let t0 = Instant::now();
    // Mahler round trip, exact
    let p = 3u32;
    let int = |v: i64| PAdic::from_integer(v, p, N);
    let f = |x: &PAdic| {
        let x2 = x.mul(x);
        x2.mul(&x2)
            .mul(x)
            .add(&x2.mul(&int(3)))
            .sub(&x.mul(&int(5)))
            .add(&int(2))
    };
    let samples: Vec<PAdic> = (0..8).map(|k| f(&int(k))).collect();
    let expansion = mahler_coefficients(&samples).unwrap();
    for (k, expected) in samples.iter().enumerate() {
        assert_eq!(
            &mahler_evaluate(&expansion, &int(k as i64)).unwrap(),
            expected
        );
    }
    let off_grid = PAdic::from_rational(7, 4, p, N).unwrap();
    assert_eq!(
        mahler_evaluate(&expansion, &off_grid).unwrap(),
        f(&off_grid)
    );

    // Φ² of x² = 2h₁h₂ exactly
    let sq = |x: &PAdic| x.mul(x);
    let hs = [int(5), int(11)];
    let zs = [int(2), int(8)];
    let phi2 = difference_quotient_n(&sq, &int(6), &hs, &zs).unwrap();
    assert_eq!(phi2, int(2 * 5 * 11));

    // Φ¹ error against the exact derivative shrinks by ≥ p per probe step
    let p5 = 5u32;
    let cube = |x: &PAdic| x.mul(x).mul(x);
    let x = PAdic::from_integer(2, p5, N);
    let h = PAdic::from_integer(1, p5, N);
    let exact = PAdic::from_integer(12, p5, N);
    let mut last = f64::INFINITY;
    let mut shrink_ok = true;
    for k in 1..=5i64 {
        let zeta = PAdic::one(p5, N).mul_p_pow(k);
        let q = difference_quotient_1(&cube, &x, &h, &zeta).unwrap();
        let err = q.sub(&exact).norm();
        shrink_ok &= err <= last / p5 as f64;
        last = err;
    }
    assert!(shrink_ok, "derivative probe error shrinks by ≥ p each step");
    finish(
        "criterion 9 (calculus suite)",
        t0,
        10.0,
        "Mahler round-trip exact; Φ²(x²) = 2h₁h₂ exact; probe error shrinks by ≥ p".to_string(),
    );
}

#[test]
fn acceptance_artifacts_are_reproducible() {
    // determinism spot-check shared by several criteria: one seed, two
    // runs, byte-identical histogram artifacts
    let t0 = Instant::now();
    let p = 3u32;
    let measure =
        OneDimMeasureSpec::QGaussian(QGaussianSpec::new(p, 1.0, PAdic::zero(p, N), 1.0).unwrap());
    let basis: Vec<PMatrix> = (0..2)
        .map(|i| {
            let mut m = PMatrix::zero(p, 2, N);
            m.set(i, i, PAdic::one(p, N).mul_p_pow(1));
            m
        })
        .collect();
    let spec = GroupFlowSpec::new(PMatrix::identity(p, 2, N), FieldSpec::Zero, basis).unwrap();
    let time = TimeLattice::new(p, 0, 2).unwrap();
    let config = NoiseConfig {
        measure: &measure,
        sampler_lattice: LatticeSpec::new(p, 1, 2).unwrap(),
        tail_digits: 4,
        scaling: vec![PAdic::one(p, N).mul_p_pow(1); 2],
    };
    let render = |threads: usize| -> Vec<u8> {
        let hist = transition_histogram(&spec, &time, &config, 1, 400, 7, threads).unwrap();
        let mut buf = Vec::new();
        hist.write_csv(&mut buf).unwrap();
        buf
    };
    assert_eq!(
        render(1),
        render(3),
        "thread count does not leak into artifacts"
    );

    // picard early-exit sanity under the same budget
    let noise = sample_noise(
        &measure,
        &config.sampler_lattice,
        4,
        &time,
        1,
        &[PAdic::one(p, N).mul_p_pow(1)],
        15,
    )
    .unwrap();
    let res = picard_iterate(
        &[PicardCoeff {
            time_power: 0,
            noise_power: 1,
            constant: PAdic::one(p, N),
            linear: PAdic::one(p, N).mul_p_pow(1),
        }],
        &PAdic::one(p, N),
        &noise,
        &time,
        40,
    )
    .unwrap();
    assert!(res.converged && !res.diverged);
    finish(
        "reproducibility spot-check",
        t0,
        30.0,
        "byte-identical artifacts across thread counts".into(),
    );
}
