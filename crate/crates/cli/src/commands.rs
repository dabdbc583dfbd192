//! Per-subcommand execution: each builds its validated spec from the
//! config document, runs the computation, writes artifacts, and returns a
//! one-line summary.

use crate::config::*;
use crate::output::ArtifactWriter;
use crate::{CliError, Flags};
use num_complex::Complex64;
use padiclab::flow::{
    picard_iterate, quasi_invariance_empirical, sample_noise, simulate_flow, transition_histogram,
    FieldSpec, GroupFlowSpec, NoiseConfig, PicardCoeff, TimeLattice,
};
use padiclab::lattice::{
    fourier, fourier_inverse, inner_product, pd_c, pd_kernel, riesz_integral_check,
    vladimirov_kernel_constant, vladimirov_multiplier, LatticeFunction, LatticeSpec,
};
use padiclab::measure::io::RationalRepr;
use padiclab::measure::{
    cocycle_residual, kakutani_dichotomy, pd_of_measure, quasi_invariance_factor,
    rep::{regular_rep_apply, sample_product_points},
    CylinderSet, DensityOnQp, OneDimMeasureSpec,
};
use padiclab::padic::{Ball, PAdic, PMatrix, DEFAULT_PRECISION};
use padiclab::rng::DetRng;
use std::io::Write;
use std::path::Path;

fn parse_config<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config schema: {e}")))
}

fn check_experiment(declared: &str, subcommand: &str) -> Result<(), CliError> {
    if declared != subcommand {
        return Err(CliError::Usage(format!(
            "config declares experiment \"{declared}\" but the subcommand is \"{subcommand}\""
        )));
    }
    Ok(())
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn load_function(input: &FunctionInput, config_dir: &Path) -> Result<LatticeFunction, CliError> {
    match (&input.input, &input.generate) {
        (Some(path), None) => {
            let path = config_dir.join(path);
            let file = std::fs::File::open(&path)
                .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
            LatticeFunction::read_csv(&mut std::io::BufReader::new(file)).map_err(numeric)
        }
        (None, Some(gen)) => {
            let spec = LatticeSpec::new(gen.p, gen.m, gen.n).map_err(numeric)?;
            let mut rng = DetRng::new(gen.seed);
            Ok(LatticeFunction::from_fn(spec, |_| {
                Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0)
            }))
        }
        _ => Err(CliError::Usage(
            "exactly one of \"input\" and \"generate\" must be given".into(),
        )),
    }
}

fn build_rationals(
    reprs: &[RationalRepr],
    p: u32,
    precision: usize,
) -> Result<Vec<PAdic>, CliError> {
    reprs
        .iter()
        .map(|r| r.build(p, precision).map_err(numeric))
        .collect()
}

pub fn run_density(
    text: &str,
    sub: &str,
    _flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: DensityConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let measure = cfg.measure.build().map_err(numeric)?;
    let lattice =
        LatticeSpec::new(cfg.measure.p(), cfg.lattice.m, cfg.lattice.n).map_err(numeric)?;
    let mut mass = 0.0;
    let mut rows = Vec::with_capacity(lattice.size());
    for i in 0..lattice.size() {
        let d = measure.density(&lattice.point(i)).map_err(numeric)?;
        mass += d * lattice.cell_measure();
        rows.push((i, d));
    }
    let path = out
        .write_csv("density.csv", |w| {
            writeln!(w, "digit_index,density")?;
            for (i, d) in rows.iter() {
                writeln!(w, "{i},{d:.17e}")?;
            }
            Ok(())
        })
        .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "density: {} cells, lattice mass {mass:.9} -> {}",
        lattice.size(),
        path.display()
    ))
}

pub fn run_fourier(
    text: &str,
    sub: &str,
    _flags: &Flags,
    config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: FourierConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let f = load_function(&cfg.function, config_dir)?;
    let g = if cfg.inverse {
        fourier_inverse(&f)
    } else {
        fourier(&f)
    };
    // Parseval residual of f against itself as the printed check
    let lhs = inner_product(&f, &f).map_err(numeric)?;
    let rhs = inner_product(&g, &g).map_err(numeric)?;
    let residual = (lhs - rhs).norm() / lhs.norm().max(1e-300);
    let path = out
        .write_csv("fourier.csv", |w| {
            let mut buf = Vec::new();
            g.write_csv(&mut buf).map_err(std::io::Error::other)?;
            w.write_all(&buf)
        })
        .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "fourier: size {}, Parseval residual {residual:.2e} -> {}",
        f.spec().size(),
        path.display()
    ))
}

pub fn run_vladimirov(
    text: &str,
    sub: &str,
    flags: &Flags,
    config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: VladimirovConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    if cfg.b <= 0.0 {
        return Err(CliError::Usage("order b must be positive".into()));
    }
    let f = load_function(&cfg.function, config_dir)?;
    let result = vladimirov_multiplier(&f, cfg.b);
    let mut check_note = String::from("kernel check skipped");
    if cfg.kernel_check {
        let tolerance = flags.tolerance.or(cfg.tolerance).unwrap_or(1e-6);
        let zero_mean = f.subtract_mean();
        let mult = vladimirov_multiplier(&zero_mean, cfg.b);
        let c = vladimirov_kernel_constant(f.spec().p, cfg.b);
        let mut worst = 0.0f64;
        for x in 0..f.spec().size() {
            let kernel = pd_kernel(&zero_mean, cfg.b, x).map_err(numeric)?;
            worst = worst.max((kernel - c * mult.value(x)).norm());
        }
        if worst > tolerance {
            return Err(CliError::Numeric(format!(
                "kernel/multiplier disagreement {worst:.3e} exceeds tolerance {tolerance:.1e}"
            )));
        }
        check_note = format!("kernel agreement {worst:.2e} ≤ {tolerance:.1e}");
    }
    let path = out
        .write_csv("vladimirov.csv", |w| {
            let mut buf = Vec::new();
            result.write_csv(&mut buf).map_err(std::io::Error::other)?;
            w.write_all(&buf)
        })
        .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "vladimirov: b = {}, {check_note} -> {}",
        cfg.b,
        path.display()
    ))
}

pub fn run_pd(
    text: &str,
    sub: &str,
    _flags: &Flags,
    config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: PdConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let f = load_function(&cfg.function, config_dir)?;
    if cfg.x_index >= f.spec().size() {
        return Err(CliError::Usage(format!(
            "x_index {} out of range",
            cfg.x_index
        )));
    }
    let value = if cfg.unit_ball_only {
        pd_c(&f, cfg.b, cfg.x_index).map_err(numeric)?
    } else {
        pd_kernel(&f, cfg.b, cfg.x_index).map_err(numeric)?
    };
    out.write_json(
        "pd.json",
        serde_json::json!({
            "b": cfg.b,
            "x_index": cfg.x_index,
            "unit_ball_only": cfg.unit_ball_only,
            "value_re": value.re,
            "value_im": value.im,
        }),
    )
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "pd: PD(b={}, x={}) = {:.9e}{:+.3e}i",
        cfg.b, cfg.x_index, value.re, value.im
    ))
}

pub fn run_riesz(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: RieszConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let tolerance = flags.tolerance.or(cfg.tolerance).unwrap_or(1e-3);
    let precision = DEFAULT_PRECISION.max(2 * cfg.cutoff as usize + 4);
    let y = cfg.y.build(cfg.p, precision).map_err(numeric)?;
    let check = riesz_integral_check(cfg.p, cfg.n, cfg.q, &y, cfg.cutoff).map_err(numeric)?;
    let err = (check.lattice_sum.re - check.closed_form).abs();
    out.write_csv("riesz.csv", |w| {
        writeln!(
            w,
            "p,n,q,cutoff,closed_form,lattice_re,lattice_im,abs_error,reported_tolerance"
        )?;
        writeln!(
            w,
            "{},{},{},{},{:.17e},{:.17e},{:.17e},{:.3e},{:.3e}",
            cfg.p,
            cfg.n,
            cfg.q,
            cfg.cutoff,
            check.closed_form,
            check.lattice_sum.re,
            check.lattice_sum.im,
            err,
            check.reported_tolerance
        )
    })
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    if err > tolerance {
        return Err(CliError::Numeric(format!(
            "lattice sum {:.9} vs closed form {:.9}: error {err:.3e} exceeds {tolerance:.1e}",
            check.lattice_sum.re, check.closed_form
        )));
    }
    Ok(format!(
        "riesz: closed form {:.9}, lattice {:.9}, error {err:.2e} ≤ {tolerance:.1e}",
        check.closed_form, check.lattice_sum.re
    ))
}

pub fn run_kakutani(
    text: &str,
    sub: &str,
    _flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: KakutaniConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = cfg.measure.build().map_err(numeric)?;
    let truncation = cfg.truncation.unwrap_or(spec.truncation());
    let p = spec.p();
    let lattice = match cfg.lattice {
        Some(d) => LatticeSpec::new(p, d.m, d.n).map_err(numeric)?,
        None => padiclab::measure::default_quadrature(p),
    };
    let shift = build_rationals(&cfg.shift, p, DEFAULT_PRECISION)?;
    if shift.len() < truncation {
        return Err(CliError::Usage(
            "shift vector shorter than the truncation".into(),
        ));
    }
    let report = kakutani_dichotomy(&spec, &shift, truncation, &lattice).map_err(numeric)?;
    out.write_csv("kakutani.csv", |w| {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        w.write_all(&buf)
    })
    .map_err(numeric)?;
    let final_product = *report.partial_products.last().unwrap();
    out.write_json(
        "kakutani.json",
        serde_json::json!({
            "verdict": report.verdict.to_string(),
            "truncation": truncation,
            "final_product": final_product,
        }),
    )
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "kakutani: verdict {} at K = {truncation}, final partial product {final_product:.3e}",
        report.verdict
    ))
}

pub fn run_quasiinv(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: QuasiInvConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = cfg.measure.build().map_err(numeric)?;
    let p = spec.p();
    let k = spec.truncation();
    let shift = build_rationals(&cfg.shift, p, DEFAULT_PRECISION)?;
    if shift.len() < k {
        return Err(CliError::Usage(
            "shift vector shorter than the factor count".into(),
        ));
    }
    let lattice =
        LatticeSpec::new(p, cfg.sample.lattice.m, cfg.sample.lattice.n).map_err(numeric)?;
    let seed = flags.seed.unwrap_or(cfg.sample.seed);
    let mut rng = DetRng::new(seed);
    let points = sample_product_points(
        &spec,
        &lattice,
        cfg.sample.tail_digits,
        cfg.sample.count,
        &mut rng,
    )
    .map_err(numeric)?;
    let mut rows = Vec::with_capacity(points.len());
    let mut max_cocycle = 0.0f64;
    for (i, x) in points.iter().enumerate() {
        let rho = quasi_invariance_factor(&spec, &shift, x, k).map_err(numeric)?;
        if cfg.check_cocycle {
            // split the shift as z + h with h = shift/2-ish digit split
            let h: Vec<PAdic> = (0..k)
                .map(|j| {
                    if j % 2 == 0 {
                        shift[j].clone()
                    } else {
                        PAdic::zero(p, DEFAULT_PRECISION)
                    }
                })
                .collect();
            let z: Vec<PAdic> = (0..k).map(|j| shift[j].sub(&h[j])).collect();
            let r = cocycle_residual(&spec, &z, &h, x, k).map_err(numeric)?;
            max_cocycle = max_cocycle.max(r);
        }
        rows.push((i, rho));
    }
    out.write_csv("quasiinv.csv", |w| {
        writeln!(w, "sample_index,rho")?;
        for (i, rho) in rows.iter() {
            writeln!(w, "{i},{rho:.17e}")?;
        }
        Ok(())
    })
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "quasiinv: {} samples, max cocycle residual {max_cocycle:.2e}",
        rows.len()
    ))
}

pub fn run_pdmeasure(
    text: &str,
    sub: &str,
    _flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: PdMeasureConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = cfg.measure.build().map_err(numeric)?;
    let p = spec.p();
    let direction = build_rationals(&cfg.direction, p, DEFAULT_PRECISION)?;
    let balls = cfg
        .cylinder
        .iter()
        .map(|b| {
            Ok(Ball::new(
                b.center.build(p, DEFAULT_PRECISION).map_err(numeric)?,
                b.radius_exp,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let cylinder = CylinderSet { balls };
    let mut results = Vec::new();
    for &b in cfg.b_values.iter() {
        let v = pd_of_measure(
            &spec,
            b,
            &direction,
            &cylinder,
            cfg.r_resolution,
            cfg.quad_resolution,
        )
        .map_err(numeric)?;
        results.push(serde_json::json!({"b": b, "value_re": v.re, "value_im": v.im}));
    }
    out.write_json("pdmeasure.json", serde_json::json!({ "values": results }))
        .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "pdmeasure: {} orders evaluated",
        cfg.b_values.len()
    ))
}

fn build_matrix(
    entries: &[RationalRepr],
    p: u32,
    d: usize,
    precision: usize,
) -> Result<PMatrix, CliError> {
    if entries.len() != d * d {
        return Err(CliError::Usage(format!(
            "matrix needs {} entries, got {}",
            d * d,
            entries.len()
        )));
    }
    let entries = build_rationals(entries, p, precision)?;
    Ok(PMatrix::from_entries(d, entries))
}

fn build_flow(repr: &FlowRepr) -> Result<GroupFlowSpec, CliError> {
    let start = match &repr.start {
        Some(e) => build_matrix(e, repr.p, repr.d, repr.precision)?,
        None => PMatrix::identity(repr.p, repr.d, repr.precision),
    };
    let drift = match &repr.drift {
        DriftRepr::Zero => FieldSpec::Zero,
        DriftRepr::Constant { matrix } => {
            FieldSpec::Constant(build_matrix(matrix, repr.p, repr.d, repr.precision)?)
        }
        DriftRepr::LogBracket { matrix } => {
            FieldSpec::LogBracket(build_matrix(matrix, repr.p, repr.d, repr.precision)?)
        }
    };
    let diffusion = repr
        .diffusion
        .iter()
        .map(|m| build_matrix(m, repr.p, repr.d, repr.precision))
        .collect::<Result<Vec<_>, _>>()?;
    GroupFlowSpec::new(start, drift, diffusion).map_err(numeric)
}

struct BuiltNoise {
    measure: OneDimMeasureSpec,
    lattice: LatticeSpec,
    tail_digits: usize,
    scaling: Vec<PAdic>,
}

fn build_noise(repr: &NoiseRepr, expected_dim: usize) -> Result<BuiltNoise, CliError> {
    let p = repr.measure.p();
    if repr.scaling.len() != expected_dim {
        return Err(CliError::Usage(format!(
            "noise scaling needs {expected_dim} entries, got {}",
            repr.scaling.len()
        )));
    }
    Ok(BuiltNoise {
        measure: repr.measure.build().map_err(numeric)?,
        lattice: LatticeSpec::new(p, repr.lattice.m, repr.lattice.n).map_err(numeric)?,
        tail_digits: repr.tail_digits,
        scaling: build_rationals(&repr.scaling, p, DEFAULT_PRECISION)?,
    })
}

pub fn run_simulate(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: SimulateConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = build_flow(&cfg.flow)?;
    let time =
        TimeLattice::new(cfg.flow.p, cfg.time.radius_exp, cfg.time.level).map_err(numeric)?;
    let noise_parts = build_noise(&cfg.noise, spec.noise_dim())?;
    let seed = flags.seed.unwrap_or(cfg.seed);
    let noise = sample_noise(
        &noise_parts.measure,
        &noise_parts.lattice,
        noise_parts.tail_digits,
        &time,
        spec.noise_dim(),
        &noise_parts.scaling,
        seed,
    )
    .map_err(numeric)?;
    let traj = simulate_flow(&spec, &time, &noise).map_err(numeric)?;
    let path = out
        .write_raw("trajectory.jsonl", |w| traj.write_jsonl(w))
        .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    Ok(format!(
        "simulate: {} steps, seed {seed} -> {}",
        traj.points.len() - 1,
        path.display()
    ))
}

pub fn run_histogram(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: HistogramConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = build_flow(&cfg.flow)?;
    let time =
        TimeLattice::new(cfg.flow.p, cfg.time.radius_exp, cfg.time.level).map_err(numeric)?;
    let noise_parts = build_noise(&cfg.noise, spec.noise_dim())?;
    let noise_cfg = NoiseConfig {
        measure: &noise_parts.measure,
        sampler_lattice: noise_parts.lattice,
        tail_digits: noise_parts.tail_digits,
        scaling: noise_parts.scaling.clone(),
    };
    let seed = flags.seed.unwrap_or(cfg.seed);
    let threads = flags.threads.or(cfg.threads).unwrap_or(1);
    let summary = match &cfg.shift {
        None => {
            let hist = transition_histogram(
                &spec,
                &time,
                &noise_cfg,
                cfg.m_q,
                cfg.n_samples,
                seed,
                threads,
            )
            .map_err(numeric)?;
            out.write_csv("histogram.csv", |w| {
                let mut buf = Vec::new();
                hist.write_csv(&mut buf)?;
                w.write_all(&buf)
            })
            .map_err(numeric)?;
            format!(
                "histogram: {} classes populated over {} samples (m_q = {})",
                hist.classes.len(),
                hist.n_samples,
                cfg.m_q
            )
        }
        Some(shift) => {
            let h = build_matrix(shift, cfg.flow.p, cfg.flow.d, cfg.flow.precision)?;
            let table = quasi_invariance_empirical(
                &spec,
                &h,
                &time,
                &noise_cfg,
                cfg.m_q,
                cfg.n_samples,
                seed,
                threads,
            )
            .map_err(numeric)?;
            out.write_csv("histogram_ratios.csv", |w| {
                let mut buf = Vec::new();
                table.write_csv(&mut buf)?;
                w.write_all(&buf)
            })
            .map_err(numeric)?;
            let flagged = table.rows.iter().filter(|r| r.flagged).count();
            format!(
                "histogram: ratio table over {} classes, {flagged} flagged against quasi-invariance",
                table.rows.len()
            )
        }
    };
    out.finish(sub).map_err(numeric)?;
    Ok(summary)
}

pub fn run_regrep(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: RegRepConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let spec = cfg.measure.build().map_err(numeric)?;
    let p = spec.p();
    let k = spec.truncation();
    let h = build_rationals(&cfg.h, p, DEFAULT_PRECISION)?;
    if h.len() < k {
        return Err(CliError::Usage(
            "shift h shorter than the factor count".into(),
        ));
    }
    let lattice =
        LatticeSpec::new(p, cfg.sample.lattice.m, cfg.sample.lattice.n).map_err(numeric)?;
    let seed = flags.seed.unwrap_or(cfg.sample.seed);
    let mut rng = DetRng::new(seed);
    let points = sample_product_points(
        &spec,
        &lattice,
        cfg.sample.tail_digits,
        cfg.sample.count,
        &mut rng,
    )
    .map_err(numeric)?;
    let test_fn = |g: &[PAdic]| -> Complex64 {
        padiclab::padic::additive_character(&g[0])
            * if g.len() > 1 && g[1].ord().is_none_or(|o| o >= 0) {
                1.0
            } else {
                0.5
            }
    };
    let transformed = regular_rep_apply(&points, &h, &test_fn, &spec).map_err(numeric)?;
    let n = points.len() as f64;
    let norm_f = points.iter().map(|g| test_fn(g).norm_sqr()).sum::<f64>() / n;
    let norm_thf = transformed.iter().map(|v| v.norm_sqr()).sum::<f64>() / n;
    let diffs: Vec<f64> = points
        .iter()
        .zip(transformed.iter())
        .map(|(g, t)| t.norm_sqr() - test_fn(g).norm_sqr())
        .collect();
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let within = mean.abs() <= 3.0 * se.max(1e-15);
    out.write_json(
        "regrep.json",
        serde_json::json!({
            "n_samples": points.len(),
            "norm_sq_f": norm_f,
            "norm_sq_thf": norm_thf,
            "paired_mean": mean,
            "paired_se": se,
            "within_three_se": within,
        }),
    )
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    if !within {
        return Err(CliError::Numeric(format!(
            "unitarity violated: paired mean {mean:.3e} beyond 3·SE {se:.3e}"
        )));
    }
    Ok(format!(
        "regrep: ‖f‖² {norm_f:.6}, ‖T_h f‖² {norm_thf:.6}, within 3·SE ({se:.2e})"
    ))
}

pub fn run_picard(
    text: &str,
    sub: &str,
    flags: &Flags,
    _config_dir: &Path,
    mut out: ArtifactWriter,
) -> Result<String, CliError> {
    let cfg: PicardConfig = parse_config(text)?;
    check_experiment(&cfg.experiment, sub)?;
    let time = TimeLattice::new(cfg.p, cfg.time.radius_exp, cfg.time.level).map_err(numeric)?;
    let noise_parts = build_noise(&cfg.noise, 1)?;
    let seed = flags.seed.unwrap_or(cfg.seed);
    let noise = sample_noise(
        &noise_parts.measure,
        &noise_parts.lattice,
        noise_parts.tail_digits,
        &time,
        1,
        &noise_parts.scaling,
        seed,
    )
    .map_err(numeric)?;
    let x0 = cfg.x0.build(cfg.p, cfg.precision).map_err(numeric)?;
    let coeffs = cfg
        .coeffs
        .iter()
        .map(|c| {
            Ok(PicardCoeff {
                time_power: c.time_power,
                noise_power: c.noise_power,
                constant: c.constant.build(cfg.p, cfg.precision).map_err(numeric)?,
                linear: c.linear.build(cfg.p, cfg.precision).map_err(numeric)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let result = picard_iterate(&coeffs, &x0, &noise, &time, cfg.max_iter).map_err(numeric)?;
    out.write_csv("picard.csv", |w| {
        writeln!(w, "step,ord,digits")?;
        for (j, v) in result.values.iter().enumerate() {
            let digits: Vec<String> = v.digits().iter().map(|d| d.to_string()).collect();
            writeln!(w, "{j},{},{}", v.ord().unwrap_or(0), digits.join(":"))?;
        }
        Ok(())
    })
    .map_err(numeric)?;
    out.write_json(
        "picard.json",
        serde_json::json!({
            "converged": result.converged,
            "diverged": result.diverged,
            "iterations": result.iterations,
            "diff_norms": result.diff_norms,
        }),
    )
    .map_err(numeric)?;
    out.finish(sub).map_err(numeric)?;
    let status = if result.converged {
        "converged"
    } else if result.diverged {
        "diverged (report written)"
    } else {
        "iteration budget exhausted"
    };
    Ok(format!(
        "picard: {status} after {} iterations, last diff {:.3e}",
        result.iterations,
        result.diff_norms.last().copied().unwrap_or(0.0)
    ))
}
