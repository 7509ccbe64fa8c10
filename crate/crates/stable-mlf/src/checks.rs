//! The verification harness: every identity, asymptote and constant
//! relating the functions, densities and samplers becomes a named,
//! tolerance-bearing, machine-checkable report.
//!
//! Conventions:
//!
//! * statistic/threshold orientation is uniform: smaller is better and
//!   `passed == (statistic <= threshold)`;
//! * multi-part checks scale each sub-residual by its own tolerance and
//!   report the worst ratio against threshold 1;
//! * every report's `details` carry the grids, tolerances, seeds and
//!   sample sizes needed to reproduce the run exactly;
//! * deterministic checks consume no randomness at all; Monte Carlo checks
//!   draw from a stream derived from `(seed, check, alpha)` only.

use crate::densities::{
    self, cdf_t1, density_g, density_g_at_zero, density_h_with, density_t1_convex_with,
    density_t1_product_with, density_t1_series, snapshot_f_that1, survival_s_tau, survival_t1,
    GMethod, MixingT, That1Snapshot,
};
use crate::error::{Error, Result};
use crate::index::{MLOrder, StabilityIndex};
use crate::mlf::{self, sin_pi};
use crate::quad::{self, Decay, Integrand};
use crate::rng::{RandomStream, SampleBatch};
use crate::samplers::{
    sample_positive_stable, sample_sup_at_exp_time, sample_x1, sample_x1_conditioned_negative,
    simulate_supremum, PathGridSpec, PathSide, TSampler,
};
use crate::tabulate::{TabulatedCdf, TailSpec};

const PI: f64 = std::f64::consts::PI;

/// Named verification outcome.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub alpha: f64,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub details: Vec<(String, String)>,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        alpha: f64,
        statistic: f64,
        threshold: f64,
        details: Vec<(String, String)>,
    ) -> Self {
        CheckReport {
            name: name.into(),
            alpha,
            statistic,
            threshold,
            passed: statistic <= threshold,
            details,
        }
    }

    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Estimated tail constant `kappa` in `P[T_1 >= t] ~ kappa t^(1/a - 1)`.
#[derive(Debug, Clone, Copy)]
pub struct TailConstant {
    pub kappa: f64,
    pub alpha: f64,
}

impl TailConstant {
    /// The exact value `1 / (Gamma(a) Gamma(1/a))`; `1/sqrt(pi)` at `a = 2`.
    pub fn exact(alpha: f64) -> f64 {
        1.0 / (libm::tgamma(alpha) * libm::tgamma(1.0 / alpha))
    }
}

/// Asymptotic Kolmogorov-Smirnov critical value `c(level)/sqrt(n)` for
/// the 1% and 5% levels.
pub fn ks_critical(level: f64, n: usize) -> f64 {
    let c = if level <= 0.01 { 1.63 } else { 1.36 };
    c / (n as f64).sqrt()
}

/// Sup-norm distance between the empirical CDF of `batch` and `cdf`.
/// Fails on an empty batch or when `cdf` is detectably non-monotone on the
/// sample points.
pub fn ks_statistic(batch: &SampleBatch, cdf: &dyn Fn(f64) -> f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Contract("KS statistic needs a nonempty batch".into()));
    }
    let mut xs = batch.values.clone();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut prev_f = -1.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) || f < prev_f - 1e-9 {
            return Err(Error::Contract(format!(
                "reference CDF is not monotone into [0,1]: F({x}) = {f} after {prev_f}"
            )));
        }
        prev_f = prev_f.max(f);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Two-sample sup-norm distance between empirical CDFs.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a: Vec<f64> = xs.to_vec();
    let mut b: Vec<f64> = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Per-index heavy machinery shared by several checks: the subordinator
/// density snapshot and a tabulated CDF of `T_1` built from the convex
/// representation.
pub struct Artifacts {
    index: StabilityIndex,
    snapshot: That1Snapshot,
    t1_cdf: TabulatedCdf,
}

impl Artifacts {
    pub fn new(index: StabilityIndex) -> Result<Self> {
        index.require_interior()?;
        let snapshot = snapshot_f_that1(index)?;
        let a = index.alpha();
        let f_zero = (1.0 - index.beta()) * density_g_at_zero(index)?;
        let t_min = 1e-6 / f_zero;
        let t_max = 1e6f64.powf(a / (a - 1.0));
        // KS-grade table: per-node density tolerance well below the KS
        // resolution but loose enough to keep the build around a second.
        let density = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            density_t1_convex_with(index, t, 3e-8, &|u| snapshot.eval(u))
                .map(|r| r.value)
                .unwrap_or(0.0)
        };
        let t1_cdf = TabulatedCdf::build(
            &density,
            t_min,
            t_max,
            2048,
            TailSpec { exponent: 1.0 },
            TailSpec { exponent: 1.0 - index.beta() },
            1e-6,
        )?;
        Ok(Artifacts { index, snapshot, t1_cdf })
    }

    pub fn index(&self) -> StabilityIndex {
        self.index
    }

    pub fn snapshot(&self) -> &That1Snapshot {
        &self.snapshot
    }

    pub fn fhat(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.snapshot.eval(t)
    }

    pub fn t1_cdf(&self) -> &TabulatedCdf {
        &self.t1_cdf
    }

    /// CDF of the supremum at time 1 through `P[S_1 <= x] = P[T_1 >= x^(-a)]`.
    pub fn s1_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.t1_cdf.survival(x.powf(-self.index.alpha()))
    }
}

fn fmt_grid(grid: &[f64]) -> String {
    let parts: Vec<String> = grid.iter().map(|x| format!("{x:.6e}")).collect();
    parts.join(",")
}

/// Complete monotonicity of `D_a`: Bernstein density non-negative, the
/// Laplace identity `D_a(x) = int exp(-x t) mu_a(t) dt` on the grid, unit
/// mass of `mu_a`, and alternating forward differences up to `order_max`
/// (each order's sign violation is measured beyond the propagated
/// evaluation noise).
pub fn check_cm(index: StabilityIndex, x_grid: &[f64], order_max: usize) -> Result<CheckReport> {
    let a = index.alpha();
    let mut details: Vec<(String, String)> =
        vec![("x_grid".into(), fmt_grid(x_grid)), ("order_max".into(), order_max.to_string())];

    // Boundary indices have closed forms and degenerate measures.
    if a == 1.0 || a == 2.0 {
        let mut resid = 0.0f64;
        for &x in x_grid {
            let d = mlf::eval_d(index, x, 1e-12)?.value;
            let want = if a == 1.0 { 0.0 } else { (-x).exp() };
            resid = resid.max((d - want).abs());
        }
        details.push(("mode".into(), "boundary_closed_form".into()));
        details.push(("golden_resid".into(), format!("{resid:.3e}")));
        return Ok(CheckReport::new("cm", a, resid / 1e-12, 1.0, details));
    }

    // (i) Bernstein density non-negative on a wide log grid.
    let mut mu_min = f64::INFINITY;
    for k in 0..40 {
        let t = 10f64.powf(-3.0 + 6.0 * k as f64 / 39.0);
        mu_min = mu_min.min(mlf::mu_density(index, t)?);
    }
    let neg_violation = (-mu_min).max(0.0);
    details.push(("mu_min".into(), format!("{mu_min:.3e}")));

    // (ii) Laplace identity, series route against generic quadrature route.
    let mu = |t: f64| mlf::mu_density(index, t).unwrap_or(0.0);
    let integrand = Integrand::new(&mu, a - 1.0, Decay::PowerLaw { exponent: a });
    let mut iden_resid = 0.0f64;
    for &x in x_grid {
        let lhs = {
            let s = mlf::eval_d_series(index, x, 1e-12);
            match s {
                Ok(r) if r.abs_err <= 2e-9 => r,
                _ => mlf::eval_d_quadrature(index, x, 1e-12)?,
            }
        };
        let rhs = quad::laplace_transform_numeric(&integrand, x, 1e-10)?;
        iden_resid = iden_resid.max((lhs.value - rhs.value).abs());
    }
    details.push(("laplace_resid".into(), format!("{iden_resid:.3e}")));

    // (iii) Unit mass.
    let mass = quad::integrate_semi_infinite(&integrand, 1e-9)?;
    let mass_resid = (mass.value - 1.0).abs();
    details.push(("mu_mass".into(), format!("{:.12}", mass.value)));

    // (iv) Alternating forward differences of orders 1..order_max,
    // step h = 1e-2, on [0.1, 20].
    let h = 1e-2;
    let binom: [&[f64]; 5] =
        [&[1.0], &[1.0, 1.0], &[1.0, 2.0, 1.0], &[1.0, 3.0, 3.0, 1.0], &[1.0, 4.0, 6.0, 4.0, 1.0]];
    let mut diff_violation = 0.0f64;
    for &x in x_grid.iter().filter(|&&x| (0.1..=20.0).contains(&x)) {
        let evals: Vec<crate::quad::EvalResult> = (0..=order_max)
            .map(|j| mlf::eval_d_quadrature(index, x + j as f64 * h, 1e-13))
            .collect::<Result<_>>()?;
        for k in 1..=order_max.min(4) {
            let mut delta = 0.0f64;
            let mut noise = 0.0f64;
            for (j, &c) in binom[k].iter().enumerate() {
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                delta += sign * c * evals[j].value;
                noise += c * (evals[j].abs_err + evals[j].value.abs() * 1e-14);
            }
            // Complete monotonicity requires (-1)^k Delta^k >= 0.
            let signed = if k % 2 == 0 { delta } else { -delta };
            diff_violation = diff_violation.max(-signed - noise).max(0.0);
        }
    }
    details.push(("diff_violation".into(), format!("{diff_violation:.3e}")));

    let statistic = (neg_violation / 1e-14)
        .max(iden_resid / 1e-8)
        .max(mass_resid / 1e-8)
        .max(diff_violation / 1e-12);
    Ok(CheckReport::new("cm", a, statistic, 1.0, details))
}

/// Witness that complete monotonicity is lost at index 4: the closed form
/// takes a negative value. The check passes when the negativity is found.
pub fn check_cm_alpha4_witness(x_grid: &[f64]) -> CheckReport {
    let mut min_v = f64::INFINITY;
    let mut witness = f64::NAN;
    for &x in x_grid {
        let v = mlf::eval_d4_golden(x);
        if v < min_v {
            min_v = v;
            witness = x;
        }
    }
    let statistic = if min_v < 0.0 { 0.0 } else { 1.0 };
    CheckReport::new(
        "cm_alpha4_witness",
        4.0,
        statistic,
        0.5,
        vec![
            ("min_value".into(), format!("{min_v:.6e}")),
            ("witness_x".into(), format!("{witness:.6e}")),
        ],
    )
}

/// The Laplace-transform chain: for each `(q, lambda)` pair the transform
/// of `E_a(q x^a)` equals `lambda^(a-1)/(lambda^a - q)`; the transform of
/// the survival function of the supremum at an exponential time equals
/// `(lambda^(a-1) - q^(1-1/a))/(lambda^a - q)` (equivalently the
/// exponential-moment form `q(lambda - q^(1/a))/(q^(1/a)(lambda^a - q))`),
/// finite by continuity at `lambda = q^(1/a)`; and the transform of
/// `f_T1` equals `F_a`.
pub fn check_laplace_identities(
    art: &Artifacts,
    q_lambda: &[(f64, f64)],
    y_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    let index = art.index();
    let a = index.alpha();
    let b = index.beta();
    let mut details: Vec<(String, String)> = vec![
        ("q_lambda".into(), format!("{q_lambda:?}")),
        ("y_grid".into(), fmt_grid(y_grid)),
        ("tol".into(), format!("{tol:.1e}")),
    ];
    let mut worst = 0.0f64;

    // Transform of the Mittag-Leffler function itself.
    for &(q, lam) in q_lambda {
        if lam <= q.powf(b) {
            return Err(Error::Usage(format!(
                "need lambda > q^(1/a) for the transform to converge: q={q}, lambda={lam}"
            )));
        }
        let f = |x: f64| {
            mlf::eval_mlf(MLOrder::new(a).unwrap(), q * x.powf(a), 1e-12)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        };
        let rate = lam - q.powf(b);
        let integrand = Integrand::new(&f, 0.0, Decay::Exponential { rate: 0.9 * rate })
            .with_breakpoint(1.0 / rate);
        // The kernel exp(-lam x) is part of the identity here, so integrate
        // the product directly rather than through the transform helper.
        let g = |x: f64| (-lam * x).exp() * f(x);
        let gi = Integrand::new(&g, 0.0, Decay::Exponential { rate: 0.9 * rate })
            .with_breakpoint(integrand.breakpoint);
        let lhs = quad::integrate_semi_infinite(&gi, tol * 0.05)?;
        let rhs = lam.powf(a - 1.0) / (lam.powf(a) - q);
        let resid = (lhs.value - rhs).abs();
        worst = worst.max(resid);
        details.push((format!("ml_transform_q{q}_l{lam}"), format!("{resid:.3e}")));
    }

    // Transform of the survival function of S_tau_q, plus the removable
    // singularity at lambda = q^(1/a).
    for &(q, lam) in q_lambda {
        let f = |x: f64| survival_s_tau(index, q, x, 1e-11).map(|r| r.value).unwrap_or(f64::NAN);
        let g = |x: f64| (-lam * x).exp() * f(x);
        let gi = Integrand::new(&g, 0.0, Decay::Exponential { rate: lam }).with_breakpoint(1.0 / lam);
        let lhs = quad::integrate_semi_infinite(&gi, tol * 0.05)?;
        let rhs = (lam.powf(a - 1.0) - q.powf(1.0 - b)) / (lam.powf(a) - q);
        let resid = (lhs.value - rhs).abs();
        worst = worst.max(resid);
        details.push((format!("survival_transform_q{q}_l{lam}"), format!("{resid:.3e}")));

        // Exponential-moment form at the same point.
        let moment_form = q * (lam - q.powf(b)) / (q.powf(b) * (lam.powf(a) - q));
        let rebuilt = 1.0 - lam * lhs.value;
        let resid_moment = (rebuilt - moment_form).abs();
        worst = worst.max(resid_moment);
        details.push((format!("wh_moment_q{q}_l{lam}"), format!("{resid_moment:.3e}")));

        // Continuity point: both candidate forms are finite and agree with
        // the limit (a-1)/(a lambda) at lambda = q^(1/a).
        let lam_c = q.powf(b);
        let g_c = |x: f64| (-lam_c * x).exp() * f(x);
        let gi_c =
            Integrand::new(&g_c, 0.0, Decay::Exponential { rate: lam_c }).with_breakpoint(1.0 / lam_c);
        let lhs_c = quad::integrate_semi_infinite(&gi_c, tol * 0.05)?;
        let limit = (a - 1.0) / (a * lam_c);
        let resid_c = (lhs_c.value - limit).abs();
        worst = worst.max(resid_c);
        details.push((format!("continuity_q{q}"), format!("{resid_c:.3e}")));
    }

    // Transform of the first-passage density reproduces F_a. The density
    // uses the exact inner evaluator here: snapshot interpolation error
    // (~1e-5 relative) would eat most of the 1e-6 budget.
    for &y in y_grid {
        let f = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            densities::density_t1(index, t, densities::T1Method::Convex, 1e-9)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        };
        let g = |t: f64| (-y * t).exp() * f(t);
        let gi = Integrand::new(&g, 0.0, Decay::Exponential { rate: y }).with_breakpoint((1.0 / y).min(1.0));
        let lhs = quad::integrate_semi_infinite(&gi, tol * 0.05)?;
        let rhs = mlf::eval_f(index, y, 1e-11)?.value;
        let resid = (lhs.value - rhs).abs();
        worst = worst.max(resid);
        details.push((format!("t1_transform_y{y}"), format!("{resid:.3e}")));
    }

    Ok(CheckReport::new("laplace", a, worst, tol, details))
}

/// Product factorization of the first-passage time, both prongs:
/// (a) deterministic pointwise agreement of the series and product forms
/// of `f_T1`; (b) Kolmogorov-Smirnov distance between exact product
/// samples and the quadrature CDF at the 1% level.
pub fn check_thm3(art: &Artifacts, n: usize, seed: u64, t_grid: &[f64]) -> Result<CheckReport> {
    let index = art.index();
    let a = index.alpha();
    let det_tol = 1e-6;

    // Prong (a): exact inner density, no tables.
    let mut det_resid = 0.0f64;
    for &t in t_grid {
        let s = density_t1_series(index, t, 1e-12)?;
        let p = densities::density_t1(index, t, densities::T1Method::Product, 1e-9)?;
        det_resid = det_resid.max((s.value - p.value).abs());
    }

    // Prong (b): Monte Carlo against the tabulated CDF.
    let mut rng = RandomStream::new(seed, 0);
    let sampler = TSampler::new(index)?;
    let batch = crate::samplers::sample_product_t_that1(&sampler, n, &mut rng)?;
    let cdf = |t: f64| art.t1_cdf().cdf(t);
    let ks = ks_statistic(&batch, &cdf)?;
    let ks_thr = ks_critical(0.01, n);

    let statistic = (det_resid / det_tol).max(ks / ks_thr);
    Ok(CheckReport::new(
        "thm3",
        a,
        statistic,
        1.0,
        vec![
            ("t_grid".into(), fmt_grid(t_grid)),
            ("det_resid".into(), format!("{det_resid:.3e}")),
            ("det_tol".into(), format!("{det_tol:.1e}")),
            ("ks".into(), format!("{ks:.5e}")),
            ("ks_threshold".into(), format!("{ks_thr:.5e}")),
            ("n".into(), n.to_string()),
            ("seed".into(), seed.to_string()),
        ],
    ))
}

/// The double-integral identity
/// `D_a(x) = int int f_{1/a}(u) exp(-s x^a / u^a) f_T(s) du ds`,
/// evaluated by nested quadrature and compared against the direct
/// evaluation of `D_a`.
pub fn check_corollary4(index: StabilityIndex, x_list: &[f64]) -> Result<CheckReport> {
    index.require_interior()?;
    let a = index.alpha();
    let order = index.dual_order();
    let mix = MixingT::new(index)?;
    let tol = 1e-5;
    let mut details: Vec<(String, String)> = vec![("x_list".into(), fmt_grid(x_list))];
    let mut worst = 0.0f64;

    for &x in x_list {
        let xa = x.powf(a);
        let inner = |s: f64| {
            // int f_{1/a}(u) exp(-s x^a u^(-a)) du
            let h = |u: f64| {
                let f = mlf::mlf_neg_bernstein_density(order, u).unwrap_or(0.0);
                f * (-s * xa * u.powf(-a)).exp()
            };
            let hi = Integrand::new(&h, 0.0, Decay::PowerLaw { exponent: 1.0 + index.beta() });
            quad::integrate_semi_infinite(&hi, 1e-8).map(|r| r.value).unwrap_or(f64::NAN)
        };
        let outer = |s: f64| mix.density_unchecked(s) * inner(s);
        let oi = Integrand::new(&outer, 0.0, Decay::PowerLaw { exponent: 1.9 });
        let double = quad::integrate_semi_infinite(&oi, 2e-7)?;
        let direct = mlf::eval_d(index, x, 1e-11)?;
        let resid = (double.value - direct.value).abs();
        worst = worst.max(resid);
        details.push((format!("x{x}"), format!("{resid:.3e}")));
    }
    Ok(CheckReport::new("corollary4", a, worst, tol, details))
}

/// Distributional identity for the supremum: draws of
/// `-T^(-1/a) X_1 | X_1 < 0` against the CDF of `S_1`, KS at the 1% level,
/// repeated over the given seeds.
pub fn check_corollary5(art: &Artifacts, n: usize, seeds: &[u64]) -> Result<CheckReport> {
    let index = art.index();
    let a = index.alpha();
    let sampler = TSampler::new(index)?;
    let thr = ks_critical(0.01, n);
    let mut details: Vec<(String, String)> =
        vec![("n".into(), n.to_string()), ("seeds".into(), format!("{seeds:?}"))];
    let mut worst = 0.0f64;

    for &seed in seeds {
        let mut rng = RandomStream::new(seed, 0);
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let t = sampler.sample(&mut rng);
            let x = sample_x1_conditioned_negative(index, &mut rng)?;
            let v = -t.powf(-index.beta()) * x;
            debug_assert!(v > 0.0);
            values.push(v);
        }
        let batch = SampleBatch::new(values, a, "S1_conditioned_product", &rng);
        let cdf = |x: f64| art.s1_cdf(x);
        let ks = ks_statistic(&batch, &cdf)?;
        worst = worst.max(ks);
        details.push((format!("ks_seed{seed}"), format!("{ks:.5e}")));
    }
    details.push(("ks_threshold".into(), format!("{thr:.5e}")));
    Ok(CheckReport::new("corollary5", a, worst, thr, details))
}

/// Tail constant of `P[T_1 >= t]`: the scaled survival
/// `t^(1 - 1/a) P[T_1 >= t]` at increasing probes, compared to
/// `1/(Gamma(a) Gamma(1/a))` at the largest probe (1% tolerance). The
/// survival comes from quadrature of the product representation; no
/// asymptotic constant enters the computation. At `a = 2` the closed-form
/// density gives the exact `1/sqrt(pi)`.
pub fn estimate_tail_constant(
    index: StabilityIndex,
    art: Option<&Artifacts>,
    t_probes: &[f64],
) -> Result<(TailConstant, CheckReport)> {
    let a = index.alpha();
    let exact = TailConstant::exact(a);
    let mut details: Vec<(String, String)> = vec![
        ("t_probes".into(), fmt_grid(t_probes)),
        ("exact_kappa".into(), format!("{exact:.12}")),
    ];
    let mut scaled = Vec::with_capacity(t_probes.len());
    for &t in t_probes {
        let surv = if index.is_gaussian() {
            // P[T_1 >= t] = erf(1/(2 sqrt(t))) from the closed-form density.
            libm::erf(0.5 / t.sqrt())
        } else {
            let art = art.ok_or_else(|| {
                Error::Usage("tail constant for interior alpha needs Artifacts".into())
            })?;
            let fhat = art.fhat();
            survival_t1(index, t, 1e-9, &fhat)?.value
        };
        let s = t.powf(1.0 - index.beta()) * surv;
        details.push((format!("scaled_t{t:.0e}"), format!("{s:.8}")));
        scaled.push(s);
    }
    let kappa = *scaled.last().ok_or_else(|| Error::Usage("need at least one probe".into()))?;
    let statistic = (kappa * libm::tgamma(a) * libm::tgamma(1.0 / a) - 1.0).abs();

    // Trend diagnostic: the scaled survival should approach the constant
    // monotonically across probes; otherwise flag the run inconclusive.
    let errs: Vec<f64> = scaled.iter().map(|s| (s - exact).abs()).collect();
    let trending = errs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    details.push(("trend_monotone".into(), trending.to_string()));
    if !trending {
        details.push(("inconclusive".into(), "probes too small for the asymptotic regime".into()));
    }

    let report = CheckReport::new("tail_constant", a, statistic, 0.01, details);
    Ok((TailConstant { kappa, alpha: a }, report))
}

/// Small-time behaviour of `P[T_1 <= t]`: the ratio `P[T_1 <= t]/t`
/// converges to `-1/Gamma(1-a)` (2% at the smallest probe), and the two
/// printed forms of that constant agree to 1e-12 through the reflection
/// formula.
pub fn check_small_time(art: &Artifacts, t_probes: &[f64]) -> Result<CheckReport> {
    let index = art.index();
    let a = index.alpha();
    let target = -1.0 / libm::tgamma(1.0 - a);
    let reflected = -libm::tgamma(a) * sin_pi(a) / PI;
    let reflection_resid = (reflected / target - 1.0).abs();

    let fhat = art.fhat();
    let mut details: Vec<(String, String)> = vec![
        ("t_probes".into(), fmt_grid(t_probes)),
        ("target".into(), format!("{target:.12}")),
        ("reflection_resid".into(), format!("{reflection_resid:.3e}")),
    ];
    let mut ratios = Vec::new();
    for &t in t_probes {
        let c = cdf_t1(index, t, 1e-11, &fhat)?.value;
        let ratio = c / t;
        details.push((format!("ratio_t{t:.0e}"), format!("{ratio:.8}")));
        ratios.push(ratio);
    }
    let last = *ratios.last().ok_or_else(|| Error::Usage("need at least one probe".into()))?;
    let mut statistic = (last / target - 1.0).abs();
    if reflection_resid > 1e-12 {
        statistic = statistic.max(1.0);
    }
    Ok(CheckReport::new("small_time", a, statistic, 0.02, details))
}

/// Convex decomposition `f_T1 = (1 - 1/a) g + (1/a) h`: pointwise equality
/// with the product form, non-negativity of `g`, and the regime statement
/// (the `g` share carries the density at 0, the `h` share at infinity,
/// with monotone crossover across the probe decades).
pub fn check_convex_decomposition(art: &Artifacts, t_grid: &[f64]) -> Result<CheckReport> {
    let index = art.index();
    let a = index.alpha();
    let b = index.beta();
    let tol = 1e-6;
    let fhat = art.fhat();
    let mut details: Vec<(String, String)> = vec![("t_grid".into(), fmt_grid(t_grid))];

    let mut resid = 0.0f64;
    let mut g_min = f64::INFINITY;
    for &t in t_grid {
        let g = density_g(index, t, GMethod::Integral, 1e-10)?;
        let h = density_h_with(index, t, 1e-10, &fhat)?;
        let p = density_t1_product_with(index, t, 1e-10, &fhat)?;
        let combo = (1.0 - b) * g.value + b * h.value;
        resid = resid.max((combo - p.value).abs());
        g_min = g_min.min(g.value);
    }
    details.push(("pointwise_resid".into(), format!("{resid:.3e}")));
    details.push(("g_min".into(), format!("{g_min:.6e}")));

    // Regime ratios across decades: the g share of the density decreases
    // monotonically from ~1 (small t) to ~0 (large t).
    let probes = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];
    let mut g_shares = Vec::new();
    for &t in &probes {
        let g = density_g(index, t, GMethod::Integral, 1e-10)?.value;
        let h = density_h_with(index, t, 1e-10, &fhat)?.value;
        let f = (1.0 - b) * g + b * h;
        let share = (1.0 - b) * g / f;
        details.push((format!("g_share_t{t:.0e}"), format!("{share:.6}")));
        g_shares.push(share);
    }
    let g_monotone = g_shares.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let g_to_one = g_shares[0] > 0.95;
    let h_to_one = g_shares[g_shares.len() - 1] < 0.05;
    details.push(("g_share_monotone".into(), g_monotone.to_string()));
    details.push(("g_share_limits_ok".into(), (g_to_one && h_to_one).to_string()));

    let mut statistic = resid / tol;
    if g_min < 0.0 {
        statistic = statistic.max(2.0);
    }
    if !(g_monotone && g_to_one && h_to_one) {
        statistic = statistic.max(2.0);
    }
    Ok(CheckReport::new("convex", a, statistic, 1.0, details))
}

/// Monte Carlo check of the survival formula for the supremum at an
/// exponential time: path suprema on a grid of the given step length
/// against `D_a(q^(1/a) x)`; tolerance `2% of the value + 3 standard
/// errors` (the grid supremum is biased low by construction).
pub fn check_wh_survival_mc(
    index: StabilityIndex,
    q: f64,
    x_grid: &[f64],
    n: usize,
    grid_step: f64,
    seed: u64,
) -> Result<CheckReport> {
    let a = index.alpha();
    let mut rng = RandomStream::new(seed, 0);
    let sups: Vec<f64> =
        (0..n).map(|_| sample_sup_at_exp_time(index, q, grid_step, &mut rng)).collect::<Result<_>>()?;
    let mut details: Vec<(String, String)> = vec![
        ("q".into(), format!("{q}")),
        ("x_grid".into(), fmt_grid(x_grid)),
        ("n".into(), n.to_string()),
        ("grid_step".into(), format!("{grid_step:.3e}")),
        ("seed".into(), seed.to_string()),
    ];
    let mut statistic = 0.0f64;
    for &x in x_grid {
        let emp = sups.iter().filter(|&&s| s >= x).count() as f64 / n as f64;
        let ana = survival_s_tau(index, q, x, 1e-11)?.value;
        let se = (emp * (1.0 - emp) / n as f64).sqrt();
        let tol = 0.02 * ana + 3.0 * se;
        let ratio = (emp - ana).abs() / tol;
        statistic = statistic.max(ratio);
        details.push((format!("x{x}"), format!("emp {emp:.5} vs {ana:.5} (tol {tol:.5})")));
    }
    Ok(CheckReport::new("wh_mc", a, statistic, 1.0, details))
}

/// Monte Carlo check of the Mittag-Leffler law of the dual supremum:
/// `E[exp(-lambda sup Xhat on [0,1])]` from grid paths against
/// `E_{1/a}(-lambda)`; tolerance `2% + 3 stderr` (discretization bias).
pub fn check_mittag_leffler_law(
    index: StabilityIndex,
    lambda: f64,
    n: usize,
    n_steps: usize,
    seed: u64,
) -> Result<CheckReport> {
    let a = index.alpha();
    let grid = PathGridSpec::new(1.0, n_steps)?;
    let mut rng = RandomStream::new(seed, 0);
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let sup = simulate_supremum(index, grid, &mut rng, PathSide::Xhat)?;
        let v = (-lambda * sup).exp();
        s1 += v;
        s2 += v * v;
    }
    let mean = s1 / n as f64;
    let se = ((s2 / n as f64 - mean * mean).max(0.0) / n as f64).sqrt();
    let target = mlf::eval_mlf(index.dual_order(), -lambda, 1e-12)?.value;
    let tol = 0.02 * target + 3.0 * se;
    let statistic = (mean - target).abs() / tol;
    Ok(CheckReport::new(
        "ml_law",
        a,
        statistic,
        1.0,
        vec![
            ("lambda".into(), format!("{lambda}")),
            ("n".into(), n.to_string()),
            ("n_steps".into(), n_steps.to_string()),
            ("seed".into(), seed.to_string()),
            ("mc_mean".into(), format!("{mean:.6}")),
            ("target".into(), format!("{target:.6}")),
            ("stderr".into(), format!("{se:.2e}")),
        ],
    ))
}

/// Sampler gates: the Kanter half-index closed-form KS test, and Monte
/// Carlo Laplace transforms of the subordinator sampler and the marginal
/// sampler against `exp(-lambda^(1/a))` and `exp(lambda^a)`.
pub fn check_sampler_gates(
    index: StabilityIndex,
    n_ks: usize,
    n_laplace: usize,
    seed: u64,
) -> Result<CheckReport> {
    let a = index.alpha();
    let mut details: Vec<(String, String)> = vec![
        ("n_ks".into(), n_ks.to_string()),
        ("n_laplace".into(), n_laplace.to_string()),
        ("seed".into(), seed.to_string()),
    ];
    let mut statistic = 0.0f64;

    // Kanter at b = 1/2 against the closed-form CDF erfc(1/(2 sqrt(t))).
    let mut rng = RandomStream::new(seed, 1);
    let values: Vec<f64> =
        (0..n_ks).map(|_| sample_positive_stable(0.5, &mut rng)).collect::<Result<_>>()?;
    let batch = SampleBatch::new(values, a, "positive_stable_half", &rng);
    let ks = ks_statistic(&batch, &|t: f64| if t <= 0.0 { 0.0 } else { libm::erfc(0.5 / t.sqrt()) })?;
    let ks_thr = ks_critical(0.05, n_ks);
    statistic = statistic.max(ks / ks_thr);
    details.push(("kanter_half_ks".into(), format!("{ks:.5e} (thr {ks_thr:.5e})")));

    // Laplace gate for the subordinator sampler.
    for (j, &lam) in [0.5f64, 1.0, 2.0].iter().enumerate() {
        let mut rng = RandomStream::new(seed, 10 + j as u64);
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for _ in 0..n_laplace {
            let v = (-lam * sample_positive_stable(index.beta(), &mut rng)?).exp();
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / n_laplace as f64;
        let se = ((s2 / n_laplace as f64 - mean * mean).max(0.0) / n_laplace as f64).sqrt();
        let want = (-lam.powf(index.beta())).exp();
        let ratio = (mean - want).abs() / (3.0 * se + 1e-12);
        statistic = statistic.max(ratio);
        details.push((format!("that1_laplace_l{lam}"), format!("{mean:.6} vs {want:.6} (se {se:.2e})")));
    }

    // Laplace gate for the marginal sampler, small lambda only (the
    // estimator variance grows quickly with lambda).
    for (j, &lam) in [0.25f64, 0.5].iter().enumerate() {
        let mut rng = RandomStream::new(seed, 20 + j as u64);
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for _ in 0..n_laplace {
            let v = (-lam * sample_x1(index, &mut rng)?).exp();
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / n_laplace as f64;
        let se = ((s2 / n_laplace as f64 - mean * mean).max(0.0) / n_laplace as f64).sqrt();
        let want = lam.powf(a).exp();
        let ratio = (mean - want).abs() / (3.0 * se + 1e-12);
        statistic = statistic.max(ratio);
        details.push((format!("x1_laplace_l{lam}"), format!("{mean:.6} vs {want:.6} (se {se:.2e})")));
    }

    Ok(CheckReport::new("sampler_gates", a, statistic, 1.0, details))
}

/// Suite-level configuration: Monte Carlo sizes, path discretization and
/// the optional tolerance override recorded in every report.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub n_mc: usize,
    pub n_paths: usize,
    pub path_steps: usize,
    pub workers: usize,
    pub tol_override: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { n_mc: 100_000, n_paths: 20_000, path_steps: 1 << 10, workers: 1, tol_override: None }
    }
}

/// All check names the suite knows, in canonical execution order.
pub const SUITE_NAMES: [&str; 11] = [
    "cm",
    "laplace",
    "thm3",
    "corollary4",
    "corollary5",
    "convex",
    "tail_constant",
    "small_time",
    "wh_mc",
    "ml_law",
    "sampler_gates",
];

fn default_x_grid() -> Vec<f64> {
    crate::grid::GridSpec::log(1e-2, 1e2, 17).unwrap().points()
}

/// Runs the named checks (or all of them) over the index list with a
/// fixed seed. Reports come back in canonical (check, alpha) order; rerun
/// with the same arguments and you get bit-identical statistics.
pub fn run_suite(
    names: &[String],
    alphas: &[f64],
    seed: u64,
    config: SuiteConfig,
) -> Result<Vec<CheckReport>> {
    let selected: Vec<&str> = if names.iter().any(|n| n == "all") {
        SUITE_NAMES.to_vec()
    } else {
        let mut v = Vec::new();
        for n in names {
            if n == "cm_alpha4" {
                v.push("cm_alpha4");
                continue;
            }
            if !SUITE_NAMES.contains(&n.as_str()) {
                return Err(Error::Usage(format!(
                    "unknown check name: {n} (known: {}, cm_alpha4, all)",
                    SUITE_NAMES.join(", ")
                )));
            }
            v.push(n.as_str());
        }
        v
    };

    let mut artifacts: Vec<(f64, Option<Artifacts>)> = Vec::new();
    for &a in alphas {
        let index = StabilityIndex::new_closed(a)?;
        let art = if a > 1.0 && a < 2.0 { Some(Artifacts::new(index)?) } else { None };
        artifacts.push((a, art));
    }

    let mut reports = Vec::new();
    for (ci, &name) in selected.iter().enumerate() {
        if name == "cm_alpha4" {
            let grid = crate::grid::GridSpec::linear(0.0, 20.0, 81).unwrap().points();
            reports.push(check_cm_alpha4_witness(&grid));
            continue;
        }
        for (ai, (a, art)) in artifacts.iter().enumerate() {
            let index = StabilityIndex::new_closed(*a)?;
            let check_seed = seed ^ ((ci as u64 + 1) << 32) ^ (ai as u64 + 1);
            let interior = art.as_ref();
            let report = match name {
                "cm" => Some(check_cm(index, &default_x_grid(), 4)?),
                "laplace" => interior
                    .map(|art| {
                        check_laplace_identities(
                            art,
                            &[(1.0, 2.0), (2.0, 2.0), (0.5, 1.0)],
                            &[0.1, 0.5, 1.0, 3.0, 10.0],
                            config.tol_override.unwrap_or(1e-6),
                        )
                    })
                    .transpose()?,
                "thm3" => interior
                    .map(|art| {
                        check_thm3(
                            art,
                            config.n_mc,
                            check_seed,
                            &crate::grid::GridSpec::log(0.5, 20.0, 7).unwrap().points(),
                        )
                    })
                    .transpose()?,
                "corollary4" => {
                    if *a < 2.0 && *a > 1.0 {
                        Some(check_corollary4(index, &[0.5, 1.0, 2.0])?)
                    } else {
                        None
                    }
                }
                "corollary5" => interior
                    .map(|art| {
                        check_corollary5(art, config.n_mc.min(10_000), &[check_seed, check_seed + 1, check_seed + 2])
                    })
                    .transpose()?,
                "convex" => interior
                    .map(|art| {
                        check_convex_decomposition(
                            art,
                            &crate::grid::GridSpec::log(1e-2, 1e2, 9).unwrap().points(),
                        )
                    })
                    .transpose()?,
                "tail_constant" => {
                    if *a == 2.0 || interior.is_some() {
                        Some(estimate_tail_constant(index, interior, &[1e2, 1e3, 1e4])?.1)
                    } else {
                        None
                    }
                }
                "small_time" => interior
                    .map(|art| check_small_time(art, &[1e-1, 1e-2, 1e-3]))
                    .transpose()?,
                "wh_mc" => {
                    if *a > 1.0 && *a < 2.0 {
                        Some(check_wh_survival_mc(
                            index,
                            1.0,
                            &[0.5, 1.0, 2.0],
                            config.n_paths,
                            1.0 / config.path_steps as f64,
                            check_seed,
                        )?)
                    } else {
                        None
                    }
                }
                "ml_law" => {
                    if *a > 1.0 && *a < 2.0 {
                        Some(check_mittag_leffler_law(index, 1.0, config.n_paths, config.path_steps, check_seed)?)
                    } else {
                        None
                    }
                }
                "sampler_gates" => {
                    if *a > 1.0 && *a < 2.0 {
                        Some(check_sampler_gates(index, config.n_mc, config.n_mc.max(200_000), check_seed)?)
                    } else {
                        None
                    }
                }
                _ => unreachable!(),
            };
            if let Some(mut r) = report {
                if let Some(t) = config.tol_override {
                    r.details.push(("tol_override".into(), format!("{t:.3e}")));
                }
                r.details.push(("workers".into(), config.workers.to_string()));
                r.details.push(("suite_seed".into(), seed.to_string()));
                reports.push(r);
            }
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_null_distribution() {
        // Draws from the reference CDF itself stay under the 1% critical
        // value (fixed seed).
        let mut rng = RandomStream::new(4242, 0);
        let n = 10_000;
        let values: Vec<f64> = (0..n).map(|_| rng.uniform_open01()).collect();
        let batch = SampleBatch::new(values, f64::NAN, "uniform", &rng);
        let d = ks_statistic(&batch, &|x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < ks_critical(0.01, n), "KS {d}");
    }

    #[test]
    fn ks_constant_batch() {
        let mut rng = RandomStream::new(1, 0);
        let _ = rng.uniform_open01();
        let batch = SampleBatch::new(vec![0.3; 1000], f64::NAN, "const", &rng);
        let d = ks_statistic(&batch, &|x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.7).abs() < 1e-9, "constant batch KS should be max(F(c), 1-F(c)) = 0.7, got {d}");
    }

    #[test]
    fn ks_detects_shift() {
        let mut rng = RandomStream::new(2, 0);
        let n = 20_000;
        let shift = 0.1;
        let values: Vec<f64> = (0..n).map(|_| rng.uniform_open01() * (1.0 - shift) + shift).collect();
        let batch = SampleBatch::new(values, f64::NAN, "shifted", &rng);
        let d = ks_statistic(&batch, &|x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - shift).abs() < 0.02, "KS {d} should be near the shift {shift}");
    }

    #[test]
    fn ks_rejects_non_monotone_cdf() {
        let mut rng = RandomStream::new(3, 0);
        let values: Vec<f64> = (0..100).map(|_| rng.uniform_open01()).collect();
        let batch = SampleBatch::new(values, f64::NAN, "x", &rng);
        let bad = |x: f64| 0.5 + 0.5 * (20.0 * x).sin();
        assert!(matches!(ks_statistic(&batch, &bad), Err(Error::Contract(_))));
    }

    #[test]
    fn cm_alpha4_finds_negativity() {
        let grid: Vec<f64> = (0..=80).map(|k| 0.25 * k as f64).collect();
        let r = check_cm_alpha4_witness(&grid);
        assert!(r.passed);
        let min_v: f64 = r.detail("min_value").unwrap().parse().unwrap();
        assert!(min_v < 0.0);
    }

    #[test]
    fn cm_boundary_indices_pass() {
        let grid = default_x_grid();
        let r = check_cm(StabilityIndex::new_closed(1.0).unwrap(), &grid, 4).unwrap();
        assert!(r.passed, "{:?}", r.details);
        let r = check_cm(StabilityIndex::new_closed(2.0).unwrap(), &grid, 4).unwrap();
        assert!(r.passed, "{:?}", r.details);
    }

    #[test]
    fn tail_constant_gaussian_closed_form() {
        let i2 = StabilityIndex::new_closed(2.0).unwrap();
        let (tc, report) = estimate_tail_constant(i2, None, &[1e2, 1e3, 1e4]).unwrap();
        assert!(report.passed, "{:?}", report.details);
        assert!((tc.kappa - 1.0 / PI.sqrt()).abs() < 1e-3);
        assert!((TailConstant::exact(2.0) - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn suite_rejects_unknown_names() {
        let err = run_suite(&["nope".to_string()], &[1.5], 1, SuiteConfig::default());
        assert!(matches!(err, Err(Error::Usage(_))));
    }
}
