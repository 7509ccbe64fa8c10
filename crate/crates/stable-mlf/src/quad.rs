//! Error-controlled quadrature and series summation.
//!
//! The building blocks are:
//!
//! * a 15-point Gauss-Kronrod rule on compact panels with the usual
//!   `|K15 - G7|` error estimate,
//! * adaptive bisection driven by a worst-panel-first heap,
//! * endpoint substitutions for declared power singularities at 0 and for
//!   exponential or power-law decay at infinity,
//! * tolerance-driven series summation with compensated accumulation and
//!   cancellation diagnostics (alternating series of wildly growing terms
//!   are the norm in this crate, and callers switch representation based
//!   on the reported cancellation ratio).
//!
//! All routines are pure: for a fixed tolerance the same input produces the
//! same output bit-for-bit, panels are re-summed in positional order.

use crate::error::{Error, Result};

/// Hard cap on adaptive subdivisions per integral.
pub const MAX_PANELS: usize = 1 << 14;

/// Default number of series terms before giving up.
pub const MAX_TERMS: usize = 10_000;

/// Cancellation ratio above which a summation is flagged ill-conditioned.
pub const ILL_CONDITIONED_RATIO: f64 = 1e8;

/// Identifies the code path that produced a numerical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Power-series or asymptotic-series summation.
    Series,
    /// Laplace transform of a Bernstein density.
    BernsteinQuadrature,
    /// Direct evaluation of a closed-form expression.
    DirectFormula,
    /// Exact closed form (boundary cases such as alpha = 2).
    ClosedForm,
    /// Oscillatory integral representation of a stable density.
    PollardIntegral,
    /// Non-oscillatory finite-interval integral built from the Kanter
    /// auxiliary function (used where the oscillatory form cancels badly).
    KanterIntegral,
    /// Multiplicative-convolution quadrature of a product of densities.
    ProductQuadrature,
    /// Weighted combination of two density representations.
    ConvexCombination,
    /// Integral transform mapping one density representation to another.
    Transform,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::BernsteinQuadrature => "bernstein_quadrature",
            Method::DirectFormula => "direct_formula",
            Method::ClosedForm => "closed_form",
            Method::PollardIntegral => "pollard_integral",
            Method::KanterIntegral => "kanter_integral",
            Method::ProductQuadrature => "product_quadrature",
            Method::ConvexCombination => "convex_combination",
            Method::Transform => "transform",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A numerical value with its estimated absolute error, the code path that
/// produced it, and the work spent (series terms or integrand evaluations).
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub method: Method,
    pub n_work: u64,
}

impl EvalResult {
    pub fn new(value: f64, abs_err: f64, method: Method, n_work: u64) -> Self {
        EvalResult { value, abs_err, method, n_work: n_work.max(1) }
    }

    pub fn exact(value: f64, method: Method) -> Self {
        EvalResult { value, abs_err: 0.0, method, n_work: 1 }
    }
}

/// Result of one quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub n_evals: u64,
    pub converged: bool,
}

impl QuadResult {
    /// Converts a non-converged result into a hard error carrying the
    /// partial value, for callers that cannot tolerate a bad estimate.
    pub fn into_strict(self, context: &str) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NumericalFailure {
                context: context.to_string(),
                partial: self.value,
                abs_err: self.abs_err,
            })
        }
    }
}

/// Decay behaviour of an integrand on `[c, infinity)`; decides the tail
/// substitution.
#[derive(Debug, Clone, Copy)]
pub enum Decay {
    /// `|f(t)| <~ C exp(-rate t)`. Declare a conservative (small) rate if
    /// unsure; an under-declared rate only slows convergence down.
    Exponential { rate: f64 },
    /// `|f(t)| ~ C t^(-exponent)` with `exponent > 1`.
    PowerLaw { exponent: f64 },
}

/// An integrand on `(0, infinity)` together with the declarations the
/// transformation machinery needs: the power exponent `p > -1` such that
/// `f(t) ~ t^p` near 0 (0 for a regular endpoint), the decay class at
/// infinity, and an optional interior breakpoint separating head from tail.
pub struct Integrand<'a> {
    f: &'a dyn Fn(f64) -> f64,
    pub singularity_exponent: f64,
    pub decay: Decay,
    pub breakpoint: f64,
}

impl<'a> Integrand<'a> {
    pub fn new(f: &'a dyn Fn(f64) -> f64, singularity_exponent: f64, decay: Decay) -> Self {
        Integrand { f, singularity_exponent, decay, breakpoint: 1.0 }
    }

    pub fn with_breakpoint(mut self, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite());
        self.breakpoint = c;
        self
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn validate(&self) -> Result<()> {
        if self.singularity_exponent <= -1.0 {
            return Err(Error::Contract(format!(
                "declared singularity exponent {} makes the integral divergent at 0",
                self.singularity_exponent
            )));
        }
        match self.decay {
            Decay::Exponential { rate } if rate <= 0.0 => Err(Error::Contract(
                "declared exponential decay rate must be positive".into(),
            )),
            Decay::PowerLaw { exponent } if exponent <= 1.0 => Err(Error::Contract(format!(
                "declared power-law tail exponent {exponent} makes the integral divergent"
            ))),
            _ => Ok(()),
        }
    }
}

// 15-point Kronrod abscissae on [0, 1] (positive half), Gauss points at the
// odd indices. Values from the QUADPACK qk15 rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_93,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod panel evaluation: returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    // The embedded 7-point Gauss rule includes the center node.
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Adaptive Gauss-Kronrod integration of `f` over the finite interval
/// `[a, b]` to absolute tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, abs_err: 0.0, n_evals: 0, converged: true };
    }
    let (v, e) = qk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    let mut n_evals = 15u64;

    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol || panels.len() >= max_panels {
            // Positional re-sum keeps the result independent of the
            // subdivision history.
            panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
            let mut sum = Neumaier::new();
            let mut err = Neumaier::new();
            for p in &panels {
                sum.add(p.value);
                err.add(p.err);
            }
            let value = sum.value();
            return QuadResult {
                value,
                abs_err: err.value(),
                n_evals,
                converged: total_err <= tol && value.is_finite(),
            };
        }
        // Split the worst panel.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Interval no longer splittable in floating point; put it back
            // and accept whatever error it carries.
            panels.push(Panel { err: 0.0, ..p });
            continue;
        }
        let (v1, e1) = qk15(f, p.a, mid);
        let (v2, e2) = qk15(f, mid, p.b);
        n_evals += 30;
        panels.push(Panel { a: p.a, b: mid, value: v1, err: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
    }
}

/// Integrates a declared integrand over `(0, infinity)`.
///
/// The interval is split at the declared breakpoint. On the head panel a
/// substitution `t = v^(1/(1+p))` flattens the declared endpoint power
/// `t^p`; on the tail panel the substitution follows the decay class:
/// `t = c - ln(1-u)/rate` for exponential decay, `t = c/v` (plus a further
/// flattening when needed) for power-law tails.
pub fn integrate_semi_infinite(f: &Integrand<'_>, tol: f64) -> Result<QuadResult> {
    f.validate()?;
    let c = f.breakpoint;
    let half_tol = 0.5 * tol;

    // Head: [0, c].
    let p = f.singularity_exponent;
    let head = if p != 0.0 {
        let q = 1.0 / (1.0 + p);
        let vmax = c.powf(1.0 + p);
        let g = |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let t = v.powf(q);
            f.eval(t) * q * v.powf(q - 1.0)
        };
        adaptive(&g, 0.0, vmax, half_tol, MAX_PANELS / 2)
    } else {
        adaptive(&|t| f.eval(t), 0.0, c, half_tol, MAX_PANELS / 2)
    };

    // Tail: [c, infinity).
    let tail = match f.decay {
        Decay::Exponential { rate } => {
            let g = |u: f64| {
                if u >= 1.0 {
                    return 0.0;
                }
                let t = c - (1.0 - u).ln() / rate;
                f.eval(t) / (rate * (1.0 - u))
            };
            adaptive(&g, 0.0, 1.0, half_tol, MAX_PANELS / 2)
        }
        Decay::PowerLaw { exponent } => {
            // t = c/v maps the tail onto (0, 1]; the image behaves like
            // v^(exponent - 2) near v = 0, flattened like the head panel.
            let s = exponent;
            if s >= 2.0 {
                let g = |v: f64| {
                    if v <= 0.0 {
                        return 0.0;
                    }
                    let t = c / v;
                    f.eval(t) * c / (v * v)
                };
                adaptive(&g, 0.0, 1.0, half_tol, MAX_PANELS / 2)
            } else {
                let q = 1.0 / (s - 1.0);
                let g = |w: f64| {
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let v = w.powf(q);
                    let t = c / v;
                    f.eval(t) * c / (v * v) * q * w.powf(q - 1.0)
                };
                adaptive(&g, 0.0, 1.0, half_tol, MAX_PANELS / 2)
            }
        }
    };

    let value = head.value + tail.value;
    let abs_err = head.abs_err + tail.abs_err;
    Ok(QuadResult {
        value,
        abs_err,
        n_evals: head.n_evals + tail.n_evals,
        converged: head.converged && tail.converged && value.is_finite(),
    })
}

/// Numerical Laplace transform `int_0^inf exp(-s t) f(t) dt`.
///
/// The exponential factor dominates any declared tail, so the combined
/// integrand is declared with an exponential rate (capped by the factor's
/// own rate when `f` itself grows sub-exponentially).
pub fn laplace_transform_numeric(f: &Integrand<'_>, s: f64, tol: f64) -> Result<QuadResult> {
    if s <= 0.0 {
        return Err(Error::Domain(format!("Laplace variable must be positive, got {s}")));
    }
    let combined_rate = match f.decay {
        Decay::Exponential { rate } => rate + s,
        Decay::PowerLaw { .. } => s,
    };
    let h = |t: f64| (-s * t).exp() * f.eval(t);
    let g = Integrand::new(&h, f.singularity_exponent, Decay::Exponential { rate: combined_rate })
        .with_breakpoint(f.breakpoint.min(2.0 / s));
    integrate_semi_infinite(&g, tol)
}

/// Summation result with cancellation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SeriesResult {
    pub value: f64,
    pub abs_err: f64,
    pub n_terms: u64,
    pub converged: bool,
    /// Largest intermediate partial-sum magnitude (also covers the largest
    /// single term); `cancellation_ratio = max_partial / |value|`.
    pub max_partial: f64,
    pub cancellation_ratio: f64,
    /// Sum of absolute term values; the rounding floor of the result is a
    /// few units of `sum_abs * eps` however the terms were produced.
    pub sum_abs: f64,
}

impl SeriesResult {
    pub fn ill_conditioned(&self) -> bool {
        !self.cancellation_ratio.is_finite() || self.cancellation_ratio > ILL_CONDITIONED_RATIO
    }

    /// Estimated rounding noise for terms built from `exp`/`lgamma`
    /// evaluations (a handful of ulps per term).
    pub fn eval_noise(&self) -> f64 {
        self.sum_abs * 5e-15
    }

    pub fn to_quad(&self) -> QuadResult {
        QuadResult {
            value: self.value,
            abs_err: self.abs_err,
            n_evals: self.n_terms,
            converged: self.converged,
        }
    }
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Neumaier::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums `term(0), term(1), ...` until the recent terms fall below
/// `tol * |partial sum|` (three in a row, so that an incidental zero term
/// cannot stop an alternating series early), recording the cancellation
/// ratio. Terms are accumulated with compensation.
pub fn sum_series<F: Fn(usize) -> f64>(term: F, tol: f64, max_terms: usize) -> SeriesResult {
    let mut acc = Neumaier::new();
    let mut abs_acc = Neumaier::new();
    let mut max_partial = 0.0f64;
    let mut small_streak = 0;
    let mut n = 0usize;
    let mut last_term = 0.0f64;

    while n < max_terms {
        let t = term(n);
        acc.add(t);
        abs_acc.add(t.abs());
        last_term = t;
        n += 1;

        let partial = acc.value();
        max_partial = max_partial.max(partial.abs()).max(t.abs());
        if !partial.is_finite() {
            break;
        }

        let scale = partial.abs().max(f64::MIN_POSITIVE);
        if t.abs() <= tol * scale {
            small_streak += 1;
            if small_streak >= 3 && n >= 2 {
                let value = acc.value();
                let ratio = max_partial / value.abs().max(f64::MIN_POSITIVE);
                return SeriesResult {
                    value,
                    // Truncation is bounded by the last term for the
                    // (eventually) decaying series used here; rounding by
                    // the cancellation level.
                    abs_err: t.abs().max(last_term.abs()) + max_partial * f64::EPSILON,
                    n_terms: n as u64,
                    converged: true,
                    max_partial,
                    cancellation_ratio: ratio,
                    sum_abs: abs_acc.value(),
                };
            }
        } else {
            small_streak = 0;
        }
    }

    let value = acc.value();
    let ratio = max_partial / value.abs().max(f64::MIN_POSITIVE);
    SeriesResult {
        value,
        abs_err: last_term.abs() + max_partial * f64::EPSILON,
        n_terms: n as u64,
        converged: false,
        max_partial,
        cancellation_ratio: ratio,
        sum_abs: abs_acc.value(),
    }
}

/// Integrates an eventually-decaying oscillatory function by summing panel
/// integrals between the supplied consecutive boundaries (typically zeros
/// or half-periods of the oscillation). Panels are treated exactly like
/// series terms: compensated accumulation, cancellation diagnostics, and a
/// three-in-a-row smallness stopping rule.
pub fn integrate_panel_sequence<F, B>(f: &F, boundaries: B, tol: f64, max_panels: usize) -> SeriesResult
where
    F: Fn(f64) -> f64,
    B: Iterator<Item = f64>,
{
    let mut acc = Neumaier::new();
    let mut abs_acc = Neumaier::new();
    let mut max_partial = 0.0f64;
    let mut small_streak = 0;
    let mut n_panels = 0u64;
    let mut n_evals = 0u64;
    let mut err_acc = 0.0f64;
    let mut prev: Option<f64> = None;
    let mut last_panel = 0.0f64;

    for b in boundaries {
        let a = match prev {
            None => {
                prev = Some(b);
                continue;
            }
            Some(a) => a,
        };
        prev = Some(b);

        // Each inter-zero panel is smooth; a fixed-depth adaptive pass per
        // panel keeps the cost predictable.
        let r = adaptive(f, a, b, tol * 0.25, 64);
        n_evals += r.n_evals;
        n_panels += 1;
        acc.add(r.value);
        abs_acc.add(r.value.abs());
        err_acc += r.abs_err;
        last_panel = r.value;

        let partial = acc.value();
        max_partial = max_partial.max(partial.abs()).max(r.value.abs());
        if !partial.is_finite() {
            break;
        }
        let scale = partial.abs().max(f64::MIN_POSITIVE);
        if r.value.abs() <= tol * scale {
            small_streak += 1;
            if small_streak >= 3 {
                let value = acc.value();
                return SeriesResult {
                    value,
                    abs_err: r.value.abs() + err_acc + max_partial * f64::EPSILON * n_panels as f64,
                    n_terms: n_evals,
                    converged: true,
                    max_partial,
                    cancellation_ratio: max_partial / value.abs().max(f64::MIN_POSITIVE),
                    sum_abs: abs_acc.value(),
                };
            }
        } else {
            small_streak = 0;
        }
        if n_panels as usize >= max_panels {
            break;
        }
    }

    let value = acc.value();
    SeriesResult {
        value,
        abs_err: last_panel.abs() + err_acc + max_partial * f64::EPSILON * (n_panels.max(1)) as f64,
        n_terms: n_evals,
        converged: false,
        max_partial,
        cancellation_ratio: max_partial / value.abs().max(f64::MIN_POSITIVE),
        sum_abs: abs_acc.value(),
    }
}

/// Integrates `f` over the whole real line, splitting at `center`; both
/// half-lines must decay at least exponentially fast at the declared rates.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: &F,
    center: f64,
    rate_left: f64,
    rate_right: f64,
    tol: f64,
) -> QuadResult {
    let right = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let t = center - (1.0 - u).ln() / rate_right;
        f(t) / (rate_right * (1.0 - u))
    };
    let left = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let t = center + (1.0 - u).ln() / rate_left;
        f(t) / (rate_left * (1.0 - u))
    };
    let r = adaptive(&right, 0.0, 1.0, 0.5 * tol, MAX_PANELS / 2);
    let l = adaptive(&left, 0.0, 1.0, 0.5 * tol, MAX_PANELS / 2);
    let value = r.value + l.value;
    QuadResult {
        value,
        abs_err: r.abs_err + l.abs_err,
        n_evals: r.n_evals + l.n_evals,
        converged: r.converged && l.converged && value.is_finite(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_tail() {
        let f = |t: f64| (-t).exp();
        let integrand = Integrand::new(&f, 0.0, Decay::Exponential { rate: 1.0 });
        let r = integrate_semi_infinite(&integrand, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-11, "got {}", r.value);
    }

    #[test]
    fn gamma_half_with_declared_singularity() {
        // int t^(-1/2) e^(-t) dt = Gamma(1/2) = sqrt(pi)
        let f = |t: f64| t.powf(-0.5) * (-t).exp();
        let integrand = Integrand::new(&f, -0.5, Decay::Exponential { rate: 1.0 });
        let r = integrate_semi_infinite(&integrand, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn gamma_golden_set_within_1e10() {
        // Honest error estimates on the golden set: true error below the
        // reported bound and below 1e-10.
        for &a in &[0.5f64, 1.0, 1.5, 2.5] {
            let f = move |t: f64| t.powf(a - 1.0) * (-t).exp();
            let integrand = Integrand::new(&f, a - 1.0, Decay::Exponential { rate: 1.0 });
            let r = integrate_semi_infinite(&integrand, 1e-12).unwrap();
            let truth = libm::tgamma(a);
            assert!(r.converged, "a = {a}");
            assert!((r.value - truth).abs() < 1e-10, "a = {a}: {} vs {truth}", r.value);
            assert!((r.value - truth).abs() <= r.abs_err.max(5e-14), "error estimate not honest at a = {a}");
        }
    }

    #[test]
    fn power_law_tail() {
        // int_0^inf dt/(1+t)^3 = 1/2; tail exponent 3.
        let f = |t: f64| (1.0 + t).powi(-3);
        let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 3.0 });
        let r = integrate_semi_infinite(&integrand, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-11);
    }

    #[test]
    fn heavy_power_law_tail() {
        // int_0^inf dt/(1+t)^(3/2) = 2; tail exponent 1.5 < 2 exercises the
        // extra flattening branch.
        let f = |t: f64| (1.0 + t).powf(-1.5);
        let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 1.5 });
        let r = integrate_semi_infinite(&integrand, 1e-11).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn splitting_invariance() {
        let f = |t: f64| t * (-t).exp();
        for &c in &[0.25f64, 1.0, 4.0, 10.0] {
            let integrand =
                Integrand::new(&f, 0.0, Decay::Exponential { rate: 1.0 }).with_breakpoint(c);
            let r = integrate_semi_infinite(&integrand, 1e-11).unwrap();
            assert!((r.value - 1.0).abs() < 2e-11, "breakpoint {c}: {}", r.value);
        }
    }

    #[test]
    fn laplace_of_constant() {
        let f = |_t: f64| 1.0;
        let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 2.0 });
        // Declared decay is irrelevant: the transform kernel dominates.
        let r = laplace_transform_numeric(&integrand, 2.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-11);
    }

    #[test]
    fn series_geometric() {
        let r = sum_series(|n| 0.5f64.powi(n as i32), 1e-14, 1000);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-13);
        assert!(r.cancellation_ratio < 1.5);
    }

    #[test]
    fn series_alternating_inverse_e() {
        let r = sum_series(
            |n| {
                let mut t = 1.0f64;
                for k in 1..=n {
                    t *= -1.0 / k as f64;
                }
                t
            },
            1e-15,
            200,
        );
        assert!(r.converged);
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-14);
        assert!(r.cancellation_ratio > 1.0);
    }

    #[test]
    fn series_budget_exhaustion_flagged() {
        let r = sum_series(|n| 1.0 / (1.0 + n as f64), 1e-15, 50);
        assert!(!r.converged);
    }

    #[test]
    fn oscillatory_panel_sum() {
        // int_0^inf exp(-t/10) sin(t) dt = 1/(1 + 1/100) * ... = 100/101.
        let f = |t: f64| (-t / 10.0).exp() * t.sin();
        let pi = std::f64::consts::PI;
        let r = integrate_panel_sequence(&f, (0..4000).map(|k| k as f64 * pi), 1e-12, 4000);
        assert!(r.converged);
        let truth = 1.0 / (1.0 + 0.01);
        assert!((r.value - truth).abs() < 1e-10, "got {} want {truth}", r.value);
    }

    #[test]
    fn real_line_gaussian() {
        let f = |t: f64| (-0.5 * t * t).exp();
        let r = integrate_real_line(&f, 0.0, 0.5, 0.5, 1e-12);
        assert!(r.converged);
        assert!((r.value - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }
}
