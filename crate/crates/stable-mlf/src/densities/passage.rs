//! The first-passage time `T_1` of the spectrally positive stable process
//! over level 1, its convex decomposition, and the supremum laws.
//!
//! With `f_hat` the subordinator passage density and `q(u) = u^2 - 2 u cos(pi a) + 1`:
//!
//! * product form:  `f_T1(t) = int f_T(u) f_hat(t/u) du/u`  (law of `T x That1`);
//! * series form:   `f_T1(t) = sum_{n>=1} t^(1/a - n - 1) / (a Gamma(a n - 1) Gamma(1 + 1/a - n))`,
//!   well conditioned for large `t` only;
//! * convex form:   `f_T1 = (1 - 1/a) g + (1/a) h`, where
//!   `g` is the density of `Ttilde x That1` and `h` the density of
//!   `Tbar x That1`, both normalized probability densities:
//!
//!   `g(t) = 1/((a-1) pi) int_0^inf exp(-(t u - u^(1/a) cos(pi/a))) sin(u^(1/a) sin(pi/a)) du`
//!
//!   `h(t) = (-sin pi a)/pi int_0^inf f_hat(t/u) u^(1/a) / q(u) du/u`.
//!
//! `g` carries the behaviour of `f_T1` at 0 (it tends to the finite limit
//! `a Gamma(a)(-sin pi a)/((a-1) pi)` there), `h` the tail behaviour at
//! infinity. `g` also has an alternating series twin to the `f_hat` series
//! and an integral-transform representation against `f_hat`; all three are
//! implemented and cross-checked.
//!
//! The supremum at time 1 satisfies `S_1 = T_1^(-1/a)` in law, giving
//! `f_S1(x) = a x^(-a-1) f_T1(x^(-a))` and the alternating series
//! `f_S1(x) = sum_{n>=1} x^(a n - 2) / (Gamma(a n - 1) Gamma(1 + 1/a - n))`.
//!
//! The supremum at an independent exponential time `tau_q` has the closed
//! survival function `P[S_tau_q >= x] = D_a(q^(1/a) x)`.

use crate::error::{Error, Result};
use crate::index::StabilityIndex;
use crate::mlf::{self, sin_pi};
use crate::quad::{self, EvalResult, Method};
use crate::tabulate::TabulatedDensity;

use super::that1::density_that1;
use super::{AlphaContext, MixingT};

const PI: f64 = std::f64::consts::PI;

/// Representation selector for `f_T1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T1Method {
    Series,
    Product,
    Convex,
}

impl T1Method {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "series" => T1Method::Series,
            "product" => T1Method::Product,
            "convex" => T1Method::Convex,
            other => return Err(Error::Usage(format!("unknown T1 method: {other}"))),
        })
    }
}

/// Representation selector for `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GMethod {
    Integral,
    Series,
    Transform,
}

impl GMethod {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "integral" => GMethod::Integral,
            "series" => GMethod::Series,
            "transform" => GMethod::Transform,
            other => return Err(Error::Usage(format!("unknown g method: {other}"))),
        })
    }
}

/// Fast evaluator for the subordinator passage density: log-log table in
/// the bulk, two-term series beyond the right edge, exact zero below the
/// left edge (where the true value underflows). Serves as the inner
/// density of the product quadratures and the CDF tabulations, where exact
/// re-evaluation at every node would be prohibitively slow.
pub struct That1Snapshot {
    index: StabilityIndex,
    table: TabulatedDensity,
    t_hi: f64,
}

impl That1Snapshot {
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t > self.t_hi {
            // Two leading series terms; relative error ~ t^(-3/a).
            let a = self.index.alpha();
            let mut v = 0.0;
            for n in 1..=2 {
                let nf = n as f64;
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                v += sign * sin_pi(nf / a) / PI
                    * (libm::lgamma(1.0 + nf / a) - libm::lgamma(nf + 1.0)
                        + (-1.0 - nf / a) * t.ln())
                    .exp();
            }
            return v.max(0.0);
        }
        self.table.eval(t)
    }

    pub fn index(&self) -> StabilityIndex {
        self.index
    }
}

/// Builds the snapshot. Node values come from the dispatching evaluator
/// (Kanter integral below the series regime, series above).
pub fn snapshot_f_that1(index: StabilityIndex) -> Result<That1Snapshot> {
    index.require_interior()?;
    // Left edge: walk down until the density underflows for good.
    let mut t_lo = 0.5;
    for _ in 0..200 {
        let v = density_that1(index, t_lo, 1e-9)?.value;
        if v < 1e-270 {
            break;
        }
        t_lo *= 0.7;
    }
    let t_hi = 1e12;
    let f = |t: f64| density_that1(index, t, 1e-9).map(|r| r.value).unwrap_or(0.0);
    let table = TabulatedDensity::build(&f, t_lo, t_hi, 8192)?;
    Ok(That1Snapshot { index, table, t_hi })
}

fn exact_fhat(index: StabilityIndex) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            density_that1(index, t, 1e-11).map(|r| r.value).unwrap_or(0.0)
        }
    }
}

/// `g` by its non-oscillating exponential integral (the phase is
/// linearized by `u = sigma^a`, after which both exponential factors
/// decay):
///
/// `g(t) = a/((a-1) pi) int_0^inf exp(-t sigma^a + cos(pi/a) sigma) sin(sin(pi/a) sigma) sigma^(a-1) dsigma`.
pub fn density_g_integral(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if t < 0.0 {
        return Err(Error::domain("g is defined for t > 0"));
    }
    let ctx = AlphaContext::new(index);
    let a = ctx.alpha;
    let s = ctx.sin_th;
    let decay = -ctx.cos_th; // positive

    let f = |sigma: f64| {
        if sigma <= 0.0 {
            return 0.0;
        }
        let expo = -t * sigma.powf(a) + ctx.cos_th * sigma + (a - 1.0) * sigma.ln();
        expo.exp() * (s * sigma).sin()
    };
    let sigma_end = (80.0 / decay).min(if t > 0.0 { (80.0 / t).powf(1.0 / a) } else { f64::INFINITY });
    let half_period = PI / s;
    let n_panels = ((sigma_end / half_period).ceil() as usize + 2).min(20_000);
    let sum = quad::integrate_panel_sequence(
        &f,
        (0..=n_panels).map(move |k| k as f64 * half_period),
        tol.max(1e-14),
        n_panels,
    );
    let scale = a / ((a - 1.0) * PI);
    Ok(EvalResult::new(
        scale * sum.value,
        scale * (sum.abs_err + sum.max_partial * 1e-15),
        Method::PollardIntegral,
        sum.n_terms,
    ))
}

/// Limit of `g` at zero: `a Gamma(a) (-sin pi a) / ((a-1) pi)`.
pub fn density_g_at_zero(index: StabilityIndex) -> Result<f64> {
    index.require_interior()?;
    let a = index.alpha();
    Ok(a * libm::tgamma(a) * (-sin_pi(a)) / ((a - 1.0) * PI))
}

/// `g` by its alternating-in-sign series
/// `g(t) = 1/((a-1) pi) sum_{n>=1} sin(pi n/a) Gamma(1 + n/a) t^(-1-n/a) / n!`;
/// a large-`t` representation, ill-conditioned for small `t`.
pub fn density_g_series(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("the series representation of g requires t > 0"));
    }
    let a = index.alpha();
    let ln_t = t.ln();
    let sum = quad::sum_series(
        |k| {
            let n = (k + 1) as f64;
            let sp = sin_pi(n / a);
            if sp == 0.0 {
                return 0.0;
            }
            sp * (libm::lgamma(1.0 + n / a) - libm::lgamma(n + 1.0) + (-1.0 - n / a) * ln_t).exp()
        },
        tol.max(1e-15),
        quad::MAX_TERMS,
    );
    if !sum.converged || sum.ill_conditioned() {
        return Err(Error::NumericalFailure {
            context: format!(
                "series for g ill-conditioned at t = {t} (ratio {:.2e}); use the integral form",
                sum.cancellation_ratio
            ),
            partial: sum.value / ((a - 1.0) * PI),
            abs_err: sum.abs_err,
        });
    }
    let scale = 1.0 / ((a - 1.0) * PI);
    Ok(EvalResult::new(
        scale * sum.value,
        scale * (sum.abs_err + sum.eval_noise()),
        Method::Series,
        sum.n_terms,
    ))
}

/// `g` as an integral transform of the subordinator passage density:
/// `g(t) = int_0^inf f_hat(u) (-sin pi a) u / ((a-1) pi (u^2 - 2 cos(pi a) t u + t^2)) du`,
/// i.e. the multiplicative convolution of `f_hat` with the `T-tilde` law.
pub fn density_g_transform(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("g transform is defined for t > 0"));
    }
    let ctx = AlphaContext::new(index);
    let fhat = exact_fhat(index);
    let scale = ctx.msin_pa / ((ctx.alpha - 1.0) * PI);
    let g = |v: f64| {
        let u = v.exp();
        let d = u - ctx.cos_pa * t;
        let denom = d * d + (ctx.msin_pa * t) * (ctx.msin_pa * t);
        // kernel(u) * u, the Jacobian of u = exp(v) folded in.
        fhat(u) * scale * u * u / denom
    };
    let center = 0.5 * (t.max(1e-3).ln());
    let r = quad::integrate_real_line(&g, center, 1.0, 0.9, tol);
    let r = r.into_strict("g transform quadrature")?;
    Ok(EvalResult::new(r.value, r.abs_err, Method::Transform, r.n_evals))
}

/// `g` by the requested representation.
pub fn density_g(index: StabilityIndex, t: f64, method: GMethod, tol: f64) -> Result<EvalResult> {
    match method {
        GMethod::Integral => density_g_integral(index, t, tol),
        GMethod::Series => density_g_series(index, t, tol),
        GMethod::Transform => density_g_transform(index, t, tol),
    }
}

/// `g` with automatic representation choice: series where it is cheap and
/// well conditioned, integral elsewhere.
fn density_g_auto(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    if t >= 20.0 {
        if let Ok(r) = density_g_series(index, t, tol) {
            return Ok(r);
        }
    }
    density_g_integral(index, t, tol)
}

/// `h`, the density of the independent product `Tbar x That1`, evaluated
/// against a caller-supplied subordinator density (pass a snapshot for
/// fast repeated evaluation):
///
/// `h(t) = (-sin pi a)/pi int f_hat(t/u) u^(1/a - 1) / q(u) du`.
pub fn density_h_with(
    index: StabilityIndex,
    t: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("h is defined for t > 0"));
    }
    let ctx = AlphaContext::new(index);
    let scale = ctx.msin_pa / PI;
    let g = |v: f64| {
        let u = v.exp();
        fhat(t / u) * scale * u.powf(ctx.beta) / ctx.quad_form(u)
    };
    let center = t.max(0.05).ln();
    let r = quad::integrate_real_line(&g, center, 1.0, 0.9, tol);
    let r = r.into_strict("h product quadrature")?;
    Ok(EvalResult::new(r.value.max(0.0), r.abs_err, Method::ProductQuadrature, r.n_evals))
}

/// `h` with the exact (slow) inner density.
pub fn density_h(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    let fhat = exact_fhat(index);
    density_h_with(index, t, tol, &fhat)
}

/// Product form of `f_T1` against a caller-supplied subordinator density:
/// `f_T1(t) = int f_T(exp v) f_hat(t exp(-v)) dv`.
pub fn density_t1_product_with(
    index: StabilityIndex,
    t: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("f_T1 is defined for t > 0"));
    }
    let mix = MixingT::new(index)?;
    let g = |v: f64| {
        let u = v.exp();
        mix.density_unchecked(u) * fhat(t / u)
    };
    let center = t.max(1e-6).ln();
    let r = quad::integrate_real_line(&g, center, 1.0, 0.9, tol);
    let r = r.into_strict("T1 product quadrature")?;
    Ok(EvalResult::new(r.value.max(0.0), r.abs_err, Method::ProductQuadrature, r.n_evals))
}

/// Alternating series for `f_T1` (stable for large `t`; reports
/// ill-conditioning at small `t` and directs the caller to the product or
/// convex form).
pub fn density_t1_series(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("f_T1 is defined for t > 0"));
    }
    let a = index.alpha();
    let b = index.beta();
    let sin_th = sin_pi(b);
    let ln_t = t.ln();
    let sum = quad::sum_series(
        |k| {
            let n = (k + 1) as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (libm::lgamma(n - b) - libm::lgamma(a * n - 1.0) + (b - n - 1.0) * ln_t).exp()
        },
        tol.max(1e-16),
        quad::MAX_TERMS,
    );
    let scale = sin_th / (a * PI);
    if !sum.converged || sum.ill_conditioned() {
        return Err(Error::NumericalFailure {
            context: format!(
                "series for f_T1 ill-conditioned at t = {t} (ratio {:.2e}); \
                 use the product or convex form",
                sum.cancellation_ratio
            ),
            partial: scale * sum.value,
            abs_err: scale * sum.abs_err,
        });
    }
    Ok(EvalResult::new(
        scale * sum.value,
        scale * (sum.abs_err + sum.eval_noise()),
        Method::Series,
        sum.n_terms,
    ))
}

/// Convex decomposition `f_T1 = (1 - 1/a) g + (1/a) h`, with `g` and `h`
/// normalized probability densities.
pub fn density_t1_convex_with(
    index: StabilityIndex,
    t: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    let b = index.beta();
    let g = density_g_auto(index, t, tol)?;
    let h = density_h_with(index, t, tol, fhat)?;
    Ok(EvalResult::new(
        (1.0 - b) * g.value + b * h.value,
        (1.0 - b) * g.abs_err + b * h.abs_err,
        Method::ConvexCombination,
        g.n_work + h.n_work,
    ))
}

/// Gaussian-boundary closed form of `f_T1` (`alpha = 2`):
/// `exp(-1/(4t)) / (2 t sqrt(pi t))`.
pub fn density_t1_gaussian(t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::domain("f_T1 is defined for t > 0"));
    }
    Ok((-0.25 / t).exp() / (2.0 * t * (PI * t).sqrt()))
}

/// `f_T1` by the requested representation. The boundary `alpha = 2` is
/// served by the closed form whatever the method argument says.
pub fn density_t1(index: StabilityIndex, t: f64, method: T1Method, tol: f64) -> Result<EvalResult> {
    if index.is_gaussian() {
        return Ok(EvalResult::exact(density_t1_gaussian(t)?, Method::ClosedForm));
    }
    match method {
        T1Method::Series => density_t1_series(index, t, tol),
        T1Method::Product => {
            let fhat = exact_fhat(index);
            density_t1_product_with(index, t, tol, &fhat)
        }
        T1Method::Convex => {
            let fhat = exact_fhat(index);
            density_t1_convex_with(index, t, tol, &fhat)
        }
    }
}

/// Alternating series for the supremum density
/// `f_S1(x) = sum_{n>=1} x^(a n - 2) / (Gamma(a n - 1) Gamma(1 + 1/a - n))`;
/// mirror of the `f_T1` series, ill-conditioned at large `x`.
pub fn density_s1_series(index: StabilityIndex, x: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if x <= 0.0 {
        return Err(Error::domain("f_S1 is defined for x > 0"));
    }
    let a = index.alpha();
    let b = index.beta();
    let sin_th = sin_pi(b);
    let ln_x = x.ln();
    let sum = quad::sum_series(
        |k| {
            let n = (k + 1) as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (libm::lgamma(n - b) - libm::lgamma(a * n - 1.0) + (a * n - 2.0) * ln_x).exp()
        },
        tol.max(1e-16),
        quad::MAX_TERMS,
    );
    let scale = sin_th / PI;
    if !sum.converged || sum.ill_conditioned() {
        return Err(Error::NumericalFailure {
            context: format!(
                "series for f_S1 ill-conditioned at x = {x} (ratio {:.2e}); \
                 use the change-of-variables route",
                sum.cancellation_ratio
            ),
            partial: scale * sum.value,
            abs_err: scale * sum.abs_err,
        });
    }
    Ok(EvalResult::new(
        scale * sum.value,
        scale * (sum.abs_err + sum.eval_noise()),
        Method::Series,
        sum.n_terms,
    ))
}

/// `f_S1` through `S_1 = T_1^(-1/a)`: `f_S1(x) = a x^(-a-1) f_T1(x^(-a))`.
pub fn density_s1_change_of_variables(
    index: StabilityIndex,
    x: f64,
    tol: f64,
) -> Result<EvalResult> {
    if x <= 0.0 {
        return Err(Error::domain("f_S1 is defined for x > 0"));
    }
    let a = index.alpha();
    let t = x.powf(-a);
    let jac = a * x.powf(-a - 1.0);
    let inner = if index.is_gaussian() {
        EvalResult::exact(density_t1_gaussian(t)?, Method::ClosedForm)
    } else {
        let fhat = exact_fhat(index);
        density_t1_convex_with(index, t, tol / jac.max(1.0), &fhat)?
    };
    Ok(EvalResult::new(jac * inner.value, jac * inner.abs_err, inner.method, inner.n_work))
}

/// Survival function of the supremum at an independent exponential time of
/// rate `q`: `P[S_tau_q >= x] = D_a(q^(1/a) x)`, non-increasing in `x`,
/// equal to 1 at `x = 0`.
pub fn survival_s_tau(index: StabilityIndex, q: f64, x: f64, tol: f64) -> Result<EvalResult> {
    if q <= 0.0 {
        return Err(Error::domain("exponential clock rate q must be positive"));
    }
    if x < 0.0 {
        return Err(Error::domain("barrier level x must be non-negative"));
    }
    let r = mlf::eval_d(index, q.powf(index.beta()) * x, tol)?;
    Ok(EvalResult::new(r.value.clamp(0.0, 1.0), r.abs_err, r.method, r.n_work))
}

/// `P[T_1 >= t]` by quadrature of the product representation:
/// `P[T_1 >= t] = int f_hat(u) P[T > t/u] du`, with the exact asymptotic
/// continuation of `P[T > .]` doing the heavy lifting in the far tail. No
/// asymptotic constant of `T_1` itself is assumed anywhere.
pub fn survival_t1(
    index: StabilityIndex,
    t: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Ok(EvalResult::exact(1.0, Method::ProductQuadrature));
    }
    let mix = MixingT::new(index)?;
    let g = |v: f64| {
        let u = v.exp();
        let s = mix.survival(t / u).unwrap_or(0.0);
        fhat(u) * s * u
    };
    let center = 0.5 * t.max(1.0).ln();
    let r = quad::integrate_real_line(&g, center, 1.0, 0.3 * index.beta(), tol);
    let r = r.into_strict("T1 survival quadrature")?;
    Ok(EvalResult::new(
        r.value.clamp(0.0, 1.0),
        r.abs_err,
        Method::ProductQuadrature,
        r.n_evals,
    ))
}

/// `P[T_1 <= t]`: direct integration of the convex-form density for small
/// `t`, complement of the survival quadrature for large `t`.
pub fn cdf_t1(
    index: StabilityIndex,
    t: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Ok(EvalResult::exact(0.0, Method::ConvexCombination));
    }
    if t > 3.0 {
        let s = survival_t1(index, t, tol, fhat)?;
        return Ok(EvalResult::new(1.0 - s.value, s.abs_err, s.method, s.n_work));
    }
    let f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        density_t1_convex_with(index, s, tol, fhat).map(|r| r.value).unwrap_or(0.0)
    };
    let r = quad::adaptive(&f, 0.0, t, tol, 2048);
    Ok(EvalResult::new(
        r.value.clamp(0.0, 1.0),
        r.abs_err,
        Method::ConvexCombination,
        r.n_evals,
    ))
}

/// CDF of the supremum at time 1: `P[S_1 <= x] = P[T_1 >= x^(-a)]`.
pub fn cdf_s1(
    index: StabilityIndex,
    x: f64,
    tol: f64,
    fhat: &dyn Fn(f64) -> f64,
) -> Result<EvalResult> {
    if x <= 0.0 {
        return Ok(EvalResult::exact(0.0, Method::ProductQuadrature));
    }
    survival_t1(index, x.powf(-index.alpha()), tol, fhat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(a: f64) -> StabilityIndex {
        StabilityIndex::new(a).unwrap()
    }

    #[test]
    fn t1_gaussian_closed_form() {
        // exp(-1/4)/(2 sqrt(pi)) = 0.21969564473386122 at t = 1.
        let v = density_t1_gaussian(1.0).unwrap();
        assert!((v - 0.219_695_644_733_861_2).abs() < 1e-15);
        let i2 = StabilityIndex::new_closed(2.0).unwrap();
        let r = density_t1(i2, 1.0, T1Method::Series, 1e-10).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!((r.value - v).abs() < 1e-16);
    }

    #[test]
    fn g_integral_limit_at_zero() {
        for &a in &[1.2, 1.5, 1.8] {
            let i = idx(a);
            let lim = density_g_at_zero(i).unwrap();
            let near = density_g_integral(i, 1e-9, 1e-12).unwrap();
            assert!(
                (near.value - lim).abs() / lim < 1e-6,
                "alpha {a}: {} vs {lim}",
                near.value
            );
        }
    }

    #[test]
    fn g_three_representations_agree() {
        let i = idx(1.5);
        let gi = density_g_integral(i, 1.0, 1e-11).unwrap();
        let gt = density_g_transform(i, 1.0, 1e-9).unwrap();
        assert!((gi.value - gt.value).abs() < 1e-6, "integral {} transform {}", gi.value, gt.value);
        let gs = density_g_series(i, 6.0, 1e-12).unwrap();
        let gi6 = density_g_integral(i, 6.0, 1e-12).unwrap();
        assert!((gs.value - gi6.value).abs() < 1e-9, "series {} integral {}", gs.value, gi6.value);
    }

    #[test]
    fn g_series_reports_ill_conditioning_at_small_t() {
        let i = idx(1.5);
        assert!(matches!(
            density_g_series(i, 0.01, 1e-12),
            Err(Error::NumericalFailure { .. })
        ));
    }

    #[test]
    fn h_nonnegative_on_grid() {
        let i = idx(1.5);
        let snap = snapshot_f_that1(i).unwrap();
        let fhat = |t: f64| snap.eval(t);
        for k in -2..=2 {
            let t = 10f64.powi(k);
            let h = density_h_with(i, t, 1e-9, &fhat).unwrap();
            assert!(h.value >= 0.0, "h({t}) = {}", h.value);
        }
    }

    #[test]
    fn convex_equals_product_pointwise() {
        // Exact inner density on both sides; the snapshot-backed variant
        // is only KS-grade.
        let i = idx(1.5);
        for &t in &[0.3, 1.0, 4.0] {
            let c = density_t1(i, t, T1Method::Convex, 1e-9).unwrap();
            let p = density_t1(i, t, T1Method::Product, 1e-9).unwrap();
            assert!(
                (c.value - p.value).abs() < 1e-6,
                "t = {t}: convex {} product {}",
                c.value,
                p.value
            );
        }
    }

    #[test]
    fn series_equals_product_at_moderate_t() {
        let i = idx(1.5);
        let snap = snapshot_f_that1(i).unwrap();
        let fhat = |t: f64| snap.eval(t);
        for &t in &[2.0, 5.0, 20.0] {
            let s = density_t1_series(i, t, 1e-12).unwrap();
            let p = density_t1_product_with(i, t, 1e-9, &fhat).unwrap();
            assert!(
                (s.value - p.value).abs() < 1e-6,
                "t = {t}: series {} product {}",
                s.value,
                p.value
            );
        }
    }

    #[test]
    fn t1_series_directs_to_other_forms_when_ill_conditioned() {
        let i = idx(1.8);
        match density_t1_series(i, 0.001, 1e-12) {
            Err(Error::NumericalFailure { context, .. }) => {
                assert!(context.contains("product or convex"));
            }
            Ok(_) => panic!("expected ill-conditioning at tiny t"),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn s1_change_of_variables_identity_at_one() {
        // f_S1(1) = a * f_T1(1).
        let i = idx(1.5);
        let s1 = density_s1_series(i, 1.0, 1e-12).unwrap();
        let t1 = density_t1_series(i, 1.0, 1e-12).unwrap();
        assert!((s1.value - 1.5 * t1.value).abs() < 1e-10);
        let cv = density_s1_change_of_variables(i, 1.0, 1e-9).unwrap();
        assert!((s1.value - cv.value).abs() < 1e-6);
    }

    #[test]
    fn survival_s_tau_golden() {
        let i2 = StabilityIndex::new_closed(2.0).unwrap();
        let r = survival_s_tau(i2, 1.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-14);
        let i = idx(1.5);
        assert_eq!(survival_s_tau(i, 0.7, 0.0, 1e-10).unwrap().value, 1.0);
        // Scaling identity: survival(q=2, x=1) = D(2^(2/3)).
        let lhs = survival_s_tau(i, 2.0, 1.0, 1e-11).unwrap().value;
        let rhs = mlf::eval_d(i, 2f64.powf(2.0 / 3.0), 1e-11).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-11);
        assert!(survival_s_tau(i, 0.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn t1_cdf_and_survival_are_complementary() {
        let i = idx(1.5);
        let snap = snapshot_f_that1(i).unwrap();
        let fhat = |t: f64| snap.eval(t);
        for &t in &[0.5, 1.0, 2.5] {
            let c = cdf_t1(i, t, 1e-8, &fhat).unwrap().value;
            let s = survival_t1(i, t, 1e-8, &fhat).unwrap().value;
            assert!((c + s - 1.0).abs() < 1e-5, "t = {t}: {c} + {s} = {}", c + s);
        }
    }
}
