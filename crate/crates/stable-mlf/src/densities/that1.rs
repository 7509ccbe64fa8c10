//! Density and CDF of the subordinator passage time: the positive
//! `1/alpha`-stable variable with Laplace transform `exp(-lambda^(1/alpha))`.
//!
//! Three representations, each stable in a different regime:
//!
//! * the oscillatory integral
//!   `f(t) = (1/pi) int_0^inf exp(-(t u + u^(1/a) cos(pi/a))) sin(u^(1/a) sin(pi/a)) du`,
//!   usable for moderate and large `t` (for `a` in (1, 2) the factor
//!   `cos(pi/a)` is negative, so the integrand grows before it decays and
//!   the representation cancels itself to death at small `t`);
//! * the alternating large-`t` series
//!   `f(t) = sum_{n>=1} (-1)^n t^(-1-n/a) / (Gamma(-n/a) n!)`;
//! * a non-oscillatory finite integral built from the Kanter auxiliary
//!   function `A(u)`: with `r = b/(1-b)`, `b = 1/a`,
//!   `f(t) = r t^(-1-r) (1/pi) int_0^pi A(u) exp(-A(u) t^(-r)) du`,
//!   positive integrand, stable down to arbitrarily small `t`.
//!
//! The same `A(u)` drives the exact Kanter sampler, and gives the CDF in
//! closed integral form: `F(t) = (1/pi) int_0^pi exp(-A(u) t^(-r)) du`.

use crate::error::{Error, Result};
use crate::index::StabilityIndex;
use crate::mlf::sin_pi;
use crate::quad::{self, EvalResult, Method, SeriesResult};

use super::AlphaContext;

const PI: f64 = std::f64::consts::PI;

/// `ln A(u)` for the Kanter auxiliary function of a positive `b`-stable
/// variable (`0 < b < 1`, `0 < u < pi`):
///
/// `A(u) = sin(b u)^(b/(1-b)) sin((1-b) u) / sin(u)^(1/(1-b))`.
pub fn kanter_ln_a(b: f64, u: f64) -> f64 {
    let omb = 1.0 - b;
    (b / omb) * (b * u).sin().ln() + (omb * u).sin().ln() - (u.sin().ln()) / omb
}

/// Density of the positive `b`-stable variable by the Kanter-function
/// integral, for any `b` in (0, 1); works for every `t > 0` (returns 0
/// where the true value underflows double precision).
pub(crate) fn stable_density_kanter_raw(b: f64, t: f64, tol: f64) -> Result<EvalResult> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("stable index must lie in (0,1), got {b}")));
    }
    if t <= 0.0 {
        return Err(Error::domain("density is defined for t > 0"));
    }
    let r = b / (1.0 - b);
    let y = t.powf(-r);
    let ln_y = y.ln();
    let prefactor = r * t.powf(-1.0 - r) / PI;

    let g = |u: f64| {
        if u <= 0.0 || u >= PI {
            return 0.0;
        }
        let ln_a = kanter_ln_a(b, u);
        // A * exp(-A y) computed in log space; overflow of A y simply
        // drives the factor to zero.
        let ay = (ln_a + ln_y).exp();
        (ln_a - ay).exp()
    };
    let rel_scale = (prefactor).min(1.0).max(1e-300);
    let q = quad::adaptive(&g, 0.0, PI, (tol / rel_scale).min(1e-8).max(1e-14), 2048);
    let value = prefactor * q.value;
    if !q.converged && value > tol {
        return Err(Error::NumericalFailure {
            context: format!("Kanter integral for subordinator density at t = {t}"),
            partial: value,
            abs_err: prefactor * q.abs_err,
        });
    }
    Ok(EvalResult::new(value.max(0.0), prefactor * q.abs_err, Method::KanterIntegral, q.n_evals))
}

/// Subordinator passage density by the Kanter-function integral.
pub fn density_that1_kanter(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    stable_density_kanter_raw(index.beta(), t, tol)
}

/// CDF of the subordinator passage time by the same finite integral.
pub fn cdf_that1(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    if t <= 0.0 {
        return Ok(EvalResult::exact(0.0, Method::KanterIntegral));
    }
    let b = index.beta();
    let r = b / (1.0 - b);
    let ln_y = -r * t.ln();
    let g = |u: f64| {
        if u <= 0.0 || u >= PI {
            return 0.0;
        }
        let ay = (kanter_ln_a(b, u) + ln_y).exp();
        (-ay).exp()
    };
    let q = quad::adaptive(&g, 0.0, PI, tol.max(1e-13), 2048);
    Ok(EvalResult::new(
        (q.value / PI).clamp(0.0, 1.0),
        q.abs_err / PI,
        Method::KanterIntegral,
        q.n_evals,
    ))
}

/// Density by the oscillatory integral representation, with the phase
/// linearized by the substitution `u = sigma^alpha`:
///
/// `f(t) = (a/pi) int_0^inf exp(-t sigma^a - cos(pi/a) sigma) sin(sin(pi/a) sigma) sigma^(a-1) dsigma`.
///
/// Panels run between consecutive zeros of the sine factor and are summed
/// with cancellation diagnostics; at small `t` the representation is
/// honestly reported as ill-conditioned rather than silently wrong.
pub fn density_that1_integral(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    let (r, diag) = density_that1_integral_diag(index, t, tol)?;
    if diag.ill_conditioned() {
        return Err(Error::NumericalFailure {
            context: format!(
                "oscillatory integral for subordinator density cancels beyond tolerance at t = {t} \
                 (cancellation ratio {:.2e})",
                diag.cancellation_ratio
            ),
            partial: r.value,
            abs_err: r.abs_err,
        });
    }
    Ok(r)
}

pub(crate) fn density_that1_integral_diag(
    index: StabilityIndex,
    t: f64,
    tol: f64,
) -> Result<(EvalResult, SeriesResult)> {
    index.require_interior()?;
    if t <= 0.0 {
        return Err(Error::domain("density is defined for t > 0"));
    }
    let ctx = AlphaContext::new(index);
    let a = ctx.alpha;
    let grow = -ctx.cos_th; // positive: the exponential growth rate in sigma
    let s = ctx.sin_th;

    let f = |sigma: f64| {
        if sigma <= 0.0 {
            return 0.0;
        }
        // exp(-(t u + u^(1/a) cos(pi/a))) with u = sigma^a; the cosine is
        // negative on (1, 2), so this factor grows before the t-term wins.
        let expo = -t * sigma.powf(a) - ctx.cos_th * sigma + (a - 1.0) * sigma.ln();
        expo.exp() * (s * sigma).sin()
    };
    // Envelope maximum and the point where it has fallen ~70 logs below it
    // bound the panel range.
    let sigma_star = (grow / (t * a)).powf(1.0 / (a - 1.0));
    let mut sigma_end = 2.0 * sigma_star + 5.0;
    while -t * sigma_end.powf(a) + grow * sigma_end
        > -t * sigma_star.powf(a) + grow * sigma_star - 70.0
    {
        sigma_end *= 1.5;
        if sigma_end > 1e8 {
            break;
        }
    }
    let half_period = PI / s;
    let n_panels = ((sigma_end / half_period).ceil() as usize + 2).min(20_000);
    let boundaries = (0..=n_panels).map(move |k| k as f64 * half_period);

    let sum = quad::integrate_panel_sequence(&f, boundaries, tol.max(1e-14), n_panels);
    let scale = a / PI;
    let value = scale * sum.value;
    let result = EvalResult::new(
        value,
        scale * sum.abs_err + sum.max_partial * scale * 1e-15,
        Method::PollardIntegral,
        sum.n_terms,
    );
    Ok((result, sum))
}

/// Positive `b`-stable density by the alternating large-`t` series, with
/// diagnostics.
///
/// Terms are `(-1)^(n+1) sin(pi n b) Gamma(1 + n b) t^(-1-n b) / (pi n!)`,
/// which is `(-1)^n t^(-1-n b) / (Gamma(-n b) n!)` with the reciprocal
/// Gamma opened up by the reflection formula (the poles at integer `n b`
/// then cancel explicitly instead of through an infinity).
pub(crate) fn stable_density_series_raw(
    b: f64,
    t: f64,
    tol: f64,
) -> Result<(EvalResult, SeriesResult)> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("stable index must lie in (0,1), got {b}")));
    }
    if t <= 0.0 {
        return Err(Error::domain("density is defined for t > 0"));
    }
    let ln_t = t.ln();
    let sum = quad::sum_series(
        |k| {
            let n = (k + 1) as f64;
            let sp = sin_pi(n * b);
            if sp == 0.0 {
                return 0.0;
            }
            let ln_mag = libm::lgamma(1.0 + n * b) - libm::lgamma(n + 1.0) + (-1.0 - n * b) * ln_t;
            let sign = if (k + 1) % 2 == 1 { 1.0 } else { -1.0 };
            sign * sp * ln_mag.exp() / PI
        },
        tol.max(1e-15),
        quad::MAX_TERMS,
    );
    if !sum.converged {
        return Err(Error::NumericalFailure {
            context: format!("positive-stable density series at t = {t}"),
            partial: sum.value,
            abs_err: sum.abs_err,
        });
    }
    let r = EvalResult::new(sum.value, sum.abs_err + sum.eval_noise(), Method::Series, sum.n_terms);
    Ok((r, sum))
}

/// Subordinator passage density series (`b = 1/alpha`), with diagnostics.
pub fn density_that1_series_diag(
    index: StabilityIndex,
    t: f64,
    tol: f64,
) -> Result<(EvalResult, SeriesResult)> {
    index.require_interior()?;
    stable_density_series_raw(index.beta(), t, tol)
}

/// Density by the alternating series (large-`t` representation).
pub fn density_that1_series(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    let (r, diag) = density_that1_series_diag(index, t, tol)?;
    if diag.ill_conditioned() {
        return Err(Error::NumericalFailure {
            context: format!(
                "subordinator density series ill-conditioned at t = {t} (ratio {:.2e})",
                diag.cancellation_ratio
            ),
            partial: r.value,
            abs_err: r.abs_err,
        });
    }
    Ok(r)
}

/// Workhorse evaluation of the positive `b`-stable density: the series
/// where it is well conditioned (large `t`), the Kanter integral
/// elsewhere.
pub(crate) fn stable_density_auto(b: f64, t: f64, tol: f64) -> Result<EvalResult> {
    if t <= 0.0 {
        return Err(Error::domain("density is defined for t > 0"));
    }
    if t >= 1.5 {
        if let Ok((r, diag)) = stable_density_series_raw(b, t, tol) {
            if !diag.ill_conditioned() && r.abs_err <= tol {
                return Ok(r);
            }
        }
    }
    stable_density_kanter_raw(b, t, tol)
}

/// Workhorse evaluation of the subordinator passage density, used as the
/// inner density in every product quadrature.
pub fn density_that1(index: StabilityIndex, t: f64, tol: f64) -> Result<EvalResult> {
    index.require_interior()?;
    stable_density_auto(index.beta(), t, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{Decay, Integrand};

    fn idx(a: f64) -> StabilityIndex {
        StabilityIndex::new(a).unwrap()
    }

    #[test]
    fn representations_agree_in_overlap() {
        for &a in &[1.2, 1.5, 1.8] {
            let i = idx(a);
            for &t in &[0.8, 1.2, 2.0, 3.0] {
                let k = density_that1_kanter(i, t, 1e-11).unwrap();
                let p = density_that1_integral(i, t, 1e-11).unwrap();
                assert!(
                    (k.value - p.value).abs() < 1e-8,
                    "alpha {a} t {t}: kanter {} pollard {}",
                    k.value,
                    p.value
                );
            }
            for &t in &[2.0, 5.0, 10.0] {
                let k = density_that1_kanter(i, t, 1e-11).unwrap();
                let s = density_that1_series(i, t, 1e-11).unwrap();
                assert!(
                    (k.value - s.value).abs() < 1e-9,
                    "alpha {a} t {t}: kanter {} series {}",
                    k.value,
                    s.value
                );
            }
        }
    }

    #[test]
    fn series_vs_integral_at_two() {
        let i = idx(1.5);
        let s = density_that1_series(i, 2.0, 1e-12).unwrap();
        let p = density_that1_integral(i, 2.0, 1e-12).unwrap();
        assert!((s.value - p.value).abs() < 1e-8);
    }

    #[test]
    fn series_leading_term_sign_and_conditioning() {
        let i = idx(1.5);
        let (r, diag) = density_that1_series_diag(i, 10.0, 1e-12).unwrap();
        assert!(r.value > 0.0);
        assert!(diag.cancellation_ratio < 10.0, "ratio {}", diag.cancellation_ratio);
        // Leading coefficient -1/Gamma(-1/alpha) > 0; the next term is an
        // O(t^(-1/alpha)) relative correction, so compare two-term.
        let b = 1.0 / 1.5;
        let t: f64 = 10.0;
        let lead = -1.0 / libm::tgamma(-b) * t.powf(-1.0 - b);
        assert!(lead > 0.0);
        let second = 0.5 / libm::tgamma(-2.0 * b) * t.powf(-1.0 - 2.0 * b);
        assert!((r.value - (lead + second)).abs() / lead < 0.02, "{} vs {}", r.value, lead + second);
    }

    #[test]
    fn laplace_transform_is_exp_of_root() {
        // int exp(-t) f(t) dt = exp(-1) at alpha = 3/2.
        let i = idx(1.5);
        let f = |t: f64| density_that1(i, t, 1e-11).map(|r| r.value).unwrap_or(0.0);
        let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 1.0 + 1.0 / 1.5 });
        let r = quad::laplace_transform_numeric(&integrand, 1.0, 1e-9).unwrap();
        assert!(
            (r.value - (-1.0f64).exp()).abs() < 1e-7,
            "got {} want {}",
            r.value,
            (-1.0f64).exp()
        );
    }

    #[test]
    fn normalizes_to_one() {
        let i = idx(1.5);
        let f = |t: f64| density_that1(i, t, 1e-11).map(|r| r.value).unwrap_or(0.0);
        let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 1.0 + 1.0 / 1.5 });
        let r = quad::integrate_semi_infinite(&integrand, 1e-8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "mass {}", r.value);
    }

    #[test]
    fn cdf_monotone_and_normalized() {
        let i = idx(1.3);
        let mut prev = 0.0;
        for &t in &[0.05, 0.2, 0.5, 1.0, 2.0, 8.0, 50.0, 1e4] {
            let c = cdf_that1(i, t, 1e-11).unwrap().value;
            assert!(c >= prev, "cdf not monotone at {t}");
            prev = c;
        }
        assert!(prev > 0.99);
    }

    #[test]
    fn small_t_ill_conditioning_reported() {
        let i = idx(1.2);
        match density_that1_integral(i, 0.05, 1e-12) {
            Err(Error::NumericalFailure { .. }) => {}
            Ok(r) => {
                // If it converged, it must agree with the Kanter value.
                let k = density_that1_kanter(i, 0.05, 1e-12).unwrap();
                assert!((r.value - k.value).abs() < 1e-6);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
