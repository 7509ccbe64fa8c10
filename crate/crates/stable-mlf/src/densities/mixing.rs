//! The three mixing laws of the product factorizations, all supported on
//! `(0, inf)` for `alpha` strictly inside (1, 2):
//!
//! * `T`:       `f_T(t) = (-sin pi a)(1 + t^(1/a)) / (pi a (t^2 - 2 t cos pi a + 1))`
//! * `T-bar`:   `f(u) = (-sin pi a) u^(1/a) / (pi (u^2 - 2 u cos pi a + 1))`
//! * `T-tilde`: `f(u) = (-sin pi a) / ((a-1) pi (u^2 - 2 u cos pi a + 1))`
//!
//! `T-tilde` has closed-form CDF and quantile (arctangent); `T` and `T-bar`
//! get their CDFs from quadrature plus an exact asymptotic continuation of
//! `int u^(1/a) / (u^2 - 2 u cos pi a + 1) du` built on the Chebyshev
//! expansion `1/(u^2 - 2 c u + 1) = sum_k U_k(c) u^(-2-k)`.

use crate::error::{Error, Result};
use crate::index::StabilityIndex;
use crate::quad;

use super::AlphaContext;

const PI: f64 = std::f64::consts::PI;

/// Quadrature-to-asymptote crossover for the survival integrals.
const TAIL_CROSSOVER: f64 = 50.0;

/// `int_x^inf u^(1/a) / (u^2 - 2 c u + 1) du` for `x >= TAIL_CROSSOVER`,
/// summed from the Chebyshev-coefficient expansion; converges like
/// `(k/x)^k`.
fn tail_integral_series(beta: f64, c: f64, x: f64) -> f64 {
    let mut u_prev = 1.0; // U_0(c)
    let mut u_curr = 2.0 * c; // U_1(c)
    let mut acc = quad::Neumaier::new();
    let mut power = x.powf(beta - 1.0); // x^(1/a - 1 - k) for k = 0
    acc.add(u_prev * power / (1.0 - beta));
    for k in 1..60 {
        power /= x;
        acc.add(u_curr * power / (k as f64 + 1.0 - beta));
        let next = 2.0 * c * u_curr - u_prev;
        u_prev = u_curr;
        u_curr = next;
    }
    acc.value()
}

/// The mixing variable `T`, with density, CDF, survival and the constants
/// of both tails.
#[derive(Debug, Clone, Copy)]
pub struct MixingT {
    ctx: AlphaContext,
}

impl MixingT {
    pub fn new(index: StabilityIndex) -> Result<Self> {
        index.require_interior()?;
        Ok(MixingT { ctx: AlphaContext::new(index) })
    }

    pub fn alpha(&self) -> f64 {
        self.ctx.alpha
    }

    #[inline]
    pub fn density(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::domain("f_T is defined for t > 0"));
        }
        Ok(self.density_unchecked(t))
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let c = &self.ctx;
        c.msin_pa * (1.0 + t.powf(c.beta)) / (PI * c.alpha * c.quad_form(t))
    }

    /// Density value at the origin, `(-sin pi a) / (pi a)`: the slope of
    /// the CDF for small `t`.
    pub fn density_at_zero(&self) -> f64 {
        self.ctx.msin_pa / (PI * self.ctx.alpha)
    }

    /// Leading survival coefficient: `P[T > t] ~ c t^(1/a - 1)`.
    pub fn tail_coefficient(&self) -> f64 {
        self.ctx.msin_pa / (PI * (self.ctx.alpha - 1.0))
    }

    /// `int_0^t du / (u^2 - 2 c u + 1)` in closed form.
    fn rational_cdf_piece(&self, t: f64) -> f64 {
        let (c, s) = (self.ctx.cos_pa, self.ctx.msin_pa);
        (((t - c) / s).atan() - (-c / s).atan()) / s
    }

    fn rational_tail_piece(&self, t: f64) -> f64 {
        let (c, s) = (self.ctx.cos_pa, self.ctx.msin_pa);
        (0.5 * PI - ((t - c) / s).atan()) / s
    }

    /// `int_t^inf u^(1/a) / quad_form(u) du`, quadrature up to the
    /// crossover and exact expansion beyond it.
    fn power_tail_piece(&self, t: f64) -> f64 {
        let (b, c) = (self.ctx.beta, self.ctx.cos_pa);
        if t >= TAIL_CROSSOVER {
            return tail_integral_series(b, c, t);
        }
        let f = |u: f64| u.powf(b) / self.ctx.quad_form(u);
        let head = quad::adaptive(&f, t, TAIL_CROSSOVER, 1e-13, 2048);
        head.value + tail_integral_series(b, c, TAIL_CROSSOVER)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::domain("cdf_T is defined for t >= 0"));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok((1.0 - self.survival(t)?).clamp(0.0, 1.0))
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::domain("survival is defined for t >= 0"));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let c = &self.ctx;
        let v = c.msin_pa / (PI * c.alpha) * (self.rational_tail_piece(t) + self.power_tail_piece(t));
        Ok(v.clamp(0.0, 1.0))
    }

    /// CDF by direct integration from zero; used to cross-check the
    /// survival route (`cdf + survival = 1`).
    pub fn cdf_from_zero(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::domain("cdf_T is defined for t >= 0"));
        }
        let c = &self.ctx;
        let hi = t.min(TAIL_CROSSOVER);
        let f = |u: f64| u.powf(c.beta) / c.quad_form(u);
        let mut power_piece = quad::adaptive(&f, 0.0, hi, 1e-13, 2048).value;
        if t > TAIL_CROSSOVER {
            power_piece +=
                tail_integral_series(c.beta, c.cos_pa, TAIL_CROSSOVER) - tail_integral_series(c.beta, c.cos_pa, t);
        }
        Ok((c.msin_pa / (PI * c.alpha) * (self.rational_cdf_piece(t) + power_piece)).clamp(0.0, 1.0))
    }
}

/// The mixing law `T-bar` (density `~ u^(1/a)` at zero, survival tail
/// exponent `1 - 1/a`).
#[derive(Debug, Clone, Copy)]
pub struct Tbar {
    ctx: AlphaContext,
}

impl Tbar {
    pub fn new(index: StabilityIndex) -> Result<Self> {
        index.require_interior()?;
        Ok(Tbar { ctx: AlphaContext::new(index) })
    }

    #[inline]
    pub fn density(&self, u: f64) -> Result<f64> {
        if u <= 0.0 {
            return Err(Error::domain("f_Tbar is defined for u > 0"));
        }
        Ok(self.density_unchecked(u))
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let c = &self.ctx;
        c.msin_pa * u.powf(c.beta) / (PI * c.quad_form(u))
    }

    /// CDF left-tail exponent (`F ~ c u^(1 + 1/a)` near 0).
    pub fn left_exponent(&self) -> f64 {
        1.0 + self.ctx.beta
    }

    /// Survival right-tail exponent (`1 - F ~ c u^(-(1 - 1/a))`).
    pub fn right_exponent(&self) -> f64 {
        1.0 - self.ctx.beta
    }
}

/// The mixing law `T-tilde`, fully closed form.
#[derive(Debug, Clone, Copy)]
pub struct Ttilde {
    ctx: AlphaContext,
    /// `atan(cos pi a / (-sin pi a))`, the CDF phase at zero.
    phase0: f64,
}

impl Ttilde {
    pub fn new(index: StabilityIndex) -> Result<Self> {
        index.require_interior()?;
        let ctx = AlphaContext::new(index);
        let phase0 = (ctx.cos_pa / ctx.msin_pa).atan();
        Ok(Ttilde { ctx, phase0 })
    }

    #[inline]
    pub fn density(&self, u: f64) -> Result<f64> {
        if u <= 0.0 {
            return Err(Error::domain("f_Ttilde is defined for u > 0"));
        }
        Ok(self.density_unchecked(u))
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let c = &self.ctx;
        c.msin_pa / ((c.alpha - 1.0) * PI * c.quad_form(u))
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let c = &self.ctx;
        ((((t - c.cos_pa) / c.msin_pa).atan() + self.phase0) / ((c.alpha - 1.0) * PI))
            .clamp(0.0, 1.0)
    }

    /// Exact inverse CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        debug_assert!(p > 0.0 && p < 1.0);
        let c = &self.ctx;
        let angle = (c.alpha - 1.0) * PI * p - self.phase0;
        (c.cos_pa + c.msin_pa * angle.tan()).max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{Decay, Integrand};

    fn idx(a: f64) -> StabilityIndex {
        StabilityIndex::new(a).unwrap()
    }

    #[test]
    fn t_density_point_value() {
        // alpha = 3/2, t = 1: sin(3 pi/2) = -1, cos = 0:
        // f_T(1) = (1)(1 + 1)/(pi (3/2)(1 - 0 + 1)) = 2/(3 pi).
        let t = MixingT::new(idx(1.5)).unwrap();
        assert!((t.density(1.0).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(t.density(0.0).is_err());
    }

    #[test]
    fn t_density_normalizes() {
        for &a in &[1.25, 1.5, 1.8] {
            let t = MixingT::new(idx(a)).unwrap();
            let f = |u: f64| t.density_unchecked(u);
            let integrand = Integrand::new(&f, 0.0, Decay::PowerLaw { exponent: 2.0 - 1.0 / a });
            let r = quad::integrate_semi_infinite(&integrand, 1e-10).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "alpha {a}: mass {}", r.value);
        }
    }

    #[test]
    fn t_tail_matches_closed_coefficient() {
        // (1 - cdf)(t) * t^(1 - 1/a) -> (-sin pi a)/(pi (a - 1)) = 2/pi at a = 3/2.
        let t = MixingT::new(idx(1.5)).unwrap();
        assert!((t.tail_coefficient() - 2.0 / PI).abs() < 1e-14);
        let s = t.survival(1e6).unwrap();
        let scaled = s * 1e6f64.powf(1.0 - 1.0 / 1.5);
        assert!(
            (scaled - t.tail_coefficient()).abs() / t.tail_coefficient() < 0.01,
            "scaled {scaled}"
        );
    }

    #[test]
    fn t_cdf_and_survival_are_complementary() {
        let t = MixingT::new(idx(1.3)).unwrap();
        for &x in &[0.01, 0.5, 1.0, 10.0, 200.0] {
            let c = t.cdf_from_zero(x).unwrap();
            let s = t.survival(x).unwrap();
            assert!((c + s - 1.0).abs() < 1e-9, "x = {x}: {c} + {s}");
        }
    }

    #[test]
    fn t_small_slope() {
        // cdf_T(s)/s -> f_T(0) = (-sin pi a)/(pi a) = 2/(3 pi) at a = 3/2;
        // the first correction is the s^(1/a)/(1 + 1/a) term from the
        // numerator power.
        let t = MixingT::new(idx(1.5)).unwrap();
        let s: f64 = 1e-7;
        let slope = t.cdf(s).unwrap() / s;
        let f0 = 2.0 / (3.0 * PI);
        let corrected = f0 * (1.0 + s.powf(2.0 / 3.0) / (1.0 + 2.0 / 3.0));
        assert!((slope - corrected).abs() < 1e-4 * f0, "slope {slope} vs {corrected}");
        assert!((t.density_at_zero() - f0).abs() < 1e-15);
    }

    #[test]
    fn tbar_and_ttilde_point_values() {
        // alpha = 3/2, u = 1: f_Tbar(1) = 1/(2 pi), f_Ttilde(1) = 1/pi.
        let tb = Tbar::new(idx(1.5)).unwrap();
        let tt = Ttilde::new(idx(1.5)).unwrap();
        assert!((tb.density(1.0).unwrap() - 0.5 / PI).abs() < 1e-14);
        assert!((tt.density(1.0).unwrap() - 1.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn tbar_ttilde_normalize() {
        for &a in &[1.3, 1.5, 1.8] {
            let tb = Tbar::new(idx(a)).unwrap();
            let f = |u: f64| tb.density_unchecked(u);
            let integrand =
                Integrand::new(&f, 1.0 / a, Decay::PowerLaw { exponent: 2.0 - 1.0 / a });
            let r = quad::integrate_semi_infinite(&integrand, 1e-10).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "Tbar alpha {a}: {}", r.value);

            let tt = Ttilde::new(idx(a)).unwrap();
            let g = |u: f64| tt.density_unchecked(u);
            let integrand = Integrand::new(&g, 0.0, Decay::PowerLaw { exponent: 2.0 });
            let r = quad::integrate_semi_infinite(&integrand, 1e-10).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "Ttilde alpha {a}: {}", r.value);
            // Closed-form CDF agrees with its own density's integral.
            assert!((tt.cdf(1e9) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn ttilde_quantile_inverts_cdf() {
        let tt = Ttilde::new(idx(1.4)).unwrap();
        for &p in &[1e-6, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-6] {
            let t = tt.quantile(p);
            assert!((tt.cdf(t) - p).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn rejects_boundary_alpha() {
        assert!(MixingT::new(StabilityIndex::new_closed(2.0).unwrap()).is_err());
        assert!(Tbar::new(StabilityIndex::new_closed(1.0).unwrap()).is_err());
        assert!(Ttilde::new(StabilityIndex::new_closed(2.0).unwrap()).is_err());
    }
}
