//! Tabulated CDFs and densities on logarithmic grids with analytic
//! power-law tail completion.
//!
//! Tables serve the samplers (inverse-CDF draws) and the Kolmogorov-Smirnov
//! oracles, which need ~1e-4 pointwise accuracy at ~1e5 evaluations. The
//! deterministic identity checks never go through tables; they integrate
//! densities directly at their stated tolerances.

use crate::error::{Error, Result};
use crate::quad;

/// Declared tail behaviour: `F(t) ~ c t^exponent` on the left,
/// `1 - F(t) ~ c t^(-exponent)` on the right. Exponents are structural
/// (known from the law); coefficients are measured from the density at the
/// table edge, so no asymptotic constant under test is assumed anywhere.
#[derive(Debug, Clone, Copy)]
pub struct TailSpec {
    pub exponent: f64,
}

/// Monotone CDF table on a log grid with power-law tails.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    ln_ts: Vec<f64>,
    cdf: Vec<f64>,
    t_min: f64,
    t_max: f64,
    c_left: f64,
    p_left: f64,
    c_right: f64,
    p_right: f64,
    mass: f64,
}

impl TabulatedCdf {
    /// Builds the table by integrating `density` between consecutive log
    /// grid nodes. `t_min`/`t_max` should sit at or beyond the target
    /// quantile coverage (about 1e-6 mass outside each end).
    pub fn build(
        density: &dyn Fn(f64) -> f64,
        t_min: f64,
        t_max: f64,
        n_nodes: usize,
        left: TailSpec,
        right: TailSpec,
        tol: f64,
    ) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && n_nodes >= 8) {
            return Err(Error::Usage("bad tabulation range".into()));
        }
        let l0 = t_min.ln();
        let l1 = t_max.ln();
        let step = (l1 - l0) / (n_nodes - 1) as f64;
        let ln_ts: Vec<f64> = (0..n_nodes).map(|i| l0 + step * i as f64).collect();

        // Left tail coefficient from the density at the edge, matching
        // F'(t_min) = density(t_min).
        let f_lo = density(t_min).max(0.0);
        let p_left = left.exponent;
        let c_left = f_lo * t_min.powf(1.0 - p_left) / p_left;
        let mass_left = c_left * t_min.powf(p_left);

        let mut cdf = Vec::with_capacity(n_nodes);
        let mut acc = quad::Neumaier::new();
        acc.add(mass_left);
        cdf.push(acc.value());
        // Per-panel tolerance floored near the density's own noise level;
        // tighter demands would only burn subdivisions chasing noise.
        let panel_tol = (tol / n_nodes as f64).max(1e-10);
        for i in 1..n_nodes {
            let a = ln_ts[i - 1].exp();
            let b = ln_ts[i].exp();
            let r = quad::adaptive(density, a, b, panel_tol, 64);
            acc.add(r.value.max(0.0));
            cdf.push(acc.value());
        }

        let f_hi = density(t_max).max(0.0);
        let p_right = right.exponent;
        let c_right = f_hi * t_max.powf(p_right + 1.0) / p_right;
        let mass_right = c_right * t_max.powf(-p_right);
        let mass = acc.value() + mass_right;

        Ok(TabulatedCdf {
            ln_ts,
            cdf,
            t_min,
            t_max,
            c_left,
            p_left,
            c_right,
            p_right,
            mass,
        })
    }

    /// Total mass (left tail + table + right tail). Should be 1 up to the
    /// build tolerance; exposed so callers can assert it.
    pub fn total_mass(&self) -> f64 {
        self.mass
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    /// CDF value, clamped into [0, 1].
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t < self.t_min {
            return (self.c_left * t.powf(self.p_left)).min(1.0);
        }
        if t >= self.t_max {
            return (1.0 - self.c_right * t.powf(-self.p_right)).clamp(0.0, 1.0);
        }
        let x = t.ln();
        let i = self.locate(x);
        let (x0, x1) = (self.ln_ts[i], self.ln_ts[i + 1]);
        let (f0, f1) = (self.cdf[i], self.cdf[i + 1]);
        let w = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        (f0 + w * (f1 - f0)).clamp(0.0, 1.0)
    }

    pub fn survival(&self, t: f64) -> f64 {
        if t >= self.t_max {
            return (self.c_right * t.powf(-self.p_right)).clamp(0.0, 1.0);
        }
        (1.0 - self.cdf(t)).clamp(0.0, 1.0)
    }

    /// Quantile (generalized inverse) for `u` in (0, 1): table inversion in
    /// the bulk, analytic power-law inversion in both tails.
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        let lo = self.cdf[0];
        let hi = *self.cdf.last().unwrap();
        if u <= lo {
            return (u / self.c_left).powf(1.0 / self.p_left);
        }
        if u >= hi {
            let s = (1.0 - u).max(f64::MIN_POSITIVE);
            return (self.c_right / s).powf(1.0 / self.p_right);
        }
        // Binary search for the bracketing node pair.
        let mut a = 0usize;
        let mut b = self.cdf.len() - 1;
        while b - a > 1 {
            let m = (a + b) / 2;
            if self.cdf[m] < u {
                a = m;
            } else {
                b = m;
            }
        }
        let (f0, f1) = (self.cdf[a], self.cdf[b]);
        let w = if f1 > f0 { (u - f0) / (f1 - f0) } else { 0.5 };
        (self.ln_ts[a] + w * (self.ln_ts[b] - self.ln_ts[a])).exp()
    }

    #[inline]
    fn locate(&self, x: f64) -> usize {
        let n = self.ln_ts.len();
        let step = (self.ln_ts[n - 1] - self.ln_ts[0]) / (n - 1) as f64;
        let i = ((x - self.ln_ts[0]) / step) as usize;
        i.min(n - 2)
    }
}

/// Positive density interpolated on a log grid (log-log linear between
/// nodes, zero outside where the stored value underflows). Used to make
/// repeated density evaluations cheap inside product quadratures; accuracy
/// is a few units of 1e-5 relative for the smooth laws tabulated here.
#[derive(Debug, Clone)]
pub struct TabulatedDensity {
    ln_ts: Vec<f64>,
    ln_f: Vec<f64>,
    t_min: f64,
    t_max: f64,
}

const LN_TINY: f64 = -690.0;

impl TabulatedDensity {
    pub fn build(density: &dyn Fn(f64) -> f64, t_min: f64, t_max: f64, n_nodes: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && n_nodes >= 8) {
            return Err(Error::Usage("bad tabulation range".into()));
        }
        let l0 = t_min.ln();
        let l1 = t_max.ln();
        let step = (l1 - l0) / (n_nodes - 1) as f64;
        let ln_ts: Vec<f64> = (0..n_nodes).map(|i| l0 + step * i as f64).collect();
        let ln_f = ln_ts
            .iter()
            .map(|&x| {
                let v = density(x.exp());
                if v > 0.0 {
                    v.ln().max(LN_TINY)
                } else {
                    LN_TINY
                }
            })
            .collect();
        Ok(TabulatedDensity { ln_ts, ln_f, t_min, t_max })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t < self.t_min || t > self.t_max || t <= 0.0 {
            return 0.0;
        }
        let x = t.ln();
        let n = self.ln_ts.len();
        let step = (self.ln_ts[n - 1] - self.ln_ts[0]) / (n - 1) as f64;
        let i = (((x - self.ln_ts[0]) / step) as usize).min(n - 2);
        let w = (x - self.ln_ts[i]) / step;
        let y = self.ln_f[i] + w * (self.ln_f[i + 1] - self.ln_f[i]);
        if y <= LN_TINY {
            0.0
        } else {
            y.exp()
        }
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pareto-ish smooth density with both power tails:
    // f(t) = 2 t / (1 + t^2)^2, F(t) = t^2/(1 + t^2).
    fn f(t: f64) -> f64 {
        2.0 * t / (1.0 + t * t).powi(2)
    }

    fn build() -> TabulatedCdf {
        TabulatedCdf::build(
            &f,
            1e-4,
            1e4,
            4096,
            TailSpec { exponent: 2.0 },
            TailSpec { exponent: 2.0 },
            1e-10,
        )
        .unwrap()
    }

    #[test]
    fn cdf_matches_closed_form() {
        let tab = build();
        assert!((tab.total_mass() - 1.0).abs() < 1e-7);
        for &t in &[1e-5, 1e-3, 0.1, 1.0, 3.0, 50.0, 1e5] {
            let want = t * t / (1.0 + t * t);
            assert!(
                (tab.cdf(t) - want).abs() < 2e-6,
                "t = {t}: {} vs {want}",
                tab.cdf(t)
            );
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let tab = build();
        for &u in &[1e-9, 1e-7, 0.001, 0.25, 0.5, 0.9, 0.9999, 1.0 - 1e-9] {
            let t = tab.quantile(u);
            let round = tab.cdf(t);
            assert!((round - u).abs() < 3e-6, "u = {u}: quantile {t}, back {round}");
        }
    }

    #[test]
    fn cdf_is_monotone() {
        let tab = build();
        let mut prev = -1.0;
        for k in 0..2000 {
            let t = 10f64.powf(-5.0 + 10.0 * k as f64 / 1999.0);
            let c = tab.cdf(t);
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn density_table_roundtrip() {
        let tab = TabulatedDensity::build(&f, 1e-4, 1e4, 2048).unwrap();
        for &t in &[1e-3, 0.05, 1.0, 7.0, 900.0] {
            let got = tab.eval(t);
            assert!((got - f(t)).abs() / f(t) < 1e-4, "t = {t}");
        }
        assert_eq!(tab.eval(1e-5), 0.0);
    }
}
