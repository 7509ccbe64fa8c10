//! Probability densities and distribution functions of the first-passage
//! functionals: the subordinator passage time, the mixing laws, the
//! first-passage time `T_1` itself (three ways), the supremum density, and
//! the survival function of the supremum at an exponential time.

mod mixing;
mod passage;
pub(crate) mod that1;

pub use mixing::{MixingT, Tbar, Ttilde};
pub use passage::{
    cdf_s1, cdf_t1, density_g, density_g_at_zero, density_g_integral, density_g_series,
    density_g_transform, density_h, density_h_with, density_s1_change_of_variables,
    density_s1_series, density_t1, density_t1_convex_with, density_t1_gaussian,
    density_t1_product_with, density_t1_series, snapshot_f_that1, survival_s_tau, survival_t1,
    GMethod, T1Method, That1Snapshot,
};
pub use that1::{
    cdf_that1, density_that1, density_that1_integral, density_that1_kanter, density_that1_series,
    density_that1_series_diag, kanter_ln_a,
};

use crate::error::{Error, Result};

/// The laws this module implements, keyed the way the CLI spells them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityName {
    /// Mixing variable `T` of the product factorization of `T_1`.
    T,
    /// Subordinator passage time (positive `1/alpha`-stable variable).
    That1,
    /// First component of the convex decomposition of `f_T1`.
    GThat1,
    /// Second component of the convex decomposition of `f_T1`.
    HThat1,
    /// First-passage time of the spectrally positive process over level 1.
    T1,
    /// Supremum of the process at time 1.
    S1,
    /// Mixing law with density proportional to `u^(1/alpha) / (u^2 - 2 u cos(pi a) + 1)`.
    Tbar,
    /// Mixing law with density proportional to `1 / (u^2 - 2 u cos(pi a) + 1)`.
    Ttilde,
}

impl DensityName {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "T" => DensityName::T,
            "That1" | "that1" => DensityName::That1,
            "g_That1" | "g" => DensityName::GThat1,
            "h_That1" | "h" => DensityName::HThat1,
            "T1" => DensityName::T1,
            "S1" => DensityName::S1,
            "Tbar" => DensityName::Tbar,
            "Ttilde" => DensityName::Ttilde,
            other => return Err(Error::Usage(format!("unknown density name: {other}"))),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DensityName::T => "T",
            DensityName::That1 => "That1",
            DensityName::GThat1 => "g_That1",
            DensityName::HThat1 => "h_That1",
            DensityName::T1 => "T1",
            DensityName::S1 => "S1",
            DensityName::Tbar => "Tbar",
            DensityName::Ttilde => "Ttilde",
        }
    }
}

/// Frequently used trigonometric quantities of the index, computed once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AlphaContext {
    pub alpha: f64,
    pub beta: f64,
    /// `-sin(pi alpha)`, positive on (1, 2).
    pub msin_pa: f64,
    /// `cos(pi alpha)`.
    pub cos_pa: f64,
    /// `sin(pi / alpha)`, positive.
    pub sin_th: f64,
    /// `cos(pi / alpha)`, negative on (1, 2).
    pub cos_th: f64,
}

impl AlphaContext {
    pub fn new(index: crate::index::StabilityIndex) -> Self {
        let a = index.alpha();
        AlphaContext {
            alpha: a,
            beta: index.beta(),
            msin_pa: -crate::mlf::sin_pi(a),
            cos_pa: crate::mlf::cos_pi(a),
            sin_th: crate::mlf::sin_pi(1.0 / a),
            cos_th: crate::mlf::cos_pi(1.0 / a),
        }
    }

    /// `u^2 - 2 u cos(pi alpha) + 1` as a sum of squares.
    #[inline]
    pub fn quad_form(&self, u: f64) -> f64 {
        let d = u - self.cos_pa;
        d * d + self.msin_pa * self.msin_pa
    }
}
