//! Parameter types: the stability index `alpha` and the generic
//! Mittag-Leffler order.

use crate::error::{Error, Result};

/// Stability index `alpha` of the spectrally one-sided process, together
/// with the cached dual exponent `beta = 1/alpha`.
///
/// Stable-process operations require `1 < alpha <= 2`; a few evaluation
/// routines also accept the boundary `alpha = 1` (where the object under
/// study degenerates) and say so explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityIndex {
    alpha: f64,
    beta: f64,
}

impl StabilityIndex {
    /// Index for stable-process work: requires `alpha` in (1, 2].
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!(
                "stability index must lie in (1, 2], got {alpha}"
            )));
        }
        Ok(StabilityIndex { alpha, beta: 1.0 / alpha })
    }

    /// Widened constructor accepting the closed interval [1, 2], used by the
    /// evaluation routines that have sensible boundary values
    /// (`D_1 = 0`, `D_2 = exp(-x)`).
    pub fn new_closed(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!(
                "index must lie in [1, 2] for boundary-tolerant operations, got {alpha}"
            )));
        }
        Ok(StabilityIndex { alpha, beta: 1.0 / alpha })
    }

    /// Strict interior (1, 2): the densities of T, T-bar, T-tilde and the
    /// product factorization are only defined there.
    pub fn require_interior(&self) -> Result<()> {
        if self.alpha > 1.0 && self.alpha < 2.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "operation requires alpha strictly inside (1, 2), got {}",
                self.alpha
            )))
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The dual exponent `beta = 1/alpha`.
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn is_gaussian(&self) -> bool {
        self.alpha == 2.0
    }
}

/// Order of a generic Mittag-Leffler function `E_order`.
///
/// Operations state the sub-range of orders they accept; construction only
/// enforces positivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLOrder(f64);

impl MLOrder {
    pub fn new(order: f64) -> Result<Self> {
        if !(order > 0.0 && order.is_finite()) {
            return Err(Error::Domain(format!(
                "Mittag-Leffler order must be positive and finite, got {order}"
            )));
        }
        Ok(MLOrder(order))
    }

    #[inline]
    pub fn get(&self) -> f64 {
        self.0
    }

    /// Requires the order to lie in the open interval (0, 1), the range on
    /// which `x -> E_order(-x)` is completely monotone.
    pub fn require_unit_interval(&self) -> Result<()> {
        if self.0 < 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "operation requires order in (0, 1), got {}",
                self.0
            )))
        }
    }
}

impl StabilityIndex {
    /// The order `beta = 1/alpha` as an `MLOrder`, for the dual
    /// Mittag-Leffler evaluations `E_{1/alpha}(-x)`.
    pub fn dual_order(&self) -> MLOrder {
        MLOrder(self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(StabilityIndex::new(1.0).is_err());
        assert!(StabilityIndex::new(2.0 + 1e-12).is_err());
        assert!(StabilityIndex::new(f64::NAN).is_err());
        assert!(StabilityIndex::new_closed(1.0).is_ok());
        assert!(StabilityIndex::new_closed(0.999).is_err());
    }

    #[test]
    fn beta_is_reciprocal() {
        let idx = StabilityIndex::new(1.5).unwrap();
        assert_eq!(idx.beta() * idx.alpha(), 1.0);
        let idx = StabilityIndex::new(1.7).unwrap();
        assert!((idx.beta() * idx.alpha() - 1.0).abs() < 1e-15);
    }
}
