//! 1-D evaluation grids for CLI tables and check suites.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// An evaluation grid `start..=stop` with `count` points, linearly or
/// geometrically spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = GridSpec { start, stop, count, spacing: Spacing::Linear };
        g.validate()?;
        Ok(g)
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = GridSpec { start, stop, count, spacing: Spacing::Log };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Usage("grid needs at least one point".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(Error::Usage(format!(
                "invalid grid range [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::Usage("log grids need a positive start".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = self.count;
        match self.spacing {
            Spacing::Linear => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n).map(|i| self.start + step * i as f64).collect()
            }
            Spacing::Log => {
                let l0 = self.start.ln();
                let l1 = self.stop.ln();
                let step = (l1 - l0) / (n - 1) as f64;
                (0..n).map(|i| (l0 + step * i as f64).exp()).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_endpoints() {
        let g = GridSpec::linear(0.0, 1.0, 5).unwrap().points();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert!((g[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_spacing_is_geometric() {
        let g = GridSpec::log(0.01, 100.0, 5).unwrap().points();
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::log(0.0, 1.0, 3).is_err());
        assert!(GridSpec::linear(1.0, 0.0, 3).is_err());
        assert!(GridSpec::linear(0.0, 1.0, 0).is_err());
    }
}
