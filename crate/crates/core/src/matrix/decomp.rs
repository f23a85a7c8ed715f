use serde::{Deserialize, Serialize};

use super::dense::CMat;
use crate::backend::BackendOpCounts;
use crate::error::{Error, Result};

/// Which eigenpairs a solve should return.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SelectionMode {
    All,
    /// 1-based inclusive index bounds into the ascending spectrum.
    IndexRange { il: usize, iu: usize },
    /// The lowest `ceil(frac * n)` eigenpairs, `frac` in `(0, 1]`.
    Fraction { frac: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSelection {
    pub mode: SelectionMode,
    pub vectors: bool,
}

impl EigenSelection {
    pub fn all() -> Self {
        Self {
            mode: SelectionMode::All,
            vectors: true,
        }
    }

    pub fn fraction(frac: f64) -> Self {
        Self {
            mode: SelectionMode::Fraction { frac },
            vectors: true,
        }
    }

    pub fn range(il: usize, iu: usize) -> Self {
        Self {
            mode: SelectionMode::IndexRange { il, iu },
            vectors: true,
        }
    }

    pub fn values_only(mut self) -> Self {
        self.vectors = false;
        self
    }

    /// Resolves to 1-based inclusive `(il, iu)` for a concrete dimension.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        if n == 0 {
            return Err(Error::InvalidSelection("dimension is zero".into()));
        }
        match self.mode {
            SelectionMode::All => Ok((1, n)),
            SelectionMode::IndexRange { il, iu } => {
                if il >= 1 && il <= iu && iu <= n {
                    Ok((il, iu))
                } else {
                    Err(Error::InvalidSelection(format!(
                        "index range [{il}, {iu}] not within [1, {n}]"
                    )))
                }
            }
            SelectionMode::Fraction { frac } => {
                if !(frac > 0.0 && frac <= 1.0) {
                    return Err(Error::InvalidSelection(format!("fraction {frac} not in (0, 1]")));
                }
                // Slack absorbs representation error, e.g. 0.3 * 10.
                let x = frac * n as f64;
                let iu = (x - 4.0 * f64::EPSILON * x).ceil() as usize;
                Ok((1, iu.clamp(1, n)))
            }
        }
    }
}

/// Named pipeline steps, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Cholesky,
    Transform,
    Tridiag,
    Dc,
    Backtransform,
    BacktransformGeneralized,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: Option<Step>,
    pub seconds: f64,
    pub level2_flops: u64,
    pub level3_flops: u64,
}

/// What a solve did: method, per-step timings and backend flop deltas.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveMeta {
    pub method: String,
    pub steps: Vec<StepRecord>,
    pub counts: BackendOpCounts,
}

impl SolveMeta {
    pub fn step(&self, step: Step) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.step == Some(step))
    }

    pub fn seconds(&self, step: Step) -> f64 {
        self.step(step).map_or(0.0, |s| s.seconds)
    }

    pub fn total_seconds(&self) -> f64 {
        self.steps.iter().map(|s| s.seconds).sum()
    }
}

/// Eigenvalues (ascending) and optionally the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Option<CMat>,
    /// 1-based inclusive index range of `values` within the full spectrum.
    pub range: (usize, usize),
    pub meta: SolveMeta,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_resolution() {
        assert_eq!(EigenSelection::fraction(0.1).resolve(1024).unwrap(), (1, 103));
        assert_eq!(EigenSelection::fraction(0.3).resolve(10).unwrap(), (1, 3));
        assert_eq!(EigenSelection::fraction(0.1).resolve(200).unwrap(), (1, 20));
        assert_eq!(EigenSelection::fraction(1e-9).resolve(5).unwrap(), (1, 1));
        assert_eq!(EigenSelection::fraction(1.0).resolve(7).unwrap(), (1, 7));
    }

    #[test]
    fn invalid_selections() {
        assert!(EigenSelection::fraction(0.0).resolve(4).is_err());
        assert!(EigenSelection::fraction(1.5).resolve(4).is_err());
        assert!(EigenSelection::fraction(f64::NAN).resolve(4).is_err());
        assert!(EigenSelection::range(0, 2).resolve(4).is_err());
        assert!(EigenSelection::range(3, 2).resolve(4).is_err());
        assert!(EigenSelection::range(1, 5).resolve(4).is_err());
        assert!(EigenSelection::all().resolve(0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn resolution_is_total(n in 0usize..300, il in 0usize..320, iu in 0usize..320, frac in -0.5f64..1.5) {
            for sel in [EigenSelection::all(), EigenSelection::range(il, iu), EigenSelection::fraction(frac)] {
                if let Ok((a, b)) = sel.resolve(n) {
                    proptest::prop_assert!(1 <= a && a <= b && b <= n);
                }
            }
        }
    }
}
