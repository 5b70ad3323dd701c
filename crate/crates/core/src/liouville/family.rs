use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::superop::{check_budget, site_product_sum, Superoperator};
use crate::error::{Error, Result};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

pub type SuperopFn = Arc<dyn Fn(f64) -> Result<Superoperator> + Send + Sync>;

#[derive(Clone)]
pub enum DerivativeMode {
    Analytic(SuperopFn),
    FiniteDifference { step: f64 },
}

/// A parametrized channel `x ↦ Φ̃(x)` together with a way to obtain `Φ̃'(x)`.
#[derive(Clone)]
pub struct ChannelFamily {
    hilbert_dim: usize,
    eval: SuperopFn,
    derivative: DerivativeMode,
}

impl fmt::Debug for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.derivative {
            DerivativeMode::Analytic(_) => "analytic".to_string(),
            DerivativeMode::FiniteDifference { step } => format!("central difference h={step:e}"),
        };
        f.debug_struct("ChannelFamily")
            .field("hilbert_dim", &self.hilbert_dim)
            .field("derivative", &mode)
            .finish()
    }
}

impl ChannelFamily {
    pub fn analytic(
        hilbert_dim: usize,
        eval: impl Fn(f64) -> Result<Superoperator> + Send + Sync + 'static,
        derivative: impl Fn(f64) -> Result<Superoperator> + Send + Sync + 'static,
    ) -> Self {
        Self {
            hilbert_dim,
            eval: Arc::new(eval),
            derivative: DerivativeMode::Analytic(Arc::new(derivative)),
        }
    }

    pub fn finite_difference(
        hilbert_dim: usize,
        eval: impl Fn(f64) -> Result<Superoperator> + Send + Sync + 'static,
        step: f64,
    ) -> Self {
        Self {
            hilbert_dim,
            eval: Arc::new(eval),
            derivative: DerivativeMode::FiniteDifference { step },
        }
    }

    /// A family that does not depend on `x`.
    pub fn constant(s: Superoperator) -> Self {
        let d = s.hilbert_dim();
        let s = Arc::new(s);
        Self::analytic(
            d,
            move |_| Ok((*s).clone()),
            move |_| Ok(Superoperator::zero(d)),
        )
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn derivative_mode(&self) -> &DerivativeMode {
        &self.derivative
    }

    pub fn evaluate(&self, x: f64) -> Result<Superoperator> {
        (self.eval)(x)
    }

    pub fn derivative(&self, x: f64) -> Result<Superoperator> {
        match &self.derivative {
            DerivativeMode::Analytic(f) => f(x),
            DerivativeMode::FiniteDifference { step } => finite_diff_superop(self, x, *step),
        }
    }

    /// Same map, derivative replaced by a central difference with step `h`.
    pub fn with_finite_difference(&self, h: f64) -> Self {
        Self {
            hilbert_dim: self.hilbert_dim,
            eval: Arc::clone(&self.eval),
            derivative: DerivativeMode::FiniteDifference { step: h },
        }
    }

    /// `outer ∘ self`, with the derivative by the product rule.
    pub fn then(&self, outer: &ChannelFamily) -> Result<Self> {
        if outer.hilbert_dim != self.hilbert_dim {
            return Err(Error::DimensionMismatch {
                left: (self.hilbert_dim, self.hilbert_dim),
                right: (outer.hilbert_dim, outer.hilbert_dim),
            });
        }
        let (a, b) = (self.clone(), outer.clone());
        let (a2, b2) = (self.clone(), outer.clone());
        Ok(Self::analytic(
            self.hilbert_dim,
            move |x| b.evaluate(x)?.compose(&a.evaluate(x)?),
            move |x| {
                let first = b2.derivative(x)?.compose(&a2.evaluate(x)?)?;
                let second = b2.evaluate(x)?.compose(&a2.derivative(x)?)?;
                first.add(&second)
            },
        ))
    }

    /// N identical copies acting in parallel; the derivative distributes over
    /// the sites by the product rule.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs N >= 1".into()));
        }
        let total = check_budget(self.hilbert_dim, n)?;
        let d = self.hilbert_dim;
        let (base, base2) = (self.clone(), self.clone());
        Ok(Self::analytic(
            total,
            move |x| {
                let s = base.evaluate(x)?;
                site_product_sum(&[vec![s.matrix(); n]], d, n)
            },
            move |x| {
                let s = base2.evaluate(x)?;
                let ds = base2.derivative(x)?;
                let terms: Vec<Vec<_>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| if j == i { ds.matrix() } else { s.matrix() })
                            .collect()
                    })
                    .collect();
                site_product_sum(&terms, d, n)
            },
        ))
    }
}

/// Central difference `(Φ̃(x+h) − Φ̃(x−h)) / 2h`.
pub fn finite_diff_superop(family: &ChannelFamily, x: f64, h: f64) -> Result<Superoperator> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let plus = family.evaluate(x + h)?;
    let minus = family.evaluate(x - h)?;
    let diff = plus.add(&minus.scale(Complex64::new(-1.0, 0.0)))?;
    Ok(diff.scale(Complex64::new(0.5 / h, 0.0)))
}
