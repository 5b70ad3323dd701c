use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{vdot, ComplexMatrix};

/// An operator on a `d`-dimensional Hilbert space flattened into Liouville
/// space. Amplitude `μ·d + ν` holds the coefficient of `|μ⟩⟨ν|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVector {
    hilbert_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl LiouvilleVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        let d = (len as f64).sqrt().round() as usize;
        if d * d != len {
            return Err(Error::InvalidArgument(format!(
                "Liouville vector length {len} is not a perfect square"
            )));
        }
        Ok(Self {
            hilbert_dim: d,
            amplitudes,
        })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn devectorize(&self) -> ComplexMatrix {
        let d = self.hilbert_dim;
        ComplexMatrix::from_vec(d, d, self.amplitudes.clone()).expect("amplitudes are finite")
    }

    pub fn norm(&self) -> f64 {
        crate::numerics::norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        liouville_inner(self, other)
    }
}

pub fn vectorize(a: &ComplexMatrix) -> Result<LiouvilleVector> {
    let d = a.ensure_square()?;
    Ok(LiouvilleVector {
        hilbert_dim: d,
        amplitudes: a.as_slice().to_vec(),
    })
}

/// (a|b) = tr(A†B)
pub fn liouville_inner(a: &LiouvilleVector, b: &LiouvilleVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: (a.dim(), 1),
            right: (b.dim(), 1),
        });
    }
    Ok(vdot(&a.amplitudes, &b.amplitudes))
}
