use num_complex::Complex64;

use super::vector::{vectorize, LiouvilleVector};
use crate::error::{Error, Result};
use crate::numerics::{kron, ComplexMatrix};

/// Largest Liouville-space dimension assembled densely.
pub const LIOUVILLE_BUDGET: usize = 4096;

/// Tolerance on Σ K†K = I when building channels from Kraus operators.
pub const KRAUS_COMPLETENESS_TOL: f64 = 1e-9;

/// Matrix representation Φ̃ of a linear map on operators, acting on
/// row-major vectorized operators: `Φ̃ · vec(A) = vec(Φ(A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: ComplexMatrix,
    hilbert_dim: usize,
}

impl Superoperator {
    pub fn new(matrix: ComplexMatrix, hilbert_dim: usize) -> Result<Self> {
        let n = hilbert_dim * hilbert_dim;
        if matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                left: matrix.shape(),
                right: (n, n),
            });
        }
        Ok(Self {
            matrix,
            hilbert_dim,
        })
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(hilbert_dim * hilbert_dim),
            hilbert_dim,
        }
    }

    pub fn zero(hilbert_dim: usize) -> Self {
        let n = hilbert_dim * hilbert_dim;
        Self {
            matrix: ComplexMatrix::zeros(n, n),
            hilbert_dim,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn liouville_dim(&self) -> usize {
        self.hilbert_dim * self.hilbert_dim
    }

    pub fn apply(&self, v: &LiouvilleVector) -> Result<LiouvilleVector> {
        LiouvilleVector::from_amplitudes(self.matrix.matvec(v.amplitudes())?)
    }

    pub fn apply_operator(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.apply(&vectorize(a)?)?.devectorize())
    }

    /// The dual map Φ̃†.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            hilbert_dim: self.hilbert_dim,
        }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        Self::new(self.matrix.matmul(&inner.matrix)?, self.hilbert_dim)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.try_add(&other.matrix)?, self.hilbert_dim)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
            hilbert_dim: self.hilbert_dim,
        }
    }

    /// Gram product `self† · other`.
    pub fn gram_with(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.matrix.adjoint().matmul(&other.matrix)?,
            self.hilbert_dim,
        )
    }

    /// Largest entry of `|Φ̃†·vec(I) − vec(I)|`; zero for trace-preserving maps.
    pub fn trace_preservation_defect(&self) -> f64 {
        let id = vectorize(&ComplexMatrix::identity(self.hilbert_dim)).expect("square");
        let dual = self.adjoint().apply(&id).expect("dimensions agree");
        dual.amplitudes()
            .iter()
            .zip(id.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_preservation_defect() <= tol
    }
}

/// Φ̃ = Σ_l K_l ⊗ conj(K_l). With `check_cptp`, rejects incomplete Kraus sets.
pub fn superop_from_kraus(kraus: &[ComplexMatrix], check_cptp: bool) -> Result<Superoperator> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
    let d = first.ensure_square()?;
    for k in kraus {
        if k.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                left: (d, d),
                right: k.shape(),
            });
        }
    }
    if check_cptp {
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in kraus {
            sum.add_scaled(&(&k.adjoint() * k), Complex64::new(1.0, 0.0))?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(d))?;
        if deviation > KRAUS_COMPLETENESS_TOL {
            return Err(Error::CompletenessViolation { deviation });
        }
    }
    let mut matrix = ComplexMatrix::zeros(d * d, d * d);
    for k in kraus {
        matrix.add_scaled(&kron(k, &k.conj()), Complex64::new(1.0, 0.0))?;
    }
    Superoperator::new(matrix, d)
}

pub(crate) fn check_budget(hilbert_dim: usize, n: usize) -> Result<usize> {
    let budget_exceeded = || Error::DimensionBudgetExceeded {
        requested: usize::MAX,
        budget: LIOUVILLE_BUDGET,
    };
    let mut total = 1usize;
    for _ in 0..n {
        total = total.checked_mul(hilbert_dim).ok_or_else(budget_exceeded)?;
    }
    let liouville = total.checked_mul(total).ok_or_else(budget_exceeded)?;
    if liouville > LIOUVILLE_BUDGET {
        return Err(Error::DimensionBudgetExceeded {
            requested: liouville,
            budget: LIOUVILLE_BUDGET,
        });
    }
    Ok(total)
}

/// Accumulates `scale · (F_1 ⊗ … ⊗ F_N)` into `acc`, where each `F_i` is a
/// single-site superoperator matrix (d² × d²) and `acc` is the N-site
/// superoperator in the global row-major vectorization of `d^N`-dimensional
/// operators. The site Kronecker product is permuted on the fly: site `i`
/// (0-based, most significant first) with local index `μ·d+ν` contributes
/// `μ·w·D + ν·w` to the global index, `w = d^{N-1-i}`, `D = d^N`.
pub(crate) fn accumulate_site_product(
    acc: &mut ComplexMatrix,
    factors: &[&ComplexMatrix],
    d: usize,
    scale: Complex64,
) {
    let n = factors.len();
    let big_d = d.pow(n as u32);
    let stride = big_d * big_d;
    debug_assert_eq!(acc.shape(), (stride, stride));
    let nonzeros: Vec<Vec<(usize, usize, Complex64)>> = factors
        .iter()
        .enumerate()
        .map(|(site, f)| {
            let w = d.pow((n - 1 - site) as u32);
            let dd = d * d;
            let mut entries = Vec::new();
            for r in 0..dd {
                for c in 0..dd {
                    let v = f[(r, c)];
                    if v != Complex64::new(0.0, 0.0) {
                        let row_off = (r / d) * w * big_d + (r % d) * w;
                        let col_off = (c / d) * w * big_d + (c % d) * w;
                        entries.push((row_off, col_off, v));
                    }
                }
            }
            entries
        })
        .collect();
    let data = acc.as_mut_slice();
    let mut stack: Vec<(usize, usize, usize, Complex64)> = vec![(0, 0, 0, scale)];
    while let Some((site, row, col, value)) = stack.pop() {
        if site == n {
            data[row * stride + col] += value;
            continue;
        }
        for &(r, c, v) in &nonzeros[site] {
            stack.push((site + 1, row + r, col + c, value * v));
        }
    }
}

/// N-fold tensor power Φ̃^{⊗N}, expressed in the row-major vectorization of
/// the `d^N`-dimensional composite system.
pub fn tensor_power(s: &Superoperator, n: usize) -> Result<Superoperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power needs N >= 1".into()));
    }
    let total = check_budget(s.hilbert_dim, n)?;
    let mut acc = ComplexMatrix::zeros(total * total, total * total);
    let factors = vec![&s.matrix; n];
    accumulate_site_product(&mut acc, &factors, s.hilbert_dim, Complex64::new(1.0, 0.0));
    Superoperator::new(acc, total)
}

/// Applies `F_1 ⊗ … ⊗ F_N` (single-site d² × d² blocks) to a Liouville
/// vector of the `d^N`-dimensional system without forming the product.
pub(crate) fn apply_site_product(
    factors: &[&ComplexMatrix],
    d: usize,
    v: &[Complex64],
) -> Vec<Complex64> {
    let n = factors.len();
    let big_d = d.pow(n as u32);
    debug_assert_eq!(v.len(), big_d * big_d);
    let dd = d * d;
    let mut cur = v.to_vec();
    let mut gathered = vec![Complex64::new(0.0, 0.0); dd];
    for (site, f) in factors.iter().enumerate() {
        let w = d.pow((n - 1 - site) as u32);
        let offsets: Vec<usize> = (0..dd).map(|r| (r / d) * w * big_d + (r % d) * w).collect();
        let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
        for base in 0..cur.len() {
            if !(base / big_d / w).is_multiple_of(d) || !(base % big_d / w).is_multiple_of(d) {
                continue;
            }
            for (g, &o) in gathered.iter_mut().zip(&offsets) {
                *g = cur[base + o];
            }
            if gathered.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            for (r, &o) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, g) in gathered.iter().enumerate() {
                    acc += f[(r, c)] * g;
                }
                next[base + o] = acc;
            }
        }
        cur = next;
    }
    cur
}

/// Sum of site products `Σ_terms F_1 ⊗ … ⊗ F_N` (all terms with N sites).
pub(crate) fn site_product_sum(
    terms: &[Vec<&ComplexMatrix>],
    d: usize,
    n: usize,
) -> Result<Superoperator> {
    let total = check_budget(d, n)?;
    let mut acc = ComplexMatrix::zeros(total * total, total * total);
    for factors in terms {
        accumulate_site_product(&mut acc, factors, d, Complex64::new(1.0, 0.0));
    }
    Superoperator::new(acc, total)
}
