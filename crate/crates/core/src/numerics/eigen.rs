//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! The input is first split into the connected components of its sparsity
//! graph (exact zeros only). Each component is diagonalized independently,
//! which keeps the structured Liouville-space Gram matrices (block diagonal
//! after a permutation) cheap even at 4096 rows.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative symmetry tolerance accepted by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// PSD clipping tolerance relative to the spectral radius.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues within this relative distance of the maximum share its eigenspace.
pub const TOP_CLUSTER_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V · diag(f(λ)) · V†
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.reconstruct_complex(|l| Complex64::new(f(l), 0.0))
    }

    /// V · diag(f(λ)) · V† for a complex-valued spectral function.
    pub fn reconstruct_complex(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = self.eigenvectors.as_slice();
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        let data = out.as_mut_slice();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in weights.iter().enumerate() {
                    if w != Complex64::new(0.0, 0.0) {
                        acc += v[i * n + k] * v[j * n + k].conj() * w;
                    }
                }
                data[i * n + j] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Largest eigenvalue of a PSD matrix and its (possibly degenerate) eigenspace.
#[derive(Debug, Clone)]
pub struct TopEigenspace {
    pub value: f64,
    pub vectors: Vec<Vec<Complex64>>,
}

impl TopEigenspace {
    /// Orthogonal projector onto the top eigenspace.
    pub fn projector(&self, dim: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(dim, dim);
        for v in &self.vectors {
            p.add_scaled(&ComplexMatrix::outer(v, v), Complex64::new(1.0, 0.0))
                .expect("eigenvector length matches dimension");
        }
        p
    }
}

struct Block {
    indices: Vec<usize>,
    values: Vec<f64>,
    // column-major k x k eigenvectors of the block
    vectors: Vec<Complex64>,
}

fn check_hermitian(m: &ComplexMatrix) -> Result<usize> {
    let n = m.ensure_square()?;
    let asymmetry = m.hermitian_defect()?;
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NonHermitian { asymmetry });
    }
    Ok(n)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn components(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let data = m.as_slice();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if data[i * n + j] != Complex64::new(0.0, 0.0)
                || data[j * n + i] != Complex64::new(0.0, 0.0)
            {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Cyclic Jacobi on a dense Hermitian k x k row-major block.
/// Returns eigenvalues and column-major eigenvectors.
fn jacobi(mut a: Vec<Complex64>, k: usize) -> (Vec<f64>, Vec<Complex64>) {
    let mut v = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        v[i * k + i] = Complex64::new(1.0, 0.0);
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if k > 1 && total > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..k)
                .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * k + j].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * total {
                break;
            }
            for p in 0..k {
                for q in (p + 1)..k {
                    rotate(&mut a, &mut v, k, p, q);
                }
            }
        }
    }
    let values = (0..k).map(|i| a[i * k + i].re).collect();
    // v is row-major with eigenvectors in columns; convert to column-major
    let mut cols = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            cols[j * k + i] = v[i * k + j];
        }
    }
    (values, cols)
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], k: usize, p: usize, q: usize) {
    let apq = a[p * k + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[p * k + p].re;
    let aqq = a[q * k + q].re;
    if g < 1e-300 || g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * k + q] = Complex64::new(0.0, 0.0);
        a[q * k + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = diag(1, e^{-iθ}) · [[c, s], [-s, c]] restricted to (p, q)
    let ph_conj = phase.conj();
    for r in 0..k {
        let arp = a[r * k + p];
        let arq = a[r * k + q];
        a[r * k + p] = arp * c - arq * ph_conj * s;
        a[r * k + q] = arp * s + arq * ph_conj * c;
    }
    for col in 0..k {
        let apc = a[p * k + col];
        let aqc = a[q * k + col];
        a[p * k + col] = apc * c - aqc * phase * s;
        a[q * k + col] = apc * s + aqc * phase * c;
    }
    a[p * k + q] = Complex64::new(0.0, 0.0);
    a[q * k + p] = Complex64::new(0.0, 0.0);
    a[p * k + p] = Complex64::new(a[p * k + p].re, 0.0);
    a[q * k + q] = Complex64::new(a[q * k + q].re, 0.0);
    for r in 0..k {
        let vrp = v[r * k + p];
        let vrq = v[r * k + q];
        v[r * k + p] = vrp * c - vrq * ph_conj * s;
        v[r * k + q] = vrp * s + vrq * ph_conj * c;
    }
}

fn decompose_blocks(m: &ComplexMatrix) -> Result<Vec<Block>> {
    check_hermitian(m)?;
    let h = m.hermitian_part()?;
    let n = h.rows();
    let data = h.as_slice();
    Ok(components(&h)
        .into_iter()
        .map(|indices| {
            let k = indices.len();
            let mut sub = Vec::with_capacity(k * k);
            for &i in &indices {
                for &j in &indices {
                    sub.push(data[i * n + j]);
                }
            }
            let (values, vectors) = jacobi(sub, k);
            Block {
                indices,
                values,
                vectors,
            }
        })
        .collect())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn herm_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let n = m.ensure_square()?;
    let blocks = decompose_blocks(m)?;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n);
    for (b, block) in blocks.iter().enumerate() {
        for (j, &val) in block.values.iter().enumerate() {
            pairs.push((val, b, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (col, &(val, b, j)) in pairs.iter().enumerate() {
        eigenvalues.push(val);
        let block = &blocks[b];
        let k = block.indices.len();
        for (r, &row) in block.indices.iter().enumerate() {
            vectors[(row, col)] = block.vectors[j * k + r];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn check_psd(min: f64, max_abs: f64) -> Result<()> {
    if min < -PSD_TOL * max_abs {
        Err(Error::NegativeSpectrum {
            min_eigenvalue: min,
        })
    } else {
        Ok(())
    }
}

/// Largest eigenvalue of a Hermitian PSD matrix with its full top eigenspace.
///
/// Only the eigenvectors of the top cluster are materialized, so this stays
/// cheap for large block-structured matrices.
pub fn largest_eigval_psd(m: &ComplexMatrix) -> Result<TopEigenspace> {
    let n = m.ensure_square()?;
    let blocks = decompose_blocks(m)?;
    let all = blocks.iter().flat_map(|b| b.values.iter().copied());
    let (min, max) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if n == 0 {
        return Ok(TopEigenspace {
            value: 0.0,
            vectors: Vec::new(),
        });
    }
    check_psd(min, max.abs().max(min.abs()))?;
    let value = max.max(0.0);
    let cutoff = value - TOP_CLUSTER_TOL * value;
    let mut vectors = Vec::new();
    for block in &blocks {
        let k = block.indices.len();
        for (j, &val) in block.values.iter().enumerate() {
            if val >= cutoff {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                for (r, &row) in block.indices.iter().enumerate() {
                    v[row] = block.vectors[j * k + r];
                }
                vectors.push(v);
            }
        }
    }
    Ok(TopEigenspace { value, vectors })
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = herm_eig(m)?;
    let max_abs = spectrum
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let min = spectrum.eigenvalues.first().copied().unwrap_or(0.0);
    check_psd(min, max_abs)?;
    Ok(spectrum.reconstruct_with(|l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.try_sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    #[test]
    fn identity_eigenvalues() {
        let s = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let s = herm_eig(&ComplexMatrix::from_real_diag(&[3.0, -1.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 3.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let s = herm_eig(&x).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(rel_err(&s.reconstruct(), &x) < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let s = herm_eig(&m).unwrap();
        assert!(rel_err(&s.reconstruct(), &m) < 1e-12);
        let v = &s.eigenvectors;
        assert!(rel_err(&(&v.adjoint() * v), &ComplexMatrix::identity(3)) < 1e-12);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NonHermitian { .. })));
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn zero_matrix_is_hermitian() {
        let s = herm_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 3]);
        assert_eq!(
            largest_eigval_psd(&ComplexMatrix::zeros(3, 3))
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn top_eigenspace_of_degenerate_diagonal() {
        let top =
            largest_eigval_psd(&ComplexMatrix::from_real_diag(&[0.0, 4.0, 4.0, 0.0])).unwrap();
        assert_eq!(top.value, 4.0);
        assert_eq!(top.vectors.len(), 2);
    }

    #[test]
    fn negative_spectrum_rejected() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(
            largest_eigval_psd(&m),
            Err(Error::NegativeSpectrum { .. })
        ));
        assert!(matches!(psd_sqrt(&m), Err(Error::NegativeSpectrum { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clipped() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -1e-12]);
        let r = psd_sqrt(&m).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn sqrt_examples() {
        let id = ComplexMatrix::identity(2);
        assert!(rel_err(&psd_sqrt(&id).unwrap(), &id) < 1e-15);
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(rel_err(&r, &ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-15);
        let proj = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(rel_err(&psd_sqrt(&proj).unwrap(), &proj) < 1e-12);
    }

    #[test]
    fn block_structure_is_exploited_consistently() {
        // two decoupled 2x2 blocks interleaved
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, -2.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let s = herm_eig(&m).unwrap();
        let expected = [-1.0, 2.0, 3.0, 4.0];
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(rel_err(&s.reconstruct(), &m) < 1e-13);
    }
}
