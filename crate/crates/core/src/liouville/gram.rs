use super::family::ChannelFamily;
use super::superop::{site_product_sum, Superoperator};
use crate::error::{Error, Result};

/// Single-site Gram blocks `A = Φ̃†Φ̃`, `B = Φ̃'†Φ̃'`, `C = Φ̃'†Φ̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramTriple {
    pub a: Superoperator,
    pub b: Superoperator,
    pub c: Superoperator,
}

impl GramTriple {
    pub fn hilbert_dim(&self) -> usize {
        self.a.hilbert_dim()
    }
}

pub fn gram_triple(family: &ChannelFamily, x: f64) -> Result<GramTriple> {
    let phi = family.evaluate(x)?;
    let dphi = family.derivative(x)?;
    Ok(GramTriple {
        a: phi.gram_with(&phi)?,
        b: dphi.gram_with(&dphi)?,
        c: dphi.gram_with(&phi)?,
    })
}

/// `(Φ̃^{⊗N})'† (Φ̃^{⊗N})'` assembled from single-site blocks:
/// `Σ_i A…B_i…A + Σ_{i≠j} A…C_i…C_j†…A`.
pub fn gram_tensor_power(triple: &GramTriple, n: usize) -> Result<Superoperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power needs N >= 1".into()));
    }
    let d = triple.hilbert_dim();
    let c_dag = triple.c.adjoint();
    let (a, b, c) = (triple.a.matrix(), triple.b.matrix(), triple.c.matrix());
    let mut terms = Vec::with_capacity(n * n);
    for i in 0..n {
        terms.push(
            (0..n)
                .map(|k| if k == i { b } else { a })
                .collect::<Vec<_>>(),
        );
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            terms.push(
                (0..n)
                    .map(|k| {
                        if k == i {
                            c
                        } else if k == j {
                            c_dag.matrix()
                        } else {
                            a
                        }
                    })
                    .collect(),
            );
        }
    }
    site_product_sum(&terms, d, n)
}
