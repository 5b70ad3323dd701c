//! Liouville-space vectorization, superoperators and the tensor-power Gram
//! decomposition.
//!
//! Operators on a `d`-dimensional space are flattened row-major: `|μ⟩⟨ν|`
//! sits at index `μ·d + ν`, so a qubit basis reads `|00), |01), |10), |11)`.

mod family;
mod gram;
mod superop;
mod vector;

pub use family::{finite_diff_superop, ChannelFamily, DerivativeMode, SuperopFn, DEFAULT_FD_STEP};
pub use gram::{gram_tensor_power, gram_triple, GramTriple};
pub(crate) use superop::{apply_site_product, check_budget};
pub use superop::{
    superop_from_kraus, tensor_power, Superoperator, KRAUS_COMPLETENESS_TOL, LIOUVILLE_BUDGET,
};
pub use vector::{liouville_inner, vectorize, LiouvilleVector};
