//! Tubal tensor algebra, truncated t-SVD, slice samplers and tensor CUR.

// `!(a < b)` is used on purpose so NaN lands on the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cur;
pub mod datasets;
pub mod error;
pub mod index;
pub mod io;
pub mod linalg;
pub mod samplers;
pub mod spectral;
pub mod tensor;
pub mod tsvd;

pub use error::{Error, Result};
pub use index::IndexSet;
pub use tensor::{Dims, Tensor3};
pub use algebra::{tinverse, tpinv, tproduct, tproduct_oracle};
pub use cur::{build_cur, cur_error, error_constants, verify_bound, CurModel, ErrorConstants, MiddleVariant};
pub use samplers::{Method, SamplerConfig};
pub use spectral::{fft_mode3, ifft_mode3, SpectralTensor};
pub use tsvd::{truncated_tsvd, tubal_leverage, LeverageScores, TSvdFactors};
