//! Scalar special functions and root finding used by every analysis module.

mod bvn;
mod normal;
mod roots;

pub use bvn::{bvn_cdf, bvn_cdf_dh, bvn_cdf_dk, BvnArgs};
pub use normal::{norm_cdf, norm_pdf, norm_quantile};
pub use roots::{solve_root, Bracket, DEFAULT_ROOT_MAX_ITER, DEFAULT_ROOT_TOL};

pub(crate) use normal::{cdf_raw, quantile_raw};
