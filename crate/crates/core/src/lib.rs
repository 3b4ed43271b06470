#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod entropy;
pub mod error;
pub mod factories;
pub mod kernels;
pub mod matfun;
pub mod parallel;
pub mod point;
pub mod problems;
pub mod random;
pub mod solvers;

pub use error::{Error, Result};
pub use kernels::{Domain, KernelKind};
pub use matfun::Hermitian;
pub use point::{Dual, Point};
