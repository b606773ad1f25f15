#![no_std]
//! Numerical core for norm-based entanglement measures on finite tensor
//! products: canonical forms of bipartite vectors, the symmetric and
//! antisymmetric sectors, and certified brackets on `q_K` for product,
//! bosonic and fermionic vector families.

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod decompose;
pub mod error;
pub mod linalg;
pub mod norm;
pub mod par;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
