//! Order-preserving fan-out for independent multistart workers.

use alloc::vec::Vec;

/// `(0..count).map(f)`, evaluated on the rayon pool when `std` is enabled.
#[cfg(feature = "std")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "std"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}
