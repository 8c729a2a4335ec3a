//! Parallel map with deterministic reduction.
//!
//! Scans and quadrature loops are data-parallel over node indices. Terms are
//! produced into an indexed buffer and combined by a fixed pairwise tree, so
//! the result does not depend on the number of worker threads.

use rayon::prelude::*;

/// Map `f` over `0..n` in parallel, preserving index order in the output.
pub fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

/// Sum a slice by pairwise tree reduction. Associativity order is fixed by
/// the slice layout, so sums are bit-identical across thread counts.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            tree_sum(lo) + tree_sum(hi)
        }
    }
}

/// Complex variant of [`tree_sum`] over `(re, im)` pairs.
pub fn tree_sum_complex(values: &[(f64, f64)]) -> (f64, f64) {
    match values.len() {
        0 => (0.0, 0.0),
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            let a = tree_sum_complex(lo);
            let b = tree_sum_complex(hi);
            (a.0 + b.0, a.1 + b.1)
        }
    }
}
