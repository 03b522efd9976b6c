//! Order-fixed reductions: results depend only on the input order, never on
//! how many worker threads produced the summands.

use rayon::prelude::*;

use crate::Scalar;

const LEAF: usize = 32;

/// Fixed chunk length for parallel reductions over long sequences.
pub const CHUNK: usize = 4096;

/// Pairwise (tree) summation.
pub fn pairwise_sum<F: Scalar>(xs: &[F]) -> F {
    if xs.len() <= LEAF {
        let mut acc = F::zero();
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Maps every index in `0..len` through `f` in parallel and sums the results
/// with pairwise summation over fixed [`CHUNK`] boundaries.
pub fn chunked_sum<F, G>(len: usize, f: G) -> F
where
    F: Scalar,
    G: Fn(usize) -> F + Sync,
{
    let chunk_sums: Vec<F> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let vals: Vec<F> = (lo..hi).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&chunk_sums)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn chunked_sum_is_thread_count_independent() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / 3.0;
        let n = 3 * CHUNK + 17;
        let a = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| chunked_sum(n, f));
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| chunked_sum(n, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
