//! Class-constrained and unconstrained triplet spaces: counting, exhaustive
//! enumeration, and seeded uniform sampling with replacement.
//!
//! A constrained triplet has its reference point `i` in one class and the
//! unordered pair `{j, k}` in another. Sampling is exactly uniform over that
//! space: a class pair `(a, b)` is drawn with probability proportional to
//! `|C_a| * C(|C_b|, 2)`, then `i` uniformly from `C_a`, then a pair rank
//! uniformly from `C(|C_b|, 2)` which is unranked to `(j, k)`. The RNG
//! stream is consumed in exactly that order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Partition, Result};

/// Identifier of the generator behind every seeded draw in this crate.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

/// Default budget multipliers (triplets per point).
pub const DEFAULT_CADI_MULTIPLIER: f64 = 40.0;
pub const DEFAULT_ADI_MULTIPLIER: f64 = 100.0;
pub const DEFAULT_TRAIN_MULTIPLIER: f64 = 10.0;

/// Seeded generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reference point `i` and unordered pair `{j, k}`, stored with `j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triplet {
    /// Orders the pair so that `j < k`.
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        let (j, k) = if j < k { (j, k) } else { (k, j) };
        Self { i, j, k }
    }

    pub fn is_valid(&self) -> bool {
        self.j < self.k && self.i != self.j && self.i != self.k
    }

    pub fn is_constrained(&self, p: &Partition) -> bool {
        let cj = p.class_of(self.j);
        cj == p.class_of(self.k) && cj != p.class_of(self.i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetMode {
    /// `k = ceil(multiplier * n)`.
    Multiplier(f64),
    Absolute(usize),
    /// Every triplet, no sampling.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletBudget {
    pub mode: BudgetMode,
    pub seed: u64,
}

impl TripletBudget {
    pub fn multiplier(multiplier: f64, seed: u64) -> Self {
        Self {
            mode: BudgetMode::Multiplier(multiplier),
            seed,
        }
    }

    pub fn absolute(k: usize, seed: u64) -> Self {
        Self {
            mode: BudgetMode::Absolute(k),
            seed,
        }
    }

    pub fn exhaustive() -> Self {
        Self {
            mode: BudgetMode::Exhaustive,
            seed: 0,
        }
    }

    /// Number of draws for a dataset of `n` points; `None` in exhaustive mode.
    pub fn resolve(&self, n: usize) -> Result<Option<usize>> {
        let k = match self.mode {
            BudgetMode::Exhaustive => return Ok(None),
            BudgetMode::Absolute(k) => k,
            BudgetMode::Multiplier(m) => {
                if !(m.is_finite() && m >= 0.0) {
                    return Err(Error::Invalid(format!("invalid triplet multiplier {m}")));
                }
                (m * n as f64).ceil() as usize
            }
        };
        if k == 0 {
            return Err(Error::Invalid(
                "triplet budget resolves to zero draws".into(),
            ));
        }
        Ok(Some(k))
    }
}

#[inline]
pub(crate) fn choose2(s: usize) -> u128 {
    let s = s as u128;
    s * s.saturating_sub(1) / 2
}

/// Maps a rank in `0..C(s, 2)` to the pair `(j, k)` with `j < k < s`
/// (colexicographic order).
#[inline]
pub fn unrank_pair(rank: u64) -> (usize, usize) {
    let mut k = ((1.0 + (1.0 + 8.0 * rank as f64).sqrt()) / 2.0).floor() as u64;
    while k * (k - 1) / 2 > rank {
        k -= 1;
    }
    while (k + 1) * k / 2 <= rank {
        k += 1;
    }
    let j = rank - k * (k - 1) / 2;
    (j as usize, k as usize)
}

/// Size `T` of the class-constrained triplet space.
pub fn count_constrained_triplets(p: &Partition) -> u128 {
    let sizes = p.class_sizes();
    let n: u128 = sizes.iter().map(|&s| s as u128).sum();
    sizes.iter().map(|&sb| (n - sb as u128) * choose2(sb)).sum()
}

/// Every constrained triplet exactly once, in `(a, b, i, j, k)` order.
pub fn enumerate_constrained(p: &Partition) -> Result<Vec<Triplet>> {
    let total = count_constrained_triplets(p);
    if total == 0 {
        return Err(Error::EmptyTripletSpace);
    }
    let mut out = Vec::with_capacity(usize::try_from(total).unwrap_or(0));
    for (a, ca) in p.classes().iter().enumerate() {
        for (b, cb) in p.classes().iter().enumerate() {
            if a == b {
                continue;
            }
            for &i in ca {
                for (x, &j) in cb.iter().enumerate() {
                    for &k in &cb[x + 1..] {
                        out.push(Triplet { i, j, k });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Precomputed class-pair table for repeated constrained sampling.
#[derive(Debug, Clone)]
pub struct ConstrainedSampler<'p> {
    partition: &'p Partition,
    pairs: Vec<(usize, usize)>,
    cumulative: Vec<u128>,
    total: u128,
}

impl<'p> ConstrainedSampler<'p> {
    pub fn new(partition: &'p Partition) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0u128;
        for (a, ca) in partition.classes().iter().enumerate() {
            for (b, cb) in partition.classes().iter().enumerate() {
                let w = if a == b {
                    0
                } else {
                    ca.len() as u128 * choose2(cb.len())
                };
                if w > 0 {
                    total += w;
                    pairs.push((a, b));
                    cumulative.push(total);
                }
            }
        }
        if total == 0 {
            return Err(Error::EmptyTripletSpace);
        }
        Ok(Self {
            partition,
            pairs,
            cumulative,
            total,
        })
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Triplet {
        let r = rng.random_range(0..self.total);
        let slot = self.cumulative.partition_point(|&c| c <= r);
        let (a, b) = self.pairs[slot];
        let ca = &self.partition.classes()[a];
        let cb = &self.partition.classes()[b];
        let i = ca[rng.random_range(0..ca.len())];
        let (x, y) = unrank_pair(rng.random_range(0..choose2(cb.len()) as u64));
        Triplet {
            i,
            j: cb[x],
            k: cb[y],
        }
    }

    pub fn sample(&self, k: usize, seed: u64) -> Vec<Triplet> {
        let mut rng = rng_from_seed(seed);
        (0..k).map(|_| self.draw(&mut rng)).collect()
    }
}

/// `k` i.i.d. uniform draws from the constrained triplet space.
pub fn sample_constrained(p: &Partition, budget: &TripletBudget) -> Result<Vec<Triplet>> {
    let sampler = ConstrainedSampler::new(p)?;
    match budget.resolve(p.len())? {
        Some(k) => Ok(sampler.sample(k, budget.seed)),
        None => enumerate_constrained(p),
    }
}

/// `k` i.i.d. uniform draws over all `(i, {j, k})` with distinct indices,
/// ignoring classes.
pub fn sample_unconstrained(n: usize, budget: &TripletBudget) -> Result<Vec<Triplet>> {
    if n < 3 {
        return Err(Error::Invalid(format!(
            "unconstrained triplets need n >= 3, got {n}"
        )));
    }
    let Some(k) = budget.resolve(n)? else {
        return Ok(enumerate_unconstrained(n));
    };
    let pairs = choose2(n - 1) as u64;
    let mut rng = rng_from_seed(budget.seed);
    Ok((0..k)
        .map(|_| {
            let i = rng.random_range(0..n);
            let (x, y) = unrank_pair(rng.random_range(0..pairs));
            let skip = |v: usize| v + usize::from(v >= i);
            Triplet {
                i,
                j: skip(x),
                k: skip(y),
            }
        })
        .collect())
}

/// All `n * C(n-1, 2)` unconstrained triplets in `(i, j, k)` order.
pub fn enumerate_unconstrained(n: usize) -> Vec<Triplet> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                if i != j && i != k {
                    out.push(Triplet { i, j, k });
                }
            }
        }
    }
    out
}
