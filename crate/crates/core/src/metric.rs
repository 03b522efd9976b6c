//! CADI (exact and sampled), its class-pair decomposition, the unconstrained
//! ADI variant, and the sampling-stability study.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{cosine_unchecked, DEGENERACY_EPS};
use crate::sampling::{
    count_constrained_triplets, enumerate_unconstrained, sample_constrained, sample_unconstrained,
    BudgetMode, Triplet, TripletBudget,
};
use crate::stats::Summary;
use crate::summation::{chunked_sum, pairwise_sum};
use crate::{Dataset, Error, Matrix, Partition, Projection, Result, Scalar};

impl<F> AsRef<Matrix<F>> for Matrix<F> {
    fn as_ref(&self) -> &Matrix<F> {
        self
    }
}

impl<F: Scalar> AsRef<Matrix<F>> for Dataset<F> {
    fn as_ref(&self) -> &Matrix<F> {
        self.points()
    }
}

impl<F: Scalar> AsRef<Matrix<F>> for Projection<F> {
    fn as_ref(&self) -> &Matrix<F> {
        self.points()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CadiMode {
    Exact,
    Sampled,
}

/// Mean squared cosine difference and triplet count for one class pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairStat<F> {
    pub mean: F,
    pub count: u128,
}

/// Contribution of every ordered class pair `(a, b)`: reference point in
/// `a`, pair in `b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassPairBreakdown<F> {
    pub entries: BTreeMap<(usize, usize), PairStat<F>>,
}

impl<F: Scalar> ClassPairBreakdown<F> {
    /// Count-weighted mean over all pairs.
    pub fn weighted_total(&self) -> F {
        let mut num = F::zero();
        let mut den = 0u128;
        for s in self.entries.values() {
            num += s.mean * F::of(s.count as f64);
            den += s.count;
        }
        if den == 0 {
            F::zero()
        } else {
            num / F::of(den as f64)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CadiScore<F> {
    pub value: F,
    /// `T` in exact mode, `k` in sampled mode.
    pub triplet_count: u128,
    pub mode: CadiMode,
    pub seed: Option<u64>,
    pub breakdown: Option<ClassPairBreakdown<F>>,
}

/// Squared difference of the cosines at `t.i` in both spaces.
#[inline]
pub fn triplet_contribution<F: Scalar>(x: &Matrix<F>, y: &Matrix<F>, t: &Triplet) -> F {
    let eps = F::of(DEGENERACY_EPS);
    let cx = cosine_unchecked(x.row(t.i), x.row(t.j), x.row(t.k), eps);
    let cy = cosine_unchecked(y.row(t.i), y.row(t.j), y.row(t.k), eps);
    let d = cx - cy;
    d * d
}

/// Mean contribution over a triplet list, with a thread-count independent
/// reduction.
pub fn mean_over_triplets<F: Scalar>(x: &Matrix<F>, y: &Matrix<F>, triplets: &[Triplet]) -> F {
    if triplets.is_empty() {
        return F::zero();
    }
    let sum = chunked_sum(triplets.len(), |s| triplet_contribution(x, y, &triplets[s]));
    sum / F::of_usize(triplets.len())
}

fn check_inputs<F: Scalar>(x: &Matrix<F>, y: &Matrix<F>, c: &Partition) -> Result<()> {
    crate::data::check_aligned(x.rows(), y.rows())?;
    if c.len() != x.rows() {
        return Err(Error::Dimension(format!(
            "partition covers {} points, dataset has {}",
            c.len(),
            x.rows()
        )));
    }
    if count_constrained_triplets(c) == 0 {
        return Err(Error::EmptyTripletSpace);
    }
    Ok(())
}

/// CADI over the full constrained triplet space, with per-class-pair
/// breakdown.
pub fn cadi_exact<F: Scalar>(
    x: &impl AsRef<Matrix<F>>,
    y: &impl AsRef<Matrix<F>>,
    c: &Partition,
) -> Result<CadiScore<F>> {
    let (x, y) = (x.as_ref(), y.as_ref());
    check_inputs(x, y, c)?;
    let classes = c.classes();
    // one unit per (a, b, i); unit sums are reduced in lexicographic order
    let units: Vec<(usize, usize, usize)> = (0..classes.len())
        .flat_map(|a| {
            (0..classes.len())
                .filter(move |&b| b != a && classes[b].len() >= 2)
                .flat_map(move |b| classes[a].iter().map(move |&i| (a, b, i)))
        })
        .collect();
    let unit_sums: Vec<F> = units
        .par_iter()
        .map(|&(_, b, i)| {
            let cb = &classes[b];
            let mut vals = Vec::with_capacity(cb.len() * (cb.len() - 1) / 2);
            for (p, &j) in cb.iter().enumerate() {
                for &k in &cb[p + 1..] {
                    vals.push(triplet_contribution(x, y, &Triplet { i, j, k }));
                }
            }
            pairwise_sum(&vals)
        })
        .collect();

    let total_count = count_constrained_triplets(c);
    let value = pairwise_sum(&unit_sums) / F::of(total_count as f64);

    let mut entries = BTreeMap::new();
    let mut start = 0;
    while start < units.len() {
        let (a, b, _) = units[start];
        let end = start + classes[a].len();
        let count = classes[a].len() as u128 * crate::sampling::choose2(classes[b].len());
        entries.insert(
            (a, b),
            PairStat {
                mean: pairwise_sum(&unit_sums[start..end]) / F::of(count as f64),
                count,
            },
        );
        start = end;
    }

    Ok(CadiScore {
        value,
        triplet_count: total_count,
        mode: CadiMode::Exact,
        seed: None,
        breakdown: Some(ClassPairBreakdown { entries }),
    })
}

/// Monte-Carlo CADI over `k` uniformly sampled constrained triplets.
/// An exhaustive budget falls through to [`cadi_exact`].
pub fn cadi_sampled<F: Scalar>(
    x: &impl AsRef<Matrix<F>>,
    y: &impl AsRef<Matrix<F>>,
    c: &Partition,
    budget: &TripletBudget,
) -> Result<CadiScore<F>> {
    if budget.mode == BudgetMode::Exhaustive {
        return cadi_exact(x, y, c);
    }
    let (x, y) = (x.as_ref(), y.as_ref());
    check_inputs(x, y, c)?;
    let triplets = sample_constrained(c, budget)?;
    let contributions: Vec<F> = triplets
        .par_iter()
        .map(|t| triplet_contribution(x, y, t))
        .collect();
    let value =
        chunked_sum(contributions.len(), |s| contributions[s]) / F::of_usize(triplets.len());

    let mut groups: BTreeMap<(usize, usize), Vec<F>> = BTreeMap::new();
    for (t, &v) in triplets.iter().zip(&contributions) {
        groups
            .entry((c.class_of(t.i), c.class_of(t.j)))
            .or_default()
            .push(v);
    }
    let entries = groups
        .into_iter()
        .map(|(key, vals)| {
            let count = vals.len() as u128;
            let mean = pairwise_sum(&vals) / F::of_usize(vals.len());
            (key, PairStat { mean, count })
        })
        .collect();

    Ok(CadiScore {
        value,
        triplet_count: triplets.len() as u128,
        mode: CadiMode::Sampled,
        seed: Some(budget.seed),
        breakdown: Some(ClassPairBreakdown { entries }),
    })
}

/// Angular Distortion Index: like CADI but over unconstrained triplets.
pub fn adi_sampled<F: Scalar>(
    x: &impl AsRef<Matrix<F>>,
    y: &impl AsRef<Matrix<F>>,
    budget: &TripletBudget,
) -> Result<CadiScore<F>> {
    let (x, y) = (x.as_ref(), y.as_ref());
    crate::data::check_aligned(x.rows(), y.rows())?;
    let n = x.rows();
    let (triplets, mode, seed) = match budget.mode {
        BudgetMode::Exhaustive => {
            if n < 3 {
                return Err(Error::Invalid(format!("ADI needs n >= 3, got {n}")));
            }
            (enumerate_unconstrained(n), CadiMode::Exact, None)
        }
        _ => (
            sample_unconstrained(n, budget)?,
            CadiMode::Sampled,
            Some(budget.seed),
        ),
    };
    Ok(CadiScore {
        value: mean_over_triplets(x, y, &triplets),
        triplet_count: triplets.len() as u128,
        mode,
        seed,
        breakdown: None,
    })
}

/// Score distribution of sampled CADI at one budget multiplier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub multiplier: f64,
    pub k: usize,
    pub repetitions: usize,
    #[serde(flatten)]
    pub summary: Summary,
}

/// Repeats sampled CADI `repetitions` times per multiplier, with seeds
/// `base_seed, base_seed + 1, ...`.
pub fn stability_study<F: Scalar>(
    x: &impl AsRef<Matrix<F>>,
    y: &impl AsRef<Matrix<F>>,
    c: &Partition,
    multipliers: &[f64],
    repetitions: usize,
    base_seed: u64,
) -> Result<Vec<StabilityRow>> {
    if repetitions < 2 {
        return Err(Error::Invalid(format!(
            "stability study needs at least 2 repetitions, got {repetitions}"
        )));
    }
    let (x, y) = (x.as_ref(), y.as_ref());
    check_inputs(x, y, c)?;
    multipliers
        .iter()
        .map(|&m| {
            let budget = TripletBudget::multiplier(m, base_seed);
            let k = budget.resolve(x.rows())?.expect("multiplier budget");
            let values = (0..repetitions)
                .into_par_iter()
                .map(|r| {
                    let b = TripletBudget::absolute(k, base_seed.wrapping_add(r as u64));
                    cadi_sampled(x, y, c, &b).map(|s| s.value.as_f64())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(StabilityRow {
                multiplier: m,
                k,
                repetitions,
                summary: Summary::of(&values),
            })
        })
        .collect()
}
