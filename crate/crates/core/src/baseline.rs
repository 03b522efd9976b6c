//! Classical cluster-level metrics computed from points and labelings:
//! Silhouette, Davies-Bouldin, a scale-invariant Cluster Distance Score,
//! NMI, ARI, and Spearman rank correlation.
//!
//! Labelings are arbitrary `usize` ids; they are remapped densely before use.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::dist;
use crate::summation::pairwise_sum;
use crate::{Error, Matrix, Partition, Result, Scalar};

/// Which way a metric improves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

/// Every metric the harness knows how to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Cadi,
    Adi,
    Silhouette,
    Dbi,
    Cds,
    Nmi,
    Ari,
}

impl MetricKind {
    pub const ALL: [MetricKind; 7] = [
        MetricKind::Cadi,
        MetricKind::Adi,
        MetricKind::Silhouette,
        MetricKind::Dbi,
        MetricKind::Cds,
        MetricKind::Nmi,
        MetricKind::Ari,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Cadi => "cadi",
            MetricKind::Adi => "adi",
            MetricKind::Silhouette => "silhouette",
            MetricKind::Dbi => "dbi",
            MetricKind::Cds => "cds",
            MetricKind::Nmi => "nmi",
            MetricKind::Ari => "ari",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn direction(self) -> Direction {
        match self {
            MetricKind::Cadi | MetricKind::Adi | MetricKind::Dbi | MetricKind::Cds => {
                Direction::LowerIsBetter
            }
            MetricKind::Silhouette | MetricKind::Nmi | MetricKind::Ari => Direction::HigherIsBetter,
        }
    }

    /// Metrics that compare two labelings rather than geometry.
    pub fn needs_clustering(self) -> bool {
        matches!(self, MetricKind::Nmi | MetricKind::Ari)
    }
}

fn dense(labels: &[usize]) -> Partition {
    Partition::from_labels(labels)
}

fn check_len<F: Scalar>(points: &Matrix<F>, labels: &[usize]) -> Result<()> {
    if points.rows() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} labels for {} points",
            labels.len(),
            points.rows()
        )));
    }
    Ok(())
}

/// Mean silhouette coefficient. Points in singleton classes contribute 0.
pub fn silhouette<F: Scalar>(points: &Matrix<F>, labels: &[usize]) -> Result<F> {
    check_len(points, labels)?;
    let p = dense(labels);
    let n = points.rows();
    if n < 2 {
        return Err(Error::Invalid("silhouette needs at least 2 points".into()));
    }
    if p.m() < 2 {
        return Err(Error::Invalid("silhouette needs at least 2 classes".into()));
    }
    if p.m() >= n {
        return Err(Error::Invalid(
            "silhouette needs fewer classes than points".into(),
        ));
    }
    let sizes = p.class_sizes();
    let coeffs: Vec<F> = (0..n)
        .into_par_iter()
        .map(|i| {
            let own = p.class_of(i);
            if sizes[own] == 1 {
                return F::zero();
            }
            let mut sums = vec![F::zero(); p.m()];
            let xi = points.row(i);
            for j in 0..n {
                if j != i {
                    sums[p.class_of(j)] += dist(xi, points.row(j));
                }
            }
            let a = sums[own] / F::of_usize(sizes[own] - 1);
            let b = (0..p.m())
                .filter(|&c| c != own)
                .map(|c| sums[c] / F::of_usize(sizes[c]))
                .fold(F::infinity(), F::min);
            let denom = a.max(b);
            if denom > F::zero() {
                (b - a) / denom
            } else {
                F::zero()
            }
        })
        .collect();
    Ok(pairwise_sum(&coeffs) / F::of_usize(n))
}

/// Per-class centroids, in dense class order.
pub fn centroids<F: Scalar>(points: &Matrix<F>, p: &Partition) -> Matrix<F> {
    let mut c = Matrix::zeros(p.m(), points.cols());
    for (ci, members) in p.classes().iter().enumerate() {
        let row = c.row_mut(ci);
        for &i in members {
            for (a, &v) in row.iter_mut().zip(points.row(i)) {
                *a += v;
            }
        }
        let size = F::of_usize(members.len());
        row.iter_mut().for_each(|a| *a /= size);
    }
    c
}

/// Davies-Bouldin index. Coincident centroids make the index infinite;
/// callers treat a non-finite result as a flagged sentinel.
pub fn davies_bouldin<F: Scalar>(points: &Matrix<F>, labels: &[usize]) -> Result<F> {
    check_len(points, labels)?;
    let p = dense(labels);
    if p.m() < 2 {
        return Err(Error::Invalid(
            "Davies-Bouldin needs at least 2 classes".into(),
        ));
    }
    let c = centroids(points, &p);
    let scatter: Vec<F> = p
        .classes()
        .iter()
        .enumerate()
        .map(|(ci, members)| {
            let d: Vec<F> = members
                .iter()
                .map(|&i| dist(points.row(i), c.row(ci)))
                .collect();
            pairwise_sum(&d) / F::of_usize(members.len())
        })
        .collect();
    let worst: Vec<F> = (0..p.m())
        .map(|i| {
            (0..p.m())
                .filter(|&j| j != i)
                .map(|j| {
                    let d = dist(c.row(i), c.row(j));
                    if d > F::zero() {
                        (scatter[i] + scatter[j]) / d
                    } else {
                        F::infinity()
                    }
                })
                .fold(F::neg_infinity(), F::max)
        })
        .collect();
    Ok(pairwise_sum(&worst) / F::of_usize(p.m()))
}

/// Scale-normalized stress between high- and low-dimensional centroid
/// distances: `min_s sum (dH - s dL)^2 / sum dH^2`.
///
/// Fails with [`Error::Degenerate`] for fewer than three classes.
pub fn cluster_distance_score<F: Scalar>(
    x: &Matrix<F>,
    y: &Matrix<F>,
    labels: &[usize],
) -> Result<F> {
    check_len(x, labels)?;
    check_len(y, labels)?;
    let p = dense(labels);
    if p.m() < 3 {
        return Err(Error::Degenerate(format!(
            "cluster distance score needs at least 3 classes, got {}",
            p.m()
        )));
    }
    let (cx, cy) = (centroids(x, &p), centroids(y, &p));
    let mut dh = Vec::new();
    let mut dl = Vec::new();
    for a in 0..p.m() {
        for b in a + 1..p.m() {
            dh.push(dist(cx.row(a), cx.row(b)));
            dl.push(dist(cy.row(a), cy.row(b)));
        }
    }
    Ok(normalized_stress(&dh, &dl)?.0)
}

/// Returns `(stress, optimal scale)`.
pub(crate) fn normalized_stress<F: Scalar>(dh: &[F], dl: &[F]) -> Result<(F, F)> {
    let hh: Vec<F> = dh.iter().map(|&h| h * h).collect();
    let hl: Vec<F> = dh.iter().zip(dl).map(|(&h, &l)| h * l).collect();
    let ll: Vec<F> = dl.iter().map(|&l| l * l).collect();
    let (shh, shl, sll) = (pairwise_sum(&hh), pairwise_sum(&hl), pairwise_sum(&ll));
    if shh <= F::zero() {
        return Err(Error::Degenerate(
            "all high-dimensional centroids coincide".into(),
        ));
    }
    let s = if sll > F::zero() {
        shl / sll
    } else {
        F::zero()
    };
    let r: Vec<F> = dh
        .iter()
        .zip(dl)
        .map(|(&h, &l)| {
            let e = h - s * l;
            e * e
        })
        .collect();
    Ok((pairwise_sum(&r) / shh, s))
}

/// Dense contingency counts between two labelings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "labelings have lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        let (pa, pb) = (dense(a), dense(b));
        let mut counts = vec![vec![0u64; pb.m()]; pa.m()];
        for i in 0..a.len() {
            counts[pa.class_of(i)][pb.class_of(i)] += 1;
        }
        Ok(Self {
            row_sums: pa.class_sizes().into_iter().map(|s| s as u64).collect(),
            col_sums: pb.class_sizes().into_iter().map(|s| s as u64).collect(),
            total: a.len() as u64,
            counts,
        })
    }
}

fn entropy<F: Scalar>(sizes: &[u64], n: F) -> F {
    let terms: Vec<F> = sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = F::of(s as f64) / n;
            -p * p.ln()
        })
        .collect();
    pairwise_sum(&terms)
}

/// Normalized mutual information, `I(A;B) / mean(H(A), H(B))`, natural logs.
pub fn nmi<F: Scalar>(a: &[usize], b: &[usize]) -> Result<F> {
    if a.is_empty() {
        return Err(Error::Invalid("NMI of empty labelings".into()));
    }
    let t = ContingencyTable::new(a, b)?;
    let n = F::of(t.total as f64);
    let (ha, hb) = (entropy(&t.row_sums, n), entropy(&t.col_sums, n));
    if t.row_sums.len() == 1 && t.col_sums.len() == 1 {
        return Ok(F::one());
    }
    let mut terms = Vec::new();
    for (r, row) in t.counts.iter().enumerate() {
        for (c, &nij) in row.iter().enumerate() {
            if nij == 0 {
                continue;
            }
            let pij = F::of(nij as f64) / n;
            let ratio = F::of(nij as f64 * t.total as f64)
                / F::of(t.row_sums[r] as f64 * t.col_sums[c] as f64);
            terms.push(pij * ratio.ln());
        }
    }
    let mi = pairwise_sum(&terms).max(F::zero());
    let denom = (ha + hb) / F::of(2.0);
    if mi <= F::zero() || denom <= F::zero() {
        return Ok(F::zero());
    }
    Ok((mi / denom).min(F::one()))
}

fn comb2(v: u64) -> f64 {
    (v as f64) * (v.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index (pair-counting form).
pub fn ari<F: Scalar>(a: &[usize], b: &[usize]) -> Result<F> {
    if a.len() < 2 {
        return Err(Error::Invalid("ARI needs at least 2 points".into()));
    }
    let t = ContingencyTable::new(a, b)?;
    let index: f64 = t.counts.iter().flatten().map(|&c| comb2(c)).sum();
    let sa: f64 = t.row_sums.iter().map(|&c| comb2(c)).sum();
    let sb: f64 = t.col_sums.iter().map(|&c| comb2(c)).sum();
    let expected = sa * sb / comb2(t.total);
    let max = (sa + sb) / 2.0;
    let denom = max - expected;
    if denom == 0.0 {
        // only when both labelings are constant or both all-singletons
        return Ok(F::one());
    }
    Ok(F::of((index - expected) / denom))
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks<F: Scalar>(xs: &[F]) -> Vec<F> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).expect("finite values"));
    let mut ranks = vec![F::zero(); xs.len()];
    let mut s = 0;
    while s < order.len() {
        let mut e = s + 1;
        while e < order.len() && xs[order[e]] == xs[order[s]] {
            e += 1;
        }
        let r = F::of((s + 1 + e) as f64 / 2.0);
        for &o in &order[s..e] {
            ranks[o] = r;
        }
        s = e;
    }
    ranks
}

/// Pearson correlation; `None` when either series is constant.
pub fn pearson<F: Scalar>(xs: &[F], ys: &[F]) -> Option<F> {
    let n = F::of_usize(xs.len());
    let mx = xs.iter().copied().sum::<F>() / n;
    let my = ys.iter().copied().sum::<F>() / n;
    let (mut sxy, mut sxx, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= F::zero() || syy <= F::zero() {
        return None;
    }
    Some(
        (sxy / (sxx.sqrt() * syy.sqrt()))
            .max(-F::one())
            .min(F::one()),
    )
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman<F: Scalar>(xs: &[F], ys: &[F]) -> Result<F> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "series have lengths {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Invalid(
            "Spearman needs at least 2 observations".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("Spearman needs finite values".into()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
        .ok_or_else(|| Error::Degenerate("constant series has no rank correlation".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn silhouette_far_clusters() {
        let p = m(&[[0.0, 0.0], [0.0, 1.0], [100.0, 0.0], [100.0, 1.0]]);
        let s = silhouette(&p, &[0, 0, 1, 1]).unwrap();
        assert!(s > 0.98, "{s}");
    }

    #[test]
    fn silhouette_overlapping_clusters_non_positive() {
        let p = m(&[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        assert!(silhouette(&p, &[0, 0, 1, 1]).unwrap() <= 0.0);
    }

    #[test]
    fn silhouette_errors() {
        let p = m(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(silhouette(&p, &[0, 0, 0]).is_err());
        assert!(silhouette(&p, &[0, 1, 2]).is_err());
        assert!(silhouette(&p, &[0, 1]).is_err());
    }

    #[test]
    fn silhouette_singleton_contributes_zero() {
        let p = m(&[[0.0, 0.0], [0.0, 1.0], [50.0, 0.0]]);
        let s = silhouette(&p, &[0, 0, 1]).unwrap();
        // two non-singleton points, each with a = 1 and b ~ 50
        let b0 = 50.0;
        let b1 = (50.0f64.powi(2) + 1.0).sqrt();
        let expected = ((b0 - 1.0) / b0 + (b1 - 1.0) / b1) / 3.0;
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn dbi_examples() {
        let p = m(&[[0.0, 0.0], [2.0, 0.0], [10.0, 0.0], [12.0, 0.0]]);
        assert!((davies_bouldin(&p, &[0, 0, 1, 1]).unwrap() - 0.2).abs() < 1e-12);
        let tight = m(&[[0.0, 0.0], [0.0, 0.0], [1e6, 0.0], [1e6, 0.0]]);
        assert_eq!(davies_bouldin(&tight, &[0, 0, 1, 1]).unwrap(), 0.0);
        let coincident = m(&[[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]]);
        assert!(davies_bouldin(&coincident, &[0, 0, 1, 1])
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn cds_examples() {
        // one point per class so the centroids are the points themselves
        let x = m(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        let y = Matrix::from_rows(&[[5.0, 5.0], [5.0, 7.0], [5.0, 9.0]]).unwrap();
        assert!(cluster_distance_score(&x, &y, &[0, 1, 2]).unwrap().abs() < 1e-15);

        // high-D distances (1, 1, 2), low-D distances (1, 2, 3)
        let y = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]]).unwrap();
        let v = cluster_distance_score(&x, &y, &[0, 1, 2]).unwrap();
        let (dh, dl) = ([1.0, 2.0, 1.0], [1.0, 3.0, 2.0]);
        // scalar grid oracle
        let f = |s: f64| {
            dh.iter()
                .zip(&dl)
                .map(|(h, l)| (h - s * l).powi(2))
                .sum::<f64>()
                / dh.iter().map(|h| h * h).sum::<f64>()
        };
        let grid_min = (0..=200_000)
            .map(|i| f(i as f64 * 1e-5))
            .fold(f64::INFINITY, f64::min);
        // closed form: s* = 9/14, stress = (6 - 81/14) / 6
        assert!((v - (6.0 - 81.0 / 14.0) / 6.0).abs() < 1e-15);
        assert!((v - grid_min).abs() < 1e-9);

        assert!(matches!(
            cluster_distance_score(&x, &y, &[0, 0, 1]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn nmi_examples() {
        assert!((nmi::<f64>(&[0, 0, 1, 1, 2], &[3, 3, 7, 7, 1]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(nmi::<f64>(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert_eq!(nmi::<f64>(&[4, 4, 4], &[1, 1, 1]).unwrap(), 1.0);
        assert_eq!(nmi::<f64>(&[0, 0, 0, 0], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert!(nmi::<f64>(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn ari_examples() {
        assert_eq!(ari::<f64>(&[0, 0, 1, 1], &[5, 5, 2, 2]).unwrap(), 1.0);
        assert_eq!(ari::<f64>(&[0, 0, 0, 0], &[0, 1, 0, 2]).unwrap(), 0.0);
        // pairs: (01) same/same, (23) same/diff, others diff/diff
        // index = 1, sa = 2, sb = 1, expected = 2/6, max = 1.5
        let v = ari::<f64>(&[0, 0, 1, 1], &[0, 0, 1, 2]).unwrap();
        assert!((v - (1.0 - 1.0 / 3.0) / (1.5 - 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(ari::<f64>(&[0, 1, 2], &[0, 1, 2]).unwrap(), 1.0);
        assert!(ari::<f64>(&[0], &[0]).is_err());
    }

    #[test]
    fn spearman_examples() {
        let inc = [1.0f64, 2.0, 3.0, 4.0];
        assert!((spearman(&inc, &[10.0, 20.0, 30.0, 40.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&inc, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        // ranks [1, 2.5, 2.5, 4] vs [1, 3, 2, 4]
        let v = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        let expected = 4.5 / (4.5f64.sqrt() * 5.0f64.sqrt());
        assert!((v - expected).abs() < 1e-15);
        assert!(matches!(
            spearman(&inc, &[1.0; 4]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn metric_registry() {
        for k in MetricKind::ALL {
            assert_eq!(MetricKind::parse(k.name()), Some(k));
        }
        assert_eq!(MetricKind::Cadi.direction(), Direction::LowerIsBetter);
        assert_eq!(
            MetricKind::Silhouette.direction(),
            Direction::HigherIsBetter
        );
        assert!(MetricKind::parse("stress").is_none());
    }
}
