//! Brute-force reference implementations used as oracles by the
//! integration tests. They favour the most literal formula over speed and
//! share no code with the library beyond the matrix type.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cadi::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize, scale: f64) -> Matrix<f64> {
    let data = (0..n * d)
        .map(|_| scale * rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    Matrix::new(n, d, data).unwrap()
}

/// Labels in `0..m` with every class present.
pub fn covering_labels(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n)
        .map(|i| if i < m { i } else { rng.random_range(0..m) })
        .collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    labels
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Cosine of the angle at `i`; 1 when either edge is shorter than 1e-12.
pub fn angle_cos(p: &Matrix<f64>, i: usize, j: usize, k: usize) -> f64 {
    let u: Vec<f64> = (0..p.cols()).map(|c| p[(j, c)] - p[(i, c)]).collect();
    let v: Vec<f64> = (0..p.cols()).map(|c| p[(k, c)] - p[(i, c)]).collect();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu < 1e-12 || nv < 1e-12 {
        return 1.0;
    }
    (u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / (nu * nv)).clamp(-1.0, 1.0)
}

/// O(n^3) CADI over every constrained triplet.
pub fn brute_cadi(x: &Matrix<f64>, y: &Matrix<f64>, labels: &[usize]) -> f64 {
    let n = labels.len();
    let (mut sum, mut count) = (0.0, 0u64);
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                if labels[j] == labels[k] && labels[j] != labels[i] {
                    let d = angle_cos(x, i, j, k) - angle_cos(y, i, j, k);
                    sum += d * d;
                    count += 1;
                }
            }
        }
    }
    sum / count as f64
}

pub fn brute_silhouette(p: &Matrix<f64>, labels: &[usize]) -> f64 {
    let n = labels.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut per_class: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for j in 0..n {
            if j != i {
                let e = per_class.entry(labels[j]).or_insert((0.0, 0));
                e.0 += euclid(p.row(i), p.row(j));
                e.1 += 1;
            }
        }
        let Some(&(own_sum, own_count)) = per_class.get(&labels[i]) else {
            continue;
        };
        let a = own_sum / own_count as f64;
        let b = per_class
            .iter()
            .filter(|(c, _)| **c != labels[i])
            .map(|(_, (s, c))| s / *c as f64)
            .fold(f64::INFINITY, f64::min);
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / n as f64
}

fn class_members(labels: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        m.entry(l).or_default().push(i);
    }
    m
}

fn centroid(p: &Matrix<f64>, members: &[usize]) -> Vec<f64> {
    (0..p.cols())
        .map(|c| members.iter().map(|&i| p[(i, c)]).sum::<f64>() / members.len() as f64)
        .collect()
}

pub fn brute_dbi(p: &Matrix<f64>, labels: &[usize]) -> f64 {
    let classes: Vec<Vec<usize>> = class_members(labels).into_values().collect();
    let cents: Vec<Vec<f64>> = classes.iter().map(|m| centroid(p, m)).collect();
    let spread: Vec<f64> = classes
        .iter()
        .zip(&cents)
        .map(|(m, c)| m.iter().map(|&i| euclid(p.row(i), c)).sum::<f64>() / m.len() as f64)
        .collect();
    let q = classes.len();
    let mut total = 0.0;
    for a in 0..q {
        let mut worst = f64::NEG_INFINITY;
        for b in 0..q {
            if a != b {
                worst = worst.max((spread[a] + spread[b]) / euclid(&cents[a], &cents[b]));
            }
        }
        total += worst;
    }
    total / q as f64
}

/// Stress minimized over the scale by ternary search rather than the
/// closed form.
pub fn brute_cds(x: &Matrix<f64>, y: &Matrix<f64>, labels: &[usize]) -> f64 {
    let classes: Vec<Vec<usize>> = class_members(labels).into_values().collect();
    let cx: Vec<Vec<f64>> = classes.iter().map(|m| centroid(x, m)).collect();
    let cy: Vec<Vec<f64>> = classes.iter().map(|m| centroid(y, m)).collect();
    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            pairs.push((euclid(&cx[a], &cx[b]), euclid(&cy[a], &cy[b])));
        }
    }
    let hh: f64 = pairs.iter().map(|(h, _)| h * h).sum();
    let ll: f64 = pairs.iter().map(|(_, l)| l * l).sum();
    let stress = |s: f64| pairs.iter().map(|(h, l)| (h - s * l).powi(2)).sum::<f64>() / hh;
    let (mut lo, mut hi) = (0.0, (hh / ll).sqrt());
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if stress(m1) <= stress(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    stress((lo + hi) / 2.0)
}

pub fn brute_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut pa: BTreeMap<usize, f64> = BTreeMap::new();
    let mut pb: BTreeMap<usize, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0 / n;
        *pa.entry(x).or_default() += 1.0 / n;
        *pb.entry(y).or_default() += 1.0 / n;
    }
    if pa.len() == 1 && pb.len() == 1 {
        return 1.0;
    }
    let h = |p: &BTreeMap<usize, f64>| -p.values().map(|v| v * v.ln()).sum::<f64>();
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &p)| p * (p / (pa[&x] * pb[&y])).ln())
        .sum();
    let denom = (h(&pa) + h(&pb)) / 2.0;
    if mi <= 0.0 || denom <= 0.0 {
        0.0
    } else {
        (mi / denom).min(1.0)
    }
}

/// ARI from the four pair-agreement counts.
pub fn brute_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut ss, mut sd, mut ds, mut dd) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => ss += 1.0,
                (true, false) => sd += 1.0,
                (false, true) => ds += 1.0,
                (false, false) => dd += 1.0,
            }
        }
    }
    let denom = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
    if denom == 0.0 {
        return 1.0;
    }
    2.0 * (ss * dd - sd * ds) / denom
}

pub fn brute_spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    let rank = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|a| {
                let less = v.iter().filter(|b| *b < a).count() as f64;
                let equal = v.iter().filter(|b| *b == a).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        None
    } else {
        Some(cov / (vx * vy).sqrt())
    }
}
