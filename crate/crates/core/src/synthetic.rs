//! Synthetic benchmark datasets: nested (hyper)spheres, a chain of linked
//! rings in high dimension, nested tori, and nested dumbbells
//! ("matryoshka"). Every generator is deterministic for a fixed seed.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::sampling::rng_from_seed;
use crate::{Dataset, Error, Matrix, Result};

/// The five benchmark datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntheticName {
    Rings,
    Concentric3,
    Concentric4,
    Donuts,
    Matryoshka,
}

impl SyntheticName {
    pub const ALL: [SyntheticName; 5] = [
        SyntheticName::Rings,
        SyntheticName::Concentric3,
        SyntheticName::Concentric4,
        SyntheticName::Donuts,
        SyntheticName::Matryoshka,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SyntheticName::Rings => "rings",
            SyntheticName::Concentric3 => "concentric3",
            SyntheticName::Concentric4 => "concentric4",
            SyntheticName::Donuts => "donuts",
            SyntheticName::Matryoshka => "matryoshka",
        }
    }
}

impl fmt::Display for SyntheticName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SyntheticName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown synthetic dataset `{s}`")))
    }
}

/// Generates a named dataset with default geometry. `fraction` scales the
/// per-class point counts (1.0 gives the full benchmark size).
pub fn generate(name: SyntheticName, seed: u64, fraction: f64) -> Result<Dataset<f64>> {
    if !(fraction > 0.0 && fraction.is_finite()) {
        return Err(Error::Invalid(format!(
            "size fraction must be positive, got {fraction}"
        )));
    }
    let scaled = |count: usize, min: usize| ((count as f64 * fraction).round() as usize).max(min);
    match name {
        SyntheticName::Concentric3 => {
            let c = ConcentricConfig::concentric3(seed);
            gen_concentric(
                c.dim,
                c.radii.len(),
                scaled(c.per_sphere, 1),
                &c.radii,
                seed,
            )
        }
        SyntheticName::Concentric4 => {
            let c = ConcentricConfig::concentric4(seed);
            gen_concentric(
                c.dim,
                c.radii.len(),
                scaled(c.per_sphere, 1),
                &c.radii,
                seed,
            )
        }
        SyntheticName::Rings => {
            let c = RingsConfig {
                per_ring: scaled(RingsConfig::default().per_ring, 3),
                seed,
                ..RingsConfig::default()
            };
            gen_rings(&c)
        }
        SyntheticName::Donuts => {
            let c = DonutsConfig {
                per_torus: scaled(DonutsConfig::default().per_torus, 1),
                seed,
                ..DonutsConfig::default()
            };
            gen_donuts(&c)
        }
        SyntheticName::Matryoshka => {
            let c = MatryoshkaConfig {
                total_n: scaled(MatryoshkaConfig::default().total_n, 7),
                seed,
                ..MatryoshkaConfig::default()
            };
            gen_matryoshka(&c)
        }
    }
}

fn labelled(rows: usize, d: usize, data: Vec<f64>, labels: Vec<usize>) -> Result<Dataset<f64>> {
    Dataset::new(Matrix::new(rows, d, data)?, &labels)
}

fn unit_gaussian<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentricConfig {
    pub dim: usize,
    pub per_sphere: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
}

impl ConcentricConfig {
    pub fn concentric3(seed: u64) -> Self {
        Self {
            dim: 3,
            per_sphere: 552,
            radii: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            seed,
        }
    }

    pub fn concentric4(seed: u64) -> Self {
        Self {
            dim: 4,
            per_sphere: 648,
            ..Self::concentric3(seed)
        }
    }
}

/// Points uniform on nested (hyper)sphere surfaces centred at the origin;
/// class `c` lies on the sphere of radius `radii[c]`.
pub fn gen_concentric(
    dim: usize,
    n_spheres: usize,
    per_sphere: usize,
    radii: &[f64],
    seed: u64,
) -> Result<Dataset<f64>> {
    if radii.len() != n_spheres {
        return Err(Error::Invalid(format!(
            "{n_spheres} spheres but {} radii",
            radii.len()
        )));
    }
    if dim < 1 || per_sphere < 1 {
        return Err(Error::Invalid(
            "dimension and points per sphere must be positive".into(),
        ));
    }
    if radii.first().is_some_and(|&r| r <= 0.0) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut data = Vec::with_capacity(n_spheres * per_sphere * dim);
    let mut labels = Vec::with_capacity(n_spheres * per_sphere);
    for (c, &r) in radii.iter().enumerate() {
        for _ in 0..per_sphere {
            data.extend(unit_gaussian(&mut rng, dim).into_iter().map(|v| v * r));
            labels.push(c);
        }
    }
    labelled(labels.len(), dim, data, labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingsConfig {
    pub n_rings: usize,
    pub per_ring: usize,
    pub ambient_dim: usize,
    pub ring_radius: f64,
    /// Distance between consecutive ring centres along the shared axis.
    pub spacing: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for RingsConfig {
    fn default() -> Self {
        Self {
            n_rings: 20,
            per_ring: 200,
            ambient_dim: 100,
            ring_radius: 1.0,
            spacing: 0.9,
            noise_sigma: 0.01,
            seed: 0,
        }
    }
}

/// A chain of circles. Ring `r` lies in the plane of axes `e_r` and
/// `e_{n_rings}` (shared by every ring), centred at `r * spacing` along the
/// shared axis, so ring planes are mutually orthogonal in their private axes
/// and consecutive rings interlock when `spacing < ring_radius`.
pub fn gen_rings(cfg: &RingsConfig) -> Result<Dataset<f64>> {
    if cfg.ambient_dim < cfg.n_rings + 1 {
        return Err(Error::Invalid(format!(
            "{} rings need at least {} ambient dimensions, got {}",
            cfg.n_rings,
            cfg.n_rings + 1,
            cfg.ambient_dim
        )));
    }
    if cfg.per_ring < 3 {
        return Err(Error::Invalid("each ring needs at least 3 points".into()));
    }
    if cfg.ring_radius.is_nan()
        || cfg.ring_radius <= 0.0
        || cfg.spacing.is_nan()
        || cfg.spacing <= 0.0
    {
        return Err(Error::Invalid(
            "ring radius and spacing must be positive".into(),
        ));
    }
    if cfg.spacing >= 2.0 * cfg.ring_radius {
        return Err(Error::Invalid(format!(
            "spacing {} breaks the chain of rings with radius {}",
            cfg.spacing, cfg.ring_radius
        )));
    }
    if cfg.noise_sigma.is_nan() || cfg.noise_sigma < 0.0 {
        return Err(Error::Invalid("noise sigma must be non-negative".into()));
    }
    let d = cfg.ambient_dim;
    let shared = cfg.n_rings;
    let mut rng = rng_from_seed(cfg.seed);
    let noise = Normal::new(0.0, cfg.noise_sigma).expect("valid sigma");
    let mut data = vec![0.0; cfg.n_rings * cfg.per_ring * d];
    let mut labels = Vec::with_capacity(cfg.n_rings * cfg.per_ring);
    for r in 0..cfg.n_rings {
        let centre = r as f64 * cfg.spacing;
        for _ in 0..cfg.per_ring {
            let phi = rng.random_range(0.0..2.0 * PI);
            let row = &mut data[labels.len() * d..(labels.len() + 1) * d];
            row[r] = cfg.ring_radius * phi.cos();
            row[shared] = centre + cfg.ring_radius * phi.sin();
            if cfg.noise_sigma > 0.0 {
                for v in row.iter_mut() {
                    *v += noise.sample(&mut rng);
                }
            }
            labels.push(r);
        }
    }
    labelled(labels.len(), d, data, labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DonutsConfig {
    pub per_torus: usize,
    pub major_radii: Vec<f64>,
    pub minor_radii: Vec<f64>,
    pub seed: u64,
}

impl Default for DonutsConfig {
    fn default() -> Self {
        Self {
            per_torus: 1250,
            major_radii: vec![2.0, 4.0, 6.0],
            minor_radii: vec![0.5, 0.5, 0.5],
            seed: 0,
        }
    }
}

/// Co-axial, co-planar tori around the z axis, sampled uniformly by area.
pub fn gen_donuts(cfg: &DonutsConfig) -> Result<Dataset<f64>> {
    let (big, small) = (&cfg.major_radii, &cfg.minor_radii);
    if big.len() != small.len() || big.is_empty() {
        return Err(Error::Invalid(
            "need one minor radius per major radius".into(),
        ));
    }
    if cfg.per_torus < 1 {
        return Err(Error::Invalid("points per torus must be positive".into()));
    }
    for (&rr, &r) in big.iter().zip(small) {
        if !(r > 0.0 && rr > r) {
            return Err(Error::Invalid(format!(
                "torus with R = {rr}, r = {r} is not a ring torus"
            )));
        }
    }
    for w in 0..big.len() - 1 {
        if big[w] + small[w] >= big[w + 1] - small[w + 1] {
            return Err(Error::Invalid(format!("tori {w} and {} intersect", w + 1)));
        }
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut data = Vec::with_capacity(big.len() * cfg.per_torus * 3);
    let mut labels = Vec::with_capacity(big.len() * cfg.per_torus);
    for (c, (&rr, &r)) in big.iter().zip(small).enumerate() {
        for _ in 0..cfg.per_torus {
            let u = rng.random_range(0.0..2.0 * PI);
            // area element is proportional to R + r cos v
            let v = loop {
                let v = rng.random_range(0.0..2.0 * PI);
                if rng.random::<f64>() * (rr + r) <= rr + r * v.cos() {
                    break v;
                }
            };
            let w = rr + r * v.cos();
            data.extend([w * u.cos(), w * u.sin(), r * v.sin()]);
            labels.push(c);
        }
    }
    labelled(labels.len(), 3, data, labels)
}

/// Surface of two spheres at `(+-offset, 0, 0)` joined by a cylindrical
/// neck along the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dumbbell {
    pub sphere_radius: f64,
    pub neck_radius: f64,
    pub offset: f64,
}

impl Dumbbell {
    /// Distance from a sphere centre to the neck junction plane.
    fn junction(&self) -> f64 {
        (self.sphere_radius.powi(2) - self.neck_radius.powi(2)).sqrt()
    }

    /// Half-length of the exposed neck.
    fn neck_half_length(&self) -> f64 {
        self.offset - self.junction()
    }

    fn sphere_part_area(&self) -> f64 {
        let cap = 2.0 * PI * self.sphere_radius * (self.sphere_radius - self.junction());
        4.0 * PI * self.sphere_radius.powi(2) - cap
    }

    fn neck_area(&self) -> f64 {
        2.0 * PI * self.neck_radius * 2.0 * self.neck_half_length()
    }

    pub fn area(&self) -> f64 {
        2.0 * self.sphere_part_area() + self.neck_area()
    }

    /// Strict membership in the solid bounded by this surface.
    pub fn contains_strictly(&self, p: &[f64]) -> bool {
        let radial2 = p[1] * p[1] + p[2] * p[2];
        let in_ball = |cx: f64| (p[0] - cx).powi(2) + radial2 < self.sphere_radius.powi(2);
        in_ball(self.offset)
            || in_ball(-self.offset)
            || (p[0].abs() <= self.offset && radial2 < self.neck_radius.powi(2))
    }

    /// Distance of `p` to the surface, for points generated on it.
    pub fn surface_residual(&self, p: &[f64]) -> f64 {
        let radial = (p[1] * p[1] + p[2] * p[2]).sqrt();
        let centre = if p[0] >= 0.0 {
            self.offset
        } else {
            -self.offset
        };
        let to_sphere = ((p[0] - centre).powi(2) + radial * radial).sqrt() - self.sphere_radius;
        if p[0].abs() <= self.neck_half_length() + 1e-12 {
            (radial - self.neck_radius).abs().min(to_sphere.abs())
        } else {
            to_sphere.abs()
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 3] {
        let sphere = self.sphere_part_area();
        let total = self.area();
        let pick = rng.random::<f64>() * total;
        if pick < 2.0 * sphere {
            let side = if pick < sphere { 1.0 } else { -1.0 };
            // the cap facing the other sphere is hidden inside the neck
            let limit = self.junction() / self.sphere_radius;
            loop {
                let u = unit_gaussian(rng, 3);
                if side * u[0] >= -limit {
                    return [
                        side * self.offset + self.sphere_radius * u[0],
                        self.sphere_radius * u[1],
                        self.sphere_radius * u[2],
                    ];
                }
            }
        }
        let h = self.neck_half_length();
        let x = rng.random_range(-h..h);
        let a = rng.random_range(0.0..2.0 * PI);
        [x, self.neck_radius * a.cos(), self.neck_radius * a.sin()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatryoshkaConfig {
    pub total_n: usize,
    /// Sphere radius of the innermost dumbbell.
    pub sphere_radius: f64,
    /// Neck radius as a fraction of the sphere radius.
    pub neck_ratio: f64,
    /// Sphere centres sit at `(+-offset, 0, 0)` for every dumbbell.
    pub offset: f64,
    /// Radius multipliers of the nested dumbbells, strictly increasing.
    pub scales: Vec<f64>,
    /// Radii of the concentric hollow spheres placed inside each end of the
    /// innermost dumbbell, as fractions of `sphere_radius`.
    pub inner_ratios: Vec<f64>,
    pub seed: u64,
}

impl Default for MatryoshkaConfig {
    fn default() -> Self {
        Self {
            total_n: 6400,
            sphere_radius: 1.0,
            neck_ratio: 0.5,
            offset: 3.0,
            scales: vec![1.0, 1.5, 2.0],
            inner_ratios: vec![1.0 / 3.0, 2.0 / 3.0],
            seed: 0,
        }
    }
}

impl MatryoshkaConfig {
    pub fn dumbbells(&self) -> Vec<Dumbbell> {
        self.scales
            .iter()
            .map(|&s| Dumbbell {
                sphere_radius: s * self.sphere_radius,
                neck_radius: s * self.sphere_radius * self.neck_ratio,
                offset: self.offset,
            })
            .collect()
    }

    /// `(centre x, radius)` of every inner sphere, in class order: the
    /// spheres at `-offset` first, then those at `+offset`.
    pub fn inner_spheres(&self) -> Vec<(f64, f64)> {
        [-self.offset, self.offset]
            .into_iter()
            .flat_map(|c| self.inner_ratios.iter().map(move |&f| (c, f)))
            .map(|(c, f)| (c, f * self.sphere_radius))
            .collect()
    }

    /// Points per class: dumbbells in scale order, then the inner spheres,
    /// split proportionally to surface area.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut areas: Vec<f64> = self.dumbbells().iter().map(Dumbbell::area).collect();
        areas.extend(self.inner_spheres().iter().map(|&(_, r)| 4.0 * PI * r * r));
        apportion(self.total_n, &areas)
    }
}

/// Largest-remainder split of `total` proportional to `weights`, at least
/// one point per class.
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q.floor() as usize).max(1)).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut assigned: usize = counts.iter().sum();
    let mut idx = 0;
    while assigned < total {
        counts[order[idx % order.len()]] += 1;
        assigned += 1;
        idx += 1;
    }
    while assigned > total {
        let biggest = (0..counts.len())
            .max_by_key(|&c| counts[c])
            .expect("non-empty");
        counts[biggest] -= 1;
        assigned -= 1;
    }
    counts
}

/// Nested dumbbell surfaces with concentric hollow spheres inside both ends
/// of the innermost one. Each surface is its own class.
pub fn gen_matryoshka(cfg: &MatryoshkaConfig) -> Result<Dataset<f64>> {
    if cfg.scales.is_empty() || cfg.scales[0] <= 0.0 || cfg.scales.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::Invalid(
            "dumbbell scales must be positive and increasing".into(),
        ));
    }
    if !(cfg.sphere_radius > 0.0 && cfg.neck_ratio > 0.0 && cfg.neck_ratio < 1.0) {
        return Err(Error::Invalid(
            "need sphere radius > 0 and neck ratio in (0, 1)".into(),
        ));
    }
    if cfg.inner_ratios.first().is_some_and(|&f| f <= 0.0)
        || cfg.inner_ratios.last().is_some_and(|&f| f >= 1.0)
        || cfg.inner_ratios.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::Invalid(
            "inner sphere ratios must be increasing within (0, 1)".into(),
        ));
    }
    let largest = cfg.sphere_radius * cfg.scales[cfg.scales.len() - 1];
    if cfg.offset <= largest {
        return Err(Error::Invalid(format!(
            "offset {} lets the end spheres of radius {largest} overlap",
            cfg.offset
        )));
    }
    let counts = cfg.class_counts();
    if cfg.total_n < counts.len() {
        return Err(Error::Invalid("too few points for every class".into()));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut data = Vec::with_capacity(cfg.total_n * 3);
    let mut labels = Vec::with_capacity(cfg.total_n);
    let shells = cfg.dumbbells();
    for (c, shell) in shells.iter().enumerate() {
        for _ in 0..counts[c] {
            data.extend(shell.sample(&mut rng));
            labels.push(c);
        }
    }
    for (s, (centre, r)) in cfg.inner_spheres().into_iter().enumerate() {
        let c = shells.len() + s;
        for _ in 0..counts[c] {
            let u = unit_gaussian(&mut rng, 3);
            data.extend([centre + r * u[0], r * u[1], r * u[2]]);
            labels.push(c);
        }
    }
    labelled(labels.len(), 3, data, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Two-sided Kolmogorov-Smirnov statistic against a continuous CDF.
    fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn default_shapes() {
        let expect = [
            (SyntheticName::Concentric3, (2760, 3, 5)),
            (SyntheticName::Concentric4, (3240, 4, 5)),
            (SyntheticName::Donuts, (3750, 3, 3)),
            (SyntheticName::Matryoshka, (6400, 3, 7)),
            (SyntheticName::Rings, (4000, 100, 20)),
        ];
        for (name, shape) in expect {
            let ds = generate(name, 1, 1.0).unwrap();
            assert_eq!((ds.n(), ds.d(), ds.m()), shape, "{name}");
        }
    }

    #[test]
    fn concentric_points_lie_on_their_sphere() {
        let ds = gen_concentric(3, 5, 200, &[1.0, 2.0, 3.0, 4.0, 5.0], 4).unwrap();
        for (i, row) in ds.points().iter_rows().enumerate() {
            let r = (ds.labels()[i] + 1) as f64;
            assert!((norm(row) - r).abs() < 1e-9);
        }
        for (c, members) in ds.partition().classes().iter().enumerate() {
            let sub = ds.points().select_rows(members);
            let mean = sub.column_means();
            let r = (c + 1) as f64;
            assert!(norm(&mean) < 4.0 * r / (members.len() as f64).sqrt());
        }
    }

    #[test]
    fn concentric_rejects_bad_radii() {
        assert!(gen_concentric(3, 2, 10, &[2.0, 1.0], 0).is_err());
        assert!(gen_concentric(3, 2, 10, &[1.0, 1.0], 0).is_err());
        assert!(gen_concentric(3, 2, 10, &[0.0, 1.0], 0).is_err());
        assert!(gen_concentric(3, 3, 10, &[1.0, 2.0], 0).is_err());
    }

    #[test]
    fn rings_noiseless_axis_support_and_centres() {
        let cfg = RingsConfig {
            noise_sigma: 0.0,
            per_ring: 50,
            ..RingsConfig::default()
        };
        let ds = gen_rings(&cfg).unwrap();
        for (i, row) in ds.points().iter_rows().enumerate() {
            let r = ds.labels()[i];
            for (axis, &v) in row.iter().enumerate() {
                if axis != r && axis != cfg.n_rings {
                    assert_eq!(v, 0.0);
                }
            }
            let centre = r as f64 * cfg.spacing;
            let rad = (row[r].powi(2) + (row[cfg.n_rings] - centre).powi(2)).sqrt();
            assert!((rad - cfg.ring_radius).abs() < 1e-12);
        }
        // class means along the shared axis march by `spacing`
        let means: Vec<f64> = ds
            .partition()
            .classes()
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&i| ds.points()[(i, cfg.n_rings)])
                    .sum::<f64>()
                    / m.len() as f64
            })
            .collect();
        for w in means.windows(2) {
            assert!((w[1] - w[0] - cfg.spacing).abs() < 0.5);
        }
    }

    #[test]
    fn rings_errors() {
        let small = RingsConfig {
            ambient_dim: 20,
            ..RingsConfig::default()
        };
        assert!(gen_rings(&small).is_err());
        let broken = RingsConfig {
            spacing: 2.0,
            ..RingsConfig::default()
        };
        assert!(gen_rings(&broken).is_err());
        let tiny = RingsConfig {
            per_ring: 2,
            ..RingsConfig::default()
        };
        assert!(gen_rings(&tiny).is_err());
    }

    #[test]
    fn donuts_satisfy_torus_equation_and_are_area_uniform() {
        let cfg = DonutsConfig {
            seed: 17,
            ..DonutsConfig::default()
        };
        let ds = gen_donuts(&cfg).unwrap();
        let mut us = Vec::new();
        let mut vs = Vec::new();
        for (i, p) in ds.points().iter_rows().enumerate() {
            let c = ds.labels()[i];
            let (rr, r) = (cfg.major_radii[c], cfg.minor_radii[c]);
            let w = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(((w - rr).powi(2) + p[2] * p[2] - r * r).abs() < 1e-9);
            if c == 0 {
                us.push(p[1].atan2(p[0]).rem_euclid(2.0 * PI));
                vs.push(p[2].atan2(w - rr).rem_euclid(2.0 * PI));
            }
        }
        // 1% critical value of the KS statistic
        let crit = 1.63 / (us.len() as f64).sqrt();
        assert!(ks_statistic(us, |u| u / (2.0 * PI)) < crit);
        let (rr, r) = (cfg.major_radii[0], cfg.minor_radii[0]);
        assert!(ks_statistic(vs, |v| (rr * v + r * v.sin()) / (2.0 * PI * rr)) < crit);
    }

    #[test]
    fn donuts_reject_intersections() {
        let cfg = DonutsConfig {
            major_radii: vec![2.0, 2.8],
            minor_radii: vec![0.5, 0.5],
            ..DonutsConfig::default()
        };
        assert!(gen_donuts(&cfg).is_err());
    }

    #[test]
    fn matryoshka_geometry_audit() {
        let cfg = MatryoshkaConfig {
            seed: 5,
            ..MatryoshkaConfig::default()
        };
        let ds = gen_matryoshka(&cfg).unwrap();
        let shells = cfg.dumbbells();
        let inner = cfg.inner_spheres();
        for (i, p) in ds.points().iter_rows().enumerate() {
            let c = ds.labels()[i];
            if c < shells.len() {
                assert!(
                    shells[c].surface_residual(p) < 1e-9,
                    "class {c} point {p:?}"
                );
                if let Some(outer) = shells.get(c + 1) {
                    assert!(outer.contains_strictly(p));
                }
                for inner in &shells[..c] {
                    assert!(!inner.contains_strictly(p));
                }
            } else {
                let (centre, r) = inner[c - shells.len()];
                let d = ((p[0] - centre).powi(2) + p[1] * p[1] + p[2] * p[2]).sqrt();
                assert!((d - r).abs() < 1e-9);
                assert!(shells[0].contains_strictly(p));
                assert!(d < cfg.sphere_radius);
            }
        }
        let counts = cfg.class_counts();
        assert_eq!(counts.iter().sum::<usize>(), 6400);
        assert_eq!(counts.len(), 7);
        assert!(counts[0] < counts[1] && counts[1] < counts[2]);
        assert_eq!(counts[3], counts[5]);
        assert_eq!(counts[4], counts[6]);
    }

    #[test]
    fn fixed_seed_is_bitwise_reproducible() {
        for name in SyntheticName::ALL {
            let a = generate(name, 99, 0.05).unwrap();
            let b = generate(name, 99, 0.05).unwrap();
            assert_eq!(a, b);
            let c = generate(name, 100, 0.05).unwrap();
            assert_ne!(a.points(), c.points());
        }
    }

    #[test]
    fn apportion_sums_to_total() {
        assert_eq!(apportion(10, &[1.0, 1.0, 1.0]), vec![4, 3, 3]);
        assert_eq!(apportion(7, &[100.0, 1e-9, 1e-9]).iter().sum::<usize>(), 7);
    }

    #[test]
    fn names_round_trip() {
        for n in SyntheticName::ALL {
            assert_eq!(n.as_str().parse::<SyntheticName>().unwrap(), n);
        }
        assert!("swissroll".parse::<SyntheticName>().is_err());
    }
}
