//! Internal-angle cosines between point triples, and similarity transforms.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Matrix, Result, Scalar};

/// Vector-norm threshold below which an angle counts as undefined.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Cosine of an internal angle, clamped to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Cosine<F>(F);

impl<F: Scalar> Cosine<F> {
    pub fn new(v: F) -> Self {
        Cosine(v.max(-F::one()).min(F::one()))
    }

    #[inline]
    pub fn value(self) -> F {
        self.0
    }
}

/// Cosine of the angle at `pi` between `pj - pi` and `pk - pi`.
///
/// When either vector is shorter than `eps` the angle is taken to be zero,
/// so the result is `1`.
pub fn internal_cosine<F: Scalar>(pi: &[F], pj: &[F], pk: &[F], eps: F) -> Result<Cosine<F>> {
    if pi.len() != pj.len() || pi.len() != pk.len() {
        return Err(Error::Dimension(format!(
            "points of dimension {}, {} and {}",
            pi.len(),
            pj.len(),
            pk.len()
        )));
    }
    Ok(Cosine(cosine_unchecked(pi, pj, pk, eps)))
}

/// Hot-path form of [`internal_cosine`]; the caller guarantees equal lengths.
#[inline]
pub fn cosine_unchecked<F: Scalar>(pi: &[F], pj: &[F], pk: &[F], eps: F) -> F {
    let mut ab = F::zero();
    let mut aa = F::zero();
    let mut bb = F::zero();
    for ((&i, &j), &k) in pi.iter().zip(pj).zip(pk) {
        let a = j - i;
        let b = k - i;
        ab += a * b;
        aa += a * a;
        bb += b * b;
    }
    let na = aa.sqrt();
    let nb = bb.sqrt();
    if na < eps || nb < eps {
        return F::one();
    }
    (ab / (na * nb)).max(-F::one()).min(F::one())
}

fn orthogonality_tol<F: Scalar>() -> F {
    F::of(1e-10).max(F::epsilon() * F::of(64.0))
}

/// Maps every row `x` to `scale * R x + translation`.
pub fn apply_similarity<F: Scalar>(
    points: &Matrix<F>,
    rotation: &Matrix<F>,
    scale: F,
    translation: &[F],
) -> Result<Matrix<F>> {
    let d = points.cols();
    if rotation.rows() != d || rotation.cols() != d {
        return Err(Error::Dimension(format!(
            "rotation is {}x{}, points have dimension {d}",
            rotation.rows(),
            rotation.cols()
        )));
    }
    if translation.len() != d {
        return Err(Error::Dimension(format!(
            "translation has length {}, points have dimension {d}",
            translation.len()
        )));
    }
    if scale.is_nan() || scale <= F::zero() {
        return Err(Error::Invalid(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let rtr = rotation.transpose().matmul(rotation)?;
    let tol = orthogonality_tol::<F>();
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { F::one() } else { F::zero() };
            if (rtr[(i, j)] - target).abs() > tol {
                return Err(Error::Invalid("rotation matrix is not orthogonal".into()));
            }
        }
    }
    let mut out = Matrix::zeros(points.rows(), d);
    for (r, x) in points.iter_rows().enumerate() {
        let o = out.row_mut(r);
        for (a, ov) in o.iter_mut().enumerate() {
            let mut s = F::zero();
            for (b, &xv) in x.iter().enumerate() {
                s += rotation[(a, b)] * xv;
            }
            *ov = scale * s + translation[a];
        }
    }
    Ok(out)
}

/// Random orthogonal matrix (Gram-Schmidt on Gaussian columns).
pub fn random_rotation<F: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
        let mut ok = true;
        for _ in 0..d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            // two passes for numerical orthogonality
            for _ in 0..2 {
                for c in &cols {
                    let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            cols.push(v);
        }
        if ok {
            let mut m = Matrix::zeros(d, d);
            for (j, c) in cols.iter().enumerate() {
                for (i, &v) in c.iter().enumerate() {
                    m[(i, j)] = F::of(v);
                }
            }
            return m;
        }
    }
}
