use crate::geometry::{cosine_unchecked, DEGENERACY_EPS};
use crate::{Error, Matrix, Result, Scalar, Triplet};

/// A triplet with its (fixed) high-dimensional cosine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedTriplet<F> {
    pub triplet: Triplet,
    pub cos_x: F,
}

pub fn prepare_triplets<F: Scalar>(x: &Matrix<F>, triplets: &[Triplet]) -> Vec<PreparedTriplet<F>> {
    let eps = F::of(DEGENERACY_EPS);
    triplets
        .iter()
        .map(|&t| PreparedTriplet {
            triplet: t,
            cos_x: cosine_unchecked(x.row(t.i), x.row(t.j), x.row(t.k), eps),
        })
        .collect()
}

/// Mean squared cosine difference over `triplets` and its gradient with
/// respect to every row of `y`.
pub fn cadi_loss_and_grad<F: Scalar>(
    y: &Matrix<F>,
    x: &Matrix<F>,
    triplets: &[Triplet],
) -> Result<(F, Matrix<F>)> {
    crate::data::check_aligned(x.rows(), y.rows())?;
    loss_and_grad_prepared(y, &prepare_triplets(x, triplets))
}

/// Same as [`cadi_loss_and_grad`] with cached high-dimensional cosines.
/// Triplets whose projected angle is degenerate add to the loss but have
/// zero gradient.
pub fn loss_and_grad_prepared<F: Scalar>(
    y: &Matrix<F>,
    triplets: &[PreparedTriplet<F>],
) -> Result<(F, Matrix<F>)> {
    let t_dim = y.cols();
    let mut grad = Matrix::zeros(y.rows(), t_dim);
    if triplets.is_empty() {
        return Ok((F::zero(), grad));
    }
    if let Some(bad) = triplets
        .iter()
        .find(|p| p.triplet.i.max(p.triplet.k).max(p.triplet.j) >= y.rows())
    {
        return Err(Error::Dimension(format!(
            "triplet {:?} out of range for {} rows",
            bad.triplet,
            y.rows()
        )));
    }
    let eps = F::of(DEGENERACY_EPS);
    let scale = F::one() / F::of_usize(triplets.len());
    let two = F::of(2.0);
    let mut loss = F::zero();
    let mut a = vec![F::zero(); t_dim];
    let mut b = vec![F::zero(); t_dim];
    for p in triplets {
        let Triplet { i, j, k } = p.triplet;
        let (yi, yj, yk) = (y.row(i), y.row(j), y.row(k));
        let (mut ab, mut aa, mut bb) = (F::zero(), F::zero(), F::zero());
        for d in 0..t_dim {
            a[d] = yj[d] - yi[d];
            b[d] = yk[d] - yi[d];
            ab += a[d] * b[d];
            aa += a[d] * a[d];
            bb += b[d] * b[d];
        }
        let (na, nb) = (aa.sqrt(), bb.sqrt());
        if na < eps || nb < eps {
            let diff = p.cos_x - F::one();
            loss += diff * diff;
            continue;
        }
        let inv = F::one() / (na * nb);
        let c_raw = ab * inv;
        // same arithmetic as the metric, so a perfect layout has exactly zero loss
        let c = cosine_unchecked(yi, yj, yk, eps);
        let diff = p.cos_x - c;
        loss += diff * diff;
        // d loss / d cos_y
        let g = -two * diff * scale;
        let ca = c_raw / aa;
        let cb = c_raw / bb;
        for d in 0..t_dim {
            let da = g * (b[d] * inv - ca * a[d]);
            let db = g * (a[d] * inv - cb * b[d]);
            grad[(j, d)] += da;
            grad[(k, d)] += db;
            grad[(i, d)] -= da + db;
        }
    }
    Ok((loss * scale, grad))
}
