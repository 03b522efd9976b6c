use rand::Rng;

use crate::sampling::rng_from_seed;
use crate::{Error, Matrix, Projection, Result, Scalar};

const JACOBI_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching unit
/// eigenvectors as the columns of the second matrix. Each eigenvector is
/// signed so that its largest-magnitude component is positive.
pub fn symmetric_eigen<F: Scalar>(a: &Matrix<F>) -> Result<(Vec<F>, Matrix<F>)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not square",
            n,
            a.cols()
        )));
    }
    let mut s = a.clone();
    let mut v = Matrix::identity(n);
    let two = F::of(2.0);
    let scale: F = s.as_slice().iter().map(|x| *x * *x).sum::<F>().sqrt();
    let tol = F::epsilon() * scale.max(F::min_positive_value());
    let mut converged = n < 2;
    for _ in 0..JACOBI_SWEEPS {
        let off: F = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| s[(p, q)] * s[(p, q)])
            .sum::<F>()
            .sqrt();
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = s[(p, q)];
                if apq == F::zero() {
                    continue;
                }
                let theta = (s[(q, q)] - s[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let skp = s[(k, p)];
                    let skq = s[(k, q)];
                    s[(k, p)] = c * skp - sn * skq;
                    s[(k, q)] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[(p, k)];
                    let sqk = s[(q, k)];
                    s[(p, k)] = c * spk - sn * sqk;
                    s[(q, k)] = sn * spk + c * sqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {JACOBI_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        s[(j, j)]
            .partial_cmp(&s[(i, i)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| s[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut lead = 0;
        for k in 1..n {
            if v[(k, src)].abs() > v[(lead, src)].abs() {
                lead = k;
            }
        }
        let sign = if v[(lead, src)] < F::zero() {
            -F::one()
        } else {
            F::one()
        };
        for k in 0..n {
            vectors[(k, col)] = sign * v[(k, src)];
        }
    }
    Ok((values, vectors))
}

#[derive(Debug, Clone)]
pub struct PcaResult<F> {
    pub projection: Projection<F>,
    /// Principal axes as rows (`t x d`).
    pub components: Matrix<F>,
    pub mean: Vec<F>,
    pub explained_variance: Vec<F>,
    pub explained_variance_ratio: Vec<F>,
}

/// Projects the centred data onto its top `t` principal axes.
pub fn pca_project<F: Scalar>(x: &Matrix<F>, t: usize) -> Result<PcaResult<F>> {
    let (n, d) = (x.rows(), x.cols());
    if t == 0 || t > d {
        return Err(Error::Invalid(format!("cannot keep {t} of {d} components")));
    }
    if n < 2 {
        return Err(Error::Invalid("PCA needs at least two points".into()));
    }
    let mean = x.column_means();
    let mut cov: Matrix<F> = Matrix::zeros(d, d);
    let mut centred = vec![F::zero(); d];
    for row in x.iter_rows() {
        for (c, (v, m)) in centred.iter_mut().zip(row.iter().zip(&mean)) {
            *c = *v - *m;
        }
        for a in 0..d {
            let ca = centred[a];
            if ca == F::zero() {
                continue;
            }
            for b in a..d {
                cov[(a, b)] += ca * centred[b];
            }
        }
    }
    let denom = F::of_usize(n - 1);
    for a in 0..d {
        for b in a..d {
            let v = cov[(a, b)] / denom;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    let (values, vectors) = symmetric_eigen(&cov)?;
    let total: F = values.iter().map(|v| v.max(F::zero())).sum();
    let mut components = Matrix::zeros(t, d);
    for c in 0..t {
        for k in 0..d {
            components[(c, k)] = vectors[(k, c)];
        }
    }
    let mut y = Matrix::zeros(n, t);
    for (r, row) in x.iter_rows().enumerate() {
        for c in 0..t {
            let axis = components.row(c);
            let mut acc = F::zero();
            for k in 0..d {
                acc += (row[k] - mean[k]) * axis[k];
            }
            y[(r, c)] = acc;
        }
    }
    let explained_variance: Vec<F> = values[..t].to_vec();
    let explained_variance_ratio = explained_variance
        .iter()
        .map(|v| {
            if total > F::zero() {
                *v / total
            } else {
                F::zero()
            }
        })
        .collect();
    Ok(PcaResult {
        projection: Projection::new(y)?,
        components,
        mean,
        explained_variance,
        explained_variance_ratio,
    })
}

/// Points drawn independently and uniformly from the unit cube `[0, 1]^t`.
pub fn random_project<F: Scalar>(n: usize, t: usize, seed: u64) -> Result<Projection<F>> {
    if t == 0 {
        return Err(Error::Invalid("output dimension must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let data = (0..n * t).map(|_| F::of(rng.random::<f64>())).collect();
    Projection::new(Matrix::new(n, t, data)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_eigenpairs() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2 + sqrt2, 2, 2 - sqrt2
        let a =
            Matrix::<f64>::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]]).unwrap();
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        let r2 = 2f64.sqrt();
        let want_vals = [2.0 + r2, 2.0, 2.0 - r2];
        let want_vecs = [
            [0.5, r2 / 2.0, 0.5],
            [r2 / 2.0, 0.0, -r2 / 2.0],
            [0.5, -r2 / 2.0, 0.5],
        ];
        for c in 0..3 {
            assert!((vals[c] - want_vals[c]).abs() < 1e-12);
            // the sign convention fixes the direction; column 1 has a tie so compare up to sign
            let dotp: f64 = (0..3).map(|k| vecs[(k, c)] * want_vecs[c][k]).sum();
            assert!((dotp.abs() - 1.0).abs() < 1e-12);
        }
        assert!(vecs[(1, 0)] > 0.0);
        assert!(vecs[(1, 2)] > 0.0);
    }

    #[test]
    fn eigenvectors_orthonormal_and_reconstruct() {
        let a = Matrix::<f64>::from_rows(&[
            [4.0, 1.0, -2.0, 0.5],
            [1.0, 3.0, 0.0, 1.0],
            [-2.0, 0.0, 5.0, -1.0],
            [0.5, 1.0, -1.0, 2.0],
        ])
        .unwrap();
        let (vals, v) = symmetric_eigen(&a).unwrap();
        let vt = v.transpose();
        let id = vt.matmul(&v).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - e).abs() < 1e-12);
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let r: f64 = (0..4).map(|k| v[(i, k)] * vals[k] * v[(j, k)]).sum();
                assert!((r - a[(i, j)]).abs() < 1e-11);
            }
        }
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn pca_recovers_dominant_axis() {
        let x = Matrix::<f64>::from_rows(&[
            [-2.0, 0.1, 0.0],
            [-1.0, -0.1, 0.0],
            [1.0, -0.1, 0.0],
            [2.0, 0.1, 0.0],
        ])
        .unwrap();
        let r = pca_project(&x, 2).unwrap();
        assert!((r.components[(0, 0)] - 1.0).abs() < 1e-12);
        let y = r.projection.points();
        assert!((y[(0, 0)] + 2.0).abs() < 1e-12);
        assert!((r.explained_variance_ratio.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    fn scattered(n: usize, d: usize) -> Matrix<f64> {
        Matrix::new(
            n,
            d,
            (0..n * d)
                .map(|v| ((v * 7919) % 101) as f64 / 10.0 - (v % 3) as f64)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn full_rank_planar_pca_preserves_distances() {
        let x = scattered(30, 2);
        let y = pca_project(&x, 2).unwrap().projection.into_points();
        for i in 0..30 {
            for j in 0..30 {
                let dx = crate::matrix::dist(x.row(i), x.row(j));
                let dy = crate::matrix::dist(y.row(i), y.row(j));
                assert!((dx - dy).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn points_on_a_line_have_all_variance_in_one_component() {
        let x = Matrix::new(
            10,
            3,
            (0..10)
                .flat_map(|i| {
                    let s = i as f64;
                    [s, 2.0 * s - 1.0, -s]
                })
                .collect(),
        )
        .unwrap();
        let r = pca_project(&x, 1).unwrap();
        assert!((r.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translation_does_not_change_the_projection() {
        let x = scattered(25, 4);
        let shifted = Matrix::new(
            25,
            4,
            x.as_slice()
                .iter()
                .enumerate()
                .map(|(i, v)| v + [3.0, -7.5, 100.0, 0.25][i % 4])
                .collect(),
        )
        .unwrap();
        let a = pca_project(&x, 2).unwrap().projection.into_points();
        let b = pca_project(&shifted, 2).unwrap().projection.into_points();
        for (u, v) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn pca_rejects_bad_dimension() {
        let x = Matrix::<f64>::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]]).unwrap();
        assert!(pca_project(&x, 3).is_err());
        assert!(pca_project(&x, 0).is_err());
    }

    #[test]
    fn random_projection_in_unit_cube_and_seeded() {
        let a = random_project::<f64>(50, 2, 4).unwrap();
        let b = random_project::<f64>(50, 2, 4).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(a.points().as_slice().iter().all(|v| (0.0..1.0).contains(v)));
    }
}
