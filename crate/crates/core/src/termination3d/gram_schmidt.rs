use super::HMatrix;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2};

/// Relative floor for Gram–Schmidt dependence and for `1 − σ_k`.
pub const TOL_DEP: f64 = 1e-10;

/// Orthonormalizes `vectors` in order. Uses modified Gram–Schmidt with one
/// re-orthogonalization pass; the result spans the same nested subspaces as
/// the classical process.
pub fn gram_schmidt(vectors: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
    let n = vectors.first().map_or(0, |v| v.len());
    if vectors.iter().any(|v| v.len() != n) || n < vectors.len() {
        return Err(Error::InvalidSpec(format!(
            "need {} vectors of equal dimension >= {}",
            vectors.len(),
            vectors.len()
        )));
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let input_norm = norm2(v);
        let mut w = v.to_vec();
        for _pass in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        let nw = norm2(&w);
        if !(nw > TOL_DEP * input_norm) || !nw.is_finite() {
            return Err(Error::LinearDependence);
        }
        w.iter_mut().for_each(|x| *x /= nw);
        basis.push(w);
    }
    Ok(basis)
}

pub fn gram_schmidt3(a: &[f64], b: &[f64], c: &[f64]) -> Result<[Vec<f64>; 3]> {
    let mut q = gram_schmidt(&[a, b, c])?;
    let r = q.pop().unwrap();
    let v = q.pop().unwrap();
    let u = q.pop().unwrap();
    Ok([u, v, r])
}

/// `QᵀAQ` for the columns `basis` (3 or 4 of them), symmetrized.
pub fn project_hessian<F>(basis: &[&[f64]], hess_vec: F) -> Result<HMatrix>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let m = basis.len();
    if !(m == 3 || m == 4) {
        return Err(Error::InvalidSpec(format!("projection needs 3 or 4 vectors, got {m}")));
    }
    let aq: Vec<Vec<f64>> = basis.iter().map(|q| hess_vec(q)).collect();
    let mut e = [[0.0; 4]; 4];
    for i in 0..m {
        for j in 0..m {
            e[i][j] = dot(basis[i], &aq[j]);
        }
    }
    Ok(HMatrix::from_entries(m, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn triangular_input_returns_coordinate_axes() {
        let q = gram_schmidt3(&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(q[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(q[1], vec![0.0, 1.0, 0.0]);
        assert_eq!(q[2], vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn parallel_pair_is_dependent() {
        let r = gram_schmidt3(&[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        assert_eq!(r, Err(Error::LinearDependence));
    }

    #[test]
    fn random_vectors_are_orthonormalized() {
        let mut r = rng::stream(11, 0);
        for _ in 0..50 {
            let v: Vec<Vec<f64>> =
                (0..3).map(|_| (0..10).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
            let q = gram_schmidt3(&v[0], &v[1], &v[2]).unwrap();
            for i in 0..3 {
                assert!((dot(&q[i], &q[i]) - 1.0).abs() <= 1e-12);
                for j in 0..i {
                    assert!(dot(&q[i], &q[j]).abs() <= 1e-12);
                }
            }
            // span check: c lies in span{u, v, r}
            let mut w = v[2].clone();
            for qi in &q {
                let c = dot(qi, &w);
                axpy(-c, qi, &mut w);
            }
            assert!(norm2(&w) <= 1e-12 * norm2(&v[2]));
        }
    }

    #[test]
    fn coordinate_projection_of_diagonal_matrix() {
        let e = |i: usize| {
            let mut v = vec![0.0; 3];
            v[i] = 1.0;
            v
        };
        let (a, b, c) = (e(0), e(1), e(2));
        let h = project_hessian(&[&a, &b, &c], |x: &[f64]| {
            vec![x[0], 2.0 * x[1], 3.0 * x[2]]
        })
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { (i + 1) as f64 } else { 0.0 };
                assert_eq!(h.entry(i, j), want);
            }
        }
    }

    #[test]
    fn identity_projects_to_identity() {
        let q = gram_schmidt3(&[1.0, 2.0, 3.0, 4.0], &[0.0, 1.0, 0.0, 1.0], &[5.0, 0.0, 0.0, 1.0])
            .unwrap();
        let h = project_hessian(&[&q[0], &q[1], &q[2]], |x: &[f64]| x.to_vec()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((h.entry(i, j) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn projected_spectrum_interlaces() {
        use nalgebra::{DMatrix, SymmetricEigen};
        let mut r = rng::stream(3, 0);
        for n in 4..=8 {
            for _ in 0..20 {
                let m = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
                let a = &m * m.transpose() + DMatrix::identity(n, n) * 0.1;
                let mut la: Vec<f64> = SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
                la.sort_by(f64::total_cmp);
                let v: Vec<Vec<f64>> =
                    (0..3).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
                let q = gram_schmidt3(&v[0], &v[1], &v[2]).unwrap();
                let a2 = a.clone();
                let h = project_hessian(&[&q[0], &q[1], &q[2]], |x: &[f64]| {
                    (&a2 * nalgebra::DVector::from_column_slice(x)).iter().copied().collect()
                })
                .unwrap();
                let hm = nalgebra::Matrix3::from_fn(|i, j| h.entry(i, j));
                let mut lh: Vec<f64> = SymmetricEigen::new(hm).eigenvalues.iter().copied().collect();
                lh.sort_by(f64::total_cmp);
                for i in 0..3 {
                    let tol = 1e-12 * la[n - 1];
                    assert!(la[i] <= lh[i] + tol, "lower interlace n={n} i={i}");
                    assert!(lh[i] <= la[i + n - 3] + tol, "upper interlace n={n} i={i}");
                }
            }
        }
    }
}
