use super::{dot, norm2, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U Σ Vᵀ`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `rows × min(rows, cols)` with orthonormal columns.
    pub left_basis: Matrix,
    /// `cols × min(rows, cols)` with orthonormal columns.
    pub right_basis: Matrix,
}

impl SvdResult {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Count of singular values strictly above `tol · σ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let smax = self.max_singular_value();
        if smax == 0.0 {
            return 0;
        }
        self.singular_values.iter().take_while(|&&s| s > tol * smax).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        let (m, k) = (self.left_basis.rows(), self.singular_values.len());
        let n = self.right_basis.rows();
        let mut out = Matrix::zeros(m, n);
        for p in 0..k {
            let s = self.singular_values[p];
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let us = self.left_basis[(i, p)] * s;
                for j in 0..n {
                    out[(i, j)] += us * self.right_basis[(j, p)];
                }
            }
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy are rotated pairwise until mutually orthogonal;
/// the column norms are then the singular values. Wide matrices are handled
/// through their transpose.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("svd input contains non-finite entries".into()));
    }
    if a.rows() < a.cols() {
        let t = svd_tall(&a.transpose());
        return Ok(SvdResult {
            singular_values: t.singular_values,
            left_basis: t.right_basis,
            right_basis: t.left_basis,
        });
    }
    Ok(svd_tall(a))
}

fn svd_tall(a: &Matrix) -> SvdResult {
    let (m, n) = (a.rows(), a.cols());
    // Column-major working storage.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (norm2(c), j)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let singular_values: Vec<f64> = order.iter().map(|&(s, _)| s).collect();
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    let smax = order.first().map_or(0.0, |o| o.0);
    for (slot, &(s, j)) in order.iter().enumerate() {
        v_cols.push(v[j].clone());
        if s == 0.0 {
            u_cols.push(vec![0.0; m]);
            missing.push(slot);
            continue;
        }
        let mut u: Vec<f64> = cols[j].iter().map(|x| x / s).collect();
        if s < 1e-12 * smax {
            // Columns at rounding level lose orthogonality; re-orthogonalize.
            for prev in &u_cols {
                let c = dot(prev, &u);
                for (ui, pi) in u.iter_mut().zip(prev) {
                    *ui -= c * pi;
                }
            }
            let nu = norm2(&u);
            if nu < 0.5 {
                u_cols.push(vec![0.0; m]);
                missing.push(slot);
                continue;
            }
            u.iter_mut().for_each(|x| *x /= nu);
        }
        u_cols.push(u);
    }
    // Left vectors of zero singular values: complete to an orthonormal set.
    for slot in missing {
        let others: Vec<Vec<f64>> =
            u_cols.iter().enumerate().filter(|&(i, _)| i != slot).map(|(_, c)| c.clone()).collect();
        u_cols[slot] = unit_vector_orthogonal_to(&others, m);
    }

    SvdResult {
        singular_values,
        left_basis: Matrix::from_columns(m, &u_cols).expect("finite basis"),
        right_basis: Matrix::from_columns(n, &v_cols).expect("finite basis"),
    }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// A unit vector orthogonal to every nonzero vector in `others`, found by
/// twice-iterated Gram–Schmidt over the canonical basis.
pub(crate) fn unit_vector_orthogonal_to(others: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..dim {
        let mut x = vec![0.0; dim];
        x[e] = 1.0;
        for _ in 0..2 {
            for o in others {
                let no = dot(o, o);
                if no == 0.0 {
                    continue;
                }
                let c = dot(o, &x) / no;
                for (xi, oi) in x.iter_mut().zip(o) {
                    *xi -= c * oi;
                }
            }
        }
        let n = norm2(&x);
        if n > 0.5 {
            return x.iter().map(|v| v / n).collect();
        }
        if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
            best = Some((n, x));
        }
    }
    let (n, x) = best.unwrap_or((0.0, vec![0.0; dim]));
    if n == 0.0 {
        return x;
    }
    x.iter().map(|v| v / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orthonormality_error(m: &Matrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..m.cols() {
            for j in 0..m.cols() {
                let d = dot(&m.column(i), &m.column(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }

    #[test]
    fn identity_and_diagonal() {
        let s = svd(&Matrix::identity(3)).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 1.0, 1.0]);
        let s = svd(&Matrix::from_diag(&[3.0, 0.0])).unwrap();
        assert_eq!(s.singular_values, vec![3.0, 0.0]);
        assert!(orthonormality_error(&s.left_basis) < 1e-12);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &(m, n) in &[(5, 3), (3, 5), (7, 7), (1, 4), (12, 2)] {
            let data: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = Matrix::new(m, n, data).unwrap();
            let s = svd(&a).unwrap();
            let err = a.sub(&s.reconstruct()).unwrap().frobenius_norm();
            assert!(err <= 1e-10 * (1.0 + a.frobenius_norm()), "{m}x{n}: {err}");
            assert!(orthonormality_error(&s.left_basis) < 1e-12);
            assert!(orthonormality_error(&s.right_basis) < 1e-12);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_left_basis_completed() {
        let a = Matrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]).unwrap();
        let s = svd(&a).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-12);
        assert!(s.singular_values[1] < 1e-12);
        assert!(orthonormality_error(&s.left_basis) < 1e-12);
    }

    #[test]
    fn rejects_nan() {
        let mut a = Matrix::zeros(2, 2);
        a[(0, 0)] = f64::NAN;
        assert!(svd(&a).is_err());
    }
}
