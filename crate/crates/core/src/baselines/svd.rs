use super::mean::{column_means, prefill, restore_observed};
use super::BaselineError;
use crate::codec::{FeatureSchema, FuzzyDataset};
use crate::linalg::{dot, Matrix};

pub const JACOBI_MAX_SWEEPS: usize = 80;
const JACOBI_TOL: f64 = 1e-14;
/// Relative singular-value cutoff of the pseudo-inverse.
const PINV_CUTOFF: f64 = 1e-10;

/// Thin SVD `A = U diag(s) Vᵀ` with `k = min(n, c)` components, singular
/// values non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// `U_r diag(s_r) V_rᵀ`.
    pub fn reconstruct(&self, rank: usize) -> Matrix {
        let (n, c) = (self.u.rows(), self.v.rows());
        let mut out = Matrix::zeros(n, c);
        for i in 0..n {
            let row = out.row_mut(i);
            for t in 0..rank {
                let w = self.u[(i, t)] * self.s[t];
                if w == 0.0 {
                    continue;
                }
                for (j, o) in row.iter_mut().enumerate() {
                    *o += w * self.v[(j, t)];
                }
            }
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi SVD: plane rotations orthogonalise the columns
/// of `A` until every pair is orthogonal to relative precision.
pub fn svd(a: &Matrix) -> Result<Svd, BaselineError> {
    let (n, c) = a.shape();
    // columns of A as contiguous rows
    let mut b = a.transpose();
    let mut vt = Matrix::identity(c);
    // columns whose squared norm is below this are numerically zero
    let floor = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..c {
            for j in i + 1..c {
                let alpha = dot(b.row(i), b.row(i));
                let beta = dot(b.row(j), b.row(j));
                let gamma = dot(b.row(i), b.row(j));
                if alpha <= floor || beta <= floor || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut b, i, j, cs, sn);
                rotate(&mut vt, i, j, cs, sn);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(BaselineError::NonConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = (0..c).map(|i| dot(b.row(i), b.row(i)).sqrt()).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let k = n.min(c);
    let mut u = Matrix::zeros(n, k);
    let mut v = Matrix::zeros(c, k);
    let mut s = Vec::with_capacity(k);
    for (t, &col) in order.iter().take(k).enumerate() {
        let sigma = norms[col];
        s.push(sigma);
        if sigma > 0.0 {
            for r in 0..n {
                u[(r, t)] = b[(col, r)] / sigma;
            }
        }
        for r in 0..c {
            v[(r, t)] = vt[(col, r)];
        }
    }
    Ok(Svd { u, s, v })
}

fn rotate(m: &mut Matrix, i: usize, j: usize, cs: f64, sn: f64) {
    let w = m.cols();
    let data = m.as_mut_slice();
    let (head, tail) = data.split_at_mut(j * w);
    let ri = &mut head[i * w..(i + 1) * w];
    let rj = &mut tail[..w];
    for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = cs * a - sn * b;
        *y = sn * a + cs * b;
    }
}

/// Moore–Penrose pseudo-inverse, dropping singular values below
/// `1e-10 · σ_max`.
pub fn pseudo_inverse(a: &Matrix) -> Result<Matrix, BaselineError> {
    let d = svd(a)?;
    let (n, c) = a.shape();
    let cutoff = PINV_CUTOFF * d.s.first().copied().unwrap_or(0.0);
    let mut out = Matrix::zeros(c, n);
    for (t, &sigma) in d.s.iter().enumerate() {
        if sigma <= cutoff || sigma == 0.0 {
            continue;
        }
        for i in 0..c {
            let w = d.v[(i, t)] / sigma;
            for j in 0..n {
                out[(i, j)] += w * d.u[(j, t)];
            }
        }
    }
    Ok(out)
}

/// Rank-`r` SVD reconstruction imputer.
///
/// Training rows are imputed by `U_r D_r V_rᵀ`; new rows by projecting onto
/// the row space of `F = D_r V_rᵀ` through `F†F`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdImputer {
    rank: usize,
    schema: Option<FeatureSchema>,
    means: Vec<f64>,
    factor: Matrix,
    factor_pinv: Matrix,
    train_reconstruction: Matrix,
}

impl SvdImputer {
    /// Fits on the binary codes of `train`, pre-filled with column means.
    pub fn fit(train: &FuzzyDataset, rank: usize) -> Result<Self, BaselineError> {
        let means = column_means(train.binary(), train.mask(), train.schema());
        let filled = prefill(train.binary(), train.mask(), &means);
        let mut imp = SvdImputer::fit_matrix(&filled, means, rank)?;
        imp.schema = Some(train.schema().clone());
        Ok(imp)
    }

    /// Fits on an already pre-filled matrix; `means` is kept for pre-filling
    /// later targets.
    pub fn fit_matrix(filled: &Matrix, means: Vec<f64>, rank: usize) -> Result<Self, BaselineError> {
        let (n, q) = filled.shape();
        if n == 0 {
            return Err(BaselineError::EmptyTraining);
        }
        if rank == 0 || rank > n.min(q) {
            return Err(BaselineError::InvalidRank { rank, max: n.min(q) });
        }
        if means.len() != q {
            return Err(BaselineError::Shape {
                expected: (1, q),
                got: (1, means.len()),
            });
        }
        let d = svd(filled)?;
        let mut factor = Matrix::zeros(rank, q);
        for t in 0..rank {
            for j in 0..q {
                factor[(t, j)] = d.s[t] * d.v[(j, t)];
            }
        }
        let factor_pinv = pseudo_inverse(&factor)?;
        Ok(SvdImputer {
            rank,
            schema: None,
            means,
            factor,
            factor_pinv,
            train_reconstruction: d.reconstruct(rank),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// `D_r V_rᵀ` (`r × Q`).
    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    /// `(D_r V_rᵀ)† (D_r V_rᵀ)` (`Q × Q`).
    pub fn projector(&self) -> Matrix {
        self.factor_pinv.matmul(&self.factor)
    }

    /// Unrestored `U_r D_r V_rᵀ` of the training matrix.
    pub fn train_reconstruction(&self) -> &Matrix {
        &self.train_reconstruction
    }

    fn check(&self, data: &FuzzyDataset) -> Result<(), BaselineError> {
        match &self.schema {
            Some(s) if s != data.schema() => Err(BaselineError::SchemaMismatch),
            _ => Ok(()),
        }
    }

    /// Training-set imputation with the observed slots restored.
    pub fn impute_train(&self, train: &FuzzyDataset) -> Result<Matrix, BaselineError> {
        self.check(train)?;
        if train.binary().shape() != self.train_reconstruction.shape() {
            return Err(BaselineError::Shape {
                expected: self.train_reconstruction.shape(),
                got: train.binary().shape(),
            });
        }
        let mut out = self.train_reconstruction.clone();
        restore_observed(&mut out, train.binary(), train.mask());
        Ok(out)
    }

    /// `X_te (D_r V_rᵀ)† (D_r V_rᵀ)` with the observed slots restored.
    pub fn impute_test(&self, test: &FuzzyDataset) -> Result<Matrix, BaselineError> {
        self.check(test)?;
        self.impute_matrix(test.binary(), test.mask())
    }

    pub fn impute_matrix(&self, values: &Matrix, mask: &Matrix) -> Result<Matrix, BaselineError> {
        let q = self.factor.cols();
        if values.cols() != q || mask.shape() != values.shape() {
            return Err(BaselineError::Shape {
                expected: (values.rows(), q),
                got: values.shape(),
            });
        }
        let filled = prefill(values, mask, &self.means);
        let mut out = filled.matmul(&self.factor_pinv).matmul(&self.factor);
        restore_observed(&mut out, values, mask);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, c: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_vec(n, c, (0..n * c).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    #[test]
    fn full_rank_reconstruction_is_exact() {
        for (n, c) in [(6, 4), (4, 6), (5, 5)] {
            let a = random(n, c, (n * 10 + c) as u64);
            let d = svd(&a).unwrap();
            assert!(d.reconstruct(n.min(c)).max_abs_diff(&a) < 1e-10);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
            let utu = d.u.transpose().matmul(&d.u);
            let vtv = d.v.transpose().matmul(&d.v);
            assert!(utu.max_abs_diff(&Matrix::identity(n.min(c))) < 1e-8);
            assert!(vtv.max_abs_diff(&Matrix::identity(n.min(c))) < 1e-8);
        }
    }

    #[test]
    fn rank_one_outer_product_recovered() {
        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 1.0, 0.0, -1.0];
        let a = Matrix::from_vec(3, 4, u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect());
        let d = svd(&a).unwrap();
        assert!(d.reconstruct(1).max_abs_diff(&a) < 1e-12);
        assert!(d.s[1] < 1e-12);
    }

    #[test]
    fn pseudo_inverse_identities() {
        let a = random(3, 6, 7);
        let p = pseudo_inverse(&a).unwrap();
        assert!(a.matmul(&p).matmul(&a).max_abs_diff(&a) < 1e-10);
        assert!(p.matmul(&a).matmul(&p).max_abs_diff(&p) < 1e-10);
    }

    #[test]
    fn full_rank_imputer_keeps_test_rows() {
        let a = random(8, 5, 3);
        let imp = SvdImputer::fit_matrix(&a, vec![0.0; 5], 5).unwrap();
        let t = random(4, 5, 4);
        let p = imp.projector();
        assert!(t.matmul(&p).max_abs_diff(&t) < 1e-8);
        assert!(p.matmul(&p).max_abs_diff(&p) < 1e-10);
    }

    #[test]
    fn invalid_rank_rejected() {
        let a = random(3, 5, 1);
        assert!(matches!(
            SvdImputer::fit_matrix(&a, vec![0.0; 5], 4),
            Err(BaselineError::InvalidRank { rank: 4, max: 3 })
        ));
    }
}
