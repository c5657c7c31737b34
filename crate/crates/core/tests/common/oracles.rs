//! Linear-algebra oracles built on nalgebra, independent of the crate's own
//! Jacobi SVD.

use catgain::baselines::{svd, SvdImputer};
use catgain::linalg::Matrix;
use catgain::rng::Seed;
use nalgebra::DMatrix;
use rand::Rng;

pub fn random_matrix(rows: usize, cols: usize, seed: Seed) -> Matrix {
    let mut rng = seed.stream("matrix");
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn to_nalgebra(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

/// Largest gap, over every rank `r`, between `‖A − A_r‖²_F` from the crate's
/// truncation and the sum of the trailing eigenvalues of `AᵀA`.
pub fn eckart_young_error(a: &Matrix) -> f64 {
    let mut eig: Vec<f64> = to_nalgebra(a).tr_mul(&to_nalgebra(a)).symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    let d = svd(a).expect("svd");
    (0..=a.cols().min(a.rows()))
        .map(|r| {
            let residual = a.sub(&d.reconstruct(r)).frobenius_norm().powi(2);
            let tail: f64 = eig[r..].iter().map(|v| v.max(0.0)).sum();
            (residual - tail).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |P P − P|` for the rank-`r` imputer projector of `a`.
pub fn idempotence_error(a: &Matrix, rank: usize) -> f64 {
    let imp = SvdImputer::fit_matrix(a, vec![0.0; a.cols()], rank).expect("fit");
    let p = imp.projector();
    p.matmul(&p).max_abs_diff(&p)
}

/// Worst Eckart–Young gap and projector error over `count` random 5×4 draws.
pub fn svd_suite(count: u64) -> (f64, f64) {
    (0..count).fold((0.0_f64, 0.0_f64), |(ey, ip), s| {
        let a = random_matrix(5, 4, Seed(s).derive("svd-suite", &[]));
        let worst_proj = (1..=4).map(|r| idempotence_error(&a, r)).fold(0.0, f64::max);
        (ey.max(eckart_young_error(&a)), ip.max(worst_proj))
    })
}
