//! Small complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Eigenvalues below `NULL_REL · max(λ_max, 1)` count as zero.
pub const NULL_REL: f64 = 1e-12;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(q: &CMat) -> (Vec<f64>, CMat) {
    let n = q.nrows();
    let eig = SymmetricEigen::new(q.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Orthonormal basis (columns) of the numerical null space of a Hermitian
/// PSD matrix, plus the eigenvector of its smallest eigenvalue.
pub fn null_space(q: &CMat) -> (CMat, CVec) {
    let (values, vectors) = hermitian_eigen(q);
    let top = values.last().copied().unwrap_or(0.0);
    let thresh = NULL_REL * top.max(1.0);
    let dim = values.iter().take_while(|&&l| l <= thresh).count();
    let min_vec = vectors.column(0).into_owned();
    (vectors.columns(0, dim).into_owned(), min_vec)
}

/// `Σ x xᴴ` over column vectors.
pub fn outer_sum<'a>(n: usize, xs: impl IntoIterator<Item = &'a CVec>) -> CMat {
    let mut q = CMat::zeros(n, n);
    for x in xs {
        q += x * x.adjoint();
    }
    q
}

/// Unit-norm copy of `v`; a zero vector is returned unchanged.
pub fn normalized(v: CVec) -> CVec {
    let n = v.norm();
    if n > 0.0 {
        v.unscale(n)
    } else {
        v
    }
}

/// `|aᴴ b|²`.
pub fn gain(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).norm_sqr()
}

/// i.i.d. circularly-symmetric complex Gaussian entries of unit variance.
pub fn crandn<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Unit basis vector `e_i` of length `n`.
pub fn basis(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = crandn(&mut rng, 4, 4);
        let q = &a * a.adjoint();
        let (vals, vecs) = hermitian_eigen(&q);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = CMat::from_diagonal(&CVec::from_iterator(4, vals.iter().map(|&x| x.into())));
        let back = &vecs * d * vecs.adjoint();
        assert!((back - q).norm() < 1e-10);
    }

    #[test]
    fn null_space_of_rank_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<CVec> = (0..2).map(|_| crandn(&mut rng, 4, 1).column(0).into_owned()).collect();
        let q = outer_sum(4, &x);
        let (n, _) = null_space(&q);
        assert_eq!(n.ncols(), 2);
        for c in 0..2 {
            let col = n.column(c).into_owned();
            assert!((col.norm() - 1.0).abs() < 1e-12);
            for xi in &x {
                assert!(gain(&col, xi) < 1e-20);
            }
        }
    }
}
