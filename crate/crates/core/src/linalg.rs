//! Dense complex linear algebra helpers shared by the numeric pipelines.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    // Symmetrize away rounding so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Groups sorted values into runs whose neighbours differ by less than `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] >= tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Smallest gap between neighbouring sorted values (infinite for < 2 values).
pub fn min_gap(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Operator 2-norm via the largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Orthonormal basis for the range of a Hermitian projection.
pub fn projection_range(p: &CMat, tol: f64) -> Option<CMat> {
    let (values, vectors) = hermitian_eigen(p);
    let mut cols = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if (v - 1.0).abs() < tol {
            cols.push(vectors.column(i).into_owned());
        } else if v.abs() >= tol {
            return None;
        }
    }
    Some(columns_to_matrix(p.nrows(), &cols))
}

pub fn columns_to_matrix(rows: usize, cols: &[DVector<C64>]) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_eigen_sorted_and_orthonormal() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let gram = vecs.adjoint() * &vecs;
        assert!(max_abs(&(gram - identity(2))) < 1e-12);
    }

    #[test]
    fn clustering() {
        let runs = cluster_sorted(&[0.0, 1e-12, 1.0, 2.0, 2.0 + 1e-13], 1e-8);
        assert_eq!(runs, vec![0..2, 2..3, 3..5]);
        assert!(min_gap(&[1.0]).is_infinite());
    }
}
