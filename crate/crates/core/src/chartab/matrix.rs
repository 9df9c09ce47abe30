use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Character, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::groups::GroupRef;
use crate::linalg::{self, CMat};

/// Residual bound for the homomorphism and trace checks on a built irrep.
pub const MATRIX_TOLERANCE: f64 = 1e-8;

/// Unitary matrices `ρ(g)` for every element of a group.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    group: GroupRef,
    matrices: Vec<CMat>,
}

impl MatrixRep {
    pub fn new(group: GroupRef, matrices: Vec<CMat>) -> Result<MatrixRep> {
        if matrices.len() != group.order() {
            return Err(Error::input("one matrix per group element expected"));
        }
        let d = matrices[0].nrows();
        if matrices.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::input("matrices must be square of equal size"));
        }
        Ok(MatrixRep { group, matrices })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn trace(&self, g: usize) -> Complex<f64> {
        self.matrices[g].trace()
    }

    /// `max ‖ρ(g)ρ(h) − ρ(gh)‖` over all pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let g = &self.group;
        let mut worst = 0.0f64;
        for a in 0..g.order() {
            for b in 0..g.order() {
                let diff = &self.matrices[a] * &self.matrices[b] - &self.matrices[g.mul(a, b)];
                worst = worst.max(linalg::max_abs(&diff));
            }
        }
        worst
    }
}

pub fn matrix_irrep(chi: &Character) -> Result<MatrixRep> {
    matrix_irrep_with(chi, DEFAULT_SEED)
}

/// Explicit unitary matrices affording the irreducible character `chi`.
///
/// The `chi`-isotypic part of the left-regular representation has dimension
/// `d²`; a generic Hermitian element of the right-regular commutant splits it
/// into `d` copies of the irrep, and the first copy is returned.
pub fn matrix_irrep_with(chi: &Character, seed: u64) -> Result<MatrixRep> {
    let group = chi.group().clone();
    let g = group.as_ref();
    let n = g.order();
    let d = chi.degree() as usize;
    let left = |x: usize| -> CMat {
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(g.mul(x, h), h)] = linalg::c(1.0, 0.0);
        }
        m
    };
    let right = |x: usize| -> CMat {
        let xinv = g.inv(x);
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(g.mul(h, xinv), h)] = linalg::c(1.0, 0.0);
        }
        m
    };
    let mut p = CMat::zeros(n, n);
    for x in 0..n {
        p += left(x) * chi.value(x).to_complex().conj();
    }
    p = p.scale(d as f64 / n as f64);
    let q = linalg::projection_range(&p, 1e-6)
        .ok_or_else(|| Error::IsotypicProjection("projection is not idempotent".into()))?;
    if q.ncols() != d * d {
        return Err(Error::IsotypicProjection(format!(
            "isotypic component has dimension {}, expected {}",
            q.ncols(),
            d * d
        )));
    }
    if d == 1 {
        let matrices = (0..n)
            .map(|x| CMat::from_element(1, 1, chi.value(x).to_complex()))
            .collect();
        return MatrixRep::new(group, matrices);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut b = CMat::zeros(n, n);
        for x in 0..n {
            let w = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            b += right(x) * w;
        }
        let a = &b + b.adjoint();
        let restricted = q.adjoint() * &a * &q;
        let (values, vectors) = linalg::hermitian_eigen(&restricted);
        let runs = linalg::cluster_sorted(&values, 1e-6);
        if runs.len() != d || runs.iter().any(|r| r.len() != d) {
            continue;
        }
        let v = &q * vectors.columns(0, d);
        let matrices: Vec<CMat> = (0..n).map(|x| v.adjoint() * left(x) * &v).collect();
        let rep = MatrixRep::new(group.clone(), matrices)?;
        let trace_err = (0..n)
            .map(|x| (rep.trace(x) - chi.value(x).to_complex()).norm())
            .fold(0.0, f64::max);
        let residual = rep.homomorphism_residual();
        if residual < MATRIX_TOLERANCE && trace_err < MATRIX_TOLERANCE {
            return Ok(rep);
        }
        log::debug!("irrep attempt rejected: residual {residual:e}, trace error {trace_err:e}");
    }
    Err(Error::IsotypicProjection("no generic commutant element found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::groups::fixtures::{cyclic, d4};

    #[test]
    fn d4_irreps_are_unitary_homomorphisms() {
        let g = d4();
        for chi in character_table(&g).unwrap() {
            let rep = matrix_irrep(&chi).unwrap();
            assert_eq!(rep.degree(), chi.degree() as usize);
            assert!(rep.homomorphism_residual() < 1e-9);
            for x in 0..g.order() {
                let m = rep.matrix(x);
                let gram = m.adjoint() * m;
                assert!(linalg::max_abs(&(gram - linalg::identity(rep.degree()))) < 1e-9);
                assert!((m.trace() - chi.value(x).to_complex()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn quaternion_two_dimensional_irrep() {
        let q = crate::chartab::tests::quaternion();
        let t = character_table(&q).unwrap();
        let rep = matrix_irrep(&t[4]).unwrap();
        assert_eq!(rep.degree(), 2);
        assert!(rep.homomorphism_residual() < 1e-9);
    }

    #[test]
    fn linear_characters_give_scalars() {
        let g = cyclic(5);
        let t = character_table(&g).unwrap();
        let rep = matrix_irrep(&t[2]).unwrap();
        assert_eq!(rep.degree(), 1);
        assert!(rep.homomorphism_residual() < 1e-12);
    }
}
