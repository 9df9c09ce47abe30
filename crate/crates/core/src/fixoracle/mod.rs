//! Floating-point cross-checks of the structure theory on finite groups.
//!
//! Everything here is brute force on explicit matrices: twisted regular
//! representations, the absorption unitary, matrix-coefficient bases, and
//! commutants of `V ⊗ ρ` on `H ⊗ ℓ²(G)`. Integer outcomes (dimensions,
//! block counts, multiplicities) are meant to be compared with the exact
//! character pipeline.
//!
//! Haar measure is the normalized counting measure, and `H ⊗ ℓ²(G)` is laid
//! out as `kron(A_H, B_G)`.

mod commutant;

use crate::error::{Error, Result};
use crate::groups::{GroupRef, Subgroup};
use crate::linalg::{self, c, CMat};
use crate::twisted::{omega_irreps, OmegaRep, TwoCocycle};

pub use commutant::{
    branching_check, decompose, fixed_point_blocks, BranchingPair, BranchingReport, Decomposition, FixedPointReport,
    IsotypicBlock, DEFAULT_DIMENSION_BOUND, RANK_NONZERO_ABOVE, RANK_ZERO_BELOW,
};

pub use crate::linalg::{CMat as ComplexMatrix, C64};

/// Residual tolerance for the unitary identities.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// An ω-representation by explicit unitary matrices.
#[derive(Clone, Debug)]
pub struct FiniteUnitaryRep {
    cocycle: TwoCocycle,
    matrices: Vec<CMat>,
}

impl FiniteUnitaryRep {
    /// Checks `W(s)W(t) = ω(s,t)W(st)` entrywise within [`RESIDUAL_TOLERANCE`].
    pub fn new(cocycle: TwoCocycle, matrices: Vec<CMat>) -> Result<FiniteUnitaryRep> {
        if matrices.len() != cocycle.group().order() {
            return Err(Error::input("one matrix per group element expected"));
        }
        let d = matrices[0].nrows();
        if matrices.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::input("matrices must be square of one size"));
        }
        let rep = FiniteUnitaryRep { cocycle, matrices };
        let r = rep.multiplier_residual();
        if r > RESIDUAL_TOLERANCE {
            return Err(Error::input(format!("not an ω-representation (residual {r:e})")));
        }
        Ok(rep)
    }

    /// The trivial one-dimensional representation.
    pub fn trivial(group: GroupRef) -> FiniteUnitaryRep {
        let n = group.order();
        FiniteUnitaryRep {
            cocycle: TwoCocycle::trivial(group),
            matrices: vec![linalg::identity(1); n],
        }
    }

    pub fn from_omega_rep(rep: &OmegaRep) -> Result<FiniteUnitaryRep> {
        FiniteUnitaryRep::new(rep.cocycle().clone(), rep.matrices()?)
    }

    pub fn group(&self) -> &GroupRef {
        self.cocycle.group()
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
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

    /// `max ‖W(s)W(t) − ω(s,t)W(st)‖` over all pairs, entrywise.
    pub fn multiplier_residual(&self) -> f64 {
        let g = self.group();
        let mut worst: f64 = 0.0;
        for s in 0..g.order() {
            for t in 0..g.order() {
                let lhs = &self.matrices[s] * &self.matrices[t];
                let rhs = &self.matrices[g.mul(s, t)] * self.cocycle.value(s, t).to_complex();
                worst = worst.max(linalg::max_abs(&(lhs - rhs)));
            }
        }
        worst
    }

    /// `max ‖W(s)*W(s) − 1‖`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = linalg::identity(self.degree());
        self.matrices
            .iter()
            .map(|m| linalg::max_abs(&(m.adjoint() * m - &id)))
            .fold(0.0, f64::max)
    }

    /// Restriction to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> FiniteUnitaryRep {
        FiniteUnitaryRep {
            cocycle: self.cocycle.restrict(sub),
            matrices: sub.elements().iter().map(|&e| self.matrices[e].clone()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `λ^ω(s)ξ(t) = ω(s, s⁻¹t)ξ(s⁻¹t)` or `ρ^ω(s)ξ(t) = ω(t, s)ξ(ts)`.
pub fn twisted_regular(cocycle: &TwoCocycle, side: Side) -> FiniteUnitaryRep {
    let g = cocycle.group();
    let n = g.order();
    let matrices = (0..n)
        .map(|s| {
            let mut m = CMat::zeros(n, n);
            for t in 0..n {
                match side {
                    Side::Left => {
                        let u = g.mul(g.inv(s), t);
                        m[(t, u)] = cocycle.value(s, u).to_complex();
                    }
                    Side::Right => {
                        m[(t, g.mul(t, s))] = cocycle.value(t, s).to_complex();
                    }
                }
            }
            m
        })
        .collect();
    FiniteUnitaryRep {
        cocycle: cocycle.clone(),
        matrices,
    }
}

/// `max_s ‖W(V ⊗ ρ^μ)(s)W* − 1 ⊗ ρ^{ωμ}(s)‖` with `(Wξ)(s) = V(s)ξ(s)`.
pub fn absorption_check(v: &FiniteUnitaryRep, mu: &TwoCocycle) -> Result<f64> {
    let g = v.group();
    if **mu.group() != **g {
        return Err(Error::input("absorption_check: cocycle lives on another group"));
    }
    let (d, n) = (v.degree(), g.order());
    let mut w = CMat::zeros(d * n, d * n);
    for t in 0..n {
        for a in 0..d {
            for b in 0..d {
                w[(a * n + t, b * n + t)] = v.matrix(t)[(a, b)];
            }
        }
    }
    let rho_mu = twisted_regular(mu, Side::Right);
    let rho_product = twisted_regular(&v.cocycle().mul(mu), Side::Right);
    let id = linalg::identity(d);
    let mut worst: f64 = 0.0;
    for s in 0..n {
        let lhs = &w * linalg::kron(v.matrix(s), rho_mu.matrix(s)) * w.adjoint();
        let rhs = linalg::kron(&id, rho_product.matrix(s));
        worst = worst.max(linalg::op_norm(&(lhs - rhs)));
    }
    Ok(worst)
}

/// Outcome of the matrix-coefficient check on `ℓ²(K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeterWeylReport {
    pub degrees: Vec<u32>,
    pub group_order: usize,
    /// `‖Gram − 1‖` of all `√d·conj σ(k)_{ij}` in `ℓ²(K, normalized)`.
    pub gram_deviation: f64,
    /// `max_s ‖λ^ω(s)U − U(⊕ σ(s) ⊗ 1)‖`.
    pub left_residual: f64,
    /// `max_s ‖ρ^{ω̄}(s)U − U(⊕ 1 ⊗ σ̄(s))‖`.
    pub right_residual: f64,
}

impl PeterWeylReport {
    pub fn passed(&self, tol: f64) -> bool {
        let total: u32 = self.degrees.iter().map(|d| d * d).sum();
        total as usize == self.group_order
            && self.gram_deviation < tol
            && self.left_residual < tol
            && self.right_residual < tol
    }
}

/// Orthonormality and intertwining of the coefficient functions of `K̂_ω`.
pub fn peter_weyl_check(cocycle: &TwoCocycle) -> Result<PeterWeylReport> {
    let g = cocycle.group();
    let n = g.order();
    let reps = omega_irreps(cocycle)?;
    let models: Vec<Vec<CMat>> = reps.iter().map(|r| r.matrices()).collect::<Result<_>>()?;
    let degrees: Vec<u32> = reps.iter().map(OmegaRep::degree).collect();
    let total: usize = degrees.iter().map(|&d| (d * d) as usize).sum();

    // Columns are coefficient functions scaled to unit length in the counting
    // norm; the normalized-measure Gram matrix is then U*U.
    let mut u = CMat::zeros(n, total);
    let mut col = 0;
    for (model, &d) in models.iter().zip(&degrees) {
        let d = d as usize;
        let scale = ((d as f64) / (n as f64)).sqrt();
        for i in 0..d {
            for j in 0..d {
                for k in 0..n {
                    u[(k, col)] = model[k][(i, j)].conj() * scale;
                }
                col += 1;
            }
        }
    }
    let gram_deviation = if total == n {
        linalg::op_norm(&(u.adjoint() * &u - linalg::identity(n)))
    } else {
        f64::INFINITY
    };

    let left = twisted_regular(cocycle, Side::Left);
    let right = twisted_regular(&cocycle.conj(), Side::Right);
    let (mut left_residual, mut right_residual): (f64, f64) = (0.0, 0.0);
    for s in 0..n {
        let mut a = CMat::zeros(total, total);
        let mut b = CMat::zeros(total, total);
        let mut off = 0;
        for (model, &d) in models.iter().zip(&degrees) {
            let d = d as usize;
            let id = linalg::identity(d);
            let conj = model[s].map(|z| z.conj());
            a.view_mut((off, off), (d * d, d * d)).copy_from(&linalg::kron(&model[s], &id));
            b.view_mut((off, off), (d * d, d * d)).copy_from(&linalg::kron(&id, &conj));
            off += d * d;
        }
        left_residual = left_residual.max(linalg::op_norm(&(left.matrix(s) * &u - &u * a)));
        right_residual = right_residual.max(linalg::op_norm(&(right.matrix(s) * &u - &u * b)));
    }
    Ok(PeterWeylReport {
        degrees,
        group_order: n,
        gram_deviation,
        left_residual,
        right_residual,
    })
}

/// A one-dimensional ω-rep given by scalars, for small hand-built examples.
pub fn scalar_rep(cocycle: TwoCocycle, values: &[(f64, f64)]) -> Result<FiniteUnitaryRep> {
    let matrices = values.iter().map(|&(re, im)| CMat::from_element(1, 1, c(re, im))).collect();
    FiniteUnitaryRep::new(cocycle, matrices)
}
