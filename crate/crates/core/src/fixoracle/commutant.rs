use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{twisted_regular, FiniteUnitaryRep, Side};
use crate::error::{Error, Result};
use crate::groups::{GroupRef, Subgroup};
use crate::linalg::{self, c, CMat, C64};
use crate::twisted::{omega_irreps, subrep_multiplicity, TwoCocycle};

/// Largest `dim H · |G|` accepted by [`fixed_point_blocks`].
pub const DEFAULT_DIMENSION_BOUND: usize = 256;

/// Singular values of the commutator system below this count as zero.
pub const RANK_ZERO_BELOW: f64 = 1e-8;

/// Singular values above this count as nonzero; anything between is ambiguous.
pub const RANK_NONZERO_ABOVE: f64 = 1e-4;

const CLUSTER_TOLERANCE: f64 = 1e-6;
const ATTEMPTS: u64 = 8;

/// One isotypic component: `multiplicity` copies of an irreducible of
/// dimension `irreducible_dim`.
#[derive(Clone, Debug)]
pub struct IsotypicBlock {
    pub irreducible_dim: usize,
    pub multiplicity: usize,
    pub projection: CMat,
}

impl IsotypicBlock {
    pub fn rank(&self) -> usize {
        self.irreducible_dim * self.multiplicity
    }
}

/// Commutant of a finite set of unitaries, with its block structure.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Dimension of the commutant.
    pub dimension: usize,
    pub blocks: Vec<IsotypicBlock>,
    /// Largest singular value treated as zero and smallest treated as nonzero.
    pub rank_gap: (f64, f64),
}

/// Solves `XA(k) = A(k)X` for all `k` and splits the space into isotypic blocks.
///
/// The solution space comes from the null space of the stacked systems
/// `(1 ⊗ A − Aᵀ ⊗ 1)·vec X = 0`. A random Hermitian element of it has
/// eigenspaces that are irreducible; two of them belong to one block exactly
/// when the commutant maps one into the other.
pub fn decompose(ops: &[CMat], seed: u64) -> Result<Decomposition> {
    let n = ops.first().map(CMat::nrows).ok_or_else(|| Error::input("no operators"))?;
    let id = linalg::identity(n);
    let mut stacked = CMat::zeros(ops.len().max(1) * n * n, n * n);
    for (i, a) in ops.iter().enumerate() {
        let block = linalg::kron(&id, a) - linalg::kron(&a.transpose(), &id);
        stacked.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut basis: Vec<CMat> = Vec::new();
    let (mut largest_zero, mut smallest_nonzero): (f64, f64) = (0.0, f64::INFINITY);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < RANK_ZERO_BELOW {
            largest_zero = largest_zero.max(s);
            let v: Vec<C64> = v_t.row(i).iter().map(|z| z.conj()).collect();
            basis.push(CMat::from_column_slice(n, n, &v));
        } else if s > RANK_NONZERO_ABOVE {
            smallest_nonzero = smallest_nonzero.min(s);
        } else {
            return Err(Error::RankUncertain { value: s });
        }
    }

    for attempt in 0..ATTEMPTS {
        if let Some(blocks) = split_blocks(&basis, n, seed.wrapping_add(attempt)) {
            return Ok(Decomposition {
                dimension: basis.len(),
                blocks,
                rank_gap: (largest_zero, smallest_nonzero),
            });
        }
    }
    Err(Error::IsotypicProjection(format!(
        "no consistent block structure after {ATTEMPTS} random elements"
    )))
}

fn split_blocks(basis: &[CMat], n: usize, seed: u64) -> Option<Vec<IsotypicBlock>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = CMat::zeros(n, n);
    for x in basis {
        // Both Hermitian parts, since the basis only spans over C.
        let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        h += (x + x.adjoint()) * c(a, 0.0) + (x - x.adjoint()) * c(0.0, b);
    }
    let (values, vectors) = linalg::hermitian_eigen(&h);
    let clusters = linalg::cluster_sorted(&values, CLUSTER_TOLERANCE);
    let spaces: Vec<CMat> = clusters
        .iter()
        .map(|r| {
            let cols: Vec<DVector<C64>> = r.clone().map(|i| vectors.column(i).into_owned()).collect();
            linalg::columns_to_matrix(n, &cols)
        })
        .collect();

    // Union clusters joined by a nonzero intertwiner.
    let k = spaces.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..k {
        for b in a + 1..k {
            let linked = basis
                .iter()
                .any(|x| linalg::max_abs(&(spaces[a].adjoint() * x * &spaces[b])) > CLUSTER_TOLERANCE);
            if linked {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for a in 0..k {
        let r = root(&mut parent, a);
        match seen.iter().position(|&s| s == r) {
            Some(i) => groups[i].push(a),
            None => {
                seen.push(r);
                groups.push(vec![a]);
            }
        }
    }

    let mut blocks = Vec::new();
    let mut commutant_dim = 0;
    for members in groups {
        let d = spaces[members[0]].ncols();
        if members.iter().any(|&a| spaces[a].ncols() != d) {
            return None;
        }
        let mut p = CMat::zeros(n, n);
        for &a in &members {
            p += &spaces[a] * spaces[a].adjoint();
        }
        commutant_dim += members.len() * members.len();
        blocks.push(IsotypicBlock {
            irreducible_dim: d,
            multiplicity: members.len(),
            projection: p,
        });
    }
    (commutant_dim == basis.len()).then_some(blocks)
}

/// Dimensions and block ranks of the commutant of `V ⊗ ρ_G` restricted to `K`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FixedPointReport {
    pub dimension: usize,
    pub expected_dimension: usize,
    pub block_ranks: Vec<usize>,
    pub expected_block_ranks: Vec<usize>,
    pub rank_gap: (f64, f64),
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.dimension == self.expected_dimension && self.block_ranks == self.expected_block_ranks
    }
}

/// Commutant of `{V(k) ⊗ ρ_G(k) : k ∈ K}` on `H ⊗ ℓ²(G)`, with `ρ_G` the
/// right regular representation. Each `σ ∈ K̂_ω` contributes a block of
/// multiplicity `[G:K]·dim H·d_σ`.
pub fn fixed_point_blocks(k: &Subgroup, v: &FiniteUnitaryRep, bound: usize, seed: u64) -> Result<FixedPointReport> {
    let g: &GroupRef = k.parent();
    if **v.group() != **k.group() {
        return Err(Error::input("fixed_point_blocks: representation is not on the subgroup"));
    }
    let size = v.degree() * g.order();
    if size > bound {
        return Err(Error::TooLarge { size, bound });
    }
    let rho = twisted_regular(&TwoCocycle::trivial(g.clone()), Side::Right);
    let gens: Vec<usize> = k.group().generators().to_vec();
    let ops: Vec<CMat> = gens
        .iter()
        .map(|&x| linalg::kron(v.matrix(x), rho.matrix(k.embed(x))))
        .collect();
    let ops = if ops.is_empty() { vec![linalg::identity(size)] } else { ops };
    let dec = decompose(&ops, seed)?;

    let mult = |d: usize| k.index() * v.degree() * d;
    let reps = omega_irreps(v.cocycle())?;
    let mut expected_block_ranks: Vec<usize> = reps.iter().map(|r| mult(r.degree() as usize) * r.degree() as usize).collect();
    let expected_dimension = reps.iter().map(|r| mult(r.degree() as usize).pow(2)).sum();
    let mut block_ranks: Vec<usize> = dec.blocks.iter().map(IsotypicBlock::rank).collect();
    block_ranks.sort_unstable();
    expected_block_ranks.sort_unstable();
    Ok(FixedPointReport {
        dimension: dec.dimension,
        expected_dimension,
        block_ranks,
        expected_block_ranks,
        rank_gap: dec.rank_gap,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BranchingPair {
    /// Index into `omega_irreps(ω)`.
    pub sigma: usize,
    /// Index into `omega_irreps(ω|L)`.
    pub tau: usize,
    pub exact: u32,
    pub oracle: u32,
    /// `P_σ Q_τ ≠ 0` for the central projections of the two commutants.
    pub blocks_meet: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BranchingReport {
    pub pairs: Vec<BranchingPair>,
}

impl BranchingReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.exact == p.oracle && (p.exact > 0) == p.blocks_meet)
    }
}

/// Matches blocks to irreducibles by their numeric characters `tr(A(x)P)/m`.
fn label_blocks(dec: &Decomposition, ops: &[CMat], characters: &[Vec<C64>]) -> Result<Vec<usize>> {
    characters
        .iter()
        .map(|chi| {
            dec.blocks
                .iter()
                .position(|b| {
                    ops.iter().zip(chi).all(|(a, want)| {
                        let got = (a * &b.projection).trace() / c(b.multiplicity as f64, 0.0);
                        (got - want).norm() < 1e-6
                    })
                })
                .ok_or_else(|| Error::IsotypicProjection("block without a matching character".into()))
        })
        .collect()
}

/// Multiplicities `m_τ^σ` read off from commuting central projections of the
/// `K`- and `L`-commutants of `λ^ω` on `ℓ²(K)`, against the exact values.
pub fn branching_check(l: &Subgroup, cocycle: &TwoCocycle, seed: u64) -> Result<BranchingReport> {
    let k = l.parent();
    if **cocycle.group() != **k {
        return Err(Error::input("branching_check: cocycle is not on the ambient group"));
    }
    let lambda = twisted_regular(cocycle, Side::Left);
    let all: Vec<CMat> = lambda.matrices().to_vec();
    let restricted: Vec<CMat> = l.elements().iter().map(|&e| all[e].clone()).collect();
    let gens_k: Vec<CMat> = k.generators().iter().map(|&x| all[x].clone()).collect();
    let gens_l: Vec<CMat> = l.group().generators().iter().map(|&x| restricted[x].clone()).collect();
    let id = vec![linalg::identity(k.order())];
    let dec_k = decompose(if gens_k.is_empty() { &id } else { &gens_k }, seed)?;
    let dec_l = decompose(if gens_l.is_empty() { &id } else { &gens_l }, seed)?;

    let sigmas = omega_irreps(cocycle)?;
    let taus = omega_irreps(&cocycle.restrict(l))?;
    let chars = |reps: &[crate::twisted::OmegaRep]| -> Vec<Vec<C64>> {
        reps.iter()
            .map(|r| r.twisted_values().iter().map(|v| v.to_complex()).collect())
            .collect()
    };
    let sigma_blocks = label_blocks(&dec_k, &all, &chars(&sigmas))?;
    let tau_blocks = label_blocks(&dec_l, &restricted, &chars(&taus))?;

    let mut pairs = Vec::new();
    for (si, sigma) in sigmas.iter().enumerate() {
        let p = &dec_k.blocks[sigma_blocks[si]].projection;
        for (ti, tau) in taus.iter().enumerate() {
            let q = &dec_l.blocks[tau_blocks[ti]].projection;
            let pq = p * q;
            let rank = pq.trace().re;
            let per = (sigma.degree() * tau.degree()) as f64;
            let oracle = (rank / per).round();
            if (rank - oracle * per).abs() > 1e-6 {
                return Err(Error::IsotypicProjection(format!("non-integral multiplicity {}", rank / per)));
            }
            let exact = subrep_multiplicity(tau, sigma, l)?
                .count()
                .ok_or_else(|| Error::input("restricted cocycle has a different class"))?;
            pairs.push(BranchingPair {
                sigma: si,
                tau: ti,
                exact,
                oracle: oracle as u32,
                blocks_meet: linalg::max_abs(&pq) > 1e-6,
            });
        }
    }
    Ok(BranchingReport { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::DEFAULT_SEED;
    use crate::groups::fixtures::{cyclic, d4};
    use crate::groups::all_subgroups;
    use crate::twisted::fixtures::{h_subgroup, omega_z1, omega_z2, word};

    #[test]
    fn regular_rep_of_z2() {
        let g = cyclic(2);
        let k = Subgroup::whole(g.clone());
        let v = FiniteUnitaryRep::trivial(g);
        let r = fixed_point_blocks(&k, &v, DEFAULT_DIMENSION_BOUND, DEFAULT_SEED).unwrap();
        assert_eq!(r.dimension, 2);
        assert_eq!(r.block_ranks, [1, 1]);
        assert!(r.passed());
    }

    #[test]
    fn reflection_subgroup_of_d4() {
        let g = d4();
        let k = Subgroup::generated(g.clone(), &[word(&g, "S")]);
        let v = FiniteUnitaryRep::trivial(k.group().clone());
        let r = fixed_point_blocks(&k, &v, DEFAULT_DIMENSION_BOUND, DEFAULT_SEED).unwrap();
        assert_eq!(r.dimension, 32);
        assert_eq!(r.block_ranks, [4, 4]);
        assert!(r.passed());
    }

    #[test]
    fn obstruction_at_z1_gives_one_block() {
        let h = h_subgroup();
        let sigma = omega_irreps(&omega_z1()).unwrap().remove(0);
        let v = FiniteUnitaryRep::from_omega_rep(&sigma).unwrap();
        let r = fixed_point_blocks(&h, &v, DEFAULT_DIMENSION_BOUND, DEFAULT_SEED).unwrap();
        assert_eq!(r.block_ranks.len(), 1);
        assert_eq!(r.dimension, 64);
        assert!(r.passed());
    }

    #[test]
    fn bound_is_enforced() {
        let g = d4();
        let k = Subgroup::whole(g.clone());
        let v = FiniteUnitaryRep::trivial(g);
        assert!(matches!(fixed_point_blocks(&k, &v, 4, DEFAULT_SEED), Err(Error::TooLarge { size: 8, bound: 4 })));
    }

    #[test]
    fn branching_examples() {
        let g = d4();
        let k3 = Subgroup::generated(g.clone(), &[word(&g, "S")]);
        let r = branching_check(&k3, &TwoCocycle::trivial(g.clone()), DEFAULT_SEED).unwrap();
        assert!(r.passed(), "{r:?}");
        // λ (the degree-2 irrep, last) restricts to trivial + sign.
        assert!(r.pairs.iter().filter(|p| p.sigma == 4).all(|p| p.exact == 1));

        let whole = Subgroup::whole(g.clone());
        let r = branching_check(&whole, &omega_z2(), DEFAULT_SEED).unwrap();
        assert!(r.pairs.iter().all(|p| p.exact == u32::from(p.sigma == p.tau)));

        let r = branching_check(&k3, &omega_z2(), DEFAULT_SEED).unwrap();
        assert!(r.passed());
        let tau_idx = 4;
        assert!(r.pairs.iter().filter(|p| p.sigma == tau_idx).all(|p| p.exact == 1));
    }

    #[test]
    fn branching_on_every_subgroup() {
        let g = d4();
        for l in all_subgroups(&g) {
            for w in [TwoCocycle::trivial(g.clone()), omega_z2()] {
                let r = branching_check(&l, &w, DEFAULT_SEED).unwrap();
                assert!(r.passed(), "{l}: {r:?}");
            }
        }
    }

    #[test]
    fn decompose_identity() {
        let dec = decompose(&[linalg::identity(3)], DEFAULT_SEED).unwrap();
        assert_eq!(dec.dimension, 9);
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].multiplicity, 3);
    }
}
