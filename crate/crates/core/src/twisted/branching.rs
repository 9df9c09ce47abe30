use num_traits::ToPrimitive;

use super::{coboundary_solve, OmegaRep, TwoCocycle};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Phase, Rat};
use crate::groups::{conjugate_subgroup, Subgroup};

/// `f·ρ`, an ω-rep for `δf·ω′` when `ρ` is one for `ω′`.
pub fn twist_rep(f: &[Phase], rep: &OmegaRep) -> Result<OmegaRep> {
    let g = rep.group().clone();
    if f.len() != g.order() || !f[0].is_one() {
        return Err(Error::input("twisting function must be defined on the group with f(e) = 1"));
    }
    let cocycle = TwoCocycle::coboundary(g, f).mul(rep.cocycle());
    let values = twisted_values(f, rep)?;
    OmegaRep::from_twisted_values(&cocycle, values)
}

fn twisted_values(f: &[Phase], rep: &OmegaRep) -> Result<Vec<Cyclo>> {
    f.iter()
        .zip(rep.twisted_values())
        .map(|(p, v)| Cyclo::from_phase(p)?.try_mul(v))
        .collect()
}

/// Outcome of comparing an ω-rep on `L` with the restriction of one on `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Count(u32),
    /// `[ω_σ|L] ≠ [ω_τ]`, so no twist makes the two comparable.
    ClassMismatch,
}

impl Multiplicity {
    pub fn count(self) -> Option<u32> {
        match self {
            Multiplicity::Count(m) => Some(m),
            Multiplicity::ClassMismatch => None,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Multiplicity::Count(m) if m > 0)
    }
}

/// Multiplicity of `tau` (on `l.group()`) in `sigma` (on `l.parent()`)
/// restricted to `L`, after twisting `tau` onto the cocycle `ω_σ|L`.
pub fn subrep_multiplicity(tau: &OmegaRep, sigma: &OmegaRep, l: &Subgroup) -> Result<Multiplicity> {
    if **l.parent() != **sigma.group() || **l.group() != **tau.group() {
        return Err(Error::input("subrep_multiplicity: subgroup does not match the representations"));
    }
    let target = sigma.cocycle().restrict(l);
    let Some(f) = coboundary_solve(&target, tau.cocycle()) else {
        return Ok(Multiplicity::ClassMismatch);
    };
    let twisted = twisted_values(&f, tau)?;
    let mut acc = Cyclo::zero();
    for (x, t) in twisted.iter().enumerate() {
        acc = acc.try_add(&sigma.twisted_value(l.embed(x)).try_mul(&t.conj())?)?;
    }
    let m = acc.scale(Rat::new(1, l.order() as i64));
    let count = m
        .to_rat()
        .filter(|r| r.is_integer())
        .and_then(|r| r.to_integer().to_u32())
        .ok_or_else(|| Error::NotRational(format!("multiplicity {m}")))?;
    Ok(Multiplicity::Count(count))
}

/// `k·τ` on `kLk⁻¹`, given by `(k·τ)(a) = τ(k⁻¹ak)` with cocycle
/// `(k·ω)(a, b) = ω(k⁻¹ak, k⁻¹bk)`.
pub fn conjugate_omega_rep(k: usize, tau: &OmegaRep, l: &Subgroup) -> Result<(OmegaRep, Subgroup)> {
    if **l.group() != **tau.group() {
        return Err(Error::input("conjugate_omega_rep: representation lives on another group"));
    }
    let (conj, bijection) = conjugate_subgroup(k, l);
    // back[a'] = the label in L of k⁻¹a'k.
    let mut back = vec![0usize; l.order()];
    for (a, &a_conj) in bijection.iter().enumerate() {
        back[a_conj] = a;
    }
    let w = tau.cocycle();
    let cocycle = TwoCocycle::from_fn(conj.group().clone(), |a, b| w.value(back[a], back[b]));
    let values = (0..conj.order()).map(|a| tau.twisted_value(back[a]).clone()).collect();
    Ok((OmegaRep::from_twisted_values(&cocycle, values)?, conj))
}

/// `k·τ` re-expressed on `ambient|kLk⁻¹`, where `τ` is an `ambient|L`-rep.
///
/// Uses the factor from `σ(k)σ(b)σ(k)⁻¹ = c(kbk⁻¹)·σ(kbk⁻¹)` with
/// `c(kbk⁻¹) = ω(k,b)·ω(kb,k⁻¹)·ω(k,k⁻¹)⁻¹`, which holds for every ω-rep `σ`
/// of the ambient group, so `τ ≤ σ|L` iff the result is `≤ σ|kLk⁻¹`.
pub fn conjugate_into_ambient(
    k: usize,
    tau: &OmegaRep,
    l: &Subgroup,
    ambient: &TwoCocycle,
) -> Result<(OmegaRep, Subgroup)> {
    let g = l.parent().clone();
    if **ambient.group() != *g || *tau.cocycle() != ambient.restrict(l) {
        return Err(Error::input("representation is not defined on the restricted ambient cocycle"));
    }
    let (conj, bijection) = conjugate_subgroup(k, l);
    let kinv = g.inv(k);
    let mut values = vec![Cyclo::zero(); conj.order()];
    for (b, &a_conj) in bijection.iter().enumerate() {
        let bp = l.embed(b);
        let c = ambient.value(k, bp) * ambient.value(g.mul(k, bp), kinv) * ambient.value(k, kinv).inv();
        values[a_conj] = Cyclo::from_phase(&c.inv())?.try_mul(tau.twisted_value(b))?;
    }
    let rep = OmegaRep::from_twisted_values(&ambient.restrict(&conj), values)?;
    Ok((rep, conj))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::omega_irreps;
    use super::*;
    use crate::groups::fixtures::d4;
    use crate::groups::{all_subgroups, GroupRef};
    use proptest::prelude::*;

    fn i() -> Cyclo {
        Cyclo::root_of_unity(1, 4).unwrap()
    }

    /// The two ω-reps of `<S>` for `ω(S,S) = -1`, as (value +i, value -i).
    fn mu_pm_i(k3: &Subgroup) -> (OmegaRep, OmegaRep) {
        let w = omega_z2().restrict(k3);
        let reps = omega_irreps(&w).unwrap();
        let plus = reps.iter().find(|r| *r.twisted_value(1) == i()).unwrap().clone();
        let minus = reps.iter().find(|r| *r.twisted_value(1) == -&i()).unwrap().clone();
        (plus, minus)
    }

    fn k3(g: &GroupRef) -> Subgroup {
        Subgroup::generated(g.clone(), &[word(g, "S")])
    }

    #[test]
    fn tau_contains_both_limit_reps_on_k3() {
        let g = d4();
        let l = k3(&g);
        let reps = omega_irreps(&omega_z2()).unwrap();
        let tau = &reps[4];
        let (plus, minus) = mu_pm_i(&l);
        assert_eq!(subrep_multiplicity(&plus, tau, &l).unwrap(), Multiplicity::Count(1));
        assert_eq!(subrep_multiplicity(&minus, tau, &l).unwrap(), Multiplicity::Count(1));
        // A ζ with value -i at S does not contain the +i rep.
        let s = word(&g, "S");
        let zeta_minus = reps[..4].iter().find(|r| *r.twisted_value(s) == -&i()).unwrap();
        assert_eq!(subrep_multiplicity(&plus, zeta_minus, &l).unwrap(), Multiplicity::Count(0));
        assert_eq!(subrep_multiplicity(&minus, zeta_minus, &l).unwrap(), Multiplicity::Count(1));
    }

    #[test]
    fn self_multiplicity_is_one() {
        for w in [omega_z1(), omega_z2()] {
            let whole = Subgroup::whole(w.group().clone());
            for rep in omega_irreps(&w).unwrap() {
                assert_eq!(subrep_multiplicity(&rep, &rep, &whole).unwrap(), Multiplicity::Count(1));
            }
        }
    }

    #[test]
    fn class_mismatch_is_reported() {
        // A genuine rep of H against the z1-obstructed rep of H.
        let h = h_subgroup();
        let hg = h.group().clone();
        let sigma = &omega_irreps(&omega_z1()).unwrap()[0];
        let triv = &omega_irreps(&TwoCocycle::trivial(hg.clone())).unwrap()[0];
        let whole = Subgroup::whole(hg);
        assert_eq!(subrep_multiplicity(triv, sigma, &whole).unwrap(), Multiplicity::ClassMismatch);
    }

    #[test]
    fn twisting_trivial_character_of_z2() {
        let triv_cocycle = z2_cocycle(Phase::ONE);
        let triv = &omega_irreps(&triv_cocycle).unwrap()[0];
        let f = vec![Phase::ONE, Phase::from_fraction(1, 4)];
        let mu = twist_rep(&f, triv).unwrap();
        assert_eq!(*mu.twisted_value(1), i());
        assert_eq!(mu.cocycle().value(1, 1), Phase::minus_one());
        let same = twist_rep(&[Phase::ONE, Phase::ONE], triv).unwrap();
        assert_eq!(&same, triv);
    }

    #[test]
    fn twisting_permutes_irreps() {
        let g = d4();
        let w = omega_z2();
        let f: Vec<Phase> = (0..8).map(|k| Phase::from_fraction(k * k, 8)).collect();
        let mut f = f;
        f[0] = Phase::ONE;
        let target = TwoCocycle::coboundary(g, &f).mul(&w);
        let mut twisted: Vec<OmegaRep> = omega_irreps(&w)
            .unwrap()
            .iter()
            .map(|r| twist_rep(&f, r).unwrap())
            .collect();
        let mut direct = omega_irreps(&target).unwrap();
        let key = |r: &OmegaRep| r.sort_key();
        twisted.sort_by_key(key);
        direct.sort_by_key(key);
        assert_eq!(twisted, direct);
    }

    #[test]
    fn conjugating_mu_on_s_by_r() {
        let g = d4();
        let l = k3(&g);
        let (plus, _) = mu_pm_i(&l);
        let (rep, conj) = conjugate_omega_rep(word(&g, "R"), &plus, &l).unwrap();
        assert_eq!(conj, Subgroup::generated(g.clone(), &[word(&g, "SR^2")]));
        let pos = conj.position(word(&g, "SR^2")).unwrap();
        assert_eq!(*rep.twisted_value(pos), i());
        let (same, same_sub) = conjugate_omega_rep(0, &plus, &l).unwrap();
        assert_eq!(same_sub, l);
        assert_eq!(same, plus);
    }

    /// Frobenius identities over every subgroup of D4 for the given cocycle.
    fn frobenius(w: &TwoCocycle) {
        let g = w.group().clone();
        let sigmas = omega_irreps(w).unwrap();
        let order: u32 = sigmas.iter().map(|s| s.degree().pow(2)).sum();
        assert_eq!(order as usize, g.order());
        for l in all_subgroups(&g) {
            let taus = omega_irreps(&w.restrict(&l)).unwrap();
            for tau in &taus {
                let total: u32 = sigmas
                    .iter()
                    .map(|s| subrep_multiplicity(tau, s, &l).unwrap().count().unwrap() * s.degree())
                    .sum();
                assert_eq!(total as usize, l.index() * tau.degree() as usize);
            }
            for sigma in &sigmas {
                let total: u32 = taus
                    .iter()
                    .map(|t| subrep_multiplicity(t, sigma, &l).unwrap().count().unwrap() * t.degree())
                    .sum();
                assert_eq!(total, sigma.degree());
            }
        }
    }

    #[test]
    fn frobenius_identities_on_d4() {
        frobenius(&TwoCocycle::trivial(d4()));
        frobenius(&omega_z2());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn multiplicity_is_invariant_under_twists_and_conjugation(
            raw_f in proptest::collection::vec(0i64..8, 8),
            k in 0usize..8,
            which in 0usize..10,
            nontrivial in any::<bool>(),
        ) {
            let g = d4();
            let w = if nontrivial { omega_z2() } else { TwoCocycle::trivial(g.clone()) };
            let l = all_subgroups(&g)[which].clone();
            let mut f: Vec<Phase> = raw_f.iter().map(|&x| Phase::from_fraction(x, 8)).collect();
            f[0] = Phase::ONE;
            let f_l: Vec<Phase> = l.elements().iter().map(|&x| f[x]).collect();
            let sigmas = omega_irreps(&w).unwrap();
            let taus = omega_irreps(&w.restrict(&l)).unwrap();
            for sigma in &sigmas {
                let sigma_t = twist_rep(&f, sigma).unwrap();
                for tau in &taus {
                    let base = subrep_multiplicity(tau, sigma, &l).unwrap();
                    let tau_t = twist_rep(&f_l, tau).unwrap();
                    prop_assert_eq!(subrep_multiplicity(&tau_t, &sigma_t, &l).unwrap(), base);
                    let (tau_k, l_k) = conjugate_into_ambient(k, tau, &l, &w).unwrap();
                    prop_assert_eq!(subrep_multiplicity(&tau_k, sigma, &l_k).unwrap(), base);
                    // The plain conjugate lands on a cohomologous cocycle.
                    let (plain, l_p) = conjugate_omega_rep(k, tau, &l).unwrap();
                    prop_assert_eq!(&l_p, &l_k);
                    prop_assert!(subrep_multiplicity(&plain, sigma, &l_p).unwrap().count().is_some());
                    if w.is_trivial() {
                        prop_assert_eq!(subrep_multiplicity(&plain, sigma, &l_p).unwrap(), base);
                    }
                }
            }
        }
    }
}
