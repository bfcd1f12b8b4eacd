use num_integer::Integer;
use serde::Serialize;

use super::group::FiniteGroup;
use super::projective::ProjectiveRep;
use crate::error::{Error, Result};
use crate::graph::push_forward;
use crate::hamiltonian::CMatrix;
use crate::io::WeightedGraph;
use crate::regauge::{cocycle, MonomialMatrix};
use crate::symlift::ActionTable;
use crate::torus::Phase;

pub const DEFAULT_MAX_ORDER: u64 = 12;

/// c(g,h) with ρ(g)ρ(h) = c(g,h)·ρ(gh), indexed like the representation's elements.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarCocycle {
    pub values: Vec<Vec<Phase>>,
    pub order: u64,
    #[serde(skip)]
    pub group: FiniteGroup,
}

impl ScalarCocycle {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|p| p.is_zero())
    }

    /// c(h,k)·c(g,hk) = c(g,h)·c(gh,k) for all triples.
    pub fn satisfies_identity(&self) -> bool {
        let g = &self.group;
        let n = g.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.values[b][c] + self.values[a][g.mul(b, c)] == self.values[a][b] + self.values[g.mul(a, b)][c]
                })
            })
        })
    }
}

pub fn scalar_cocycle(rep: &ProjectiveRep) -> Result<ScalarCocycle> {
    let g = &rep.group;
    let n = g.order();
    let mut values = vec![vec![Phase::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let prod = rep.exact[a].mul(&rep.exact[b]);
            values[a][b] = prod
                .ratio_to(&rep.exact[g.mul(a, b)])
                .ok_or_else(|| Error::contract("ρ(g)ρ(h) is not proportional to ρ(gh)"))?;
        }
    }
    let order = values.iter().flatten().fold(1u64, |acc, p| acc.lcm(&p.order()));
    let c = ScalarCocycle { values, order, group: g.clone() };
    if !c.satisfies_identity() {
        return Err(Error::contract("scalar cocycle violates the 2-cocycle identity"));
    }
    Ok(c)
}

/// The scalar cocycle agrees with the groupoid cocycle C(τ, h⁻¹τ, (gh)⁻¹τ) evaluated at the point.
pub fn matches_groupoid_cocycle(wg: &WeightedGraph, table: &ActionTable, rep: &ProjectiveRep, c: &ScalarCocycle) -> bool {
    let (g, wt, tree) = (&wg.graph, &wg.weights, &wg.tree);
    let n = rep.group.order();
    let pushed: Vec<_> = rep.elements.iter().map(|&e| push_forward(g, tree, &table.automorphisms[e].inverse())).collect();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ab = rep.group.mul(a, b);
            cocycle(g, wt, tree, &pushed[b], &pushed[ab]).eval_exact(&rep.point) == c.values[a][b]
        })
    })
}

fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    if let Some(a) = (0..n).find(|&a| g.subgroup(&[a]).len() == n) {
        return vec![a];
    }
    for a in 0..n {
        for b in a + 1..n {
            if g.subgroup(&[a, b]).len() == n {
                return vec![a, b];
            }
        }
    }
    let mut gens = Vec::new();
    let mut sub = g.subgroup(&[]);
    for a in 0..n {
        if !sub.contains(&a) {
            gens.push(a);
            sub = g.subgroup(&gens);
        }
    }
    gens
}

#[derive(Clone, Debug, Serialize)]
pub struct Trivialization {
    pub generators: Vec<usize>,
    pub scalings: Vec<Phase>,
    /// Order of the central scalar subgroup of the smallest extension found.
    pub scalar_order: usize,
    /// λ with dλ = c when the class is trivial.
    pub lambda: Option<Vec<Phase>>,
    pub search_modulus: u64,
}

impl Trivialization {
    pub fn is_trivializable(&self) -> bool {
        self.scalar_order == 1
    }
}

type ExtElem = (Phase, usize);

fn extension_closure(c: &ScalarCocycle, gens: &[usize], scalings: &[Phase], modulus: u64) -> Result<(Vec<ExtElem>, FiniteGroup)> {
    let g = &c.group;
    let seeds: Vec<ExtElem> = gens.iter().zip(scalings).map(|(&x, &s)| (s, x)).collect();
    let mul = |a: &ExtElem, b: &ExtElem| (a.0 + b.0 + c.values[a.1][b.1], g.mul(a.1, b.1));
    FiniteGroup::closure(&seeds, (Phase::zero(), g.identity()), mul, g.order() * modulus as usize)
}

fn extension_elements(c: &ScalarCocycle, gens: &[usize], scalings: &[Phase], modulus: u64) -> Result<Vec<ExtElem>> {
    let g = &c.group;
    let seeds: Vec<ExtElem> = gens.iter().zip(scalings).map(|(&x, &s)| (s, x)).collect();
    let mul = |a: &ExtElem, b: &ExtElem| (a.0 + b.0 + c.values[a.1][b.1], g.mul(a.1, b.1));
    Ok(FiniteGroup::closure_elements(&seeds, (Phase::zero(), g.identity()), &mul, g.order() * modulus as usize)?.0)
}

/// Search generator scalings in μ_N for the extension with the smallest central scalar subgroup.
pub fn trivialization_search(c: &ScalarCocycle, max_order: u64) -> Result<Trivialization> {
    if c.order > max_order {
        return Err(Error::MaxOrderExceeded { order: c.order, max: max_order });
    }
    let g = &c.group;
    let gens = generating_set(g);
    let modulus = gens.iter().fold(1u64, |acc, &x| acc.lcm(&(g.element_order(x) as u64 * c.order)));
    let mut best: Option<(usize, Vec<Phase>, Vec<ExtElem>)> = None;
    let mut idx = vec![0i64; gens.len()];
    loop {
        let scalings: Vec<Phase> = idx.iter().map(|&k| Phase::from_ratio(k, modulus as i64)).collect();
        let elems = extension_elements(c, &gens, &scalings, modulus)?;
        let z = elems.iter().filter(|e| e.1 == g.identity()).count();
        if best.as_ref().is_none_or(|b| z < b.0) {
            best = Some((z, scalings, elems));
            if z == 1 {
                break;
            }
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if (idx[k] as u64) < modulus {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let (scalar_order, scalings, elems) = best.expect("at least one candidate");
    let lambda = (scalar_order == 1).then(|| {
        let mut l = vec![Phase::zero(); g.order()];
        for (z, x) in &elems {
            l[*x] = -*z;
        }
        l
    });
    Ok(Trivialization { generators: gens, scalings, scalar_order, lambda, search_modulus: modulus })
}

/// Ordinary representation of the central extension realizing the cocycle.
#[derive(Clone, Debug)]
pub struct ExtensionRep {
    pub group: FiniteGroup,
    /// (scalar, base element) pairs; the base index refers to the projective representation.
    pub elements: Vec<(Phase, usize)>,
    pub exact: Vec<MonomialMatrix<Phase>>,
    pub matrices: Vec<CMatrix>,
    pub scalars: Vec<usize>,
}

pub fn extension_rep(rep: &ProjectiveRep, c: &ScalarCocycle, t: &Trivialization) -> Result<ExtensionRep> {
    let (elements, group) = extension_closure(c, &t.generators, &t.scalings, t.search_modulus)?;
    let exact: Vec<MonomialMatrix<Phase>> = elements.iter().map(|(z, x)| rep.exact[*x].scale(z)).collect();
    for a in 0..group.order() {
        for b in 0..group.order() {
            if exact[a].mul(&exact[b]) != exact[group.mul(a, b)] {
                return Err(Error::contract("rescaled matrices do not form a representation of the extension"));
            }
        }
    }
    let matrices = exact.iter().map(|m| m.to_dense()).collect();
    let scalars = (0..elements.len()).filter(|&i| elements[i].1 == rep.group.identity()).collect();
    Ok(ExtensionRep { group, elements, exact, matrices, scalars })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> FiniteGroup {
        FiniteGroup::from_table((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()).unwrap()
    }

    fn cocycle_from(group: FiniteGroup, f: impl Fn(usize, usize) -> Phase) -> ScalarCocycle {
        let n = group.order();
        let values: Vec<Vec<Phase>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        let order = values.iter().flatten().fold(1u64, |acc, p| acc.lcm(&p.order()));
        ScalarCocycle { values, order, group }
    }

    #[test]
    fn coboundary_is_trivializable() {
        let mu = [Phase::zero(), Phase::from_ratio(1, 3), Phase::from_ratio(1, 4), Phase::from_ratio(5, 6)];
        let c = cocycle_from(klein(), |a, b| mu[a] + mu[b] - mu[a ^ b]);
        assert!(c.satisfies_identity());
        assert!(!c.is_trivial());
        let t = trivialization_search(&c, 12).unwrap();
        assert!(t.is_trivializable());
        let lambda = t.lambda.unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(c.values[a][b], lambda[a] + lambda[b] - lambda[a ^ b]);
            }
        }
    }

    #[test]
    fn bilinear_class_is_not() {
        let c = cocycle_from(klein(), |a, b| Phase::from_ratio(((a & 1) * ((b >> 1) & 1)) as i64, 2));
        assert!(c.satisfies_identity());
        let t = trivialization_search(&c, 12).unwrap();
        assert!(!t.is_trivializable());
        assert!(t.lambda.is_none());
        assert_eq!(t.scalar_order, 2);
    }
}
