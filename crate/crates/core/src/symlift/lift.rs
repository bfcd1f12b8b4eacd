use std::collections::HashMap;

use serde::Serialize;

use super::action::TorusAction;
use crate::error::{Error, Result};
use crate::graph::{enumerate_automorphisms, push_forward, Automorphism, AutomorphismOptions, Graph, OrientedEdge, SpanningTree};
use crate::io::WeightedGraph;
use crate::lattice;
use crate::regauge::{gauge_potential, regauged_weights};
use crate::repdecomp::FiniteGroup;
use crate::torus::{Rational, UnitaryMonomial, WeightFunction};

/// Algebra map obtained by pushing the gauging data forward along `phi` and re-gauging:
/// ψ(wt_τ(e)) = wt′(φ(e)) for each non-tree edge e, extended to the coordinate generators.
pub fn push_action(g: &Graph, wt: &WeightFunction, tree: &SpanningTree, phi: &Automorphism) -> Result<TorusAction> {
    let n = g.rank();
    let local = wt.reexpress(g, tree);
    let pushed = push_forward(g, tree, phi);
    let pot = gauge_potential(g, wt, tree, &pushed)?;
    let moved = regauged_weights(g, wt, tree, &pot);
    let basis: Vec<usize> = (0..g.num_edges()).filter(|&e| !tree.contains_edge(e)).collect();
    if basis.len() != n {
        return Err(Error::Degenerate(format!("{} loop generators for rank {}", basis.len(), n)));
    }
    let w: lattice::IntMatrix = (0..n).map(|r| basis.iter().map(|&e| local.forward()[e].exp[r]).collect()).collect();
    let w_inv = lattice::inverse_unimodular(&w).ok_or_else(|| Error::Degenerate(format!("loop exponent matrix has det {}", lattice::det(&w))))?;
    // x^{w_k} = z_k^{-1}·wt_τ(e_k) ↦ z_k^{-1}·wt′(φ(e_k))
    let lifted: Vec<UnitaryMonomial> = basis
        .iter()
        .map(|&e| {
            let z = UnitaryMonomial::scalar(n, local.forward()[e].phase);
            &z.adjoint() * moved.get(phi.apply(OrientedEdge::forward(e)))
        })
        .collect();
    let images: Vec<UnitaryMonomial> = (0..n)
        .map(|j| lifted.iter().enumerate().fold(UnitaryMonomial::one(n), |acc, (k, m)| &acc * &m.pow(w_inv[k][j])))
        .collect();
    let action = TorusAction::from_images(&images);
    let d = action.det();
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    Ok(action)
}

/// Lifted action Ψ_φ, defined through the push-forward along φ⁻¹ so that Ψ is a homomorphism.
pub fn induced_action(g: &Graph, wt: &WeightFunction, tree: &SpanningTree, phi: &Automorphism) -> Result<TorusAction> {
    push_action(g, wt, tree, &phi.inverse())
}

#[derive(Clone, Debug)]
pub struct ActionTable {
    pub automorphisms: Vec<Automorphism>,
    pub actions: Vec<TorusAction>,
    pub group: FiniteGroup,
    index: HashMap<Automorphism, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerGroup {
    pub point: Vec<Rational>,
    pub elements: Vec<usize>,
    pub order: usize,
    pub abelian: bool,
    pub label: String,
}

/// Lift every automorphism and verify Ψ(a∘b) = Ψ(a)∘Ψ(b) on all pairs.
pub fn group_action_table(wg: &WeightedGraph, opts: AutomorphismOptions) -> Result<ActionTable> {
    let (g, wt, tree) = (&wg.graph, &wg.weights, &wg.tree);
    let automorphisms = enumerate_automorphisms(g, opts);
    let index: HashMap<Automorphism, usize> = automorphisms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let table: Vec<Vec<usize>> =
        automorphisms.iter().map(|a| automorphisms.iter().map(|b| index[&a.compose(b)]).collect()).collect();
    let group = FiniteGroup::from_table(table)?;
    let actions = automorphisms.iter().map(|a| induced_action(g, wt, tree, a)).collect::<Result<Vec<_>>>()?;
    for a in 0..automorphisms.len() {
        for b in 0..automorphisms.len() {
            if actions[group.mul(a, b)] != actions[a].compose(&actions[b]) {
                return Err(Error::Homomorphism(format!(
                    "lift of {} ∘ {} differs from the composite of the lifts",
                    automorphisms[a].cycle_notation(g),
                    automorphisms[b].cycle_notation(g)
                )));
            }
        }
    }
    Ok(ActionTable { automorphisms, actions, group, index })
}

impl ActionTable {
    pub fn len(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automorphisms.is_empty()
    }

    pub fn index_of(&self, a: &Automorphism) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// First automorphism (canonical order) with the given vertex images.
    pub fn by_vertex_map(&self, vertex_map: &[usize]) -> Option<usize> {
        self.automorphisms.iter().position(|a| a.vertex_map == vertex_map)
    }

    pub fn stabilizer(&self, t: &[Rational]) -> StabilizerGroup {
        let elements: Vec<usize> = (0..self.len()).filter(|&i| self.actions[i].fixes(t)).collect();
        self.describe_subgroup(t.to_vec(), elements)
    }

    pub(crate) fn describe_subgroup(&self, point: Vec<Rational>, elements: Vec<usize>) -> StabilizerGroup {
        let sub = self.group.restrict(&elements).expect("stabilizer is a subgroup");
        StabilizerGroup { point, order: elements.len(), abelian: sub.is_abelian(), label: sub.identify(), elements }
    }
}

pub fn stabilizer(table: &ActionTable, t: &[Rational]) -> StabilizerGroup {
    table.stabilizer(t)
}
