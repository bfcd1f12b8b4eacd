use serde::Serialize;

use super::monomial::UnitaryMonomial;
use crate::error::{Error, Result};
use crate::graph::{Graph, OrientedEdge, SpanningTree};
use crate::lattice;

/// Monomial weight on every oriented edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    rank: usize,
    forward: Vec<UnitaryMonomial>,
    backward: Vec<UnitaryMonomial>,
}

impl WeightFunction {
    /// Weights given on the stored orientation; reversals get the adjoint.
    pub fn from_forward(rank: usize, forward: Vec<UnitaryMonomial>) -> Result<Self> {
        let backward = forward.iter().map(|m| m.adjoint()).collect();
        WeightFunction::from_pairs(rank, forward, backward)
    }

    /// Both orientations given independently (checked by `check_weight_function`).
    pub fn from_pairs(rank: usize, forward: Vec<UnitaryMonomial>, backward: Vec<UnitaryMonomial>) -> Result<Self> {
        if let Some(m) = forward.iter().chain(&backward).find(|m| m.rank() != rank) {
            return Err(Error::RankMismatch { expected: rank, found: m.rank() });
        }
        if forward.len() != backward.len() {
            return Err(Error::contract("weight orientation lists differ in length"));
        }
        Ok(WeightFunction { rank, forward, backward })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_edges(&self) -> usize {
        self.forward.len()
    }

    pub fn get(&self, e: OrientedEdge) -> &UnitaryMonomial {
        if e.reversed { &self.backward[e.edge] } else { &self.forward[e.edge] }
    }

    pub fn forward(&self) -> &[UnitaryMonomial] {
        &self.forward
    }

    pub fn path_weight(&self, path: &[OrientedEdge]) -> UnitaryMonomial {
        path.iter().fold(UnitaryMonomial::one(self.rank), |acc, &e| &acc * self.get(e))
    }

    /// Weight of the loop root → source → target → root of every oriented edge.
    pub fn reexpress(&self, g: &Graph, tree: &SpanningTree) -> WeightFunction {
        let pot: Vec<UnitaryMonomial> = (0..g.num_vertices()).map(|v| self.path_weight(&tree.path_to(g, v))).collect();
        let forward: Vec<UnitaryMonomial> = (0..g.num_edges())
            .map(|i| {
                let e = &g.edges()[i];
                &(&pot[e.from] * &self.forward[i]) * &pot[e.to].adjoint()
            })
            .collect();
        let backward = forward.iter().map(|m| m.adjoint()).collect();
        WeightFunction { rank: self.rank, forward, backward }
    }

    pub fn is_compatible(&self, tree: &SpanningTree) -> bool {
        tree.edges().iter().all(|&e| self.forward[e].is_one() && self.backward[e].is_one())
    }

    pub fn check_edges(&self, g: &Graph) -> Result<()> {
        if self.num_edges() != g.num_edges() {
            return Err(Error::contract(format!(
                "weight function has {} edges but graph has {}",
                self.num_edges(),
                g.num_edges()
            )));
        }
        if self.rank != g.rank() {
            return Err(Error::RankMismatch { expected: g.rank(), found: self.rank });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub edge: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub adjoint_symmetric: bool,
    pub tree_compatible: Option<bool>,
    pub nondegenerate: bool,
    pub determinant: Option<i64>,
    pub violations: Vec<Violation>,
}

impl WeightReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        match self.violations.first() {
            Some(v) => Err(Error::WeightViolation { edge: v.edge.clone(), reason: v.reason.clone() }),
            None => Ok(self),
        }
    }
}

/// Exponent columns of the loop weights of the non-tree edges.
pub(crate) fn loop_exponent_matrix(g: &Graph, wt: &WeightFunction, tree: &SpanningTree) -> (Vec<usize>, Vec<Vec<i64>>) {
    let re = wt.reexpress(g, tree);
    let basis: Vec<usize> = (0..g.num_edges()).filter(|&e| !tree.contains_edge(e)).collect();
    let n = wt.rank();
    let w = (0..n).map(|r| basis.iter().map(|&e| re.forward[e].exp[r]).collect()).collect();
    (basis, w)
}

pub fn check_weight_function(g: &Graph, wt: &WeightFunction, tree: Option<&SpanningTree>) -> Result<WeightReport> {
    wt.check_edges(g)?;
    let mut violations = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if wt.backward[i] != wt.forward[i].adjoint() {
            violations.push(Violation { edge: e.id.clone(), reason: "weight of reversed edge is not the adjoint".into() });
        }
    }
    let adjoint_symmetric = violations.is_empty();
    let tree_compatible = tree.map(|t| {
        let mut ok = true;
        for &e in t.edges() {
            if !wt.forward[e].is_one() {
                ok = false;
                violations.push(Violation { edge: g.edges()[e].id.clone(), reason: "tree edge weight is not 1".into() });
            }
        }
        ok
    });
    let bfs;
    let t = match tree {
        Some(t) => t,
        None => {
            bfs = SpanningTree::bfs(g);
            &bfs
        }
    };
    let (_, w) = loop_exponent_matrix(g, wt, t);
    let determinant = (g.betti() == g.rank()).then(|| lattice::det(&w));
    let nondegenerate = matches!(determinant, Some(1) | Some(-1));
    if !nondegenerate {
        violations.push(Violation {
            edge: g.name().to_string(),
            reason: format!("loop exponent matrix has determinant {:?}, weights are toric-degenerate", determinant),
        });
    }
    Ok(WeightReport { adjoint_symmetric, tree_compatible, nondegenerate, determinant, violations })
}
