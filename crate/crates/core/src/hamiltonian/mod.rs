mod amatrix;
mod jacobi;

pub use amatrix::{AMatrix, CMatrix};
pub use jacobi::{degeneracy_profile, eigensystem, eigenvalues, Cluster, DegeneracyProfile, EigenSystem};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, OrientedEdge, SpanningTree};
use crate::torus::{Rational, RootSum, TorusPoint, TorusPolynomial, UnitaryMonomial, WeightFunction};

/// H_τ with its exact monomial terms kept per entry.
#[derive(Clone, Debug, Serialize)]
pub struct Hamiltonian {
    #[serde(skip)]
    tree: SpanningTree,
    terms: Vec<Vec<Vec<UnitaryMonomial>>>,
    matrix: AMatrix,
}

pub fn build_hamiltonian(g: &Graph, wt: &WeightFunction, tree: &SpanningTree) -> Result<Hamiltonian> {
    wt.check_edges(g)?;
    let k = g.num_vertices();
    let re = wt.reexpress(g, tree);
    let mut terms = vec![vec![Vec::new(); k]; k];
    for e in 0..g.num_edges() {
        for reversed in [false, true] {
            let oe = OrientedEdge { edge: e, reversed };
            let i = tree.position(oe.source(g));
            let j = tree.position(oe.target(g));
            terms[i][j].push(re.get(oe).clone());
        }
    }
    for row in terms.iter_mut() {
        for cell in row.iter_mut() {
            cell.sort();
        }
    }
    let mut matrix = AMatrix::zeros(k, g.rank());
    for (i, row) in terms.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let mut p = TorusPolynomial::zero(g.rank());
            for m in cell {
                p.add_monomial(m);
            }
            matrix.set(i, j, p);
        }
    }
    Ok(Hamiltonian { tree: tree.clone(), terms, matrix })
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn matrix(&self) -> &AMatrix {
        &self.matrix
    }

    pub fn entry_terms(&self, i: usize, j: usize) -> &[UnitaryMonomial] {
        &self.terms[i][j]
    }

    pub fn evaluate(&self, t: &TorusPoint) -> CMatrix {
        match t.as_exact() {
            Some(r) => CMatrix::from_fn(self.dim(), self.dim(), |i, j| self.exact_entry(i, j, r).to_complex()),
            None => self.evaluate_turns(&t.turns_f64()),
        }
    }

    pub fn evaluate_turns(&self, t: &[f64]) -> CMatrix {
        CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.terms[i][j].iter().map(|m| m.eval_turns(t)).sum::<Complex64>()
        })
    }

    pub fn exact_entry(&self, i: usize, j: usize, t: &[Rational]) -> RootSum {
        RootSum::from_terms(self.terms[i][j].iter().map(|m| (1, m.eval_exact(t))))
    }

    /// Exact test that H(t) is the zero matrix.
    pub fn vanishes_at(&self, t: &[Rational]) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.exact_entry(i, j, t).is_zero()))
    }

    /// Exact test that H vanishes identically on the affine subtorus base + span(directions).
    pub fn vanishes_on(&self, base: &[Rational], directions: &[Vec<i64>]) -> bool {
        for row in &self.terms {
            for cell in row {
                let mut groups: std::collections::BTreeMap<Vec<i64>, Vec<(i64, crate::torus::Phase)>> = Default::default();
                for m in cell {
                    let key: Vec<i64> =
                        directions.iter().map(|d| d.iter().zip(&m.exp).map(|(a, b)| a * b).sum()).collect();
                    groups.entry(key).or_default().push((1, m.eval_exact(base)));
                }
                if groups.into_values().any(|ts| !RootSum::from_terms(ts).is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Bound on ‖∂H/∂t‖ in turns, used by continuity checks.
    pub fn lipschitz_bound(&self) -> f64 {
        self.terms
            .iter()
            .flatten()
            .flatten()
            .map(|m| std::f64::consts::TAU * m.exp.iter().map(|e| e.abs() as f64).sum::<f64>())
            .sum()
    }
}
