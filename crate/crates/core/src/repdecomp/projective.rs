use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::graph::push_forward;
use crate::hamiltonian::{build_hamiltonian, CMatrix};
use crate::io::WeightedGraph;
use crate::regauge::{regauge_matrix, MonomialMatrix};
use crate::symlift::{ActionTable, StabilizerGroup};
use crate::torus::{Phase, Rational, TorusPoint};

pub const COMMUTATION_TOL: f64 = 1e-10;
pub const DEFAULT_CAP: usize = 1024;

/// ρ(g) = M_{τ→g⁻¹τ} evaluated at a point fixed by every g in the stabilizer.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub point: Vec<Rational>,
    /// Indices into the action table, in increasing order.
    pub elements: Vec<usize>,
    pub group: FiniteGroup,
    pub exact: Vec<MonomialMatrix<Phase>>,
    pub dense: Vec<CMatrix>,
    pub hamiltonian: CMatrix,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn projective_rep(wg: &WeightedGraph, table: &ActionTable, stab: &StabilizerGroup) -> Result<ProjectiveRep> {
    projective_rep_for(wg, table, &stab.point, &stab.elements)
}

/// Projective representation of any subgroup fixing `t` (need not be the full stabilizer).
pub fn projective_rep_for(wg: &WeightedGraph, table: &ActionTable, t: &[Rational], elements: &[usize]) -> Result<ProjectiveRep> {
    let (g, wt, tree) = (&wg.graph, &wg.weights, &wg.tree);
    for &e in elements {
        if !table.actions[e].fixes(t) {
            return Err(Error::contract(format!(
                "{} does not fix the point",
                table.automorphisms[e].cycle_notation(g)
            )));
        }
    }
    let group = table.group.restrict(elements)?;
    let h = build_hamiltonian(g, wt, tree)?.evaluate(&TorusPoint::exact(t.to_vec()));
    let mut exact = Vec::with_capacity(elements.len());
    let mut dense = Vec::with_capacity(elements.len());
    for &e in elements {
        let target = push_forward(g, tree, &table.automorphisms[e].inverse());
        let m = regauge_matrix(g, wt, tree, &target)?.matrix.eval_exact(t);
        let d = m.to_dense();
        let comm = max_abs(&(&d * &h - &h * &d));
        if comm > COMMUTATION_TOL {
            return Err(Error::contract(format!(
                "ρ({}) fails to commute with H(t) (deviation {comm:e})",
                table.automorphisms[e].cycle_notation(g)
            )));
        }
        exact.push(m);
        dense.push(d);
    }
    Ok(ProjectiveRep { point: t.to_vec(), elements: elements.to_vec(), group, exact, dense, hamiltonian: h })
}

/// Finite group of unitary matrices with its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    pub group: FiniteGroup,
    pub matrices: Vec<CMatrix>,
    pub exact: Option<Vec<MonomialMatrix<Phase>>>,
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Elements acting as scalar multiples of the identity.
    pub fn scalars(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| {
                let m = &self.matrices[i];
                let z = m[(0, 0)];
                max_abs(&(m - CMatrix::identity(m.nrows(), m.ncols()) * z)) < 1e-9
            })
            .collect()
    }
}

/// Closure of exact monomial matrices (entries are roots of unity).
pub fn group_closure(gens: &[MonomialMatrix<Phase>], cap: usize) -> Result<FiniteMatrixGroup> {
    let k = gens.first().map_or(0, |g| g.dim());
    let (elems, group) = FiniteGroup::closure(gens, MonomialMatrix::identity(k, Phase::zero()), |a, b| a.mul(b), cap)?;
    let matrices = elems.iter().map(|m| m.to_dense()).collect();
    Ok(FiniteMatrixGroup { group, matrices, exact: Some(elems) })
}

/// Closure of floating unitary matrices, deduplicated at 1e-9.
pub fn matrix_group_closure(gens: &[CMatrix], cap: usize) -> Result<FiniteMatrixGroup> {
    let k = gens.first().map_or(0, |g| g.nrows());
    let same = |a: &CMatrix, b: &CMatrix| max_abs(&(a - b)) < 1e-9;
    let mut elems = vec![CMatrix::identity(k, k)];
    let mut frontier = 0;
    while frontier < elems.len() {
        let x = elems[frontier].clone();
        frontier += 1;
        for g in gens {
            let y = &x * g;
            if !elems.iter().any(|e| same(e, &y)) {
                if elems.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                elems.push(y);
            }
        }
    }
    let find = |y: &CMatrix| elems.iter().position(|e| same(e, y));
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| find(&(a * b)).ok_or_else(|| Error::contract("closure is not closed"))).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok(FiniteMatrixGroup { group: FiniteGroup::from_table(table)?, matrices: elems, exact: None })
}
