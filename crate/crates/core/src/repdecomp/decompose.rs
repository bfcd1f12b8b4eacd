use num_complex::Complex64;
use serde::Serialize;

use super::chartable::CharacterTable;
use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::hamiltonian::{degeneracy_profile, eigensystem, CMatrix};

const PROJ_TOL: f64 = 1e-9;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Irrep multiplicities a_i = (1/|G|) Σ_g tr ρ(g)·conj(χ_i(g)).
pub fn decompose(matrices: &[CMatrix], group: &FiniteGroup, table: &CharacterTable) -> Result<Vec<usize>> {
    let n = group.order() as f64;
    let k = matrices.first().map_or(0, |m| m.nrows());
    let mut out = Vec::with_capacity(table.num_irreps());
    for i in 0..table.num_irreps() {
        let s: Complex64 = matrices.iter().enumerate().map(|(g, m)| m.trace() * table.value(i, g).conj()).sum::<Complex64>() / n;
        let a = s.re.round();
        if (s - Complex64::new(a, 0.0)).norm() > 1e-6 || a < 0.0 {
            return Err(Error::contract(format!("non-integer multiplicity {s} for irrep {i}")));
        }
        out.push(a as usize);
    }
    let total: usize = out.iter().zip(&table.dims).map(|(a, d)| a * d).sum();
    if total != k {
        return Err(Error::contract(format!("multiplicities account for dimension {total}, expected {k}")));
    }
    Ok(out)
}

/// P_i = (d_i/|G|) Σ_g conj(χ_i(g))·ρ(g), verified to be a resolution of the identity.
pub fn isotypic_projectors(matrices: &[CMatrix], group: &FiniteGroup, table: &CharacterTable) -> Result<Vec<CMatrix>> {
    let n = group.order() as f64;
    let k = matrices.first().map_or(0, |m| m.nrows());
    let projectors: Vec<CMatrix> = (0..table.num_irreps())
        .map(|i| {
            let mut p = CMatrix::zeros(k, k);
            for (g, m) in matrices.iter().enumerate() {
                p += m * table.value(i, g).conj();
            }
            p * Complex64::new(table.dims[i] as f64 / n, 0.0)
        })
        .collect();
    let mut sum = CMatrix::zeros(k, k);
    for (i, p) in projectors.iter().enumerate() {
        if max_abs(&(p * p - p)) > PROJ_TOL {
            return Err(Error::contract(format!("isotypic projector {i} is not idempotent")));
        }
        for (j, q) in projectors.iter().enumerate() {
            if i != j && max_abs(&(p * q)) > PROJ_TOL {
                return Err(Error::contract(format!("isotypic projectors {i} and {j} are not orthogonal")));
            }
        }
        sum += p;
    }
    if max_abs(&(sum - CMatrix::identity(k, k))) > PROJ_TOL {
        return Err(Error::contract("isotypic projectors do not sum to the identity"));
    }
    Ok(projectors)
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub irrep: usize,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    #[serde(skip)]
    pub basis: CMatrix,
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Superselection {
    pub blocks: Vec<Block>,
    /// For each eigenvalue cluster of H: (cluster mean, multiplicity, tr(Q·P_i) per irrep).
    pub cluster_traces: Vec<(f64, usize, Vec<usize>)>,
}

/// Restrict H to each isotypic component and diagonalize the blocks.
pub fn superselect(h: &CMatrix, matrices: &[CMatrix], group: &FiniteGroup, table: &CharacterTable, tol: f64) -> Result<Superselection> {
    let k = h.nrows();
    let projectors = isotypic_projectors(matrices, group, table)?;
    let mut blocks = Vec::new();
    for (i, p) in projectors.iter().enumerate() {
        if max_abs(&(p * h - h * p)) > PROJ_TOL * h.norm().max(1.0) {
            return Err(Error::contract(format!("H does not commute with isotypic projector {i}")));
        }
        let rank = p.trace().re.round() as usize;
        if rank == 0 {
            continue;
        }
        let es = eigensystem(p)?;
        let basis = es.vectors.columns(k - rank, rank).into_owned();
        let hb = basis.adjoint() * h * &basis;
        let eigenvalues = eigensystem(&hb)?.values;
        blocks.push(Block { irrep: i, irrep_dim: table.dims[i], multiplicity: rank / table.dims[i], basis, eigenvalues });
    }
    let full = eigensystem(h)?;
    let mut merged: Vec<f64> = blocks.iter().flat_map(|b| b.eigenvalues.iter().copied()).collect();
    merged.sort_by(f64::total_cmp);
    if merged.len() != k || merged.iter().zip(&full.values).any(|(a, b)| (a - b).abs() > 1e-9 * h.norm().max(1.0)) {
        return Err(Error::contract("block spectra do not reproduce the spectrum of H"));
    }
    let mut cluster_traces = Vec::new();
    for c in degeneracy_profile(&full.values, tol).clusters {
        let v = full.vectors.columns(c.start, c.multiplicity);
        let q = &v * v.adjoint();
        let mut traces = Vec::with_capacity(projectors.len());
        for p in &projectors {
            let tr = (&q * p).trace();
            let r = tr.re.round();
            if (tr - Complex64::new(r, 0.0)).norm() > 1e-8 {
                return Err(Error::contract(format!("eigenvalue cluster at {:.6} splits across isotypic components", c.mean)));
            }
            traces.push(r as usize);
        }
        cluster_traces.push((c.mean, c.multiplicity, traces));
    }
    Ok(Superselection { blocks, cluster_traces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repdecomp::character_table;

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).unwrap()
    }

    fn regular(g: &FiniteGroup) -> Vec<CMatrix> {
        let n = g.order();
        (0..n)
            .map(|a| CMatrix::from_fn(n, n, |i, j| if g.mul(a, j) == i { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }))
            .collect()
    }

    #[test]
    fn regular_representation_contains_each_irrep_once() {
        let g = cyclic(5);
        let ct = character_table(&g, 0).unwrap();
        let m = regular(&g);
        assert_eq!(decompose(&m, &g, &ct).unwrap(), vec![1; 5]);
        let p = isotypic_projectors(&m, &g, &ct).unwrap();
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn superselection_splits_a_circulant() {
        let g = cyclic(4);
        let ct = character_table(&g, 0).unwrap();
        let m = regular(&g);
        let h = &m[1] + m[1].adjoint();
        let sel = superselect(&h, &m, &g, &ct, 1e-9).unwrap();
        let mut ev: Vec<f64> = sel.blocks.iter().flat_map(|b| b.eigenvalues.clone()).collect();
        ev.sort_by(f64::total_cmp);
        let want = [-2.0, 0.0, 0.0, 2.0];
        assert!(ev.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9), "{ev:?}");
    }
}
