use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::hamiltonian::{eigensystem, CMatrix};

const SEPARATION: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 32;
const ORTHO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub size: usize,
    pub element_order: usize,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub classes: Vec<ConjugacyClass>,
    /// characters[irrep][class]
    pub characters: Vec<Vec<Complex64>>,
    pub dims: Vec<usize>,
    #[serde(skip)]
    class_of: Vec<usize>,
    group_order: usize,
}

/// Nearest a + b·ω (ω = e^{2πi/3}) within 1e-6.
pub fn snap_eisenstein(z: Complex64) -> Option<(i64, i64)> {
    let b = 2.0 * z.im / 3f64.sqrt();
    let a = z.re + b / 2.0;
    let (a, b) = (a.round(), b.round());
    let w = Complex64::new(a - b / 2.0, b * 3f64.sqrt() / 2.0);
    ((w - z).norm() <= 1e-6).then_some((a as i64, b as i64))
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.dims.len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// χ_i(g) for a group element.
    pub fn value(&self, irrep: usize, g: usize) -> Complex64 {
        self.characters[irrep][self.class_of[g]]
    }

    pub fn snapped(&self, irrep: usize, class: usize) -> Option<(i64, i64)> {
        snap_eisenstein(self.characters[irrep][class])
    }

    /// Largest deviation from row and column orthogonality.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.group_order as f64;
        let r = self.num_irreps();
        let mut err: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let s: Complex64 = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(l, c)| self.characters[a][l] * self.characters[b][l].conj() * c.size as f64)
                    .sum();
                let want = if a == b { n } else { 0.0 };
                err = err.max((s - want).norm());
            }
        }
        for k in 0..r {
            for l in 0..r {
                let s: Complex64 = (0..r).map(|a| self.characters[a][k] * self.characters[a][l].conj()).sum();
                let want = if k == l { n / self.classes[k].size as f64 } else { 0.0 };
                err = err.max((s - want).norm());
            }
        }
        err
    }
}

/// Class-sum structure constants: a[j][k][l] = #{(x,y) ∈ C_j×C_k : xy = z_l}.
fn class_constants(g: &FiniteGroup, classes: &[ConjugacyClass], class_of: &[usize]) -> Vec<Vec<Vec<f64>>> {
    let r = classes.len();
    let mut a = vec![vec![vec![0.0; r]; r]; r];
    for (l, cl) in classes.iter().enumerate() {
        let z = cl.representative;
        for x in 0..g.order() {
            let y = g.mul(g.inv(x), z);
            a[class_of[x]][class_of[y]][l] += 1.0;
        }
    }
    a
}

/// Irreducible characters by simultaneous diagonalization of the class-sum matrices.
pub fn character_table(g: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    let raw = g.conjugacy_classes();
    let mut class_of = vec![0; g.order()];
    for (i, c) in raw.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let classes: Vec<ConjugacyClass> = raw
        .iter()
        .map(|c| ConjugacyClass { representative: c[0], size: c.len(), element_order: g.element_order(c[0]), elements: c.clone() })
        .collect();
    let r = classes.len();
    let a = class_constants(g, &classes, &class_of);
    let sq: Vec<f64> = classes.iter().map(|c| (c.size as f64).sqrt()).collect();
    // L_j = S M_j S⁻¹ with (M_j)_{kl} = a[j][k][l] and S = diag(1/√|C|); normal in this basis
    let l_mats: Vec<CMatrix> = (0..r)
        .map(|j| CMatrix::from_fn(r, r, |k, l| Complex64::new(a[j][k][l] * sq[l] / sq[k], 0.0)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut k = CMatrix::zeros(r, r);
        for lj in &l_mats {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            k += lj * c + lj.adjoint() * c.conj();
        }
        let es = eigensystem(&k)?;
        let scale = es.values.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if es.values.windows(2).any(|w| w[1] - w[0] < SEPARATION * scale) {
            continue;
        }
        let mut chars: Vec<Vec<Complex64>> = (0..r)
            .map(|i| {
                let v = es.vectors.column(i);
                let mut chi: Vec<Complex64> = (0..r).map(|l| v[l] / sq[l]).collect();
                let id = class_of[g.identity()];
                let ph = chi[id] / chi[id].norm();
                let norm2: f64 = chi.iter().zip(&classes).map(|(x, c)| x.norm_sqr() * c.size as f64).sum();
                let s = (g.order() as f64 / norm2).sqrt();
                for x in chi.iter_mut() {
                    *x = *x / ph * s;
                }
                chi
            })
            .collect();
        let id = class_of[g.identity()];
        let key = |c: &Vec<Complex64>| -> Vec<(i64, i64)> {
            c.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
        };
        chars.sort_by(|x, y| {
            let trivial = |c: &Vec<Complex64>| c.iter().all(|z| (z - 1.0).norm() < 1e-6);
            trivial(y)
                .cmp(&trivial(x))
                .then((x[id].re.round() as i64).cmp(&(y[id].re.round() as i64)))
                .then(key(y).cmp(&key(x)))
        });
        let dims: Vec<usize> = chars.iter().map(|c| c[id].re.round() as usize).collect();
        let table = CharacterTable { classes: classes.clone(), characters: chars, dims, class_of: class_of.clone(), group_order: g.order() };
        if table.orthogonality_error() <= ORTHO_TOL && table.dims.iter().map(|d| d * d).sum::<usize>() == g.order() {
            return Ok(table);
        }
    }
    Err(Error::contract("character table eigenvectors did not separate"))
}
