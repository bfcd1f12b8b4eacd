use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::action::TorusAction;
use super::snf::{smith_normal_form, to_big};
use crate::torus::{Phase, Rational};

const MAX_COMPONENTS: usize = 1 << 16;

/// Affine subtorus base + span_R(directions) mod Z^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub base: Vec<Rational>,
    pub directions: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixedSet {
    pub components: Vec<Component>,
}

fn to_small(x: &BigRational) -> Rational {
    Rational::new(x.numer().to_i64().expect("small numerator"), x.denom().to_i64().expect("small denominator"))
}

fn frac_big(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Row-style Hermite normal form of the direction rows (same lattice).
fn hermite(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let n = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    for j in 0..n {
                        m[i][j] -= q * m[r][j];
                    }
                    done &= m[i][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        if (r..m.len()).all(|i| m[i][c] == 0) {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_euclid(m[r][c]);
            for j in 0..n {
                m[i][j] -= q * m[r][j];
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

impl Component {
    pub fn new(base: Vec<Rational>, directions: Vec<Vec<i64>>) -> Self {
        let directions = hermite(&directions);
        let mut c = Component { base, directions };
        c.normalize_base();
        c
    }

    pub fn point(base: Vec<Rational>) -> Self {
        Component::new(base, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    /// Slide the base along unit-pivot directions so those coordinates are 0, then reduce mod 1.
    fn normalize_base(&mut self) {
        for d in &self.directions {
            if let Some(c) = d.iter().position(|&x| x != 0) {
                if d[c] == 1 {
                    let s = self.base[c];
                    for (b, &x) in self.base.iter_mut().zip(d) {
                        *b -= s * x;
                    }
                }
            }
        }
        for b in self.base.iter_mut() {
            *b = Phase::new(*b).turns();
        }
    }

    /// Point base + Σ s_i·d_i reduced mod 1.
    pub fn at(&self, s: &[Rational]) -> Vec<Rational> {
        (0..self.rank())
            .map(|j| {
                let v = self.base[j] + self.directions.iter().zip(s).map(|(d, &si)| si * d[j]).sum::<Rational>();
                Phase::new(v).turns()
            })
            .collect()
    }

    pub fn at_turns(&self, s: &[f64]) -> Vec<f64> {
        (0..self.rank())
            .map(|j| {
                let b = self.base[j];
                let v = *b.numer() as f64 / *b.denom() as f64
                    + self.directions.iter().zip(s).map(|(d, &si)| si * d[j] as f64).sum::<f64>();
                v - v.floor()
            })
            .collect()
    }

    /// Coordinates in a unimodular basis whose leading vectors span the directions.
    fn complement_coords(&self, x: &[BigRational]) -> Vec<BigRational> {
        let n = self.rank();
        let k = self.dim();
        if k == 0 {
            return x.to_vec();
        }
        let dt: Vec<Vec<i64>> = (0..n).map(|j| self.directions.iter().map(|d| d[j]).collect()).collect();
        let snf = smith_normal_form(&to_big(&dt));
        (k..n)
            .map(|i| snf.u_inv[i].iter().zip(x).map(|(a, b)| BigRational::from_integer(a.clone()) * b).sum())
            .collect()
    }

    fn offset_coords(&self, t: &[Rational]) -> Vec<BigRational> {
        let x: Vec<BigRational> = t
            .iter()
            .zip(&self.base)
            .map(|(a, b)| {
                let d = a - b;
                BigRational::new(BigInt::from(*d.numer()), BigInt::from(*d.denom()))
            })
            .collect();
        self.complement_coords(&x)
    }

    pub fn contains(&self, t: &[Rational]) -> bool {
        self.offset_coords(t).iter().all(|c| c.is_integer())
    }

    pub fn contains_direction(&self, d: &[i64]) -> bool {
        let x: Vec<BigRational> = d.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        self.complement_coords(&x).iter().all(|c| c.is_zero())
    }

    pub fn same_as(&self, other: &Component) -> bool {
        self.dim() == other.dim()
            && other.directions.iter().all(|d| self.contains_direction(d))
            && self.contains(&other.base)
    }

    pub fn is_subset_of(&self, other: &Component) -> bool {
        self.directions.iter().all(|d| other.contains_direction(d)) && other.contains(&self.base)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.base.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", b.join(","))?;
        for d in &self.directions {
            let v: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            write!(f, " + R({})", v.join(","))?;
        }
        Ok(())
    }
}

impl FixedSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, t: &[Rational]) -> bool {
        self.components.iter().any(|c| c.contains(t))
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.components.iter().filter(|c| c.dim() == 0).map(|c| c.base.clone()).collect()
    }
}

pub fn fixed_set(action: &TorusAction) -> FixedSet {
    fixed_set_of(&[action])
}

/// Common fixed set of several actions: solve the stacked system (E−I)·t ≡ −φ₀ (mod 1).
pub fn fixed_set_of(actions: &[&TorusAction]) -> FixedSet {
    let n = actions.first().map_or(0, |a| a.rank());
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for a in actions {
        for k in 0..n {
            rows.push((0..n).map(|j| a.matrix[k][j] - i64::from(j == k)).collect());
            let o = (-a.offset[k]).turns();
            rhs.push(BigRational::new(BigInt::from(*o.numer()), BigInt::from(*o.denom())));
        }
    }
    if rows.is_empty() {
        let dirs = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        return FixedSet { components: vec![Component::new(vec![Rational::zero(); n], dirs)] };
    }
    let snf = smith_normal_form(&to_big(&rows));
    let m = rows.len();
    // D s ≡ U⁻¹ b (mod 1) with s = V t
    let b2: Vec<BigRational> = (0..m)
        .map(|i| frac_big(&snf.u_inv[i].iter().zip(&rhs).map(|(a, b)| BigRational::from_integer(a.clone()) * b).sum()))
        .collect();
    if b2[snf.rank..].iter().any(|x| !x.is_zero()) {
        return FixedSet::default();
    }
    let d: Vec<BigInt> = snf.diag[..snf.rank].iter().map(|x| x.abs()).collect();
    let total: usize = d.iter().map(|x| x.to_usize().unwrap_or(usize::MAX)).fold(1usize, |a, b| a.saturating_mul(b));
    assert!(total <= MAX_COMPONENTS, "fixed set has too many components ({total})");
    let directions: Vec<Vec<i64>> =
        (snf.rank..n).map(|c| (0..n).map(|j| snf.v_inv[j][c].to_i64().expect("small lattice entry")).collect()).collect();
    let mut components = Vec::with_capacity(total);
    let mut idx = vec![BigInt::zero(); snf.rank];
    loop {
        let s: Vec<BigRational> = (0..n)
            .map(|i| {
                if i < snf.rank {
                    (&b2[i] + BigRational::from_integer(idx[i].clone())) / BigRational::from_integer(d[i].clone())
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let base: Vec<Rational> = (0..n)
            .map(|j| to_small(&frac_big(&snf.v_inv[j].iter().zip(&s).map(|(a, x)| BigRational::from_integer(a.clone()) * x).sum())))
            .collect();
        components.push(Component::new(base, directions.clone()));
        let mut c = 0;
        while c < idx.len() {
            idx[c] += BigInt::one();
            if idx[c] < d[c] {
                break;
            }
            idx[c] = BigInt::zero();
            c += 1;
        }
        if c == idx.len() {
            break;
        }
    }
    components.sort_by(|a, b| a.base.cmp(&b.base));
    FixedSet { components }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_action(rows: Vec<Vec<i64>>) -> TorusAction {
        let n = rows.len();
        TorusAction { matrix: rows, offset: vec![Phase::zero(); n] }
    }

    #[test]
    fn cyclic_shift_fixes_diagonal() {
        let a = perm_action(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let f = fixed_set(&a);
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].directions, vec![vec![1, 1, 1]]);
        assert!(f.contains(&[Rational::new(2, 7); 3]));
        assert!(!f.contains(&[Rational::new(2, 7), Rational::new(2, 7), Rational::new(1, 7)]));
    }

    #[test]
    fn inversion_has_two_to_the_n_points() {
        let a = perm_action(vec![vec![-1, 0], vec![0, -1]]);
        let f = fixed_set(&a);
        assert_eq!(f.components.len(), 4);
        assert!(f.components.iter().all(|c| c.dim() == 0));
        let half = Rational::new(1, 2);
        assert!(f.contains(&[half, Rational::zero()]));
    }

    #[test]
    fn identity_is_everything() {
        let f = fixed_set(&TorusAction::identity(3));
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].dim(), 3);
    }

    #[test]
    fn pure_translation_has_no_fixed_points() {
        let a = TorusAction { matrix: vec![vec![1]], offset: vec![Phase::from_ratio(1, 3)] };
        assert!(fixed_set(&a).is_empty());
    }

    #[test]
    fn component_equality_is_basis_free() {
        let a = Component::new(vec![Rational::new(1, 2), Rational::zero()], vec![vec![1, 1]]);
        let b = Component::new(vec![Rational::zero(), Rational::new(1, 2)], vec![vec![-1, -1]]);
        assert!(a.same_as(&b));
        let c = Component::new(vec![Rational::zero(), Rational::zero()], vec![vec![1, 1]]);
        assert!(!a.same_as(&c));
    }
}
