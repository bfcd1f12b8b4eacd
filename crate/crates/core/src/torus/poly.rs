use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::UnitaryMonomial;
use super::point::TorusPoint;
use crate::error::{Error, Result};

const PRUNE: f64 = 1e-14;

/// Laurent polynomial Σ c_e x^e with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPolynomial {
    rank: usize,
    terms: BTreeMap<Vec<i64>, Complex64>,
}

impl TorusPolynomial {
    pub fn zero(rank: usize) -> Self {
        TorusPolynomial { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: Complex64) -> Self {
        let mut p = TorusPolynomial::zero(rank);
        p.add_term(vec![0; rank], c);
        p
    }

    pub fn one(rank: usize) -> Self {
        TorusPolynomial::constant(rank, Complex64::new(1.0, 0.0))
    }

    pub fn from_monomial(m: &UnitaryMonomial) -> Self {
        let mut p = TorusPolynomial::zero(m.rank());
        p.add_term(m.exp.clone(), m.phase.to_complex());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, Complex64)>>(rank: usize, terms: I) -> Result<Self> {
        let mut p = TorusPolynomial::zero(rank);
        for (e, c) in terms {
            if e.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: Complex64) {
        assert_eq!(exp.len(), self.rank, "rank mismatch in polynomial term");
        let entry = self.terms.entry(exp).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= PRUNE {
            self.terms.retain(|_, c| c.norm() > PRUNE);
        }
    }

    pub fn add_monomial(&mut self, m: &UnitaryMonomial) {
        self.add_term(m.exp.clone(), m.phase.to_complex());
    }

    pub fn adjoint(&self) -> Self {
        TorusPolynomial {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj())).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = TorusPolynomial::zero(self.rank);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn mul_monomial(&self, m: &UnitaryMonomial) -> Self {
        let z = m.phase.to_complex();
        TorusPolynomial {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&m.exp).map(|(a, b)| a + b).collect(), c * z))
                .collect(),
        }
    }

    pub fn eval_turns(&self, t: &[f64]) -> Complex64 {
        assert_eq!(t.len(), self.rank, "rank mismatch in polynomial evaluation");
        self.terms
            .iter()
            .map(|(e, c)| {
                let s: f64 = e.iter().zip(t).map(|(&k, &x)| k as f64 * x).sum();
                c * Complex64::from_polar(1.0, std::f64::consts::TAU * s)
            })
            .sum()
    }

    pub fn eval(&self, t: &TorusPoint) -> Complex64 {
        match t.as_exact() {
            Some(r) => self
                .terms
                .iter()
                .map(|(e, c)| c * UnitaryMonomial::new(Default::default(), e.clone()).eval_exact(r).to_complex())
                .sum(),
            None => self.eval_turns(&t.turns_f64()),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let d = self - other;
        d.terms.values().all(|c| c.norm() <= tol)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn poly_eval(p: &TorusPolynomial, t: &TorusPoint) -> Result<Complex64> {
    if p.rank() != t.rank() {
        return Err(Error::RankMismatch { expected: p.rank(), found: t.rank() });
    }
    Ok(p.eval(t))
}

impl Add for &TorusPolynomial {
    type Output = TorusPolynomial;
    fn add(self, rhs: &TorusPolynomial) -> TorusPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), *c);
        }
        p
    }
}

impl Sub for &TorusPolynomial {
    type Output = TorusPolynomial;
    fn sub(self, rhs: &TorusPolynomial) -> TorusPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &TorusPolynomial {
    type Output = TorusPolynomial;
    fn neg(self) -> TorusPolynomial {
        TorusPolynomial { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &TorusPolynomial {
    type Output = TorusPolynomial;
    fn mul(self, rhs: &TorusPolynomial) -> TorusPolynomial {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in polynomial product");
        let mut p = TorusPolynomial::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                p.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        p
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    coeff: Complex64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    rank: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for TorusPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| TermRepr { exp: e.clone(), coeff: *c }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        TorusPolynomial::from_terms(r.rank, r.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}
