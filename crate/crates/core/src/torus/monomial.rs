use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{Phase, Rational};
use super::point::TorusPoint;
use crate::error::{Error, Result};

/// Unit-modulus monomial z·x^e with z a root of unity and e ∈ Z^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct UnitaryMonomial {
    pub phase: Phase,
    pub exp: Vec<i64>,
}

impl UnitaryMonomial {
    pub fn new(phase: Phase, exp: Vec<i64>) -> Self {
        UnitaryMonomial { phase, exp }
    }

    pub fn one(rank: usize) -> Self {
        UnitaryMonomial { phase: Phase::zero(), exp: vec![0; rank] }
    }

    /// The coordinate generator x_k.
    pub fn generator(rank: usize, k: usize) -> Self {
        let mut exp = vec![0; rank];
        exp[k] = 1;
        UnitaryMonomial { phase: Phase::zero(), exp }
    }

    pub fn scalar(rank: usize, phase: Phase) -> Self {
        UnitaryMonomial { phase, exp: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.exp.len()
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero() && self.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.exp.iter().all(|&e| e == 0)
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMonomial { phase: -self.phase, exp: self.exp.iter().map(|e| -e).collect() }
    }

    pub fn pow(&self, k: i64) -> Self {
        UnitaryMonomial { phase: self.phase.pow(k), exp: self.exp.iter().map(|e| e * k).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(self * other)
    }

    /// Exact value at a rational point, as a phase.
    pub fn eval_exact(&self, t: &[Rational]) -> Phase {
        assert_eq!(t.len(), self.rank(), "rank mismatch in monomial evaluation");
        let s: Rational = self.exp.iter().zip(t).map(|(&e, &ti)| ti * e).sum();
        self.phase + Phase::new(s)
    }

    pub fn eval_turns(&self, t: &[f64]) -> Complex64 {
        assert_eq!(t.len(), self.rank(), "rank mismatch in monomial evaluation");
        let s: f64 = self.exp.iter().zip(t).map(|(&e, &ti)| e as f64 * ti).sum();
        self.phase.to_complex() * Complex64::from_polar(1.0, std::f64::consts::TAU * s)
    }

    pub fn eval(&self, t: &TorusPoint) -> Complex64 {
        match t.as_exact() {
            Some(r) => self.eval_exact(r).to_complex(),
            None => self.eval_turns(&t.turns_f64()),
        }
    }
}

impl Mul for &UnitaryMonomial {
    type Output = UnitaryMonomial;
    fn mul(self, rhs: &UnitaryMonomial) -> UnitaryMonomial {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in monomial product");
        UnitaryMonomial {
            phase: self.phase + rhs.phase,
            exp: self.exp.iter().zip(&rhs.exp).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for UnitaryMonomial {
    type Output = UnitaryMonomial;
    fn mul(self, rhs: UnitaryMonomial) -> UnitaryMonomial {
        &self * &rhs
    }
}

pub fn mono_mul(a: &UnitaryMonomial, b: &UnitaryMonomial) -> Result<UnitaryMonomial> {
    a.try_mul(b)
}

pub fn mono_adjoint(a: &UnitaryMonomial) -> UnitaryMonomial {
    a.adjoint()
}

pub fn mono_eval(a: &UnitaryMonomial, t: &TorusPoint) -> Result<Complex64> {
    if a.rank() != t.rank() {
        return Err(Error::RankMismatch { expected: a.rank(), found: t.rank() });
    }
    Ok(a.eval(t))
}

impl fmt::Display for UnitaryMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.phase.is_zero() {
            write!(f, "e(2πi·{})", self.phase)?;
        }
        let mut any = false;
        for (k, &e) in self.exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if any || !self.phase.is_zero() {
                write!(f, "·")?;
            }
            any = true;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        if !any && self.phase.is_zero() {
            write!(f, "1")?;
        }
        Ok(())
    }
}
