use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::Ratio<i64>;

/// A root-of-unity-valued phase e^{2πi·r}, stored as r ∈ [0,1) in turns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Phase(Rational);

pub(crate) fn frac(r: Rational) -> Rational {
    r - r.floor()
}

impl Phase {
    pub fn new(turns: Rational) -> Self {
        Phase(frac(turns))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Phase::new(Rational::new(p, q))
    }

    pub fn zero() -> Self {
        Phase(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn turns(&self) -> Rational {
        self.0
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn to_complex(&self) -> Complex64 {
        match (*self.0.numer(), *self.0.denom()) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (p, q) => Complex64::from_polar(1.0, TAU * p as f64 / q as f64),
        }
    }

    pub fn conj(&self) -> Self {
        -*self
    }

    pub fn pow(&self, k: i64) -> Self {
        Phase::new(self.0 * Rational::from_integer(k))
    }

    /// The phase closest to `z / |z|` with denominator dividing `n`, if within `tol`.
    pub fn recognize(z: Complex64, n: u64, tol: f64) -> Option<Self> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let turns = z.arg() / TAU;
        let k = (turns * n as f64).round() as i64;
        let ph = Phase::from_ratio(k, n as i64);
        ((ph.to_complex() - z).norm() <= tol).then_some(ph)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::new(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0)
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;
    fn mul(self, k: i64) -> Phase {
        self.pow(k)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [*self.0.numer(), *self.0.denom()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [p, q] = <[i64; 2]>::deserialize(d)?;
        if q == 0 {
            return Err(serde::de::Error::custom("phase denominator is zero"));
        }
        Ok(Phase::from_ratio(p, q))
    }
}
