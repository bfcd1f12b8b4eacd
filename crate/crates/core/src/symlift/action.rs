use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{self, IntMatrix};
use crate::torus::{Phase, Rational, UnitaryMonomial};

/// Affine action t ↦ E·t + φ₀ on T^n; row k of E with phase φ₀[k] is the image of x_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusAction {
    pub matrix: IntMatrix,
    pub offset: Vec<Phase>,
}

impl TorusAction {
    pub fn identity(n: usize) -> Self {
        TorusAction { matrix: lattice::identity(n), offset: vec![Phase::zero(); n] }
    }

    /// Action whose generator images are the given monomials.
    pub fn from_images(images: &[UnitaryMonomial]) -> Self {
        TorusAction { matrix: images.iter().map(|m| m.exp.clone()).collect(), offset: images.iter().map(|m| m.phase).collect() }
    }

    pub fn rank(&self) -> usize {
        self.offset.len()
    }

    pub fn image(&self, k: usize) -> UnitaryMonomial {
        UnitaryMonomial::new(self.offset[k], self.matrix[k].clone())
    }

    pub fn images(&self) -> Vec<UnitaryMonomial> {
        (0..self.rank()).map(|k| self.image(k)).collect()
    }

    /// Pull-back of a monomial: x^m ↦ Π image_k^{m_k}.
    pub fn apply_monomial(&self, m: &UnitaryMonomial) -> UnitaryMonomial {
        m.exp.iter().enumerate().fold(UnitaryMonomial::scalar(self.rank(), m.phase), |acc, (k, &e)| &acc * &self.image(k).pow(e))
    }

    pub fn apply_exact(&self, t: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, off)| {
                let s: Rational = row.iter().zip(t).map(|(&e, &x)| x * e).sum();
                Phase::new(s + off.turns()).turns()
            })
            .collect()
    }

    pub fn apply_turns(&self, t: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, off)| {
                let o = off.turns();
                let s: f64 = row.iter().zip(t).map(|(&e, &x)| e as f64 * x).sum::<f64>() + *o.numer() as f64 / *o.denom() as f64;
                s - s.floor()
            })
            .collect()
    }

    /// `self ∘ other`: (E₂,φ₂)∘(E₁,φ₁) = (E₂E₁, E₂φ₁+φ₂).
    pub fn compose(&self, other: &TorusAction) -> TorusAction {
        let matrix = lattice::mul(&self.matrix, &other.matrix);
        let shifted = self.apply_exact(&other.offset.iter().map(|p| p.turns()).collect::<Vec<_>>());
        TorusAction { matrix, offset: shifted.into_iter().map(Phase::new).collect() }
    }

    pub fn fixes(&self, t: &[Rational]) -> bool {
        self.apply_exact(t).iter().zip(t).all(|(a, b)| (a - b).is_zero() || Phase::new(*a - *b).is_zero())
    }

    pub fn det(&self) -> i64 {
        lattice::det(&self.matrix)
    }

    pub fn is_identity(&self) -> bool {
        *self == TorusAction::identity(self.rank())
    }

    /// Generator images written with the given letters, e.g. `(A*,C*,B*)`.
    pub fn describe(&self, letters: &[&str]) -> String {
        let parts: Vec<String> = (0..self.rank())
            .map(|k| {
                let m = self.image(k);
                let mut s = String::new();
                if !m.phase.is_zero() {
                    s.push_str(&format!("e(2πi·{})", m.phase));
                }
                for (j, &e) in m.exp.iter().enumerate() {
                    let l = letters.get(j).copied().unwrap_or("x");
                    match e {
                        0 => {}
                        1 => s.push_str(l),
                        -1 => s.push_str(&format!("{l}*")),
                        e => s.push_str(&format!("{l}^{e}")),
                    }
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for TorusAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = ["A", "B", "C", "D", "E", "F", "G", "H"];
        write!(f, "{}", self.describe(&letters))
    }
}
