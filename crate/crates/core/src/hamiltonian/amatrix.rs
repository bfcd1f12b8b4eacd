use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::torus::{TorusPoint, TorusPolynomial, UnitaryMonomial};

pub type CMatrix = DMatrix<Complex64>;

/// Square matrix over the torus algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AMatrix {
    dim: usize,
    rank: usize,
    entries: Vec<Vec<TorusPolynomial>>,
}

impl AMatrix {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        AMatrix { dim, rank, entries: vec![vec![TorusPolynomial::zero(rank); dim]; dim] }
    }

    pub fn identity(dim: usize, rank: usize) -> Self {
        let mut m = AMatrix::zeros(dim, rank);
        for i in 0..dim {
            m.entries[i][i] = TorusPolynomial::one(rank);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &TorusPolynomial {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: TorusPolynomial) {
        self.entries[i][j] = p;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = AMatrix::zeros(self.dim, self.rank);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.entries[j][i] = self.entries[i][j].adjoint();
            }
        }
        m
    }

    pub fn mul(&self, other: &AMatrix) -> AMatrix {
        let mut m = AMatrix::zeros(self.dim, self.rank);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = TorusPolynomial::zero(self.rank);
                for k in 0..self.dim {
                    if !self.entries[i][k].is_zero() && !other.entries[k][j].is_zero() {
                        acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
                    }
                }
                m.entries[i][j] = acc;
            }
        }
        m
    }

    pub fn mul_monomial(&self, s: &UnitaryMonomial) -> AMatrix {
        let mut m = self.clone();
        for row in m.entries.iter_mut() {
            for p in row.iter_mut() {
                *p = p.mul_monomial(s);
            }
        }
        m
    }

    pub fn approx_eq(&self, other: &AMatrix, tol: f64) -> bool {
        self.dim == other.dim
            && self.entries.iter().flatten().zip(other.entries.iter().flatten()).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn trace(&self) -> TorusPolynomial {
        (0..self.dim).fold(TorusPolynomial::zero(self.rank), |acc, i| &acc + &self.entries[i][i])
    }

    pub fn evaluate(&self, t: &TorusPoint) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |i, j| self.entries[i][j].eval(t))
    }
}
