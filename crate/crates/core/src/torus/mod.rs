mod cyclotomic;
mod monomial;
mod phase;
mod point;
mod poly;
mod weights;

pub use cyclotomic::RootSum;
pub use monomial::{mono_adjoint, mono_eval, mono_mul, UnitaryMonomial};
pub use phase::{Phase, Rational};
pub use point::TorusPoint;
pub use poly::{poly_eval, TorusPolynomial};
pub use weights::{check_weight_function, Violation, WeightFunction, WeightReport};
