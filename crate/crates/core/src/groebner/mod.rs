//! Sparse polynomials over `Q`, Gröbner bases and the ideal operations built on them.

mod buchberger;
pub mod hilbert;
mod ideal;
mod minors;
pub mod modular;
mod monomial;
mod polynomial;
mod ring;

use std::time::Duration;

use thiserror::Error;

pub use buchberger::{groebner_basis, is_groebner_basis, Budget};
pub use ideal::{
    buchberger, degree_zero_dim, dimension, eliminate, homogeneous_degree, normal_form,
    primitive_generators, projective_dimension_and_degree, saturate, saturate_by_all_variables,
    saturate_by_variable, vanishes_at, GroebnerBasis, Ideal,
};
pub use modular::{degree_zero_dim_mod_p, dimension_and_degree_mod_p, leading_monomials_mod_p};
pub use minors::{determinant, jacobian, linear_substitution, minors};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{Polynomial, Term};
pub use ring::{ParsePolynomialError, Ring};

/// Coefficient field for computations that only need leading monomials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Over `F_p` with `p = 2^61 - 1`.
    #[default]
    Modular,
    /// Over `Q`.
    Exact,
}

impl Arithmetic {
    /// Krull dimension and degree under grevlex; `None` for the unit ideal.
    pub fn dimension_and_degree(self, ideal: &Ideal, budget: &Budget) -> Result<Option<(usize, u128)>, GroebnerError> {
        match self {
            Arithmetic::Modular => dimension_and_degree_mod_p(ideal, budget),
            Arithmetic::Exact => {
                Ok(ideal.with_order(MonomialOrder::Grevlex).groebner(budget)?.dimension_and_degree())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("Gröbner basis budget exhausted after {steps} S-pair reductions ({elapsed:?})")]
    Timeout { steps: u64, elapsed: Duration },
    #[error("ideal is not zero-dimensional (dimension {dim})")]
    NotZeroDimensional { dim: i64 },
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
}
