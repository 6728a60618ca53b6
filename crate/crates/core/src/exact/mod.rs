//! Exact rational arithmetic and dense linear algebra over `Q`.

pub mod matrix;
pub mod rational;

pub use matrix::{dot, MatrixError, RatMatrix};
pub use rational::{denominator_lcm, numerator_gcd, ParseRationalError, Rational};

/// Scales a rational vector to the primitive integer vector with the same direction.
/// The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> Vec<Rational> {
    let l = Rational::from_bigint(denominator_lcm(v.iter()));
    let scaled: Vec<Rational> = v.iter().map(|x| x * &l).collect();
    let g = numerator_gcd(scaled.iter());
    if num_traits::Zero::is_zero(&g) {
        return scaled;
    }
    let g = Rational::from_bigint(g);
    scaled.iter().map(|x| x / &g).collect()
}

/// Parses a comma-separated list of rationals such as `1/6,1/2,1/6,1/6`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, ParseRationalError> {
    s.split(',').map(|t| t.trim().parse()).collect()
}
