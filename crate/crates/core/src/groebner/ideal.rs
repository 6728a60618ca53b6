use crate::exact::Rational;

use super::buchberger::{groebner_basis, reduce, Budget};
use super::hilbert;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::ring::Ring;
use super::GroebnerError;

/// Ideal given by generators in a fixed ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
}

/// Reduced Gröbner basis, monic, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    basis: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped; the rest are brought under the ring's order.
    pub fn new(ring: Ring, gens: impl IntoIterator<Item = Polynomial>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| ring.adopt(&g)).collect();
        Ideal { ring, gens }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Sum of ideals in the same ring.
    pub fn plus(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.into_iter().filter(|g| !g.is_zero()).map(|g| self.ring.adopt(&g)));
        Ideal { ring: self.ring.clone(), gens }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ideal {
        Ideal::new(self.ring.with_order(order), self.gens.iter().cloned())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }

    pub fn groebner(&self, budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
        let basis = groebner_basis(&self.gens, self.ring.order(), budget)?;
        Ok(GroebnerBasis { ring: self.ring.clone(), basis })
    }
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn into_polys(self) -> Vec<Polynomial> {
        self.basis
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let refs: Vec<&Polynomial> = self.basis.iter().collect();
        reduce(&self.ring.adopt(f), &refs, self.order())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal { ring: self.ring.clone(), gens: self.basis.clone() }
    }

    /// Krull dimension of the quotient ring; `-1` for the unit ideal.
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        hilbert::max_independent_set(&self.leading_monomials(), self.ring.nvars())
            .map_or(-1, |s| s.len() as i64)
    }

    /// Number of standard monomials of a zero-dimensional ideal (0 for the unit ideal).
    pub fn degree_zero_dim(&self) -> Result<u128, GroebnerError> {
        if self.is_unit() {
            return Ok(0);
        }
        match hilbert::dimension_and_degree(&self.leading_monomials(), self.ring.nvars()) {
            None => Ok(0),
            Some((0, deg)) => Ok(deg),
            Some((dim, _)) => Err(GroebnerError::NotZeroDimensional { dim: dim as i64 }),
        }
    }

    /// Affine Krull dimension and leading coefficient degree of the Hilbert polynomial.
    pub fn dimension_and_degree(&self) -> Option<(usize, u128)> {
        if self.is_unit() {
            return None;
        }
        hilbert::dimension_and_degree(&self.leading_monomials(), self.ring.nvars())
    }
}

pub fn buchberger(ideal: &Ideal, order: MonomialOrder, budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    ideal.with_order(order).groebner(budget)
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    gb.normal_form(f)
}

/// Krull dimension of `Q[x]/I` under a grevlex basis; `-1` for the unit ideal.
pub fn dimension(ideal: &Ideal, budget: &Budget) -> Result<i64, GroebnerError> {
    Ok(buchberger(ideal, MonomialOrder::Grevlex, budget)?.dimension())
}

/// Dimension of `Q[x]/I` as a vector space, for zero-dimensional `I`.
pub fn degree_zero_dim(ideal: &Ideal, budget: &Budget) -> Result<u128, GroebnerError> {
    buchberger(ideal, MonomialOrder::Grevlex, budget)?.degree_zero_dim()
}

/// Projective degree of a homogeneous ideal.
pub fn homogeneous_degree(ideal: &Ideal, budget: &Budget) -> Result<u128, GroebnerError> {
    projective_dimension_and_degree(ideal, budget).map(|(_, d)| d)
}

/// Projective dimension and degree of the variety of a homogeneous ideal.
pub fn projective_dimension_and_degree(ideal: &Ideal, budget: &Budget) -> Result<(i64, u128), GroebnerError> {
    if !ideal.is_homogeneous() {
        return Err(GroebnerError::NotHomogeneous);
    }
    let gb = buchberger(ideal, MonomialOrder::Grevlex, budget)?;
    match gb.dimension_and_degree() {
        None => Ok((-1, 0)),
        Some((d, deg)) => Ok((d as i64 - 1, deg)),
    }
}

/// Ring with `front` variables first (block-eliminated) followed by the others.
fn block_ring(ring: &Ring, front: &[usize], extra: &[String]) -> (Ring, Vec<usize>, Vec<usize>) {
    let n = ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|i| !front.contains(i)).collect();
    let mut names: Vec<String> = extra.to_vec();
    names.extend(front.iter().map(|&i| ring.names()[i].clone()));
    names.extend(rest.iter().map(|&i| ring.names()[i].clone()));
    let k = extra.len() + front.len();
    // Position of original variable i in the new ring.
    let mut map = vec![0usize; n];
    for (pos, &i) in front.iter().chain(rest.iter()).enumerate() {
        map[i] = extra.len() + pos;
    }
    (Ring::new(names, MonomialOrder::Block(k)), map, rest)
}

/// `I ∩ Q[remaining variables]`, returned in the ring of the remaining variables.
pub fn eliminate(ideal: &Ideal, vars: &[usize], budget: &Budget) -> Result<Ideal, GroebnerError> {
    let (big, map, rest) = block_ring(&ideal.ring, vars, &[]);
    let gens: Vec<Polynomial> =
        ideal.gens.iter().map(|g| g.embed(big.nvars(), big.order(), &map)).collect();
    let gb = Ideal::new(big.clone(), gens).groebner(budget)?;
    let k = vars.len();
    let sub = Ring::new(rest.iter().map(|&i| ideal.ring.names()[i].clone()), ideal.ring.order());
    let keep: Vec<usize> = (k..big.nvars()).collect();
    let out = gb
        .basis
        .iter()
        .filter(|g| g.variables().iter().all(|&v| v >= k))
        .map(|g| g.restrict(&keep, sub.order()))
        .collect::<Vec<_>>();
    Ok(Ideal::new(sub, out))
}

/// Saturation `I : f^∞` through an auxiliary variable `t` with `1 - t f`.
pub fn saturate(ideal: &Ideal, f: &Polynomial, budget: &Budget) -> Result<Ideal, GroebnerError> {
    assert!(!f.is_zero(), "saturation by zero");
    let n = ideal.nvars();
    let (big, map, _) = block_ring(&ideal.ring, &[], &["_t".to_string()]);
    let mut gens: Vec<Polynomial> =
        ideal.gens.iter().map(|g| g.embed(big.nvars(), big.order(), &map)).collect();
    let fe = f.embed(big.nvars(), big.order(), &map);
    gens.push(big.one().sub(&big.var(0).mul(&fe)));
    let gb = Ideal::new(big.clone(), gens).groebner(budget)?;
    let keep: Vec<usize> = (1..=n).collect();
    let out: Vec<Polynomial> = gb
        .basis
        .iter()
        .filter(|g| g.variables().iter().all(|&v| v >= 1))
        .map(|g| g.restrict(&keep, ideal.ring.order()))
        .collect();
    Ok(Ideal::new(ideal.ring.clone(), out))
}

/// `I : x_var^∞` for homogeneous `I`, by a grevlex basis with `x_var` smallest.
pub fn saturate_by_variable(ideal: &Ideal, var: usize, budget: &Budget) -> Result<Ideal, GroebnerError> {
    if !ideal.is_homogeneous() {
        let x = ideal.ring.var(var);
        return saturate(ideal, &x, budget);
    }
    let n = ideal.nvars();
    // Move `var` to the last position.
    let mut perm: Vec<usize> = (0..n).filter(|&i| i != var).collect();
    perm.push(var);
    let mut map = vec![0usize; n];
    for (pos, &i) in perm.iter().enumerate() {
        map[i] = pos;
    }
    let gens: Vec<Polynomial> =
        ideal.gens.iter().map(|g| g.embed(n, MonomialOrder::Grevlex, &map)).collect();
    let gb = groebner_basis(&gens, MonomialOrder::Grevlex, budget)?;
    let out = gb.into_iter().map(|g| {
        let k = g.terms().iter().map(|(m, _)| m.exp(n - 1)).min().unwrap_or(0);
        let terms = g
            .into_terms()
            .into_iter()
            .map(|(m, c)| {
                let mut e: Vec<u16> = m.exps().to_vec();
                e[n - 1] -= k;
                // Back to the original variable positions.
                let orig: Vec<u16> = (0..n).map(|i| e[map[i]]).collect();
                (Monomial::from_exps(orig), c)
            })
            .collect();
        Polynomial::from_terms(n, ideal.ring.order(), terms)
    });
    Ok(Ideal::new(ideal.ring.clone(), out.collect::<Vec<_>>()))
}

/// Saturation by the product of all variables, one variable at a time.
pub fn saturate_by_all_variables(ideal: &Ideal, budget: &Budget) -> Result<Ideal, GroebnerError> {
    let mut cur = ideal.clone();
    for i in 0..ideal.nvars() {
        cur = saturate_by_variable(&cur, i, budget)?;
    }
    Ok(cur)
}

/// Generators of the reduced grevlex basis with integer coefficients and positive leading term.
pub fn primitive_generators(ideal: &Ideal, budget: &Budget) -> Result<Vec<Polynomial>, GroebnerError> {
    let gb = ideal.groebner(budget)?;
    Ok(gb.basis.iter().map(Polynomial::primitive).collect())
}

/// Evaluates each generator at a point; all zero means the point lies on the variety.
pub fn vanishes_at(ideal: &Ideal, point: &[Rational]) -> bool {
    ideal.gens.iter().all(|g| g.evaluate(point).is_zero())
}
