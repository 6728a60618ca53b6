//! Gröbner bases over `F_p` with `p = 2^61 - 1`, used for counting.
//!
//! Reduction modulo a large prime keeps coefficients to one machine word. For
//! all but finitely many primes the leading monomials agree with the rational
//! computation, so dimensions and degrees read from them do too.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::buchberger::{Budget, PairQueue};
use super::hilbert;
use super::ideal::Ideal;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::GroebnerError;

pub const PRIME: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & PRIME;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, PRIME - 2)
}

fn reduce_bigint(n: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let mut r = n % &p;
    if r < BigInt::zero() {
        r += &p;
    }
    r.to_u64().unwrap()
}

type ModTerm = (Monomial, u64);

/// Leading monomials of the reduced basis of `gens` over `F_p`.
///
/// Returns `None` when a coefficient denominator vanishes modulo `p`.
pub fn leading_monomials_mod_p(
    gens: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Option<Vec<Monomial>>, GroebnerError> {
    let start = Instant::now();
    let mut input: Vec<Vec<ModTerm>> = Vec::with_capacity(gens.len());
    for g in gens {
        let g = g.with_order(order);
        let mut terms = Vec::with_capacity(g.len());
        for (m, c) in g.terms() {
            let den = reduce_bigint(&c.denom());
            if den == 0 {
                return Ok(None);
            }
            let v = mul(reduce_bigint(&c.numer()), inv(den));
            if v != 0 {
                terms.push((m.clone(), v));
            }
        }
        if !terms.is_empty() {
            input.push(monic(terms));
        }
    }
    if input.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let nvars = input[0][0].0.nvars();
    let unit = Ok(Some(vec![Monomial::one(nvars)]));
    input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));

    let mut queue = PairQueue::new(order);
    let mut polys: Vec<Vec<ModTerm>> = Vec::new();
    for g in input {
        let active: Vec<&[ModTerm]> = queue.active().map(|i| polys[i].as_slice()).collect();
        let Some(r) = reduce(g, &active, order, budget.deadline) else {
            return Err(GroebnerError::Timeout { steps: 0, elapsed: start.elapsed() });
        };
        if r.is_empty() {
            continue;
        }
        if r[0].0.is_one() {
            return unit;
        }
        queue.update(r[0].0.clone());
        polys.push(monic(r));
    }
    let mut steps = 0u64;
    while let Some(pair) = queue.pop_pair() {
        steps += 1;
        if steps.is_multiple_of(16) || budget.max_steps.is_some() {
            budget.check(steps, start)?;
        }
        let s = s_polynomial(&polys[pair.i], &polys[pair.j], &pair.lcm, order);
        let active: Vec<&[ModTerm]> = queue.active().map(|i| polys[i].as_slice()).collect();
        let Some(r) = reduce(s, &active, order, budget.deadline) else {
            return Err(GroebnerError::Timeout { steps, elapsed: start.elapsed() });
        };
        if r.is_empty() {
            continue;
        }
        if r[0].0.is_one() {
            return unit;
        }
        queue.update(r[0].0.clone());
        polys.push(monic(r));
    }
    budget.check(steps, start)?;
    let mut lms: Vec<Monomial> = queue.active().map(|i| polys[i][0].0.clone()).collect();
    lms.sort_by(|a, b| order.cmp(a, b));
    Ok(Some(lms))
}

fn monic(mut f: Vec<ModTerm>) -> Vec<ModTerm> {
    let c = inv(f[0].1);
    if c != 1 {
        for t in f.iter_mut() {
            t.1 = mul(t.1, c);
        }
    }
    f
}

fn s_polynomial(f: &[ModTerm], g: &[ModTerm], lcm: &Monomial, order: MonomialOrder) -> Vec<ModTerm> {
    let mf = f[0].0.quotient_of(lcm).unwrap();
    let mg = g[0].0.quotient_of(lcm).unwrap();
    let a: Vec<ModTerm> = f[1..].iter().map(|(m, c)| (m.mul(&mf), *c)).collect();
    merge_sub(&a, 1, &mg, &g[1..], order)
}

/// Full reduction against a monic basis; `None` once `deadline` has passed.
fn reduce(
    mut terms: Vec<ModTerm>,
    basis: &[&[ModTerm]],
    order: MonomialOrder,
    deadline: Option<Instant>,
) -> Option<Vec<ModTerm>> {
    let mut done = 0;
    let mut iterations = 0u32;
    while done < terms.len() {
        let m = &terms[done].0;
        match basis.iter().find(|g| g[0].0.divides(m)) {
            None => done += 1,
            Some(g) => {
                iterations += 1;
                if iterations.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() > d) {
                    return None;
                }
                let q = g[0].0.quotient_of(m).unwrap();
                let c = terms[done].1;
                let tail = merge_sub(&terms[done + 1..], c, &q, &g[1..], order);
                terms.truncate(done);
                terms.extend(tail);
            }
        }
    }
    Some(terms)
}

/// `a - c * m * b` for descending term lists.
fn merge_sub(a: &[ModTerm], c: u64, m: &Monomial, b: &[ModTerm], order: MonomialOrder) -> Vec<ModTerm> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let nc = neg(c);
    let mut i = 0;
    let mut k = 0;
    while i < a.len() && k < b.len() {
        let bm = b[k].0.mul(m);
        match order.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, mul(nc, b[k].1)));
                k += 1;
            }
            Ordering::Equal => {
                let s = add(a[i].1, mul(nc, b[k].1));
                if s != 0 {
                    out.push((bm, s));
                }
                i += 1;
                k += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[k..].iter().map(|(bm, bc)| (bm.mul(m), mul(nc, *bc))));
    out
}

/// Krull dimension and degree over `F_p` under grevlex; `None` for the unit ideal.
///
/// Falls back to the exact computation when the ideal has a coefficient whose
/// denominator is divisible by the prime.
pub fn dimension_and_degree_mod_p(ideal: &Ideal, budget: &Budget) -> Result<Option<(usize, u128)>, GroebnerError> {
    let n = ideal.nvars();
    match leading_monomials_mod_p(ideal.gens(), MonomialOrder::Grevlex, budget)? {
        Some(lms) => {
            if lms.len() == 1 && lms[0].is_one() {
                return Ok(None);
            }
            Ok(hilbert::dimension_and_degree(&lms, n))
        }
        None => Ok(ideal.with_order(MonomialOrder::Grevlex).groebner(budget)?.dimension_and_degree()),
    }
}

/// Vector-space dimension of `F_p[x]/I` for zero-dimensional `I`; `0` for the unit ideal.
pub fn degree_zero_dim_mod_p(ideal: &Ideal, budget: &Budget) -> Result<u128, GroebnerError> {
    match dimension_and_degree_mod_p(ideal, budget)? {
        None => Ok(0),
        Some((0, d)) => Ok(d),
        Some((dim, _)) => Err(GroebnerError::NotZeroDimensional { dim: dim as i64 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::groebner::{MonomialOrder, Ring};
    use proptest::prelude::*;

    #[test]
    fn field_arithmetic() {
        for a in [1u64, 2, 12345, PRIME - 1] {
            assert_eq!(mul(a, inv(a)), 1);
        }
        assert_eq!(add(PRIME - 1, 1), 0);
        assert_eq!(reduce_bigint(&BigInt::from(-1)), PRIME - 1);
    }

    #[test]
    fn matches_exact_on_twisted_cubic_slice() {
        let r = Ring::with_prefix("p", 4, MonomialOrder::Grevlex);
        let i = Ideal::new(
            r.clone(),
            ["3*p0*p2-p1^2", "3*p1*p3-p2^2", "9*p0*p3-p1*p2", "p0+p1+p2+p3-1", "p0+p2+p3-1/2"]
                .iter()
                .map(|s| r.parse(s).unwrap()),
        );
        assert_eq!(degree_zero_dim_mod_p(&i, &Budget::unlimited()).unwrap(), 3);
        let exact = i.groebner(&Budget::unlimited()).unwrap();
        let lms = leading_monomials_mod_p(i.gens(), MonomialOrder::Grevlex, &Budget::unlimited()).unwrap().unwrap();
        assert_eq!(lms, exact.leading_monomials());
    }

    #[test]
    fn unit_and_bad_denominator() {
        let r = Ring::with_prefix("x", 2, MonomialOrder::Grevlex);
        let i = Ideal::new(r.clone(), [r.parse("x0").unwrap(), r.parse("x0-1").unwrap()]);
        assert_eq!(dimension_and_degree_mod_p(&i, &Budget::unlimited()).unwrap(), None);
        let big = Rational::from_big(num_rational::BigRational::new(1.into(), BigInt::from(PRIME)));
        let f = r.var(0).sub(&r.constant(big));
        assert!(leading_monomials_mod_p(std::slice::from_ref(&f), MonomialOrder::Grevlex, &Budget::unlimited()).unwrap().is_none());
        let i = Ideal::new(r.clone(), [f, r.var(1)]);
        assert_eq!(degree_zero_dim_mod_p(&i, &Budget::unlimited()).unwrap(), 1);
    }

    proptest! {
        #[test]
        fn leading_monomials_agree_with_exact(
            cs in proptest::collection::vec(-5i64..6, 9),
        ) {
            let r = Ring::with_prefix("x", 3, MonomialOrder::Grevlex);
            let q = |k: usize| Rational::from_int(cs[k]);
            let f1 = r.var(0).mul(&r.var(1)).add(&r.var(2).scale(&q(0))).add(&r.constant(q(1)));
            let f2 = r.var(1).pow(2).add(&r.var(0).scale(&q(2))).add(&r.var(2).mul(&r.var(0)).scale(&q(3)));
            let f3 = r.var(2).pow(2).add(&r.var(1).scale(&q(4))).add(&r.constant(q(5)))
                .add(&r.var(0).pow(2).scale(&q(6)));
            let gens = vec![f1, f2, f3];
            let exact = Ideal::new(r.clone(), gens.clone()).groebner(&Budget::unlimited()).unwrap();
            let lms = leading_monomials_mod_p(&gens, MonomialOrder::Grevlex, &Budget::unlimited()).unwrap().unwrap();
            prop_assert_eq!(lms, exact.leading_monomials());
        }
    }
}
