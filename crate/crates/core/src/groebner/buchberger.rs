//! Buchberger's algorithm with the Gebauer–Möller pair criteria.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use crate::exact::Rational;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::{Polynomial, Term};
use super::GroebnerError;

/// Resource caps for a single Gröbner basis computation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    /// Maximum number of S-polynomial reductions.
    pub max_steps: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget { max_steps: None, deadline: Some(Instant::now() + timeout) }
    }

    pub fn with_steps(max_steps: u64) -> Self {
        Budget { max_steps: Some(max_steps), deadline: None }
    }

    pub(crate) fn check(&self, steps: u64, start: Instant) -> Result<(), GroebnerError> {
        let over_steps = self.max_steps.is_some_and(|m| steps > m);
        let over_time = self.deadline.is_some_and(|d| Instant::now() > d);
        if over_steps || over_time {
            return Err(GroebnerError::Timeout { steps, elapsed: start.elapsed() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Pair {
    pub(crate) i: usize,
    pub(crate) j: usize,
    pub(crate) lcm: Monomial,
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// The result is monic and sorted by increasing leading monomial. The unit
/// ideal yields `[1]`, the zero ideal an empty basis.
pub fn groebner_basis(
    gens: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let start = Instant::now();
    let mut input: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).monic())
        .collect();
    if input.is_empty() {
        return Ok(Vec::new());
    }
    let nvars = input[0].nvars();
    if input.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::constant(nvars, order, Rational::one())]);
    }
    // Deterministic processing order: smallest leading monomial first.
    input.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));

    let mut queue = PairQueue::new(order);
    let mut polys: Vec<Polynomial> = Vec::new();
    let mut steps: u64 = 0;
    for g in input {
        let active: Vec<&Polynomial> = queue.active().map(|i| &polys[i]).collect();
        let r = reduce(&g, &active, order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::constant(nvars, order, Rational::one())]);
        }
        let r = r.monic();
        queue.update(r.leading_monomial().unwrap().clone());
        polys.push(r);
    }

    while let Some(pair) = queue.pop_pair() {
        steps += 1;
        if steps.is_multiple_of(16) || budget.max_steps.is_some() {
            budget.check(steps, start)?;
        }
        let s = s_polynomial(&polys[pair.i], &polys[pair.j], &pair.lcm);
        let active: Vec<&Polynomial> = queue.active().map(|i| &polys[i]).collect();
        let Some(r) = reduce_until(&s, &active, order, budget.deadline) else {
            return Err(GroebnerError::Timeout { steps, elapsed: start.elapsed() });
        };
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::constant(nvars, order, Rational::one())]);
        }
        let r = r.monic();
        queue.update(r.leading_monomial().unwrap().clone());
        polys.push(r);
    }
    budget.check(steps, start)?;
    let active: Vec<Polynomial> = queue.active().map(|i| polys[i].clone()).collect();
    Ok(interreduce(active, order))
}

/// Critical-pair bookkeeping shared by the exact and modular engines.
///
/// Only leading monomials are stored; the caller keeps the polynomials in the
/// same index order.
pub(crate) struct PairQueue {
    order: MonomialOrder,
    lms: Vec<Monomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl PairQueue {
    pub(crate) fn new(order: MonomialOrder) -> Self {
        PairQueue { order, lms: Vec::new(), active: Vec::new(), pairs: Vec::new() }
    }

    /// Indices of basis elements whose leading monomial is not divisible by a later one.
    pub(crate) fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.lms.len()).filter(|&i| self.active[i])
    }

    /// Normal selection: the pair with the smallest lcm, ties by indices.
    pub(crate) fn pop_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = order.cmp(&a.lcm, &b.lcm).then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Gebauer–Möller update for a new basis element with leading monomial `lh`.
    pub(crate) fn update(&mut self, lh: Monomial) {
        let hi = self.lms.len();
        let mut c: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| Pair { i: g, j: hi, lcm: lh.lcm(&self.lms[g]) })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = (!c.is_empty()).then(|| c.remove(0)) {
            let coprime = lh.is_coprime(&self.lms[p.i]);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !lh.is_coprime(&self.lms[p.i])).collect();

        let keep: Vec<Pair> = std::mem::take(&mut self.pairs)
            .into_iter()
            .filter(|p| {
                !(lh.divides(&p.lcm) && lh.lcm(&self.lms[p.i]) != p.lcm && lh.lcm(&self.lms[p.j]) != p.lcm)
            })
            .collect();
        self.pairs = keep;
        self.pairs.extend(e);

        for g in 0..hi {
            if self.active[g] && lh.divides(&self.lms[g]) {
                self.active[g] = false;
            }
        }
        self.lms.push(lh);
        self.active.push(true);
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let mf = f.leading_monomial().unwrap().quotient_of(lcm).unwrap();
    let mg = g.leading_monomial().unwrap().quotient_of(lcm).unwrap();
    let cf = f.leading_coeff().unwrap().recip();
    let cg = g.leading_coeff().unwrap().recip();
    f.mul_term(&mf, &cf).sub(&g.mul_term(&mg, &cg))
}

/// Full reduction of `f` by `basis`: no term of the result is divisible by a leading monomial.
pub(crate) fn reduce(f: &Polynomial, basis: &[&Polynomial], order: MonomialOrder) -> Polynomial {
    reduce_until(f, basis, order, None).expect("no deadline")
}

/// As [`reduce`], giving up with `None` once `deadline` has passed.
fn reduce_until(
    f: &Polynomial,
    basis: &[&Polynomial],
    order: MonomialOrder,
    deadline: Option<Instant>,
) -> Option<Polynomial> {
    let nvars = f.nvars();
    let mut iterations = 0u32;
    let mut terms: Vec<Term> = f.terms().to_vec();
    // terms[..done] are irreducible; the rest is still being processed.
    let mut done = 0;
    while done < terms.len() {
        let (m, c) = &terms[done];
        let divisor = basis.iter().find(|g| g.leading_monomial().unwrap().divides(m));
        match divisor {
            None => done += 1,
            Some(g) => {
                iterations += 1;
                if iterations.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() > d) {
                    return None;
                }
                let q = g.leading_monomial().unwrap().quotient_of(m).unwrap();
                let factor = c / g.leading_coeff().unwrap();
                let tail = merge_sub(&terms[done + 1..], &factor, &q, &g.terms()[1..], order);
                terms.truncate(done);
                terms.extend(tail);
            }
        }
    }
    Some(Polynomial::from_sorted_terms(nvars, order, terms))
}

/// `a - c * m * b` for descending term lists.
fn merge_sub(a: &[Term], c: &Rational, m: &Monomial, b: &[Term], order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(bm, bc)| (bm.mul(m), bc * c));
    let mut nb = bi.next();
    while i < a.len() {
        let Some((bm, bc)) = &nb else { break };
        match order.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm.clone(), -bc));
                nb = bi.next();
            }
            Ordering::Equal => {
                let s = &a[i].1 - bc;
                if !s.is_zero() {
                    out.push((bm.clone(), s));
                }
                i += 1;
                nb = bi.next();
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    if let Some((bm, bc)) = nb {
        out.push((bm, -bc));
    }
    out.extend(bi.map(|(bm, bc)| (bm, -bc)));
    out
}

/// Turns a Gröbner basis into the reduced one, sorted by increasing leading monomial.
pub(crate) fn interreduce(mut g: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    g.retain(|p| !p.is_zero());
    g.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in g {
        let lm = p.leading_monomial().unwrap();
        if !minimal.iter().any(|q| q.leading_monomial().unwrap().divides(lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Polynomial> =
            minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, q)| q).collect();
        out.push(reduce(&minimal[k], &others, order).monic());
    }
    out
}

/// True when every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], order: MonomialOrder) -> bool {
    let refs: Vec<&Polynomial> = basis.iter().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lcm = basis[i].leading_monomial().unwrap().lcm(basis[j].leading_monomial().unwrap());
            let s = s_polynomial(&basis[i], &basis[j], &lcm);
            if !reduce(&s, &refs, order).is_zero() {
                return false;
            }
        }
    }
    true
}
