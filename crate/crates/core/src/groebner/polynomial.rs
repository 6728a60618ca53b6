use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::exact::{denominator_lcm, numerator_gcd, Rational};

use super::monomial::{Monomial, MonomialOrder};

pub type Term = (Monomial, Rational);

/// Sparse polynomial over `Q`. Terms are kept strictly decreasing under
/// `order` and never carry a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Polynomial { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Rational) -> Self {
        let mut p = Self::zero(nvars, order);
        if !c.is_zero() {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn var(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        Polynomial { nvars, order, terms: vec![(Monomial::var(nvars, i), Rational::one())] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, order: MonomialOrder, mut terms: Vec<Term>) -> Self {
        terms.retain(|(m, c)| {
            debug_assert_eq!(m.nvars(), nvars);
            !c.is_zero()
        });
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc += &c;
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((m, c)),
            }
        }
        Polynomial { nvars, order, terms: out }
    }

    /// Wraps terms that are already strictly decreasing with nonzero coefficients.
    pub(crate) fn from_sorted_terms(nvars: usize, order: MonomialOrder, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial { nvars, order, terms }
    }

    /// Linear form `sum coeffs[i] * x_i + constant`.
    pub fn linear(order: MonomialOrder, coeffs: &[Rational], constant: &Rational) -> Self {
        let n = coeffs.len();
        let mut terms: Vec<Term> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(n, i), c.clone()))
            .collect();
        if !constant.is_zero() {
            terms.push((Monomial::one(n), constant.clone()));
        }
        Self::from_terms(n, order, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// Re-sorts the terms under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { nvars: self.nvars, order, terms }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.merge_scaled(other, &Rational::one(), None)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.merge_scaled(other, &Rational::from_int(-1), None)
    }

    /// `self - c * m * g`, the elementary reduction step.
    pub fn sub_mul_term(&self, c: &Rational, m: &Monomial, g: &Polynomial) -> Polynomial {
        self.merge_scaled(g, &-c, Some(m))
    }

    /// `self + c * m * other` by a single merge pass.
    fn merge_scaled(&self, other: &Polynomial, c: &Rational, m: Option<&Monomial>) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        debug_assert_eq!(self.order, other.order);
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(bm, bc)| {
            let mm = match m {
                Some(m) => bm.mul(m),
                None => bm.clone(),
            };
            (mm, bc * c)
        });
        let mut next_b = b.next();
        loop {
            match (a.peek(), &next_b) {
                (None, None) => break,
                (Some(_), None) => {
                    out.extend(a.by_ref().cloned());
                    break;
                }
                (None, Some(_)) => {
                    out.push(next_b.take().unwrap());
                    out.extend(b.by_ref());
                    break;
                }
                (Some((am, ac)), Some((bm, bc))) => match order.cmp(am, bm) {
                    Ordering::Greater => {
                        out.push(a.next().unwrap().clone());
                    }
                    Ordering::Less => {
                        out.push(next_b.take().unwrap());
                        next_b = b.next();
                    }
                    Ordering::Equal => {
                        let s = ac + bc;
                        if !s.is_zero() {
                            out.push((am.clone(), s));
                        }
                        a.next();
                        next_b = b.next();
                    }
                },
            }
        }
        Polynomial { nvars: self.nvars, order, terms: out }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Self::zero(self.nvars, self.order);
        for (m, c) in &small.terms {
            acc = acc.merge_scaled(big, c, Some(m));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::constant(self.nvars, self.order, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Integer polynomial with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let l = Rational::from_bigint(denominator_lcm(self.terms.iter().map(|t| &t.1)));
        let scaled = self.scale(&l);
        let g = Rational::from_bigint(numerator_gcd(scaled.terms.iter().map(|t| &t.1)));
        let mut p = scaled.scale(&g.recip());
        if p.leading_coeff().is_some_and(Rational::is_negative) {
            p = p.neg();
        }
        p
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut exps: Vec<u16> = m.exps().to_vec();
                exps[var] -= 1;
                (Monomial::from_exps(exps), c * &Rational::from_int(e as i64))
            })
            .collect();
        Self::from_terms(self.nvars, self.order, terms)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in m.support() {
                t = &t * &point[i].pow(m.exp(i) as u32);
            }
            acc += &t;
        }
        acc
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.support().fold(c.to_f64(), |acc, i| acc * point[i].powi(m.exp(i) as i32))
            })
            .sum()
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one ring.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let (nv, ord) = images
            .first()
            .map(|p| (p.nvars, p.order))
            .unwrap_or((0, self.order));
        let mut acc = Self::zero(nv, ord);
        for (m, c) in &self.terms {
            let mut t = Self::constant(nv, ord, c.clone());
            for i in m.support() {
                t = t.mul(&images[i].pow(m.exp(i) as u32));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, order: MonomialOrder, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u16; nvars];
                for i in m.support() {
                    exps[map[i]] += m.exp(i);
                }
                (Monomial::from_exps(exps), c.clone())
            })
            .collect();
        Self::from_terms(nvars, order, terms)
    }

    /// Drops variables not listed in `keep`; the polynomial must not involve them.
    pub fn restrict(&self, keep: &[usize], order: MonomialOrder) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.support().all(|i| keep.contains(&i)));
                (Monomial::from_exps(keep.iter().map(|&i| m.exp(i))), c.clone())
            })
            .collect();
        Self::from_terms(keep.len(), order, terms)
    }

    /// For a polynomial of degree at most one: its variable coefficients and constant term.
    pub fn as_linear(&self) -> Option<(Vec<Rational>, Rational)> {
        let mut coeffs = vec![Rational::zero(); self.nvars];
        let mut constant = Rational::zero();
        for (m, c) in &self.terms {
            match m.degree() {
                0 => constant = c.clone(),
                1 => coeffs[m.support().next().unwrap()] = c.clone(),
                _ => return None,
            }
        }
        Some((coeffs, constant))
    }

    /// Human-readable form with `^` powers and explicit `*`, e.g. `216*p3^3-540*p3^2+18*p3-1`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                s.push('-');
            } else if k > 0 {
                s.push('+');
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for i in m.support() {
                let e = m.exp(i);
                if e == 1 {
                    factors.push(names[i].clone());
                } else {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}
