//! Hilbert series, dimension and degree of monomial ideals.

use super::monomial::Monomial;

/// Integer polynomial in `t`, lowest degree first.
pub type SeriesNumerator = Vec<i128>;

/// Minimal generators of the monomial ideal spanned by `gens`, sorted by degree.
pub fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = gens.to_vec();
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.exps().cmp(b.exps())));
    v.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series `N(t) / (1-t)^n` of `k[x]/M`.
pub fn hilbert_numerator(gens: &[Monomial]) -> SeriesNumerator {
    numerator(minimalize(gens))
}

fn numerator(gens: Vec<Monomial>) -> SeriesNumerator {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(Monomial::is_one) {
        return vec![0];
    }
    if pairwise_coprime(&gens) {
        let mut acc = vec![1i128];
        for g in &gens {
            acc = mul_one_minus_t_pow(&acc, g.degree() as usize);
        }
        return acc;
    }
    let (var, exp) = pivot(&gens);
    let n = gens[0].nvars();
    let mut pe = vec![0u16; n];
    pe[var] = exp;
    let p = Monomial::from_exps(pe);

    let mut with_p = gens.clone();
    with_p.push(p.clone());
    let left = numerator(minimalize(&with_p));

    let quotient: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let gd = g.gcd(&p);
            gd.quotient_of(g).unwrap()
        })
        .collect();
    let right = numerator(minimalize(&quotient));

    let shift = exp as usize;
    let mut out = left;
    if out.len() < right.len() + shift {
        out.resize(right.len() + shift, 0);
    }
    for (k, c) in right.iter().enumerate() {
        out[k + shift] += c;
    }
    trim(out)
}

fn pairwise_coprime(gens: &[Monomial]) -> bool {
    let n = gens[0].nvars();
    let mut seen = vec![false; n];
    for g in gens {
        for i in g.support() {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    true
}

/// Variable occurring in the most generators, with the median of its positive exponents.
fn pivot(gens: &[Monomial]) -> (usize, u16) {
    let n = gens[0].nvars();
    let mut best = (0usize, 0usize);
    for i in 0..n {
        let count = gens.iter().filter(|g| g.exp(i) > 0).count();
        if count > best.1 {
            best = (i, count);
        }
    }
    let var = best.0;
    let mut exps: Vec<u16> = gens.iter().map(|g| g.exp(var)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let mut e = exps[(exps.len() - 1) / 2];
    // The pivot must not lie in the ideal, so stay below any pure power of `var`.
    if let Some(pure) = gens.iter().filter(|g| g.degree() == g.exp(var) as u32).map(|g| g.exp(var)).min() {
        e = e.min(pure - 1);
    }
    (var, e)
}

fn mul_one_minus_t_pow(p: &[i128], d: usize) -> Vec<i128> {
    let mut out = vec![0i128; p.len() + d];
    for (k, c) in p.iter().enumerate() {
        out[k] += c;
        out[k + d] -= c;
    }
    trim(out)
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Divides by `(1 - t)` as often as possible; returns the quotient and the count.
pub fn strip_one_minus_t(num: &[i128]) -> (Vec<i128>, usize) {
    let mut cur: Vec<i128> = num.to_vec();
    let mut k = 0;
    loop {
        if cur.iter().all(|&c| c == 0) {
            return (cur, k);
        }
        let at_one: i128 = cur.iter().sum();
        if at_one != 0 {
            return (cur, k);
        }
        // Synthetic division by (1 - t): q_j = sum_{i<=j} c_i.
        let mut q = Vec::with_capacity(cur.len() - 1);
        let mut run = 0i128;
        for c in &cur[..cur.len() - 1] {
            run += c;
            q.push(run);
        }
        cur = trim(q);
        k += 1;
    }
}

/// Krull dimension and degree of `k[x_0..x_{n-1}]/M`; the zero ring gives `None`.
pub fn dimension_and_degree(gens: &[Monomial], nvars: usize) -> Option<(usize, u128)> {
    let num = hilbert_numerator(gens);
    if num.iter().all(|&c| c == 0) {
        return None;
    }
    let (reduced, k) = strip_one_minus_t(&num);
    let deg: i128 = reduced.iter().sum();
    debug_assert!(deg > 0);
    Some((nvars - k, deg as u128))
}

/// Largest set of variables containing the support of no generator.
pub fn max_independent_set(gens: &[Monomial], nvars: usize) -> Option<Vec<usize>> {
    let mins = minimalize(gens);
    if mins.iter().any(Monomial::is_one) {
        return None;
    }
    let supports: Vec<u64> = mins
        .iter()
        .map(|g| g.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let mut best: u64 = 0;
    let mut best_size = 0u32;
    search(0, nvars, 0, &supports, &mut best, &mut best_size);
    Some((0..nvars).filter(|i| best & (1 << i) != 0).collect())
}

fn search(i: usize, n: usize, chosen: u64, supports: &[u64], best: &mut u64, best_size: &mut u32) {
    let size = chosen.count_ones();
    if size + (n - i) as u32 <= *best_size {
        return;
    }
    if i == n {
        *best = chosen;
        *best_size = size;
        return;
    }
    let with = chosen | (1 << i);
    if supports.iter().all(|&s| s & with != s) {
        search(i + 1, n, with, supports, best, best_size);
    }
    search(i + 1, n, chosen, supports, best, best_size);
}

/// Monomials outside the ideal, assuming it is zero-dimensional.
pub fn standard_monomials(gens: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    let mins = minimalize(gens);
    if mins.iter().any(Monomial::is_one) {
        return Some(Vec::new());
    }
    let mut bounds = vec![None; nvars];
    for g in &mins {
        let s: Vec<usize> = g.support().collect();
        if s.len() == 1 {
            bounds[s[0]] = Some(g.exp(s[0]));
        }
    }
    let bounds: Vec<u16> = bounds.into_iter().collect::<Option<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut e = vec![0u16; nvars];
    loop {
        let m = Monomial::from_exps(e.iter().copied());
        if !mins.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == nvars {
                return Some(out);
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}
