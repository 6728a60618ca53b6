//! Integer kernels and the two toric-ideal routes.

use crate::exact::Rational;
use crate::groebner::{
    eliminate, saturate_by_all_variables, Budget, GroebnerError, Ideal, Monomial, MonomialOrder, Polynomial,
    Ring,
};

/// Z-basis of `{u in Z^n : A u = 0}` from a unimodular column reduction of `A`.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    // Columns of u track the column operations applied to m.
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut piv = 0;
    for r in 0..d {
        if piv == n {
            break;
        }
        loop {
            // Smallest nonzero entry in row r among columns piv.. becomes the pivot.
            let best = (piv..n).filter(|&c| m[r][c] != 0).min_by_key(|&c| m[r][c].abs());
            let Some(b) = best else { break };
            swap(&mut m, &mut u, piv, b);
            let mut done = true;
            for c in piv + 1..n {
                if m[r][c] != 0 {
                    let f = m[r][c].div_euclid(m[r][piv]);
                    col_op(&mut m, &mut u, c, piv, f);
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    let mut basis: Vec<Vec<i64>> = (piv..n)
        .map(|c| u.iter().map(|row| i64::try_from(row[c]).expect("kernel entry overflow")).collect())
        .collect();
    size_reduce(&mut basis);
    basis
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Pairwise reduction `b_i <- b_i ± b_j` while it shortens the L1 norm.
fn size_reduce(basis: &mut [Vec<i64>]) {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                for s in [1i64, -1] {
                    let cand: Vec<i64> = basis[i].iter().zip(&basis[j]).map(|(x, y)| x + s * y).collect();
                    if l1(&cand) < l1(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
    for v in basis.iter_mut() {
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// `p^{u+} - p^{u-}`.
pub fn binomial(ring: &Ring, u: &[i64]) -> Polynomial {
    let plus = Monomial::from_exps(u.iter().map(|&x| x.max(0) as u16));
    let minus = Monomial::from_exps(u.iter().map(|&x| (-x).max(0) as u16));
    Polynomial::from_terms(
        ring.nvars(),
        ring.order(),
        vec![(plus, Rational::one()), (minus, Rational::from_int(-1))],
    )
}

/// Substitutes `p_j -> p_j / lambda_j` and clears denominators.
pub fn apply_scaling(p: &Polynomial, scaling: &[Rational]) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut coef = c.clone();
            for j in m.support() {
                coef = &coef / &scaling[j].pow(m.exp(j) as u32);
            }
            (m.clone(), coef)
        })
        .collect();
    Polynomial::from_terms(p.nvars(), p.order(), terms).primitive()
}

/// Lattice route: kernel binomials saturated by every variable.
pub fn toric_ideal_lattice(
    a: &[Vec<i64>],
    scaling: &[Rational],
    ring: &Ring,
    budget: &Budget,
) -> Result<Ideal, GroebnerError> {
    let kernel = integer_kernel(a);
    let grevlex = ring.with_order(MonomialOrder::Grevlex);
    let pre = Ideal::new(grevlex.clone(), kernel.iter().map(|u| binomial(&grevlex, u)));
    let sat = saturate_by_all_variables(&pre, budget)?;
    let gb = sat.groebner(budget)?;
    let gens: Vec<Polynomial> = gb.polys().iter().map(|g| apply_scaling(g, scaling)).collect();
    Ok(Ideal::new(ring.clone(), gens))
}

/// Elimination route: `p_j θ^{a_j-} - λ_j θ^{a_j+}` and `w Πθ - 1`, eliminating θ and w.
pub fn toric_ideal_elimination(
    a: &[Vec<i64>],
    scaling: &[Rational],
    ring: &Ring,
    budget: &Budget,
) -> Result<Ideal, GroebnerError> {
    let d = a.len();
    let n = ring.nvars();
    let mut names: Vec<String> = (0..d).map(|i| format!("_th{i}")).collect();
    names.push("_w".into());
    names.extend(ring.names().iter().cloned());
    let big = Ring::new(names, MonomialOrder::Grevlex);
    let total = big.nvars();
    let mut gens = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut plus = vec![0u16; total];
        let mut minus = vec![0u16; total];
        for i in 0..d {
            let e = a[i][j];
            if e > 0 {
                plus[i] = e as u16;
            } else {
                minus[i] = (-e) as u16;
            }
        }
        minus[d + 1 + j] += 1;
        gens.push(Polynomial::from_terms(
            total,
            big.order(),
            vec![
                (Monomial::from_exps(minus), Rational::one()),
                (Monomial::from_exps(plus), -&scaling[j]),
            ],
        ));
    }
    let mut wt = vec![1u16; d + 1];
    wt.resize(total, 0);
    gens.push(big.monomial(&wt).sub(&big.one()));
    let elim = eliminate(&Ideal::new(big, gens), &(0..=d).collect::<Vec<_>>(), budget)?;
    let gb = elim.with_order(MonomialOrder::Grevlex).groebner(budget)?;
    let out: Vec<Polynomial> = gb.polys().iter().map(Polynomial::primitive).collect();
    Ok(Ideal::new(ring.clone(), out.into_iter().map(|g| {
        Polynomial::from_terms(n, ring.order(), g.into_terms())
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(a: &[Vec<i64>], u: &[i64]) -> Vec<i64> {
        a.iter().map(|row| row.iter().zip(u).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn kernel_is_saturated() {
        let a = vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for u in &k {
            assert_eq!(apply(&a, u), vec![0, 0]);
        }
        // The 2x2 minors of the basis have gcd 1, so the lattice is saturated.
        let minors: Vec<i64> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| k[0][i] * k[1][j] - k[0][j] * k[1][i])
            .collect();
        let g = minors.iter().fold(0i64, |g, &m| num_integer::gcd(g, m));
        assert_eq!(g, 1);
    }

    #[test]
    fn twisted_cubic_both_routes() {
        let a = vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]];
        let scaling: Vec<Rational> = [1, 3, 3, 1].iter().map(|&x| Rational::from_int(x)).collect();
        let ring = Ring::with_prefix("p", 4, MonomialOrder::Grevlex);
        let b = Budget::unlimited();
        let lat = toric_ideal_lattice(&a, &scaling, &ring, &b).unwrap();
        let eli = toric_ideal_elimination(&a, &scaling, &ring, &b).unwrap();
        let g1 = lat.groebner(&b).unwrap();
        let g2 = eli.groebner(&b).unwrap();
        assert_eq!(g1, g2);
        for s in ["3*p0*p2-p1^2", "3*p1*p3-p2^2", "9*p0*p3-p1*p2"] {
            assert!(g1.contains(&ring.parse(s).unwrap()));
        }
        assert_eq!(g1.polys().len(), 3);
    }

    #[test]
    fn degenerate_matrices() {
        let ring = Ring::with_prefix("p", 2, MonomialOrder::Grevlex);
        let b = Budget::unlimited();
        let ones = [Rational::one(), Rational::one()];
        // Full-rank A: the closure is all of P^1.
        let i = toric_ideal_lattice(&[vec![1, 1], vec![0, 1]], &ones, &ring, &b).unwrap();
        assert!(i.gens().is_empty());
        // A single all-ones row maps to the point [1:1].
        let i = toric_ideal_lattice(&[vec![1, 1]], &ones, &ring, &b).unwrap();
        assert_eq!(i.gens(), &[ring.parse("p0-p1").unwrap()]);
        let e = toric_ideal_elimination(&[vec![1, 1]], &ones, &ring, &b).unwrap();
        assert_eq!(e.gens(), i.gens());
    }
}
