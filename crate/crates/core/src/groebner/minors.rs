use std::collections::HashMap;

use crate::exact::{RatMatrix, Rational};

use super::polynomial::Polynomial;
use super::ring::Ring;

/// Determinant of a square polynomial matrix by expansion over column subsets.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    assert!(m.iter().all(|r| r.len() == k), "matrix is not square");
    let rows: Vec<usize> = (0..k).collect();
    let cols: Vec<usize> = (0..k).collect();
    let mut memo = HashMap::new();
    let zero = m.first().map(|r| Polynomial::zero(r[0].nvars(), r[0].order()));
    match zero {
        None => panic!("determinant of an empty matrix"),
        Some(z) => det_rec(m, &rows, &cols, 0, &mut memo, &z),
    }
}

/// Determinant of rows `rows[depth..]` against the columns in `cols`.
fn det_rec(
    m: &[Vec<Polynomial>],
    rows: &[usize],
    cols: &[usize],
    depth: usize,
    memo: &mut HashMap<Vec<usize>, Polynomial>,
    zero: &Polynomial,
) -> Polynomial {
    if cols.is_empty() {
        return Polynomial::constant(zero.nvars(), zero.order(), Rational::one());
    }
    if let Some(p) = memo.get(cols) {
        return p.clone();
    }
    let r = rows[depth];
    let mut acc = zero.clone();
    for (pos, &c) in cols.iter().enumerate() {
        let e = &m[r][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = det_rec(m, rows, &rest, depth + 1, memo, zero);
        if sub.is_zero() {
            continue;
        }
        let t = e.mul(&sub);
        acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    memo.insert(cols.to_vec(), acc.clone());
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Nonzero `k`-minors; row subsets outer and column subsets inner, both lexicographic.
pub fn minors(m: &[Vec<Polynomial>], k: usize) -> Vec<Polynomial> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    if k == 0 || k > nrows || k > ncols {
        return Vec::new();
    }
    let zero = Polynomial::zero(m[0][0].nvars(), m[0][0].order());
    let mut out = Vec::new();
    for rows in subsets(nrows, k) {
        let mut memo = HashMap::new();
        for cols in subsets(ncols, k) {
            let d = det_rec(m, &rows, &cols, 0, &mut memo, &zero);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// Jacobian matrix: one row per polynomial.
pub fn jacobian(polys: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    polys.iter().map(Polynomial::gradient).collect()
}

/// Solves affine-linear equations for pivot variables and substitutes them away.
///
/// Returns the images of every original variable in the ring of the free
/// variables, or `None` when the equations are inconsistent.
pub fn linear_substitution(ring: &Ring, linear: &[Polynomial]) -> Option<(Ring, Vec<Polynomial>)> {
    let n = ring.nvars();
    let rows: Vec<Vec<Rational>> = linear
        .iter()
        .map(|f| {
            let (mut a, c) = f.as_linear().expect("equation is not affine-linear");
            a.push(-c);
            a
        })
        .collect();
    let (r, pivots) = if rows.is_empty() {
        (RatMatrix::zeros(0, n + 1), Vec::new())
    } else {
        RatMatrix::from_rows(rows).unwrap().rref()
    };
    if pivots.contains(&n) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let sub = Ring::new(free.iter().map(|&i| ring.names()[i].clone()), ring.order());
    let mut images: Vec<Polynomial> = vec![sub.zero(); n];
    for (k, &f) in free.iter().enumerate() {
        images[f] = sub.var(k);
    }
    for (row, &p) in pivots.iter().enumerate() {
        // x_p = rhs - sum over free columns.
        let mut coeffs = vec![Rational::zero(); free.len()];
        for (k, &f) in free.iter().enumerate() {
            coeffs[k] = -&r.row(row)[f];
        }
        images[p] = sub.linear(&coeffs, &r.row(row)[n]);
    }
    Some((sub, images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::MonomialOrder;

    #[test]
    fn determinants() {
        let r = Ring::with_prefix("x", 4, MonomialOrder::Grevlex);
        let v = r.vars();
        let m = vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]];
        assert_eq!(determinant(&m), r.parse("x0*x3-x1*x2").unwrap());
        let c = |k: i64| r.constant(Rational::from_int(k));
        let m = vec![
            vec![c(2), c(0), c(1)],
            vec![c(1), c(3), c(2)],
            vec![c(1), c(1), c(2)],
        ];
        assert_eq!(determinant(&m), c(6));
    }

    #[test]
    fn minor_counts() {
        let r = Ring::with_prefix("x", 6, MonomialOrder::Grevlex);
        let v = r.vars();
        let m = vec![v[0..3].to_vec(), v[3..6].to_vec()];
        let ms = minors(&m, 2);
        assert_eq!(ms.len(), 3);
        assert_eq!(ms[0], r.parse("x0*x4-x1*x3").unwrap());
        assert_eq!(minors(&m, 3).len(), 0);
        assert_eq!(subsets(4, 2).len(), 6);
    }

    #[test]
    fn substitution() {
        let r = Ring::with_prefix("x", 3, MonomialOrder::Grevlex);
        let eqs = vec![r.parse("x0+x1+x2-1").unwrap(), r.parse("x1-2*x2").unwrap()];
        let (sub, images) = linear_substitution(&r, &eqs).unwrap();
        assert_eq!(sub.names(), &["x2".to_string()]);
        for e in &eqs {
            assert!(e.compose(&images).is_zero());
        }
        assert!(linear_substitution(&r, &[r.parse("x0").unwrap(), r.parse("x0-1").unwrap()]).is_none());
    }
}
