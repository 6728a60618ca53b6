//! Double description method for pointed polyhedral cones.

use fixedbitset::FixedBitSet;

use crate::exact::{dot, primitive_integer, RatMatrix, Rational};

/// Extreme ray of `{x : A x >= 0}` with the rows of `A` it satisfies with equality.
#[derive(Clone, Debug)]
pub struct Ray {
    pub vector: Vec<Rational>,
    pub zeros: FixedBitSet,
}

/// Extreme rays of the pointed cone `{x in Q^d : a_i . x >= 0}`.
///
/// The rows must have rank `d`. Constraints are inserted in index order after
/// an initial simplicial cone built from the first independent rows. Rays are
/// returned as primitive integer vectors, sorted lexicographically.
pub fn extreme_rays(rows: &[Vec<Rational>], d: usize) -> Vec<Ray> {
    let m = rows.len();
    // Greedy choice of d independent rows, in index order.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    for i in 0..m {
        let mut cand: Vec<Vec<Rational>> = basis.iter().map(|&b| rows[b].clone()).collect();
        cand.push(rows[i].clone());
        if RatMatrix::from_rows(cand).unwrap().rank() == basis.len() + 1 {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d, "cone is not pointed: constraint rank {} < {}", basis.len(), d);

    let ab = RatMatrix::from_rows(basis.iter().map(|&b| rows[b].clone()).collect()).unwrap();
    let inv = ab.inverse().expect("independent rows");
    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let mut zeros = FixedBitSet::with_capacity(m);
            for (j, &b) in basis.iter().enumerate() {
                if j != k {
                    zeros.insert(b);
                }
            }
            Ray { vector: primitive_integer(&inv.column(k)), zeros }
        })
        .collect();
    let mut added = FixedBitSet::with_capacity(m);
    for &b in &basis {
        added.insert(b);
    }

    for (i, a) in rows.iter().enumerate() {
        if added.contains(i) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.vector)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        added.insert(i);
        if neg.is_empty() {
            for (k, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    rays[k].zeros.insert(i);
                }
            }
            continue;
        }
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|t| t == p || t == q || !common.is_subset(&rays[t].zeros));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[q]: combine so the new constraint is tight.
                let v: Vec<Rational> = rays[q]
                    .vector
                    .iter()
                    .zip(&rays[p].vector)
                    .map(|(x, y)| &(x * &vals[p]) - &(y * &vals[q]))
                    .collect();
                common.insert(i);
                new_rays.push(Ray { vector: primitive_integer(&v), zeros: common });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                r.zeros.insert(i);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }
    rays.sort_by(|a, b| a.vector.cmp(&b.vector));
    rays
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()
    }

    #[test]
    fn orthant() {
        let r = extreme_rays(&rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 3);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn square_cone() {
        // Cone over the square [-1,1]^2 at height t: t >= |x|, t >= |y|.
        let r = extreme_rays(&rows(&[&[1, 1, 0], &[1, -1, 0], &[1, 0, 1], &[1, 0, -1]]), 3);
        let v: Vec<Vec<Rational>> = r.into_iter().map(|r| r.vector).collect();
        assert_eq!(v.len(), 4);
        for (x, y) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert!(v.contains(&vec![Rational::one(), Rational::from_int(x), Rational::from_int(y)]));
        }
    }

    #[test]
    fn redundant_constraints_are_harmless() {
        // Triangle cone with a duplicated and a redundant constraint.
        let r = extreme_rays(
            &rows(&[&[1, 1, 0], &[1, 0, 1], &[1, -1, -1], &[2, 2, 0], &[3, 1, 1]]),
            3,
        );
        assert_eq!(r.len(), 3);
    }
}
