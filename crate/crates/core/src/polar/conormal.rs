//! Conormal ideals and polar degrees by intersection with random linear spaces.

use crate::exact::Rational;
use crate::groebner::{
    determinant, jacobian, linear_substitution, minors, Arithmetic, Budget, GroebnerError, Ideal, MonomialOrder, Polynomial,
    Ring,
};
use crate::random::{coefficients, substream};
use crate::toric::ToricModel;

use super::{MultiDegree, PolarError};

/// How the conormal variety is cut out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConormalRoute {
    /// `I(X)`, the `(c+1)`-minors of the Jacobian stacked with `u`, localized at a `c`-minor.
    #[default]
    Jacobian,
    /// `I(X)` and `A (p * u) = 0`, localized at the product of the coordinates.
    Toric,
}

/// Conormal ideal in `p_0..p_n, u_0..u_n` and a localizing variable `_z`.
///
/// The last generator is `_z m - 1` for the localizing polynomial `m`, so the
/// zero set is the part of the conormal variety where `m` does not vanish.
#[derive(Clone, Debug)]
pub struct ConormalIdeal {
    pub ideal: Ideal,
    pub n: usize,
}

impl ConormalIdeal {
    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }
}

fn conormal_ring(model_ring: &Ring) -> Ring {
    let mut names: Vec<String> = model_ring.names().to_vec();
    names.extend((0..model_ring.nvars()).map(|i| format!("u{i}")));
    names.push("_z".into());
    Ring::new(names, MonomialOrder::Grevlex)
}

fn embed_p(ring: &Ring, f: &Polynomial, np: usize) -> Polynomial {
    f.embed(ring.nvars(), ring.order(), &(0..np).collect::<Vec<_>>())
}

fn dedup_up_to_sign(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::with_capacity(polys.len());
    for f in polys {
        let f = f.primitive();
        if !out.iter().any(|g| *g == f || g.neg() == f) {
            out.push(f);
        }
    }
    out
}

/// First `c`-minor of the Jacobian outside the ideal, by lexicographic row and column subsets, with its rows.
fn nonvanishing_minor(model: &ToricModel, c: usize, budget: &Budget) -> Result<(Vec<usize>, Polynomial), GroebnerError> {
    let gb = model.ideal.groebner(budget)?;
    let jac = jacobian(model.ideal.gens());
    let ncols = model.n();
    let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(s) = stack.pop() {
            if s.len() == k {
                out.push(s);
                continue;
            }
            let start = s.last().map_or(0, |&x| x + 1);
            for x in (start..n).rev() {
                let mut t = s.clone();
                t.push(x);
                stack.push(t);
            }
        }
        out
    };
    for rows in subsets(jac.len(), c) {
        for cols in subsets(ncols, c) {
            let sub: Vec<Vec<Polynomial>> =
                rows.iter().map(|&r| cols.iter().map(|&k| jac[r][k].clone()).collect()).collect();
            let d = determinant(&sub);
            if !d.is_zero() && !gb.contains(&d) {
                return Ok((rows, d));
            }
        }
    }
    panic!("every {c}-minor of the Jacobian lies in the ideal; codimension is inconsistent")
}

/// Conormal ideal from the Jacobian of the model's generators.
///
/// Where the localizing minor `m` is nonzero the Jacobian has rank exactly `c`
/// and its rows through `m` span the row space, so only those rows are
/// stacked with `u`.
pub fn conormal_ideal(model: &ToricModel, budget: &Budget) -> Result<ConormalIdeal, GroebnerError> {
    let np = model.n();
    let n = np - 1;
    let c = n - model.dim_projective;
    let ring = conormal_ring(model.ring());
    let z = ring.var(2 * np);
    let gens: Vec<Polynomial> = model.ideal.gens().iter().map(|g| embed_p(&ring, g, np)).collect();
    let mut all = gens.clone();
    if c == 0 {
        // X is all of P^n: the only tangent hyperplane condition is u = 0.
        all.extend((0..np).map(|i| ring.var(np + i)));
        all.push(z.sub(&ring.one()));
        return Ok(ConormalIdeal { ideal: Ideal::new(ring, all), n });
    }
    let jac = jacobian(&gens);
    let u: Vec<Polynomial> = (0..np).map(|i| ring.var(np + i)).collect();
    let (rows, m) = nonvanishing_minor(model, c, budget)?;
    let mut stacked: Vec<Vec<Polynomial>> = rows.iter().map(|&r| jac[r][..np].to_vec()).collect();
    stacked.push(u);
    all.extend(dedup_up_to_sign(minors(&stacked, c + 1)));
    let m = embed_p(&ring, &m, np);
    all.push(z.mul(&m).sub(&ring.one()));
    Ok(ConormalIdeal { ideal: Ideal::new(ring, all), n })
}

/// Conormal ideal from the torus action: `u` annihilates `diag(p) A^T` on the torus.
pub fn toric_conormal_ideal(model: &ToricModel) -> ConormalIdeal {
    let np = model.n();
    let ring = conormal_ring(model.ring());
    let mut all: Vec<Polynomial> = model.ideal.gens().iter().map(|g| embed_p(&ring, g, np)).collect();
    for row in &model.a {
        let mut f = ring.zero();
        for (j, &a) in row.iter().enumerate() {
            if a != 0 {
                f = f.add(&ring.var(j).mul(&ring.var(np + j)).scale(&Rational::from_int(a)));
            }
        }
        all.push(f);
    }
    let prod = (0..np).fold(ring.one(), |acc, j| acc.mul(&ring.var(j)));
    all.push(ring.var(2 * np).mul(&prod).sub(&ring.one()));
    ConormalIdeal { ideal: Ideal::new(ring, all), n: np - 1 }
}

/// Number of points of the conormal variety on `L_1 x L_2` with `dim L_1 = n + 1 - j`, `dim L_2 = j`.
///
/// `L_1` is cut by `j - 1` random forms in `p`, `L_2` by `n - j` random forms in
/// `u`; one random affine chart per group dehomogenizes. Returns `None` when the
/// slice is not zero-dimensional, which signals a non-generic draw.
pub fn polar_degree_slice(
    con: &ConormalIdeal,
    j: usize,
    seed: u64,
    arithmetic: Arithmetic,
    budget: &Budget,
) -> Result<Option<u128>, GroebnerError> {
    let n = con.n;
    let np = n + 1;
    let ring = con.ring();
    let total = ring.nvars();
    let mut rng = substream(seed, j as u64);
    let mut eqs = Vec::new();
    let mut form = |offset: usize, constant: i64| {
        let mut coeffs = vec![Rational::zero(); total];
        for (k, c) in coefficients(&mut rng, np).into_iter().enumerate() {
            coeffs[offset + k] = c;
        }
        ring.linear(&coeffs, &Rational::from_int(constant))
    };
    for _ in 0..j - 1 {
        eqs.push(form(0, 0));
    }
    eqs.push(form(0, -1));
    for _ in 0..n - j {
        eqs.push(form(np, 0));
    }
    eqs.push(form(np, -1));
    let Some((sub, images)) = linear_substitution(ring, &eqs) else {
        return Ok(None);
    };
    let gens: Vec<Polynomial> = con.ideal.gens().iter().map(|g| g.compose(&images)).collect();
    match arithmetic.dimension_and_degree(&Ideal::new(sub, gens), budget)? {
        None => Ok(Some(0)),
        Some((0, d)) => Ok(Some(d)),
        Some(_) => Ok(None),
    }
}

#[derive(Clone, Debug)]
pub struct SlicingOptions {
    pub seed: u64,
    pub route: ConormalRoute,
    pub arithmetic: Arithmetic,
    pub budget: Budget,
}

impl Default for SlicingOptions {
    fn default() -> Self {
        SlicingOptions { seed: 1, route: ConormalRoute::Jacobian, arithmetic: Arithmetic::Modular, budget: Budget::unlimited() }
    }
}

/// Polar degrees by slicing, from `j = dim X + 1` downwards.
///
/// Each `delta_j` is counted for two seeds; a disagreement triggers one re-draw
/// of both, and a second disagreement is a genericity failure. The scan stops
/// after two consecutive zeros.
pub fn polar_degrees_slicing(model: &ToricModel, opts: &SlicingOptions) -> Result<MultiDegree, PolarError> {
    let con = match opts.route {
        ConormalRoute::Jacobian => conormal_ideal(model, &opts.budget)?,
        ConormalRoute::Toric => toric_conormal_ideal(model),
    };
    let dim = model.dim_projective;
    let mut delta = Vec::new();
    let mut zeros = 0;
    for j in (1..=dim + 1).rev() {
        let mut counts = Vec::new();
        let mut agreed = None;
        for attempt in 0..2u64 {
            let s1 = opts.seed.wrapping_add(1000 * attempt);
            let s2 = s1.wrapping_add(500);
            let (a, b) = rayon::join(
                || polar_degree_slice(&con, j, s1, opts.arithmetic, &opts.budget),
                || polar_degree_slice(&con, j, s2, opts.arithmetic, &opts.budget),
            );
            let (a, b) = (a?, b?);
            counts.extend(a.iter().chain(b.iter()).copied());
            if a.is_some() && a == b {
                agreed = a;
                break;
            }
        }
        let Some(d) = agreed else {
            return Err(PolarError::GenericityFailure { j, counts });
        };
        delta.push((j, d));
        zeros = if d == 0 { zeros + 1 } else { 0 };
        if zeros == 2 {
            break;
        }
    }
    Ok(MultiDegree::new(model.n() - 1, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{eliminate, homogeneous_degree};
    use crate::toric::{hirzebruch, scroll, IdealRoute};

    fn b() -> Budget {
        Budget::unlimited()
    }

    fn quartic() -> ToricModel {
        let a = vec![vec![1, 1, 1, 1, 1], vec![0, 1, 2, 3, 4]];
        let s = [1, 4, 6, 4, 1].iter().map(|&x| Rational::from_int(x)).collect();
        ToricModel::from_matrix(a, Some(s), IdealRoute::Lattice, &b()).unwrap()
    }

    fn slicing(m: &ToricModel, seed: u64, route: ConormalRoute) -> MultiDegree {
        polar_degrees_slicing(m, &SlicingOptions { seed, route, ..Default::default() }).unwrap()
    }

    #[test]
    fn quartic_curve_both_routes() {
        let m = quartic();
        for route in [ConormalRoute::Jacobian, ConormalRoute::Toric] {
            let h = slicing(&m, 7, route);
            assert_eq!(h.to_string(), "6s^4t + 4s^3t^2", "{route:?}");
        }
    }

    #[test]
    fn seed_independence() {
        let m = hirzebruch(1, 2).unwrap();
        let expect = MultiDegree::new(4, [(1, 3), (2, 4), (3, 3)]);
        for seed in [1, 2, 3] {
            assert_eq!(slicing(&m, seed, ConormalRoute::Jacobian), expect);
        }
        assert_eq!(slicing(&m, 11, ConormalRoute::Toric), expect);
    }

    #[test]
    fn scrolls_match_the_formula() {
        for ns in [&[1, 2][..], &[1, 3], &[2, 2], &[2, 3], &[1, 1, 1]] {
            let m = scroll(ns).unwrap();
            let want = crate::polar::scroll_polar_degrees(ns).unwrap();
            assert_eq!(slicing(&m, 2, ConormalRoute::Jacobian), want, "{ns:?}");
            assert_eq!(slicing(&m, 9, ConormalRoute::Toric), want, "{ns:?}");
        }
    }

    #[test]
    fn top_degree_is_the_model_degree() {
        let m = scroll(&[3]).unwrap();
        let h = slicing(&m, 5, ConormalRoute::Toric);
        assert_eq!(h.get(2), homogeneous_degree(&m.ideal, &b()).unwrap());
        assert_eq!(h.get(1), 4);
    }

    #[test]
    fn quadric_surface_is_self_dual() {
        let m = hirzebruch(1, 1).unwrap();
        let con = conormal_ideal(&m, &b()).unwrap();
        let ring = con.ring().clone();
        let elim: Vec<usize> = (0..4).chain([8]).collect();
        let dual = eliminate(&con.ideal, &elim, &b()).unwrap();
        let gb = dual.groebner(&b()).unwrap();
        assert_eq!(gb.polys().len(), 1);
        assert_eq!(gb.polys()[0], dual.ring().parse("u1*u2-u0*u3").unwrap());
        assert!(dual.ring().names().iter().all(|n| n.starts_with('u')));
        assert_eq!(ring.nvars(), 9);
        assert_eq!(slicing(&m, 3, ConormalRoute::Jacobian).coefficients(), vec![2, 2, 2]);
    }

    #[test]
    fn hyperplane_has_a_point_dual() {
        let a = vec![vec![1, 1, 1], vec![0, 1, 1]];
        let s = vec![Rational::one(), Rational::one(), Rational::from_int(2)];
        let m = ToricModel::from_matrix(a, Some(s), IdealRoute::Lattice, &b()).unwrap();
        assert_eq!(m.ideal.gens().len(), 1);
        let h = slicing(&m, 4, ConormalRoute::Jacobian);
        assert_eq!(h, MultiDegree::new(2, [(2, 1)]));
    }
}
