//! Wasserstein balls, Lipschitz polytopes and their face lattices.

mod dd;
mod lattice;

use serde::{Deserialize, Serialize};

use crate::exact::{dot, primitive_integer, RatMatrix, Rational};
use crate::metric::FiniteMetric;

pub use dd::{extreme_rays, Ray};
pub use lattice::{face_functional, face_functional_weighted, face_lattice, face_span, Face, FaceJson, FaceLattice};

/// Convex hull of finitely many points in `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    pub ambient: usize,
    pub vertices: Vec<Vec<Rational>>,
}

/// `{x : E x = e, A x <= b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolytope {
    pub ambient: usize,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl HPolytope {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|(a, b)| &dot(a, x) == b)
            && self.inequalities.iter().all(|(a, b)| &dot(a, x) <= b)
    }

    /// Indices of inequalities tight at `x`.
    pub fn tight(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&k| {
                let (a, b) = &self.inequalities[k];
                &dot(a, x) == b
            })
            .collect()
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Orthogonal projection of `v` onto the row space of `basis`.
fn project_onto_rows(basis: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    let gram = basis.mul(&basis.transpose()).unwrap();
    let rhs = basis.mul_vec(v);
    let c = gram.solve(&rhs).expect("Gram matrix of a basis is invertible");
    basis.transpose().mul_vec(&c)
}

/// Affine hull data: base point, reduced basis of directions and its pivot columns.
struct AffineHull {
    base: Vec<Rational>,
    basis: RatMatrix,
    pivots: Vec<usize>,
}

fn affine_hull(points: &[Vec<Rational>]) -> AffineHull {
    let base = points[0].clone();
    let dirs: Vec<Vec<Rational>> = points.iter().map(|p| sub(p, &base)).collect();
    let (r, pivots) = RatMatrix::from_rows(dirs).unwrap().rref();
    let rows: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    let basis = if rows.is_empty() {
        RatMatrix::zeros(0, base.len())
    } else {
        RatMatrix::from_rows(rows).unwrap()
    };
    AffineHull { base, basis, pivots }
}

/// Facet inequalities (irredundant, primitive integer normals lying in the
/// direction space of the affine hull) and equalities of the affine hull.
pub fn vrep_to_hrep(p: &VPolytope) -> HPolytope {
    assert!(!p.vertices.is_empty(), "empty V-polytope");
    let n = p.ambient;
    let hull = affine_hull(&p.vertices);
    let r = hull.pivots.len();

    let equalities: Vec<(Vec<Rational>, Rational)> = if r == 0 {
        (0..n)
            .map(|k| {
                let mut e = vec![Rational::zero(); n];
                e[k] = Rational::one();
                (e, hull.base[k].clone())
            })
            .collect()
    } else {
        hull.basis
            .kernel_basis()
            .into_iter()
            .map(|eta| {
                let eta = primitive_integer(&eta);
                let rhs = dot(&eta, &hull.base);
                (eta, rhs)
            })
            .collect()
    };
    if r == 0 {
        return HPolytope { ambient: n, equalities, inequalities: Vec::new() };
    }

    // Inequalities b - a.z >= 0 for every point, as a cone in (b, -a).
    let coords: Vec<Vec<Rational>> = p
        .vertices
        .iter()
        .map(|v| hull.pivots.iter().map(|&c| &v[c] - &hull.base[c]).collect())
        .collect();
    let rows: Vec<Vec<Rational>> = coords
        .iter()
        .map(|z| std::iter::once(Rational::one()).chain(z.iter().cloned()).collect())
        .collect();
    let rays = extreme_rays(&rows, r + 1);

    let mut inequalities: Vec<(Vec<Rational>, Rational)> = rays
        .iter()
        .map(|ray| {
            let mut alpha = vec![Rational::zero(); n];
            for (k, &c) in hull.pivots.iter().enumerate() {
                alpha[c] = -&ray.vector[k + 1];
            }
            let alpha = primitive_integer(&project_onto_rows(&hull.basis, &alpha));
            let rhs = p.vertices.iter().map(|v| dot(&alpha, v)).max().unwrap();
            (alpha, rhs)
        })
        .collect();
    inequalities.sort();
    inequalities.dedup();
    HPolytope { ambient: n, equalities, inequalities }
}

/// Vertices of a bounded H-polytope, sorted lexicographically.
///
/// Panics when the polyhedron is empty or unbounded.
pub fn hrep_to_vrep(h: &HPolytope) -> VPolytope {
    let n = h.ambient;
    let (x0, kernel) = if h.equalities.is_empty() {
        let id: Vec<Vec<Rational>> = RatMatrix::identity(n).to_rows();
        (vec![Rational::zero(); n], id)
    } else {
        let e = RatMatrix::from_rows(h.equalities.iter().map(|(a, _)| a.clone()).collect()).unwrap();
        let rhs: Vec<Rational> = h.equalities.iter().map(|(_, b)| b.clone()).collect();
        (e.solve(&rhs).expect("inconsistent equalities"), e.kernel_basis())
    };
    let r = kernel.len();
    if r == 0 {
        assert!(h.contains(&x0), "empty polytope");
        return VPolytope { ambient: n, vertices: vec![x0] };
    }
    // Cone in (t, z): t*b' - a'.z >= 0 and t >= 0.
    let mut rows: Vec<Vec<Rational>> = h
        .inequalities
        .iter()
        .map(|(a, b)| {
            let bp = b - &dot(a, &x0);
            std::iter::once(bp).chain(kernel.iter().map(|k| -&dot(a, k))).collect()
        })
        .collect();
    let mut t_row = vec![Rational::zero(); r + 1];
    t_row[0] = Rational::one();
    rows.push(t_row);
    let rays = extreme_rays(&rows, r + 1);
    let mut vertices: Vec<Vec<Rational>> = rays
        .iter()
        .map(|ray| {
            assert!(ray.vector[0].is_positive(), "polyhedron is unbounded");
            let t = ray.vector[0].recip();
            let mut x = x0.clone();
            for (k, kv) in kernel.iter().enumerate() {
                let zk = &ray.vector[k + 1] * &t;
                for (xi, ki) in x.iter_mut().zip(kv) {
                    *xi += &(&zk * ki);
                }
            }
            x
        })
        .collect();
    vertices.sort();
    VPolytope { ambient: n, vertices }
}

/// `(e_i - e_j) / d_ij` for every ordered pair `i != j`, in lexicographic pair order.
pub fn ball_candidates(m: &FiniteMetric) -> Vec<((usize, usize), Vec<Rational>)> {
    let n = m.n();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let inv = m.dist(i, j).recip();
            let mut v = vec![Rational::zero(); n];
            v[i] = inv.clone();
            v[j] = -&inv;
            out.push(((i, j), v));
        }
    }
    out
}

/// Ordered pairs `(i, j)` whose point `(e_i - e_j)/d_ij` is a vertex of the ball.
pub fn ball_vertex_pairs(m: &FiniteMetric) -> Vec<(usize, usize)> {
    let cands = ball_candidates(m);
    let all = VPolytope { ambient: m.n(), vertices: cands.iter().map(|c| c.1.clone()).collect() };
    let h = vrep_to_hrep(&all);
    let dim = m.n() - 1;
    cands
        .iter()
        .filter(|(_, v)| {
            let tight = h.tight(v);
            if tight.len() < dim {
                return false;
            }
            let normals: Vec<Vec<Rational>> = tight.iter().map(|&k| h.inequalities[k].0.clone()).collect();
            RatMatrix::from_rows(normals).unwrap().rank() == dim
        })
        .map(|(ij, _)| *ij)
        .collect()
}

/// Unit ball of the Wasserstein norm: the hull-irredundant points `(e_i - e_j)/d_ij`.
pub fn wasserstein_ball(m: &FiniteMetric) -> VPolytope {
    let n = m.n();
    let vertices = ball_vertex_pairs(m)
        .into_iter()
        .map(|(i, j)| {
            let inv = m.dist(i, j).recip();
            let mut v = vec![Rational::zero(); n];
            v[i] = inv.clone();
            v[j] = -&inv;
            v
        })
        .collect();
    VPolytope { ambient: n, vertices }
}

/// `{x : sum x = 0, x_i - x_j <= d_ij}` keeping only facet-defining pairs.
pub fn lipschitz_polytope(m: &FiniteMetric) -> HPolytope {
    let n = m.n();
    let inequalities = ball_vertex_pairs(m)
        .into_iter()
        .map(|(i, j)| {
            let mut a = vec![Rational::zero(); n];
            a[i] = Rational::one();
            a[j] = Rational::from_int(-1);
            (a, m.dist(i, j).clone())
        })
        .collect();
    HPolytope { ambient: n, equalities: vec![(vec![Rational::one(); n], Rational::zero())], inequalities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{discrete_metric, l1_metric};

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn segment_in_plane() {
        let p = VPolytope { ambient: 2, vertices: vec![vec![q(1), q(-1)], vec![q(-1), q(1)]] };
        let h = vrep_to_hrep(&p);
        assert_eq!(h.inequalities.len(), 2);
        assert_eq!(h.equalities.len(), 1);
        assert_eq!(hrep_to_vrep(&h).vertices.len(), 2);
    }

    #[test]
    fn lipschitz_segment() {
        let h = lipschitz_polytope(&discrete_metric(2));
        let v = hrep_to_vrep(&h);
        let half = Rational::new(1, 2);
        assert_eq!(v.vertices, vec![vec![-&half, half.clone()], vec![half.clone(), -&half]]);
    }

    #[test]
    fn ball_vertex_counts() {
        assert_eq!(wasserstein_ball(&discrete_metric(4)).vertices.len(), 12);
        assert_eq!(wasserstein_ball(&l1_metric(5)).vertices.len(), 8);
        let h = lipschitz_polytope(&l1_metric(3));
        assert_eq!(h.inequalities.len(), 4);
        assert!(h.inequalities.iter().all(|(_, b)| *b == q(1)));
    }

    #[test]
    fn cuboctahedron_facets() {
        let h = vrep_to_hrep(&wasserstein_ball(&discrete_metric(4)));
        assert_eq!(h.inequalities.len(), 14);
        let dual = hrep_to_vrep(&lipschitz_polytope(&discrete_metric(4)));
        assert_eq!(dual.vertices.len(), 14);
    }
}
