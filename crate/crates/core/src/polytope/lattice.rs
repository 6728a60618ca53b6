use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{primitive_integer, RatMatrix, Rational};

use super::{vrep_to_hrep, HPolytope, VPolytope};

/// Proper nonempty face of a V-polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
    pub dim: usize,
    /// Vertices of the face forming a basis of their linear span.
    pub span_basis: Vec<Vec<Rational>>,
    /// Sum of the primitive outer normals of the facets containing the face.
    pub functional: Vec<Rational>,
    /// Indices into `FaceLattice::hrep().inequalities` of the facets containing the face.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    pub functional: Vec<Rational>,
    pub span: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    polytope: VPolytope,
    hrep: HPolytope,
    dim: usize,
    faces_by_dim: Vec<Vec<Face>>,
    /// `parents[d][k]`: indices into dimension `d + 1` of faces containing face `k` of dimension `d`.
    parents: Vec<Vec<Vec<usize>>>,
}

impl FaceLattice {
    pub fn polytope(&self) -> &VPolytope {
        &self.polytope
    }

    pub fn hrep(&self) -> &HPolytope {
        &self.hrep
    }

    /// Dimension of the polytope itself.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self, dim: usize) -> &[Face] {
        self.faces_by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces_by_dim.iter().flatten()
    }

    pub fn parents(&self, dim: usize, index: usize) -> &[usize] {
        &self.parents[dim][index]
    }

    /// Face counts `(f_0, ..., f_{dim-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(Vec::len).collect()
    }

    pub fn face_json(&self, face: &Face) -> FaceJson {
        FaceJson {
            dim: face.dim,
            vertices: face.vertex_indices.iter().map(|&i| self.polytope.vertices[i].clone()).collect(),
            functional: face.functional.clone(),
            span: face.span_basis.clone(),
        }
    }
}

fn affine_dim(points: &[&Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let rows: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    RatMatrix::from_rows(rows).unwrap().rank()
}

fn independent_subset(points: &[&Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut rank = 0;
    for p in points {
        let mut cand = chosen.clone();
        cand.push((*p).clone());
        let r = RatMatrix::from_rows(cand.clone()).unwrap().rank();
        if r > rank {
            chosen = cand;
            rank = r;
        }
    }
    chosen
}

/// All proper nonempty faces, as intersections of facet vertex sets.
pub fn face_lattice(p: &VPolytope) -> FaceLattice {
    let hrep = vrep_to_hrep(p);
    let nv = p.vertices.len();
    let all: Vec<&Vec<Rational>> = p.vertices.iter().collect();
    let dim = affine_dim(&all);

    let facet_sets: Vec<FixedBitSet> = hrep
        .inequalities
        .iter()
        .map(|(a, b)| {
            let mut s = FixedBitSet::with_capacity(nv);
            for (i, v) in p.vertices.iter().enumerate() {
                if &crate::exact::dot(a, v) == b {
                    s.insert(i);
                }
            }
            s
        })
        .collect();

    let mut seen: HashSet<FixedBitSet> = facet_sets.iter().cloned().collect();
    let mut frontier: Vec<FixedBitSet> = facet_sets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &facet_sets {
                let mut c = f.clone();
                c.intersect_with(g);
                if c.count_ones(..) > 0 && !seen.contains(&c) {
                    seen.insert(c.clone());
                    next.push(c);
                }
            }
        }
        frontier = next;
    }

    let normals: Vec<Vec<Rational>> = hrep.inequalities.iter().map(|(a, _)| a.clone()).collect();
    let mut faces_by_dim: Vec<Vec<Face>> = vec![Vec::new(); dim.max(1)];
    let mut sets: Vec<Vec<FixedBitSet>> = vec![Vec::new(); dim.max(1)];
    let mut all_sets: Vec<FixedBitSet> = seen.into_iter().collect();
    all_sets.sort_by(|a, b| a.ones().cmp(b.ones()));
    for s in all_sets {
        let idx: Vec<usize> = s.ones().collect();
        let pts: Vec<&Vec<Rational>> = idx.iter().map(|&i| &p.vertices[i]).collect();
        let d = affine_dim(&pts);
        let facets: Vec<usize> = (0..facet_sets.len()).filter(|&k| s.is_subset(&facet_sets[k])).collect();
        let mut sum = vec![Rational::zero(); p.ambient];
        for &k in &facets {
            for (x, y) in sum.iter_mut().zip(&normals[k]) {
                *x += y;
            }
        }
        let face = Face {
            vertex_indices: idx,
            dim: d,
            span_basis: independent_subset(&pts),
            functional: primitive_integer(&sum),
            facets,
        };
        faces_by_dim[d].push(face);
        sets[d].push(s);
    }

    let mut parents: Vec<Vec<Vec<usize>>> = Vec::with_capacity(faces_by_dim.len());
    for d in 0..faces_by_dim.len() {
        let up: Vec<Vec<usize>> = sets[d]
            .iter()
            .map(|s| match sets.get(d + 1) {
                Some(higher) => (0..higher.len()).filter(|&k| s.is_subset(&higher[k])).collect(),
                None => Vec::new(),
            })
            .collect();
        parents.push(up);
    }

    FaceLattice { polytope: p.clone(), hrep, dim, faces_by_dim, parents }
}

/// The face functional stored in the lattice: sum of primitive facet normals, made primitive.
pub fn face_functional(face: &Face, _lattice: &FaceLattice) -> Vec<Rational> {
    face.functional.clone()
}

/// Sum of the containing facets' normals plus a random positive combination of them.
pub fn face_functional_weighted<R: Rng>(face: &Face, lattice: &FaceLattice, rng: &mut R) -> Vec<Rational> {
    let n = lattice.polytope.ambient;
    let mut sum = vec![Rational::zero(); n];
    for &k in &face.facets {
        let w = Rational::new(1 + rng.random_range(1..=10), 1);
        for (x, y) in sum.iter_mut().zip(&lattice.hrep.inequalities[k].0) {
            *x += &(&w * y);
        }
    }
    primitive_integer(&sum)
}

/// Basis of the linear span of the face's vertices.
pub fn face_span(face: &Face) -> &[Vec<Rational>] {
    &face.span_basis
}
