//! Toric models: monomial parametrizations and their ideals.

mod lattice;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{RatMatrix, Rational};
use crate::groebner::{Budget, GroebnerError, Ideal, Monomial, MonomialOrder, Polynomial, Ring};
use crate::metric::product_states;

pub use lattice::{apply_scaling, binomial, integer_kernel, toric_ideal_elimination, toric_ideal_lattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("(1,...,1) is not in the row space of A")]
    OnesNotInRowSpace,
    #[error("A must be a nonempty rectangular integer matrix")]
    BadMatrix,
    #[error("scaling must have one positive entry per column")]
    BadScaling,
    #[error("invalid model dimensions: {0}")]
    InvalidDims(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Which algorithm computes the ideal of a matrix model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealRoute {
    #[default]
    Lattice,
    Elimination,
}

/// Closure of the scaled monomial map `p_j = λ_j θ^{a_j}`.
#[derive(Clone, Debug)]
pub struct ToricModel {
    pub a: Vec<Vec<i64>>,
    pub scaling: Vec<Rational>,
    pub ideal: Ideal,
    pub dim_projective: usize,
    pub label: String,
}

impl ToricModel {
    pub fn n(&self) -> usize {
        self.scaling.len()
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// Matrix model with the ideal computed by the chosen route.
    pub fn from_matrix(
        a: Vec<Vec<i64>>,
        scaling: Option<Vec<Rational>>,
        route: IdealRoute,
        budget: &Budget,
    ) -> Result<Self, ToricError> {
        let n = check_matrix(&a)?;
        let scaling = check_scaling(scaling, n)?;
        let ring = Ring::with_prefix("p", n, MonomialOrder::Grevlex);
        let ideal = match route {
            IdealRoute::Lattice => toric_ideal_lattice(&a, &scaling, &ring, budget)?,
            IdealRoute::Elimination => toric_ideal_elimination(&a, &scaling, &ring, budget)?,
        };
        Ok(Self::assemble(a, scaling, ideal, "matrix".into()))
    }

    fn assemble(a: Vec<Vec<i64>>, scaling: Vec<Rational>, ideal: Ideal, label: String) -> Self {
        let dim_projective = RatMatrix::from_i64(&a).rank() - 1;
        ToricModel { a, scaling, ideal, dim_projective, label }
    }

    /// Parametrization images `λ_j θ^{a_j}` with each row of `A` shifted to be nonnegative.
    pub fn parametrization(&self) -> (Ring, Vec<Polynomial>) {
        let d = self.a.len();
        let theta = Ring::with_prefix("t", d, MonomialOrder::Grevlex);
        let shift: Vec<i64> = self.a.iter().map(|r| r.iter().copied().min().unwrap_or(0).min(0)).collect();
        let images = (0..self.n())
            .map(|j| {
                let m = Monomial::from_exps((0..d).map(|i| (self.a[i][j] - shift[i]) as u16));
                Polynomial::from_terms(d, theta.order(), vec![(m, self.scaling[j].clone())])
            })
            .collect();
        (theta, images)
    }

    /// True when every generator vanishes identically on the parametrization.
    pub fn vanishes_on_parametrization(&self) -> bool {
        let (_, images) = self.parametrization();
        self.ideal.gens().iter().all(|g| g.compose(&images).is_zero())
    }
}

fn check_matrix(a: &[Vec<i64>]) -> Result<usize, ToricError> {
    let n = a.first().map(Vec::len).ok_or(ToricError::BadMatrix)?;
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(ToricError::BadMatrix);
    }
    let m = RatMatrix::from_i64(a);
    let mut with_ones = a.to_vec();
    with_ones.push(vec![1; n]);
    if RatMatrix::from_i64(&with_ones).rank() != m.rank() {
        return Err(ToricError::OnesNotInRowSpace);
    }
    Ok(n)
}

fn check_scaling(scaling: Option<Vec<Rational>>, n: usize) -> Result<Vec<Rational>, ToricError> {
    let s = scaling.unwrap_or_else(|| vec![Rational::one(); n]);
    if s.len() != n || s.iter().any(|x| !x.is_positive()) {
        return Err(ToricError::BadScaling);
    }
    Ok(s)
}

/// 2-minors of a 2-row matrix of variable indices.
fn two_minors(ring: &Ring, top: &[usize], bottom: &[usize]) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for i in 0..top.len() {
        for j in i + 1..top.len() {
            let f = ring.var(top[i]).mul(&ring.var(bottom[j])).sub(&ring.var(top[j]).mul(&ring.var(bottom[i])));
            if !f.is_zero() {
                out.push(f);
            }
        }
    }
    out
}

/// Rational normal scroll `S(n_1, ..., n_d)`.
pub fn scroll(ns: &[usize]) -> Result<ToricModel, ToricError> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(ToricError::InvalidDims("scroll blocks must be positive".into()));
    }
    let d = ns.len();
    let n: usize = ns.iter().map(|k| k + 1).sum();
    let mut a = vec![vec![0i64; n]; d + 1];
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut col = 0;
    for (b, &k) in ns.iter().enumerate() {
        for e in 0..=k {
            a[0][col + e] = 1;
            if b + 1 < d {
                a[1 + b][col + e] = 1;
            }
            a[d][col + e] = e as i64;
        }
        top.extend(col..col + k);
        bottom.extend(col + 1..=col + k);
        col += k + 1;
    }
    let ring = Ring::with_prefix("p", n, MonomialOrder::Grevlex);
    let ideal = Ideal::new(ring.clone(), two_minors(&ring, &top, &bottom));
    let label = format!("scroll({})", ns.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
    Ok(ToricModel::assemble(a, vec![Rational::one(); n], ideal, label))
}

/// Hirzebruch surface with parametrization `(s, s t1, ..., s t1^a, s t2, s t1 t2, ..., s t1^b t2)`.
pub fn hirzebruch(a_: usize, b_: usize) -> Result<ToricModel, ToricError> {
    if a_ < 1 || a_ > b_ {
        return Err(ToricError::InvalidDims("hirzebruch needs 1 <= a <= b".into()));
    }
    let mut m = scroll(&[a_, b_])?;
    let n = a_ + b_ + 2;
    let mut a = vec![vec![1i64; n], vec![0; n], vec![0; n]];
    for (e, x) in a[1].iter_mut().take(a_ + 1).enumerate() {
        *x = e as i64;
    }
    for e in 0..=b_ {
        a[1][a_ + 1 + e] = e as i64;
        a[2][a_ + 1 + e] = 1;
    }
    m.a = a;
    m.label = format!("hirzebruch({a_},{b_})");
    Ok(m)
}

/// Design matrix of a hierarchical model: one row per (clique, clique state).
pub fn clique_matrix(dims: &[usize], cliques: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let states = product_states(dims);
    let mut rows = Vec::new();
    for c in cliques {
        let sub: Vec<usize> = c.iter().map(|&v| dims[v]).collect();
        for marg in product_states(&sub) {
            rows.push(
                states
                    .iter()
                    .map(|s| c.iter().zip(&marg).all(|(&v, &x)| s[v] == x) as i64)
                    .collect(),
            );
        }
    }
    rows
}

fn state_names(dims: &[usize]) -> Vec<String> {
    let sep = if dims.iter().any(|&d| d > 10) { "_" } else { "" };
    product_states(dims)
        .into_iter()
        .map(|s| format!("p{}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)))
        .collect()
}

fn hierarchical(dims: &[usize], cliques: &[Vec<usize>], label: String, budget: &Budget) -> Result<ToricModel, ToricError> {
    let a = clique_matrix(dims, cliques);
    let n = a[0].len();
    let scaling = vec![Rational::one(); n];
    let ring = Ring::new(state_names(dims), MonomialOrder::Grevlex);
    let ideal = toric_ideal_lattice(&a, &scaling, &ring, budget)?;
    Ok(ToricModel::assemble(a, scaling, ideal, label))
}

/// Star tree with hidden hub of `hub` states joined to observed leaves; hub index slowest.
pub fn star_tree(leaves: &[usize], hub: usize) -> Result<ToricModel, ToricError> {
    if leaves.is_empty() || hub < 2 || leaves.iter().any(|&d| d < 2) {
        return Err(ToricError::InvalidDims("star tree needs a hub and leaves with >= 2 states".into()));
    }
    let mut dims = vec![hub];
    dims.extend_from_slice(leaves);
    let cliques: Vec<Vec<usize>> = (1..dims.len()).map(|j| vec![0, j]).collect();
    let a = clique_matrix(&dims, &cliques);
    let ring = Ring::new(state_names(&dims), MonomialOrder::Grevlex);
    let states = product_states(&dims);
    let index = |s: &[usize]| states.iter().position(|t| t == s).unwrap();

    // Independence ideal of each hub slice: 2-minors of every leaf flattening.
    let mut gens = Vec::new();
    let leaf_states = product_states(leaves);
    for k in 0..hub {
        for (j, &dj) in leaves.iter().enumerate() {
            let others: Vec<Vec<usize>> = {
                let mut seen: Vec<Vec<usize>> = Vec::new();
                for s in &leaf_states {
                    let mut o = s.clone();
                    o.remove(j);
                    if !seen.contains(&o) {
                        seen.push(o);
                    }
                }
                seen
            };
            let cell = |x: usize, o: &[usize]| {
                let mut s = vec![k];
                s.extend_from_slice(&o[..j]);
                s.push(x);
                s.extend_from_slice(&o[j..]);
                index(&s)
            };
            for x in 0..dj {
                for y in x + 1..dj {
                    let top: Vec<usize> = others.iter().map(|o| cell(x, o)).collect();
                    let bottom: Vec<usize> = others.iter().map(|o| cell(y, o)).collect();
                    gens.extend(two_minors(&ring, &top, &bottom));
                }
            }
        }
    }
    let mut unique: Vec<Polynomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !unique.iter().any(|u| *u == g || u.neg() == g) {
            unique.push(g);
        }
    }
    let n = ring.nvars();
    let ideal = Ideal::new(ring, unique);
    let label = format!(
        "star_tree([{}],{hub})",
        leaves.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(ToricModel::assemble(a, vec![Rational::one(); n], ideal, label))
}

/// Binary path on four vertices, `p_ijkl = a_ij b_jk c_kl`.
pub fn path4_binary(budget: &Budget) -> Result<ToricModel, ToricError> {
    hierarchical(&[2; 4], &[vec![0, 1], vec![1, 2], vec![2, 3]], "path4_binary".into(), budget)
}

/// Binary four-cycle, `p_ijkl = a_ij b_jk c_kl d_il`.
pub fn cycle4_binary(budget: &Budget) -> Result<ToricModel, ToricError> {
    hierarchical(&[2; 4], &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], "cycle4_binary".into(), budget)
}

/// No-three-way interaction model, `p_ijk = a_ij b_jk c_ik`.
pub fn no3way(r: usize, s: usize, t: usize, budget: &Budget) -> Result<ToricModel, ToricError> {
    if r < 2 || s < 2 || t < 2 {
        return Err(ToricError::InvalidDims("no3way needs r, s, t >= 2".into()));
    }
    hierarchical(&[r, s, t], &[vec![0, 1], vec![1, 2], vec![0, 2]], format!("no3way({r},{s},{t})"), budget)
}

/// JSON description of a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Matrix {
        #[serde(rename = "A")]
        a: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scaling: Option<Vec<Rational>>,
    },
    Scroll { n: Vec<usize> },
    Hirzebruch { a: usize, b: usize },
    StarTree { leaves: Vec<usize>, hub: usize },
    #[serde(rename = "path4_binary")]
    Path4Binary,
    #[serde(rename = "cycle4_binary")]
    Cycle4Binary,
    #[serde(rename = "no3way")]
    No3Way { dims: [usize; 3] },
}

impl ModelSpec {
    pub fn build(&self, budget: &Budget) -> Result<ToricModel, ToricError> {
        match self {
            ModelSpec::Matrix { a, scaling } => {
                ToricModel::from_matrix(a.clone(), scaling.clone(), IdealRoute::Lattice, budget)
            }
            ModelSpec::Scroll { n } => scroll(n),
            ModelSpec::Hirzebruch { a, b } => hirzebruch(*a, *b),
            ModelSpec::StarTree { leaves, hub } => star_tree(leaves, *hub),
            ModelSpec::Path4Binary => path4_binary(budget),
            ModelSpec::Cycle4Binary => cycle4_binary(budget),
            ModelSpec::No3Way { dims } => no3way(dims[0], dims[1], dims[2], budget),
        }
    }
}
