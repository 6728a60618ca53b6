//! Polar degrees: multidegrees of conormal varieties from formulas, fixtures or slicing.

mod conormal;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::GroebnerError;
use crate::toric::ToricModel;

pub use conormal::{
    conormal_ideal, polar_degree_slice, polar_degrees_slicing, toric_conormal_ideal, ConormalIdeal, ConormalRoute,
    SlicingOptions,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolarError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("random slices disagree for delta_{j} after a re-draw: {counts:?}")]
    GenericityFailure { j: usize, counts: Vec<u128> },
    #[error("no multidegree is known for {0}")]
    UnknownMultidegree(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Multidegree `sum_j delta_j s^(n+1-j) t^j` of a conormal variety in `P^n x P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiDegree {
    pub n: usize,
    pub delta: BTreeMap<usize, u128>,
}

impl MultiDegree {
    /// Zero coefficients are dropped.
    pub fn new(n: usize, delta: impl IntoIterator<Item = (usize, u128)>) -> Self {
        let delta = delta.into_iter().filter(|&(_, d)| d != 0).collect();
        MultiDegree { n, delta }
    }

    pub fn get(&self, j: usize) -> u128 {
        self.delta.get(&j).copied().unwrap_or(0)
    }

    /// `mu_i = delta_j` with `i = dim + 1 - j`.
    pub fn mu(&self, i: usize, dim: usize) -> u128 {
        if i > dim {
            return 0;
        }
        self.get(dim + 1 - i)
    }

    /// Polar degrees `(mu_0, ..., mu_dim)`.
    pub fn polar_degrees(&self, dim: usize) -> Vec<u128> {
        (0..=dim).map(|i| self.mu(i, dim)).collect()
    }

    /// Nonzero coefficients in increasing `j`.
    pub fn coefficients(&self) -> Vec<u128> {
        self.delta.values().copied().collect()
    }

    pub fn is_palindromic(&self) -> bool {
        let c = self.coefficients();
        c.iter().eq(c.iter().rev())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delta.is_empty() {
            return write!(f, "0");
        }
        let power = |v: &str, e: usize| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        let terms: Vec<String> = self
            .delta
            .iter()
            .map(|(&j, &d)| {
                let mono = format!("{}{}", power("s", self.n + 1 - j), power("t", j));
                match (d, mono.is_empty()) {
                    (_, true) => d.to_string(),
                    (1, false) => mono,
                    _ => format!("{d}{mono}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Multidegree of the join defined by `I + J` in disjoint variables.
pub fn multidegree_product(h1: &MultiDegree, h2: &MultiDegree) -> MultiDegree {
    let mut delta: BTreeMap<usize, u128> = BTreeMap::new();
    for (&i, &a) in &h1.delta {
        for (&j, &b) in &h2.delta {
            *delta.entry(i + j).or_default() += a * b;
        }
    }
    MultiDegree::new(h1.n + h2.n + 1, delta)
}

/// `h^K` for a star tree whose hub has `K` states.
pub fn star_tree_multidegree(h: &MultiDegree, k: usize) -> Result<MultiDegree, PolarError> {
    if k == 0 {
        return Err(PolarError::InvalidInput("hub must have at least one state".into()));
    }
    let mut out = h.clone();
    for _ in 1..k {
        out = multidegree_product(&out, h);
    }
    Ok(out)
}

/// Scroll `S(n_1, ..., n_d)` with `d >= 2`: `delta_(d-1) = delta_(d+1) = N`, `delta_d = 2(N - 1)`.
pub fn scroll_polar_degrees(ns: &[usize]) -> Result<MultiDegree, PolarError> {
    let d = ns.len();
    if d < 2 || ns.contains(&0) {
        return Err(PolarError::InvalidInput("scroll formula needs at least two positive blocks".into()));
    }
    let big_n: usize = ns.iter().sum();
    let n = big_n + d - 1;
    let nn = big_n as u128;
    Ok(MultiDegree::new(n, [(d - 1, nn), (d, 2 * (nn - 1)), (d + 1, nn)]))
}

/// Hirzebruch surface `S(a, b)`: the two-block scroll.
pub fn hirzebruch_polar_degrees(a: usize, b: usize) -> Result<MultiDegree, PolarError> {
    if a == 0 || a > b {
        return Err(PolarError::InvalidInput("hirzebruch needs 1 <= a <= b".into()));
    }
    scroll_polar_degrees(&[a, b])
}

/// Independence models with a known multidegree, by state-space sizes.
pub fn independence_multidegree(dims: &[usize]) -> Option<MultiDegree> {
    match dims {
        [2, 2] => Some(MultiDegree::new(3, [(1, 2), (2, 2), (3, 2)])),
        [2, 2, 2] => Some(MultiDegree::new(7, [(1, 4), (2, 12), (3, 12), (4, 6)])),
        _ => None,
    }
}

/// Stored multidegrees of the graphical and hierarchical models.
///
/// The no-three-way `(2,2,2)` entry is indexed so that `delta_7 = deg X = 4`,
/// which is the only placement compatible with `delta_j = 0` for `j > dim X + 1`.
pub fn fixture_multidegree(label: &str) -> Option<MultiDegree> {
    let md = |n: usize, start: usize, v: &[u128]| MultiDegree::new(n, v.iter().enumerate().map(|(k, &d)| (start + k, d)));
    match label {
        "path4_binary" => Some(md(15, 2, &[8, 56, 152, 344, 280, 136, 34])),
        "cycle4_binary" => Some(md(15, 1, &[48, 192, 576, 1056, 1440, 1344, 864, 328, 64])),
        "no3way(2,2,2)" => Some(md(7, 1, &[4, 12, 36, 36, 36, 12, 4])),
        "no3way(2,2,3)" => Some(md(11, 2, &[12, 56, 180, 288, 376, 288, 180, 56, 12])),
        _ => None,
    }
}

/// Multidegree from a closed formula, when one applies to the model.
pub fn formula_multidegree(model: &ToricModel) -> Option<MultiDegree> {
    let label = model.label.as_str();
    let args = |prefix: &str| -> Option<Vec<usize>> {
        let inner = label.strip_prefix(prefix)?.strip_suffix(')')?;
        inner
            .split(',')
            .map(|x| x.trim().trim_matches(|c| c == '[' || c == ']').parse().ok())
            .collect()
    };
    if let Some(v) = args("hirzebruch(") {
        return hirzebruch_polar_degrees(v[0], v[1]).ok();
    }
    if let Some(v) = args("scroll(") {
        return scroll_polar_degrees(&v).ok();
    }
    if let Some(v) = args("star_tree(") {
        let (hub, leaves) = v.split_last()?;
        return star_tree_multidegree(&independence_multidegree(leaves)?, *hub).ok();
    }
    None
}

/// Multidegree from a formula or a stored fixture.
pub fn known_multidegree(model: &ToricModel) -> Option<MultiDegree> {
    formula_multidegree(model).or_else(|| fixture_multidegree(&model.label))
}

/// Upper bound `mu_i`, `i = dim X - (codim F - 1)`, on the Wasserstein degree of a face.
pub fn polar_bound_for_face(md: &MultiDegree, dim_x: usize, face_codim: usize) -> Result<u128, PolarError> {
    if face_codim == 0 || face_codim > dim_x + 1 {
        return Err(PolarError::InvalidInput(format!(
            "face codimension {face_codim} outside 1..={}",
            dim_x + 1
        )));
    }
    Ok(md.mu(dim_x + 1 - face_codim, dim_x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{hirzebruch, scroll, star_tree};
    use proptest::prelude::*;

    fn segre22() -> MultiDegree {
        independence_multidegree(&[2, 2]).unwrap()
    }

    #[test]
    fn scroll_formulas() {
        let h = scroll_polar_degrees(&[1, 2]).unwrap();
        assert_eq!((h.n, h.coefficients()), (4, vec![3, 4, 3]));
        assert_eq!(scroll_polar_degrees(&[2, 4]).unwrap().coefficients(), vec![6, 10, 6]);
        let h = scroll_polar_degrees(&[1, 1, 1]).unwrap();
        assert_eq!((h.get(2), h.get(3), h.get(4), h.n), (3, 4, 3, 5));
        assert_eq!(hirzebruch_polar_degrees(1, 1).unwrap().coefficients(), vec![2, 2, 2]);
        assert_eq!(hirzebruch_polar_degrees(1, 5).unwrap().coefficients(), vec![6, 10, 6]);
        assert!(scroll_polar_degrees(&[3]).is_err());
    }

    #[test]
    fn display() {
        let h = MultiDegree::new(4, [(1, 6), (2, 4)]);
        assert_eq!(h.to_string(), "6s^4t + 4s^3t^2");
        assert_eq!(segre22().to_string(), "2s^3t + 2s^2t^2 + 2st^3");
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"n":4,"delta":{"1":6,"2":4}}"#);
    }

    #[test]
    fn star_tree_powers() {
        let h2 = star_tree_multidegree(&segre22(), 2).unwrap();
        assert_eq!(h2.to_string(), "4s^6t^2 + 8s^5t^3 + 12s^4t^4 + 8s^3t^5 + 4s^2t^6");
        let h3 = star_tree_multidegree(&segre22(), 3).unwrap();
        assert_eq!(
            h3.to_string(),
            "8s^9t^3 + 24s^8t^4 + 48s^7t^5 + 56s^6t^6 + 48s^5t^7 + 24s^4t^8 + 8s^3t^9"
        );
        let i3 = star_tree_multidegree(&independence_multidegree(&[2, 2, 2]).unwrap(), 2).unwrap();
        assert_eq!(
            i3.to_string(),
            "16s^14t^2 + 96s^13t^3 + 240s^12t^4 + 336s^11t^5 + 288s^10t^6 + 144s^9t^7 + 36s^8t^8"
        );
    }

    #[test]
    fn fixtures_end_in_the_degree() {
        for (label, dim, deg) in
            [("path4_binary", 7, 34), ("cycle4_binary", 8, 64), ("no3way(2,2,2)", 6, 4), ("no3way(2,2,3)", 9, 12)]
        {
            let md = fixture_multidegree(label).unwrap();
            assert_eq!(*md.delta.keys().last().unwrap(), dim + 1, "{label}");
            assert_eq!(md.mu(0, dim), deg, "{label}");
        }
        assert!(fixture_multidegree("no3way(2,2,3)").unwrap().is_palindromic());
        assert!(fixture_multidegree("no3way(2,2,2)").unwrap().is_palindromic());
    }

    #[test]
    fn formulas_by_model() {
        assert_eq!(formula_multidegree(&hirzebruch(1, 2).unwrap()).unwrap().coefficients(), vec![3, 4, 3]);
        assert_eq!(formula_multidegree(&scroll(&[1, 1, 1]).unwrap()).unwrap().get(3), 4);
        assert!(formula_multidegree(&scroll(&[4]).unwrap()).is_none());
        let s = star_tree(&[2, 2], 3).unwrap();
        assert_eq!(formula_multidegree(&s).unwrap(), star_tree_multidegree(&segre22(), 3).unwrap());
    }

    #[test]
    fn face_bounds() {
        let h = hirzebruch_polar_degrees(1, 2).unwrap();
        assert_eq!(polar_bound_for_face(&h, 2, 1).unwrap(), 3);
        assert_eq!(polar_bound_for_face(&h, 2, 2).unwrap(), 4);
        assert_eq!(polar_bound_for_face(&h, 2, 3).unwrap(), 3);
        assert!(polar_bound_for_face(&h, 2, 4).is_err());
    }

    fn arb_md() -> impl Strategy<Value = MultiDegree> {
        (1usize..5, proptest::collection::vec(0u128..20, 1..4))
            .prop_map(|(n, v)| MultiDegree::new(n + v.len(), v.into_iter().enumerate().map(|(k, d)| (k + 1, d))))
    }

    proptest! {
        #[test]
        fn product_is_commutative_and_associative(a in arb_md(), b in arb_md(), c in arb_md()) {
            prop_assert_eq!(multidegree_product(&a, &b), multidegree_product(&b, &a));
            prop_assert_eq!(
                multidegree_product(&multidegree_product(&a, &b), &c),
                multidegree_product(&a, &multidegree_product(&b, &c))
            );
            prop_assert_eq!(star_tree_multidegree(&a, 1).unwrap(), a);
        }
    }
}
