//! Finite metrics on `[n]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("distance matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("d[{0}][{1}] != d[{1}][{0}]")]
    NotSymmetric(usize, usize),
    #[error("d[{0}][{0}] is nonzero")]
    NonzeroDiagonal(usize),
    #[error("d[{0}][{1}] is not positive")]
    NonPositiveOffDiagonal(usize, usize),
    #[error("triangle inequality fails: d[{0}][{1}] > d[{0}][{2}] + d[{2}][{1}]")]
    TriangleViolation(usize, usize, usize),
    #[error("a metric needs at least 2 states")]
    TooFewStates,
}

/// Validated distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    d: RatMatrix,
}

impl FiniteMetric {
    pub fn n(&self) -> usize {
        self.d.rows()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.d[(i, j)]
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.d
    }
}

/// Checks the metric axioms. A triangle violation is reported as `(i, k, j)`
/// with `d[i][k] > d[i][j] + d[j][k]`.
pub fn validate(d: RatMatrix) -> Result<FiniteMetric, MetricError> {
    let n = d.rows();
    if d.cols() != n {
        return Err(MetricError::NotSquare { rows: n, cols: d.cols() });
    }
    for i in 0..n {
        if !d[(i, i)].is_zero() {
            return Err(MetricError::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if d[(i, j)] != d[(j, i)] {
                return Err(MetricError::NotSymmetric(i, j));
            }
            if !d[(i, j)].is_positive() {
                return Err(MetricError::NonPositiveOffDiagonal(i, j));
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                if d[(i, k)] > &d[(i, j)] + &d[(j, k)] {
                    return Err(MetricError::TriangleViolation(i, k, j));
                }
            }
        }
    }
    Ok(FiniteMetric { d })
}

fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> FiniteMetric {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
    FiniteMetric { d: RatMatrix::from_i64(&rows) }
}

/// `d_ij = 1` for `i != j`.
pub fn discrete_metric(n: usize) -> FiniteMetric {
    assert!(n >= 2, "discrete metric needs n >= 2");
    from_fn(n, |i, j| (i != j) as i64)
}

/// `d_ij = |i - j|`.
pub fn l1_metric(n: usize) -> FiniteMetric {
    assert!(n >= 2, "L1 metric needs n >= 2");
    from_fn(n, |i, j| (i as i64 - j as i64).abs())
}

/// States of `[d_1] x ... x [d_k]` in lexicographic order, last coordinate fastest.
pub fn product_states(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..d).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of coordinates in which two states of the product differ.
pub fn hamming_metric(dims: &[usize]) -> FiniteMetric {
    assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 2), "each factor needs >= 2 states");
    let states = product_states(dims);
    from_fn(states.len(), |i, j| {
        states[i].iter().zip(&states[j]).filter(|(a, b)| a != b).count() as i64
    })
}

/// JSON description of a metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MetricSpec {
    Explicit { d: Vec<Vec<Rational>> },
    Discrete { n: usize },
    L1 { n: usize },
    Hamming { dims: Vec<usize> },
}

impl MetricSpec {
    pub fn build(&self) -> Result<FiniteMetric, MetricError> {
        match self {
            MetricSpec::Explicit { d } => {
                let rows = d.len();
                let m = RatMatrix::from_rows(d.clone()).map_err(|_| MetricError::NotSquare {
                    rows,
                    cols: d.iter().map(Vec::len).max().unwrap_or(0),
                })?;
                validate(m)
            }
            MetricSpec::Discrete { n } | MetricSpec::L1 { n } if *n < 2 => Err(MetricError::TooFewStates),
            MetricSpec::Discrete { n } => Ok(discrete_metric(*n)),
            MetricSpec::L1 { n } => Ok(l1_metric(*n)),
            MetricSpec::Hamming { dims } => {
                if dims.is_empty() || dims.iter().any(|&d| d < 2) {
                    return Err(MetricError::TooFewStates);
                }
                Ok(hamming_metric(dims))
            }
        }
    }

    /// Parses shorthand such as `discrete:4`, `l1:5` or `hamming:2,2,2`.
    pub fn parse_short(s: &str) -> Option<MetricSpec> {
        let (kind, arg) = s.split_once(':')?;
        let nums: Vec<usize> = arg.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
        match (kind.trim(), nums.as_slice()) {
            ("discrete", [n]) => Some(MetricSpec::Discrete { n: *n }),
            ("l1", [n]) => Some(MetricSpec::L1 { n: *n }),
            ("hamming", dims) => Some(MetricSpec::Hamming { dims: dims.to_vec() }),
            _ => None,
        }
    }

    /// Shorthand for the built-in families, JSON otherwise.
    pub fn label(&self) -> String {
        match self {
            MetricSpec::Discrete { n } => format!("discrete:{n}"),
            MetricSpec::L1 { n } => format!("l1:{n}"),
            MetricSpec::Hamming { dims } => {
                format!("hamming:{}", dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            }
            MetricSpec::Explicit { .. } => serde_json::to_string(self).unwrap(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn labels_round_trip() {
        for s in ["discrete:4", "l1:5", "hamming:2,2,2"] {
            assert_eq!(MetricSpec::parse_short(s).unwrap().label(), s);
        }
    }

    #[test]
    fn constructors_validate() {
        for m in [discrete_metric(4), l1_metric(5), hamming_metric(&[2, 2, 2]), hamming_metric(&[2, 3])] {
            assert!(validate(m.matrix().clone()).is_ok());
        }
        assert_eq!(l1_metric(5).dist(0, 4), &Rational::from_int(4));
        assert_eq!(l1_metric(2), discrete_metric(2));
        assert_eq!(hamming_metric(&[2]), discrete_metric(2));
        assert_eq!(hamming_metric(&[2, 3]).dist(0, 5), &Rational::from_int(2));
    }

    #[test]
    fn hamming_222_matrix() {
        let m = hamming_metric(&[2, 2, 2]);
        let row0: Vec<i64> = (0..8).map(|j| m.dist(0, j).as_small().unwrap().0).collect();
        assert_eq!(row0, vec![0, 1, 1, 2, 1, 2, 2, 3]);
        let row3: Vec<i64> = (0..8).map(|j| m.dist(3, j).as_small().unwrap().0).collect();
        assert_eq!(row3, vec![2, 1, 1, 0, 3, 2, 2, 1]);
    }

    #[test]
    fn validation_errors() {
        assert!(validate(RatMatrix::from_i64(&[vec![0, 3], vec![3, 0]])).is_ok());
        let bad = RatMatrix::from_i64(&[vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]]);
        assert_eq!(validate(bad), Err(MetricError::TriangleViolation(0, 2, 1)));
        let bad = RatMatrix::from_i64(&[vec![0, 1], vec![2, 0]]);
        assert_eq!(validate(bad), Err(MetricError::NotSymmetric(0, 1)));
        let bad = RatMatrix::from_i64(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(validate(bad), Err(MetricError::NonzeroDiagonal(0)));
        let bad = RatMatrix::from_i64(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(validate(bad), Err(MetricError::NonPositiveOffDiagonal(0, 1)));
    }

    #[test]
    fn json_specs() {
        let s: MetricSpec = serde_json::from_str(r#"{"type":"hamming","dims":[2,2,2]}"#).unwrap();
        assert_eq!(s.build().unwrap(), hamming_metric(&[2, 2, 2]));
        let s: MetricSpec = serde_json::from_str(r#"{"type":"explicit","d":[[0,"1/2"],["1/2",0]]}"#).unwrap();
        assert_eq!(s.build().unwrap().dist(1, 0), &Rational::new(1, 2));
        let s: MetricSpec = serde_json::from_str(r#"{"type":"discrete","n":1}"#).unwrap();
        assert_eq!(s.build(), Err(MetricError::TooFewStates));
        assert_eq!(MetricSpec::parse_short("l1:5"), Some(MetricSpec::L1 { n: 5 }));
        assert_eq!(
            serde_json::to_string(&MetricSpec::Discrete { n: 4 }).unwrap(),
            r#"{"type":"discrete","n":4}"#
        );
    }

    proptest! {
        #[test]
        fn hamming_invariant_under_factor_permutation(
            dims in proptest::collection::vec(2usize..4, 1..4), seed in 0usize..100
        ) {
            let m = hamming_metric(&dims);
            let states = product_states(&dims);
            // Rotate the values of one factor.
            let f = seed % dims.len();
            let shift = 1 + seed % (dims[f] - 1);
            let image: Vec<usize> = states
                .iter()
                .map(|s| {
                    let mut t = s.clone();
                    t[f] = (t[f] + shift) % dims[f];
                    states.iter().position(|u| *u == t).unwrap()
                })
                .collect();
            for i in 0..states.len() {
                for j in 0..states.len() {
                    prop_assert_eq!(m.dist(i, j), m.dist(image[i], image[j]));
                }
            }
        }
    }
}
