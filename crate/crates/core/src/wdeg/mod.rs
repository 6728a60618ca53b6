//! Wasserstein degrees of faces: critical systems without Lagrange multipliers.

mod solve;
mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{dot, RatMatrix, Rational};
use crate::groebner::{jacobian, minors, Arithmetic, Budget, GroebnerError, Ideal, MonomialOrder, Polynomial, Ring};
use crate::polytope::Face;
use crate::random::{coefficients, substream};
use crate::toric::ToricModel;

pub use solve::{
    distance_candidate, lipschitz_vertices, solve_zero_dim, wasserstein_lp, wasserstein_norm_f64, DistanceCandidate,
    FaceCandidate, Solution,
};
pub use table::{degree_table, degree_table_on_lattice, DegreeTable, FaceFilter, FaceOutcome, Grouping, TableOptions};

#[derive(Debug, Error)]
pub enum WdegError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("model has {model} coordinates but the metric has {metric} states")]
    DimensionMismatch { model: usize, metric: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("lex basis is not in shape position")]
    NotShapePosition,
    #[error("ideal is not zero-dimensional (dimension {dim})")]
    NotZeroDimensional { dim: i64 },
    #[error("journal: {0}")]
    Journal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Point of the hyperplane of coordinate sum one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct SimplexPoint(Vec<Rational>);

impl SimplexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, WdegError> {
        if coords.is_empty() {
            return Err(WdegError::InvalidPoint("no coordinates".into()));
        }
        let s: Rational = coords.iter().sum();
        if !s.is_one() {
            return Err(WdegError::InvalidPoint(format!("coordinates sum to {s}, not 1")));
        }
        Ok(SimplexPoint(coords))
    }

    /// Seeded point of the open simplex.
    pub fn random(seed: u64, n: usize) -> Self {
        SimplexPoint(crate::random::simplex_point(&mut crate::random::stream(seed), n, 97))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }
}

impl TryFrom<Vec<Rational>> for SimplexPoint {
    type Error = WdegError;
    fn try_from(v: Vec<Rational>) -> Result<Self, WdegError> {
        SimplexPoint::new(v)
    }
}

impl From<SimplexPoint> for Vec<Rational> {
    fn from(p: SimplexPoint) -> Self {
        p.0
    }
}

/// Outcome of a degree computation for one face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum DegreeOutcome {
    Degree(u128),
    /// The critical ideal has positive dimension.
    NotZeroDimensional,
    TimedOut,
}

impl fmt::Display for DegreeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeOutcome::Degree(k) => write!(f, "{k}"),
            DegreeOutcome::NotZeroDimensional => f.write_str("-"),
            DegreeOutcome::TimedOut => f.write_str("timeout"),
        }
    }
}

impl FromStr for DegreeOutcome {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "-" => Ok(DegreeOutcome::NotZeroDimensional),
            "timeout" => Ok(DegreeOutcome::TimedOut),
            _ => s.parse().map(DegreeOutcome::Degree).map_err(|_| format!("invalid outcome {s:?}")),
        }
    }
}

impl From<DegreeOutcome> for String {
    fn from(o: DegreeOutcome) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for DegreeOutcome {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// Linear equations of `mu + L_F`: `sum p = 1` and `eta . p = eta . mu` for `eta` orthogonal to `L_F`.
///
/// The `eta` are the kernel vectors of the span, taken from the last free
/// coordinate backwards and kept when independent of the all-ones vector and
/// of those already kept.
pub fn affine_constraints(ring: &Ring, mu: &SimplexPoint, span: &[Vec<Rational>]) -> Vec<Polynomial> {
    let n = mu.len();
    let ones = vec![Rational::one(); n];
    let mut eqs = vec![ring.linear(&ones, &Rational::from_int(-1))];
    let kernel = if span.is_empty() {
        RatMatrix::identity(n).to_rows()
    } else {
        RatMatrix::from_rows(span.to_vec()).unwrap().kernel_basis()
    };
    let mut kept = vec![ones];
    for eta in kernel.into_iter().rev() {
        kept.push(eta.clone());
        if RatMatrix::from_rows(kept.clone()).unwrap().rank() < kept.len() {
            kept.pop();
            continue;
        }
        eqs.push(ring.linear(&eta, &-dot(&eta, mu.coords())));
    }
    eqs
}

/// Model generators, the affine equations of `mu + L_F` and the face functional.
#[derive(Clone, Debug)]
pub struct CriticalSystem {
    pub ring: Ring,
    pub model_gens: Vec<Polynomial>,
    pub affine_gens: Vec<Polynomial>,
    pub objective: Polynomial,
    /// `n - dim I + 1` for `I` generated by the model and affine equations.
    pub c: usize,
}

impl CriticalSystem {
    pub fn constraints(&self) -> Vec<Polynomial> {
        self.model_gens.iter().chain(&self.affine_gens).cloned().collect()
    }
}

fn check_sizes(model: &ToricModel, face: &Face, mu: &SimplexPoint) -> Result<(), WdegError> {
    if model.n() != mu.len() || model.n() != face.functional.len() {
        return Err(WdegError::DimensionMismatch { model: model.n(), metric: face.functional.len() });
    }
    Ok(())
}

/// Critical system of `face` at `mu`; `None` when `mu + L_F` misses the model.
pub fn critical_system(
    model: &ToricModel,
    face: &Face,
    mu: &SimplexPoint,
    arithmetic: Arithmetic,
    budget: &Budget,
) -> Result<Option<CriticalSystem>, WdegError> {
    check_sizes(model, face, mu)?;
    let ring = model.ring().with_order(MonomialOrder::Grevlex);
    let model_gens: Vec<Polynomial> = model.ideal.gens().iter().map(|g| g.with_order(ring.order())).collect();
    let affine_gens = affine_constraints(&ring, mu, &face.span_basis);
    let objective = ring.linear(&face.functional, &Rational::zero());
    let i = Ideal::new(ring.clone(), model_gens.iter().chain(&affine_gens).cloned());
    let Some((dim, _)) = arithmetic.dimension_and_degree(&i, budget)? else {
        return Ok(None);
    };
    let c = ring.nvars() - dim + 1;
    Ok(Some(CriticalSystem { ring, model_gens, affine_gens, objective, c }))
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

/// The constraints together with the `c`-minors of the Jacobian of `(objective, constraints)`.
pub fn build_critical_ideal(sys: &CriticalSystem) -> Ideal {
    let constraints = sys.constraints();
    let mut rows = vec![sys.objective.clone()];
    rows.extend(constraints.iter().cloned());
    let ms = dedup_up_to_sign(minors(&jacobian(&rows), sys.c));
    Ideal::new(sys.ring.clone(), constraints.into_iter().chain(ms))
}

/// Adds `_z h - 1` for a random combination `h` of the `(c-1)`-minors of the constraint Jacobian.
///
/// For a zero-dimensional critical ideal this keeps exactly the points where
/// the constraints are smooth, with their multiplicities.
pub fn localize_at_smooth_points(sys: &CriticalSystem, j: &Ideal, seed: u64) -> Ideal {
    let n = sys.ring.nvars();
    let mut names = sys.ring.names().to_vec();
    names.push("_z".into());
    let ring = Ring::new(names, sys.ring.order());
    let keep: Vec<usize> = (0..n).collect();
    let lift = |f: &Polynomial| f.embed(n + 1, ring.order(), &keep);
    let ms = if sys.c <= 1 {
        vec![sys.ring.one()]
    } else {
        dedup_up_to_sign(minors(&jacobian(&sys.constraints()), sys.c - 1))
    };
    let mut rng = substream(seed, 0x5a7);
    let h = ms.iter().zip(coefficients(&mut rng, ms.len())).fold(ring.zero(), |acc, (m, r)| acc.add(&lift(m).scale(&r)));
    let z = ring.var(n);
    Ideal::new(ring.clone(), j.gens().iter().map(lift).chain([z.mul(&h).sub(&ring.one())]))
}

/// Settings shared by every face of a degree computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WdegOptions {
    pub arithmetic: Arithmetic,
    /// Discard critical points at singularities of the constraints.
    pub saturate_singular: bool,
    pub seed: u64,
    /// Wall-clock limit per face.
    pub face_timeout: Option<Duration>,
    /// S-pair reduction limit per Gröbner basis.
    pub max_steps: Option<u64>,
}

impl Default for WdegOptions {
    fn default() -> Self {
        WdegOptions { arithmetic: Arithmetic::Modular, saturate_singular: false, seed: 1, face_timeout: None, max_steps: None }
    }
}

impl WdegOptions {
    /// Fresh budget starting now.
    pub fn budget(&self) -> Budget {
        let mut b = self.face_timeout.map_or_else(Budget::unlimited, Budget::with_timeout);
        b.max_steps = self.max_steps;
        b
    }
}

/// Number of critical points of the face functional on the model inside `mu + L_F`.
pub fn wasserstein_degree(
    model: &ToricModel,
    face: &Face,
    mu: &SimplexPoint,
    opts: &WdegOptions,
) -> Result<DegreeOutcome, WdegError> {
    let budget = opts.budget();
    let run = || -> Result<DegreeOutcome, WdegError> {
        let Some(sys) = critical_system(model, face, mu, opts.arithmetic, &budget)? else {
            return Ok(DegreeOutcome::Degree(0));
        };
        let mut j = build_critical_ideal(&sys);
        if opts.saturate_singular {
            j = localize_at_smooth_points(&sys, &j, opts.seed);
        }
        Ok(match opts.arithmetic.dimension_and_degree(&j, &budget)? {
            None => DegreeOutcome::Degree(0),
            Some((0, d)) => DegreeOutcome::Degree(d),
            Some(_) => DegreeOutcome::NotZeroDimensional,
        })
    };
    match run() {
        Err(WdegError::Groebner(GroebnerError::Timeout { .. })) => Ok(DegreeOutcome::TimedOut),
        r => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{discrete_metric, l1_metric};
    use crate::polytope::{face_lattice, wasserstein_ball, FaceLattice};
    use crate::toric::{hirzebruch, IdealRoute};

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    pub(crate) fn twisted_cubic() -> ToricModel {
        let a = vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]];
        let s = [1, 3, 3, 1].iter().map(|&x| Rational::from_int(x)).collect();
        ToricModel::from_matrix(a, Some(s), IdealRoute::Lattice, &Budget::unlimited()).unwrap()
    }

    pub(crate) fn example_edge(l: &FaceLattice) -> Face {
        let want: Vec<Vec<Rational>> = [[0, 0, 1, -1], [1, 0, 0, -1]]
            .iter()
            .map(|v| v.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        l.faces(1)
            .iter()
            .find(|f| {
                let mut vs: Vec<Vec<Rational>> =
                    f.vertex_indices.iter().map(|&i| l.polytope().vertices[i].clone()).collect();
                vs.sort();
                vs == want
            })
            .unwrap()
            .clone()
    }

    pub(crate) fn example_mu() -> SimplexPoint {
        SimplexPoint::new(vec![q(1, 6), q(1, 2), q(1, 6), q(1, 6)]).unwrap()
    }

    #[test]
    fn simplex_points() {
        assert!(SimplexPoint::new(vec![q(1, 2), q(1, 3)]).is_err());
        let p = SimplexPoint::random(4, 5);
        assert!(p.is_nonnegative() && p.len() == 5);
        let json = serde_json::to_string(&example_mu()).unwrap();
        assert_eq!(json, r#"["1/6","1/2","1/6","1/6"]"#);
        assert_eq!(serde_json::from_str::<SimplexPoint>(&json).unwrap(), example_mu());
    }

    #[test]
    fn outcome_strings() {
        for o in [DegreeOutcome::Degree(3), DegreeOutcome::NotZeroDimensional, DegreeOutcome::TimedOut] {
            assert_eq!(o.to_string().parse::<DegreeOutcome>().unwrap(), o);
        }
        assert!(DegreeOutcome::Degree(9) < DegreeOutcome::NotZeroDimensional);
    }

    #[test]
    fn example_affine_constraints() {
        let l = face_lattice(&wasserstein_ball(&discrete_metric(4)));
        let face = example_edge(&l);
        let m = twisted_cubic();
        let eqs = affine_constraints(m.ring(), &example_mu(), &face.span_basis);
        let shown: Vec<String> = eqs.iter().map(|e| m.ring().display(e)).collect();
        assert_eq!(shown, ["p0+p1+p2+p3-1", "p0+p2+p3-1/2"]);
        let hyperplane: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..4).map(|k| Rational::from_int(i64::from(k == i) - i64::from(k == 3))).collect())
            .collect();
        let whole = affine_constraints(m.ring(), &example_mu(), &hyperplane);
        assert_eq!(whole.len(), 1);
    }

    #[test]
    fn example_degree_is_three() {
        let l = face_lattice(&wasserstein_ball(&discrete_metric(4)));
        let face = example_edge(&l);
        let m = twisted_cubic();
        for arithmetic in [Arithmetic::Modular, Arithmetic::Exact] {
            let opts = WdegOptions { arithmetic, ..Default::default() };
            assert_eq!(wasserstein_degree(&m, &face, &example_mu(), &opts).unwrap(), DegreeOutcome::Degree(3));
        }
        let sys = critical_system(&m, &face, &example_mu(), Arithmetic::Exact, &Budget::unlimited()).unwrap().unwrap();
        assert_eq!(sys.c, 5);
        assert_eq!(build_critical_ideal(&sys).gens().len(), 5);
    }

    #[test]
    fn degree_does_not_depend_on_mu() {
        let m = hirzebruch(1, 2).unwrap();
        let l = face_lattice(&wasserstein_ball(&l1_metric(5)));
        for face in l.faces(2).iter().take(6) {
            let want = wasserstein_degree(&m, face, &SimplexPoint::random(1, 5), &WdegOptions::default()).unwrap();
            for seed in 2..5 {
                let got = wasserstein_degree(&m, face, &SimplexPoint::random(seed, 5), &WdegOptions::default()).unwrap();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn linear_model_has_one_critical_point() {
        // The plane p0 = p1.
        let a = vec![vec![1, 1, 1], vec![0, 0, 1]];
        let m = ToricModel::from_matrix(a, None, IdealRoute::Lattice, &Budget::unlimited()).unwrap();
        let l = face_lattice(&wasserstein_ball(&discrete_metric(3)));
        let mu = SimplexPoint::new(vec![q(1, 5), q(1, 2), q(3, 10)]).unwrap();
        for face in l.faces(0) {
            assert_eq!(wasserstein_degree(&m, face, &mu, &WdegOptions::default()).unwrap(), DegreeOutcome::Degree(1));
        }
    }

    #[test]
    fn smooth_localization_keeps_smooth_points() {
        let l = face_lattice(&wasserstein_ball(&discrete_metric(4)));
        let m = twisted_cubic();
        let opts = WdegOptions { saturate_singular: true, ..Default::default() };
        assert_eq!(wasserstein_degree(&m, &example_edge(&l), &example_mu(), &opts).unwrap(), DegreeOutcome::Degree(3));
    }

    #[test]
    fn timeouts_are_outcomes() {
        let m = hirzebruch(1, 2).unwrap();
        let l = face_lattice(&wasserstein_ball(&l1_metric(5)));
        let opts = WdegOptions { max_steps: Some(0), ..Default::default() };
        let o = wasserstein_degree(&m, &l.faces(3)[0], &SimplexPoint::random(1, 5), &opts).unwrap();
        assert_eq!(o, DegreeOutcome::TimedOut);
    }
}
