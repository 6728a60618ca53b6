//! Numerical points of zero-dimensional systems and candidate Wasserstein distances.

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::exact::{dot, Rational};
use crate::groebner::{Arithmetic, Budget, Ideal, Monomial, MonomialOrder, Polynomial, Ring};
use crate::metric::FiniteMetric;
use crate::polytope::{hrep_to_vrep, lipschitz_polytope, Face};
use crate::random::{coefficients, substream};
use crate::toric::ToricModel;

use super::{build_critical_ideal, critical_system, SimplexPoint, WdegError, WdegOptions};

/// A complex point; `real` when every coordinate has negligible imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub coords: Vec<Complex<f64>>,
    pub real: bool,
}

impl Solution {
    pub fn real_coords(&self) -> Vec<f64> {
        self.coords.iter().map(|z| z.re).collect()
    }
}

/// Coefficients (constant first) of a polynomial involving only variable `k`.
fn univariate(f: &Polynomial, k: usize) -> Option<Vec<Rational>> {
    let mut out: Vec<Rational> = Vec::new();
    for (m, c) in f.terms() {
        let e = m.exps();
        if e.iter().enumerate().any(|(i, &x)| i != k && x > 0) {
            return None;
        }
        let d = e[k] as usize;
        if out.len() <= d {
            out.resize(d + 1, Rational::zero());
        }
        out[d] = c.clone();
    }
    Some(out)
}

fn horner(coeffs: &[Complex<f64>], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut v = Complex::new(0.0, 0.0);
    let mut dv = Complex::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a univariate polynomial from companion-matrix eigenvalues, polished by Newton steps.
fn univariate_roots(coeffs: &[Rational], tolerance: f64) -> Vec<Complex<f64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = &coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| (c / lead).to_f64()).collect();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic[i];
    }
    let cz: Vec<Complex<f64>> = monic.iter().map(|&x| Complex::new(x, 0.0)).collect();
    comp.complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..100 {
                let (v, dv) = horner(&cz, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() <= tolerance * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Solutions of a zero-dimensional ideal whose lex basis is in shape position.
///
/// The reduced lex basis must have leading monomials `x_0, ..., x_{n-2}` and a
/// power of `x_{n-1}`; the roots of the last polynomial are back-substituted.
pub fn solve_zero_dim(ideal: &Ideal, tolerance: f64, budget: &Budget) -> Result<Vec<Solution>, WdegError> {
    let n = ideal.nvars();
    let gb = ideal.with_order(MonomialOrder::Lex).groebner(budget)?;
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    let dim = gb.dimension();
    if dim != 0 {
        return Err(WdegError::NotZeroDimensional { dim });
    }
    let polys = gb.polys();
    if polys.len() != n {
        return Err(WdegError::NotShapePosition);
    }
    let last = n - 1;
        let mut tails: Vec<(usize, Vec<Rational>)> = Vec::with_capacity(last);
    let mut last_poly = None;
    for g in polys {
        let lm: &Monomial = g.leading_monomial().unwrap();
        let e = lm.exps();
        let vars: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match vars.as_slice() {
            [i] if *i == last => last_poly = univariate(g, last),
            [i] if e[*i] == 1 => {
                // g = c x_i + h(x_last) with h univariate.
                let c = g.leading_coeff().unwrap();
                let tail = Polynomial::from_terms(n, g.order(), g.terms()[1..].to_vec());
                let h = univariate(&tail, last).ok_or(WdegError::NotShapePosition)?;
                tails.push((*i, h.iter().map(|x| -(x / c)).collect()));
            }
            _ => return Err(WdegError::NotShapePosition),
        }
    }
    let Some(u) = last_poly else {
        return Err(WdegError::NotShapePosition);
    };
    let real_cut = tolerance.sqrt();
    let sols = univariate_roots(&u, tolerance)
        .into_iter()
        .map(|z| {
            let mut coords = vec![Complex::new(0.0, 0.0); n];
            coords[last] = z;
            for (i, h) in &tails {
                let hc: Vec<Complex<f64>> = h.iter().map(|x| Complex::new(x.to_f64(), 0.0)).collect();
                coords[*i] = horner(&hc, z).0;
            }
            let real = coords.iter().all(|c| c.im.abs() <= real_cut * c.norm().max(1.0));
            Solution { coords, real }
        })
        .collect();
    Ok(sols)
}

/// Vertices of the Lipschitz polytope of `m`.
pub fn lipschitz_vertices(m: &FiniteMetric) -> Vec<Vec<Rational>> {
    hrep_to_vrep(&lipschitz_polytope(m)).vertices
}

/// Exact Wasserstein distance: the maximum of `(mu - nu) . x` over the Lipschitz polytope.
pub fn wasserstein_lp(mu: &[Rational], nu: &[Rational], m: &FiniteMetric) -> Result<Rational, WdegError> {
    if mu.len() != m.n() || nu.len() != m.n() {
        return Err(WdegError::DimensionMismatch { model: mu.len().max(nu.len()), metric: m.n() });
    }
    let diff: Vec<Rational> = mu.iter().zip(nu).map(|(a, b)| a - b).collect();
    if !diff.iter().sum::<Rational>().is_zero() {
        return Err(WdegError::InvalidPoint("the two points have different coordinate sums".into()));
    }
    Ok(lipschitz_vertices(m).iter().map(|x| dot(&diff, x)).max().unwrap_or_else(Rational::zero))
}

/// Floating-point Wasserstein norm of a zero-sum vector given the Lipschitz vertices.
pub fn wasserstein_norm_f64(diff: &[f64], vertices: &[Vec<Rational>]) -> f64 {
    vertices
        .iter()
        .map(|x| diff.iter().zip(x).map(|(d, v)| d * v.to_f64()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// What one face contributed to a distance search.
#[derive(Clone, Debug, Serialize)]
pub struct FaceCandidate {
    pub dim: usize,
    pub index: usize,
    /// Real critical points with nonnegative coordinates.
    pub points: Vec<Vec<f64>>,
    pub best: Option<f64>,
    pub error: Option<String>,
}

/// Smallest distance found among the real critical points of the scanned faces.
///
/// This is an upper bound for the distance to the model; it equals the
/// distance when the scanned faces include the one through the optimum.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceCandidate {
    pub lambda: f64,
    pub nu: Vec<f64>,
    /// `(dim, index)` of the face that produced the candidate; `None` when `mu` lies on the model.
    pub face: Option<(usize, usize)>,
    pub faces: Vec<FaceCandidate>,
}

/// Adds `_t - r . p` for random `r`, with `_t` last, to bring a radical ideal into shape position.
fn with_separating_variable(ideal: &Ideal, seed: u64) -> Ideal {
    let n = ideal.nvars();
    let mut names = ideal.ring().names().to_vec();
    names.push("_t".into());
    let ring = Ring::new(names, ideal.ring().order());
    let keep: Vec<usize> = (0..n).collect();
    let mut r = coefficients(&mut substream(seed, 0x7e5), n);
    r.push(Rational::from_int(-1));
    let t = ring.linear(&r, &Rational::zero());
    Ideal::new(ring.clone(), ideal.gens().iter().map(|f| f.embed(n + 1, ring.order(), &keep)).chain([t]))
}

fn face_points(
    model: &ToricModel,
    face: &Face,
    mu: &SimplexPoint,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<Vec<f64>>, WdegError> {
    let Some(sys) = critical_system(model, face, mu, Arithmetic::Exact, budget)? else {
        return Ok(Vec::new());
    };
    let j = build_critical_ideal(&sys);
    let n = model.n();
    let mut sols = solve_zero_dim(&j, 1e-12, budget);
    for attempt in 0..3u64 {
        if !matches!(sols, Err(WdegError::NotShapePosition)) {
            break;
        }
        sols = solve_zero_dim(&with_separating_variable(&j, seed.wrapping_add(attempt)), 1e-12, budget)
            .map(|v| v.into_iter().map(|s| Solution { coords: s.coords[..n].to_vec(), real: s.real }).collect());
    }
    Ok(sols?
        .into_iter()
        .filter(|s| s.real)
        .map(|s| s.real_coords())
        .filter(|p| p.iter().all(|&x| x >= -1e-9))
        .collect())
}

/// Candidate distance from `mu` to the model over the given faces of the ball.
pub fn distance_candidate(
    model: &ToricModel,
    metric: &FiniteMetric,
    mu: &SimplexPoint,
    faces: &[(usize, usize, &Face)],
    opts: &WdegOptions,
) -> Result<DistanceCandidate, WdegError> {
    if model.n() != metric.n() || mu.len() != metric.n() {
        return Err(WdegError::DimensionMismatch { model: model.n(), metric: metric.n() });
    }
    let mu_f: Vec<f64> = mu.coords().iter().map(Rational::to_f64).collect();
    let on_model = model.ideal.gens().iter().all(|g| g.evaluate(mu.coords()).is_zero());
    let verts = lipschitz_vertices(metric);
    // (distance, point, face)
    type Best = (f64, Vec<f64>, Option<(usize, usize)>);
    let mut best: Option<Best> = on_model.then(|| (0.0, mu_f.clone(), None));
    let mut reports = Vec::with_capacity(faces.len());
    for &(dim, index, face) in faces {
        let budget = opts.budget();
        let mut report = FaceCandidate { dim, index, points: Vec::new(), best: None, error: None };
        match face_points(model, face, mu, opts.seed, &budget) {
            Ok(points) => {
                for p in &points {
                    let diff: Vec<f64> = mu_f.iter().zip(p).map(|(a, b)| a - b).collect();
                    let w = wasserstein_norm_f64(&diff, &verts);
                    if report.best.is_none_or(|b| w < b) {
                        report.best = Some(w);
                    }
                    if best.as_ref().is_none_or(|b| w < b.0) {
                        best = Some((w, p.clone(), Some((dim, index))));
                    }
                }
                report.points = points;
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        reports.push(report);
    }
    let (lambda, nu, face) = best.unwrap_or((f64::INFINITY, Vec::new(), None));
    Ok(DistanceCandidate { lambda, nu, face, faces: reports })
}
