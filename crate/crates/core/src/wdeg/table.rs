//! Frequency tables of Wasserstein degrees over the faces of a ball.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::metric::FiniteMetric;
use crate::polytope::{face_lattice, wasserstein_ball, FaceLattice};
use crate::toric::ToricModel;

use super::{wasserstein_degree, DegreeOutcome, SimplexPoint, WdegError, WdegOptions};

pub const CSV_HEADER: &str = "# wassdeg degree-table v1";

/// Which faces to compute; empty lists select everything.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FaceFilter {
    pub dims: Vec<usize>,
    pub codims: Vec<usize>,
}

impl FaceFilter {
    fn accepts(&self, dim: usize, ball_dim: usize) -> bool {
        (self.dims.is_empty() || self.dims.contains(&dim))
            && (self.codims.is_empty() || self.codims.contains(&(ball_dim - dim)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    pub filter: FaceFilter,
    pub wdeg: WdegOptions,
    /// Worker threads; `0` uses the global pool.
    pub jobs: usize,
    /// JSON-lines file of completed faces, read on start and appended to.
    pub journal: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceOutcome {
    pub dim: usize,
    pub index: usize,
    pub outcome: DegreeOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grouping {
    Dimension,
    Codimension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub model: String,
    pub metric: String,
    pub ball_dim: usize,
    pub f_vector: Vec<usize>,
    /// Sorted by dimension, then index.
    pub faces: Vec<FaceOutcome>,
}

impl DegreeTable {
    /// Outcome counts keyed by face dimension or codimension.
    pub fn frequencies(&self, grouping: Grouping) -> BTreeMap<usize, BTreeMap<DegreeOutcome, usize>> {
        let mut out: BTreeMap<usize, BTreeMap<DegreeOutcome, usize>> = BTreeMap::new();
        for f in &self.faces {
            let key = match grouping {
                Grouping::Dimension => f.dim,
                Grouping::Codimension => self.ball_dim - f.dim,
            };
            *out.entry(key).or_default().entry(f.outcome).or_default() += 1;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{CSV_HEADER}\nface_dim,face_codim,outcome,count\n");
        for (dim, counts) in self.frequencies(Grouping::Dimension) {
            for (o, k) in counts {
                writeln!(s, "{dim},{},{o},{k}", self.ball_dim - dim).unwrap();
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            model: &'a str,
            metric: &'a str,
            ball_dim: usize,
            f_vector: &'a [usize],
            by_dim: BTreeMap<usize, BTreeMap<String, usize>>,
            faces: &'a [FaceOutcome],
        }
        let by_dim = self
            .frequencies(Grouping::Dimension)
            .into_iter()
            .map(|(d, c)| (d, c.into_iter().map(|(o, k)| (o.to_string(), k)).collect()))
            .collect();
        let out = Out {
            model: &self.model,
            metric: &self.metric,
            ball_dim: self.ball_dim,
            f_vector: &self.f_vector,
            by_dim,
            faces: &self.faces,
        };
        serde_json::to_string_pretty(&out).unwrap()
    }

    /// One line per group in `k : s` notation.
    pub fn pretty(&self, grouping: Grouping) -> String {
        let mut s = format!("{} with {}, f-vector {:?}\n", self.model, self.metric, self.f_vector);
        let word = match grouping {
            Grouping::Dimension => "dim",
            Grouping::Codimension => "codim",
        };
        for (key, counts) in self.frequencies(grouping) {
            let cells: Vec<String> = counts.iter().map(|(o, k)| format!("{o} : {k}")).collect();
            writeln!(s, "{word} {key}: {}", cells.join(", ")).unwrap();
        }
        s
    }
}

#[derive(Serialize, Deserialize, PartialEq)]
struct JournalHeader {
    journal: String,
    model: String,
    a: Vec<Vec<i64>>,
    scaling: Vec<Rational>,
    metric: String,
    mu: SimplexPoint,
}

fn read_journal(path: &PathBuf, header: &JournalHeader) -> Result<HashMap<(usize, usize), DegreeOutcome>, WdegError> {
    let mut done = HashMap::new();
    let Ok(file) = File::open(path) else {
        return Ok(done);
    };
    let mut lines = BufReader::new(file).lines();
    let Some(first) = lines.next().transpose()? else {
        return Ok(done);
    };
    let found: JournalHeader =
        serde_json::from_str(&first).map_err(|e| WdegError::Journal(format!("bad header: {e}")))?;
    if &found != header {
        return Err(WdegError::Journal(format!("{} belongs to a different run", path.display())));
    }
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // A torn final line from an interrupted run is skipped and recomputed.
        if let Ok(f) = serde_json::from_str::<FaceOutcome>(&line) {
            done.insert((f.dim, f.index), f.outcome);
        }
    }
    Ok(done)
}

/// Degree table over the faces of the ball of `metric`.
pub fn degree_table(
    model: &ToricModel,
    metric: &FiniteMetric,
    metric_label: &str,
    mu: &SimplexPoint,
    opts: &TableOptions,
) -> Result<DegreeTable, WdegError> {
    if model.n() != metric.n() {
        return Err(WdegError::DimensionMismatch { model: model.n(), metric: metric.n() });
    }
    let lattice = face_lattice(&wasserstein_ball(metric));
    degree_table_on_lattice(model, &lattice, metric_label, mu, opts)
}

/// As [`degree_table`] for a precomputed face lattice.
pub fn degree_table_on_lattice(
    model: &ToricModel,
    lattice: &FaceLattice,
    metric_label: &str,
    mu: &SimplexPoint,
    opts: &TableOptions,
) -> Result<DegreeTable, WdegError> {
    let ball_dim = lattice.dim();
    let header = JournalHeader {
        journal: CSV_HEADER.trim_start_matches("# ").into(),
        model: model.label.clone(),
        a: model.a.clone(),
        scaling: model.scaling.clone(),
        metric: metric_label.into(),
        mu: mu.clone(),
    };
    let done = match &opts.journal {
        Some(p) => read_journal(p, &header)?,
        None => HashMap::new(),
    };
    let writer = match &opts.journal {
        Some(p) => {
            let existing = std::fs::read(p).unwrap_or_default();
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            if existing.is_empty() {
                writeln!(f, "{}", serde_json::to_string(&header).unwrap())?;
            } else if existing.last() != Some(&b'\n') {
                writeln!(f)?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };

    let todo: Vec<(usize, usize)> = (0..ball_dim)
        .filter(|&d| opts.filter.accepts(d, ball_dim))
        .flat_map(|d| (0..lattice.faces(d).len()).map(move |k| (d, k)))
        .filter(|key| !done.contains_key(key))
        .collect();
    let work = |&(dim, index): &(usize, usize)| -> Result<FaceOutcome, WdegError> {
        let start = Instant::now();
        let outcome = wasserstein_degree(model, &lattice.faces(dim)[index], mu, &opts.wdeg)?;
        log::info!("face dim {dim} #{index}: {outcome} in {:.3}s", start.elapsed().as_secs_f64());
        let f = FaceOutcome { dim, index, outcome };
        if let Some(w) = &writer {
            let mut w = w.lock().unwrap();
            writeln!(w, "{}", serde_json::to_string(&f).unwrap())?;
            w.flush()?;
        }
        Ok(f)
    };
    let computed: Vec<FaceOutcome> = if opts.jobs == 0 {
        todo.par_iter().map(work).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| WdegError::Pool(e.to_string()))?;
        pool.install(|| todo.par_iter().map(work).collect::<Result<_, _>>())?
    };

    let mut faces: Vec<FaceOutcome> = done
        .into_iter()
        .filter(|&((d, _), _)| opts.filter.accepts(d, ball_dim))
        .map(|((dim, index), outcome)| FaceOutcome { dim, index, outcome })
        .chain(computed)
        .collect();
    faces.sort_by_key(|f| (f.dim, f.index));
    Ok(DegreeTable {
        model: model.label.clone(),
        metric: metric_label.into(),
        ball_dim,
        f_vector: lattice.f_vector(),
        faces,
    })
}
