use std::fmt;
use std::ops::{Index, IndexMut};

use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for integer literals. Panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self, MatrixError> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(MatrixError::Shape("ragged columns".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Rank via fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        bareiss(self).1
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det_bareiss(&self) -> Result<Rational, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (m, rank, sign) = bareiss(self);
        if rank < self.rows {
            return Ok(Rational::zero());
        }
        let d = m[(self.rows - 1, self.cols - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Fraction-free elimination. Rational input is first scaled row-wise to
/// integers so that every Bareiss division is exact. Returns the eliminated
/// matrix (rescaled back), the rank and the permutation sign.
fn bareiss(input: &RatMatrix) -> (RatMatrix, usize, i32) {
    let mut m = input.clone();
    // Row scaling factors, undone for the determinant at the end.
    let mut scale = Rational::one();
    for i in 0..m.rows {
        let l = super::rational::denominator_lcm(m.row(i).iter());
        if l != num_bigint::BigInt::from(1) {
            let f = Rational::from_bigint(l);
            for j in 0..m.cols {
                let v = &m[(i, j)] * &f;
                m[(i, j)] = v;
            }
            scale = &scale * &f;
        }
    }
    let mut sign = 1;
    let mut prev = Rational::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap_rows(r, p);
            sign = -sign;
        }
        for i in r + 1..m.rows {
            for j in c + 1..m.cols {
                let v = &(&(&m[(r, c)] * &m[(i, j)]) - &(&m[(i, c)] * &m[(r, j)])) / &prev;
                m[(i, j)] = v;
            }
            m[(i, c)] = Rational::zero();
        }
        prev = m[(r, c)].clone();
        pivot_cols.push(c);
        r += 1;
    }
    if r == m.rows && m.rows == m.cols && r > 0 {
        let last = m.rows - 1;
        let v = &m[(last, last)] / &scale;
        m[(last, last)] = v;
    }
    (m, r, sign)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    /// Cofactor expansion, kept independent of the elimination code.
    fn det_cofactor(a: &RatMatrix) -> Rational {
        let n = a.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = det_cofactor(&a.select(&rows, &cols));
            let term = &a[(0, j)] * &minor;
            if j % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    #[test]
    fn rref_examples() {
        let (r, p) = RatMatrix::identity(3).rref();
        assert_eq!(r, RatMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = RatMatrix::zeros(2, 2).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());

        let (r, p) = m(&[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).rref();
        assert_eq!(r, m(&[vec![1, 0, -1, -2], vec![0, 1, 2, 3]]));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert!(RatMatrix::identity(2).kernel_basis().is_empty());

        let a = m(&[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Rational::is_zero));
        }
        // (1,-2,1,0) and (0,1,-2,1) lie in the span of the basis.
        let mut stacked = k.clone();
        stacked.push([1, -2, 1, 0].map(Rational::from_int).to_vec());
        stacked.push([0, 1, -2, 1].map(Rational::from_int).to_vec());
        assert_eq!(RatMatrix::from_rows(stacked).unwrap().rank(), 2);

        let ones = m(&[vec![1, 1, 1]]);
        assert_eq!(ones.kernel_basis().len(), 2);
    }

    #[test]
    fn determinant_examples() {
        for n in 1..5 {
            assert_eq!(RatMatrix::identity(n).det_bareiss().unwrap(), Rational::one());
        }
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det_bareiss().unwrap(), Rational::from_int(-1));
        assert_eq!(
            m(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]).det_bareiss().unwrap(),
            Rational::from_int(30)
        );
        assert!(matches!(
            m(&[vec![1, 2, 3]]).det_bareiss(),
            Err(MatrixError::NonSquare { rows: 1, cols: 3 })
        ));
        let frac = RatMatrix::from_rows(vec![
            vec![Rational::new(1, 2), Rational::new(1, 3)],
            vec![Rational::new(1, 5), Rational::new(2, 7)],
        ])
        .unwrap();
        assert_eq!(frac.det_bareiss().unwrap(), det_cofactor(&frac));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        // Hirzebruch (a, b) = (1, 2) matrix.
        let h = m(&[vec![1, 1, 1, 1, 1], vec![0, 1, 0, 1, 2], vec![0, 0, 1, 1, 1]]);
        assert_eq!(h.rank(), 3);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
        let x = a.solve(&[Rational::from_int(3), Rational::from_int(2)]).unwrap();
        assert_eq!(x, vec![Rational::one(), Rational::one()]);
        let s = m(&[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_none());
        assert!(s.solve(&[Rational::one(), Rational::one()]).is_none());
        assert!(s.solve(&[Rational::one(), Rational::from_int(2)]).is_some());
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c).map(|ch| ch.to_vec()).collect();
                RatMatrix::from_i64(&rows)
            })
        })
    }

    fn square_matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(n).map(|ch| ch.to_vec()).collect();
                RatMatrix::from_i64(&rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in small_matrix(5)) {
            let (r, p) = a.rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p, p2);
        }

        #[test]
        fn kernel_vectors_are_annihilated(a in small_matrix(5)) {
            let k = a.kernel_basis();
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(Rational::is_zero));
            }
            prop_assert_eq!(a.rank() + k.len(), a.cols());
            if !k.is_empty() {
                prop_assert_eq!(RatMatrix::from_rows(k.clone()).unwrap().rank(), k.len());
            }
        }

        #[test]
        fn bareiss_matches_cofactor(a in square_matrix(4)) {
            prop_assert_eq!(a.det_bareiss().unwrap(), det_cofactor(&a));
        }

        #[test]
        fn rank_matches_rref(a in small_matrix(5)) {
            prop_assert_eq!(a.rank(), a.rref().1.len());
        }
    }
}
