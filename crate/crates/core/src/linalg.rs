//! Dense matrices over a finite field.
//!
//! [`FqMatrix`] is a row-major matrix of [`Element`]s tied to one
//! [`FieldSpec`].  It provides the arithmetic, Gaussian elimination, and
//! structure predicates (Toeplitz, diagonal, monomial, permutation) that
//! the code- and construction-level modules build on.  All elimination
//! routines pick the first nonzero pivot, so every result is
//! deterministic for a given input.

use crate::gf::{Element, FieldSpec};
use crate::{Error, Result};
use std::fmt;
use std::ops::Index;

/// A `rows x cols` matrix over a fixed finite field, stored row-major.
///
/// Zero-row matrices (`0 x n`) are legal and show up naturally as
/// generator matrices of the zero code; all routines accept them.
#[derive(Clone)]
pub struct FqMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl PartialEq for FqMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for FqMatrix {}

impl Index<(usize, usize)> for FqMatrix {
    type Output = Element;
    fn index(&self, (i, j): (usize, usize)) -> &Element {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(fm, "FqMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format_element(self[(i, j)]))
                .collect();
            writeln!(fm, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FqMatrix {
    // ------------------------------------------------------------------
    // constructors
    // ------------------------------------------------------------------

    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Element>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadInput(format!(
                "expected {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// The flip matrix `Q` with ones on the anti-diagonal.
    pub fn anti_identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Element,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: Vec<Vec<Element>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::BadInput(format!(
                    "ragged rows: expected {} columns, got {}",
                    c,
                    row.len()
                )));
            }
        }
        Ok(FqMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(field: &FieldSpec, diag: &[Element]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Square Toeplitz matrix from its first row and first column; the two
    /// must agree on the shared corner entry.
    pub fn toeplitz(field: &FieldSpec, first_row: &[Element], first_col: &[Element]) -> Result<Self> {
        let n = first_row.len();
        if first_col.len() != n {
            return Err(Error::DimensionMismatch {
                context: "Toeplitz first row vs first column",
                left: n.to_string(),
                right: first_col.len().to_string(),
            });
        }
        if n > 0 && first_row[0] != first_col[0] {
            return Err(Error::BadInput(
                "Toeplitz first row and first column disagree on the corner entry".into(),
            ));
        }
        Ok(Self::from_fn(field, n, n, |i, j| {
            if j >= i {
                first_row[j - i]
            } else {
                first_col[i - j]
            }
        }))
    }

    /// Permutation matrix with `P[i, perm[i]] = 1`.
    pub fn permutation(field: &FieldSpec, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &j in perm {
            if j >= n || seen[j] {
                return Err(Error::BadInput(format!("{:?} is not a permutation of 0..{}", perm, n)));
            }
            seen[j] = true;
        }
        let mut m = Self::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        Ok(m)
    }

    // ------------------------------------------------------------------
    // accessors
    // ------------------------------------------------------------------

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: Element) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Element] {
        assert!(i < self.rows, "row out of range");
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Element]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn entries(&self) -> &[Element] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::BadShape {
                rows: self.rows,
                cols: self.cols,
                context: "an operation that needs a square matrix",
            })
        }
    }

    fn ensure_same_field(&self, other: &FqMatrix) -> Result<()> {
        self.field.ensure_same(&other.field)
    }

    // ------------------------------------------------------------------
    // arithmetic
    // ------------------------------------------------------------------

    pub fn add(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.ensure_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix addition",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(FqMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        FqMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: Element) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        FqMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.ensure_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix multiplication",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out[(i, j)];
                    out.set(i, j, f.add(cur, f.mul(a, other[(k, j)])));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FqMatrix {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise Frobenius power `x -> x^(p^e)`.
    pub fn frobenius_map(&self, e: u32) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.frobenius(a, e)).collect();
        FqMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Row vector times matrix: `v * self`.
    pub fn apply_to_row(&self, v: &[Element]) -> Result<Vec<Element>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "row-vector times matrix",
                left: v.len().to_string(),
                right: format!("{}x{}", self.rows, self.cols),
            });
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(vi, self[(i, j)]));
            }
        }
        Ok(out)
    }

    pub fn kronecker(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.ensure_same_field(other)?;
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let f = &self.field;
        Ok(Self::from_fn(f, r1 * r2, c1 * c2, |i, j| {
            let a = self[(i / r2, j / c2)];
            let b = other[(i % r2, j % c2)];
            f.mul(a, b)
        }))
    }

    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.ensure_same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vertical stack",
                left: self.cols.to_string(),
                right: other.cols.to_string(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FqMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// The leading `k x k` principal submatrix.
    pub fn leading_principal(&self, k: usize) -> Result<FqMatrix> {
        if k > self.rows || k > self.cols {
            return Err(Error::BadShape {
                rows: self.rows,
                cols: self.cols,
                context: "a leading principal submatrix larger than the matrix",
            });
        }
        Ok(Self::from_fn(&self.field, k, k, |i, j| self[(i, j)]))
    }

    /// The first `ell` rows as a new matrix.
    pub fn top_rows(&self, ell: usize) -> Result<FqMatrix> {
        if ell > self.rows {
            return Err(Error::BadShape {
                rows: self.rows,
                cols: self.cols,
                context: "a top-rows selection past the last row",
            });
        }
        Ok(FqMatrix {
            field: self.field.clone(),
            rows: ell,
            cols: self.cols,
            data: self.data[..ell * self.cols].to_vec(),
        })
    }

    /// The submatrix using all rows and the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<FqMatrix> {
        for &j in cols {
            if j >= self.cols {
                return Err(Error::BadInput(format!(
                    "column {} out of range for a {}-column matrix",
                    j, self.cols
                )));
            }
        }
        Ok(Self::from_fn(&self.field, self.rows, cols.len(), |i, j| {
            self[(i, cols[j])]
        }))
    }

    // ------------------------------------------------------------------
    // elimination
    // ------------------------------------------------------------------

    pub fn det(&self) -> Result<Element> {
        self.ensure_square()?;
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Ok(f.zero());
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = f.neg(det);
            }
            let pv = m[(col, col)];
            det = f.mul(det, pv);
            let inv = f.inv(pv)?;
            for r in col + 1..n {
                let factor = f.mul(m[(r, col)], inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m[(r, c)], f.mul(factor, m[(col, c)]));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        self.ensure_square()?;
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(&f, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Err(Error::Singular);
            };
            if pr != col {
                m.swap_rows(pr, col);
                inv.swap_rows(pr, col);
            }
            let scale = f.inv(m[(col, col)])?;
            m.scale_row(col, scale);
            inv.scale_row(col, scale);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m[(r, col)];
                if factor.is_zero() {
                    continue;
                }
                m.add_scaled_row(col, r, f.neg(factor));
                inv.add_scaled_row(col, r, f.neg(factor));
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if pr != r {
                m.swap_rows(pr, r);
            }
            let scale = f.inv(m[(r, col)]).expect("pivot is nonzero");
            m.scale_row(r, scale);
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, col)];
                if factor.is_zero() {
                    continue;
                }
                m.add_scaled_row(r, i, f.neg(factor));
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis (as rows) of `{x : self * x^T = 0}`; returns a
    /// `nullity x cols` matrix built from the standard free-column
    /// construction on the reduced row echelon form.
    pub fn right_nullspace(&self) -> FqMatrix {
        let f = self.field.clone();
        let (rr, pivots) = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut data = Vec::with_capacity(free.len() * n);
        for &fj in &free {
            let mut x = vec![f.zero(); n];
            x[fj] = f.one();
            for (r, &pj) in pivots.iter().enumerate() {
                x[pj] = f.neg(rr[(r, fj)]);
            }
            data.extend(x);
        }
        Self::new(&f, free.len(), n, data).expect("nullspace rows are uniform")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: Element) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = f.mul(self[(r, j)], c);
            self.set(r, j, v);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_scaled_row(&mut self, src: usize, dst: usize, c: Element) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = f.add(self[(dst, j)], f.mul(c, self[(src, j)]));
            self.set(dst, j, v);
        }
    }

    // ------------------------------------------------------------------
    // structure predicates
    // ------------------------------------------------------------------

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn first_off_diagonal(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self[(i, j)].is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && self.first_off_diagonal().is_none()
    }

    fn first_broken_diagonal(&self) -> Option<(usize, usize)> {
        for i in 1..self.rows {
            for j in 1..self.cols {
                if self[(i, j)] != self[(i - 1, j - 1)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_toeplitz(&self) -> bool {
        self.is_square() && self.first_broken_diagonal().is_none()
    }

    pub fn require_toeplitz(&self) -> Result<()> {
        self.ensure_square()?;
        match self.first_broken_diagonal() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NotToeplitz(i, j)),
        }
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            if self[(i, i)] != self.field.one() {
                return false;
            }
            for j in i + 1..self.cols {
                if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_permutation(&self) -> bool {
        match self.monomial_decompose() {
            Ok(d) => d.diag.iter().all(|&v| v == self.field.one()),
            Err(_) => false,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial_decompose().is_ok()
    }

    /// The diagonal entries; fails if any off-diagonal entry is nonzero.
    pub fn require_diagonal(&self) -> Result<Vec<Element>> {
        self.ensure_square()?;
        if let Some((i, j)) = self.first_off_diagonal() {
            return Err(Error::NotDiagonal(i, j));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).collect())
    }

    /// Split a monomial matrix as `M = D * P` with `D` diagonal and `P` a
    /// permutation; `M[i, perm[i]] = diag[i]` is the only nonzero of row `i`.
    pub fn monomial_decompose(&self) -> Result<MonomialDecomposition> {
        self.ensure_square()?;
        let n = self.rows;
        let mut diag = Vec::with_capacity(n);
        let mut perm = Vec::with_capacity(n);
        let mut col_used = vec![false; n];
        for i in 0..n {
            let hits: Vec<usize> = (0..n).filter(|&j| !self[(i, j)].is_zero()).collect();
            if hits.len() != 1 {
                return Err(Error::NotMonomial(i, hits.len()));
            }
            let j = hits[0];
            if col_used[j] {
                return Err(Error::NotMonomial(i, 2));
            }
            col_used[j] = true;
            perm.push(j);
            diag.push(self[(i, j)]);
        }
        Ok(MonomialDecomposition { diag, perm })
    }

    // ------------------------------------------------------------------
    // JSON
    // ------------------------------------------------------------------

    /// Entries as an array of row arrays of element strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self
            .rows_iter()
            .map(|row| row.iter().map(|&e| self.field.format_element(e)).collect())
            .collect();
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": rows,
        })
    }

    /// Parse from either `{"entries": [[..]]}` or a bare array of rows;
    /// each entry may be any accepted element form (string, coefficient
    /// array, or small integer).
    pub fn from_json(field: &FieldSpec, v: &serde_json::Value) -> Result<Self> {
        let entries = match v {
            serde_json::Value::Array(_) => v,
            serde_json::Value::Object(map) => map
                .get("entries")
                .ok_or_else(|| Error::BadInput("matrix object lacks \"entries\"".into()))?,
            _ => return Err(Error::BadInput("expected a matrix array or object".into())),
        };
        let rows_json = entries
            .as_array()
            .ok_or_else(|| Error::BadInput("matrix entries must be an array of rows".into()))?;
        let mut rows = Vec::with_capacity(rows_json.len());
        for row in rows_json {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::BadInput("each matrix row must be an array".into()))?;
            let mut out = Vec::with_capacity(cells.len());
            for cell in cells {
                out.push(field.element_from_json(cell)?);
            }
            rows.push(out);
        }
        Self::from_rows(field, rows)
    }
}

/// A monomial matrix written as `diag * permutation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialDecomposition {
    /// `diag[i]` is the unique nonzero entry of row `i`.
    pub diag: Vec<Element>,
    /// `perm[i]` is the column carrying that entry.
    pub perm: Vec<usize>,
}

impl MonomialDecomposition {
    pub fn compose(&self, field: &FieldSpec) -> Result<FqMatrix> {
        let p = FqMatrix::permutation(field, &self.perm)?;
        Ok(FqMatrix::diagonal(field, &self.diag).mul(&p)?)
    }
}

/// Dot product of two equal-length vectors.
pub fn dot(field: &FieldSpec, u: &[Element], v: &[Element]) -> Result<Element> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            context: "dot product",
            left: u.len().to_string(),
            right: v.len().to_string(),
        });
    }
    let mut acc = field.zero();
    for (&a, &b) in u.iter().zip(v) {
        acc = field.add(acc, field.mul(a, b));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, h: u32) -> FieldSpec {
        FieldSpec::new(p, h, None).unwrap()
    }

    fn random_matrix(field: &FieldSpec, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FqMatrix {
        let els: Vec<Element> = field.elements().collect();
        FqMatrix::from_fn(field, rows, cols, |_, _| els[rng.random_range(0..els.len())])
    }

    /// Determinant by explicit permutation expansion, as an independent
    /// check of the elimination-based routine.
    fn leibniz_det(m: &FqMatrix) -> Element {
        let field = m.field().clone();
        let n = m.rows();
        if n == 0 {
            return field.one();
        }
        fn next_permutation(p: &mut [usize]) -> bool {
            let n = p.len();
            let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
                return false;
            };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            true
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = field.zero();
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut term = field.one();
            for (i, &j) in perm.iter().enumerate() {
                term = field.mul(term, m[(i, j)]);
            }
            if inversions % 2 == 1 {
                term = field.neg(term);
            }
            acc = field.add(acc, term);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        acc
    }

    #[test]
    fn det_matches_permutation_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [f(5, 1), f(2, 3), f(3, 2)] {
            for n in 0..=4 {
                for _ in 0..8 {
                    let m = random_matrix(&field, n, n, &mut rng);
                    assert_eq!(m.det().unwrap(), leibniz_det(&m), "{:?}", m);
                }
            }
        }
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let field = f(3, 2);
        let mut found = 0;
        while found < 20 {
            let n = rng.random_range(1..=5);
            let m = random_matrix(&field, n, n, &mut rng);
            let Ok(inv) = m.inverse() else {
                assert_eq!(m.det().unwrap(), field.zero());
                continue;
            };
            found += 1;
            let id = FqMatrix::identity(&field, n);
            assert_eq!(m.mul(&inv).unwrap(), id);
            assert_eq!(inv.mul(&m).unwrap(), id);
        }
    }

    #[test]
    fn rref_is_canonical_and_rank_revealing() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let field = f(2, 2);
        for _ in 0..40 {
            let rows = rng.random_range(0..=5);
            let cols = rng.random_range(1..=6);
            let m = random_matrix(&field, rows, cols, &mut rng);
            let (rr, pivots) = m.rref();
            // Pivot columns strictly increase and carry unit vectors.
            for (r, &pj) in pivots.iter().enumerate() {
                if r > 0 {
                    assert!(pivots[r - 1] < pj);
                }
                assert_eq!(rr[(r, pj)], field.one());
                for i in 0..rr.rows() {
                    if i != r {
                        assert!(rr[(i, pj)].is_zero());
                    }
                }
            }
            // Rows past the rank are zero.
            for i in pivots.len()..rr.rows() {
                assert!(rr.row(i).iter().all(|e| e.is_zero()));
            }
            // Row space is preserved: stacking does not raise the rank.
            assert_eq!(m.rank(), pivots.len());
            assert_eq!(m.vstack(&rr).unwrap().rank(), pivots.len());
        }
    }

    #[test]
    fn right_nullspace_is_exactly_the_kernel() {
        // Exhaustive over F_3 vectors of length <= 4.
        let field = f(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..25 {
            let rows = rng.random_range(0..=3);
            let cols = rng.random_range(1..=4);
            let m = random_matrix(&field, rows, cols, &mut rng);
            let ns = m.right_nullspace();
            assert_eq!(ns.rows(), cols - m.rank());
            // Each basis row really is in the kernel.
            for r in ns.rows_iter() {
                let image = m.mul(&FqMatrix::from_rows(&field, vec![r.to_vec()]).unwrap().transpose()).unwrap();
                assert!(image.is_zero());
            }
            // Exhaustively: membership in the kernel equals membership in
            // the row space of `ns`, checked via rank.
            let q = field.order() as usize;
            let els: Vec<Element> = field.elements().collect();
            let mut kernel_count = 0u64;
            for idx in 0..q.pow(cols as u32) {
                let mut x = Vec::with_capacity(cols);
                let mut t = idx;
                for _ in 0..cols {
                    x.push(els[t % q]);
                    t /= q;
                }
                let xm = FqMatrix::from_rows(&field, vec![x]).unwrap();
                let in_kernel = m.mul(&xm.transpose()).unwrap().is_zero();
                if in_kernel {
                    kernel_count += 1;
                    assert_eq!(ns.vstack(&xm).unwrap().rank(), ns.rows(), "kernel vector outside basis span");
                }
            }
            assert_eq!(kernel_count, (q as u64).pow(ns.rows() as u32));
        }
    }

    #[test]
    fn flipping_a_toeplitz_matrix_transposes_it() {
        // Q * A^T * Q = A for any square Toeplitz A.
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let field = f(2, 3);
        let els: Vec<Element> = field.elements().collect();
        for n in 1..=6 {
            for _ in 0..20 {
                let first_row: Vec<_> = (0..n).map(|_| els[rng.random_range(0..els.len())]).collect();
                let mut first_col: Vec<_> = (0..n).map(|_| els[rng.random_range(0..els.len())]).collect();
                first_col[0] = first_row[0];
                let a = FqMatrix::toeplitz(&field, &first_row, &first_col).unwrap();
                assert!(a.is_toeplitz());
                let q = FqMatrix::anti_identity(&field, n);
                let flipped = q.mul(&a.transpose()).unwrap().mul(&q).unwrap();
                assert_eq!(flipped, a);
            }
        }
    }

    #[test]
    fn kronecker_mixed_product_rule() {
        // (A (x) B)(C (x) D) = (AC) (x) (BD).
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let field = f(3, 2);
        for _ in 0..10 {
            let a = random_matrix(&field, 2, 3, &mut rng);
            let c = random_matrix(&field, 3, 2, &mut rng);
            let b = random_matrix(&field, 3, 2, &mut rng);
            let d = random_matrix(&field, 2, 3, &mut rng);
            let lhs = a.kronecker(&b).unwrap().mul(&c.kronecker(&d).unwrap()).unwrap();
            let rhs = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomial_decompose_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let field = f(2, 2);
        let nonzero: Vec<Element> = field.elements().filter(|e| !e.is_zero()).collect();
        for n in 1..=6 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let diag: Vec<Element> = (0..n).map(|_| nonzero[rng.random_range(0..nonzero.len())]).collect();
            let m = MonomialDecomposition { diag: diag.clone(), perm: perm.clone() }
                .compose(&field)
                .unwrap();
            assert!(m.is_monomial());
            let d = m.monomial_decompose().unwrap();
            assert_eq!(d.diag, diag);
            assert_eq!(d.perm, perm);
        }
        // Non-monomial inputs are rejected with the offending row.
        let zero = FqMatrix::zeros(&field, 2, 2);
        assert!(matches!(zero.monomial_decompose(), Err(crate::Error::NotMonomial(0, 0))));
        let two = FqMatrix::from_rows(
            &field,
            vec![
                vec![field.one(), field.one()],
                vec![field.zero(), field.one()],
            ],
        )
        .unwrap();
        assert!(matches!(two.monomial_decompose(), Err(crate::Error::NotMonomial(0, 2))));
    }

    #[test]
    fn anti_identity_is_a_self_inverse_symmetric_permutation() {
        let field = f(3, 4);
        for n in 1..=5 {
            let q = FqMatrix::anti_identity(&field, n);
            assert!(q.is_permutation());
            assert_eq!(q.transpose(), q);
            assert_eq!(q.frobenius_map(3), q);
            assert_eq!(q.mul(&q).unwrap(), FqMatrix::identity(&field, n));
            assert_eq!(q.inverse().unwrap(), q);
        }
    }

    #[test]
    fn frobenius_map_distributes_over_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let field = f(3, 4);
        let a = random_matrix(&field, 3, 3, &mut rng);
        let b = random_matrix(&field, 3, 3, &mut rng);
        let lhs = a.mul(&b).unwrap().frobenius_map(3);
        let rhs = a.frobenius_map(3).mul(&b.frobenius_map(3)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(a.frobenius_map(0), a);
    }

    #[test]
    fn zero_row_matrices_are_legal() {
        let field = f(2, 1);
        let empty = FqMatrix::zeros(&field, 0, 4);
        assert_eq!(empty.rank(), 0);
        let (rr, pivots) = empty.rref();
        assert_eq!(rr.rows(), 0);
        assert!(pivots.is_empty());
        assert_eq!(empty.right_nullspace(), FqMatrix::identity(&field, 4));
        let m = FqMatrix::identity(&field, 4);
        assert_eq!(empty.mul(&m).unwrap().rows(), 0);
    }

    #[test]
    fn json_roundtrip_and_forms() {
        let field = f(3, 4);
        let m = FqMatrix::from_rows(
            &field,
            vec![
                vec![field.omega_pow(10), field.zero()],
                vec![field.one(), field.from_int(2)],
            ],
        )
        .unwrap();
        let j = m.to_json();
        assert_eq!(j["entries"][0][0], "w^10");
        let back = FqMatrix::from_json(&field, &j).unwrap();
        assert_eq!(back, m);
        // Bare array-of-rows form with mixed element encodings.
        let v: serde_json::Value = serde_json::json!([["w^10", 0], [1, 2]]);
        assert_eq!(FqMatrix::from_json(&field, &v).unwrap(), m);
        let bad: serde_json::Value = serde_json::json!([[1, 0], [1]]);
        assert!(FqMatrix::from_json(&field, &bad).is_err());
    }

    #[test]
    fn shape_and_field_guards_fire() {
        let f1 = f(2, 2);
        let f2 = f(3, 1);
        let a = FqMatrix::identity(&f1, 2);
        let b = FqMatrix::identity(&f2, 2);
        assert!(matches!(a.mul(&b), Err(crate::Error::MixedFields(_, _))));
        let c = FqMatrix::zeros(&f1, 3, 2);
        assert!(matches!(a.add(&c), Err(crate::Error::DimensionMismatch { .. })));
        assert!(matches!(c.det(), Err(crate::Error::BadShape { .. })));
        assert!(matches!(
            FqMatrix::toeplitz(&f1, &[f1.one(), f1.zero()], &[f1.zero(), f1.zero()]),
            Err(crate::Error::BadInput(_))
        ));
        assert!(FqMatrix::permutation(&f1, &[0, 0]).is_err());
        let d = FqMatrix::from_rows(&f1, vec![vec![f1.one(), f1.one()], vec![f1.zero(), f1.one()]]).unwrap();
        assert!(matches!(d.require_diagonal(), Err(crate::Error::NotDiagonal(0, 1))));
        assert!(matches!(d.require_toeplitz(), Ok(())));
        let e = FqMatrix::from_rows(&f1, vec![vec![f1.one(), f1.one()], vec![f1.zero(), f1.zero()]]).unwrap();
        assert!(matches!(e.require_toeplitz(), Err(crate::Error::NotToeplitz(1, 1))));
    }
}
