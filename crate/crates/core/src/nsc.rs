//! Non-singular by columns (NSC) matrices: testing, witnesses, transforms
//! that preserve the property, and rejection samplers.
//!
//! A square matrix is NSC when, for every `ell`, every `ell x ell` minor
//! built from the first `ell` rows is non-singular.  NSC defining matrices
//! give matrix-product codes sharp distance bounds for both the code and
//! its dual, so most of this crate's constructions start from one.

use crate::gf::{Element, FieldSpec};
use crate::linalg::FqMatrix;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest matrix size accepted by the exhaustive minor scan; the scan
/// visits `2^n - 1` minors, so this caps worst-case work.
pub const MAX_NSC_SCAN_SIZE: usize = 24;

/// Location of one minor: the first `ell` rows and the listed columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorIndex {
    pub ell: usize,
    pub cols: Vec<usize>,
}

/// Outcome of an NSC scan.  When the matrix is not NSC, `witness` names
/// the first vanishing minor in scan order (increasing `ell`, then
/// lexicographic column sets).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NscReport {
    pub is_nsc: bool,
    pub witness: Option<MinorIndex>,
    pub minors_checked: u64,
}

/// Visit all `ell`-subsets of `0..n` in lexicographic order until the
/// callback asks to stop by returning `false`.
fn for_each_combination(n: usize, ell: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..ell).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // Advance to the next combination.
        let Some(i) = (0..ell).rev().find(|&i| idx[i] < n - ell + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..ell {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Scan every minor of the first `ell` rows for `ell = 1..=n`, stopping at
/// the first singular one.
pub fn nsc_report(a: &FqMatrix) -> Result<NscReport> {
    a.ensure_square()?;
    let n = a.rows();
    if n > MAX_NSC_SCAN_SIZE {
        return Err(Error::BadInput(format!(
            "NSC scan visits 2^{} minors; matrices larger than {} are not supported",
            n, MAX_NSC_SCAN_SIZE
        )));
    }
    let mut checked = 0u64;
    let mut witness = None;
    for ell in 1..=n {
        let top = a.top_rows(ell)?;
        let mut found: Option<Vec<usize>> = None;
        for_each_combination(n, ell, |cols| {
            checked += 1;
            let minor = top
                .select_columns(cols)
                .expect("combination indices are in range");
            if minor.det().expect("minor is square").is_zero() {
                found = Some(cols.to_vec());
                false
            } else {
                true
            }
        });
        if let Some(cols) = found {
            witness = Some(MinorIndex { ell, cols });
            break;
        }
    }
    Ok(NscReport {
        is_nsc: witness.is_none(),
        witness,
        minors_checked: checked,
    })
}

pub fn is_nsc(a: &FqMatrix) -> Result<bool> {
    Ok(nsc_report(a)?.is_nsc)
}

pub fn require_nsc(a: &FqMatrix) -> Result<()> {
    match nsc_report(a)?.witness {
        None => Ok(()),
        Some(w) => Err(Error::NotNsc {
            ell: w.ell,
            cols: w.cols,
        }),
    }
}

/// Determinants of the `k x k` leading principal blocks, `k = 1..=n`.
pub fn leading_principal_minors(a: &FqMatrix) -> Result<Vec<Element>> {
    a.ensure_square()?;
    (1..=a.rows())
        .map(|k| a.leading_principal(k)?.det())
        .collect()
}

/// A transform that maps NSC matrices to NSC matrices.
///
/// The diagonal scalings work for every NSC input; the flipped inverse
/// transpose needs only NSC; the Frobenius-inverse flip additionally needs
/// the input to be Toeplitz.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureOp {
    /// `A -> D A` for a diagonal `D` with nonzero entries.
    LeftDiag(Vec<Element>),
    /// `A -> A D` for a diagonal `D` with nonzero entries.
    RightDiag(Vec<Element>),
    /// `A -> Q (A^{-1})^T` where `Q` is the anti-diagonal flip.
    FlipInverseTranspose,
    /// `A -> pi_e(A)^{-1} Q`; the input must be an NSC Toeplitz matrix.
    FrobeniusInverseFlip(u32),
}

fn require_nonzero_diag(diag: &[Element]) -> Result<()> {
    if let Some(i) = diag.iter().position(|d| d.is_zero()) {
        return Err(Error::ZeroDiagonalEntry { index: i });
    }
    Ok(())
}

/// Apply one NSC-preserving transform.  The NSC property of the input is
/// not re-checked here; callers verify where it matters.
pub fn apply_closure(a: &FqMatrix, op: &ClosureOp) -> Result<FqMatrix> {
    a.ensure_square()?;
    let f = a.field();
    match op {
        ClosureOp::LeftDiag(diag) => {
            require_nonzero_diag(diag)?;
            FqMatrix::diagonal(f, diag).mul(a)
        }
        ClosureOp::RightDiag(diag) => {
            require_nonzero_diag(diag)?;
            a.mul(&FqMatrix::diagonal(f, diag))
        }
        ClosureOp::FlipInverseTranspose => {
            let q = FqMatrix::anti_identity(f, a.rows());
            q.mul(&a.inverse()?.transpose())
        }
        ClosureOp::FrobeniusInverseFlip(e) => {
            a.require_toeplitz()?;
            let q = FqMatrix::anti_identity(f, a.rows());
            a.frobenius_map(*e).inverse()?.mul(&q)
        }
    }
}

/// Vandermonde matrix with rows `(x_j^i)` for `i = 0..n-1`; any choice of
/// distinct points yields an NSC matrix, which makes this the
/// deterministic NSC source used in tests and searches.
pub fn vandermonde(field: &FieldSpec, points: &[Element]) -> Result<FqMatrix> {
    let n = points.len();
    for (i, &x) in points.iter().enumerate() {
        if points[..i].contains(&x) {
            return Err(Error::BadInput(format!(
                "Vandermonde points must be distinct; {} repeats",
                field.format_element(x)
            )));
        }
    }
    let mut m = FqMatrix::zeros(field, n, n);
    for (j, &x) in points.iter().enumerate() {
        let mut acc = field.one();
        for i in 0..n {
            m.set(i, j, acc);
            acc = field.mul(acc, x);
        }
    }
    Ok(m)
}

/// Uniformly sample a Toeplitz matrix with entries from the subfield
/// `F_{p^g}` (the whole field when `g = h`), rejecting until NSC.
pub fn sample_toeplitz_nsc(
    field: &FieldSpec,
    n: usize,
    g: u32,
    rng: &mut impl Rng,
    retry_limit: u64,
) -> Result<FqMatrix> {
    let pool: Vec<Element> = field.subfield_elements(g)?;
    for _ in 0..retry_limit {
        let first_row: Vec<Element> = (0..n).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        let mut first_col: Vec<Element> =
            (0..n).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        if n > 0 {
            first_col[0] = first_row[0];
        }
        let t = FqMatrix::toeplitz(field, &first_row, &first_col)?;
        if is_nsc(&t)? {
            return Ok(t);
        }
    }
    Err(Error::RetriesExhausted {
        what: "sampling an NSC Toeplitz matrix",
        limit: retry_limit,
    })
}

/// Uniformly sample a length-`n` vector of nonzero subfield elements (the
/// diagonal of a scaling matrix).
pub fn sample_nonzero_diag(
    field: &FieldSpec,
    n: usize,
    g: u32,
    rng: &mut impl Rng,
) -> Result<Vec<Element>> {
    let pool: Vec<Element> = field
        .subfield_elements(g)?
        .into_iter()
        .filter(|e| !e.is_zero())
        .collect();
    Ok((0..n).map(|_| pool[rng.random_range(0..pool.len())]).collect())
}
