//! Matrix-product codes: `s` input codes of common length `n` combined by
//! an `s x s` defining matrix into a length-`s n` code.
//!
//! A codeword is `(sum_i a_i1 c_i, ..., sum_i a_is c_i)` for codewords
//! `c_i` of the inputs.  This module builds such codes, evaluates the
//! standard distance bounds (sharp when the defining matrix is
//! non-singular by columns), and implements the block-level formulas for
//! Euclidean duals, twisted duals, hulls, and the self-orthogonality
//! criterion that drive the constructions in this crate.

use crate::codes::LinearCode;
use crate::gf::Element;
use crate::isometry::{Isometry, KronIsometry};
use crate::linalg::FqMatrix;
use crate::nsc;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A matrix-product code, holding the inputs, the defining matrix, and
/// the resulting canonical code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixProductCode {
    inputs: Vec<LinearCode>,
    defining: FqMatrix,
    code: LinearCode,
}

impl MatrixProductCode {
    /// Combine `inputs` by the square matrix `a`; the inputs must share
    /// one field and one length.  `a` may be singular (some block results
    /// below allow that), but then the dimension can drop below the sum
    /// of the input dimensions.
    pub fn build(inputs: &[LinearCode], a: &FqMatrix) -> Result<MatrixProductCode> {
        a.ensure_square()?;
        let s = a.rows();
        if inputs.len() != s {
            return Err(Error::DimensionMismatch {
                context: "input count vs defining matrix size",
                left: inputs.len().to_string(),
                right: s.to_string(),
            });
        }
        if s == 0 {
            return Err(Error::BadInput("a matrix-product code needs at least one block".into()));
        }
        let f = a.field().clone();
        let n = inputs[0].length();
        for c in inputs {
            f.ensure_same(c.field())?;
            if c.length() != n {
                return Err(Error::DimensionMismatch {
                    context: "input code lengths",
                    left: n.to_string(),
                    right: c.length().to_string(),
                });
            }
        }
        let mut data: Vec<Element> = Vec::new();
        let mut rows = 0usize;
        for (i, ci) in inputs.iter().enumerate() {
            for g in ci.generator().rows_iter() {
                for j in 0..s {
                    let aij = a[(i, j)];
                    data.extend(g.iter().map(|&x| f.mul(aij, x)));
                }
                rows += 1;
            }
        }
        let gen = FqMatrix::new(&f, rows, s * n, data)?;
        Ok(MatrixProductCode {
            inputs: inputs.to_vec(),
            defining: a.clone(),
            code: LinearCode::from_generator(&gen)?,
        })
    }

    pub fn inputs(&self) -> &[LinearCode] {
        &self.inputs
    }

    pub fn defining_matrix(&self) -> &FqMatrix {
        &self.defining
    }

    /// The combined code on length `s * n`.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn blocks(&self) -> usize {
        self.defining.rows()
    }

    pub fn block_length(&self) -> usize {
        self.inputs[0].length()
    }

    fn ensure_kron(&self, kron: &KronIsometry) -> Result<()> {
        self.code.field().ensure_same(kron.inner().field())?;
        if kron.blocks() != self.blocks() {
            return Err(Error::DimensionMismatch {
                context: "outer isometry blocks vs defining matrix size",
                left: kron.blocks().to_string(),
                right: self.blocks().to_string(),
            });
        }
        if kron.inner().len() != self.block_length() {
            return Err(Error::DimensionMismatch {
                context: "inner isometry length vs block length",
                left: kron.inner().len().to_string(),
                right: self.block_length().to_string(),
            });
        }
        Ok(())
    }

    /// Euclidean dual as a matrix-product code:
    /// `[C_1^dual, ..., C_s^dual] . (A^{-1})^T`.
    pub fn euclidean_dual(&self) -> Result<MatrixProductCode> {
        let duals: Vec<LinearCode> = self.inputs.iter().map(|c| c.euclidean_dual()).collect();
        let a_inv_t = self.defining.inverse()?.transpose();
        Self::build(&duals, &a_inv_t)
    }

    /// Twisted dual as a matrix-product code, for an isometry of the
    /// Kronecker shape `outer (x) inner`:
    /// `[C_1^dual', ..., C_s^dual'] . (outer^T pi_e(A)^T)^{-1}`
    /// where `dual'` is the dual under the inner isometry.
    pub fn sigma_dual(&self, kron: &KronIsometry) -> Result<MatrixProductCode> {
        self.ensure_kron(kron)?;
        let inner = kron.inner();
        let duals: Vec<LinearCode> = self
            .inputs
            .iter()
            .map(|c| c.sigma_dual(inner))
            .collect::<Result<_>>()?;
        let e = inner.exponent();
        let b = kron
            .outer()
            .transpose()
            .mul(&self.defining.frobenius_map(e).transpose())?
            .inverse()?;
        Self::build(&duals, &b)
    }

    /// The pairing matrix `A outer^T pi_e(A)^T`, whose shape decides
    /// whether the block-level hull and self-orthogonality results apply.
    pub fn pairing_matrix(&self, kron: &KronIsometry) -> Result<FqMatrix> {
        self.ensure_kron(kron)?;
        let e = kron.inner().exponent();
        self.defining
            .mul(&kron.outer().transpose())?
            .mul(&self.defining.frobenius_map(e).transpose())
    }

    /// Intersection with the twisted dual, computed blockwise.  Requires
    /// the pairing matrix to be diagonal (zero entries allowed); block
    /// `i` keeps all of `C_i` when the diagonal entry vanishes and drops
    /// to the inner hull of `C_i` otherwise.
    pub fn sigma_hull(&self, kron: &KronIsometry) -> Result<MatrixProductCode> {
        let pairing = self.pairing_matrix(kron)?;
        let diag = pairing.require_diagonal().map_err(|_| Error::ConditionFailed {
            context: "blockwise hull",
            detail: format!(
                "the pairing matrix A M^T pi_e(A)^T must be diagonal, got {:?}",
                pairing
            ),
        })?;
        let inner = kron.inner();
        let blocks: Vec<LinearCode> = self
            .inputs
            .iter()
            .zip(&diag)
            .map(|(c, d)| {
                if d.is_zero() {
                    Ok(c.clone())
                } else {
                    c.sigma_hull(inner)
                }
            })
            .collect::<Result<_>>()?;
        Self::build(&blocks, &self.defining)
    }

    /// Blockwise sufficient criterion for self-orthogonality under the
    /// flattened isometry: the pairing matrix is diagonal and every block
    /// either has a vanishing diagonal entry or is self-orthogonal under
    /// the inner isometry.
    pub fn block_self_orthogonality(&self, kron: &KronIsometry) -> Result<BlockSoReport> {
        let pairing = self.pairing_matrix(kron)?;
        let diag = match pairing.require_diagonal() {
            Ok(d) => d,
            Err(_) => {
                return Ok(BlockSoReport {
                    pairing_diagonal: false,
                    blocks: Vec::new(),
                    certified: false,
                })
            }
        };
        let inner = kron.inner();
        let f = self.code.field();
        let mut blocks = Vec::with_capacity(diag.len());
        let mut all_ok = true;
        for (i, (c, d)) in self.inputs.iter().zip(&diag).enumerate() {
            let self_orthogonal = c.is_self_orthogonal(inner)?;
            let ok = d.is_zero() || self_orthogonal;
            all_ok &= ok;
            blocks.push(BlockSoTerm {
                index: i,
                pairing_entry: f.format_element(*d),
                input_self_orthogonal: self_orthogonal,
                satisfied: ok,
            });
        }
        Ok(BlockSoReport {
            pairing_diagonal: true,
            blocks,
            certified: all_ok,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "blocks": self.blocks(),
            "block_length": self.block_length(),
            "defining": self.defining.to_json(),
            "inputs": self.inputs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "code": self.code.to_json(),
        })
    }
}

/// Per-block record of the self-orthogonality criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSoTerm {
    pub index: usize,
    pub pairing_entry: String,
    pub input_self_orthogonal: bool,
    pub satisfied: bool,
}

/// Outcome of the blockwise self-orthogonality criterion.  `certified`
/// means the combined code is guaranteed self-orthogonal under the
/// flattened isometry; `false` is inconclusive, not a refutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSoReport {
    pub pairing_diagonal: bool,
    pub blocks: Vec<BlockSoTerm>,
    pub certified: bool,
}

/// One term of the distance bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpBoundTerm {
    pub index: usize,
    /// Minimum distance of the input code; `None` for a zero input.
    pub input_distance: Option<usize>,
    /// Minimum distance of the code spanned by the first `index + 1`
    /// rows of the defining matrix.
    pub row_code_distance: usize,
    /// `row_code_distance * input_distance` when defined.
    pub product: Option<usize>,
}

/// Parameter bounds of a matrix-product code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpBounds {
    pub length: usize,
    /// Actual dimension of the combined code.
    pub dimension: usize,
    /// Sum of the input dimensions (equals `dimension` when the defining
    /// matrix is non-singular).
    pub input_dimension_sum: usize,
    pub defining_nonsingular: bool,
    pub defining_nsc: bool,
    pub terms: Vec<MpBoundTerm>,
    /// `min_i row_code_distance(i) * d_i` over nonzero inputs.
    pub distance_lower: usize,
    /// `min_i (i + 1) * d_i^dual` over inputs with a nonzero Euclidean
    /// dual; only claimed when the defining matrix is NSC.
    pub dual_distance_lower: Option<usize>,
}

/// Evaluate the distance bounds.  Row-code distances come for free when
/// the defining matrix is NSC (the first `i` rows then span an MDS code
/// of distance `s + 1 - i`); otherwise they are enumerated within
/// `budget`, as are the input distances.
pub fn mp_bounds(mpc: &MatrixProductCode, budget: u64) -> Result<MpBounds> {
    let a = mpc.defining_matrix();
    let s = mpc.blocks();
    let report = nsc::nsc_report(a)?;
    let nonsingular = !a.det()?.is_zero();

    let mut terms = Vec::with_capacity(s);
    let mut distance_lower: Option<usize> = None;
    let mut dual_lower: Option<usize> = None;
    for i in 0..s {
        let row_code_distance = if report.is_nsc {
            s - i
        } else {
            let rows = LinearCode::from_generator(&a.top_rows(i + 1)?)?;
            rows.min_distance(budget)?.distance
        };
        let ci = &mpc.inputs()[i];
        let input_distance = if ci.dimension() == 0 {
            None
        } else {
            Some(ci.min_distance(budget)?.distance)
        };
        let product = input_distance.map(|d| row_code_distance * d);
        if let Some(p) = product {
            distance_lower = Some(distance_lower.map_or(p, |cur| cur.min(p)));
        }
        if report.is_nsc && ci.dimension() < ci.length() {
            let dual_d = ci.euclidean_dual().min_distance(budget)?.distance;
            let term = (i + 1) * dual_d;
            dual_lower = Some(dual_lower.map_or(term, |cur| cur.min(term)));
        }
        terms.push(MpBoundTerm {
            index: i,
            input_distance,
            row_code_distance,
            product,
        });
    }
    let distance_lower = distance_lower.ok_or(Error::ZeroCode)?;
    Ok(MpBounds {
        length: mpc.code().length(),
        dimension: mpc.code().dimension(),
        input_dimension_sum: mpc.inputs().iter().map(|c| c.dimension()).sum(),
        defining_nonsingular: nonsingular,
        defining_nsc: report.is_nsc,
        terms,
        distance_lower,
        dual_distance_lower: dual_lower,
    })
}

/// Convenience: the flattened isometry `(outer (x) inner, e)` acting on
/// the combined code's length.
pub fn flattened(kron: &KronIsometry) -> Result<Isometry> {
    kron.flatten()
}
