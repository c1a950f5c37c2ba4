//! Quasi-diagonal matrices and their randomized construction.
//!
//! A square matrix `A` is *quasi-diagonal* for a monomial matrix `M` and
//! a Frobenius exponent `e` when the twisted pairing `A M^T pi_e(A)^T`
//! is diagonal with all diagonal entries nonzero.  Such matrices turn
//! blockwise self-orthogonality of input codes into self-orthogonality
//! of the combined matrix-product code.
//!
//! The module provides three things: the predicate itself, a lift that
//! turns a suitable NSC matrix into a quasi-diagonal one by a unit
//! lower triangular row transformation, and a seeded randomized search
//! that feeds the lift with NSC Toeplitz candidates.

use crate::gf::{Element, FieldSpec};
use crate::linalg::FqMatrix;
use crate::nsc;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The twisted pairing `A M^T pi_e(A)^T` of a square matrix against a
/// monomial matrix `M`.
pub fn pairing(a: &FqMatrix, m: &FqMatrix, e: u32) -> Result<FqMatrix> {
    a.ensure_square()?;
    a.field().ensure_same(m.field())?;
    if m.rows() != a.rows() || m.cols() != a.cols() {
        return Err(Error::DimensionMismatch {
            context: "pairing matrix sizes",
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    a.mul(&m.transpose())?.mul(&a.frobenius_map(e).transpose())
}

/// The diagonal of the twisted pairing, provided it is diagonal with all
/// entries nonzero; errors describe which requirement failed.
pub fn quasi_diagonal(a: &FqMatrix, m: &FqMatrix, e: u32) -> Result<Vec<Element>> {
    let p = pairing(a, m, e)?;
    let diag = p.require_diagonal().map_err(|_| Error::ConditionFailed {
        context: "quasi-diagonal pairing",
        detail: format!("the pairing A M^T pi_e(A)^T is not diagonal: {:?}", p),
    })?;
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::ZeroDiagonalEntry { index: i });
        }
    }
    Ok(diag)
}

/// Whether `A M^T pi_e(A)^T` is diagonal with nonzero entries.
pub fn is_quasi(a: &FqMatrix, m: &FqMatrix, e: u32) -> Result<bool> {
    match quasi_diagonal(a, m, e) {
        Ok(_) => Ok(true),
        Err(Error::ConditionFailed { .. }) | Err(Error::ZeroDiagonalEntry { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Result of lifting an NSC matrix to a quasi-diagonal one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLift {
    /// The unit lower triangular transformation.
    pub lower: FqMatrix,
    /// The lifted matrix `L A`, NSC and quasi-diagonal.
    pub lifted: FqMatrix,
    /// The diagonal monomial matrix `D pi_e(D)` built from the diagonal
    /// part of the input monomial matrix.
    pub m_hat: FqMatrix,
    /// Diagonal of `(L A) m_hat^T pi_e(L A)^T`; all entries nonzero.
    pub diagonal: Vec<Element>,
    /// The Frobenius exponent of the pairing.
    pub exponent: u32,
}

impl QuasiLift {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.lifted.field();
        serde_json::json!({
            "lower": self.lower.to_json(),
            "lifted": self.lifted.to_json(),
            "m_hat": self.m_hat.to_json(),
            "diagonal": self.diagonal.iter().map(|&d| f.format_element(d)).collect::<Vec<_>>(),
            "e": self.exponent,
        })
    }
}

/// Lift an NSC matrix `A` to a quasi-diagonal matrix `L A`.
///
/// Requirements: `M` is monomial with `A M` over the fixed subfield of
/// the composed automorphism `x -> x^(p^(2e mod h))`, and all leading
/// principal minors of `S = (A M) pi_e(A M)^T` are nonzero.  Row `m` of
/// `L` then solves against the leading `m x m` block of `S`, which later
/// elimination steps never touch, and the subfield condition makes `S`
/// conjugate-symmetric so that clearing the lower triangle clears the
/// upper one as well.
pub fn lift_to_quasi(a: &FqMatrix, m_tilde: &FqMatrix, e: u32) -> Result<QuasiLift> {
    a.ensure_square()?;
    let f = a.field().clone();
    f.ensure_same(m_tilde.field())?;
    let s = a.rows();
    let decomp = m_tilde.monomial_decompose()?;
    if m_tilde.rows() != s {
        return Err(Error::DimensionMismatch {
            context: "monomial matrix size vs matrix size",
            left: m_tilde.rows().to_string(),
            right: s.to_string(),
        });
    }
    nsc::require_nsc(a)?;
    let params = f.galois_params(e);
    let b = a.mul(m_tilde)?;
    for i in 0..s {
        for j in 0..s {
            if !f.in_subfield(b[(i, j)], params.g)? {
                return Err(Error::OutsideSubfield {
                    row: i,
                    col: j,
                    subfield_order: f.p().pow(params.g),
                });
            }
        }
    }
    let s_mat = b.mul(&b.frobenius_map(e).transpose())?;
    for m in 1..=s {
        if s_mat.leading_principal(m)?.det()?.is_zero() {
            return Err(Error::LeadingMinorZero { index: m });
        }
    }

    // Row m of L is -pi_e(b_m)^T B_m^{-1} followed by a 1, where B_m is
    // the leading m x m block of S and b_m the first m entries of its
    // column m.  Solve B_m^T x = -pi_e(b_m) for each row.
    let mut lower = FqMatrix::identity(&f, s);
    for m in 1..s {
        let block_t = s_mat.leading_principal(m)?.transpose();
        let rhs: Vec<Element> = (0..m)
            .map(|j| f.neg(f.frobenius(s_mat[(j, m)], e)))
            .collect();
        let inv = block_t.inverse()?;
        for j in 0..m {
            let mut acc = f.zero();
            for t in 0..m {
                acc = f.add(acc, f.mul(inv[(j, t)], rhs[t]));
            }
            lower.set(m, j, acc);
        }
    }
    let lifted = lower.mul(a)?;
    let m_hat_diag: Vec<Element> = decomp
        .diag
        .iter()
        .map(|&d| f.mul(d, f.frobenius(d, e)))
        .collect();
    let m_hat = FqMatrix::diagonal(&f, &m_hat_diag);
    let diagonal = quasi_diagonal(&lifted, &m_hat, e)
        .map_err(|err| Error::Internal(format!("lift produced a non-quasi matrix: {err}")))?;
    nsc::require_nsc(&lifted)
        .map_err(|err| Error::Internal(format!("lift broke the NSC property: {err}")))?;
    Ok(QuasiLift {
        lower,
        lifted,
        m_hat,
        diagonal,
        exponent: e,
    })
}

/// Origin of a successful search candidate: which of the four matrices
/// derived from a sampled NSC Toeplitz matrix `T` and nonzero diagonal
/// `D` passed the minor guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchCandidate {
    /// `T D`
    ToeplitzDiag,
    /// `D T`
    DiagToeplitz,
    /// `pi_e(T)^{-1} Q D` with `Q` the flip permutation
    InverseFlipDiag,
    /// `D pi_e(T)^{-1} Q`
    DiagInverseFlip,
}

impl SearchCandidate {
    pub const ALL: [SearchCandidate; 4] = [
        SearchCandidate::ToeplitzDiag,
        SearchCandidate::DiagToeplitz,
        SearchCandidate::InverseFlipDiag,
        SearchCandidate::DiagInverseFlip,
    ];

    pub fn index(self) -> usize {
        match self {
            SearchCandidate::ToeplitzDiag => 0,
            SearchCandidate::DiagToeplitz => 1,
            SearchCandidate::InverseFlipDiag => 2,
            SearchCandidate::DiagInverseFlip => 3,
        }
    }
}

/// Outcome of one successful search trial before lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialSuccess {
    pub candidate: SearchCandidate,
    /// The accepted candidate matrix (NSC, passes the minor guard).
    pub matrix: FqMatrix,
    /// The sampled NSC Toeplitz matrix it was derived from.
    pub toeplitz: FqMatrix,
    /// The sampled nonzero diagonal.
    pub diag: Vec<Element>,
}

/// A successful, lifted and revalidated trial of the randomized search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub trial: u64,
    pub candidate: SearchCandidate,
    /// The accepted candidate matrix that was lifted.
    pub matrix: FqMatrix,
    /// The sampled NSC Toeplitz matrix.
    pub toeplitz: FqMatrix,
    /// The sampled nonzero diagonal.
    pub diag: Vec<Element>,
    pub lift: QuasiLift,
}

impl SearchHit {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.toeplitz.field();
        serde_json::json!({
            "trial": self.trial,
            "candidate": serde_json::to_value(self.candidate).unwrap(),
            "matrix": self.matrix.to_json(),
            "toeplitz": self.toeplitz.to_json(),
            "diag": self.diag.iter().map(|&d| f.format_element(d)).collect::<Vec<_>>(),
            "lift": self.lift.to_json(),
        })
    }
}

/// One trial: sample an NSC Toeplitz matrix `T` and a nonzero diagonal
/// `D` over the fixed subfield, then test the four derived candidates in
/// order, guarding each by the leading principal minors `1..s-1` of its
/// pairing (the full determinant is nonzero automatically).  The first
/// candidate that passes is lifted; `None` means the trial failed.
pub fn search_trial(
    field: &FieldSpec,
    s: usize,
    m_tilde: &FqMatrix,
    e: u32,
    rng: &mut ChaCha8Rng,
    retry_limit: u64,
) -> Result<Option<TrialSuccess>> {
    let params = field.galois_params(e);
    let t = nsc::sample_toeplitz_nsc(field, s, params.g, rng, retry_limit)?;
    let d = nsc::sample_nonzero_diag(field, s, params.g, rng)?;
    let d_mat = FqMatrix::diagonal(field, &d);
    let q = FqMatrix::anti_identity(field, s);
    let flip_inv = t.frobenius_map(e).inverse()?.mul(&q)?;
    let candidates = [
        (SearchCandidate::ToeplitzDiag, t.mul(&d_mat)?),
        (SearchCandidate::DiagToeplitz, d_mat.mul(&t)?),
        (SearchCandidate::InverseFlipDiag, flip_inv.mul(&d_mat)?),
        (SearchCandidate::DiagInverseFlip, d_mat.mul(&flip_inv)?),
    ];
    for (kind, r) in candidates {
        let b = r.mul(m_tilde)?;
        let s_mat = b.mul(&b.frobenius_map(e).transpose())?;
        let mut ok = true;
        for m in 1..s {
            if s_mat.leading_principal(m)?.det()?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(TrialSuccess {
                candidate: kind,
                matrix: r,
                toeplitz: t,
                diag: d,
            }));
        }
    }
    Ok(None)
}

/// Aggregate outcome of a seeded search campaign.
#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub trials: u64,
    pub successes: u64,
    /// Successes per candidate kind, indexed by [`SearchCandidate::index`].
    pub candidate_counts: [u64; 4],
    /// Fully lifted hits, kept in trial order up to the requested cap.
    pub hits: Vec<SearchHit>,
    pub master_seed: u64,
}

impl CampaignReport {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "trials": self.trials,
            "successes": self.successes,
            "rate": self.rate(),
            "candidate_counts": self.candidate_counts,
            "master_seed": self.master_seed,
            "hits": self.hits.iter().map(|h| h.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Run `trials` independent search trials in parallel.  Trial `t` uses a
/// dedicated RNG stream derived from (`master_seed`, `t`), so the result
/// is reproducible and independent of the number of worker threads.
/// Hits are lifted and revalidated; at most `keep_hits` of them are
/// retained (in trial order).
pub fn sampling_campaign(
    field: &FieldSpec,
    s: usize,
    m_tilde: &FqMatrix,
    e: u32,
    trials: u64,
    master_seed: u64,
    keep_hits: usize,
    retry_limit: u64,
) -> Result<CampaignReport> {
    field.ensure_same(m_tilde.field())?;
    let params = field.galois_params(e);
    for i in 0..m_tilde.rows() {
        for j in 0..m_tilde.cols() {
            if !field.in_subfield(m_tilde[(i, j)], params.g)? {
                return Err(Error::OutsideSubfield {
                    row: i,
                    col: j,
                    subfield_order: field.p().pow(params.g),
                });
            }
        }
    }
    let outcomes: Vec<Result<Option<TrialSuccess>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
            rng.set_stream(trial);
            search_trial(field, s, m_tilde, e, &mut rng, retry_limit)
        })
        .collect();
    let mut successes = 0u64;
    let mut candidate_counts = [0u64; 4];
    let mut hits = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        if let Some(success) = outcome? {
            successes += 1;
            candidate_counts[success.candidate.index()] += 1;
            if hits.len() < keep_hits {
                let lift = lift_to_quasi(&success.matrix, m_tilde, e)?;
                hits.push(SearchHit {
                    trial: trial as u64,
                    candidate: success.candidate,
                    matrix: success.matrix,
                    toeplitz: success.toeplitz,
                    diag: success.diag,
                    lift,
                });
            }
        }
    }
    Ok(CampaignReport {
        trials,
        successes,
        candidate_counts,
        hits,
        master_seed,
    })
}

/// Report on the `A A^T = D P` factorization test: an NSC matrix whose
/// plain Gram matrix is monomial (diagonal times permutation) can serve
/// as an optimal defining matrix in related quantum-code constructions.
#[derive(Clone, Debug)]
pub struct GramMonomialReport {
    pub is_monomial: bool,
    /// The Gram matrix `A A^T`.
    pub gram: FqMatrix,
    /// Diagonal and permutation parts when the Gram matrix is monomial.
    pub diag: Option<Vec<Element>>,
    pub perm: Option<Vec<usize>>,
}

impl GramMonomialReport {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.gram.field();
        serde_json::json!({
            "is_monomial": self.is_monomial,
            "gram": self.gram.to_json(),
            "diag": self.diag.as_ref().map(|d| d.iter().map(|&x| f.format_element(x)).collect::<Vec<_>>()),
            "perm": self.perm,
        })
    }
}

/// Check whether the NSC matrix `A` factors its Gram matrix `A A^T` as
/// diagonal times permutation.
pub fn gram_monomial_report(a: &FqMatrix) -> Result<GramMonomialReport> {
    nsc::require_nsc(a)?;
    let gram = a.mul(&a.transpose())?;
    match gram.monomial_decompose() {
        Ok(d) => Ok(GramMonomialReport {
            is_monomial: true,
            gram,
            diag: Some(d.diag),
            perm: Some(d.perm),
        }),
        Err(Error::NotMonomial(..)) => Ok(GramMonomialReport {
            is_monomial: false,
            gram,
            diag: None,
            perm: None,
        }),
        Err(e) => Err(e),
    }
}
