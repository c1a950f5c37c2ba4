//! Linear codes over finite fields.
//!
//! A [`LinearCode`] stores a canonical generator matrix (reduced row
//! echelon form with zero rows dropped), so two codes are equal exactly
//! when they span the same subspace.  On top of that sit duals under the
//! Euclidean and twisted inner products, hulls, weight enumeration with a
//! work budget, the MacWilliams transform, and minimum-distance
//! computation that picks the cheaper of the code and its dual.

use crate::gf::{Element, FieldSpec};
use crate::isometry::Isometry;
use crate::linalg::FqMatrix;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Hard cap for [`LinearCode::codewords`], which materializes every word.
const EXPLICIT_WORD_CAP: u128 = 1 << 16;

/// Max number of parallel shards the weight enumerator fans out to.
const MAX_SHARDS: u128 = 4096;

/// A linear code, canonically represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: FqMatrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// The row space of `g`, canonicalized.  The length must be positive.
    pub fn from_generator(g: &FqMatrix) -> Result<LinearCode> {
        if g.cols() == 0 {
            return Err(Error::BadInput("code length must be positive".into()));
        }
        let (rref, pivots) = g.rref();
        let gen = rref.top_rows(pivots.len()).expect("rank <= rows");
        Ok(LinearCode { gen, pivots })
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Result<LinearCode> {
        Self::from_generator(&FqMatrix::zeros(field, 0, n))
    }

    pub fn full(field: &FieldSpec, n: usize) -> Result<LinearCode> {
        Self::from_generator(&FqMatrix::identity(field, n))
    }

    pub fn field(&self) -> &FieldSpec {
        self.gen.field()
    }

    pub fn length(&self) -> usize {
        self.gen.cols()
    }

    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }

    /// The canonical generator matrix (RREF, no zero rows).
    pub fn generator(&self) -> &FqMatrix {
        &self.gen
    }

    /// `q^k`, or `None` when it overflows `u128`.
    pub fn codeword_count(&self) -> Option<u128> {
        (self.field().order() as u128).checked_pow(self.dimension() as u32)
    }

    pub fn contains(&self, word: &[Element]) -> Result<bool> {
        if word.len() != self.length() {
            return Err(Error::DimensionMismatch {
                context: "codeword membership",
                left: word.len().to_string(),
                right: self.length().to_string(),
            });
        }
        let f = self.field();
        let mut residual = word.to_vec();
        for (r, &pj) in self.pivots.iter().enumerate() {
            let c = residual[pj];
            if c.is_zero() {
                continue;
            }
            let row = self.gen.row(r);
            for (x, &g) in residual.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, g));
            }
        }
        Ok(residual.iter().all(|e| e.is_zero()))
    }

    /// Every codeword, materialized; refuses to build more than `2^16`.
    pub fn codewords(&self) -> Result<Vec<Vec<Element>>> {
        let total = self.codeword_count().unwrap_or(u128::MAX);
        if total > EXPLICIT_WORD_CAP {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget: EXPLICIT_WORD_CAP as u64,
                knob: "explicit codeword cap",
            });
        }
        let f = self.field().clone();
        let q = f.order() as usize;
        let (k, n) = (self.dimension(), self.length());
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total as usize {
            let mut word = vec![f.zero(); n];
            let mut t = idx;
            for j in 0..k {
                let c = Element((t % q) as u32);
                t /= q;
                if !c.is_zero() {
                    for (x, &g) in word.iter_mut().zip(self.gen.row(j)) {
                        *x = f.add(*x, f.mul(c, g));
                    }
                }
            }
            out.push(word);
        }
        Ok(out)
    }

    pub fn subset_of(&self, other: &LinearCode) -> Result<bool> {
        self.field().ensure_same(other.field())?;
        if self.length() != other.length() {
            return Err(Error::DimensionMismatch {
                context: "code inclusion",
                left: self.length().to_string(),
                right: other.length().to_string(),
            });
        }
        for row in self.gen.rows_iter() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ------------------------------------------------------------------
    // duals, images, hulls
    // ------------------------------------------------------------------

    /// `{u : G u^T = 0}` via the right nullspace of the generator.
    pub fn euclidean_dual(&self) -> LinearCode {
        let ns = self.gen.right_nullspace();
        Self::from_generator(&ns).expect("dual of a positive-length code")
    }

    fn ensure_iso(&self, iso: &Isometry) -> Result<()> {
        self.field().ensure_same(iso.field())?;
        if iso.len() != self.length() {
            return Err(Error::DimensionMismatch {
                context: "isometry length vs code length",
                left: iso.len().to_string(),
                right: self.length().to_string(),
            });
        }
        Ok(())
    }

    /// The image code `sigma(C) = { pi_e(c) M : c in C }`.
    pub fn sigma_image(&self, iso: &Isometry) -> Result<LinearCode> {
        self.ensure_iso(iso)?;
        Self::from_generator(&iso.apply_matrix(&self.gen)?)
    }

    /// The dual under the twisted product: `{u : <u, c> = 0 for all c}`.
    ///
    /// Since `<u, c> = u . sigma(c)`, this is the Euclidean dual of the
    /// image code `sigma(C)`.
    pub fn sigma_dual(&self, iso: &Isometry) -> Result<LinearCode> {
        Ok(self.sigma_image(iso)?.euclidean_dual())
    }

    /// `C` intersected with its twisted dual.
    pub fn sigma_hull(&self, iso: &Isometry) -> Result<LinearCode> {
        self.intersect(&self.sigma_dual(iso)?)
    }

    /// Whether `<g_i, g_j> = 0` for all pairs of basis rows.  The product
    /// is additive in both slots and scalars pull out (plain on the left,
    /// Frobenius-twisted on the right), so vanishing on a basis is
    /// equivalent to `C` being contained in its twisted dual.
    pub fn is_self_orthogonal(&self, iso: &Isometry) -> Result<bool> {
        self.ensure_iso(iso)?;
        let images: Vec<Vec<Element>> = self
            .gen
            .rows_iter()
            .map(|r| iso.apply(r))
            .collect::<Result<_>>()?;
        for u in self.gen.rows_iter() {
            for im in &images {
                if !crate::linalg::dot(self.field(), u, im)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_dual_containing(&self, iso: &Isometry) -> Result<bool> {
        self.sigma_dual(iso)?.subset_of(self)
    }

    /// `(C1^E + C2^E)^E`, computed through Euclidean duals.
    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        let sum_of_duals = self.euclidean_dual().sum(&other.euclidean_dual())?;
        Ok(sum_of_duals.euclidean_dual())
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        Self::from_generator(&self.gen.vstack(&other.gen)?)
    }

    // ------------------------------------------------------------------
    // weight enumeration and distance
    // ------------------------------------------------------------------

    /// Count codewords by Hamming weight.  Work is `q^k` words; the call
    /// refuses to start when that exceeds `budget`.
    pub fn weight_enumerator(&self, budget: u64) -> Result<WeightDistribution> {
        let needed = self.codeword_count().unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget,
                knob: "--budget / SIGMA_MPC_BUDGET",
            });
        }
        Ok(WeightDistribution {
            counts: enumerate_weights(&self.gen),
        })
    }

    /// Minimum Hamming distance.  Enumerates the code directly when
    /// `q^k` fits the budget, otherwise enumerates the Euclidean dual and
    /// transforms back; fails with the smaller of the two costs when
    /// neither side fits.
    pub fn min_distance(&self, budget: u64) -> Result<DistanceReport> {
        if self.dimension() == 0 {
            return Err(Error::ZeroCode);
        }
        let q = self.field().order() as u128;
        let n = self.length();
        let k = self.dimension();
        let direct = q.checked_pow(k as u32).unwrap_or(u128::MAX);
        let via_dual = q.checked_pow((n - k) as u32).unwrap_or(u128::MAX);
        if direct <= budget as u128 {
            let dist = self.weight_enumerator(budget)?;
            let d = dist.min_positive_weight().expect("nonzero code has a nonzero word");
            return Ok(DistanceReport {
                distance: d,
                method: DistanceMethod::Direct,
                words_enumerated: direct,
            });
        }
        if via_dual <= budget as u128 {
            let dual_dist = self.euclidean_dual().weight_enumerator(budget)?;
            let dist = macwilliams(&dual_dist, self.field().order(), n)?;
            let d = dist
                .min_positive_weight()
                .ok_or_else(|| Error::Internal("dual transform of a nonzero code lost all weights".into()))?;
            return Ok(DistanceReport {
                distance: d,
                method: DistanceMethod::ViaDual,
                words_enumerated: via_dual,
            });
        }
        Err(Error::BudgetExceeded {
            needed: direct.min(via_dual),
            budget,
            knob: "--budget / SIGMA_MPC_BUDGET",
        })
    }

    // ------------------------------------------------------------------
    // JSON
    // ------------------------------------------------------------------

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.length(),
            "k": self.dimension(),
            "generator": self.gen.to_json(),
        })
    }

    /// Accepts `{"generator": ..}` or a bare matrix; the input generator
    /// need not be canonical.
    pub fn from_json(field: &FieldSpec, v: &serde_json::Value) -> Result<LinearCode> {
        let g = match v {
            serde_json::Value::Object(map) if map.contains_key("generator") => {
                FqMatrix::from_json(field, &map["generator"])?
            }
            other => FqMatrix::from_json(field, other)?,
        };
        Self::from_generator(&g)
    }
}

/// Codeword counts by Hamming weight; `counts[w]` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub counts: Vec<u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Smallest positive weight with a nonzero count.
    pub fn min_positive_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] > 0)
    }

    /// JSON with counts as strings, so arbitrary 128-bit values survive.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "counts": self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Direct,
    ViaDual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: usize,
    pub method: DistanceMethod,
    pub words_enumerated: u128,
}

/// Depth-first enumeration over the remaining rows; `word` carries the
/// partial sum and is restored before returning.
fn weight_dfs(
    j: usize,
    k: usize,
    q: usize,
    field: &FieldSpec,
    delta: &[Vec<Vec<Element>>],
    restore: &[Vec<Element>],
    word: &mut [Element],
    counts: &mut [u128],
) {
    if j == k {
        let w = word.iter().filter(|e| !e.is_zero()).count();
        counts[w] += 1;
        return;
    }
    // Scalar 0 leaves the word untouched; each following scalar adds the
    // difference row, and the final restore row returns to the base word.
    weight_dfs(j + 1, k, q, field, delta, restore, word, counts);
    for c in 1..q {
        add_into(field, word, &delta[j][c - 1]);
        weight_dfs(j + 1, k, q, field, delta, restore, word, counts);
    }
    add_into(field, word, &restore[j]);
}

fn add_into(field: &FieldSpec, word: &mut [Element], row: &[Element]) {
    for (x, &r) in word.iter_mut().zip(row) {
        *x = field.add(*x, r);
    }
}

/// Exact weight counts of the row space of `gen` (which need not be
/// canonical; redundant rows would multiply all counts uniformly, so the
/// caller always passes the canonical generator).
fn enumerate_weights(gen: &FqMatrix) -> Vec<u128> {
    let field = gen.field().clone();
    let n = gen.cols();
    let k = gen.rows();
    let q = field.order() as usize;
    let mut counts = vec![0u128; n + 1];
    if k == 0 {
        counts[0] = 1;
        return counts;
    }

    // Scaled copies of each row for every scalar, then consecutive
    // differences so the walk is incremental.
    let scaled: Vec<Vec<Vec<Element>>> = (0..k)
        .map(|j| {
            (0..q)
                .map(|c| {
                    let s = Element(c as u32);
                    gen.row(j).iter().map(|&g| field.mul(g, s)).collect()
                })
                .collect()
        })
        .collect();
    let delta: Vec<Vec<Vec<Element>>> = scaled
        .iter()
        .map(|rows| {
            (1..q)
                .map(|c| {
                    rows[c]
                        .iter()
                        .zip(&rows[c - 1])
                        .map(|(&a, &b)| field.sub(a, b))
                        .collect()
                })
                .collect()
        })
        .collect();
    let restore: Vec<Vec<Element>> = scaled
        .iter()
        .map(|rows| rows[q - 1].iter().map(|&a| field.neg(a)).collect())
        .collect();

    // Shard over the first `t` digits; each shard walks the rest.  The
    // merge is an elementwise sum, so the result does not depend on the
    // thread count.
    let mut t = 0usize;
    let mut shards: u128 = 1;
    while t < k && shards * q as u128 <= MAX_SHARDS {
        shards *= q as u128;
        t += 1;
    }
    (0..shards as u64)
        .into_par_iter()
        .map(|sid| {
            let mut word = vec![field.zero(); n];
            let mut rest = sid as usize;
            for layer in scaled.iter().take(t) {
                let digit = rest % q;
                rest /= q;
                add_into(&field, &mut word, &layer[digit]);
            }
            let mut local = vec![0u128; n + 1];
            weight_dfs(t, k, q, &field, &delta, &restore, &mut word, &mut local);
            local
        })
        .reduce(
            || vec![0u128; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// MacWilliams transform: the weight distribution of the Euclidean dual
/// of any code with distribution `dist`, length `n`, over a field of
/// order `q`.  The input is validated (one zero word, integral and
/// nonnegative transform), so a corrupted distribution cannot slip
/// through.
pub fn macwilliams(dist: &WeightDistribution, q: u64, n: usize) -> Result<WeightDistribution> {
    if dist.counts.len() != n + 1 {
        return Err(Error::BadWeightDistribution(format!(
            "expected {} weight classes, got {}",
            n + 1,
            dist.counts.len()
        )));
    }
    if dist.counts[0] != 1 {
        return Err(Error::BadWeightDistribution(format!(
            "a linear code has exactly one zero word, distribution claims {}",
            dist.counts[0]
        )));
    }
    let size_big = dist
        .counts
        .iter()
        .fold(BigUint::ZERO, |acc, &c| acc + BigUint::from(c));
    let size = BigInt::from_biguint(Sign::Plus, size_big);

    // Pascal's triangle up to n, as big integers; entries past the row
    // index stay zero so out-of-range binomials vanish naturally.
    let mut binom = vec![vec![BigInt::ZERO; n + 1]; n + 1];
    for a in 0..=n {
        binom[a][0] = BigInt::from(1);
        for b in 1..=a {
            let above = if b <= a - 1 { binom[a - 1][b].clone() } else { BigInt::ZERO };
            binom[a][b] = &binom[a - 1][b - 1] + above;
        }
    }
    let mut pow_qm1 = vec![BigInt::from(1); n + 1];
    for m in 1..=n {
        pow_qm1[m] = &pow_qm1[m - 1] * BigInt::from(q - 1);
    }

    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut s = BigInt::ZERO;
        for (w, &a_w) in dist.counts.iter().enumerate() {
            if a_w == 0 {
                continue;
            }
            // Krawtchouk K_j(w) over F_q.
            let mut kr = BigInt::ZERO;
            for i in 0..=j.min(w) {
                if j - i > n - w {
                    continue;
                }
                let term = &pow_qm1[j - i] * &binom[w][i] * &binom[n - w][j - i];
                if i % 2 == 0 {
                    kr += term;
                } else {
                    kr -= term;
                }
            }
            s += BigInt::from(a_w) * kr;
        }
        if s.sign() == Sign::Minus || (&s % &size) != BigInt::ZERO {
            return Err(Error::BadWeightDistribution(format!(
                "transform coefficient {} is not a nonnegative multiple of the code size",
                j
            )));
        }
        let b: BigInt = s / &size;
        let b: u128 = u128::try_from(b.magnitude().clone()).map_err(|_| {
            Error::BadWeightDistribution(format!("dual count at weight {} exceeds 128 bits", j))
        })?;
        out.push(b);
    }
    if out[0] != 1 {
        return Err(Error::BadWeightDistribution(
            "transform does not produce exactly one zero word".into(),
        ));
    }
    Ok(WeightDistribution { counts: out })
}
