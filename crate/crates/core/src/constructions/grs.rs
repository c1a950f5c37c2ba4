//! Generalized Reed-Solomon codes with prescribed self-orthogonality:
//! desk-scale MDS input codes for the matrix-product constructions.
//!
//! A GRS generator row `i` evaluates `v_j * alpha_j^i` over distinct
//! points `alpha_j` and nonzero column multipliers `v_j`; any such code
//! is MDS.  Self-orthogonality only constrains the multipliers through
//! `u_j = v_j^2` (Euclidean) or `u_j = v_j^(q0+1)` (Hermitian over
//! `F_{q0^2}`): the code is self-orthogonal exactly when the power sums
//! `sum_j u_j alpha_j^m` vanish for every exponent `m` a generator-row
//! pairing can produce.  The finders below exploit that in three ways:
//!
//! * characteristic 2, Euclidean: the interpolation weights
//!   `eta_j = prod_{i != j} (alpha_j - alpha_i)^{-1}` satisfy
//!   `sum_j eta_j alpha_j^m = 0` for `m <= n - 2`, and every element is
//!   a square, so `v_j = sqrt(eta_j)` works outright;
//! * small `u`-spaces: `u_j` ranges over the nonzero squares (odd
//!   characteristic) or the norm subgroup `F_{q0}^*` (Hermitian), so
//!   when `|space|^n` is small the vectors are enumerated exhaustively
//!   — complete for the chosen point set;
//! * otherwise: seeded random polynomials `f` with
//!   `u_j = eta_j f(alpha_j)`, which vanish the power sums whenever
//!   `deg f` is small enough.
//!
//! Every found or supplied spec is re-verified computationally (MDS by
//! enumeration, self-orthogonality by the pairing predicate) before a
//! code is returned.

use std::collections::HashSet;

use rand::prelude::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::gf::{Element, FieldSpec};
use crate::isometry::Isometry;
use crate::linalg::FqMatrix;
use crate::{Error, Result};

/// Caps the randomized-polynomial fallback in the multiplier finders.
pub const MULTIPLIER_SEARCH_TRIES: u64 = 20_000;

/// Point sets tried by a finder before giving up.
const POINT_SET_ATTEMPTS: u64 = 50;

/// Cap on `|u-space|^n` for the exhaustive enumeration route.
const EXHAUSTIVE_U_CAP: u64 = 1 << 16;

/// The self-orthogonality flavor a [`GrsSpec`] promises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoFlavor {
    EuclideanSo,
    HermitianSo,
}

impl SoFlavor {
    /// The isometry the flavor refers to on words of length `n`.
    pub fn isometry(self, field: &FieldSpec, n: usize) -> Result<Isometry> {
        match self {
            SoFlavor::EuclideanSo => Ok(Isometry::euclidean(field, n)),
            SoFlavor::HermitianSo => Isometry::hermitian(field, n),
        }
    }
}

/// Evaluation data for one self-orthogonal GRS code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsSpec {
    pub points: Vec<Element>,
    pub multipliers: Vec<Element>,
    pub dimension: usize,
    pub flavor: SoFlavor,
}

impl GrsSpec {
    pub fn length(&self) -> usize {
        self.points.len()
    }

    pub fn to_json(&self, field: &FieldSpec) -> serde_json::Value {
        serde_json::json!({
            "n": self.length(),
            "k": self.dimension,
            "flavor": serde_json::to_value(self.flavor).expect("flavor serializes"),
            "points": self.points.iter().map(|&x| field.format_element(x)).collect::<Vec<_>>(),
            "multipliers": self.multipliers.iter().map(|&x| field.format_element(x)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(field: &FieldSpec, v: &serde_json::Value) -> Result<GrsSpec> {
        let bad = |why: &str| Error::BadInput(format!("GRS spec JSON: {why}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let flavor: SoFlavor = serde_json::from_value(
            obj.get("flavor").cloned().ok_or_else(|| bad("missing flavor"))?,
        )?;
        let dimension = obj
            .get("k")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| bad("missing k"))? as usize;
        let parse_list = |key: &str| -> Result<Vec<Element>> {
            obj.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| bad(&format!("missing {key}")))?
                .iter()
                .map(|x| field.element_from_json(x))
                .collect()
        };
        Ok(GrsSpec {
            points: parse_list("points")?,
            multipliers: parse_list("multipliers")?,
            dimension,
            flavor,
        })
    }
}

/// The raw `k x n` evaluation generator `(v_j * alpha_j^i)`.
pub fn grs_generator(
    field: &FieldSpec,
    points: &[Element],
    multipliers: &[Element],
    k: usize,
) -> Result<FqMatrix> {
    let n = points.len();
    if n == 0 || k == 0 || k > n {
        return Err(Error::BadInput(format!(
            "GRS shape [{n},{k}] needs 1 <= k <= n"
        )));
    }
    if multipliers.len() != n {
        return Err(Error::DimensionMismatch {
            context: "GRS evaluation data",
            left: format!("{n} points"),
            right: format!("{} multipliers", multipliers.len()),
        });
    }
    let mut seen = HashSet::new();
    for &alpha in points {
        field.ensure_contains(alpha)?;
        if !seen.insert(alpha.code()) {
            return Err(Error::BadInput(format!(
                "GRS evaluation points must be distinct; {} repeats",
                field.format_element(alpha)
            )));
        }
    }
    for &v in multipliers {
        field.ensure_contains(v)?;
        if v.is_zero() {
            return Err(Error::BadInput(
                "GRS column multipliers must be nonzero".into(),
            ));
        }
    }
    Ok(FqMatrix::from_fn(field, k, n, |i, j| {
        let power = field.pow(points[j], i as i64).expect("nonneg power");
        field.mul(multipliers[j], power)
    }))
}

/// Build the code a spec describes and verify both promises: the code is
/// MDS (exact minimum distance `n - k + 1`, enumerated within `budget`)
/// and self-orthogonal under the flavor's inner product.
pub fn grs_code(field: &FieldSpec, spec: &GrsSpec, budget: u64) -> Result<LinearCode> {
    let n = spec.length();
    let k = spec.dimension;
    let gen = grs_generator(field, &spec.points, &spec.multipliers, k)?;
    let code = LinearCode::from_generator(&gen)?;
    if code.dimension() != k {
        return Err(Error::VerificationFailed(format!(
            "GRS generator of [{n},{k}] has rank {}",
            code.dimension()
        )));
    }
    let iso = spec.flavor.isometry(field, n)?;
    if !code.is_self_orthogonal(&iso)? {
        return Err(Error::VerificationFailed(format!(
            "GRS spec [{n},{k}] is not self-orthogonal under its declared flavor"
        )));
    }
    let report = code.min_distance(budget)?;
    if report.distance != n - k + 1 {
        return Err(Error::VerificationFailed(format!(
            "GRS spec [{n},{k}] has distance {}, expected MDS {}",
            report.distance,
            n - k + 1
        )));
    }
    Ok(code)
}

/// Interpolation weights `eta_j = prod_{i != j} (alpha_j - alpha_i)^{-1}`.
pub fn interpolation_weights(field: &FieldSpec, points: &[Element]) -> Result<Vec<Element>> {
    points
        .iter()
        .enumerate()
        .map(|(j, &aj)| {
            let mut prod = field.one();
            for (i, &ai) in points.iter().enumerate() {
                if i != j {
                    prod = field.mul(prod, field.sub(aj, ai));
                }
            }
            field.inv(prod)
        })
        .collect()
}

/// Horner evaluation of `coeffs[0] + coeffs[1] x + ...` at `x`.
fn eval_poly(field: &FieldSpec, coeffs: &[Element], x: Element) -> Element {
    let mut acc = field.zero();
    for &c in coeffs.iter().rev() {
        acc = field.add(field.mul(acc, x), c);
    }
    acc
}

/// The first `n` field elements in canonical order.
fn canonical_points(field: &FieldSpec, n: usize) -> Result<Vec<Element>> {
    if n as u64 > field.order() {
        return Err(Error::BadInput(format!(
            "length {n} needs {n} distinct points but F_{} has only {} elements",
            field.order(),
            field.order()
        )));
    }
    Ok(field.elements().take(n).collect())
}

/// `n` distinct points: the canonical prefix on attempt 0, then seeded
/// shuffles of the whole field.
fn point_set(field: &FieldSpec, n: usize, attempt: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Element>> {
    if attempt == 0 {
        return canonical_points(field, n);
    }
    let mut pool: Vec<Element> = field.elements().collect();
    if n > pool.len() {
        return Err(Error::BadInput(format!(
            "length {n} exceeds the field size {}",
            pool.len()
        )));
    }
    for i in (1..pool.len()).rev() {
        let j = rng.random_range(0..=i);
        pool.swap(i, j);
    }
    pool.truncate(n);
    Ok(pool)
}

/// Exhaustively search vectors `u` with entries from `space` such that
/// `sum_j u_j points[j]^m = 0` for every `m` in `exponents`.
fn exhaustive_u_vector(
    field: &FieldSpec,
    points: &[Element],
    space: &[Element],
    exponents: &[usize],
) -> Option<Vec<Element>> {
    let n = points.len();
    // Precompute the needed point powers.
    let powers: Vec<Vec<Element>> = exponents
        .iter()
        .map(|&m| {
            points
                .iter()
                .map(|&a| field.pow(a, m as i64).expect("nonneg power"))
                .collect()
        })
        .collect();
    let mut digits = vec![0usize; n];
    loop {
        let ok = powers.iter().all(|pw| {
            let mut sum = field.zero();
            for j in 0..n {
                sum = field.add(sum, field.mul(space[digits[j]], pw[j]));
            }
            sum.is_zero()
        });
        if ok {
            return Some(digits.iter().map(|&d| space[d]).collect());
        }
        // Odometer step.
        let mut j = 0;
        loop {
            if j == n {
                return None;
            }
            digits[j] += 1;
            if digits[j] < space.len() {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// Find multipliers making the `[n, k]` GRS code Euclidean
/// self-orthogonal.  `v_j^2` must be a nonzero square `u_j` whose power
/// sums vanish for `m <= 2k - 2`; see the module docs for the routes.
pub fn find_euclidean_so(field: &FieldSpec, n: usize, k: usize, seed: u64) -> Result<GrsSpec> {
    if k == 0 || 2 * k > n {
        return Err(Error::BadInput(format!(
            "Euclidean self-orthogonal GRS needs 1 <= k <= n/2, got [{n},{k}]"
        )));
    }
    let spec_from = |points: Vec<Element>, multipliers: Vec<Element>| GrsSpec {
        points,
        multipliers,
        dimension: k,
        flavor: SoFlavor::EuclideanSo,
    };
    if field.p() == 2 {
        let points = canonical_points(field, n)?;
        let eta = interpolation_weights(field, &points)?;
        let multipliers = eta
            .iter()
            .map(|&x| field.sqrt(x).expect("char-2 elements are squares"))
            .collect();
        return Ok(spec_from(points, multipliers));
    }
    canonical_points(field, n)?; // length feasibility
    let squares: Vec<Element> = (0..(field.order() - 1) / 2)
        .map(|i| field.omega_pow(2 * i as i64))
        .collect();
    let exponents: Vec<usize> = (0..=2 * k - 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if (squares.len() as u64).checked_pow(n as u32).is_some_and(|c| c <= EXHAUSTIVE_U_CAP) {
        for attempt in 0..POINT_SET_ATTEMPTS {
            let points = point_set(field, n, attempt, &mut rng)?;
            if let Some(u) = exhaustive_u_vector(field, &points, &squares, &exponents) {
                let multipliers = u
                    .iter()
                    .map(|&x| field.sqrt(x).expect("u is a square"))
                    .collect();
                return Ok(spec_from(points, multipliers));
            }
        }
    } else {
        // Large u-space: seeded eta * f(alpha) family, deg f <= n - 2k.
        let degree_cap = n - 2 * k;
        let all: Vec<Element> = field.elements().collect();
        let points = canonical_points(field, n)?;
        let eta = interpolation_weights(field, &points)?;
        for trial in 0..MULTIPLIER_SEARCH_TRIES {
            let coeffs: Vec<Element> = if trial == 0 {
                vec![field.one()]
            } else {
                (0..=degree_cap)
                    .map(|_| *all.choose(&mut rng).expect("field is nonempty"))
                    .collect()
            };
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            let roots: Option<Vec<Element>> = points
                .iter()
                .zip(&eta)
                .map(|(&alpha, &eta_j)| {
                    let val = field.mul(eta_j, eval_poly(field, &coeffs, alpha));
                    if val.is_zero() {
                        None
                    } else {
                        field.sqrt(val)
                    }
                })
                .collect();
            if let Some(multipliers) = roots {
                return Ok(spec_from(points, multipliers));
            }
        }
    }
    Err(Error::SearchExhausted {
        what: format!(
            "Euclidean self-orthogonal multipliers for [{n},{k}] over F_{}",
            field.order()
        ),
        budget: MULTIPLIER_SEARCH_TRIES,
    })
}

/// Solve `v^(q0 + 1) = val` for `val` in the norm subgroup `F_{q0}^*`.
fn norm_preimage(field: &FieldSpec, q0: u64, val: Element) -> Option<Element> {
    let l = field.log(val)?;
    if l % (q0 + 1) == 0 {
        Some(field.omega_pow((l / (q0 + 1)) as i64))
    } else {
        None
    }
}

/// Find multipliers making the `[n, k]` GRS code over `F_{q0^2}`
/// Hermitian self-orthogonal.  `v_j^(q0+1)` is a norm `u_j` in
/// `F_{q0}^*` whose power sums must vanish at every exponent `i + j*q0`
/// with `i, j < k`; see the module docs for the routes.
pub fn find_hermitian_so(field: &FieldSpec, n: usize, k: usize, seed: u64) -> Result<GrsSpec> {
    if field.h() % 2 != 0 {
        return Err(Error::BadInput(format!(
            "Hermitian self-orthogonality needs a square field; F_{} has odd degree",
            field.order()
        )));
    }
    if k == 0 || 2 * k > n {
        return Err(Error::BadInput(format!(
            "Hermitian self-orthogonal GRS needs 1 <= k <= n/2, got [{n},{k}]"
        )));
    }
    canonical_points(field, n)?; // length feasibility
    let q0 = field.p().pow(field.h() / 2);
    let step = (field.order() - 1) / (q0 - 1);
    let norms: Vec<Element> = (0..q0 - 1).map(|i| field.omega_pow((i * step) as i64)).collect();
    debug_assert!(norms.iter().all(|&x| field.log(x).unwrap() % (q0 + 1) == 0));
    let mut exponents: Vec<usize> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let m = i + j * q0 as usize;
            if !exponents.contains(&m) {
                exponents.push(m);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if (norms.len() as u64).checked_pow(n as u32).is_some_and(|c| c <= EXHAUSTIVE_U_CAP) {
        for attempt in 0..POINT_SET_ATTEMPTS {
            let points = point_set(field, n, attempt, &mut rng)?;
            if let Some(u) = exhaustive_u_vector(field, &points, &norms, &exponents) {
                let multipliers = u
                    .iter()
                    .map(|&x| norm_preimage(field, q0, x).expect("u is a norm"))
                    .collect();
                return Ok(GrsSpec {
                    points,
                    multipliers,
                    dimension: k,
                    flavor: SoFlavor::HermitianSo,
                });
            }
        }
    } else if n >= 2 && (k - 1) * (q0 as usize + 1) <= n - 2 {
        // Large u-space: eta * f(alpha) family needs
        // deg f + (k-1)(q0+1) <= n - 2 to vanish all pairings.
        let degree_cap = (n - 2) - (k - 1) * (q0 as usize + 1);
        let all: Vec<Element> = field.elements().collect();
        for attempt in 0..POINT_SET_ATTEMPTS {
            let points = point_set(field, n, attempt, &mut rng)?;
            let eta = interpolation_weights(field, &points)?;
            let try_poly = |coeffs: &[Element]| -> Option<Vec<Element>> {
                points
                    .iter()
                    .zip(&eta)
                    .map(|(&alpha, &eta_j)| {
                        let val = field.mul(eta_j, eval_poly(field, coeffs, alpha));
                        norm_preimage(field, q0, val)
                    })
                    .collect()
            };
            for t in 0..field.order() - 1 {
                if let Some(multipliers) = try_poly(&[field.omega_pow(t as i64)]) {
                    return Ok(GrsSpec {
                        points,
                        multipliers,
                        dimension: k,
                        flavor: SoFlavor::HermitianSo,
                    });
                }
            }
            for _ in 0..MULTIPLIER_SEARCH_TRIES / POINT_SET_ATTEMPTS {
                let coeffs: Vec<Element> = (0..=degree_cap)
                    .map(|_| *all.choose(&mut rng).expect("field is nonempty"))
                    .collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                if let Some(multipliers) = try_poly(&coeffs) {
                    return Ok(GrsSpec {
                        points,
                        multipliers,
                        dimension: k,
                        flavor: SoFlavor::HermitianSo,
                    });
                }
            }
        }
    }
    Err(Error::SearchExhausted {
        what: format!(
            "Hermitian self-orthogonal multipliers for [{n},{k}] over F_{}",
            field.order()
        ),
        budget: MULTIPLIER_SEARCH_TRIES,
    })
}
