//! Named reference instances that ship with the library.
//!
//! Each item re-derives a published worked instance from scratch —
//! lifting, gram factorizations, partner isometries, sampling rates, or
//! whole parameter tables — and cross-checks the result against frozen
//! reference values.  Items report one [`CheckLine`] per verified fact,
//! so a failure pinpoints exactly which equality broke.
//!
//! The frozen matrices are written over a fixed primitive element `w`
//! of the pinned field modulus.  A source that chose a different
//! primitive element would list the same matrices with all exponents
//! multiplied by some unit `m` modulo `q - 1`; the four `example_*`
//! items therefore retry every coprime exponent multiplier before
//! declaring failure and record which representation matched.

use serde::Serialize;

use crate::codes::{macwilliams, LinearCode};
use crate::constructions::{construction2, construction3, Certificate, ConstructionResult};
use crate::gf::{Element, FieldSpec};
use crate::isometry::{Isometry, KronIsometry};
use crate::linalg::FqMatrix;
use crate::{nsc, quasi, Error, Result};

use super::grs;

/// Names accepted by [`run`].
pub const ITEMS: &[&str] = &[
    "example_381",
    "example_con3",
    "example_tauod_f8",
    "example_tauod_f64",
    "table1",
    "table2",
    "table3",
    "table4",
    "table5",
];

/// One verified fact inside a reproduction item.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    fn ok(name: &str, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Self {
        if got == want {
            CheckLine::ok(name, format!("{got:?}"))
        } else {
            CheckLine::fail(name, format!("got {got:?}, want {want:?}"))
        }
    }

    fn require(name: &str, cond: bool, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed: cond,
            detail: detail.into(),
        }
    }
}

/// Outcome of one reproduction item.
#[derive(Clone, Debug)]
pub struct ReproduceOutcome {
    pub item: String,
    pub passed: bool,
    /// `"canonical"`, or `"conjugate (w -> w^m)"` when the frozen data
    /// only matched after remapping the primitive element.
    pub representation: String,
    pub checks: Vec<CheckLine>,
    pub data: serde_json::Value,
}

impl ReproduceOutcome {
    fn collect(
        item: &str,
        representation: String,
        checks: Vec<CheckLine>,
        data: serde_json::Value,
    ) -> Self {
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        ReproduceOutcome {
            item: item.into(),
            passed,
            representation,
            checks,
            data,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "item": self.item,
            "passed": self.passed,
            "representation": self.representation,
            "checks": serde_json::to_value(&self.checks).expect("checks serialize"),
            "data": self.data,
        })
    }
}

/// Run a reproduction item by name.  `table2` runs its default
/// configuration; use [`table2`] directly to choose the pair and trial
/// count.
pub fn run(item: &str, budget: u64) -> Result<ReproduceOutcome> {
    match item {
        "example_381" => example_381(),
        "example_con3" => example_con3(budget),
        "example_tauod_f8" => example_tauod_f8(),
        "example_tauod_f64" => example_tauod_f64(),
        "table1" => table1(),
        "table2" => table2(3, 3, 10_000, 20_240),
        "table3" => table3(budget),
        "table4" => table4(budget),
        "table5" => table5(budget),
        other => Err(Error::BadInput(format!(
            "unknown reproduction item {other:?}; expected one of {}",
            ITEMS.join(", ")
        ))),
    }
}

/// Matrix from a grid of `w`-exponents scaled by `mult`; `-1` encodes
/// zero.
fn wmat(f: &FieldSpec, mult: u64, rows: &[&[i64]]) -> FqMatrix {
    let order = f.order() - 1;
    let data: Vec<Vec<Element>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&k| {
                    if k < 0 {
                        f.zero()
                    } else {
                        f.omega_pow(((k as u64 * mult) % order) as i64)
                    }
                })
                .collect()
        })
        .collect();
    FqMatrix::from_rows(f, data).expect("reference grid is rectangular")
}

fn welt(f: &FieldSpec, mult: u64, k: i64) -> Element {
    if k < 0 {
        f.zero()
    } else {
        f.omega_pow(((k as u64 * mult) % (f.order() - 1)) as i64)
    }
}

/// Evaluate `check` at the canonical primitive element first, then at
/// every conjugate exponent multiplier until all lines pass.
fn scan_representations<F>(f: &FieldSpec, check: F) -> (String, Vec<CheckLine>)
where
    F: Fn(u64) -> Result<Vec<CheckLine>>,
{
    let eval = |m: u64| -> Vec<CheckLine> {
        match check(m) {
            Ok(lines) => lines,
            Err(e) => vec![CheckLine::fail("item evaluation", e.to_string())],
        }
    };
    let canonical = eval(1);
    if canonical.iter().all(|c| c.passed) {
        return ("canonical".into(), canonical);
    }
    let order = f.order() - 1;
    for m in 2..order {
        if gcd(m, order) != 1 {
            continue;
        }
        let lines = eval(m);
        if lines.iter().all(|c| c.passed) {
            return (format!("conjugate (w -> w^{m})"), lines);
        }
    }
    ("canonical".into(), canonical)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Quasi-diagonal lift over `F_81`: a Toeplitz matrix with entries in
/// the quadratic subfield is lifted so that its twisted pairing becomes
/// diagonal, and every intermediate matrix matches the frozen
/// reference.
pub fn example_381() -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(3, 4, None)?;
    let run_at = |m: u64| -> Result<Vec<CheckLine>> {
        let a = wmat(&f, m, &[&[10, 50, 20], &[30, 10, 50], &[0, 30, 10]]);
        let m_tilde = wmat(&f, m, &[&[-1, 10, -1], &[40, -1, -1], &[-1, -1, 60]]);
        let mut checks = Vec::new();
        checks.push(CheckLine::require(
            "defining matrix is an NSC Toeplitz matrix",
            a.require_toeplitz().is_ok() && nsc::is_nsc(&a)?,
            "3x3, entries in the quadratic subfield",
        ));
        let params = f.galois_params(3);
        let mut in_sub = true;
        for i in 0..3 {
            for j in 0..3 {
                in_sub &= f.in_subfield(a[(i, j)], params.g)?;
            }
        }
        checks.push(CheckLine::require(
            "entries lie in the subfield fixed by the pairing",
            in_sub && params.g == 2,
            format!("r = {}, g = {}", params.r, params.g),
        ));
        let b = a.mul(&m_tilde)?;
        let s_mat = b.mul(&b.frobenius_map(3).transpose())?;
        let s_ref = wmat(&f, m, &[&[0, -1, 40], &[-1, 40, 30], &[40, 10, -1]]);
        checks.push(CheckLine::require(
            "twisted pairing matches the printed matrix",
            s_mat == s_ref,
            "A M~ pi_3(A M~)^T",
        ));
        let minors: Vec<Element> = (1..=3)
            .map(|k| s_mat.leading_principal(k)?.det())
            .collect::<Result<_>>()?;
        checks.push(CheckLine::eq(
            "leading principal minors of the pairing",
            minors.iter().map(|&x| f.format_element(x)).collect::<Vec<_>>(),
            vec![
                f.format_element(welt(&f, m, 0)),
                f.format_element(welt(&f, m, 40)),
                f.format_element(welt(&f, m, 40)),
            ],
        ));
        let lift = quasi::lift_to_quasi(&a, &m_tilde, 3)?;
        let l_ref = wmat(&f, m, &[&[0, -1, -1], &[-1, 0, -1], &[0, 10, 0]]);
        checks.push(CheckLine::require(
            "unit lower triangular lift matches",
            lift.lower == l_ref,
            "L",
        ));
        let la_ref = wmat(&f, m, &[&[10, 50, 20], &[30, 10, 50], &[10, 60, 10]]);
        checks.push(CheckLine::require(
            "lifted matrix matches",
            lift.lifted == la_ref,
            "L A",
        ));
        let m_hat_ref =
            FqMatrix::diagonal(&f, &[welt(&f, m, 40), f.one(), f.one()]);
        checks.push(CheckLine::require(
            "companion diagonal matrix is diag(2, 1, 1)",
            lift.m_hat == m_hat_ref,
            "D~ pi_3(D~)",
        ));
        checks.push(CheckLine::eq(
            "final pairing diagonal is diag(1, 2, 1)",
            lift.diagonal.iter().map(|&x| f.format_element(x)).collect::<Vec<_>>(),
            vec![
                f.format_element(f.one()),
                f.format_element(welt(&f, m, 40)),
                f.format_element(f.one()),
            ],
        ));
        checks.push(CheckLine::require(
            "lifted matrix certified NSC and quasi-diagonal",
            nsc::is_nsc(&lift.lifted)? && quasi::is_quasi(&lift.lifted, &lift.m_hat, 3)?,
            "independent certification",
        ));
        Ok(checks)
    };
    let (representation, checks) = scan_representations(&f, run_at);
    let data = match quasi::lift_to_quasi(
        &wmat(&f, 1, &[&[10, 50, 20], &[30, 10, 50], &[0, 30, 10]]),
        &wmat(&f, 1, &[&[-1, 10, -1], &[40, -1, -1], &[-1, -1, 60]]),
        3,
    ) {
        Ok(lift) => lift.to_json(),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    Ok(ReproduceOutcome::collect("example_381", representation, checks, data))
}

/// Frozen defining data for the gram-flip factorization over `F_64`.
fn con3_f64_matrices(f: &FieldSpec, m: u64) -> (FqMatrix, FqMatrix, FqMatrix) {
    let a = wmat(&f, m, &[&[0, 54, 27], &[36, 0, 54], &[54, 36, 0]]);
    let mono = FqMatrix::diagonal(
        f,
        &[welt(f, m, 27), welt(f, m, 54), welt(f, m, 27)],
    );
    let d = FqMatrix::diagonal(f, &[welt(f, m, 36), welt(f, m, 54), f.one()]);
    (a, mono, d)
}

/// Gram-flip factorization over `F_64`: `pi_0(A) M A = D Q` for the
/// frozen Toeplitz/monomial/diagonal triple, then an end-to-end
/// self-orthogonal product built on it.
pub fn example_con3(budget: u64) -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(2, 6, None)?;
    let run_at = |m: u64| -> Result<Vec<CheckLine>> {
        let (a, mono, d) = con3_f64_matrices(&f, m);
        let mut checks = Vec::new();
        checks.push(CheckLine::require(
            "defining matrix is an NSC Toeplitz matrix",
            a.require_toeplitz().is_ok() && nsc::is_nsc(&a)?,
            "3x3 over F_64",
        ));
        let q = FqMatrix::anti_identity(&f, 3);
        let lhs = a.frobenius_map(0).mul(&mono)?.mul(&a)?;
        let rhs = d.mul(&q)?;
        checks.push(CheckLine::require(
            "gram factorization pi_0(A) M A = D Q holds",
            lhs == rhs,
            "D = diag(w^36, w^54, 1)",
        ));
        Ok(checks)
    };
    let (representation, mut checks) = scan_representations(&f, run_at);

    // End-to-end: feed verified self-orthogonal MDS inputs through the
    // frozen matrices and certify the product.
    let (a, mono, _) = con3_f64_matrices(&f, 1);
    match con3_end_to_end(&f, &a, &mono, 4, 2, budget) {
        Ok((result, lines)) => {
            checks.extend(lines);
            let data = result.to_json();
            Ok(ReproduceOutcome::collect("example_con3", representation, checks, data))
        }
        Err(e) => {
            checks.push(CheckLine::fail("end-to-end construction", e.to_string()));
            Ok(ReproduceOutcome::collect(
                "example_con3",
                representation,
                checks,
                serde_json::Value::Null,
            ))
        }
    }
}

/// Shared helper: run the gram-flip construction on `[n, k]`
/// self-orthogonal GRS inputs and verify the claims.
fn con3_end_to_end(
    f: &FieldSpec,
    a: &FqMatrix,
    mono: &FqMatrix,
    n: usize,
    k: usize,
    budget: u64,
) -> Result<(ConstructionResult, Vec<CheckLine>)> {
    let spec = grs::find_euclidean_so(f, n, k, 17)?;
    let code = grs::grs_code(f, &spec, budget)?;
    let inputs = vec![code.clone(), code.clone(), code];
    let sigma_prime = Isometry::euclidean(f, n);
    let result = construction3(a, mono, &inputs, &sigma_prime, budget)?;
    let mut lines = Vec::new();
    lines.push(CheckLine::eq(
        "product code dimension",
        result.claimed_dim,
        3 * k,
    ));
    lines.push(CheckLine::eq(
        "distance bound",
        result.claimed_d_bound,
        n + 1 - k,
    ));
    let q = FqMatrix::anti_identity(f, a.rows());
    let expected_sigma = KronIsometry::new(mono.mul(&q)?, sigma_prime)?.flatten()?;
    lines.push(CheckLine::require(
        "output isometry matrix is (M Q) (x) I_n",
        result.sigma.matrix() == expected_sigma.matrix()
            && result.sigma.exponent() == expected_sigma.exponent(),
        "Kronecker shape",
    ));
    Ok((result, lines))
}

/// Flip-gram identity over `F_8`: `pi_0(A) M A = Q`, so the gram matrix
/// `A A^T = M^{-1} Q` is diagonal and the Toeplitz matrix qualifies as
/// an optimal defining matrix for the identity permutation.
pub fn example_tauod_f8() -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(2, 3, None)?;
    let run_at = |m: u64| -> Result<Vec<CheckLine>> {
        let a = wmat(&f, m, &[&[0, 2, 3], &[3, 0, 2], &[2, 3, 0]]);
        let mono = wmat(&f, m, &[&[-1, -1, 6], &[-1, 6, -1], &[6, -1, -1]]);
        let mut checks = Vec::new();
        checks.push(CheckLine::require(
            "defining matrix is an NSC Toeplitz matrix",
            a.require_toeplitz().is_ok() && nsc::is_nsc(&a)?,
            "3x3 over F_8",
        ));
        let q = FqMatrix::anti_identity(&f, 3);
        checks.push(CheckLine::require(
            "flip-gram identity pi_0(A) M A = Q holds",
            a.mul(&mono)?.mul(&a)? == q,
            "M = w^6 Q",
        ));
        let m_inv_ref = FqMatrix::diagonal(&f, &[welt(&f, m, 1); 3]).mul(&q)?;
        checks.push(CheckLine::require(
            "M^{-1} equals diag(w, w, w) Q",
            mono.inverse()? == m_inv_ref,
            "monomial inverse",
        ));
        let report = quasi::gram_monomial_report(&a)?;
        let gram_ref = FqMatrix::diagonal(&f, &[welt(&f, m, 1); 3]);
        checks.push(CheckLine::require(
            "gram matrix A A^T is diag(w, w, w)",
            report.gram == gram_ref,
            "diagonal gram",
        ));
        checks.push(CheckLine::require(
            "gram certified monomial with the identity permutation",
            report.is_monomial && report.perm.as_deref() == Some(&[0, 1, 2]),
            "optimal defining matrix for the identity permutation",
        ));
        Ok(checks)
    };
    let (representation, checks) = scan_representations(&f, run_at);
    let data = match quasi::gram_monomial_report(&wmat(
        &f,
        1,
        &[&[0, 2, 3], &[3, 0, 2], &[2, 3, 0]],
    )) {
        Ok(r) => r.to_json(),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    Ok(ReproduceOutcome::collect("example_tauod_f8", representation, checks, data))
}

/// Non-example over `F_64`: the gram matrix of the frozen Toeplitz
/// matrix is *not* monomial, so no permutation makes it an optimal
/// defining matrix — the report must reject it.
pub fn example_tauod_f64() -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(2, 6, None)?;
    let run_at = |m: u64| -> Result<Vec<CheckLine>> {
        let (a, _, _) = con3_f64_matrices(&f, m);
        let mut checks = Vec::new();
        let gram_ref = wmat(
            &f,
            m,
            &[&[27, 45, 54], &[45, 18, -1], &[54, -1, 18]],
        );
        let report = quasi::gram_monomial_report(&a)?;
        checks.push(CheckLine::require(
            "gram matrix A A^T matches the printed matrix",
            report.gram == gram_ref,
            "symmetric, with two off-diagonal nonzeros",
        ));
        checks.push(CheckLine::require(
            "gram correctly rejected as non-monomial",
            !report.is_monomial,
            "no permutation yields an optimal defining matrix",
        ));
        Ok(checks)
    };
    let (representation, checks) = scan_representations(&f, run_at);
    let data = match quasi::gram_monomial_report(&con3_f64_matrices(&f, 1).0) {
        Ok(r) => r.to_json(),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    Ok(ReproduceOutcome::collect("example_tauod_f64", representation, checks, data))
}

/// The two frozen partner-isometry rows over `F_4` (outer matrices at
/// Frobenius exponent 1), checked for every scalar `t` in `F_4^*`, plus
/// a double-dual round trip through each partner pair.
pub fn table1() -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(2, 2, None)?;
    let rows: [(&str, Vec<Vec<i64>>, Vec<Vec<i64>>); 2] = [
        (
            "row 1",
            vec![
                vec![0, -1, -1, -1],
                vec![-1, -1, -1, 2],
                vec![-1, -1, 0, -1],
                vec![-1, 1, -1, -1],
            ],
            vec![
                vec![0, -1, -1, -1],
                vec![-1, -1, -1, 2],
                vec![-1, -1, 0, -1],
                vec![-1, 1, -1, -1],
            ],
        ),
        (
            "row 2",
            vec![
                vec![2, -1, -1, -1],
                vec![-1, -1, 0, -1],
                vec![-1, 1, -1, -1],
                vec![-1, -1, -1, 2],
            ],
            vec![
                vec![1, -1, -1, -1],
                vec![-1, -1, 2, -1],
                vec![-1, 0, -1, -1],
                vec![-1, -1, -1, 1],
            ],
        ),
    ];
    let mut checks = Vec::new();
    let mut data_rows = Vec::new();
    for (label, tilde_grid, partner_grid) in &rows {
        let tilde_rows: Vec<&[i64]> = tilde_grid.iter().map(|r| r.as_slice()).collect();
        let partner_rows: Vec<&[i64]> = partner_grid.iter().map(|r| r.as_slice()).collect();
        let m_tilde = wmat(&f, 1, &tilde_rows);
        let tabulated = wmat(&f, 1, &partner_rows);
        let sigma_prime = Isometry::new(m_tilde.clone(), 1)?;
        for (t_name, t) in [("1", f.one()), ("w", f.omega()), ("w^2", f.omega_pow(2))] {
            let partner = sigma_prime.dual_partner(t)?;
            let expected = tabulated.scale(f.inv(t)?);
            checks.push(CheckLine::require(
                &format!("{label}: partner matrix matches for t = {t_name}"),
                *partner.matrix() == expected && partner.exponent() == 1,
                "t^{-1} pi_1(M~)^T at exponent h - e",
            ));
        }
        // Double dual: dualizing with the printed pair returns the code.
        let c = LinearCode::from_generator(&wmat(
            &f,
            1,
            &[&[0, 1, 2, -1], &[-1, 0, 1, 2]],
        ))?;
        let partner = sigma_prime.dual_partner(f.one())?;
        let round_trip = c.sigma_dual(&sigma_prime)?.sigma_dual(&partner)?;
        checks.push(CheckLine::require(
            &format!("{label}: double dual returns the original code"),
            round_trip == c,
            "[4,2] probe code",
        ));
        data_rows.push(serde_json::json!({
            "label": label,
            "outer": m_tilde.to_json(),
            "partner_outer": tabulated.to_json(),
        }));
    }
    Ok(ReproduceOutcome::collect(
        "table1",
        "canonical".into(),
        checks,
        serde_json::Value::Array(data_rows),
    ))
}

/// Published sampling proportions (out of 10000) for the quasi-diagonal
/// search, by `(q, s)`.
pub const SAMPLING_REFERENCE: &[(u64, usize, u64)] = &[
    (3, 3, 8294),
    (3, 5, 6622),
    (3, 6, 1117),
    (4, 4, 7327),
    (4, 6, 4614),
    (4, 7, 5673),
    (5, 5, 7454),
    (5, 7, 5668),
    (5, 8, 4501),
    (7, 7, 7633),
    (7, 9, 6235),
    (8, 8, 7595),
];

/// Absolute tolerance on reproduced sampling rates.
pub const SAMPLING_RATE_TOLERANCE: f64 = 0.08;

fn sampling_field(q: u64) -> Result<FieldSpec> {
    match q {
        3 => FieldSpec::new(3, 2, None),
        4 => FieldSpec::new(2, 4, None),
        5 => FieldSpec::new(5, 2, None),
        7 => FieldSpec::new(7, 2, None),
        8 => FieldSpec::new(2, 6, None),
        other => Err(Error::BadInput(format!(
            "no reference sampling data for base order {other}; supported: 3, 4, 5, 7, 8"
        ))),
    }
}

/// Re-run the seeded quasi-diagonal sampling campaign for one reference
/// `(q, s)` pair and compare the acceptance rate with the published
/// proportion; retained hits are re-certified independently.
pub fn table2(q: u64, s: usize, trials: u64, seed: u64) -> Result<ReproduceOutcome> {
    let reference = SAMPLING_REFERENCE
        .iter()
        .find(|&&(rq, rs, _)| rq == q && rs == s)
        .map(|&(_, _, count)| count)
        .ok_or_else(|| {
            Error::BadInput(format!(
                "no reference sampling proportion for (q, s) = ({q}, {s})"
            ))
        })?;
    let f = sampling_field(q)?;
    let e = f.h() / 2;
    let identity = FqMatrix::identity(&f, s);
    let report = quasi::sampling_campaign(
        &f,
        s,
        &identity,
        e,
        trials,
        seed,
        8,
        crate::DEFAULT_NSC_RETRY_LIMIT,
    )?;
    let expected = reference as f64 / 10_000.0;
    let delta = (report.rate() - expected).abs();
    let mut checks = vec![CheckLine::require(
        "sampled acceptance rate matches the published proportion",
        delta <= SAMPLING_RATE_TOLERANCE,
        format!(
            "rate {:.4} vs reference {:.4} over {} trials (|delta| = {:.4}, tolerance {})",
            report.rate(),
            expected,
            trials,
            delta,
            SAMPLING_RATE_TOLERANCE
        ),
    )];
    let mut certified = 0usize;
    for hit in &report.hits {
        if nsc::is_nsc(&hit.lift.lifted)?
            && quasi::is_quasi(&hit.lift.lifted, &hit.lift.m_hat, e)?
        {
            certified += 1;
        }
    }
    checks.push(CheckLine::require(
        "all retained lifts pass independent certification",
        certified == report.hits.len(),
        format!("{certified}/{} hits re-certified", report.hits.len()),
    ));
    Ok(ReproduceOutcome::collect(
        "table2",
        "canonical".into(),
        checks,
        report.to_json(),
    ))
}

/// Published rows of the lifted-product parameter table over `F_81`:
/// `(k_3, dimension, distance bound)` with `C_1 = C_2 = [81, 20, 62]`.
pub const LIFTED_PRODUCT_REFERENCE: &[(usize, usize, usize)] = &[
    (1, 41, 81),
    (2, 42, 80),
    (3, 43, 79),
    (4, 44, 76),
    (5, 45, 77),
    (6, 46, 76),
    (7, 47, 75),
    (8, 48, 74),
    (9, 49, 73),
    (10, 50, 72),
    (11, 51, 71),
    (12, 52, 70),
    (13, 53, 69),
    (14, 54, 68),
    (15, 55, 67),
    (16, 56, 66),
    (17, 57, 65),
    (18, 58, 64),
    (19, 59, 63),
    (20, 60, 62),
];

/// Parameter arithmetic for the lifted-product table over `F_81`
/// (inputs `[81, k_i, 82 - k_i]` with `k_1 = k_2 = 20`), plus a
/// miniature end-to-end run of the same lift on short inputs.
pub fn table3(budget: u64) -> Result<ReproduceOutcome> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut dims_ok = true;
    let mut bounds_dominate = true;
    let mut strict_rows = Vec::new();
    for &(k3, dim_ref, d_ref) in LIFTED_PRODUCT_REFERENCE {
        let dims = [20usize, 20, k3];
        let dists = [62usize, 62, 82 - k3];
        let computed_dim: usize = dims.iter().sum();
        let computed_d = (0..3).map(|i| (3 - i) * dists[i]).min().unwrap();
        let computed_dual = (0..3).map(|i| (i + 1) * (dims[i] + 1)).min().unwrap();
        dims_ok &= computed_dim == dim_ref;
        bounds_dominate &= computed_d >= d_ref;
        if computed_d > d_ref {
            strict_rows.push(format!(
                "k_3 = {k3}: computed {computed_d} > printed {d_ref}"
            ));
        }
        rows.push(serde_json::json!({
            "k3": k3,
            "dimension": computed_dim,
            "distance_bound": computed_d,
            "printed_distance_bound": d_ref,
            "dual_distance_bound": computed_dual,
        }));
    }
    checks.push(CheckLine::require(
        "all printed dimensions match k_1 + k_2 + k_3",
        dims_ok,
        "20 rows",
    ));
    checks.push(CheckLine::require(
        "computed distance bounds dominate the printed ones",
        bounds_dominate,
        if strict_rows.is_empty() {
            "all rows agree exactly".to_string()
        } else {
            format!(
                "strict improvement on {} (printed value is off by the difference)",
                strict_rows.join("; ")
            )
        },
    ));

    // Miniature end-to-end run: the frozen F_81 lift drives the product
    // construction on short Galois self-orthogonal inputs.
    let f = FieldSpec::new(3, 4, None)?;
    let a = wmat(&f, 1, &[&[10, 50, 20], &[30, 10, 50], &[0, 30, 10]]);
    let m_tilde = wmat(&f, 1, &[&[-1, 10, -1], &[40, -1, -1], &[-1, -1, 60]]);
    let gen = FqMatrix::from_rows(&f, vec![vec![f.one(), f.omega_pow(10)]])?;
    let block = LinearCode::from_generator(&gen)?;
    let sigma_prime = Isometry::galois(&f, 2, 3);
    match construction2(
        &a,
        &m_tilde,
        &[block.clone(), block.clone(), block],
        &sigma_prime,
        budget,
    ) {
        Ok(result) => {
            checks.push(CheckLine::eq(
                "miniature product dimension",
                result.claimed_dim,
                3,
            ));
            let (pairing, companion) = match &result.certificate {
                Certificate::LiftedQuasiDiagonal {
                    pairing_diagonal,
                    companion_diagonal,
                    ..
                } => (pairing_diagonal.clone(), companion_diagonal.clone()),
                _ => (Vec::new(), Vec::new()),
            };
            let two = f.format_element(f.omega_pow(40));
            let one = f.format_element(f.one());
            checks.push(CheckLine::eq(
                "miniature pairing diagonal is diag(1, 2, 1)",
                pairing,
                vec![one.clone(), two.clone(), one.clone()],
            ));
            checks.push(CheckLine::eq(
                "miniature companion diagonal is diag(2, 1, 1)",
                companion,
                vec![two, one.clone(), one],
            ));
            rows.push(serde_json::json!({ "miniature": result.to_json() }));
        }
        Err(e) => checks.push(CheckLine::fail("miniature end-to-end run", e.to_string())),
    }
    Ok(ReproduceOutcome::collect(
        "table3",
        "canonical".into(),
        checks,
        serde_json::Value::Array(rows),
    ))
}

/// Parameter arithmetic for the gram-flip product table over `F_64`
/// (inputs `[64, k_i, 65 - k_i]` with `k_1 = k_2 = 32`), plus the
/// miniature end-to-end run shared with `example_con3`.
pub fn table4(budget: u64) -> Result<ReproduceOutcome> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut all_match = true;
    for k3 in 1..=32usize {
        let dims = [32usize, 32, k3];
        let dists = [33usize, 33, 65 - k3];
        let computed_dim: usize = dims.iter().sum();
        let computed_d = (0..3).map(|i| (3 - i) * dists[i]).min().unwrap();
        let computed_dual = (0..3).map(|i| (i + 1) * (dims[i] + 1)).min().unwrap();
        // Printed rows: dimension 64 + k_3, distance bound 65 - k_3.
        all_match &= computed_dim == 64 + k3 && computed_d == 65 - k3;
        rows.push(serde_json::json!({
            "k3": k3,
            "dimension": computed_dim,
            "distance_bound": computed_d,
            "dual_distance_bound": computed_dual,
        }));
    }
    checks.push(CheckLine::require(
        "all 32 printed rows match the parameter formulas",
        all_match,
        "dimension 64 + k_3, distance bound 65 - k_3",
    ));
    let f = FieldSpec::new(2, 6, None)?;
    let (a, mono, d) = con3_f64_matrices(&f, 1);
    match con3_end_to_end(&f, &a, &mono, 4, 2, budget) {
        Ok((result, lines)) => {
            checks.extend(lines);
            let want_diag: Vec<String> = d
                .require_diagonal()?
                .iter()
                .map(|&x| f.format_element(x))
                .collect();
            let diag_ok = matches!(
                &result.certificate,
                Certificate::GramFlipFactorization { factor_diagonal, .. }
                    if *factor_diagonal == want_diag
            );
            checks.push(CheckLine::require(
                "certificate records the frozen factor diagonal",
                diag_ok,
                "diag(w^36, w^54, 1)",
            ));
            rows.push(serde_json::json!({ "miniature": result.to_json() }));
        }
        Err(e) => checks.push(CheckLine::fail("miniature end-to-end run", e.to_string())),
    }
    Ok(ReproduceOutcome::collect(
        "table4",
        "canonical".into(),
        checks,
        serde_json::Value::Array(rows),
    ))
}

/// Published rows of the short gram-flip product table over `F_8`:
/// `(n, k_1, k_2, k_3, dimension, distance bound, dual distance bound)`.
pub const SHORT_PRODUCT_REFERENCE: &[(usize, usize, usize, usize, usize, usize, usize)] = &[
    (6, 3, 2, 2, 7, 5, 4),
    (7, 2, 2, 2, 6, 6, 3),
    (8, 2, 2, 2, 6, 7, 3),
    (8, 3, 2, 2, 7, 7, 4),
    (8, 4, 2, 2, 8, 7, 5),
];

/// Frozen defining data for the gram-flip construction over `F_8`.
pub fn short_product_matrices(f: &FieldSpec) -> (FqMatrix, FqMatrix, FqMatrix) {
    let a = wmat(f, 1, &[&[0, 6, 3], &[4, 0, 6], &[6, 4, 0]]);
    let mono = FqMatrix::diagonal(f, &[f.omega_pow(3), f.omega_pow(6), f.omega_pow(3)]);
    let d = FqMatrix::diagonal(f, &[f.omega_pow(4), f.omega_pow(6), f.one()]);
    (a, mono, d)
}

/// Full end-to-end reproduction of the short product table over `F_8`:
/// self-orthogonal GRS inputs are searched, the product is built and
/// certified, and exact minimum distances (direct for the code, via the
/// dual transform for its twisted dual) are compared with the bounds.
pub fn table5(budget: u64) -> Result<ReproduceOutcome> {
    let f = FieldSpec::new(2, 3, None)?;
    let (a, mono, d) = short_product_matrices(&f);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    {
        let q = FqMatrix::anti_identity(&f, 3);
        checks.push(CheckLine::require(
            "gram factorization pi_0(A) M A = D Q holds",
            a.mul(&mono)?.mul(&a)? == d.mul(&q)?,
            "frozen 3x3 triple over F_8",
        ));
    }
    for (idx, &(n, k1, k2, k3, dim_ref, d_ref, dual_ref)) in
        SHORT_PRODUCT_REFERENCE.iter().enumerate()
    {
        let label = format!("n = {n}, (k_1, k_2, k_3) = ({k1}, {k2}, {k3})");
        let row = (|| -> Result<serde_json::Value> {
            let dims = [k1, k2, k3];
            let inputs: Vec<LinearCode> = dims
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let spec = grs::find_euclidean_so(&f, n, k, 1000 + (idx * 3 + i) as u64)?;
                    grs::grs_code(&f, &spec, budget)
                })
                .collect::<Result<_>>()?;
            let sigma_prime = Isometry::euclidean(&f, n);
            let result = construction3(&a, &mono, &inputs, &sigma_prime, budget)?;
            let dim_sum: usize = dims.iter().sum();
            let claims_ok = result.claimed_dim == dim_sum
                && dim_sum == dim_ref
                && result.claimed_d_bound == d_ref
                && result.claimed_dual_bound == dual_ref;
            let weights = result.code.code().weight_enumerator(budget)?;
            let exact_d = weights.min_positive_weight().unwrap_or(0);
            let dual_weights = macwilliams(&weights, f.order(), 3 * n)?;
            let exact_dual_d = dual_weights.min_positive_weight().unwrap_or(0);
            checks.push(CheckLine::require(
                &format!("{label}: claimed parameters match the printed row"),
                claims_ok,
                format!(
                    "[{}, {}, >= {}] with dual bound {}",
                    3 * n,
                    result.claimed_dim,
                    result.claimed_d_bound,
                    result.claimed_dual_bound
                ),
            ));
            checks.push(CheckLine::require(
                &format!("{label}: exact distances respect the bounds"),
                exact_d >= d_ref && exact_dual_d >= dual_ref,
                format!("d = {exact_d} (bound {d_ref}), dual d = {exact_dual_d} (bound {dual_ref})"),
            ));
            Ok(serde_json::json!({
                "n": n,
                "input_dimensions": dims,
                "code": [3 * n, dim_ref],
                "distance_bound": d_ref,
                "exact_distance": exact_d,
                "dual_distance_bound": dual_ref,
                "exact_dual_distance": exact_dual_d,
                "inputs": inputs
                    .iter()
                    .map(|c| format!("[{}, {}]", c.length(), c.dimension()))
                    .collect::<Vec<_>>(),
            }))
        })();
        match row {
            Ok(v) => rows.push(v),
            Err(e) => checks.push(CheckLine::fail(&label, e.to_string())),
        }
    }
    Ok(ReproduceOutcome::collect(
        "table5",
        "canonical".into(),
        checks,
        serde_json::Value::Array(rows),
    ))
}
