//! Persistent catalog of certified defining matrices.
//!
//! The catalog is a JSON-lines file: one self-contained record per
//! line, carrying the field descriptor, the matrix, its companion data,
//! and the provenance of the search that found it.  Records are
//! content-addressed — the `id` is a SHA-256 over the canonical payload
//! — and every load re-runs the predicate the record claims, so a
//! tampered or foreign record can never masquerade as a certified one:
//! `check` moves it to a quarantine file and reports it.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::gf::{FieldDescriptor, FieldSpec};
use crate::linalg::FqMatrix;
use crate::{nsc, quasi, Error, Result, SCHEMA_VERSION};

/// What a stored matrix claims to be; `check` re-runs the matching
/// predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// NSC with `A m_hat^T pi_e(A)^T` diagonal for the stored
    /// companion and exponent.
    QuasiSigma,
    /// The `e = h/2` specialization (conjugate-transpose pairing).
    QuasiUnitary,
    /// The `e = 0` specialization (transpose pairing).
    QuasiOrthogonal,
    /// NSC with `A A^T` monomial; the companion stores that gram
    /// matrix.
    TauOd,
}

impl fmt::Display for RecordKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RecordKind::QuasiSigma => "quasi_sigma",
            RecordKind::QuasiUnitary => "quasi_unitary",
            RecordKind::QuasiOrthogonal => "quasi_orthogonal",
            RecordKind::TauOd => "tau_od",
        };
        out.write_str(s)
    }
}

impl RecordKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "quasi_sigma" => Ok(RecordKind::QuasiSigma),
            "quasi_unitary" => Ok(RecordKind::QuasiUnitary),
            "quasi_orthogonal" => Ok(RecordKind::QuasiOrthogonal),
            "tau_od" => Ok(RecordKind::TauOd),
            other => Err(Error::BadInput(format!("unknown catalog kind {other:?}"))),
        }
    }
}

/// Where a record came from: the campaign seed and trial that produced
/// it, and the tool version that wrote it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub trial: Option<u64>,
    pub tool_version: String,
}

impl Provenance {
    pub fn new(seed: Option<u64>, trial: Option<u64>) -> Self {
        Provenance {
            seed,
            trial,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// One certified matrix with enough context to revalidate it from
/// scratch.
#[derive(Clone, Debug)]
pub struct CatalogRecord {
    pub id: String,
    pub kind: RecordKind,
    pub field: FieldDescriptor,
    pub matrix: FqMatrix,
    /// `m_hat` for the quasi kinds; the monomial gram `A A^T` for
    /// `tau_od`.
    pub companion: FqMatrix,
    /// Frobenius exponent of the pairing (0 for `tau_od`).
    pub exponent: u32,
    pub provenance: Provenance,
}

/// Classify a quasi exponent into the most specific kind.
pub fn quasi_kind(field: &FieldSpec, exponent: u32) -> RecordKind {
    let e = exponent % field.h();
    if e == 0 {
        RecordKind::QuasiOrthogonal
    } else if field.h() % 2 == 0 && e == field.h() / 2 {
        RecordKind::QuasiUnitary
    } else {
        RecordKind::QuasiSigma
    }
}

impl CatalogRecord {
    /// Build a record for a quasi-diagonal matrix; the predicate is
    /// checked before anything is stored.
    pub fn quasi(
        field: &FieldSpec,
        matrix: FqMatrix,
        m_hat: FqMatrix,
        exponent: u32,
        provenance: Provenance,
    ) -> Result<CatalogRecord> {
        let mut record = CatalogRecord {
            id: String::new(),
            kind: quasi_kind(field, exponent),
            field: field.descriptor(),
            matrix,
            companion: m_hat,
            exponent: exponent % field.h(),
            provenance,
        };
        record.check_predicate(field)?;
        record.id = record.content_id();
        Ok(record)
    }

    /// Build a record for a matrix whose gram `A A^T` is monomial; the
    /// gram is recomputed and stored as the companion.
    pub fn tau_od(
        field: &FieldSpec,
        matrix: FqMatrix,
        provenance: Provenance,
    ) -> Result<CatalogRecord> {
        let report = quasi::gram_monomial_report(&matrix)?;
        if !report.is_monomial {
            return Err(Error::ConditionFailed {
                context: "catalog tau_od record",
                detail: "the gram matrix A A^T is not monomial".into(),
            });
        }
        let mut record = CatalogRecord {
            id: String::new(),
            kind: RecordKind::TauOd,
            field: field.descriptor(),
            matrix,
            companion: report.gram,
            exponent: 0,
            provenance,
        };
        record.id = record.content_id();
        Ok(record)
    }

    /// Re-run the predicate this record claims.
    pub fn check_predicate(&self, field: &FieldSpec) -> Result<()> {
        if !nsc::is_nsc(&self.matrix)? {
            return Err(Error::VerificationFailed(
                "stored matrix is not non-singular by columns".into(),
            ));
        }
        match self.kind {
            RecordKind::QuasiSigma | RecordKind::QuasiUnitary | RecordKind::QuasiOrthogonal => {
                let expected = quasi_kind(field, self.exponent);
                if expected != self.kind {
                    return Err(Error::VerificationFailed(format!(
                        "exponent {} classifies as {}, record claims {}",
                        self.exponent, expected, self.kind
                    )));
                }
                if !quasi::is_quasi(&self.matrix, &self.companion, self.exponent)? {
                    return Err(Error::VerificationFailed(
                        "stored matrix is not quasi-diagonal for its companion".into(),
                    ));
                }
            }
            RecordKind::TauOd => {
                let report = quasi::gram_monomial_report(&self.matrix)?;
                if !report.is_monomial {
                    return Err(Error::VerificationFailed(
                        "stored matrix's gram A A^T is not monomial".into(),
                    ));
                }
                if report.gram != self.companion {
                    return Err(Error::VerificationFailed(
                        "stored companion does not equal the recomputed gram A A^T".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Content hash over the canonical payload (everything but the id).
    pub fn content_id(&self) -> String {
        let payload = self.payload_json();
        let canonical = serde_json::to_string(&payload).expect("payload serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    fn payload_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": SCHEMA_VERSION,
            "kind": self.kind.to_string(),
            "field": serde_json::to_value(&self.field).expect("descriptor serializes"),
            "matrix": self.matrix.to_json(),
            "companion": self.companion.to_json(),
            "exponent": self.exponent,
            "provenance": serde_json::to_value(&self.provenance).expect("provenance serializes"),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.payload_json();
        v["id"] = serde_json::Value::String(self.id.clone());
        v
    }

    /// Parse a record and verify its content hash; the predicate is
    /// *not* re-run here — use [`check_predicate`](Self::check_predicate)
    /// or [`Catalog::check`].
    pub fn from_json(v: &serde_json::Value) -> Result<CatalogRecord> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("catalog record must be a JSON object".into()))?;
        let schema = obj
            .get("schema")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadInput("catalog record missing schema".into()))?;
        if schema != SCHEMA_VERSION as u64 {
            return Err(Error::BadInput(format!(
                "unsupported catalog schema {schema}, expected {SCHEMA_VERSION}"
            )));
        }
        let kind = RecordKind::parse(
            obj.get("kind")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::BadInput("catalog record missing kind".into()))?,
        )?;
        let field: FieldDescriptor = serde_json::from_value(
            obj.get("field")
                .cloned()
                .ok_or_else(|| Error::BadInput("catalog record missing field".into()))?,
        )?;
        let spec = field.build()?;
        let matrix = FqMatrix::from_json(
            &spec,
            obj.get("matrix")
                .ok_or_else(|| Error::BadInput("catalog record missing matrix".into()))?,
        )?;
        let companion = FqMatrix::from_json(
            &spec,
            obj.get("companion")
                .ok_or_else(|| Error::BadInput("catalog record missing companion".into()))?,
        )?;
        let exponent = obj
            .get("exponent")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadInput("catalog record missing exponent".into()))?
            as u32;
        let provenance: Provenance = serde_json::from_value(
            obj.get("provenance")
                .cloned()
                .ok_or_else(|| Error::BadInput("catalog record missing provenance".into()))?,
        )?;
        let id = obj
            .get("id")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::BadInput("catalog record missing id".into()))?
            .to_string();
        let record = CatalogRecord {
            id,
            kind,
            field,
            matrix,
            companion,
            exponent,
            provenance,
        };
        let expected = record.content_id();
        if record.id != expected {
            return Err(Error::VerificationFailed(format!(
                "content hash mismatch: stored {}, recomputed {}",
                record.id, expected
            )));
        }
        Ok(record)
    }

    /// Field this record's matrices live in.
    pub fn build_field(&self) -> Result<FieldSpec> {
        self.field.build()
    }
}

/// One rejected line from a `check` pass.
#[derive(Clone, Debug, Serialize)]
pub struct QuarantinedLine {
    /// 1-based line number in the catalog file.
    pub line: usize,
    /// The id claimed by the line, if it parsed far enough to have one.
    pub claimed_id: Option<String>,
    pub reason: String,
}

/// Outcome of revalidating a whole catalog file.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub total: usize,
    pub valid: usize,
    pub quarantined: Vec<QuarantinedLine>,
    /// Where the rejected lines were moved, when there were any.
    pub quarantine_path: Option<PathBuf>,
}

impl CheckReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("check report serializes")
    }
}

/// Handle on a JSON-lines catalog file.
#[derive(Clone, Debug)]
pub struct Catalog {
    path: PathBuf,
}

impl Catalog {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Catalog { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Append one record.  The record is revalidated first so a catalog
    /// can only ever grow by certified entries.
    pub fn add(&self, record: &CatalogRecord) -> Result<()> {
        let field = record.build_field()?;
        record.check_predicate(&field)?;
        if record.id != record.content_id() {
            return Err(Error::VerificationFailed(
                "record id does not match its content".into(),
            ));
        }
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let line = serde_json::to_string(&record.to_json())?;
        writeln!(file, "{line}")?;
        Ok(())
    }

    /// Parse every line, verifying content hashes but not predicates.
    pub fn list(&self) -> Result<Vec<CatalogRecord>> {
        let mut records = Vec::new();
        for (idx, line) in self.raw_lines()?.into_iter().enumerate() {
            let v: serde_json::Value = serde_json::from_str(&line).map_err(|e| {
                Error::BadInput(format!("catalog line {}: {e}", idx + 1))
            })?;
            records.push(CatalogRecord::from_json(&v).map_err(|e| {
                Error::BadInput(format!("catalog line {}: {e}", idx + 1))
            })?);
        }
        Ok(records)
    }

    /// Revalidate every line: content hash and predicate.  Lines that
    /// fail are moved to `<path>.quarantine` and removed from the
    /// catalog; the report says which and why.
    pub fn check(&self) -> Result<CheckReport> {
        let lines = self.raw_lines()?;
        let mut keep = Vec::new();
        let mut quarantined = Vec::new();
        let mut rejected_lines = Vec::new();
        for (idx, line) in lines.iter().enumerate() {
            match Self::validate_line(line) {
                Ok(()) => keep.push(line.clone()),
                Err((claimed_id, reason)) => {
                    quarantined.push(QuarantinedLine {
                        line: idx + 1,
                        claimed_id,
                        reason,
                    });
                    rejected_lines.push(line.clone());
                }
            }
        }
        let quarantine_path = if quarantined.is_empty() {
            None
        } else {
            let qpath = self.quarantine_path();
            let mut qfile = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&qpath)?;
            for line in &rejected_lines {
                writeln!(qfile, "{line}")?;
            }
            let tmp = self.path.with_extension("tmp");
            fs::write(&tmp, keep.join("\n") + if keep.is_empty() { "" } else { "\n" })?;
            fs::rename(&tmp, &self.path)?;
            Some(qpath)
        };
        Ok(CheckReport {
            total: lines.len(),
            valid: keep.len(),
            quarantined,
            quarantine_path,
        })
    }

    fn quarantine_path(&self) -> PathBuf {
        let mut name = self
            .path
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_else(|| "catalog.jsonl".into());
        name.push(".quarantine");
        self.path.with_file_name(name)
    }

    fn validate_line(line: &str) -> std::result::Result<(), (Option<String>, String)> {
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| (None, format!("not valid JSON: {e}")))?;
        let claimed = v
            .get("id")
            .and_then(|x| x.as_str())
            .map(|s| s.to_string());
        let record =
            CatalogRecord::from_json(&v).map_err(|e| (claimed.clone(), e.to_string()))?;
        let field = record
            .build_field()
            .map_err(|e| (claimed.clone(), e.to_string()))?;
        record
            .check_predicate(&field)
            .map_err(|e| (claimed, e.to_string()))?;
        Ok(())
    }

    fn raw_lines(&self) -> Result<Vec<String>> {
        if !self.path.exists() {
            return Ok(Vec::new());
        }
        let text = fs::read_to_string(&self.path)?;
        Ok(text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.to_string())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn sample_quasi_record(f: &FieldSpec) -> CatalogRecord {
        let report = quasi::sampling_campaign(
            f,
            2,
            &FqMatrix::identity(f, 2),
            1,
            64,
            5,
            1,
            crate::DEFAULT_NSC_RETRY_LIMIT,
        )
        .unwrap();
        let hit = &report.hits[0];
        CatalogRecord::quasi(
            f,
            hit.lift.lifted.clone(),
            hit.lift.m_hat.clone(),
            1,
            Provenance::new(Some(5), Some(hit.trial)),
        )
        .unwrap()
    }

    fn tauod_f8_matrix(f: &FieldSpec) -> FqMatrix {
        FqMatrix::from_rows(
            f,
            vec![
                vec![f.one(), f.omega_pow(2), f.omega_pow(3)],
                vec![f.omega_pow(3), f.one(), f.omega_pow(2)],
                vec![f.omega_pow(2), f.omega_pow(3), f.one()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn quasi_record_roundtrips_byte_identically() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        let record = sample_quasi_record(&f);
        assert_eq!(record.kind, RecordKind::QuasiUnitary);
        let dir = tempfile::tempdir().unwrap();
        let catalog = Catalog::open(dir.path().join("catalog.jsonl"));
        catalog.add(&record).unwrap();
        let loaded = catalog.list().unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded[0].id, record.id);
        assert_eq!(loaded[0].matrix, record.matrix);
        assert_eq!(loaded[0].companion, record.companion);
        assert_eq!(
            serde_json::to_string(&loaded[0].to_json()).unwrap(),
            serde_json::to_string(&record.to_json()).unwrap()
        );
        let check = catalog.check().unwrap();
        assert_eq!(check.total, 1);
        assert_eq!(check.valid, 1);
        assert!(check.quarantined.is_empty());
    }

    #[test]
    fn flip_gram_reference_matrix_stores_as_tau_od() {
        let f = FieldSpec::new(2, 3, None).unwrap();
        let record =
            CatalogRecord::tau_od(&f, tauod_f8_matrix(&f), Provenance::new(None, None)).unwrap();
        assert_eq!(record.kind, RecordKind::TauOd);
        // The companion is the recomputed gram diag(w, w, w).
        let gram_ref = FqMatrix::diagonal(&f, &[f.omega(), f.omega(), f.omega()]);
        assert_eq!(record.companion, gram_ref);
        let dir = tempfile::tempdir().unwrap();
        let catalog = Catalog::open(dir.path().join("catalog.jsonl"));
        catalog.add(&record).unwrap();
        let check = catalog.check().unwrap();
        assert_eq!((check.total, check.valid), (1, 1));
    }

    #[test]
    fn tampered_entries_are_quarantined_and_removed() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        let record = sample_quasi_record(&f);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.jsonl");
        let catalog = Catalog::open(&path);
        catalog.add(&record).unwrap();
        catalog.add(&record).unwrap();
        // Tamper with a matrix entry in the second line only.
        let text = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
        let mut v: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
        v["matrix"]["entries"][0][0] = serde_json::json!("0");
        lines[1] = serde_json::to_string(&v).unwrap();
        fs::write(&path, lines.join("\n") + "\n").unwrap();

        let check = catalog.check().unwrap();
        assert_eq!(check.total, 2);
        assert_eq!(check.valid, 1);
        assert_eq!(check.quarantined.len(), 1);
        assert_eq!(check.quarantined[0].line, 2);
        assert!(check.quarantined[0].reason.contains("hash mismatch"));
        // The bad line moved to the quarantine file; the catalog kept
        // only the good one.
        let qpath = check.quarantine_path.unwrap();
        assert_eq!(fs::read_to_string(&qpath).unwrap().lines().count(), 1);
        assert_eq!(catalog.list().unwrap().len(), 1);
    }

    #[test]
    fn corrupt_lines_and_failed_predicates_are_reported() {
        let f = FieldSpec::new(2, 3, None).unwrap();
        let record =
            CatalogRecord::tau_od(&f, tauod_f8_matrix(&f), Provenance::new(None, None)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.jsonl");
        let catalog = Catalog::open(&path);
        catalog.add(&record).unwrap();
        // A line with a consistent hash but a failing predicate: re-sign
        // a record whose companion was swapped for the wrong diagonal.
        let mut forged = record.clone();
        forged.companion = FqMatrix::identity(&f, 3);
        forged.id = forged.content_id();
        let line = serde_json::to_string(&forged.to_json()).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str(&line);
        text.push('\n');
        text.push_str("this is not json\n");
        fs::write(&path, text).unwrap();

        let check = catalog.check().unwrap();
        assert_eq!(check.total, 3);
        assert_eq!(check.valid, 1);
        assert_eq!(check.quarantined.len(), 2);
        assert!(check.quarantined[0]
            .reason
            .contains("does not equal the recomputed gram"));
        assert!(check.quarantined[1].reason.contains("not valid JSON"));
    }

    #[test]
    fn kind_classification_follows_the_exponent() {
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        assert_eq!(quasi_kind(&f9, 0), RecordKind::QuasiOrthogonal);
        assert_eq!(quasi_kind(&f9, 1), RecordKind::QuasiUnitary);
        let f8 = FieldSpec::new(2, 3, None).unwrap();
        assert_eq!(quasi_kind(&f8, 1), RecordKind::QuasiSigma);
        assert_eq!(quasi_kind(&f8, 3), RecordKind::QuasiOrthogonal);
    }

    #[test]
    fn invalid_records_cannot_be_added() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        let record = sample_quasi_record(&f);
        let mut forged = record.clone();
        forged.companion = FqMatrix::diagonal(&f, &[f.omega(), f.omega()]);
        let err = Catalog::open("/tmp/unused.jsonl").add(&forged).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
