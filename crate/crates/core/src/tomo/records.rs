use std::io::{BufRead, Write};

use crate::device::ShotRecord;

use super::TomoError;

/// Shot records over a fixed qubit count.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordSet {
    n: usize,
    records: Vec<ShotRecord>,
}

impl RecordSet {
    pub fn new(n: usize) -> RecordSet {
        RecordSet { n, records: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[ShotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, rec: ShotRecord) -> Result<(), TomoError> {
        let sizes = [
            rec.principal_basis.len(),
            rec.principal_outcome.values().len(),
            rec.ancilla_basis.len(),
            rec.ancilla_outcome.values().len(),
        ];
        if let Some(&bad) = sizes.iter().find(|&&s| s != self.n) {
            return Err(TomoError::QubitMismatch { expected: self.n, actual: bad });
        }
        let outcomes = rec.principal_outcome.values().iter().chain(rec.ancilla_outcome.values());
        if outcomes.clone().any(|&v| v != 1 && v != -1) {
            return Err(TomoError::InvalidParameter(format!("shot {}: outcomes must be ±1", rec.shot_id)));
        }
        self.records.push(rec);
        Ok(())
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Reads records for `n` qubits; blank lines are skipped.
    pub fn read_jsonl<R: BufRead>(n: usize, r: R) -> Result<RecordSet, TomoError> {
        let mut rs = RecordSet::new(n);
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| TomoError::Parse { line: i + 1, message: e.to_string() })?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ShotRecord =
                serde_json::from_str(&line).map_err(|e| TomoError::Parse { line: i + 1, message: e.to_string() })?;
            rs.push(rec).map_err(|e| TomoError::Parse { line: i + 1, message: e.to_string() })?;
        }
        Ok(rs)
    }

    pub fn from_jsonl(n: usize, text: &str) -> Result<RecordSet, TomoError> {
        RecordSet::read_jsonl(n, text.as_bytes())
    }
}
