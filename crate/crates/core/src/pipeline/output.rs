//! Output files: fixed formatting, atomic writes, digests and schema checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// What a written file must look like to pass validation.
#[derive(Debug, Clone)]
pub enum Schema {
    /// CSV with exactly this header.
    Csv(&'static [&'static str]),
    /// CSV whose header starts with these columns, followed by any others.
    CsvPrefix(&'static [&'static str]),
    /// Square matrix: header `coin,<ids…>` and one row per id in the same order.
    Matrix,
    /// JSON object holding at least these keys.
    Json(&'static [&'static str]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub rows: usize,
    pub sha256: String,
}

pub struct OutputWriter {
    dir: PathBuf,
    files: BTreeMap<String, FileRecord>,
}

/// Fixed 12-decimal format; `inf`/`-inf` for infinities and `NA` for NaN.
pub fn fmt_f64(v: f64) -> String {
    fmt_prec(v, 12)
}

pub fn fmt_prec(v: f64, decimals: usize) -> String {
    if v.is_nan() {
        "NA".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let s = format!("{v:.decimals$}");
        // avoid "-0.000…"
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_owned()
        } else {
            s
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl OutputWriter {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputWriter { dir: dir.to_path_buf(), files: BTreeMap::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &BTreeMap<String, FileRecord> {
        &self.files
    }

    pub fn csv(&mut self, name: &str, schema: Schema, header: &[String], rows: &[Vec<String>]) -> Result<usize, String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header).map_err(|e| e.to_string())?;
        for r in rows {
            w.write_record(r).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        validate(&schema, &bytes).map_err(|e| format!("{name}: schema violation: {e}"))?;
        self.commit(name, &bytes, rows.len())?;
        Ok(rows.len())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, schema: Schema, value: &T) -> Result<usize, String> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| e.to_string())?;
        bytes.push(b'\n');
        validate(&schema, &bytes).map_err(|e| format!("{name}: schema violation: {e}"))?;
        self.commit(name, &bytes, 1)?;
        Ok(1)
    }

    /// Writes through a temporary file and renames, so a reader never sees a
    /// half-written file and a failed write leaves the previous one intact.
    fn commit(&mut self, name: &str, bytes: &[u8], rows: usize) -> Result<(), String> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, bytes).map_err(|e| format!("{}: {e}", tmp.display()))?;
        fs::rename(&tmp, &path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.files.insert(name.to_owned(), FileRecord { rows, sha256: sha256_hex(bytes) });
        Ok(())
    }
}

pub fn validate(schema: &Schema, bytes: &[u8]) -> Result<(), String> {
    match schema {
        Schema::Json(keys) => {
            let v: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
            let obj = v.as_object().ok_or("top level is not an object")?;
            for k in *keys {
                if !obj.contains_key(*k) {
                    return Err(format!("missing key {k:?}"));
                }
            }
            Ok(())
        }
        Schema::Csv(_) | Schema::CsvPrefix(_) | Schema::Matrix => {
            let mut rdr = csv::Reader::from_reader(bytes);
            let header: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().map(str::to_owned).collect();
            match schema {
                Schema::Csv(want) if header != *want => {
                    return Err(format!("header {header:?}, expected {want:?}"));
                }
                Schema::CsvPrefix(want) if !header.starts_with(&want.iter().map(|s| s.to_string()).collect::<Vec<_>>()) => {
                    return Err(format!("header {header:?} does not start with {want:?}"));
                }
                Schema::Matrix if header.first().map(String::as_str) != Some("coin") => {
                    return Err("matrix header must start with `coin`".into());
                }
                _ => {}
            }
            let mut n = 0;
            for (i, rec) in rdr.records().enumerate() {
                let rec = rec.map_err(|e| format!("row {}: {e}", i + 1))?;
                if rec.len() != header.len() {
                    return Err(format!("row {} has {} fields, header has {}", i + 1, rec.len(), header.len()));
                }
                if matches!(schema, Schema::Matrix) && rec.get(0) != header.get(i + 1).map(String::as_str) {
                    return Err(format!("row {} label does not match column order", i + 1));
                }
                n += 1;
            }
            if matches!(schema, Schema::Matrix) && n + 1 != header.len() {
                return Err(format!("{n} rows for {} columns", header.len() - 1));
            }
            Ok(())
        }
    }
}

pub fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| (*s).to_owned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_f64(0.5), "0.500000000000");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NAN), "NA");
        assert_eq!(fmt_prec(-1e-9, 6), "0.000000");
        assert_eq!(fmt_prec(-0.25, 6), "-0.250000");
    }

    #[test]
    fn schema_checks() {
        assert!(validate(&Schema::Csv(&["a", "b"]), b"a,b\n1,2\n").is_ok());
        assert!(validate(&Schema::Csv(&["a", "b"]), b"a,c\n1,2\n").is_err());
        assert!(validate(&Schema::Csv(&["a", "b"]), b"a,b\n1\n").is_err());
        assert!(validate(&Schema::CsvPrefix(&["lag"]), b"lag,X\n1,2\n").is_ok());
        assert!(validate(&Schema::Matrix, b"coin,A,B\nA,1,0\nB,0,1\n").is_ok());
        assert!(validate(&Schema::Matrix, b"coin,A,B\nB,1,0\nA,0,1\n").is_err());
        assert!(validate(&Schema::Json(&["x"]), b"{\"x\":1}").is_ok());
        assert!(validate(&Schema::Json(&["y"]), b"{\"x\":1}").is_err());
    }

    #[test]
    fn writer_records_digests() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = OutputWriter::new(dir.path()).unwrap();
        let rows = vec![vec!["1".to_owned(), "2".to_owned()]];
        w.csv("x.csv", Schema::Csv(&["a", "b"]), &header(&["a", "b"]), &rows).unwrap();
        let bytes = fs::read(dir.path().join("x.csv")).unwrap();
        assert_eq!(bytes, b"a,b\n1,2\n");
        assert_eq!(w.files()["x.csv"].sha256, sha256_hex(&bytes));
        assert!(w.csv("y.csv", Schema::Csv(&["a"]), &header(&["a", "b"]), &rows).is_err());
        assert!(!dir.path().join("y.csv").exists());
    }
}
