use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::BIN_MAGIC;
use crate::error::{Error, Result};
use crate::types::EmbeddingMatrix;

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn is_numeric(s: &str) -> bool {
    s.trim().parse::<f64>().is_ok()
}

pub fn load_csv(path: &Path) -> Result<EmbeddingMatrix> {
    parse_csv(&read_text(path)?)
}

/// CSV rows are `id, x_1..x_d[, label]`. A first row whose second field is
/// not numeric is a header; with a header the label column is present iff
/// the last header field is `label`, without one iff some row ends in a
/// non-numeric field.
pub fn parse_csv(text: &str) -> Result<EmbeddingMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            location: format!("csv line {}", line + 1),
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }
    let header = records
        .first()
        .filter(|r| r.get(1).is_some_and(|f| !is_numeric(f)))
        .cloned();
    if header.is_some() {
        records.remove(0);
    }
    let has_label = match &header {
        Some(h) => h
            .iter()
            .next_back()
            .is_some_and(|f| f.eq_ignore_ascii_case("label")),
        None => records
            .iter()
            .any(|r| r.len() > 2 && r.iter().next_back().is_some_and(|f| !is_numeric(f))),
    };

    let mut rows = Vec::with_capacity(records.len());
    let mut ids = Vec::with_capacity(records.len());
    let mut labels = has_label.then(Vec::new);
    for rec in &records {
        let fields: Vec<&str> = rec.iter().collect();
        let id = fields[0].to_string();
        let coord_end = if has_label {
            fields.len().saturating_sub(1)
        } else {
            fields.len()
        };
        if coord_end < 1 {
            return Err(Error::DimensionMismatch {
                id,
                expected: 1,
                found: 0,
            });
        }
        let coords = fields[1..coord_end]
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::NonNumeric {
                    id: id.clone(),
                    value: f.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(labels) = labels.as_mut() {
            labels.push(fields[fields.len() - 1].to_string());
        }
        rows.push(coords);
        ids.push(id);
    }
    EmbeddingMatrix::new(rows, ids, labels)
}

pub(crate) fn to_csv_bytes(emb: &EmbeddingMatrix) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse {
        location: "csv writer".into(),
        message: e.to_string(),
    };
    let mut header = vec!["id".to_string()];
    header.extend((0..emb.dim()).map(|c| format!("x{c}")));
    if emb.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in emb.rows().enumerate() {
        let mut rec = vec![emb.ids()[i].clone()];
        rec.extend(row.iter().map(|x| x.to_string()));
        if let Some(labels) = emb.labels() {
            rec.push(labels[i].clone());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Parse {
        location: "csv writer".into(),
        message: e.to_string(),
    })
}

#[derive(Deserialize)]
struct JsonlRow {
    id: String,
    embedding: Vec<Value>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Serialize)]
struct JsonlOut<'a> {
    id: &'a str,
    embedding: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

pub fn load_jsonl(path: &Path) -> Result<EmbeddingMatrix> {
    parse_jsonl(&read_text(path)?)
}

/// One object per line: `id` (string), `embedding` (numbers), optional `label`.
/// Labels must be present on every line or on none.
pub fn parse_jsonl(text: &str) -> Result<EmbeddingMatrix> {
    let mut rows = Vec::new();
    let mut ids = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonlRow = serde_json::from_str(line).map_err(|e| Error::Parse {
            location: format!("jsonl line {}", line_no + 1),
            message: e.to_string(),
        })?;
        let coords = row
            .embedding
            .iter()
            .map(|v| {
                v.as_f64().ok_or_else(|| Error::NonNumeric {
                    id: row.id.clone(),
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(coords);
        ids.push(row.id);
        labels.push(row.label);
    }
    let labels = if labels.iter().all(Option::is_none) {
        None
    } else if let Some(pos) = labels.iter().position(Option::is_none) {
        return Err(Error::Parse {
            location: format!("jsonl row `{}`", ids[pos]),
            message: "missing label while other rows carry one".into(),
        });
    } else {
        Some(labels.into_iter().flatten().collect())
    };
    EmbeddingMatrix::new(rows, ids, labels)
}

pub(crate) fn to_jsonl_bytes(emb: &EmbeddingMatrix) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, row) in emb.rows().enumerate() {
        let line = JsonlOut {
            id: &emb.ids()[i],
            embedding: row,
            label: emb.labels().map(|l| l[i].as_str()),
        };
        serde_json::to_writer(&mut out, &line).expect("in-memory write");
        out.push(b'\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct Trailer {
    ids: Vec<String>,
    labels: Option<Vec<String>>,
}

/// Canonical binary serialization; coordinates are narrowed to `f32`.
pub fn to_bin_bytes(emb: &EmbeddingMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(15 + emb.as_flat().len() * 4);
    out.extend_from_slice(BIN_MAGIC);
    out.extend_from_slice(&(emb.len() as u32).to_le_bytes());
    out.extend_from_slice(&(emb.dim() as u32).to_le_bytes());
    for &x in emb.as_flat() {
        out.extend_from_slice(&(x as f32).to_le_bytes());
    }
    let trailer = Trailer {
        ids: emb.ids().to_vec(),
        labels: emb.labels().map(<[String]>::to_vec),
    };
    serde_json::to_writer(&mut out, &trailer).expect("in-memory write");
    out
}

pub fn from_bin_bytes(bytes: &[u8]) -> Result<EmbeddingMatrix> {
    if bytes.len() < BIN_MAGIC.len() || &bytes[..BIN_MAGIC.len()] != BIN_MAGIC {
        return Err(Error::BadMagic);
    }
    let rest = &bytes[BIN_MAGIC.len()..];
    let word = |at: usize| -> Result<u32> {
        rest.get(at..at + 4)
            .map(|b| u32::from_le_bytes(b.try_into().expect("4 bytes")))
            .ok_or(Error::Truncated)
    };
    let n = word(0)? as usize;
    let d = word(4)? as usize;
    let body = n
        .checked_mul(d)
        .and_then(|c| c.checked_mul(4))
        .ok_or(Error::Truncated)?;
    let values = rest.get(8..8 + body).ok_or(Error::Truncated)?;
    let data: Vec<f64> = values
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
        .collect();
    let trailer: Trailer = serde_json::from_slice(&rest[8 + body..]).map_err(|e| Error::Parse {
        location: "binary trailer".into(),
        message: e.to_string(),
    })?;
    if trailer.ids.len() != n {
        return Err(Error::Parse {
            location: "binary trailer".into(),
            message: format!("{} ids for {n} rows", trailer.ids.len()),
        });
    }
    EmbeddingMatrix::from_flat(data, d, trailer.ids, trailer.labels)
}
