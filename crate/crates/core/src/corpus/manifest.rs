use std::io::{self, BufRead, Write};

use super::{CorpusError, PairLabel};

/// One manifest line: `pair_id  side1_ids  side2_ids  base_label  flags`.
///
/// Segments spanning several sentences list their sentence IDs joined by `+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRow {
    pub pair_id: String,
    pub side1: Vec<String>,
    pub side2: Vec<String>,
    pub label: PairLabel,
}

fn split_ids(field: &str) -> Option<Vec<String>> {
    let ids: Vec<String> = field.split('+').map(|s| s.trim().to_owned()).collect();
    if ids.iter().any(|s| s.is_empty()) {
        None
    } else {
        Some(ids)
    }
}

pub fn read_manifest<R: BufRead>(reader: R) -> Result<Vec<ManifestRow>, CorpusError> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if rows.is_empty() && line.starts_with("pair_id\t") {
            continue;
        }
        let err = |message: String| CorpusError::Manifest { line: i + 1, message };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(err(format!(
                "expected 4 or 5 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let pair_id = cols[0].trim();
        if pair_id.is_empty() {
            return Err(err("empty pair id".into()));
        }
        let side1 = split_ids(cols[1]).ok_or_else(|| err("empty sentence id on side 1".into()))?;
        let side2 = split_ids(cols[2]).ok_or_else(|| err("empty sentence id on side 2".into()))?;
        let flags = match cols.get(4).map(|s| s.trim()) {
            None | Some("") | Some("_") => "",
            Some(f) => f,
        };
        let label = PairLabel::parse(cols[3].trim(), flags).map_err(|e| err(e.to_string()))?;
        rows.push(ManifestRow {
            pair_id: pair_id.to_owned(),
            side1,
            side2,
            label,
        });
    }
    Ok(rows)
}

pub fn write_manifest<W: Write>(out: &mut W, rows: &[ManifestRow]) -> io::Result<()> {
    writeln!(out, "pair_id\tside1\tside2\tlabel\tflags")?;
    for row in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            row.pair_id,
            row.side1.join("+"),
            row.side2.join("+"),
            row.label.base(),
            row.label.flag_string()
        )?;
    }
    Ok(())
}
