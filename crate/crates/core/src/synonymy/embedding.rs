use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::SynonymyError;
use crate::variation::normalize_lemma;

/// Lemma vectors of a fixed dimensionality.
///
/// Vectors are stored unit-normalized so cosine similarity is a dot product.
/// Zero vectors stay zero and have similarity 0 with everything.
#[derive(Clone, Debug, Default)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    data: Vec<f32>,
    index: HashMap<String, usize>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            ..Default::default()
        }
    }

    pub fn from_rows<I, S>(dim: usize, rows: I) -> Result<Self, SynonymyError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: AsRef<str>,
    {
        let mut table = EmbeddingTable::new(dim);
        for (word, v) in rows {
            table.push(word.as_ref(), &v)?;
        }
        Ok(table)
    }

    /// Adds a vector. Keys are lemma-normalized; a key already present keeps
    /// its first vector.
    pub fn push(&mut self, word: &str, vector: &[f32]) -> Result<(), SynonymyError> {
        if vector.len() != self.dim {
            return Err(SynonymyError::Dimension {
                word: word.to_owned(),
                expected: self.dim,
                found: vector.len(),
            });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(SynonymyError::NonFinite(word.to_owned()));
        }
        let key = normalize_lemma(word).into_owned();
        if self.index.contains_key(&key) {
            return Ok(());
        }
        let norm = vector.iter().map(|x| x * x).sum::<f32>().sqrt();
        let scale = if norm > 0.0 { 1.0 / norm } else { 0.0 };
        self.data.extend(vector.iter().map(|x| x * scale));
        self.index.insert(key.clone(), self.words.len());
        self.words.push(key);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// The stored unit vector for `word`.
    pub fn unit_vector(&self, word: &str) -> Option<&[f32]> {
        self.index.get(word).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cosine(&self, a: &str, b: &str) -> Option<f32> {
        Some(dot(self.unit_vector(a)?, self.unit_vector(b)?))
    }

    /// Nearest neighbours of `word` by cosine similarity, best first.
    ///
    /// Ties are broken by lemma order. Only the first `restrict` rows of the
    /// table are searched when given (embedding files are usually sorted by
    /// frequency). Neighbours below `min_similarity` are dropped.
    pub fn nearest(
        &self,
        word: &str,
        k: usize,
        min_similarity: Option<f32>,
        restrict: Option<usize>,
    ) -> Vec<(String, f32)> {
        let Some(&qi) = self.index.get(word) else {
            return Vec::new();
        };
        if k == 0 {
            return Vec::new();
        }
        let query = self.row(qi);
        let limit = restrict.unwrap_or(self.len()).min(self.len());
        let mut scored: Vec<(f32, usize)> = (0..limit)
            .filter(|&i| i != qi)
            .map(|i| (dot(query, self.row(i)), i))
            .filter(|&(s, _)| min_similarity.is_none_or(|m| s >= m))
            .collect();

        let order = |a: &(f32, usize), b: &(f32, usize)| -> Ordering {
            b.0.total_cmp(&a.0).then_with(|| self.words[a.1].cmp(&self.words[b.1]))
        };
        if scored.len() > k {
            scored.select_nth_unstable_by(k - 1, order);
            scored.truncate(k);
        }
        scored.sort_unstable_by(order);
        scored.into_iter().map(|(s, i)| (self.words[i].clone(), s)).collect()
    }

    pub fn read_path(path: &Path) -> Result<Self, SynonymyError> {
        Self::parse(&fs::read(path)?)
    }

    /// Parses the word2vec text or binary format, detected from the first
    /// data row.
    pub fn parse(bytes: &[u8]) -> Result<Self, SynonymyError> {
        let header_end = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| SynonymyError::Header("missing header line".into()))?;
        let header = std::str::from_utf8(&bytes[..header_end])
            .map_err(|_| SynonymyError::Header("header is not UTF-8".into()))?;
        let mut fields = header.split_whitespace().map(str::parse::<usize>);
        let (count, dim) = match (fields.next(), fields.next(), fields.next()) {
            (Some(Ok(c)), Some(Ok(d)), None) => (c, d),
            _ => return Err(SynonymyError::Header(format!("expected \"count dim\", got {header:?}"))),
        };
        let body = &bytes[header_end + 1..];
        if count == 0 {
            return Ok(EmbeddingTable::new(dim));
        }
        let first_line = body.split(|&b| b == b'\n').next().unwrap_or(&[]);
        if parse_text_row(first_line, dim).is_some() {
            parse_text(body, count, dim)
        } else {
            parse_binary(body, count, dim)
        }
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{} {}", self.len(), self.dim)?;
        for (i, w) in self.words.iter().enumerate() {
            write!(out, "{w}")?;
            for x in self.row(i) {
                write!(out, " {x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{} {}", self.len(), self.dim)?;
        for (i, w) in self.words.iter().enumerate() {
            out.write_all(w.as_bytes())?;
            out.write_all(b" ")?;
            for x in self.row(i) {
                out.write_all(&x.to_le_bytes())?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn dot(a: &[f32], b: &[f32]) -> f32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn parse_text_row(line: &[u8], dim: usize) -> Option<(&str, Vec<f32>)> {
    let line = std::str::from_utf8(line).ok()?;
    let mut parts = line.split_whitespace();
    let word = parts.next()?;
    let values = parts.map(|p| p.parse::<f32>().ok()).collect::<Option<Vec<_>>>()?;
    (values.len() == dim).then_some((word, values))
}

fn parse_text(body: &[u8], count: usize, dim: usize) -> Result<EmbeddingTable, SynonymyError> {
    let mut table = EmbeddingTable::new(dim);
    let mut rows = 0;
    for (i, line) in body.split(|&b| b == b'\n').enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let (word, values) = parse_text_row(line, dim).ok_or_else(|| SynonymyError::Row {
            line: i + 2,
            message: format!("expected a word and {dim} numbers"),
        })?;
        table.push(word, &values)?;
        rows += 1;
    }
    if rows != count {
        return Err(SynonymyError::Header(format!(
            "header announces {count} rows, found {rows}"
        )));
    }
    Ok(table)
}

fn parse_binary(body: &[u8], count: usize, dim: usize) -> Result<EmbeddingTable, SynonymyError> {
    let mut table = EmbeddingTable::new(dim);
    let mut pos = 0;
    let row_bytes = dim * 4;
    let mut vector = vec![0f32; dim];
    for row in 0..count {
        while pos < body.len() && body[pos] == b'\n' {
            pos += 1;
        }
        let end = body[pos..]
            .iter()
            .position(|&b| b == b' ')
            .map(|p| pos + p)
            .ok_or_else(|| SynonymyError::Binary(format!("row {row}: unterminated word")))?;
        let word = std::str::from_utf8(&body[pos..end])
            .map_err(|_| SynonymyError::Binary(format!("row {row}: word is not UTF-8")))?;
        let start = end + 1;
        if body.len() < start + row_bytes {
            return Err(SynonymyError::Binary(format!("row {row}: truncated vector")));
        }
        for (v, chunk) in vector.iter_mut().zip(body[start..start + row_bytes].chunks_exact(4)) {
            *v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
        }
        table.push(word, &vector)?;
        pos = start + row_bytes;
    }
    Ok(table)
}
