//! Language pivoting: find paraphrase pairs whose two sides are aligned to
//! the same source-language segment in a line-aligned bilingual corpus.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ParaphrasePair;
use crate::exec::Exec;
use crate::stats::mean_token_length;

#[derive(Debug, Error)]
pub enum PivotError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("aligned files differ in length: {source_lines} source lines, {target_lines} target lines")]
    Alignment { source_lines: usize, target_lines: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    /// Lowercase and drop everything that is not alphanumeric, whitespace
    /// included.
    #[default]
    Strict,
    /// Like `Strict`, but runs of dropped characters between words become a
    /// single space.
    CollapseWhitespace,
}

/// Lowercased alphanumeric-only form of a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalizedKey(String);

impl NormalizedKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn normalize(text: &str) -> NormalizedKey {
    normalize_with(text, NormalizeMode::Strict)
}

pub fn normalize_with(text: &str, mode: NormalizeMode) -> NormalizedKey {
    let mut out = String::with_capacity(text.len());
    let mut gap = false;
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            if gap && !out.is_empty() {
                out.push(' ');
            }
            gap = false;
            out.push(c);
        } else if mode == NormalizeMode::CollapseWhitespace {
            gap = true;
        }
    }
    NormalizedKey(out)
}

const NIL: u32 = u32::MAX;

/// String interner keyed by 64-bit hashes; colliding keys are chained and
/// told apart by comparing against the stored strings.
#[derive(Clone, Debug, Default)]
struct KeyTable {
    arena: String,
    spans: Vec<(usize, usize)>,
    next: Vec<u32>,
    heads: HashMap<u64, u32>,
}

fn hash_key(key: &str) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

impl KeyTable {
    fn key(&self, id: u32) -> &str {
        let (start, end) = self.spans[id as usize];
        &self.arena[start..end]
    }

    fn get(&self, key: &str) -> Option<u32> {
        let mut cur = *self.heads.get(&hash_key(key))?;
        while cur != NIL {
            if self.key(cur) == key {
                return Some(cur);
            }
            cur = self.next[cur as usize];
        }
        None
    }

    /// Returns the key's id and whether it was newly added.
    fn intern(&mut self, key: &str) -> (u32, bool) {
        if let Some(id) = self.get(key) {
            return (id, false);
        }
        let id = u32::try_from(self.spans.len()).expect("fewer than 2^32 distinct keys");
        let start = self.arena.len();
        self.arena.push_str(key);
        self.spans.push((start, self.arena.len()));
        let head = self.heads.entry(hash_key(key)).or_insert(NIL);
        self.next.push(*head);
        *head = id;
        (id, true)
    }

    fn len(&self) -> usize {
        self.spans.len()
    }
}

/// Maps normalized target segments to the source segments they are aligned
/// with.
///
/// A source segment is identified by the 0-based line number where its
/// normalized text first occurs, so identical source texts on different lines
/// share one ID.
#[derive(Clone, Debug, Default)]
pub struct PivotIndex {
    mode: NormalizeMode,
    sources: KeyTable,
    source_line: Vec<u32>,
    targets: KeyTable,
    target_sources: Vec<Vec<u32>>,
    lines: usize,
}

impl PivotIndex {
    pub fn new(mode: NormalizeMode) -> Self {
        PivotIndex {
            mode,
            ..Default::default()
        }
    }

    pub fn mode(&self) -> NormalizeMode {
        self.mode
    }

    /// Adds one aligned line. Lines where either side normalizes to the empty
    /// key are counted but not indexed.
    pub fn add(&mut self, source_text: &str, target_text: &str) {
        let line = u32::try_from(self.lines).expect("fewer than 2^32 lines");
        self.lines += 1;
        let src = normalize_with(source_text, self.mode);
        let tgt = normalize_with(target_text, self.mode);
        if src.is_empty() || tgt.is_empty() {
            return;
        }
        let (sid, new_source) = self.sources.intern(src.as_str());
        if new_source {
            self.source_line.push(line);
        }
        let (tid, new_target) = self.targets.intern(tgt.as_str());
        if new_target {
            self.target_sources.push(Vec::new());
        }
        let list = &mut self.target_sources[tid as usize];
        if let Err(pos) = list.binary_search(&sid) {
            list.insert(pos, sid);
        }
    }

    /// Source IDs (first line numbers) aligned with a target text.
    pub fn sources_for(&self, target_text: &str) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .source_ids(target_text)
            .iter()
            .map(|&sid| self.source_line[sid as usize] as usize)
            .collect();
        ids.sort_unstable();
        ids
    }

    fn source_ids(&self, target_text: &str) -> &[u32] {
        let key = normalize_with(target_text, self.mode);
        self.targets
            .get(key.as_str())
            .map_or(&[], |tid| self.target_sources[tid as usize].as_slice())
    }

    /// Whether two target texts share at least one aligned source segment.
    pub fn share_source(&self, a: &str, b: &str) -> bool {
        let (x, y) = (self.source_ids(a), self.source_ids(b));
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn key_count(&self) -> usize {
        self.targets.len()
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines
    }

    /// Target keys in insertion order with their source line IDs.
    pub fn entries(&self) -> impl Iterator<Item = (&str, Vec<usize>)> + '_ {
        (0..self.targets.len() as u32).map(move |tid| {
            let mut lines: Vec<usize> = self.target_sources[tid as usize]
                .iter()
                .map(|&s| self.source_line[s as usize] as usize)
                .collect();
            lines.sort_unstable();
            (self.targets.key(tid), lines)
        })
    }
}

pub fn build_index<S: AsRef<str>, T: AsRef<str>>(aligned: &[(S, T)]) -> PivotIndex {
    build_index_with(
        aligned.iter().map(|(s, t)| (s.as_ref(), t.as_ref())),
        NormalizeMode::Strict,
    )
}

pub fn build_index_with<'a, I>(aligned: I, mode: NormalizeMode) -> PivotIndex
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut index = PivotIndex::new(mode);
    for (s, t) in aligned {
        index.add(s, t);
    }
    index
}

/// Builds the index from two line-aligned files, streaming both.
pub fn build_index_from_files(source: &Path, target: &Path, mode: NormalizeMode) -> Result<PivotIndex, PivotError> {
    build_index_from_readers(
        BufReader::new(File::open(source)?),
        BufReader::new(File::open(target)?),
        mode,
    )
}

pub fn build_index_from_readers<S: BufRead, T: BufRead>(
    source: S,
    target: T,
    mode: NormalizeMode,
) -> Result<PivotIndex, PivotError> {
    let mut index = PivotIndex::new(mode);
    let mut src_lines = source.lines();
    let mut tgt_lines = target.lines();
    loop {
        match (src_lines.next(), tgt_lines.next()) {
            (None, None) => return Ok(index),
            (Some(s), Some(t)) => index.add(&s?, &t?),
            (Some(_), None) => {
                let extra = 1 + src_lines.count();
                return Err(PivotError::Alignment {
                    source_lines: index.line_count() + extra,
                    target_lines: index.line_count(),
                });
            }
            (None, Some(_)) => {
                let extra = 1 + tgt_lines.count();
                return Err(PivotError::Alignment {
                    source_lines: index.line_count(),
                    target_lines: index.line_count() + extra,
                });
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotReport {
    pub matched: Vec<String>,
    /// Pairs considered, rewrites excluded.
    pub considered: usize,
    pub match_rate: f64,
    pub mean_length_matched: f64,
    pub mean_length_all: f64,
}

pub fn match_pairs(pairs: &[ParaphrasePair], index: &PivotIndex) -> PivotReport {
    match_pairs_with(pairs, index, Exec::default())
}

pub fn match_pairs_with(pairs: &[ParaphrasePair], index: &PivotIndex, exec: Exec) -> PivotReport {
    let considered: Vec<&ParaphrasePair> = pairs.iter().filter(|p| !p.label.is_rewrite()).collect();
    let hits = exec.map(&considered, |p| index.share_source(&p.side1.text, &p.side2.text));
    let matched_pairs: Vec<&ParaphrasePair> = considered
        .iter()
        .zip(&hits)
        .filter(|(_, &hit)| hit)
        .map(|(p, _)| *p)
        .collect();
    let sides = |ps: &[&ParaphrasePair]| mean_token_length(ps.iter().flat_map(|p| [&p.side1, &p.side2]));
    PivotReport {
        matched: matched_pairs.iter().map(|p| p.id.clone()).collect(),
        considered: considered.len(),
        match_rate: if considered.is_empty() {
            0.0
        } else {
            matched_pairs.len() as f64 / considered.len() as f64
        },
        mean_length_matched: sides(&matched_pairs),
        mean_length_all: sides(&considered),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize("Vasta ammuttu!").as_str(), "vastaammuttu");
        assert_eq!(normalize("").as_str(), "");
        assert_eq!(normalize("ÄITI, 3 kpl.").as_str(), "äiti3kpl");
        assert_eq!(
            normalize_with("  Vasta --  ammuttu! ", NormalizeMode::CollapseWhitespace).as_str(),
            "vasta ammuttu"
        );
    }

    #[test]
    fn empty_corpus_and_empty_keys() {
        let idx = build_index::<&str, &str>(&[]);
        assert_eq!(idx.key_count(), 0);
        let idx = build_index(&[("...", "x"), ("x", "!!")]);
        assert_eq!(idx.key_count(), 0);
        assert_eq!(idx.line_count(), 2);
    }

    #[test]
    fn identical_targets_collect_sources() {
        let idx = build_index(&[("Hello", "Hei"), ("Hi", "Hei!")]);
        assert_eq!(idx.key_count(), 1);
        assert_eq!(idx.sources_for("hei"), vec![0, 1]);
    }

    #[test]
    fn six_line_fixture() {
        let aligned = [
            ("I'm coming.", "Tulen."),
            ("Hello there", "Terve"),
            ("I'm coming!", "Olen tulossa."),
            ("Go away", "Mene pois"),
            ("hello THERE", "Hei vaan"),
            ("Whatever", "Ihan sama"),
        ];
        let idx = build_index(&aligned);
        assert_eq!(idx.sources_for("Tulen"), vec![0]);
        assert_eq!(idx.sources_for("Olen tulossa"), vec![0]);
        assert!(idx.share_source("Tulen.", "olen tulossa"));
        assert!(idx.share_source("Terve!", "Hei vaan"));
        assert!(!idx.share_source("Tulen", "Mene pois"));
        assert!(!idx.share_source("Tulen", "ei ole"));
    }

    #[test]
    fn mismatched_files_are_an_alignment_error() {
        let err =
            build_index_from_readers("a\nb\nc\n".as_bytes(), "x\n".as_bytes(), NormalizeMode::Strict).unwrap_err();
        match err {
            PivotError::Alignment {
                source_lines,
                target_lines,
            } => assert_eq!((source_lines, target_lines), (3, 1)),
            e => panic!("unexpected {e}"),
        }
        assert!(build_index_from_readers("a\n".as_bytes(), "x\ny\n".as_bytes(), NormalizeMode::Strict).is_err());
    }

    #[test]
    fn key_table_chains_collisions() {
        let mut t = KeyTable::default();
        // force a collision by inserting under one head manually
        let (a, _) = t.intern("alpha");
        let h = hash_key("alpha");
        let id = t.spans.len() as u32;
        let start = t.arena.len();
        t.arena.push_str("beta");
        t.spans.push((start, t.arena.len()));
        t.next.push(t.heads[&h]);
        t.heads.insert(h, id);
        assert_eq!(t.get("alpha"), Some(a));
        // "beta" hashes elsewhere, so its real bucket is empty
        assert_eq!(t.get("beta"), None);
        assert_eq!(t.intern("alpha"), (a, false));
    }
}
