//! Synonym lexicon built from embedding neighbours and a wordnet export, and
//! one-to-one synonym accounting of lemma indels.

mod embedding;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::matching::maximum_matching;
use crate::variation::LemmaIndel;

pub use embedding::EmbeddingTable;

/// Neighbours taken per lemma from the embedding space.
pub const DEFAULT_K: usize = 15;

#[derive(Debug, Error)]
pub enum SynonymyError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("embedding header: {0}")]
    Header(String),
    #[error("embedding line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("binary embeddings: {0}")]
    Binary(String),
    #[error("vector for {word:?} has dimension {found}, expected {expected}")]
    Dimension {
        word: String,
        expected: usize,
        found: usize,
    },
    #[error("vector for {0:?} has non-finite components")]
    NonFinite(String),
    #[error("lexicon line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Which source(s) contributed a lexicon edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub embedding: bool,
    pub wordnet: bool,
}

impl Provenance {
    pub const EMBEDDING: Provenance = Provenance {
        embedding: true,
        wordnet: false,
    };
    pub const WORDNET: Provenance = Provenance {
        embedding: false,
        wordnet: true,
    };

    fn merge(&mut self, other: Provenance) {
        self.embedding |= other.embedding;
        self.wordnet |= other.wordnet;
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.embedding, self.wordnet) {
            (true, true) => f.write_str("embedding+wordnet"),
            (true, false) => f.write_str("embedding"),
            (false, true) => f.write_str("wordnet"),
            (false, false) => f.write_str("none"),
        }
    }
}

/// How a lexicon edge is consulted when matching side-1 lemma `x` with
/// side-2 lemma `y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynonymDirection {
    /// `y ∈ entries(x)` or `x ∈ entries(y)`.
    #[default]
    Either,
    /// Only `y ∈ entries(x)`.
    Forward,
}

/// Lemma → synonym lemmas, with per-edge provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, BTreeMap<String, Provenance>>,
    direction: SynonymDirection,
}

impl SynonymLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_direction(mut self, direction: SynonymDirection) -> Self {
        self.direction = direction;
        self
    }

    pub fn direction(&self) -> SynonymDirection {
        self.direction
    }

    pub fn ensure_entry(&mut self, lemma: &str) {
        if !self.entries.contains_key(lemma) {
            self.entries.insert(lemma.to_owned(), BTreeMap::new());
        }
    }

    /// Adds the directed edge `lemma → synonym`. Self-edges are ignored.
    pub fn insert(&mut self, lemma: &str, synonym: &str, source: Provenance) {
        if lemma == synonym {
            return;
        }
        self.ensure_entry(lemma);
        self.entries
            .get_mut(lemma)
            .expect("entry exists")
            .entry(synonym.to_owned())
            .or_default()
            .merge(source);
    }

    /// Adds a wordnet pair in both directions.
    pub fn insert_wordnet_pair(&mut self, a: &str, b: &str) {
        self.insert(a, b, Provenance::WORDNET);
        self.insert(b, a, Provenance::WORDNET);
    }

    pub fn synonyms(&self, lemma: &str) -> impl Iterator<Item = &str> + '_ {
        self.entries
            .get(lemma)
            .into_iter()
            .flat_map(|m| m.keys().map(String::as_str))
    }

    pub fn provenance(&self, lemma: &str, synonym: &str) -> Option<Provenance> {
        self.entries.get(lemma)?.get(synonym).copied()
    }

    pub fn has_entry(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    /// Whether side-1 lemma `x` and side-2 lemma `y` count as synonyms.
    pub fn are_synonyms(&self, x: &str, y: &str) -> bool {
        let forward = self.provenance(x, y).is_some();
        match self.direction {
            SynonymDirection::Forward => forward,
            SynonymDirection::Either => forward || self.provenance(y, x).is_some(),
        }
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn edge_count(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    /// Writes `lemma<TAB>synonym<TAB>provenance` lines; a lemma without
    /// synonyms is written alone on its line.
    pub fn write_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (lemma, syns) in &self.entries {
            if syns.is_empty() {
                writeln!(out, "{lemma}")?;
            }
            for (syn, prov) in syns {
                writeln!(out, "{lemma}\t{syn}\t{prov}")?;
            }
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self, SynonymyError> {
        let mut lex = SynonymLexicon::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| SynonymyError::Malformed {
                line: i + 1,
                message: message.to_owned(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            match cols.as_slice() {
                [lemma] => lex.ensure_entry(lemma),
                [lemma, syn, prov] if !lemma.is_empty() && !syn.is_empty() => {
                    let source = match *prov {
                        "embedding" => Provenance::EMBEDDING,
                        "wordnet" => Provenance::WORDNET,
                        "embedding+wordnet" => Provenance {
                            embedding: true,
                            wordnet: true,
                        },
                        _ => return Err(err("unknown provenance")),
                    };
                    lex.insert(lemma, syn, source);
                }
                _ => return Err(err("expected lemma, synonym and provenance")),
            }
        }
        Ok(lex)
    }
}

/// Reads a two-column TSV of wordnet synonym pairs.
pub fn read_wordnet_pairs<R: BufRead>(reader: R) -> Result<Vec<(String, String)>, SynonymyError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split('\t').collect::<Vec<_>>().as_slice() {
            [a, b] if !a.trim().is_empty() && !b.trim().is_empty() => {
                pairs.push((a.trim().to_owned(), b.trim().to_owned()))
            }
            _ => {
                return Err(SynonymyError::Malformed {
                    line: i + 1,
                    message: "expected two non-empty tab-separated lemmas".into(),
                })
            }
        }
    }
    Ok(pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexiconConfig {
    pub k: usize,
    /// Minimum cosine similarity for embedding neighbours; off by default.
    pub min_similarity: Option<f32>,
    /// Search only the first N rows of the embedding table.
    pub restrict_vocab: Option<usize>,
    pub direction: SynonymDirection,
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig {
            k: DEFAULT_K,
            min_similarity: None,
            restrict_vocab: None,
            direction: SynonymDirection::Either,
        }
    }
}

/// Up to `k` lemmas closest to `lemma` by cosine similarity, best first.
pub fn knn_synonyms(table: &EmbeddingTable, lemma: &str, k: usize) -> Vec<String> {
    table
        .nearest(lemma, k, None, None)
        .into_iter()
        .map(|(w, _)| w)
        .collect()
}

pub fn build_lexicon<'a, I>(
    table: &EmbeddingTable,
    wordnet_pairs: &[(String, String)],
    config: &LexiconConfig,
    vocabulary: I,
    exec: Exec,
) -> SynonymLexicon
where
    I: IntoIterator<Item = &'a str>,
{
    let vocab: Vec<&str> = vocabulary.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let neighbours = exec.map(&vocab, |lemma| {
        table.nearest(lemma, config.k, config.min_similarity, config.restrict_vocab)
    });

    let mut lex = SynonymLexicon::new().with_direction(config.direction);
    for (lemma, nn) in vocab.iter().zip(neighbours) {
        lex.ensure_entry(lemma);
        for (syn, _) in nn {
            lex.insert(lemma, &syn, Provenance::EMBEDDING);
        }
    }
    for (a, b) in wordnet_pairs {
        lex.insert_wordnet_pair(a, b);
    }
    lex
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccountingLevel {
    Full,
    Partial,
    #[serde(rename = "none")]
    Unaccounted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingResult {
    pub level: AccountingLevel,
    /// `(side-1 lemma, side-2 lemma)` substitutions.
    pub matched_pairs: Vec<(String, String)>,
    pub residual: LemmaIndel,
}

/// Explains as many indel lemmas as possible by one-to-one synonym
/// substitution, using a maximum bipartite matching.
pub fn account_indels(indel: &LemmaIndel, lex: &SynonymLexicon) -> AccountingResult {
    let left = &indel.only_in_side1;
    let right = &indel.only_in_side2;
    let adjacency: Vec<Vec<usize>> = left
        .iter()
        .map(|x| {
            right
                .iter()
                .enumerate()
                .filter(|(_, y)| lex.are_synonyms(x, y))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let matching = maximum_matching(&adjacency, right.len());

    let mut right_used = vec![false; right.len()];
    let mut matched_pairs = Vec::new();
    let mut residual1 = Vec::new();
    for (i, m) in matching.iter().enumerate() {
        match m {
            Some(j) => {
                right_used[*j] = true;
                matched_pairs.push((left[i].clone(), right[*j].clone()));
            }
            None => residual1.push(left[i].clone()),
        }
    }
    let residual2: Vec<String> = right
        .iter()
        .zip(&right_used)
        .filter(|(_, used)| !**used)
        .map(|(y, _)| y.clone())
        .collect();
    let residual = LemmaIndel::new(residual1, residual2);

    let level = if residual.is_empty() {
        AccountingLevel::Full
    } else if matched_pairs.is_empty() {
        AccountingLevel::Unaccounted
    } else {
        AccountingLevel::Partial
    };
    AccountingResult {
        level,
        matched_pairs,
        residual,
    }
}
