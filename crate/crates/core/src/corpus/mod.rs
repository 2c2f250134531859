//! Paraphrase pairs, their parses and the corpus label scheme.
//!
//! A corpus is a CoNLL-U file holding every parsed sentence plus a manifest
//! TSV that assembles sentences into pairs and attaches the annotator label.

mod conllu;
pub mod fixture;
mod manifest;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conllu::{read_conllu, write_conllu};
pub use manifest::{read_manifest, write_manifest, ManifestRow};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CoNLL-U line {line}: {message}")]
    Conllu { line: usize, message: String },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("pair {pair_id} references unknown sentence {sentence_id}")]
    DanglingSentence { pair_id: String, sentence_id: String },
    #[error("duplicate pair id {0}")]
    DuplicatePair(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("unknown base label {0:?}")]
    UnknownBase(String),
    #[error("unknown label flag {0:?}")]
    UnknownFlag(char),
    #[error("flags are only allowed on label 4, got {0}")]
    FlagsNotAllowed(BaseLabel),
}

/// One syntactic word of a parsed sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position within its sentence.
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub feats: BTreeMap<String, String>,
    /// Index of the governing token, 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl Token {
    pub fn is_punct(&self) -> bool {
        self.upos == "PUNCT" || self.deprel.split(':').next() == Some("punct")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence, checking token indices and heads.
    pub fn new(id: impl Into<String>, text: impl Into<String>, tokens: Vec<Token>) -> Result<Self, String> {
        let sentence = Sentence {
            id: id.into(),
            text: text.into(),
            tokens,
        };
        sentence.validate()?;
        Ok(sentence)
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut seen = HashSet::with_capacity(self.tokens.len());
        for token in &self.tokens {
            if token.index == 0 {
                return Err(format!("token index must be >= 1 in sentence {}", self.id));
            }
            if !seen.insert(token.index) {
                return Err(format!("duplicate token index {} in sentence {}", token.index, self.id));
            }
            if token.surface.is_empty() || token.lemma.is_empty() {
                return Err(format!(
                    "empty form or lemma at token {} in sentence {}",
                    token.index, self.id
                ));
            }
            if token.head == token.index {
                return Err(format!("token {} is its own head in sentence {}", token.index, self.id));
            }
        }
        for token in &self.tokens {
            if token.head != 0 && !seen.contains(&token.head) {
                return Err(format!(
                    "token {} has unknown head {} in sentence {}",
                    token.index, token.head, self.id
                ));
            }
        }
        Ok(())
    }
}

/// One side of a pair: one or more consecutive parsed sentences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedSegment {
    pub text: String,
    pub sentences: Vec<Sentence>,
}

impl ParsedSegment {
    pub fn from_sentences(sentences: Vec<Sentence>) -> Self {
        let text = sentences.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" ");
        ParsedSegment { text, sentences }
    }

    /// All tokens in order, sentence after sentence.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> + '_ {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    pub fn content_tokens(&self) -> impl Iterator<Item = &Token> + '_ {
        self.tokens().filter(|t| !t.is_punct())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseLabel {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "2")]
    Two,
    Rewrite,
}

impl fmt::Display for BaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseLabel::Four => "4",
            BaseLabel::Three => "3",
            BaseLabel::Two => "2",
            BaseLabel::Rewrite => "rewrite",
        })
    }
}

impl FromStr for BaseLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4" => Ok(BaseLabel::Four),
            "3" => Ok(BaseLabel::Three),
            "2" => Ok(BaseLabel::Two),
            "rewrite" => Ok(BaseLabel::Rewrite),
            other => Err(LabelError::UnknownBase(other.to_owned())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelFlag {
    /// `s`: substantial difference in style.
    Style,
    /// `i`: meaning differs only in a few morphosyntactic features.
    Inflection,
    /// `<`: paraphrase in one direction only.
    DirLeft,
    /// `>`: paraphrase in the other direction only.
    DirRight,
}

impl LabelFlag {
    pub fn from_char(c: char) -> Result<Self, LabelError> {
        match c {
            's' => Ok(LabelFlag::Style),
            'i' => Ok(LabelFlag::Inflection),
            '<' => Ok(LabelFlag::DirLeft),
            '>' => Ok(LabelFlag::DirRight),
            other => Err(LabelError::UnknownFlag(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            LabelFlag::Style => 's',
            LabelFlag::Inflection => 'i',
            LabelFlag::DirLeft => '<',
            LabelFlag::DirRight => '>',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairLabel {
    base: BaseLabel,
    flags: BTreeSet<LabelFlag>,
}

impl PairLabel {
    pub fn new(base: BaseLabel, flags: impl IntoIterator<Item = LabelFlag>) -> Result<Self, LabelError> {
        let flags: BTreeSet<_> = flags.into_iter().collect();
        if !flags.is_empty() && base != BaseLabel::Four {
            return Err(LabelError::FlagsNotAllowed(base));
        }
        Ok(PairLabel { base, flags })
    }

    pub fn plain(base: BaseLabel) -> Self {
        PairLabel {
            base,
            flags: BTreeSet::new(),
        }
    }

    /// Parses the manifest's base and flag columns, e.g. `("4", "s<")`.
    pub fn parse(base: &str, flags: &str) -> Result<Self, LabelError> {
        let base = base.parse()?;
        let flags = flags
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(LabelFlag::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        PairLabel::new(base, flags)
    }

    pub fn base(&self) -> BaseLabel {
        self.base
    }

    pub fn flags(&self) -> &BTreeSet<LabelFlag> {
        &self.flags
    }

    pub fn has_flag(&self, flag: LabelFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn flag_string(&self) -> String {
        self.flags.iter().map(|f| f.as_char()).collect()
    }

    pub fn is_rewrite(&self) -> bool {
        self.base == BaseLabel::Rewrite
    }
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base, self.flag_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaphrasePair {
    pub id: String,
    pub side1: ParsedSegment,
    pub side2: ParsedSegment,
    pub label: PairLabel,
}

impl ParaphrasePair {
    /// The same pair with its sides exchanged.
    pub fn swapped(&self) -> Self {
        ParaphrasePair {
            id: self.id.clone(),
            side1: self.side2.clone(),
            side2: self.side1.clone(),
            label: self.label.clone(),
        }
    }

    pub fn group(&self) -> LabelGroup {
        group_label(&self.label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelGroup {
    Universal,
    ContextDependent,
    RelatedNotParaphrase,
}

impl LabelGroup {
    pub const ALL: [LabelGroup; 3] = [
        LabelGroup::Universal,
        LabelGroup::ContextDependent,
        LabelGroup::RelatedNotParaphrase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LabelGroup::Universal => "universal",
            LabelGroup::ContextDependent => "context_dependent",
            LabelGroup::RelatedNotParaphrase => "related_not_paraphrase",
        }
    }
}

impl fmt::Display for LabelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LabelGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| format!("unknown label group {s:?}"))
    }
}

pub fn group_label(label: &PairLabel) -> LabelGroup {
    match label.base() {
        BaseLabel::Rewrite => LabelGroup::Universal,
        BaseLabel::Two => LabelGroup::RelatedNotParaphrase,
        BaseLabel::Three => LabelGroup::ContextDependent,
        BaseLabel::Four => {
            if label.flags().iter().all(|&f| f == LabelFlag::Style) {
                LabelGroup::Universal
            } else {
                LabelGroup::ContextDependent
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDistribution {
    pub total: usize,
    pub groups: BTreeMap<LabelGroup, usize>,
    /// Keyed by the canonical label string (`4`, `4s`, `rewrite`, ...).
    pub labels: BTreeMap<String, usize>,
}

impl LabelDistribution {
    pub fn group(&self, group: LabelGroup) -> usize {
        self.groups.get(&group).copied().unwrap_or(0)
    }

    pub fn label(&self, label: &str) -> usize {
        self.labels.get(label).copied().unwrap_or(0)
    }
}

pub fn label_distribution(pairs: &[ParaphrasePair]) -> LabelDistribution {
    let mut dist = LabelDistribution {
        total: pairs.len(),
        groups: LabelGroup::ALL.iter().map(|&g| (g, 0)).collect(),
        labels: BTreeMap::new(),
    };
    for pair in pairs {
        *dist.groups.entry(pair.group()).or_default() += 1;
        *dist.labels.entry(pair.label.to_string()).or_default() += 1;
    }
    dist
}

/// Pairs belonging to `group`, or all pairs when `group` is `None`.
pub fn filter_group(pairs: &[ParaphrasePair], group: Option<LabelGroup>) -> Vec<&ParaphrasePair> {
    pairs.iter().filter(|p| group.is_none_or(|g| p.group() == g)).collect()
}

pub fn load_corpus(manifest_path: &Path, conllu_path: &Path) -> Result<Vec<ParaphrasePair>, CorpusError> {
    let sentences = read_conllu(BufReader::new(File::open(conllu_path)?))?;
    let rows = read_manifest(BufReader::new(File::open(manifest_path)?))?;
    assemble(rows, sentences)
}

pub fn load_corpus_from_readers<M: BufRead, C: BufRead>(
    manifest: M,
    conllu: C,
) -> Result<Vec<ParaphrasePair>, CorpusError> {
    assemble(read_manifest(manifest)?, read_conllu(conllu)?)
}

/// Joins manifest rows with their sentences, preserving manifest order.
pub fn assemble(rows: Vec<ManifestRow>, sentences: Vec<Sentence>) -> Result<Vec<ParaphrasePair>, CorpusError> {
    let by_id: HashMap<&str, &Sentence> = sentences.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut seen = HashSet::with_capacity(rows.len());
    let mut pairs = Vec::with_capacity(rows.len());

    for row in rows {
        if !seen.insert(row.pair_id.clone()) {
            return Err(CorpusError::DuplicatePair(row.pair_id));
        }
        let side = |ids: &[String]| -> Result<ParsedSegment, CorpusError> {
            let sents = ids
                .iter()
                .map(|id| {
                    by_id
                        .get(id.as_str())
                        .map(|s| (*s).clone())
                        .ok_or_else(|| CorpusError::DanglingSentence {
                            pair_id: row.pair_id.clone(),
                            sentence_id: id.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedSegment::from_sentences(sents))
        };
        let side1 = side(&row.side1)?;
        let side2 = side(&row.side2)?;
        pairs.push(ParaphrasePair {
            id: row.pair_id,
            side1,
            side2,
            label: row.label,
        });
    }
    Ok(pairs)
}

/// Writes a corpus back out as CoNLL-U plus manifest.
///
/// Sentences shared between pairs are emitted once, in order of first use.
pub fn write_corpus<C: Write, M: Write>(pairs: &[ParaphrasePair], conllu: &mut C, manifest: &mut M) -> io::Result<()> {
    let mut emitted = HashSet::new();
    let mut sentences = Vec::new();
    let mut rows = Vec::with_capacity(pairs.len());
    for pair in pairs {
        for seg in [&pair.side1, &pair.side2] {
            for s in &seg.sentences {
                if emitted.insert(s.id.clone()) {
                    sentences.push(s);
                }
            }
        }
        rows.push(ManifestRow {
            pair_id: pair.id.clone(),
            side1: pair.side1.sentences.iter().map(|s| s.id.clone()).collect(),
            side2: pair.side2.sentences.iter().map(|s| s.id.clone()).collect(),
            label: pair.label.clone(),
        });
    }
    write_conllu(conllu, sentences)?;
    write_manifest(manifest, &rows)
}
