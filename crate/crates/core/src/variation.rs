//! Lemma insertions/deletions between the two sides of a pair.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ParaphrasePair, ParsedSegment, Token};

/// Dependency relations treated as functional by the content-word
/// attachment score.
pub const DEFAULT_FUNCTIONAL_RELATIONS: [&str; 11] = [
    "aux",
    "aux:pass",
    "case",
    "cc",
    "clf",
    "cop",
    "det",
    "mark",
    "punct",
    "cc:preconj",
    "cop:own",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VariationError {
    #[error("functional relation set must contain \"punct\"")]
    MissingPunct,
    #[error("pair has {0} lemma indels; zero-indel subtype is undefined")]
    NonZeroIndel(usize),
}

/// Relations whose words are ignored in content-only comparison.
///
/// Matching is on the full relation string, so subtypes such as `aux:pass`
/// must be listed explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalRelationSet {
    relations: BTreeSet<String>,
}

impl FunctionalRelationSet {
    pub fn new<I, S>(relations: I) -> Result<Self, VariationError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let relations: BTreeSet<String> = relations.into_iter().map(Into::into).collect();
        if !relations.contains("punct") {
            return Err(VariationError::MissingPunct);
        }
        Ok(FunctionalRelationSet { relations })
    }

    /// Only `punct`: content-only comparison then equals the plain one.
    pub fn punct_only() -> Self {
        FunctionalRelationSet {
            relations: BTreeSet::from(["punct".to_owned()]),
        }
    }

    pub fn contains(&self, deprel: &str) -> bool {
        self.relations.contains(deprel)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.relations.iter().map(String::as_str)
    }
}

impl Default for FunctionalRelationSet {
    fn default() -> Self {
        FunctionalRelationSet::new(DEFAULT_FUNCTIONAL_RELATIONS).expect("default set contains punct")
    }
}

/// Strips compound-boundary markers (`#`) from a lemma.
///
/// A lemma consisting only of markers is returned unchanged.
pub fn normalize_lemma(lemma: &str) -> Cow<'_, str> {
    if lemma.contains('#') && lemma.chars().any(|c| c != '#') {
        Cow::Owned(lemma.replace('#', ""))
    } else {
        Cow::Borrowed(lemma)
    }
}

/// Multiset difference of lemmas, each side kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LemmaIndel {
    pub only_in_side1: Vec<String>,
    pub only_in_side2: Vec<String>,
}

impl LemmaIndel {
    pub fn new(mut only_in_side1: Vec<String>, mut only_in_side2: Vec<String>) -> Self {
        only_in_side1.sort();
        only_in_side2.sort();
        LemmaIndel {
            only_in_side1,
            only_in_side2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.only_in_side1.is_empty() && self.only_in_side2.is_empty()
    }

    pub fn len(&self) -> usize {
        self.only_in_side1.len() + self.only_in_side2.len()
    }

    pub fn swapped(&self) -> Self {
        LemmaIndel {
            only_in_side1: self.only_in_side2.clone(),
            only_in_side2: self.only_in_side1.clone(),
        }
    }
}

fn included(token: &Token, content_only: bool, funcs: &FunctionalRelationSet) -> bool {
    !token.is_punct() && !(content_only && funcs.contains(&token.deprel))
}

fn lemma_counts<'a>(
    seg: &'a ParsedSegment,
    content_only: bool,
    funcs: &FunctionalRelationSet,
) -> BTreeMap<Cow<'a, str>, isize> {
    let mut counts = BTreeMap::new();
    for t in seg.tokens().filter(|t| included(t, content_only, funcs)) {
        *counts.entry(normalize_lemma(&t.lemma)).or_insert(0) += 1;
    }
    counts
}

pub fn segment_indel(
    side1: &ParsedSegment,
    side2: &ParsedSegment,
    content_only: bool,
    funcs: &FunctionalRelationSet,
) -> LemmaIndel {
    let mut balance = lemma_counts(side1, content_only, funcs);
    for t in side2.tokens().filter(|t| included(t, content_only, funcs)) {
        *balance.entry(normalize_lemma(&t.lemma)).or_insert(0) -= 1;
    }
    let mut only1 = Vec::new();
    let mut only2 = Vec::new();
    for (lemma, n) in balance {
        let target = if n > 0 { &mut only1 } else { &mut only2 };
        for _ in 0..n.unsigned_abs() {
            target.push(lemma.clone().into_owned());
        }
    }
    // BTreeMap iteration already yields both sides sorted.
    LemmaIndel {
        only_in_side1: only1,
        only_in_side2: only2,
    }
}

/// Lemma indel of a pair, ignoring punctuation and, when `content_only` is
/// set, every word whose relation is in `funcs`.
pub fn lemma_indel(pair: &ParaphrasePair, content_only: bool, funcs: &FunctionalRelationSet) -> LemmaIndel {
    segment_indel(&pair.side1, &pair.side2, content_only, funcs)
}

pub fn indel_count(pair: &ParaphrasePair) -> usize {
    // funcs is unused when content_only is false
    segment_indel(&pair.side1, &pair.side2, false, &FunctionalRelationSet::punct_only()).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroIndelSubtype {
    Reordering,
    SameLemmaSameOrder,
    SameLemmaDifferentOrder,
}

/// Splits zero-indel pairs into word reordering, inflection-only changes in
/// the same order, and inflection changes combined with reordering.
///
/// Surface forms are compared case-folded so that sentence-initial
/// capitalization does not hide a pure reordering.
pub fn zero_indel_subtype(pair: &ParaphrasePair) -> Result<ZeroIndelSubtype, VariationError> {
    let n = indel_count(pair);
    if n != 0 {
        return Err(VariationError::NonZeroIndel(n));
    }
    let surfaces =
        |seg: &ParsedSegment| -> Vec<String> { seg.content_tokens().map(|t| t.surface.to_lowercase()).collect() };
    let (s1, s2) = (surfaces(&pair.side1), surfaces(&pair.side2));
    if s1 != s2 {
        let (mut m1, mut m2) = (s1.clone(), s2.clone());
        m1.sort_unstable();
        m2.sort_unstable();
        if m1 == m2 {
            return Ok(ZeroIndelSubtype::Reordering);
        }
    }
    let lemmas = |seg: &ParsedSegment| -> Vec<String> {
        seg.content_tokens()
            .map(|t| normalize_lemma(&t.lemma).into_owned())
            .collect()
    };
    if lemmas(&pair.side1) == lemmas(&pair.side2) {
        Ok(ZeroIndelSubtype::SameLemmaSameOrder)
    } else {
        Ok(ZeroIndelSubtype::SameLemmaDifferentOrder)
    }
}
