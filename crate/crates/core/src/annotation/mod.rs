//! Manual categorization of the pairs the automatic cascade leaves
//! unexplained: sampling, the category scheme, a persistent store and
//! frequency tables.

mod store;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{Cascade, Classifier, VariationClass};
use crate::corpus::{LabelGroup, ParaphrasePair};
use crate::exec::Exec;
use crate::synonymy::SynonymLexicon;
use crate::variation::FunctionalRelationSet;

pub use store::{Acknowledgement, AnnotationStore};

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("requested {requested} pairs but only {eligible} are eligible")]
    NotEnoughEligible { requested: usize, eligible: usize },
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("pair {0} is not in the active sample")]
    UnknownPair(String),
    #[error("an annotation needs at least one category")]
    EmptyCategories,
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("journal line {line}: {message}")]
    Journal { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManualCategory {
    WordToWord,
    WordToPhrase,
    PhraseToPhrase,
    RedundancyVerbosity,
    ExplicitPronouns,
    Emphasizer,
    FigurativeIdiom,
    UncertaintyHedging,
}

impl ManualCategory {
    pub const ALL: [ManualCategory; 8] = [
        ManualCategory::WordToWord,
        ManualCategory::WordToPhrase,
        ManualCategory::PhraseToPhrase,
        ManualCategory::RedundancyVerbosity,
        ManualCategory::ExplicitPronouns,
        ManualCategory::Emphasizer,
        ManualCategory::FigurativeIdiom,
        ManualCategory::UncertaintyHedging,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ManualCategory::WordToWord => "word_to_word",
            ManualCategory::WordToPhrase => "word_to_phrase",
            ManualCategory::PhraseToPhrase => "phrase_to_phrase",
            ManualCategory::RedundancyVerbosity => "redundancy_verbosity",
            ManualCategory::ExplicitPronouns => "explicit_pronouns",
            ManualCategory::Emphasizer => "emphasizer",
            ManualCategory::FigurativeIdiom => "figurative_idiom",
            ManualCategory::UncertaintyHedging => "uncertainty_hedging",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ManualCategory::WordToWord => "Word-to-word synonym",
            ManualCategory::WordToPhrase => "Word-to-phrase synonym",
            ManualCategory::PhraseToPhrase => "Phrase-to-phrase synonym",
            ManualCategory::RedundancyVerbosity => "Redundancy or verbosity",
            ManualCategory::ExplicitPronouns => "Explicit pronouns",
            ManualCategory::Emphasizer => "Emphasizers",
            ManualCategory::FigurativeIdiom => "Figurative language/idioms",
            ManualCategory::UncertaintyHedging => "Uncertainty or hedging",
        }
    }

    /// Short annotator guidance.
    pub fn gloss(self) -> &'static str {
        match self {
            ManualCategory::WordToWord => "One word swapped for a single synonymous word.",
            ManualCategory::WordToPhrase => "One word on one side corresponds to a multi-word phrase on the other.",
            ManualCategory::PhraseToPhrase => {
                "A phrase corresponds to a differently worded phrase of the same meaning."
            }
            ManualCategory::RedundancyVerbosity => "One side adds words the meaning does not require.",
            ManualCategory::ExplicitPronouns => {
                "A pronoun is spelled out where the verb ending already marks the person."
            }
            ManualCategory::Emphasizer => "One side adds an emphasis word such as 'really' or 'even'.",
            ManualCategory::FigurativeIdiom => "An idiom or figurative expression stands for a literal one.",
            ManualCategory::UncertaintyHedging => "Both sides hedge, with different uncertainty markers.",
        }
    }

    /// Keyboard shortcut, 1 to 8.
    pub fn key(self) -> u8 {
        ManualCategory::ALL.iter().position(|&c| c == self).expect("listed") as u8 + 1
    }
}

impl fmt::Display for ManualCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ManualCategory {
    type Err = AnnotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ManualCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| AnnotationError::UnknownCategory(s.to_owned()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub pair_id: String,
    pub categories: BTreeSet<ManualCategory>,
    pub annotator: String,
    pub timestamp: DateTime<Utc>,
}

impl AnnotationRecord {
    pub fn new(
        pair_id: impl Into<String>,
        categories: impl IntoIterator<Item = ManualCategory>,
        annotator: impl Into<String>,
        timestamp: DateTime<Utc>,
    ) -> Self {
        AnnotationRecord {
            pair_id: pair_id.into(),
            categories: categories.into_iter().collect(),
            annotator: annotator.into(),
            timestamp,
        }
    }
}

/// Indices of a seeded uniform sample without replacement, in draw order.
///
/// A forward Fisher-Yates shuffle stopped after `n` swaps over a ChaCha8
/// stream seeded with `seed`.
pub fn sample_indices(len: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..len).collect();
    let n = n.min(len);
    for i in 0..n {
        let j = rng.random_range(i..len);
        idx.swap(i, j);
    }
    idx.truncate(n);
    idx
}

/// Samples `n` pairs the cascade classifies as `other`.
pub fn sample_unexplained<'a>(
    pairs: &'a [ParaphrasePair],
    lex: &SynonymLexicon,
    funcs: &FunctionalRelationSet,
    n: usize,
    seed: u64,
) -> Result<Vec<&'a ParaphrasePair>, AnnotationError> {
    let cascade = Cascade::default();
    sample_unexplained_with(
        &Classifier::new(lex, funcs, &cascade),
        pairs,
        None,
        n,
        seed,
        Exec::default(),
    )
}

pub fn sample_unexplained_with<'a>(
    classifier: &Classifier<'_>,
    pairs: &'a [ParaphrasePair],
    group: Option<LabelGroup>,
    n: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<&'a ParaphrasePair>, AnnotationError> {
    if n == 0 {
        return Err(AnnotationError::EmptySample);
    }
    let unexplained = exec.map(pairs, |p| {
        group.is_none_or(|g| p.group() == g) && classifier.classify(p) == VariationClass::Other
    });
    let eligible: Vec<&ParaphrasePair> = pairs
        .iter()
        .zip(unexplained)
        .filter(|(_, e)| *e)
        .map(|(p, _)| p)
        .collect();
    if eligible.len() < n {
        return Err(AnnotationError::NotEnoughEligible {
            requested: n,
            eligible: eligible.len(),
        });
    }
    Ok(sample_indices(eligible.len(), n, seed)
        .into_iter()
        .map(|i| eligible[i])
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryFrequency {
    pub category: ManualCategory,
    pub count: usize,
    /// Share of all category assignments.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<CategoryFrequency>,
    pub records: usize,
    pub assignments: usize,
}

/// Per-category record counts; ratios are over total assignments so they
/// sum to one.
pub fn category_frequencies<'a, I>(records: I) -> FrequencyTable
where
    I: IntoIterator<Item = &'a AnnotationRecord>,
{
    let mut counts = [0usize; 8];
    let mut n_records = 0;
    for r in records {
        n_records += 1;
        for c in &r.categories {
            counts[c.key() as usize - 1] += 1;
        }
    }
    let assignments: usize = counts.iter().sum();
    let rows = ManualCategory::ALL
        .iter()
        .zip(counts)
        .map(|(&category, count)| CategoryFrequency {
            category,
            count,
            ratio: if assignments == 0 {
                0.0
            } else {
                count as f64 / assignments as f64
            },
        })
        .collect();
    FrequencyTable {
        rows,
        records: n_records,
        assignments,
    }
}

/// Fraction of records whose category set is exactly `{category}`.
pub fn sole_category_rate<'a, I>(records: I, category: ManualCategory) -> f64
where
    I: IntoIterator<Item = &'a AnnotationRecord>,
{
    let (mut total, mut sole) = (0usize, 0usize);
    for r in records {
        total += 1;
        if r.categories.len() == 1 && r.categories.contains(&category) {
            sole += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        sole as f64 / total as f64
    }
}
