//! Corpus-level statistics over lemma indels, synonym accounting, text
//! proportions and segment lengths.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{LabelGroup, ParaphrasePair, ParsedSegment};
use crate::exec::Exec;
use crate::synonymy::{account_indels, AccountingLevel, SynonymLexicon};
use crate::variation::{indel_count, lemma_indel, normalize_lemma, FunctionalRelationSet};

/// Minimum corpus occurrences for a lemma to be ranked.
pub const DEFAULT_MIN_TOTAL: usize = 50;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("source material contains no alphanumeric characters")]
    EmptySource,
    #[error("min_total must be at least 1")]
    ZeroMinTotal,
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("frequency list line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Number of pairs per indel count.
pub fn indel_histogram<P>(pairs: &[P], group_filter: Option<LabelGroup>) -> BTreeMap<usize, usize>
where
    P: Borrow<ParaphrasePair> + Sync,
{
    indel_histogram_with(pairs, group_filter, Exec::default())
}

pub fn indel_histogram_with<P>(pairs: &[P], group_filter: Option<LabelGroup>, exec: Exec) -> BTreeMap<usize, usize>
where
    P: Borrow<ParaphrasePair> + Sync,
{
    let counts = exec.filter_map(pairs, |p| {
        let p = p.borrow();
        group_filter.is_none_or(|g| p.group() == g).then(|| indel_count(p))
    });
    let mut hist = BTreeMap::new();
    for c in counts {
        *hist.entry(c).or_insert(0) += 1;
    }
    hist
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverrepresentationRecord {
    pub lemma: String,
    pub indel_occurrences: usize,
    pub total_occurrences: usize,
    pub ratio: f64,
}

pub fn ratio(indel_occurrences: usize, total_occurrences: usize) -> f64 {
    indel_occurrences as f64 / total_occurrences as f64
}

/// Where the per-lemma totals come from.
#[derive(Clone, Copy, Debug)]
pub enum FrequencyBasis<'a> {
    /// Non-punctuation tokens on both sides of the analyzed pairs.
    PairTexts,
    /// An external frequency list, e.g. counted over the source subtitles.
    External(&'a HashMap<String, usize>),
}

/// Orders records by descending ratio, exact rational comparison, then lemma.
fn by_ratio(a: &OverrepresentationRecord, b: &OverrepresentationRecord) -> Ordering {
    let lhs = a.indel_occurrences as u128 * b.total_occurrences as u128;
    let rhs = b.indel_occurrences as u128 * a.total_occurrences as u128;
    rhs.cmp(&lhs).then_with(|| a.lemma.cmp(&b.lemma))
}

/// Ranks `(lemma, indel_occurrences, total_occurrences)` counts.
///
/// Lemmas below `min_total`, never occurring in an indel, or with more indel
/// occurrences than total occurrences (possible with an external basis) are
/// dropped.
pub fn rank_counts<I, S>(counts: I, min_total: usize, top_n: Option<usize>) -> Vec<OverrepresentationRecord>
where
    I: IntoIterator<Item = (S, usize, usize)>,
    S: Into<String>,
{
    let mut records: Vec<_> = counts
        .into_iter()
        .filter(|&(_, indel, total)| total >= min_total && indel > 0 && indel <= total)
        .map(|(lemma, indel, total)| OverrepresentationRecord {
            lemma: lemma.into(),
            indel_occurrences: indel,
            total_occurrences: total,
            ratio: ratio(indel, total),
        })
        .collect();
    records.sort_by(by_ratio);
    if let Some(n) = top_n {
        records.truncate(n);
    }
    records
}

pub fn overrepresentation<P>(
    pairs: &[P],
    min_total: usize,
    top_n: Option<usize>,
) -> Result<Vec<OverrepresentationRecord>, StatsError>
where
    P: Borrow<ParaphrasePair> + Sync,
{
    overrepresentation_with(pairs, min_total, top_n, FrequencyBasis::PairTexts, Exec::default())
}

pub fn overrepresentation_with<P>(
    pairs: &[P],
    min_total: usize,
    top_n: Option<usize>,
    basis: FrequencyBasis<'_>,
    exec: Exec,
) -> Result<Vec<OverrepresentationRecord>, StatsError>
where
    P: Borrow<ParaphrasePair> + Sync,
{
    if min_total == 0 {
        return Err(StatsError::ZeroMinTotal);
    }
    let funcs = FunctionalRelationSet::punct_only();
    let per_pair = exec.map(pairs, |p| {
        let p = p.borrow();
        let indel = lemma_indel(p, false, &funcs);
        let mut indel_counts: HashMap<String, usize> = HashMap::new();
        for l in indel.only_in_side1.into_iter().chain(indel.only_in_side2) {
            *indel_counts.entry(l).or_default() += 1;
        }
        let mut totals: HashMap<String, usize> = HashMap::new();
        if matches!(basis, FrequencyBasis::PairTexts) {
            for t in p.side1.content_tokens().chain(p.side2.content_tokens()) {
                *totals.entry(normalize_lemma(&t.lemma).into_owned()).or_default() += 1;
            }
        }
        (indel_counts, totals)
    });

    let mut indel_counts: HashMap<String, usize> = HashMap::new();
    let mut pair_totals: HashMap<String, usize> = HashMap::new();
    for (i, t) in per_pair {
        for (k, v) in i {
            *indel_counts.entry(k).or_default() += v;
        }
        for (k, v) in t {
            *pair_totals.entry(k).or_default() += v;
        }
    }
    let totals = match basis {
        FrequencyBasis::PairTexts => &pair_totals,
        FrequencyBasis::External(freq) => freq,
    };
    Ok(rank_counts(
        indel_counts.into_iter().map(|(lemma, n)| {
            let total = totals.get(&lemma).copied().unwrap_or(0);
            (lemma, n, total)
        }),
        min_total,
        top_n,
    ))
}

/// Reads a `lemma<TAB>count` frequency list.
pub fn read_frequency_list<R: BufRead>(reader: R) -> Result<HashMap<String, usize>, StatsError> {
    let mut freq = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed = line
            .split_once('\t')
            .and_then(|(l, c)| Some((normalize_lemma(l.trim()).into_owned(), c.trim().parse::<usize>().ok()?)));
        match parsed {
            Some((lemma, count)) if !lemma.is_empty() => *freq.entry(lemma).or_insert(0) += count,
            _ => {
                return Err(StatsError::Malformed {
                    line: i + 1,
                    message: "expected lemma<TAB>count".into(),
                })
            }
        }
    }
    Ok(freq)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingRates {
    pub full: usize,
    pub partial: usize,
    pub none: usize,
}

impl AccountingRates {
    pub fn total(&self) -> usize {
        self.full + self.partial + self.none
    }
}

/// Synonym accounting levels over the pairs that have lemma indels.
pub fn accounting_rates<P>(pairs: &[P], lex: &SynonymLexicon) -> AccountingRates
where
    P: Borrow<ParaphrasePair> + Sync,
{
    accounting_rates_with(pairs, lex, Exec::default())
}

pub fn accounting_rates_with<P>(pairs: &[P], lex: &SynonymLexicon, exec: Exec) -> AccountingRates
where
    P: Borrow<ParaphrasePair> + Sync,
{
    let funcs = FunctionalRelationSet::punct_only();
    let levels = exec.filter_map(pairs, |p| {
        let indel = lemma_indel(p.borrow(), false, &funcs);
        (!indel.is_empty()).then(|| account_indels(&indel, lex).level)
    });
    let mut rates = AccountingRates::default();
    for level in levels {
        match level {
            AccountingLevel::Full => rates.full += 1,
            AccountingLevel::Partial => rates.partial += 1,
            AccountingLevel::Unaccounted => rates.none += 1,
        }
    }
    rates
}

pub fn alphanumeric_count(text: &str) -> usize {
    text.chars().filter(|c| c.is_alphanumeric()).count()
}

/// Share of the source material, in alphanumeric characters, that ended up
/// in paraphrase pairs.
pub fn nonelementary_proportion<A, B>(pair_texts: &[A], source_texts: &[B]) -> Result<f64, StatsError>
where
    A: AsRef<str>,
    B: AsRef<str>,
{
    let source: usize = source_texts.iter().map(|t| alphanumeric_count(t.as_ref())).sum();
    if source == 0 {
        return Err(StatsError::EmptySource);
    }
    let pairs: usize = pair_texts.iter().map(|t| alphanumeric_count(t.as_ref())).sum();
    Ok(pairs as f64 / source as f64)
}

/// Mean number of non-punctuation tokens per segment; 0 for no segments.
pub fn mean_token_length<'a, I>(segments: I) -> f64
where
    I: IntoIterator<Item = &'a ParsedSegment>,
{
    let (n, tokens) = segments
        .into_iter()
        .fold((0usize, 0usize), |(n, t), s| (n + 1, t + s.content_tokens().count()));
    if n == 0 {
        0.0
    } else {
        tokens as f64 / n as f64
    }
}
