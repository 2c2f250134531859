//! Corpus analysis for paraphrase pairs drawn from alternative translations.
//!
//! The crate takes pre-parsed pairs (CoNLL-U plus a pair manifest) and
//! measures how the two sides differ: lemma insertions and deletions,
//! reordering and inflection-only variation, one-to-one synonym substitutions
//! and variation confined to functional words. On top of that it provides
//! corpus statistics, a language-pivoting experiment against a line-aligned
//! bilingual corpus and the bookkeeping needed for manual annotation of the
//! pairs the automatic cascade cannot explain.
//!
//! Per-pair work runs through [`exec::Exec`], which uses rayon when the
//! `parallel` feature is enabled (the default) and a plain loop otherwise.

pub mod annotation;
pub mod classifier;
pub mod corpus;
pub mod exec;
pub mod matching;
pub mod pivot;
pub mod stats;
pub mod synonymy;
pub mod variation;

pub use classifier::{classify, classify_corpus, Cascade, ClassCounts, Classifier, VariationClass};
pub use corpus::{
    group_label, label_distribution, load_corpus, LabelGroup, PairLabel, ParaphrasePair, ParsedSegment, Token,
};
pub use exec::Exec;
pub use synonymy::{account_indels, build_lexicon, knn_synonyms, EmbeddingTable, SynonymLexicon};
pub use variation::{indel_count, lemma_indel, zero_indel_subtype, FunctionalRelationSet, LemmaIndel};
