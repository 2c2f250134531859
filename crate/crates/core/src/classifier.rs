//! Seven-way automatic classification of the variation in a pair.
//!
//! The cascade is: zero-indel subtypes first, then the configured steps in
//! order (by default synonym, functional-word filtering, both combined), and
//! everything else is `other`. The first matching step wins.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{LabelGroup, ParaphrasePair};
use crate::exec::Exec;
use crate::synonymy::{account_indels, AccountingLevel, AccountingResult, SynonymLexicon};
use crate::variation::{lemma_indel, zero_indel_subtype, FunctionalRelationSet, LemmaIndel, ZeroIndelSubtype};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationClass {
    Reordering,
    SameLemmaSameOrder,
    SameLemmaDifferentOrder,
    Clas,
    Synonym,
    SynonymPlusClas,
    Other,
}

impl VariationClass {
    pub const ALL: [VariationClass; 7] = [
        VariationClass::Reordering,
        VariationClass::SameLemmaSameOrder,
        VariationClass::SameLemmaDifferentOrder,
        VariationClass::Clas,
        VariationClass::Synonym,
        VariationClass::SynonymPlusClas,
        VariationClass::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VariationClass::Reordering => "reordering",
            VariationClass::SameLemmaSameOrder => "same_lemma_same_order",
            VariationClass::SameLemmaDifferentOrder => "same_lemma_different_order",
            VariationClass::Clas => "clas",
            VariationClass::Synonym => "synonym",
            VariationClass::SynonymPlusClas => "synonym_plus_clas",
            VariationClass::Other => "other",
        }
    }

    pub fn is_zero_indel(self) -> bool {
        matches!(
            self,
            VariationClass::Reordering | VariationClass::SameLemmaSameOrder | VariationClass::SameLemmaDifferentOrder
        )
    }
}

impl fmt::Display for VariationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<ZeroIndelSubtype> for VariationClass {
    fn from(s: ZeroIndelSubtype) -> Self {
        match s {
            ZeroIndelSubtype::Reordering => VariationClass::Reordering,
            ZeroIndelSubtype::SameLemmaSameOrder => VariationClass::SameLemmaSameOrder,
            ZeroIndelSubtype::SameLemmaDifferentOrder => VariationClass::SameLemmaDifferentOrder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadeStep {
    /// The full indel is fully accounted by synonyms.
    Synonym,
    /// The content-only indel is empty.
    Clas,
    /// The content-only indel is fully accounted by synonyms.
    SynonymPlusClas,
}

impl CascadeStep {
    fn class(self) -> VariationClass {
        match self {
            CascadeStep::Synonym => VariationClass::Synonym,
            CascadeStep::Clas => VariationClass::Clas,
            CascadeStep::SynonymPlusClas => VariationClass::SynonymPlusClas,
        }
    }
}

impl FromStr for CascadeStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synonym" => Ok(CascadeStep::Synonym),
            "clas" => Ok(CascadeStep::Clas),
            "synonym_plus_clas" => Ok(CascadeStep::SynonymPlusClas),
            other => Err(format!("unknown cascade step {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cascade {
    pub steps: Vec<CascadeStep>,
}

impl Default for Cascade {
    fn default() -> Self {
        Cascade {
            steps: vec![CascadeStep::Synonym, CascadeStep::Clas, CascadeStep::SynonymPlusClas],
        }
    }
}

/// Everything the cascade looked at for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnosis {
    pub class: VariationClass,
    pub indel: LemmaIndel,
    pub content_indel: LemmaIndel,
    pub accounting: AccountingResult,
    pub content_accounting: AccountingResult,
}

impl Diagnosis {
    /// Step-2 criterion regardless of where the pair finally landed.
    pub fn synonym_full(&self) -> bool {
        !self.indel.is_empty() && self.accounting.level == AccountingLevel::Full
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Classifier<'a> {
    pub lexicon: &'a SynonymLexicon,
    pub funcs: &'a FunctionalRelationSet,
    pub cascade: &'a Cascade,
}

impl<'a> Classifier<'a> {
    pub fn new(lexicon: &'a SynonymLexicon, funcs: &'a FunctionalRelationSet, cascade: &'a Cascade) -> Self {
        Classifier {
            lexicon,
            funcs,
            cascade,
        }
    }

    pub fn diagnose(&self, pair: &ParaphrasePair) -> Diagnosis {
        let indel = lemma_indel(pair, false, self.funcs);
        let content_indel = lemma_indel(pair, true, self.funcs);
        let accounting = account_indels(&indel, self.lexicon);
        let content_accounting = account_indels(&content_indel, self.lexicon);

        let class = if indel.is_empty() {
            zero_indel_subtype(pair).expect("indel is empty").into()
        } else {
            self.cascade
                .steps
                .iter()
                .find(|step| match step {
                    CascadeStep::Synonym => accounting.level == AccountingLevel::Full,
                    CascadeStep::Clas => content_indel.is_empty(),
                    CascadeStep::SynonymPlusClas => content_accounting.level == AccountingLevel::Full,
                })
                .map_or(VariationClass::Other, |s| s.class())
        };
        Diagnosis {
            class,
            indel,
            content_indel,
            accounting,
            content_accounting,
        }
    }

    pub fn classify(&self, pair: &ParaphrasePair) -> VariationClass {
        self.diagnose(pair).class
    }
}

/// Classifies one pair with the default cascade order.
pub fn classify(pair: &ParaphrasePair, lex: &SynonymLexicon, funcs: &FunctionalRelationSet) -> VariationClass {
    Classifier::new(lex, funcs, &Cascade::default()).classify(pair)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub total: usize,
    pub counts: BTreeMap<VariationClass, usize>,
    /// Nonzero-indel pairs whose full indel is synonym-accounted, counted
    /// before the cascade assigns classes.
    pub synonym_full_raw: usize,
}

impl ClassCounts {
    pub fn get(&self, class: VariationClass) -> usize {
        self.counts.get(&class).copied().unwrap_or(0)
    }
}

pub fn classify_corpus(
    pairs: &[ParaphrasePair],
    lex: &SynonymLexicon,
    funcs: &FunctionalRelationSet,
    group_filter: Option<LabelGroup>,
) -> ClassCounts {
    let cascade = Cascade::default();
    classify_corpus_with(
        &Classifier::new(lex, funcs, &cascade),
        pairs,
        group_filter,
        Exec::default(),
    )
}

pub fn classify_corpus_with(
    classifier: &Classifier<'_>,
    pairs: &[ParaphrasePair],
    group_filter: Option<LabelGroup>,
    exec: Exec,
) -> ClassCounts {
    let results = exec.filter_map(pairs, |p| {
        if group_filter.is_some_and(|g| p.group() != g) {
            return None;
        }
        let d = classifier.diagnose(p);
        Some((d.class, d.synonym_full()))
    });
    let mut counts: BTreeMap<VariationClass, usize> = VariationClass::ALL.iter().map(|&c| (c, 0)).collect();
    let mut synonym_full_raw = 0;
    for (class, raw) in &results {
        *counts.entry(*class).or_default() += 1;
        synonym_full_raw += usize::from(*raw);
    }
    ClassCounts {
        total: results.len(),
        counts,
        synonym_full_raw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture::{labeled_pair, pair, seg};
    use crate::corpus::{BaseLabel, PairLabel};
    use crate::synonymy::Provenance;

    fn lex(edges: &[(&str, &str)]) -> SynonymLexicon {
        let mut l = SynonymLexicon::new();
        for (a, b) in edges {
            l.insert(a, b, Provenance::EMBEDDING);
        }
        l
    }

    #[test]
    fn identical_sides() {
        let s = seg(&[("talo", "talo", "NOUN", "root")]);
        let p = pair("p", s.clone(), s);
        assert_eq!(
            classify(&p, &SynonymLexicon::new(), &FunctionalRelationSet::default()),
            VariationClass::SameLemmaSameOrder
        );
    }

    #[test]
    fn vasta_ammuttu_is_synonym() {
        let p = pair(
            "p",
            seg(&[
                ("Vasta", "vasta", "ADV", "advmod"),
                ("ammuttu", "ampua", "VERB", "root"),
            ]),
            seg(&[
                ("Ammuttu", "ampua", "VERB", "root"),
                ("hiljattain", "hiljattain", "ADV", "advmod"),
            ]),
        );
        let l = lex(&[("vasta", "hiljattain")]);
        assert_eq!(
            classify(&p, &l, &FunctionalRelationSet::default()),
            VariationClass::Synonym
        );
        assert_eq!(
            classify(&p, &SynonymLexicon::new(), &FunctionalRelationSet::default()),
            VariationClass::Other
        );
    }

    fn aux_plus_swap() -> ParaphrasePair {
        pair(
            "p",
            seg(&[("Hän", "hän", "PRON", "nsubj"), ("juoksi", "juosta", "VERB", "root")]),
            seg(&[
                ("Hän", "hän", "PRON", "nsubj"),
                ("on", "olla", "AUX", "aux"),
                ("kirmannut", "kirmata", "VERB", "root"),
            ]),
        )
    }

    #[test]
    fn aux_and_synonym_swap_is_synonym_plus_clas() {
        let l = lex(&[("juosta", "kirmata")]);
        let funcs = FunctionalRelationSet::default();
        assert_eq!(classify(&aux_plus_swap(), &l, &funcs), VariationClass::SynonymPlusClas);
        // without functional filtering the aux stays unexplained
        assert_eq!(
            classify(&aux_plus_swap(), &l, &FunctionalRelationSet::punct_only()),
            VariationClass::Other
        );
    }

    #[test]
    fn aux_only_is_clas() {
        let p = pair(
            "p",
            seg(&[("Hän", "hän", "PRON", "nsubj"), ("tuli", "tulla", "VERB", "root")]),
            seg(&[
                ("Hän", "hän", "PRON", "nsubj"),
                ("on", "olla", "AUX", "aux"),
                ("tullut", "tulla", "VERB", "root"),
            ]),
        );
        assert_eq!(
            classify(&p, &SynonymLexicon::new(), &FunctionalRelationSet::default()),
            VariationClass::Clas
        );
    }

    #[test]
    fn cascade_order_is_configurable() {
        // Explainable both by synonyms and by dropping the functional words.
        let p = pair(
            "p",
            seg(&[("x", "x", "NOUN", "root"), ("että", "että", "SCONJ", "mark")]),
            seg(&[("x", "x", "NOUN", "root"), ("jos", "jos", "SCONJ", "mark")]),
        );
        let l = lex(&[("että", "jos")]);
        let funcs = FunctionalRelationSet::default();
        assert_eq!(classify(&p, &l, &funcs), VariationClass::Synonym);
        let clas_first = Cascade {
            steps: vec![CascadeStep::Clas, CascadeStep::Synonym, CascadeStep::SynonymPlusClas],
        };
        assert_eq!(
            Classifier::new(&l, &funcs, &clas_first).classify(&p),
            VariationClass::Clas
        );
    }

    #[test]
    fn corpus_counts_by_group() {
        let s = |w: &str| seg(&[(w, w, "NOUN", "root")]);
        let pairs = vec![
            pair("a", s("x"), s("x")),
            pair("b", s("x"), s("y")),
            labeled_pair("c", s("x"), s("y"), PairLabel::plain(BaseLabel::Three)),
        ];
        let l = lex(&[("x", "y")]);
        let funcs = FunctionalRelationSet::default();
        let all = classify_corpus(&pairs, &l, &funcs, None);
        assert_eq!(all.total, 3);
        assert_eq!(all.get(VariationClass::Synonym), 2);
        assert_eq!(all.synonym_full_raw, 2);
        let uni = classify_corpus(&pairs, &l, &funcs, Some(LabelGroup::Universal));
        assert_eq!(uni.total, 2);
        assert_eq!(uni.counts.values().sum::<usize>(), 2);
        let empty = classify_corpus(&[], &l, &funcs, None);
        assert_eq!(empty.total, 0);
        assert_eq!(empty.counts.len(), 7);
        assert!(empty.counts.values().all(|&c| c == 0));
    }
}
