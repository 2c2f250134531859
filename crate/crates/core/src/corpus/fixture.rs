//! Builders for small in-memory pairs.
//!
//! Tokens are given as `(surface, lemma, upos, deprel)`. The first token is
//! the root and every other token attaches to it.

use std::collections::BTreeMap;

use super::{BaseLabel, PairLabel, ParaphrasePair, ParsedSegment, Sentence, Token};

pub fn tokens(words: &[(&str, &str, &str, &str)]) -> Vec<Token> {
    words
        .iter()
        .enumerate()
        .map(|(i, &(surface, lemma, upos, deprel))| Token {
            index: i + 1,
            surface: surface.to_owned(),
            lemma: lemma.to_owned(),
            upos: upos.to_owned(),
            feats: BTreeMap::new(),
            head: usize::from(i != 0),
            deprel: deprel.to_owned(),
        })
        .collect()
}

pub fn sentence(id: &str, words: &[(&str, &str, &str, &str)]) -> Sentence {
    let toks = tokens(words);
    let text = words.iter().map(|w| w.0).collect::<Vec<_>>().join(" ");
    Sentence::new(id, text, toks).expect("fixture sentence is well-formed")
}

/// A single-sentence segment with an empty sentence ID.
pub fn seg(words: &[(&str, &str, &str, &str)]) -> ParsedSegment {
    ParsedSegment::from_sentences(vec![sentence("", words)])
}

/// A universal (label 4) pair.
pub fn pair(id: &str, side1: ParsedSegment, side2: ParsedSegment) -> ParaphrasePair {
    labeled_pair(id, side1, side2, PairLabel::plain(BaseLabel::Four))
}

pub fn labeled_pair(id: &str, mut side1: ParsedSegment, mut side2: ParsedSegment, label: PairLabel) -> ParaphrasePair {
    for (side, seg) in [(1, &mut side1), (2, &mut side2)] {
        for (i, s) in seg.sentences.iter_mut().enumerate() {
            if s.id.is_empty() {
                s.id = format!("{id}.{side}.{i}");
            }
        }
    }
    ParaphrasePair {
        id: id.to_owned(),
        side1,
        side2,
        label,
    }
}
