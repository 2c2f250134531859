#![allow(dead_code)]

use paravar::corpus::fixture::{labeled_pair, sentence};
use paravar::corpus::{BaseLabel, LabelFlag, PairLabel, ParaphrasePair, ParsedSegment};
use proptest::prelude::*;

pub const LEMMAS: &[&str] = &[
    "talo",
    "iso",
    "olla",
    "juosta",
    "kirmata",
    "ei",
    "hän",
    "vasta",
    "hiljattain",
    "jää#kaappi",
];
pub const DEPRELS: &[&str] = &[
    "nsubj", "obj", "aux", "aux:pass", "case", "det", "mark", "advmod", "cop", "obl", "punct",
];
pub const UPOS: &[&str] = &["NOUN", "VERB", "AUX", "ADV", "PRON", "PUNCT", "ADJ"];

#[derive(Clone, Debug)]
pub struct Word {
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub deprel: String,
}

pub fn word() -> impl Strategy<Value = Word> {
    (
        0..LEMMAS.len(),
        0..UPOS.len(),
        0..DEPRELS.len(),
        prop_oneof![Just(""), Just("ssa"), Just("n"), Just("X")],
    )
        .prop_map(|(l, u, d, suffix)| {
            let lemma = LEMMAS[l].to_owned();
            let base = lemma.replace('#', "");
            let surface = if suffix == "X" {
                let mut c = base.chars();
                let first = c.next().unwrap().to_uppercase().collect::<String>();
                first + c.as_str()
            } else {
                format!("{base}{suffix}")
            };
            Word {
                surface,
                lemma,
                upos: UPOS[u].to_owned(),
                deprel: DEPRELS[d].to_owned(),
            }
        })
}

pub fn words(max: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(word(), 1..=max)
}

pub fn segment(id: &str, ws: &[Word]) -> ParsedSegment {
    let tuples: Vec<(&str, &str, &str, &str)> = ws
        .iter()
        .map(|w| (w.surface.as_str(), w.lemma.as_str(), w.upos.as_str(), w.deprel.as_str()))
        .collect();
    ParsedSegment::from_sentences(vec![sentence(id, &tuples)])
}

pub fn label() -> impl Strategy<Value = PairLabel> {
    prop_oneof![
        Just(PairLabel::plain(BaseLabel::Four)),
        Just(PairLabel::new(BaseLabel::Four, [LabelFlag::Style]).unwrap()),
        Just(PairLabel::new(BaseLabel::Four, [LabelFlag::Inflection]).unwrap()),
        Just(PairLabel::new(BaseLabel::Four, [LabelFlag::DirLeft, LabelFlag::Style]).unwrap()),
        Just(PairLabel::new(BaseLabel::Four, [LabelFlag::DirRight]).unwrap()),
        Just(PairLabel::plain(BaseLabel::Three)),
        Just(PairLabel::plain(BaseLabel::Two)),
        Just(PairLabel::plain(BaseLabel::Rewrite)),
    ]
}

pub fn pair_strategy(max: usize) -> impl Strategy<Value = ParaphrasePair> {
    (words(max), words(max), label()).prop_map(|(a, b, l)| labeled_pair("p", segment("p.1", &a), segment("p.2", &b), l))
}

pub fn corpus_strategy(max_pairs: usize) -> impl Strategy<Value = Vec<ParaphrasePair>> {
    prop::collection::vec((words(6), words(6), label()), 0..=max_pairs).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (a, b, l))| {
                let id = format!("p{i}");
                labeled_pair(&id, segment(&format!("{id}a"), &a), segment(&format!("{id}b"), &b), l)
            })
            .collect()
    })
}

/// Multiset difference by merging two sorted lists.
pub fn sorted_diff(mut a: Vec<String>, mut b: Vec<String>) -> (Vec<String>, Vec<String>) {
    a.sort();
    b.sort();
    let (mut i, mut j) = (0, 0);
    let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            only_a.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            only_b.push(b[j].clone());
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    (only_a, only_b)
}

/// Size of a maximum matching found by trying every assignment.
pub fn brute_force_matching(adj: &[Vec<bool>]) -> usize {
    fn go(i: usize, adj: &[Vec<bool>], used: &mut Vec<bool>) -> usize {
        if i == adj.len() {
            return 0;
        }
        let mut best = go(i + 1, adj, used);
        for j in 0..used.len() {
            if adj[i][j] && !used[j] {
                used[j] = true;
                best = best.max(1 + go(i + 1, adj, used));
                used[j] = false;
            }
        }
        best
    }
    let right = adj.first().map_or(0, Vec::len);
    go(0, adj, &mut vec![false; right])
}
