//! The subcommands. Each one loads its inputs, runs the analysis and writes
//! its reports, returning the paths it wrote.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use paravar::annotation::{category_frequencies, sample_unexplained_with, AnnotationStore, ManualCategory};
use paravar::classifier::classify_corpus_with;
use paravar::corpus::{filter_group, label_distribution, load_corpus, LabelGroup, ParaphrasePair};
use paravar::exec::Exec;
use paravar::pivot::{build_index_from_files, match_pairs_with};
use paravar::stats::{
    accounting_rates_with, indel_histogram_with, mean_token_length, nonelementary_proportion, overrepresentation_with,
    read_frequency_list, FrequencyBasis,
};
use paravar::synonymy::{read_wordnet_pairs, EmbeddingTable};
use paravar::variation::normalize_lemma;
use paravar::{build_lexicon, Classifier, SynonymLexicon, VariationClass};
use serde::Serialize;
use serde_json::json;

use crate::config::{FrequencySource, RunConfig};
use crate::error::InputResult;
use crate::report::{fixed, histogram_svg, OutDir, Provenance};

pub fn exec(config: &RunConfig) -> Exec {
    if config.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

pub fn load_pairs(config: &RunConfig, prov: &mut Provenance) -> Result<Vec<ParaphrasePair>> {
    let manifest = config.require("manifest", &config.manifest).input("corpus")?;
    let conllu = config.require("conllu", &config.conllu).input("corpus")?;
    let pairs = load_corpus(manifest, conllu).input("cannot load corpus")?;
    prov.add("manifest", manifest)?;
    prov.add("conllu", conllu)?;
    Ok(pairs)
}

/// Lemmas of every non-punctuation token in the corpus, the vocabulary the
/// lexicon is built for.
pub fn corpus_vocabulary(pairs: &[ParaphrasePair]) -> Vec<String> {
    let mut vocab: Vec<String> = pairs
        .iter()
        .flat_map(|p| p.side1.content_tokens().chain(p.side2.content_tokens()))
        .map(|t| normalize_lemma(&t.lemma).into_owned())
        .collect();
    vocab.sort_unstable();
    vocab.dedup();
    vocab
}

/// Reads a precomputed lexicon, or builds one from embeddings and wordnet.
/// Returns `None` when no lexicon resource is configured.
pub fn load_lexicon(
    config: &RunConfig,
    pairs: &[ParaphrasePair],
    prov: &mut Provenance,
) -> Result<Option<SynonymLexicon>> {
    if let Some(path) = &config.lexicon {
        let file = File::open(path).input(format!("cannot open lexicon {}", path.display()))?;
        let lex = SynonymLexicon::read_tsv(BufReader::new(file))
            .input(format!("cannot read lexicon {}", path.display()))?
            .with_direction(config.synonym_direction);
        prov.add("lexicon", path)?;
        return Ok(Some(lex));
    }
    if config.embeddings.is_none() && config.wordnet.is_none() {
        return Ok(None);
    }
    let table = match &config.embeddings {
        Some(path) => {
            let t = EmbeddingTable::read_path(path).input(format!("cannot read embeddings {}", path.display()))?;
            prov.add("embeddings", path)?;
            t
        }
        None => EmbeddingTable::new(1),
    };
    let wordnet = match &config.wordnet {
        Some(path) => {
            let file = File::open(path).input(format!("cannot open wordnet {}", path.display()))?;
            let pairs =
                read_wordnet_pairs(BufReader::new(file)).input(format!("cannot read wordnet {}", path.display()))?;
            prov.add("wordnet", path)?;
            pairs
        }
        None => Vec::new(),
    };
    let vocab = corpus_vocabulary(pairs);
    let lex = build_lexicon(
        &table,
        &wordnet,
        &config.lexicon_config(),
        vocab.iter().map(String::as_str),
        exec(config),
    );
    if let Some(path) = &config.save_lexicon {
        let mut out = BufWriter::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?);
        lex.write_tsv(&mut out)?;
        out.flush()?;
    }
    Ok(Some(lex))
}

fn require_lexicon(config: &RunConfig, pairs: &[ParaphrasePair], prov: &mut Provenance) -> Result<SynonymLexicon> {
    load_lexicon(config, pairs, prov)?
        .ok_or_else(|| anyhow::anyhow!("no lexicon, embeddings or wordnet configured"))
        .input("synonym lexicon")
}

fn group_name(group: Option<LabelGroup>) -> &'static str {
    group.map_or("all", LabelGroup::as_str)
}

pub fn cmd_classify(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("classify", config);
    let pairs = load_pairs(config, &mut prov)?;
    let lex = require_lexicon(config, &pairs, &mut prov)?;
    let funcs = config.funcs().input("config")?;
    let cascade = config.cascade();
    let classifier = Classifier::new(&lex, &funcs, &cascade);
    let group = config.group.group();
    let exec = exec(config);

    let counts = classify_corpus_with(&classifier, &pairs, group, exec);
    let selected = filter_group(&pairs, group);
    let per_pair = exec.map(&selected, |p| {
        let d = classifier.diagnose(p);
        (d.class, d.indel.len(), d.content_indel.len())
    });

    let mut out = OutDir::create(&config.out_dir)?;
    out.csv(
        "table3.csv",
        &["class", "count"],
        VariationClass::ALL
            .iter()
            .map(|&c| [c.as_str().to_owned(), counts.get(c).to_string()])
            .chain([["total".to_owned(), counts.total.to_string()]]),
    )?;
    out.csv(
        "pair_classes.csv",
        &["pair_id", "label", "class", "indel_count", "content_indel_count"],
        selected.iter().zip(&per_pair).map(|(p, (class, n, cn))| {
            [
                p.id.clone(),
                p.label.to_string(),
                class.to_string(),
                n.to_string(),
                cn.to_string(),
            ]
        }),
    )?;
    out.json(
        "table3.json",
        &prov,
        &json!({
            "group": group_name(group),
            "cascade": cascade.steps,
            "total": counts.total,
            "counts": counts.counts,
            "synonym_full_raw": counts.synonym_full_raw,
            "lexicon": { "entries": lex.entry_count(), "edges": lex.edge_count() },
        }),
    )?;
    Ok(out.written().to_vec())
}

#[derive(Serialize)]
struct RankedRow {
    rank: usize,
    lemma: String,
    ratio: f64,
    indel_occurrences: usize,
    total_occurrences: usize,
}

pub fn cmd_stats(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("stats", config);
    let pairs = load_pairs(config, &mut prov)?;
    let lex = load_lexicon(config, &pairs, &mut prov)?;
    let group = config.group.group();
    let exec = exec(config);
    let selected = filter_group(&pairs, group);

    let hist = indel_histogram_with(&selected, None, exec);

    let external = match config.frequency_source {
        FrequencySource::External => {
            let path = config
                .require("frequency_list", &config.frequency_list)
                .input("config")?;
            let file = File::open(path).input(format!("cannot open {}", path.display()))?;
            let freq = read_frequency_list(BufReader::new(file)).input(format!("cannot read {}", path.display()))?;
            prov.add("frequency_list", path)?;
            Some(freq)
        }
        FrequencySource::Pairs => None,
    };
    let basis = external
        .as_ref()
        .map_or(FrequencyBasis::PairTexts, FrequencyBasis::External);
    let ranked = overrepresentation_with(&selected, config.min_total, config.top_n, basis, exec).input("config")?;

    let accounting = lex.as_ref().map(|lex| accounting_rates_with(&selected, lex, exec));

    let proportion = if config.source_text.is_empty() {
        None
    } else {
        let mut sources = Vec::new();
        for path in &config.source_text {
            sources.push(fs::read_to_string(path).input(format!("cannot read {}", path.display()))?);
            prov.add("source_text", path)?;
        }
        let texts: Vec<&str> = selected
            .iter()
            .flat_map(|p| [p.side1.text.as_str(), p.side2.text.as_str()])
            .collect();
        Some(nonelementary_proportion(&texts, &sources).input("source text")?)
    };

    let segments = || selected.iter().flat_map(|p| [&p.side1, &p.side2]);
    let mean_len = mean_token_length(segments());

    let mut out = OutDir::create(&config.out_dir)?;
    out.csv(
        "indel_histogram.csv",
        &["indel_count", "pairs"],
        hist.iter().map(|(k, v)| [k.to_string(), v.to_string()]),
    )?;
    out.text(
        "indel_histogram.svg",
        &histogram_svg(&hist, &format!("Lemma indels per pair ({})", group_name(group))),
    )?;
    out.csv(
        "overrepresentation.csv",
        &["rank", "lemma", "ratio", "indel_occurrences", "total_occurrences"],
        ranked.iter().enumerate().map(|(i, r)| {
            [
                (i + 1).to_string(),
                r.lemma.clone(),
                fixed(r.ratio),
                r.indel_occurrences.to_string(),
                r.total_occurrences.to_string(),
            ]
        }),
    )?;
    if let Some(a) = &accounting {
        out.csv(
            "accounting.csv",
            &["level", "pairs"],
            [("full", a.full), ("partial", a.partial), ("none", a.none)]
                .iter()
                .map(|(l, n)| [l.to_string(), n.to_string()]),
        )?;
    }
    let ranked_rows: Vec<RankedRow> = ranked
        .iter()
        .enumerate()
        .map(|(i, r)| RankedRow {
            rank: i + 1,
            lemma: r.lemma.clone(),
            ratio: r.ratio,
            indel_occurrences: r.indel_occurrences,
            total_occurrences: r.total_occurrences,
        })
        .collect();
    let hist_json: BTreeMap<String, usize> = hist.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    out.json(
        "stats.json",
        &prov,
        &json!({
            "group": group_name(group),
            "pairs": selected.len(),
            "indel_histogram": hist_json,
            "overrepresentation": {
                "min_total": config.min_total,
                "top_n": config.top_n,
                "basis": config.frequency_source,
                "ranked": ranked_rows,
            },
            "accounting": accounting.map(|a| json!({
                "pairs_with_indels": a.total(),
                "full": a.full,
                "partial": a.partial,
                "none": a.none,
            })),
            "nonelementary_proportion": proportion,
            "lengths": {
                "segments": segments().count(),
                "mean_tokens_per_segment": mean_len,
            },
        }),
    )?;
    Ok(out.written().to_vec())
}

pub fn cmd_pivot(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("pivot", config);
    let pairs = load_pairs(config, &mut prov)?;
    let source = config
        .require("parallel_source", &config.parallel_source)
        .input("pivot")?;
    let target = config
        .require("parallel_target", &config.parallel_target)
        .input("pivot")?;
    let index = build_index_from_files(source, target, config.normalize).input("aligned corpus")?;
    prov.add("parallel_source", source)?;
    prov.add("parallel_target", target)?;

    // Pivoting looks at every pair regardless of the group filter; rewrites
    // are excluded by match_pairs itself.
    let report = match_pairs_with(&pairs, &index, exec(config));

    let mut out = OutDir::create(&config.out_dir)?;
    let mut ids = report.matched.join("\n");
    if !ids.is_empty() {
        ids.push('\n');
    }
    out.text("pivot_matched.txt", &ids)?;
    out.json(
        "pivot_stats.json",
        &prov,
        &json!({
            "normalize": index.mode(),
            "aligned_lines": index.line_count(),
            "distinct_targets": index.key_count(),
            "distinct_sources": index.source_count(),
            "considered": report.considered,
            "matched": report.matched.len(),
            "match_rate": report.match_rate,
            "mean_length_matched": report.mean_length_matched,
            "mean_length_all": report.mean_length_all,
        }),
    )?;
    Ok(out.written().to_vec())
}

pub fn default_sample_file(config: &RunConfig) -> PathBuf {
    config
        .sample_file
        .clone()
        .unwrap_or_else(|| config.out_dir.join("sample.txt"))
}

pub fn default_store(config: &RunConfig) -> PathBuf {
    config
        .annotation_store
        .clone()
        .unwrap_or_else(|| config.out_dir.join("annotations.jsonl"))
}

/// Draws the annotation sample. Returns the pair IDs in draw order and the
/// number of eligible pairs.
pub fn draw_sample(config: &RunConfig, pairs: &[ParaphrasePair], lex: &SynonymLexicon) -> Result<(Vec<String>, usize)> {
    let funcs = config.funcs().input("config")?;
    let cascade = config.cascade();
    let classifier = Classifier::new(lex, &funcs, &cascade);
    let group = config.group.group();
    let exec = exec(config);
    let eligible = classify_corpus_with(&classifier, pairs, group, exec).get(VariationClass::Other);
    let sample = sample_unexplained_with(&classifier, pairs, group, config.sample_size, config.seed, exec)
        .input("cannot draw sample")?;
    Ok((sample.into_iter().map(|p| p.id.clone()).collect(), eligible))
}

pub fn cmd_sample(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("sample", config);
    let pairs = load_pairs(config, &mut prov)?;
    let lex = require_lexicon(config, &pairs, &mut prov)?;
    let (ids, eligible) = draw_sample(config, &pairs, &lex)?;

    let mut out = OutDir::create(&config.out_dir)?;
    let sample_path = default_sample_file(config);
    write_sample(&sample_path, &ids)?;
    out.json(
        "sample.json",
        &prov,
        &json!({
            "group": group_name(config.group.group()),
            "seed": config.seed,
            "requested": config.sample_size,
            "eligible": eligible,
            "pair_ids": ids,
        }),
    )?;
    let mut written = vec![sample_path];
    written.extend_from_slice(out.written());
    Ok(written)
}

pub fn write_sample(path: &Path, ids: &[String]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = ids.join("\n");
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_sample(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).input(format!("cannot read sample {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}

pub fn cmd_report(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("report", config);
    let pairs = load_pairs(config, &mut prov)?;
    let dist = label_distribution(&pairs);

    let store_path = default_store(config);
    let annotations = if store_path.exists() {
        let sample = match &config.sample_file {
            Some(p) => read_sample(p)?,
            None => Vec::new(),
        };
        let store = AnnotationStore::open(&store_path, sample).input("annotation store")?;
        prov.add("annotation_store", &store_path)?;
        let records: Vec<_> = store.records().cloned().collect();
        Some(records)
    } else {
        None
    };

    let mut out = OutDir::create(&config.out_dir)?;
    out.csv(
        "label_distribution.csv",
        &["label", "group", "pairs"],
        dist.labels.iter().map(|(label, n)| {
            let group = pairs
                .iter()
                .find(|p| &p.label.to_string() == label)
                .map_or("", |p| p.group().as_str());
            [label.clone(), group.to_owned(), n.to_string()]
        }),
    )?;

    let frequencies = annotations.as_ref().map(|records| {
        let table = category_frequencies(records);
        let sole = paravar::annotation::sole_category_rate(records, ManualCategory::WordToWord);
        (table, sole)
    });
    if let Some((table, _)) = &frequencies {
        out.csv(
            "annotation_frequencies.csv",
            &["category", "title", "count", "ratio", "percent"],
            table.rows.iter().map(|r| {
                [
                    r.category.as_str().to_owned(),
                    r.category.title().to_owned(),
                    r.count.to_string(),
                    fixed(r.ratio),
                    format!("{:.0}", r.ratio * 100.0),
                ]
            }),
        )?;
    }
    out.json(
        "report.json",
        &prov,
        &json!({
            "label_distribution": dist,
            "annotations": frequencies.map(|(table, sole)| json!({
                "records": table.records,
                "assignments": table.assignments,
                "categories": table.rows,
                "sole_word_to_word_rate": sole,
            })),
        }),
    )?;
    Ok(out.written().to_vec())
}
