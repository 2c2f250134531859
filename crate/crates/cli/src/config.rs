//! Run configuration: a TOML file merged with command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use paravar::classifier::{Cascade, CascadeStep};
use paravar::corpus::LabelGroup;
use paravar::pivot::NormalizeMode;
use paravar::stats::DEFAULT_MIN_TOTAL;
use paravar::synonymy::{LexiconConfig, SynonymDirection, DEFAULT_K};
use paravar::variation::DEFAULT_FUNCTIONAL_RELATIONS;
use paravar::FunctionalRelationSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("{0} is not configured")]
    Missing(&'static str),
    #[error("{what} {path} does not exist")]
    NotFound { what: &'static str, path: PathBuf },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GroupFilter {
    All,
    #[default]
    Universal,
    ContextDependent,
    RelatedNotParaphrase,
}

impl GroupFilter {
    pub fn group(self) -> Option<LabelGroup> {
        match self {
            GroupFilter::All => None,
            GroupFilter::Universal => Some(LabelGroup::Universal),
            GroupFilter::ContextDependent => Some(LabelGroup::ContextDependent),
            GroupFilter::RelatedNotParaphrase => Some(LabelGroup::RelatedNotParaphrase),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FrequencySource {
    /// Count lemma totals over the analyzed pairs.
    #[default]
    Pairs,
    /// Read lemma totals from `frequency_list`.
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub conllu: Option<PathBuf>,

    pub lexicon: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    pub save_lexicon: Option<PathBuf>,
    pub k: usize,
    pub min_similarity: Option<f32>,
    pub restrict_vocab: Option<usize>,
    pub synonym_direction: SynonymDirection,

    pub functional_relations: Vec<String>,
    pub cascade: Vec<CascadeStep>,
    pub group: GroupFilter,

    pub min_total: usize,
    pub top_n: Option<usize>,
    pub frequency_source: FrequencySource,
    pub frequency_list: Option<PathBuf>,
    pub source_text: Vec<PathBuf>,

    pub parallel_source: Option<PathBuf>,
    pub parallel_target: Option<PathBuf>,
    pub normalize: NormalizeMode,

    pub sample_size: usize,
    pub seed: u64,
    pub sample_file: Option<PathBuf>,
    pub annotation_store: Option<PathBuf>,

    pub out_dir: PathBuf,
    pub host: String,
    pub port: u16,
    pub ui_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sequential: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifest: None,
            conllu: None,
            lexicon: None,
            embeddings: None,
            wordnet: None,
            save_lexicon: None,
            k: DEFAULT_K,
            min_similarity: None,
            restrict_vocab: None,
            synonym_direction: SynonymDirection::Either,
            functional_relations: DEFAULT_FUNCTIONAL_RELATIONS.iter().map(|s| s.to_string()).collect(),
            cascade: Cascade::default().steps,
            group: GroupFilter::Universal,
            min_total: DEFAULT_MIN_TOTAL,
            top_n: Some(10),
            frequency_source: FrequencySource::Pairs,
            frequency_list: None,
            source_text: Vec::new(),
            parallel_source: None,
            parallel_target: None,
            normalize: NormalizeMode::Strict,
            sample_size: 100,
            seed: 0,
            sample_file: None,
            annotation_store: None,
            out_dir: PathBuf::from("out"),
            host: "127.0.0.1".into(),
            port: 8080,
            ui_dir: None,
            threads: None,
            sequential: false,
        }
    }
}

fn parse_direction(s: &str) -> Result<SynonymDirection, String> {
    match s {
        "either" => Ok(SynonymDirection::Either),
        "forward" => Ok(SynonymDirection::Forward),
        other => Err(format!("expected either or forward, got {other:?}")),
    }
}

/// Flags that override config file values.
#[derive(Clone, Debug, Default, Args)]
pub struct Overrides {
    /// TOML config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Pair manifest TSV.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// CoNLL-U file with the parsed sentences.
    #[arg(long, global = true)]
    pub conllu: Option<PathBuf>,
    /// Precomputed synonym lexicon TSV.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    /// word2vec embeddings (text or binary).
    #[arg(long, global = true)]
    pub embeddings: Option<PathBuf>,
    /// Two-column TSV of wordnet synonym pairs.
    #[arg(long, global = true)]
    pub wordnet: Option<PathBuf>,
    /// Write the lexicon built from embeddings and wordnet to this file.
    #[arg(long, global = true)]
    pub save_lexicon: Option<PathBuf>,
    /// Embedding neighbours per lemma [default: 15].
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// How lexicon edges are consulted: `either` (default) or `forward`.
    #[arg(long, global = true, value_parser = parse_direction)]
    pub synonym_direction: Option<SynonymDirection>,
    /// Drop embedding neighbours below this cosine similarity.
    #[arg(long, global = true)]
    pub min_similarity: Option<f32>,
    /// Search only the first N embedding rows.
    #[arg(long, global = true)]
    pub restrict_vocab: Option<usize>,
    /// Comma-separated dependency relations treated as functional.
    #[arg(long, global = true, value_delimiter = ',')]
    pub functional_relations: Option<Vec<String>>,
    /// Comma-separated cascade order, e.g. synonym,clas,synonym_plus_clas.
    #[arg(long, global = true, value_delimiter = ',')]
    pub cascade: Option<Vec<String>>,
    /// Label group to analyze [default: universal].
    #[arg(long, global = true, value_enum)]
    pub group: Option<GroupFilter>,
    /// Minimum corpus frequency for a lemma to be ranked [default: 50].
    #[arg(long, global = true)]
    pub min_total: Option<usize>,
    /// Number of ranked lemmas to report; 0 reports all.
    #[arg(long, global = true)]
    pub top_n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub frequency_source: Option<FrequencySource>,
    /// Two-column `lemma<TAB>count` file for the external basis.
    #[arg(long, global = true)]
    pub frequency_list: Option<PathBuf>,
    /// Source subtitle text for the proportion report; repeatable.
    #[arg(long, global = true)]
    pub source_text: Vec<PathBuf>,
    /// Source-language side of the aligned corpus.
    #[arg(long, global = true)]
    pub parallel_source: Option<PathBuf>,
    /// Target-language side of the aligned corpus.
    #[arg(long, global = true)]
    pub parallel_target: Option<PathBuf>,
    /// Keep single spaces between words when normalizing pivot keys.
    #[arg(long, global = true)]
    pub collapse_whitespace: bool,
    /// Pairs to draw for annotation [default: 100].
    #[arg(long, global = true)]
    pub sample_size: Option<usize>,
    /// Sampling seed [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sample ID list [default: OUT_DIR/sample.txt].
    #[arg(long, global = true)]
    pub sample_file: Option<PathBuf>,
    /// Annotation journal [default: OUT_DIR/annotations.jsonl].
    #[arg(long, global = true)]
    pub annotation_store: Option<PathBuf>,
    /// Report directory [default: out].
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Service address [default: 127.0.0.1].
    #[arg(long, global = true)]
    pub host: Option<String>,
    /// Service port [default: 8080].
    #[arg(long, global = true)]
    pub port: Option<u16>,
    /// Directory of built web UI assets to serve at `/`.
    #[arg(long, global = true)]
    pub ui_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of processors.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// Loads the config file named in `overrides`, if any, and applies the
    /// flags on top.
    pub fn resolve(overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut config = match &overrides.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
                    path: path.clone(),
                    source,
                })?;
                let mut c = Self::from_toml(&text, path)?;
                c.rebase(path.parent().unwrap_or(Path::new("")));
                c
            }
            None => RunConfig::default(),
        };
        config.apply(overrides)?;
        Ok(config)
    }

    /// Makes relative paths from a config file relative to its directory.
    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.manifest,
            &mut self.conllu,
            &mut self.lexicon,
            &mut self.embeddings,
            &mut self.wordnet,
            &mut self.save_lexicon,
            &mut self.frequency_list,
            &mut self.parallel_source,
            &mut self.parallel_target,
            &mut self.sample_file,
            &mut self.annotation_store,
            &mut self.ui_dir,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        self.source_text.iter_mut().for_each(fix);
        fix(&mut self.out_dir);
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        fn set<T: Clone>(slot: &mut Option<T>, value: &Option<T>) {
            if value.is_some() {
                slot.clone_from(value);
            }
        }
        set(&mut self.manifest, &o.manifest);
        set(&mut self.conllu, &o.conllu);
        set(&mut self.lexicon, &o.lexicon);
        set(&mut self.embeddings, &o.embeddings);
        set(&mut self.wordnet, &o.wordnet);
        set(&mut self.save_lexicon, &o.save_lexicon);
        set(&mut self.min_similarity, &o.min_similarity);
        set(&mut self.restrict_vocab, &o.restrict_vocab);
        set(&mut self.frequency_list, &o.frequency_list);
        set(&mut self.parallel_source, &o.parallel_source);
        set(&mut self.parallel_target, &o.parallel_target);
        set(&mut self.sample_file, &o.sample_file);
        set(&mut self.annotation_store, &o.annotation_store);
        set(&mut self.ui_dir, &o.ui_dir);
        set(&mut self.threads, &o.threads);
        if let Some(k) = o.k {
            self.k = k;
        }
        if let Some(d) = o.synonym_direction {
            self.synonym_direction = d;
        }
        if let Some(r) = &o.functional_relations {
            self.functional_relations.clone_from(r);
        }
        if let Some(steps) = &o.cascade {
            self.cascade = steps
                .iter()
                .map(|s| s.parse::<CascadeStep>())
                .collect::<Result<_, _>>()
                .map_err(ConfigError::Invalid)?;
        }
        if let Some(g) = o.group {
            self.group = g;
        }
        if let Some(m) = o.min_total {
            self.min_total = m;
        }
        if let Some(n) = o.top_n {
            self.top_n = (n > 0).then_some(n);
        }
        if let Some(f) = o.frequency_source {
            self.frequency_source = f;
        }
        if !o.source_text.is_empty() {
            self.source_text.clone_from(&o.source_text);
        }
        if o.collapse_whitespace {
            self.normalize = NormalizeMode::CollapseWhitespace;
        }
        if let Some(n) = o.sample_size {
            self.sample_size = n;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(d) = &o.out_dir {
            self.out_dir.clone_from(d);
        }
        if let Some(h) = &o.host {
            self.host.clone_from(h);
        }
        if let Some(p) = o.port {
            self.port = p;
        }
        self.sequential |= o.sequential;
        Ok(())
    }

    /// Checks value ranges and that every configured input file exists.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k == 0 {
            return Err(ConfigError::Invalid("k must be at least 1".into()));
        }
        if self.min_total == 0 {
            return Err(ConfigError::Invalid("min_total must be at least 1".into()));
        }
        if self.sample_size == 0 {
            return Err(ConfigError::Invalid("sample_size must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Invalid("threads must be at least 1".into()));
        }
        if self.cascade.is_empty() {
            return Err(ConfigError::Invalid("cascade needs at least one step".into()));
        }
        if let Some(s) = self.min_similarity {
            if !(-1.0..=1.0).contains(&s) {
                return Err(ConfigError::Invalid("min_similarity must be within [-1, 1]".into()));
            }
        }
        self.funcs()?;
        let inputs = [
            ("manifest", &self.manifest),
            ("conllu", &self.conllu),
            ("lexicon", &self.lexicon),
            ("embeddings", &self.embeddings),
            ("wordnet", &self.wordnet),
            ("frequency_list", &self.frequency_list),
            ("parallel_source", &self.parallel_source),
            ("parallel_target", &self.parallel_target),
            ("ui_dir", &self.ui_dir),
        ];
        for (what, path) in inputs {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(ConfigError::NotFound { what, path: p.clone() });
                }
            }
        }
        for p in &self.source_text {
            if !p.exists() {
                return Err(ConfigError::NotFound {
                    what: "source_text",
                    path: p.clone(),
                });
            }
        }
        if self.frequency_source == FrequencySource::External && self.frequency_list.is_none() {
            return Err(ConfigError::Missing("frequency_list"));
        }
        Ok(())
    }

    pub fn funcs(&self) -> Result<FunctionalRelationSet, ConfigError> {
        FunctionalRelationSet::new(self.functional_relations.iter().map(String::as_str))
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn cascade(&self) -> Cascade {
        Cascade {
            steps: self.cascade.clone(),
        }
    }

    pub fn lexicon_config(&self) -> LexiconConfig {
        LexiconConfig {
            k: self.k,
            min_similarity: self.min_similarity,
            restrict_vocab: self.restrict_vocab,
            direction: self.synonym_direction,
        }
    }

    pub fn require<'a>(&self, what: &'static str, value: &'a Option<PathBuf>) -> Result<&'a Path, ConfigError> {
        value.as_deref().ok_or(ConfigError::Missing(what))
    }

    pub fn has_lexicon_source(&self) -> bool {
        self.lexicon.is_some() || self.embeddings.is_some() || self.wordnet.is_some()
    }

    /// The config as hashed into report provenance. Settings that only
    /// affect how the work is scheduled or served are left out so that,
    /// e.g., sequential and parallel runs produce identical reports.
    pub fn fingerprint(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            for key in ["out_dir", "host", "port", "ui_dir", "threads", "sequential"] {
                map.remove(key);
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_defaults_and_unknown_keys() {
        let c = RunConfig::from_toml(
            "k = 5\ngroup = \"all\"\ncascade = [\"clas\", \"synonym\"]\n",
            Path::new("x"),
        )
        .unwrap();
        assert_eq!(c.k, 5);
        assert_eq!(c.group, GroupFilter::All);
        assert_eq!(c.cascade, [CascadeStep::Clas, CascadeStep::Synonym]);
        assert_eq!(c.min_total, DEFAULT_MIN_TOTAL);
        assert!(RunConfig::from_toml("kay = 5\n", Path::new("x")).is_err());
    }

    #[test]
    fn flags_win() {
        let mut c = RunConfig::from_toml("k = 5\nmin_total = 7\n", Path::new("x")).unwrap();
        let o = Overrides {
            k: Some(9),
            top_n: Some(0),
            cascade: Some(vec!["synonym_plus_clas".into()]),
            ..Default::default()
        };
        c.apply(&o).unwrap();
        assert_eq!((c.k, c.min_total, c.top_n), (9, 7, None));
        assert_eq!(c.cascade, [CascadeStep::SynonymPlusClas]);

        let bad = Overrides {
            cascade: Some(vec!["nope".into()]),
            ..Default::default()
        };
        assert!(c.apply(&bad).is_err());
    }

    #[test]
    fn validation() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            RunConfig {
                k: 0,
                ..RunConfig::default()
            },
            RunConfig {
                min_total: 0,
                ..RunConfig::default()
            },
            RunConfig {
                manifest: Some("/definitely/missing".into()),
                ..RunConfig::default()
            },
            RunConfig {
                functional_relations: vec!["aux".into()],
                ..RunConfig::default()
            },
            RunConfig {
                frequency_source: FrequencySource::External,
                ..RunConfig::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn fingerprint_ignores_scheduling() {
        let a = RunConfig::default();
        let b = RunConfig {
            threads: Some(3),
            sequential: true,
            out_dir: "elsewhere".into(),
            ..RunConfig::default()
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = RunConfig {
            k: 3,
            ..RunConfig::default()
        };
        assert_ne!(a.fingerprint(), c.fingerprint());
    }
}
