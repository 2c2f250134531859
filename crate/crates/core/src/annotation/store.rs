use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    category_frequencies, sole_category_rate, AnnotationError, AnnotationRecord, FrequencyTable, ManualCategory,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acknowledgement {
    pub pair_id: String,
    pub annotator: String,
    /// Whether an earlier record by the same annotator was overwritten.
    pub replaced: bool,
    pub records: usize,
}

/// Annotation records for an active sample, optionally backed by an
/// append-only JSON-lines journal.
///
/// The journal is replayed on open with last-write-wins per
/// `(pair_id, annotator)`. Writers need `&mut self`; callers sharing a store
/// across threads wrap it in a lock.
#[derive(Debug)]
pub struct AnnotationStore {
    sample: Vec<String>,
    sample_set: HashSet<String>,
    records: BTreeMap<(String, String), AnnotationRecord>,
    journal: Option<(PathBuf, File)>,
}

impl AnnotationStore {
    pub fn in_memory(sample: Vec<String>) -> Self {
        AnnotationStore {
            sample_set: sample.iter().cloned().collect(),
            sample,
            records: BTreeMap::new(),
            journal: None,
        }
    }

    /// Opens (creating if needed) the journal at `path` and replays it.
    ///
    /// A final line that does not parse is treated as a write interrupted by
    /// a crash and ignored; any other bad line is an error.
    pub fn open(path: &Path, sample: Vec<String>) -> Result<Self, AnnotationError> {
        let mut store = AnnotationStore::in_memory(sample);
        if path.exists() {
            let text = fs::read_to_string(path)?;
            let lines: Vec<&str> = text.lines().collect();
            let last = lines.iter().rposition(|l| !l.trim().is_empty());
            let mut torn = false;
            for (i, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<AnnotationRecord>(line) {
                    Ok(r) if r.categories.is_empty() => {
                        return Err(AnnotationError::Journal {
                            line: i + 1,
                            message: "record without categories".into(),
                        })
                    }
                    Ok(r) => {
                        store.records.insert((r.pair_id.clone(), r.annotator.clone()), r);
                    }
                    Err(_) if Some(i) == last => torn = true,
                    Err(e) => {
                        return Err(AnnotationError::Journal {
                            line: i + 1,
                            message: e.to_string(),
                        })
                    }
                }
            }
            if torn || !(text.is_empty() || text.ends_with('\n')) {
                // Drop the partial line so later appends start on a fresh one.
                let keep = &lines[..last.map_or(0, |l| l + usize::from(!torn))];
                let mut clean = keep.join("\n");
                if !clean.is_empty() {
                    clean.push('\n');
                }
                let tmp = path.with_extension("tmp");
                fs::write(&tmp, clean)?;
                fs::rename(&tmp, path)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        store.journal = Some((path.to_owned(), file));
        Ok(store)
    }

    pub fn journal_path(&self) -> Option<&Path> {
        self.journal.as_ref().map(|(p, _)| p.as_path())
    }

    pub fn sample(&self) -> &[String] {
        &self.sample
    }

    pub fn in_sample(&self, pair_id: &str) -> bool {
        self.sample_set.contains(pair_id)
    }

    /// Validates, persists and stores a record, replacing any earlier record
    /// by the same annotator for the same pair.
    pub fn record(&mut self, record: AnnotationRecord) -> Result<Acknowledgement, AnnotationError> {
        if !self.in_sample(&record.pair_id) {
            return Err(AnnotationError::UnknownPair(record.pair_id));
        }
        if record.categories.is_empty() {
            return Err(AnnotationError::EmptyCategories);
        }
        if let Some((_, file)) = self.journal.as_mut() {
            let mut line = serde_json::to_string(&record).expect("record serializes");
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.flush()?;
            file.sync_data()?;
        }
        let key = (record.pair_id.clone(), record.annotator.clone());
        let replaced = self.records.insert(key, record.clone()).is_some();
        Ok(Acknowledgement {
            pair_id: record.pair_id,
            annotator: record.annotator,
            replaced,
            records: self.records.len(),
        })
    }

    pub fn get(&self, pair_id: &str, annotator: &str) -> Option<&AnnotationRecord> {
        self.records.get(&(pair_id.to_owned(), annotator.to_owned()))
    }

    /// Records ordered by `(pair_id, annotator)`.
    pub fn records(&self) -> impl Iterator<Item = &AnnotationRecord> + '_ {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// First sample item (position, pair id) without a record by `annotator`.
    pub fn next_unannotated(&self, annotator: &str) -> Option<(usize, &str)> {
        self.sample
            .iter()
            .enumerate()
            .find(|(_, id)| self.get(id, annotator).is_none())
            .map(|(i, id)| (i, id.as_str()))
    }

    pub fn frequencies(&self) -> FrequencyTable {
        category_frequencies(self.records())
    }

    pub fn sole_category_rate(&self, category: ManualCategory) -> f64 {
        sole_category_rate(self.records(), category)
    }
}
