use std::collections::{BTreeMap, HashSet};
use std::io::{self, BufRead, Write};

use super::{CorpusError, Sentence, Token};

struct Pending {
    start_line: usize,
    id: Option<String>,
    text: Option<String>,
    tokens: Vec<Token>,
}

impl Pending {
    fn new(start_line: usize) -> Self {
        Pending {
            start_line,
            id: None,
            text: None,
            tokens: Vec::new(),
        }
    }

    fn is_empty(&self) -> bool {
        self.id.is_none() && self.text.is_none() && self.tokens.is_empty()
    }

    fn finish(self) -> Result<Sentence, CorpusError> {
        let err = |message: String| CorpusError::Conllu {
            line: self.start_line,
            message,
        };
        let id = self
            .id
            .clone()
            .ok_or_else(|| err("sentence without a `# sent_id =` comment".into()))?;
        if self.tokens.is_empty() {
            return Err(err(format!("sentence {id} has no tokens")));
        }
        let text = self.text.clone().unwrap_or_else(|| {
            self.tokens
                .iter()
                .map(|t| t.surface.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        });
        Sentence::new(id, text, self.tokens).map_err(|m| CorpusError::Conllu {
            line: self.start_line,
            message: m,
        })
    }
}

fn parse_feats(field: &str) -> Result<BTreeMap<String, String>, String> {
    if field == "_" {
        return Ok(BTreeMap::new());
    }
    field
        .split('|')
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_owned(), v.to_owned())),
            _ => Err(format!("malformed feature {kv:?}")),
        })
        .collect()
}

fn parse_token(line: &str) -> Result<Option<Token>, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(format!("expected 10 tab-separated columns, found {}", cols.len()));
    }
    // Multiword-token ranges and empty nodes are not syntactic words.
    if cols[0].contains('-') || cols[0].contains('.') {
        return Ok(None);
    }
    let index: usize = cols[0].parse().map_err(|_| format!("invalid token id {:?}", cols[0]))?;
    let head: usize = cols[6].parse().map_err(|_| format!("invalid head {:?}", cols[6]))?;
    Ok(Some(Token {
        index,
        surface: cols[1].to_owned(),
        lemma: cols[2].to_owned(),
        upos: cols[3].to_owned(),
        feats: parse_feats(cols[5])?,
        head,
        deprel: cols[7].to_owned(),
    }))
}

/// Reads every sentence of a CoNLL-U stream.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<Sentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut ids = HashSet::new();
    let mut pending = Pending::new(1);

    let mut push = |pending: Pending, sentences: &mut Vec<Sentence>| -> Result<(), CorpusError> {
        let line = pending.start_line;
        let sentence = pending.finish()?;
        if !ids.insert(sentence.id.clone()) {
            return Err(CorpusError::Conllu {
                line,
                message: format!("duplicate sent_id {}", sentence.id),
            });
        }
        sentences.push(sentence);
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);

        if line.trim().is_empty() {
            if !pending.is_empty() {
                push(
                    std::mem::replace(&mut pending, Pending::new(lineno + 1)),
                    &mut sentences,
                )?;
            } else {
                pending.start_line = lineno + 1;
            }
            continue;
        }

        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim_start();
            if let Some(id) = comment.strip_prefix("sent_id") {
                if let Some(id) = id.trim_start().strip_prefix('=') {
                    pending.id = Some(id.trim().to_owned());
                }
            } else if let Some(text) = comment.strip_prefix("text") {
                if let Some(text) = text.trim_start().strip_prefix('=') {
                    pending.text = Some(text.trim().to_owned());
                }
            }
            continue;
        }

        match parse_token(line) {
            Ok(Some(token)) => pending.tokens.push(token),
            Ok(None) => {}
            Err(message) => return Err(CorpusError::Conllu { line: lineno, message }),
        }
    }
    if !pending.is_empty() {
        push(pending, &mut sentences)?;
    }
    Ok(sentences)
}

fn feats_string(feats: &BTreeMap<String, String>) -> String {
    if feats.is_empty() {
        "_".to_owned()
    } else {
        feats
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

pub fn write_conllu<'a, W: Write>(out: &mut W, sentences: impl IntoIterator<Item = &'a Sentence>) -> io::Result<()> {
    for s in sentences {
        writeln!(out, "# sent_id = {}", s.id)?;
        writeln!(out, "# text = {}", s.text)?;
        for t in &s.tokens {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_",
                t.index,
                t.surface,
                t.lemma,
                t.upos,
                feats_string(&t.feats),
                t.head,
                t.deprel
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
