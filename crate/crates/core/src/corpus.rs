//! Clause corpora in JSON Lines, gold-label evaluation and frequency tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{ArgumentStructure, RoleId};
use crate::selector::{Engine, SelectError};
use crate::taxonomy::{ConceptId, TaxonomyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("empty corpus")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate record id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: record {id:?} has no gold label")]
    MissingGold { line: usize, id: String },
    #[error("line {line}: record {id:?}: {source}")]
    Record {
        line: usize,
        id: String,
        #[source]
        source: Box<SelectError>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDocument {
    id: String,
    source_lexeme: String,
    #[serde(default)]
    bindings: BTreeMap<RoleId, String>,
    #[serde(default)]
    context: Vec<String>,
    #[serde(default)]
    gold: Option<String>,
}

/// Reads a role filler: a bare name is taken from the nominal domain,
/// `domain:name` as written.
pub fn resolve_binding(engine: &Engine, token: &str) -> Result<ConceptId, TaxonomyError> {
    if token.contains(':') {
        engine.store.resolve(token)
    } else {
        let c = ConceptId::new(engine.lexicon.nominal_domain(), token);
        if engine.store.contains(&c) {
            Ok(c)
        } else {
            Err(TaxonomyError::UnknownConcept(c))
        }
    }
}

/// One clause of a corpus with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusRecord {
    pub line: usize,
    pub id: String,
    pub source_lexeme: String,
    pub bindings: BTreeMap<RoleId, String>,
    pub context: Vec<String>,
    pub gold: Option<String>,
}

impl CorpusRecord {
    /// Resolves bindings (see [`resolve_binding`]) and checks markers.
    pub fn to_args(&self, engine: &Engine) -> Result<ArgumentStructure, CorpusError> {
        let wrap = |source: SelectError| CorpusError::Record {
            line: self.line,
            id: self.id.clone(),
            source: Box::new(source),
        };
        let mut args = ArgumentStructure::new(&self.source_lexeme);
        for (&role, token) in &self.bindings {
            let concept = resolve_binding(engine, token).map_err(|e| wrap(e.into()))?;
            args = args.bind(role, concept);
        }
        for m in &self.context {
            args = args.marker(m);
        }
        engine
            .lexicon
            .validate_args(&args, &engine.store)
            .map_err(|e| wrap(e.into()))?;
        Ok(args)
    }

    fn gold(&self) -> Result<&str, CorpusError> {
        self.gold
            .as_deref()
            .ok_or_else(|| CorpusError::MissingGold {
                line: self.line,
                id: self.id.clone(),
            })
    }
}

/// Parses a JSON Lines corpus. Blank lines and lines starting with `#` are
/// skipped; line numbers in errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let doc: RecordDocument =
            serde_json::from_str(trimmed).map_err(|e| CorpusError::Malformed {
                line,
                message: e.to_string(),
            })?;
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId { line, id: doc.id });
        }
        records.push(CorpusRecord {
            line,
            id: doc.id,
            source_lexeme: doc.source_lexeme,
            bindings: doc.bindings,
            context: doc.context,
            gold: doc.gold,
        });
    }
    if records.is_empty() {
        return Err(CorpusError::Empty);
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalItem {
    pub id: String,
    /// `None` when the engine found no target realization.
    pub predicted: Option<String>,
    pub gold: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub items: Vec<EvalItem>,
}

impl EvalReport {
    fn from_items(items: Vec<EvalItem>) -> Self {
        let total = items.len();
        let correct = items.iter().filter(|i| i.matched).count();
        EvalReport {
            total,
            correct,
            accuracy: correct as f64 / total as f64,
            items,
        }
    }
}

/// Translates every record and compares the top lexeme with its gold label.
/// Items stay in corpus order. A vocabulary gap counts as a miss; any other
/// failure aborts the evaluation.
pub fn evaluate(engine: &Engine, records: &[CorpusRecord]) -> Result<EvalReport, CorpusError> {
    if records.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut clauses = Vec::with_capacity(records.len());
    for r in records {
        r.gold()?;
        clauses.push((r.id.clone(), r.to_args(engine)?));
    }
    let outcomes = engine.translate_batch(&clauses);

    let mut items = Vec::with_capacity(records.len());
    for (r, outcome) in records.iter().zip(outcomes) {
        let predicted = match outcome {
            Ok(t) => Some(t.lexeme().to_string()),
            Err(SelectError::VocabularyGap { .. }) => None,
            Err(source) => {
                return Err(CorpusError::Record {
                    line: r.line,
                    id: r.id.clone(),
                    source: Box::new(source),
                })
            }
        };
        let gold = r.gold()?.to_string();
        items.push(EvalItem {
            matched: predicted.as_deref() == Some(gold.as_str()),
            id: r.id.clone(),
            predicted,
            gold,
        });
    }
    Ok(EvalReport::from_items(items))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreqRow {
    pub rank: usize,
    pub lexeme: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreqTable {
    pub rows: Vec<FreqRow>,
}

impl FreqTable {
    /// Counts gold lexemes; rows by count descending, then lexeme.
    pub fn from_records(records: &[CorpusRecord]) -> Result<Self, CorpusError> {
        if records.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for r in records {
            *counts.entry(r.gold()?).or_default() += 1;
        }
        let mut pairs: Vec<(&str, usize)> = counts.into_iter().collect();
        pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let rows = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (lexeme, count))| FreqRow {
                rank: i + 1,
                lexeme: lexeme.to_string(),
                count,
            })
            .collect();
        Ok(FreqTable { rows })
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.count).sum()
    }
}
