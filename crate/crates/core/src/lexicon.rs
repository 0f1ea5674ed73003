//! Verb senses, their multi-domain projections, and the target realization
//! index.
//!
//! A sense carries selection constraints on its argument roles and a
//! projection onto conceptual domains. Each projection slot is obligatory
//! (OBL), optional (OPT) or implicit (IMP). Only OBL and OPT slots take part
//! in matching; IMP slots are stored as written and never scored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcher;
use crate::taxonomy::{ConceptId, TaxonomyError, TaxonomyStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoleId {
    E0,
    E1,
    E2,
}

impl RoleId {
    pub const ALL: [RoleId; 3] = [RoleId::E0, RoleId::E1, RoleId::E2];
}

impl fmt::Display for RoleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoleId::E0 => "E0",
            RoleId::E1 => "E1",
            RoleId::E2 => "E2",
        })
    }
}

impl FromStr for RoleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E0" => Ok(RoleId::E0),
            "E1" => Ok(RoleId::E1),
            "E2" => Ok(RoleId::E2),
            _ => Err(format!("unknown role {s:?} (expected E0, E1 or E2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlotStatus {
    #[serde(rename = "OBL")]
    Obligatory,
    #[serde(rename = "OPT")]
    Optional,
    #[serde(rename = "IMP")]
    Implicit,
}

impl fmt::Display for SlotStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotStatus::Obligatory => "OBL",
            SlotStatus::Optional => "OPT",
            SlotStatus::Implicit => "IMP",
        })
    }
}

/// An argument position of a projection slot: a role, or an opaque
/// placeholder such as `*` (the event itself), `@` or `@t0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotArg {
    Role(RoleId),
    Placeholder(String),
}

impl FromStr for SlotArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(role) = s.parse() {
            return Ok(SlotArg::Role(role));
        }
        let placeholder =
            s == "*" || (s.starts_with('@') && s[1..].chars().all(|c| c.is_ascii_alphanumeric()));
        if placeholder {
            Ok(SlotArg::Placeholder(s.to_string()))
        } else {
            Err(format!("invalid slot argument {s:?}"))
        }
    }
}

impl fmt::Display for SlotArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotArg::Role(r) => r.fmt(f),
            SlotArg::Placeholder(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionConstraint {
    pub role: RoleId,
    pub concept: ConceptId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSlot {
    pub domain: String,
    pub status: SlotStatus,
    pub concept: Option<ConceptId>,
    pub args: Vec<SlotArg>,
}

impl ProjectionSlot {
    pub fn is_scored(&self) -> bool {
        self.status != SlotStatus::Implicit
    }

    fn roles(&self) -> impl Iterator<Item = RoleId> + '_ {
        self.args.iter().filter_map(|a| match a {
            SlotArg::Role(r) => Some(*r),
            SlotArg::Placeholder(_) => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Source,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbSense {
    pub sense_id: String,
    pub lexeme: String,
    pub language: Language,
    pub gloss: String,
    pub example: String,
    pub constraints: Vec<SelectionConstraint>,
    pub projection: Vec<ProjectionSlot>,
}

impl VerbSense {
    pub fn obligatory(&self) -> impl Iterator<Item = &ProjectionSlot> {
        self.projection
            .iter()
            .filter(|s| s.status == SlotStatus::Obligatory)
    }

    /// OBL and OPT slots, the ones matching looks at.
    pub fn scored(&self) -> impl Iterator<Item = &ProjectionSlot> {
        self.projection.iter().filter(|s| s.is_scored())
    }

    /// Concept of the first slot in `domain` that names one, whatever its
    /// status.
    pub fn component(&self, domain: &str) -> Option<&ConceptId> {
        self.projection
            .iter()
            .filter(|s| s.domain == domain)
            .find_map(|s| s.concept.as_ref())
    }
}

/// A context marker and the concept it pins down, if any. A marker with a
/// refinement replaces a more general concept of the same domain in the
/// internal representation (e.g. "into-pieces" narrowing a change of
/// integrity to separation into pieces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextMarker {
    pub name: String,
    pub refines: Option<ConceptId>,
}

/// Source-verb argument structure for one clause.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArgumentStructure {
    pub source_lexeme: String,
    pub bindings: BTreeMap<RoleId, ConceptId>,
    pub context_markers: BTreeSet<String>,
}

impl ArgumentStructure {
    pub fn new(source_lexeme: impl Into<String>) -> Self {
        ArgumentStructure {
            source_lexeme: source_lexeme.into(),
            ..Default::default()
        }
    }

    pub fn bind(mut self, role: RoleId, concept: ConceptId) -> Self {
        self.bindings.insert(role, concept);
        self
    }

    pub fn marker(mut self, marker: impl Into<String>) -> Self {
        self.context_markers.insert(marker.into());
        self
    }

    pub fn get(&self, role: RoleId) -> Option<&ConceptId> {
        self.bindings.get(&role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum InterArg {
    Entity(ConceptId),
    Placeholder(String),
}

impl fmt::Display for InterArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterArg::Entity(c) => f.write_str(&c.name),
            InterArg::Placeholder(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterSlot {
    pub domain: String,
    pub status: SlotStatus,
    pub concept: ConceptId,
    pub args: Vec<InterArg>,
}

impl fmt::Display for InterSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({}", self.domain, self.concept.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// Internal representation of a clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterRep {
    pub sentence_id: String,
    pub source_sense: String,
    pub slots: Vec<InterSlot>,
}

impl InterRep {
    pub fn obligatory(&self) -> impl Iterator<Item = &InterSlot> {
        self.slots
            .iter()
            .filter(|s| s.status == SlotStatus::Obligatory)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("malformed lexicon document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("duplicate sense id {0:?}")]
    DuplicateSense(String),
    #[error("duplicate context marker {0:?}")]
    DuplicateMarker(String),
    #[error("sense {sense:?}: unknown domain {domain:?}")]
    UnknownDomain { sense: String, domain: String },
    #[error("sense {sense:?}: unknown concept {concept}")]
    UnknownConcept { sense: String, concept: ConceptId },
    #[error("sense {sense:?}: {status} slot in domain {domain:?} names no concept")]
    MissingConcept {
        sense: String,
        domain: String,
        status: SlotStatus,
    },
    #[error("sense {0:?} has no OBL slot")]
    NoObligatorySlot(String),
    #[error("sense {sense:?}: more than one scored slot in domain {domain:?}")]
    DuplicateDomainSlot { sense: String, domain: String },
    #[error("sense {sense:?}: {message}")]
    InvalidArgument { sense: String, message: String },
    #[error("marker {marker:?}: unknown concept {concept}")]
    UnknownMarkerConcept { marker: String, concept: ConceptId },
    #[error("unknown source lexeme {0:?}")]
    UnknownLexeme(String),
    #[error("unknown sense {0:?}")]
    UnknownSense(String),
    #[error("sense {0:?} is not a source sense")]
    NotSourceSense(String),
    #[error("sense {sense:?}: OBL slot in domain {domain:?} needs role {role}, which is unbound")]
    UnboundRole {
        sense: String,
        domain: String,
        role: RoleId,
    },
    #[error("unknown context marker {0:?}")]
    UnknownMarker(String),
    #[error("role {role} is bound to {concept}, which is not in the nominal domain {domain:?}")]
    NotNominal {
        role: RoleId,
        concept: ConceptId,
        domain: String,
    },
}

pub type Result<T, E = LexiconError> = std::result::Result<T, E>;

impl From<matcher::MatchError> for LexiconError {
    fn from(e: matcher::MatchError) -> Self {
        match e {
            matcher::MatchError::Taxonomy(t) => LexiconError::Taxonomy(t),
            other => LexiconError::Malformed(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub nominal_domain: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub markers: Vec<MarkerDocument>,
    pub senses: Vec<SenseDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SenseDocument {
    pub sense_id: String,
    pub lexeme: String,
    pub language: Language,
    #[serde(default)]
    pub gloss: String,
    #[serde(default)]
    pub example: String,
    #[serde(default)]
    pub constraints: Vec<ConstraintDocument>,
    pub projection: Vec<SlotDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDocument {
    pub role: RoleId,
    pub concept: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotDocument {
    pub domain: String,
    pub status: SlotStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
    #[serde(default)]
    pub args: Vec<String>,
}

/// Validated, immutable lexicon.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    nominal_domain: String,
    senses: Vec<VerbSense>,
    by_id: HashMap<String, usize>,
    source_by_lexeme: BTreeMap<String, Vec<usize>>,
    /// Target senses by OBL concept, sorted by sense id.
    realizations: BTreeMap<ConceptId, Vec<usize>>,
    markers: BTreeMap<String, ContextMarker>,
}

impl Lexicon {
    pub fn load(text: &str, store: &TaxonomyStore) -> Result<Self> {
        let doc: LexiconDocument =
            serde_json::from_str(text).map_err(|e| LexiconError::Malformed(e.to_string()))?;
        Self::from_document(&doc, store)
    }

    pub fn from_document(doc: &LexiconDocument, store: &TaxonomyStore) -> Result<Self> {
        let nominal = store.domain(&doc.nominal_domain)?;

        let mut markers = BTreeMap::new();
        for m in &doc.markers {
            let refines = match (&m.domain, &m.concept) {
                (Some(domain), Some(concept)) => {
                    let c = ConceptId::new(domain, concept);
                    if !store.contains(&c) {
                        return Err(LexiconError::UnknownMarkerConcept {
                            marker: m.name.clone(),
                            concept: c,
                        });
                    }
                    Some(c)
                }
                (None, None) => None,
                _ => {
                    return Err(LexiconError::Malformed(format!(
                        "marker {:?}: domain and concept must be given together",
                        m.name
                    )))
                }
            };
            let marker = ContextMarker {
                name: m.name.clone(),
                refines,
            };
            if markers.insert(m.name.clone(), marker).is_some() {
                return Err(LexiconError::DuplicateMarker(m.name.clone()));
            }
        }

        let mut senses = Vec::with_capacity(doc.senses.len());
        let mut by_id = HashMap::new();
        for (i, sd) in doc.senses.iter().enumerate() {
            if by_id.insert(sd.sense_id.clone(), i).is_some() {
                return Err(LexiconError::DuplicateSense(sd.sense_id.clone()));
            }
            let sense_err = |message: String| LexiconError::InvalidArgument {
                sense: sd.sense_id.clone(),
                message,
            };

            let mut constraints = Vec::with_capacity(sd.constraints.len());
            for cd in &sd.constraints {
                if !nominal.contains(&cd.concept) {
                    return Err(LexiconError::UnknownConcept {
                        sense: sd.sense_id.clone(),
                        concept: ConceptId::new(&doc.nominal_domain, &cd.concept),
                    });
                }
                constraints.push(SelectionConstraint {
                    role: cd.role,
                    concept: ConceptId::new(&doc.nominal_domain, &cd.concept),
                });
            }

            let mut projection = Vec::with_capacity(sd.projection.len());
            let mut scored_domains = BTreeSet::new();
            for slot in &sd.projection {
                let domain =
                    store
                        .domain(&slot.domain)
                        .map_err(|_| LexiconError::UnknownDomain {
                            sense: sd.sense_id.clone(),
                            domain: slot.domain.clone(),
                        })?;
                let concept = match &slot.concept {
                    Some(name) => {
                        if !domain.contains(name) {
                            return Err(LexiconError::UnknownConcept {
                                sense: sd.sense_id.clone(),
                                concept: ConceptId::new(&slot.domain, name),
                            });
                        }
                        Some(ConceptId::new(&slot.domain, name))
                    }
                    None if slot.status == SlotStatus::Implicit => None,
                    None => {
                        return Err(LexiconError::MissingConcept {
                            sense: sd.sense_id.clone(),
                            domain: slot.domain.clone(),
                            status: slot.status,
                        })
                    }
                };
                if slot.status != SlotStatus::Implicit
                    && !scored_domains.insert(slot.domain.clone())
                {
                    return Err(LexiconError::DuplicateDomainSlot {
                        sense: sd.sense_id.clone(),
                        domain: slot.domain.clone(),
                    });
                }
                let args = slot
                    .args
                    .iter()
                    .map(|a| a.parse::<SlotArg>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(sense_err)?;
                projection.push(ProjectionSlot {
                    domain: slot.domain.clone(),
                    status: slot.status,
                    concept,
                    args,
                });
            }
            if !projection
                .iter()
                .any(|s| s.status == SlotStatus::Obligatory)
            {
                return Err(LexiconError::NoObligatorySlot(sd.sense_id.clone()));
            }

            senses.push(VerbSense {
                sense_id: sd.sense_id.clone(),
                lexeme: sd.lexeme.clone(),
                language: sd.language,
                gloss: sd.gloss.clone(),
                example: sd.example.clone(),
                constraints,
                projection,
            });
        }

        let mut source_by_lexeme: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut realizations: BTreeMap<ConceptId, Vec<usize>> = BTreeMap::new();
        for (i, s) in senses.iter().enumerate() {
            match s.language {
                Language::Source => source_by_lexeme
                    .entry(s.lexeme.clone())
                    .or_default()
                    .push(i),
                Language::Target => {
                    for slot in s.obligatory() {
                        let c = slot.concept.clone().expect("OBL slots carry a concept");
                        realizations.entry(c).or_default().push(i);
                    }
                }
            }
        }
        for list in realizations.values_mut() {
            list.sort_by(|&a, &b| senses[a].sense_id.cmp(&senses[b].sense_id));
        }

        Ok(Lexicon {
            nominal_domain: doc.nominal_domain.clone(),
            senses,
            by_id,
            source_by_lexeme,
            realizations,
            markers,
        })
    }

    /// Serializes back to the document form `from_document` accepts.
    pub fn to_document(&self) -> LexiconDocument {
        LexiconDocument {
            note: None,
            nominal_domain: self.nominal_domain.clone(),
            markers: self
                .markers
                .values()
                .map(|m| MarkerDocument {
                    name: m.name.clone(),
                    domain: m.refines.as_ref().map(|c| c.domain.clone()),
                    concept: m.refines.as_ref().map(|c| c.name.clone()),
                })
                .collect(),
            senses: self
                .senses
                .iter()
                .map(|s| SenseDocument {
                    sense_id: s.sense_id.clone(),
                    lexeme: s.lexeme.clone(),
                    language: s.language,
                    gloss: s.gloss.clone(),
                    example: s.example.clone(),
                    constraints: s
                        .constraints
                        .iter()
                        .map(|c| ConstraintDocument {
                            role: c.role,
                            concept: c.concept.name.clone(),
                        })
                        .collect(),
                    projection: s
                        .projection
                        .iter()
                        .map(|p| SlotDocument {
                            domain: p.domain.clone(),
                            status: p.status,
                            concept: p.concept.as_ref().map(|c| c.name.clone()),
                            args: p.args.iter().map(ToString::to_string).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn nominal_domain(&self) -> &str {
        &self.nominal_domain
    }

    /// All senses in document order.
    pub fn senses(&self) -> &[VerbSense] {
        &self.senses
    }

    pub fn sense(&self, sense_id: &str) -> Option<&VerbSense> {
        self.by_id.get(sense_id).map(|&i| &self.senses[i])
    }

    pub fn source_lexemes(&self) -> impl Iterator<Item = &str> {
        self.source_by_lexeme.keys().map(String::as_str)
    }

    /// Source senses of a lexeme in document order.
    pub fn source_senses(&self, lexeme: &str) -> Result<Vec<&VerbSense>> {
        self.source_by_lexeme
            .get(lexeme)
            .map(|ix| ix.iter().map(|&i| &self.senses[i]).collect())
            .ok_or_else(|| LexiconError::UnknownLexeme(lexeme.to_string()))
    }

    pub fn markers(&self) -> impl Iterator<Item = &ContextMarker> {
        self.markers.values()
    }

    pub fn marker(&self, name: &str) -> Option<&ContextMarker> {
        self.markers.get(name)
    }

    /// Concepts that have at least one target realization.
    pub fn realized_concepts(&self) -> impl Iterator<Item = &ConceptId> {
        self.realizations.keys()
    }

    pub fn has_realizations(&self, concept: &ConceptId) -> bool {
        self.realizations.contains_key(concept)
    }

    /// Target senses whose OBL projection lexicalizes `concept`, by sense id.
    pub fn realizations(
        &self,
        concept: &ConceptId,
        store: &TaxonomyStore,
    ) -> Result<Vec<&VerbSense>> {
        if !store.contains(concept) {
            return Err(TaxonomyError::UnknownConcept(concept.clone()).into());
        }
        Ok(self
            .realizations
            .get(concept)
            .map(|ix| ix.iter().map(|&i| &self.senses[i]).collect())
            .unwrap_or_default())
    }

    /// Checks that bindings are nominal concepts and markers are declared.
    pub fn validate_args(&self, args: &ArgumentStructure, store: &TaxonomyStore) -> Result<()> {
        for (&role, concept) in &args.bindings {
            if concept.domain != self.nominal_domain {
                return Err(LexiconError::NotNominal {
                    role,
                    concept: concept.clone(),
                    domain: self.nominal_domain.clone(),
                });
            }
            if !store.contains(concept) {
                return Err(TaxonomyError::UnknownConcept(concept.clone()).into());
            }
        }
        if let Some(m) = args
            .context_markers
            .iter()
            .find(|m| !self.markers.contains_key(*m))
        {
            return Err(LexiconError::UnknownMarker(m.clone()));
        }
        Ok(())
    }

    /// Picks the source sense whose selection constraints the arguments
    /// satisfy best; earlier senses win ties.
    pub fn disambiguate(
        &self,
        args: &ArgumentStructure,
        store: &TaxonomyStore,
    ) -> Result<&VerbSense> {
        let mut best: Option<(&VerbSense, matcher::Score)> = None;
        for sense in self.source_senses(&args.source_lexeme)? {
            let score = matcher::constraint_satisfaction(sense, args, store)?;
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                best = Some((sense, score));
            }
        }
        Ok(best.expect("source lexeme has at least one sense").0)
    }

    /// Builds the internal representation of a clause from a source sense:
    /// OBL slots always, OPT slots when all their roles are bound, IMP slots
    /// never. Roles are replaced by their bound entities and declared
    /// context markers narrow matching slot concepts.
    pub fn build_inter_rep(
        &self,
        sentence_id: &str,
        sense: &VerbSense,
        args: &ArgumentStructure,
        store: &TaxonomyStore,
    ) -> Result<InterRep> {
        if sense.language != Language::Source {
            return Err(LexiconError::NotSourceSense(sense.sense_id.clone()));
        }
        let mut slots = Vec::new();
        for slot in sense.scored() {
            let unbound = slot.roles().find(|r| args.get(*r).is_none());
            if let Some(role) = unbound {
                if slot.status == SlotStatus::Obligatory {
                    return Err(LexiconError::UnboundRole {
                        sense: sense.sense_id.clone(),
                        domain: slot.domain.clone(),
                        role,
                    });
                }
                continue;
            }
            let mut concept = slot.concept.clone().expect("scored slots carry a concept");
            for m in &args.context_markers {
                let marker = self
                    .markers
                    .get(m)
                    .ok_or_else(|| LexiconError::UnknownMarker(m.clone()))?;
                if let Some(narrow) = &marker.refines {
                    if narrow.domain == slot.domain && store.is_a(narrow, &concept)? {
                        concept = narrow.clone();
                    }
                }
            }
            let args = slot
                .args
                .iter()
                .map(|a| match a {
                    SlotArg::Role(r) => {
                        InterArg::Entity(args.get(*r).expect("checked above").clone())
                    }
                    SlotArg::Placeholder(p) => InterArg::Placeholder(p.clone()),
                })
                .collect();
            slots.push(InterSlot {
                domain: slot.domain.clone(),
                status: slot.status,
                concept,
                args,
            });
        }
        Ok(InterRep {
            sentence_id: sentence_id.to_string(),
            source_sense: sense.sense_id.clone(),
            slots,
        })
    }
}
