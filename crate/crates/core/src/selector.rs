//! Target verb selection.
//!
//! For a source clause: pick the source sense, build the internal
//! representation, collect target senses that realize its obligatory
//! concepts (or, failing that, nearby concepts in the same domains), score
//! every candidate by inexact match, and rank. [`Engine::translate`] then
//! lets the action decision tree reorder candidates whose meaning scores
//! tie.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::lexicon::{ArgumentStructure, InterRep, Lexicon, LexiconError, RoleId, VerbSense};
use crate::matcher::{self, DomainWeights, MatchError, MatchExplanation, MatchScore, Score};
use crate::taxonomy::{ConceptId, Similarity, TaxonomyError, TaxonomyStore};
use crate::tree::{DecisionTree, TreeError};

pub const DEFAULT_FLOOR: f64 = 0.5;
pub const DEFAULT_MAX_CANDIDATES: usize = 10;

#[derive(Debug, Clone)]
pub struct SelectConfig {
    /// Minimum similarity for a neighboring concept to be considered.
    pub floor: f64,
    /// Maximum number of realized neighboring concepts taken per domain.
    pub max_candidates: usize,
    pub weights: DomainWeights,
    pub execution: Execution,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            floor: DEFAULT_FLOOR,
            max_candidates: DEFAULT_MAX_CANDIDATES,
            weights: DomainWeights::uniform(),
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("vocabulary gap: no target realization for {} within similarity floor {floor}", fmt_concepts(.concepts))]
    VocabularyGap {
        concepts: Vec<ConceptId>,
        floor: f64,
    },
}

impl From<TaxonomyError> for SelectError {
    fn from(e: TaxonomyError) -> Self {
        SelectError::Lexicon(e.into())
    }
}

fn fmt_concepts(cs: &[ConceptId]) -> String {
    cs.iter()
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionResult {
    pub sense_id: String,
    pub lexeme: String,
    pub gloss: String,
    pub score: MatchScore,
    /// Concept whose realizations produced this candidate.
    pub via_concept: ConceptId,
    /// Similarity of `via_concept` to the internal representation's concept
    /// in the same domain; 1 for an exact realization.
    pub neighborhood_sim: Score,
    #[serde(skip)]
    pub explanation: MatchExplanation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub source_sense: String,
    pub inter_rep: InterRep,
    pub exact: bool,
    pub results: Vec<SelectionResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedCandidate {
    #[serde(flatten)]
    pub result: SelectionResult,
    pub action_component: Option<ConceptId>,
    pub action_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Translation {
    pub source_sense: String,
    pub inter_rep: InterRep,
    /// Action chosen by the decision tree, when a tree and an object exist.
    pub action: Option<ConceptId>,
    pub candidates: Vec<RankedCandidate>,
}

impl Translation {
    pub fn best(&self) -> &RankedCandidate {
        &self.candidates[0]
    }

    pub fn lexeme(&self) -> &str {
        &self.best().result.lexeme
    }

    pub fn gloss(&self) -> &str {
        &self.best().result.gloss
    }
}

/// Selection order: match score, then neighborhood similarity, then sense id.
fn selection_order(a: &SelectionResult, b: &SelectionResult) -> Ordering {
    matcher::compare(&a.score, &b.score)
        .then_with(|| b.neighborhood_sim.cmp(&a.neighborhood_sim))
        .then_with(|| a.sense_id.cmp(&b.sense_id))
}

/// Translation order: meaning first, then agreement with the decided action,
/// then the remaining selection order.
fn translation_order(a: &RankedCandidate, b: &RankedCandidate) -> Ordering {
    b.result
        .score
        .concept_score
        .cmp(&a.result.score.concept_score)
        .then_with(|| b.action_match.cmp(&a.action_match))
        .then_with(|| selection_order(&a.result, &b.result))
}

type Found = BTreeMap<String, (ConceptId, Similarity)>;

/// Records `sense` as reached through `via`, keeping the closest concept
/// (then the alphabetically first) when a sense is reached more than once.
fn offer(found: &mut Found, sense: &VerbSense, via: &ConceptId, sim: Similarity) {
    let better = match found.get(&sense.sense_id) {
        None => true,
        Some((v, s)) => sim > *s || (sim == *s && via.name < v.name),
    };
    if better {
        found.insert(sense.sense_id.clone(), (via.clone(), sim));
    }
}

/// Everything needed to translate clauses: taxonomy, lexicon, optional
/// action tree and selection settings. Immutable and shareable.
#[derive(Debug, Clone)]
pub struct Engine {
    pub store: TaxonomyStore,
    pub lexicon: Lexicon,
    pub tree: Option<DecisionTree>,
    pub config: SelectConfig,
}

impl Engine {
    pub fn new(
        store: TaxonomyStore,
        lexicon: Lexicon,
        tree: Option<DecisionTree>,
        config: SelectConfig,
    ) -> Self {
        Engine {
            store,
            lexicon,
            tree,
            config,
        }
    }

    fn gather(&self, inter_rep: &InterRep) -> Result<(bool, Found), SelectError> {
        let mut found = BTreeMap::new();
        for slot in inter_rep.obligatory() {
            for sense in self.lexicon.realizations(&slot.concept, &self.store)? {
                offer(
                    &mut found,
                    sense,
                    &slot.concept,
                    Similarity::from_integer(1),
                );
            }
        }
        if !found.is_empty() {
            return Ok((true, found));
        }

        for slot in inter_rep.obligatory() {
            let near = self.store.neighborhood_with(
                self.config.execution,
                &slot.concept,
                usize::MAX,
                self.config.floor,
            )?;
            let realized = near
                .into_iter()
                .filter(|(c, _)| self.lexicon.has_realizations(c))
                .take(self.config.max_candidates);
            for (concept, sim) in realized {
                for sense in self.lexicon.realizations(&concept, &self.store)? {
                    offer(&mut found, sense, &concept, sim);
                }
            }
        }
        Ok((false, found))
    }

    /// Runs selection for one clause and returns the ranked candidates
    /// together with the intermediate representation.
    pub fn select(
        &self,
        sentence_id: &str,
        args: &ArgumentStructure,
    ) -> Result<Selection, SelectError> {
        self.lexicon.validate_args(args, &self.store)?;
        let sense = self.lexicon.disambiguate(args, &self.store)?;
        let inter_rep = self
            .lexicon
            .build_inter_rep(sentence_id, sense, args, &self.store)?;
        let (exact, found) = self.gather(&inter_rep)?;
        if found.is_empty() {
            return Err(SelectError::VocabularyGap {
                concepts: inter_rep.obligatory().map(|s| s.concept.clone()).collect(),
                floor: self.config.floor,
            });
        }

        let pending: Vec<(&VerbSense, ConceptId, Similarity)> = found
            .into_iter()
            .map(|(id, (via, sim))| (self.lexicon.sense(&id).expect("indexed sense"), via, sim))
            .collect();
        let mut results = self
            .config
            .execution
            .try_map(&pending, |(sense, via, sim)| {
                let explanation = matcher::explain_match(
                    &inter_rep,
                    sense,
                    args,
                    &self.config.weights,
                    &self.store,
                )?;
                Ok::<_, SelectError>(SelectionResult {
                    sense_id: sense.sense_id.clone(),
                    lexeme: sense.lexeme.clone(),
                    gloss: sense.gloss.clone(),
                    score: explanation.score.clone(),
                    via_concept: via.clone(),
                    neighborhood_sim: Score::from(*sim),
                    explanation,
                })
            })?;
        results.sort_by(selection_order);

        Ok(Selection {
            source_sense: sense.sense_id.clone(),
            inter_rep,
            exact,
            results,
        })
    }

    /// Ranked target candidates for a clause.
    pub fn select_target(
        &self,
        args: &ArgumentStructure,
    ) -> Result<Vec<SelectionResult>, SelectError> {
        Ok(self.select("sentence-1", args)?.results)
    }

    /// Action the tree picks for the clause's object (E1), if any.
    pub fn decide_action(
        &self,
        args: &ArgumentStructure,
    ) -> Result<Option<ConceptId>, SelectError> {
        match (&self.tree, args.get(RoleId::E1)) {
            (Some(tree), Some(object)) => {
                Ok(Some(tree.decide_action(&self.store, object, args)?))
            }
            _ => Ok(None),
        }
    }

    pub fn translate_clause(
        &self,
        sentence_id: &str,
        args: &ArgumentStructure,
    ) -> Result<Translation, SelectError> {
        let selection = self.select(sentence_id, args)?;
        let action = self.decide_action(args)?;
        let action_domain = self.tree.as_ref().map(DecisionTree::action_domain);

        let mut candidates: Vec<RankedCandidate> = selection
            .results
            .into_iter()
            .map(|result| {
                let sense = self
                    .lexicon
                    .sense(&result.sense_id)
                    .expect("selected sense");
                let action_component = action_domain.and_then(|d| sense.component(d)).cloned();
                let action_match = action.is_some() && action_component == action;
                RankedCandidate {
                    result,
                    action_component,
                    action_match,
                }
            })
            .collect();
        candidates.sort_by(translation_order);

        Ok(Translation {
            source_sense: selection.source_sense,
            inter_rep: selection.inter_rep,
            action,
            candidates,
        })
    }

    pub fn translate(&self, args: &ArgumentStructure) -> Result<Translation, SelectError> {
        self.translate_clause("sentence-1", args)
    }

    /// Translates many clauses; results come back in input order.
    pub fn translate_batch(
        &self,
        clauses: &[(String, ArgumentStructure)],
    ) -> Vec<Result<Translation, SelectError>> {
        self.config
            .execution
            .map(clauses, |(id, args)| self.translate_clause(id, args))
    }
}
