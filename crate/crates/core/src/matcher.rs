//! Inexact matching of a target sense against an internal representation.
//!
//! Two measurements come out of a match: how close the meanings are
//! (weighted per-domain similarity over the union of projected domains) and
//! how well the arguments satisfy the candidate's selection constraints.
//! Meaning always has priority; constraints only break ties.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lexicon::{ArgumentStructure, InterRep, RoleId, VerbSense};
use crate::taxonomy::{ConceptId, Similarity, TaxonomyError, TaxonomyStore};

/// Exact, non-negative score.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(BigRational);

impl Score {
    pub fn zero() -> Self {
        Score(BigRational::zero())
    }

    pub fn one() -> Self {
        Score(BigRational::one())
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        Score(BigRational::new(numer.into(), denom.into()))
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Reduced fraction, e.g. `4/5`, or `1` for integers.
    pub fn fraction(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<Similarity> for Score {
    fn from(s: Similarity) -> Self {
        Score(BigRational::new(
            BigInt::from(*s.numer()),
            BigInt::from(*s.denom()),
        ))
    }
}

/// Six decimal places.
impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.to_f64())
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.fraction())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("invalid weights document: {0}")]
    InvalidWeights(String),
    #[error("all domain weights are zero for domains {0:?}")]
    ZeroWeight(Vec<String>),
}

/// Per-domain weights. Weights are renormalized over the domains present in
/// a comparison, so only their ratios matter.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainWeights {
    weights: BTreeMap<String, BigRational>,
    default_weight: BigRational,
}

impl Default for DomainWeights {
    fn default() -> Self {
        DomainWeights::uniform()
    }
}

impl DomainWeights {
    pub fn uniform() -> Self {
        DomainWeights {
            weights: BTreeMap::new(),
            default_weight: BigRational::one(),
        }
    }

    pub fn with(mut self, domain: impl Into<String>, weight: f64) -> Result<Self, MatchError> {
        self.weights.insert(domain.into(), to_weight(weight)?);
        Ok(self)
    }

    pub fn with_default(mut self, weight: f64) -> Result<Self, MatchError> {
        self.default_weight = to_weight(weight)?;
        Ok(self)
    }

    /// JSON object mapping domain names to non-negative numbers.
    pub fn from_json(text: &str) -> Result<Self, MatchError> {
        let raw: BTreeMap<String, f64> =
            serde_json::from_str(text).map_err(|e| MatchError::InvalidWeights(e.to_string()))?;
        raw.into_iter()
            .try_fold(DomainWeights::uniform(), |w, (d, v)| w.with(d, v))
    }

    pub fn weight(&self, domain: &str) -> &BigRational {
        self.weights.get(domain).unwrap_or(&self.default_weight)
    }
}

fn to_weight(w: f64) -> Result<BigRational, MatchError> {
    if !w.is_finite() || w < 0.0 {
        return Err(MatchError::InvalidWeights(format!(
            "weight {w} is not a finite non-negative number"
        )));
    }
    BigRational::from_float(w).ok_or_else(|| MatchError::InvalidWeights(format!("weight {w}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainContribution {
    pub domain: String,
    /// Normalized weight.
    pub weight: Score,
    pub left: Option<ConceptId>,
    pub right: Option<ConceptId>,
    pub similarity: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordSimBreakdown {
    pub total: Score,
    pub domains: Vec<DomainContribution>,
}

/// Weighted similarity of two projections, each given as one concept per
/// domain. Domains on only one side contribute zero.
pub fn word_sim<'a>(
    a: impl IntoIterator<Item = &'a ConceptId>,
    b: impl IntoIterator<Item = &'a ConceptId>,
    w: &DomainWeights,
    store: &TaxonomyStore,
) -> Result<Score, MatchError> {
    word_sim_breakdown(a, b, w, store).map(|b| b.total)
}

pub fn word_sim_breakdown<'a>(
    a: impl IntoIterator<Item = &'a ConceptId>,
    b: impl IntoIterator<Item = &'a ConceptId>,
    w: &DomainWeights,
    store: &TaxonomyStore,
) -> Result<WordSimBreakdown, MatchError> {
    let mut union: BTreeMap<&str, (Option<&ConceptId>, Option<&ConceptId>)> = BTreeMap::new();
    for c in a {
        union.entry(&c.domain).or_default().0 = Some(c);
    }
    for c in b {
        union.entry(&c.domain).or_default().1 = Some(c);
    }
    if union.is_empty() {
        return Ok(WordSimBreakdown {
            total: Score::zero(),
            domains: Vec::new(),
        });
    }

    let total_weight: BigRational = union.keys().map(|d| w.weight(d)).sum();
    if total_weight.is_zero() {
        return Err(MatchError::ZeroWeight(
            union.keys().map(|d| d.to_string()).collect(),
        ));
    }

    let mut total = BigRational::zero();
    let mut domains = Vec::with_capacity(union.len());
    for (domain, (left, right)) in union {
        let similarity = match (left, right) {
            (Some(l), Some(r)) => Score::from(store.con_sim(l, r)?),
            _ => Score::zero(),
        };
        let weight = w.weight(domain) / &total_weight;
        total += &weight * &similarity.0;
        domains.push(DomainContribution {
            domain: domain.to_string(),
            weight: Score(weight),
            left: left.cloned(),
            right: right.cloned(),
            similarity,
        });
    }
    Ok(WordSimBreakdown {
        total: Score(total),
        domains,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintDegree {
    pub role: RoleId,
    pub constraint: ConceptId,
    pub entity: Option<ConceptId>,
    pub is_a: bool,
    pub degree: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintBreakdown {
    pub total: Score,
    pub constraints: Vec<ConstraintDegree>,
}

/// Mean graded satisfaction of a sense's selection constraints: 1 when the
/// bound entity is-a the constraint concept, otherwise their similarity, and
/// 0 for an unbound role. A sense without constraints scores 1.
pub fn constraint_satisfaction(
    sense: &VerbSense,
    args: &ArgumentStructure,
    nominal: &TaxonomyStore,
) -> Result<Score, MatchError> {
    constraint_breakdown(sense, args, nominal).map(|b| b.total)
}

pub fn constraint_breakdown(
    sense: &VerbSense,
    args: &ArgumentStructure,
    nominal: &TaxonomyStore,
) -> Result<ConstraintBreakdown, MatchError> {
    if sense.constraints.is_empty() {
        return Ok(ConstraintBreakdown {
            total: Score::one(),
            constraints: Vec::new(),
        });
    }
    let mut sum = BigRational::zero();
    let mut constraints = Vec::with_capacity(sense.constraints.len());
    for c in &sense.constraints {
        let entity = args.get(c.role);
        let (is_a, degree) = match entity {
            None => (false, Score::zero()),
            Some(e) if nominal.is_a(e, &c.concept)? => (true, Score::one()),
            Some(e) => (false, Score::from(nominal.con_sim(e, &c.concept)?)),
        };
        sum += &degree.0;
        constraints.push(ConstraintDegree {
            role: c.role,
            constraint: c.concept.clone(),
            entity: entity.cloned(),
            is_a,
            degree,
        });
    }
    let n = BigRational::from_integer(BigInt::from(sense.constraints.len()));
    Ok(ConstraintBreakdown {
        total: Score(sum / n),
        constraints,
    })
}

/// The two measurements of an inexact match. The derived order is
/// lexicographic, concept score first; larger is better.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MatchScore {
    pub concept_score: Score,
    pub constraint_score: Score,
}

impl MatchScore {
    pub fn new(concept_score: Score, constraint_score: Score) -> Self {
        MatchScore {
            concept_score,
            constraint_score,
        }
    }
}

/// Ranking order: `Less` when `x` ranks before `y`.
pub fn compare(x: &MatchScore, y: &MatchScore) -> Ordering {
    y.cmp(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchExplanation {
    pub score: MatchScore,
    pub domains: Vec<DomainContribution>,
    pub constraints: Vec<ConstraintDegree>,
}

pub fn inexact_match(
    inter_rep: &InterRep,
    candidate: &VerbSense,
    args: &ArgumentStructure,
    w: &DomainWeights,
    store: &TaxonomyStore,
) -> Result<MatchScore, MatchError> {
    let concept = word_sim(
        inter_rep.slots.iter().map(|s| &s.concept),
        candidate.scored().filter_map(|s| s.concept.as_ref()),
        w,
        store,
    )?;
    let constraint = constraint_satisfaction(candidate, args, store)?;
    Ok(MatchScore::new(concept, constraint))
}

pub fn explain_match(
    inter_rep: &InterRep,
    candidate: &VerbSense,
    args: &ArgumentStructure,
    w: &DomainWeights,
    store: &TaxonomyStore,
) -> Result<MatchExplanation, MatchError> {
    let ws = word_sim_breakdown(
        inter_rep.slots.iter().map(|s| &s.concept),
        candidate.scored().filter_map(|s| s.concept.as_ref()),
        w,
        store,
    )?;
    let cs = constraint_breakdown(candidate, args, store)?;
    Ok(MatchExplanation {
        score: MatchScore::new(ws.total, cs.total),
        domains: ws.domains,
        constraints: cs.constraints,
    })
}
