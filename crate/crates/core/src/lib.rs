//! Taxonomy-backed lexical selection for transfer translation of verbs.
//!
//! Concepts live in per-domain taxonomies ([`taxonomy`]). Verb senses project
//! onto several domains and constrain their arguments ([`lexicon`]). A source
//! clause is matched against target senses by conceptual similarity first
//! and constraint satisfaction second ([`matcher`]), with nearby concepts
//! standing in when nothing realizes the exact meaning ([`selector`]).

pub mod bundled;
pub mod corpus;
pub mod exec;
pub mod lexicon;
pub mod matcher;
pub mod selector;
pub mod taxonomy;
pub mod tree;

pub use exec::Execution;
pub use lexicon::{ArgumentStructure, Lexicon, RoleId};
pub use matcher::{DomainWeights, MatchScore, Score};
pub use selector::{Engine, SelectConfig, SelectError, SelectionResult, Translation};
pub use taxonomy::{ConceptId, Similarity, TaxonomyStore};
pub use tree::DecisionTree;
