//! Data files compiled into the library: taxonomy, lexicon, action tree and
//! the two fixture corpora.

use crate::lexicon::Lexicon;
use crate::selector::{Engine, SelectConfig};
use crate::taxonomy::TaxonomyStore;
use crate::tree::DecisionTree;

pub const TAXONOMY: &str = include_str!("../data/taxonomy.json");
pub const LEXICON: &str = include_str!("../data/lexicon.json");
pub const TREE: &str = include_str!("../data/tree.json");
/// Twelve clauses with gold translations.
pub const CORPUS: &str = include_str!("../data/corpus.jsonl");
/// Gold-only corpus reproducing an observed translation frequency profile.
pub const FREQ_SAMPLE: &str = include_str!("../data/freq_sample.jsonl");

pub fn store() -> TaxonomyStore {
    TaxonomyStore::load(TAXONOMY).expect("bundled taxonomy is valid")
}

pub fn lexicon(store: &TaxonomyStore) -> Lexicon {
    Lexicon::load(LEXICON, store).expect("bundled lexicon is valid")
}

pub fn tree(store: &TaxonomyStore, lexicon: &Lexicon) -> DecisionTree {
    DecisionTree::load(TREE, store, lexicon).expect("bundled tree is valid")
}

/// Engine over the bundled data with default settings.
pub fn engine() -> Engine {
    let store = store();
    let lexicon = lexicon(&store);
    let tree = tree(&store, &lexicon);
    Engine::new(store, lexicon, Some(tree), SelectConfig::default())
}
