//! Data-driven decision tree choosing the action component of a serial verb
//! compound.
//!
//! Inner nodes test the clause (is-a on the object or a role filler, a
//! context marker, whether a role is bound); leaves name a concept in the
//! action domain. Every test is a yes/no predicate, so a well-formed tree
//! is total.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{ArgumentStructure, Lexicon, RoleId};
use crate::taxonomy::{ConceptId, TaxonomyError, TaxonomyStore};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed decision tree: {0}")]
    Malformed(String),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("decision tree references unknown concept {0}")]
    UnknownConcept(ConceptId),
    #[error("decision tree tests undeclared context marker {0:?}")]
    UnknownMarker(String),
    #[error("object concept {concept} is not in the nominal domain {domain:?}")]
    NotNominal { concept: ConceptId, domain: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Test {
    /// The object (or the filler of `role`, when given) is-a `concept`.
    /// False when the role is unbound.
    IsA {
        concept: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        role: Option<RoleId>,
    },
    HasMarker {
        marker: String,
    },
    RoleBound {
        role: RoleId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Leaf {
        action: String,
    },
    Branch {
        test: Test,
        then: Box<Node>,
        #[serde(rename = "else")]
        otherwise: Box<Node>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub action_domain: String,
    pub root: Node,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    action_domain: String,
    nominal_domain: String,
    root: Node,
}

impl DecisionTree {
    /// Parses a tree document and checks every concept and marker it names
    /// against the taxonomy and the lexicon.
    pub fn load(text: &str, store: &TaxonomyStore, lexicon: &Lexicon) -> Result<Self, TreeError> {
        // Untagged nodes make serde's own error vague; validate shape first.
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| TreeError::Malformed(e.to_string()))?;
        if let Some(root) = value.get("root") {
            check_shape(root, "root")?;
        }
        let doc: TreeDocument =
            serde_json::from_value(value).map_err(|e| TreeError::Malformed(e.to_string()))?;
        Self::from_document(doc, store, lexicon)
    }

    pub fn from_document(
        doc: TreeDocument,
        store: &TaxonomyStore,
        lexicon: &Lexicon,
    ) -> Result<Self, TreeError> {
        store.domain(&doc.action_domain)?;
        let tree = DecisionTree {
            action_domain: doc.action_domain,
            nominal_domain: lexicon.nominal_domain().to_string(),
            root: doc.root,
        };
        tree.validate(&tree.root, store, lexicon)?;
        Ok(tree)
    }

    fn validate(
        &self,
        node: &Node,
        store: &TaxonomyStore,
        lexicon: &Lexicon,
    ) -> Result<(), TreeError> {
        match node {
            Node::Leaf { action } => {
                let c = ConceptId::new(&self.action_domain, action);
                if !store.contains(&c) {
                    return Err(TreeError::UnknownConcept(c));
                }
                Ok(())
            }
            Node::Branch {
                test,
                then,
                otherwise,
            } => {
                match test {
                    Test::IsA { concept, .. } => {
                        let c = ConceptId::new(&self.nominal_domain, concept);
                        if !store.contains(&c) {
                            return Err(TreeError::UnknownConcept(c));
                        }
                    }
                    Test::HasMarker { marker } => {
                        if lexicon.marker(marker).is_none() {
                            return Err(TreeError::UnknownMarker(marker.clone()));
                        }
                    }
                    Test::RoleBound { .. } => {}
                }
                self.validate(then, store, lexicon)?;
                self.validate(otherwise, store, lexicon)
            }
        }
    }

    pub fn action_domain(&self) -> &str {
        &self.action_domain
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Walks the tree for a clause whose affected object is `object`.
    pub fn decide_action(
        &self,
        store: &TaxonomyStore,
        object: &ConceptId,
        args: &ArgumentStructure,
    ) -> Result<ConceptId, TreeError> {
        if object.domain != self.nominal_domain {
            return Err(TreeError::NotNominal {
                concept: object.clone(),
                domain: self.nominal_domain.clone(),
            });
        }
        if !store.contains(object) {
            return Err(TreeError::UnknownConcept(object.clone()));
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { action } => return Ok(ConceptId::new(&self.action_domain, action)),
                Node::Branch {
                    test,
                    then,
                    otherwise,
                } => {
                    node = if self.holds(test, store, object, args)? {
                        then
                    } else {
                        otherwise
                    };
                }
            }
        }
    }

    fn holds(
        &self,
        test: &Test,
        store: &TaxonomyStore,
        object: &ConceptId,
        args: &ArgumentStructure,
    ) -> Result<bool, TreeError> {
        Ok(match test {
            Test::IsA { concept, role } => {
                let subject = match role {
                    None => Some(object),
                    Some(r) => args.get(*r),
                };
                match subject {
                    Some(s) => store.is_a(s, &ConceptId::new(&self.nominal_domain, concept))?,
                    None => false,
                }
            }
            Test::HasMarker { marker } => args.context_markers.contains(marker),
            Test::RoleBound { role } => args.get(*role).is_some(),
        })
    }
}

fn check_shape(node: &serde_json::Value, path: &str) -> Result<(), TreeError> {
    let obj = node
        .as_object()
        .ok_or_else(|| TreeError::Malformed(format!("{path}: node must be an object")))?;
    if obj.contains_key("action") {
        if obj.len() != 1 {
            return Err(TreeError::Malformed(format!(
                "{path}: leaf must hold only \"action\""
            )));
        }
        return Ok(());
    }
    for key in ["test", "then", "else"] {
        if !obj.contains_key(key) {
            return Err(TreeError::Malformed(format!(
                "{path}: branch is missing {key:?}; every test needs both outcomes"
            )));
        }
    }
    if obj.len() != 3 {
        return Err(TreeError::Malformed(format!(
            "{path}: unexpected keys in branch"
        )));
    }
    check_shape(&obj["then"], &format!("{path}.then"))?;
    check_shape(&obj["else"], &format!("{path}.else"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAXONOMY: &str = r#"{"domains":[
        {"name":"nominal","concepts":[
            {"id":"entity"},
            {"id":"brittle-object","parents":["entity"]},
            {"id":"vase","parents":["brittle-object"]},
            {"id":"line-segment-object","parents":["entity"]},
            {"id":"stick","parents":["line-segment-object"]},
            {"id":"wind","parents":["entity"]}]},
        {"name":"action","concepts":[
            {"id":"%action"},
            {"id":"%hit-action","parents":["%action"]},
            {"id":"%bend-action","parents":["%action"]},
            {"id":"%blow-action","parents":["%action"]}]}]}"#;

    const LEXICON: &str =
        r#"{"nominal_domain":"nominal","markers":[{"name":"into-pieces"}],"senses":[]}"#;

    const TREE: &str = r#"{"action_domain":"action","root":
        {"test":{"kind":"has-marker","marker":"into-pieces"},
         "then":{"action":"%hit-action"},
         "else":{"test":{"kind":"role-bound","role":"E0"},
                 "then":{"test":{"kind":"is-a","role":"E0","concept":"wind"},
                         "then":{"action":"%blow-action"},
                         "else":{"test":{"kind":"is-a","concept":"line-segment-object"},
                                 "then":{"action":"%bend-action"},
                                 "else":{"action":"%hit-action"}}},
                 "else":{"test":{"kind":"is-a","concept":"brittle-object"},
                         "then":{"action":"%hit-action"},
                         "else":{"action":"%bend-action"}}}}}"#;

    fn setup() -> (TaxonomyStore, Lexicon) {
        let s = TaxonomyStore::load(TAXONOMY).unwrap();
        let l = Lexicon::load(LEXICON, &s).unwrap();
        (s, l)
    }

    fn n(name: &str) -> ConceptId {
        ConceptId::new("nominal", name)
    }

    #[test]
    fn walks_each_test_kind() {
        let (s, l) = setup();
        let tree = DecisionTree::load(TREE, &s, &l).unwrap();
        let decide = |obj: &str, args: ArgumentStructure| {
            tree.decide_action(&s, &n(obj), &args).unwrap().name
        };

        assert_eq!(
            decide("vase", ArgumentStructure::new("break")),
            "%hit-action"
        );
        assert_eq!(
            decide("stick", ArgumentStructure::new("break")),
            "%bend-action"
        );
        assert_eq!(
            decide(
                "stick",
                ArgumentStructure::new("break").marker("into-pieces")
            ),
            "%hit-action"
        );
        assert_eq!(
            decide(
                "stick",
                ArgumentStructure::new("break").bind(RoleId::E0, n("wind"))
            ),
            "%blow-action"
        );
        assert_eq!(
            decide(
                "stick",
                ArgumentStructure::new("break").bind(RoleId::E0, n("vase"))
            ),
            "%bend-action"
        );
    }

    #[test]
    fn rejects_partial_branches() {
        let (s, l) = setup();
        let partial = r#"{"action_domain":"action","root":
            {"test":{"kind":"has-marker","marker":"into-pieces"},"then":{"action":"%hit-action"}}}"#;
        let err = DecisionTree::load(partial, &s, &l).unwrap_err();
        assert!(
            matches!(err, TreeError::Malformed(ref m) if m.contains("else")),
            "{err}"
        );

        let bad_kind = TREE.replace("role-bound", "role-maybe");
        assert!(matches!(
            DecisionTree::load(&bad_kind, &s, &l),
            Err(TreeError::Malformed(_))
        ));
    }

    #[test]
    fn rejects_unknown_references() {
        let (s, l) = setup();
        let leaf = TREE.replace("%blow-action", "%kick-action");
        assert!(matches!(
            DecisionTree::load(&leaf, &s, &l),
            Err(TreeError::UnknownConcept(_))
        ));
        let concept = TREE.replace("\"wind\"", "\"storm\"");
        assert!(matches!(
            DecisionTree::load(&concept, &s, &l),
            Err(TreeError::UnknownConcept(_))
        ));
        let marker = TREE.replace("\"into-pieces\"}", "\"into-bits\"}");
        assert_eq!(
            DecisionTree::load(&marker, &s, &l).unwrap_err(),
            TreeError::UnknownMarker("into-bits".into())
        );
        let domain = TREE.replace(
            "\"action_domain\":\"action\"",
            "\"action_domain\":\"motion\"",
        );
        assert!(matches!(
            DecisionTree::load(&domain, &s, &l),
            Err(TreeError::Taxonomy(_))
        ));
    }

    #[test]
    fn object_must_be_nominal() {
        let (s, l) = setup();
        let tree = DecisionTree::load(TREE, &s, &l).unwrap();
        let err = tree
            .decide_action(
                &s,
                &ConceptId::new("action", "%hit-action"),
                &ArgumentStructure::new("x"),
            )
            .unwrap_err();
        assert!(matches!(err, TreeError::NotNominal { .. }));
    }
}
