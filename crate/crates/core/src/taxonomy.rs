//! Multi-domain concept hierarchies.
//!
//! A [`TaxonomyStore`] holds one rooted DAG per conceptual domain. Within a
//! domain, two concepts are compared through their least common superconcept
//! (LCS) with the path similarity
//!
//! ```text
//! sim(c1, c2) = 2·n3 / (n1 + n2 + 2·n3)
//! ```
//!
//! where `n1` and `n2` are the edge counts from each concept up to the LCS
//! and `n3` is the node count from the LCS to the domain root, both ends
//! included. Node depth is the longest path to the root, so the root has
//! depth 1 and `n3 >= 1` always holds.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;

/// Exact similarity value. Reduced on construction, compared exactly.
pub type Similarity = Ratio<u64>;

/// A concept, identified by its domain and its name inside that domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConceptId {
    pub domain: String,
    pub name: String,
}

impl ConceptId {
    pub fn new(domain: impl Into<String>, name: impl Into<String>) -> Self {
        ConceptId {
            domain: domain.into(),
            name: name.into(),
        }
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.domain, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("malformed taxonomy document: {0}")]
    Malformed(String),
    #[error("domain {domain:?}: invalid token {token:?} (tokens must be non-empty and contain no whitespace)")]
    InvalidToken { domain: String, token: String },
    #[error("duplicate domain {0:?}")]
    DuplicateDomain(String),
    #[error("domain {0:?} declares no concepts")]
    EmptyDomain(String),
    #[error("domain {domain:?}: duplicate concept {concept:?}")]
    DuplicateConcept { domain: String, concept: String },
    #[error("domain {domain:?}: concept {concept:?} names undeclared parent {parent:?}")]
    DanglingParent {
        domain: String,
        concept: String,
        parent: String,
    },
    #[error("domain {domain:?}: cycle detected through concept {concept:?}")]
    Cycle { domain: String, concept: String },
    #[error("domain {0:?} has no root (every concept has a parent)")]
    NoRoot(String),
    #[error("domain {domain:?} has multiple roots: {roots:?}")]
    MultipleRoots { domain: String, roots: Vec<String> },
    #[error("unknown domain {0:?}")]
    UnknownDomain(String),
    #[error("unknown concept {0}")]
    UnknownConcept(ConceptId),
    #[error("unknown concept {0:?}")]
    UnknownName(String),
    #[error("concept name {name:?} is ambiguous; qualify it as one of {candidates:?}")]
    Ambiguous {
        name: String,
        candidates: Vec<String>,
    },
    #[error("cross-domain comparison: {0} and {1} are in different domains")]
    CrossDomain(ConceptId, ConceptId),
}

pub type Result<T, E = TaxonomyError> = std::result::Result<T, E>;

/// On-disk taxonomy document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub domains: Vec<DomainDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub concepts: Vec<ConceptDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptDocument {
    pub id: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub parents: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptNode {
    pub id: ConceptId,
    pub label: String,
    pub parents: Vec<ConceptId>,
}

/// Result of an LCS query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathMetrics {
    pub lcs: ConceptId,
    /// Edges from the first concept up to the LCS.
    pub n1: u32,
    /// Edges from the second concept up to the LCS.
    pub n2: u32,
    /// Nodes from the LCS to the root, both included.
    pub n3: u32,
}

impl PathMetrics {
    /// Unreduced `(2·n3, n1 + n2 + 2·n3)`.
    pub fn raw_fraction(&self) -> (u64, u64) {
        let twice = 2 * u64::from(self.n3);
        (twice, u64::from(self.n1) + u64::from(self.n2) + twice)
    }

    pub fn similarity(&self) -> Similarity {
        let (num, den) = self.raw_fraction();
        Ratio::new(num, den)
    }
}

pub fn similarity_to_f64(s: Similarity) -> f64 {
    *s.numer() as f64 / *s.denom() as f64
}

/// One rooted DAG of concepts.
#[derive(Debug, Clone)]
pub struct DomainTaxonomy {
    name: String,
    nodes: Vec<ConceptNode>,
    index: HashMap<String, usize>,
    root: usize,
    /// Longest path to the root, counted in nodes.
    depth: Vec<u32>,
    /// Position of each concept name in sorted order, for cheap tie-breaks.
    name_rank: Vec<u32>,
    /// Ancestors including self, ordered by (shortest edge distance, name).
    ancestors: Vec<Vec<(usize, u32)>>,
    /// The same ancestor lists ordered by node index, for merge joins.
    by_index: Vec<Vec<(usize, u32)>>,
}

fn valid_token(t: &str) -> bool {
    !t.is_empty() && !t.chars().any(char::is_whitespace)
}

impl DomainTaxonomy {
    fn build(doc: &DomainDocument) -> Result<Self> {
        let domain = doc.name.clone();
        if !valid_token(&domain) {
            return Err(TaxonomyError::InvalidToken {
                domain: domain.clone(),
                token: domain,
            });
        }
        if doc.concepts.is_empty() {
            return Err(TaxonomyError::EmptyDomain(domain));
        }

        let mut index = HashMap::with_capacity(doc.concepts.len());
        for (i, c) in doc.concepts.iter().enumerate() {
            if !valid_token(&c.id) {
                return Err(TaxonomyError::InvalidToken {
                    domain,
                    token: c.id.clone(),
                });
            }
            if index.insert(c.id.clone(), i).is_some() {
                return Err(TaxonomyError::DuplicateConcept {
                    domain,
                    concept: c.id.clone(),
                });
            }
        }

        let n = doc.concepts.len();
        let mut parents: Vec<Vec<usize>> = Vec::with_capacity(n);
        for c in &doc.concepts {
            let mut ps = Vec::with_capacity(c.parents.len());
            for p in &c.parents {
                let Some(&pi) = index.get(p) else {
                    return Err(TaxonomyError::DanglingParent {
                        domain,
                        concept: c.id.clone(),
                        parent: p.clone(),
                    });
                };
                if !ps.contains(&pi) {
                    ps.push(pi);
                }
            }
            parents.push(ps);
        }

        let mut roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_empty()).collect();
        if roots.is_empty() {
            return Err(TaxonomyError::NoRoot(domain));
        }
        if roots.len() > 1 {
            roots.sort_by(|&a, &b| doc.concepts[a].id.cmp(&doc.concepts[b].id));
            return Err(TaxonomyError::MultipleRoots {
                domain,
                roots: roots.iter().map(|&r| doc.concepts[r].id.clone()).collect(),
            });
        }
        let root = roots[0];

        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }

        // Kahn's algorithm from the root down; leftovers sit on or below a cycle.
        let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut depth = vec![0u32; n];
        let mut queue = VecDeque::from([root]);
        depth[root] = 1;
        let mut seen = 0usize;
        while let Some(u) = queue.pop_front() {
            seen += 1;
            for &c in &children[u] {
                depth[c] = depth[c].max(depth[u] + 1);
                pending[c] -= 1;
                if pending[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        if seen < n {
            let mut stuck: Vec<usize> = (0..n).filter(|&i| pending[i] > 0).collect();
            stuck.sort_by(|&a, &b| doc.concepts[a].id.cmp(&doc.concepts[b].id));
            // Every stuck node has a stuck parent; walking up must revisit a node.
            let mut visited = vec![false; n];
            let mut cur = stuck[0];
            while !visited[cur] {
                visited[cur] = true;
                cur = *parents[cur]
                    .iter()
                    .filter(|&&p| pending[p] > 0)
                    .min_by(|&&a, &&b| doc.concepts[a].id.cmp(&doc.concepts[b].id))
                    .expect("stuck node without stuck parent");
            }
            return Err(TaxonomyError::Cycle {
                domain,
                concept: doc.concepts[cur].id.clone(),
            });
        }

        let nodes: Vec<ConceptNode> = doc
            .concepts
            .iter()
            .zip(&parents)
            .map(|(c, ps)| ConceptNode {
                id: ConceptId::new(&domain, &c.id),
                label: c.label.clone(),
                parents: ps
                    .iter()
                    .map(|&p| ConceptId::new(&domain, &doc.concepts[p].id))
                    .collect(),
            })
            .collect();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| nodes[a].id.name.cmp(&nodes[b].id.name));
        let mut name_rank = vec![0u32; n];
        for (rank, &i) in order.iter().enumerate() {
            name_rank[i] = rank as u32;
        }

        let mut ancestors = Vec::with_capacity(n);
        let mut by_index = Vec::with_capacity(n);
        let mut dist = vec![u32::MAX; n];
        for start in 0..n {
            let mut seen = vec![start];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &p in &parents[u] {
                    if dist[p] == u32::MAX {
                        dist[p] = dist[u] + 1;
                        seen.push(p);
                        queue.push_back(p);
                    }
                }
            }
            let mut ordered: Vec<(usize, u32)> = seen.iter().map(|&a| (a, dist[a])).collect();
            for &a in &seen {
                dist[a] = u32::MAX;
            }
            ordered.sort_by_key(|&(a, d)| (d, name_rank[a]));
            let mut indexed = ordered.clone();
            indexed.sort_unstable_by_key(|&(a, _)| a);
            ancestors.push(ordered);
            by_index.push(indexed);
        }

        Ok(DomainTaxonomy {
            name: domain,
            nodes,
            index,
            root,
            depth,
            name_rank,
            ancestors,
            by_index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> &ConceptId {
        &self.nodes[self.root].id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in document order.
    pub fn nodes(&self) -> &[ConceptNode] {
        &self.nodes
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn node(&self, name: &str) -> Option<&ConceptNode> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    /// Node depth (root = 1) of a concept by name.
    pub fn depth(&self, name: &str) -> Option<u32> {
        self.index.get(name).map(|&i| self.depth[i])
    }

    fn idx(&self, c: &ConceptId) -> Result<usize> {
        if c.domain != self.name {
            return Err(TaxonomyError::UnknownConcept(c.clone()));
        }
        self.index
            .get(&c.name)
            .copied()
            .ok_or_else(|| TaxonomyError::UnknownConcept(c.clone()))
    }

    fn metrics(&self, a: usize, b: usize) -> (usize, u32, u32) {
        // Merge-join the two index-ordered ancestor lists; keep the deepest
        // common ancestor, then the closest, then the first by name.
        let (xs, ys) = (&self.by_index[a], &self.by_index[b]);
        let (mut i, mut j) = (0, 0);
        let mut best: Option<(usize, u32, u32)> = None;
        while i < xs.len() && j < ys.len() {
            let ((x, n1), (y, n2)) = (xs[i], ys[j]);
            match x.cmp(&y) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    let key = |(c, d1, d2): (usize, u32, u32)| {
                        (Reverse(self.depth[c]), d1 + d2, self.name_rank[c])
                    };
                    if best.is_none_or(|cur| key((x, n1, n2)) < key(cur)) {
                        best = Some((x, n1, n2));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        best.expect("root is a common ancestor")
    }

    fn is_ancestor(&self, c: usize, ancestor: usize) -> bool {
        self.by_index[c]
            .binary_search_by_key(&ancestor, |&(a, _)| a)
            .is_ok()
    }

    fn sim_idx(&self, a: usize, b: usize) -> Similarity {
        let (lcs, n1, n2) = self.metrics(a, b);
        let twice = 2 * u64::from(self.depth[lcs]);
        Ratio::new(twice, u64::from(n1 + n2) + twice)
    }
}

/// Immutable collection of domain taxonomies.
#[derive(Debug, Clone, Default)]
pub struct TaxonomyStore {
    domains: BTreeMap<String, DomainTaxonomy>,
}

impl TaxonomyStore {
    /// Parses and validates a JSON taxonomy document.
    pub fn load(text: &str) -> Result<Self> {
        let doc: TaxonomyDocument =
            serde_json::from_str(text).map_err(|e| TaxonomyError::Malformed(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &TaxonomyDocument) -> Result<Self> {
        let mut store = TaxonomyStore::default();
        store.merge_document(doc)?;
        Ok(store)
    }

    /// Loads several documents into one store. Domain names must not repeat.
    pub fn load_many<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut store = TaxonomyStore::default();
        for text in texts {
            let doc: TaxonomyDocument =
                serde_json::from_str(text).map_err(|e| TaxonomyError::Malformed(e.to_string()))?;
            store.merge_document(&doc)?;
        }
        Ok(store)
    }

    fn merge_document(&mut self, doc: &TaxonomyDocument) -> Result<()> {
        for d in &doc.domains {
            if self.domains.contains_key(&d.name) {
                return Err(TaxonomyError::DuplicateDomain(d.name.clone()));
            }
            let built = DomainTaxonomy::build(d)?;
            self.domains.insert(d.name.clone(), built);
        }
        Ok(())
    }

    pub fn domains(&self) -> impl Iterator<Item = &DomainTaxonomy> {
        self.domains.values()
    }

    pub fn domain(&self, name: &str) -> Result<&DomainTaxonomy> {
        self.domains
            .get(name)
            .ok_or_else(|| TaxonomyError::UnknownDomain(name.to_string()))
    }

    pub fn contains(&self, c: &ConceptId) -> bool {
        self.domains
            .get(&c.domain)
            .is_some_and(|d| d.contains(&c.name))
    }

    /// Resolves `domain:name`, or a bare name that occurs in exactly one domain.
    pub fn resolve(&self, token: &str) -> Result<ConceptId> {
        if let Some((domain, name)) = token.split_once(':') {
            let c = ConceptId::new(domain, name);
            self.domain(domain)?;
            return if self.contains(&c) {
                Ok(c)
            } else {
                Err(TaxonomyError::UnknownConcept(c))
            };
        }
        let hits: Vec<&DomainTaxonomy> = self
            .domains
            .values()
            .filter(|d| d.contains(token))
            .collect();
        match hits.as_slice() {
            [] => Err(TaxonomyError::UnknownName(token.to_string())),
            [d] => Ok(ConceptId::new(d.name(), token)),
            many => Err(TaxonomyError::Ambiguous {
                name: token.to_string(),
                candidates: many
                    .iter()
                    .map(|d| format!("{}:{}", d.name(), token))
                    .collect(),
            }),
        }
    }

    fn locate(&self, c: &ConceptId) -> Result<(&DomainTaxonomy, usize)> {
        let d = self
            .domains
            .get(&c.domain)
            .ok_or_else(|| TaxonomyError::UnknownConcept(c.clone()))?;
        Ok((d, d.idx(c)?))
    }

    fn locate_pair(
        &self,
        c1: &ConceptId,
        c2: &ConceptId,
    ) -> Result<(&DomainTaxonomy, usize, usize)> {
        let (d1, a) = self.locate(c1)?;
        let (_, b) = self.locate(c2)?;
        if c1.domain != c2.domain {
            return Err(TaxonomyError::CrossDomain(c1.clone(), c2.clone()));
        }
        Ok((d1, a, b))
    }

    /// All ancestors of `c` including itself, nearest first; ties by name.
    pub fn ancestors(&self, c: &ConceptId) -> Result<Vec<ConceptId>> {
        let (d, i) = self.locate(c)?;
        Ok(d.ancestors[i]
            .iter()
            .map(|&(a, _)| d.nodes[a].id.clone())
            .collect())
    }

    /// Reflexive, transitive is-a test. Concepts in different domains are
    /// never related.
    pub fn is_a(&self, c: &ConceptId, ancestor: &ConceptId) -> Result<bool> {
        let (d, i) = self.locate(c)?;
        let (_, j) = self.locate(ancestor)?;
        Ok(c.domain == ancestor.domain && d.is_ancestor(i, j))
    }

    pub fn least_common_superconcept(&self, c1: &ConceptId, c2: &ConceptId) -> Result<PathMetrics> {
        let (d, a, b) = self.locate_pair(c1, c2)?;
        let (lcs, n1, n2) = d.metrics(a, b);
        Ok(PathMetrics {
            lcs: d.nodes[lcs].id.clone(),
            n1,
            n2,
            n3: d.depth[lcs],
        })
    }

    pub fn con_sim(&self, c1: &ConceptId, c2: &ConceptId) -> Result<Similarity> {
        let (d, a, b) = self.locate_pair(c1, c2)?;
        Ok(d.sim_idx(a, b))
    }

    /// Same-domain concepts other than `c` whose similarity to `c` is at
    /// least `floor`, best first (ties by name), at most `max_size` of them.
    pub fn neighborhood(
        &self,
        c: &ConceptId,
        max_size: usize,
        floor: f64,
    ) -> Result<Vec<(ConceptId, Similarity)>> {
        self.neighborhood_with(Execution::default(), c, max_size, floor)
    }

    pub fn neighborhood_with(
        &self,
        exec: Execution,
        c: &ConceptId,
        max_size: usize,
        floor: f64,
    ) -> Result<Vec<(ConceptId, Similarity)>> {
        let (d, i) = self.locate(c)?;
        let others: Vec<usize> = (0..d.nodes.len()).filter(|&j| j != i).collect();
        let sims = exec.map(&others, |&j| (j, d.sim_idx(i, j)));
        let mut hits: Vec<(ConceptId, Similarity)> = sims
            .into_iter()
            .filter(|(_, s)| similarity_to_f64(*s) >= floor)
            .map(|(j, s)| (d.nodes[j].id.clone(), s))
            .collect();
        hits.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.name.cmp(&b.0.name)));
        hits.truncate(max_size);
        Ok(hits)
    }

    /// Full pairwise similarity matrix of one domain, rows and columns in
    /// document order.
    pub fn similarity_matrix(&self, domain: &str, exec: Execution) -> Result<Vec<Vec<Similarity>>> {
        let d = self.domain(domain)?;
        let rows: Vec<usize> = (0..d.nodes.len()).collect();
        Ok(exec.map(&rows, |&i| {
            (0..d.nodes.len()).map(|j| d.sim_idx(i, j)).collect()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(json: &str) -> TaxonomyStore {
        TaxonomyStore::load(json).unwrap()
    }

    fn tree_abc() -> TaxonomyStore {
        store(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root","parents":[]},
                {"id":"A","parents":["root"]},
                {"id":"B","parents":["A"]},
                {"id":"C","parents":["A"]}]}]}"#,
        )
    }

    fn c(name: &str) -> ConceptId {
        ConceptId::new("d", name)
    }

    #[test]
    fn minimal_document() {
        let s = store(
            r#"{"domains":[{"name":"change-of-state","concepts":[
                {"id":"root","label":"r","parents":[]},
                {"id":"A","parents":["root"]},
                {"id":"B","parents":["root"]}]}]}"#,
        );
        assert_eq!(s.domains().count(), 1);
        assert_eq!(s.domain("change-of-state").unwrap().len(), 3);
        assert_eq!(s.domain("change-of-state").unwrap().root().name, "root");
    }

    #[test]
    fn dangling_parent_names_concept() {
        let err = TaxonomyStore::load(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root"},{"id":"A","parents":["ghost"]}]}]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            TaxonomyError::DanglingParent {
                domain: "d".into(),
                concept: "A".into(),
                parent: "ghost".into()
            }
        );
        assert!(err.to_string().contains("\"A\""));
    }

    #[test]
    fn load_errors() {
        let dup = r#"{"domains":[{"name":"d","concepts":[{"id":"r"},{"id":"r"}]}]}"#;
        assert!(matches!(
            TaxonomyStore::load(dup),
            Err(TaxonomyError::DuplicateConcept { .. })
        ));

        let two_roots = r#"{"domains":[{"name":"d","concepts":[{"id":"r"},{"id":"s"}]}]}"#;
        assert_eq!(
            TaxonomyStore::load(two_roots).unwrap_err(),
            TaxonomyError::MultipleRoots {
                domain: "d".into(),
                roots: vec!["r".into(), "s".into()]
            }
        );

        let no_root = r#"{"domains":[{"name":"d","concepts":[
            {"id":"a","parents":["b"]},{"id":"b","parents":["a"]}]}]}"#;
        assert_eq!(
            TaxonomyStore::load(no_root).unwrap_err(),
            TaxonomyError::NoRoot("d".into())
        );

        let cycle = r#"{"domains":[{"name":"d","concepts":[
            {"id":"r"},{"id":"a","parents":["r","c"]},{"id":"b","parents":["a"]},
            {"id":"c","parents":["b"]},{"id":"x","parents":["c"]}]}]}"#;
        match TaxonomyStore::load(cycle).unwrap_err() {
            TaxonomyError::Cycle { domain, concept } => {
                assert_eq!(domain, "d");
                assert!(["a", "b", "c"].contains(&concept.as_str()));
            }
            e => panic!("unexpected {e:?}"),
        }

        let self_loop =
            r#"{"domains":[{"name":"d","concepts":[{"id":"r"},{"id":"a","parents":["a"]}]}]}"#;
        assert!(matches!(
            TaxonomyStore::load(self_loop),
            Err(TaxonomyError::Cycle { .. })
        ));

        let space = r#"{"domains":[{"name":"d","concepts":[{"id":"a b"}]}]}"#;
        assert!(matches!(
            TaxonomyStore::load(space),
            Err(TaxonomyError::InvalidToken { .. })
        ));

        let empty = r#"{"domains":[{"name":"d","concepts":[]}]}"#;
        assert!(matches!(
            TaxonomyStore::load(empty),
            Err(TaxonomyError::EmptyDomain(_))
        ));

        assert!(matches!(
            TaxonomyStore::load("{"),
            Err(TaxonomyError::Malformed(_))
        ));
        assert!(matches!(
            TaxonomyStore::load(r#"{"domains":[],"extra":1}"#),
            Err(TaxonomyError::Malformed(_))
        ));
    }

    #[test]
    fn duplicate_domain_across_documents() {
        let doc = r#"{"domains":[{"name":"d","concepts":[{"id":"r"}]}]}"#;
        assert_eq!(
            TaxonomyStore::load_many([doc, doc]).unwrap_err(),
            TaxonomyError::DuplicateDomain("d".into())
        );
    }

    #[test]
    fn ancestors_order() {
        let s = tree_abc();
        assert_eq!(s.ancestors(&c("root")).unwrap(), vec![c("root")]);
        assert_eq!(
            s.ancestors(&c("B")).unwrap(),
            vec![c("B"), c("A"), c("root")]
        );

        let diamond = store(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root"},{"id":"B","parents":["root"]},{"id":"A","parents":["root"]},
                {"id":"C","parents":["B","A"]}]}]}"#,
        );
        assert_eq!(
            diamond.ancestors(&c("C")).unwrap(),
            vec![c("C"), c("A"), c("B"), c("root")]
        );
        assert!(matches!(
            s.ancestors(&c("Z")),
            Err(TaxonomyError::UnknownConcept(_))
        ));
    }

    #[test]
    fn lcs_examples() {
        let s = tree_abc();
        let m = s.least_common_superconcept(&c("B"), &c("B")).unwrap();
        assert_eq!((m.lcs.name.as_str(), m.n1, m.n2, m.n3), ("B", 0, 0, 3));
        let m = s.least_common_superconcept(&c("B"), &c("C")).unwrap();
        assert_eq!((m.lcs.name.as_str(), m.n1, m.n2, m.n3), ("A", 1, 1, 2));

        let chain = store(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root"},{"id":"A","parents":["root"]},{"id":"B","parents":["A"]}]}]}"#,
        );
        let m = chain
            .least_common_superconcept(&c("root"), &c("B"))
            .unwrap();
        assert_eq!((m.lcs.name.as_str(), m.n1, m.n2, m.n3), ("root", 0, 2, 1));
        assert_eq!(
            chain.con_sim(&c("root"), &c("B")).unwrap(),
            Ratio::new(1, 2)
        );
    }

    #[test]
    fn con_sim_examples() {
        let s = tree_abc();
        assert_eq!(s.con_sim(&c("B"), &c("B")).unwrap(), Ratio::from_integer(1));
        assert_eq!(s.con_sim(&c("B"), &c("C")).unwrap(), Ratio::new(2, 3));
        // lcs A, n1 = 1, n2 = 0, n3 = 2.
        assert_eq!(s.con_sim(&c("B"), &c("A")).unwrap(), Ratio::new(4, 5));
    }

    #[test]
    fn diamond_lcs_prefers_deeper_then_name() {
        // root -> {A, B} -> {X, Y}; both A and B are common, equal depth.
        let s = store(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root"},{"id":"B","parents":["root"]},{"id":"A","parents":["root"]},
                {"id":"X","parents":["A","B"]},{"id":"Y","parents":["A","B"]}]}]}"#,
        );
        let m = s.least_common_superconcept(&c("X"), &c("Y")).unwrap();
        assert_eq!((m.lcs.name.as_str(), m.n1, m.n2, m.n3), ("A", 1, 1, 2));
    }

    #[test]
    fn depth_uses_longest_path() {
        // root -> A -> B -> C and root -> C: C has depth 4.
        let s = store(
            r#"{"domains":[{"name":"d","concepts":[
                {"id":"root"},{"id":"A","parents":["root"]},{"id":"B","parents":["A"]},
                {"id":"C","parents":["B","root"]}]}]}"#,
        );
        let d = s.domain("d").unwrap();
        assert_eq!(d.depth("C"), Some(4));
        let m = s.least_common_superconcept(&c("C"), &c("C")).unwrap();
        assert_eq!(m.n3, 4);
        // Shortest upward distance from C to root is one edge.
        let m = s.least_common_superconcept(&c("C"), &c("root")).unwrap();
        assert_eq!((m.n1, m.n2, m.n3), (1, 0, 1));
    }

    #[test]
    fn cross_domain_is_an_error() {
        let s = store(
            r#"{"domains":[{"name":"d","concepts":[{"id":"r"}]},{"name":"e","concepts":[{"id":"r"}]}]}"#,
        );
        let err = s
            .con_sim(&ConceptId::new("d", "r"), &ConceptId::new("e", "r"))
            .unwrap_err();
        assert!(matches!(err, TaxonomyError::CrossDomain(_, _)));
        assert!(matches!(
            s.resolve("r"),
            Err(TaxonomyError::Ambiguous { .. })
        ));
        assert_eq!(s.resolve("e:r").unwrap(), ConceptId::new("e", "r"));
        assert!(matches!(s.resolve("q"), Err(TaxonomyError::UnknownName(_))));
    }

    #[test]
    fn neighborhood_cases() {
        let single = store(r#"{"domains":[{"name":"d","concepts":[{"id":"r"}]}]}"#);
        assert!(single.neighborhood(&c("r"), 10, 0.0).unwrap().is_empty());

        let s = tree_abc();
        let above = s.neighborhood(&c("B"), 10, 0.7).unwrap();
        assert_eq!(above, vec![(c("A"), Ratio::new(4, 5))]);
        assert!(s.neighborhood(&c("B"), 10, 0.81).unwrap().is_empty());
        let all = s.neighborhood(&c("B"), 10, 0.0).unwrap();
        let names: Vec<&str> = all.iter().map(|(c, _)| c.name.as_str()).collect();
        // A is 4/5, C is 2/3, root is 2/4.
        assert_eq!(names, ["A", "C", "root"]);
        assert_eq!(all[2].1, Ratio::new(1, 2));
        assert_eq!(s.neighborhood(&c("B"), 1, 0.0).unwrap().len(), 1);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = tree_abc();
        assert_eq!(
            s.similarity_matrix("d", Execution::Sequential).unwrap(),
            s.similarity_matrix("d", Execution::Parallel).unwrap()
        );
        assert_eq!(
            s.neighborhood_with(Execution::Sequential, &c("B"), 5, 0.0)
                .unwrap(),
            s.neighborhood_with(Execution::Parallel, &c("B"), 5, 0.0)
                .unwrap()
        );
    }

    #[test]
    fn is_a_is_reflexive_and_transitive() {
        let s = tree_abc();
        assert!(s.is_a(&c("B"), &c("B")).unwrap());
        assert!(s.is_a(&c("B"), &c("root")).unwrap());
        assert!(!s.is_a(&c("B"), &c("C")).unwrap());
        assert!(!s.is_a(&c("A"), &c("B")).unwrap());
    }
}
