//! Random rooted DAGs and a brute-force path oracle shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

pub struct Dag {
    pub names: Vec<String>,
    pub parents: Vec<Vec<usize>>,
}

/// Node 0 is the root; every other node gets one to three parents among the
/// nodes before it. Names are a shuffled labelling so that name order does
/// not follow insertion order.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize) -> Dag {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let names = labels.iter().map(|l| format!("k{l:02}")).collect();
    let mut parents = vec![Vec::new()];
    for i in 1..n {
        let k = rng.gen_range(1..=i.min(3));
        parents.push(sample(rng, i, k).into_vec());
    }
    Dag { names, parents }
}

#[derive(Debug, PartialEq, Eq)]
pub struct Expected {
    pub lcs: String,
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl Dag {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn to_json(&self, domain: &str) -> String {
        let concepts: Vec<_> = self
            .names
            .iter()
            .zip(&self.parents)
            .map(|(name, ps)| json!({"id": name, "parents": ps.iter().map(|&p| &self.names[p]).collect::<Vec<_>>()}))
            .collect();
        json!({"domains": [{"name": domain, "concepts": concepts}]}).to_string()
    }

    /// Shortest upward edge counts between every pair, by Floyd-Warshall.
    pub fn up_distances(&self) -> Vec<Vec<Option<u32>>> {
        const INF: u32 = u32::MAX / 2;
        let n = self.len();
        let mut d = vec![vec![INF; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for &p in &self.parents[i] {
                d[i][p] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = d[i][k];
                if dik == INF {
                    continue;
                }
                for j in 0..n {
                    let via = dik + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d.into_iter()
            .map(|row| row.into_iter().map(|x| (x < INF).then_some(x)).collect())
            .collect()
    }

    /// Nodes on the longest path to the root, by repeated relaxation.
    pub fn depths(&self) -> Vec<u32> {
        let n = self.len();
        let mut depth = vec![1u32; n];
        for _ in 0..n {
            for i in 0..n {
                for &p in &self.parents[i] {
                    depth[i] = depth[i].max(depth[p] + 1);
                }
            }
        }
        depth
    }

    /// Enumerates every common ancestor and keeps the deepest, then the one
    /// with the shortest combined distance, then the first by name.
    pub fn oracle(&self, dist: &[Vec<Option<u32>>], depth: &[u32], a: usize, b: usize) -> Expected {
        let mut best: Option<(u32, u32, usize, u32, u32)> = None;
        for j in 0..self.len() {
            let (Some(n1), Some(n2)) = (dist[a][j], dist[b][j]) else {
                continue;
            };
            let better = match best {
                None => true,
                Some((depth_b, sum_b, k, _, _)) => {
                    depth[j] > depth_b
                        || (depth[j] == depth_b
                            && (n1 + n2 < sum_b
                                || (n1 + n2 == sum_b && self.names[j] < self.names[k])))
                }
            };
            if better {
                best = Some((depth[j], n1 + n2, j, n1, n2));
            }
        }
        let (n3, _, lcs, n1, n2) = best.expect("the root is a common ancestor");
        Expected {
            lcs: self.names[lcs].clone(),
            n1,
            n2,
            n3,
        }
    }
}
