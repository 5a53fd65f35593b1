//! Finite labelled partial orders and the combinatorial queries the
//! multiplicity recursions depend on: reflexive-transitive closure, strict
//! comparison, immediate predecessors, a deterministic linear extension,
//! height and the tree test.
//!
//! Labels are opaque strings; every matrix in the rest of the crate indexes
//! by position in the label list.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or querying a poset.
#[derive(Debug, Error)]
pub enum PosetError {
    #[error("label list must not be empty")]
    EmptyLabels,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("order relations are cyclic: `{a}` and `{b}` lie below each other")]
    Cycle { a: String, b: String },
}

/// Generating data for a poset: a label list plus relation pairs `(a, b)`
/// meaning `a ⊴ b`. Relations are generators only — they need not be
/// transitively closed, and reflexive pairs are accepted and ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub labels: Vec<String>,
    pub relations: Vec<(String, String)>,
}

/// A finite poset with precomputed reflexive-transitive closure, immediate
/// predecessor sets and a deterministic linear extension.
///
/// Immutable after construction; safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major closure; `leq[i * n + j]` iff `i ⊴ j`.
    leq: Vec<bool>,
    /// `ipred[i]`: maximal elements strictly below `i`, ascending by index.
    ipred: Vec<Vec<usize>>,
    /// Permutation of indices placing `j` before `i` whenever `j ◁ i`.
    /// Ties among incomparables are broken by input label order.
    linext: Vec<usize>,
}

/// Summary invariants of a poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetStats {
    /// Cardinality of a longest chain.
    pub height: usize,
    /// Indices of the minimal elements.
    pub minimal: Vec<usize>,
    /// True when every down-set `{j : j ⊴ i}` is a chain.
    pub is_tree: bool,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `spec` together with the
    /// derived queries. Fails on empty or duplicate labels, on relation
    /// endpoints missing from the label list, and on cycles (closure would
    /// violate antisymmetry).
    pub fn build(spec: &PosetSpec) -> Result<Self, PosetError> {
        if spec.labels.is_empty() {
            return Err(PosetError::EmptyLabels);
        }
        let n = spec.labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in spec.labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(PosetError::DuplicateLabel(label.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in &spec.relations {
            let ia = *index
                .get(a)
                .ok_or_else(|| PosetError::UnknownLabel(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| PosetError::UnknownLabel(b.clone()))?;
            leq[ia * n + ib] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(PosetError::Cycle {
                        a: spec.labels[i].clone(),
                        b: spec.labels[j].clone(),
                    });
                }
            }
        }
        Ok(Self::from_closure(spec.labels.clone(), index, leq))
    }

    /// Assembles the derived data from an already valid closure matrix.
    fn from_closure(labels: Vec<String>, index: HashMap<String, usize>, leq: Vec<bool>) -> Self {
        let n = labels.len();
        let lt = |i: usize, j: usize| i != j && leq[i * n + j];
        let mut ipred = Vec::with_capacity(n);
        for i in 0..n {
            let below: Vec<usize> = (0..n).filter(|&j| lt(j, i)).collect();
            let preds = below
                .iter()
                .copied()
                .filter(|&j| below.iter().all(|&m| !lt(j, m)))
                .collect();
            ipred.push(preds);
        }
        // Repeatedly place the smallest-index element whose strict
        // predecessors are all placed.
        let mut linext = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while linext.len() < n {
            let next = (0..n)
                .find(|&i| !placed[i] && (0..n).all(|j| placed[j] || !lt(j, i)))
                .expect("closure is acyclic");
            placed[next] = true;
            linext.push(next);
        }
        Self {
            labels,
            index,
            leq,
            ipred,
            linext,
        }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `i ⊴ j` by index.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.labels.len() + j]
    }

    /// `i ◁ j`: strictly below.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Maximal elements strictly below `i`, by index.
    pub fn immediate_predecessors(&self, i: usize) -> &[usize] {
        &self.ipred[i]
    }

    /// Label-level variant of [`Poset::immediate_predecessors`].
    pub fn immediate_predecessors_by_label(&self, label: &str) -> Result<Vec<&str>, PosetError> {
        let i = self
            .index_of(label)
            .ok_or_else(|| PosetError::UnknownLabel(label.to_string()))?;
        Ok(self.ipred[i].iter().map(|&j| self.label(j)).collect())
    }

    /// A linear extension: `j ◁ i` implies `j` appears before `i`.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linext
    }

    /// Height, minimal elements and the tree test (every down-set a chain).
    pub fn stats(&self) -> PosetStats {
        let n = self.labels.len();
        let mut depth = vec![0usize; n];
        for &i in &self.linext {
            let best = (0..n)
                .filter(|&j| self.lt(j, i))
                .map(|j| depth[j])
                .max()
                .unwrap_or(0);
            depth[i] = best + 1;
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        let minimal = (0..n).filter(|&i| self.ipred[i].is_empty()).collect();
        let mut is_tree = true;
        'outer: for i in 0..n {
            for j in 0..n {
                if !self.leq(j, i) {
                    continue;
                }
                for k in (j + 1)..n {
                    if self.leq(k, i) && !self.leq(j, k) && !self.leq(k, j) {
                        is_tree = false;
                        break 'outer;
                    }
                }
            }
        }
        PosetStats {
            height,
            minimal,
            is_tree,
        }
    }

    /// The same labels under the reversed order.
    pub fn opposite(&self) -> Poset {
        let n = self.labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(j, i);
            }
        }
        Self::from_closure(self.labels.clone(), self.index.clone(), leq)
    }

    /// All strict pairs `(a, b)` with `a ◁ b`, in index order. Feeding these
    /// back through [`Poset::build`] reproduces the same poset.
    pub fn strict_pairs(&self) -> Vec<(String, String)> {
        let n = self.labels.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) {
                    pairs.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        pairs
    }

    /// The closure re-expressed as a spec (see [`Poset::strict_pairs`]).
    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            labels: self.labels.clone(),
            relations: self.strict_pairs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(labels: &[&str], relations: &[(&str, &str)]) -> PosetSpec {
        PosetSpec {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            relations: relations
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }

    fn chain(n: usize) -> PosetSpec {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let relations = (1..n)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        PosetSpec { labels, relations }
    }

    fn diamond() -> PosetSpec {
        spec(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
    }

    #[test]
    fn closure_is_transitive() {
        let p = Poset::build(&spec(&["1", "2", "3"], &[("1", "2"), ("2", "3")])).unwrap();
        assert!(p.leq(0, 2));
        assert!(p.lt(0, 2));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = Poset::build(&spec(&["a", "b"], &[("a", "b"), ("b", "a")])).unwrap_err();
        assert!(matches!(err, PosetError::Cycle { .. }));
    }

    #[test]
    fn dangling_relation_is_rejected() {
        let err = Poset::build(&spec(&["a"], &[("a", "b")])).unwrap_err();
        assert!(matches!(err, PosetError::UnknownLabel(l) if l == "b"));
    }

    #[test]
    fn duplicate_and_empty_labels_are_rejected() {
        assert!(matches!(
            Poset::build(&spec(&["a", "a"], &[])),
            Err(PosetError::DuplicateLabel(_))
        ));
        assert!(matches!(
            Poset::build(&spec(&[], &[])),
            Err(PosetError::EmptyLabels)
        ));
    }

    #[test]
    fn reflexive_generators_are_ignored() {
        let p = Poset::build(&spec(&["a", "b"], &[("a", "a"), ("a", "b")])).unwrap();
        assert!(p.lt(0, 1));
        assert!(!p.lt(0, 0));
    }

    #[test]
    fn chain_linear_extension_is_identity() {
        let p = Poset::build(&chain(4)).unwrap();
        assert_eq!(p.linear_extension(), &[0, 1, 2, 3]);
    }

    #[test]
    fn antichain_linear_extension_is_identity() {
        let p = Poset::build(&spec(&["x", "y", "z"], &[])).unwrap();
        assert_eq!(p.linear_extension(), &[0, 1, 2]);
    }

    #[test]
    fn diamond_linear_extension_breaks_ties_by_input_order() {
        // Input order (d, b, c, a): a must come first, d last, b before c.
        let p = Poset::build(&spec(
            &["d", "b", "c", "a"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        ))
        .unwrap();
        assert_eq!(p.linear_extension(), &[3, 1, 2, 0]);
    }

    #[test]
    fn immediate_predecessors_on_fixtures() {
        let chain4 = Poset::build(&chain(4)).unwrap();
        assert_eq!(chain4.immediate_predecessors(2), &[1]);
        assert_eq!(
            chain4.immediate_predecessors_by_label("3").unwrap(),
            vec!["2"]
        );

        let anti = Poset::build(&spec(&["a", "b"], &[])).unwrap();
        assert!(anti.immediate_predecessors(0).is_empty());

        let d = Poset::build(&diamond()).unwrap();
        let top = d.index_of("d").unwrap();
        assert_eq!(
            d.immediate_predecessors(top),
            &[d.index_of("b").unwrap(), d.index_of("c").unwrap()]
        );
    }

    #[test]
    fn unknown_label_query_errors() {
        let p = Poset::build(&chain(2)).unwrap();
        assert!(matches!(
            p.immediate_predecessors_by_label("9"),
            Err(PosetError::UnknownLabel(_))
        ));
    }

    #[test]
    fn stats_on_fixtures() {
        let anti = Poset::build(&spec(&["1", "2", "3", "4", "5"], &[])).unwrap();
        let s = anti.stats();
        assert_eq!(s.height, 1);
        assert_eq!(s.minimal.len(), 5);
        assert!(s.is_tree);

        for n in 1..=6 {
            let s = Poset::build(&chain(n)).unwrap().stats();
            assert_eq!(s.height, n);
            assert!(s.is_tree);
        }

        let s = Poset::build(&diamond()).unwrap().stats();
        assert_eq!(s.height, 3);
        assert_eq!(s.minimal.len(), 1);
        assert!(!s.is_tree);
    }

    #[test]
    fn opposite_reverses_order() {
        let p = Poset::build(&chain(3)).unwrap().opposite();
        assert!(p.lt(2, 0));
        assert_eq!(p.linear_extension(), &[2, 1, 0]);
        assert_eq!(p.immediate_predecessors(0), &[1]);
    }

    /// Random DAG specs: relations only point from lower to higher input
    /// index, so every draw is acyclic.
    fn random_spec(rng: &mut ChaCha8Rng) -> PosetSpec {
        let n = rng.gen_range(1..=8usize);
        let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let mut relations = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.3) {
                    relations.push((labels[i].clone(), labels[j].clone()));
                }
            }
        }
        PosetSpec { labels, relations }
    }

    #[test]
    fn closure_idempotence_on_random_posets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = Poset::build(&random_spec(&mut rng)).unwrap();
            let again = Poset::build(&p.to_spec()).unwrap();
            assert_eq!(p, again);
        }
    }

    #[test]
    fn immediate_predecessors_are_pairwise_incomparable() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let p = Poset::build(&random_spec(&mut rng)).unwrap();
            for i in 0..p.len() {
                let preds = p.immediate_predecessors(i);
                for (a, &x) in preds.iter().enumerate() {
                    for &y in &preds[a + 1..] {
                        assert!(!p.leq(x, y) && !p.leq(y, x));
                    }
                }
            }
        }
    }

    #[test]
    fn linear_extension_is_topological() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let p = Poset::build(&random_spec(&mut rng)).unwrap();
            let pos: Vec<usize> = {
                let mut pos = vec![0; p.len()];
                for (at, &i) in p.linear_extension().iter().enumerate() {
                    pos[i] = at;
                }
                pos
            };
            for i in 0..p.len() {
                for j in 0..p.len() {
                    if p.lt(j, i) {
                        assert!(pos[j] < pos[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn tree_test_rejects_embedded_diamonds() {
        // A diamond with a pendant above stays non-tree.
        let p = Poset::build(&spec(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
        ))
        .unwrap();
        assert!(!p.stats().is_tree);
    }
}
