//! Domain types shared by scoring, search, sampling and I/O.
//!
//! Everything here is immutable once built, so score tables can be handed to
//! any number of worker threads behind an `Arc` or a plain shared borrow.

use std::cmp::Ordering as CmpOrdering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A validated, integer-coded discrete data matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    arities: Vec<usize>,
    rows: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
    columns: Vec<Vec<u32>>,
}

impl Dataset {
    /// Validates raw rows. When `arities` is `None` each column's arity is
    /// inferred as its maximum observed code plus one (1 for an empty column).
    pub fn new(
        num_vars: usize,
        rows: Vec<Vec<usize>>,
        arities: Option<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::NoVariables);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != num_vars {
                return Err(Error::RaggedRow { row: r, found: row.len(), expected: num_vars });
            }
        }
        let arities = match arities {
            Some(a) => {
                if a.len() != num_vars {
                    return Err(Error::InvalidConfig(format!(
                        "{} arities declared for {} variables",
                        a.len(),
                        num_vars
                    )));
                }
                if let Some(i) = a.iter().position(|&x| x == 0) {
                    return Err(Error::InvalidConfig(format!("variable {i} has arity 0")));
                }
                a
            }
            None => {
                let mut a = vec![1usize; num_vars];
                for row in &rows {
                    for (slot, &code) in a.iter_mut().zip(row) {
                        *slot = (*slot).max(code + 1);
                    }
                }
                a
            }
        };
        for (r, row) in rows.iter().enumerate() {
            for (c, (&code, &arity)) in row.iter().zip(&arities).enumerate() {
                if code >= arity {
                    return Err(Error::CodeOutOfRange { row: r, column: c, code, arity });
                }
            }
        }
        if let Some(n) = &names {
            if n.len() != num_vars {
                return Err(Error::InvalidConfig(format!("{} names given for {} variables", n.len(), num_vars)));
            }
        }
        let columns = (0..num_vars).map(|c| rows.iter().map(|row| row[c] as u32).collect()).collect();
        Ok(Dataset { arities, rows, names, columns })
    }

    pub fn num_vars(&self) -> usize {
        self.arities.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Column-major view of variable `var`.
    pub fn column(&self, var: usize) -> &[u32] {
        &self.columns[var]
    }

    /// Variable names, synthesizing `V0..V(n-1)` when none were given.
    pub fn names_or_default(&self) -> Vec<String> {
        match &self.names {
            Some(n) => n.clone(),
            None => default_names(self.num_vars()),
        }
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("V{i}")).collect()
}

/// A candidate parent set: strictly increasing node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParentSet(Vec<usize>);

impl ParentSet {
    pub fn empty() -> Self {
        ParentSet(Vec::new())
    }

    /// Sorts the members and rejects duplicates.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::UnsortedParentSet(members));
        }
        Ok(ParentSet(members))
    }

    /// Caller guarantees `members` is strictly increasing.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ParentSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn is_subset_of(&self, other: &ParentSet) -> bool {
        self.0.iter().all(|p| other.contains(*p))
    }
}

impl fmt::Display for ParentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredParentSet {
    pub parents: ParentSet,
    pub score: f64,
}

impl ScoredParentSet {
    pub fn new(parents: ParentSet, score: f64) -> Self {
        ScoredParentSet { parents, score }
    }
}

/// Canonical entry order: score descending, then parent list ascending.
pub fn canonical_cmp(a: &ScoredParentSet, b: &ScoredParentSet) -> CmpOrdering {
    b.score.total_cmp(&a.score).then_with(|| a.parents.cmp(&b.parents))
}

/// Ranked candidate parent sets of a single node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeScoreTable {
    node: usize,
    entries: Vec<ScoredParentSet>,
}

impl NodeScoreTable {
    /// Sorts `entries` canonically and checks the table invariants: finite
    /// scores, no self-parent, no repeated parent set, empty set present.
    pub fn new(node: usize, mut entries: Vec<ScoredParentSet>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            if !e.score.is_finite() {
                return Err(Error::MalformedTable { node, reason: format!("non-finite score for {}", e.parents) });
            }
            if e.parents.contains(node) {
                return Err(Error::SelfParent(node));
            }
            if !seen.insert(&e.parents) {
                return Err(Error::MalformedTable { node, reason: format!("parent set {} listed twice", e.parents) });
            }
        }
        if !entries.iter().any(|e| e.parents.is_empty()) {
            return Err(Error::MissingEmptySet(node));
        }
        entries.sort_by(canonical_cmp);
        Ok(NodeScoreTable { node, entries })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn entries(&self) -> &[ScoredParentSet] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn score_of(&self, parents: &ParentSet) -> Option<f64> {
        self.entries.iter().find(|e| &e.parents == parents).map(|e| e.score)
    }

    /// 1-based rank of the empty parent set.
    pub fn empty_rank(&self) -> usize {
        self.entries.iter().position(|e| e.parents.is_empty()).expect("table invariant: empty set present") + 1
    }
}

/// One ranked table per node, indexed by node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    tables: Vec<NodeScoreTable>,
    names: Vec<String>,
}

impl ScoreTable {
    pub fn new(tables: Vec<NodeScoreTable>, names: Option<Vec<String>>) -> Result<Self> {
        let n = tables.len();
        if n == 0 {
            return Err(Error::NoVariables);
        }
        for (i, t) in tables.iter().enumerate() {
            if t.node != i {
                return Err(Error::MalformedTable {
                    node: i,
                    reason: format!("table at slot {i} describes node {}", t.node),
                });
            }
            for e in &t.entries {
                if let Some(&p) = e.parents.members().iter().find(|&&p| p >= n) {
                    return Err(Error::InvalidIndex { index: p, num_vars: n });
                }
            }
        }
        let names = match names {
            Some(names) if names.len() == n => names,
            Some(names) => return Err(Error::InvalidConfig(format!("{} names given for {n} variables", names.len()))),
            None => default_names(n),
        };
        Ok(ScoreTable { tables, names })
    }

    pub fn num_vars(&self) -> usize {
        self.tables.len()
    }

    pub fn node(&self, i: usize) -> &NodeScoreTable {
        &self.tables[i]
    }

    pub fn tables(&self) -> &[NodeScoreTable] {
        &self.tables
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Total number of retained candidate parent sets.
    pub fn total_entries(&self) -> usize {
        self.tables.iter().map(NodeScoreTable::len).sum()
    }

    /// Sum of table scores for the parent sets of `dag`, or `None` when some
    /// parent set is not listed.
    pub fn score_dag(&self, dag: &Dag) -> Option<f64> {
        dag.parents.iter().enumerate().map(|(i, ps)| self.tables[i].score_of(ps)).sum()
    }
}

/// A total order on nodes; position 0 has no predecessors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    pub fn new(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut seen = vec![false; n];
        for &v in &sequence {
            if v >= n || seen[v] {
                return Err(Error::InvalidConfig(format!("{sequence:?} is not a permutation of 0..{n}")));
            }
            seen[v] = true;
        }
        Ok(Ordering(sequence))
    }

    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    pub(crate) fn from_vec_unchecked(sequence: Vec<usize>) -> Self {
        Ordering(sequence)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[node]` is the index of `node` in the sequence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn is_permutation(&self) -> bool {
        Ordering::new(self.0.clone()).is_ok()
    }
}

/// A learned structure: one parent set per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    pub parents: Vec<ParentSet>,
    pub score: f64,
}

impl Dag {
    pub fn num_vars(&self) -> usize {
        self.parents.len()
    }

    /// Kahn peeling; `false` when some node is never freed.
    pub fn check_acyclic(&self) -> bool {
        check_acyclic(&self.parents)
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(ParentSet::len).sum()
    }

    pub fn average_indegree(&self) -> f64 {
        if self.parents.is_empty() {
            return 0.0;
        }
        self.edge_count() as f64 / self.parents.len() as f64
    }
}

/// True iff the directed graph `parent -> child` given by `parents` has a
/// topological order. Parent indices must be in range.
pub fn check_acyclic(parents: &[ParentSet]) -> bool {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(ParentSet::len).collect();
    let mut children = vec![Vec::new(); n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps.members() {
            children[p].push(child);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut freed = 0;
    while let Some(v) = queue.pop_front() {
        freed += 1;
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    freed == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[usize]) -> ParentSet {
        ParentSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn infers_arities() {
        let d = Dataset::new(2, vec![vec![0, 1], vec![1, 0]], None, None).unwrap();
        assert_eq!(d.arities(), &[2, 2]);
    }

    #[test]
    fn ragged_row_rejected() {
        let err = Dataset::new(2, vec![vec![0, 1, 2]], None, None).unwrap_err();
        assert!(matches!(err, Error::RaggedRow { row: 0, found: 3, expected: 2 }));
    }

    #[test]
    fn code_out_of_range_rejected() {
        let err = Dataset::new(2, vec![vec![3, 0]], Some(vec![2, 2]), None).unwrap_err();
        assert!(matches!(err, Error::CodeOutOfRange { code: 3, arity: 2, .. }));
    }

    #[test]
    fn zero_variables_rejected() {
        assert!(matches!(Dataset::new(0, vec![], None, None), Err(Error::NoVariables)));
    }

    #[test]
    fn acyclicity() {
        assert!(check_acyclic(&[ps(&[]), ps(&[0]), ps(&[1])]));
        assert!(!check_acyclic(&[ps(&[1]), ps(&[0])]));
        assert!(check_acyclic(&[ps(&[]), ps(&[]), ps(&[0, 1])]));
    }

    #[test]
    fn node_table_sorted_with_ties_broken_lexicographically() {
        let t = NodeScoreTable::new(
            0,
            vec![
                ScoredParentSet::new(ps(&[2]), -1.0),
                ScoredParentSet::new(ps(&[]), -3.0),
                ScoredParentSet::new(ps(&[1]), -1.0),
                ScoredParentSet::new(ps(&[1, 2]), -0.5),
            ],
        )
        .unwrap();
        let order: Vec<_> = t.entries().iter().map(|e| e.parents.clone()).collect();
        assert_eq!(order, vec![ps(&[1, 2]), ps(&[1]), ps(&[2]), ps(&[])]);
        assert_eq!(t.empty_rank(), 4);
    }

    #[test]
    fn node_table_rejects_bad_entries() {
        assert!(matches!(
            NodeScoreTable::new(0, vec![ScoredParentSet::new(ps(&[1]), -1.0)]),
            Err(Error::MissingEmptySet(0))
        ));
        assert!(matches!(
            NodeScoreTable::new(1, vec![ScoredParentSet::new(ps(&[]), -1.0), ScoredParentSet::new(ps(&[1]), -1.0)]),
            Err(Error::SelfParent(1))
        ));
        assert!(NodeScoreTable::new(0, vec![ScoredParentSet::new(ps(&[]), f64::NAN)]).is_err());
    }

    #[test]
    fn ordering_must_be_permutation() {
        assert!(Ordering::new(vec![2, 0, 1]).is_ok());
        assert!(Ordering::new(vec![0, 0, 1]).is_err());
        assert!(Ordering::new(vec![0, 3, 1]).is_err());
        assert_eq!(Ordering::new(vec![2, 0, 1]).unwrap().positions(), vec![1, 2, 0]);
    }

    #[test]
    fn parent_set_rejects_duplicates() {
        assert!(ParentSet::new(vec![1, 1]).is_err());
        assert_eq!(ParentSet::new(vec![3, 1]).unwrap().members(), &[1, 3]);
    }
}
