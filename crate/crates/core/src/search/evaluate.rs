use crate::error::{Error, Result};
use crate::model::{Dag, NodeScoreTable, Ordering, ParentSet, ScoreTable, ScoredParentSet};

/// The best structure consistent with an ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingEvaluation {
    pub ordering: Ordering,
    /// Chosen parent set of each node, indexed by node.
    pub chosen: Vec<ScoredParentSet>,
    pub total: f64,
}

impl OrderingEvaluation {
    pub fn to_dag(&self) -> Dag {
        Dag { parents: self.chosen.iter().map(|c| c.parents.clone()).collect(), score: self.total }
    }
}

fn admissible(parents: &ParentSet, pos: &[usize], node_pos: usize) -> bool {
    parents.members().iter().all(|&p| pos[p] < node_pos)
}

/// Index of the first entry of `table` whose parents all precede the node.
pub(crate) fn best_index(table: &NodeScoreTable, pos: &[usize]) -> usize {
    best_index_in(table, pos, 0, table.len())
}

fn best_index_in(table: &NodeScoreTable, pos: &[usize], from: usize, to: usize) -> usize {
    let node_pos = pos[table.node()];
    table.entries()[from..to].iter().position(|e| admissible(&e.parents, pos, node_pos)).map(|i| i + from).unwrap_or(to)
}

/// Highest ranked parent set of `node` whose members all precede it in `order`.
pub fn consistent_best_parents(order: &Ordering, node: usize, table: &ScoreTable) -> ScoredParentSet {
    let pos = order.positions();
    let t = table.node(node);
    t.entries()[best_index(t, &pos)].clone()
}

/// Sum over nodes of the best consistent parent set.
pub fn ordering_score(order: &Ordering, table: &ScoreTable) -> OrderingEvaluation {
    let state = WorkingOrder::new(order.sequence().to_vec(), table);
    state.to_evaluation()
}

/// Evaluates `eval`'s ordering with the node at `from` moved to `to`,
/// rescoring only the nodes whose predecessor sets change.
pub fn evaluate_insert(
    eval: &OrderingEvaluation,
    table: &ScoreTable,
    from: usize,
    to: usize,
) -> Result<OrderingEvaluation> {
    let n = eval.ordering.len();
    for p in [from, to] {
        if p >= n {
            return Err(Error::PositionOutOfRange { position: p, len: n });
        }
    }
    let ordering = super::moves::insert_move(&eval.ordering, from, to)?;
    let pos = ordering.positions();
    let mut chosen = eval.chosen.clone();
    for &node in &ordering.sequence()[from.min(to)..=from.max(to)] {
        let t = table.node(node);
        chosen[node] = t.entries()[best_index(t, &pos)].clone();
    }
    let total = chosen.iter().map(|c| c.score).sum();
    Ok(OrderingEvaluation { ordering, chosen, total })
}

/// Mutable search state: an ordering, node positions and the chosen entry
/// index of every node.
#[derive(Debug, Clone)]
pub(crate) struct WorkingOrder<'t> {
    table: &'t ScoreTable,
    pub(crate) order: Vec<usize>,
    pos: Vec<usize>,
    chosen: Vec<usize>,
    pub(crate) total: f64,
}

impl<'t> WorkingOrder<'t> {
    pub(crate) fn new(order: Vec<usize>, table: &'t ScoreTable) -> Self {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let chosen: Vec<usize> = (0..order.len()).map(|v| best_index(table.node(v), &pos)).collect();
        let mut w = WorkingOrder { table, order, pos, chosen, total: 0.0 };
        w.total = w.recompute_total();
        w
    }

    fn score(&self, node: usize, idx: usize) -> f64 {
        self.table.node(node).entries()[idx].score
    }

    fn recompute_total(&self) -> f64 {
        self.chosen.iter().enumerate().map(|(v, &i)| self.score(v, i)).sum()
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }

    /// New best index for `node` after it gained a predecessor: only entries
    /// ranked above the current choice can become admissible.
    fn after_gain(&self, node: usize, current: usize) -> usize {
        best_index_in(self.table.node(node), &self.pos, 0, current)
    }

    /// New best index for `node` after `lost` stopped preceding it.
    fn after_loss(&self, node: usize, current: usize, lost: usize) -> usize {
        let t = self.table.node(node);
        if t.entries()[current].parents.contains(lost) {
            best_index_in(t, &self.pos, current + 1, t.len())
        } else {
            current
        }
    }

    /// Best insert target for the node at position `from`, as
    /// `(score change, target position)`. Positions are restored afterwards.
    pub(crate) fn best_insert_for(&mut self, from: usize) -> (f64, usize) {
        let n = self.len();
        let x = self.order[from];
        let mut best = (0.0, from);

        // Leftwards: x jumps over order[t], which gains x as a predecessor.
        let mut x_idx = self.chosen[x];
        let mut delta = 0.0;
        for t in (0..from).rev() {
            let y = self.order[t];
            self.pos[x] = t;
            self.pos[y] = t + 1;
            let new_x = self.after_loss(x, x_idx, y);
            let y_idx = self.chosen[y];
            let new_y = self.after_gain(y, y_idx);
            delta += self.score(x, new_x) - self.score(x, x_idx) + self.score(y, new_y) - self.score(y, y_idx);
            x_idx = new_x;
            if delta > best.0 {
                best = (delta, t);
            }
        }
        for t in 0..=from {
            self.pos[self.order[t]] = t;
        }

        // Rightwards: x jumps over order[t], which loses x as a predecessor.
        let mut x_idx = self.chosen[x];
        let mut delta = 0.0;
        for t in from + 1..n {
            let y = self.order[t];
            self.pos[x] = t;
            self.pos[y] = t - 1;
            let new_x = self.after_gain(x, x_idx);
            let y_idx = self.chosen[y];
            let new_y = self.after_loss(y, y_idx, x);
            delta += self.score(x, new_x) - self.score(x, x_idx) + self.score(y, new_y) - self.score(y, y_idx);
            x_idx = new_x;
            if delta > best.0 {
                best = (delta, t);
            }
        }
        for t in from..n {
            self.pos[self.order[t]] = t;
        }
        best
    }

    /// Applies an insert move and rescores the affected span exactly.
    pub(crate) fn apply_insert(&mut self, from: usize, to: usize) {
        if from == to {
            return;
        }
        let x = self.order.remove(from);
        self.order.insert(to, x);
        let (lo, hi) = (from.min(to), from.max(to));
        for t in lo..=hi {
            self.pos[self.order[t]] = t;
        }
        for t in lo..=hi {
            let v = self.order[t];
            self.chosen[v] = best_index(self.table.node(v), &self.pos);
        }
        self.total = self.recompute_total();
    }

    /// Score change from swapping positions `i` and `i + 1`.
    pub(crate) fn swap_delta(&mut self, i: usize) -> f64 {
        let (a, b) = (self.order[i], self.order[i + 1]);
        self.pos[a] = i + 1;
        self.pos[b] = i;
        // a gains b; b loses a
        let new_a = self.after_gain(a, self.chosen[a]);
        let new_b = self.after_loss(b, self.chosen[b], a);
        let d =
            self.score(a, new_a) - self.score(a, self.chosen[a]) + self.score(b, new_b) - self.score(b, self.chosen[b]);
        self.pos[a] = i;
        self.pos[b] = i + 1;
        d
    }

    pub(crate) fn apply_swap(&mut self, i: usize) {
        self.apply_insert(i, i + 1);
    }

    pub(crate) fn to_evaluation(&self) -> OrderingEvaluation {
        let chosen = self.chosen.iter().enumerate().map(|(v, &i)| self.table.node(v).entries()[i].clone()).collect();
        OrderingEvaluation { ordering: Ordering::from_vec_unchecked(self.order.clone()), chosen, total: self.total }
    }
}
