//! CART with Gini impurity, and a bagged random forest on top of it.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::model::majority;
use crate::seed;

#[derive(Debug, Clone)]
pub(crate) struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features drawn per split; `None` tries all of them.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(usize),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
}

fn gini_sum(counts: &[usize], n: usize) -> f64 {
    // n · gini = n − Σ c² / n
    if n == 0 {
        return 0.0;
    }
    let sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
    n as f64 - sq / n as f64
}

struct Best {
    score: f64,
    feature: usize,
    threshold: f64,
}

fn best_split_on(
    x: &[Vec<f64>],
    y: &[usize],
    idx: &[usize],
    feature: usize,
    k: usize,
    min_leaf: usize,
    best: &mut Option<Best>,
) {
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]));
    let n = order.len();
    let mut left = vec![0usize; k];
    let mut right = vec![0usize; k];
    for &i in &order {
        right[y[i]] += 1;
    }
    for pos in 0..n - 1 {
        let c = y[order[pos]];
        left[c] += 1;
        right[c] -= 1;
        let nl = pos + 1;
        let (a, b) = (x[order[pos]][feature], x[order[pos + 1]][feature]);
        if a == b || nl < min_leaf || n - nl < min_leaf {
            continue;
        }
        let score = gini_sum(&left, nl) + gini_sum(&right, n - nl);
        if best.as_ref().is_none_or(|bs| score < bs.score) {
            let mid = a + (b - a) / 2.0;
            *best = Some(Best {
                score,
                feature,
                threshold: if mid < b { mid } else { a },
            });
        }
    }
}

impl Tree {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[usize], k: usize, params: &TreeParams, seed: u64) -> Self {
        let idx: Vec<usize> = (0..x.len()).collect();
        Self::fit_indices(x, y, k, params, idx, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn fit_indices(
        x: &[Vec<f64>],
        y: &[usize],
        k: usize,
        params: &TreeParams,
        root: Vec<usize>,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let d = x[0].len();
        let mut nodes = vec![Node::Leaf(0)];
        let mut stack = vec![(0usize, root, 0usize)];
        while let Some((slot, idx, depth)) = stack.pop() {
            let labels: Vec<usize> = idx.iter().map(|&i| y[i]).collect();
            let lead = majority(&labels, k);
            let pure = labels.iter().all(|&c| c == labels[0]);
            let capped = params.max_depth.is_some_and(|m| depth >= m);
            if pure || capped || idx.len() < 2 * params.min_leaf {
                nodes[slot] = Node::Leaf(lead);
                continue;
            }
            let mut best = None;
            match params.max_features {
                Some(m) if m < d => {
                    let drawn = index::sample(rng, d, m).into_vec();
                    for &f in &drawn {
                        best_split_on(x, y, &idx, f, k, params.min_leaf, &mut best);
                    }
                    if best.is_none() {
                        for f in (0..d).filter(|f| !drawn.contains(f)) {
                            best_split_on(x, y, &idx, f, k, params.min_leaf, &mut best);
                        }
                    }
                }
                _ => {
                    for f in 0..d {
                        best_split_on(x, y, &idx, f, k, params.min_leaf, &mut best);
                    }
                }
            }
            let Some(b) = best else {
                nodes[slot] = Node::Leaf(lead);
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) =
                idx.iter().partition(|&&i| x[i][b.feature] <= b.threshold);
            let left = nodes.len();
            nodes.push(Node::Leaf(0));
            let right = nodes.len();
            nodes.push(Node::Leaf(0));
            nodes[slot] = Node::Split {
                feature: b.feature,
                threshold: b.threshold,
                left,
                right,
            };
            stack.push((right, r, depth + 1));
            stack.push((left, l, depth + 1));
        }
        Self { nodes }
    }

    pub(crate) fn predict(&self, q: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf(c) => return *c,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if q[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

/// Bootstrap-aggregated trees; tree `i` draws from its own stream derived
/// from the seed, so the result does not depend on thread scheduling.
#[derive(Debug, Clone)]
pub(crate) struct Forest {
    trees: Vec<Tree>,
    n_classes: usize,
}

impl Forest {
    pub(crate) fn fit(
        x: &[Vec<f64>],
        y: &[usize],
        k: usize,
        params: &TreeParams,
        n_trees: usize,
        seed: u64,
    ) -> Self {
        let n = x.len();
        let trees = (0..n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed::derive(seed, &["tree", &t.to_string()]));
                let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                Tree::fit_indices(x, y, k, params, sample, &mut rng)
            })
            .collect();
        Self { trees, n_classes: k }
    }

    pub(crate) fn predict(&self, q: &[f64]) -> usize {
        let votes: Vec<usize> = self.trees.iter().map(|t| t.predict(q)).collect();
        majority(&votes, self.n_classes)
    }
}
