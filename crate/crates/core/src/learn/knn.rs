/// Euclidean k-nearest neighbours. Equal distances are ordered by training
/// index; a tied vote goes to the tied class whose member ranks nearest.
#[derive(Debug, Clone)]
pub(crate) struct Knn {
    x: Vec<Vec<f64>>,
    y: Vec<usize>,
    n_classes: usize,
    k: usize,
}

impl Knn {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, k: usize) -> Self {
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            n_classes,
            k: k.min(x.len()),
        }
    }

    pub(crate) fn predict(&self, q: &[f64]) -> usize {
        let mut d: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let neighbours = &d[..self.k];
        let mut votes = vec![0usize; self.n_classes];
        for &(_, i) in neighbours {
            votes[self.y[i]] += 1;
        }
        let top = *votes.iter().max().expect("at least one class");
        neighbours
            .iter()
            .map(|&(_, i)| self.y[i])
            .find(|&c| votes[c] == top)
            .expect("the top class has a neighbour")
    }
}
