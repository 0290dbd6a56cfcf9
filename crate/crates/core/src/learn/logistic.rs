use nalgebra::{DMatrix, DVector};

const MAX_ITER: usize = 100;
const TOL: f64 = 1e-8;

/// One-vs-rest L2-penalised logistic regression fitted by Newton's method.
/// The intercept is not penalised.
#[derive(Debug, Clone)]
pub(crate) struct Logistic {
    /// Per class: intercept followed by feature weights.
    weights: Vec<Vec<f64>>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Negative log-likelihood plus the L2 penalty.
fn objective(x: &DMatrix<f64>, t: &[f64], w: &DVector<f64>, lambda: f64) -> f64 {
    let z = x * w;
    let nll: f64 = z
        .iter()
        .zip(t)
        .map(|(&zi, &ti)| {
            // log(1 + e^z) - t z, computed without overflow.
            let softplus = if zi > 0.0 { zi + (-zi).exp().ln_1p() } else { zi.exp().ln_1p() };
            softplus - ti * zi
        })
        .sum();
    nll + 0.5 * lambda * w.iter().skip(1).map(|v| v * v).sum::<f64>()
}

fn fit_binary(x: &DMatrix<f64>, t: &[f64], lambda: f64) -> Vec<f64> {
    let (n, p) = x.shape();
    let mut w = DVector::<f64>::zeros(p);
    for _ in 0..MAX_ITER {
        let z = x * &w;
        let prob: Vec<f64> = z.iter().map(|&v| sigmoid(v)).collect();
        let resid = DVector::from_iterator(n, prob.iter().zip(t).map(|(pi, ti)| pi - ti));
        let mut grad = x.tr_mul(&resid);
        let mut weighted = x.clone();
        for (i, pi) in prob.iter().enumerate() {
            weighted.row_mut(i).scale_mut((pi * (1.0 - pi)).max(1e-10));
        }
        let mut h = weighted.tr_mul(x);
        for a in 1..p {
            grad[a] += lambda * w[a];
            h[(a, a)] += lambda;
        }
        // Keeps the intercept direction positive definite on separable data.
        h[(0, 0)] += 1e-10;
        let step = match h.clone().cholesky() {
            Some(c) => c.solve(&grad),
            None => match h.lu().solve(&grad) {
                Some(s) => s,
                None => break,
            },
        };
        // Step halving keeps every iterate a descent step.
        let before = objective(x, t, &w, lambda);
        let mut scale = 1.0;
        let mut next = &w - &step;
        while objective(x, t, &next, lambda) > before && scale > 1e-6 {
            scale *= 0.5;
            next = &w - &step * scale;
        }
        w = next;
        if step.amax() * scale < TOL {
            break;
        }
    }
    w.iter().copied().collect()
}

impl Logistic {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, lambda: f64) -> Self {
        let n = x.len();
        let p = x[0].len() + 1;
        let design = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
        let weights = (0..n_classes)
            .map(|c| {
                let t: Vec<f64> = y.iter().map(|&yi| f64::from(u8::from(yi == c))).collect();
                fit_binary(&design, &t, lambda)
            })
            .collect();
        Self { weights }
    }

    fn score(w: &[f64], x: &[f64]) -> f64 {
        w[0] + w[1..].iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    pub(crate) fn predict(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut best_s = f64::NEG_INFINITY;
        for (c, w) in self.weights.iter().enumerate() {
            let s = Self::score(w, x);
            if s > best_s {
                best = c;
                best_s = s;
            }
        }
        best
    }
}
