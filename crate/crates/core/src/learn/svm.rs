//! RBF-kernel C-SVM trained by SMO with second-order working-set
//! selection, combined one-vs-rest.

use std::collections::{HashMap, VecDeque};

const EPS: f64 = 1e-3;
const TAU: f64 = 1e-12;
/// Kernel-row cache budget in bytes.
const CACHE_BYTES: usize = 256 << 20;

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

struct KernelRows<'a> {
    x: &'a [Vec<f64>],
    gamma: f64,
    capacity: usize,
    rows: HashMap<usize, Vec<f64>>,
    order: VecDeque<usize>,
}

impl<'a> KernelRows<'a> {
    fn new(x: &'a [Vec<f64>], gamma: f64) -> Self {
        let capacity = (CACHE_BYTES / (8 * x.len().max(1))).max(2);
        Self {
            x,
            gamma,
            capacity,
            rows: HashMap::new(),
            order: VecDeque::new(),
        }
    }

    fn row(&mut self, i: usize) -> &[f64] {
        if !self.rows.contains_key(&i) {
            if self.rows.len() >= self.capacity {
                if let Some(old) = self.order.pop_front() {
                    self.rows.remove(&old);
                }
            }
            let xi = &self.x[i];
            let r = self.x.iter().map(|xj| rbf(xi, xj, self.gamma)).collect();
            self.rows.insert(i, r);
            self.order.push_back(i);
        }
        &self.rows[&i]
    }
}

/// A binary machine: f(x) = Σ coef_t K(sv_t, x) − rho.
#[derive(Debug, Clone)]
struct Binary {
    support: Vec<usize>,
    coef: Vec<f64>,
    rho: f64,
}

/// Solves the dual for labels `y` ∈ {−1, +1}.
fn solve(kernel: &mut KernelRows<'_>, y: &[f64], c: f64) -> Binary {
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = (100 * n).max(10_000_000);
    let up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    for _ in 0..max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) && (i == usize::MAX || -y[t] * grad[t] > gmax) {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        if i == usize::MAX {
            break;
        }
        let ki: Vec<f64> = kernel.row(i).to_vec();
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut obj_min = f64::INFINITY;
        for t in 0..n {
            if !low(alpha[t], y[t]) {
                continue;
            }
            gmax2 = gmax2.max(y[t] * grad[t]);
            let b = gmax + y[t] * grad[t];
            if b > 0.0 {
                let a = (ki[i] + 1.0 - 2.0 * ki[t]).max(TAU);
                let obj = -(b * b) / a;
                if obj < obj_min {
                    obj_min = obj;
                    j = t;
                }
            }
        }
        if gmax + gmax2 < EPS || j == usize::MAX {
            break;
        }
        let kj: Vec<f64> = kernel.row(j).to_vec();
        let (yi, yj) = (y[i], y[j]);
        let qij = yi * yj * ki[j];
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if yi != yj {
            let quad = (ki[i] + kj[j] + 2.0 * qij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (ki[i] + kj[j] - 2.0 * qij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (yi * ki[t] * di + yj * kj[t] * dj);
        }
    }

    // rho from free vectors, else the midpoint of the feasible interval.
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    };

    let support: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    let coef = support.iter().map(|&t| alpha[t] * y[t]).collect();
    Binary { support, coef, rho }
}

#[derive(Debug, Clone)]
pub(crate) struct Svm {
    x: Vec<Vec<f64>>,
    gamma: f64,
    machines: Vec<Binary>,
}

impl Svm {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, c: f64, gamma: f64) -> Self {
        let mut kernel = KernelRows::new(x, gamma);
        let machines = (0..n_classes)
            .map(|k| {
                let yk: Vec<f64> = y.iter().map(|&v| if v == k { 1.0 } else { -1.0 }).collect();
                solve(&mut kernel, &yk, c)
            })
            .collect();
        Self {
            x: x.to_vec(),
            gamma,
            machines,
        }
    }

    fn decision(&self, m: &Binary, q: &[f64]) -> f64 {
        m.support
            .iter()
            .zip(&m.coef)
            .map(|(&t, a)| a * rbf(&self.x[t], q, self.gamma))
            .sum::<f64>()
            - m.rho
    }

    pub(crate) fn predict(&self, q: &[f64]) -> usize {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (k, m) in self.machines.iter().enumerate() {
            let v = self.decision(m, q);
            if v > best_v {
                best = k;
                best_v = v;
            }
        }
        best
    }
}
