//! Double-precision reference for the negative-sampling pair loss and its
//! gradient, used to check the trainer's update rule.

/// `log σ(x)` without overflow.
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let dim = rows[0].len();
    let mut h = vec![0.0; dim];
    for r in rows {
        for (hi, ri) in h.iter_mut().zip(r) {
            *hi += ri;
        }
    }
    let n = rows.len() as f64;
    h.iter_mut().for_each(|x| *x /= n);
    h
}

/// Negative log-likelihood of one context pair:
/// `−log σ(h·u_pos) − Σ log σ(−h·u_neg)` with `h` the mean of `rows`.
pub fn pair_loss(rows: &[Vec<f64>], pos: &[f64], negs: &[Vec<f64>]) -> f64 {
    let h = mean(rows);
    -log_sigmoid(dot(&h, pos)) - negs.iter().map(|u| log_sigmoid(-dot(&h, u))).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    /// Gradient with respect to the hidden (mean) vector.
    pub hidden: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub pos: Vec<f64>,
    pub negs: Vec<Vec<f64>>,
}

pub fn pair_gradient(rows: &[Vec<f64>], pos: &[f64], negs: &[Vec<f64>]) -> PairGradient {
    let h = mean(rows);
    let s_pos = dot(&h, pos);
    // d/ds of −log σ(s) is σ(s) − 1; of −log σ(−s) is σ(s)
    let c_pos = sigmoid(s_pos) - 1.0;
    let mut hidden: Vec<f64> = pos.iter().map(|u| c_pos * u).collect();
    let mut g_negs = Vec::with_capacity(negs.len());
    for u in negs {
        let c = sigmoid(dot(&h, u));
        for (g, ui) in hidden.iter_mut().zip(u) {
            *g += c * ui;
        }
        g_negs.push(h.iter().map(|x| c * x).collect());
    }
    let n = rows.len() as f64;
    PairGradient {
        loss: pair_loss(rows, pos, negs),
        rows: vec![hidden.iter().map(|g| g / n).collect(); rows.len()],
        pos: h.iter().map(|x| c_pos * x).collect(),
        negs: g_negs,
        hidden,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sigmoid_is_stable() {
        assert!((log_sigmoid(0.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_sigmoid(800.0).abs() < 1e-300);
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
        assert!((sigmoid(3.0) + sigmoid(-3.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_row_hidden_matches_row_gradient() {
        let rows = vec![vec![0.3, -0.2]];
        let g = pair_gradient(&rows, &[0.5, 0.1], &[vec![-0.4, 0.2]]);
        assert_eq!(g.rows[0], g.hidden);
    }
}
