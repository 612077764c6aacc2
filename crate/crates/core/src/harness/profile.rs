use crate::list::rank_positions;

/// Per-rank error counts over collected decoding failures.
///
/// For each failure, positions are sorted by increasing oscillation height
/// and rank `r` counts how often the bit at the `r`-th position was wrong.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    pub error_counts: Vec<u64>,
    pub failures: u64,
    pub frames: u64,
}

impl ErrorProfile {
    pub fn new(n: usize) -> Self {
        Self {
            error_counts: vec![0; n],
            failures: 0,
            frames: 0,
        }
    }

    /// Adds one decoding failure.
    pub fn record(&mut self, delta: &[f64], c_hat: &[u8], codeword: &[u8]) {
        for (rank, i) in rank_positions(delta).into_iter().enumerate() {
            if c_hat[i] != codeword[i] {
                self.error_counts[rank] += 1;
            }
        }
        self.failures += 1;
    }

    /// Empirical `P(c_hat != c)` per rank (rank 0 = smallest height).
    pub fn probabilities(&self) -> Vec<f64> {
        let f = self.failures.max(1) as f64;
        self.error_counts.iter().map(|&e| e as f64 / f).collect()
    }

    /// CSV with 1-based ranks: `rank,errors,probability`.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("rank,errors,probability\n");
        for (r, (e, p)) in self
            .error_counts
            .iter()
            .zip(self.probabilities())
            .enumerate()
        {
            out += &format!("{},{e},{p:.16e}\n", r + 1);
        }
        out
    }

    /// Spearman rank correlation between rank and error probability over the
    /// first `ranks` ranks (average ranks for ties). `None` if either side is
    /// constant.
    pub fn spearman(&self, ranks: usize) -> Option<f64> {
        let p: Vec<f64> = self.probabilities().into_iter().take(ranks).collect();
        let x: Vec<f64> = (0..p.len()).map(|i| i as f64).collect();
        spearman(&x, &p)
    }
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let order = rank_positions(v);
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation with tie-averaged ranks.
pub(crate) fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}
