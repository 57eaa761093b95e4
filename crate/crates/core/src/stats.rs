//! Small statistics helpers: batch means for autocorrelated series and
//! rank/linear correlation.

/// Running mean of a series with a batch-means standard error.
///
/// Samples are grouped into consecutive batches of fixed length; the standard
/// error is the sample standard deviation of the complete batch means divided
/// by the square root of their count. Batches much longer than the series'
/// correlation time make the batch means approximately independent.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchMeans {
    batch_len: usize,
    current_sum: f64,
    current_count: usize,
    batches: Vec<f64>,
    total_sum: f64,
    total_count: usize,
}

impl BatchMeans {
    pub fn new(batch_len: usize) -> Self {
        assert!(batch_len > 0, "batch length must be positive");
        Self {
            batch_len,
            current_sum: 0.0,
            current_count: 0,
            batches: Vec::new(),
            total_sum: 0.0,
            total_count: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.current_sum += x;
        self.current_count += 1;
        self.total_sum += x;
        self.total_count += 1;
        if self.current_count == self.batch_len {
            self.batches.push(self.current_sum / self.batch_len as f64);
            self.current_sum = 0.0;
            self.current_count = 0;
        }
    }

    /// Mean over every sample pushed, including a trailing partial batch.
    pub fn mean(&self) -> f64 {
        if self.total_count == 0 {
            f64::NAN
        } else {
            self.total_sum / self.total_count as f64
        }
    }

    pub fn count(&self) -> usize {
        self.total_count
    }

    pub fn batch_count(&self) -> usize {
        self.batches.len()
    }

    /// Batch-means standard error of the mean; NaN with fewer than two
    /// complete batches.
    pub fn std_error(&self) -> f64 {
        let nb = self.batches.len();
        if nb < 2 {
            return f64::NAN;
        }
        let m = self.batches.iter().sum::<f64>() / nb as f64;
        let ss: f64 = self.batches.iter().map(|b| (b - m).powi(2)).sum();
        (ss / ((nb - 1) * nb) as f64).sqrt()
    }
}

/// Pearson correlation; `None` when either input is constant or the lengths
/// differ.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    if x.iter().all(|&v| v == x[0]) || y.iter().all(|&v| v == y[0]) {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && x[idx[end]] == x[idx[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() {
        return None;
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn std_dev(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}
