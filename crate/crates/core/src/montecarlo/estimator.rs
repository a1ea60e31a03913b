use serde::{Deserialize, Serialize};

/// Streaming mean/variance accumulator (Welford) with the pairwise merge of
/// Chan, Golub and LeVeque.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EstimatorState {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl EstimatorState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut s = Self::new();
        for v in values {
            s.update(v);
        }
        s
    }

    #[inline]
    pub fn update(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    pub fn merge(&self, other: &EstimatorState) -> EstimatorState {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        EstimatorState {
            count,
            mean: self.mean + delta * (nb / n),
            m2: self.m2 + other.m2 + delta * delta * (na * nb / n),
        }
    }

    /// Unbiased sample variance (`M2/(count−1)`), zero for fewer than two
    /// values.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    /// Rescales the underlying values by `c`.
    pub fn scaled(&self, c: f64) -> EstimatorState {
        EstimatorState {
            count: self.count,
            mean: self.mean * c,
            m2: self.m2 * c * c,
        }
    }
}

/// Bivariate accumulator for sample correlation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CovarianceState {
    pub count: u64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub m2_x: f64,
    pub m2_y: f64,
    pub c_xy: f64,
}

impl CovarianceState {
    #[inline]
    pub fn update(&mut self, x: f64, y: f64) {
        self.count += 1;
        let n = self.count as f64;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / n;
        self.mean_y += dy / n;
        self.m2_x += dx * (x - self.mean_x);
        self.m2_y += dy * (y - self.mean_y);
        self.c_xy += dx * (y - self.mean_y);
    }

    pub fn merge(&self, other: &CovarianceState) -> CovarianceState {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let dx = other.mean_x - self.mean_x;
        let dy = other.mean_y - self.mean_y;
        let w = na * nb / n;
        CovarianceState {
            count,
            mean_x: self.mean_x + dx * nb / n,
            mean_y: self.mean_y + dy * nb / n,
            m2_x: self.m2_x + other.m2_x + dx * dx * w,
            m2_y: self.m2_y + other.m2_y + dy * dy * w,
            c_xy: self.c_xy + other.c_xy + dx * dy * w,
        }
    }

    pub fn correlation(&self) -> f64 {
        let denom = (self.m2_x * self.m2_y).sqrt();
        if denom > 0.0 {
            self.c_xy / denom
        } else {
            0.0
        }
    }

    /// Fisher-transformed z-statistic for zero correlation,
    /// `atanh(r)·√(N−3)`.
    pub fn independence_z(&self) -> f64 {
        if self.count <= 3 {
            return 0.0;
        }
        self.correlation().atanh() * ((self.count - 3) as f64).sqrt()
    }
}
