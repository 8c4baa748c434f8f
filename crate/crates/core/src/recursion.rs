//! First-order linear recursions `x_{i+1} = c3·x_i + c1` shared by both
//! sweep processes, with closed forms for terms, counts and partial sums.

/// Radius recursion `x_{i+1} = c3·x_i + c1` paired with the cycle-time
/// scale `T_i = gamma·x_i`, hence the time recursion
/// `T_{i+1} = c3·T_i + c4` with `c4 = gamma·c1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRecursion {
    pub c3: f64,
    pub c1: f64,
    pub c4: f64,
    pub gamma: f64,
}

impl LinearRecursion {
    pub fn new(c3: f64, c1: f64, gamma: f64) -> Self {
        Self {
            c3,
            c1,
            c4: gamma * c1,
            gamma,
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.c3 * x + self.c1
    }

    /// `c1/(1 − c3)`, or `None` for the pure translation `c3 = 1`.
    pub fn fixed_point(&self) -> Option<f64> {
        (self.c3 != 1.0).then(|| self.c1 / (1.0 - self.c3))
    }

    /// Closed form of `x_i` starting from `x0`.
    pub fn term(&self, x0: f64, i: usize) -> f64 {
        match self.fixed_point() {
            Some(f) => f + (x0 - f) * self.c3.powi(i as i32),
            None => x0 + i as f64 * self.c1,
        }
    }

    /// Closed form of the smallest `i` with `x_i ≤ target`, or `None` when
    /// the sequence never gets there.
    pub fn count_to(&self, x0: f64, target: f64) -> Option<usize> {
        if x0 <= target {
            return Some(0);
        }
        let steps = match self.fixed_point() {
            None if self.c1 < 0.0 => (x0 - target) / -self.c1,
            None => return None,
            Some(f) => {
                if !(self.c3 > 1.0 && x0 < f) {
                    return None;
                }
                ((target - f) / (x0 - f)).ln() / self.c3.ln()
            }
        };
        steps.is_finite().then(|| steps.ceil().max(0.0) as usize)
    }

    /// Closed form of `x_0 + … + x_{count−1}` via the telescoping identity
    /// `(1 − c3)·Σ_{i=0}^{m} x_i = x_0 − c3·x_m + m·c1`.
    pub fn sum_terms(&self, x0: f64, count: usize) -> f64 {
        if count == 0 {
            return 0.0;
        }
        let m = count - 1;
        match self.fixed_point() {
            Some(_) => {
                (x0 - self.c3 * self.term(x0, m) + m as f64 * self.c1) / (1.0 - self.c3)
            }
            None => count as f64 * x0 + self.c1 * (count * m) as f64 / 2.0,
        }
    }

    /// Closed form of `T_0 + … + T_{count−1}` with `T_i = gamma·x_i`.
    pub fn time_sum(&self, x0: f64, count: usize) -> f64 {
        self.gamma * self.sum_terms(x0, count)
    }

    /// Iterates from `x0` and returns every term up to and including the
    /// first one `≤ target`, giving up after `max_terms`.
    pub fn iterate_to(&self, x0: f64, target: f64, max_terms: usize) -> Option<Vec<f64>> {
        let mut xs = vec![x0];
        let mut x = x0;
        while x > target {
            if xs.len() >= max_terms {
                return None;
            }
            x = self.apply(x);
            xs.push(x);
        }
        Some(xs)
    }
}
