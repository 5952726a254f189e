//! Scalar helpers shared by the series and quadrature code.

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `B_{2i}` for `i = 1..=10`.
pub const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of absolute values seen so far, for rounding-error bounds.
    pub fn magnitude(&self) -> f64 {
        self.abs
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `psi(x)` for real `x` off the non-positive integers.
pub fn digamma(x: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    while x < 6.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    shift + statrs::function::gamma::digamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_special_points() {
        let ln2 = std::f64::consts::LN_2;
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * ln2).abs() < 1e-14);
        // psi(-1/2) = psi(1/2) + 2
        assert!((digamma(-0.5) - (2.0 - EULER_GAMMA - 2.0 * ln2)).abs() < 1e-13);
        assert!((digamma(2.0) - (1.0 - EULER_GAMMA)).abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn log_gamma_quarter() {
        assert!((ln_gamma(0.25) - 1.288_022_524_698_077_5).abs() < 1e-13);
        assert!((ln_gamma(0.75) - 0.203_280_951_431_295_1).abs() < 1e-13);
    }
}
