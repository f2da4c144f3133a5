//! Small numerical helpers: compensated summation and Gauss-Legendre rules.

use std::sync::OnceLock;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Gauss-Legendre rule on `[-1, 1]`. Stores `1 + x` and `1 - x` for each node
/// so that mapped abscissae near either end keep full relative precision.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub one_plus: Vec<f64>,
    pub one_minus: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut one_plus = vec![0.0; n];
        let mut one_minus = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Newton iteration on P_n from the Chebyshev-like initial guess,
            // carried out in the angle so that 1 - x stays accurate.
            let mut theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut deriv = 0.0;
            for _ in 0..100 {
                let x = theta.cos();
                let (p, dp) = legendre(n, x);
                // d/dtheta P_n(cos theta) = -sin(theta) P_n'(x)
                let step = p / (-theta.sin() * dp);
                theta -= step;
                deriv = dp;
                if step.abs() < 1e-17 {
                    break;
                }
            }
            let x = theta.cos();
            let (_, dp) = legendre(n, x);
            if dp != 0.0 {
                deriv = dp;
            }
            let s = theta.sin();
            let w = 2.0 / (s * s * deriv * deriv);
            let half_sin = (theta / 2.0).sin();
            let half_cos = (theta / 2.0).cos();
            // x = cos theta: 1 - x = 2 sin^2(theta/2), 1 + x = 2 cos^2(theta/2)
            let lo = 2.0 * half_sin * half_sin;
            let hi = 2.0 * half_cos * half_cos;
            // node i is the positive root, node n-1-i its mirror
            one_minus[i] = lo;
            one_plus[i] = hi;
            weights[i] = w;
            one_minus[n - 1 - i] = hi;
            one_plus[n - 1 - i] = lo;
            weights[n - 1 - i] = w;
        }
        Self {
            one_plus,
            one_minus,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = if n == 0 {
        0.0
    } else {
        n as f64 * (x * p1 - p0) / (x * x - 1.0)
    };
    (p, dp)
}

const CACHED_RULES: usize = 64;

/// Gauss-Legendre rule with `n` nodes, exact for polynomials of degree up to
/// `2n - 1`.
pub fn gauss_rule(n: usize) -> std::borrow::Cow<'static, GaussRule> {
    static RULES: OnceLock<Vec<GaussRule>> = OnceLock::new();
    if n <= CACHED_RULES {
        let rules = RULES.get_or_init(|| (1..=CACHED_RULES).map(GaussRule::new).collect());
        std::borrow::Cow::Borrowed(&rules[n - 1])
    } else {
        std::borrow::Cow::Owned(GaussRule::new(n))
    }
}
