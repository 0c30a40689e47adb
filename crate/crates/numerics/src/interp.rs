//! Monotone cubic (PCHIP) interpolation after Fritsch-Carlson.
//!
//! Used for tabulated radial profiles where overshoot-free interpolation
//! of monotone data matters more than formal order.

#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    /// Builds the interpolant. `xs` must be strictly increasing with at
    /// least two nodes.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, &'static str> {
        if xs.len() != ys.len() {
            return Err("xs and ys must have equal length");
        }
        if xs.len() < 2 {
            return Err("need at least two nodes");
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err("xs must be strictly increasing");
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut m = vec![0.0; n];
        // interior slopes: weighted harmonic mean where deltas agree in sign
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        // one-sided endpoint slopes, clipped for monotonicity
        m[0] = endpoint_slope(
            h[0],
            h.get(1).copied().unwrap_or(h[0]),
            delta[0],
            delta.get(1).copied().unwrap_or(delta[0]),
        );
        m[n - 1] = endpoint_slope(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n >= 3 { delta[n - 3] } else { delta[n - 2] },
        );
        Ok(Self { xs, ys, slopes: m })
    }

    /// Evaluates the interpolant, extrapolating with the boundary cubic
    /// outside the node range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_preserves_monotonicity() {
        let xs: Vec<f64> = (0..40).map(|i| (i as f64 * 0.17).exp()).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 1.0 / (1.0 + x * x)).collect();
        let p = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
        }
        // dense scan: interpolant stays within neighboring node values
        for i in 0..xs.len() - 1 {
            for k in 1..20 {
                let x = xs[i] + (xs[i + 1] - xs[i]) * (k as f64) / 20.0;
                let v = p.eval(x);
                assert!(v <= ys[i] + 1e-14 && v >= ys[i + 1] - 1e-14);
            }
        }
    }

    #[test]
    fn accuracy_on_log_spaced_power_profile() {
        // the actual use case: a power-law radial profile sampled on a
        // log-radius grid, here 1/(1+r^2) with t = ln r
        let n = 2000;
        let ts: Vec<f64> = (0..n)
            .map(|i| -9.0 + 14.0 * (i as f64) / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = ts.iter().map(|&t| 1.0 / (1.0 + (2.0 * t).exp())).collect();
        let p = Pchip::new(ts.clone(), ys).unwrap();
        let mut worst = 0.0_f64;
        for k in 0..5000 {
            let t = -8.9 + 13.8 * (k as f64) / 4999.0;
            let truth = 1.0 / (1.0 + (2.0 * t).exp());
            worst = worst.max(((p.eval(t) - truth) / truth).abs());
        }
        assert!(worst < 5e-8, "worst relative error {worst}");
    }
}
