//! Dormand–Prince 5(4) with PI step-size control and 4th-order dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrator settings.
#[derive(Clone, Debug)]
pub struct Dopri5 {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Optional cap on the step size.
    pub h_max: Option<f64>,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 { rel_tol: 1e-12, abs_tol: 1e-14, max_steps: 10_000_000, h_max: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// States at the requested sample times.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl Trajectory {
    /// Component `i` at every sample.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.y.iter().map(|y| y[i]).collect()
    }
}

fn axpy(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &[f64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (a, k) in terms {
            s += a * k[i];
        }
        *o = y[i] + h * s;
    }
}

impl Dopri5 {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Dopri5 { rel_tol, abs_tol, ..Default::default() }
    }

    fn error_norm(&self, y0: &[f64], y1: &[f64], err: &[f64]) -> f64 {
        let n = y0.len() as f64;
        let s: f64 = (0..y0.len())
            .map(|i| {
                let sk = self.abs_tol + self.rel_tol * y0[i].abs().max(y1[i].abs());
                (err[i] / sk).powi(2)
            })
            .sum();
        (s / n).sqrt()
    }

    fn initial_step<F: FnMut(f64, &[f64], &mut [f64])>(&self, f: &mut F, t0: f64, y0: &[f64], f0: &[f64], span: f64) -> f64 {
        let n = y0.len();
        let sk: Vec<f64> = y0.iter().map(|y| self.abs_tol + self.rel_tol * y.abs()).collect();
        let dnf: f64 = (0..n).map(|i| (f0[i] / sk[i]).powi(2)).sum::<f64>() / n as f64;
        let dny: f64 = (0..n).map(|i| (y0[i] / sk[i]).powi(2)).sum::<f64>() / n as f64;
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * (dny / dnf).sqrt() };
        h = h.min(span);
        let y1: Vec<f64> = (0..n).map(|i| y0[i] + h * f0[i]).collect();
        let mut f1 = vec![0.0; n];
        f(t0 + h, &y1, &mut f1);
        let der2 = ((0..n).map(|i| ((f1[i] - f0[i]) / sk[i]).powi(2)).sum::<f64>() / n as f64).sqrt() / h;
        let der = der2.max(dnf.sqrt());
        let h1 = if der <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der).powf(0.2) };
        (100.0 * h).min(h1).min(span)
    }

    /// Integrates `y' = f(t, y)` from `(t0, y0)` and returns the state at each
    /// of the nondecreasing `samples` (all `>= t0`).
    pub fn integrate<F>(&self, mut f: F, t0: f64, y0: &[f64], samples: &[f64]) -> Result<Trajectory>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let valid = |v: f64, min: f64| v.is_finite() && v >= min;
        if !valid(self.rel_tol, 100.0 * f64::EPSILON) || !valid(self.abs_tol, f64::MIN_POSITIVE) {
            return Err(Error::Invalid(format!("tolerances too small: rel {} abs {}", self.rel_tol, self.abs_tol)));
        }
        if samples.windows(2).any(|w| w[1] < w[0]) || samples.first().is_some_and(|&s| s < t0) {
            return Err(Error::Invalid("sample times must be nondecreasing and >= t0".into()));
        }
        let n = y0.len();
        let mut out = Trajectory { t: Vec::with_capacity(samples.len()), y: Vec::with_capacity(samples.len()), stats: StepStats::default() };
        let t_end = match samples.last() {
            Some(&t) => t,
            None => return Ok(out),
        };
        let mut next = 0;
        while next < samples.len() && samples[next] <= t0 {
            out.t.push(samples[next]);
            out.y.push(y0.to_vec());
            next += 1;
        }
        if next == samples.len() {
            return Ok(out);
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; n];
        f(t, &y, &mut k1);
        out.stats.evaluations += 1;
        let span = t_end - t0;
        let mut h = self.initial_step(&mut f, t0, &y, &k1, span);
        out.stats.evaluations += 1;
        if let Some(hm) = self.h_max {
            h = h.min(hm);
        }
        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut ys = vec![0.0; n];
        let mut y1 = vec![0.0; n];
        let mut err = vec![0.0; n];
        let mut fac_old: f64 = 1e-4;
        let beta = 0.04;
        let expo = 0.2 - beta * 0.75;
        let safe = 0.9;
        let mut steps = 0usize;
        let mut last_rejected = false;

        while next < samples.len() {
            if steps >= self.max_steps {
                return Err(Error::TooManySteps { steps, t });
            }
            let last = t + 1.01 * h >= t_end;
            if last {
                h = t_end - t;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t, h });
            }
            axpy(&mut ys, &y, h, &[(A21, &k1)]);
            f(t + C2 * h, &ys, &mut k2);
            axpy(&mut ys, &y, h, &[(A31, &k1), (A32, &k2)]);
            f(t + C3 * h, &ys, &mut k3);
            axpy(&mut ys, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            f(t + C4 * h, &ys, &mut k4);
            axpy(&mut ys, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            f(t + C5 * h, &ys, &mut k5);
            axpy(&mut ys, &y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            f(t + h, &ys, &mut k6);
            axpy(&mut y1, &y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            f(t + h, &y1, &mut k7);
            out.stats.evaluations += 6;
            steps += 1;
            for i in 0..n {
                err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let en = self.error_norm(&y, &y1, &err);
            if !en.is_finite() {
                out.stats.rejected += 1;
                last_rejected = true;
                h *= 0.1;
                continue;
            }
            let fac11 = en.powf(expo);
            if en <= 1.0 {
                let t1 = if last { t_end } else { t + h };
                // dense output for every sample inside (t, t1]
                while next < samples.len() && samples[next] <= t1 {
                    let theta = (samples[next] - t) / h;
                    let th1 = 1.0 - theta;
                    let yi: Vec<f64> = (0..n)
                        .map(|i| {
                            let ydiff = y1[i] - y[i];
                            let bspl = h * k1[i] - ydiff;
                            let r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                            y[i] + theta * (ydiff + th1 * (bspl + theta * (ydiff - h * k7[i] - bspl + th1 * r5)))
                        })
                        .collect();
                    out.t.push(samples[next]);
                    out.y.push(if samples[next] == t1 { y1.clone() } else { yi });
                    next += 1;
                }
                out.stats.accepted += 1;
                t = t1;
                std::mem::swap(&mut y, &mut y1);
                std::mem::swap(&mut k1, &mut k7);
                let mut fac = fac11 / fac_old.powf(beta);
                fac = (fac / safe).clamp(0.1, 5.0);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                if let Some(hm) = self.h_max {
                    h_new = h_new.min(hm);
                }
                fac_old = en.max(1e-4);
                last_rejected = false;
                h = h_new;
            } else {
                out.stats.rejected += 1;
                last_rejected = true;
                h /= (fac11 / safe).min(5.0);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let samples: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let tr = Dopri5::with_tolerances(1e-10, 1e-12).integrate(|_, y, dy| dy[0] = -y[0], 0.0, &[1.0], &samples).unwrap();
        for (t, y) in tr.t.iter().zip(&tr.y) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn harmonic_dense_output() {
        let samples: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let tr = Dopri5::default().integrate(|_, y, dy| { dy[0] = y[1]; dy[1] = -y[0]; }, 0.0, &[0.0, 1.0], &samples).unwrap();
        let worst = tr.t.iter().zip(&tr.y).map(|(t, y)| (y[0] - t.sin()).abs().max((y[1] - t.cos()).abs())).fold(0.0, f64::max);
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn rejects_tiny_tolerance() {
        let r = Dopri5::with_tolerances(1e-17, 1e-20).integrate(|_, _, dy| dy[0] = 0.0, 0.0, &[0.0], &[1.0]);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn underflow_on_blowup() {
        let r = Dopri5::default().integrate(|_, y, dy| dy[0] = y[0] * y[0], 0.0, &[1.0], &[2.0]);
        assert!(matches!(r, Err(Error::StepUnderflow { .. }) | Err(Error::TooManySteps { .. })), "{r:?}");
    }
}
