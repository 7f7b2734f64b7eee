//! The diminishing urn behind the loss process: exact terminal-count
//! distribution, moment generating function recurrence, and the Gaussian
//! ansatz it approaches.
//!
//! An urn holds `w = n - r` white and `r` red balls. Each draw removes a
//! white ball, then a uniformly random companion from whatever remains.
//! Draws repeat until the whites are exhausted; `X_{n,r}` is the number
//! of reds left. If the last white is drawn with no other ball present no
//! companion is removed (reachable only from odd `n`).

use crate::error::{Error, Result};
use rand::Rng;

pub const DEFAULT_PMF_CAP: usize = 5000;
pub const DEFAULT_U_CAP: f64 = 200.0;

/// Urn parameters: `n` total balls, `r` red.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnSpec {
    pub n: usize,
    pub r: usize,
}

impl UrnSpec {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r > n || n == 0 {
            return Err(Error::InvalidUrn { n, r });
        }
        Ok(Self { n, r })
    }

    pub fn whites(&self) -> usize {
        self.n - self.r
    }
}

/// Exact probability mass function of the terminal red count.
#[derive(Debug, Clone)]
pub struct UrnDistribution {
    pub n: usize,
    pub r: usize,
    /// Values of `X` with nonzero probability, increasing.
    pub support: Vec<usize>,
    pub probabilities: Vec<f64>,
}

impl UrnDistribution {
    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(&x, &p)| x as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(&x, &p)| (x as f64 - m).powi(2) * p)
            .sum()
    }

    /// `P(|X/n - center| > eps)`.
    pub fn tail_x(&self, center: f64, eps: f64) -> f64 {
        let n = self.n as f64;
        self.support
            .iter()
            .zip(&self.probabilities)
            .filter(|&(&x, _)| (x as f64 / n - center).abs() > eps)
            .map(|(_, &p)| p)
            .sum()
    }

    /// `P(|d/n - center| > eps)` for the draw count `d = (n - X)/2`.
    pub fn tail_draws(&self, center: f64, eps: f64) -> f64 {
        let n = self.n as f64;
        self.support
            .iter()
            .zip(&self.probabilities)
            .filter(|&(&x, _)| {
                let d = (self.n - x) as f64 / 2.0;
                (d / n - center).abs() > eps
            })
            .map(|(_, &p)| p)
            .sum()
    }

    /// `E[e^{zX}]` summed directly over the support.
    pub fn mgf(&self, z: f64) -> f64 {
        self.log_mgf(z).exp()
    }

    pub fn log_mgf(&self, z: f64) -> f64 {
        // log-sum-exp over log p + z x
        let terms: Vec<f64> = self
            .support
            .iter()
            .zip(&self.probabilities)
            .map(|(&x, &p)| p.ln() + z * x as f64)
            .collect();
        log_sum_exp(&terms)
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Limit mean fraction: `phi(rho) = rho^2`.
pub fn phi(rho: f64) -> f64 {
    rho * rho
}

/// Limit variance factor: `psi(rho) = 2 rho^2 (1 - rho)^2`.
pub fn psi(rho: f64) -> f64 {
    2.0 * rho * rho * (1.0 - rho) * (1.0 - rho)
}

/// Runs the urn once; returns the terminal red count.
pub fn simulate_urn(spec: UrnSpec, rng: &mut impl Rng) -> usize {
    let mut w = spec.whites();
    let mut j = spec.r;
    while w > 0 {
        w -= 1; // the white removal of this draw
        let remaining = w + j;
        if remaining == 0 {
            break;
        }
        if rng.gen_range(0..remaining) < w {
            w -= 1;
        } else {
            j -= 1;
        }
    }
    j
}

/// Exact pmf of the terminal red count by dynamic programming over
/// `(whites, reds)` states. `O(n^2)` time, `O(n)` memory.
pub fn exact_pmf(spec: UrnSpec, cap: usize) -> Result<UrnDistribution> {
    if spec.n > cap {
        return Err(Error::PmfCapExceeded { n: spec.n, cap });
    }
    let w0 = spec.whites();
    let r = spec.r;
    let mut pmf = vec![0.0f64; r + 1];
    if w0 == 0 {
        pmf[r] = 1.0;
    } else {
        // rows for layers w and w-1, re-rolled as w decreases
        let mut cur = vec![0.0f64; r + 1];
        let mut next = vec![0.0f64; r + 1]; // layer w-1
        cur[r] = 1.0;
        let mut w = w0;
        loop {
            let mut next2 = vec![0.0f64; r + 1]; // layer w-2
            for j in 0..=r {
                let p = cur[j];
                if p == 0.0 {
                    continue;
                }
                if w == 1 {
                    // last white; companion red if any ball remains
                    if j == 0 {
                        pmf[0] += p;
                    } else {
                        pmf[j - 1] += p;
                    }
                    continue;
                }
                let remaining = (w - 1 + j) as f64;
                let p_white = (w - 1) as f64 / remaining;
                let p_red = j as f64 / remaining;
                if w == 2 {
                    pmf[j] += p * p_white;
                } else {
                    next2[j] += p * p_white;
                }
                if j > 0 {
                    next[j - 1] += p * p_red;
                }
            }
            if w == 1 {
                break;
            }
            w -= 1;
            cur = std::mem::take(&mut next);
            next = next2;
        }
    }
    let mut support = Vec::new();
    let mut probabilities = Vec::new();
    for (x, &p) in pmf.iter().enumerate() {
        if p > 0.0 {
            support.push(x);
            probabilities.push(p);
        }
    }
    Ok(UrnDistribution { n: spec.n, r: spec.r, support, probabilities })
}

/// Exhaustive branch enumeration of the urn, usable as an oracle for
/// small `n` (cost grows like the number of draw outcomes).
pub fn exact_pmf_enumeration(spec: UrnSpec) -> UrnDistribution {
    fn recurse(w: usize, j: usize, p: f64, pmf: &mut [f64]) {
        if w == 0 {
            pmf[j] += p;
            return;
        }
        let w = w - 1;
        let remaining = w + j;
        if remaining == 0 {
            pmf[0] += p;
            return;
        }
        if w > 0 {
            recurse(w - 1, j, p * w as f64 / remaining as f64, pmf);
        }
        if j > 0 {
            recurse(w, j - 1, p * j as f64 / remaining as f64, pmf);
        }
    }
    let mut pmf = vec![0.0f64; spec.r + 1];
    recurse(spec.whites(), spec.r, 1.0, &mut pmf);
    let mut support = Vec::new();
    let mut probabilities = Vec::new();
    for (x, &p) in pmf.iter().enumerate() {
        if p > 0.0 {
            support.push(x);
            probabilities.push(p);
        }
    }
    UrnDistribution { n: spec.n, r: spec.r, support, probabilities }
}

/// `log f_{n,r}(z)` for every `r` in `0..=n`, by the bottom-up recurrence
/// `f_{n,r} = (1 - r/(n-1)) f_{n-2,r} + (r/(n-1)) f_{n-2,r-1}` with base
/// cases `f_{0,0} = 1`, `f_{1,0} = 1`, `f_{m,m} = e^{mz}`. Evaluated in
/// log space so `e^{nz}` never overflows.
pub fn log_mgf_row(n: usize, z: f64, u_cap: f64) -> Result<Vec<f64>> {
    let u = z.abs() * (n as f64).sqrt();
    if u > u_cap {
        return Err(Error::MgfOverflow(u, u_cap));
    }
    let parity = n % 2;
    let mut prev: Vec<f64> = if parity == 0 {
        vec![0.0] // log f_{0,0} = 0
    } else {
        vec![0.0, z] // log f_{1,0}, log f_{1,1}
    };
    let mut m = parity;
    while m < n {
        m += 2;
        let mut row = vec![f64::NEG_INFINITY; m + 1];
        for (r, slot) in row.iter_mut().enumerate() {
            if r == m {
                *slot = m as f64 * z;
                continue;
            }
            let frac = r as f64 / (m - 1) as f64;
            let mut terms = [f64::NEG_INFINITY; 2];
            if frac < 1.0 {
                terms[0] = (1.0 - frac).ln() + prev[r];
            }
            if r >= 1 {
                terms[1] = frac.ln() + prev[r - 1];
            }
            *slot = log_sum_exp(&terms);
        }
        prev = row;
    }
    Ok(prev)
}

/// `f_{n,r}(z)` through the recurrence.
pub fn mgf_recurrence(spec: UrnSpec, z: f64, u_cap: f64) -> Result<f64> {
    Ok(log_mgf_recurrence(spec, z, u_cap)?.exp())
}

pub fn log_mgf_recurrence(spec: UrnSpec, z: f64, u_cap: f64) -> Result<f64> {
    Ok(log_mgf_row(spec.n, z, u_cap)?[spec.r])
}

/// `log g_{n,r}(z) = z n phi(r/n) + z^2/2 n psi(r/n)`.
pub fn log_gaussian_ansatz(spec: UrnSpec, z: f64) -> f64 {
    let n = spec.n as f64;
    let rho = spec.r as f64 / n;
    z * n * phi(rho) + 0.5 * z * z * n * psi(rho)
}

pub fn gaussian_ansatz(spec: UrnSpec, z: f64) -> f64 {
    log_gaussian_ansatz(spec, z).exp()
}

/// Translates a terminal red count into the number of draws
/// `d = (n - X)/2`; signals inputs of inconsistent parity.
pub fn draws_from_terminal(n: usize, x: usize) -> Result<usize> {
    if x > n || (n - x) % 2 != 0 {
        return Err(Error::ParityViolation { n, x });
    }
    Ok((n - x) / 2)
}
