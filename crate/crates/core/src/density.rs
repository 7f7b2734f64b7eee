//! Initial data `F_0` for the particle system: CDF, quantile, optional
//! density, tail certificate and modulus of continuity.
//!
//! Only normalized data is accepted (total mass one); unnormalized piecewise
//! tables are rejected rather than rescaled. Plateaus of the CDF are
//! inverted with the left-continuous generalized inverse
//! `inf { x : F(x) >= p }`.

use crate::error::{Error, Result};
use std::path::Path;

/// The initial distribution `F_0` of particle positions.
#[derive(Debug, Clone)]
pub enum InitialDensity {
    /// Uniform on (0, 1]: `F_0(x) = x` there.
    Uniform01,
    /// Exponential with the given rate.
    Exponential { rate: f64 },
    /// Piecewise-linear CDF through the given `(x, F)` breakpoints.
    /// Starts at `(0, 0)`, ends at `F = 1`. No density is attached.
    PiecewiseCdf { xs: Vec<f64>, fs: Vec<f64> },
}

impl InitialDensity {
    pub fn uniform01() -> Self {
        InitialDensity::Uniform01
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidDensity(format!("rate must be positive, got {rate}")));
        }
        Ok(InitialDensity::Exponential { rate })
    }

    /// Builds a piecewise-linear CDF from a breakpoint table.
    pub fn piecewise(table: &[(f64, f64)]) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidDensity("table needs at least two rows".into()));
        }
        if table[0] != (0.0, 0.0) {
            return Err(Error::InvalidDensity("table must start at (0, 0)".into()));
        }
        let last_f = table.last().unwrap().1;
        if (last_f - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "table must end at F = 1, got {last_f} (unnormalized input rejected)"
            )));
        }
        let mut xs = Vec::with_capacity(table.len());
        let mut fs = Vec::with_capacity(table.len());
        for (i, &(x, f)) in table.iter().enumerate() {
            if !x.is_finite() || !f.is_finite() {
                return Err(Error::InvalidDensity("non-finite table entry".into()));
            }
            if i > 0 {
                if x <= xs[i - 1] {
                    return Err(Error::InvalidDensity(format!(
                        "x column must be strictly increasing at row {i}"
                    )));
                }
                if f < fs[i - 1] {
                    return Err(Error::InvalidDensity(format!(
                        "F column must be nondecreasing at row {i}"
                    )));
                }
            }
            xs.push(x);
            fs.push(f);
        }
        Ok(InitialDensity::PiecewiseCdf { xs, fs })
    }

    /// Reads a piecewise CDF from a two-column "x F" text file.
    /// Lines starting with '#' are ignored.
    pub fn from_cdf_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut table = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|v| v.parse().ok()).ok_or_else(|| {
                    Error::InvalidDensity(format!("bad row at line {}", lineno + 1))
                })
            };
            let x = parse(cols.next())?;
            let f = parse(cols.next())?;
            table.push((x, f));
        }
        Self::piecewise(&table)
    }

    /// `F_0(x)` for `x >= 0`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            InitialDensity::Uniform01 => x.min(1.0),
            InitialDensity::Exponential { rate } => 1.0 - (-rate * x).exp(),
            InitialDensity::PiecewiseCdf { xs, fs } => {
                if x >= *xs.last().unwrap() {
                    return 1.0;
                }
                // segment with xs[i] <= x < xs[i+1]
                let i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(i) => return fs[i],
                    Err(i) => i - 1,
                };
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                fs[i] + t * (fs[i + 1] - fs[i])
            }
        }
    }

    /// Left-continuous generalized inverse `inf { x : F_0(x) >= p }`,
    /// `p` in (0, 1).
    pub fn quantile(&self, p: f64) -> f64 {
        debug_assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1), got {p}");
        match self {
            InitialDensity::Uniform01 => p,
            InitialDensity::Exponential { rate } => -(1.0 - p).ln() / rate,
            InitialDensity::PiecewiseCdf { xs, fs } => {
                // first index with fs[i] >= p
                let i = fs.partition_point(|&f| f < p);
                if i == 0 {
                    return xs[0];
                }
                if fs[i] == fs[i - 1] {
                    return xs[i];
                }
                let t = (p - fs[i - 1]) / (fs[i] - fs[i - 1]);
                xs[i - 1] + t * (xs[i] - xs[i - 1])
            }
        }
    }

    /// `f_0(x)` when a density exists.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            InitialDensity::Uniform01 => Ok(if x > 0.0 && x <= 1.0 { 1.0 } else { 0.0 }),
            InitialDensity::Exponential { rate } => {
                Ok(if x >= 0.0 { rate * (-rate * x).exp() } else { 0.0 })
            }
            InitialDensity::PiecewiseCdf { .. } => Err(Error::PdfUnavailable),
        }
    }

    pub fn has_pdf(&self) -> bool {
        !matches!(self, InitialDensity::PiecewiseCdf { .. })
    }

    /// Returns `x*` with `1 - F_0(x*) < eps`.
    pub fn tail_certificate(&self, eps: f64) -> f64 {
        debug_assert!(eps > 0.0 && eps < 1.0);
        // F(quantile(p)) >= p, so the tail beyond quantile(1 - eps/2)
        // is at most eps/2 < eps.
        self.quantile(1.0 - eps / 2.0)
    }

    /// Modulus of continuity `w(h; F_0) = sup_x F_0(x+h) - F_0(x)`.
    /// Exact for all builtin families.
    pub fn continuity_modulus(&self, h: f64) -> f64 {
        debug_assert!(h > 0.0);
        match self {
            InitialDensity::Uniform01 => h.min(1.0),
            // density is decreasing, so the sup is attained at x = 0
            InitialDensity::Exponential { rate } => 1.0 - (-rate * h).exp(),
            InitialDensity::PiecewiseCdf { xs, .. } => {
                // x -> F(x+h) - F(x) is piecewise linear with kinks where x
                // or x + h crosses a breakpoint; scan the candidates.
                let mut best: f64 = 0.0;
                for &b in xs {
                    best = best.max(self.cdf(b + h) - self.cdf(b));
                    let x = b - h;
                    if x >= 0.0 {
                        best = best.max(self.cdf(b) - self.cdf(x));
                    }
                }
                best.min(1.0)
            }
        }
    }

    /// Points where the density (when present) is discontinuous. Used to
    /// exclude kink neighborhoods from finite-difference residual checks.
    pub fn pdf_breakpoints(&self) -> Vec<f64> {
        match self {
            InitialDensity::Uniform01 => vec![0.0, 1.0],
            InitialDensity::Exponential { .. } => vec![0.0],
            InitialDensity::PiecewiseCdf { xs, .. } => xs.clone(),
        }
    }
}

/// Quantile initialization: particle `k` at `F_0^{-1}((2k-1)/(2n))`.
/// The resulting empirical CDF sandwiches `F_0` within `1/(2n)`.
pub fn quantile_init(n: usize, density: &InitialDensity) -> Result<Vec<f64>> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::OddParticleCount(n));
    }
    Ok((1..=n)
        .map(|k| density.quantile((2 * k - 1) as f64 / (2 * n) as f64))
        .collect())
}
