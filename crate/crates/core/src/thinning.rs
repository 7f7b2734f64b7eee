//! Uniform thinning of a finite point set and the concentration bound on
//! how far a random thinning can drift from its mean.
//!
//! From `r` sorted points with base measure `nu = (1/r) sum delta_{b_j}`,
//! a thinning keeps a uniformly random `s`-subset and keeps the `1/r`
//! weight per atom, so the retained measure has total mass `s/r`.

use crate::error::{Error, Result};
use crate::metrics::DiscreteMeasure;
use rand::Rng;

pub const DEFAULT_ENUM_CAP: u64 = 2_000_000;

/// Point set plus retained count.
#[derive(Debug, Clone)]
pub struct ThinningSpec {
    points: Vec<f64>,
    s: usize,
}

impl ThinningSpec {
    pub fn new(points: Vec<f64>, s: usize) -> Result<Self> {
        if s > points.len() {
            return Err(Error::InvalidThinning(format!(
                "retained count {s} exceeds point count {}",
                points.len()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidThinning(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, s })
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// The base measure with weight `1/r` per point.
    pub fn base_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::empirical(&self.points, 1.0 / self.r() as f64)
    }
}

/// A test function with its declared bounds. The sup-norm bound feeds the
/// concentration bound; the Lipschitz bound is carried for BL-normalized
/// functions.
pub struct TestFunction {
    pub evaluator: Box<dyn Fn(f64) -> f64 + Sync>,
    pub sup_norm: f64,
    pub lipschitz: Option<f64>,
}

impl TestFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Sync + 'static, sup_norm: f64) -> Self {
        Self { evaluator: Box::new(f), sup_norm, lipschitz: None }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }
}

/// `<mu, phi>`: the weighted sum of the function over the atoms.
pub fn pairing(measure: &DiscreteMeasure, f: &TestFunction) -> f64 {
    measure.integrate(|x| f.eval(x))
}

/// Draws one uniform thinning via a partial Fisher-Yates shuffle: the
/// first `s` entries of the index array after `s` swap steps are an
/// exactly uniform subset, in `O(r)`.
pub fn sample_thinning(spec: &ThinningSpec, rng: &mut impl Rng) -> DiscreteMeasure {
    let r = spec.r();
    let mut idx: Vec<usize> = (0..r).collect();
    for i in 0..spec.s {
        let j = rng.gen_range(i..r);
        idx.swap(i, j);
    }
    let pts: Vec<f64> = idx[..spec.s].iter().map(|&i| spec.points[i]).collect();
    DiscreteMeasure::empirical(&pts, 1.0 / r as f64)
}

/// Monte Carlo estimate of `P(|<mu,phi> - (s/r)<nu,phi>| > eps)`.
pub fn deviation_tail(
    spec: &ThinningSpec,
    f: &TestFunction,
    eps: f64,
    replicas: usize,
    rng: &mut impl Rng,
) -> f64 {
    let center = spec.s as f64 / spec.r() as f64 * pairing(&spec.base_measure(), f);
    let mut hits = 0usize;
    for _ in 0..replicas {
        let mu = sample_thinning(spec, rng);
        if (pairing(&mu, f) - center).abs() > eps {
            hits += 1;
        }
    }
    hits as f64 / replicas as f64
}

fn binomial(r: usize, s: usize) -> Option<u64> {
    let s = s.min(r - s);
    let mut acc: u64 = 1;
    for i in 0..s {
        // exact division: C(r,i+1) = C(r,i)(r-i)/(i+1) stays integral
        acc = acc.checked_mul((r - i) as u64)? / (i + 1) as u64;
    }
    Some(acc)
}

/// Exact tail by enumerating every `s`-subset. Sums are maintained
/// incrementally along the recursion, `O(1)` work per branch step.
pub fn deviation_tail_exact(spec: &ThinningSpec, f: &TestFunction, eps: f64) -> Result<f64> {
    let r = spec.r();
    let s = spec.s;
    let cap = DEFAULT_ENUM_CAP;
    let count = binomial(r, s).filter(|&c| c <= cap).ok_or(
        Error::EnumerationCapExceeded { r, s, cap },
    )?;
    let vals: Vec<f64> = spec.points.iter().map(|&x| f.eval(x) / r as f64).collect();
    let center = s as f64 / r as f64 * pairing(&spec.base_measure(), f);
    // suffix state: next index to consider, how many still to pick, and
    // the running sum of chosen values
    fn recurse(
        vals: &[f64],
        next: usize,
        remaining: usize,
        sum: f64,
        center: f64,
        eps: f64,
        hits: &mut u64,
        total: &mut u64,
    ) {
        if remaining == 0 {
            *total += 1;
            if (sum - center).abs() > eps {
                *hits += 1;
            }
            return;
        }
        if vals.len() - next == remaining {
            let full: f64 = sum + vals[next..].iter().sum::<f64>();
            *total += 1;
            if (full - center).abs() > eps {
                *hits += 1;
            }
            return;
        }
        recurse(vals, next + 1, remaining - 1, sum + vals[next], center, eps, hits, total);
        recurse(vals, next + 1, remaining, sum, center, eps, hits, total);
    }
    let mut hits = 0u64;
    let mut total = 0u64;
    recurse(&vals, 0, s, 0.0, center, eps, &mut hits, &mut total);
    debug_assert_eq!(total, count);
    Ok(hits as f64 / total as f64)
}

/// Exact inclusion probability of each point over all subsets; uniform
/// sampling makes every entry `s/r`.
pub fn exact_inclusion_probabilities(spec: &ThinningSpec) -> Result<Vec<f64>> {
    let r = spec.r();
    let s = spec.s;
    let total = binomial(r, s).filter(|&c| c <= DEFAULT_ENUM_CAP).ok_or(
        Error::EnumerationCapExceeded { r, s, cap: DEFAULT_ENUM_CAP },
    )?;
    if r == 0 {
        return Ok(Vec::new());
    }
    // point 0 included in C(r-1, s-1) subsets; by symmetry all agree
    let with = if s == 0 { 0 } else { binomial(r - 1, s - 1).unwrap() };
    Ok(vec![with as f64 / total as f64; r])
}

/// `2 exp(-r eps^2 / (64 sup_norm^2))`, clamped to `[0,1]` for reporting.
pub fn maurey_bound(r: usize, eps: f64, sup_norm: f64) -> f64 {
    let raw = 2.0 * (-(r as f64) * eps * eps / (64.0 * sup_norm * sup_norm)).exp();
    raw.min(1.0)
}
