//! Discrete measures on the half-line, the bounded-Lipschitz distance
//! between them, shift pushforwards, the modulus of continuity, and
//! certified discretization of the kinetic limit.
//!
//! The BL distance of two discrete measures is the optimum of the chain
//! LP: maximize `sum c_i phi_i` over the merged sorted support with
//! `|phi_i| <= 1` and `|phi_{i+1} - phi_i| <= x_{i+1} - x_i`, where `c`
//! is the signed weight difference. Any feasible chain assignment extends
//! to a function on the half-line with sup norm and Lipschitz constant at
//! most one by linear interpolation and clamping, so the chain optimum is
//! the distance.
//!
//! The LP is solved exactly through its dual: a min-cost formulation over
//! edge flows `f_i`, `min sum_i |c_i - f_{i-1} + f_i| + sum_i d_i |f_i|`
//! with `f_0 = f_k = 0`, evaluated by dynamic programming over convex
//! piecewise-linear value functions (a slope-trick structure). A
//! vertex-enumeration oracle for small supports cross-checks it in the
//! test suite.

use crate::error::{Error, Result};
use crate::kinetic::KineticSolution;
use std::collections::BTreeMap;

/// A finite nonnegative measure given by sorted atoms with positive
/// weights. Coincident atoms are merged at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn empty() -> Self {
        Self { atoms: Vec::new(), weights: Vec::new() }
    }

    /// Builds a measure from (position, weight) pairs; zero weights are
    /// dropped and coincident positions merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut v: Vec<(f64, f64)> = pairs
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .collect();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut atoms = Vec::with_capacity(v.len());
        let mut weights: Vec<f64> = Vec::with_capacity(v.len());
        for (x, w) in v {
            if atoms.last() == Some(&x) {
                *weights.last_mut().unwrap() += w;
            } else {
                atoms.push(x);
                weights.push(w);
            }
        }
        Self { atoms, weights }
    }

    /// Equal-weight empirical measure of the given points.
    pub fn empirical(points: &[f64], weight_each: f64) -> Self {
        Self::from_pairs(points.iter().map(|&x| (x, weight_each)))
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Multiplies every weight by `factor >= 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        debug_assert!(factor >= 0.0);
        if factor == 0.0 {
            return Self::empty();
        }
        Self {
            atoms: self.atoms.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
        }
    }

    /// `<mu, f> = sum_i w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Distribution function `mu([0, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|&a| a <= x);
        self.weights[..k].iter().sum()
    }
}

/// Shift pushforward: atoms strictly above `h` move down by `h`; mass at
/// or below `h` leaves the system.
pub fn shift_pushforward(mu: &DiscreteMeasure, h: f64) -> DiscreteMeasure {
    debug_assert!(h >= 0.0);
    if h == 0.0 {
        return mu.clone();
    }
    DiscreteMeasure::from_pairs(
        mu.atoms
            .iter()
            .zip(&mu.weights)
            .filter(|&(&a, _)| a > h)
            .map(|(&a, &w)| (a - h, w)),
    )
}

/// Modulus of continuity `w(h; mu) = sup_x mu((x, x+h])`, computed by a
/// sliding window whose right edge sits at an atom.
pub fn modulus(mu: &DiscreteMeasure, h: f64) -> f64 {
    debug_assert!(h > 0.0);
    let mut best: f64 = 0.0;
    let mut lo = 0usize;
    let mut window = 0.0;
    for j in 0..mu.atoms.len() {
        window += mu.weights[j];
        // retain atoms in (a_j - h, a_j]
        while mu.atoms[lo] <= mu.atoms[j] - h {
            window -= mu.weights[lo];
            lo += 1;
        }
        best = best.max(window);
    }
    best
}

// ---------------------------------------------------------------------------
// Slope-trick structure: convex piecewise-linear V with O(log k) updates.

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Convex piecewise-linear function represented by its minimum value and
/// slope-change breakpoints on either side of the flat bottom.
struct SlopeTrick {
    left: BTreeMap<Key, f64>,
    right: BTreeMap<Key, f64>,
    off_l: f64,
    off_r: f64,
    sum_l: f64,
    sum_r: f64,
    min_val: f64,
}

impl SlopeTrick {
    fn new() -> Self {
        Self {
            left: BTreeMap::new(),
            right: BTreeMap::new(),
            off_l: 0.0,
            off_r: 0.0,
            sum_l: 0.0,
            sum_r: 0.0,
            min_val: 0.0,
        }
    }

    fn push_left(&mut self, actual: f64, w: f64) {
        *self.left.entry(Key(actual - self.off_l)).or_insert(0.0) += w;
    }

    fn push_right(&mut self, actual: f64, w: f64) {
        *self.right.entry(Key(actual - self.off_r)).or_insert(0.0) += w;
    }

    /// Adds `w * |x - a|`.
    fn add_abs(&mut self, a: f64, w: f64) {
        if w == 0.0 {
            return;
        }
        self.push_left(a, w);
        self.push_right(a, w);
        self.sum_l += w;
        self.sum_r += w;
        // restore max(left) <= min(right) by exchanging crossing weight;
        // keys stay raw so map lookups never round-trip through offsets
        loop {
            let (kl, wl) = match self.left.iter().next_back() {
                Some((k, &w)) => (k.0, w),
                None => break,
            };
            let (kr, wr) = match self.right.iter().next() {
                Some((k, &w)) => (k.0, w),
                None => break,
            };
            let pl = kl + self.off_l;
            let pr = kr + self.off_r;
            if pl <= pr {
                break;
            }
            let m = wl.min(wr);
            self.min_val += m * (pl - pr);
            if wl - m <= 0.0 {
                self.left.remove(&Key(kl));
            } else {
                *self.left.get_mut(&Key(kl)).unwrap() -= m;
            }
            if wr - m <= 0.0 {
                self.right.remove(&Key(kr));
            } else {
                *self.right.get_mut(&Key(kr)).unwrap() -= m;
            }
            self.push_left(pr, m);
            self.push_right(pl, m);
        }
    }

    /// Infimal convolution with `|.|`: truncates slopes to `[-1, 1]` by
    /// discarding the outermost breakpoints.
    fn clamp_unit(&mut self) {
        while self.sum_l > 1.0 {
            let excess = self.sum_l - 1.0;
            let (&key, &w) = self.left.iter().next().unwrap();
            if w <= excess {
                self.left.remove(&key);
                self.sum_l -= w;
            } else {
                *self.left.get_mut(&key).unwrap() = w - excess;
                self.sum_l = 1.0;
            }
        }
        while self.sum_r > 1.0 {
            let excess = self.sum_r - 1.0;
            let (&key, &w) = self.right.iter().next_back().unwrap();
            if w <= excess {
                self.right.remove(&key);
                self.sum_r -= w;
            } else {
                *self.right.get_mut(&key).unwrap() = w - excess;
                self.sum_r = 1.0;
            }
        }
    }

    /// Replaces `V(x)` by `V(x + c)`.
    fn shift_arg(&mut self, c: f64) {
        self.off_l -= c;
        self.off_r -= c;
    }

    fn eval(&self, x: f64) -> f64 {
        let mut v = self.min_val;
        for (k, &w) in self.left.iter().rev() {
            let p = k.0 + self.off_l;
            if p <= x {
                break;
            }
            v += w * (p - x);
        }
        for (k, &w) in self.right.iter() {
            let p = k.0 + self.off_r;
            if p >= x {
                break;
            }
            v += w * (x - p);
        }
        v
    }
}

// ---------------------------------------------------------------------------

/// Signed weight differences on the merged support, zero entries dropped.
fn merged_difference(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(mu.atoms.len() + nu.atoms.len());
    let mut cs = Vec::with_capacity(xs.capacity());
    let (mut i, mut j) = (0usize, 0usize);
    while i < mu.atoms.len() || j < nu.atoms.len() {
        let (x, c) = if j >= nu.atoms.len()
            || (i < mu.atoms.len() && mu.atoms[i] < nu.atoms[j])
        {
            let v = (mu.atoms[i], mu.weights[i]);
            i += 1;
            v
        } else if i >= mu.atoms.len() || nu.atoms[j] < mu.atoms[i] {
            let v = (nu.atoms[j], -nu.weights[j]);
            j += 1;
            v
        } else {
            let v = (mu.atoms[i], mu.weights[i] - nu.weights[j]);
            i += 1;
            j += 1;
            v
        };
        if c != 0.0 {
            xs.push(x);
            cs.push(c);
        }
    }
    (xs, cs)
}

/// Bounded-Lipschitz distance between two finite discrete measures,
/// computed exactly in `O(k log k)` over the merged support.
pub fn bl_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let (xs, cs) = merged_difference(mu, nu);
    let k = xs.len();
    if k == 0 {
        return 0.0;
    }
    let mut st = SlopeTrick::new();
    st.add_abs(0.0, 1.0);
    for i in 0..k {
        if i > 0 {
            st.clamp_unit();
        }
        st.shift_arg(cs[i]);
        if i + 1 < k {
            st.add_abs(0.0, xs[i + 1] - xs[i]);
        }
    }
    st.eval(0.0).max(0.0)
}

/// Brute-force check of [`bl_distance`] for merged supports of at most 8
/// atoms: enumerates every vertex-candidate assignment of the chain LP.
///
/// Every LP vertex ties each coordinate through a run of active chain
/// constraints to a coordinate at `+-1`, so each coordinate lies in the
/// set of anchored signed gap sums; a DP over these candidate values
/// attains the optimum.
pub fn bl_distance_oracle(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    let (xs, cs) = merged_difference(mu, nu);
    let k = xs.len();
    if k == 0 {
        return Ok(0.0);
    }
    if k > 8 {
        return Err(Error::OracleCapExceeded(k));
    }
    let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();

    // candidate values for coordinate i: +-1 anchored at any j, propagated
    // through every sign pattern of the gaps between j and i
    let mut candidates: Vec<Vec<f64>> = vec![Vec::new(); k];
    for anchor in 0..k {
        for s in [-1.0f64, 1.0] {
            let mut vals = vec![s];
            candidates[anchor].push(s);
            // propagate right
            for (step, t) in (anchor..k - 1).enumerate() {
                let mut next = Vec::with_capacity(vals.len() * 2);
                for &v in &vals {
                    next.push(v + gaps[t]);
                    next.push(v - gaps[t]);
                }
                vals = next;
                candidates[anchor + step + 1].extend(vals.iter().copied());
            }
            let mut vals = vec![s];
            // propagate left
            for (step, t) in (0..anchor).rev().enumerate() {
                let mut next = Vec::with_capacity(vals.len() * 2);
                for &v in &vals {
                    next.push(v + gaps[t]);
                    next.push(v - gaps[t]);
                }
                vals = next;
                candidates[anchor - step - 1].extend(vals.iter().copied());
            }
        }
    }
    const TOL: f64 = 1e-12;
    for c in &mut candidates {
        c.retain(|v| v.abs() <= 1.0 + TOL);
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c.dedup();
    }

    // DP over candidate values; the feasibility window over the previous
    // layer slides right as v increases, so a monotonic deque gives the
    // window maximum in linear time per layer
    let mut value: Vec<f64> = candidates[0].iter().map(|&v| cs[0] * v).collect();
    for i in 1..k {
        let prev = &candidates[i - 1];
        let gap = gaps[i - 1] + TOL;
        let mut next = vec![f64::NEG_INFINITY; candidates[i].len()];
        let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        let mut hi = 0usize;
        let mut lo = 0usize;
        for (a, &v) in candidates[i].iter().enumerate() {
            while hi < prev.len() && prev[hi] <= v + gap {
                while deque.back().is_some_and(|&b| value[b] <= value[hi]) {
                    deque.pop_back();
                }
                deque.push_back(hi);
                hi += 1;
            }
            while lo < prev.len() && prev[lo] < v - gap {
                if deque.front() == Some(&lo) {
                    deque.pop_front();
                }
                lo += 1;
            }
            if let Some(&b) = deque.front() {
                next[a] = value[b] + cs[i] * v;
            }
        }
        value = next;
    }
    Ok(value
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0))
}

/// Discretizes the kinetic limit at time `t` into `m` equal-mass atoms at
/// conditional quantile midpoints, with a certified BL error bound.
///
/// The certificate `err` satisfies
/// `|bl(anything, limit) - bl(anything, discretized)| <= err`; it is the
/// sum over quantile cells of cell mass times cell width (capped at 2, the
/// worst case for a unit-BL test function).
pub fn discretize(solution: &KineticSolution, t: f64, m: usize) -> (DiscreteMeasure, f64) {
    assert!(m >= 1);
    let mass = solution.mass(t);
    if mass <= 1e-15 {
        return (DiscreteMeasure::empty(), 0.0);
    }
    let density = solution.density();
    let base = density.cdf(t);
    let rho = solution.rho(t);
    let level = |p: f64| -> f64 {
        // quantile of the evolved measure at cumulative mass fraction p
        let q = (base + p * rho).clamp(f64::MIN_POSITIVE, 1.0 - 1e-13);
        (density.quantile(q) - t).max(0.0)
    };
    let w = mass / m as f64;
    let atoms: Vec<(f64, f64)> = (1..=m)
        .map(|i| (level((2 * i - 1) as f64 / (2 * m) as f64), w))
        .collect();
    let mut err = 0.0;
    let mut prev = level(0.0);
    for i in 1..=m {
        let edge = level(i as f64 / m as f64);
        err += w * (edge - prev).min(2.0);
        prev = edge;
    }
    (DiscreteMeasure::from_pairs(atoms), err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::InitialDensity;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn delta(x: f64) -> DiscreteMeasure {
        DiscreteMeasure::from_pairs([(x, 1.0)])
    }

    #[test]
    fn identical_measures_distance_zero() {
        let mu = DiscreteMeasure::from_pairs([(0.1, 0.4), (0.9, 0.6)]);
        assert_eq!(bl_distance(&mu, &mu), 0.0);
    }

    #[test]
    fn unit_atoms_min_two_h() {
        for h in [0.1, 0.5, 1.0, 5.0] {
            let d = bl_distance(&delta(0.0), &delta(h));
            assert!((d - h.min(2.0)).abs() < 1e-12, "h={h}: {d}");
            let o = bl_distance_oracle(&delta(0.0), &delta(h)).unwrap();
            assert!((d - o).abs() < 1e-9);
        }
    }

    #[test]
    fn mass_difference_constant_test_function() {
        let mu = DiscreteMeasure::from_pairs([(1.0, 0.5), (2.0, 0.5)]);
        let nu = DiscreteMeasure::from_pairs([(1.0, 0.25), (2.0, 0.25)]);
        let d = bl_distance(&mu, &nu);
        assert!((d - 0.5).abs() < 1e-12);
        let o = bl_distance_oracle(&mu, &nu).unwrap();
        assert!((d - o).abs() < 1e-9);
    }

    #[test]
    fn distance_to_empty_is_total_mass_when_small() {
        let mu = DiscreteMeasure::from_pairs([(0.3, 0.2), (0.6, 0.3)]);
        let d = bl_distance(&mu, &DiscreteMeasure::empty());
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slope_trick_matches_direct_evaluation() {
        // random sequences of add_abs/clamp/shift checked against a dense
        // grid representation of the same convex function
        const LO: f64 = -12.0;
        const STEP: f64 = 0.0005;
        const N: usize = 48_001; // covers [-12, 12]
        let grid_x = |i: usize| LO + i as f64 * STEP;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let mut st = SlopeTrick::new();
            let mut grid = vec![0.0f64; N];
            let apply_abs = |grid: &mut Vec<f64>, a: f64, w: f64| {
                for i in 0..N {
                    grid[i] += w * (grid_x(i) - a).abs();
                }
            };
            st.add_abs(0.0, 1.0);
            apply_abs(&mut grid, 0.0, 1.0);
            for _ in 0..6 {
                match rng.gen_range(0..3) {
                    0 => {
                        // grid-aligned kink keeps the reference exact
                        let a = rng.gen_range(-4000i64..4000) as f64 * STEP;
                        let w = rng.gen_range(0.0..1.5);
                        st.add_abs(a, w);
                        apply_abs(&mut grid, a, w);
                    }
                    1 => {
                        st.clamp_unit();
                        // inf-conv with |.|: forward/backward distance pass
                        for i in 1..N {
                            grid[i] = grid[i].min(grid[i - 1] + STEP);
                        }
                        for i in (0..N - 1).rev() {
                            grid[i] = grid[i].min(grid[i + 1] + STEP);
                        }
                    }
                    _ => {
                        // horizontal shift by a whole number of grid steps
                        let steps = rng.gen_range(-400i64..400);
                        let c = steps as f64 * STEP;
                        st.shift_arg(c);
                        let old = grid.clone();
                        for i in 0..N {
                            let j = i as i64 + steps;
                            grid[i] = if (0..N as i64).contains(&j) {
                                old[j as usize]
                            } else {
                                f64::INFINITY
                            };
                        }
                    }
                }
            }
            for &x in &[-1.5, -0.3, 0.0, 0.7, 2.0] {
                let i = ((x - LO) / STEP).round() as usize;
                let fast = st.eval(grid_x(i));
                let slow = grid[i];
                assert!(
                    (fast - slow).abs() < 1e-9,
                    "fast {fast} slow {slow} at x={x}"
                );
            }
        }
    }

    fn random_measure(rng: &mut impl Rng, max_atoms: usize) -> DiscreteMeasure {
        let k = rng.gen_range(0..=max_atoms);
        DiscreteMeasure::from_pairs(
            (0..k).map(|_| (rng.gen_range(0.0..3.0), rng.gen_range(0.01..0.5))),
        )
    }

    #[test]
    fn fuzz_against_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mu = random_measure(&mut rng, 4);
            let nu = random_measure(&mut rng, 4);
            let fast = bl_distance(&mu, &nu);
            let slow = bl_distance_oracle(&mu, &nu).unwrap();
            assert!(
                (fast - slow).abs() < 1e-9,
                "fast {fast} slow {slow} mu {mu:?} nu {nu:?}"
            );
        }
    }

    #[test]
    fn oracle_rejects_large_support() {
        let mu = DiscreteMeasure::from_pairs((0..9).map(|i| (i as f64, 0.1)));
        assert!(bl_distance_oracle(&mu, &DiscreteMeasure::empty()).is_err());
    }

    #[test]
    fn metric_axioms_fuzzed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a = random_measure(&mut rng, 5);
            let b = random_measure(&mut rng, 5);
            let c = random_measure(&mut rng, 5);
            let dab = bl_distance(&a, &b);
            let dba = bl_distance(&b, &a);
            assert!((dab - dba).abs() < 1e-9, "symmetry");
            let dac = bl_distance(&a, &c);
            let dcb = bl_distance(&c, &b);
            assert!(dab <= dac + dcb + 1e-9, "triangle");
            assert!(dab >= 0.0);
        }
    }

    #[test]
    fn duality_sanity_fuzzed() {
        // <mu - nu, phi> <= bl_distance for random unit-BL piecewise
        // linear phi
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let mu = random_measure(&mut rng, 6);
            let nu = random_measure(&mut rng, 6);
            let d = bl_distance(&mu, &nu);
            // random 1-Lipschitz function bounded by 1: phi(x) =
            // clamp(s * (x - x0), -b, b) with |s| <= 1, b <= 1
            for _ in 0..10 {
                let s = rng.gen_range(-1.0..1.0);
                let x0 = rng.gen_range(0.0..3.0);
                let b = rng.gen_range(0.0..1.0);
                let phi = |x: f64| (s * (x - x0)).clamp(-b, b);
                let pairing = mu.integrate(phi) - nu.integrate(phi);
                assert!(pairing <= d + 1e-9, "pairing {pairing} > distance {d}");
            }
        }
    }

    #[test]
    fn shift_pushforward_basics() {
        let mu = DiscreteMeasure::from_pairs([(0.2, 0.5), (0.7, 0.5)]);
        assert_eq!(shift_pushforward(&mu, 0.0), mu);
        let s = shift_pushforward(&mu, 0.5);
        assert_eq!(s.atoms(), &[0.7 - 0.5]);
        assert_eq!(s.weights(), &[0.5]);
        assert!(s.total_mass() <= mu.total_mass());
    }

    #[test]
    fn modulus_single_atom() {
        let mu = delta(1.0);
        for h in [0.01, 0.5, 10.0] {
            assert_eq!(modulus(&mu, h), 1.0);
        }
    }

    #[test]
    fn modulus_equally_spaced() {
        // n equal atoms spaced d apart: a window of width 1.5 d holds two
        let n = 8;
        let d = 0.25;
        let mu = DiscreteMeasure::empirical(
            &(0..n).map(|i| 1.0 + i as f64 * d).collect::<Vec<_>>(),
            1.0 / n as f64,
        );
        assert!((modulus(&mu, 1.5 * d) - 2.0 / n as f64).abs() < 1e-15);
        // quantile measure of uniform01 with n = 4, h = 0.25: windows of
        // width 0.25 over spacing 0.25 capture exactly one atom
        let q = DiscreteMeasure::empirical(&[0.125, 0.375, 0.625, 0.875], 0.25);
        assert!((modulus(&q, 0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn lemma_shift_bound_fuzzed() {
        // bl(mu, S_h mu) <= w(h; mu) + mass * h
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let mu = random_measure(&mut rng, 7);
            for h in [0.05, 0.2, 0.8] {
                let shifted = shift_pushforward(&mu, h);
                let lhs = bl_distance(&mu, &shifted);
                let rhs = modulus(&mu, h) + mu.total_mass() * h;
                assert!(lhs <= rhs + 1e-9, "lhs {lhs} rhs {rhs}");
            }
        }
    }

    #[test]
    fn discretize_uniform_t0() {
        let sol = KineticSolution::new(InitialDensity::uniform01());
        let (d, err) = discretize(&sol, 0.0, 4);
        assert_eq!(d.atoms(), &[0.125, 0.375, 0.625, 0.875]);
        assert!((err - 0.25).abs() < 1e-12);
        let (_, err400) = discretize(&sol, 0.0, 400);
        assert!((err400 - 2.5e-3).abs() < 1e-12);
    }

    #[test]
    fn discretize_exhausted_mass() {
        let sol = KineticSolution::new(InitialDensity::uniform01());
        let (d, err) = discretize(&sol, 1.0, 10);
        assert!(d.is_empty());
        assert_eq!(err, 0.0);
    }

    #[test]
    fn discretize_mass_matches_limit() {
        let sol = KineticSolution::new(InitialDensity::exponential(1.0).unwrap());
        for t in [0.0, 0.3, 1.5] {
            let (d, _) = discretize(&sol, t, 256);
            assert!((d.total_mass() - sol.mass(t)).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn merged_atoms_sorted_and_positive(
            pairs in proptest::collection::vec((0.0f64..5.0, 0.001f64..1.0), 0..12)
        ) {
            let m = DiscreteMeasure::from_pairs(pairs);
            for w in m.weights() {
                prop_assert!(*w > 0.0);
            }
            for pair in m.atoms().windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }

        #[test]
        fn bl_distance_bounded_by_mass_sum(
            a in proptest::collection::vec((0.0f64..4.0, 0.01f64..0.4), 0..10),
            b in proptest::collection::vec((0.0f64..4.0, 0.01f64..0.4), 0..10),
        ) {
            let mu = DiscreteMeasure::from_pairs(a);
            let nu = DiscreteMeasure::from_pairs(b);
            let d = bl_distance(&mu, &nu);
            prop_assert!(d >= -1e-12);
            prop_assert!(d <= mu.total_mass() + nu.total_mass() + 1e-9);
        }
    }
}
