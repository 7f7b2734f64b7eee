//! The interacting particle system: `n` particles drift left at unit
//! speed; whenever one reaches the origin, it is removed together with a
//! uniformly chosen companion from the survivors.
//!
//! Because every particle moves at the same speed, the next particle to
//! hit the origin is always the alive particle with the smallest initial
//! position, and it hits at a time equal to that position. The whole run
//! therefore reduces to `n/2` removal events resolved with an order
//! statistic structure; no time stepping is involved.

use crate::error::{Error, Result};
use crate::kinetic::KineticSolution;
use crate::metrics::DiscreteMeasure;
use rand::Rng;
use std::fmt::Write as _;

/// Fenwick tree over particle slots supporting rank/select/delete in
/// `O(log n)`.
struct AliveSet {
    tree: Vec<usize>,
    len: usize,
}

impl AliveSet {
    fn full(n: usize) -> Self {
        let mut s = Self { tree: vec![0; n + 1], len: n };
        for i in 0..n {
            s.add(i, 1);
        }
        s
    }

    fn add(&mut self, i: usize, delta: usize) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn remove(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
        self.len -= 1;
    }

    /// Index of the `rank`-th alive slot (0-based).
    fn select(&self, rank: usize) -> usize {
        debug_assert!(rank < self.len);
        let mut pos = 0usize;
        let mut remaining = rank + 1;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] < remaining {
                remaining -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Full record of one run: hit times in order and which particles each
/// event removed, as indices into the sorted initial configuration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub positions: Vec<f64>,
    pub hit_times: Vec<f64>,
    /// `(hitter, companion)` per event.
    pub removed_pairs: Vec<(usize, usize)>,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// Removal time of each particle; `None` marks a particle that never
    /// existed (out of range).
    fn removal_times(&self) -> Vec<f64> {
        let mut out = vec![f64::INFINITY; self.n()];
        for (k, &(a, b)) in self.removed_pairs.iter().enumerate() {
            out[a] = self.hit_times[k];
            out[b] = self.hit_times[k];
        }
        out
    }

    /// Empirical measure of survivors at time `t`, each with weight
    /// `1/n`, positions shifted down by `t`. Events at exactly `t` count
    /// as already resolved.
    pub fn snapshot_empirical(&self, t: f64) -> DiscreteMeasure {
        let removed = self.removal_times();
        let n = self.n() as f64;
        let pts: Vec<f64> = self
            .positions
            .iter()
            .enumerate()
            .filter(|&(i, &a)| removed[i] > t && a > t)
            .map(|(_, &a)| a - t)
            .collect();
        DiscreteMeasure::empirical(&pts, 1.0 / n)
    }

    /// Alive particle count at time `t`.
    pub fn alive_count(&self, t: f64) -> usize {
        let events = self.hit_times.partition_point(|&tau| tau <= t);
        self.n() - 2 * events
    }

    pub fn loss_path(&self) -> LossPath {
        LossPath { times: self.hit_times.clone(), n: self.n() }
    }

    /// One line per event: `event_index,tau,hit_index,companion_index`.
    pub fn events_csv(&self) -> String {
        let mut out = String::from("event_index,tau,hit_index,companion_index\n");
        for (k, (&tau, &(a, b))) in
            self.hit_times.iter().zip(&self.removed_pairs).enumerate()
        {
            writeln!(out, "{k},{tau},{a},{b}").unwrap();
        }
        out
    }
}

/// The step function `L^n(t)`: events resolved by time `t`, divided by
/// `n`. Right-continuous; reaches `1/2` after the final event.
#[derive(Debug, Clone)]
pub struct LossPath {
    times: Vec<f64>,
    n: usize,
}

impl LossPath {
    pub fn value(&self, t: f64) -> f64 {
        self.times.partition_point(|&tau| tau <= t) as f64 / self.n as f64
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.times
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Runs the system from a sorted configuration of strictly increasing
/// positive positions; the count must be even and nonzero.
pub fn simulate(positions: &[f64], rng: &mut impl Rng) -> Result<Trajectory> {
    validate_positions(positions)?;
    let n = positions.len();
    let mut alive = AliveSet::full(n);
    let mut hit_times = Vec::with_capacity(n / 2);
    let mut removed_pairs = Vec::with_capacity(n / 2);
    while alive.len > 0 {
        let hitter = alive.select(0);
        alive.remove(hitter);
        let companion = alive.select(rng.gen_range(0..alive.len));
        alive.remove(companion);
        hit_times.push(positions[hitter]);
        removed_pairs.push((hitter, companion));
    }
    Ok(Trajectory { positions: positions.to_vec(), hit_times, removed_pairs })
}

fn validate_positions(positions: &[f64]) -> Result<()> {
    if positions.is_empty() || positions.len() % 2 != 0 {
        return Err(Error::OddParticleCount(positions.len()));
    }
    let mut prev = 0.0f64;
    for &x in positions {
        if !x.is_finite() || x <= prev {
            return Err(Error::InvalidPositions(format!(
                "positions must be finite, positive, strictly increasing; saw {x} after {prev}"
            )));
        }
        prev = x;
    }
    Ok(())
}

/// Supremum over time of `|L^n(t) - L(t)|`, using that between events the
/// step function is flat while the limit is nondecreasing: the sup is
/// attained at an event time, from the left or the right.
pub fn sup_loss_deviation(traj: &Trajectory, solution: &KineticSolution) -> f64 {
    let n = traj.n() as f64;
    let mut sup = 0.0f64;
    for (k, &tau) in traj.hit_times.iter().enumerate() {
        let target = solution.loss(tau);
        let before = k as f64 / n;
        let after = (k + 1) as f64 / n;
        sup = sup.max((before - target).abs()).max((after - target).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{quantile_init, InitialDensity};
    use crate::metrics::{bl_distance, shift_pushforward};
    use crate::stream::{rng_for, StreamKey};
    use crate::urn::{exact_pmf, UrnSpec, DEFAULT_PMF_CAP};

    fn key(r: u64) -> StreamKey {
        StreamKey::new(7, 0, r)
    }

    #[test]
    fn rejects_bad_configurations() {
        let mut rng = rng_for(key(0));
        assert!(simulate(&[], &mut rng).is_err());
        assert!(simulate(&[0.5], &mut rng).is_err());
        assert!(simulate(&[0.5, 0.5], &mut rng).is_err());
        assert!(simulate(&[-0.5, 0.5], &mut rng).is_err());
        assert!(simulate(&[0.5, 0.25], &mut rng).is_err());
    }

    #[test]
    fn two_particles_single_event() {
        let mut rng = rng_for(key(1));
        let traj = simulate(&[0.25, 0.75], &mut rng).unwrap();
        assert_eq!(traj.hit_times, vec![0.25]);
        assert_eq!(traj.removed_pairs, vec![(0, 1)]);
        assert_eq!(traj.alive_count(0.2), 2);
        assert_eq!(traj.alive_count(0.25), 0);
    }

    #[test]
    fn four_particle_branch_frequencies() {
        // First event removes particle 0 plus a uniform companion.
        // Companion 1 leaves {2,3} (second hit at a[2]); companion 2 or 3
        // leaves particle 1 alive (second hit at a[1]). So the second hit
        // time is a[2] with probability 1/3 and a[1] with probability 2/3.
        let a = [0.1, 0.2, 0.4, 0.8];
        let trials = 60_000;
        let mut at_a2 = 0usize;
        let mut companions = [0usize; 4];
        for rep in 0..trials {
            let mut rng = rng_for(key(rep as u64));
            let traj = simulate(&a, &mut rng).unwrap();
            assert_eq!(traj.hit_times[0], 0.1);
            companions[traj.removed_pairs[0].1] += 1;
            if traj.hit_times[1] == 0.4 {
                at_a2 += 1;
            } else {
                assert_eq!(traj.hit_times[1], 0.2);
            }
        }
        let freq = at_a2 as f64 / trials as f64;
        assert!((freq - 1.0 / 3.0).abs() < 0.01, "freq {freq}");
        // first companion uniform over the three survivors
        assert_eq!(companions[0], 0);
        for c in &companions[1..] {
            let f = *c as f64 / trials as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.01, "companion freq {f}");
        }
    }

    #[test]
    fn alive_count_matches_urn_distribution() {
        // Particles at positions straddling t = 0.5, three on each side.
        // The survivor count at t has the law of the terminal red count
        // of the urn with 6 balls, 3 red.
        let a = [0.1, 0.2, 0.3, 0.6, 0.7, 0.9];
        let exact = exact_pmf(UrnSpec::new(6, 3).unwrap(), DEFAULT_PMF_CAP).unwrap();
        let trials = 80_000usize;
        let mut counts = std::collections::HashMap::new();
        for rep in 0..trials {
            let mut rng = rng_for(StreamKey::new(11, 0, rep as u64));
            let traj = simulate(&a, &mut rng).unwrap();
            *counts.entry(traj.alive_count(0.5)).or_insert(0usize) += 1;
        }
        for (&x, &p) in exact.support.iter().zip(&exact.probabilities) {
            let f = *counts.get(&x).unwrap_or(&0) as f64 / trials as f64;
            assert!((f - p).abs() < 0.01, "x={x}: {f} vs {p}");
        }
        let covered: usize = exact
            .support
            .iter()
            .map(|x| *counts.get(x).unwrap_or(&0))
            .sum();
        assert_eq!(covered, trials, "alive counts outside urn support");
    }

    #[test]
    fn mass_bookkeeping() {
        let density = InitialDensity::uniform01();
        let a = quantile_init(100, &density).unwrap();
        let mut rng = rng_for(key(3));
        let traj = simulate(&a, &mut rng).unwrap();
        assert_eq!(traj.hit_times.len(), 50);
        assert!(traj.hit_times.windows(2).all(|w| w[0] < w[1]));
        let path = traj.loss_path();
        for &t in &[0.0, 0.1, 0.5, 0.9, 2.0] {
            let alive = traj.alive_count(t) as f64;
            let snap = traj.snapshot_empirical(t);
            assert!((snap.total_mass() - alive / 100.0).abs() < 1e-12);
            assert!((path.value(t) - (100.0 - alive) / 200.0).abs() < 1e-12);
        }
        // every index removed exactly once
        let mut seen = vec![false; 100];
        for &(x, y) in &traj.removed_pairs {
            assert!(!seen[x] && !seen[y] && x != y);
            seen[x] = true;
            seen[y] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn minimal_uniform_pair_deviation() {
        let density = InitialDensity::uniform01();
        let a = quantile_init(2, &density).unwrap();
        assert_eq!(a, vec![0.25, 0.75]);
        let mut rng = rng_for(key(4));
        let traj = simulate(&a, &mut rng).unwrap();
        let solution = KineticSolution::new(density);
        let d = sup_loss_deviation(&traj, &solution);
        assert!((d - 0.28125).abs() < 1e-12, "deviation {d}");
    }

    #[test]
    fn deviation_shrinks_with_n() {
        let density = InitialDensity::uniform01();
        let solution = KineticSolution::new(density.clone());
        let mut last = f64::INFINITY;
        for (i, n) in [100usize, 10_000].into_iter().enumerate() {
            let a = quantile_init(n, &density).unwrap();
            let mut rng = rng_for(key(20 + i as u64));
            let traj = simulate(&a, &mut rng).unwrap();
            let d = sup_loss_deviation(&traj, &solution);
            assert!(d < last, "deviation failed to shrink: {d} >= {last}");
            last = d;
        }
        assert!(last < 0.02, "n=10000 deviation {last}");
    }

    #[test]
    fn snapshot_drift_bounded_by_loss_increment() {
        // Between t0 and t the empirical measure differs from the shifted
        // t0 snapshot only by removal events, each moving 2/n of mass.
        let density = InitialDensity::exponential(1.0).unwrap();
        let a = quantile_init(200, &density).unwrap();
        for rep in 0..5 {
            let mut rng = rng_for(key(40 + rep));
            let traj = simulate(&a, &mut rng).unwrap();
            let path = traj.loss_path();
            for &(t0, t) in &[(0.0, 0.3), (0.2, 0.5), (0.5, 1.5)] {
                let mu_t = traj.snapshot_empirical(t);
                let shifted = shift_pushforward(&traj.snapshot_empirical(t0), t - t0);
                let d = bl_distance(&mu_t, &shifted);
                let budget = 2.0 * (path.value(t) - path.value(t0));
                assert!(d <= budget + 1e-12, "d={d} budget={budget} ({t0},{t})");
            }
        }
    }

    #[test]
    fn events_csv_round_trip() {
        let mut rng = rng_for(key(5));
        let traj = simulate(&[0.25, 0.75], &mut rng).unwrap();
        assert_eq!(
            traj.events_csv(),
            "event_index,tau,hit_index,companion_index\n0,0.25,0,1\n"
        );
    }

    #[test]
    fn select_is_consistent_with_removals() {
        let mut alive = AliveSet::full(10);
        assert_eq!(alive.select(0), 0);
        assert_eq!(alive.select(9), 9);
        alive.remove(0);
        alive.remove(5);
        assert_eq!(alive.select(0), 1);
        assert_eq!(alive.select(4), 6);
        assert_eq!(alive.select(7), 9);
        assert_eq!(alive.len, 8);
    }
}
