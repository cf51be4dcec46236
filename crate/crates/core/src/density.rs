//! Monte Carlo engine for the chamber-density model: ceil(N^delta) chambers
//! drawn i.i.d. uniformly, the geometric events whose probabilities undergo
//! phase transitions, the flat-survival bound, the threshold-exponent
//! calculus, and the exact draw-count domination check.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Complex2;
use crate::rng::Substream;

/// Experiment parameters. `r` is the separation radius, `k` the occupancy
/// bound, `ell` the free-edge target count.
#[derive(Clone, Debug, Serialize)]
pub struct DensityConfig {
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub r: usize,
    pub k: usize,
    pub ell: usize,
}

impl DensityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::BadDensity(self.delta));
        }
        if self.trials < 1 {
            return Err(Error::NoTrials);
        }
        Ok(())
    }
}

/// m = ceil(N^delta), snapping to the nearest integer first so that exact
/// powers (100^0.5 = 10) do not round up through floating-point noise.
pub fn draw_count(n_faces: u64, delta: f64) -> u64 {
    let x = (n_faces as f64).powf(delta);
    let nearest = x.round();
    let m = if (x - nearest).abs() < 1e-9 { nearest } else { x.ceil() };
    (m as u64).max(1)
}

/// One density-model sample: the i.i.d. draws (with multiplicity) and the
/// deduplicated chamber set A.
#[derive(Clone, Debug)]
pub struct ChamberSample {
    pub draws: Vec<usize>,
    /// sorted, deduplicated
    pub set: Vec<usize>,
    pub m: u64,
}

pub fn sample_chambers(complex: &Complex2, delta: f64, rng: &mut Substream) -> Result<ChamberSample> {
    let n = complex.face_count();
    if n < 2 {
        return Err(Error::TooFewFaces(2));
    }
    let m = draw_count(n as u64, delta);
    let draws: Vec<usize> = (0..m).map(|_| rng.gen_range(n as u64) as usize).collect();
    let mut set = draws.clone();
    set.sort_unstable();
    set.dedup();
    Ok(ChamberSample { draws, set, m })
}

fn member_mask(sample: &ChamberSample, n: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &f in &sample.set {
        mask[f] = true;
    }
    mask
}

/// Truncated BFS in the face metric: distances <= radius from `start`.
fn faces_within_radius(complex: &Complex2, start: usize, radius: usize) -> Vec<(usize, usize)> {
    let mut dist = vec![usize::MAX; complex.face_count()];
    dist[start] = 0;
    let mut out = vec![(start, 0)];
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in complex.face_neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                out.push((w, dist[w]));
                queue.push_back(w);
            }
        }
    }
    out
}

/// All distinct members of A at pairwise face distance >= r.
pub fn event_r_separated(sample: &ChamberSample, complex: &Complex2, r: usize) -> bool {
    if sample.set.len() < 2 || r == 0 {
        return true;
    }
    let mask = member_mask(sample, complex.face_count());
    for &a in &sample.set {
        for (f, d) in faces_within_radius(complex, a, r - 1) {
            if f != a && d >= 1 && mask[f] {
                return false;
            }
        }
    }
    true
}

/// At least `count` unordered pairs of members at face distance exactly 1.
pub fn event_adjacent_pairs(sample: &ChamberSample, complex: &Complex2, count: usize) -> bool {
    let mask = member_mask(sample, complex.face_count());
    let mut pairs = 0usize;
    for &a in &sample.set {
        for &w in complex.face_neighbors(a) {
            if w > a && mask[w] {
                pairs += 1;
                if pairs >= count {
                    return true;
                }
            }
        }
    }
    pairs >= count
}

/// No face-centered ball of radius r contains more than k members of A.
pub fn event_ball_occupancy(sample: &ChamberSample, complex: &Complex2, r: usize, k: usize) -> bool {
    if sample.set.len() <= k {
        return true;
    }
    let mut counts = vec![0usize; complex.face_count()];
    for &a in &sample.set {
        for (f, _) in faces_within_radius(complex, a, r) {
            counts[f] += 1;
            if counts[f] > k {
                return false;
            }
        }
    }
    true
}

/// Edges all of whose q_e + 1 incident faces were drawn, plus the size of a
/// greedy pairwise r-separated subset of them (edge distance = minimum face
/// distance between incident faces).
pub fn count_free_edges(sample: &ChamberSample, complex: &Complex2, r: usize) -> (u64, u64) {
    let mask = member_mask(sample, complex.face_count());
    let free: Vec<usize> = (0..complex.edge_count())
        .filter(|&e| complex.edge_faces(e).iter().all(|&f| mask[f]))
        .collect();
    if free.is_empty() {
        return (0, 0);
    }
    // greedy in edge order; r = 0 keeps everything
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_faces: Vec<bool> = vec![false; complex.face_count()];
    for &e in &free {
        let near_chosen = if r == 0 {
            false
        } else {
            complex.edge_faces(e).iter().any(|&f| {
                faces_within_radius(complex, f, r - 1)
                    .iter()
                    .any(|&(g, _)| chosen_faces[g])
            })
        };
        if !near_chosen {
            chosen.push(e);
            for &f in complex.edge_faces(e) {
                chosen_faces[f] = true;
            }
        }
    }
    (free.len() as u64, chosen.len() as u64)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub enum EventKind {
    RSeparated { r: usize },
    AdjacentPairs { count: usize },
    BallOccupancy { r: usize, k: usize },
    /// at least ell free edges that are pairwise r-separated
    FreeEdges { ell: usize, r: usize },
}

impl EventKind {
    pub fn name(&self) -> String {
        match self {
            EventKind::RSeparated { r } => format!("r-separated(r={r})"),
            EventKind::AdjacentPairs { count } => format!("adjacent-pairs(>={count})"),
            EventKind::BallOccupancy { r, k } => format!("ball-occupancy(r={r},k<={k})"),
            EventKind::FreeEdges { ell, r } => format!("free-edges(>={ell},r={r})"),
        }
    }

    pub fn evaluate(&self, sample: &ChamberSample, complex: &Complex2) -> bool {
        match *self {
            EventKind::RSeparated { r } => event_r_separated(sample, complex, r),
            EventKind::AdjacentPairs { count } => event_adjacent_pairs(sample, complex, count),
            EventKind::BallOccupancy { r, k } => event_ball_occupancy(sample, complex, r, k),
            EventKind::FreeEdges { ell, r } => {
                let (_, separated) = count_free_edges(sample, complex, r);
                separated >= ell as u64
            }
        }
    }
}

/// Aggregated empirical probability of one event.
#[derive(Clone, Debug, Serialize)]
pub struct EventStats {
    pub event: String,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl EventStats {
    fn from_counts(event: String, trials: u64, successes: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        let std_err = (p * (1.0 - p) / trials as f64).sqrt();
        EventStats { event, trials, successes, p_hat: p, std_err, seed }
    }
}

/// Runs `config.trials` independent trials; per-trial substreams keep the
/// result identical across thread schedules.
pub fn run_event(complex: &Complex2, config: &DensityConfig, event: EventKind) -> Result<EventStats> {
    config.validate()?;
    if complex.face_count() < 2 {
        return Err(Error::TooFewFaces(2));
    }
    let successes = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = Substream::for_trial(config.seed, trial);
            let sample = sample_chambers(complex, config.delta, &mut rng).expect("validated");
            event.evaluate(&sample, complex) as u64
        })
        .sum();
    Ok(EventStats::from_counts(event.name(), config.trials, successes, config.seed))
}

/// A designated set of chambers standing in for the trace of a periodic flat.
#[derive(Clone, Debug, Serialize)]
pub struct FlatTrace {
    pub faces: Vec<usize>,
}

impl FlatTrace {
    pub fn new(n_faces: u64, faces: Vec<usize>) -> Result<Self> {
        if faces.is_empty() || faces.iter().any(|&f| f as u64 >= n_faces) {
            return Err(Error::BadTrace);
        }
        let mut faces = faces;
        faces.sort_unstable();
        faces.dedup();
        Ok(FlatTrace { faces })
    }

    /// First `size` chambers; the deterministic stand-in used by experiments.
    pub fn prefix(n_faces: u64, size: u64) -> Result<Self> {
        if size == 0 || size > n_faces {
            return Err(Error::BadTrace);
        }
        Ok(FlatTrace { faces: (0..size as usize).collect() })
    }

    /// Sized from the orbit-count bound C Q^{2 ceil(log_Q s) + 3}, clamped to
    /// the face set.
    pub fn from_ring_data(n_faces: u64, c: u64, q: u64, s: usize) -> Result<Self> {
        let size = c
            .saturating_mul(q.saturating_pow(2 * crate::local_rings::ceil_log(q, s as u64) + 3))
            .min(n_faces);
        FlatTrace::prefix(n_faces, size)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalReport {
    pub n_faces: u64,
    pub trace_size: u64,
    pub m: u64,
    pub stats: EventStats,
    /// exp(-2 m |F'| / N); None when |F'|/N >= 0.79 and the bound is invalid
    pub analytic_bound: Option<f64>,
    /// (1 - |F'|/N)^m
    pub exact: f64,
    /// binomial standard error evaluated at the closed-form probability;
    /// stays positive when p_hat degenerates to 0 or 1
    pub exact_std_err: f64,
    /// empirical >= bound - 3 * exact_std_err (vacuous when the bound is
    /// inapplicable)
    pub holds: bool,
}

/// Probability that all m = ceil(N^delta) draws avoid the trace, against the
/// closed form and the exponential lower bound.
pub fn flat_survival(
    n_faces: u64,
    trace: &FlatTrace,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<SurvivalReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadDensity(delta));
    }
    if trials < 1 {
        return Err(Error::NoTrials);
    }
    if trace.faces.iter().any(|&f| f as u64 >= n_faces) {
        return Err(Error::BadTrace);
    }
    let m = draw_count(n_faces, delta);
    let fsize = trace.faces.len() as u64;
    let ratio = fsize as f64 / n_faces as f64;
    let mut in_trace = vec![false; n_faces as usize];
    for &f in &trace.faces {
        in_trace[f] = true;
    }
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = Substream::for_trial(seed, trial);
            (0..m).all(|_| !in_trace[rng.gen_range(n_faces) as usize]) as u64
        })
        .sum();
    let stats = EventStats::from_counts(format!("flat-survival(|F'|={fsize})"), trials, successes, seed);
    // e^{-2x} <= 1 - x only for x < 0.79
    let analytic_bound = (ratio < 0.79).then(|| (-2.0 * m as f64 * ratio).exp());
    let exact = (1.0 - ratio).powi(m as i32);
    let exact_std_err = (exact * (1.0 - exact) / trials as f64).sqrt();
    let holds = analytic_bound.map_or(true, |b| stats.p_hat >= b - 3.0 * exact_std_err);
    Ok(SurvivalReport { n_faces, trace_size: fsize, m, stats, analytic_bound, exact, exact_std_err, holds })
}

/// Exact critical density as a fraction.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub q: u64,
    pub s: usize,
    pub delta: Option<f64>,
    /// survival exponent at `delta` for the branch selected by s
    pub exponent: Option<f64>,
    /// 2 ceil(log_Q s) + 8s(delta - 1) + 3
    pub generic_exponent: Option<f64>,
    pub critical_num: u64,
    pub critical_den: u64,
    pub critical: f64,
    /// headline threshold printed in the source theorem, when it differs
    pub stated_num: Option<u64>,
    pub stated_den: Option<u64>,
    pub discrepancy: bool,
    pub notes: Vec<String>,
}

/// Survival-exponent calculus: s = 1 gives 8(delta-1)+3 with critical 5/8;
/// s >= 2 gives (1-delta)(s-1) + 8s(delta-1) + 3 with critical (7s-2)/(7s+1).
pub fn threshold_exponent(q: u64, s: usize, delta: Option<f64>) -> Result<ThresholdReport> {
    crate::gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if s < 1 {
        return Err(Error::BadLength);
    }
    if let Some(d) = delta {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::BadDensity(d));
        }
    }
    let su = s as u64;
    let (critical_num, critical_den) = if s == 1 { (5, 8) } else { (7 * su - 2, 7 * su + 1) };
    let exponent = delta.map(|d| {
        if s == 1 {
            8.0 * (d - 1.0) + 3.0
        } else {
            (1.0 - d) * (s as f64 - 1.0) + 8.0 * s as f64 * (d - 1.0) + 3.0
        }
    });
    let generic_exponent = delta.map(|d| {
        2.0 * crate::local_rings::ceil_log(q, su) as f64 + 8.0 * s as f64 * (d - 1.0) + 3.0
    });
    let discrepancy = s >= 2;
    let (stated_num, stated_den) = if discrepancy { (Some(7 * su - 3), Some(7 * su + 1)) } else { (None, None) };
    let mut notes = Vec::new();
    if discrepancy {
        notes.push(format!(
            "headline threshold ({}/{}) differs from the derived critical density ({}/{}); reporting the derived value",
            7 * su - 3,
            7 * su + 1,
            critical_num,
            critical_den
        ));
    }
    Ok(ThresholdReport {
        q,
        s,
        delta,
        exponent,
        generic_exponent,
        critical_num,
        critical_den,
        critical: critical_num as f64 / critical_den as f64,
        stated_num,
        stated_den,
        discrepancy,
        notes,
    })
}

/// The fixed-point-free threshold q*/(q*+1) driven by the lowest edge order.
/// The headline conditions involving (q-1)/(q-2) exceed 1 as printed; this is
/// the usable value.
pub fn fa_threshold(q_star: u64) -> (u64, u64) {
    (q_star, q_star + 1)
}

/// Monotone (upward-closed) property of subsets of a ground set of at most
/// 32 faces, given by a predicate on bitmasks.
pub struct MonotoneProperty<'a> {
    pub name: String,
    pub pred: Box<dyn Fn(u32) -> bool + Sync + 'a>,
}

impl<'a> MonotoneProperty<'a> {
    pub fn new(name: impl Into<String>, pred: impl Fn(u32) -> bool + Sync + 'a) -> Self {
        MonotoneProperty { name: name.into(), pred: Box::new(pred) }
    }

    /// Upward closure of a set of generator masks.
    pub fn from_generators(name: impl Into<String>, generators: Vec<u32>) -> Self {
        MonotoneProperty::new(name, move |mask| generators.iter().any(|g| mask & g == *g))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub n: usize,
    pub m1: u64,
    pub m2: u64,
    pub favorable1: u64,
    pub favorable2: u64,
    pub total1: u64,
    pub total2: u64,
    /// P_{m1} <= P_{m2}, compared exactly by cross-multiplication
    pub holds: bool,
}

const DOMINATION_N_CAP: usize = 8;
const DOMINATION_M_CAP: u64 = 5;

/// Exact probabilities that the deduplicated draw set satisfies an
/// upward-closed property, enumerating all N^m draw sequences, for both draw
/// counts; monotonicity of the property is verified first.
pub fn domination_exact(
    n: usize,
    m1: u64,
    m2: u64,
    property: &MonotoneProperty<'_>,
) -> Result<DominationReport> {
    if n == 0 || n > DOMINATION_N_CAP {
        return Err(Error::DominationCap(format!("ground size {n} outside 1..={DOMINATION_N_CAP}")));
    }
    if m1 > m2 {
        return Err(Error::DrawsNotOrdered(m1, m2));
    }
    if m2 == 0 || m2 > DOMINATION_M_CAP {
        return Err(Error::DominationCap(format!("draw count {m2} outside 1..={DOMINATION_M_CAP}")));
    }
    // monotone under adding one element => upward closed
    for mask in 0..(1u32 << n) {
        if (property.pred)(mask) {
            for x in 0..n {
                let bigger = mask | (1 << x);
                if !(property.pred)(bigger) {
                    return Err(Error::NotMonotone(mask));
                }
            }
        }
    }
    let count = |m: u64| -> (u64, u64) {
        let total = (n as u64).pow(m as u32);
        let mut favorable = 0u64;
        for seq in 0..total {
            let mut mask = 0u32;
            let mut rest = seq;
            for _ in 0..m {
                mask |= 1 << (rest % n as u64);
                rest /= n as u64;
            }
            favorable += (property.pred)(mask) as u64;
        }
        (favorable, total)
    };
    let (favorable1, total1) = count(m1);
    let (favorable2, total2) = count(m2);
    // P1 <= P2  <=>  favorable1 * total2 <= favorable2 * total1
    let holds = (favorable1 as u128) * (total2 as u128) <= (favorable2 as u128) * (total1 as u128);
    Ok(DominationReport { n, m1, m2, favorable1, favorable2, total1, total2, holds })
}

/// A random upward-closed property: the closure of a few random generator
/// masks drawn from the experiment RNG.
pub fn random_monotone_property(n: usize, rng: &mut Substream) -> MonotoneProperty<'static> {
    let gen_count = 1 + rng.gen_range(3) as usize;
    let generators: Vec<u32> = (0..gen_count)
        .map(|_| (rng.next_u64() & ((1u64 << n) - 1)) as u32)
        .collect();
    MonotoneProperty::from_generators(format!("closure-of-{generators:?}"), generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_torus, thicken};

    #[test]
    fn draw_counts_match_expected() {
        assert_eq!(draw_count(100, 0.5), 10);
        assert_eq!(draw_count(100, 0.01), 2);
        assert_eq!(draw_count(512, 0.35), 9);
        assert_eq!(draw_count(1024, 0.6), 64);
        assert_eq!(draw_count(1024, 0.85), 363);
    }

    #[test]
    fn config_validation() {
        let mut c = DensityConfig { delta: 0.5, trials: 10, seed: 1, r: 2, k: 2, ell: 3 };
        assert!(c.validate().is_ok());
        c.delta = 1.0;
        assert!(matches!(c.validate(), Err(Error::BadDensity(_))));
        c.delta = 1.2;
        assert!(matches!(c.validate(), Err(Error::BadDensity(_))));
        c.delta = 0.5;
        c.trials = 0;
        assert!(matches!(c.validate(), Err(Error::NoTrials)));
    }

    #[test]
    fn sampling_is_reproducible_and_dedups() {
        let t = build_torus(6).unwrap();
        let mut r1 = Substream::for_trial(9, 0);
        let mut r2 = Substream::for_trial(9, 0);
        let s1 = sample_chambers(&t, 0.7, &mut r1).unwrap();
        let s2 = sample_chambers(&t, 0.7, &mut r2).unwrap();
        assert_eq!(s1.draws, s2.draws);
        assert_eq!(s1.m, draw_count(72, 0.7));
        assert!(s1.set.len() <= s1.draws.len());
        assert!(s1.set.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn separated_event_edge_cases() {
        let t = build_torus(6).unwrap();
        let single = ChamberSample { draws: vec![5], set: vec![5], m: 1 };
        assert!(event_r_separated(&single, &t, 2));
        // faces 0 and 1 share two vertices: distance 1
        let close = ChamberSample { draws: vec![0, 1], set: vec![0, 1], m: 2 };
        assert!(!event_r_separated(&close, &t, 2));
        assert!(event_r_separated(&close, &t, 1));
        // duplicated draw is one set element and no pair
        let dup = ChamberSample { draws: vec![3, 3], set: vec![3], m: 2 };
        assert!(event_r_separated(&dup, &t, 2));
        assert!(event_adjacent_pairs(&close, &t, 1));
        assert!(!event_adjacent_pairs(&dup, &t, 1));
    }

    #[test]
    fn occupancy_event_edge_cases() {
        let t = build_torus(6).unwrap();
        let s = ChamberSample { draws: vec![0, 1, 2], set: vec![0, 1, 2], m: 3 };
        // k >= |A| is vacuous
        assert!(event_ball_occupancy(&s, &t, 3, 3));
        // r = 0: singleton balls hold at most one member
        assert!(event_ball_occupancy(&s, &t, 0, 1));
        // faces 0,1,2 are mutually within distance 2
        assert!(!event_ball_occupancy(&s, &t, 2, 2));
    }

    #[test]
    fn free_edges_extremes() {
        let t = build_torus(4).unwrap();
        let none = ChamberSample { draws: vec![], set: vec![], m: 0 };
        assert_eq!(count_free_edges(&none, &t, 2), (0, 0));
        let all: Vec<usize> = (0..t.face_count()).collect();
        let full = ChamberSample { draws: all.clone(), set: all, m: t.face_count() as u64 };
        let (count, sep) = count_free_edges(&full, &t, 2);
        assert_eq!(count, t.edge_count() as u64);
        assert!(sep >= 1);
    }

    #[test]
    fn run_event_is_deterministic_across_schedules() {
        let t = build_torus(8).unwrap();
        let config = DensityConfig { delta: 0.35, trials: 60, seed: 123, r: 2, k: 2, ell: 3 };
        let a = run_event(&t, &config, EventKind::RSeparated { r: 2 }).unwrap();
        let b = run_event(&t, &config, EventKind::RSeparated { r: 2 }).unwrap();
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.p_hat, b.p_hat);
    }

    #[test]
    fn separated_probability_matches_oracle_band() {
        // independent numpy oracle: p ~ 0.515 at n=12, delta=0.3, r=2
        let t = build_torus(12).unwrap();
        let config = DensityConfig { delta: 0.3, trials: 500, seed: 2024, r: 2, k: 2, ell: 3 };
        let stats = run_event(&t, &config, EventKind::RSeparated { r: 2 }).unwrap();
        assert!((0.42..=0.62).contains(&stats.p_hat), "p_hat={}", stats.p_hat);
    }

    #[test]
    fn adjacent_pairs_probability_near_one_at_high_density() {
        let t = build_torus(12).unwrap();
        let config = DensityConfig { delta: 0.7, trials: 300, seed: 11, r: 2, k: 2, ell: 3 };
        let stats = run_event(&t, &config, EventKind::AdjacentPairs { count: 3 }).unwrap();
        assert!(stats.p_hat >= 0.99, "p_hat={}", stats.p_hat);
    }

    #[test]
    fn occupancy_probability_is_low_even_below_threshold_at_desk_scale() {
        // the asymptotic direction (delta < 2/3) does not lift the finite-size
        // value at n=12: the oracle gives p ~ 0.0
        let t = build_torus(12).unwrap();
        let config = DensityConfig { delta: 0.55, trials: 300, seed: 5, r: 1, k: 2, ell: 3 };
        let stats = run_event(&t, &config, EventKind::BallOccupancy { r: 1, k: 2 }).unwrap();
        assert!(stats.p_hat <= 0.02, "p_hat={}", stats.p_hat);
    }

    #[test]
    fn free_edges_grow_with_side_length() {
        let small = thicken(&build_torus(8).unwrap(), 1).unwrap();
        let large = thicken(&build_torus(16).unwrap(), 1).unwrap();
        let config = DensityConfig { delta: 0.85, trials: 200, seed: 77, r: 2, k: 2, ell: 3 };
        let ps = run_event(&small, &config, EventKind::FreeEdges { ell: 3, r: 2 }).unwrap();
        let pl = run_event(&large, &config, EventKind::FreeEdges { ell: 3, r: 2 }).unwrap();
        // oracle: ~0.33 at n=8 vs ~0.90 at n=16
        assert!(pl.p_hat > ps.p_hat + 0.3, "{} vs {}", ps.p_hat, pl.p_hat);
    }

    #[test]
    fn probabilities_are_monotone_in_delta() {
        // each event's probability moves in the direction its transition
        // asserts as delta grows, up to 3-sigma slack
        let t = build_torus(12).unwrap();
        let run = |delta: f64, event: EventKind| {
            let config = DensityConfig { delta, trials: 400, seed: 31, r: 2, k: 2, ell: 3 };
            run_event(&t, &config, event).unwrap()
        };
        let slack = |a: &EventStats, b: &EventStats| {
            3.0 * (a.std_err * a.std_err + b.std_err * b.std_err).sqrt()
        };
        let (lo, hi) = (run(0.3, EventKind::RSeparated { r: 2 }), run(0.6, EventKind::RSeparated { r: 2 }));
        assert!(hi.p_hat <= lo.p_hat + slack(&lo, &hi), "separation probability must fall in delta");
        let (lo, hi) = (run(0.4, EventKind::AdjacentPairs { count: 3 }), run(0.7, EventKind::AdjacentPairs { count: 3 }));
        assert!(hi.p_hat >= lo.p_hat - slack(&lo, &hi), "adjacency probability must rise in delta");
        let (lo, hi) = (run(0.35, EventKind::BallOccupancy { r: 1, k: 2 }), run(0.7, EventKind::BallOccupancy { r: 1, k: 2 }));
        assert!(hi.p_hat <= lo.p_hat + slack(&lo, &hi), "occupancy probability must fall in delta");
        let thick = thicken(&build_torus(8).unwrap(), 1).unwrap();
        let runt = |delta: f64| {
            let config = DensityConfig { delta, trials: 400, seed: 31, r: 2, k: 2, ell: 1 };
            run_event(&thick, &config, EventKind::FreeEdges { ell: 1, r: 0 }).unwrap()
        };
        let (lo, hi) = (runt(0.5), runt(0.85));
        assert!(hi.p_hat >= lo.p_hat - slack(&lo, &hi), "free-edge probability must rise in delta");
    }

    #[test]
    fn fa_threshold_form() {
        assert_eq!(fa_threshold(3), (3, 4));
        assert_eq!(fa_threshold(1), (1, 2));
    }

    #[test]
    fn survival_matches_closed_form() {
        let trace = FlatTrace::prefix(10_000, 50).unwrap();
        let rep = flat_survival(10_000, &trace, 0.5, 2000, 99).unwrap();
        assert_eq!(rep.m, 100);
        let exact = (1.0f64 - 0.005).powi(100);
        assert!((rep.exact - exact).abs() < 1e-12);
        assert!((rep.stats.p_hat - exact).abs() <= 3.0 * rep.stats.std_err + 1e-9);
        let bound = rep.analytic_bound.unwrap();
        assert!((bound - (-1.0f64).exp()).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn survival_guard_and_trace_validation() {
        assert!(matches!(FlatTrace::prefix(100, 0), Err(Error::BadTrace)));
        assert!(matches!(FlatTrace::new(100, vec![101]), Err(Error::BadTrace)));
        // |F'|/N = 0.9 >= 0.79: Monte Carlo still runs, bound inapplicable
        let trace = FlatTrace::prefix(100, 90).unwrap();
        let rep = flat_survival(100, &trace, 0.5, 200, 4).unwrap();
        assert!(rep.analytic_bound.is_none());
        assert!(rep.holds);
        // |F'| = N: probability zero
        let all = FlatTrace::prefix(100, 100).unwrap();
        let rep = flat_survival(100, &all, 0.5, 200, 4).unwrap();
        assert_eq!(rep.stats.successes, 0);
    }

    #[test]
    fn trace_sizing_from_ring_data() {
        // C Q^{2 ceil log + 3} = 1 * 2^(2*1+3) = 32 for (Q,s) = (2,2)
        let t = FlatTrace::from_ring_data(1000, 1, 2, 2).unwrap();
        assert_eq!(t.faces.len(), 32);
        // clamped to the face count
        let t = FlatTrace::from_ring_data(10, 1, 2, 2).unwrap();
        assert_eq!(t.faces.len(), 10);
    }

    #[test]
    fn threshold_exponents() {
        let rep = threshold_exponent(2, 1, Some(0.625)).unwrap();
        assert_eq!(rep.exponent.unwrap(), 0.0);
        assert_eq!((rep.critical_num, rep.critical_den), (5, 8));
        assert!(!rep.discrepancy);

        let rep = threshold_exponent(2, 2, Some(0.8)).unwrap();
        assert!(rep.exponent.unwrap().abs() < 1e-12);
        assert_eq!((rep.critical_num, rep.critical_den), (12, 15));
        assert!(rep.discrepancy);
        assert_eq!((rep.stated_num, rep.stated_den), (Some(11), Some(15)));

        let rep = threshold_exponent(2, 1, Some(0.5)).unwrap();
        assert_eq!(rep.exponent.unwrap(), -1.0);

        assert!(matches!(threshold_exponent(2, 0, None), Err(Error::BadLength)));
        assert!(matches!(threshold_exponent(2, 1, Some(1.5)), Err(Error::BadDensity(_))));
    }

    #[test]
    fn domination_examples() {
        // always-true property
        let top = MonotoneProperty::new("true", |_| true);
        let rep = domination_exact(4, 1, 2, &top).unwrap();
        assert_eq!((rep.favorable1, rep.total1), (4, 4));
        assert_eq!((rep.favorable2, rep.total2), (16, 16));
        assert!(rep.holds);

        // contains face 0: P_1 = 1/4, P_2 = 7/16
        let zero = MonotoneProperty::new("contains-0", |m| m & 1 == 1);
        let rep = domination_exact(4, 1, 2, &zero).unwrap();
        assert_eq!(rep.favorable1 * rep.total2, 1 * 16);
        assert_eq!(rep.favorable2 * rep.total1, 7 * 4);
        assert!(rep.holds);

        // one draw yields one element
        let two_elems = MonotoneProperty::new(">=2", |m: u32| m.count_ones() >= 2);
        let rep = domination_exact(3, 1, 2, &two_elems).unwrap();
        assert_eq!(rep.favorable1, 0);
        assert!(rep.holds);
    }

    #[test]
    fn domination_rejects_non_monotone_and_bad_args() {
        let not_mono = MonotoneProperty::new("parity", |m: u32| m.count_ones() % 2 == 0);
        assert!(matches!(domination_exact(3, 1, 2, &not_mono), Err(Error::NotMonotone(_))));
        let top = MonotoneProperty::new("true", |_| true);
        assert!(matches!(domination_exact(3, 3, 2, &top), Err(Error::DrawsNotOrdered(3, 2))));
        assert!(matches!(domination_exact(9, 1, 2, &top), Err(Error::DominationCap(_))));
        assert!(matches!(domination_exact(3, 1, 6, &top), Err(Error::DominationCap(_))));
    }

    #[test]
    fn random_monotone_properties_pass_domination() {
        let mut rng = Substream::from_seed(31415);
        for _ in 0..20 {
            let prop = random_monotone_property(5, &mut rng);
            let rep = domination_exact(5, 2, 3, &prop).unwrap();
            assert!(rep.holds, "{}", prop.name);
        }
    }
}
