//! Adaptive and oblivious attacks.
//!
//! The adaptive attack reads the target's revealed forest after every
//! answer. If two answers are further apart in the forest than in time, a
//! binary search on the gap finds consecutive times whose answers were never
//! connected. If the walk's endpoints are suspiciously close, the attack
//! narrows in on a window where the walk must either stay short or return to
//! a branch point, both of which the distinguisher flags.

use std::collections::BTreeMap;

use serde::Serialize;

use super::distinguisher::{distinguisher, Witness};
use super::targets::AttackTarget;
use super::AttackConfig;
use crate::forest::ForestEvent;
use crate::graph::{RegularGraph, Vertex};
use crate::probe::ProbeStats;

const INF: u64 = u64::MAX;

/// Phases the adaptive attack went through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Endpoints consistent and not close: nothing further to probe.
    Consistent,
    NoPath,
    PushDown,
    Spike,
    DenseWindow,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub verdict: bool,
    pub witness: Option<Witness>,
    /// The target refused a query; counted as a detection.
    pub forfeit: bool,
    pub cap_reached: bool,
    pub queries: u64,
    pub query_cap: u64,
    pub branches: Vec<Branch>,
    /// `(time, vertex)` in query order.
    pub responses: Vec<(u64, Vertex)>,
    pub probes: ProbeStats,
    pub events: Vec<ForestEvent>,
}

struct Run<'a, T: AttackTarget + ?Sized> {
    target: &'a mut T,
    graph: &'a RegularGraph,
    config: &'a AttackConfig,
    answers: BTreeMap<u64, Vertex>,
    order: Vec<(u64, Vertex)>,
    cap: u64,
    forfeit: bool,
    cap_reached: bool,
    branches: Vec<Branch>,
}

impl<'a, T: AttackTarget + ?Sized> Run<'a, T> {
    fn new(target: &'a mut T, graph: &'a RegularGraph, config: &'a AttackConfig, cap: u64) -> Self {
        Self {
            target,
            graph,
            config,
            answers: BTreeMap::new(),
            order: Vec::new(),
            cap,
            forfeit: false,
            cap_reached: false,
            branches: Vec::new(),
        }
    }

    fn log_n(&self) -> f64 {
        self.config.log(self.graph.n() as f64)
    }

    fn stopped(&self) -> bool {
        self.forfeit || self.cap_reached
    }

    fn query(&mut self, t: u64) -> Option<Vertex> {
        if self.stopped() {
            return None;
        }
        if let Some(&v) = self.answers.get(&t) {
            return Some(v);
        }
        if self.order.len() as u64 >= self.cap {
            self.cap_reached = true;
            return None;
        }
        match self.target.position(t) {
            Ok(v) => {
                self.answers.insert(t, v);
                self.order.push((t, v));
                Some(v)
            }
            Err(_) => {
                self.forfeit = true;
                None
            }
        }
    }

    fn at(&self, t: u64) -> Vertex {
        self.answers[&t]
    }

    /// Forest distance, `INF` if unknown.
    fn dist(&self, a: Vertex, b: Vertex) -> u64 {
        if a == b {
            return 0;
        }
        self.target
            .transcript()
            .and_then(|f| f.known_distance(a, b))
            .map_or(INF, |d| d as u64)
    }

    /// Answers at `x < y` further apart in the forest than in time.
    fn violated(&self, x: u64, y: u64) -> bool {
        self.dist(self.at(x), self.at(y)) > y - x
    }

    fn no_path(&mut self, mut x: u64, mut y: u64) {
        self.branches.push(Branch::NoPath);
        while y - x > 1 {
            let m = x + (y - x) / 2;
            if self.query(m).is_none() {
                return;
            }
            if self.violated(x, m) {
                y = m;
            } else {
                x = m;
            }
        }
    }

    fn push_down(&mut self, mut x: u64, mut y: u64) {
        self.branches.push(Branch::PushDown);
        let window = self.config.window_const * self.log_n();
        let spike = self.config.spike_const * self.log_n();
        while (y - x) as f64 >= window && y - x >= 2 {
            let m = x + (y - x) / 2;
            let Some(vm) = self.query(m) else { return };
            if self.violated(x, m) {
                return self.no_path(x, m);
            }
            if self.violated(m, y) {
                return self.no_path(m, y);
            }
            let (vx, vy) = (self.at(x), self.at(y));
            let Some(forest) = self.target.transcript() else { return };
            let Some(path) = forest.known_path(vx, vy) else { return };
            let from_m = forest.distances_from(vm);
            let Some((r_m, w)) = path
                .iter()
                .filter_map(|p| from_m.get(p).map(|&d| (d as u64, *p)))
                .min()
            else {
                return;
            };
            if r_m as f64 >= spike {
                return self.spike(x, m, y, w, vm);
            }
            let half = self.dist(vx, vy) as f64 / 2.0;
            if self.dist(vx, vm) as f64 <= half + r_m as f64 {
                y = m;
            } else {
                x = m;
            }
        }
        self.branches.push(Branch::DenseWindow);
        for t in x + 1..y {
            if self.query(t).is_none() {
                return;
            }
        }
    }

    /// Whether `v` lies beyond the branch point `w`, on `vm`'s side.
    fn far(&self, v: Vertex, w: Vertex, vm: Vertex) -> bool {
        if v == w {
            return false;
        }
        let (a, b, c) = (self.dist(v, vm), self.dist(v, w), self.dist(w, vm));
        a != INF && (b == INF || c == INF || a < b + c)
    }

    /// The walk goes from the path out to `vm` and back, so it sits at the
    /// branch point `w` at some time on each side of `m`.
    fn spike(&mut self, x: u64, m: u64, y: u64, w: Vertex, vm: Vertex) {
        self.branches.push(Branch::Spike);
        if self.locate(x, m, w, vm).is_some() {
            self.locate(m, y, w, vm);
        }
    }

    fn locate(&mut self, mut lo: u64, mut hi: u64, w: Vertex, vm: Vertex) -> Option<u64> {
        let lo_far = self.far(self.at(lo), w, vm);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let v = self.query(mid)?;
            if v == w {
                return Some(mid);
            }
            if self.violated(lo, mid) {
                self.no_path(lo, mid);
                return None;
            }
            if self.violated(mid, hi) {
                self.no_path(mid, hi);
                return None;
            }
            if self.far(v, w, vm) == lo_far {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        None
    }

    fn finish(self) -> AttackReport {
        let witness = if self.forfeit {
            None
        } else {
            distinguisher(self.graph, &self.answers, self.config)
        };
        AttackReport {
            verdict: self.forfeit || witness.is_some(),
            witness,
            forfeit: self.forfeit,
            cap_reached: self.cap_reached,
            queries: self.order.len() as u64,
            query_cap: self.cap,
            branches: self.branches,
            responses: self.order,
            probes: self.target.stats(),
            events: self
                .target
                .transcript()
                .map(|f| f.events().to_vec())
                .unwrap_or_default(),
        }
    }
}

/// Runs the adaptive attack against `target`, a walk on `graph`.
pub fn adaptive_attack<T: AttackTarget + ?Sized>(target: &mut T, graph: &RegularGraph, config: &AttackConfig) -> AttackReport {
    let n = graph.n();
    let e = config.walk_len(n);
    let mut run = Run::new(target, graph, config, config.query_cap(n));
    if run.query(0).is_some() && run.query(e).is_some() {
        let d = run.dist(run.at(0), run.at(e));
        if d > e {
            run.no_path(0, e);
        } else if (d as f64) < e as f64 * config.short_path_ratio {
            run.push_down(0, e);
        } else {
            run.branches.push(Branch::Consistent);
        }
    }
    run.finish()
}

/// `e, 2, 3, ..., e - 1` with `e = floor(n^(1/4))`; time 0 is asked first
/// by [`oblivious_attack`].
pub fn oblivious_sequence(n: usize, config: &AttackConfig) -> Vec<u64> {
    let e = config.oblivious_e(n).max(1);
    std::iter::once(e).chain(2..e).collect()
}

/// Asks time 0 and then the fixed sequence, without looking at the transcript.
pub fn oblivious_attack<T: AttackTarget + ?Sized>(target: &mut T, graph: &RegularGraph, config: &AttackConfig) -> AttackReport {
    let seq = oblivious_sequence(graph.n(), config);
    let mut run = Run::new(target, graph, config, seq.len() as u64 + 1);
    if run.query(0).is_some() {
        for t in seq {
            if run.query(t).is_none() {
                break;
            }
        }
    }
    run.finish()
}
