//! Local access to random walks on abelian Cayley graphs.
//!
//! Steps commute, so a walk segment is summarized by how many times each
//! generator was used. Queries past the last determined time draw those
//! counts from a multinomial; queries inside a segment split its counts with
//! a multivariate hypergeometric draw.

use std::collections::BTreeMap;

use crate::error::{input, Error, Result};
use crate::graph::Vertex;
use crate::group::{GroupElement, GroupSpec};
use crate::rng::WalkRng;
use crate::sampling::{sample_multinomial, sample_mv_hypergeometric, CountVector, Probabilities, SamplerMode};
use crate::walk::LocalWalk;

#[derive(Clone, Debug)]
struct Entry {
    position: GroupElement,
    /// Label counts of the steps in `(t, next determined time]`; `None` for
    /// the last determined time.
    segment: Option<CountVector>,
}

#[derive(Clone, Debug)]
pub struct AbelianOracle {
    spec: GroupSpec,
    eps: f64,
    budget: u64,
    mode: SamplerMode,
    uniform: Probabilities,
    table: BTreeMap<u64, Entry>,
    queries: u64,
    rng: WalkRng,
}

impl AbelianOracle {
    pub fn new(spec: GroupSpec, eps: f64, budget: u64, start: GroupElement, rng: WalkRng) -> Result<Self> {
        if !(eps > 0.0) {
            return input(format!("eps must be positive, got {eps}"));
        }
        if budget == 0 {
            return input("budget must be at least 1");
        }
        if !spec.contains(&start) {
            return input(format!("{start} is not an element of the group"));
        }
        let uniform = Probabilities::uniform(spec.degree())?;
        Ok(Self {
            spec,
            eps,
            budget,
            mode: SamplerMode::Certified,
            uniform,
            table: BTreeMap::from([(0, Entry { position: start, segment: None })]),
            queries: 0,
            rng,
        })
    }

    pub fn with_mode(mut self, mode: SamplerMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Per-query sampling tolerance `eps / B`.
    pub fn slice(&self) -> f64 {
        self.eps / self.budget as f64
    }

    /// Determined `(time, position)` pairs in time order.
    pub fn determined(&self) -> impl Iterator<Item = (u64, &GroupElement)> + '_ {
        self.table.iter().map(|(&t, e)| (t, &e.position))
    }

    /// `(time, label counts)` for every segment between determined times.
    pub fn segments(&self) -> impl Iterator<Item = (u64, &CountVector)> + '_ {
        self.table.iter().filter_map(|(&t, e)| e.segment.as_ref().map(|s| (t, s)))
    }

    /// Checks the segment sums and that each position follows from the
    /// previous one and its segment.
    pub fn check_invariants(&self) -> Result<()> {
        let entries: Vec<(&u64, &Entry)> = self.table.iter().collect();
        if entries.first().map(|e| *e.0) != Some(0) {
            return input("time 0 missing");
        }
        for w in entries.windows(2) {
            let (&t0, e0) = w[0];
            let (&t1, e1) = w[1];
            let seg = e0.segment.as_ref().ok_or_else(|| Error::Input(format!("segment at {t0} missing")))?;
            if seg.total() != t1 - t0 {
                return input(format!("segment at {t0} sums to {} not {}", seg.total(), t1 - t0));
            }
            if self.spec.apply_label_counts(&e0.position, seg.as_slice())? != e1.position {
                return input(format!("position at {t1} inconsistent with segment at {t0}"));
            }
        }
        if entries.last().is_some_and(|(_, e)| e.segment.is_some()) {
            return input("last entry has a segment");
        }
        Ok(())
    }

    pub fn element(&mut self, t: u64) -> Result<GroupElement> {
        if self.queries >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        self.queries += 1;
        if let Some(e) = self.table.get(&t) {
            return Ok(e.position.clone());
        }
        let slice = self.slice();
        let (&t_minus, lower) = self.table.range_mut(..t).next_back().expect("time 0 is always determined");
        let entry = match lower.segment.take() {
            None => {
                let counts = sample_multinomial(t - t_minus, &self.uniform, slice, self.mode, &mut self.rng)?;
                let position = self.spec.apply_label_counts(&lower.position, counts.as_slice())?;
                lower.segment = Some(counts);
                Entry { position, segment: None }
            }
            Some(old) => {
                let d = match sample_mv_hypergeometric(t - t_minus, &old, slice, self.mode, &mut self.rng) {
                    Ok(d) => d,
                    Err(e) => {
                        lower.segment = Some(old);
                        return Err(e);
                    }
                };
                let position = self.spec.apply_label_counts(&lower.position, d.as_slice())?;
                let rest = CountVector(old.0.iter().zip(&d.0).map(|(a, b)| a - b).collect());
                lower.segment = Some(d);
                Entry { position, segment: Some(rest) }
            }
        };
        let out = entry.position.clone();
        self.table.insert(t, entry);
        Ok(out)
    }
}

impl LocalWalk for AbelianOracle {
    /// Dense id of the position under the group's mixed-radix encoding.
    fn position(&mut self, t: u64) -> Result<Vertex> {
        let g = self.element(t)?;
        self.spec
            .encode(&g)
            .and_then(|id| Vertex::try_from(id).ok())
            .ok_or_else(|| Error::Input("group too large for dense vertex ids".into()))
    }

    fn num_vertices(&self) -> usize {
        self.spec.order().and_then(|o| usize::try_from(o).ok()).unwrap_or(usize::MAX)
    }
}
