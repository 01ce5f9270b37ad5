//! Finite abelian groups written as products of cyclic groups, and their
//! generator sets.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// A group element as a tuple of residues, one per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u64>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        Ok(())
    }
}

/// The group `Z_{m_1} x ... x Z_{m_k}` together with a generator multiset `S`.
///
/// Generators need not be closed under inverses; when they are not, the
/// Cayley graph is directed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    generators: Vec<GroupElement>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>, generators: Vec<GroupElement>) -> Result<Self> {
        if moduli.is_empty() {
            return input("group needs at least one cyclic factor");
        }
        if let Some(m) = moduli.iter().find(|&&m| m == 0) {
            return input(format!("modulus {m} is not positive"));
        }
        if generators.is_empty() {
            return input("generator set is empty");
        }
        for g in &generators {
            if g.0.len() != moduli.len() {
                return input(format!(
                    "generator {g} has {} components, group has {}",
                    g.0.len(),
                    moduli.len()
                ));
            }
            if g.0.iter().zip(&moduli).any(|(r, m)| r >= m) {
                return input(format!("generator {g} is not reduced modulo {moduli:?}"));
            }
        }
        Ok(Self { moduli, generators })
    }

    /// Convenience constructor for a cyclic group `Z_m` with scalar generators.
    pub fn cyclic(m: u64, generators: &[u64]) -> Result<Self> {
        Self::new(
            vec![m],
            generators.iter().map(|&g| GroupElement(vec![g])).collect(),
        )
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Graph degree `|S|`.
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Group order if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn order_big(&self) -> BigUint {
        self.moduli.iter().map(|&m| BigUint::from(m)).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.moduli.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.moduli.len() && g.0.iter().zip(&self.moduli).all(|(r, m)| r < m)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| ((x as u128 + y as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| ((x as u128 + m as u128 - y as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub fn negate(&self, a: &GroupElement) -> GroupElement {
        self.sub(&self.identity(), a)
    }

    /// `v * prod_i e_i^{l_i}`, computed componentwise in time independent of
    /// the magnitude of the counts.
    pub fn apply_label_counts(&self, v: &GroupElement, counts: &[u64]) -> Result<GroupElement> {
        if counts.len() != self.generators.len() {
            return input(format!(
                "label-count vector has {} entries, group has {} generators",
                counts.len(),
                self.generators.len()
            ));
        }
        if !self.contains(v) {
            return input(format!("{v} is not an element of the group"));
        }
        let out = self
            .moduli
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let m = m as u128;
                let shift = counts
                    .iter()
                    .zip(&self.generators)
                    .fold(0u128, |acc, (&l, e)| {
                        (acc + (l as u128 % m) * (e.0[j] as u128)) % m
                    });
                ((v.0[j] as u128 + shift) % m) as u64
            })
            .collect();
        Ok(GroupElement(out))
    }

    /// True when `S` and `-S` agree as multisets, i.e. the Cayley graph is undirected.
    pub fn is_symmetric(&self) -> bool {
        let mut fwd: Vec<&GroupElement> = self.generators.iter().collect();
        let neg: Vec<GroupElement> = self.generators.iter().map(|g| self.negate(g)).collect();
        let mut back: Vec<&GroupElement> = neg.iter().collect();
        fwd.sort();
        back.sort();
        fwd == back
    }

    /// Mixed-radix id with the first factor least significant, so coordinate
    /// `j` of a hypercube maps to bit `j`.
    pub fn encode(&self, g: &GroupElement) -> Option<u64> {
        let mut id: u64 = 0;
        let mut scale: u64 = 1;
        for (i, (&r, &m)) in g.0.iter().zip(&self.moduli).enumerate() {
            id = id.checked_add(r.checked_mul(scale)?)?;
            if i + 1 < self.moduli.len() {
                scale = scale.checked_mul(m)?;
            }
        }
        Some(id)
    }

    pub fn decode(&self, mut id: u64) -> GroupElement {
        GroupElement(
            self.moduli
                .iter()
                .map(|&m| {
                    let r = id % m;
                    id /= m;
                    r
                })
                .collect(),
        )
    }

    /// Index of a generator equal to `diff`, if any.
    pub fn generator_index(&self, diff: &GroupElement) -> Option<usize> {
        self.generators.iter().position(|g| g == diff)
    }
}
