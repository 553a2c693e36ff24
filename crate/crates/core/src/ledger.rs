//! Zero/pole inventories of factored functions.

use serde::{Deserialize, Serialize};

use crate::quaternion::{slice_pair, Quaternion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Zero,
    Pole,
}

impl Role {
    pub fn sign(self) -> i64 {
        match self {
            Role::Zero => 1,
            Role::Pole => -1,
        }
    }

    pub fn from_sign(m: i64) -> Self {
        if m > 0 {
            Role::Zero
        } else {
            Role::Pole
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// Real zero or pole of a slice-preserving function.
    RealPoint,
    /// Whole 2-sphere `S_q` of zeros or poles.
    Sphere,
    /// Point zero or pole coming from a linear factor `(x - q)^{+-1}`.
    Isolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub kind: EntryKind,
    pub role: Role,
    /// Any point of the zero/pole set; for spheres `alpha + I beta` for some unit `I`.
    pub point: Quaternion,
    /// Factor multiplicity `n` (always positive).
    pub multiplicity: u32,
}

impl LedgerEntry {
    pub fn modulus(&self) -> f64 {
        self.point.norm()
    }

    pub fn alpha(&self) -> f64 {
        self.point.re()
    }

    pub fn beta(&self) -> f64 {
        self.point.im_norm()
    }

    /// Multiplicity as a zero of the symmetrization: a sphere of factor multiplicity `n`
    /// contributes `2n`, point entries contribute `n`.
    pub fn total_multiplicity(&self) -> u32 {
        match self.kind {
            EntryKind::Sphere => 2 * self.multiplicity,
            _ => self.multiplicity,
        }
    }

    /// Signed multiplicity: positive for zeros, negative for poles.
    pub fn signed_multiplicity(&self) -> i64 {
        self.role.sign() * i64::from(self.multiplicity)
    }

    /// Euclidean distance from `x` to the zero/pole set.
    pub fn distance(&self, x: Quaternion) -> f64 {
        match self.kind {
            EntryKind::RealPoint | EntryKind::Isolated => (x - self.point).norm(),
            EntryKind::Sphere => {
                let (a, b) = slice_pair(x);
                (a - self.alpha()).hypot(b - self.beta())
            }
        }
    }

    fn same_set(&self, other: &LedgerEntry) -> bool {
        self.kind == other.kind
            && match self.kind {
                EntryKind::Sphere => {
                    self.alpha() == other.alpha() && self.beta() == other.beta()
                }
                _ => self.point == other.point,
            }
    }
}

/// Classified inventory of zeros and poles with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoleLedger {
    pub entries: Vec<LedgerEntry>,
}

impl ZeroPoleLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add an entry, merging it with an existing one for the same set and role.
    pub fn push(&mut self, entry: LedgerEntry) {
        if entry.multiplicity == 0 {
            return;
        }
        if let Some(e) = self
            .entries
            .iter_mut()
            .find(|e| e.role == entry.role && e.same_set(&entry))
        {
            e.multiplicity += entry.multiplicity;
        } else {
            self.entries.push(entry);
        }
    }

    pub fn extend(&mut self, other: &ZeroPoleLedger) {
        for e in &other.entries {
            self.push(*e);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    fn select(&self, kind: EntryKind, role: Role) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter().filter(move |e| e.kind == kind && e.role == role)
    }

    pub fn real_zeros(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.select(EntryKind::RealPoint, Role::Zero)
    }

    pub fn real_poles(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.select(EntryKind::RealPoint, Role::Pole)
    }

    pub fn sphere_zeros(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.select(EntryKind::Sphere, Role::Zero)
    }

    pub fn sphere_poles(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.select(EntryKind::Sphere, Role::Pole)
    }

    pub fn isolated(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Isolated)
    }

    /// Entries strictly inside the open ball of radius `rho`.
    pub fn filtered(&self, rho: f64) -> ZeroPoleLedger {
        ZeroPoleLedger {
            entries: self.entries.iter().copied().filter(|e| e.modulus() < rho).collect(),
        }
    }

    /// Entries whose modulus is within `delta` of `rho`.
    pub fn boundary_contact(&self, rho: f64, delta: f64) -> Vec<LedgerEntry> {
        self.entries
            .iter()
            .copied()
            .filter(|e| (e.modulus() - rho).abs() <= delta)
            .collect()
    }

    /// Distance from `x` to the nearest zero or pole; infinite for an empty ledger.
    pub fn distance(&self, x: Quaternion) -> f64 {
        self.entries.iter().map(|e| e.distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Smallest distance between the sphere `|y| = rho` and any entry.
    pub fn sphere_clearance(&self, rho: f64) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.modulus() - rho).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of zeros with modulus below `r`, counted with factor multiplicity.
    pub fn zero_count(&self, r: f64) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.role == Role::Zero && e.modulus() < r)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Same count but with sphere entries doubled (multiplicity as zeros of `f^s`).
    pub fn total_zero_count(&self, r: f64) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.role == Role::Zero && e.modulus() < r)
            .map(|e| e.total_multiplicity())
            .sum()
    }

    /// Sets that appear both as a zero and as a pole.
    pub fn conflicts(&self) -> Vec<LedgerEntry> {
        let mut out = Vec::new();
        for z in self.entries.iter().filter(|e| e.role == Role::Zero) {
            if self
                .entries
                .iter()
                .any(|p| p.role == Role::Pole && z.same_set(p))
            {
                out.push(*z);
            }
        }
        out
    }
}
