//! Collective operators of one ensemble of three-level Λ-atoms, restricted
//! to the permutation-symmetric subspace.
//!
//! A symmetric state of `N` atoms is labelled by its level populations
//! `(n0, n1, n2)`. The collective transition `S_pq = Σ_a |p⟩_a⟨q|` acts on
//! these labels like a pair of bosonic ladder operators (Schwinger
//! representation): it moves one atom from `q` to `p` with matrix element
//! `√(n_q (n_p + 1))`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Atomic level of a Λ-atom. Level 2 is the pumped excited level, level 1
/// is reached by Raman scattering on the 2–1 transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Ground,
    Raman,
    Excited,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Ground, Level::Raman, Level::Excited];

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(Level::Ground),
            1 => Ok(Level::Raman),
            2 => Ok(Level::Excited),
            other => Err(Error::InvalidLevel(other)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Raman => 1,
            Level::Excited => 2,
        }
    }
}

/// Level populations of a symmetric ensemble state.
///
/// Ordering is by total atom number first and then lexicographic in
/// `(n2, n1)`, which is the canonical basis order used for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnsembleOccupation {
    pub n0: u32,
    pub n1: u32,
    pub n2: u32,
}

impl EnsembleOccupation {
    pub fn new(n0: u32, n1: u32, n2: u32) -> Self {
        Self { n0, n1, n2 }
    }

    /// All atoms in the ground level.
    pub fn ground(atoms: u32) -> Self {
        Self::new(atoms, 0, 0)
    }

    /// `m` atoms in level 1, the rest in the ground level.
    pub fn dicke(atoms: u32, m: u32) -> Result<Self> {
        if m > atoms {
            return Err(Error::ExcitationsExceedAtoms { excitations: m, atoms });
        }
        Ok(Self::new(atoms - m, m, 0))
    }

    pub fn atoms(&self) -> u32 {
        self.n0 + self.n1 + self.n2
    }

    pub fn count(&self, level: Level) -> u32 {
        match level {
            Level::Ground => self.n0,
            Level::Raman => self.n1,
            Level::Excited => self.n2,
        }
    }

    fn count_mut(&mut self, level: Level) -> &mut u32 {
        match level {
            Level::Ground => &mut self.n0,
            Level::Raman => &mut self.n1,
            Level::Excited => &mut self.n2,
        }
    }

    fn sort_key(&self) -> (u32, u32, u32) {
        (self.atoms(), self.n2, self.n1)
    }
}

impl Ord for EnsembleOccupation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for EnsembleOccupation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EnsembleOccupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n0, self.n1, self.n2)
    }
}

/// Applies `S_pq` to a symmetric basis state.
///
/// Returns the image label and the real matrix element, or `None` when the
/// image vanishes (no atom in level `q`). For `p == q` the operator is the
/// population of level `p` and the label is unchanged.
pub fn collective_apply(
    p: Level,
    q: Level,
    state: EnsembleOccupation,
) -> Option<(EnsembleOccupation, f64)> {
    if p == q {
        let n = state.count(p);
        return (n > 0).then_some((state, f64::from(n)));
    }
    let nq = state.count(q);
    if nq == 0 {
        return None;
    }
    let np = state.count(p);
    let mut image = state;
    *image.count_mut(q) -= 1;
    *image.count_mut(p) += 1;
    Some((image, (f64::from(nq) * f64::from(np + 1)).sqrt()))
}

/// Index-based variant of [`collective_apply`] for callers holding raw level
/// numbers.
pub fn collective_apply_indexed(
    p: usize,
    q: usize,
    state: EnsembleOccupation,
) -> Result<Option<(EnsembleOccupation, f64)>> {
    Ok(collective_apply(Level::from_index(p)?, Level::from_index(q)?, state))
}

/// `m! √C(N, m)`: the norm of `S_10^m` applied to the all-ground state.
pub fn dicke_ladder_coefficient(m: u32, atoms: u32) -> Result<f64> {
    if m > atoms {
        return Err(Error::ExcitationsExceedAtoms { excitations: m, atoms });
    }
    let factorial: f64 = (1..=m).map(f64::from).product();
    Ok(factorial * binomial(atoms, m).sqrt())
}

/// Binomial coefficient as a float, exact for the sizes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Normalized Dicke state `|m, N⟩`: `m` atoms in level 1 out of `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DickeKet {
    pub excitations: u32,
    pub atoms: u32,
}

impl DickeKet {
    pub fn occupation(&self) -> EnsembleOccupation {
        EnsembleOccupation::new(self.atoms - self.excitations, self.excitations, 0)
    }

    /// Amplitude of the symmetric label; always 1 for a single Dicke ket.
    pub fn amplitude(&self) -> f64 {
        1.0
    }

    /// Product-state expansion with uniform coefficients `1/√C(N, m)`.
    pub fn expand(&self) -> Vec<(Vec<u8>, f64)> {
        expand_product_states(self.occupation())
    }
}

/// The W-class states `W₁ = |1,N⟩` and `W₂ = |2,N⟩`.
pub fn w_state(atoms: u32, m: u32) -> Result<DickeKet> {
    if !(1..=2).contains(&m) {
        return Err(Error::InvalidScenario(format!(
            "W-class states carry 1 or 2 excitations, not {m}"
        )));
    }
    if atoms < m {
        return Err(Error::ExcitationsExceedAtoms { excitations: m, atoms });
    }
    Ok(DickeKet { excitations: m, atoms })
}

/// Expands a symmetric label into its uniform superposition of atomic
/// product states. Each product state is a string of per-atom levels; the
/// list is ordered with higher levels on earlier atoms first, so that
/// `W₁` of three atoms reads `|100⟩, |010⟩, |001⟩`.
pub fn expand_product_states(occ: EnsembleOccupation) -> Vec<(Vec<u8>, f64)> {
    let n = occ.atoms() as usize;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut remaining = [occ.n0, occ.n1, occ.n2];
    fill_strings(&mut remaining, &mut current, n, &mut out);
    let coefficient = 1.0 / (out.len() as f64).sqrt();
    out.into_iter().map(|s| (s, coefficient)).collect()
}

fn fill_strings(remaining: &mut [u32; 3], current: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for level in (0..3).rev() {
        if remaining[level] > 0 {
            remaining[level] -= 1;
            current.push(level as u8);
            fill_strings(remaining, current, n, out);
            current.pop();
            remaining[level] += 1;
        }
    }
}

/// Canonical basis of the symmetric subspace of `atoms` atoms:
/// `(atoms+1)(atoms+2)/2` labels ordered lexicographically in `(n2, n1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleBasis {
    atoms: u32,
}

impl EnsembleBasis {
    pub fn new(atoms: u32) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> u32 {
        self.atoms
    }

    pub fn len(&self) -> usize {
        let n = self.atoms as usize;
        (n + 1) * (n + 2) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, occ: EnsembleOccupation) -> Option<usize> {
        if occ.atoms() != self.atoms {
            return None;
        }
        let n = self.atoms as usize;
        let n2 = occ.n2 as usize;
        // labels with n2 = j contribute n - j + 1 entries
        let before: usize = (0..n2).map(|j| n - j + 1).sum();
        Some(before + occ.n1 as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = EnsembleOccupation> + '_ {
        let n = self.atoms;
        (0..=n).flat_map(move |n2| (0..=n - n2).map(move |n1| EnsembleOccupation::new(n - n1 - n2, n1, n2)))
    }
}
