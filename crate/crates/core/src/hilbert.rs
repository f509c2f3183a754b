//! Sparse state vectors over three symmetric ensembles ⊗ three field modes.
//!
//! Tensor-factor order is fixed as (atoms A, B, C, photons A, B, C) for
//! every ordering and serialization.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Write as _};

use num_complex::Complex64 as C64;

use crate::ensemble::{EnsembleOccupation, Level};
use crate::error::{Error, Result};
use crate::fock::Mode;

/// Amplitudes at or below this magnitude are not stored.
pub const DROP_TOLERANCE: f64 = 1e-14;

/// Tolerance on the squared norm for inputs that must be normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

pub type AtomicLabel = [EnsembleOccupation; 3];

/// Composite label: three ensemble occupations and three photon numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub atoms: AtomicLabel,
    pub photons: [u8; 3],
}

impl BasisLabel {
    pub fn new(atoms: AtomicLabel, photons: [u8; 3]) -> Self {
        Self { atoms, photons }
    }

    pub fn total_photons(&self) -> u32 {
        self.photons.iter().map(|&n| u32::from(n)).sum()
    }

    pub fn population(&self, level: Level) -> u32 {
        self.atoms.iter().map(|occ| occ.count(level)).sum()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.atoms;
        let [pa, pb, pc] = self.photons;
        write!(f, "{a}{b}{c}|{pa}{pb}{pc}>")
    }
}

/// Sizes of the composite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub ensembles: [u32; 3],
    pub n_max: u8,
}

impl Dims {
    pub fn new(ensembles: [u32; 3], n_max: u8) -> Result<Self> {
        if ensembles.contains(&0) {
            return Err(Error::EmptyEnsemble);
        }
        Ok(Self { ensembles, n_max })
    }
}

/// A label type a sparse ket can be indexed by.
pub trait Label: Copy + Ord + Debug + fmt::Display {
    type Shape: Copy + PartialEq + Debug;

    fn fits(&self, shape: &Self::Shape) -> bool;
}

impl Label for BasisLabel {
    type Shape = Dims;

    fn fits(&self, shape: &Dims) -> bool {
        self.atoms.iter().zip(shape.ensembles).all(|(occ, n)| occ.atoms() == n)
            && self.photons.iter().all(|&p| p <= shape.n_max)
    }
}

/// Atom-only label, used for post-measurement states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomLabel(pub AtomicLabel);

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a}{b}{c}>")
    }
}

impl Label for AtomLabel {
    type Shape = [u32; 3];

    fn fits(&self, shape: &[u32; 3]) -> bool {
        self.0.iter().zip(shape).all(|(occ, &n)| occ.atoms() == n)
    }
}

/// Sparse ket with an explicit record of probability weight lost to
/// truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket<L: Label> {
    shape: L::Shape,
    amplitudes: BTreeMap<L, C64>,
    leakage: f64,
}

/// Composite atom–field state.
pub type StateVector = Ket<BasisLabel>;

/// Atomic state of the three ensembles.
pub type AtomicState = Ket<AtomLabel>;

impl<L: Label> Ket<L> {
    pub fn zero(shape: L::Shape) -> Self {
        Self { shape, amplitudes: BTreeMap::new(), leakage: 0.0 }
    }

    /// Builds a ket from `(label, amplitude)` pairs, summing repeated labels.
    pub fn from_amplitudes<I>(shape: L::Shape, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, C64)>,
    {
        let mut ket = Self::zero(shape);
        for (label, amp) in terms {
            ket.add(label, amp)?;
        }
        ket.prune();
        Ok(ket)
    }

    pub fn shape(&self) -> L::Shape {
        self.shape
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn with_leakage(mut self, leakage: f64) -> Self {
        self.leakage = leakage;
        self
    }

    pub fn add_leakage(&mut self, weight: f64) {
        self.leakage += weight;
    }

    pub fn add(&mut self, label: L, amp: C64) -> Result<()> {
        if !label.fits(&self.shape) {
            return Err(Error::LabelOutsideSpace(label.to_string()));
        }
        *self.amplitudes.entry(label).or_default() += amp;
        Ok(())
    }

    /// Removes stored amplitudes at or below [`DROP_TOLERANCE`].
    pub fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() > DROP_TOLERANCE);
    }

    pub fn get(&self, label: &L) -> C64 {
        self.amplitudes.get(label).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &C64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = Self {
            shape: self.shape,
            amplitudes: self.amplitudes.iter().map(|(l, a)| (*l, a * factor)).collect(),
            leakage: self.leakage,
        };
        out.prune();
        out
    }

    /// Unit-norm copy; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm_sqr().sqrt();
        (norm > 0.0).then(|| self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(())
    }

    fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner<L: Label>(u: &Ket<L>, v: &Ket<L>) -> Result<C64> {
    u.check_shape(v)?;
    let (small, large, conj_small) = if u.len() <= v.len() { (u, v, true) } else { (v, u, false) };
    let mut acc = C64::new(0.0, 0.0);
    for (label, a) in small.iter() {
        if let Some(b) = large.amplitudes.get(label) {
            acc += if conj_small { a.conj() * b } else { b.conj() * a };
        }
    }
    Ok(acc)
}

/// `|⟨target|state⟩|²` for normalized inputs.
pub fn fidelity<L: Label>(state: &Ket<L>, target: &Ket<L>) -> Result<f64> {
    state.check_normalized()?;
    target.check_normalized()?;
    Ok(inner(target, state)?.norm_sqr().min(1.0))
}

/// Composite vacuum: every atom in the ground level, no photons.
pub fn vacuum_state(ensembles: [u32; 3], n_max: u8) -> Result<StateVector> {
    let dims = Dims::new(ensembles, n_max)?;
    let label = BasisLabel::new(ensembles.map(EnsembleOccupation::ground), [0; 3]);
    StateVector::from_amplitudes(dims, [(label, C64::new(1.0, 0.0))])
}

/// Atomic product label with `excitations[x]` atoms of ensemble `x` in
/// level 1 and the rest in the ground level.
pub fn dicke_label(ensembles: [u32; 3], excitations: [u32; 3]) -> Result<AtomLabel> {
    let mut atoms = [EnsembleOccupation::ground(1); 3];
    for x in 0..3 {
        atoms[x] = EnsembleOccupation::dicke(ensembles[x], excitations[x])?;
    }
    Ok(AtomLabel(atoms))
}

/// Outcome of an ideal photon-number-resolving measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// Unnormalized atomic amplitudes of the measured sector.
    pub sector: AtomicState,
    /// Renormalized post-measurement state; empty when `zero_probability`.
    pub post: AtomicState,
    pub zero_probability: bool,
}

/// Projects the field onto the photon numbers `outcome`.
pub fn project_photons(state: &StateVector, outcome: [u8; 3]) -> Result<Projection> {
    let dims = state.shape();
    if let Some((mode, &count)) = outcome.iter().enumerate().find(|(_, &c)| c > dims.n_max) {
        return Err(Error::PhotonOverflow { mode, count, n_max: dims.n_max });
    }
    let sector = AtomicState::from_amplitudes(
        dims.ensembles,
        state
            .iter()
            .filter(|(label, _)| label.photons == outcome)
            .map(|(label, amp)| (AtomLabel(label.atoms), *amp)),
    )?;
    let probability = sector.norm_sqr();
    let (post, zero_probability) = match sector.normalized() {
        Some(post) if probability > 0.0 => (post, false),
        _ => (AtomicState::zero(dims.ensembles), true),
    };
    Ok(Projection { probability, sector, post, zero_probability })
}

impl AtomicState {
    /// `|self⟩ ⊗ |photons⟩` in the composite space.
    pub fn tensor_photons(&self, photons: [u8; 3], n_max: u8) -> Result<StateVector> {
        let dims = Dims::new(self.shape(), n_max)?;
        StateVector::from_amplitudes(dims, self.iter().map(|(l, a)| (BasisLabel::new(l.0, photons), *a)))
    }

    /// Total weight on labels with any atom in the excited level 2.
    pub fn excited_weight(&self) -> f64 {
        self.iter()
            .filter(|(l, _)| l.0.iter().any(|o| o.n2 > 0))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

impl StateVector {
    /// Photon-number distribution: `Σ |amp|²` per photon pattern.
    pub fn photon_distribution(&self) -> BTreeMap<[u8; 3], f64> {
        let mut out = BTreeMap::new();
        for (label, amp) in self.iter() {
            *out.entry(label.photons).or_insert(0.0) += amp.norm_sqr();
        }
        out
    }

    /// Canonical text form: one line per stored label in canonical order,
    /// `n0 n1 n2  n0 n1 n2  n0 n1 n2  pA pB pC  Re Im`, floats with 17
    /// significant digits.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        for (label, amp) in self.iter() {
            for occ in label.atoms {
                let _ = write!(out, "{} {} {}  ", occ.n0, occ.n1, occ.n2);
            }
            let [a, b, c] = label.photons;
            let _ = writeln!(out, "{a} {b} {c}  {:.16e} {:.16e}", amp.re, amp.im);
        }
        out
    }

    /// Parses [`StateVector::to_canonical_text`] output.
    pub fn from_canonical_text(dims: Dims, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidScenario(format!("malformed state line {}: {line:?}", lineno + 1));
            if fields.len() != 14 {
                return Err(bad());
            }
            let ints: Vec<u32> = fields[..12].iter().map(|f| f.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let floats: Vec<f64> = fields[12..].iter().map(|f| f.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let atoms = [0, 1, 2].map(|x| EnsembleOccupation::new(ints[3 * x], ints[3 * x + 1], ints[3 * x + 2]));
            let photons = [ints[9], ints[10], ints[11]].map(|p| u8::try_from(p).unwrap_or(u8::MAX));
            terms.push((BasisLabel::new(atoms, photons), C64::new(floats[0], floats[1])));
        }
        Self::from_amplitudes(dims, terms)
    }

    /// Labels with nonzero photon number in `mode`.
    pub fn photons_in(&self, mode: Mode) -> impl Iterator<Item = (&BasisLabel, &C64)> {
        self.iter().filter(move |(l, _)| l.photons[mode.index()] > 0)
    }
}
