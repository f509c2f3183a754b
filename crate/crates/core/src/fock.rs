//! Truncated Fock space of the three localized field modes, one per
//! ensemble.

use std::fmt;

use crate::error::{Error, Result};

/// Localized field mode, indexed by the ensemble it is emitted from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::A, Mode::B, Mode::C];

    pub fn from_index(index: usize) -> Result<Self> {
        Mode::ALL.get(index).copied().ok_or(Error::InvalidMode(index))
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::A => "A",
            Mode::B => "B",
            Mode::C => "C",
        };
        f.write_str(name)
    }
}

/// Default photon-number truncation per mode.
pub const DEFAULT_N_MAX: u8 = 2;

/// Photon numbers of the three modes, bounded by `n_max` each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhotonPattern {
    counts: [u8; 3],
    n_max: u8,
}

impl PhotonPattern {
    pub fn new(counts: [u8; 3], n_max: u8) -> Result<Self> {
        for (mode, &count) in counts.iter().enumerate() {
            if count > n_max {
                return Err(Error::PhotonOverflow { mode, count, n_max });
            }
        }
        Ok(Self { counts, n_max })
    }

    pub fn vacuum(n_max: u8) -> Self {
        Self { counts: [0; 3], n_max }
    }

    pub fn counts(&self) -> [u8; 3] {
        self.counts
    }

    pub fn n_max(&self) -> u8 {
        self.n_max
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| u32::from(c)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Result of a ladder operator on a truncated pattern.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LadderOutcome {
    /// The image vanishes (annihilation on an empty mode).
    Zero,
    Mapped(PhotonPattern, f64),
    /// Creation above `n_max`: the amplitude leaves the truncated space.
    Overflow(f64),
}

/// `a` or `a†` on one mode, with amplitudes `√n` and `√(n+1)`.
pub fn mode_ladder(mode: Mode, direction: Ladder, pattern: PhotonPattern) -> LadderOutcome {
    let i = mode.index();
    let n = pattern.counts[i];
    match direction {
        Ladder::Annihilate => {
            if n == 0 {
                return LadderOutcome::Zero;
            }
            let mut counts = pattern.counts;
            counts[i] -= 1;
            LadderOutcome::Mapped(PhotonPattern { counts, ..pattern }, f64::from(n).sqrt())
        }
        Ladder::Create => {
            let amplitude = f64::from(n + 1).sqrt();
            if n >= pattern.n_max {
                return LadderOutcome::Overflow(amplitude);
            }
            let mut counts = pattern.counts;
            counts[i] += 1;
            LadderOutcome::Mapped(PhotonPattern { counts, ..pattern }, amplitude)
        }
    }
}

/// All patterns with every count at most `n_max`, in canonical order
/// (mode A most significant).
pub fn patterns(n_max: u8) -> impl Iterator<Item = PhotonPattern> {
    let range = 0..=n_max;
    range.clone().flat_map(move |a| {
        let range = 0..=n_max;
        range.clone().flat_map(move |b| (0..=n_max).map(move |c| PhotonPattern { counts: [a, b, c], n_max }))
    })
}
