//! Beamsplitters on the field modes and the two-splitter detection network.
//!
//! A splitter with amplitudes `(c, s)` on the ordered mode pair `(a, b)` is
//! `exp(θ(a†b − ab†))` with `θ = atan2(s, c)`. It maps `a† → c a† − s b†`
//! and `b† → s a† + c b†`, so on one photon it is the rotation
//! `(c, s; −s, c)` with input columns `(|10⟩, |01⟩)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::ensemble::binomial;
use crate::error::{Error, Result};
use crate::fock::Mode;
use crate::hilbert::{BasisLabel, StateVector, DROP_TOLERANCE};

pub const SPLITTER_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamsplitterSpec {
    first: Mode,
    second: Mode,
    c: f64,
    s: f64,
}

impl BeamsplitterSpec {
    pub fn new(first: Mode, second: Mode, c: f64, s: f64) -> Result<Self> {
        if first == second {
            return Err(Error::SplitterModes);
        }
        let norm = c * c + s * s;
        if !norm.is_finite() || (norm - 1.0).abs() > SPLITTER_TOLERANCE {
            return Err(Error::SplitterNorm(norm));
        }
        Ok(Self { first, second, c, s })
    }

    pub fn from_theta(first: Mode, second: Mode, theta: f64) -> Result<Self> {
        Self::new(first, second, theta.cos(), theta.sin())
    }

    /// Balanced splitter with `c = s = 1/√2`.
    pub fn balanced(first: Mode, second: Mode) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { first, second, c: h, s: h }
    }

    pub fn modes(&self) -> (Mode, Mode) {
        (self.first, self.second)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn theta(&self) -> f64 {
        self.s.atan2(self.c)
    }
}

/// Splitter unitary restricted to each total-photon-number sector.
///
/// `sector(n)[(m, k)]` is the amplitude for `|k, n−k⟩ → |m, n−m⟩`, where the
/// first entry counts photons in the splitter's first mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitterUnitary {
    sectors: Vec<DMatrix<f64>>,
}

impl SplitterUnitary {
    pub fn sector(&self, total: usize) -> &DMatrix<f64> {
        &self.sectors[total]
    }

    pub fn max_total(&self) -> usize {
        self.sectors.len() - 1
    }
}

/// Builds the splitter unitary on every sector reachable from two modes
/// truncated at `n_max` (totals `0..=2 n_max`), each sector in full.
pub fn bs_unitary(spec: &BeamsplitterSpec, n_max: u8) -> SplitterUnitary {
    let max_total = 2 * usize::from(n_max);
    let sectors = (0..=max_total).map(|n| sector_matrix(spec.c, spec.s, n)).collect();
    SplitterUnitary { sectors }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

// (c a† − s b†)^k (s a† + c b†)^(n−k) |0⟩ / √(k!(n−k)!), expanded binomially.
fn sector_matrix(c: f64, s: f64, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let l = n - k;
        for i in 0..=k {
            let from_first = binomial(k as u32, i as u32) * c.powi(i as i32) * (-s).powi((k - i) as i32);
            for j in 0..=l {
                let from_second = binomial(l as u32, j as u32) * s.powi(j as i32) * c.powi((l - j) as i32);
                m[(i + j, k)] += from_first * from_second;
            }
        }
        for out in 0..=n {
            m[(out, k)] *= (factorial(out) * factorial(n - out) / (factorial(k) * factorial(l))).sqrt();
        }
    }
    m
}

/// Which output of the first splitter is mixed with mode C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SecondStage {
    A,
    #[default]
    B,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct NetworkSpec {
    pub splitters: Vec<BeamsplitterSpec>,
}

impl NetworkSpec {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(splitters: Vec<BeamsplitterSpec>) -> Self {
        Self { splitters }
    }

    /// First splitter on `(A, B)`, second on `(output, C)`.
    pub fn two_stage(c1: f64, s1: f64, c2: f64, s2: f64, second: SecondStage) -> Result<Self> {
        let out = match second {
            SecondStage::A => Mode::A,
            SecondStage::B => Mode::B,
        };
        Ok(Self::new(vec![
            BeamsplitterSpec::new(Mode::A, Mode::B, c1, s1)?,
            BeamsplitterSpec::new(out, Mode::C, c2, s2)?,
        ]))
    }

    /// `c₁ = −s₁ = 1/√2`, `c₂ = √(2/3)`: maps the single-photon amplitudes
    /// `(a, b, c)` onto `((a−b)/√2, (a+b+c)/√3, (−a−b+2c)/√6)`.
    pub fn symmetric_w() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c2 = (2.0f64 / 3.0).sqrt();
        let s2 = (1.0f64 / 3.0).sqrt();
        Self::two_stage(h, -h, c2, s2, SecondStage::B).expect("valid splitter amplitudes")
    }

    /// All four amplitudes equal to `1/√2`.
    pub fn balanced() -> Self {
        Self::new(vec![BeamsplitterSpec::balanced(Mode::A, Mode::B), BeamsplitterSpec::balanced(Mode::B, Mode::C)])
    }

    pub fn is_empty(&self) -> bool {
        self.splitters.is_empty()
    }

    /// Single-photon transfer matrix: column `x` is the output of one
    /// photon entering mode `x`.
    pub fn single_photon_matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for bs in &self.splitters {
            let (a, b) = (bs.first.index(), bs.second.index());
            for col in 0..3 {
                let (xa, xb) = (m[a][col], m[b][col]);
                m[a][col] = bs.c * xa + bs.s * xb;
                m[b][col] = -bs.s * xa + bs.c * xb;
            }
        }
        m
    }
}

/// Applies the splitters in order to the photon factor of every label.
/// Amplitude leaving the `n_max` truncation after any splitter is removed
/// and its weight added to the state's leakage.
pub fn apply_network(state: &StateVector, net: &NetworkSpec) -> StateVector {
    let dims = state.shape();
    let mut current: BTreeMap<BasisLabel, C64> = state.iter().map(|(l, a)| (*l, *a)).collect();
    let mut leakage = state.leakage();
    for bs in &net.splitters {
        let unitary = bs_unitary(bs, dims.n_max);
        let (a, b) = (bs.first.index(), bs.second.index());
        let mut next: BTreeMap<BasisLabel, C64> = BTreeMap::new();
        for (label, amp) in &current {
            let k = usize::from(label.photons[a]);
            let total = k + usize::from(label.photons[b]);
            let sector = unitary.sector(total);
            for out in 0..=total {
                let u = sector[(out, k)];
                if u == 0.0 {
                    continue;
                }
                let mut to = *label;
                // counts may exceed n_max here; they are split off below
                to.photons[a] = out as u8;
                to.photons[b] = (total - out) as u8;
                *next.entry(to).or_default() += amp * u;
            }
        }
        current = BTreeMap::new();
        for (label, amp) in next {
            if label.photons.iter().all(|&p| p <= dims.n_max) {
                current.insert(label, amp);
            } else {
                leakage += amp.norm_sqr();
            }
        }
    }
    let kept = current.into_iter().filter(|(_, a)| a.norm() > DROP_TOLERANCE);
    StateVector::from_amplitudes(dims, kept).expect("photon counts checked against n_max").with_leakage(leakage)
}
