//! Single-photon wave packets of the local field operator.
//!
//! The local operator of an ensemble at position `l` is a superposition of
//! `M` plane-wave modes from the band around the central wave number `m`.
//! Acting on the vacuum it produces a W-like single-photon state over those
//! `M` modes with coefficients `C_q = exp(-i 2π q l / L) / √M` and a global
//! phase `ζ = (π/a − m) l`, where `a = L / M` is the cell size.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketSpec {
    modes: usize,
    length: f64,
    position: f64,
    central_wavenumber: f64,
}

impl PacketSpec {
    pub fn new(modes: usize, length: f64, position: f64, central_wavenumber: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidPacket("the packet needs at least one mode".into()));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidPacket(format!("length must be positive, got {length}")));
        }
        if !(position.is_finite() && (0.0..length).contains(&position)) {
            return Err(Error::InvalidPacket(format!("position {position} outside [0, {length})")));
        }
        if !central_wavenumber.is_finite() {
            return Err(Error::InvalidPacket("central wave number must be finite".into()));
        }
        Ok(Self { modes, length, position, central_wavenumber })
    }

    /// Packet with the position given in units of the cell size, `l / a`.
    pub fn from_cell_offset(modes: usize, length: f64, cell_offset: f64, central_wavenumber: f64) -> Result<Self> {
        Self::new(modes, length, cell_offset * length / modes as f64, central_wavenumber)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    pub fn cell(&self) -> f64 {
        self.length / self.modes as f64
    }

    pub fn cell_offset(&self) -> f64 {
        self.position / self.cell()
    }

    /// `y = π l / a`.
    pub fn y(&self) -> f64 {
        PI * self.cell_offset()
    }

}

#[derive(Clone, Debug, PartialEq)]
pub struct PacketState {
    pub coefficients: Vec<C64>,
    pub global_phase: f64,
}

impl PacketState {
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

pub fn packet_state(spec: &PacketSpec) -> PacketState {
    let norm = 1.0 / (spec.modes as f64).sqrt();
    let ratio = spec.position / spec.length;
    let coefficients = (0..spec.modes)
        .map(|q| {
            // reduce q·l/L modulo 1 before scaling by 2π
            let turns = (q as f64 * ratio).fract();
            C64::from_polar(norm, -2.0 * PI * turns)
        })
        .collect();
    let global_phase = (PI / spec.cell() - spec.central_wavenumber) * spec.position;
    PacketState { coefficients, global_phase }
}

/// `Σ_q C_q` as a closed-form geometric sum,
/// `e^{-i(M-1)φ/2} sin(Mφ/2) / (√M sin(φ/2))` with `φ = 2π l / L`.
pub fn zsa_coefficient_sum(spec: &PacketSpec) -> C64 {
    let m = spec.modes as f64;
    let turns = (spec.position / spec.length).fract();
    let denominator = (PI * turns).sin();
    if denominator.abs() < 1e-300 {
        return C64::new(m.sqrt(), 0.0);
    }
    // multiples of the step are reduced modulo a full period before the
    // trigonometric calls
    let numerator = (PI * (m * turns).rem_euclid(2.0)).sin();
    let phase = -PI * ((m - 1.0) * turns).rem_euclid(2.0);
    C64::from_polar(1.0, phase) * (numerator / (m.sqrt() * denominator))
}

/// Large-`M` asymptotic form `√M e^{-iy} sin(y)/y`, `y = π l / a`.
pub fn sinc_prediction(spec: &PacketSpec) -> C64 {
    let m = (spec.modes as f64).sqrt();
    let y = spec.y();
    if y == 0.0 {
        return C64::new(m, 0.0);
    }
    C64::from_polar(1.0, -y) * (m * y.sin() / y)
}

/// One row of the packet analysis export.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZsaRecord {
    pub modes: usize,
    pub cell_offset: f64,
    pub exact: C64,
    pub prediction: C64,
    pub relative_deviation: f64,
    pub magnitude_deviation: f64,
}

pub fn zsa_record(spec: &PacketSpec) -> ZsaRecord {
    let exact = zsa_coefficient_sum(spec);
    let prediction = sinc_prediction(spec);
    let scale = exact.norm().max(prediction.norm());
    let (relative_deviation, magnitude_deviation) = if scale == 0.0 {
        (0.0, 0.0)
    } else {
        ((exact - prediction).norm() / scale, (exact.norm() - prediction.norm()).abs() / scale)
    };
    ZsaRecord {
        modes: spec.modes,
        cell_offset: spec.cell_offset(),
        exact,
        prediction,
        relative_deviation,
        magnitude_deviation,
    }
}
