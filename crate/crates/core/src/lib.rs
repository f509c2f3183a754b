//! Heralded W-state preparation in three ensembles of Λ-atoms.
//!
//! The pipeline is: build the Raman interaction generator on the truncated
//! composite space ([`dynamics`]), evolve the vacuum exactly or as a power
//! series, mix the emitted light on a beamsplitter network ([`optics`]),
//! project on photon-number-resolving detector outcomes ([`hilbert`]) and
//! compare the post-measurement atomic state with W-class targets
//! ([`herald`]).

pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod expm;
pub mod fock;
pub mod herald;
pub mod hilbert;
pub mod optics;
pub mod packet;
pub mod sparse;

pub use num_complex::Complex64 as C64;

pub use dynamics::{
    audit_amplitudes, build_generator, evolve_exact, evolve_series, evolve_vacuum, perturbative_amplitudes,
    verified_amplitudes, AuditRow, CompositeBasis, CouplingParams, Generator, PerturbativeAmplitudes, Sector,
    SectorAmplitude, Verification,
};
pub use ensemble::{collective_apply, dicke_ladder_coefficient, w_state, DickeKet, EnsembleBasis, EnsembleOccupation, Level};
pub use error::{Error, Result};
pub use fock::{mode_ladder, Ladder, LadderOutcome, Mode, PhotonPattern, DEFAULT_N_MAX};
pub use herald::{channel_state_fidelity, run_herald, targets, two_photon_herald, AtomicTarget, HeraldResult, HeraldScenario};
pub use hilbert::{
    fidelity, inner, project_photons, vacuum_state, AtomLabel, AtomicState, BasisLabel, Dims, Projection, StateVector,
};
pub use optics::{apply_network, bs_unitary, BeamsplitterSpec, NetworkSpec, SecondStage, SplitterUnitary};
pub use packet::{packet_state, sinc_prediction, zsa_coefficient_sum, zsa_record, PacketSpec, PacketState, ZsaRecord};
