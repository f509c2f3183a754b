//! Shared fixtures for the engine benchmarks.

use wherald_core::{build_generator, evolve_exact, vacuum_state, CouplingParams, Generator, StateVector};

pub fn params() -> CouplingParams {
    CouplingParams::new(0.3, 0.9, 1.0).unwrap().with_positions(1.0, [0.0, 0.5, 1.0]).unwrap()
}

pub fn generator(ensembles: [u32; 3], n_max: u8) -> Generator {
    build_generator(&params(), ensembles, n_max).unwrap()
}

pub fn evolved(ensembles: [u32; 3], n_max: u8) -> StateVector {
    let g = generator(ensembles, n_max);
    evolve_exact(&vacuum_state(ensembles, n_max).unwrap(), &g, params().t).unwrap()
}
