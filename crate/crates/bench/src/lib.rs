//! Shared fixtures for the benchmarks in `benches/`.

use pursuit::{gen_sparse_signal, Dictionary, IncoherentBuilder, SparseRepresentation};

/// A square incoherent dictionary with a sparse signal on it.
pub struct Fixture {
    pub dict: Dictionary,
    pub rep: SparseRepresentation,
    pub signal: Vec<f64>,
}

pub fn incoherent_fixture(dim: usize, sparsity: usize, seed: u64) -> Fixture {
    let dict = IncoherentBuilder::new(dim, dim, 0.3, seed)
        .build()
        .expect("square incoherent dictionary");
    let rep = gen_sparse_signal(&dict, sparsity, 1.0, 2.0, seed + 1).expect("sparse signal");
    let signal = rep.synthesize(&dict).expect("synthesis");
    Fixture { dict, rep, signal }
}
