//! Exact thermal entanglement, coherence and teleportation fidelity of the
//! spin-1/2 Ising-XXZ diamond chain with one impurity plaquette.
//!
//! The chain is solved with the 2×2 transfer matrix of the nodal Ising
//! spins. The interstitial Heisenberg dimer of the impurity cell is left in a
//! thermal X state ([`rdm::XState`]) from which concurrence, l1-norm
//! coherence and the fidelities of a two-qubit teleportation protocol follow
//! in closed form.
//!
//! ```
//! use diamond_core::{ChainSpec, CouplingSet, ImpurityFactors, Thermal};
//! use diamond_core::{measures, rdm, teleport};
//!
//! let host = CouplingSet::new(1.0, 1.0, 1.0, 0.5).unwrap();
//! let spec = ChainSpec::new(host, ImpurityFactors::new(0.0, 0.8, -0.8).unwrap());
//! let rho = rdm::rdm_thermo(&spec, &Thermal::new(0.05).unwrap()).unwrap();
//! assert!(measures::concurrence_xstate(&rho) > 0.99);
//! assert!(teleport::average_fidelity(&rho).beats_classical());
//! ```

pub mod error;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod rdm;
pub mod roots;
pub mod teleport;
pub mod transfer;

pub use error::{Error, Result};
pub use model::{ChainSpec, CouplingSet, ImpurityFactors, IsingSector, NodalSpin, Thermal};
pub use rdm::XState;
pub use transfer::TransferSpectral;
