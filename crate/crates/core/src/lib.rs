//! Genus-filtered generation and enumeration of RNA pseudoknot structures.
//!
//! An RNA secondary structure with pseudoknots is drawn as a *diagram*:
//! backbone positions `1..=length` on a line, with arcs in the upper half
//! plane pairing some of them. Collapsing the backbone and fattening the
//! arcs turns a diagram into a ribbon graph whose Euler characteristic
//! yields the *genus*: 0 for pseudoknot-free structures, 1 and up as
//! crossings become topologically essential.
//!
//! The crate provides, all exactly and reproducibly:
//!
//! * [`fatgraph`] — genus and boundary-loop computation for any diagram;
//! * [`unicellular`] — the dual one-face map of a perfect matching, with
//!   the vertex gluing/slicing surgery that steps the genus up and down;
//! * [`enumerate`] — big-integer counts of matchings and diagrams by genus,
//!   and the exact rational weights of glue paths;
//! * [`sampler`] — uniform random generation of matchings and diagrams of
//!   fixed genus in linear time per sample, from a single seed;
//! * [`energy`], [`partition`] — a loop-based energy model, its `O(n^2)`
//!   genus-1 partition function, and Boltzmann-weighted sampling by
//!   stochastic backtracking;
//! * [`census`], [`stats`] — brute-force enumeration and statistical
//!   checks used to validate all of the above.
//!
//! # Example
//!
//! ```
//! use rnagenus::{genus_of_diagram, uniform_matching, Diagram, RandomSource};
//!
//! // The simplest pseudoknot: two crossing arcs.
//! let d = Diagram::new(4, vec![(1, 3), (2, 4)])?;
//! assert_eq!(genus_of_diagram(&d).genus, 1);
//!
//! // A uniform genus-2 matching on 12 points.
//! let mut rng = RandomSource::from_seed(7);
//! let m = uniform_matching(6, 2, &mut rng)?;
//! assert_eq!(genus_of_diagram(&m).genus, 2);
//! # Ok::<(), rnagenus::Error>(())
//! ```

pub use num;

pub mod census;
pub mod diagram;
pub mod energy;
pub mod enumerate;
pub mod error;
pub mod fatgraph;
pub mod partition;
pub mod perm;
pub mod sampler;
pub mod stats;
pub mod unicellular;

pub use diagram::Diagram;
pub use energy::{classify_loops, loop_energy, EnergyParams, LoopClass, LoopProfile};
pub use enumerate::CountTables;
pub use error::{Error, Result};
pub use fatgraph::{genus_of_diagram, genus_of_matching, GenusResult};
pub use partition::{
    sample_genus_one_diagram, sample_genus_one_matching, GenusOneDiagramSampler, PartitionTables,
};
pub use perm::Permutation;
pub use sampler::{
    uniform_diagram, uniform_matching, DiagramSampler, MatchingSampler, RandomSource,
};
pub use unicellular::{Trisection, TrisectionType, UnicellularMap, VertexHandle};
