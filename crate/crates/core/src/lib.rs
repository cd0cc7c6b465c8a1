//! Train-track machinery for graph self-maps representing free group
//! automorphisms: gate structures, gate-Whitehead graphs and gate indices,
//! long turns and their dynamics, periodic INP detection, legalizing maps,
//! and the certification pipeline built on them.

pub mod certify;
pub mod error;
pub mod examples;
pub mod gates;
pub mod graph;
pub mod inp;
pub mod io;
pub mod long_turns;
pub mod map;
pub mod matrix;
pub mod pi1;
pub mod survey;
pub mod whitehead;

pub use error::{Error, Result};
pub use gates::{Gate, GateMorphism, GateStructure};
pub use graph::{Dir, EdgeId, EdgePath, Graph, VertexId};
pub use map::GraphMap;
pub use matrix::TransitionMatrix;
