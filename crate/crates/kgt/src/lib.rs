//! Finite higher-rank graphs and the constructions that stack them into
//! towers: path calculus with unique factorisation, group-labeled skew
//! products, covering maps and their limits, cofinality and periodicity
//! analysis, and a formal generator algebra for the induced label maps.

pub mod degree;
pub mod error;
pub mod kgraph;

pub mod chain;
pub mod group;

pub mod cover;
pub mod projlim;
pub mod skew;
pub mod tower;

pub mod analysis;
pub mod infpath;
pub mod iso;

pub mod symbolic;

pub mod dot;
pub mod oracle;
pub mod presets;
pub mod specfile;

pub use degree::Degree;
pub use error::{KgtError, Result};
pub use kgraph::{GraphConfig, KGraph, Path, RawEdge, RawGraph};
