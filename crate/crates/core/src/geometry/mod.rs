//! Exact geometry for curve fixtures: pieces, disk covers, fixture files and
//! the presentations built on them.

pub mod arc;
pub mod disks;
pub mod fixture;
pub mod pieces;
pub mod present;

pub use arc::{chain_for_arc, CircleChart, Parameterization, PolylinePath};
pub use disks::disks_cover_region;
pub use fixture::{Curve, Fixture, Kind, LineAnchorHint, Published};
pub use pieces::Piece;
pub use present::{fixture_presentation, grid_cover, FixturePresentation, PointSetPresentation};
