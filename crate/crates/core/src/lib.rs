//! Exact rational-ball codings, formal chain predicates, and certified
//! chain covers for closed sets given by semi-decidable presentations.

pub mod ambient;
pub mod engine;
pub mod enumerators;
pub mod error;
pub mod formal;
pub mod geometry;
pub mod index;
pub mod presentations;
pub mod surd;
pub mod verify;

pub use ambient::{Ball, BallIndex, ChainCode, Point, Rational, SetCode};
pub use error::{Error, Result};
