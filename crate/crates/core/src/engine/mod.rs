//! Certified chain search for rays and lines.

pub mod certify;
pub mod search;

pub use certify::{
    line_certify, line_first_failure, ray_certify, ray_first_failure, LineHint, LineTuple, Mode, RayTuple, Target,
    Tuple, Witness,
};
pub use search::{anchor_from_endpoint, Candidate, Engine, SearchConfig};
