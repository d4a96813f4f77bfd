//! Tuples, their condition checks, and certified witnesses.

use std::sync::Arc;

use num_traits::Zero;

use crate::ambient::{int, pow2_neg, Ball, BallIndex, Point};
use crate::error::Error;
use crate::formal::{formally_contained_balls, formally_disjoint, FormalChain};
use crate::geometry::fixture::LineAnchorHint;
use crate::presentations::{point_in_balls, Answer, ComputablePoint, PresentedSet, SharedSet};

/// A candidate `(n, k, m, ℓ, p, u)` for drawing a ray. `u` lists the balls
/// of the absorbing set `J_u`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayTuple {
    pub n: u64,
    pub k: u32,
    pub m: u64,
    pub chain: FormalChain,
    pub p: usize,
    pub u: Vec<Ball>,
}

/// A candidate `(n, k, m, ℓ, p, q, e, u)` for drawing a line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineTuple {
    pub n: u64,
    pub k: u32,
    pub m: u64,
    pub chain: FormalChain,
    pub p: usize,
    pub q: usize,
    pub e: usize,
    pub u: Vec<Ball>,
}

/// Anchor data for a line, with the balls `I_A`, `I_B`, `I_C` decoded.
#[derive(Clone, Debug, PartialEq)]
pub struct LineHint {
    pub a: Point,
    pub ball_a: Ball,
    pub ball_b: Ball,
    pub ball_c: Ball,
    pub k0: u32,
}

impl LineHint {
    pub fn from_anchor(h: &LineAnchorHint) -> Self {
        let d = h.a.dim();
        LineHint {
            a: h.a.clone(),
            ball_a: h.ball_a.decode(d),
            ball_b: h.ball_b.decode(d),
            ball_c: h.ball_c.decode(d),
            k0: h.k0,
        }
    }
}

/// Ray conditions in the order they are checked; the cheap, exact ones come
/// first. The number is the condition's position in the ray list.
pub const RAY_ORDER: [u8; 8] = [7, 8, 1, 2, 6, 3, 4, 5];
pub const LINE_ORDER: [u8; 10] = [6, 7, 1, 2, 5, 8, 9, 10, 3, 4];

fn with_u(mut balls: Vec<Ball>, u: &[Ball]) -> Vec<Ball> {
    balls.extend_from_slice(u);
    balls
}

/// Checks one ray condition.
pub fn ray_condition(
    c: u8,
    t: &RayTuple,
    s: &dyn PresentedSet,
    endpoint: &dyn ComputablePoint,
    a: &Point,
    fuel: u64,
) -> bool {
    let h = &t.chain;
    match c {
        1 => h.is_formal_chain(),
        2 => formally_disjoint(&t.u, &h.all_balls()),
        3 => point_in_balls(endpoint, &h.links()[0], fuel).is_yes(),
        4 => s.ball_anchor(a, t.n, &with_u(h.segment(0, t.p), &t.u), fuel).is_yes(),
        5 => s.ball_anchor(a, t.m, &with_u(h.all_balls(), &t.u), fuel).is_yes(),
        6 => formally_contained_balls(&h.segment(0, t.p), a, &int(t.m as i64)).unwrap_or(false),
        7 => t.p < h.last() && t.m >= 1,
        8 => h.mesh_lt(&pow2_neg(t.k)),
        _ => panic!("ray conditions are numbered 1 to 8"),
    }
}

/// The first ray condition that does not confirm within `fuel`.
pub fn ray_first_failure(
    t: &RayTuple,
    s: &dyn PresentedSet,
    endpoint: &dyn ComputablePoint,
    a: &Point,
    fuel: u64,
) -> Option<u8> {
    RAY_ORDER.into_iter().find(|&c| !ray_condition(c, t, s, endpoint, a, fuel))
}

pub fn ray_certify(t: &RayTuple, s: &dyn PresentedSet, endpoint: &dyn ComputablePoint, a: &Point, fuel: u64) -> Answer {
    Answer::from_bool(ray_first_failure(t, s, endpoint, a, fuel).is_none())
}

/// Checks one line condition.
pub fn line_condition(c: u8, t: &LineTuple, s: &dyn PresentedSet, hint: &LineHint, fuel: u64) -> bool {
    let h = &t.chain;
    let a = &hint.a;
    match c {
        1 => h.is_formal_chain(),
        2 => formally_disjoint(&t.u, &h.all_balls()),
        3 => s.ball_anchor(a, t.n, &with_u(h.segment(t.p, t.q), &t.u), fuel).is_yes(),
        4 => s.ball_anchor(a, t.m, &with_u(h.all_balls(), &t.u), fuel).is_yes(),
        5 => formally_contained_balls(&h.segment(t.p, t.q), a, &int(t.m as i64)).unwrap_or(false),
        6 => t.p < t.e && t.e < t.q && t.q < h.last() && t.m >= 1,
        7 => h.mesh_lt(&pow2_neg(t.k + hint.k0 + 3)),
        8 => formally_disjoint(std::slice::from_ref(&hint.ball_a), &h.segment(t.e, h.last())),
        9 => formally_disjoint(std::slice::from_ref(&hint.ball_b), &h.segment(0, t.e)),
        10 => formally_disjoint(std::slice::from_ref(&hint.ball_c), &t.u),
        _ => panic!("line conditions are numbered 1 to 10"),
    }
}

pub fn line_first_failure(t: &LineTuple, s: &dyn PresentedSet, hint: &LineHint, fuel: u64) -> Option<u8> {
    LINE_ORDER.into_iter().find(|&c| !line_condition(c, t, s, hint, fuel))
}

pub fn line_certify(t: &LineTuple, s: &dyn PresentedSet, hint: &LineHint, fuel: u64) -> Answer {
    Answer::from_bool(line_first_failure(t, s, hint, fuel).is_none())
}

/// What is being drawn.
#[derive(Clone)]
pub enum Target {
    Ray {
        set: SharedSet,
        endpoint: Arc<dyn ComputablePoint>,
    },
    Line {
        set: SharedSet,
        hint: Box<LineHint>,
    },
}

impl Target {
    pub fn set(&self) -> &SharedSet {
        match self {
            Target::Ray { set, .. } | Target::Line { set, .. } => set,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, Target::Line { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Ray,
    Line,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ray" => Ok(Mode::Ray),
            "line" => Ok(Mode::Line),
            _ => Err(Error::Input(format!("unknown mode {s:?}, expected ray or line"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tuple {
    Ray(RayTuple),
    Line(LineTuple),
}

/// A certified tuple with the fuel it was certified at.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub tuple: Tuple,
    pub stage: u64,
    pub fuel: u64,
    /// Dovetail step at which the tuple certified.
    pub step: u64,
}

impl Witness {
    pub fn n(&self) -> u64 {
        match &self.tuple {
            Tuple::Ray(t) => t.n,
            Tuple::Line(t) => t.n,
        }
    }

    pub fn k(&self) -> u32 {
        match &self.tuple {
            Tuple::Ray(t) => t.k,
            Tuple::Line(t) => t.k,
        }
    }

    pub fn chain(&self) -> &FormalChain {
        match &self.tuple {
            Tuple::Ray(t) => &t.chain,
            Tuple::Line(t) => &t.chain,
        }
    }

    /// Link range `(lo, hi)` of the certified segment.
    pub fn range(&self) -> (usize, usize) {
        match &self.tuple {
            Tuple::Ray(t) => (0, t.p),
            Tuple::Line(t) => (t.p, t.q),
        }
    }

    /// The certified links `H^{0≤p}` or `H^{p≤q}`.
    pub fn links(&self) -> &[Vec<Ball>] {
        let (lo, hi) = self.range();
        &self.chain().links()[lo..=hi]
    }

    /// Index codes of the certified links.
    pub fn link_indices(&self) -> Vec<Vec<BallIndex>> {
        self.links().iter().map(|l| l.iter().map(Ball::index).collect()).collect()
    }

    /// Re-runs every condition at the stored fuel.
    pub fn replay(&self, target: &Target, a: &Point) -> bool {
        match (&self.tuple, target) {
            (Tuple::Ray(t), Target::Ray { set, endpoint }) => {
                ray_certify(t, set.as_ref(), endpoint.as_ref(), a, self.fuel).is_yes()
            }
            (Tuple::Line(t), Target::Line { set, hint }) => {
                &hint.a == a && line_certify(t, set.as_ref(), hint, self.fuel).is_yes()
            }
            _ => false,
        }
    }
}

/// A ball far outside `B̂(a, reach)`, used as `J_u` when nothing needs absorbing.
pub fn far_singleton(a: &Point, reach: u64) -> Ball {
    let mut c = a.coords().to_vec();
    c[0] += int(2 * reach as i64 + 4);
    debug_assert!(!c[0].is_zero() || reach == 0);
    Ball::new(Point::new(c), int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::rat;
    use crate::geometry::arc::{chain_for_arc, PolylinePath};
    use crate::geometry::fixture::Fixture;
    use crate::geometry::present::fixture_presentation;
    use crate::presentations::ExactPoint;

    fn axis_ray_set() -> SharedSet {
        let fx = Fixture::from_json(
            r#"{"id":"r","kind":"polyline-ray","vertices":[["0/1","0/1"],["1/1","0/1"]],"published":{"fuel":8}}"#,
        )
        .unwrap();
        fixture_presentation(Arc::new(fx))
    }

    /// Builds the tuple from the arc chain on `f([0,3])`, `f(t) = (t, 0)`.
    fn hand_tuple() -> RayTuple {
        let f = PolylinePath::new((0..=3).map(|i| Point::xy(int(i), int(0))).collect()).unwrap();
        let chain = chain_for_arc(&f, &rat(1, 2)).unwrap();
        // p: the last link meeting B̂(0, 1); links up to there lie in B(0, 2)
        let p = (0..chain.len())
            .filter(|&i| chain.links()[i].iter().any(|b| b.center.x() - &b.radius < int(1)))
            .max()
            .unwrap();
        RayTuple {
            n: 1,
            k: 1,
            m: 2,
            chain,
            p,
            u: vec![far_singleton(&Point::origin(2), 3)],
        }
    }

    #[test]
    fn hand_built_ray_tuple_certifies() {
        let s = axis_ray_set();
        let t = hand_tuple();
        let x = ExactPoint(Point::origin(2));
        let a = Point::origin(2);
        let fuel = (0..24).find(|&f| ray_certify(&t, s.as_ref(), &x, &a, f).is_yes());
        assert!(fuel.is_some(), "first failure at 23: {:?}", ray_first_failure(&t, s.as_ref(), &x, &a, 23));
    }

    #[test]
    fn ray_violations_are_reported() {
        let s = axis_ray_set();
        let x = ExactPoint(Point::origin(2));
        let a = Point::origin(2);
        let mut t = hand_tuple();
        t.p = t.chain.last();
        assert_eq!(ray_first_failure(&t, s.as_ref(), &x, &a, 16), Some(7));
        let mut t = hand_tuple();
        t.k = 2;
        assert_eq!(ray_first_failure(&t, s.as_ref(), &x, &a, 16), Some(8));
    }
}
