//! Closed sets given by semi-decision procedures.
//!
//! A semi-decidable relation is modelled as a total function of the query
//! and a fuel bound returning [`Answer::Yes`] or [`Answer::Unknown`]. Every
//! procedure here is monotone in fuel and sound: `Yes` is never retracted
//! and never wrong.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ambient::{decode_ball, int, pow2_neg, unpair, Ball, BallIndex, Point, Rational, SetCode};
use crate::error::Error;
use crate::formal::balls_disjoint;
use crate::index::{containing, BallGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    Unknown,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::Unknown
        }
    }
}

/// A closed set `S` presented by the relation `Î ∩ S ⊆ J`.
pub trait PresentedSet: Send + Sync {
    fn dim(&self) -> usize {
        2
    }

    /// `closed ∩ S ⊆ ⋃ cover`, where `closed` is read as a closed ball.
    fn covers_balls(&self, closed: &Ball, cover: &[Ball], fuel: u64) -> Answer;

    /// `S ∩ B̂(a, n) ⊆ ⋃ cover`. For `n = 0` the ball is the point `a`.
    fn ball_anchor(&self, a: &Point, n: u64, cover: &[Ball], fuel: u64) -> Answer {
        if n >= 1 {
            return self.covers_balls(&Ball::new(a.clone(), int(n as i64)), cover, fuel);
        }
        if cover.iter().any(|b| b.contains(a)) {
            return Answer::Yes;
        }
        // a ∉ S shows up as an empty intersection with a small closed ball
        for t in 0..=fuel.min(64) {
            let probe = Ball::new(a.clone(), pow2_neg(t as u32));
            if self.covers_balls(&probe, cover, fuel).is_yes() {
                return Answer::Yes;
            }
        }
        Answer::Unknown
    }

    fn nonempty_hint(&self) -> bool {
        true
    }
}

pub type SharedSet = Arc<dyn PresentedSet>;

pub fn covers(s: &dyn PresentedSet, i: &BallIndex, j: &SetCode, fuel: u64) -> Answer {
    let d = s.dim();
    s.covers_balls(&decode_ball(i, d), &j.balls(d), fuel)
}

pub fn ball_anchor_query(s: &dyn PresentedSet, a: &Point, n: u64, j: &SetCode, fuel: u64) -> Answer {
    s.ball_anchor(a, n, &j.balls(a.dim()), fuel)
}

/// A ball formally disjoint from `b`, used as an emptiness witness.
pub fn far_ball(b: &Ball) -> Ball {
    let mut c = b.center.coords().to_vec();
    c[0] += &b.radius * int(3);
    Ball::new(Point::new(c), b.radius.clone())
}

/// `Î ∩ S = ∅`, witnessed by a cover that is formally disjoint from `I`.
pub fn intersect_empty_ball(s: &dyn PresentedSet, b: &Ball, fuel: u64) -> Answer {
    let far = far_ball(b);
    debug_assert!(balls_disjoint(b, &far));
    s.covers_balls(b, std::slice::from_ref(&far), fuel)
}

pub fn intersect_empty(s: &dyn PresentedSet, i: &BallIndex, fuel: u64) -> Answer {
    intersect_empty_ball(s, &decode_ball(i, s.dim()), fuel)
}

// ---------------------------------------------------------------------------
// Closed ball inside a finite union of open balls

#[derive(Clone)]
struct Cell {
    lo: Vec<Rational>,
    side: Rational,
}

impl Cell {
    fn center(&self) -> Point {
        let h = &self.side / int(2);
        Point::new(self.lo.iter().map(|l| l + &h).collect())
    }

    /// Squared distance from `p` to the farthest corner.
    fn far_dist2(&self, p: &Point) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in p.coords().iter().enumerate() {
            let lo = (c - &self.lo[k]).abs();
            let hi = (&self.lo[k] + &self.side - c).abs();
            let d = lo.max(hi);
            acc += &d * &d;
        }
        acc
    }

    fn dist2_to(&self, p: &Point) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in p.coords().iter().enumerate() {
            let lo = &self.lo[k];
            let hi = lo + &self.side;
            let d = if c < lo {
                lo - c
            } else if *c > hi {
                c - hi
            } else {
                continue;
            };
            acc += &d * &d;
        }
        acc
    }

    fn split(&self) -> Vec<Cell> {
        let dim = self.lo.len();
        let h = &self.side / int(2);
        (0..1usize << dim)
            .map(|mask| Cell {
                lo: (0..dim)
                    .map(|k| if mask >> k & 1 == 1 { &self.lo[k] + &h } else { self.lo[k].clone() })
                    .collect(),
                side: h.clone(),
            })
            .collect()
    }
}

/// `B̂ ⊆ ⋃ cover` by exact dyadic subdivision of the bounding cube to depth
/// `fuel`. A cell is dropped when it misses `B̂` and accepted when all its
/// corners lie strictly inside one cover ball.
pub fn closed_ball_in_balls(closed: &Ball, cover: &[Ball], fuel: u64) -> Answer {
    closed_region_in_balls(std::slice::from_ref(closed), cover, fuel)
}

/// `⋂ region ⊆ ⋃ cover` for closed balls `region`, subdividing the bounding
/// cube of the first region ball to depth `depth`.
pub fn closed_region_in_balls(region: &[Ball], cover: &[Ball], depth: u64) -> Answer {
    if cover.is_empty() {
        return Answer::Unknown;
    }
    let first = &region[0];
    let radii2: Vec<Rational> = region.iter().map(|b| &b.radius * &b.radius).collect();
    let grid = BallGrid::new(cover, 1);
    let root = Cell {
        lo: first.center.coords().iter().map(|c| c - &first.radius).collect(),
        side: &first.radius * int(2),
    };
    let mut live = vec![root];
    for level in 0..=depth {
        let mut next = Vec::new();
        for cell in live {
            if region.iter().zip(&radii2).any(|(b, r2)| cell.dist2_to(&b.center) > *r2) {
                continue;
            }
            let mid = cell.center();
            let near = containing(&grid, cover, &mid);
            if near.is_empty() && region.iter().all(|b| b.closed_contains(&mid)) {
                // a point of the region outside the union
                return Answer::Unknown;
            }
            // a ball holds the cell when it holds the farthest corner
            if near.iter().any(|&i| cell.far_dist2(&cover[i].center) < &cover[i].radius * &cover[i].radius) {
                continue;
            }
            if level == depth {
                return Answer::Unknown;
            }
            next.extend(cell.split());
        }
        if next.is_empty() {
            return Answer::Yes;
        }
        live = next;
    }
    Answer::Unknown
}

pub fn closed_ball_in_code(i: &BallIndex, j: &SetCode, fuel: u64, dim: usize) -> Answer {
    closed_ball_in_balls(&decode_ball(i, dim), &j.balls(dim), fuel)
}

// ---------------------------------------------------------------------------
// Co-c.e. presentations

pub type ComplementFn = Arc<dyn Fn(u64) -> BallIndex + Send + Sync>;

/// `S = ℝⁿ ∖ ⋃_k I_{f(k)}`.
#[derive(Clone)]
pub struct CoCePresentation {
    pub complement_enum: ComplementFn,
    pub dim: usize,
}

struct FromCoCe(CoCePresentation);

impl PresentedSet for FromCoCe {
    fn dim(&self) -> usize {
        self.0.dim
    }

    fn covers_balls(&self, closed: &Ball, cover: &[Ball], fuel: u64) -> Answer {
        let mut all = cover.to_vec();
        all.extend((0..fuel).map(|k| decode_ball(&(self.0.complement_enum)(k), self.0.dim)));
        closed_ball_in_balls(closed, &all, fuel)
    }
}

/// Fuel `f` uses the first `f` complement balls at subdivision depth `f`.
pub fn from_coce(p: CoCePresentation) -> SharedSet {
    Arc::new(FromCoCe(p))
}

// ---------------------------------------------------------------------------
// Semi-compact presentations

pub type CoverFn = Arc<dyn Fn(u64) -> Option<Vec<Ball>> + Send + Sync>;

struct FromSemicompact {
    cov: CoverFn,
    dim: usize,
}

impl PresentedSet for FromSemicompact {
    fn dim(&self) -> usize {
        self.dim
    }

    fn covers_balls(&self, closed: &Ball, cover: &[Ball], fuel: u64) -> Answer {
        for k in 0..=fuel {
            let Some(l) = (self.cov)(k) else { continue };
            let ok = l.iter().all(|b| {
                cover.contains(b)
                    || balls_disjoint(b, closed)
                    || closed_ball_in_balls(b, cover, fuel).is_yes()
            });
            if ok {
                return Answer::Yes;
            }
        }
        Answer::Unknown
    }
}

/// Builds a presentation from an enumeration of finite ball covers of a
/// compact `S`. A query succeeds once some enumerated cover splits into
/// balls inside `J` and balls formally disjoint from `I`.
pub fn from_semicompact(cov: CoverFn, dim: usize) -> SharedSet {
    Arc::new(FromSemicompact { cov, dim })
}

// ---------------------------------------------------------------------------
// Complement enumeration

/// Indices `i` with `Î_i ∩ S = ∅`, in Cantor dovetail order over `(i, fuel)`.
pub struct ComplementEnum {
    set: SharedSet,
    t: u64,
    seen: HashSet<BigUint>,
}

impl Iterator for ComplementEnum {
    type Item = BallIndex;

    fn next(&mut self) -> Option<BallIndex> {
        loop {
            let (i, fuel) = unpair(&BigUint::from(self.t));
            self.t += 1;
            if self.seen.contains(&i) {
                continue;
            }
            let idx = BallIndex(i.clone());
            let fuel = fuel.to_u64().unwrap_or(u64::MAX);
            if intersect_empty(self.set.as_ref(), &idx, fuel).is_yes() {
                self.seen.insert(i);
                return Some(idx);
            }
        }
    }
}

pub fn complement_enum(s: SharedSet) -> ComplementEnum {
    ComplementEnum {
        set: s,
        t: 0,
        seen: HashSet::new(),
    }
}

// ---------------------------------------------------------------------------
// Computable points

pub trait ComputablePoint: Send + Sync {
    /// A rational point within `2^-k` of the represented point.
    fn approx(&self, k: u64) -> Point;
}

#[derive(Clone, Debug)]
pub struct ExactPoint(pub Point);

impl ComputablePoint for ExactPoint {
    fn approx(&self, _k: u64) -> Point {
        self.0.clone()
    }
}

impl<F: Fn(u64) -> Point + Send + Sync> ComputablePoint for F {
    fn approx(&self, k: u64) -> Point {
        self(k)
    }
}

/// `x ∈ J_j`, confirmed once `d(x_s, λ) + 2^-s < ρ` for some member ball.
pub fn point_in_balls(x: &dyn ComputablePoint, cover: &[Ball], fuel: u64) -> Answer {
    for s in 0..=fuel.min(4096) {
        let p = x.approx(s);
        let e = pow2_neg(s as u32);
        let hit = cover.iter().any(|b| {
            let m = &b.radius - &e;
            m.is_positive() && b.center.dist2(&p) < &m * &m
        });
        if hit {
            return Answer::Yes;
        }
    }
    Answer::Unknown
}

pub fn point_in_code(x: &dyn ComputablePoint, j: &SetCode, fuel: u64, dim: usize) -> Answer {
    point_in_balls(x, &j.balls(dim), fuel)
}

/// Locates the single point of `S ∩ B̂(a, n)` to within `2^-k`.
///
/// Descends through quadrants of the bounding square: each step asks whether
/// `S ∩ B̂(a, n)` lies in the ball of radius `3/4·side` around one quadrant,
/// with fuel raised until some quadrant answers. The square shrinks by `3/4`
/// per step. Returns the center of the first ball with `2r < 2^-k`; fails
/// with [`Error::UndecidedAtCap`] when fuel exceeds `cap` at some step.
pub fn point_from_singleton(s: &dyn PresentedSet, a: &Point, n: u64, k: u32, cap: u64) -> Result<Point, Error> {
    let target = pow2_neg(k);
    let three_quarters = Rational::new(3.into(), 4.into());
    let mut center = a.clone();
    let mut side = int(2 * n.max(1) as i64);
    loop {
        let half = &side / int(2);
        let quarter = &side / int(4);
        let quads: Vec<Ball> = (0..4)
            .map(|q| {
                let dx = if q & 1 == 1 { quarter.clone() } else { -quarter.clone() };
                let dy = if q & 2 == 2 { quarter.clone() } else { -quarter.clone() };
                let c = Point::xy(center.x() + dx, center.y() + dy);
                Ball::new(c, &half * &three_quarters)
            })
            .collect();
        let mut found = None;
        'fuel: for fuel in 0..=cap {
            for q in &quads {
                if s.ball_anchor(a, n, std::slice::from_ref(q), fuel).is_yes() {
                    found = Some(q.clone());
                    break 'fuel;
                }
            }
        }
        let q = found.ok_or(Error::UndecidedAtCap { cap })?;
        if &q.radius * int(2) < target {
            return Ok(q.center);
        }
        center = q.center;
        side = &q.radius * int(2);
        debug_assert!(side.is_positive() && !side.is_one());
    }
}

// ---------------------------------------------------------------------------
// Example: the origin as a co-c.e. set

/// Complement of `{(0,0)}` as the union of four half-plane ball families
/// `B((s, y), s)`, `B((-s, y), s)`, `B((y, s), s)`, `B((y, -s), s)`.
pub fn origin_complement(k: u64) -> BallIndex {
    let family = k % 4;
    let (a, b) = unpair(&BigUint::from(k / 4));
    let s = crate::ambient::q_pos(&a);
    let y = crate::ambient::rat_q(&b);
    let (cx, cy) = match family {
        0 => (s.clone(), y),
        1 => (-s.clone(), y),
        2 => (y, s.clone()),
        _ => (y, -s.clone()),
    };
    Ball::new(Point::xy(cx, cy), s).index()
}

pub fn origin_coce() -> CoCePresentation {
    CoCePresentation {
        complement_enum: Arc::new(origin_complement),
        dim: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::rat;

    fn ball(x: Rational, y: Rational, r: Rational) -> Ball {
        Ball::new(Point::xy(x, y), r)
    }

    #[test]
    fn closed_ball_in_concentric_larger_ball() {
        let b = ball(int(0), int(0), int(1));
        assert!(closed_ball_in_balls(&b, &[ball(int(0), int(0), int(2))], 1).is_yes());
        for fuel in [0, 4, 8] {
            assert!(!closed_ball_in_balls(&b, std::slice::from_ref(&b), fuel).is_yes());
        }
    }

    #[test]
    fn closed_ball_in_two_overlapping_balls() {
        let b = ball(int(0), int(0), int(1));
        let cover = [ball(rat(-3, 5), int(0), rat(6, 5)), ball(rat(3, 5), int(0), rat(6, 5))];
        let first = (0..12).find(|&f| closed_ball_in_balls(&b, &cover, f).is_yes());
        assert!(first.is_some());
        let f = first.unwrap();
        assert!((f..f + 3).all(|g| closed_ball_in_balls(&b, &cover, g).is_yes()));
    }

    #[test]
    fn origin_complement_first_balls() {
        let want = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        for (k, (x, y)) in want.iter().enumerate() {
            let b = decode_ball(&origin_complement(k as u64), 2);
            assert_eq!(b, ball(int(*x), int(*y), int(1)));
        }
        for k in 0..2000 {
            let b = decode_ball(&origin_complement(k), 2);
            assert!(!b.contains(&Point::origin(2)));
        }
    }

    #[test]
    fn coce_origin_queries() {
        let s = from_coce(origin_coce());
        let i = ball(int(0), int(0), int(1)).index();
        let j = SetCode::from_balls(&[ball(int(0), int(0), rat(1, 2))]).unwrap();
        assert!((0..12).any(|f| covers(s.as_ref(), &i, &j, f).is_yes()));
        let away = SetCode::from_balls(&[ball(int(5), int(5), rat(1, 2))]).unwrap();
        assert!((0..10).all(|f| !covers(s.as_ref(), &i, &away, f).is_yes()));
    }

    #[test]
    fn point_membership() {
        let unit = [ball(int(0), int(0), int(1))];
        let o = ExactPoint(Point::origin(2));
        assert!(!point_in_balls(&o, &unit, 0).is_yes());
        assert!(point_in_balls(&o, &unit, 1).is_yes());
        let edge = ExactPoint(Point::xy(int(1), int(0)));
        assert!(!point_in_balls(&edge, &unit, 30).is_yes());
    }

    #[test]
    fn singleton_origin_located() {
        let s = from_coce(origin_coce());
        for k in [1u32, 3] {
            let p = point_from_singleton(s.as_ref(), &Point::origin(2), 1, k, 14).unwrap();
            assert!(p.dist2(&Point::origin(2)) < pow2_neg(k) * pow2_neg(k));
        }
    }

    #[test]
    fn intersect_empty_on_origin() {
        let s = from_coce(origin_coce());
        let away = ball(int(3), int(0), rat(1, 2));
        assert!((0..10).any(|f| intersect_empty_ball(s.as_ref(), &away, f).is_yes()));
        let hit = ball(int(0), int(0), int(1));
        assert!((0..8).all(|f| !intersect_empty_ball(s.as_ref(), &hit, f).is_yes()));
    }
}
