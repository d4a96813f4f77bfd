//! Curve pieces with rational parameterizations and exact ball predicates.
//!
//! For every piece and ball `B(c, r)` the sign of `|P(t) - c|² - r²` on the
//! parameter domain equals the sign of a quadratic `αt² + βt + γ`, so the
//! parameters inside a ball form at most two intervals with surd endpoints.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::ambient::{int, Ball, Point, Rational};
use crate::surd::Surd;

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    /// `a + t(b - a)`, `t ∈ [0, 1]`.
    Segment { a: Point, b: Point },
    /// `a + t·dir`, `t ≥ 0`.
    Ray { a: Point, dir: Point },
    /// `c + R(s(1 - t²), 2t)/(1 + t²)` for `t ∈ [t0, t1] ⊆ [-1, 1]`, with
    /// `s = -1` when `mirror` is set. The two charts cover the circle.
    Arc {
        center: Point,
        radius: Rational,
        mirror: bool,
        t0: Rational,
        t1: Rational,
    },
}

/// One end of a parameter interval.
#[derive(Clone, Debug)]
pub enum Bound {
    NegInf,
    PosInf,
    At(Surd, bool),
}

#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

fn cmp_lo(a: &Bound, b: &Bound) -> Ordering {
    // ordering of lower bounds: -∞ first; at equal values a closed bound
    // admits more points so it sorts first
    match (a, b) {
        (Bound::NegInf, Bound::NegInf) => Ordering::Equal,
        (Bound::NegInf, _) => Ordering::Less,
        (_, Bound::NegInf) => Ordering::Greater,
        (Bound::PosInf, Bound::PosInf) => Ordering::Equal,
        (Bound::PosInf, _) => Ordering::Greater,
        (_, Bound::PosInf) => Ordering::Less,
        (Bound::At(x, cx), Bound::At(y, cy)) => x.cmp(y).then(cy.cmp(cx)),
    }
}

fn cmp_hi(a: &Bound, b: &Bound) -> Ordering {
    match (a, b) {
        (Bound::PosInf, Bound::PosInf) => Ordering::Equal,
        (Bound::PosInf, _) => Ordering::Greater,
        (_, Bound::PosInf) => Ordering::Less,
        (Bound::NegInf, Bound::NegInf) => Ordering::Equal,
        (Bound::NegInf, _) => Ordering::Less,
        (_, Bound::NegInf) => Ordering::Greater,
        (Bound::At(x, cx), Bound::At(y, cy)) => x.cmp(y).then(cx.cmp(cy)),
    }
}

impl Interval {
    pub fn closed(lo: Rational, hi: Option<Rational>) -> Self {
        Interval {
            lo: Bound::At(Surd::rational(lo), true),
            hi: hi.map_or(Bound::PosInf, |h| Bound::At(Surd::rational(h), true)),
        }
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Bound::PosInf, _) | (_, Bound::NegInf) => true,
            (Bound::NegInf, _) | (_, Bound::PosInf) => false,
            (Bound::At(x, cx), Bound::At(y, cy)) => match x.cmp(y) {
                Ordering::Less => false,
                Ordering::Equal => !(*cx && *cy),
                Ordering::Greater => true,
            },
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = if cmp_lo(&self.lo, &other.lo) == Ordering::Greater { &self.lo } else { &other.lo };
        let hi = if cmp_hi(&self.hi, &other.hi) == Ordering::Less { &self.hi } else { &other.hi };
        Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }
}

/// `{t : αt² + βt + γ < 0}` (or `≤ 0` when `closed`) as disjoint intervals.
pub fn sublevel(alpha: &Rational, beta: &Rational, gamma: &Rational, closed: bool) -> Vec<Interval> {
    let all = Interval {
        lo: Bound::NegInf,
        hi: Bound::PosInf,
    };
    if alpha.is_zero() {
        if beta.is_zero() {
            let ok = if closed { !gamma.is_positive() } else { gamma.is_negative() };
            return if ok { vec![all] } else { vec![] };
        }
        let root = Bound::At(Surd::rational(-gamma / beta), closed);
        let iv = if beta.is_positive() {
            Interval { lo: Bound::NegInf, hi: root }
        } else {
            Interval { lo: root, hi: Bound::PosInf }
        };
        return vec![iv];
    }
    let disc = beta * beta - alpha * gamma * int(4);
    let two_a = alpha * int(2);
    let mid = -beta / &two_a;
    let half = Rational::one() / two_a.abs();
    let r_lo = Surd::new(mid.clone(), -half.clone(), disc.clone());
    let r_hi = Surd::new(mid.clone(), half, disc.clone());
    if alpha.is_positive() {
        if disc.is_negative() || (disc.is_zero() && !closed) {
            return vec![];
        }
        vec![Interval {
            lo: Bound::At(r_lo, closed),
            hi: Bound::At(r_hi, closed),
        }]
    } else {
        if disc.is_negative() || (disc.is_zero() && closed) {
            return vec![all];
        }
        vec![
            Interval { lo: Bound::NegInf, hi: Bound::At(r_lo, closed) },
            Interval { lo: Bound::At(r_hi, closed), hi: Bound::PosInf },
        ]
    }
}

/// Whether the open intervals in `cover` contain every point of `target`.
pub fn intervals_cover(target: &Interval, cover: &[Interval]) -> bool {
    if target.is_empty() {
        return true;
    }
    let mut sorted: Vec<&Interval> = cover.iter().filter(|iv| !iv.is_empty()).collect();
    sorted.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
    // current leftmost point that still needs covering; it only moves right,
    // so intervals starting before it stay usable
    let mut cur = target.lo.clone();
    let mut cur_closed = matches!(cur, Bound::At(_, true));
    let mut next = 0;
    let mut best: Option<&Bound> = None;
    loop {
        while let Some(iv) = sorted.get(next) {
            let starts_before = match (&iv.lo, &cur) {
                (Bound::NegInf, _) => true,
                (_, Bound::NegInf) => false,
                (Bound::PosInf, _) => false,
                (_, Bound::PosInf) => false,
                (Bound::At(x, xc), Bound::At(y, _)) => match x.cmp(y) {
                    Ordering::Less => true,
                    // an open start at the current point misses the point
                    Ordering::Equal => *xc || !cur_closed,
                    Ordering::Greater => false,
                },
            };
            if !starts_before {
                break;
            }
            if best.is_none_or(|b| cmp_hi(&iv.hi, b) == Ordering::Greater) {
                best = Some(&iv.hi);
            }
            next += 1;
        }
        let Some(b) = best else { return false };
        let ends_after = match (b, &cur) {
            (Bound::PosInf, _) => true,
            (Bound::NegInf, _) => false,
            (_, Bound::NegInf) => true,
            (_, Bound::PosInf) => false,
            (Bound::At(x, _), Bound::At(y, _)) => x > y,
        };
        if !ends_after {
            return false;
        }
        // done once the reach passes the target's end
        let done = match (b, &target.hi) {
            (Bound::PosInf, _) => true,
            (_, Bound::PosInf) => false,
            (Bound::NegInf, _) => false,
            (_, Bound::NegInf) => true,
            (Bound::At(x, xc), Bound::At(y, yc)) => match x.cmp(y) {
                Ordering::Greater => true,
                Ordering::Equal => *xc || !yc,
                Ordering::Less => false,
            },
        };
        if done {
            return true;
        }
        cur_closed = match b {
            Bound::At(_, c) => !c,
            _ => true,
        };
        cur = b.clone();
    }
}

impl Piece {
    pub fn domain(&self) -> Interval {
        match self {
            Piece::Segment { .. } => Interval::closed(Rational::zero(), Some(Rational::one())),
            Piece::Ray { .. } => Interval::closed(Rational::zero(), None),
            Piece::Arc { t0, t1, .. } => Interval::closed(t0.clone(), Some(t1.clone())),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Piece::Ray { .. })
    }

    pub fn point_at(&self, t: &Rational) -> Point {
        match self {
            Piece::Segment { a, b } => a.add(&b.sub(a).scale(t)),
            Piece::Ray { a, dir } => a.add(&dir.scale(t)),
            Piece::Arc { center, radius, mirror, .. } => {
                let t2 = t * t;
                let den = Rational::one() + &t2;
                let mut x = (Rational::one() - &t2) / &den;
                if *mirror {
                    x = -x;
                }
                let y = (t * int(2)) / den;
                Point::xy(center.x() + radius * x, center.y() + radius * y)
            }
        }
    }

    /// Coefficients whose sign on the domain matches `|P(t) - c|² - r²`.
    pub fn ball_quadratic(&self, c: &Point, r: &Rational) -> (Rational, Rational, Rational) {
        let r2 = r * r;
        match self {
            Piece::Segment { a, b } => {
                let d = b.sub(a);
                let e = a.sub(c);
                (d.dot(&d), d.dot(&e) * int(2), e.dot(&e) - r2)
            }
            Piece::Ray { a, dir } => {
                let e = a.sub(c);
                (dir.dot(dir), dir.dot(&e) * int(2), e.dot(&e) - r2)
            }
            Piece::Arc { center, radius, mirror, .. } => {
                let e = center.sub(c);
                let s = if *mirror { -Rational::one() } else { Rational::one() };
                let k = r2 - e.dot(&e) - radius * radius;
                let two_r_ex_s = radius * e.x() * s * int(2);
                (
                    -&two_r_ex_s - &k,
                    radius * e.y() * int(4),
                    two_r_ex_s - k,
                )
            }
        }
    }

    /// Parameter intervals (within the domain) lying in the ball.
    pub fn ball_intervals(&self, ball: &Ball, closed: bool) -> Vec<Interval> {
        let (a, b, c) = self.ball_quadratic(&ball.center, &ball.radius);
        let dom = self.domain();
        sublevel(&a, &b, &c, closed)
            .into_iter()
            .map(|iv| iv.intersect(&dom))
            .filter(|iv| !iv.is_empty())
            .collect()
    }

    /// Exact test whether the piece meets the open (or closed) ball.
    pub fn meets(&self, ball: &Ball, closed: bool) -> bool {
        !self.ball_intervals(ball, closed).is_empty()
    }

    /// `piece ∩ B̂(a, rad) ⊆ ⋃ balls`, decided exactly.
    pub fn covered_within(&self, a: &Point, rad: &Rational, balls: &[Ball]) -> bool {
        let target = self.ball_intervals(&Ball { center: a.clone(), radius: rad.clone() }, true);
        if target.is_empty() {
            return true;
        }
        let cover: Vec<Interval> = balls
            .iter()
            .flat_map(|b| {
                let (x, y, z) = self.ball_quadratic(&b.center, &b.radius);
                sublevel(&x, &y, &z, false)
            })
            .collect();
        target.iter().all(|t| intervals_cover(t, &cover))
    }

    /// The sub-piece over `[t0, t1]`.
    pub fn restrict(&self, t0: &Rational, t1: &Rational) -> Piece {
        match self {
            Piece::Segment { .. } | Piece::Ray { .. } => Piece::Segment {
                a: self.point_at(t0),
                b: self.point_at(t1),
            },
            Piece::Arc { center, radius, mirror, .. } => Piece::Arc {
                center: center.clone(),
                radius: radius.clone(),
                mirror: *mirror,
                t0: t0.clone(),
                t1: t1.clone(),
            },
        }
    }

    /// Splits a bounded piece at the parameter midpoint.
    pub fn bisect(&self) -> (Piece, Piece) {
        let (lo, hi) = match self {
            Piece::Segment { .. } => (Rational::zero(), Rational::one()),
            Piece::Arc { t0, t1, .. } => (t0.clone(), t1.clone()),
            Piece::Ray { .. } => panic!("bisect on an unbounded piece"),
        };
        let mid = (&lo + &hi) / int(2);
        (self.restrict(&lo, &mid), self.restrict(&mid, &hi))
    }

    pub fn midpoint(&self) -> Point {
        match self {
            Piece::Segment { a, b } => a.add(b).scale(&Rational::new(1.into(), 2.into())),
            Piece::Ray { a, .. } => a.clone(),
            Piece::Arc { t0, t1, .. } => self.point_at(&((t0 + t1) / int(2))),
        }
    }

    /// Points whose convex hull contains the bounded piece.
    pub fn hull(&self) -> Vec<Point> {
        match self {
            Piece::Segment { a, b } => vec![a.clone(), b.clone()],
            Piece::Ray { a, .. } => vec![a.clone()],
            Piece::Arc { center, radius, t0, t1, .. } => {
                let p0 = self.point_at(t0);
                let p1 = self.point_at(t1);
                if t0 == t1 {
                    return vec![p0];
                }
                // tangent lines at the ends meet at c + R(n0 + n1)/(1 + n0·n1)
                let n0 = p0.sub(center).scale(&(Rational::one() / radius));
                let n1 = p1.sub(center).scale(&(Rational::one() / radius));
                let den = Rational::one() + n0.dot(&n1);
                let t = center.add(&n0.add(&n1).scale(&(radius / den)));
                vec![p0, p1, t]
            }
        }
    }

    /// The part of a segment or ray inside the square of half-side `h`
    /// around `c`. Arcs, and pieces missing the square, come back unchanged.
    pub fn clip_to_box(&self, c: &Point, h: &Rational) -> Piece {
        let (a, dir, hi) = match self {
            Piece::Segment { a, b } => (a, b.sub(a), Some(int(1))),
            Piece::Ray { a, dir } => (a, dir.clone(), None),
            Piece::Arc { .. } => return self.clone(),
        };
        // parameter range of a + t·dir inside the box, axis by axis
        let mut lo = int(0);
        let mut hi = hi;
        for ((ai, di), ci) in a.coords().iter().zip(dir.coords()).zip(c.coords()) {
            let (l, u) = (ci - h - ai, ci + h - ai);
            if di.is_zero() {
                if l.is_positive() || u.is_negative() {
                    return self.clone();
                }
                continue;
            }
            let (t0, t1) = if di.is_positive() { (l / di, u / di) } else { (u / di, l / di) };
            lo = lo.max(t0);
            hi = Some(hi.map_or(t1.clone(), |h| h.min(t1)));
        }
        match hi {
            Some(hi) if lo <= hi => Piece::Segment { a: a.add(&dir.scale(&lo)), b: a.add(&dir.scale(&hi)) },
            _ => self.clone(),
        }
    }

    /// Squared length of a segment piece; for arcs, of its chord.
    pub fn chord2(&self) -> Rational {
        match self {
            Piece::Segment { a, b } => a.dist2(b),
            Piece::Arc { t0, t1, .. } => self.point_at(t0).dist2(&self.point_at(t1)),
            Piece::Ray { .. } => panic!("chord of an unbounded piece"),
        }
    }
}
