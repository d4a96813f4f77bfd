//! Fixture files: exact descriptions of test sets, stored as JSON with every
//! number written as a `"p/q"` string.

use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ambient::{int, pow2_neg, serde_rational, Ball, BallIndex, Point, Rational};
use crate::error::Error;
use crate::geometry::disks::disks_cover_region;
use crate::geometry::pieces::Piece;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Segments through the vertices, then a ray through the last two.
    PolylineRay,
    /// A ray backwards from the first vertex, the segments, and a ray
    /// forwards from the last vertex.
    PolylineLine,
    Circle,
    /// Samples of a spiral followed by a tangent ray; `tolerance` bounds the
    /// distance between the sampled polyline and the true spiral.
    SpiralSegment,
    /// Segments through the vertices only.
    PolylineArc,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => serde_rational::serialize(q, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| crate::ambient::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub radius: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub tolerance: Option<Rational>,
}

/// Data fixing the orientation and the separation scale of a line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineAnchorHint {
    pub a: Point,
    #[serde(rename = "A")]
    pub ball_a: BallIndex,
    #[serde(rename = "B")]
    pub ball_b: BallIndex,
    #[serde(rename = "C")]
    pub ball_c: BallIndex,
    pub k0: u32,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Published {
    /// Fuel within which every query with slack `1/16` answers Yes.
    pub fuel: u64,
    /// Enumeration rounds within which the witness list is fully emitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enum_rounds: Option<u64>,
    /// Witness list file, relative to the fixture file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_list: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    #[serde(flatten)]
    pub curve: Curve,
    /// Closed disks making up the noise set `F`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub noise: Vec<Ball>,
    /// Further curves belonging to the set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<Curve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<LineAnchorHint>,
    /// Boundary points of the set, as a 1-manifold with boundary.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<Point>,
    pub published: Published,
}

fn circle_pieces(center: &Point, radius: &Rational) -> Vec<Piece> {
    let mut out = Vec::new();
    for mirror in [false, true] {
        for (t0, t1) in [(-1, 0), (0, 1)] {
            out.push(Piece::Arc {
                center: center.clone(),
                radius: radius.clone(),
                mirror,
                t0: int(t0),
                t1: int(t1),
            });
        }
    }
    out
}

fn segments(v: &[Point]) -> impl Iterator<Item = Piece> + '_ {
    v.windows(2).map(|w| Piece::Segment {
        a: w[0].clone(),
        b: w[1].clone(),
    })
}

impl Curve {
    fn check(&self) -> Result<(), Error> {
        let bad = |m: &str| Err(Error::Fixture(m.to_string()));
        match self.kind {
            Kind::Circle => match (&self.center, &self.radius) {
                (Some(c), Some(r)) if c.dim() == 2 && r.is_positive() => Ok(()),
                _ => bad("circle needs a planar center and a positive radius"),
            },
            _ => {
                if self.vertices.len() < 2 {
                    return bad("polyline needs at least two vertices");
                }
                if self.vertices.iter().any(|p| p.dim() != 2) {
                    return bad("vertices must be planar");
                }
                if self.vertices.windows(2).any(|w| w[0] == w[1]) {
                    return bad("consecutive vertices must differ");
                }
                Ok(())
            }
        }
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let v = &self.vertices;
        match self.kind {
            Kind::Circle => circle_pieces(self.center.as_ref().unwrap(), self.radius.as_ref().unwrap()),
            Kind::PolylineArc => segments(v).collect(),
            Kind::PolylineRay | Kind::SpiralSegment => {
                let n = v.len();
                let mut out: Vec<Piece> = segments(&v[..n - 1]).collect();
                out.push(Piece::Ray {
                    a: v[n - 2].clone(),
                    dir: v[n - 1].sub(&v[n - 2]),
                });
                out
            }
            Kind::PolylineLine => {
                let n = v.len();
                let mut out = vec![Piece::Ray {
                    a: v[0].clone(),
                    dir: v[0].sub(&v[1]),
                }];
                out.extend(segments(v));
                out.push(Piece::Ray {
                    a: v[n - 1].clone(),
                    dir: v[n - 1].sub(&v[n - 2]),
                });
                out
            }
        }
    }

    /// `f(t)` for polyline kinds: vertex `i` sits at `t = i`; lines extend
    /// linearly for `t < 0` and rays for `t` past the last vertex.
    pub fn param(&self, t: &Rational) -> Point {
        let v = &self.vertices;
        let n = v.len();
        if t.is_negative() {
            return v[0].add(&v[1].sub(&v[0]).scale(t));
        }
        let i = t.floor().to_integer();
        let i: usize = i.try_into().unwrap_or(usize::MAX).min(n - 2);
        let s = t - Rational::from_integer(i.into());
        v[i].add(&v[i + 1].sub(&v[i]).scale(&s))
    }
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let fx: Fixture = serde_json::from_str(text)?;
        fx.validate()?;
        Ok(fx)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixtures serialize") + "\n"
    }

    fn validate(&self) -> Result<(), Error> {
        self.curve.check()?;
        for c in &self.extra {
            c.check()?;
        }
        for f in &self.noise {
            if !f.radius.is_positive() {
                return Err(Error::NonPositiveRadius);
            }
            if self.curve_pieces().iter().any(|p| p.meets(f, true)) {
                return Err(Error::Fixture(format!("noise disk {f} meets the curve")));
            }
        }
        if let Some(h) = &self.anchors {
            validate_hint(self, h)?;
        }
        Ok(())
    }

    /// Pieces of the curve part (main curve and extras).
    pub fn curve_pieces(&self) -> Vec<Piece> {
        let mut out = self.curve.pieces();
        for c in &self.extra {
            out.extend(c.pieces());
        }
        out
    }

    pub fn is_ray(&self) -> bool {
        matches!(self.curve.kind, Kind::PolylineRay | Kind::SpiralSegment)
    }

    pub fn is_line(&self) -> bool {
        self.curve.kind == Kind::PolylineLine
    }

    /// `f(0)` of a ray fixture.
    pub fn endpoint(&self) -> Option<Point> {
        self.is_ray().then(|| self.curve.vertices[0].clone())
    }

    /// Exact test whether the set meets the open (or closed) ball.
    pub fn exact_intersects(&self, ball: &Ball, closed: bool) -> bool {
        if self.curve_pieces().iter().any(|p| p.meets(ball, closed)) {
            return true;
        }
        self.noise.iter().any(|f| {
            let s = &f.radius + &ball.radius;
            let d2 = f.center.dist2(&ball.center);
            if closed {
                d2 <= &s * &s
            } else {
                d2 < &s * &s
            }
        })
    }

    /// Verdict against the true curve that a spiral fixture approximates:
    /// `Ok(true)` if the ball surely meets it, `Ok(false)` if it surely
    /// misses it, and an error if the sample tolerance is too coarse to tell.
    pub fn enclosure_intersects(&self, ball: &Ball) -> Result<bool, Error> {
        let Some(tol) = self.curve.tolerance.clone().filter(|_| self.curve.kind == Kind::SpiralSegment) else {
            return Ok(self.exact_intersects(ball, false));
        };
        let inner = &ball.radius - &tol;
        if inner.is_positive() && self.exact_intersects(&Ball::new(ball.center.clone(), inner), false) {
            return Ok(true);
        }
        let outer = Ball::new(ball.center.clone(), &ball.radius + &tol);
        if !self.exact_intersects(&outer, true) {
            return Ok(false);
        }
        Err(Error::UndecidedAtCap { cap: 0 })
    }

    /// Exact test whether the curve part (without the noise) meets the ball.
    pub fn curve_intersects(&self, ball: &Ball, closed: bool) -> bool {
        self.curve_pieces().iter().any(|p| p.meets(ball, closed))
    }

    /// `C ∩ B̂(a, r) ⊆ ⋃ balls` for the curve part `C`, decided exactly.
    pub fn curve_cover_check_radius(&self, a: &Point, r: &Rational, balls: &[Ball]) -> bool {
        let region = Ball::new(a.clone(), r.clone());
        // only the balls that can reach the region matter
        let near: Vec<Ball> = balls
            .iter()
            .filter(|b| !crate::formal::balls_disjoint(b, &region))
            .cloned()
            .collect();
        self.curve_pieces().iter().all(|p| p.covered_within(a, r, &near))
    }

    /// `C ∩ B̂(a, n) ⊆ ⋃ balls` for the curve part; `n = 0` reads `B̂(a, 0)`
    /// as `{a}`.
    pub fn curve_cover_check(&self, a: &Point, n: u64, balls: &[Ball]) -> bool {
        if n == 0 {
            let tiny = Ball { center: a.clone(), radius: Rational::zero() };
            return !self.curve_intersects(&tiny, true) || balls.iter().any(|b| b.contains(a));
        }
        self.curve_cover_check_radius(a, &int(n as i64), balls)
    }

    /// `S ∩ B̂(a, r) ⊆ ⋃ balls`, decided exactly.
    pub fn exact_cover_check_radius(&self, a: &Point, r: &Rational, balls: &[Ball]) -> bool {
        let region = Ball::new(a.clone(), r.clone());
        self.curve_cover_check_radius(a, r, balls)
            && self.noise.iter().all(|f| {
                let s = &f.radius + r;
                f.center.dist2(a) > &s * &s || disks_cover_region(&[f.clone(), region.clone()], balls)
            })
    }

    pub fn exact_cover_check(&self, a: &Point, n: u64, balls: &[Ball]) -> bool {
        if n == 0 {
            return !self.point_in_set(a) || balls.iter().any(|b| b.contains(a));
        }
        self.exact_cover_check_radius(a, &int(n as i64), balls)
    }

    /// Exact membership of a rational point.
    pub fn point_in_set(&self, p: &Point) -> bool {
        let tiny = Ball {
            center: p.clone(),
            radius: Rational::zero(),
        };
        self.curve_pieces().iter().any(|pc| pc.meets(&tiny, true))
            || self.noise.iter().any(|f| f.closed_contains(p))
    }
}

/// Exact check of the hint conditions on a polyline line.
pub fn validate_hint(fx: &Fixture, h: &LineAnchorHint) -> Result<(), Error> {
    let bad = |m: &str| Err(Error::Fixture(format!("invalid line hint: {m}")));
    if !fx.is_line() {
        return bad("hints apply to polyline-line fixtures");
    }
    if !h.delta.is_positive() {
        return bad("delta must be positive");
    }
    let c = &fx.curve;
    let (ia, ib, ic) = (h.ball_a.decode(2), h.ball_b.decode(2), h.ball_c.decode(2));
    let scale = pow2_neg(h.k0);
    let quarter = &scale / int(4);
    if [&ia, &ib, &ic].iter().any(|b| b.radius >= quarter) {
        return bad("anchor radii must be below 2^-k0/4");
    }
    if !ia.contains(&c.param(&-h.delta.clone())) || !ib.contains(&c.param(&h.delta)) || !ic.contains(&c.param(&Rational::zero())) {
        return bad("anchor balls must contain f(-delta), f(delta), f(0)");
    }
    // f([-δ, δ]) is a polyline through f(±δ) and the vertices in between
    let unit = Ball::new(h.a.clone(), Rational::one());
    let mut knots = vec![c.param(&-h.delta.clone()), c.param(&h.delta)];
    for (i, v) in c.vertices.iter().enumerate() {
        if Rational::from_integer(i.into()) < h.delta {
            knots.push(v.clone());
        }
    }
    if !knots.iter().all(|p| unit.contains(p)) {
        return bad("f([-delta, delta]) must lie in B(a, 1)");
    }
    let pieces = c.pieces();
    let (backward, forward) = pieces.split_at(1);
    let grow = |b: &Ball| Ball::new(b.center.clone(), &b.radius + &scale);
    if forward.iter().any(|p| p.meets(&grow(&ia), true)) {
        return bad("I_A too close to f([0, inf))");
    }
    if backward.iter().any(|p| p.meets(&grow(&ib), true)) {
        return bad("I_B too close to f((-inf, 0])");
    }
    if fx.noise.iter().any(|f| {
        let s = &f.radius + &ic.radius + &scale;
        f.center.dist2(&ic.center) <= &s * &s
    }) {
        return bad("I_C too close to the noise set");
    }
    Ok(())
}
