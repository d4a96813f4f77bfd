//! Presentations backed by fixture geometry.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::ambient::{int, pow2_neg, Ball, Point, Rational};
use crate::formal::balls_disjoint;
use crate::geometry::fixture::Fixture;
use crate::geometry::pieces::Piece;
use crate::index::{containing, BallGrid};
use crate::presentations::{closed_region_in_balls, Answer, PresentedSet, SharedSet};

/// Answers `Î ∩ S ⊆ ⋃ cover` by subdividing the curve pieces meeting `Î`
/// (to depth `2·fuel`) and the noise disks meeting `Î` (to depth `fuel`).
/// A sub-piece is settled when it misses `Î` exactly or its hull lies in a
/// single cover ball.
pub struct FixturePresentation {
    fx: Arc<Fixture>,
    pieces: Vec<Piece>,
}

impl FixturePresentation {
    pub fn new(fx: Arc<Fixture>) -> Self {
        let pieces = fx.curve_pieces();
        FixturePresentation { fx, pieces }
    }

    pub fn fixture(&self) -> &Fixture {
        &self.fx
    }
}

pub fn fixture_presentation(fx: Arc<Fixture>) -> SharedSet {
    Arc::new(FixturePresentation::new(fx))
}

fn piece_covered(piece: Piece, closed: &Ball, cover: &[Ball], grid: &BallGrid, depth: u64) -> bool {
    let mut stack = vec![(piece, depth)];
    while let Some((p, d)) = stack.pop() {
        if !p.meets(closed, true) {
            continue;
        }
        let mid = p.midpoint();
        let near = containing(grid, cover, &mid);
        if near.is_empty() {
            if closed.closed_contains(&mid) {
                return false;
            }
        } else {
            let hull = p.hull();
            if near.iter().any(|&i| hull.iter().all(|q| cover[i].contains(q))) {
                continue;
            }
        }
        if d == 0 {
            return false;
        }
        let (l, r) = p.bisect();
        stack.push((r, d - 1));
        stack.push((l, d - 1));
    }
    true
}

impl PresentedSet for FixturePresentation {
    fn covers_balls(&self, closed: &Ball, cover: &[Ball], fuel: u64) -> Answer {
        let grid = BallGrid::new(cover, 1);
        for piece in &self.pieces {
            if !piece.meets(closed, true) {
                continue;
            }
            let p = piece.clip_to_box(&closed.center, &closed.radius);
            if cover.is_empty() || !piece_covered(p, closed, cover, &grid, 2 * fuel) {
                return Answer::Unknown;
            }
        }
        for f in &self.fx.noise {
            let s = &f.radius + &closed.radius;
            if f.center.dist2(&closed.center) > &s * &s {
                continue;
            }
            let region = [f.clone(), closed.clone()];
            if !closed_region_in_balls(&region, cover, fuel).is_yes() {
                return Answer::Unknown;
            }
        }
        Answer::Yes
    }
}

/// A finite set of points, answered exactly.
pub struct PointSetPresentation(pub Vec<Point>);

impl PresentedSet for PointSetPresentation {
    fn covers_balls(&self, closed: &Ball, cover: &[Ball], _fuel: u64) -> Answer {
        Answer::from_bool(
            self.0
                .iter()
                .filter(|p| closed.closed_contains(p))
                .all(|p| cover.iter().any(|b| b.contains(p))),
        )
    }
}

/// Rational bounding box `(lo, hi)` of the compact part of a fixture.
pub fn bounded_bbox(fx: &Fixture) -> Option<(Point, Point)> {
    let mut pts = Vec::new();
    for p in fx.curve_pieces() {
        match &p {
            Piece::Segment { a, b } => {
                pts.push(a.clone());
                pts.push(b.clone());
            }
            Piece::Arc { center, radius, .. } => {
                pts.push(Point::xy(center.x() - radius, center.y() - radius));
                pts.push(Point::xy(center.x() + radius, center.y() + radius));
            }
            Piece::Ray { .. } => return None,
        }
    }
    for f in &fx.noise {
        pts.push(Point::xy(f.center.x() - &f.radius, f.center.y() - &f.radius));
        pts.push(Point::xy(f.center.x() + &f.radius, f.center.y() + &f.radius));
    }
    let lo = Point::xy(
        pts.iter().map(|p| p.x().clone()).min()?,
        pts.iter().map(|p| p.y().clone()).min()?,
    );
    let hi = Point::xy(
        pts.iter().map(|p| p.x().clone()).max()?,
        pts.iter().map(|p| p.y().clone()).max()?,
    );
    Some((lo, hi))
}

/// Balls `B(c, 2^-k)` with `c ∈ 2^-k ℤ²` meeting a compact fixture. They
/// cover the set, since every point is within `2^-k/√2` of a grid point.
pub fn grid_cover(fx: &Fixture, k: u32) -> Option<Vec<Ball>> {
    let (lo, hi) = bounded_bbox(fx)?;
    let h = pow2_neg(k);
    let scale = Rational::from_integer(num_bigint::BigInt::from(1) << k as usize);
    let lo_i = |v: &Rational| -> num_bigint::BigInt { (v * &scale).floor().to_integer() - 1 };
    let hi_i = |v: &Rational| -> num_bigint::BigInt { (v * &scale).ceil().to_integer() + 1 };
    let mut out = Vec::new();
    let mut i = lo_i(lo.x());
    let ix_hi = hi_i(hi.x());
    let iy_lo = lo_i(lo.y());
    let iy_hi = hi_i(hi.y());
    while i <= ix_hi {
        let mut j = iy_lo.clone();
        while j <= iy_hi {
            let c = Point::xy(Rational::from_integer(i.clone()) * &h, Rational::from_integer(j.clone()) * &h);
            let b = Ball::new(c, h.clone());
            if fx.exact_intersects(&b, false) {
                out.push(b);
            }
            j += 1;
        }
        i += 1;
    }
    Some(out)
}

/// A ball formally disjoint from everything within `reach` of `b`'s center.
pub fn far_from(b: &Ball, reach: &Rational) -> Ball {
    let shift = (reach + &b.radius) * int(2) + int(1);
    let c = Point::xy(b.center.x() + shift, b.center.y().clone());
    let out = Ball::new(c, int(1));
    debug_assert!(balls_disjoint(&out, b) && !reach.is_negative() && !out.radius.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::rat;
    use crate::presentations::{covers, intersect_empty_ball};
    use crate::SetCode;

    fn fx(text: &str) -> Arc<Fixture> {
        Arc::new(Fixture::from_json(text).unwrap())
    }

    fn axis_ray() -> Arc<Fixture> {
        fx(r#"{"id":"r","kind":"polyline-ray","vertices":[["0/1","0/1"],["1/1","0/1"]],"published":{"fuel":8}}"#)
    }

    fn ball(x: Rational, y: Rational, r: Rational) -> Ball {
        Ball::new(Point::xy(x, y), r)
    }

    #[test]
    fn ray_queries() {
        let s = fixture_presentation(axis_ray());
        let far = ball(int(10), int(10), int(1));
        assert!(intersect_empty_ball(s.as_ref(), &far, 0).is_yes());
        let i = ball(int(1), int(0), int(1)).index();
        let j = SetCode::from_balls(&[ball(int(1), int(0), int(2))]).unwrap();
        assert!((0..6).any(|f| covers(s.as_ref(), &i, &j, f).is_yes()));
        let wrong = SetCode::from_balls(&[ball(int(5), int(5), int(1))]).unwrap();
        assert!((0..8).all(|f| !covers(s.as_ref(), &i, &wrong, f).is_yes()));
        let hit = ball(int(1), int(0), int(1));
        assert!((0..8).all(|f| !intersect_empty_ball(s.as_ref(), &hit, f).is_yes()));
        assert!((0..8).any(|f| intersect_empty_ball(s.as_ref(), &ball(int(0), int(-10), int(1)), f).is_yes()));
    }

    #[test]
    fn noise_is_part_of_the_set() {
        let s = fixture_presentation(fx(
            r#"{"id":"r","kind":"polyline-ray","vertices":[["0/1","0/1"],["1/1","0/1"]],
            "noise":[{"center":["0/1","5/1"],"radius":"1/1"}],"published":{"fuel":8}}"#,
        ));
        let inside_f = ball(int(0), int(5), rat(1, 2));
        assert!((0..8).all(|f| !intersect_empty_ball(s.as_ref(), &inside_f, f).is_yes()));
        let cover = [ball(int(0), int(5), rat(3, 2))];
        assert!((0..8).any(|f| s.covers_balls(&inside_f, &cover, f).is_yes()));
    }

    #[test]
    fn circle_queries() {
        let s = fixture_presentation(fx(
            r#"{"id":"c","kind":"circle","center":["0/1","0/1"],"radius":"1/1","published":{"fuel":8}}"#,
        ));
        let i = ball(int(1), int(0), rat(1, 4));
        let j = [ball(int(1), int(0), rat(1, 2))];
        assert!((0..8).any(|f| s.covers_balls(&i, &j, f).is_yes()));
        assert!(intersect_empty_ball(s.as_ref(), &ball(int(0), int(0), rat(1, 2)), 0).is_yes());
    }

    #[test]
    fn grid_cover_covers_circle() {
        let f = fx(r#"{"id":"c","kind":"circle","center":["0/1","0/1"],"radius":"1/1","published":{"fuel":8}}"#);
        let cov = grid_cover(&f, 2).unwrap();
        assert!(f.exact_cover_check(&Point::origin(2), 2, &cov));
        assert!(cov.iter().all(|b| f.exact_intersects(b, false)));
    }

    #[test]
    fn point_sets() {
        let s = PointSetPresentation(vec![Point::origin(2)]);
        assert!(s.covers_balls(&ball(int(0), int(0), int(1)), &[ball(int(0), int(0), rat(1, 8))], 0).is_yes());
        assert!(!s.covers_balls(&ball(int(0), int(0), int(1)), &[ball(int(1), int(0), rat(1, 8))], 9).is_yes());
    }
}
