//! Exact covering of an intersection of closed disks by open disks.
//!
//! If `K = ⋂ D̂ᵢ` is not inside `U = ⋃ Bⱼ`, the compact set `K ∖ U` has a
//! leftmost point. That point lies on some circle and is either an extreme
//! point of that circle or an intersection of two circles, so testing these
//! finitely many candidates decides the inclusion.

use num_traits::{Signed, Zero};

use crate::ambient::{int, Ball, Point, Rational};
use crate::formal::balls_disjoint;
use crate::index::BallGrid;
use crate::surd::sign_surd;

/// `base + √e·v`.
#[derive(Clone, Debug)]
struct QPoint {
    base: Point,
    e: Rational,
    v: Point,
}

impl QPoint {
    fn rational(p: Point) -> Self {
        QPoint {
            v: Point::origin(p.dim()),
            base: p,
            e: Rational::zero(),
        }
    }

    /// Sign of `|self - c|² - r²`.
    fn ball_sign(&self, b: &Ball) -> i8 {
        let w = self.base.sub(&b.center);
        let a = w.dot(&w) + &self.e * self.v.dot(&self.v) - &b.radius * &b.radius;
        let s = w.dot(&self.v) * int(2);
        sign_surd(&a, &s, &self.e)
    }
}

fn circle_extremes(b: &Ball) -> Vec<QPoint> {
    let (x, y) = (b.center.x(), b.center.y());
    let r = &b.radius;
    vec![
        Point::xy(x - r, y.clone()),
        Point::xy(x + r, y.clone()),
        Point::xy(x.clone(), y - r),
        Point::xy(x.clone(), y + r),
    ]
    .into_iter()
    .map(QPoint::rational)
    .collect()
}

fn circle_intersections(b1: &Ball, b2: &Ball) -> Vec<QPoint> {
    let w = b2.center.sub(&b1.center);
    let d2 = w.dot(&w);
    if d2.is_zero() {
        return vec![];
    }
    let r1s = &b1.radius * &b1.radius;
    let r2s = &b2.radius * &b2.radius;
    let a = (&r1s - &r2s + &d2) / (&d2 * int(2));
    let base = b1.center.add(&w.scale(&a));
    let h2 = &r1s - &a * &a * &d2;
    if h2.is_negative() {
        return vec![];
    }
    let e = h2 / &d2;
    let perp = Point::xy(-w.y().clone(), w.x().clone());
    if e.is_zero() {
        return vec![QPoint::rational(base)];
    }
    let neg = perp.scale(&int(-1));
    vec![
        QPoint {
            base: base.clone(),
            e: e.clone(),
            v: perp,
        },
        QPoint { base, e, v: neg },
    ]
}

/// `⋂ region ⊆ ⋃ cover`, where `region` lists closed disks and `cover`
/// open disks (plane only).
pub fn disks_cover_region(region: &[Ball], cover: &[Ball]) -> bool {
    assert!(!region.is_empty(), "region needs at least one disk");
    // only cover disks meeting every region disk matter
    let cover: Vec<Ball> = cover
        .iter()
        .filter(|u| region.iter().all(|d| !balls_disjoint(u, d)))
        .cloned()
        .collect();
    let inside = |q: &QPoint| region.iter().all(|d| q.ball_sign(d) <= 0);
    let grid = BallGrid::new(&cover, 2);
    // bucketed balls have radius at most w/2, so a ball containing q has
    // its center within w of any lookup point at distance ≤ w/2 from q; the
    // rational base of q is such a point while the half-chord √e·|v| ≤ w/2
    let reach = grid.width() / int(2);
    let reach2 = &reach * &reach;
    let covered = |q: &QPoint| {
        let idx: Vec<usize> = if &q.e * q.v.dot(&q.v) <= reach2 {
            grid.near(&q.base)
        } else {
            (0..cover.len()).collect()
        };
        idx.into_iter().any(|i| q.ball_sign(&cover[i]) < 0)
    };
    let mut cands: Vec<QPoint> = Vec::new();
    for b in region.iter().chain(cover.iter()) {
        cands.extend(circle_extremes(b));
    }
    for (i, d1) in region.iter().enumerate() {
        for d2 in &region[i + 1..] {
            cands.extend(circle_intersections(d1, d2));
        }
        for u in &cover {
            cands.extend(circle_intersections(d1, u));
        }
    }
    for (i, j) in grid.candidate_pairs() {
        if !balls_disjoint(&cover[i], &cover[j]) {
            cands.extend(circle_intersections(&cover[i], &cover[j]));
        }
    }
    cands.iter().all(|q| !inside(q) || covered(q))
}
