//! Formal chains along parameterized arcs with a known Lipschitz bound.

use num_traits::{One, Signed, Zero};

use crate::ambient::{int, Ball, Point, Rational};
use crate::error::Error;
use crate::formal::FormalChain;
use crate::geometry::pieces::Piece;
use crate::surd::sqrt_lower;

/// An exact map `[0, r] → ℝ²` with `|f(s) - f(t)| ≤ L·|s - t|`.
pub trait Parameterization {
    fn end(&self) -> Rational;
    fn eval(&self, t: &Rational) -> Point;
    fn lipschitz(&self) -> Rational;
}

/// Piecewise-linear path with vertex `i` at time `i`.
#[derive(Clone, Debug)]
pub struct PolylinePath {
    vertices: Vec<Point>,
}

impl PolylinePath {
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::Fixture("a path needs at least two vertices".into()));
        }
        Ok(PolylinePath { vertices })
    }
}

impl Parameterization for PolylinePath {
    fn end(&self) -> Rational {
        int(self.vertices.len() as i64 - 1)
    }

    fn eval(&self, t: &Rational) -> Point {
        let last = self.vertices.len() - 1;
        let i = t.floor().to_integer();
        let i: usize = if i.is_negative() { 0 } else { i.try_into().unwrap_or(last).min(last - 1) };
        let s = t - int(i as i64);
        let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
        a.add(&b.sub(a).scale(&s))
    }

    fn lipschitz(&self) -> Rational {
        // the ℓ¹ length of a step bounds its Euclidean length
        self.vertices
            .windows(2)
            .map(|w| w[1].sub(&w[0]).coords().iter().map(|c| c.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
            .max(Rational::one())
    }
}

/// A circular arc in the chart `t ↦ c + R·((1-t²)/(1+t²), 2t/(1+t²))`,
/// reparameterized to `[0, t1 - t0]`. The speed is `2R/(1+t²) ≤ 2R`.
#[derive(Clone, Debug)]
pub struct CircleChart {
    piece: Piece,
    t0: Rational,
    t1: Rational,
    radius: Rational,
}

impl CircleChart {
    pub fn new(center: Point, radius: Rational, mirror: bool, t0: Rational, t1: Rational) -> Self {
        CircleChart {
            piece: Piece::Arc {
                center,
                radius: radius.clone(),
                mirror,
                t0: t0.clone(),
                t1: t1.clone(),
            },
            t0,
            t1,
            radius,
        }
    }

    /// The quarter of the unit circle from `(1, 0)` to `(0, 1)`.
    pub fn quarter_unit() -> Self {
        CircleChart::new(Point::origin(2), int(1), false, int(0), int(1))
    }

    pub fn piece(&self) -> &Piece {
        &self.piece
    }
}

impl Parameterization for CircleChart {
    fn end(&self) -> Rational {
        &self.t1 - &self.t0
    }

    fn eval(&self, t: &Rational) -> Point {
        self.piece.point_at(&(&self.t0 + t))
    }

    fn lipschitz(&self) -> Rational {
        &self.radius * int(2)
    }
}

const MAX_REFINE: u32 = 24;

/// Parameter samples `lo, lo + δ, …, hi` (with `hi` always included).
fn samples(lo: &Rational, hi: &Rational, delta: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut t = lo.clone();
    while &t < hi {
        out.push(t.clone());
        t += delta;
    }
    out.push(hi.clone());
    out
}

/// A formal chain whose links `j_0, …, j_{n-1}` satisfy, for the pieces
/// `A_i = f([i·r/n, (i+1)·r/n])`: every ball of `j_i` meets `A_i`, has radius
/// below `ε`, and `A_i ⊆ J_{j_i}`; non-adjacent links are formally disjoint;
/// `fdiam(j_i) < ε`.
///
/// `n` is the least integer with `L·r/n < ε/2`. With `d` a certified lower
/// bound for the distance between non-adjacent pieces, links are balls of
/// radius `λ/2`, `λ = min(ε/8, d/4)`, centered at samples spaced so that
/// `L·δ < λ`.
pub fn chain_for_arc(f: &dyn Parameterization, eps: &Rational) -> Result<FormalChain, Error> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let r = f.end();
    let lip = f.lipschitz();
    let n: num_bigint::BigInt = ((&lip * &r * int(2)) / eps).floor().to_integer() + 1;
    let n: usize = n.try_into().map_err(|_| Error::UndecidedAtCap { cap: u64::MAX })?;
    let h = &r / int(n as i64);
    let bounds: Vec<(Rational, Rational)> =
        (0..n).map(|i| (&h * int(i as i64), &h * int(i as i64 + 1))).collect();

    let mut lambda = eps / int(8);
    if n > 2 {
        let mut found = None;
        for level in 0..MAX_REFINE {
            let delta = &h / Rational::from_integer(num_bigint::BigInt::one() << level as usize);
            let pts: Vec<Vec<Point>> =
                bounds.iter().map(|(a, b)| samples(a, b, &delta).iter().map(|t| f.eval(t)).collect()).collect();
            let mut dmin2: Option<Rational> = None;
            for p in 0..n {
                for q in p + 2..n {
                    for x in &pts[p] {
                        for y in &pts[q] {
                            let d2 = x.dist2(y);
                            if dmin2.as_ref().is_none_or(|m| &d2 < m) {
                                dmin2 = Some(d2);
                            }
                        }
                    }
                }
            }
            // every point of a piece is within L·δ/2 of a sample
            let lower = sqrt_lower(&dmin2.unwrap_or_else(Rational::zero), 32) - &lip * &delta;
            if lower.is_positive() {
                found = Some(lower);
                break;
            }
        }
        let d = found.ok_or(Error::UndecidedAtCap { cap: MAX_REFINE as u64 })?;
        lambda = lambda.min(d / int(4));
    }

    let rho = &lambda / int(2);
    // spacing with L·δ' < λ, so every point is within λ/2 of a sample
    let mut delta = h.clone();
    while &lip * &delta >= lambda {
        delta /= int(2);
    }
    let links = bounds
        .iter()
        .map(|(a, b)| samples(a, b, &delta).iter().map(|t| Ball::new(f.eval(t), rho.clone())).collect())
        .collect();
    FormalChain::from_links(links)
}
