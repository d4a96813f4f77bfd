//! Formal predicates on codes: decided from the centers and radii alone,
//! exactly, without looking at the sets the codes denote.

use num_traits::{Signed, Zero};

use crate::ambient::{union_code, Ball, ChainCode, Point, Rational, SetCode};
use crate::error::Error;
use crate::index::BallGrid;
use crate::surd::{sign_surd, sqrt_upper};

/// `√radicand + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceExpr {
    pub radicand: Rational,
    pub offset: Rational,
}

impl DistanceExpr {
    pub fn new(radicand: Rational, offset: Rational) -> Self {
        debug_assert!(!radicand.is_negative());
        DistanceExpr { radicand, offset }
    }

    /// `d(p, q) + offset`.
    pub fn between(p: &Point, q: &Point, offset: Rational) -> Self {
        DistanceExpr::new(p.dist2(q), offset)
    }

    /// `√r + c < t`.
    pub fn lt(&self, t: &Rational) -> bool {
        // t - c - √r > 0
        sign_surd(&(t - &self.offset), &Rational::from_integer((-1).into()), &self.radicand) > 0
    }

    /// `√r + c > t`.
    pub fn gt(&self, t: &Rational) -> bool {
        sign_surd(&(&self.offset - t), &Rational::from_integer(1.into()), &self.radicand) > 0
    }
}

fn max_radius(balls: &[Ball]) -> Rational {
    balls.iter().map(|b| &b.radius).max().cloned().unwrap_or_else(Rational::zero)
}

/// `fdiam < t` for the sequence of balls.
pub fn fdiam_lt_balls(balls: &[Ball], t: &Rational) -> bool {
    if balls.is_empty() {
        return t.is_positive();
    }
    // every pairwise center distance must be < t - 2ρ_max
    let s = t - max_radius(balls) * Rational::from_integer(2.into());
    if !s.is_positive() {
        return false;
    }
    let s2 = &s * &s;
    if let Some(diag2) = bbox_diag2(balls) {
        if diag2 < s2 {
            return true;
        }
    }
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            if a.center.dist2(&b.center) >= s2 {
                return false;
            }
        }
    }
    true
}

fn bbox_diag2(balls: &[Ball]) -> Option<Rational> {
    let dim = balls.first()?.center.dim();
    let mut acc = Rational::zero();
    for k in 0..dim {
        let lo = balls.iter().map(|b| &b.center.coords()[k]).min()?;
        let hi = balls.iter().map(|b| &b.center.coords()[k]).max()?;
        let d = hi - lo;
        acc += &d * &d;
    }
    Some(acc)
}

pub fn fdiam_lt(j: &SetCode, t: &Rational, dim: usize) -> bool {
    fdiam_lt_balls(&j.balls(dim), t)
}

/// A rational upper bound on `fdiam`, at most about `2^-bits` above it.
pub fn fdiam_upper(balls: &[Ball], bits: u32) -> Rational {
    let mut dmax = Rational::zero();
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            let d2 = a.center.dist2(&b.center);
            if d2 > &dmax * &dmax {
                dmax = sqrt_upper(&d2, bits);
            }
        }
    }
    dmax + max_radius(balls) * Rational::from_integer(2.into())
}

pub fn balls_disjoint(a: &Ball, b: &Ball) -> bool {
    let s = &a.radius + &b.radius;
    a.center.dist2(&b.center) > &s * &s
}

/// Every ball of `u` is formally disjoint from every ball of `v`.
pub fn formally_disjoint(u: &[Ball], v: &[Ball]) -> bool {
    if u.is_empty() || v.is_empty() {
        return true;
    }
    if separated_on_some_axis(u, v) {
        return true;
    }
    if u.len() * v.len() > 4096 {
        return disjoint_via_grid(u, v);
    }
    u.iter().all(|a| v.iter().all(|b| balls_disjoint(a, b)))
}

fn separated_on_some_axis(u: &[Ball], v: &[Ball]) -> bool {
    let dim = u[0].center.dim();
    (0..dim).any(|k| {
        let lo = |s: &[Ball]| s.iter().map(|b| &b.center.coords()[k] - &b.radius).min().unwrap();
        let hi = |s: &[Ball]| s.iter().map(|b| &b.center.coords()[k] + &b.radius).max().unwrap();
        hi(u) < lo(v) || hi(v) < lo(u)
    })
}

fn disjoint_via_grid(u: &[Ball], v: &[Ball]) -> bool {
    let all: Vec<Ball> = u.iter().chain(v).cloned().collect();
    let grid = BallGrid::new(&all, 2);
    let n = u.len();
    grid.candidate_pairs()
        .into_iter()
        .filter(|&(i, j)| (i < n) != (j < n))
        .all(|(i, j)| balls_disjoint(&all[i], &all[j]))
}

pub fn formally_disjoint_codes(j1: &SetCode, j2: &SetCode, dim: usize) -> bool {
    formally_disjoint(&j1.balls(dim), &j2.balls(dim))
}

/// `J_j` is formally disjoint from every link of `H_ℓ^{p≤q}`.
pub fn disjoint_from_segment(j: &SetCode, l: &ChainCode, p: usize, q: usize, dim: usize) -> Result<bool, Error> {
    let seg = union_code(l, p, q)?;
    Ok(formally_disjoint_codes(j, &seg, dim))
}

/// `d(λ, a) + ρ < m` for every ball.
pub fn formally_contained_balls(balls: &[Ball], a: &Point, m: &Rational) -> Result<bool, Error> {
    if !m.is_positive() {
        return Err(Error::NonPositiveRadius);
    }
    Ok(balls.iter().all(|b| {
        let s = m - &b.radius;
        s.is_positive() && b.center.dist2(a) < &s * &s
    }))
}

pub fn formally_contained(j: &SetCode, a: &Point, m: &Rational) -> Result<bool, Error> {
    formally_contained_balls(&j.balls(a.dim()), a, m)
}

/// `J ⊆_F I` for a single target ball.
pub fn contained_in_ball(balls: &[Ball], target: &Ball) -> bool {
    formally_contained_balls(balls, &target.center, &target.radius).unwrap_or(false)
}

/// A chain code together with its decoded links.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalChain {
    links: Vec<Vec<Ball>>,
}

impl FormalChain {
    pub fn from_links(links: Vec<Vec<Ball>>) -> Result<Self, Error> {
        if links.is_empty() || links.iter().any(|l| l.is_empty()) {
            return Err(Error::EmptyCode);
        }
        Ok(FormalChain { links })
    }

    pub fn decode(code: &ChainCode, dim: usize) -> Self {
        FormalChain {
            links: code.links().iter().map(|j| j.balls(dim)).collect(),
        }
    }

    pub fn code(&self) -> ChainCode {
        let links = self
            .links
            .iter()
            .map(|l| SetCode::from_balls(l).expect("links are nonempty"))
            .collect();
        ChainCode::new(links).expect("chains are nonempty")
    }

    pub fn links(&self) -> &[Vec<Ball>] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn last(&self) -> usize {
        self.links.len() - 1
    }

    /// Balls of `H^{p≤q}` (clamped to the chain).
    pub fn segment(&self, p: usize, q: usize) -> Vec<Ball> {
        let q = q.min(self.last());
        if p > q {
            return Vec::new();
        }
        self.links[p..=q].iter().flatten().cloned().collect()
    }

    pub fn all_balls(&self) -> Vec<Ball> {
        self.links.iter().flatten().cloned().collect()
    }

    pub fn is_formal_chain(&self) -> bool {
        is_formal_chain_links(&self.links)
    }

    /// `fmesh < t`.
    pub fn mesh_lt(&self, t: &Rational) -> bool {
        self.links.iter().all(|l| fdiam_lt_balls(l, t))
    }

    pub fn mesh_upper(&self, bits: u32) -> Rational {
        self.links
            .iter()
            .map(|l| fdiam_upper(l, bits))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Non-adjacent links pairwise formally disjoint.
pub fn is_formal_chain_links(links: &[Vec<Ball>]) -> bool {
    if links.len() < 3 {
        return true;
    }
    let mut balls = Vec::new();
    let mut owner = Vec::new();
    for (k, l) in links.iter().enumerate() {
        for b in l {
            balls.push(b.clone());
            owner.push(k);
        }
    }
    let grid = BallGrid::new(&balls, 2);
    grid.candidate_pairs().into_iter().all(|(i, j)| {
        owner[i].abs_diff(owner[j]) <= 1 || balls_disjoint(&balls[i], &balls[j])
    })
}

pub fn is_formal_chain(l: &ChainCode, dim: usize) -> bool {
    FormalChain::decode(l, dim).is_formal_chain()
}

pub fn fmesh_lt(l: &ChainCode, t: &Rational, dim: usize) -> bool {
    FormalChain::decode(l, dim).mesh_lt(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{int, rat};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn ball(x: i64, y: i64, r: Rational) -> Ball {
        Ball::new(Point::xy(int(x), int(y)), r)
    }

    #[test]
    fn fdiam_examples() {
        let one = vec![ball(0, 0, int(1))];
        assert!(fdiam_lt_balls(&one, &int(3)));
        assert!(!fdiam_lt_balls(&one, &int(2)));
        let two = vec![ball(0, 0, int(1)), ball(3, 0, int(2))];
        assert!(!fdiam_lt_balls(&two, &int(7)));
        assert!(fdiam_lt_balls(&two, &int(8)));
        assert_eq!(fdiam_upper(&two, 10), int(7));
    }

    #[test]
    fn disjointness_examples() {
        assert!(balls_disjoint(&ball(0, 0, int(1)), &ball(3, 0, int(1))));
        assert!(!balls_disjoint(&ball(0, 0, int(1)), &ball(2, 0, int(1))));
        assert!(balls_disjoint(&ball(0, 0, rat(7, 10)), &ball(1, 1, rat(7, 10))));
    }

    #[test]
    fn containment_examples() {
        let o = Point::origin(2);
        assert!(formally_contained_balls(&[ball(0, 0, int(1))], &o, &int(2)).unwrap());
        assert!(!formally_contained_balls(&[ball(1, 0, int(1))], &o, &int(2)).unwrap());
        assert!(formally_contained_balls(&[ball(1, 1, rat(1, 2))], &o, &int(2)).unwrap());
        assert!(matches!(
            formally_contained_balls(&[ball(0, 0, int(1))], &o, &int(0)),
            Err(Error::NonPositiveRadius)
        ));
    }

    #[test]
    fn chain_examples() {
        let links = |r: Rational| (0..3).map(|i| vec![ball(i, 0, r.clone())]).collect::<Vec<_>>();
        assert!(is_formal_chain_links(&links(int(1))[..1]));
        assert!(is_formal_chain_links(&links(rat(2, 5))));
        assert!(!is_formal_chain_links(&links(rat(6, 5))));
    }

    #[test]
    fn code_level_wrappers_agree() {
        let j = SetCode::from_balls(&[ball(0, 0, int(1)), ball(3, 0, int(2))]).unwrap();
        assert!(fdiam_lt(&j, &int(8), 2));
        let links: Vec<SetCode> = (0..3)
            .map(|i| SetCode::from_balls(&[ball(i, 0, rat(2, 5))]).unwrap())
            .collect();
        let l = ChainCode::new(links).unwrap();
        assert!(is_formal_chain(&l, 2));
        assert!(fmesh_lt(&l, &int(1), 2));
        assert!(!fmesh_lt(&l, &rat(4, 5), 2));
        let far = SetCode::from_balls(&[ball(10, 0, int(1))]).unwrap();
        assert!(disjoint_from_segment(&far, &l, 0, 2, 2).unwrap());
        assert!(disjoint_from_segment(&far, &l, 2, 1, 2).is_err());
    }

    fn arb_ball() -> impl Strategy<Value = Ball> {
        (-40i64..40, 1i64..8, -40i64..40, 1i64..8, 1i64..20, 1i64..10)
            .prop_map(|(x, xd, y, yd, r, rd)| Ball::new(Point::xy(rat(x, xd), rat(y, yd)), rat(r, rd)))
    }

    fn naive_chain(links: &[Vec<Ball>]) -> bool {
        for i in 0..links.len() {
            for j in i + 2..links.len() {
                for a in &links[i] {
                    for b in &links[j] {
                        if !balls_disjoint(a, b) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn grid_chain_check_matches_brute_force(links in prop::collection::vec(prop::collection::vec(arb_ball(), 1..4), 1..12)) {
            prop_assert_eq!(is_formal_chain_links(&links), naive_chain(&links));
        }

        #[test]
        fn set_disjointness_matches_brute_force(u in prop::collection::vec(arb_ball(), 1..80),
                                                v in prop::collection::vec(arb_ball(), 1..80)) {
            let naive = u.iter().all(|a| v.iter().all(|b| balls_disjoint(a, b)));
            prop_assert_eq!(formally_disjoint(&u, &v), naive);
            prop_assert_eq!(disjoint_via_grid(&u, &v), naive);
        }

        #[test]
        fn distance_expr_matches_float(r in 0i64..10000, c in -100i64..100, t in -200i64..200) {
            let e = DistanceExpr::new(int(r), int(c));
            let v = (r as f64).sqrt() + c as f64;
            let t = int(t);
            let tf = t.to_f64().unwrap();
            if (v - tf).abs() > 1e-9 {
                prop_assert_eq!(e.lt(&t), v < tf);
                prop_assert_eq!(e.gt(&t), v > tf);
            }
        }
    }
}
