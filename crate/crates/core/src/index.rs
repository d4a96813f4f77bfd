//! Uniform bucket grid over ball centers, keyed on the first two coordinates.
//!
//! With bucket width `w ≥ 2·ρ_max`, two balls whose buckets are not
//! Chebyshev neighbours are at center distance `> w`, hence formally
//! disjoint. With `w ≥ ρ_max`, every ball containing a point sits in one of
//! the nine buckets around that point.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::ambient::{Ball, Point, Rational};

type Key = (BigInt, BigInt);

pub struct BallGrid {
    width: Rational,
    buckets: HashMap<Key, Vec<usize>>,
    /// Balls too large for the bucket width; every query sees them.
    large: Vec<usize>,
}

fn floor_div(x: &Rational, w: &Rational) -> BigInt {
    let q = x / w;
    q.numer().div_floor(q.denom())
}

fn coord(p: &Point, i: usize) -> Rational {
    p.coords().get(i).cloned().unwrap_or_else(Rational::zero)
}

impl BallGrid {
    /// Builds a grid with bucket width `factor · ρ_ref`, where `ρ_ref` is
    /// the 90th percentile radius. Larger balls are kept aside.
    pub fn new(balls: &[Ball], factor: i64) -> Self {
        let mut radii: Vec<&Rational> = balls.iter().map(|b| &b.radius).collect();
        let rref = if radii.is_empty() {
            Rational::from_integer(1.into())
        } else {
            let at = (radii.len() - 1) * 9 / 10;
            radii.select_nth_unstable(at).1.clone().clone()
        };
        let width = &rref * Rational::from_integer(factor.into());
        let mut buckets: HashMap<Key, Vec<usize>> = HashMap::new();
        let mut large = Vec::new();
        for (i, b) in balls.iter().enumerate() {
            if b.radius > rref {
                large.push(i);
            } else {
                buckets.entry(Self::key_of(&width, &b.center)).or_default().push(i);
            }
        }
        BallGrid { width, buckets, large }
    }

    fn key_of(width: &Rational, p: &Point) -> Key {
        (floor_div(&coord(p, 0), width), floor_div(&coord(p, 1), width))
    }

    pub fn key(&self, p: &Point) -> Key {
        Self::key_of(&self.width, p)
    }

    /// Indices in the 3×3 block of buckets around `p`, and the large balls.
    pub fn near(&self, p: &Point) -> Vec<usize> {
        let (kx, ky) = self.key(p);
        let mut out = self.large.clone();
        for dx in -1..=1i32 {
            for dy in -1..=1i32 {
                let k = (&kx + dx, &ky + dy);
                if let Some(v) = self.buckets.get(&k) {
                    out.extend_from_slice(v);
                }
            }
        }
        out
    }

    /// Every unordered pair `(i, j)`, `i < j`, of balls in neighbouring
    /// buckets, and every pair involving a large ball.
    pub fn candidate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, &l) in self.large.iter().enumerate() {
            for &j in self.buckets.values().flatten().chain(&self.large[t + 1..]) {
                out.push((l.min(j), l.max(j)));
            }
        }
        for ((kx, ky), v) in &self.buckets {
            for dx in -1..=1i32 {
                for dy in -1..=1i32 {
                    let k = (kx + dx, ky + dy);
                    if let Some(w) = self.buckets.get(&k) {
                        for &i in v {
                            for &j in w {
                                if i < j {
                                    out.push((i, j));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }
}

/// Balls of `balls` containing `p` (open), through the grid.
pub fn containing(grid: &BallGrid, balls: &[Ball], p: &Point) -> Vec<usize> {
    debug_assert!(grid.width().is_positive());
    grid.near(p)
        .into_iter()
        .filter(|&i| balls[i].contains(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::rat;

    #[test]
    fn lookup_matches_linear_scan() {
        let mut balls = Vec::new();
        for i in -6..6 {
            for j in -6..6 {
                balls.push(Ball::new(Point::xy(rat(i, 3), rat(j, 5)), rat(1 + (i + j).rem_euclid(3), 7)));
            }
        }
        balls.push(Ball::new(Point::xy(rat(9, 1), rat(0, 1)), rat(11, 1)));
        balls.push(Ball::new(Point::xy(rat(-4, 1), rat(1, 1)), rat(5, 2)));
        let grid = BallGrid::new(&balls, 1);
        let mut pairs = BallGrid::new(&balls, 2).candidate_pairs();
        pairs.sort();
        pairs.dedup();
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                let (a, b) = (&balls[i], &balls[j]);
                let s = &a.radius + &b.radius;
                if a.center.dist2(&b.center) < &s * &s {
                    assert!(pairs.binary_search(&(i, j)).is_ok(), "overlapping pair {i} {j} missed");
                }
            }
        }
        for i in -20..20 {
            for j in -20..20 {
                let p = Point::xy(rat(i, 11), rat(j, 13));
                let mut got = containing(&grid, &balls, &p);
                got.sort();
                let want: Vec<usize> = (0..balls.len()).filter(|&k| balls[k].contains(&p)).collect();
                assert_eq!(got, want);
            }
        }
    }
}
