//! The ambient space ℝⁿ and its bit-exact numeric codings.
//!
//! Every rational ball and every rational open set is named by a natural
//! number. The bijections used here are fixed once and for all:
//!
//! * Cantor pairing `π(a, b) = (a + b)(a + b + 1)/2 + b`.
//! * `rat_q(0) = 0`, `rat_q(2k + 1) = (a + 1)/(b + 1)`,
//!   `rat_q(2k + 2) = -(a + 1)/(b + 1)` where `(a, b) = unpair(k)`.
//! * `q_pos(k) = (a + 1)/(b + 1)` where `(a, b) = unpair(k)`.
//! * Rational points: the index is unpaired iteratively into one code per
//!   coordinate, each decoded through `rat_q`.
//! * Ball `i`: `(τ₁, τ₂) = unpair(i)`, center `α(τ₁)`, radius `q_pos(τ₂)`.
//! * Finite sequence `(x₀, …, xₙ)`: `π(n, fold)` where `fold` right-folds the
//!   entries with `π`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rational = BigRational;

/// Ambient dimension used by the fixtures and the CLI.
pub const DEFAULT_DIM: usize = 2;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Formats a rational as `p/q` (always with an explicit denominator).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`; the result is in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Pairing

pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    let t = &s * (&s + 1u32);
    (t >> 1usize) + b
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let disc: BigUint = (z << 3usize) + 1u32;
    let w: BigUint = (disc.sqrt() - 1u32) >> 1usize;
    let t: BigUint = (&w * (&w + 1u32)) >> 1usize;
    let b = z - t;
    let a = &w - &b;
    (a, b)
}

pub fn pair_u64(a: u64, b: u64) -> u64 {
    let s = a + b;
    s * (s + 1) / 2 + b
}

pub fn unpair_u64(z: u64) -> (u64, u64) {
    let (a, b) = unpair(&BigUint::from(z));
    (a.to_u64().unwrap_or(0), b.to_u64().unwrap_or(0))
}

fn ratio_from_pair(a: BigUint, b: BigUint) -> Rational {
    Rational::new(
        BigInt::from_biguint(Sign::Plus, a + 1u32),
        BigInt::from_biguint(Sign::Plus, b + 1u32),
    )
}

/// Enumeration of ℚ (with repetitions).
pub fn rat_q(c: &BigUint) -> Rational {
    if c.is_zero() {
        return Rational::zero();
    }
    let odd = c.bit(0);
    let k = if odd { (c - 1u32) >> 1usize } else { (c - 2u32) >> 1usize };
    let (a, b) = unpair(&k);
    let v = ratio_from_pair(a, b);
    if odd {
        v
    } else {
        -v
    }
}

/// Canonical preimage of `q` under [`rat_q`].
pub fn rat_q_index(q: &Rational) -> BigUint {
    if q.is_zero() {
        return BigUint::zero();
    }
    let k = q_pos_index(&q.abs());
    if q.is_positive() {
        (k << 1usize) + 1u32
    } else {
        (k << 1usize) + 2u32
    }
}

/// Enumeration of the positive rationals.
pub fn q_pos(k: &BigUint) -> Rational {
    let (a, b) = unpair(k);
    ratio_from_pair(a, b)
}

/// Canonical preimage of a positive rational under [`q_pos`].
pub fn q_pos_index(q: &Rational) -> BigUint {
    debug_assert!(q.is_positive());
    let p = q.numer().magnitude() - 1u32;
    let d = q.denom().magnitude() - 1u32;
    pair(&p, &d)
}

// ---------------------------------------------------------------------------
// Points and balls

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn xy(x: Rational, y: Rational) -> Self {
        Point(vec![x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn x(&self) -> &Rational {
        &self.0[0]
    }

    pub fn y(&self) -> &Rational {
        &self.0[1]
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// The index of this point under the canonical encoding of `α`.
    pub fn alpha_index(&self) -> BigUint {
        let mut codes: Vec<BigUint> = self.0.iter().map(rat_q_index).collect();
        let mut acc = codes.pop().unwrap_or_default();
        while let Some(c) = codes.pop() {
            acc = pair(&c, &acc);
        }
        acc
    }

    /// Decodes `α(idx)` in dimension `dim`.
    pub fn from_alpha_index(idx: &BigUint, dim: usize) -> Point {
        let mut coords = Vec::with_capacity(dim);
        let mut rest = idx.clone();
        for _ in 1..dim {
            let (c, r) = unpair(&rest);
            coords.push(rat_q(&c));
            rest = r;
        }
        coords.push(rat_q(&rest));
        Point(coords)
    }

    /// Parses comma- or semicolon-separated `p/q` coordinates.
    pub fn parse(s: &str) -> Result<Point, Error> {
        let coords = s
            .split([',', ';'])
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        if coords.is_empty() {
            return Err(Error::Parse("empty point".into()));
        }
        Ok(Point(coords))
    }

    pub fn to_field(&self) -> String {
        self.0.iter().map(format_rational).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coords = v
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Point(coords))
    }
}

/// An open rational ball `B(center, radius)`; the same value also names the
/// closed ball where a caller says so.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    #[serde(with = "serde_rational")]
    pub radius: Rational,
}

impl Ball {
    pub fn new(center: Point, radius: Rational) -> Self {
        debug_assert!(radius.is_positive());
        Ball { center, radius }
    }

    pub fn index(&self) -> BallIndex {
        BallIndex(pair(&self.center.alpha_index(), &q_pos_index(&self.radius)))
    }

    /// Strict membership in the open ball.
    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist2(p) < &self.radius * &self.radius
    }

    /// Membership in the closed ball.
    pub fn closed_contains(&self, p: &Point) -> bool {
        self.center.dist2(p) <= &self.radius * &self.radius
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius)
    }
}

/// Natural-number name of a rational ball.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallIndex(pub BigUint);

impl BallIndex {
    pub fn from_u64(i: u64) -> Self {
        BallIndex(BigUint::from(i))
    }

    pub fn decode(&self, dim: usize) -> Ball {
        decode_ball(self, dim)
    }
}

impl fmt::Display for BallIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for BallIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        BigUint::from_str(s.trim())
            .map(BallIndex)
            .map_err(|_| Error::Parse(format!("invalid ball index {s:?}")))
    }
}

impl Serialize for BallIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BallIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `I_i = B(λ_i, ρ_i)`.
pub fn decode_ball(i: &BallIndex, dim: usize) -> Ball {
    let (t1, t2) = unpair(&i.0);
    Ball {
        center: Point::from_alpha_index(&t1, dim),
        radius: q_pos(&t2),
    }
}

// ---------------------------------------------------------------------------
// Finite sequences

/// Encodes a nonempty finite sequence of naturals.
pub fn encode_seq(entries: &[BigUint]) -> Result<BigUint, Error> {
    let (last, init) = entries.split_last().ok_or(Error::EmptyCode)?;
    let mut fold = last.clone();
    for e in init.iter().rev() {
        fold = pair(e, &fold);
    }
    Ok(pair(&BigUint::from(init.len()), &fold))
}

/// Decodes `j` into `((j)_0, …, (j)_{j̄})`.
///
/// The length is `j̄ + 1`; callers handling untrusted codes should bound it.
pub fn decode_seq(j: &BigUint) -> Vec<BigUint> {
    let (n, mut fold) = unpair(j);
    let n = n.to_usize().expect("sequence length exceeds usize");
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..n {
        let (x, rest) = unpair(&fold);
        out.push(x);
        fold = rest;
    }
    out.push(fold);
    out
}

/// A code `j` for the rational open set `J_j`, kept in decoded form.
///
/// Codes of long sequences are astronomically large numbers, so the entry
/// list is the primary representation and [`SetCode::to_natural`] is only
/// evaluated on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetCode {
    entries: Vec<BallIndex>,
}

impl SetCode {
    pub fn from_entries(entries: Vec<BallIndex>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptyCode);
        }
        Ok(SetCode { entries })
    }

    pub fn from_balls(balls: &[Ball]) -> Result<Self, Error> {
        Self::from_entries(balls.iter().map(Ball::index).collect())
    }

    pub fn from_natural(j: &BigUint) -> Self {
        SetCode {
            entries: decode_seq(j).into_iter().map(BallIndex).collect(),
        }
    }

    pub fn to_natural(&self) -> BigUint {
        let raw: Vec<BigUint> = self.entries.iter().map(|b| b.0.clone()).collect();
        encode_seq(&raw).expect("set codes are nonempty")
    }

    pub fn entries(&self) -> &[BallIndex] {
        &self.entries
    }

    /// `j̄`, the last valid position.
    pub fn last(&self) -> usize {
        self.entries.len() - 1
    }

    /// `[j]` as a sorted set.
    pub fn members(&self) -> Vec<BallIndex> {
        let mut m = self.entries.clone();
        m.sort();
        m.dedup();
        m
    }

    pub fn balls(&self, dim: usize) -> Vec<Ball> {
        self.entries.iter().map(|i| i.decode(dim)).collect()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.balls(p.dim()).iter().any(|b| b.contains(p))
    }
}

/// `decode_code`: the entry sequence of `j`.
pub fn decode_code(j: &SetCode) -> Vec<BallIndex> {
    j.entries.clone()
}

/// Canonical code with `[result] = set` (entries in ascending order).
pub fn encode_finite_set<I: IntoIterator<Item = BallIndex>>(set: I) -> Result<SetCode, Error> {
    let mut v: Vec<BallIndex> = set.into_iter().collect();
    v.sort();
    v.dedup();
    if v.is_empty() {
        return Err(Error::EmptyCode);
    }
    Ok(SetCode { entries: v })
}

/// A code `ℓ` read as the sequence of set codes `H_ℓ = (J_{(ℓ)_0}, …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainCode {
    links: Vec<SetCode>,
}

impl ChainCode {
    pub fn new(links: Vec<SetCode>) -> Result<Self, Error> {
        if links.is_empty() {
            return Err(Error::EmptyCode);
        }
        Ok(ChainCode { links })
    }

    pub fn links(&self) -> &[SetCode] {
        &self.links
    }

    pub fn last(&self) -> usize {
        self.links.len() - 1
    }

    pub fn to_natural(&self) -> BigUint {
        let raw: Vec<BigUint> = self.links.iter().map(SetCode::to_natural).collect();
        encode_seq(&raw).expect("chain codes are nonempty")
    }

    /// Reads a natural as a chain code. Link codes are decoded in turn.
    pub fn from_natural(l: &BigUint) -> Self {
        ChainCode {
            links: decode_seq(l).iter().map(SetCode::from_natural).collect(),
        }
    }
}

/// `ζ(ℓ, p, q)`: a code for `⋃ H_ℓ^{p≤q}`.
pub fn union_code(l: &ChainCode, p: usize, q: usize) -> Result<SetCode, Error> {
    if p > q || q > l.last() {
        return Err(Error::InvalidSegment { p, q, last: l.last() });
    }
    encode_finite_set(
        l.links[p..=q]
            .iter()
            .flat_map(|j| j.entries.iter().cloned()),
    )
}
