//! Independent checks of emitted covers and ball streams against the exact
//! fixture geometry. Nothing here consults the presentations or the engine.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::ambient::{format_rational, parse_rational, pow2_neg, Ball, BallIndex, Rational};
use crate::enumerators::CertifiedCover;
use crate::error::Error;
use crate::geometry::fixture::{Fixture, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    UndecidedAtCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Link ordinal or stream position, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub ball: String,
    pub reason: String,
}

/// One verdict, written as a JSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub fixture: String,
    pub params: Params,
    pub result: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

/// Does the ball meet the curve? Spiral fixtures are judged against the
/// enclosure of the true curve and may come back undecided.
fn meets(fx: &Fixture, b: &Ball) -> Result<bool, ()> {
    if fx.curve.kind == Kind::SpiralSegment {
        return fx.enclosure_intersects(b).map_err(|_| ());
    }
    Ok(fx.curve_intersects(b, false))
}

/// `diam(⋃ balls) < t`, using `diam = max (|c_i - c_j| + ρ_i + ρ_j)`.
pub fn union_diameter_lt(balls: &[Ball], t: &Rational) -> bool {
    balls.iter().enumerate().all(|(i, a)| {
        balls[i..].iter().all(|b| {
            let slack = t - &a.radius - &b.radius;
            slack.is_positive() && a.center.dist2(&b.center) < &slack * &slack
        })
    })
}

/// Checks that every link meets the curve, that the links cover the curve
/// inside `B̂(a, n)`, and that every link has diameter below the cover's
/// mesh bound.
pub fn verify_cover(cover: &CertifiedCover, fx: &Fixture) -> Verdict {
    let mut verdict = Verdict {
        check: "cover".into(),
        fixture: fx.id.clone(),
        params: Params { n: Some(cover.n), k: Some(cover.k), budget: None },
        result: Outcome::Pass,
        counterexample: None,
    };
    let fail = |v: &mut Verdict, outcome, position, ball: &Ball, reason: &str| {
        v.result = outcome;
        v.counterexample = Some(Counterexample { position, ball: ball.to_string(), reason: reason.into() });
    };
    let mesh = pow2_neg(cover.mesh_exponent);
    for (t, link) in cover.links.iter().enumerate() {
        let Some(first) = link.first() else {
            fail(&mut verdict, Outcome::Fail, Some(t), &cover.region(), "empty link");
            return verdict;
        };
        if !union_diameter_lt(link, &mesh) {
            fail(&mut verdict, Outcome::Fail, Some(t), first, "link diameter exceeds the mesh bound");
            return verdict;
        }
        let mut undecided = false;
        let mut hit = false;
        for b in link {
            match meets(fx, b) {
                Ok(true) => {
                    hit = true;
                    break;
                }
                Ok(false) => {}
                Err(()) => undecided = true,
            }
        }
        if !hit {
            let outcome = if undecided { Outcome::UndecidedAtCap } else { Outcome::Fail };
            fail(&mut verdict, outcome, Some(t), first, "link does not meet the set");
            if outcome == Outcome::Fail {
                return verdict;
            }
        }
    }
    let all: Vec<Ball> = cover.links.iter().flatten().cloned().collect();
    if !fx.curve_cover_check(&cover.anchor, cover.n, &all) {
        fail(&mut verdict, Outcome::Fail, None, &cover.region(), "links do not cover the set in the anchor ball");
    }
    verdict
}

/// Checks an emitted index stream: every emitted ball meets the curve, and
/// every listed witness index occurs among the first `budget` emissions.
pub fn verify_stream(emissions: &[BallIndex], fx: &Fixture, witness: Option<&WitnessList>, budget: u64) -> Verdict {
    let mut verdict = Verdict {
        check: "stream".into(),
        fixture: fx.id.clone(),
        params: Params { n: None, k: None, budget: Some(budget) },
        result: Outcome::Pass,
        counterexample: None,
    };
    let dim = 2;
    for (pos, i) in emissions.iter().enumerate() {
        let b = i.decode(dim);
        match meets(fx, &b) {
            Ok(true) => {}
            Ok(false) => {
                verdict.result = Outcome::Fail;
                verdict.counterexample =
                    Some(Counterexample { position: Some(pos), ball: i.to_string(), reason: "emitted ball misses the set".into() });
                return verdict;
            }
            Err(()) => verdict.result = Outcome::UndecidedAtCap,
        }
    }
    if let Some(list) = witness {
        let prefix = budget.min(emissions.len() as u64) as usize;
        let seen: HashSet<&BallIndex> = emissions[..prefix].iter().collect();
        if let Some(missing) = list.indices.iter().find(|i| !seen.contains(i)) {
            verdict.result = Outcome::Fail;
            verdict.counterexample = Some(Counterexample {
                position: None,
                ball: missing.to_string(),
                reason: "witness index not emitted within budget".into(),
            });
        }
    }
    verdict
}

/// Indices below `scan` whose closed ball shrunk by `slack` still meets the
/// curve part of the fixture. A sound and complete enumerator must emit all
/// of them eventually.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessList {
    pub fixture: String,
    pub scan: u64,
    pub slack: Rational,
    pub indices: Vec<BallIndex>,
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    fixture: String,
    scan: u64,
    slack: String,
    indices: Vec<String>,
}

impl WitnessList {
    pub fn to_json(&self) -> String {
        let file = WitnessFile {
            fixture: self.fixture.clone(),
            scan: self.scan,
            slack: format_rational(&self.slack),
            indices: self.indices.iter().map(|i| i.0.to_string()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("witness lists serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: WitnessFile = serde_json::from_str(text)?;
        let indices = file
            .indices
            .iter()
            .map(|s| s.parse::<BigUint>().map(BallIndex).map_err(|e| Error::Parse(format!("index {s:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        Ok(WitnessList { fixture: file.fixture, scan: file.scan, slack: parse_rational(&file.slack)?, indices })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, Error> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn witness_scan(fx: &Fixture, scan: u64, slack: &Rational) -> WitnessList {
    let indices = (0..scan)
        .map(BallIndex::from_u64)
        .filter(|i| {
            let b = i.decode(2);
            let r = &b.radius - slack;
            !r.is_negative() && fx.curve_intersects(&Ball { center: b.center, radius: r }, true)
        })
        .collect();
    WitnessList { fixture: fx.id.clone(), scan, slack: slack.clone(), indices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{int, rat, Point};

    fn axis_ray() -> Fixture {
        Fixture::from_json(r#"{"id":"r","kind":"polyline-ray","vertices":[["0/1","0/1"],["1/1","0/1"]],"published":{"fuel":8}}"#)
            .unwrap()
    }

    fn b(x: i64, y: i64, r: Rational) -> Ball {
        Ball::new(Point::xy(int(x), int(y)), r)
    }

    fn cover(links: Vec<Vec<Ball>>, n: u64, k: u32) -> CertifiedCover {
        CertifiedCover { anchor: Point::origin(2), n, k, mesh_exponent: k, links, witness: None }
    }

    #[test]
    fn union_diameter() {
        let balls = [b(0, 0, rat(1, 4)), b(1, 0, rat(1, 4))];
        // the union spans [-1/4, 5/4]
        assert!(!union_diameter_lt(&balls, &rat(3, 2)));
        assert!(union_diameter_lt(&balls, &rat(151, 100)));
        assert!(union_diameter_lt(&balls[..1], &rat(51, 100)));
    }

    #[test]
    fn good_and_bad_covers() {
        let fx = axis_ray();
        let r = rat(3, 8);
        let links: Vec<Vec<Ball>> = (0..=5).map(|i| vec![Ball::new(Point::xy(rat(i, 2), int(0)), r.clone())]).collect();
        let v = verify_cover(&cover(links.clone(), 2, 0), &fx);
        assert!(v.passed(), "{v:?}");

        let mut gap = links.clone();
        gap.remove(2);
        assert_eq!(verify_cover(&cover(gap, 2, 0), &fx).result, Outcome::Fail);

        let mut moved = links.clone();
        moved[1] = vec![b(9, 9, r.clone())];
        let v = verify_cover(&cover(moved, 2, 0), &fx);
        assert_eq!(v.counterexample.unwrap().position, Some(1));

        assert_eq!(verify_cover(&cover(links, 2, 1), &fx).result, Outcome::Fail);
    }

    #[test]
    fn streams() {
        let fx = axis_ray();
        let list = witness_scan(&fx, 400, &rat(1, 8));
        assert!(!list.indices.is_empty());
        assert!(verify_stream(&list.indices, &fx, Some(&list), u64::MAX).passed());
        assert!(!verify_stream(&list.indices, &fx, Some(&list), 0).passed());
        let mut bad = list.indices.clone();
        bad.push(b(0, 5, int(1)).index());
        assert_eq!(verify_stream(&bad, &fx, None, 10).result, Outcome::Fail);
        let back = WitnessList::from_json(&list.to_json()).unwrap();
        assert_eq!(back, list);
    }
}
