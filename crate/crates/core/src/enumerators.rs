//! Certified covers, the stream of balls meeting a set, component covers
//! and boundary points.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};

use crate::ambient::{format_rational, int, parse_rational, unpair_u64, Ball, BallIndex, Point, Rational};
use crate::engine::{anchor_from_endpoint, Engine, LineHint, Mode, Target, Tuple, Witness};
use crate::error::Error;
use crate::formal::formally_contained_balls;
use crate::geometry::fixture::{validate_hint, Fixture};
use crate::geometry::present::{fixture_presentation, PointSetPresentation};
use crate::presentations::{point_from_singleton, Answer, ExactPoint, PresentedSet, SharedSet};

/// Links `H^{0≤p}` (or `H^{p≤q}`) of a certified tuple, covering
/// `S ∩ B̂(anchor, n)` with every link of diameter below `2^-mesh_exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedCover {
    pub anchor: Point,
    pub n: u64,
    pub k: u32,
    pub mesh_exponent: u32,
    pub links: Vec<Vec<Ball>>,
    /// Absent for covers read back from CSV.
    pub witness: Option<Witness>,
}

impl CertifiedCover {
    pub fn from_witness(w: Witness, anchor: Point, mesh_exponent: u32) -> Self {
        CertifiedCover {
            anchor,
            n: w.n(),
            k: w.k(),
            mesh_exponent,
            links: w.links().to_vec(),
            witness: Some(w),
        }
    }

    /// The closed ball `B̂(anchor, n)`.
    pub fn region(&self) -> Ball {
        Ball { center: self.anchor.clone(), radius: int(self.n as i64) }
    }

    pub fn ball_count(&self) -> usize {
        self.links.iter().map(Vec::len).sum()
    }

    pub fn to_csv(&self, fixture: &str, mode: Mode) -> String {
        let mut out = String::new();
        let mode = match mode {
            Mode::Ray => "ray",
            Mode::Line => "line",
        };
        writeln!(out, "# fixture={fixture}").unwrap();
        writeln!(out, "# mode={mode}").unwrap();
        writeln!(out, "# anchor={}", self.anchor.to_field()).unwrap();
        writeln!(out, "# n={}", self.n).unwrap();
        writeln!(out, "# k={}", self.k).unwrap();
        writeln!(out, "# mesh={}", self.mesh_exponent).unwrap();
        if let Some(w) = &self.witness {
            writeln!(out, "# stage={} fuel={} step={}", w.stage, w.fuel, w.step).unwrap();
        }
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["link_ordinal", "ball_index", "center", "radius"]).unwrap();
        for (t, link) in self.links.iter().enumerate() {
            for b in link {
                wtr.write_record([t.to_string(), b.index().to_string(), b.center.to_field(), format_rational(&b.radius)])
                    .unwrap();
            }
        }
        out.push_str(&String::from_utf8(wtr.into_inner().unwrap()).unwrap());
        out
    }

    /// Reads a cover written by [`CertifiedCover::to_csv`]. The ball index
    /// column must agree with the center and radius.
    pub fn from_csv(text: &str) -> Result<Self, Error> {
        let mut meta = std::collections::HashMap::new();
        for line in text.lines().filter_map(|l| l.strip_prefix('#')) {
            for kv in line.split_whitespace() {
                if let Some((k, v)) = kv.split_once('=') {
                    meta.insert(k.to_string(), v.to_string());
                }
            }
        }
        let get = |k: &str| meta.get(k).ok_or_else(|| Error::Parse(format!("missing metadata {k}")));
        let num = |k: &str| -> Result<u64, Error> {
            get(k)?.parse().map_err(|e| Error::Parse(format!("metadata {k}: {e}")))
        };
        let anchor = Point::parse(get("anchor")?)?;
        let n = num("n")?;
        let k = num("k")? as u32;
        let mesh_exponent = num("mesh")? as u32;
        if mesh_exponent < k {
            return Err(Error::Parse(format!("mesh exponent {mesh_exponent} below k = {k}")));
        }
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let mut links: Vec<Vec<Ball>> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let field = |i: usize| rec.get(i).ok_or_else(|| Error::Parse("short csv row".into()));
            let t: usize = field(0)?.parse().map_err(|e| Error::Parse(format!("link ordinal: {e}")))?;
            let center = Point::parse(field(2)?)?;
            let radius = parse_rational(field(3)?)?;
            if !radius.is_positive() {
                return Err(Error::NonPositiveRadius);
            }
            let b = Ball::new(center, radius);
            if b.index().to_string() != field(1)? {
                return Err(Error::Parse(format!("ball index {} does not match {b}", field(1)?)));
            }
            if t > links.len() {
                return Err(Error::Parse(format!("link ordinal {t} skips ahead")));
            }
            if t == links.len() {
                links.push(Vec::new());
            }
            links[t].push(b);
        }
        Ok(CertifiedCover { anchor, n, k, mesh_exponent, links, witness: None })
    }

    pub fn to_svg(&self) -> String {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        let balls: Vec<(f64, f64, f64, usize)> = self
            .links
            .iter()
            .enumerate()
            .flat_map(|(t, l)| l.iter().map(move |b| (f(b.center.x()), f(b.center.y()), f(&b.radius), t)))
            .collect();
        let (ax, ay, n) = (f(self.anchor.x()), f(self.anchor.y()), self.n as f64);
        let mut lo = (ax - n, ay - n);
        let mut hi = (ax + n, ay + n);
        for &(x, y, r, _) in &balls {
            lo = (lo.0.min(x - r), lo.1.min(y - r));
            hi = (hi.0.max(x + r), hi.1.max(y + r));
        }
        let (w, h) = ((hi.0 - lo.0).max(1e-9), (hi.1 - lo.1).max(1e-9));
        let stroke = w.max(h) / 800.0;
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{:.0}" viewBox="{} {} {} {}">"#,
            800.0 * h / w,
            lo.0,
            -hi.1,
            w,
            h
        )
        .unwrap();
        writeln!(out, r#"<g transform="scale(1,-1)" fill-opacity="0.25" stroke-width="{stroke}">"#).unwrap();
        writeln!(out, r#"<circle cx="{ax}" cy="{ay}" r="{n}" fill="none" stroke="gray"/>"#).unwrap();
        for (x, y, r, t) in balls {
            let color = if t % 2 == 0 { "steelblue" } else { "darkorange" };
            writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{r}" fill="{color}" stroke="{color}"/>"#).unwrap();
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// The target and default anchor for a fixture: the endpoint snapped to a
/// quarter grid for rays, the hint anchor for lines.
pub fn target_for_fixture(fx: Arc<Fixture>, mode: Mode) -> Result<(Target, Point), Error> {
    match mode {
        Mode::Ray => {
            let endpoint = fx.endpoint().ok_or_else(|| Error::Input(format!("fixture {} is not a ray", fx.id)))?;
            let a = anchor_from_endpoint(&ExactPoint(endpoint.clone()));
            Ok((Target::Ray { set: fixture_presentation(fx), endpoint: Arc::new(ExactPoint(endpoint)) }, a))
        }
        Mode::Line => {
            let hint = match (&fx.anchors, fx.is_line()) {
                (Some(h), true) => h.clone(),
                _ => return Err(Error::Input(format!("fixture {} is not a line with anchor data", fx.id))),
            };
            validate_hint(&fx, &hint)?;
            let hint = Box::new(LineHint::from_anchor(&hint));
            let a = hint.a.clone();
            Ok((Target::Line { set: fixture_presentation(fx), hint }, a))
        }
    }
}

/// Mesh exponent the engine certifies at resolution `k`.
pub fn mesh_exponent(target: &Target, k: u32) -> u32 {
    match target {
        Target::Ray { .. } => k,
        Target::Line { hint, .. } => k + hint.k0 + 3,
    }
}

/// Searches a certified tuple for `(n, k)` and returns its segment.
pub fn draw(engine: &Engine, n: u64, k: u32) -> Result<CertifiedCover, Error> {
    let w = engine.search(n, k)?;
    Ok(CertifiedCover::from_witness(w, engine.anchor().clone(), mesh_exponent(engine.target(), k)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Rounds `x = 0, 1, …` before the stream ends.
    pub rounds: u64,
    /// Containment checks before the stream ends.
    pub max_steps: u64,
    /// Round `x` scans indices below `scan_base·(x + 1)`.
    pub scan_base: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { rounds: 25, max_steps: u64::MAX, scan_base: 1024 }
    }
}

/// f64 summary of a link: first center, first radius, and an upper bound on
/// the distance from that center to any point of the link.
struct LinkBox {
    x: f64,
    y: f64,
    r0: f64,
    reach: f64,
    id: usize,
}

/// What a round did, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundReport {
    pub round: u64,
    pub n: u64,
    pub k: u32,
    pub certified: bool,
    pub emitted: usize,
}

/// Emits, without repetition, indices `i` with `I_i ∩ S ≠ ∅`.
///
/// Round `x` draws a certified tuple for `(n, k) = unpair(x)` and emits
/// every unseen index below the round's scan bound whose ball formally
/// contains some certified link. Each link meets `S`, so every emission is
/// sound. Within a round indices come out in increasing order.
pub struct Enumerator<'a> {
    engine: &'a Engine,
    config: EnumConfig,
    round: u64,
    steps: u64,
    emitted: Vec<bool>,
    decoded: Vec<(Ball, f64, f64, f64)>,
    queue: VecDeque<BallIndex>,
    reports: Vec<RoundReport>,
}

impl<'a> Enumerator<'a> {
    pub fn new(engine: &'a Engine, config: EnumConfig) -> Self {
        Enumerator {
            engine,
            config,
            round: 0,
            steps: 0,
            emitted: Vec::new(),
            decoded: Vec::new(),
            queue: VecDeque::new(),
            reports: Vec::new(),
        }
    }

    pub fn reports(&self) -> &[RoundReport] {
        &self.reports
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn exhausted(&self) -> bool {
        self.round >= self.config.rounds || self.steps >= self.config.max_steps
    }

    fn run_round(&mut self) {
        let x = self.round;
        self.round += 1;
        let (n, k) = unpair_u64(x);
        let mut report = RoundReport { round: x, n, k: k as u32, certified: false, emitted: 0 };
        let Ok(cover) = draw(self.engine, n, k as u32) else {
            self.reports.push(report);
            return;
        };
        report.certified = true;

        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        let mut boxes: Vec<LinkBox> = cover
            .links
            .iter()
            .enumerate()
            .map(|(id, l)| {
                let (x, y) = (f(l[0].center.x()), f(l[0].center.y()));
                let reach = l
                    .iter()
                    .map(|b| (f(b.center.x()) - x).hypot(f(b.center.y()) - y) + f(&b.radius))
                    .fold(0.0, f64::max);
                LinkBox { x, y, r0: f(&l[0].radius), reach, id }
            })
            .collect();
        boxes.sort_by(|a, b| a.x.total_cmp(&b.x));

        let bound = self.config.scan_base.saturating_mul(x + 1);
        let bound = usize::try_from(bound).unwrap_or(usize::MAX);
        while self.decoded.len() < bound {
            let b = BallIndex::from_u64(self.decoded.len() as u64).decode(2);
            let (bx, by, br) = (f(b.center.x()), f(b.center.y()), f(&b.radius));
            self.decoded.push((b, bx, by, br));
        }
        self.emitted.resize(self.decoded.len(), false);

        for i in 0..bound {
            if self.emitted[i] {
                continue;
            }
            if self.steps >= self.config.max_steps {
                break;
            }
            self.steps += 1;
            let (ball, bx, by, br) = &self.decoded[i];
            let slop = 1e-9 * (1.0 + br.abs() + bx.abs() + by.abs());
            let lo = boxes.partition_point(|l| l.x < bx - br - slop);
            let mut cands: Vec<(f64, usize)> = boxes[lo..]
                .iter()
                .take_while(|l| l.x <= bx + br + slop)
                .filter_map(|l| {
                    let d = (l.x - bx).hypot(l.y - by);
                    (d + l.r0 < br + slop).then_some((d + l.reach, l.id))
                })
                .collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0));
            let hit = cands.iter().any(|&(_, id)| {
                formally_contained_balls(&cover.links[id], &ball.center, &ball.radius).unwrap_or(false)
            });
            if hit {
                self.emitted[i] = true;
                self.queue.push_back(BallIndex::from_u64(i as u64));
                report.emitted += 1;
            }
        }
        self.reports.push(report);
    }
}

impl Iterator for Enumerator<'_> {
    type Item = BallIndex;

    fn next(&mut self) -> Option<BallIndex> {
        while self.queue.is_empty() {
            if self.exhausted() {
                return None;
            }
            self.run_round();
        }
        self.queue.pop_front()
    }
}

/// The part `K = M ∩ ⋃ isolating` of a set, presented through `M`. The
/// isolating balls must miss `M ∖ K`.
///
/// `K ⊆ J` is confirmed when `M ∩ Î_t ⊆ J` for every isolating ball, which
/// is sound for any query ball and complete when the query ball contains `K`.
pub struct ComponentSet {
    pub set: SharedSet,
    pub isolating: Vec<Ball>,
}

impl ComponentSet {
    /// Semi-decides `K ⊆ ⋃ cover`.
    pub fn covered_by(&self, cover: &[Ball], fuel: u64) -> Answer {
        Answer::from_bool(self.isolating.iter().all(|t| self.set.covers_balls(t, cover, fuel).is_yes()))
    }
}

impl PresentedSet for ComponentSet {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn covers_balls(&self, _closed: &Ball, cover: &[Ball], fuel: u64) -> Answer {
        self.covered_by(cover, fuel)
    }
}

pub fn compact_component_cover(m: SharedSet, isolating: Vec<Ball>) -> Arc<ComponentSet> {
    Arc::new(ComponentSet { set: m, isolating })
}

/// The boundary point isolated by `isolating`, to within `2^-k`. The
/// boundary is given as a presented set and `isolating` must meet it in
/// exactly one point.
pub fn boundary_point(m: &SharedSet, boundary: SharedSet, isolating: &Ball, k: u32, cap: u64) -> Result<Point, Error> {
    let _ = m;
    let single = compact_component_cover(boundary, vec![isolating.clone()]);
    let n: u64 = isolating.radius.ceil().to_integer().try_into().map_err(|_| Error::Input("isolating ball too large".into()))?;
    point_from_singleton(single.as_ref(), &isolating.center, n.max(1), k, cap)
}

/// The boundary of a fixture as an exactly presented finite set.
pub fn fixture_boundary(fx: &Fixture) -> SharedSet {
    Arc::new(PointSetPresentation(fx.boundary.clone()))
}

/// Whether a witness is a ray or a line witness.
pub fn witness_mode(w: &Witness) -> Mode {
    match w.tuple {
        Tuple::Ray(_) => Mode::Ray,
        Tuple::Line(_) => Mode::Line,
    }
}
