//! Candidate chains from a pruned dyadic subpaving, and the dovetailed search.
//!
//! The square of half-side `H = 2^K` around the anchor is subdivided down to
//! cells of side `2^-e`, discarding cells whose ball `B(center, 7/8·side)`
//! is shown to miss the set. Surviving cells cover the set inside the square.
//! Two cells whose balls overlap are Chebyshev neighbours, and balls of
//! non-neighbours are formally disjoint (centers `≥ 2·side` apart against a
//! radius sum of `7/4·side`). Hence BFS layers of a connected group of cells
//! form a formal chain, and cells outside that group can be absorbed into
//! `J_u` without touching the chain.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::ambient::{int, pow2_neg, unpair_u64, Ball, Point, Rational};
use crate::engine::certify::{
    far_singleton, line_certify, ray_certify, LineHint, LineTuple, RayTuple, Target, Tuple, Witness,
};
use crate::error::Error;
use crate::formal::{balls_disjoint, formally_contained_balls, FormalChain};
use crate::presentations::{intersect_empty_ball, point_in_balls, Answer, ComputablePoint};

/// Limits for [`Engine::search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Dovetail steps before giving up.
    pub max_steps: u64,
    /// Steps whose stage exceeds this are skipped.
    pub max_stage: u64,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_steps: 64,
            max_stage: 3,
            workers: 1,
        }
    }
}

type CellKey = (u32, u32, i64, i64);

/// Cached emptiness verdicts: the largest fuel known to give Unknown and the
/// smallest known to give Yes.
#[derive(Clone, Copy, Default)]
struct Verdicts {
    unknown_to: Option<u64>,
    yes_from: Option<u64>,
}

/// Everything [`Engine::propose`] derives from one subpaving.
#[derive(Clone, Debug, PartialEq)]
pub enum Candidate {
    Ray(RayTuple),
    Line(LineTuple),
}

pub struct Engine {
    target: Target,
    a: Point,
    config: SearchConfig,
    pool: rayon::ThreadPool,
    cache: Mutex<HashMap<CellKey, Verdicts>>,
}

/// Cell exponent of stage 0: cells of side `2^-e` give two-cell layers
/// along an axis-parallel curve a formal diameter of `11/4·2^-e`, below the
/// required mesh.
fn base_exponent(target: &Target, k: u32) -> u32 {
    match target {
        Target::Ray { .. } => k + 2,
        Target::Line { hint, .. } => k + hint.k0 + 5,
    }
}

/// `K` with `2^K ≥ n + 3`.
fn root_exponent(n: u64) -> u32 {
    let mut k = 0;
    while (1u64 << k) < n + 3 {
        k += 1;
    }
    k
}

/// Rational `2^e` for a possibly negative exponent.
fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        pow2_neg((-e) as u32)
    }
}

struct Paving {
    /// `(ix, iy)` of the surviving finest cells, sorted.
    cells: Vec<(i64, i64)>,
    balls: Vec<Ball>,
    index: HashMap<(i64, i64), usize>,
    /// Balls of components set aside at coarser levels.
    frozen: Vec<Ball>,
}

/// Component labels of cells under Chebyshev adjacency.
fn components(cells: &[(i64, i64)]) -> Vec<usize> {
    let index: HashMap<(i64, i64), usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut label = vec![usize::MAX; cells.len()];
    let mut next = 0;
    for start in 0..cells.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (x, y) = cells[i];
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(&j) = index.get(&(x + dx, y + dy)) {
                        if label[j] == usize::MAX {
                            label[j] = next;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        next += 1;
    }
    label
}

impl Paving {
    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = self.cells[i];
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (x + dx, y + dy)))
            .filter(move |&c| c != (x, y))
            .filter_map(|c| self.index.get(&c).copied())
    }

    /// Multi-source BFS distances within the cells reachable from `seeds`.
    fn bfs(&self, seeds: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.cells.len()];
        let mut queue = VecDeque::new();
        for &s in seeds {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            let d = dist[i].expect("queued cells have a distance");
            for j in self.neighbours(i) {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }
}

/// Groups cells by BFS distance into links.
fn layers(dist: &[Option<usize>], balls: &[Ball]) -> Vec<Vec<Ball>> {
    let depth = dist.iter().flatten().max().map_or(0, |d| d + 1);
    let mut out = vec![Vec::new(); depth];
    for (i, d) in dist.iter().enumerate() {
        if let Some(d) = d {
            out[*d].push(balls[i].clone());
        }
    }
    out
}

/// Least `m` in `[lo, hi]` with `balls` formally contained in `B(a, m)`.
fn least_radius(balls: &[Ball], a: &Point, lo: u64, hi: u64) -> Option<u64> {
    (lo..=hi).find(|&m| formally_contained_balls(balls, a, &int(m as i64)).unwrap_or(false))
}

fn meets_closed(b: &Ball, a: &Point, n: u64) -> bool {
    let s = &b.radius + int(n as i64);
    b.center.dist2(a) < &s * &s
}

impl Engine {
    pub fn new(target: Target, a: Point, config: SearchConfig) -> Result<Self, Error> {
        if a.dim() != 2 {
            return Err(Error::Input("the engine works in the plane".into()));
        }
        if let Target::Line { hint, .. } = &target {
            if hint.a != a {
                return Err(Error::Input(format!("anchor {a} differs from the hint anchor {}", hint.a)));
            }
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers.max(1))
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
        Ok(Engine {
            target,
            a,
            config,
            pool,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn anchor(&self) -> &Point {
        &self.a
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Oracle fuel used at `(stage, fuel)` for cells of side `2^-e`: the
    /// checks then resolve at the cell scale with a margin of `2^-4`.
    pub fn query_fuel(e: u32, fuel: u64) -> u64 {
        e as u64 + 4 + fuel
    }

    fn cell_ball(&self, root: u32, level: u32, ix: i64, iy: i64) -> Ball {
        let side = pow2(root as i64 + 1 - level as i64);
        let h = pow2(root as i64);
        let half = &side / int(2);
        let cx = self.a.x() - &h + &side * int(ix) + &half;
        let cy = self.a.y() - &h + &side * int(iy) + &half;
        Ball::new(Point::xy(cx, cy), side * Rational::new(7.into(), 8.into()))
    }

    fn empty(&self, key: CellKey, fuel: u64) -> bool {
        let known = self.cache.lock().expect("cache lock").get(&key).copied().unwrap_or_default();
        if known.yes_from.is_some_and(|f| f <= fuel) {
            return true;
        }
        if known.unknown_to.is_some_and(|f| f >= fuel) {
            return false;
        }
        let b = self.cell_ball(key.0, key.1, key.2, key.3);
        let ans = intersect_empty_ball(self.target.set().as_ref(), &b, fuel);
        let mut cache = self.cache.lock().expect("cache lock");
        let v = cache.entry(key).or_default();
        match ans {
            Answer::Yes => v.yes_from = Some(v.yes_from.map_or(fuel, |f| f.min(fuel))),
            Answer::Unknown => v.unknown_to = Some(v.unknown_to.map_or(fuel, |f| f.max(fuel))),
        }
        ans.is_yes()
    }

    /// Subdivides down to cells of side `2^-e`. At each coarser level, a
    /// connected group of cells formally disjoint from `focus` stops being
    /// refined: its balls stay disjoint from every finer ball elsewhere,
    /// since a non-adjacent cell center is `1.5` sides away from the other
    /// cells while the radii sum to at most `21/16` sides.
    fn pave(&self, root: u32, e: u32, fuel: u64, focus: &Ball) -> Paving {
        let finest = root + 1 + e;
        let mut level_cells = vec![(0i64, 0i64)];
        let mut frozen = Vec::new();
        for level in 0..=finest {
            let keep: Vec<bool> = self.pool.install(|| {
                level_cells
                    .par_iter()
                    .map(|&(x, y)| !self.empty((root, level, x, y), fuel))
                    .collect()
            });
            let alive: Vec<(i64, i64)> =
                level_cells.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| *c).collect();
            if level == finest {
                level_cells = alive;
                break;
            }
            let label = components(&alive);
            let groups = label.iter().max().map_or(0, |m| m + 1);
            let mut near_focus = vec![false; groups];
            for (c, &l) in alive.iter().zip(&label) {
                if !near_focus[l] && !balls_disjoint(&self.cell_ball(root, level, c.0, c.1), focus) {
                    near_focus[l] = true;
                }
            }
            let mut refine = Vec::new();
            for (c, &l) in alive.iter().zip(&label) {
                if near_focus[l] {
                    refine.push(*c);
                } else {
                    frozen.push(self.cell_ball(root, level, c.0, c.1));
                }
            }
            level_cells = refine
                .iter()
                .flat_map(|&(x, y)| [(2 * x, 2 * y), (2 * x, 2 * y + 1), (2 * x + 1, 2 * y), (2 * x + 1, 2 * y + 1)])
                .collect();
        }
        level_cells.sort_unstable();
        let balls: Vec<Ball> = self.pool.install(|| {
            level_cells.par_iter().map(|&(x, y)| self.cell_ball(root, finest, x, y)).collect()
        });
        let index = level_cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Paving {
            cells: level_cells,
            balls,
            index,
            frozen,
        }
    }

    /// The candidate built at `stage` with oracle fuel `fuel`, if the paving
    /// yields one.
    pub fn propose(&self, n: u64, k: u32, stage: u64, fuel: u64) -> Option<Candidate> {
        let e = base_exponent(&self.target, k) + stage as u32;
        let root = root_exponent(n);
        let focus = match &self.target {
            Target::Ray { endpoint, .. } => Ball::new(endpoint.approx(0), int(2)),
            Target::Line { hint, .. } => hint.ball_c.clone(),
        };
        let paving = self.pave(root, e, fuel, &focus);
        if paving.cells.is_empty() {
            return None;
        }
        let h_max = (1u64 << root) - 2;
        let m_lo = (n + 1).max(1);
        match &self.target {
            Target::Ray { endpoint, .. } => self.propose_ray(&paving, endpoint.as_ref(), n, k, fuel, root, m_lo, h_max),
            Target::Line { hint, .. } => self.propose_line(&paving, hint, n, k, root, m_lo, h_max),
        }
    }

    /// Seeds, their connected group, and `J_u` from the remaining cells.
    fn split_seed_group(&self, paving: &Paving, seeds: &[usize], root: u32) -> (Vec<usize>, Vec<Option<usize>>, Vec<Ball>) {
        let first = seeds[0];
        let reach = paving.bfs(&[first]);
        let seeds: Vec<usize> = seeds.iter().copied().filter(|&s| reach[s].is_some()).collect();
        let mut u: Vec<Ball> = paving.frozen.clone();
        u.extend((0..paving.cells.len()).filter(|&i| reach[i].is_none()).map(|i| paving.balls[i].clone()));
        if u.is_empty() {
            u.push(far_singleton(&self.a, 1 << root));
        }
        (seeds, reach, u)
    }

    #[allow(clippy::too_many_arguments)]
    fn propose_ray(
        &self,
        paving: &Paving,
        endpoint: &dyn ComputablePoint,
        n: u64,
        k: u32,
        fuel: u64,
        root: u32,
        m_lo: u64,
        h_max: u64,
    ) -> Option<Candidate> {
        let x0 = endpoint.approx(0);
        let side = &paving.balls[0].radius * Rational::new(8.into(), 7.into());
        let near = int(2) + &side * int(2);
        let seeds: Vec<usize> = (0..paving.cells.len())
            .filter(|&i| {
                let c = &paving.balls[i].center;
                (c.x() - x0.x()).abs() < near && (c.y() - x0.y()).abs() < near
            })
            .filter(|&i| point_in_balls(endpoint, std::slice::from_ref(&paving.balls[i]), fuel).is_yes())
            .collect();
        if seeds.is_empty() {
            return None;
        }
        let (seeds, _, u) = self.split_seed_group(paving, &seeds, root);
        let links = layers(&paving.bfs(&seeds), &paving.balls);
        let p = (0..links.len()).filter(|&i| links[i].iter().any(|b| meets_closed(b, &self.a, n))).max()?;
        let head: Vec<Ball> = links[..=p].iter().flatten().cloned().collect();
        let m = least_radius(&head, &self.a, m_lo, h_max)?;
        let chain = FormalChain::from_links(links).ok()?;
        Some(Candidate::Ray(RayTuple { n, k, m, chain, p, u }))
    }

    #[allow(clippy::too_many_arguments)]
    fn propose_line(
        &self,
        paving: &Paving,
        hint: &LineHint,
        n: u64,
        k: u32,
        root: u32,
        m_lo: u64,
        h_max: u64,
    ) -> Option<Candidate> {
        let seeds: Vec<usize> =
            (0..paving.cells.len()).filter(|&i| !balls_disjoint(&paving.balls[i], &hint.ball_c)).collect();
        if seeds.is_empty() {
            return None;
        }
        let (seeds, reach, u) = self.split_seed_group(paving, &seeds, root);
        // double sweep: restart the BFS from a cell farthest from the seeds
        let from_seeds = paving.bfs(&seeds);
        let far = (0..paving.cells.len())
            .filter(|&i| reach[i].is_some())
            .max_by_key(|&i| (from_seeds[i], std::cmp::Reverse(i)))?;
        let mut links = layers(&paving.bfs(&[far]), &paving.balls);
        let touching = |links: &[Vec<Ball>], b: &Ball| -> Vec<usize> {
            (0..links.len()).filter(|&i| links[i].iter().any(|x| !balls_disjoint(x, b))).collect()
        };
        let mut ta = touching(&links, &hint.ball_a);
        let mut tb = touching(&links, &hint.ball_b);
        if ta.is_empty() || tb.is_empty() {
            return None;
        }
        if ta.last() > tb.first() {
            links.reverse();
            ta = touching(&links, &hint.ball_a);
            tb = touching(&links, &hint.ball_b);
        }
        let e = ta.last()? + 1;
        if e >= *tb.first()? {
            return None;
        }
        let meeting: Vec<usize> =
            (0..links.len()).filter(|&i| links[i].iter().any(|b| meets_closed(b, &self.a, n))).collect();
        let p = meeting.iter().copied().chain(ta.iter().copied()).min()?;
        let q = meeting.iter().copied().chain(tb.iter().copied()).max()?;
        let mid: Vec<Ball> = links[p..=q].iter().flatten().cloned().collect();
        let m = least_radius(&mid, &self.a, m_lo, h_max)?;
        let chain = FormalChain::from_links(links).ok()?;
        Some(Candidate::Line(LineTuple { n, k, m, chain, p, q, e, u }))
    }

    /// Certifies `candidate` at oracle fuel `fuel`.
    pub fn certify(&self, candidate: &Candidate, fuel: u64) -> Answer {
        match (candidate, &self.target) {
            (Candidate::Ray(t), Target::Ray { set, endpoint }) => {
                ray_certify(t, set.as_ref(), endpoint.as_ref(), &self.a, fuel)
            }
            (Candidate::Line(t), Target::Line { set, hint }) => line_certify(t, set.as_ref(), hint, fuel),
            _ => Answer::Unknown,
        }
    }

    /// Walks `t = 0, 1, …` with `(stage, fuel) = unpair(t)` and returns the
    /// first certified candidate.
    pub fn search(&self, n: u64, k: u32) -> Result<Witness, Error> {
        for step in 0..self.config.max_steps {
            let (stage, fuel) = unpair_u64(step);
            if stage > self.config.max_stage {
                continue;
            }
            let e = base_exponent(&self.target, k) + stage as u32;
            let q = Self::query_fuel(e, fuel);
            let Some(c) = self.propose(n, k, stage, q) else { continue };
            if self.certify(&c, q).is_yes() {
                let tuple = match c {
                    Candidate::Ray(t) => Tuple::Ray(t),
                    Candidate::Line(t) => Tuple::Line(t),
                };
                return Ok(Witness { tuple, stage, fuel: q, step });
            }
        }
        Err(Error::BudgetExhausted { steps: self.config.max_steps })
    }
}

/// A rational point within `1/2` of the endpoint: the `2^-2` approximation
/// snapped to the grid `1/4·ℤ²`.
pub fn anchor_from_endpoint(endpoint: &dyn ComputablePoint) -> Point {
    let x = endpoint.approx(2);
    let snap = |v: &Rational| (v * int(4)).round() / int(4);
    Point::new(x.coords().iter().map(snap).collect())
}
