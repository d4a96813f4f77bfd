//! Acceptance suite. Criteria run in order inside one test so that the
//! determinism check can compare against the outputs of the earlier runs.
//! Each criterion prints one PASS/FAIL line to stderr, bypassing capture.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chaincert::ambient::{int, pow2_neg, rat};
use chaincert::engine::certify::line_condition;
use chaincert::engine::{Engine, Mode, SearchConfig, Target, Tuple};
use chaincert::enumerators::{
    boundary_point, compact_component_cover, draw, fixture_boundary, target_for_fixture, CertifiedCover, EnumConfig,
    Enumerator,
};
use chaincert::formal::{balls_disjoint, contained_in_ball, fdiam_lt_balls, fdiam_upper, formally_disjoint};
use chaincert::geometry::{disks_cover_region, fixture_presentation, Fixture};
use chaincert::presentations::{closed_ball_in_balls, intersect_empty_ball, Answer, PresentedSet};
use chaincert::surd::sqrt_upper;
use chaincert::verify::{verify_cover, verify_stream, Outcome, WitnessList};
use chaincert::{Ball, BallIndex, Point, Rational};

const SLACK: (i64, i64) = (1, 16);

fn slack() -> Rational {
    rat(SLACK.0, SLACK.1)
}

fn fixture(id: &str) -> Arc<Fixture> {
    Arc::new(Fixture::load(format!("{}/fixtures/{id}.json", env!("CARGO_MANIFEST_DIR"))).unwrap())
}

struct Report {
    failed: Vec<u8>,
}

impl Report {
    fn line(&mut self, n: u8, name: &str, ok: bool, detail: &str, took: Duration) {
        if !ok {
            self.failed.push(n);
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "criterion {n}: {verdict}  {name}  ({detail}; {:.1} s)", took.as_secs_f64());
    }
}

fn log(msg: &str) {
    let _ = writeln!(std::io::stderr().lock(), "    {msg}");
}

// ---------------------------------------------------------------------------
// random rationals and balls

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.gen_range(lo * den..=hi * den), den)
}

fn rand_point(rng: &mut ChaCha8Rng, lo: (i64, i64), hi: (i64, i64), den: i64) -> Point {
    Point::xy(rand_rat(rng, lo.0, hi.0, den), rand_rat(rng, lo.1, hi.1, den))
}

fn rand_radius(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=32), 16)
}

/// A rational vector strictly inside the unit disk.
fn rand_unit(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let (x, y) = (rng.gen_range(-15..=15), rng.gen_range(-15..=15));
        if x * x + y * y < 256 {
            return Point::xy(rat(x, 16), rat(y, 16));
        }
    }
}

fn rand_balls(rng: &mut ChaCha8Rng, max: usize) -> Vec<Ball> {
    let count = rng.gen_range(1..=max);
    (0..count).map(|_| Ball::new(rand_point(rng, (-4, -4), (4, 4), 8), rand_radius(rng))).collect()
}

fn grow(b: &Ball, by: &Rational) -> Ball {
    Ball::new(b.center.clone(), &b.radius + by)
}

fn shrink_all(balls: &[Ball], by: &Rational) -> Vec<Ball> {
    balls
        .iter()
        .filter(|b| b.radius > *by)
        .map(|b| Ball::new(b.center.clone(), &b.radius - by))
        .collect()
}

/// Open balls of radius `s` on the grid of spacing `s` over the bounding
/// square of `region`, grown by `s`. They cover that square.
fn grid_over(region: &Ball, s: &Rational) -> Vec<Ball> {
    let reach = &region.radius + s;
    let steps = (&reach * int(2) / s).ceil().to_integer();
    let steps: i64 = steps.try_into().unwrap();
    let x0 = region.center.x() - &reach;
    let y0 = region.center.y() - &reach;
    let mut out = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let c = Point::xy(&x0 + s * int(i), &y0 + s * int(j));
            out.push(Ball::new(c, s.clone()));
        }
    }
    out
}

fn drop_one(rng: &mut ChaCha8Rng, mut balls: Vec<Ball>) -> Vec<Ball> {
    if !balls.is_empty() && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..balls.len());
        balls.remove(i);
    }
    balls
}

/// Answers at fuel `0..=fuel`; the answers must never go from Yes back to
/// Unknown.
fn fuel_profile(fuel: u64, mut ask: impl FnMut(u64) -> Answer) -> (bool, bool) {
    let answers: Vec<bool> = (0..=fuel).map(|f| ask(f).is_yes()).collect();
    let monotone = answers.windows(2).all(|w| !w[0] || w[1]);
    (answers[fuel as usize], monotone)
}

// ---------------------------------------------------------------------------
// criterion 1

fn formal_suite(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let codes = 500;
    for trial in 0..codes {
        // fdiam dominance
        let balls = rand_balls(rng, 6);
        let mut samples = Vec::new();
        for b in &balls {
            for _ in 0..4 {
                samples.push(b.center.add(&rand_unit(rng).scale(&b.radius)));
            }
        }
        let upper = fdiam_upper(&balls, 24);
        let t = rat(rng.gen_range(1..=400), 32);
        let lt = fdiam_lt_balls(&balls, &t);
        if !fdiam_lt_balls(&balls, &(&upper + pow2_neg(20))) {
            return Err(format!("code {trial}: fdiam not below its upper bound"));
        }
        for (i, p) in samples.iter().enumerate() {
            for q in &samples[i + 1..] {
                let d2 = p.dist2(q);
                if d2 >= &upper * &upper {
                    return Err(format!("code {trial}: sampled distance above fdiam"));
                }
                if lt && d2 >= &t * &t {
                    return Err(format!("code {trial}: fdiam < {t} but sampled distance is not"));
                }
            }
        }

        // disjointness: the point splitting the center segment in ratio
        // ρ_a : ρ_b lies in both open balls exactly when they overlap
        let u = rand_balls(rng, 3);
        let v = rand_balls(rng, 3);
        let overlap = |a: &Ball, b: &Ball| {
            let w = &a.radius / (&a.radius + &b.radius);
            let p = a.center.add(&b.center.sub(&a.center).scale(&w));
            a.contains(&p) && b.contains(&p)
        };
        let meet = u.iter().any(|a| v.iter().any(|b| overlap(a, b)));
        if formally_disjoint(&u, &v) && meet {
            return Err(format!("code {trial}: formally disjoint sets overlap"));
        }
        if balls_disjoint(&u[0], &v[0]) && overlap(&u[0], &v[0]) {
            return Err(format!("code {trial}: formally disjoint balls overlap"));
        }

        // refinement: x ∈ I_m, ε ≤ (ρ_m - d(x, λ_m))/2, x ∈ J, fdiam(J) < ε
        let m = Ball::new(rand_point(rng, (-4, -4), (4, 4), 8), rand_radius(rng));
        let x = m.center.add(&rand_unit(rng).scale(&m.radius));
        let eps = (&m.radius - sqrt_upper(&x.dist2(&m.center), 32)) / int(2);
        if !eps.is_positive() {
            return Err(format!("code {trial}: no positive ε below (ρ - d)/2"));
        }
        let small = &eps / int(8);
        let mut j = vec![Ball::new(x.add(&rand_unit(rng).scale(&small)), small.clone())];
        for _ in 0..rng.gen_range(0..4) {
            j.push(Ball::new(x.add(&rand_unit(rng).scale(&small)), small.clone()));
        }
        if !j.iter().any(|b| b.contains(&x)) || !fdiam_lt_balls(&j, &eps) {
            return Err(format!("code {trial}: refinement code does not meet the hypotheses"));
        }
        if !contained_in_ball(&j, &m) {
            return Err(format!("code {trial}: refinement code not formally inside I_m"));
        }
    }
    Ok(format!("{codes} codes per property"))
}

// ---------------------------------------------------------------------------
// criterion 2

#[derive(Default)]
struct QueryStats {
    queries: usize,
    unsound: usize,
    slack_true: usize,
    slack_missed: usize,
    non_monotone: usize,
}

impl QueryStats {
    fn record(&mut self, (yes, monotone): (bool, bool), truth: bool, slack_truth: bool) {
        self.queries += 1;
        self.unsound += usize::from(yes && !truth);
        self.non_monotone += usize::from(!monotone);
        if slack_truth {
            self.slack_true += 1;
            self.slack_missed += usize::from(!yes);
        }
    }

    fn clean(&self) -> bool {
        self.unsound == 0 && self.slack_missed == 0 && self.non_monotone == 0
    }

    fn summary(&self) -> String {
        format!(
            "{} queries, {} unsound, {}/{} slack-true answered, {} non-monotone",
            self.queries,
            self.unsound,
            self.slack_true - self.slack_missed,
            self.slack_true,
            self.non_monotone
        )
    }
}

fn presentation_suite(rng: &mut ChaCha8Rng, id: &str) -> QueryStats {
    let fx = fixture(id);
    let set = fixture_presentation(fx.clone());
    let fuel = fx.published.fuel;
    let sl = slack();
    let mut stats = QueryStats::default();
    for q in 0..200 {
        let query = Ball::new(rand_point(rng, (-3, -3), (8, 3), 4), rat(rng.gen_range(1..=16), 8));
        let wide = grow(&query, &sl);
        match q % 3 {
            0 => {
                let s = rat(1, *[2, 4].get(rng.gen_range(0..2)).unwrap());
                let grid: Vec<Ball> = grid_over(&query, &s).into_iter().filter(|b| fx.exact_intersects(b, false)).collect();
                let cover = drop_one(rng, grid);
                let truth = fx.exact_cover_check_radius(&query.center, &query.radius, &cover);
                let slack_truth = fx.exact_cover_check_radius(&wide.center, &wide.radius, &shrink_all(&cover, &sl));
                let profile = fuel_profile(fuel, |f| set.covers_balls(&query, &cover, f));
                stats.record(profile, truth, slack_truth);
            }
            1 => {
                let truth = !fx.exact_intersects(&query, true);
                let slack_truth = !fx.exact_intersects(&wide, true);
                let profile = fuel_profile(fuel, |f| intersect_empty_ball(set.as_ref(), &query, f));
                stats.record(profile, truth, slack_truth);
            }
            _ => {
                // spacing follows the query radius to keep the covers small
                let s = &query.radius / int(rng.gen_range(2..=3));
                let cover = drop_one(rng, grid_over(&query, &s));
                let truth = disks_cover_region(std::slice::from_ref(&query), &cover);
                let slack_truth = disks_cover_region(std::slice::from_ref(&wide), &shrink_all(&cover, &sl));
                let profile = fuel_profile(fuel, |f| closed_ball_in_balls(&query, &cover, f));
                stats.record(profile, truth, slack_truth);
            }
        }
    }
    stats
}

// ---------------------------------------------------------------------------
// criteria 3 and 4

fn engine(fx: &Arc<Fixture>, mode: Mode, workers: usize) -> Engine {
    let (target, a) = target_for_fixture(fx.clone(), mode).unwrap();
    Engine::new(target, a, SearchConfig { workers, ..SearchConfig::default() }).unwrap()
}

struct DrawRun {
    label: String,
    csv: String,
    cover: CertifiedCover,
}

/// Draws and verifies one cover; for lines the ordering and anchor
/// conditions are replayed on the witness as well.
fn draw_run(fx: &Arc<Fixture>, mode: Mode, n: u64, k: u32, workers: usize, limit: Duration) -> Result<DrawRun, String> {
    let label = format!("{} ({n},{k})", fx.id);
    let start = Instant::now();
    let e = engine(fx, mode, workers);
    let cover = draw(&e, n, k).map_err(|err| format!("{label}: {err}"))?;
    let w = cover.witness.clone().unwrap();
    if !w.replay(e.target(), e.anchor()) {
        return Err(format!("{label}: witness does not replay"));
    }
    if let (Tuple::Line(t), Target::Line { set, hint }) = (&w.tuple, e.target()) {
        for c in [6, 8, 9, 10] {
            if !line_condition(c, t, set.as_ref(), hint, w.fuel) {
                return Err(format!("{label}: line condition {c} fails on replay"));
            }
        }
    }
    let v = verify_cover(&cover, fx);
    if !v.passed() {
        return Err(format!("{label}: {}", v.to_json_line()));
    }
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{label}: {:.1} s over the limit", took.as_secs_f64()));
    }
    log(&format!("{label}: {} links, {} balls, {:.1} s", cover.links.len(), cover.ball_count(), took.as_secs_f64()));
    Ok(DrawRun { label, csv: cover.to_csv(&fx.id, mode), cover })
}

fn draw_suite(
    runs: &[(&str, Mode, u64, u32)],
    workers: usize,
    limit: Duration,
) -> (Vec<(Arc<Fixture>, DrawRun)>, Vec<String>) {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for &(id, mode, n, k) in runs {
        let fx = fixture(id);
        match draw_run(&fx, mode, n, k, workers, limit) {
            Ok(run) => ok.push((fx, run)),
            Err(e) => errors.push(e),
        }
    }
    (ok, errors)
}

// ---------------------------------------------------------------------------
// criterion 5

fn enumerate_run(id: &str, mode: Mode, workers: usize) -> (Vec<BallIndex>, Result<String, String>) {
    let start = Instant::now();
    let fx = fixture(id);
    let e = engine(&fx, mode, workers);
    let rounds = fx.published.enum_rounds.unwrap();
    let witness = WitnessList::load(format!(
        "{}/fixtures/{}",
        env!("CARGO_MANIFEST_DIR"),
        fx.published.witness_list.as_ref().unwrap()
    ))
    .unwrap();
    let emitted: Vec<BallIndex> = Enumerator::new(&e, EnumConfig { rounds, ..EnumConfig::default() }).collect();
    let head = &emitted[..emitted.len().min(200)];
    let sound = verify_stream(head, &fx, None, u64::MAX);
    let complete = verify_stream(&emitted, &fx, Some(&witness), emitted.len() as u64);
    let took = start.elapsed();
    let result = if emitted.len() < 200 {
        Err(format!("{id}: only {} emissions", emitted.len()))
    } else if !sound.passed() {
        Err(format!("{id}: {}", sound.to_json_line()))
    } else if !complete.passed() {
        Err(format!("{id}: {}", complete.to_json_line()))
    } else if took > Duration::from_secs(15 * 60) {
        Err(format!("{id}: {:.1} s over the limit", took.as_secs_f64()))
    } else {
        Ok(format!(
            "{id}: {} emissions in {rounds} rounds, {} witnesses, {:.1} s",
            emitted.len(),
            witness.indices.len(),
            took.as_secs_f64()
        ))
    };
    (emitted, result)
}

// ---------------------------------------------------------------------------
// criterion 6

fn reductions(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let k = 6;
    let tol2 = pow2_neg(k) * pow2_neg(k);
    let mut found = 0;
    for id in ["axis_ray", "polyline_ray_f", "segment", "circle_ray"] {
        let fx = fixture(id);
        let m = fixture_presentation(fx.clone());
        for p in &fx.boundary {
            let iso = Ball::new(p.add(&Point::xy(rat(1, 3), rat(-1, 5))), int(1));
            let got = boundary_point(&m, fixture_boundary(&fx), &iso, k, fx.published.fuel)
                .map_err(|e| format!("{id}: {e}"))?;
            if got.dist2(p) >= tol2 {
                return Err(format!("{id}: recovered point {} is not within 2^-{k}", got.to_field()));
            }
            found += 1;
        }
    }

    // K is the unit circle inside circle ∪ ray, isolated by B̂(0, 2)
    let fx = fixture("circle_ray");
    let circle = fixture("unit_circle");
    let fuel = fx.published.fuel;
    let iso = Ball::new(Point::origin(2), int(2));
    let kset = compact_component_cover(fixture_presentation(fx), vec![iso.clone()]);
    let sl = slack();
    let mut stats = QueryStats::default();
    for _ in 0..50 {
        let s = rat(1, *[2, 4, 8].get(rng.gen_range(0..3)).unwrap());
        let grid: Vec<Ball> = grid_over(&iso, &s).into_iter().filter(|b| circle.curve_intersects(b, false)).collect();
        let mut cover = drop_one(rng, grid);
        if rng.gen_bool(0.2) {
            cover.push(Ball::new(Point::xy(int(4), int(0)), int(1)));
        }
        let truth = circle.curve_cover_check_radius(&iso.center, &iso.radius, &cover);
        let wide = grow(&iso, &sl);
        let slack_truth = circle.curve_cover_check_radius(&wide.center, &wide.radius, &shrink_all(&cover, &sl));
        stats.record(fuel_profile(fuel, |f| kset.covers_balls(&iso, &cover, f)), truth, slack_truth);
    }
    if !stats.clean() {
        return Err(format!("component covers: {}", stats.summary()));
    }
    Ok(format!("{found} boundary points to 2^-{k}; component covers: {}", stats.summary()))
}

// ---------------------------------------------------------------------------
// criterion 8

fn translated(cover: &CertifiedCover, link: usize) -> CertifiedCover {
    let mut c = cover.clone();
    let shift = Point::xy(int(10), int(10));
    c.links[link] = c.links[link].iter().map(|b| Ball::new(b.center.add(&shift), b.radius.clone())).collect();
    c.witness = None;
    c
}

/// Removes every link containing `p`; the later links move down.
fn without_point(cover: &CertifiedCover, p: &Point) -> Option<CertifiedCover> {
    let mut c = cover.clone();
    c.links.retain(|link| !link.iter().any(|b| b.contains(p)));
    c.witness = None;
    (c.links.len() < cover.links.len()).then_some(c)
}

/// Curve points of the region, spread along the parameter.
fn curve_points(fx: &Fixture, region: &Ball) -> Vec<Point> {
    (-64..=64)
        .map(|i| fx.curve.param(&rat(i, 8)))
        .filter(|p| region.closed_contains(p))
        .collect()
}

/// At most `max` positions spread evenly over `0..len`.
fn spread(len: usize, max: usize) -> Vec<usize> {
    if len <= max {
        return (0..len).collect();
    }
    (0..max).map(|i| i * (len - 1) / (max - 1)).collect()
}

fn fault_injection(draws: &[(Arc<Fixture>, DrawRun)], streams: &[(Arc<Fixture>, Vec<BallIndex>)]) -> Result<String, String> {
    let (mut injected, mut detected) = (0, 0);
    let mut missed = Vec::new();
    let mut check = |what: String, result: Outcome| {
        injected += 1;
        if result == Outcome::Fail {
            detected += 1;
        } else {
            missed.push(what);
        }
    };
    for (fx, run) in draws {
        let cover = &run.cover;
        for link in spread(cover.links.len(), 16) {
            check(format!("{} translate {link}", run.label), verify_cover(&translated(cover, link), fx).result);
        }
        let points = curve_points(fx, &cover.region());
        for p in spread(points.len(), 16).into_iter().map(|i| &points[i]) {
            if let Some(c) = without_point(cover, p) {
                check(format!("{} delete at {}", run.label, p.to_field()), verify_cover(&c, fx).result);
            }
        }
    }
    let far = Ball::new(Point::xy(int(1000), int(1000)), int(1)).index();
    for (fx, stream) in streams {
        let head = &stream[..stream.len().min(200)];
        for at in [0, head.len() / 2, head.len()] {
            let mut s = head.to_vec();
            s.insert(at, far.clone());
            check(format!("{} far ball at {at}", fx.id), verify_stream(&s, fx, None, u64::MAX).result);
        }
    }
    if missed.is_empty() && injected > 0 {
        Ok(format!("{detected}/{injected} faults detected"))
    } else {
        Err(format!("{detected}/{injected} detected; missed: {}", missed.join(", ")))
    }
}

// ---------------------------------------------------------------------------

const RAY_DRAWS: [(&str, Mode, u64, u32); 6] = [
    ("axis_ray", Mode::Ray, 1, 2),
    ("axis_ray", Mode::Ray, 2, 3),
    ("axis_ray", Mode::Ray, 4, 5),
    ("polyline_ray_f", Mode::Ray, 1, 2),
    ("polyline_ray_f", Mode::Ray, 2, 3),
    ("polyline_ray_f", Mode::Ray, 4, 5),
];

const LINE_DRAWS: [(&str, Mode, u64, u32); 3] =
    [("axis_line", Mode::Line, 1, 1), ("axis_line", Mode::Line, 2, 2), ("axis_line", Mode::Line, 4, 3)];

const STREAMS: [(&str, Mode); 3] = [("axis_ray", Mode::Ray), ("polyline_ray_f", Mode::Ray), ("axis_line", Mode::Line)];

#[test]
fn acceptance() {
    let mut report = Report { failed: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let start = Instant::now();
    let result = formal_suite(&mut rng);
    let took = start.elapsed();
    let ok = result.is_ok() && took < Duration::from_secs(10);
    report.line(1, "formal predicates", ok, &result.unwrap_or_else(|e| e), took);

    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for id in ["axis_ray", "axis_line", "unit_circle", "polyline_ray_f"] {
        let stats = presentation_suite(&mut rng, id);
        ok &= stats.clean();
        details.push(format!("{id}: {}", stats.summary()));
    }
    let took = start.elapsed();
    for d in &details {
        log(d);
    }
    report.line(2, "presentations", ok && took < Duration::from_secs(60), "4 fixtures x 200 queries", took);

    let start = Instant::now();
    let (rays, errors) = draw_suite(&RAY_DRAWS, 1, Duration::from_secs(5 * 60));
    let detail = if errors.is_empty() { format!("{} covers verified", rays.len()) } else { errors.join("; ") };
    report.line(3, "ray draws", errors.is_empty(), &detail, start.elapsed());

    let start = Instant::now();
    let (lines, errors) = draw_suite(&LINE_DRAWS, 1, Duration::from_secs(10 * 60));
    let detail = if errors.is_empty() { format!("{} covers verified and replayed", lines.len()) } else { errors.join("; ") };
    report.line(4, "line draws", errors.is_empty(), &detail, start.elapsed());

    let start = Instant::now();
    let mut streams = Vec::new();
    let mut ok = true;
    let mut details = Vec::new();
    for (id, mode) in STREAMS {
        let (emitted, result) = enumerate_run(id, mode, 1);
        ok &= result.is_ok();
        details.push(result.unwrap_or_else(|e| e));
        streams.push((fixture(id), emitted));
    }
    for d in &details {
        log(d);
    }
    report.line(5, "enumeration", ok, &format!("{} fixtures", STREAMS.len()), start.elapsed());

    let start = Instant::now();
    let result = reductions(&mut rng);
    let took = start.elapsed();
    let ok = result.is_ok() && took < Duration::from_secs(120);
    report.line(6, "reductions", ok, &result.unwrap_or_else(|e| e), took);

    let start = Instant::now();
    let mut differing = Vec::new();
    let all: Vec<_> = RAY_DRAWS.iter().chain(&LINE_DRAWS).copied().collect();
    let (again, errors) = draw_suite(&all, 4, Duration::from_secs(10 * 60));
    differing.extend(errors);
    let first: Vec<&DrawRun> = rays.iter().chain(&lines).map(|(_, r)| r).collect();
    for run in &again {
        let same = first.iter().any(|r| r.label == run.1.label && r.csv == run.1.csv);
        if !same {
            differing.push(run.1.label.clone());
        }
    }
    for ((id, mode), (_, one)) in STREAMS.iter().zip(&streams) {
        let (four, _) = enumerate_run(id, *mode, 4);
        if &four != one {
            differing.push(format!("{id} stream"));
        }
    }
    let detail = if differing.is_empty() {
        format!("{} covers and {} streams identical", again.len(), STREAMS.len())
    } else {
        format!("differ: {}", differing.join(", "))
    };
    report.line(7, "determinism (1 vs 4 workers)", differing.is_empty(), &detail, start.elapsed());

    let start = Instant::now();
    let draws: Vec<_> = rays.into_iter().chain(lines).collect();
    let result = fault_injection(&draws, &streams);
    report.line(8, "fault injection", result.is_ok(), &result.unwrap_or_else(|e| e), start.elapsed());

    assert!(report.failed.is_empty(), "failed criteria: {:?}", report.failed);
}
