//! Writes the fixture corpus and the witness lists into `fixtures/`.
//!
//! Run with `cargo run -p chaincert --example make_fixtures [out_dir]`.

use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;

use chaincert::ambient::{int, rat, Ball, Point, Rational};
use chaincert::geometry::fixture::{Curve, Fixture, Kind, LineAnchorHint, Published};
use chaincert::verify::witness_scan;

fn p(x: Rational, y: Rational) -> Point {
    Point::xy(x, y)
}

fn pi(x: i64, y: i64) -> Point {
    p(int(x), int(y))
}

fn polyline(kind: Kind, vertices: Vec<Point>) -> Curve {
    Curve { kind, vertices, center: None, radius: None, tolerance: None }
}

fn published(fuel: u64, rounds: Option<u64>, list: Option<&str>) -> Published {
    Published { fuel, enum_rounds: rounds, witness_list: list.map(str::to_string) }
}

fn fixture(id: &str, curve: Curve, published: Published) -> Fixture {
    Fixture {
        id: id.to_string(),
        curve,
        noise: vec![],
        extra: vec![],
        anchors: None,
        boundary: vec![],
        published,
    }
}

/// Rational samples of `r = 1/2 + θ/π` for `θ ∈ [0, π/2]`, rounded to
/// `1/1024`, and a tolerance covering rounding plus chord error.
fn spiral_samples(count: usize) -> (Vec<Point>, Rational) {
    let f = |t: f64| {
        let r = 0.5 + t / std::f64::consts::PI;
        (r * t.cos(), r * t.sin())
    };
    let snap = |v: f64| Rational::new(((v * 1024.0).round() as i64).into(), 1024.into());
    let ts: Vec<f64> = (0..count).map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / (count - 1) as f64).collect();
    let pts: Vec<(f64, f64)> = ts.iter().map(|&t| f(t)).collect();
    let snapped: Vec<Point> = pts.iter().map(|&(x, y)| p(snap(x), snap(y))).collect();
    // distance from dense samples of the spiral to the rational polyline
    let seg_dist = |q: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let s = (((q.0 - a.0) * dx + (q.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        (q.0 - a.0 - s * dx).hypot(q.1 - a.1 - s * dy)
    };
    let sf: Vec<(f64, f64)> = snapped
        .iter()
        .map(|q| (q.x().to_f64().unwrap(), q.y().to_f64().unwrap()))
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..count - 1 {
        for j in 0..=200 {
            let t = ts[i] + (ts[i + 1] - ts[i]) * j as f64 / 200.0;
            worst = worst.max(seg_dist(f(t), sf[i], sf[i + 1]));
        }
    }
    // four times the observed error, rounded up to a power of two
    let mut tol = Rational::new(1.into(), 2.into());
    while tol.clone() / int(2) > Rational::from_float(4.0 * worst).unwrap() {
        tol /= int(2);
    }
    (snapped, tol)
}

fn corpus() -> Vec<Fixture> {
    let mut out = Vec::new();

    let mut ray = fixture(
        "axis_ray",
        polyline(Kind::PolylineRay, vec![pi(0, 0), pi(1, 0)]),
        published(8, Some(25), Some("axis_ray.witness.json")),
    );
    ray.boundary = vec![pi(0, 0)];
    out.push(ray);

    let mut f = fixture("axis_ray_f", polyline(Kind::PolylineRay, vec![pi(0, 0), pi(1, 0)]), published(8, None, None));
    f.noise = vec![Ball::new(pi(0, 5), int(1))];
    out.push(f);

    let mut line = fixture(
        "axis_line",
        polyline(Kind::PolylineLine, vec![pi(0, 0), pi(1, 0)]),
        published(8, Some(21), Some("axis_line.witness.json")),
    );
    let sixteenth = rat(1, 16);
    line.anchors = Some(LineAnchorHint {
        a: pi(0, 0),
        ball_a: Ball::new(p(rat(-3, 4), int(0)), sixteenth.clone()).index(),
        ball_b: Ball::new(p(rat(3, 4), int(0)), sixteenth.clone()).index(),
        ball_c: Ball::new(pi(0, 0), sixteenth).index(),
        k0: 1,
        delta: rat(3, 4),
    });
    out.push(line);

    out.push(fixture(
        "unit_circle",
        Curve { kind: Kind::Circle, vertices: vec![], center: Some(pi(0, 0)), radius: Some(int(1)), tolerance: None },
        published(8, None, None),
    ));

    let mut poly = fixture(
        "polyline_ray_f",
        polyline(
            Kind::PolylineRay,
            vec![
                pi(0, 0),
                p(int(1), rat(1, 2)),
                pi(2, 1),
                pi(3, 1),
                p(int(4), rat(1, 2)),
                pi(5, 0),
                p(int(6), rat(-1, 2)),
                pi(7, -1),
            ],
        ),
        published(8, Some(48), Some("polyline_ray_f.witness.json")),
    );
    poly.noise = vec![Ball::new(pi(3, -1), rat(1, 2))];
    poly.boundary = vec![pi(0, 0)];
    out.push(poly);

    let mut cr = fixture(
        "circle_ray",
        Curve { kind: Kind::Circle, vertices: vec![], center: Some(pi(0, 0)), radius: Some(int(1)), tolerance: None },
        published(8, None, None),
    );
    cr.extra = vec![polyline(Kind::PolylineRay, vec![pi(4, 0), pi(5, 0)])];
    cr.boundary = vec![pi(4, 0)];
    out.push(cr);

    let mut seg = fixture("segment", polyline(Kind::PolylineArc, vec![pi(0, 0), pi(3, 0)]), published(8, None, None));
    seg.boundary = vec![pi(0, 0), pi(3, 0)];
    out.push(seg);

    let (mut samples, tol) = spiral_samples(17);
    // continue along the last chord as the tangent ray
    let n = samples.len();
    let last = samples[n - 1].clone();
    let dir = last.sub(&samples[n - 2]);
    samples.push(last.add(&dir));
    let mut spiral = fixture(
        "spiral_ray",
        Curve { kind: Kind::SpiralSegment, vertices: samples, center: None, radius: None, tolerance: Some(tol) },
        published(8, None, None),
    );
    spiral.boundary = vec![spiral.curve.vertices[0].clone()];
    out.push(spiral);

    out
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&dir).expect("create fixture dir");
    for fx in corpus() {
        let text = fx.to_json();
        Fixture::from_json(&text).expect("generated fixture validates");
        std::fs::write(dir.join(format!("{}.json", fx.id)), &text).expect("write fixture");
        if let Some(name) = &fx.published.witness_list {
            let list = witness_scan(&fx, 5000, &rat(1, 8));
            eprintln!("{}: {} witness indices", fx.id, list.indices.len());
            std::fs::write(dir.join(name), list.to_json()).expect("write witness list");
        }
        eprintln!("wrote {}", fx.id);
    }
}
