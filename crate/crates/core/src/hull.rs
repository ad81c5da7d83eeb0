//! Planar convex hulls and point queries.

pub type Point2 = [f64; 2];

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Point2) -> f64 {
    a[0].hypot(a[1])
}

/// Twice the signed area of triangle `o, a, b`; positive for a left turn.
pub fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    let (u, v) = (sub(a, o), sub(b, o));
    u[0] * v[1] - u[1] * v[0]
}

/// Andrew's monotone chain.
///
/// Returns hull vertices counterclockwise starting at the lexicographically
/// smallest point. A point whose distance to the chord through its neighbours
/// is at most `tol` is dropped, as are duplicates within `tol`. Degenerate
/// inputs yield one vertex (all points coincide) or two (all collinear).
pub fn convex_hull(points: &[Point2], tol: f64) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| norm(sub(*a, *b)) <= tol);
    if pts.len() < 3 {
        return pts;
    }

    let keep_turn = |chain: &[Point2], p: Point2| {
        let n = chain.len();
        let (o, a) = (chain[n - 2], chain[n - 1]);
        // distance of `a` from the chord o->p, signed left-positive
        cross(o, a, p) > tol * norm(sub(p, o))
    };

    let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !keep_turn(&lower, p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keep_turn(&upper, p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    // Collinear input collapses to its two extremes.
    if lower.len() == 2 && norm(sub(lower[0], lower[1])) <= tol {
        lower.truncate(1);
    }
    lower
}

/// Shoelace area of a counterclockwise polygon.
pub fn polygon_area(vertices: &[Point2]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    0.5 * twice
}

/// Euclidean distance from `p` to segment `ab`.
pub fn segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return norm(sub(p, a));
    }
    let ap = sub(p, a);
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

/// Distance from `p` to a convex polygon given counterclockwise; zero inside.
pub fn distance_to_polygon(vertices: &[Point2], p: Point2) -> f64 {
    match vertices.len() {
        0 => f64::INFINITY,
        1 => norm(sub(p, vertices[0])),
        2 => segment_distance(vertices[0], vertices[1], p),
        n => {
            let inside = (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], p) >= 0.0);
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(vertices[i], vertices[(i + 1) % n], p))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Signed distance of `p` to the left of each directed edge, minimum over edges.
///
/// Positive means strictly inside a counterclockwise polygon. Only meaningful
/// for polygons with at least three vertices.
pub fn min_edge_clearance(vertices: &[Point2], p: Point2) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            cross(a, b, p) / norm(sub(b, a))
        })
        .fold(f64::INFINITY, f64::min)
}
