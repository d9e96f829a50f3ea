//! Planar segment predicates used by the parity test.

use crate::dynamics::State2D;

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: State2D, a: State2D, b: State2D) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    None,
    Transversal,
    /// Touches a vertex or overlaps collinearly within tolerance.
    Degenerate,
}

/// Classify how segment `[p, q]` meets edge `[a, b]`.
///
/// Edge endpoints lying within `tol` of `[p, q]` count as degenerate, as do
/// overlapping collinear segments; otherwise a proper crossing is transversal.
pub fn classify_crossing(p: State2D, q: State2D, a: State2D, b: State2D, tol: f64) -> Crossing {
    let seg_len = p.distance(q);
    if seg_len == 0.0 {
        return Crossing::None;
    }
    let d = q - p;
    let e = b - a;
    // Fast reject on bounding boxes.
    if a.s_n.max(b.s_n) < p.s_n.min(q.s_n) - tol
        || a.s_n.min(b.s_n) > p.s_n.max(q.s_n) + tol
        || a.s_t.max(b.s_t) < p.s_t.min(q.s_t) - tol
        || a.s_t.min(b.s_t) > p.s_t.max(q.s_t) + tol
    {
        return Crossing::None;
    }
    if point_segment_distance(a, p, q) <= tol || point_segment_distance(b, p, q) <= tol {
        return Crossing::Degenerate;
    }
    let denom = d.cross(e);
    let ap = a - p;
    if denom.abs() <= tol * seg_len * e.norm() {
        // Parallel; endpoints were already tested against [p, q], so the only
        // remaining overlap is the edge containing all of [p, q].
        if point_segment_distance(p, a, b) <= tol && point_segment_distance(q, a, b) <= tol {
            return Crossing::Degenerate;
        }
        return Crossing::None;
    }
    let s = ap.cross(e) / denom;
    let u = ap.cross(d) / denom;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) {
        Crossing::Transversal
    } else {
        Crossing::None
    }
}

/// Standard even-odd point-in-polygon test (polygon implicitly closed).
pub fn even_odd_contains(polygon: &[State2D], x: State2D) -> bool {
    let n = polygon.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (pi, pj) = (polygon[i], polygon[j]);
        if (pi.s_t > x.s_t) != (pj.s_t > x.s_t)
            && x.s_n < (pj.s_n - pi.s_n) * (x.s_t - pi.s_t) / (pj.s_t - pi.s_t) + pi.s_n
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: f64, b: f64) -> State2D {
        State2D::new(a, b)
    }

    #[test]
    fn distance_cases() {
        assert_eq!(point_segment_distance(s(0.0, 1.0), s(-1.0, 0.0), s(1.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(s(3.0, 4.0), s(0.0, 0.0), s(0.0, 0.0)), 5.0);
        assert_eq!(point_segment_distance(s(2.0, 0.0), s(-1.0, 0.0), s(1.0, 0.0)), 1.0);
    }

    #[test]
    fn crossing_cases() {
        let tol = 1e-9;
        let (p, q) = (s(0.0, 0.0), s(2.0, 0.0));
        assert_eq!(classify_crossing(p, q, s(1.0, -1.0), s(1.0, 1.0), tol), Crossing::Transversal);
        assert_eq!(classify_crossing(p, q, s(3.0, -1.0), s(3.0, 1.0), tol), Crossing::None);
        assert_eq!(classify_crossing(p, q, s(1.0, 0.0), s(1.0, 1.0), tol), Crossing::Degenerate);
        assert_eq!(classify_crossing(p, q, s(0.5, 0.0), s(1.5, 0.0), tol), Crossing::Degenerate);
        assert_eq!(classify_crossing(p, q, s(0.0, 1.0), s(2.0, 1.0), tol), Crossing::None);
        assert_eq!(classify_crossing(p, p, s(0.0, -1.0), s(0.0, 1.0), tol), Crossing::None);
    }

    #[test]
    fn square_contains_centre() {
        let sq = [s(0.0, 0.0), s(1.0, 0.0), s(1.0, 1.0), s(0.0, 1.0)];
        assert!(even_odd_contains(&sq, s(0.5, 0.5)));
        assert!(!even_odd_contains(&sq, s(1.5, 0.5)));
    }
}
