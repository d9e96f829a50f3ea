//! Uniform re-sampling of polylines through a natural cubic spline.

use crate::dynamics::State2D;

/// Second derivatives of the natural cubic spline through `(s, y)`.
fn natural_second_derivatives(s: &[f64], y: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = s[i] - s[i - 1];
        let h1 = s[i + 1] - s[i];
        let a = h0;
        let b = 2.0 * (h0 + h1);
        let c = h1;
        let d = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

fn eval(s: &[f64], y: &[f64], m: &[f64], k: usize, x: f64) -> f64 {
    let h = s[k + 1] - s[k];
    let a = (s[k + 1] - x) / h;
    let b = (x - s[k]) / h;
    a * y[k] + b * y[k + 1] + ((a * a * a - a) * m[k] + (b * b * b - b) * m[k + 1]) * h * h / 6.0
}

/// Drop points closer than `min_gap` to the previously kept one (the last point is always kept).
pub fn dedup(points: &[State2D], min_gap: f64) -> Vec<State2D> {
    let mut out: Vec<State2D> = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        let last = i + 1 == points.len();
        match out.last() {
            Some(&q) if p.distance(q) <= min_gap => {
                if last && out.len() > 1 {
                    *out.last_mut().unwrap() = p;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

/// Resample the polyline at uniform chord-length spacing not exceeding `spacing`.
///
/// The interpolant is a natural cubic spline in the cumulative chord-length
/// parameter, which keeps sharp folds that linear interpolation would cut.
pub fn resample_cubic(points: &[State2D], spacing: f64) -> Vec<State2D> {
    let pts = dedup(points, 1e-3 * spacing);
    if pts.len() < 2 {
        return pts;
    }
    let mut s = Vec::with_capacity(pts.len());
    s.push(0.0);
    for w in pts.windows(2) {
        s.push(s.last().unwrap() + w[0].distance(w[1]));
    }
    let total = *s.last().unwrap();
    let xs: Vec<f64> = pts.iter().map(|p| p.s_n).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.s_t).collect();
    let mx = natural_second_derivatives(&s, &xs);
    let my = natural_second_derivatives(&s, &ys);
    let n = ((total / spacing).ceil() as usize).max(2);
    let mut out = Vec::with_capacity(n + 1);
    let mut k = 0;
    for i in 0..=n {
        let x = if i == n { total } else { total * i as f64 / n as f64 };
        while k + 2 < s.len() && s[k + 1] < x {
            k += 1;
        }
        out.push(State2D::new(eval(&s, &xs, &mx, k, x), eval(&s, &ys, &my, k, x)));
    }
    out
}
