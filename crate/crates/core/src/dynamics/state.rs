use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Vector-space operations the integrators need from a model state.
pub trait Phase:
    Copy
    + Send
    + Sync
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
{
    const DIM: usize;

    fn component(&self, i: usize) -> f64;

    fn is_finite(&self) -> bool {
        (0..Self::DIM).all(|i| self.component(i).is_finite())
    }

    fn norm(&self) -> f64 {
        (0..Self::DIM)
            .map(|i| self.component(i).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl Phase for f64 {
    const DIM: usize = 1;

    fn component(&self, i: usize) -> f64 {
        debug_assert_eq!(i, 0);
        *self
    }
}

/// Rescaled (Northern, Tropical) salinity pair `100 (S_i - S0)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State2D {
    pub s_n: f64,
    pub s_t: f64,
}

impl State2D {
    pub const fn new(s_n: f64, s_t: f64) -> Self {
        Self { s_n, s_t }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.s_n * other.s_n + self.s_t * other.s_t
    }

    /// z-component of the 2-D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.s_n * other.s_t - self.s_t * other.s_n
    }

    pub fn norm(self) -> f64 {
        self.s_n.hypot(self.s_t)
    }

    pub fn is_finite(self) -> bool {
        self.s_n.is_finite() && self.s_t.is_finite()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn unit(self) -> Self {
        self * (1.0 / self.norm())
    }

    /// Rotate by +90 degrees.
    pub fn perp(self) -> Self {
        Self::new(-self.s_t, self.s_n)
    }
}

impl Add for State2D {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.s_n + rhs.s_n, self.s_t + rhs.s_t)
    }
}

impl AddAssign for State2D {
    fn add_assign(&mut self, rhs: Self) {
        self.s_n += rhs.s_n;
        self.s_t += rhs.s_t;
    }
}

impl Sub for State2D {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.s_n - rhs.s_n, self.s_t - rhs.s_t)
    }
}

impl Mul<f64> for State2D {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.s_n * k, self.s_t * k)
    }
}

impl Neg for State2D {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.s_n, -self.s_t)
    }
}

impl Phase for State2D {
    const DIM: usize = 2;

    fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.s_n,
            1 => self.s_t,
            _ => panic!("State2D has two components, asked for {i}"),
        }
    }

    fn norm(&self) -> f64 {
        self.s_n.hypot(self.s_t)
    }
}

/// Axis-aligned rectangle in the rescaled (S_N, S_T) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseWindow {
    pub s_n_min: f64,
    pub s_n_max: f64,
    pub s_t_min: f64,
    pub s_t_max: f64,
}

impl Default for PhaseWindow {
    fn default() -> Self {
        Self {
            s_n_min: -3.0,
            s_n_max: 1.0,
            s_t_min: -1.5,
            s_t_max: 1.5,
        }
    }
}

impl PhaseWindow {
    pub fn contains(&self, x: State2D) -> bool {
        (self.s_n_min..=self.s_n_max).contains(&x.s_n)
            && (self.s_t_min..=self.s_t_max).contains(&x.s_t)
    }

    pub fn center(&self) -> State2D {
        State2D::new(
            0.5 * (self.s_n_min + self.s_n_max),
            0.5 * (self.s_t_min + self.s_t_max),
        )
    }

    /// Scale both side lengths by `factor` about the centre.
    pub fn enlarged(&self, factor: f64) -> Self {
        let c = self.center();
        let hn = 0.5 * (self.s_n_max - self.s_n_min) * factor;
        let ht = 0.5 * (self.s_t_max - self.s_t_min) * factor;
        Self {
            s_n_min: c.s_n - hn,
            s_n_max: c.s_n + hn,
            s_t_min: c.s_t - ht,
            s_t_max: c.s_t + ht,
        }
    }

    pub fn corners_ccw(&self) -> [State2D; 4] {
        [
            State2D::new(self.s_n_min, self.s_t_min),
            State2D::new(self.s_n_max, self.s_t_min),
            State2D::new(self.s_n_max, self.s_t_max),
            State2D::new(self.s_n_min, self.s_t_max),
        ]
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * ((self.s_n_max - self.s_n_min) + (self.s_t_max - self.s_t_min))
    }

    /// Nearest point on the window boundary.
    pub fn project_to_boundary(&self, x: State2D) -> State2D {
        let c = State2D::new(
            x.s_n.clamp(self.s_n_min, self.s_n_max),
            x.s_t.clamp(self.s_t_min, self.s_t_max),
        );
        if !self.contains(x) {
            return c;
        }
        let gaps = [
            (c.s_n - self.s_n_min, State2D::new(self.s_n_min, c.s_t)),
            (self.s_n_max - c.s_n, State2D::new(self.s_n_max, c.s_t)),
            (c.s_t - self.s_t_min, State2D::new(c.s_n, self.s_t_min)),
            (self.s_t_max - c.s_t, State2D::new(c.s_n, self.s_t_max)),
        ];
        gaps.iter()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|g| g.1)
            .unwrap_or(c)
    }

    /// Counter-clockwise perimeter coordinate of a boundary point, starting at
    /// the (min, min) corner.
    pub fn perimeter_coordinate(&self, b: State2D) -> f64 {
        let w = self.s_n_max - self.s_n_min;
        let h = self.s_t_max - self.s_t_min;
        let eps = 1e-12 * (w + h);
        if (b.s_t - self.s_t_min).abs() <= eps && b.s_n < self.s_n_max - eps {
            b.s_n - self.s_n_min
        } else if (b.s_n - self.s_n_max).abs() <= eps && b.s_t < self.s_t_max - eps {
            w + (b.s_t - self.s_t_min)
        } else if (b.s_t - self.s_t_max).abs() <= eps && b.s_n > self.s_n_min + eps {
            w + h + (self.s_n_max - b.s_n)
        } else {
            2.0 * w + h + (self.s_t_max - b.s_t)
        }
    }
}

/// Dense 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(&self, v: State2D) -> State2D {
        State2D::new(
            self.a11 * v.s_n + self.a12 * v.s_t,
            self.a21 * v.s_n + self.a22 * v.s_t,
        )
    }

    /// Solve `self * x = b`; `None` when singular.
    pub fn solve(&self, b: State2D) -> Option<State2D> {
        let det = self.det();
        let scale = self.a11.abs().max(self.a12.abs()).max(self.a21.abs()).max(self.a22.abs());
        if det.abs() <= f64::EPSILON * scale * scale || !det.is_finite() {
            return None;
        }
        Some(State2D::new(
            (self.a22 * b.s_n - self.a12 * b.s_t) / det,
            (self.a11 * b.s_t - self.a21 * b.s_n) / det,
        ))
    }

    /// Eigenvalues as (re, im) pairs, larger real part first.
    pub fn eigenvalues(&self) -> [(f64, f64); 2] {
        let half_tr = 0.5 * self.trace();
        let disc = half_tr * half_tr - self.det();
        if disc >= 0.0 {
            let r = disc.sqrt();
            [(half_tr + r, 0.0), (half_tr - r, 0.0)]
        } else {
            let r = (-disc).sqrt();
            [(half_tr, r), (half_tr, -r)]
        }
    }

    /// Unit eigenvector for a real eigenvalue.
    pub fn eigenvector(&self, lambda: f64) -> State2D {
        let v1 = State2D::new(self.a12, lambda - self.a11);
        let v2 = State2D::new(lambda - self.a22, self.a21);
        let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
        if v.norm() == 0.0 {
            // Scalar multiple of the identity: every direction is an eigenvector.
            State2D::new(1.0, 0.0)
        } else {
            v.unit()
        }
    }
}
