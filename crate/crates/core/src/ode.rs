//! Classical fourth-order Runge–Kutta with a fixed step.

use std::ops::{Add, Mul};

/// One RK4 step of `y' = f(t, y)`. Works for any state that forms a vector
/// space over `f64` (fixed-size arrays via [`Vector`], nalgebra matrices, ...).
pub fn rk4_step<S, F>(f: &mut F, t: f64, y: &S, h: f64) -> S
where
    S: Clone + Add<Output = S> + Mul<f64, Output = S>,
    F: FnMut(f64, &S) -> S,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &(y.clone() + k1.clone() * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y.clone() + k2.clone() * (0.5 * h)));
    let k4 = f(t + h, &(y.clone() + k3.clone() * h));
    y.clone() + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Fixed-length state vector with the arithmetic [`rk4_step`] needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> Vector<N> {
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}
