//! 2×2 complex matrices and projective lines in the fiber ℂ².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub m: [[C64; 2]; 2],
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Matrix2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn scalar(s: C64) -> Self {
        Self::diag(s, s)
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `g · self · g⁻¹`; `None` when `g` is singular.
    pub fn conjugate_by(&self, g: &Self) -> Option<Self> {
        Some(*g * *self * g.inverse()?)
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]
    }

    pub fn from_entries(e: [C64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    /// Both eigenvalues `(tr ± √(tr² − 4 det))/2`, the first with the `+`
    /// sign. The smaller root is recovered from `det` to avoid cancellation.
    pub fn eigenvalues(&self) -> (C64, C64) {
        let tr = self.trace();
        let det = self.det();
        let disc = (tr * tr - det * 4.0).sqrt();
        let plus = (tr + disc) * 0.5;
        let minus = (tr - disc) * 0.5;
        if plus.norm() >= minus.norm() {
            let other = if plus.norm() == 0.0 { ZERO } else { det / plus };
            (plus, other)
        } else {
            (det / minus, minus)
        }
    }

    /// An eigenvector for `eigenvalue`, taken as the dominant column of
    /// `self − other·I` (Cayley–Hamilton). Returns `None` when that matrix
    /// vanishes relative to `tol`, i.e. the residue is scalar.
    pub fn eigenline(&self, eigenvalue: C64, tol: f64) -> Option<ParabolicLine> {
        let other = self.trace() - eigenvalue;
        let b = *self - Matrix2::scalar(other);
        let scale = 1.0 + self.max_abs();
        let c0 = [b.m[0][0], b.m[1][0]];
        let c1 = [b.m[0][1], b.m[1][1]];
        let n0 = c0[0].norm() + c0[1].norm();
        let n1 = c1[0].norm() + c1[1].norm();
        if n0.max(n1) <= tol * scale {
            // Fall back to the kernel of (self − eigenvalue·I): its rows are
            // annihilated by the eigenvector.
            let k = *self - Matrix2::scalar(eigenvalue);
            let r0 = [k.m[0][0], k.m[0][1]];
            let r1 = [k.m[1][0], k.m[1][1]];
            let (r, nr) = if r0[0].norm() + r0[1].norm() >= r1[0].norm() + r1[1].norm() {
                (r0, r0[0].norm() + r0[1].norm())
            } else {
                (r1, r1[0].norm() + r1[1].norm())
            };
            if nr <= tol * scale {
                return None;
            }
            return Some(ParabolicLine::new(-r[1], r[0]));
        }
        Some(if n0 >= n1 {
            ParabolicLine::new(c0[0], c0[1])
        } else {
            ParabolicLine::new(c1[0], c1[1])
        })
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl AddAssign for Matrix2 {
    fn add_assign(&mut self, o: Matrix2) {
        *self = *self + o;
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        self + (-o)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(-ONE)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        let a = &self.m;
        let b = &o.m;
        Matrix2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, s: C64) -> Matrix2 {
        self.scale(s)
    }
}

impl std::iter::Sum for Matrix2 {
    fn sum<It: Iterator<Item = Matrix2>>(iter: It) -> Matrix2 {
        iter.fold(Matrix2::zero(), |acc, m| acc + m)
    }
}

impl std::iter::Product for Matrix2 {
    fn product<It: Iterator<Item = Matrix2>>(iter: It) -> Matrix2 {
        iter.fold(Matrix2::identity(), |acc, m| acc * m)
    }
}

/// A point `[u : v]` of ℙ¹ = ℙ(ℂ²), kept with its largest coordinate equal
/// to one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicLine {
    u: C64,
    v: C64,
}

impl ParabolicLine {
    /// Normalizes `[u : v]`. Panics on the zero vector, which is not a
    /// projective point.
    pub fn new(u: C64, v: C64) -> Self {
        assert!(
            u.norm() > 0.0 || v.norm() > 0.0,
            "[0:0] is not a point of the projective line"
        );
        if u.norm() >= v.norm() {
            Self { u: ONE, v: v / u }
        } else {
            Self { u: u / v, v: ONE }
        }
    }

    pub fn try_new(u: C64, v: C64) -> Option<Self> {
        if (u.norm() > 0.0 || v.norm() > 0.0) && u.is_finite() && v.is_finite() {
            Some(Self::new(u, v))
        } else {
            None
        }
    }

    pub fn first_axis() -> Self {
        Self { u: ONE, v: ZERO }
    }

    pub fn second_axis() -> Self {
        Self { u: ZERO, v: ONE }
    }

    pub fn vector(&self) -> [C64; 2] {
        [self.u, self.v]
    }

    /// `|u₁v₂ − u₂v₁|` of the normalized representatives.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.u * other.v - self.v * other.u).norm()
    }

    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn transformed(&self, g: &Matrix2) -> Option<Self> {
        let w = g.apply(self.vector());
        Self::try_new(w[0], w[1])
    }
}

/// `det[a, b]` for column vectors.
pub fn wedge(a: [C64; 2], b: [C64; 2]) -> C64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_triangular() {
        let a = Matrix2::real(0.3, 1.0, 0.0, -0.3);
        let (x, y) = a.eigenvalues();
        let mut v = [x.re, y.re];
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 0.3).abs() < 1e-15 && (v[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn eigenline_of_jordan_block() {
        let a = Matrix2::real(0.0, 1.0, 0.0, 0.0);
        let l = a.eigenline(ZERO, 1e-12).unwrap();
        assert!(l.same_as(&ParabolicLine::first_axis(), 1e-15));
    }

    #[test]
    fn eigenline_of_scalar_is_none() {
        assert!(Matrix2::scalar(c(0.5, 0.0))
            .eigenline(c(0.5, 0.0), 1e-12)
            .is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = Matrix2::new(c(1.0, 2.0), c(0.5, -1.0), c(-0.3, 0.1), c(2.0, 0.0));
        let p = a * a.inverse().unwrap();
        assert!((p - Matrix2::identity()).max_abs() < 1e-14);
    }
}
