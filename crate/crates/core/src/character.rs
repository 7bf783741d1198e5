//! Trace coordinates on SL₂ⁿ⁻¹ modulo simultaneous conjugation.
//!
//! Single, pair and triple traces generate the invariant ring. For four
//! points the pair traces `x₁ = tr M₂M₃`, `x₂ = tr M₃M₁`, `x₃ = tr M₁M₂`
//! satisfy the Fricke cubic
//!
//! `x₁x₂x₃ + x₁² + x₂² + x₃² − θ₁x₁ − θ₂x₂ − θ₃x₃ + θ₄ = 0`
//!
//! with `θᵢ = aᵢa₄ + aⱼaₖ` for cyclic `(i, j, k)` and
//! `θ₄ = a₁a₂a₃a₄ + Σ aᵢ² − 4`.
//!
//! Fingerprints detect Jordan equivalence, i.e. equality of
//! semisimplifications, not isomorphism: a unipotent tuple and the identity
//! tuple have the same fingerprint.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, C64, ONE, ZERO};
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const SAMPLE_RETRIES: usize = 32;

/// `(M₁, …, M_{n−1})` with determinant one.
#[derive(Clone, Debug, PartialEq)]
pub struct RepTuple {
    matrices: Vec<Matrix2>,
}

impl RepTuple {
    pub fn new(matrices: Vec<Matrix2>, tol: f64) -> Result<Self> {
        for (i, m) in matrices.iter().enumerate() {
            let dev = (m.det() - ONE).norm();
            if dev > tol {
                return Err(Error::InvalidInput(format!(
                    "matrix {i} has |det − 1| = {dev:e}"
                )));
            }
        }
        Ok(Self { matrices })
    }

    pub fn unchecked(matrices: Vec<Matrix2>) -> Self {
        Self { matrices }
    }

    pub fn identity(len: usize) -> Self {
        Self::unchecked(vec![Matrix2::identity(); len])
    }

    pub fn matrices(&self) -> &[Matrix2] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn product(&self) -> Matrix2 {
        self.matrices.iter().copied().product()
    }

    pub fn conjugated(&self, g: &Matrix2) -> Option<Self> {
        let ms = self
            .matrices
            .iter()
            .map(|m| m.conjugate_by(g))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::unchecked(ms))
    }

    /// `|tr Mᵢ − aᵢ|` for `i < n`, and `|tr(M₁⋯M_{n−1}) − a_n|`.
    pub fn trace_residual(&self, a: &[C64]) -> f64 {
        let mut worst = (self.product().trace() - a[a.len() - 1]).norm();
        for (m, &ai) in self.matrices.iter().zip(a) {
            worst = worst.max((m.trace() - ai).norm());
        }
        worst
    }
}

/// Inverse of an SL₂ matrix. Exact for integer entries.
fn sl2_inverse(m: &Matrix2) -> Matrix2 {
    m.adjugate()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceCoordinates {
    /// `a₁ … a_n`; the last is the trace of the inverse product.
    pub a: Vec<C64>,
    /// `tr(MᵢMⱼ)` for `i < j`, 0-based.
    pub pairs: Vec<((usize, usize), C64)>,
    /// `tr(MᵢMⱼMₖ)` for `i < j < k`, 0-based.
    pub triples: Vec<((usize, usize, usize), C64)>,
}

impl TraceCoordinates {
    /// Named entries, `a1 …`, `x12 …`, `x123 …`, with 1-based labels.
    pub fn entries(&self) -> Vec<(String, C64)> {
        let mut out: Vec<(String, C64)> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("a{}", i + 1), v))
            .collect();
        out.extend(
            self.pairs
                .iter()
                .map(|&((i, j), v)| (format!("x{}{}", i + 1, j + 1), v)),
        );
        out.extend(
            self.triples
                .iter()
                .map(|&((i, j, k), v)| (format!("x{}{}{}", i + 1, j + 1, k + 1), v)),
        );
        out
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<C64> {
        let key = (i.min(j), i.max(j));
        self.pairs.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }

    /// `(x₁, x₂, x₃)` for four points.
    pub fn fricke_x(&self) -> Option<[C64; 3]> {
        if self.a.len() != 4 {
            return None;
        }
        Some([self.pair(1, 2)?, self.pair(2, 0)?, self.pair(0, 1)?])
    }

    /// The seven coordinates `a₁ … a₄, x₁, x₂, x₃` for four points.
    pub fn fricke_coordinates(&self) -> Option<Vec<(String, C64)>> {
        let x = self.fricke_x()?;
        let mut out: Vec<(String, C64)> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("a{}", i + 1), v))
            .collect();
        out.extend(
            x.iter()
                .enumerate()
                .map(|(i, &v)| (format!("x{}", i + 1), v)),
        );
        Some(out)
    }

    pub fn max_abs_diff(&self, other: &TraceCoordinates) -> f64 {
        let a = self.entries();
        let b = other.entries();
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter()
            .zip(&b)
            .map(|((_, x), (_, y))| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self) -> f64 {
        self.entries()
            .iter()
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

pub fn invariant_fingerprint(rep: &RepTuple) -> TraceCoordinates {
    let m = rep.matrices();
    let k = m.len();
    let mut a: Vec<C64> = m.iter().map(|x| x.trace()).collect();
    a.push(sl2_inverse(&rep.product()).trace());
    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mij = m[i] * m[j];
            pairs.push(((i, j), mij.trace()));
            for (l, ml) in m.iter().enumerate().skip(j + 1) {
                triples.push(((i, j, l), (mij * *ml).trace()));
            }
        }
    }
    TraceCoordinates { a, pairs, triples }
}

/// Whether all fingerprint entries agree within `tol`.
pub fn jordan_equivalent(rep1: &RepTuple, rep2: &RepTuple, tol: f64) -> bool {
    rep1.len() == rep2.len()
        && invariant_fingerprint(rep1).max_abs_diff(&invariant_fingerprint(rep2)) <= tol
}

pub fn theta_coefficients(a: &[C64; 4]) -> [C64; 4] {
    let [a1, a2, a3, a4] = *a;
    [
        a1 * a4 + a2 * a3,
        a2 * a4 + a3 * a1,
        a3 * a4 + a1 * a2,
        a1 * a2 * a3 * a4 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 - 4.0,
    ]
}

pub fn fricke_eval(x: &[C64; 3], a: &[C64; 4]) -> C64 {
    let t = theta_coefficients(a);
    let [x1, x2, x3] = *x;
    x1 * x2 * x3 + x1 * x1 + x2 * x2 + x3 * x3 - t[0] * x1 - t[1] * x2 - t[2] * x3 + t[3]
}

fn fricke_gradient(x: &[C64; 3], t: &[C64; 4]) -> [C64; 3] {
    let [x1, x2, x3] = *x;
    [
        x2 * x3 + x1 * 2.0 - t[0],
        x3 * x1 + x2 * 2.0 - t[1],
        x1 * x2 + x3 * 2.0 - t[2],
    ]
}

/// `aᵢ = 2cos(2πλᵢ)`.
pub fn mu_map(lambda: &[C64]) -> Vec<C64> {
    lambda
        .iter()
        .map(|&l| (l * (2.0 * PI)).cos() * 2.0)
        .collect()
}

const GRID: usize = 5;
const COMPLEX_STARTS: usize = 25;
const MERGE_DISTANCE: f64 = 1e-6;

/// Singular points of the Fricke cubic: `∇f = 0` is solved by Newton from a
/// real seed grid and seeded complex starts, and critical points with
/// `|f| ≤ tol` are kept.
pub fn find_fricke_singular_points(a: &[C64; 4], tol: f64) -> Vec<[C64; 3]> {
    let t = theta_coefficients(a);
    let mut seeds: Vec<[C64; 3]> = Vec::new();
    let grid: Vec<f64> = (0..GRID)
        .map(|k| -3.0 + 6.0 * k as f64 / (GRID - 1) as f64)
        .collect();
    for &u in &grid {
        for &v in &grid {
            for &w in &grid {
                seeds.push([C64::from(u), C64::from(v), C64::from(w)]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xf41c);
    for _ in 0..COMPLEX_STARTS {
        let mut z = || C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        seeds.push([z(), z(), z()]);
    }
    let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(4);
    let candidates: Vec<Option<[C64; 3]>> =
        seeds.par_iter().map(|s| critical_point(*s, &t)).collect();
    let mut found: Vec<[C64; 3]> = Vec::new();
    for x in candidates.into_iter().flatten() {
        let grad = fricke_gradient(&x, &t)
            .iter()
            .map(|g| g.norm())
            .fold(0.0, f64::max);
        let f = fricke_eval(&x, a).norm();
        if grad <= tol && f <= tol * scale {
            let dup = found
                .iter()
                .any(|y| (0..3).all(|k| (x[k] - y[k]).norm() <= MERGE_DISTANCE));
            if !dup {
                found.push(x);
            }
        }
    }
    found.sort_by(|p, q| {
        p.iter()
            .zip(q)
            .map(|(u, v)| u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found
}

fn critical_point(mut x: [C64; 3], t: &[C64; 4]) -> Option<[C64; 3]> {
    for _ in 0..200 {
        let g = fricke_gradient(&x, t);
        let gn = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !gn.is_finite() || gn > 1e12 {
            return None;
        }
        let h = Matrix3::new(
            C64::from(2.0),
            x[2],
            x[1],
            x[2],
            C64::from(2.0),
            x[0],
            x[1],
            x[0],
            C64::from(2.0),
        );
        // Least-squares step: the Hessian is singular at degenerate points.
        let step = h
            .svd(true, true)
            .solve(&Vector3::new(g[0], g[1], g[2]), 1e-14)
            .ok()?;
        for k in 0..3 {
            x[k] -= step[k];
        }
        if step.iter().map(|z| z.norm()).fold(0.0, f64::max)
            <= 1e-15 * (1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max))
        {
            break;
        }
    }
    Some(x)
}

fn random_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random SL₂ matrix with trace `t`.
fn random_with_trace<R: Rng>(t: C64, rng: &mut R) -> Matrix2 {
    loop {
        let x = random_c(rng);
        let y = random_c(rng);
        if y.norm() < 0.1 {
            continue;
        }
        let z = (x * (t - x) - ONE) / y;
        return Matrix2::new(x, y, z, t - x);
    }
}

/// A tuple `(M₁, …, M_{n−1})` with `tr Mᵢ = aᵢ` and
/// `tr(M₁⋯M_{n−1}) = a_n`.
///
/// `M₂ … M_{n−1}` are drawn at random with the right traces. Writing
/// `N = M₂⋯M_{n−1}` and `M₁ = [[x, y], [z, a₁ − x]]`, the remaining
/// conditions in homogeneous coordinates `(x, y, z, w)` are the plane
/// `(f₁ − f₄)x + f₃y + f₂z + (a₁f₄ − a_n)w = 0` and the quadric
/// `x² − a₁xw + w² + yz = 0`. Their intersection is a conic, parametrized
/// rationally from one point on it.
pub fn sample_fiber_point(a: &[C64], seed: u64) -> Result<RepTuple> {
    let n = a.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 traces, got {n}"
        )));
    }
    let identity = RepTuple::identity(n - 1);
    if identity.trace_residual(a) <= 1e-10 {
        return Ok(identity);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = String::new();
    for _ in 0..SAMPLE_RETRIES {
        let rest: Vec<Matrix2> = a[1..n - 1]
            .iter()
            .map(|&t| random_with_trace(t, &mut rng))
            .collect();
        let nmat: Matrix2 = rest.iter().copied().product();
        match solve_first(a[0], a[n - 1], &nmat, &mut rng) {
            Ok(m1) => {
                let mut ms = vec![m1];
                ms.extend(rest);
                let rep = RepTuple::unchecked(ms);
                let det = rep
                    .matrices()
                    .iter()
                    .map(|m| (m.det() - ONE).norm())
                    .fold(0.0, f64::max);
                let tr = rep.trace_residual(a);
                if det <= 1e-10 && tr <= 1e-10 {
                    return Ok(rep);
                }
                witness = format!("constraint residual {:e}", det.max(tr));
            }
            Err(w) => witness = w,
        }
    }
    Err(Error::RetryBudgetExhausted {
        attempts: SAMPLE_RETRIES,
        witness,
    })
}

fn solve_first<R: Rng>(
    a1: C64,
    an: C64,
    nmat: &Matrix2,
    rng: &mut R,
) -> std::result::Result<Matrix2, String> {
    let [f1, f2, f3, f4] = nmat.entries();
    // Coordinates ordered (x, y, z, w).
    let plane = [f1 - f4, f3, f2, a1 * f4 - an];
    let mut quad = [[ZERO; 4]; 4];
    quad[0][0] = ONE;
    quad[0][3] = -a1 * 0.5;
    quad[3][0] = -a1 * 0.5;
    quad[3][3] = ONE;
    quad[1][2] = C64::from(0.5);
    quad[2][1] = C64::from(0.5);
    let pivot = (0..4)
        .max_by(|&i, &j| plane[i].norm().total_cmp(&plane[j].norm()))
        .expect("four coordinates");
    if plane[pivot].norm() < 1e-12 {
        return Err("trace condition is independent of the first matrix".into());
    }
    // X = P·u with u ∈ ℂ³ the coordinates other than the pivot.
    let free: Vec<usize> = (0..4).filter(|&k| k != pivot).collect();
    let mut p = [[ZERO; 3]; 4];
    for (c, &k) in free.iter().enumerate() {
        p[k][c] = ONE;
        p[pivot][c] = -plane[k] / plane[pivot];
    }
    let mut s = Matrix3::<C64>::zeros();
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    acc += p[i][r] * quad[i][j] * p[j][c];
                }
            }
            s[(r, c)] = acc;
        }
    }
    let smax = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if s.determinant().norm() <= 1e-10 * smax.powi(3) {
        return Err(format!(
            "degenerate conic (det {:e})",
            s.determinant().norm()
        ));
    }
    let q = |u: &Vector3<C64>| (u.transpose() * s * u)[(0, 0)];
    let b = |u: &Vector3<C64>, v: &Vector3<C64>| (u.transpose() * s * v)[(0, 0)];
    // A point on the conic with its third coordinate zero, or an axis if
    // the restricted form vanishes there.
    let p0 = if s[(0, 0)].norm() <= 1e-14 * smax {
        Vector3::new(ONE, ZERO, ZERO)
    } else {
        let r = crate::poly::quadratic_roots(s[(0, 0)], s[(0, 1)] * 2.0, s[(1, 1)]);
        Vector3::new(r[rng.gen_range(0..2)], ONE, ZERO)
    };
    for _ in 0..8 {
        let d = Vector3::new(random_c(rng), random_c(rng), random_c(rng));
        let u = p0 * q(&d) - d * (b(&p0, &d) * 2.0);
        let mut x = [ZERO; 4];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (0..3).map(|c| p[i][c] * u[c]).sum();
        }
        let unorm = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if x[3].norm() <= 1e-6 * unorm {
            continue;
        }
        let w = x[3];
        let m1 = Matrix2::new(x[0] / w, x[1] / w, x[2] / w, a1 - x[0] / w);
        if m1.max_abs() > 1e6 {
            continue;
        }
        return Ok(m1);
    }
    Err("conic points at w = 0 only".into())
}

/// Largest `|g(s + h) − 2g(s) + g(s − h)|` over the four entries of `Mᵢ`,
/// where `g` is the trace of the product with that entry replaced by `s`.
/// Zero up to roundoff, since the trace is affine in each entry.
pub fn multiaffine_check(rep: &RepTuple, i: usize, h: f64) -> f64 {
    second_difference(rep, i, h, |g| g)
}

/// The same second difference for `g²`, which is not affine.
pub fn multiaffine_control(rep: &RepTuple, i: usize, h: f64) -> f64 {
    second_difference(rep, i, h, |g| g * g)
}

fn second_difference(rep: &RepTuple, i: usize, h: f64, f: impl Fn(C64) -> C64) -> f64 {
    let m = rep.matrices();
    let trace_with = |entry: usize, v: C64| {
        let mut e = m[i].entries();
        e[entry] = v;
        let mut ms = m.to_vec();
        ms[i] = Matrix2::from_entries(e);
        f(ms.iter().copied().product::<Matrix2>().trace())
    };
    (0..4)
        .map(|entry| {
            let s = m[i].entries()[entry];
            (trace_with(entry, s + h) - trace_with(entry, s) * 2.0 + trace_with(entry, s - h))
                .norm()
        })
        .fold(0.0, f64::max)
}

/// Hurwitz move `σₖ` on positions `k, k + 1` (0-based):
/// `(Mₖ, Mₖ₊₁) ↦ (MₖMₖ₊₁Mₖ⁻¹, Mₖ)`, or its inverse
/// `(Mₖ, Mₖ₊₁) ↦ (Mₖ₊₁, Mₖ₊₁⁻¹MₖMₖ₊₁)`.
pub fn braid_act(rep: &RepTuple, k: usize, inverse: bool) -> Result<RepTuple> {
    if k + 1 >= rep.len() {
        return Err(Error::InvalidInput(format!(
            "braid generator {k} out of range for {} matrices",
            rep.len()
        )));
    }
    let mut ms = rep.matrices().to_vec();
    let (p, q) = (ms[k], ms[k + 1]);
    if inverse {
        ms[k] = q;
        ms[k + 1] = sl2_inverse(&q) * p * q;
    } else {
        ms[k] = p * q * sl2_inverse(&p);
        ms[k + 1] = p;
    }
    Ok(RepTuple::unchecked(ms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I};

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    #[test]
    fn identity_fingerprint() {
        let f = invariant_fingerprint(&RepTuple::identity(3));
        assert!(f.entries().iter().all(|(_, v)| *v == r(2.0)));
    }

    #[test]
    fn worked_tuple_matches_products() {
        let m1 = Matrix2::real(0.0, 1.0, -1.0, 0.0);
        let m2 = Matrix2::new(ZERO, I, I, ZERO);
        let rep = RepTuple::new(vec![m1, m2, m1], 1e-12).unwrap();
        let f = invariant_fingerprint(&rep);
        assert_eq!(f.a[..3], [ZERO, ZERO, ZERO]);
        assert_eq!(f.pair(0, 1), Some((m1 * m2).trace()));
        assert_eq!(f.pair(0, 2), Some(r(-2.0)));
        assert_eq!(f.a[3], (m1 * m2 * m1).adjugate().trace());
        let x = f.fricke_x().unwrap();
        let a: [C64; 4] = f.a.clone().try_into().unwrap();
        assert!(fricke_eval(&x, &a).norm() < 1e-12);
    }

    #[test]
    fn jordan_equivalence() {
        let u = Matrix2::real(1.0, 1.0, 0.0, 1.0);
        let unip = RepTuple::unchecked(vec![u, u, u]);
        assert!(jordan_equivalent(&unip, &RepTuple::identity(3), 1e-12));
        let rot = RepTuple::unchecked(vec![Matrix2::real(0.0, 1.0, -1.0, 0.0), u, u]);
        assert!(!jordan_equivalent(&rot, &RepTuple::identity(3), 1e-6));
        let g = Matrix2::real(2.0, 1.0, 1.0, 1.0);
        assert!(jordan_equivalent(&rot, &rot.conjugated(&g).unwrap(), 1e-12));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(
            theta_coefficients(&[r(2.0); 4]),
            [r(8.0), r(8.0), r(8.0), r(28.0)]
        );
        assert_eq!(theta_coefficients(&[ZERO; 4]), [ZERO, ZERO, ZERO, r(-4.0)]);
        assert_eq!(
            theta_coefficients(&[r(1.0), ZERO, ZERO, ZERO]),
            [ZERO, ZERO, ZERO, r(-3.0)]
        );
    }

    #[test]
    fn fricke_examples() {
        assert_eq!(fricke_eval(&[r(2.0); 3], &[r(2.0); 4]), ZERO);
        assert_eq!(fricke_eval(&[r(-2.0); 3], &[ZERO; 4]), ZERO);
    }

    #[test]
    fn mu_map_examples() {
        let a = mu_map(&[ZERO, r(0.5), r(1.0 / 6.0)]);
        assert!((a[0] - r(2.0)).norm() < 1e-15);
        assert!((a[1] - r(-2.0)).norm() < 1e-15);
        assert!((a[2] - r(1.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_points_of_zero_a() {
        let pts = find_fricke_singular_points(&[ZERO; 4], 1e-8);
        let expect = [
            [-2.0, -2.0, -2.0],
            [-2.0, 2.0, 2.0],
            [2.0, -2.0, 2.0],
            [2.0, 2.0, -2.0],
        ];
        assert_eq!(pts.len(), 4, "{pts:?}");
        for e in expect {
            assert!(pts
                .iter()
                .any(|p| (0..3).all(|k| (p[k] - r(e[k])).norm() < 1e-8)));
        }
    }

    #[test]
    fn singular_points_of_trivial_a() {
        // (2, 2, 2) is a degenerate critical point, so Newton only pins it
        // down to about the square root of machine precision.
        let pts = find_fricke_singular_points(&[r(2.0); 4], 1e-8);
        assert!(
            pts.iter()
                .any(|p| (0..3).all(|k| (p[k] - r(2.0)).norm() < MERGE_DISTANCE)),
            "{pts:?}"
        );
    }

    #[test]
    fn generic_a_has_no_singular_points() {
        let lambda: Vec<C64> = [0.11, 0.23, 0.37, 0.41].iter().map(|&x| r(x)).collect();
        let a: [C64; 4] = mu_map(&lambda).try_into().unwrap();
        assert!(find_fricke_singular_points(&a, 1e-8).is_empty());
    }

    #[test]
    fn sampling_examples() {
        assert_eq!(
            sample_fiber_point(&[r(2.0); 4], 1).unwrap(),
            RepTuple::identity(3)
        );
        let rep = sample_fiber_point(&[ZERO; 4], 1).unwrap();
        assert!(rep.trace_residual(&[ZERO; 4]) <= 1e-10);
        let a = mu_map(&[r(0.11), r(0.23), r(0.37), r(0.41)]);
        let rep = sample_fiber_point(&a, 9).unwrap();
        assert!(rep.trace_residual(&a) <= 1e-10);
    }

    #[test]
    fn multiaffine_on_worked_tuple() {
        let m1 = Matrix2::real(0.0, 1.0, -1.0, 0.0);
        let m2 = Matrix2::new(ZERO, I, I, ZERO);
        let rep = RepTuple::unchecked(vec![m1, m2, Matrix2::real(2.0, 1.0, 1.0, 1.0)]);
        for i in 0..3 {
            assert!(multiaffine_check(&rep, i, 1.0) < 1e-12);
            assert!(multiaffine_control(&rep, i, 1.0) > 1e-3);
        }
        assert_eq!(multiaffine_check(&RepTuple::identity(3), 1, 1.0), 0.0);
    }

    #[test]
    fn braid_examples() {
        let id = RepTuple::identity(3);
        assert_eq!(braid_act(&id, 0, false).unwrap(), id);
        let a = Matrix2::real(2.0, 1.0, 1.0, 1.0);
        let b = Matrix2::real(1.0, 3.0, 0.0, 1.0);
        let cm = Matrix2::real(1.0, 0.0, -2.0, 1.0);
        let rep = RepTuple::unchecked(vec![a, b, cm]);
        for k in 0..2 {
            let there = braid_act(&rep, k, false).unwrap();
            assert_eq!(braid_act(&there, k, true).unwrap(), rep);
            assert_eq!(there.product(), rep.product());
        }
        let s = braid_act(&rep, 0, false).unwrap();
        let f = invariant_fingerprint(&s);
        assert_eq!(
            f.a,
            vec![
                b.trace(),
                a.trace(),
                cm.trace(),
                invariant_fingerprint(&rep).a[3]
            ]
        );
    }
}
