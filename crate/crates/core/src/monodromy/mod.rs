//! The forward Riemann–Hilbert map: monodromy of a Fuchsian system along
//! canonical generator loops, by adaptive transport of the fundamental
//! matrix. No logarithm branches are taken anywhere.
//!
//! Loops are lassos from a common basepoint. Simple lassos ordered by the
//! angle of their tails satisfy the product relation in that geometric
//! order; they are then brought into the user's point order by Hurwitz
//! moves, which replace a pair `(γₖ, γₖ₊₁)` by `(γₖγₖ₊₁γₖ⁻¹, γₖ)`. A
//! different point order therefore changes the representation by the
//! corresponding braid, and a different basepoint by a conjugation; trace
//! invariants of single loops are unaffected.

mod path;

pub use path::{Path, Segment};

use crate::character::{invariant_fingerprint, RepTuple, TraceCoordinates};
use crate::error::{Error, Result};
use crate::fuchsian::{safety_radius, ExponentBookkeeping, FuchsianSystem, ParabolicConnection};
use crate::linalg::{Matrix2, C64};
use crate::ode::{self, OdeStats};
use crate::Tolerances;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// A letter of a loop word: index into the simple lassos and exponent ±1.
pub type Letter = (usize, i8);

#[derive(Clone, Debug, PartialEq)]
pub struct LoopBasis {
    pub basepoint: C64,
    pub radius: f64,
    pub points: Vec<C64>,
    /// Loop `i` encircles `points[i]`.
    pub loops: Vec<Path>,
    /// Loop `i` as a word in the simple lassos, in matrix order: the
    /// transport along loop `i` is the product of the letters' transports
    /// read left to right.
    pub words: Vec<Vec<Letter>>,
    /// Point index of each simple lasso, in the order whose transports
    /// multiply to the identity.
    pub simple_order: Vec<usize>,
}

impl LoopBasis {
    /// `winding[i][j]` is the winding number of loop `i` around point `j`,
    /// computed from the path geometry.
    pub fn winding_matrix(&self) -> Vec<Vec<i64>> {
        self.loops
            .iter()
            .map(|l| self.points.iter().map(|&p| l.winding_number(p)).collect())
            .collect()
    }

    /// The freely reduced word of the concatenation of all loops.
    pub fn composite_word(&self) -> Vec<Letter> {
        reduce(self.words.concat())
    }

    /// Whether the concatenated loops reduce to the boundary relator, i.e.
    /// are null-homotopic once the point at infinity is filled in.
    pub fn composite_is_relator(&self) -> bool {
        let relator: Vec<Letter> = (0..self.points.len()).map(|k| (k, 1)).collect();
        self.composite_word() == relator
    }
}

fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&(k, e)| (k, -e)).collect()
}

fn reduce(word: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for l in word {
        match out.last() {
            Some(&(k, e)) if k == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

fn tails_clear(base: C64, points: &[C64], r: f64) -> bool {
    points.iter().enumerate().all(|(i, &t)| {
        if (base - t).norm() <= 2.0 * r {
            return false;
        }
        let tail = Segment::Line {
            from: base,
            to: t + (base - t) / (base - t).norm() * r,
        };
        points
            .iter()
            .enumerate()
            .all(|(j, &p)| j == i || tail.distance_to(p) >= 1.5 * r)
    })
}

/// Smallest distance from a straight tail to a point it does not end at.
fn tail_clearance(base: C64, points: &[C64]) -> f64 {
    let mut clear = f64::INFINITY;
    for (i, &t) in points.iter().enumerate() {
        let tail = Segment::Line { from: base, to: t };
        for (j, &p) in points.iter().enumerate() {
            if j != i {
                clear = clear.min(tail.distance_to(p));
            }
        }
    }
    clear
}

/// Canonical generator loops for distinct finite points. Without an
/// explicit basepoint, one is chosen far out in the direction whose
/// geometric order needs the shortest Hurwitz words. [`monodromy_of`]
/// chooses better, since it can look at the system.
pub fn canonical_loops(points: &[C64], basepoint: Option<C64>) -> Result<LoopBasis> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("no points to encircle".into()));
    }
    let r = safety_radius(points);
    let max_mod = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if r.is_nan() || r < 1e-7 * (1.0 + max_mod) {
        return Err(Error::RadiusUnderflow { radius: r });
    }
    match basepoint {
        Some(b) => {
            if !tails_clear(b, points, r) {
                return Err(Error::BasepointObstructed {
                    basepoint: b.to_string(),
                });
            }
            Ok(loops_from(points, b, r))
        }
        None => auto_loops(points, r),
    }
}

fn loops_from(points: &[C64], base: C64, r: f64) -> LoopBasis {
    let n = points.len();
    // Counterclockwise order of the tails, starting after the widest gap.
    let angles: Vec<f64> = points.iter().map(|&t| (t - base).arg()).collect();
    let mut ccw: Vec<usize> = (0..n).collect();
    ccw.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
    let gap = |k: usize| {
        let a = angles[ccw[k]];
        let b = if k + 1 < n {
            angles[ccw[k + 1]]
        } else {
            angles[ccw[0]] + TAU
        };
        b - a
    };
    let widest = (0..n)
        .max_by(|&a, &b| gap(a).total_cmp(&gap(b)))
        .unwrap_or(0);
    ccw.rotate_left((widest + 1) % n);
    // Traversing the lassos counterclockwise in turn gives the boundary
    // loop; in matrix order the last traversed comes first.
    let simple_order: Vec<usize> = ccw.into_iter().rev().collect();

    let mut labels = simple_order.clone();
    let mut loops: Vec<Path> = simple_order
        .iter()
        .map(|&i| Path::lasso(base, points[i], r))
        .collect();
    let mut words: Vec<Vec<Letter>> = (0..n).map(|k| vec![(k, 1)]).collect();
    // Bubble sort into point order with Hurwitz moves.
    for pass in 0..n {
        for k in 0..n - 1 - pass.min(n - 1) {
            if labels[k] > labels[k + 1] {
                let new_path = loops[k].reversed().then(&loops[k + 1]).then(&loops[k]);
                let new_word = reduce(
                    [
                        words[k].clone(),
                        words[k + 1].clone(),
                        inverse_word(&words[k]),
                    ]
                    .concat(),
                );
                loops[k + 1] = std::mem::replace(&mut loops[k], new_path);
                words[k + 1] = std::mem::replace(&mut words[k], new_word);
                labels.swap(k, k + 1);
            }
        }
    }
    debug_assert!(labels.iter().enumerate().all(|(k, &l)| k == l));
    LoopBasis {
        basepoint: base,
        radius: r,
        points: points.to_vec(),
        loops,
        words,
        simple_order,
    }
}

const DIRECTIONS: usize = 36;

/// Unobstructed basepoints on a circle twice the diameter beyond the
/// points, straight below first and then alternating outwards.
fn basepoint_candidates(points: &[C64], r: f64) -> Vec<C64> {
    let n = points.len() as f64;
    let diam = points
        .iter()
        .flat_map(|a| points.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max)
        .max(1.0);
    let center = points.iter().sum::<C64>() / n;
    let reach = points
        .iter()
        .map(|p| (p - center).norm())
        .fold(0.0, f64::max)
        + 2.0 * diam;
    (0..DIRECTIONS)
        .map(|k| {
            let m = k.div_ceil(2) as f64 * if k % 2 == 1 { 1.0 } else { -1.0 };
            center + C64::from_polar(reach, -PI / 2.0 + m * TAU / DIRECTIONS as f64)
        })
        .filter(|&b| tails_clear(b, points, r))
        .collect()
}

/// The candidate with the least total word length, then the widest
/// clearance between tails and the other points.
fn auto_loops(points: &[C64], r: f64) -> Result<LoopBasis> {
    let mut best: Option<(usize, f64, LoopBasis)> = None;
    for b in basepoint_candidates(points, r) {
        let basis = loops_from(points, b, r);
        let cost: usize = basis.words.iter().map(Vec::len).sum();
        let clear = tail_clearance(b, points);
        let better = match &best {
            None => true,
            Some((c, cl, _)) => cost < *c || (cost == *c && clear > *cl * 1.05),
        };
        if better {
            best = Some((cost, clear, basis));
        }
    }
    best.map(|(_, _, b)| b)
        .ok_or_else(|| Error::BasepointObstructed {
            basepoint: "every candidate on the outer circle".into(),
        })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transport {
    pub matrix: Matrix2,
    pub stats: OdeStats,
    /// `|det Y − exp(∫ tr A dz)|`.
    pub det_deviation: f64,
}

/// Fundamental matrix `Y(end)` with `Y(start) = I`.
pub fn transport(sys: &FuchsianSystem, path: &Path, tol: f64) -> Result<Matrix2> {
    transport_detailed(sys, path, tol).map(|t| t.matrix)
}

pub fn transport_detailed(sys: &FuchsianSystem, path: &Path, tol: f64) -> Result<Transport> {
    let poles = sys.finite_points();
    let radius = sys.safety_radius();
    for &(i, t) in &poles {
        let d = path.distance_to(t);
        if d < 0.99 * radius {
            return Err(Error::PoleProximity {
                pole: i,
                distance: d,
                radius,
            });
        }
    }
    let mut y = Matrix2::identity().entries().to_vec();
    let mut stats = OdeStats::default();
    for seg in path.segments() {
        let rhs = |s: f64, y: &[C64], dy: &mut [C64]| {
            let a = sys.connection_matrix(seg.point(s)).scale(seg.tangent(s));
            let prod = a * Matrix2::from_entries([y[0], y[1], y[2], y[3]]);
            dy.copy_from_slice(&prod.entries());
        };
        let (next, st) = ode::integrate(rhs, 0.0, 1.0, y, tol)?;
        y = next;
        stats.merge(st);
    }
    let matrix = Matrix2::from_entries([y[0], y[1], y[2], y[3]]);
    let log_det: C64 = poles
        .iter()
        .map(|&(i, t)| sys.residue(i).trace() * path.log_integral(t))
        .sum();
    let expected = log_det.exp();
    let det_deviation = (matrix.det() - expected).norm();
    if det_deviation > 100.0 * tol * expected.norm().max(1.0) {
        return Err(Error::DeterminantDrift {
            deviation: det_deviation,
        });
    }
    Ok(Transport {
        matrix,
        stats,
        det_deviation,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyRep {
    /// One matrix per marked point, in point order.
    pub matrices: Vec<Matrix2>,
    pub basepoint: C64,
    /// Largest accepted local error estimate, in units of the state.
    pub local_error: f64,
    pub det_residual: f64,
    pub relation_residual: f64,
    pub trace_residual: f64,
}

impl MonodromyRep {
    /// The first `n − 1` matrices.
    pub fn rep_tuple(&self) -> RepTuple {
        RepTuple::unchecked(self.matrices[..self.matrices.len() - 1].to_vec())
    }
}

/// Monodromy along `loops`, which must have been built for the finite
/// points of `sys` in order. A marked `∞` must be the last point; its
/// matrix is `(M₁⋯M_{n−1})⁻¹`.
pub fn compute_monodromy(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    loops: &LoopBasis,
    tols: &Tolerances,
) -> Result<MonodromyRep> {
    let n = sys.n();
    if let Some(k) = sys.infinity_index() {
        if k + 1 != n {
            return Err(Error::InvalidInput(
                "the marked point at infinity must be listed last".into(),
            ));
        }
    }
    if loops.points != sys.finite_poles() {
        return Err(Error::InvalidInput(
            "loop basis was built for different points".into(),
        ));
    }
    if book.lambda.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} exponents for {n} marked points",
            book.lambda.len()
        )));
    }
    // Each simple lasso is the conjugate of its circle by its tail, so tail
    // errors cannot perturb the local traces. Loops are then assembled from
    // their words.
    let simple = loops
        .simple_order
        .par_iter()
        .map(|&i| {
            simple_lasso(
                sys,
                loops.basepoint,
                loops.points[i],
                loops.radius,
                tols.integrator,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let local_error = simple.iter().map(|(_, e)| *e).fold(0.0, f64::max) * tols.integrator;
    let mut matrices: Vec<Matrix2> = loops
        .words
        .iter()
        .map(|w| {
            w.iter()
                .map(|&(k, e)| {
                    if e > 0 {
                        simple[k].0
                    } else {
                        sl2_inverse(&simple[k].0)
                    }
                })
                .product()
        })
        .collect();
    if sys.infinity_index().is_some() {
        let prod: Matrix2 = matrices.iter().copied().product();
        // det ≈ 1, so the adjugate is the inverse.
        matrices.push(prod.inverse().unwrap_or_else(|| prod.adjugate()));
    }

    let det_residual = matrices
        .iter()
        .map(|m| (m.det() - 1.0).norm())
        .fold(0.0, f64::max);
    let relation_residual =
        (matrices.iter().copied().product::<Matrix2>() - Matrix2::identity()).max_abs();
    let trace_residual = matrices
        .iter()
        .zip(&book.lambda)
        .map(|(m, &l)| (m.trace() - local_trace(l)).norm())
        .fold(0.0, f64::max);
    for (check, residual) in [
        ("det = 1", det_residual),
        ("product relation", relation_residual),
        ("local exponent trace", trace_residual),
    ] {
        if residual.is_nan() || residual > tols.verify {
            return Err(Error::MonodromyCheck {
                check,
                residual,
                tolerance: tols.verify,
            });
        }
    }
    Ok(MonodromyRep {
        matrices,
        basepoint: loops.basepoint,
        local_error,
        det_residual,
        relation_residual,
        trace_residual,
    })
}

fn simple_lasso(
    sys: &FuchsianSystem,
    base: C64,
    pole: C64,
    r: f64,
    tol: f64,
) -> Result<(Matrix2, f64)> {
    let dir = (base - pole) / (base - pole).norm();
    let entry = pole + dir * r;
    let tail = transport_detailed(
        sys,
        &Path::new(vec![Segment::Line {
            from: base,
            to: entry,
        }])?,
        tol,
    )?;
    let circle = Path::new(vec![Segment::Arc {
        center: pole,
        radius: r,
        start: dir.arg(),
        sweep: TAU,
    }])?;
    let around = transport_detailed(sys, &circle, tol)?;
    let back = tail.matrix.inverse().ok_or(Error::DeterminantDrift {
        deviation: tail.det_deviation,
    })?;
    let err = tail.stats.max_error.max(around.stats.max_error);
    Ok((back * around.matrix * tail.matrix, err))
}

fn sl2_inverse(m: &Matrix2) -> Matrix2 {
    m.inverse().unwrap_or_else(|| m.adjugate())
}

/// `2cos(2πλ)`.
pub fn local_trace(lambda: C64) -> C64 {
    (lambda * (2.0 * PI)).cos() * 2.0
}

/// Monodromy along canonical loops from the candidate basepoint whose
/// matrices come out smallest. The representation only changes by a braid
/// and a conjugation between candidates, but the frame does not: a badly
/// conditioned one inflates every entry, and rounding and integration
/// errors with it.
pub fn monodromy_of(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    tols: &Tolerances,
) -> Result<MonodromyRep> {
    let points = sys.finite_poles();
    let fallback = canonical_loops(&points, None)?;
    let size = |rep: &MonodromyRep| {
        rep.matrices
            .iter()
            .map(|m| m.frobenius())
            .fold(0.0, f64::max)
    };
    let best = basepoint_candidates(&points, fallback.radius)
        .par_iter()
        .filter_map(|&b| {
            let rep = compute_monodromy(sys, book, &loops_from(&points, b, fallback.radius), tols)
                .ok()?;
            Some((size(&rep), rep))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0));
    match best {
        Some((_, rep)) => Ok(rep),
        None => compute_monodromy(sys, book, &fallback, tols),
    }
}

/// Monodromy with canonical loops from `basepoint`, or as in
/// [`monodromy_of`].
pub fn monodromy_from(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    basepoint: Option<C64>,
    tols: &Tolerances,
) -> Result<MonodromyRep> {
    match basepoint {
        Some(b) => compute_monodromy(
            sys,
            book,
            &canonical_loops(&sys.finite_poles(), Some(b))?,
            tols,
        ),
        None => monodromy_of(sys, book, tols),
    }
}

/// Trace coordinates of the monodromy of `conn`.
pub fn riemann_hilbert(conn: &ParabolicConnection, tols: &Tolerances) -> Result<TraceCoordinates> {
    let rep = monodromy_of(&conn.system, &conn.book, tols)?;
    Ok(invariant_fingerprint(&rep.rep_tuple()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I};

    #[test]
    fn two_poles_identity_winding() {
        let lb = canonical_loops(&[c(0.0, 0.0), c(1.0, 0.0)], None).unwrap();
        assert_eq!(lb.loops.len(), 2);
        assert_eq!(lb.winding_matrix(), vec![vec![1, 0], vec![0, 1]]);
        assert!(lb.composite_is_relator());
    }

    #[test]
    fn three_poles_fixed_basepoint() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let lb = canonical_loops(&pts, Some(c(0.0, -3.0))).unwrap();
        assert_eq!(lb.basepoint, c(0.0, -3.0));
        assert_eq!(
            lb.winding_matrix(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        let total: Vec<i64> = (0..3)
            .map(|j| lb.winding_matrix().iter().map(|r| r[j]).sum())
            .collect();
        assert_eq!(total, vec![1, 1, 1]);
        assert!(lb.composite_is_relator());
        for l in &lb.loops {
            assert!(
                (l.start() - lb.basepoint).norm() < 1e-12
                    && (l.end() - lb.basepoint).norm() < 1e-12
            );
        }
    }

    #[test]
    fn radius_underflow() {
        assert!(matches!(
            canonical_loops(&[c(0.0, 0.0), c(1e-9, 0.0)], None),
            Err(Error::RadiusUnderflow { .. })
        ));
    }

    #[test]
    fn vertical_poles_shift_basepoint() {
        let pts = [c(0.0, 0.0), c(0.0, 1.0), c(0.0, 2.0)];
        let lb = canonical_loops(&pts, None).unwrap();
        assert_eq!(
            lb.winding_matrix(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn single_pole_circle_closed_form() {
        let sys = FuchsianSystem::with_infinity(
            vec![c(0.0, 0.0)],
            vec![Matrix2::real(0.25, 0.0, 0.0, -0.25)],
        )
        .unwrap();
        let m = transport(&sys, &Path::circle(c(0.0, 0.0), 1.0), 1e-10).unwrap();
        assert!((m - Matrix2::diag(I, -I)).max_abs() < 1e-8, "{m:?}");
    }

    #[test]
    fn zero_residues_transport_identity() {
        let sys =
            FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![Matrix2::zero(); 2])
                .unwrap();
        let p = Path::new(vec![Segment::Line {
            from: c(-1.0, -1.0),
            to: c(3.0, 2.0),
        }])
        .unwrap();
        assert!((transport(&sys, &p, 1e-10).unwrap() - Matrix2::identity()).max_abs() < 1e-14);
    }

    #[test]
    fn pole_proximity_rejected() {
        let sys =
            FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![Matrix2::zero(); 2])
                .unwrap();
        let p = Path::new(vec![Segment::Line {
            from: c(-1.0, 0.0),
            to: c(0.5, 0.0),
        }])
        .unwrap();
        assert!(matches!(
            transport(&sys, &p, 1e-10),
            Err(Error::PoleProximity { pole: 0, .. })
        ));
    }

    #[test]
    fn commuting_diagonal_closed_form() {
        let l = [0.1, 0.2, 0.3];
        let res: Vec<_> = l.iter().map(|&x| Matrix2::real(x, 0.0, 0.0, -x)).collect();
        let sys = FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], res)
            .unwrap();
        let book = ExponentBookkeeping::traceless(vec![
            c(0.1, 0.0),
            c(0.2, 0.0),
            c(0.3, 0.0),
            c(-0.6, 0.0),
        ]);
        let rep = monodromy_of(&sys, &book, &Tolerances::default()).unwrap();
        for (m, &x) in rep.matrices.iter().zip(&[0.1, 0.2, 0.3, -0.6]) {
            let e = (I * (2.0 * PI * x)).exp();
            assert!((*m - Matrix2::diag(e, e.inv())).max_abs() < 1e-8, "{m:?}");
        }
    }

    #[test]
    fn generic_system_local_traces() {
        use crate::fuchsian::{random_connection, SpherePoint};
        let lambda: Vec<C64> = [0.11, 0.23, 0.37, 0.41]
            .iter()
            .map(|&x| c(x, 0.0))
            .collect();
        for (seed, pts) in [
            (
                1,
                vec![
                    SpherePoint::Finite(c(0.0, 0.0)),
                    SpherePoint::Finite(c(1.0, 0.0)),
                    SpherePoint::Finite(c(2.0, 0.0)),
                    SpherePoint::Infinity,
                ],
            ),
            (
                2,
                (0..4)
                    .map(|k| SpherePoint::Finite(c(k as f64, (k * k) as f64 * 0.3)))
                    .collect(),
            ),
        ] {
            let conn = random_connection(pts, lambda.clone(), seed).unwrap();
            let rep = monodromy_of(&conn.system, &conn.book, &Tolerances::default()).unwrap();
            assert!(
                rep.trace_residual < 1e-6
                    && rep.relation_residual < 1e-6
                    && rep.det_residual < 1e-8,
                "{rep:?}"
            );
        }
    }
}
