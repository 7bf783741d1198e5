//! Isomonodromic deformation: the Schlesinger system for residues of
//! `dY/dz = Σ Aᵢ/(z − tᵢ)·Y` as the poles move,
//!
//! `∂Aᵢ/∂tₖ = [Aᵢ, Aₖ]/(tᵢ − tₖ)` for `i ≠ k`, `∂Aₖ/∂tₖ = −Σᵢ≠ₖ [Aₖ, Aᵢ]/(tₖ − tᵢ)`.
//!
//! For four points this is Painlevé VI, for more points a Garnier system.
//! The flows commute, so several poles moving at once superpose. A pole at
//! `∞` stays fixed and never enters the right-hand side.

use crate::character::{invariant_fingerprint, TraceCoordinates};
use crate::error::{Error, Result};
use crate::fuchsian::{min_pairwise_distance, ExponentBookkeeping, FuchsianSystem, SpherePoint};
use crate::linalg::{Matrix2, C64};
use crate::monodromy::{monodromy_from, monodromy_of};
use crate::ode::{self, OdeStats};
use crate::poly::Poly;
use crate::Tolerances;
use rayon::prelude::*;

/// Collisions are declared at this fraction of the initial minimal gap.
pub const COLLISION_FRACTION: f64 = 1e-3;

/// Finite poles and their residues, with the fixed exponent data. A marked
/// `∞` is implicit and, when present, the last marked point.
#[derive(Clone, Debug, PartialEq)]
pub struct SchlesingerState {
    pub poles: Vec<C64>,
    pub residues: Vec<Matrix2>,
    pub infinity: bool,
    pub book: ExponentBookkeeping,
    /// Poles closer than this count as colliding.
    pub collision_radius: f64,
}

impl SchlesingerState {
    pub fn from_system(sys: &FuchsianSystem, book: &ExponentBookkeeping) -> Result<Self> {
        if let Some(k) = sys.infinity_index() {
            if k + 1 != sys.n() {
                return Err(Error::InvalidInput(
                    "the marked point at infinity must be listed last".into(),
                ));
            }
        }
        let poles = sys.finite_poles();
        let gap = min_pairwise_distance(&poles).unwrap_or(1.0);
        Ok(Self {
            residues: sys.finite_residues(),
            infinity: sys.infinity_index().is_some(),
            book: book.clone(),
            collision_radius: COLLISION_FRACTION * gap,
            poles,
        })
    }

    /// Exponent data is read off the residues: `λᵢ` is the first eigenvalue
    /// and `μᵢ` the rounded trace.
    pub fn new(poles: Vec<C64>, residues: Vec<Matrix2>, infinity: bool) -> Result<Self> {
        let sys = if infinity {
            FuchsianSystem::with_infinity(poles, residues)?
        } else {
            FuchsianSystem::finite(poles, residues)?
        };
        let lambda = sys.residues().iter().map(|a| a.eigenvalues().0).collect();
        let mu: Vec<i64> = sys
            .residues()
            .iter()
            .map(|a| a.trace().re.round() as i64)
            .collect();
        let deg_l = -mu.iter().sum::<i64>();
        Self::from_system(&sys, &ExponentBookkeeping::new(lambda, mu, deg_l))
    }

    pub fn system(&self) -> Result<FuchsianSystem> {
        if self.infinity {
            FuchsianSystem::with_infinity(self.poles.clone(), self.residues.clone())
        } else {
            FuchsianSystem::finite(self.poles.clone(), self.residues.clone())
        }
    }

    pub fn points(&self) -> Vec<SpherePoint> {
        let mut pts: Vec<SpherePoint> =
            self.poles.iter().map(|&t| SpherePoint::Finite(t)).collect();
        if self.infinity {
            pts.push(SpherePoint::Infinity);
        }
        pts
    }

    /// The same residues at other poles; the control experiment for
    /// isomonodromy.
    pub fn with_poles(&self, poles: Vec<C64>) -> Self {
        Self {
            poles,
            ..self.clone()
        }
    }

    fn flat(&self) -> Vec<C64> {
        self.residues.iter().flat_map(|a| a.entries()).collect()
    }

    fn advanced(&self, poles: Vec<C64>, y: &[C64]) -> Self {
        let residues = y
            .chunks_exact(4)
            .map(|c| Matrix2::from_entries([c[0], c[1], c[2], c[3]]))
            .collect();
        Self {
            poles,
            residues,
            ..self.clone()
        }
    }
}

fn check_gaps(poles: &[C64], radius: f64) -> Result<()> {
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            if (poles[i] - poles[j]).norm() < radius {
                return Err(Error::PoleCollision {
                    i,
                    j,
                    s_star: f64::NAN,
                });
            }
        }
    }
    Ok(())
}

fn rhs_into(poles: &[C64], res: &[Matrix2], v: &[C64], out: &mut [Matrix2]) {
    for o in out.iter_mut() {
        *o = Matrix2::zero();
    }
    for i in 0..poles.len() {
        for k in i + 1..poles.len() {
            let dv = v[k] - v[i];
            if dv == C64::default() {
                continue;
            }
            // The (i, k) and (k, i) terms are negatives of each other.
            let term = res[i].commutator(&res[k]).scale(dv / (poles[i] - poles[k]));
            out[i] += term;
            out[k] += -term;
        }
    }
}

/// `dAᵢ/ds` when pole `k` moves with velocity `v[k]`:
/// `Σₖ≠ᵢ [Aᵢ, Aₖ]·(vₖ − vᵢ)/(tᵢ − tₖ)`.
pub fn schlesinger_rhs_velocities(
    state: &SchlesingerState,
    velocities: &[C64],
) -> Result<Vec<Matrix2>> {
    if velocities.len() != state.poles.len() {
        return Err(Error::InvalidInput(format!(
            "{} velocities for {} finite poles",
            velocities.len(),
            state.poles.len()
        )));
    }
    check_gaps(&state.poles, state.collision_radius)?;
    let mut out = vec![Matrix2::zero(); state.poles.len()];
    rhs_into(&state.poles, &state.residues, velocities, &mut out);
    Ok(out)
}

/// `dAᵢ/ds` when finite pole `k` moves with unit speed.
pub fn schlesinger_rhs(state: &SchlesingerState, k: usize) -> Result<Vec<Matrix2>> {
    if k >= state.poles.len() {
        return Err(Error::InvalidInput(format!(
            "pole index {} out of range",
            k + 1
        )));
    }
    let mut v = vec![C64::default(); state.poles.len()];
    v[k] = C64::from(1.0);
    schlesinger_rhs_velocities(state, &v)
}

/// Piecewise-linear motion of the finite poles: knot `m` is reached at
/// `s = m/(knots − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPath {
    knots: Vec<Vec<C64>>,
}

impl FlowPath {
    pub fn new(knots: Vec<Vec<C64>>) -> Result<Self> {
        let Some(first) = knots.first() else {
            return Err(Error::InvalidInput(
                "a flow path needs at least one knot".into(),
            ));
        };
        if knots.iter().any(|k| k.len() != first.len()) {
            return Err(Error::InvalidInput(
                "every knot must place every finite pole".into(),
            ));
        }
        Ok(Self { knots })
    }

    /// Pole `k` moves straight to `to`; the others stay.
    pub fn move_pole(poles: &[C64], k: usize, to: C64) -> Result<Self> {
        if k >= poles.len() {
            return Err(Error::InvalidInput(format!(
                "pole index {} out of range",
                k + 1
            )));
        }
        let mut end = poles.to_vec();
        end[k] = to;
        Self::new(vec![poles.to_vec(), end])
    }

    pub fn knots(&self) -> &[Vec<C64>] {
        &self.knots
    }

    pub fn start(&self) -> &[C64] {
        &self.knots[0]
    }

    pub fn end(&self) -> &[C64] {
        &self.knots[self.knots.len() - 1]
    }

    fn pieces(&self) -> usize {
        self.knots.len().saturating_sub(1)
    }

    /// Parameter values of the knots.
    pub fn breakpoints(&self) -> Vec<f64> {
        let m = self.pieces();
        if m == 0 {
            return vec![0.0];
        }
        (0..=m).map(|k| k as f64 / m as f64).collect()
    }

    fn piece_of(&self, s: f64) -> usize {
        let m = self.pieces();
        ((s * m as f64).floor() as usize).min(m.saturating_sub(1))
    }

    pub fn position(&self, s: f64) -> Vec<C64> {
        let m = self.pieces();
        if m == 0 {
            return self.knots[0].clone();
        }
        let p = self.piece_of(s);
        let tau = s * m as f64 - p as f64;
        self.knots[p]
            .iter()
            .zip(&self.knots[p + 1])
            .map(|(&a, &b)| a + (b - a) * tau)
            .collect()
    }

    /// `dt/ds` on piece `p`.
    fn velocity(&self, p: usize) -> Vec<C64> {
        let m = self.pieces() as f64;
        self.knots[p]
            .iter()
            .zip(&self.knots[p + 1])
            .map(|(&a, &b)| (b - a) * m)
            .collect()
    }

    pub fn reversed(&self) -> Self {
        Self {
            knots: self.knots.iter().rev().cloned().collect(),
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.knots.windows(2).all(|w| w[0] == w[1])
    }

    /// The single pole that moves, if exactly one does.
    pub fn moving_pole(&self) -> Option<usize> {
        let moving: Vec<usize> = (0..self.knots[0].len())
            .filter(|&i| self.knots.windows(2).any(|w| w[0][i] != w[1][i]))
            .collect();
        (moving.len() == 1).then(|| moving[0])
    }

    /// First parameter at which two poles come closer than `radius`, found
    /// exactly: on each piece every pairwise distance is `|D₀ + τD₁|`.
    pub fn check_collisions(&self, radius: f64) -> Result<()> {
        let n = self.knots[0].len();
        let m = self.pieces();
        let r2 = radius * radius;
        for p in 0..m.max(1) {
            let (a, b) = if m == 0 {
                (&self.knots[0], &self.knots[0])
            } else {
                (&self.knots[p], &self.knots[p + 1])
            };
            let mut first: Option<(f64, usize, usize)> = None;
            for i in 0..n {
                for j in i + 1..n {
                    let d0 = a[i] - a[j];
                    let d1 = (b[i] - b[j]) - d0;
                    let tau = if d0.norm_sqr() < r2 {
                        Some(0.0)
                    } else {
                        // |d1|²τ² + 2Re(d0·conj d1)τ + |d0|² − r² = 0
                        let qa = d1.norm_sqr();
                        let qb = 2.0 * (d0 * d1.conj()).re;
                        let qc = d0.norm_sqr() - r2;
                        let disc = qb * qb - 4.0 * qa * qc;
                        if qa == 0.0 || disc < 0.0 {
                            None
                        } else {
                            let t = (-qb - disc.sqrt()) / (2.0 * qa);
                            (0.0..=1.0).contains(&t).then_some(t)
                        }
                    };
                    if let Some(t) = tau {
                        if first.is_none_or(|(f, _, _)| t < f) {
                            first = Some((t, i, j));
                        }
                    }
                }
            }
            if let Some((t, i, j)) = first {
                let s_star = if m == 0 {
                    0.0
                } else {
                    (p as f64 + t) / m as f64
                };
                return Err(Error::PoleCollision { i, j, s_star });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowOptions {
    pub tols: Tolerances,
    /// Number of equally spaced samples including both ends (at least 2;
    /// a stationary path yields one).
    pub samples: usize,
    /// Recompute the monodromy fingerprint at every sample.
    pub with_traces: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            tols: Tolerances::default(),
            samples: 2,
            with_traces: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample {
    pub s: f64,
    pub state: SchlesingerState,
    /// Largest eigenvalue deviation of any residue from its initial
    /// spectrum.
    pub eig_drift: f64,
    /// `max|ΣAᵢ(s) − ΣAᵢ(0)|`.
    pub sum_drift: f64,
    pub traces: Option<TraceCoordinates>,
    pub trace_drift: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub samples: Vec<FlowSample>,
    pub stats: OdeStats,
}

impl FlowResult {
    pub fn final_state(&self) -> &SchlesingerState {
        &self.samples[self.samples.len() - 1].state
    }

    pub fn max_eig_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.eig_drift).fold(0.0, f64::max)
    }

    pub fn max_sum_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.sum_drift).fold(0.0, f64::max)
    }

    pub fn max_trace_drift(&self) -> Option<f64> {
        self.samples
            .iter()
            .map(|s| s.trace_drift)
            .try_fold(0.0, |acc: f64, d| d.map(|d| acc.max(d)))
    }
}

fn spectrum_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    let direct = (a.0 - b.0).norm().max((a.1 - b.1).norm());
    let crossed = (a.0 - b.1).norm().max((a.1 - b.0).norm());
    direct.min(crossed)
}

fn fingerprint(state: &SchlesingerState, base: C64, tols: &Tolerances) -> Result<TraceCoordinates> {
    let rep = monodromy_from(&state.system()?, &state.book, Some(base), tols)?;
    Ok(invariant_fingerprint(&rep.rep_tuple()))
}

/// The auto-placed basepoint of the first state. Later states reuse it so
/// that all fingerprints refer to the same loops; a pole crossing a tail
/// surfaces as an obstructed basepoint.
fn common_basepoint(state: &SchlesingerState, tols: &Tolerances) -> Result<C64> {
    Ok(monodromy_of(&state.system()?, &state.book, tols)?.basepoint)
}

/// Integrates the Schlesinger system along `path`, which must start at the
/// state's poles. Collisions along the path are detected before any
/// integration; a blow-up of the residues surfaces as a step underflow at
/// the parameter where it happens.
pub fn integrate_flow(
    state: &SchlesingerState,
    path: &FlowPath,
    opts: &FlowOptions,
) -> Result<FlowResult> {
    if path.start().len() != state.poles.len() {
        return Err(Error::InvalidInput(
            "path and state have different numbers of poles".into(),
        ));
    }
    let mismatch = path
        .start()
        .iter()
        .zip(&state.poles)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if mismatch > 1e-12 * (1.0 + state.poles.iter().map(|t| t.norm()).fold(0.0, f64::max)) {
        return Err(Error::InvalidInput(
            "path does not start at the current poles".into(),
        ));
    }
    path.check_collisions(state.collision_radius)?;

    let sample_s: Vec<f64> = if path.is_stationary() {
        vec![0.0]
    } else {
        let m = opts.samples.max(2);
        (0..m).map(|k| k as f64 / (m - 1) as f64).collect()
    };
    let mut stops: Vec<f64> = sample_s.iter().copied().chain(path.breakpoints()).collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let n = state.poles.len();
    let mut stats = OdeStats::default();
    let mut y = state.flat();
    let mut states = vec![state.clone()];
    let mut s = 0.0;
    let mut next_sample = 1;
    for &stop in stops.iter().filter(|&&x| x > 0.0) {
        let piece = path.piece_of(0.5 * (s + stop));
        let v = path.velocity(piece);
        let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
            let poles = path.position(t);
            let res: Vec<Matrix2> = y
                .chunks_exact(4)
                .map(|c| Matrix2::from_entries([c[0], c[1], c[2], c[3]]))
                .collect();
            let mut out = vec![Matrix2::zero(); n];
            rhs_into(&poles, &res, &v, &mut out);
            for (d, o) in dy.chunks_exact_mut(4).zip(&out) {
                d.copy_from_slice(&o.entries());
            }
        };
        let (next, st) = ode::integrate(rhs, s, stop, y, opts.tols.integrator)?;
        y = next;
        stats.merge(st);
        s = stop;
        if next_sample < sample_s.len() && (sample_s[next_sample] - s).abs() < 1e-15 {
            states.push(state.advanced(path.position(s), &y));
            next_sample += 1;
        }
    }

    let spectra0: Vec<(C64, C64)> = state.residues.iter().map(|a| a.eigenvalues()).collect();
    let sum0: Matrix2 = state.residues.iter().copied().sum();
    let traces: Vec<Option<TraceCoordinates>> = if opts.with_traces {
        let base = common_basepoint(state, &opts.tols)?;
        states
            .par_iter()
            .map(|st| fingerprint(st, base, &opts.tols).map(Some))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![None; states.len()]
    };
    let samples = states
        .into_iter()
        .zip(traces)
        .zip(&sample_s)
        .map(|((st, tr), &s)| {
            let eig_drift = st
                .residues
                .iter()
                .zip(&spectra0)
                .map(|(a, &e0)| spectrum_distance(a.eigenvalues(), e0))
                .fold(0.0, f64::max);
            let sum_drift = (st.residues.iter().copied().sum::<Matrix2>() - sum0).max_abs();
            FlowSample {
                s,
                state: st,
                eig_drift,
                sum_drift,
                traces: tr,
                trace_drift: None,
            }
        })
        .collect::<Vec<_>>();
    Ok(FlowResult {
        samples: with_trace_drift(samples),
        stats,
    })
}

/// Trace drift is measured against the first sample.
fn with_trace_drift(mut samples: Vec<FlowSample>) -> Vec<FlowSample> {
    let Some(first) = samples.first().and_then(|s| s.traces.clone()) else {
        return samples;
    };
    for s in &mut samples {
        s.trace_drift = s.traces.as_ref().map(|t| t.max_abs_diff(&first));
    }
    samples
}

/// Monodromy fingerprints at two states and their largest entrywise
/// difference.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftReport {
    pub initial: TraceCoordinates,
    pub last: TraceCoordinates,
    pub max_drift: f64,
}

/// Recomputes the monodromy of both states, with canonical loops from the
/// basepoint auto-placed for the initial one, and compares all trace
/// coordinates.
pub fn verify_isomonodromy(
    initial: &SchlesingerState,
    last: &SchlesingerState,
    tols: &Tolerances,
) -> Result<DriftReport> {
    let base = common_basepoint(initial, tols)?;
    let (a, b) = rayon::join(
        || fingerprint(initial, base, tols),
        || fingerprint(last, base, tols),
    );
    let (a, b) = (a?, b?);
    let max_drift = a.max_abs_diff(&b);
    Ok(DriftReport {
        initial: a,
        last: b,
        max_drift,
    })
}

/// The drift when the poles follow `path` but the residues stay frozen.
pub fn frozen_residue_control(
    state: &SchlesingerState,
    path: &FlowPath,
    tols: &Tolerances,
) -> Result<DriftReport> {
    verify_isomonodromy(state, &state.with_poles(path.end().to_vec()), tols)
}

/// Roots of the numerator of `Σ bᵢ/(z − tᵢ)`, the `(1,2)` entry of the
/// connection matrix: `Σ bᵢ ∏ₖ≠ᵢ (z − tₖ)`. `None` if the entry vanishes
/// identically.
pub fn apparent_singularities(poles: &[C64], residues: &[Matrix2]) -> Option<Vec<C64>> {
    let scale = residues
        .iter()
        .map(|a| a.max_abs())
        .fold(0.0, f64::max)
        .max(1.0);
    if residues.iter().all(|a| a.m[0][1].norm() <= 1e-13 * scale) {
        return None;
    }
    let numerator = residues
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (i, a)| {
            let others: Vec<C64> = poles
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &t)| t)
                .collect();
            acc.add(&Poly::from_roots(&others).scale(a.m[0][1]))
        });
    Some(numerator.roots(1e-12))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApparentPoint {
    pub s: f64,
    /// All roots at this sample; empty when undefined.
    pub roots: Vec<C64>,
    /// The root followed continuously from sample to sample; `None` when
    /// the `(1,2)` entry vanishes identically or has no zero.
    pub y: Option<C64>,
}

/// The zero `y(s)` of the `(1,2)` entry along a flow. The first defined
/// sample takes the root of least modulus, later ones the root nearest the
/// previous value.
pub fn apparent_singularity_trajectory(result: &FlowResult) -> Vec<ApparentPoint> {
    let mut prev: Option<C64> = None;
    result
        .samples
        .iter()
        .map(|smp| {
            let roots =
                apparent_singularities(&smp.state.poles, &smp.state.residues).unwrap_or_default();
            let anchor = prev.unwrap_or_default();
            let y = roots
                .iter()
                .copied()
                .min_by(|a, b| (a - anchor).norm().total_cmp(&(b - anchor).norm()));
            if y.is_some() {
                prev = y;
            }
            ApparentPoint { s: smp.s, roots, y }
        })
        .collect()
}
