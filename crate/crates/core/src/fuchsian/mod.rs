//! Rank-2 logarithmic connections on ℙ¹ realized as Fuchsian residue data
//! on the trivial bundle, with parabolic structure.
//!
//! A [`FuchsianSystem`] is the equation `dY/dz = (Σ Aᵢ/(z − tᵢ))·Y`. At most
//! one marked point may be `∞`; its residue is never stored independently
//! but derived as `−Σ(finite residues)`, so the residues of all marked points
//! always sum to zero.
//!
//! Connections on non-trivial rank-2 bundles are not representable here.

mod classify;
mod generate;
mod stability;

pub use classify::{classify_lambda, ExponentClass, ReflectionWall, SignPattern, SpecialWitnesses};
pub use generate::{random_connection, random_residues};
pub use stability::{
    check_stability, find_invariant_subbundles, parabolic_degree, sub_parabolic_degree,
    InvariantSubbundle, StabilityReport, StabilityVerdict, SubbundleSearch, UndeterminedPattern,
    DEFAULT_D_MAX,
};

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, ParabolicLine, C64};
use crate::scalar::{in_unit_interval, ratio};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Absolute tolerance for integrality and spectral tests on floats.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpherePoint {
    Finite(C64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(&self) -> Option<C64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{z}"),
            SpherePoint::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianSystem {
    points: Vec<SpherePoint>,
    residues: Vec<Matrix2>,
}

impl FuchsianSystem {
    /// Builds a system from its marked points and the residues at the
    /// finite ones, in order. The residue at `∞`, if present, is derived.
    pub fn new(points: Vec<SpherePoint>, finite_residues: Vec<Matrix2>) -> Result<Self> {
        let n_inf = points.iter().filter(|p| p.is_infinity()).count();
        if n_inf > 1 {
            return Err(Error::InvalidInput(
                "at most one marked point may be at infinity".into(),
            ));
        }
        if finite_residues.len() != points.len() - n_inf {
            return Err(Error::InvalidInput(format!(
                "{} finite marked points but {} residues",
                points.len() - n_inf,
                finite_residues.len()
            )));
        }
        let at_infinity = -finite_residues.iter().copied().sum::<Matrix2>();
        let mut finite = finite_residues.into_iter();
        let residues = points
            .iter()
            .map(|p| match p {
                SpherePoint::Finite(_) => finite.next().expect("counted above"),
                SpherePoint::Infinity => at_infinity,
            })
            .collect();
        Ok(Self { points, residues })
    }

    /// All marked points finite.
    pub fn finite(poles: Vec<C64>, residues: Vec<Matrix2>) -> Result<Self> {
        Self::new(
            poles.into_iter().map(SpherePoint::Finite).collect(),
            residues,
        )
    }

    /// Finite poles followed by a marked point at `∞` carrying the derived
    /// residue.
    pub fn with_infinity(poles: Vec<C64>, residues: Vec<Matrix2>) -> Result<Self> {
        let mut points: Vec<_> = poles.into_iter().map(SpherePoint::Finite).collect();
        points.push(SpherePoint::Infinity);
        Self::new(points, residues)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    /// Residues at every marked point, including the derived one at `∞`.
    pub fn residues(&self) -> &[Matrix2] {
        &self.residues
    }

    pub fn residue(&self, i: usize) -> Matrix2 {
        self.residues[i]
    }

    pub fn infinity_index(&self) -> Option<usize> {
        self.points.iter().position(|p| p.is_infinity())
    }

    /// `(index, position)` of every finite marked point.
    pub fn finite_points(&self) -> Vec<(usize, C64)> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.finite().map(|z| (i, z)))
            .collect()
    }

    pub fn finite_poles(&self) -> Vec<C64> {
        self.points.iter().filter_map(|p| p.finite()).collect()
    }

    pub fn finite_residues(&self) -> Vec<Matrix2> {
        self.finite_points()
            .into_iter()
            .map(|(i, _)| self.residues[i])
            .collect()
    }

    /// `Σ Aᵢ/(z − tᵢ)` over the finite poles.
    pub fn connection_matrix(&self, z: C64) -> Matrix2 {
        self.finite_points()
            .into_iter()
            .map(|(i, t)| self.residues[i].scale((z - t).inv()))
            .sum()
    }

    pub fn min_pole_distance(&self) -> Option<f64> {
        min_pairwise_distance(&self.finite_poles())
    }

    /// One tenth of the minimal pairwise distance of the finite poles.
    pub fn safety_radius(&self) -> f64 {
        safety_radius(&self.finite_poles())
    }

    /// Simultaneous conjugation `Aᵢ ↦ g·Aᵢ·g⁻¹`.
    pub fn conjugated(&self, g: &Matrix2) -> Option<Self> {
        let finite = self
            .finite_points()
            .into_iter()
            .map(|(i, _)| self.residues[i].conjugate_by(g))
            .collect::<Option<Vec<_>>>()?;
        Self::new(self.points.clone(), finite).ok()
    }
}

pub(crate) fn min_pairwise_distance(points: &[C64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = (a - b).norm();
            best = Some(best.map_or(d, |x| x.min(d)));
        }
    }
    best
}

pub(crate) fn safety_radius(points: &[C64]) -> f64 {
    match min_pairwise_distance(points) {
        Some(d) => 0.1 * d,
        None => 0.1 * (1.0 + points.first().map_or(0.0, |z| z.norm())),
    }
}

/// Marked exponents `λᵢ`, determinant residues `μᵢ` and the determinant
/// degree. The residue at `tᵢ` has spectrum `{λᵢ, μᵢ − λᵢ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentBookkeeping {
    pub lambda: Vec<C64>,
    pub mu: Vec<i64>,
    pub deg_l: i64,
}

impl ExponentBookkeeping {
    pub fn new(lambda: Vec<C64>, mu: Vec<i64>, deg_l: i64) -> Self {
        Self { lambda, mu, deg_l }
    }

    /// Trace-free residues: `μ = 0`, `deg L = 0`.
    pub fn traceless(lambda: Vec<C64>) -> Self {
        let n = lambda.len();
        Self::new(lambda, vec![0; n], 0)
    }

    pub fn other_exponent(&self, i: usize) -> C64 {
        C64::from(self.mu[i] as f64) - self.lambda[i]
    }
}

/// Parabolic weights `0 ≤ α₁ < α₂ < … < α_{2n} < 1`; point `i` carries
/// `(α_{2i−1}, α_{2i})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    alphas: Vec<BigRational>,
}

impl Weight {
    pub fn new(alphas: Vec<BigRational>) -> Self {
        Self { alphas }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    /// `αₖ = (k − 1)/(2n)`.
    pub fn uniform(n: usize) -> Self {
        let m = 2 * n as i64;
        Self::new((0..m).map(|k| ratio(k, m)).collect())
    }

    pub fn alphas(&self) -> &[BigRational] {
        &self.alphas
    }

    /// `(α_{2i−1}, α_{2i})` for the 0-based point index `i`.
    pub fn pair(&self, i: usize) -> (&BigRational, &BigRational) {
        (&self.alphas[2 * i], &self.alphas[2 * i + 1])
    }

    pub fn total(&self) -> BigRational {
        self.alphas.iter().sum()
    }

    /// `Σᵢ α_{2i}`.
    pub fn upper_total(&self) -> BigRational {
        self.alphas.iter().skip(1).step_by(2).sum()
    }

    fn issues(&self, n: usize) -> Vec<Issue> {
        let mut out = Vec::new();
        if self.alphas.len() != 2 * n {
            out.push(Issue::new(
                IssueKind::LengthMismatch,
                format!(
                    "weight has {} entries, expected {}",
                    self.alphas.len(),
                    2 * n
                ),
            ));
        }
        for (k, a) in self.alphas.iter().enumerate() {
            if !in_unit_interval(a) {
                out.push(Issue::new(
                    IssueKind::WeightRange,
                    format!("weight[{k}] = {a} is outside [0, 1)"),
                ));
            }
        }
        for (k, w) in self.alphas.windows(2).enumerate() {
            if w[0] >= w[1] {
                out.push(Issue::new(
                    IssueKind::WeightNotIncreasing,
                    format!(
                        "weight[{k}] = {} is not below weight[{}] = {}",
                        w[0],
                        k + 1,
                        w[1]
                    ),
                ));
            }
        }
        out
    }
}

/// A connection with marked eigenvalues, eigenlines and weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicConnection {
    pub system: FuchsianSystem,
    pub book: ExponentBookkeeping,
    pub lines: Vec<ParabolicLine>,
    pub weight: Weight,
}

impl ParabolicConnection {
    pub fn new(
        system: FuchsianSystem,
        book: ExponentBookkeeping,
        lines: Vec<ParabolicLine>,
        weight: Weight,
    ) -> Self {
        Self {
            system,
            book,
            lines,
            weight,
        }
    }

    /// Uses the `λᵢ`-eigenline of each residue; scalar residues get `[1:0]`.
    pub fn with_eigenlines(
        system: FuchsianSystem,
        book: ExponentBookkeeping,
        weight: Weight,
        tol: f64,
    ) -> Self {
        let lines = default_lines(&system, &book, tol);
        Self::new(system, book, lines, weight)
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate_system(&self.system, &self.book, &self.lines, &self.weight, tol)
    }

    /// Simultaneous conjugation of residues and lines by `g`.
    pub fn conjugated(&self, g: &Matrix2) -> Option<Self> {
        let system = self.system.conjugated(g)?;
        let lines = self
            .lines
            .iter()
            .map(|l| l.transformed(g))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(
            system,
            self.book.clone(),
            lines,
            self.weight.clone(),
        ))
    }
}

pub fn default_lines(
    system: &FuchsianSystem,
    book: &ExponentBookkeeping,
    tol: f64,
) -> Vec<ParabolicLine> {
    (0..system.n())
        .map(|i| {
            let lambda = book.lambda.get(i).copied().unwrap_or_default();
            system
                .residue(i)
                .eigenline(lambda, tol)
                .unwrap_or_else(ParabolicLine::first_axis)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    TooFewPoints,
    DuplicatePoint,
    InfinityNotLast,
    HiddenSingularity,
    LengthMismatch,
    NonFinite,
    ExponentNotInSpectrum,
    EigenlineViolated,
    FuchsRelation,
    WeightRange,
    WeightNotIncreasing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub message: String,
}

impl Issue {
    fn new(kind: IssueKind, message: String) -> Self {
        Self { kind, message }
    }
}

/// Every violated invariant of a parabolic connection. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<&str> = self.issues.iter().map(|i| i.message.as_str()).collect();
        f.write_str(&msgs.join("; "))
    }
}

fn spectrum_residual(a: &Matrix2, lambda: C64, mu: i64) -> f64 {
    let mu = C64::from(mu as f64);
    let s = 1.0 + a.max_abs() + lambda.norm();
    let dt = (a.trace() - mu).norm() / s;
    let dd = (a.det() - lambda * (mu - lambda)).norm() / (s * s);
    dt.max(dd)
}

/// Checks every invariant of the data and reports all violations.
pub fn validate_system(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    lines: &[ParabolicLine],
    weight: &Weight,
    tol: f64,
) -> ValidationReport {
    let n = sys.n();
    let mut issues = Vec::new();
    if n < 3 {
        issues.push(Issue::new(
            IssueKind::TooFewPoints,
            format!("{n} marked points; at least 3 are required"),
        ));
    }
    for (i, p) in sys.points().iter().enumerate() {
        if let SpherePoint::Finite(z) = p {
            if !z.is_finite() {
                issues.push(Issue::new(
                    IssueKind::NonFinite,
                    format!("points[{i}] is not finite"),
                ));
            }
        }
        if !sys.residue(i).is_finite() {
            issues.push(Issue::new(
                IssueKind::NonFinite,
                format!("residue at points[{i}] is not finite"),
            ));
        }
    }
    let fp = sys.finite_points();
    for (a, &(i, zi)) in fp.iter().enumerate() {
        for &(j, zj) in &fp[a + 1..] {
            if (zi - zj).norm() <= tol * (1.0 + zi.norm()) {
                issues.push(Issue::new(
                    IssueKind::DuplicatePoint,
                    format!("duplicate marked point: points[{i}] and points[{j}] are both {zi}"),
                ));
            }
        }
    }
    if let Some(k) = sys.infinity_index() {
        if k + 1 != n {
            issues.push(Issue::new(
                IssueKind::InfinityNotLast,
                format!("the marked point at infinity is points[{k}] but must be listed last"),
            ));
        }
    } else {
        let sum: Matrix2 = sys.residues().iter().copied().sum();
        let scale = 1.0
            + sys
                .residues()
                .iter()
                .map(|a| a.max_abs())
                .fold(0.0, f64::max);
        if sum.max_abs() > tol * scale {
            issues.push(Issue::new(
                IssueKind::HiddenSingularity,
                format!(
                    "residues sum to {sum:?}, leaving a singularity at infinity that is not marked"
                ),
            ));
        }
    }

    let mut lengths_ok = true;
    for (name, len) in [
        ("lambda", book.lambda.len()),
        ("mu", book.mu.len()),
        ("lines", lines.len()),
    ] {
        if len != n {
            lengths_ok = false;
            issues.push(Issue::new(
                IssueKind::LengthMismatch,
                format!("{name} has {len} entries, expected {n}"),
            ));
        }
    }
    if lengths_ok {
        for (i, line) in lines.iter().enumerate() {
            let a = sys.residue(i);
            let lambda = book.lambda[i];
            if spectrum_residual(&a, lambda, book.mu[i]) > tol {
                let (e1, e2) = a.eigenvalues();
                issues.push(Issue::new(
                    IssueKind::ExponentNotInSpectrum,
                    format!(
                        "exponent not in spectrum at points[{i}]: ({lambda}, {}) vs eigenvalues ({e1}, {e2})",
                        book.other_exponent(i)
                    ),
                ));
                continue;
            }
            let v = line.vector();
            let w = (a - Matrix2::scalar(lambda)).apply(v);
            let resid = (w[0].norm() + w[1].norm()) / (1.0 + a.max_abs() + lambda.norm());
            if resid > tol {
                issues.push(Issue::new(
                    IssueKind::EigenlineViolated,
                    format!("lines[{i}] is not a {lambda}-eigenline of the residue (residual {resid:e})"),
                ));
            }
        }
        let total: i64 = book.mu.iter().sum();
        if total != -book.deg_l {
            issues.push(Issue::new(
                IssueKind::FuchsRelation,
                format!("sum of mu is {total} but -deg L is {}", -book.deg_l),
            ));
        }
    }
    issues.extend(weight.issues(n));
    ValidationReport { issues }
}

/// The exponent pairs `(λᵢ, μᵢ − λᵢ)`, after checking that each is the
/// spectrum of `Aᵢ`.
pub fn local_exponents(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    tol: f64,
) -> Result<Vec<(C64, C64)>> {
    if book.lambda.len() != sys.n() || book.mu.len() != sys.n() {
        return Err(Error::InvalidInput(format!(
            "bookkeeping has {} exponents for {} marked points",
            book.lambda.len(),
            sys.n()
        )));
    }
    (0..sys.n())
        .map(|i| {
            let a = sys.residue(i);
            let pair = (book.lambda[i], book.other_exponent(i));
            if spectrum_residual(&a, book.lambda[i], book.mu[i]) > tol {
                let (e1, e2) = a.eigenvalues();
                return Err(Error::SpectrumMismatch {
                    index: i,
                    spectrum: (e1.to_string(), e2.to_string()),
                    marked: (pair.0.to_string(), pair.1.to_string()),
                });
            }
            Ok(pair)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn diag_system() -> (FuchsianSystem, ExponentBookkeeping) {
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
        (sys, book)
    }

    #[test]
    fn infinity_residue_is_derived() {
        let (sys, _) = diag_system();
        assert!((sys.residue(3) - Matrix2::real(-0.6, 0.0, 0.0, 0.6)).max_abs() < 1e-15);
        let total: Matrix2 = sys.residues().iter().copied().sum();
        assert!(total.max_abs() < 1e-15);
    }

    #[test]
    fn two_infinities_rejected() {
        let pts = vec![
            SpherePoint::Infinity,
            SpherePoint::Infinity,
            SpherePoint::Finite(c(0.0, 0.0)),
        ];
        assert!(FuchsianSystem::new(pts, vec![Matrix2::zero()]).is_err());
    }

    #[test]
    fn diagonal_with_eigenlines_is_valid() {
        let (sys, book) = diag_system();
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(4), 1e-8);
        let report = conn.validate(1e-8);
        assert!(report.is_valid(), "{report}");
        assert_eq!(conn.lines[0], ParabolicLine::first_axis());
        assert_eq!(conn.lines[3], ParabolicLine::first_axis());
    }

    #[test]
    fn duplicate_point_reported() {
        let r = Matrix2::real(0.1, 0.0, 0.0, -0.1);
        let sys = FuchsianSystem::finite(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![r, r, -r - r],
        )
        .unwrap();
        let book = ExponentBookkeeping::traceless(vec![c(0.1, 0.0), c(0.1, 0.0), c(-0.2, 0.0)]);
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(3), 1e-8);
        let report = conn.validate(1e-8);
        assert!(report.has(IssueKind::DuplicatePoint));
        assert!(report.to_string().contains("duplicate marked point"));
    }

    #[test]
    fn perturbed_exponent_reported() {
        let (sys, mut book) = diag_system();
        let lines = default_lines(&sys, &book, 1e-8);
        book.lambda[1] += 1e-3;
        let report = validate_system(&sys, &book, &lines, &Weight::uniform(4), 1e-8);
        assert!(report.has(IssueKind::ExponentNotInSpectrum));
        assert!(report.to_string().contains("exponent not in spectrum"));
    }

    #[test]
    fn fuchs_relation_and_weight_order() {
        let (sys, mut book) = diag_system();
        book.deg_l = 1;
        let lines = default_lines(&sys, &book, 1e-8);
        let mut w = Weight::uniform(4).alphas().to_vec();
        w.swap(0, 1);
        let report = validate_system(&sys, &book, &lines, &Weight::new(w), 1e-8);
        assert!(report.has(IssueKind::FuchsRelation));
        assert!(report.has(IssueKind::WeightNotIncreasing));
    }

    #[test]
    fn hidden_singularity_reported() {
        let r = Matrix2::real(0.1, 0.0, 0.0, -0.1);
        let sys =
            FuchsianSystem::finite(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], vec![r, r, r])
                .unwrap();
        let book = ExponentBookkeeping::traceless(vec![c(0.1, 0.0); 3]);
        let lines = default_lines(&sys, &book, 1e-8);
        let report = validate_system(&sys, &book, &lines, &Weight::uniform(3), 1e-8);
        assert!(report.has(IssueKind::HiddenSingularity));
    }

    #[test]
    fn local_exponents_of_examples() {
        let a1 = Matrix2::real(0.25, 0.0, 0.0, -0.25);
        let a2 = Matrix2::real(0.3, 1.0, 0.0, -0.3);
        let sys =
            FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![a1, a2]).unwrap();
        let a3 = sys.residue(2);
        let (e, _) = a3.eigenvalues();
        let book = ExponentBookkeeping::traceless(vec![c(0.25, 0.0), c(0.3, 0.0), e]);
        let ex = local_exponents(&sys, &book, 1e-8).unwrap();
        assert_eq!(ex[0], (c(0.25, 0.0), c(-0.25, 0.0)));
        assert!((ex[1].0 - c(0.3, 0.0)).norm() < 1e-15 && (ex[1].1 + c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn local_exponents_of_random_traceless_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut e = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (x, y, z) = (e(), e(), e());
            let a = Matrix2::new(x, y, z, -x);
            // Characteristic polynomial oracle: λ² + det A = 0 for tr A = 0.
            let lambda = (-a.det()).sqrt();
            assert!((lambda * lambda + a.det()).norm() < 1e-14);
            let sys =
                FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![a, -a]).unwrap();
            let book = ExponentBookkeeping::traceless(vec![lambda, lambda, c(0.0, 0.0)]);
            let ex = local_exponents(&sys, &book, 1e-8).unwrap();
            assert_eq!(ex[0], (lambda, -lambda));
        }
    }

    #[test]
    fn local_exponents_rejects_mismatch() {
        let (sys, mut book) = diag_system();
        book.lambda[0] = c(0.4, 0.0);
        assert!(matches!(
            local_exponents(&sys, &book, 1e-8),
            Err(Error::SpectrumMismatch { index: 0, .. })
        ));
    }
}
