//! Parabolic degrees, invariant line subbundles and stability.
//!
//! A line subbundle `F ≅ O(−d)` of the trivial bundle is spanned by a
//! polynomial section `v(z)` of degree `d` with coprime components. It is
//! invariant exactly when `det[T·v′ − B·v, v] ≡ 0`, where `T = ∏(z − tᵢ)`
//! over the finite poles and `B = T·A(z)`.
//!
//! With `Y′ = A·Y` the eigenvalues `ρᵢ` of the residues on `F`, including
//! the one at `∞`, satisfy `Σ ρᵢ = −d`. That prunes the eigenvalue choices
//! before any nonlinear solve.

use super::{FuchsianSystem, ParabolicConnection};
use crate::error::{Error, Result};
use crate::linalg::{Matrix2, ParabolicLine, C64, ONE, ZERO};
use crate::poly::Poly;
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_D_MAX: u32 = 2;

const NEWTON_ITERS: usize = 60;
const RANDOM_SEEDS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSubbundle {
    /// `deg F ≤ 0`.
    pub degree: i64,
    /// `(v₁, v₂)`, of degree at most `−deg F`.
    pub section: [Poly; 2],
    /// Eigenvalue of each residue on `F`, in marked-point order.
    pub exponents: Vec<C64>,
}

impl InvariantSubbundle {
    pub fn constant(line: ParabolicLine, sys: &FuchsianSystem) -> Self {
        let [a, b] = line.vector();
        let mut f = Self {
            degree: 0,
            section: [Poly::constant(a), Poly::constant(b)],
            exponents: Vec::new(),
        };
        f.exponents = (0..sys.n()).map(|i| f.exponent_at(sys, i)).collect();
        f
    }

    fn d(&self) -> usize {
        (-self.degree) as usize
    }

    /// The fiber `F_{tᵢ}`; at `∞` this is the line of the leading
    /// coefficients.
    pub fn fiber(&self, sys: &FuchsianSystem, i: usize) -> Option<ParabolicLine> {
        let v = match sys.points()[i].finite() {
            Some(t) => [self.section[0].eval(t), self.section[1].eval(t)],
            None => [
                self.section[0].coeff(self.d()),
                self.section[1].coeff(self.d()),
            ],
        };
        ParabolicLine::try_new(v[0], v[1])
    }

    fn exponent_at(&self, sys: &FuchsianSystem, i: usize) -> C64 {
        let Some(line) = self.fiber(sys, i) else {
            return ZERO;
        };
        let v = line.vector();
        let w = sys.residue(i).apply(v);
        (w[0] * v[0].conj() + w[1] * v[1].conj()) / (v[0].norm_sqr() + v[1].norm_sqr())
    }

    /// Relative size of `det[T·v′ − B·v, v]`.
    pub fn wedge_residual(&self, sys: &FuchsianSystem) -> f64 {
        let ws = WedgeSystem::new(sys);
        let v = &self.section;
        let w = ws.beta(v, v);
        w.max_abs() / ws.scale(v)
    }
}

/// `T` and `B = T·A(z)` for a system.
struct WedgeSystem {
    t: Poly,
    b: [[Poly; 2]; 2],
}

impl WedgeSystem {
    fn new(sys: &FuchsianSystem) -> Self {
        let fp = sys.finite_points();
        let poles: Vec<C64> = fp.iter().map(|&(_, t)| t).collect();
        let t = Poly::from_roots(&poles);
        let mut b: [[Poly; 2]; 2] = Default::default();
        for (k, &(i, _)) in fp.iter().enumerate() {
            let others: Vec<C64> = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &p)| p)
                .collect();
            let q = Poly::from_roots(&others);
            let a = sys.residue(i);
            for (r, row) in b.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry = entry.add(&q.scale(a.m[r][c]));
                }
            }
        }
        Self { t, b }
    }

    /// `det[T·x′ − B·x, y]`.
    fn beta(&self, x: &[Poly; 2], y: &[Poly; 2]) -> Poly {
        let dx = [x[0].derivative(), x[1].derivative()];
        let f0 = self
            .t
            .mul(&dx[0])
            .sub(&self.b[0][0].mul(&x[0]))
            .sub(&self.b[0][1].mul(&x[1]));
        let f1 = self
            .t
            .mul(&dx[1])
            .sub(&self.b[1][0].mul(&x[0]))
            .sub(&self.b[1][1].mul(&x[1]));
        f0.mul(&y[1]).sub(&f1.mul(&y[0]))
    }

    fn scale(&self, v: &[Poly; 2]) -> f64 {
        let vn = v[0].max_abs().max(v[1].max_abs());
        let bn = self
            .b
            .iter()
            .flatten()
            .map(|p| p.max_abs())
            .fold(0.0, f64::max);
        (self.t.max_abs() + bn) * vn * vn + f64::MIN_POSITIVE
    }
}

/// `deg L + Σ α`.
pub fn parabolic_degree(conn: &ParabolicConnection) -> BigRational {
    BigRational::from_integer(conn.book.deg_l.into()) + conn.weight.total()
}

/// `deg F` plus, at each point, `α_{2i}` where the fiber of `F` is `lᵢ`
/// and `α_{2i−1}` elsewhere.
pub fn sub_parabolic_degree(
    conn: &ParabolicConnection,
    f: &InvariantSubbundle,
    tol: f64,
) -> Result<BigRational> {
    let residual = f.wedge_residual(&conn.system);
    if residual > 10.0 * tol {
        return Err(Error::NotInvariant { residual });
    }
    let line_tol = line_tolerance(tol);
    let mut total = BigRational::from_integer(f.degree.into());
    for i in 0..conn.n() {
        let (lo, hi) = conn.weight.pair(i);
        let on_line = f
            .fiber(&conn.system, i)
            .is_some_and(|l| l.same_as(&conn.lines[i], line_tol));
        total += if on_line { hi } else { lo };
    }
    Ok(total)
}

fn line_tolerance(tol: f64) -> f64 {
    tol.sqrt().min(1e-4)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UndeterminedPattern {
    pub d: u32,
    pub exponents: Vec<C64>,
}

/// Outcome of a search up to some degree. `undetermined` lists the
/// admissible eigenvalue patterns for which Newton found no solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SubbundleSearch {
    pub subbundles: Vec<InvariantSubbundle>,
    pub undetermined: Vec<UndeterminedPattern>,
    pub max_d: u32,
}

impl SubbundleSearch {
    pub fn is_determined(&self) -> bool {
        self.undetermined.is_empty()
    }
}

/// Every invariant line subbundle of degree `−d` for `0 ≤ d ≤ d_max`.
pub fn find_invariant_subbundles(
    conn: &ParabolicConnection,
    d_max: u32,
    tol: f64,
) -> SubbundleSearch {
    let sys = &conn.system;
    let mut subbundles = degree_zero(conn, tol);
    let mut undetermined = Vec::new();
    if d_max >= 1 {
        let ws = WedgeSystem::new(sys);
        let choices = eigen_choices(sys, tol);
        for d in 1..=d_max {
            for pattern in admissible_patterns(&choices, d, tol) {
                match solve_pattern(sys, &ws, &pattern, d as usize, tol) {
                    PatternResult::Found(found) => {
                        for f in found {
                            if !subbundles.iter().any(|g| same_subbundle(sys, g, &f)) {
                                subbundles.push(f);
                            }
                        }
                    }
                    PatternResult::None => {}
                    PatternResult::Undetermined => undetermined.push(UndeterminedPattern {
                        d,
                        exponents: pattern.iter().map(|c| c.value).collect(),
                    }),
                }
            }
        }
    }
    SubbundleSearch {
        subbundles,
        undetermined,
        max_d: d_max,
    }
}

fn degree_zero(conn: &ParabolicConnection, tol: f64) -> Vec<InvariantSubbundle> {
    let sys = &conn.system;
    let scale = |a: &Matrix2| 1.0 + a.max_abs();
    let first = sys.residues().iter().find(|a| {
        let (e, _) = a.eigenvalues();
        (**a - Matrix2::scalar(e)).max_abs() > tol * scale(a)
    });
    let mut candidates: Vec<ParabolicLine> = match first {
        None => {
            // Every residue is scalar, so every line is invariant; report the
            // marked lines and the first axis.
            let mut v = conn.lines.clone();
            v.push(ParabolicLine::first_axis());
            v
        }
        Some(a) => {
            let (e1, e2) = a.eigenvalues();
            [e1, e2]
                .iter()
                .filter_map(|&e| a.eigenline(e, tol))
                .collect()
        }
    };
    let mut unique: Vec<ParabolicLine> = Vec::new();
    for l in candidates.drain(..) {
        if !unique.iter().any(|u| u.same_as(&l, line_tolerance(tol))) {
            unique.push(l);
        }
    }
    unique
        .into_iter()
        .filter(|l| {
            let v = l.vector();
            sys.residues().iter().all(|a| {
                let w = a.apply(v);
                (w[0] * v[1] - w[1] * v[0]).norm() <= tol * scale(a) * 10.0
            })
        })
        .map(|l| InvariantSubbundle::constant(l, sys))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Choice {
    value: C64,
    /// The eigenline the section must pass through; `None` for a scalar
    /// residue.
    line: Option<ParabolicLine>,
}

fn eigen_choices(sys: &FuchsianSystem, tol: f64) -> Vec<Vec<Choice>> {
    sys.residues()
        .iter()
        .map(|a| {
            let (e1, e2) = a.eigenvalues();
            let s = 1.0 + a.max_abs();
            if (e1 - e2).norm() <= tol * s {
                vec![Choice {
                    value: e1,
                    line: a.eigenline(e1, tol),
                }]
            } else {
                [e1, e2]
                    .iter()
                    .map(|&e| Choice {
                        value: e,
                        line: a.eigenline(e, tol),
                    })
                    .collect()
            }
        })
        .collect()
}

fn admissible_patterns(choices: &[Vec<Choice>], d: u32, tol: f64) -> Vec<Vec<Choice>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let pattern: Vec<Choice> = idx.iter().zip(choices).map(|(&k, c)| c[k]).collect();
        let sum: C64 = pattern.iter().map(|c| c.value).sum();
        let mag: f64 = pattern.iter().map(|c| c.value.norm()).sum();
        if (sum + d as f64).norm() <= 10.0 * tol * (1.0 + mag) {
            out.push(pattern);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

enum PatternResult {
    Found(Vec<InvariantSubbundle>),
    None,
    Undetermined,
}

fn section_from(coeffs: &[C64], d: usize) -> [Poly; 2] {
    [Poly(coeffs[..=d].to_vec()), Poly(coeffs[d + 1..].to_vec())]
}

fn solve_pattern(
    sys: &FuchsianSystem,
    ws: &WedgeSystem,
    pattern: &[Choice],
    d: usize,
    tol: f64,
) -> PatternResult {
    let m = 2 * (d + 1);
    // Linear constraints det[v(tᵢ), eᵢ] = 0, padded to a square matrix so the
    // SVD exposes the whole null space.
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (i, choice) in pattern.iter().enumerate() {
        let Some(line) = choice.line else { continue };
        let [e0, e1] = line.vector();
        let mut row = vec![ZERO; m];
        match sys.points()[i].finite() {
            Some(t) => {
                let mut p = ONE;
                for k in 0..=d {
                    row[k] = p * e1;
                    row[d + 1 + k] = -p * e0;
                    p *= t;
                }
            }
            None => {
                row[d] = e1;
                row[2 * d + 1] = -e0;
            }
        }
        let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        rows.push(row.into_iter().map(|z| z / norm).collect());
    }
    let null = null_space(&rows, m);
    let k = null.ncols();
    if k == 0 {
        return PatternResult::None;
    }
    let basis: Vec<[Poly; 2]> = (0..k)
        .map(|j| section_from(null.column(j).as_slice(), d))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ d as u64);
    let mut seeds: Vec<Vec<C64>> = (0..k)
        .map(|j| (0..k).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    for _ in 0..RANDOM_SEEDS {
        seeds.push(
            (0..k)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
    }

    let mut found = Vec::new();
    let mut failed = false;
    for seed in seeds {
        match newton(ws, &basis, seed, tol) {
            Some(v) => {
                if let Some(f) = saturated(sys, v, d, pattern) {
                    if !found.iter().any(|g| same_subbundle(sys, g, &f)) {
                        found.push(f);
                    }
                }
            }
            None => failed = true,
        }
    }
    if !found.is_empty() {
        PatternResult::Found(found)
    } else if failed {
        PatternResult::Undetermined
    } else {
        PatternResult::None
    }
}

fn null_space(rows: &[Vec<C64>], m: usize) -> DMatrix<C64> {
    if rows.is_empty() {
        return DMatrix::identity(m, m);
    }
    let size = rows.len().max(m);
    let mut a = DMatrix::<C64>::zeros(size, m);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            a[(r, c)] = x;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] <= 1e-9 * smax.max(1.0))
        .collect();
    let mut n = DMatrix::<C64>::zeros(m, cols.len());
    for (out, &j) in cols.iter().enumerate() {
        for c in 0..m {
            n[(c, out)] = v_t[(j, c)].conj();
        }
    }
    n
}

fn combine(basis: &[[Poly; 2]], c: &[C64]) -> [Poly; 2] {
    let mut v = [Poly::zero(), Poly::zero()];
    for (b, &x) in basis.iter().zip(c) {
        v[0] = v[0].add(&b[0].scale(x));
        v[1] = v[1].add(&b[1].scale(x));
    }
    v
}

/// Gauss–Newton on the quadratic wedge equations restricted to the
/// null-space coordinates, normalized by `⟨seed, c⟩ = 1`.
fn newton(ws: &WedgeSystem, basis: &[[Poly; 2]], seed: Vec<C64>, tol: f64) -> Option<[Poly; 2]> {
    let k = basis.len();
    let s2: f64 = seed.iter().map(|z| z.norm_sqr()).sum();
    let r: Vec<C64> = seed.iter().map(|z| z.conj() / s2).collect();
    let mut c = seed;
    for _ in 0..NEWTON_ITERS {
        let v = combine(basis, &c);
        let w = ws.beta(&v, &v);
        if w.max_abs() <= 0.1 * tol * ws.scale(&v) {
            return Some(v);
        }
        let cols: Vec<Poly> = basis
            .iter()
            .map(|b| ws.beta(b, &v).add(&ws.beta(&v, b)))
            .collect();
        let len = cols
            .iter()
            .map(|p| p.0.len())
            .max()
            .unwrap_or(0)
            .max(w.0.len());
        let mut j = DMatrix::<C64>::zeros(len + 1, k);
        let mut rhs = DMatrix::<C64>::zeros(len + 1, 1);
        for (col, p) in cols.iter().enumerate() {
            for row in 0..len {
                j[(row, col)] = p.coeff(row);
            }
            j[(len, col)] = r[col];
        }
        for row in 0..len {
            rhs[(row, 0)] = -w.coeff(row);
        }
        rhs[(len, 0)] = ONE - r.iter().zip(&c).map(|(a, b)| a * b).sum::<C64>();
        let delta = j.svd(true, true).solve(&rhs, 1e-14).ok()?;
        for (x, dx) in c.iter_mut().zip(delta.iter()) {
            *x += dx;
        }
        if !c.iter().all(|z| z.is_finite()) {
            return None;
        }
    }
    let v = combine(basis, &c);
    (ws.beta(&v, &v).max_abs() <= tol * ws.scale(&v)).then_some(v)
}

fn saturated(
    sys: &FuchsianSystem,
    v: [Poly; 2],
    d: usize,
    pattern: &[Choice],
) -> Option<InvariantSubbundle> {
    let vn = v[0].max_abs().max(v[1].max_abs());
    let lead = v[0].coeff(d).norm().max(v[1].coeff(d).norm());
    if lead <= 1e-6 * vn {
        return None;
    }
    let (p, q) = if v[0].degree(1e-9 * vn) >= v[1].degree(1e-9 * vn) {
        (&v[0], &v[1])
    } else {
        (&v[1], &v[0])
    };
    for root in p.roots(1e-9) {
        let s = q.max_abs() * (1.0 + root.norm()).powi(d as i32);
        if q.eval(root).norm() <= 1e-6 * s {
            return None;
        }
    }
    let scale = ONE / vn;
    let section = [v[0].scale(scale), v[1].scale(scale)];
    let mut f = InvariantSubbundle {
        degree: -(d as i64),
        section,
        exponents: Vec::new(),
    };
    f.exponents = (0..sys.n())
        .map(|i| {
            if pattern[i].line.is_some() {
                pattern[i].value
            } else {
                f.exponent_at(sys, i)
            }
        })
        .collect();
    Some(f)
}

fn same_subbundle(sys: &FuchsianSystem, f: &InvariantSubbundle, g: &InvariantSubbundle) -> bool {
    f.degree == g.degree
        && (0..sys.n()).all(|i| match (f.fiber(sys, i), g.fiber(sys, i)) {
            (Some(a), Some(b)) => a.same_as(&b, 1e-6),
            _ => false,
        })
}

#[derive(Clone, Debug, PartialEq)]
pub enum StabilityVerdict {
    Stable,
    Unstable(InvariantSubbundle),
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub verdict: StabilityVerdict,
    pub pardeg: BigRational,
    /// `pardeg / 2`.
    pub threshold: BigRational,
    /// Sub-parabolic degree of the witness, when unstable.
    pub witness_degree: Option<BigRational>,
    /// Degree bound the search actually covered.
    pub d_star: u32,
    pub search: SubbundleSearch,
}

/// Smallest `d ≥ 0` with `−d + Σ α_{2i} < pardeg/2`; no subbundle of degree
/// `−d` or lower can destabilize.
fn completeness_bound(conn: &ParabolicConnection) -> u32 {
    let gap =
        conn.weight.upper_total() - parabolic_degree(conn) / BigRational::from_integer(2.into());
    if gap < BigRational::zero() {
        0
    } else {
        (gap.floor().to_integer() + 1u32)
            .to_u32()
            .unwrap_or(u32::MAX)
    }
}

pub fn check_stability(conn: &ParabolicConnection, d_max: u32, tol: f64) -> StabilityReport {
    let d0 = completeness_bound(conn);
    let d_star = d_max.max(d0);
    let search = find_invariant_subbundles(conn, d_star, tol);
    let pardeg = parabolic_degree(conn);
    let threshold = &pardeg / BigRational::from_integer(2.into());
    let mut worst: Option<(InvariantSubbundle, BigRational)> = None;
    for f in &search.subbundles {
        let Ok(s) = sub_parabolic_degree(conn, f, tol) else {
            continue;
        };
        if s >= threshold && worst.as_ref().is_none_or(|(_, w)| &s > w) {
            worst = Some((f.clone(), s));
        }
    }
    let (verdict, witness_degree) = match worst {
        Some((f, s)) => (StabilityVerdict::Unstable(f), Some(s)),
        None if search.undetermined.iter().any(|u| u.d < d0) => {
            (StabilityVerdict::Undetermined, None)
        }
        None => (StabilityVerdict::Stable, None),
    };
    StabilityReport {
        verdict,
        pardeg,
        threshold,
        witness_degree,
        d_star,
        search,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{ExponentBookkeeping, Weight};
    use crate::linalg::c;
    use crate::scalar::ratio;

    const TOL: f64 = 1e-8;

    fn alpha() -> Weight {
        Weight::from_pairs(&[
            (1, 10),
            (2, 10),
            (3, 10),
            (4, 10),
            (5, 10),
            (6, 10),
            (7, 10),
            (8, 10),
        ])
    }

    /// Upper-triangular residues at 0, 1, 2, 3 with `(1,1)` entries
    /// `(0.11, 0.23, 0.37, −0.71)`.
    fn triangular(aligned: bool) -> ParabolicConnection {
        let l = [0.11, 0.23, 0.37, -0.71];
        let b = [1.0, -0.5, 0.7, -1.2];
        let res: Vec<Matrix2> = l
            .iter()
            .zip(b)
            .map(|(&x, y)| Matrix2::real(x, y, 0.0, -x))
            .collect();
        let sys = FuchsianSystem::finite((0..4).map(|k| c(k as f64, 0.0)).collect(), res).unwrap();
        let sign = if aligned { 1.0 } else { -1.0 };
        let book = ExponentBookkeeping::traceless(l.iter().map(|&x| c(sign * x, 0.0)).collect());
        ParabolicConnection::with_eigenlines(sys, book, alpha(), TOL)
    }

    #[test]
    fn parabolic_degree_examples() {
        let mut conn = triangular(true);
        assert_eq!(parabolic_degree(&conn), ratio(36, 10));
        conn.book.deg_l = -1;
        assert_eq!(parabolic_degree(&conn), ratio(26, 10));
        conn.book.deg_l = 0;
        conn.weight = Weight::new(vec![ratio(0, 1); 8]);
        assert_eq!(parabolic_degree(&conn), ratio(0, 1));
    }

    #[test]
    fn sub_parabolic_degree_examples() {
        let conn = triangular(true);
        assert!(conn.validate(TOL).is_valid());
        let f = InvariantSubbundle::constant(ParabolicLine::first_axis(), &conn.system);
        assert_eq!(sub_parabolic_degree(&conn, &f, TOL).unwrap(), ratio(2, 1));
        let anti = triangular(false);
        assert!(anti.validate(TOL).is_valid());
        assert_eq!(sub_parabolic_degree(&anti, &f, TOL).unwrap(), ratio(16, 10));
        // Same fibers, degree shifted by one.
        let mut shifted = f.clone();
        shifted.degree = -1;
        assert_eq!(
            sub_parabolic_degree(&conn, &shifted, TOL).unwrap(),
            ratio(1, 1)
        );
    }

    #[test]
    fn non_invariant_subbundle_rejected() {
        let conn = triangular(true);
        let f = InvariantSubbundle::constant(ParabolicLine::second_axis(), &conn.system);
        assert!(matches!(
            sub_parabolic_degree(&conn, &f, TOL),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn strictly_upper_triangular_has_first_axis() {
        let res = vec![
            Matrix2::real(0.0, 1.0, 0.0, 0.0),
            Matrix2::real(0.0, 2.0, 0.0, 0.0),
        ];
        let sys = FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0)], res).unwrap();
        let conn = ParabolicConnection::with_eigenlines(
            sys,
            ExponentBookkeeping::traceless(vec![ZERO; 3]),
            Weight::uniform(3),
            TOL,
        );
        let s = find_invariant_subbundles(&conn, 0, TOL);
        assert_eq!(s.subbundles.len(), 1);
        assert!(s.subbundles[0]
            .fiber(&conn.system, 0)
            .unwrap()
            .same_as(&ParabolicLine::first_axis(), 1e-12));
    }

    #[test]
    fn nilpotent_pair_has_no_constant_line() {
        let a1 = Matrix2::real(0.0, 1.0, 0.0, 0.0);
        let a2 = Matrix2::real(0.0, 0.0, 1.0, 0.0);
        let sys = FuchsianSystem::finite(
            vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
            vec![a1, a2, -a1 - a2],
        )
        .unwrap();
        let (e, _) = sys.residue(2).eigenvalues();
        let book = ExponentBookkeeping::traceless(vec![ZERO, ZERO, e]);
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(3), TOL);
        assert!(find_invariant_subbundles(&conn, 0, TOL)
            .subbundles
            .is_empty());
    }

    #[test]
    fn diagonal_has_both_axes() {
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
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(4), TOL);
        let s = find_invariant_subbundles(&conn, 0, TOL);
        let fibers: Vec<_> = s
            .subbundles
            .iter()
            .map(|f| f.fiber(&conn.system, 0).unwrap())
            .collect();
        assert_eq!(fibers.len(), 2);
        assert!(fibers
            .iter()
            .any(|l| l.same_as(&ParabolicLine::first_axis(), 1e-12)));
        assert!(fibers
            .iter()
            .any(|l| l.same_as(&ParabolicLine::second_axis(), 1e-12)));
    }

    #[test]
    fn aligned_lines_unstable_anti_aligned_stable() {
        let r = check_stability(&triangular(true), DEFAULT_D_MAX, TOL);
        assert!(matches!(r.verdict, StabilityVerdict::Unstable(_)), "{r:?}");
        assert_eq!(r.witness_degree, Some(ratio(2, 1)));
        assert_eq!(r.threshold, ratio(18, 10));
        assert_eq!(r.d_star, 2);
        let r = check_stability(&triangular(false), DEFAULT_D_MAX, TOL);
        assert_eq!(r.verdict, StabilityVerdict::Stable, "{r:?}");
        assert_eq!(r.search.subbundles.len(), 1);
    }
}
