//! Elementary transformations, eigenline swaps, tensor twists and the
//! affine symmetry groups acting on exponents.
//!
//! A single elementary transformation changes the degree of the underlying
//! bundle, so it cannot be realized on residue data of the trivial bundle.
//! Those are available as exponent bookkeeping only. The degree-preserving
//! composite `Elm⁻` at `tᵢ`, `Elm⁻` at `tⱼ` and a twist by `O(tⱼ)` is
//! realized as an explicit rational gauge by [`schlesinger_transform`].

use crate::error::{Error, Result};
use crate::fuchsian::{ExponentBookkeeping, FuchsianSystem, ParabolicConnection};
use crate::linalg::{wedge, Matrix2, ParabolicLine, C64};
use crate::poly::Poly;
use crate::scalar::Exponent;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum TransformKind<T> {
    /// Upper elementary transformation at a point.
    ElmPlus(usize),
    /// Lower elementary transformation at a point.
    ElmMinus(usize),
    /// Tensor by a rank-one logarithmic connection of degree `deg_l1` with
    /// residues `nu`, so `Σν = −deg_l1`.
    Tensor { nu: Vec<T>, deg_l1: i64 },
    /// Exchange of the marked eigenvalue with the other one.
    Swap(usize),
}

/// Exponents after a transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct BookkeepingDelta<T> {
    pub lambda: Vec<T>,
    pub mu: Vec<T>,
    pub deg_l: i64,
}

impl<T: Exponent> BookkeepingDelta<T> {
    /// `Σμ = −deg L`, checked exactly for rationals and to `tol` for floats.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let sum = self.mu.iter().cloned().fold(T::zero(), |a, b| a + b);
        (sum + T::from_int(self.deg_l)).as_integer(tol) == Some(0)
    }
}

/// The exponent tables of the elementary transformations. Indices outside
/// the point range leave everything unchanged.
pub fn elm_bookkeeping<T: Exponent>(
    kind: &TransformKind<T>,
    lambda: &[T],
    mu: &[T],
    deg_l: i64,
) -> BookkeepingDelta<T> {
    let mut lambda = lambda.to_vec();
    let mut mu = mu.to_vec();
    let mut deg = deg_l;
    let one = T::from_int(1);
    match kind {
        TransformKind::ElmMinus(i) => {
            if let (Some(l), Some(m)) = (lambda.get(*i).cloned(), mu.get(*i).cloned()) {
                lambda[*i] = one.clone() + m.clone() - l;
                mu[*i] = m + one;
                deg -= 1;
            }
        }
        TransformKind::ElmPlus(i) => {
            if let (Some(l), Some(m)) = (lambda.get(*i).cloned(), mu.get(*i).cloned()) {
                lambda[*i] = m.clone() - l;
                mu[*i] = m - one;
                deg += 1;
            }
        }
        TransformKind::Tensor { nu, deg_l1 } => {
            for (k, v) in nu.iter().enumerate().take(lambda.len()) {
                lambda[k] = lambda[k].clone() + v.clone();
                mu[k] = mu[k].clone() + v.clone() + v.clone();
            }
            deg += 2 * deg_l1;
        }
        TransformKind::Swap(i) => {
            if let (Some(l), Some(m)) = (lambda.get(*i).cloned(), mu.get(*i).cloned()) {
                lambda[*i] = m - l;
            }
        }
    }
    BookkeepingDelta {
        lambda,
        mu,
        deg_l: deg,
    }
}

/// [`elm_bookkeeping`] on float bookkeeping. Fails if a twist makes some
/// `μᵢ` non-integral.
pub fn apply_to_book(
    kind: &TransformKind<C64>,
    book: &ExponentBookkeeping,
) -> Result<ExponentBookkeeping> {
    let mu: Vec<C64> = book.mu.iter().map(|&m| C64::from(m as f64)).collect();
    let out = elm_bookkeeping(kind, &book.lambda, &mu, book.deg_l);
    let mu = out
        .mu
        .iter()
        .enumerate()
        .map(|(k, m)| {
            m.as_integer(1e-12).ok_or_else(|| {
                Error::InvalidInput(format!("twist makes mu[{k}] = {m} non-integral"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentBookkeeping::new(out.lambda, mu, out.deg_l))
}

/// Replaces the marked data at point `i` by the other eigenvalue and its
/// eigenline. At a resonant point both coincide and the connection is
/// returned unchanged.
pub fn swap_parabolic(
    conn: &ParabolicConnection,
    i: usize,
    tol: f64,
) -> Result<ParabolicConnection> {
    if i >= conn.n() {
        return Err(Error::InvalidInput(format!(
            "point index {} out of range",
            i + 1
        )));
    }
    let lambda = conn.book.lambda[i];
    let other = conn.book.other_exponent(i);
    if (lambda - other).norm() <= tol {
        return Ok(conn.clone());
    }
    let line = conn
        .system
        .residue(i)
        .eigenline(other, tol)
        .ok_or(Error::IndeterminateEigenline { index: i })?;
    let mut out = conn.clone();
    out.book.lambda[i] = other;
    out.lines[i] = line;
    Ok(out)
}

/// `P(z)/d(z)` with a polynomial matrix `P` and scalar polynomial `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransformation {
    pub numerator: [[Poly; 2]; 2],
    pub denominator: Poly,
}

impl GaugeTransformation {
    /// `I + (a/(z − p))·Q`, stored as `((z − p)·I + a·Q)/(z − p)`.
    fn elementary(q: &Matrix2, a: C64, p: C64) -> Self {
        let lin = Poly(vec![-p, C64::from(1.0)]);
        let entry = |r: usize, c: usize| {
            let base = if r == c { lin.clone() } else { Poly::zero() };
            base.add(&Poly::constant(q.m[r][c] * a))
        };
        Self {
            numerator: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
            denominator: lin,
        }
    }

    pub fn eval(&self, z: C64) -> Matrix2 {
        let d = self.denominator.eval(z);
        Matrix2::new(
            self.numerator[0][0].eval(z) / d,
            self.numerator[0][1].eval(z) / d,
            self.numerator[1][0].eval(z) / d,
            self.numerator[1][1].eval(z) / d,
        )
    }

    /// `det P / d²` at `z`.
    pub fn det_ratio(&self, z: C64) -> C64 {
        let n = &self.numerator;
        let det = n[0][0].eval(z) * n[1][1].eval(z) - n[0][1].eval(z) * n[1][0].eval(z);
        let d = self.denominator.eval(z);
        det / (d * d)
    }

    /// `dG/dz` at `z`, from the quotient rule.
    pub fn derivative(&self, z: C64) -> Matrix2 {
        let d = self.denominator.eval(z);
        let dd = self.denominator.derivative().eval(z);
        let f = |p: &Poly| (p.derivative().eval(z) * d - p.eval(z) * dd) / (d * d);
        let n = &self.numerator;
        Matrix2::new(f(&n[0][0]), f(&n[0][1]), f(&n[1][0]), f(&n[1][1]))
    }
}

/// Output of [`schlesinger_transform`].
#[derive(Clone, Debug, PartialEq)]
pub struct SchlesingerOutput {
    pub system: FuchsianSystem,
    pub book: ExponentBookkeeping,
    pub lines: Vec<ParabolicLine>,
    /// `Y ↦ G·Y`, taking solutions of the old system to the new one.
    pub gauge: GaugeTransformation,
    /// The inverse gauge.
    pub inverse: GaugeTransformation,
}

/// Degree-preserving gauge shifting the exponents at `tᵢ` and `tⱼ`:
/// `λᵢ ↦ 1 + μᵢ − λᵢ`, `μᵢ ↦ μᵢ + 1`, `λⱼ ↦ μⱼ − λⱼ`, `μⱼ ↦ μⱼ − 1`.
///
/// The gauge is `G = I + (tⱼ − tᵢ)/(z − tⱼ)·Q` with `Q` the projector onto
/// the `(μᵢ − λᵢ)`-eigenline at `tᵢ` along the `(μⱼ − λⱼ)`-eigenline at
/// `tⱼ`; `det G = (z − tᵢ)/(z − tⱼ)` and `G⁻¹ = I − (tⱼ − tᵢ)/(z − tᵢ)·Q`.
/// Being single-valued, it leaves the monodromy unchanged.
pub fn schlesinger_transform(
    sys: &FuchsianSystem,
    book: &ExponentBookkeeping,
    lines: &[ParabolicLine],
    i: usize,
    j: usize,
    tol: f64,
) -> Result<SchlesingerOutput> {
    let n = sys.n();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidInput(format!(
            "need two distinct point indices, got {i} and {j}"
        )));
    }
    if book.lambda.len() != n || book.mu.len() != n || lines.len() != n {
        return Err(Error::InvalidInput(
            "bookkeeping and lines must cover every marked point".into(),
        ));
    }
    let (Some(ti), Some(tj)) = (sys.points()[i].finite(), sys.points()[j].finite()) else {
        return Err(Error::InvalidInput(
            "both transformed points must be finite".into(),
        ));
    };
    let (ai, aj) = (sys.residue(i), sys.residue(j));
    let u = ai
        .eigenline(book.other_exponent(i), tol)
        .ok_or(Error::IndeterminateEigenline { index: i })?
        .vector();
    let w = aj
        .eigenline(book.other_exponent(j), tol)
        .ok_or(Error::IndeterminateEigenline { index: j })?
        .vector();
    let cross = wedge(w, u);
    if cross.norm() <= tol.sqrt() {
        return Err(Error::DegenerateGauge(format!(
            "the eigenlines used at points {} and {} coincide",
            i + 1,
            j + 1
        )));
    }
    // Q = u·det[w, ·]/det[w, u].
    let q = Matrix2::new(-u[0] * w[1], u[0] * w[0], -u[1] * w[1], u[1] * w[0]).scale(cross.inv());
    let a = tj - ti;
    let id = Matrix2::identity();
    let regular = |k: usize, at: C64| -> Matrix2 {
        sys.finite_points()
            .into_iter()
            .filter(|&(m, _)| m != k)
            .map(|(m, t)| sys.residue(m).scale((at - t).inv()))
            .sum()
    };
    let gauge = GaugeTransformation::elementary(&q, a, tj);
    let inverse = GaugeTransformation::elementary(&q, -a, ti);

    let mut finite = Vec::with_capacity(n);
    let mut new_lines = Vec::with_capacity(n);
    let mut lambda = book.lambda.clone();
    let mut mu = book.mu.clone();
    lambda[i] = C64::from(1.0 + book.mu[i] as f64) - book.lambda[i];
    mu[i] += 1;
    lambda[j] = book.other_exponent(j);
    mu[j] -= 1;
    for (k, p) in sys.points().iter().enumerate() {
        let Some(t) = p.finite() else {
            // The gauge is I + O(1/z) at ∞: residue and line are unchanged.
            new_lines.push(lines[k]);
            continue;
        };
        let res = if k == i {
            let r = regular(i, ti);
            (id - q) * ai + q * ai * q - ((id - q) * r * q).scale(a) + q
        } else if k == j {
            let r = regular(j, tj);
            aj * (id - q) + q * aj * q + (q * r * (id - q)).scale(a) - q
        } else {
            let g = gauge.eval(t);
            let g_inv = inverse.eval(t);
            g * sys.residue(k) * g_inv
        };
        let line = if k == i || k == j {
            res.eigenline(lambda[k], tol)
                .ok_or(Error::IndeterminateEigenline { index: k })?
        } else {
            lines[k].transformed(&gauge.eval(t)).ok_or_else(|| {
                Error::DegenerateGauge(format!("gauge kills the line at point {}", k + 1))
            })?
        };
        finite.push(res);
        new_lines.push(line);
    }
    let system = FuchsianSystem::new(sys.points().to_vec(), finite)?;
    Ok(SchlesingerOutput {
        system,
        book: ExponentBookkeeping::new(lambda, mu, book.deg_l),
        lines: new_lines,
        gauge,
        inverse,
    })
}

/// [`schlesinger_transform`] keeping the weight.
pub fn schlesinger_connection(
    conn: &ParabolicConnection,
    i: usize,
    j: usize,
    tol: f64,
) -> Result<ParabolicConnection> {
    let out = schlesinger_transform(&conn.system, &conn.book, &conn.lines, i, j, tol)?;
    Ok(ParabolicConnection::new(
        out.system,
        out.book,
        out.lines,
        conn.weight.clone(),
    ))
}

/// `λ ↦ Lλ + b` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMapOnLambda {
    pub linear: Vec<Vec<BigRational>>,
    pub translation: Vec<BigRational>,
}

fn sparse_dot(a: &[BigRational], b: &[&BigRational]) -> BigRational {
    let mut acc = <BigRational as Zero>::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * *y;
        }
    }
    acc
}

impl AffineMapOnLambda {
    pub fn identity(n: usize) -> Self {
        let linear = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            BigRational::one()
                        } else {
                            <BigRational as Zero>::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            linear,
            translation: vec![<BigRational as Zero>::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `self ∘ inner`: `inner` is applied first. The matrices are sparse,
    /// so zero coefficients are skipped.
    pub fn compose(&self, inner: &Self) -> Self {
        let n = self.dim();
        let row = |r: usize, col: &[&BigRational]| sparse_dot(&self.linear[r], col);
        let linear = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| row(r, &inner.linear.iter().map(|l| &l[c]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let translation = (0..n)
            .map(|r| row(r, &inner.translation.iter().collect::<Vec<_>>()) + &self.translation[r])
            .collect();
        Self {
            linear,
            translation,
        }
    }

    pub fn apply<T: Exponent>(&self, lambda: &[T]) -> Vec<T> {
        (0..self.dim())
            .map(|r| {
                let mut acc = T::from_ratio(&self.translation[r]);
                for (c, l) in lambda.iter().enumerate() {
                    let coeff = &self.linear[r][c];
                    if !coeff.is_zero() {
                        acc = acc + T::from_ratio(coeff) * l.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// Composition of `maps` as a word: the last map is applied first.
    pub fn word(n: usize, maps: impl IntoIterator<Item = Self>) -> Self {
        maps.into_iter()
            .fold(Self::identity(n), |acc, m| acc.compose(&m))
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Generator `s_k`, `k ∈ 0..=4`, of the affine Weyl group of type `D₄⁽¹⁾`
/// acting on `(λ₁, …, λ₄)`: `s_k` negates `λ_k` for `k ≥ 1`, and
/// `s₀(λᵢ) = λᵢ − ½Σλ + ½`.
pub fn weyl_generator(k: usize) -> Result<AffineMapOnLambda> {
    let mut m = AffineMapOnLambda::identity(4);
    match k {
        0 => {
            for r in 0..4 {
                for c in 0..4 {
                    m.linear[r][c] -= half();
                }
                m.translation[r] = half();
            }
        }
        1..=4 => m.linear[k - 1][k - 1] = -BigRational::one(),
        _ => return Err(Error::InvalidInput(format!("no Weyl generator s{k}"))),
    }
    Ok(m)
}

/// The map of a word `s_{k₁}s_{k₂}⋯`, rightmost letter applied first.
pub fn weyl_word(word: &[usize]) -> Result<AffineMapOnLambda> {
    Ok(AffineMapOnLambda::word(
        4,
        word.iter()
            .map(|&k| weyl_generator(k))
            .collect::<Result<Vec<_>>>()?,
    ))
}

pub fn weyl_apply<T: Exponent>(word: &[usize], lambda: &[T]) -> Result<Vec<T>> {
    if lambda.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "the Weyl action needs 4 exponents, got {}",
            lambda.len()
        )));
    }
    Ok(weyl_word(word)?.apply(lambda))
}

/// Generators of the Bäcklund group on `n` exponents (0-based indices).
/// The last point carries the shifted forms tied to the determinant
/// `O(−tₙ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlGenerator {
    /// `λ + eᵢ`.
    TPlus(usize),
    /// `λ + (eᵢ + eⱼ)/2`.
    TPlusPair(usize, usize),
    /// `λᵢ ↦ ½ − λᵢ`, `λⱼ ↦ ½ − λⱼ`; for `j` the last index `λⱼ ↦ 3/2 − λⱼ`.
    TMinusPair(usize, usize),
    /// `λₖ ↦ −λₖ`; for the last index `λₖ ↦ 1 − λₖ`.
    R(usize),
}

impl fmt::Display for BlGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BlGenerator::TPlus(i) => write!(f, "t+{}", i + 1),
            BlGenerator::TPlusPair(i, j) => write!(f, "t+{},{}", i + 1, j + 1),
            BlGenerator::TMinusPair(i, j) => write!(f, "t-{},{}", i + 1, j + 1),
            BlGenerator::R(k) => write!(f, "r{}", k + 1),
        }
    }
}

impl BlGenerator {
    pub fn map(&self, n: usize) -> Result<AffineMapOnLambda> {
        let check = |k: usize| {
            if k < n {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "index {} out of range for {n} points",
                    k + 1
                )))
            }
        };
        let pair = |i: usize, j: usize| -> Result<(usize, usize)> {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(Error::InvalidInput(format!(
                    "{self} needs two distinct indices"
                )));
            }
            Ok((i.min(j), i.max(j)))
        };
        let mut m = AffineMapOnLambda::identity(n);
        match *self {
            BlGenerator::TPlus(i) => {
                check(i)?;
                m.translation[i] = BigRational::one();
            }
            BlGenerator::TPlusPair(i, j) => {
                let (i, j) = pair(i, j)?;
                m.translation[i] = half();
                m.translation[j] = half();
            }
            BlGenerator::TMinusPair(i, j) => {
                let (i, j) = pair(i, j)?;
                m.linear[i][i] = -BigRational::one();
                m.linear[j][j] = -BigRational::one();
                m.translation[i] = half();
                m.translation[j] = if j + 1 == n {
                    half() * BigRational::from_integer(3.into())
                } else {
                    half()
                };
            }
            BlGenerator::R(k) => {
                check(k)?;
                m.linear[k][k] = -BigRational::one();
                if k + 1 == n {
                    m.translation[k] = BigRational::one();
                }
            }
        }
        Ok(m)
    }
}

pub fn bl_apply<T: Exponent>(generator: BlGenerator, lambda: &[T]) -> Result<Vec<T>> {
    Ok(generator.map(lambda.len())?.apply(lambda))
}

/// The map of a word of generators, rightmost applied first.
pub fn bl_word(word: &[BlGenerator], n: usize) -> Result<AffineMapOnLambda> {
    Ok(AffineMapOnLambda::word(
        n,
        word.iter().map(|g| g.map(n)).collect::<Result<Vec<_>>>()?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{local_exponents, random_connection, SpherePoint, Weight};
    use crate::linalg::c;
    use crate::scalar::ratio;

    fn q(p: i64, d: i64) -> BigRational {
        ratio(p, d)
    }

    #[test]
    fn elm_tables() {
        let l = [q(3, 10)];
        let m = [q(0, 1)];
        let minus = elm_bookkeeping(&TransformKind::ElmMinus(0), &l, &m, 0);
        assert_eq!(
            (minus.lambda[0].clone(), minus.mu[0].clone(), minus.deg_l),
            (q(7, 10), q(1, 1), -1)
        );
        let plus = elm_bookkeeping(&TransformKind::ElmPlus(0), &l, &m, 0);
        assert_eq!(
            (plus.lambda[0].clone(), plus.mu[0].clone(), plus.deg_l),
            (q(-3, 10), q(-1, 1), 1)
        );
        let back = elm_bookkeeping(
            &TransformKind::ElmPlus(0),
            &minus.lambda,
            &minus.mu,
            minus.deg_l,
        );
        assert_eq!(
            (back.lambda, back.mu, back.deg_l),
            (l.to_vec(), m.to_vec(), 0)
        );
    }

    #[test]
    fn swap_diagonal() {
        let sys = FuchsianSystem::with_infinity(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![
                Matrix2::real(0.3, 0.0, 0.0, -0.3),
                Matrix2::real(0.2, 0.0, 0.0, -0.2),
            ],
        )
        .unwrap();
        let book = ExponentBookkeeping::traceless(vec![c(0.3, 0.0), c(0.2, 0.0), c(-0.5, 0.0)]);
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(3), 1e-8);
        let s = swap_parabolic(&conn, 0, 1e-8).unwrap();
        assert_eq!(s.lines[0], ParabolicLine::second_axis());
        assert_eq!(s.book.lambda[0], c(-0.3, 0.0));
        assert_eq!(swap_parabolic(&s, 0, 1e-8).unwrap(), conn);
    }

    #[test]
    fn swap_resonant_is_identity() {
        let sys = FuchsianSystem::finite(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![
                Matrix2::real(0.0, 1.0, 0.0, 0.0),
                Matrix2::real(0.0, -1.0, 0.0, 0.0),
            ],
        )
        .unwrap();
        let book = ExponentBookkeeping::traceless(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        let conn = ParabolicConnection::with_eigenlines(sys, book, Weight::uniform(2), 1e-8);
        assert_eq!(swap_parabolic(&conn, 0, 1e-8).unwrap(), conn);
    }

    fn gauge_check(sys: &FuchsianSystem, out: &SchlesingerOutput) {
        // Ã = G′G⁻¹ + G·A·G⁻¹ at sample points off the poles.
        for z in [c(0.37, 0.81), c(-1.3, 0.2), c(2.2, -0.7)] {
            let g = out.gauge.eval(z);
            let g_inv = out.inverse.eval(z);
            assert!((g * g_inv - Matrix2::identity()).max_abs() < 1e-12);
            let expected = out.gauge.derivative(z) * g_inv + g * sys.connection_matrix(z) * g_inv;
            let got = out.system.connection_matrix(z);
            assert!(
                (expected - got).max_abs() < 1e-10,
                "{expected:?} vs {got:?}"
            );
        }
    }

    #[test]
    fn diagonal_closed_form() {
        // For diagonal data the gauge is diag(1, (z − tᵢ)/(z − tⱼ)): the
        // second component's residue moves by +1 at tᵢ and −1 at tⱼ.
        let l = [0.1, 0.2, 0.3];
        let res: Vec<_> = l.iter().map(|&x| Matrix2::real(x, 0.0, 0.0, -x)).collect();
        let sys =
            FuchsianSystem::with_infinity(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], res.clone())
                .unwrap();
        // Marked lines [1:0] at t₀ and [0:1] at t₁.
        let book = ExponentBookkeeping::traceless(vec![
            c(0.1, 0.0),
            c(-0.2, 0.0),
            c(0.3, 0.0),
            c(-0.6, 0.0),
        ]);
        let lines = crate::fuchsian::default_lines(&sys, &book, 1e-8);
        assert_eq!(lines[1], ParabolicLine::second_axis());
        let out = schlesinger_transform(&sys, &book, &lines, 0, 1, 1e-8).unwrap();
        let expect = [
            Matrix2::real(0.1, 0.0, 0.0, 0.9),
            Matrix2::real(0.2, 0.0, 0.0, -1.2),
            res[2],
        ];
        for (k, e) in expect.iter().enumerate() {
            assert!(
                (out.system.residue(k) - *e).max_abs() < 1e-14,
                "{k}: {:?}",
                out.system.residue(k)
            );
        }
        assert!((out.book.lambda[0] - c(0.9, 0.0)).norm() < 1e-15);
        assert!((out.book.lambda[1] - c(0.2, 0.0)).norm() < 1e-15);
        assert_eq!(
            (out.book.mu.clone(), out.book.deg_l),
            (vec![1, -1, 0, 0], 0)
        );
        gauge_check(&sys, &out);
        let z = c(0.4, 0.3);
        assert!((out.gauge.det_ratio(z) - z / (z - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn generic_gauge_and_bookkeeping() {
        let lambda: Vec<C64> = [0.11, 0.23, 0.37, 0.41]
            .iter()
            .map(|&x| c(x, 0.0))
            .collect();
        let pts = vec![
            SpherePoint::Finite(c(0.0, 0.0)),
            SpherePoint::Finite(c(1.0, 0.0)),
            SpherePoint::Finite(c(2.0, 0.5)),
            SpherePoint::Infinity,
        ];
        let conn = random_connection(pts, lambda, 7).unwrap();
        let out = schlesinger_transform(&conn.system, &conn.book, &conn.lines, 0, 2, 1e-8).unwrap();
        gauge_check(&conn.system, &out);
        local_exponents(&out.system, &out.book, 1e-8).unwrap();
        let new = ParabolicConnection::new(
            out.system.clone(),
            out.book.clone(),
            out.lines.clone(),
            conn.weight.clone(),
        );
        assert!(new.validate(1e-8).is_valid(), "{}", new.validate(1e-8));
        // The composite of the tables: Elm⁻ at both points, then O(tⱼ).
        let mu: Vec<C64> = conn.book.mu.iter().map(|&m| C64::from(m as f64)).collect();
        let mut nu = vec![C64::from(0.0); 4];
        nu[2] = C64::from(-1.0);
        let d = elm_bookkeeping(&TransformKind::ElmMinus(0), &conn.book.lambda, &mu, 0);
        let d = elm_bookkeeping(&TransformKind::ElmMinus(2), &d.lambda, &d.mu, d.deg_l);
        let d = elm_bookkeeping(
            &TransformKind::Tensor { nu, deg_l1: 1 },
            &d.lambda,
            &d.mu,
            d.deg_l,
        );
        for k in 0..4 {
            assert!((d.lambda[k] - out.book.lambda[k]).norm() < 1e-14);
            assert!((d.mu[k] - C64::from(out.book.mu[k] as f64)).norm() < 1e-14);
        }
        assert_eq!(d.deg_l, out.book.deg_l);
        // The reverse transform undoes the bookkeeping.
        let back = schlesinger_transform(&out.system, &out.book, &out.lines, 2, 0, 1e-8).unwrap();
        for k in 0..4 {
            assert!((back.book.lambda[k] - conn.book.lambda[k]).norm() < 1e-14);
        }
        assert_eq!(back.book.mu, conn.book.mu);
    }

    #[test]
    fn aligned_lines_are_degenerate() {
        let sys = FuchsianSystem::with_infinity(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![
                Matrix2::real(0.1, 0.0, 0.0, -0.1),
                Matrix2::real(0.2, 0.0, 0.0, -0.2),
            ],
        )
        .unwrap();
        // Both "other" eigenlines are [0:1].
        let book = ExponentBookkeeping::traceless(vec![c(0.1, 0.0), c(0.2, 0.0), c(-0.3, 0.0)]);
        let lines = crate::fuchsian::default_lines(&sys, &book, 1e-8);
        assert!(matches!(
            schlesinger_transform(&sys, &book, &lines, 0, 1, 1e-8),
            Err(Error::DegenerateGauge(_))
        ));
    }

    #[test]
    fn weyl_examples() {
        let l = [q(3, 10), q(1, 10), q(1, 5), q(2, 5)];
        assert_eq!(
            weyl_apply(&[1], &l).unwrap(),
            vec![q(-3, 10), q(1, 10), q(1, 5), q(2, 5)]
        );
        let l = [q(1, 2), q(0, 1), q(0, 1), q(0, 1)];
        assert_eq!(
            weyl_apply(&[0], &l).unwrap(),
            vec![q(3, 4), q(1, 4), q(1, 4), q(1, 4)]
        );
        assert!(weyl_word(&[0, 0]).unwrap().is_identity());
        let f = weyl_apply(&[1], &[c(0.3, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.4, 0.0)]).unwrap();
        assert_eq!(f[0], c(-0.3, 0.0));
    }

    #[test]
    fn bl_examples() {
        let l = [q(1, 10), q(1, 5), q(3, 10), q(2, 5)];
        assert_eq!(
            bl_apply(BlGenerator::TPlus(0), &l).unwrap(),
            vec![q(11, 10), q(1, 5), q(3, 10), q(2, 5)]
        );
        assert_eq!(
            bl_apply(BlGenerator::TMinusPair(0, 1), &l).unwrap(),
            vec![q(2, 5), q(3, 10), q(3, 10), q(2, 5)]
        );
        assert_eq!(bl_apply(BlGenerator::R(3), &l).unwrap()[3], q(3, 5));
        assert_eq!(
            bl_apply(BlGenerator::TMinusPair(1, 3), &l).unwrap()[3],
            q(11, 10)
        );
        assert!(BlGenerator::R(4).map(4).is_err());
    }
}
