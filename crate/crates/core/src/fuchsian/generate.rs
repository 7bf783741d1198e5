//! Seeded random trace-free systems with prescribed local exponents.
//!
//! For `X = [[x, y], [z, −x]]` write `q(X) = x² + yz = −det X`, so `X` has
//! eigenvalues `±λ` iff `q(X) = λ²`. All residues but the last two are drawn
//! as random conjugates of `diag(λ, −λ)`. With `S` their sum, the
//! second-to-last residue `X` must satisfy `q(X) = λ²` and
//! `q(S + X) = λ′²`, which is a conic intersected with a hyperplane; the last
//! residue is `−(S + X)`.

use super::{ExponentBookkeeping, FuchsianSystem, ParabolicConnection, SpherePoint, Weight};
use crate::error::{Error, Result};
use crate::linalg::{Matrix2, C64};
use crate::poly::quadratic_roots;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ATTEMPTS: usize = 64;

fn random_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_conjugate<R: Rng>(lambda: C64, rng: &mut R) -> Matrix2 {
    loop {
        let g = Matrix2::new(random_c(rng), random_c(rng), random_c(rng), random_c(rng));
        if g.det().norm() > 0.2 {
            return Matrix2::diag(lambda, -lambda)
                .conjugate_by(&g)
                .expect("det bounded away from 0");
        }
    }
}

fn q(x: &Matrix2) -> C64 {
    -x.det()
}

/// Solves `q(X) = l2` and `q(S + X) = m2` for trace-free `X`.
fn close_up<R: Rng>(s: &Matrix2, l2: C64, m2: C64, rng: &mut R) -> Option<Matrix2> {
    let (sx, sy, sz) = (s.m[0][0], s.m[0][1], s.m[1][0]);
    // q(S + X) = q(S) + 2⟨S, X⟩ + q(X) with ⟨S, X⟩ = sx·x + (sy·z + sz·y)/2.
    let kappa = m2 - l2 - q(s);
    let x = random_c(rng);
    // sx·x + (sy·z + sz·y)/2 = κ/2, solved for one of y, z; then x² + yz = l2.
    let (y, z) = if sz.norm() >= sy.norm() {
        if sz.norm() < 1e-8 {
            return None;
        }
        // y = (κ − 2sx·x − sy·z)/sz
        let c0 = (kappa - sx * x * 2.0) / sz;
        let c1 = -sy / sz;
        // x² + (c0 + c1 z) z − l2 = 0
        let z = pick_root(c1, c0, x * x - l2, rng)?;
        (c0 + c1 * z, z)
    } else {
        let c0 = (kappa - sx * x * 2.0) / sy;
        let c1 = -sz / sy;
        let y = pick_root(c1, c0, x * x - l2, rng)?;
        (y, c0 + c1 * y)
    };
    Some(Matrix2::new(x, y, z, -x))
}

fn pick_root<R: Rng>(a: C64, b: C64, c: C64, rng: &mut R) -> Option<C64> {
    if a.norm() < 1e-12 {
        return (b.norm() > 1e-12).then(|| -c / b);
    }
    let r = quadratic_roots(a, b, c);
    Some(r[rng.gen_range(0..2)])
}

/// Finite residues of a random trace-free system whose residue at the
/// `k`-th marked point (including a marked `∞`) has eigenvalues `±λₖ`.
pub fn random_residues<R: Rng>(
    points: &[SpherePoint],
    lambda: &[C64],
    rng: &mut R,
) -> Result<Vec<Matrix2>> {
    let n = points.len();
    if lambda.len() != n || n < 2 {
        return Err(Error::InvalidInput(format!(
            "{} exponents for {n} marked points",
            lambda.len()
        )));
    }
    for _ in 0..ATTEMPTS {
        let mut all: Vec<Matrix2> = lambda[..n - 2]
            .iter()
            .map(|&l| random_conjugate(l, rng))
            .collect();
        let s: Matrix2 = all.iter().copied().sum();
        let Some(x) = close_up(
            &s,
            lambda[n - 2] * lambda[n - 2],
            lambda[n - 1] * lambda[n - 1],
            rng,
        ) else {
            continue;
        };
        all.push(x);
        all.push(-(s + x));
        if all.iter().any(|a| a.max_abs() > 20.0 || !a.is_finite()) {
            continue;
        }
        let ok = all
            .iter()
            .zip(lambda)
            .all(|(a, &l)| (q(a) - l * l).norm() <= 1e-10 * (1.0 + a.max_abs()).powi(2));
        if !ok {
            continue;
        }
        return Ok(points
            .iter()
            .zip(all)
            .filter(|(p, _)| !p.is_infinity())
            .map(|(_, a)| a)
            .collect());
    }
    Err(Error::RetryBudgetExhausted {
        attempts: ATTEMPTS,
        witness: "no well-conditioned closing residue found".into(),
    })
}

/// A random parabolic connection with `μ = 0`, the `λ`-eigenlines and the
/// uniform weight. An `∞` marked point must come last.
pub fn random_connection(
    points: Vec<SpherePoint>,
    lambda: Vec<C64>,
    seed: u64,
) -> Result<ParabolicConnection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let res = random_residues(&points, &lambda, &mut rng)?;
    let n = points.len();
    let sys = FuchsianSystem::new(points, res)?;
    // The closing residue may carry −λ as its first eigenvalue; mark λ
    // explicitly so the eigenline matches the bookkeeping.
    let book = ExponentBookkeeping::traceless(lambda);
    Ok(ParabolicConnection::with_eigenlines(
        sys,
        book,
        Weight::uniform(n),
        1e-8,
    ))
}
