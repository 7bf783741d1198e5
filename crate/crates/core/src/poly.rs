//! Dense complex polynomials, coefficients stored lowest degree first.

use crate::linalg::{C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Poly(vec![c])
    }

    /// `∏ (z − r)` over `roots`.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots
            .iter()
            .fold(Poly(vec![ONE]), |acc, &r| acc.mul(&Poly(vec![-r, ONE])))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.0.get(k).copied().unwrap_or(ZERO)
    }

    /// Degree after dropping coefficients with modulus `≤ tol`; `None` for
    /// the zero polynomial.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        self.0.iter().rposition(|c| c.norm() > tol)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All roots. Coefficients below `tol · max|coeff|` at the top are
    /// treated as zero, so the degree may drop.
    pub fn roots(&self, tol: f64) -> Vec<C64> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return Vec::new();
        }
        let Some(deg) = self.degree(tol * scale) else {
            return Vec::new();
        };
        let c = &self.0[..=deg];
        match deg {
            0 => Vec::new(),
            1 => vec![-c[0] / c[1]],
            2 => quadratic_roots(c[2], c[1], c[0]).to_vec(),
            _ => durand_kerner(c),
        }
    }
}

/// Roots of `a z² + b z + c` with `a ≠ 0`, computed without cancellation.
pub fn quadratic_roots(a: C64, b: C64, c: C64) -> [C64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if q.norm() == 0.0 {
        return [ZERO, ZERO];
    }
    [q / a, c / q]
}

fn durand_kerner(c: &[C64]) -> Vec<C64> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<C64> = c.iter().map(|&x| x / lead).collect();
    let p = Poly(monic);
    let radius = 1.0 + p.0[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let w = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..deg).map(|k| w.powu(k as u32 + 1) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut denom = ONE;
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = p.eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-15 * radius {
            break;
        }
    }
    // One Newton polish per root.
    let dp = p.derivative();
    for zi in z.iter_mut() {
        let d = dp.eval(*zi);
        if d.norm() > 0.0 {
            *zi -= p.eval(*zi) / d;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn from_roots_and_back() {
        let roots = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -1.0), c(4.0, 0.0)];
        let p = Poly::from_roots(&roots);
        let mut found = p.roots(1e-14);
        assert_eq!(found.len(), 4);
        for r in roots {
            let (k, d) = found
                .iter()
                .enumerate()
                .map(|(k, f)| (k, (f - r).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < 1e-10, "root {r} missed by {d}");
            found.remove(k);
        }
    }

    #[test]
    fn degree_drops_with_vanishing_leading_coefficient() {
        let p = Poly(vec![c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0)]);
        let r = p.roots(1e-14);
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }
}
