//! Resonant and reducible exponent vectors.

use crate::scalar::Exponent;
use serde::{Deserialize, Serialize};

/// A sign vector `ε ∈ {±1}ⁿ`.
pub type SignPattern = Vec<i8>;

/// The affine hyperplane `normal · λ = level` in exponent space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionWall {
    pub normal: Vec<i8>,
    pub level: i64,
}

impl ReflectionWall {
    /// Reflection of `λ` across the wall.
    pub fn reflect<T: Exponent>(&self, lambda: &[T]) -> Vec<T> {
        let nn: i64 = self.normal.iter().map(|&x| (x as i64) * (x as i64)).sum();
        let dot = self
            .normal
            .iter()
            .zip(lambda)
            .fold(T::zero(), |acc, (&k, l)| {
                acc + T::from_int(k as i64) * l.clone()
            });
        let coef = (dot - T::from_int(self.level)) * T::from_frac(2, nn);
        self.normal
            .iter()
            .zip(lambda)
            .map(|(&k, l)| l.clone() - coef.clone() * T::from_int(k as i64))
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpecialWitnesses {
    /// Indices `i` with `2λᵢ ∈ ℤ`.
    pub resonant: Vec<usize>,
    /// Every `ε` with `Σ εᵢλᵢ ∈ ℤ`, with that integer.
    pub reducible: Vec<(SignPattern, i64)>,
    /// Walls through `λ`; only reported for four points.
    pub walls: Vec<ReflectionWall>,
}

impl SpecialWitnesses {
    pub fn is_resonant(&self) -> bool {
        !self.resonant.is_empty()
    }

    pub fn is_reducible(&self) -> bool {
        !self.reducible.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExponentClass {
    Generic,
    Special(SpecialWitnesses),
}

impl ExponentClass {
    pub fn is_generic(&self) -> bool {
        matches!(self, ExponentClass::Generic)
    }

    pub fn witnesses(&self) -> Option<&SpecialWitnesses> {
        match self {
            ExponentClass::Generic => None,
            ExponentClass::Special(w) => Some(w),
        }
    }
}

/// Classifies `λ` by an exhaustive scan over indices and sign patterns.
///
/// `μ` only enters through its integrality, which is assumed, so the other
/// exponent `μᵢ − λᵢ` is congruent to `−λᵢ`; it is accepted for symmetry
/// with the bookkeeping.
pub fn classify_lambda<T: Exponent>(lambda: &[T], _mu: &[i64], tol: f64) -> ExponentClass {
    let n = lambda.len();
    let mut w = SpecialWitnesses::default();
    for (i, l) in lambda.iter().enumerate() {
        if let Some(m) = (l.clone() + l.clone()).as_integer(tol) {
            w.resonant.push(i);
            if n == 4 {
                let mut normal = vec![0; 4];
                normal[i] = 2;
                w.walls.push(ReflectionWall { normal, level: m });
            }
        }
    }
    for mask in 0u64..(1u64 << n) {
        let eps: SignPattern = (0..n)
            .map(|k| if mask >> k & 1 == 0 { 1 } else { -1 })
            .collect();
        let sum = eps.iter().zip(lambda).fold(T::zero(), |acc, (&e, l)| {
            if e > 0 {
                acc + l.clone()
            } else {
                acc - l.clone()
            }
        });
        if let Some(m) = sum.as_integer(tol) {
            // Only the pattern with a leading `+` names a wall; `−ε` is the same hyperplane.
            if n == 4 && eps[0] > 0 {
                w.walls.push(ReflectionWall {
                    normal: eps.clone(),
                    level: m,
                });
            }
            w.reducible.push((eps, m));
        }
    }
    if w.resonant.is_empty() && w.reducible.is_empty() {
        ExponentClass::Generic
    } else {
        ExponentClass::Special(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn q(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(a, b)| ratio(a, b)).collect()
    }

    #[test]
    fn resonant_half() {
        let l = q(&[(1, 2), (13, 100), (21, 100), (34, 100)]);
        let w = classify_lambda(&l, &[0; 4], 0.0);
        let w = w.witnesses().unwrap();
        assert_eq!(w.resonant, vec![0]);
        assert!(w.walls.contains(&ReflectionWall {
            normal: vec![2, 0, 0, 0],
            level: 1
        }));
    }

    #[test]
    fn quarter_is_reducible_with_sign_pairs() {
        let l = q(&[(1, 4); 4]);
        let cls = classify_lambda(&l, &[0; 4], 0.0);
        let w = cls.witnesses().unwrap();
        assert!(w.resonant.is_empty());
        let plus: Vec<&SignPattern> = w
            .reducible
            .iter()
            .map(|(e, _)| e)
            .filter(|e| e[0] > 0)
            .collect();
        assert_eq!(
            plus,
            vec![
                &vec![1, 1, 1, 1],
                &vec![1, -1, -1, 1],
                &vec![1, -1, 1, -1],
                &vec![1, 1, -1, -1]
            ]
        );
        for (e, m) in &w.reducible {
            let neg: SignPattern = e.iter().map(|x| -x).collect();
            assert!(w.reducible.contains(&(neg, -m)));
        }
        assert_eq!(w.walls.len(), 4);
    }

    #[test]
    fn generic_floats() {
        let l: Vec<C64> = [0.11, 0.23, 0.37, 0.41]
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect();
        assert!(classify_lambda(&l, &[0; 4], 1e-8).is_generic());
    }

    #[test]
    fn reflection_across_s0_wall() {
        let wall = ReflectionWall {
            normal: vec![1, 1, 1, 1],
            level: 1,
        };
        let l = q(&[(1, 2), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(wall.reflect(&l), q(&[(3, 4), (1, 4), (1, 4), (1, 4)]));
    }
}
