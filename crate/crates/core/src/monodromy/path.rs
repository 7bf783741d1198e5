//! Piecewise paths in ℂ made of line segments and circular arcs.

use crate::error::{Error, Result};
use crate::linalg::{C64, I};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line {
        from: C64,
        to: C64,
    },
    /// `center + radius·e^{iθ}` for `θ` from `start` to `start + sweep`.
    Arc {
        center: C64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Segment {
    /// Position at `s ∈ [0, 1]`.
    pub fn point(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + C64::from_polar(radius, start + sweep * s),
        }
    }

    /// `dz/ds`.
    pub fn tangent(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc {
                radius,
                start,
                sweep,
                ..
            } => I * C64::from_polar(radius * sweep, start + sweep * s),
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => Segment::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    pub fn distance_to(&self, p: C64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let s = (((p - from) * d.conj()).re / len2).clamp(0.0, 1.0);
                (p - (from + d * s)).norm()
            }
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let rel = p - center;
                let on_circle = (rel.norm() - radius).abs();
                if sweep.abs() >= TAU || rel.norm() == 0.0 {
                    return on_circle;
                }
                let (lo, width) = if sweep >= 0.0 {
                    (start, sweep)
                } else {
                    (start + sweep, -sweep)
                };
                let offset = (rel.arg() - lo).rem_euclid(TAU);
                if offset <= width {
                    on_circle
                } else {
                    (p - self.start()).norm().min((p - self.end()).norm())
                }
            }
        }
    }

    /// `∫ dz/(z − p)` along the segment, exactly. For a line the argument
    /// change is below π, so the principal logarithm of the endpoint ratio
    /// is correct. An arc is replaced by chords close enough to it that no
    /// chord–arc lune contains `p`.
    pub fn log_increment(&self, p: C64) -> C64 {
        match *self {
            Segment::Line { from, to } => ((to - p) / (from - p)).ln(),
            Segment::Arc {
                center,
                radius,
                sweep,
                ..
            } => {
                let delta = ((p - center).norm() - radius).abs();
                let ratio = (delta / (2.0 * radius)).min(1.0);
                let max_piece = (2.0 * (1.0 - ratio).acos()).min(FRAC_PI_2);
                let pieces = (sweep.abs() / max_piece).ceil().max(1.0) as usize;
                (0..pieces)
                    .map(|k| {
                        let a = self.point(k as f64 / pieces as f64);
                        let b = self.point((k + 1) as f64 / pieces as f64);
                        ((b - p) / (a - p)).ln()
                    })
                    .sum()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    segments: Vec<Segment>,
}

impl Path {
    /// Checks that consecutive segments share endpoints.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput(
                "a path needs at least one segment".into(),
            ));
        }
        for (k, w) in segments.windows(2).enumerate() {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > 1e-9 * (1.0 + w[0].end().norm()) {
                return Err(Error::InvalidInput(format!(
                    "segments {k} and {} do not meet (gap {gap:e})",
                    k + 1
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> C64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> C64 {
        self.segments[self.segments.len() - 1].end()
    }

    /// This path followed by `other`.
    pub fn then(&self, other: &Path) -> Path {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Path { segments }
    }

    pub fn reversed(&self) -> Path {
        Path {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    pub fn distance_to(&self, p: C64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn log_integral(&self, p: C64) -> C64 {
        self.segments.iter().map(|s| s.log_increment(p)).sum()
    }

    /// Winding number around `p`; meaningful for closed paths.
    pub fn winding_number(&self, p: C64) -> i64 {
        (self.log_integral(p).im / TAU).round() as i64
    }

    /// Full counterclockwise circle.
    pub fn circle(center: C64, radius: f64) -> Path {
        Path {
            segments: vec![Segment::Arc {
                center,
                radius,
                start: -PI / 2.0,
                sweep: TAU,
            }],
        }
    }

    /// Out along a straight tail from `base`, once counterclockwise around
    /// `pole` at `radius`, and back.
    pub fn lasso(base: C64, pole: C64, radius: f64) -> Path {
        let dir = (base - pole) / (base - pole).norm();
        let entry = pole + dir * radius;
        Path {
            segments: vec![
                Segment::Line {
                    from: base,
                    to: entry,
                },
                Segment::Arc {
                    center: pole,
                    radius,
                    start: dir.arg(),
                    sweep: TAU,
                },
                Segment::Line {
                    from: entry,
                    to: base,
                },
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn lasso_winds_once() {
        let p = Path::lasso(c(0.0, -3.0), c(1.0, 0.0), 0.1);
        assert_eq!(p.winding_number(c(1.0, 0.0)), 1);
        assert_eq!(p.winding_number(c(2.0, 0.0)), 0);
        assert_eq!(p.reversed().winding_number(c(1.0, 0.0)), -1);
        assert!((p.start() - p.end()).norm() < 1e-15);
    }

    #[test]
    fn exact_log_integral_off_center() {
        // Pole inside the circle but close to it.
        let circle = Path::circle(c(0.0, 0.0), 1.0);
        let l = circle.log_integral(c(0.0, 0.97));
        assert!((l - C64::new(0.0, TAU)).norm() < 1e-12, "{l}");
        let l = circle.log_integral(c(1.02, 0.0));
        assert!(l.norm() < 1e-12, "{l}");
    }

    #[test]
    fn arc_distance() {
        let half = Segment::Arc {
            center: c(0.0, 0.0),
            radius: 1.0,
            start: 0.0,
            sweep: PI,
        };
        assert!((half.distance_to(c(0.0, 2.0)) - 1.0).abs() < 1e-15);
        assert!((half.distance_to(c(0.0, -2.0)) - 5f64.sqrt()).abs() < 1e-15);
    }
}
