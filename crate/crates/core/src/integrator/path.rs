//! Piecewise paths in the `z`-plane and routing around singular points.

use super::IntegrationError;
use crate::complex::C64;
use crate::domain::TAU_POLE;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// `center + radius·e^{i(start + sweep·t)}`, `t ∈ [0, 1]`.
    Arc { center: C64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn line(from: C64, to: C64) -> Self {
        Segment::Line { from, to }
    }

    pub fn circle(center: C64, radius: f64, start: f64, turns: f64) -> Self {
        Segment::Arc { center, radius, start, sweep: TAU * turns }
    }

    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, sweep } => center + C64::from_polar(radius, start + sweep * t),
        }
    }

    pub fn derivative(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => {
                C64::new(0.0, sweep) * C64::from_polar(radius, start + sweep * t)
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => Segment::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Euclidean distance from `p` to the segment.
    pub fn distance_to(&self, p: C64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let l2 = d.norm_sqr();
                if l2 == 0.0 {
                    return (p - from).norm();
                }
                let t = (((p - from) * d.conj()).re / l2).clamp(0.0, 1.0);
                (p - (from + d * t)).norm()
            }
            Segment::Arc { center, radius, start, sweep } => {
                let q = p - center;
                let ang = q.arg();
                // Is the direction of p covered by the arc?
                let rel = if sweep >= 0.0 { (ang - start).rem_euclid(TAU) } else { (start - ang).rem_euclid(TAU) };
                if sweep.abs() >= TAU || rel <= sweep.abs() {
                    (q.norm() - radius).abs()
                } else {
                    (p - self.start()).norm().min((p - self.end()).norm())
                }
            }
        }
    }

    /// Initial number of panels for the adaptive rule.
    pub fn initial_panels(&self) -> usize {
        match *self {
            Segment::Line { .. } => 4,
            Segment::Arc { sweep, .. } => ((sweep.abs() / (TAU / 8.0)).ceil() as usize).max(4),
        }
    }
}

/// A path with the sheet at its starting point (hyperelliptic domains only).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub segments: Vec<Segment>,
    pub start_w: Option<C64>,
}

impl PathSpec {
    pub fn new(segments: Vec<Segment>, start_w: Option<C64>) -> Self {
        Self { segments, start_w }
    }

    pub fn start(&self) -> Option<C64> {
        self.segments.first().map(|s| s.start())
    }

    pub fn end(&self) -> Option<C64> {
        self.segments.last().map(|s| s.end())
    }

    pub fn is_closed(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => (a - b).norm() <= 1e-12 * a.norm().max(1.0),
            _ => false,
        }
    }
}

/// Radius of the protective circle around `s`: at most `0.1`, and below
/// `0.45` of the distance to any other singular point.
pub fn clearance(s: C64, singular: &[C64]) -> f64 {
    singular
        .iter()
        .map(|&q| (q - s).norm())
        .filter(|&d| d > 1e-12)
        .fold(0.1f64, |r, d| r.min(0.45 * d))
}

/// Straight path from `from` to `to` with counterclockwise semicircular
/// detours around every singular point the line passes too close to.
pub fn route(from: C64, to: C64, singular: &[C64]) -> Result<Vec<Segment>, IntegrationError> {
    let d = to - from;
    let len = d.norm();
    if len == 0.0 {
        return Ok(vec![]);
    }
    let mut detours: Vec<(f64, f64, C64, f64)> = vec![];
    for &s in singular {
        let ds = (s - from).norm().min((s - to).norm());
        if ds <= 1e-12 * s.norm().max(1.0) {
            // An endpoint sits on this point; the path ends (or starts) there.
            continue;
        }
        let mut r = clearance(s, singular);
        let near = (s - from).norm().min((s - to).norm());
        if near < 1.01 * r {
            r = 0.5 * near;
        }
        let t = ((s - from) * d.conj()).re / (len * len);
        if t <= 0.0 || t >= 1.0 {
            continue;
        }
        let foot = from + d * t;
        let dist = (s - foot).norm();
        if dist >= r {
            continue;
        }
        if r < 2.0 * TAU_POLE {
            return Err(IntegrationError::Unroutable(s));
        }
        let h = (r * r - dist * dist).sqrt() / len;
        detours.push((t - h, t + h, s, r));
    }
    detours.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut segs = vec![];
    let mut cur = from;
    for (t_in, t_out, s, r) in detours {
        let p_in = from + d * t_in;
        let p_out = from + d * t_out;
        if (p_in - cur).norm() > 0.0 {
            segs.push(Segment::line(cur, p_in));
        }
        let a_in = (p_in - s).arg();
        let a_out = (p_out - s).arg();
        let sweep = (a_out - a_in).rem_euclid(TAU);
        segs.push(Segment::Arc { center: s, radius: r, start: a_in, sweep });
        cur = p_out;
    }
    segs.push(Segment::line(cur, to));
    Ok(segs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;

    #[test]
    fn route_avoids_points() {
        let sing = [c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)];
        let segs = route(c(-0.9, 0.0), c(0.9, 0.0), &sing).unwrap();
        for s in &sing {
            let d = segs.iter().map(|g| g.distance_to(*s)).fold(f64::INFINITY, f64::min);
            assert!(d > 0.04, "{d}");
        }
        assert!((segs[0].start() - c(-0.9, 0.0)).norm() < 1e-15);
        assert!((segs.last().unwrap().end() - c(0.9, 0.0)).norm() < 1e-15);
        for w in segs.windows(2) {
            assert!((w[0].end() - w[1].start()).norm() < 1e-12);
        }
    }

    #[test]
    fn arc_distance() {
        let a = Segment::circle(c(0.0, 0.0), 1.0, 0.0, 0.25);
        assert!((a.distance_to(c(0.0, 2.0)) - 1.0).abs() < 1e-15);
        assert!((a.distance_to(c(-2.0, 0.0)) - (5.0f64).sqrt()).abs() < 1e-12);
    }
}
