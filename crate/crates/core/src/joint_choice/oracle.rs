//! Monte Carlo check of a decomposition against sampled weighted-utility
//! preferences, and generators of random event configurations.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cone::V3;
use super::{BinaryEvent, Decomposition, Relation};
use crate::error::{Error, Result};
use crate::geometry::{Lottery, Point};
use crate::montecarlo::{self, McConfig};
use crate::scalar::rat;

/// Distance below which a sampled pivot counts as lying on an event line.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PivotSampler {
    /// Uniform angle on a circle around the simplex centre (½, ½).
    Circle { radius: f64 },
    /// Pivots spread over the plane: a box around the simplex and a
    /// heavy-tailed radial law.
    Broad,
}

impl PivotSampler {
    pub fn defaults() -> Vec<PivotSampler> {
        vec![
            PivotSampler::Circle { radius: 0.9 },
            PivotSampler::Circle { radius: 1.5 },
            PivotSampler::Broad,
        ]
    }

    /// Pivot and orientation sign.
    fn draw(&self, rng: &mut ChaCha8Rng) -> ([f64; 2], f64) {
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let inside = |x: f64, y: f64| x >= 0.0 && y >= 0.0 && x + y <= 1.0;
        match *self {
            PivotSampler::Circle { radius } => {
                let th = rng.gen::<f64>() * 2.0 * PI;
                ([0.5 + radius * th.cos(), 0.5 + radius * th.sin()], sign)
            }
            PivotSampler::Broad => loop {
                let (x, y) = if rng.gen::<bool>() {
                    (rng.gen_range(-2.0..3.0), rng.gen_range(-2.0..3.0))
                } else {
                    let th = rng.gen::<f64>() * 2.0 * PI;
                    let r = 10f64.powf(rng.gen_range(-0.5..4.0));
                    (0.5 + r * th.cos(), 0.5 + r * th.sin())
                };
                if !inside(x, y) {
                    return ([x, y], sign);
                }
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OracleReport {
    pub samples: u64,
    /// Samples within [`TIE_TOL`] of an involved line.
    pub skipped_ties: u64,
    /// Samples at which the input conjunction holds.
    pub inside: u64,
    pub mismatches: u64,
    pub double_fires: u64,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0 && self.double_fires == 0
    }

    fn merge(mut self, o: OracleReport) -> OracleReport {
        self.samples += o.samples;
        self.skipped_ties += o.skipped_ties;
        self.inside += o.inside;
        self.mismatches += o.mismatches;
        self.double_fires += o.double_fires;
        self
    }
}

fn unit_functional(e: &BinaryEvent) -> Result<[f64; 3]> {
    if e.relation == Relation::Indiff {
        return Err(Error::Unsupported("indifference events have no side".into()));
    }
    let e = e.to_mm()?;
    let w = V3::from_point(&e.p.pos).cross(&V3::from_point(&e.q.pos)).to_f64();
    // Normalize the line part so values are signed distances.
    let n = (w[0] * w[0] + w[1] * w[1]).sqrt();
    Ok([w[0] / n, w[1] / n, w[2] / n])
}

/// Compares `∧ events` with `∨ cells` on sampled preferences, cycling through
/// `samplers` sample by sample.
pub fn oracle_validate_with(
    d: &Decomposition,
    events: &[BinaryEvent],
    samplers: &[PivotSampler],
    mc: McConfig,
) -> Result<OracleReport> {
    if samplers.is_empty() {
        return Err(Error::Degenerate("no pivot sampler".into()));
    }
    let input: Vec<[f64; 3]> = events.iter().map(unit_functional).collect::<Result<_>>()?;
    let cells: Vec<Vec<[f64; 3]>> = d
        .cells
        .iter()
        .map(|c| c.events.iter().map(unit_functional).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    montecarlo::run(
        mc,
        OracleReport::default,
        |acc, rng| {
            // The sampler index comes from the stream, so it is thread-independent.
            let k = rng.gen_range(0..samplers.len());
            let (c, sign) = samplers[k].draw(rng);
            let val = |w: &[f64; 3]| sign * (w[0] * c[0] + w[1] * c[1] + w[2]);
            acc.samples += 1;
            let tie = input
                .iter()
                .chain(cells.iter().flatten())
                .any(|w| val(w).abs() < TIE_TOL);
            if tie {
                acc.skipped_ties += 1;
                return Ok(());
            }
            let inside = input.iter().all(|w| val(w) > 0.0);
            let fired = cells.iter().filter(|c| c.iter().all(|w| val(w) > 0.0)).count();
            acc.inside += inside as u64;
            if fired > 1 {
                acc.double_fires += 1;
            }
            if inside != (fired > 0) {
                acc.mismatches += 1;
            }
            Ok(())
        },
        OracleReport::merge,
    )
}

pub fn oracle_validate(d: &Decomposition, events: &[BinaryEvent], n_samples: u64, seed: u64) -> Result<OracleReport> {
    oracle_validate_with(d, events, &PivotSampler::defaults(), McConfig::new(n_samples, seed))
}

fn random_lottery(rng: &mut impl Rng, den: i64) -> Lottery {
    let a = rng.gen_range(0..=den);
    let b = rng.gen_range(0..=den - a);
    Lottery::mm(rat(a, den), rat(b, den)).expect("grid point")
}

/// A lottery at `base + t·dir` for some grid step `t ≠ 0` staying in the simplex.
fn along(rng: &mut impl Rng, base: &Lottery, dir: (i64, i64), den: i64) -> Option<Lottery> {
    let mut ts: Vec<i64> = (-den..=den).filter(|&t| t != 0).collect();
    while !ts.is_empty() {
        let t = ts.swap_remove(rng.gen_range(0..ts.len()));
        let x = &base.pos.x + rat(t * dir.0, den);
        let y = &base.pos.y + rat(t * dir.1, den);
        if let Ok(l) = Lottery::mm(x, y) {
            return Some(l);
        }
    }
    None
}

/// Random strict events on a grid of step `1/den`. With some probability
/// several events share a direction, which produces the parallel cases.
pub fn random_configuration(rng: &mut impl Rng, k: usize, den: i64) -> Vec<BinaryEvent> {
    loop {
        let mode = rng.gen_range(0..4);
        let dirs: Vec<(i64, i64)> = (0..3)
            .map(|_| loop {
                let d = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                if d != (0, 0) {
                    break d;
                }
            })
            .collect();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let p = random_lottery(rng, den);
            let shared = match mode {
                0 => None,
                1 => (i < 2).then_some(dirs[0]),
                2 => Some(dirs[i % 2]),
                _ => Some(dirs[0]),
            };
            let q = match shared {
                Some(d) if rng.gen_bool(0.8) => along(rng, &p, d, den),
                _ => Some(random_lottery(rng, den)),
            };
            match q {
                Some(q) if q != p => {
                    let (p, q) = if rng.gen() { (p, q) } else { (q, p) };
                    out.push(BinaryEvent::succ(p, q).expect("distinct"));
                }
                _ => break,
            }
        }
        if out.len() == k {
            return out;
        }
    }
}

/// Sampled preference as a point of the plane and an orientation sign, for
/// reuse by callers that need raw draws.
pub fn draw_pivot(sampler: &PivotSampler, rng: &mut ChaCha8Rng) -> (Point<f64>, f64) {
    let (c, s) = sampler.draw(rng);
    (Point::new(c[0], c[1]), s)
}
