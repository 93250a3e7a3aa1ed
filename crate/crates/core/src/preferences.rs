//! Risk preferences over three-prize lotteries and their comparison contract.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convert_point, in_simplex, orient, Chart, Lottery, Menu, Point, Prize, PrizeRanking, Subset};
use crate::scalar::{rat, Rat, Scalar};

/// Direction in which preference increases around a weighted-utility pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

impl Orientation {
    /// `p ≻ q` iff `orient(pivot, p, q)` has this sign.
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => 1,
            Orientation::CounterClockwise => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }
}

fn ord_from_sign(s: i8) -> Ordering {
    s.cmp(&0)
}

fn same_chart<S: Scalar>(expected: Chart, p: &Lottery<S>, q: &Lottery<S>) -> Result<()> {
    for l in [p, q] {
        if l.chart != expected {
            return Err(Error::ChartMismatch {
                expected,
                found: l.chart,
            });
        }
    }
    Ok(())
}

/// Expected utility: parallel linear indifference lines.
#[derive(Clone, Debug, PartialEq)]
pub struct EuPreference<S = Rat> {
    pub direction: Point<S>,
    pub chart: Chart,
}

impl<S: Scalar> EuPreference<S> {
    pub fn new(direction: Point<S>, chart: Chart) -> Result<Self> {
        if direction.x.is_zero() && direction.y.is_zero() {
            return Err(Error::InvalidPreference("EU direction is zero".into()));
        }
        Ok(EuPreference { direction, chart })
    }

    /// EU preference with von Neumann–Morgenstern utilities `u` on `(W1, W2, W3)`,
    /// expressed in the `Mm` chart.
    pub fn from_utilities(u: [S; 3]) -> Result<Self> {
        let [u1, u2, u3] = u;
        EuPreference::new(Point::new(u1 - u3.clone(), u2 - u3), Chart::Mm)
    }

    pub fn compare(&self, p: &Lottery<S>, q: &Lottery<S>) -> Result<Ordering> {
        same_chart(self.chart, p, q)?;
        Ok(ord_from_sign(self.direction.dot(&p.pos.sub(&q.pos)).sign()))
    }
}

/// Weighted utility given by its pivot and orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct WuPreference<S = Rat> {
    pub pivot: Point<S>,
    pub orientation: Orientation,
    pub chart: Chart,
}

impl<S: Scalar> WuPreference<S> {
    pub fn new(pivot: Point<S>, orientation: Orientation, chart: Chart) -> Result<Self> {
        if in_simplex(&pivot, chart) {
            return Err(Error::InvalidPreference(format!(
                "pivot ({:?}, {:?}) lies in the closed simplex",
                pivot.x, pivot.y
            )));
        }
        Ok(WuPreference {
            pivot,
            orientation,
            chart,
        })
    }

    pub fn compare(&self, p: &Lottery<S>, q: &Lottery<S>) -> Result<Ordering> {
        same_chart(self.chart, p, q)?;
        Ok(self.compare_points(&p.pos, &q.pos))
    }

    pub fn compare_points(&self, p: &Point<S>, q: &Point<S>) -> Ordering {
        ord_from_sign(self.orientation.sign() * orient(&self.pivot, p, q))
    }

    pub fn to_chart(&self, target: Chart, rank: Option<&PrizeRanking>) -> Result<Self> {
        let pivot = convert_point(&self.pivot, self.chart, target, rank)?;
        // Every chart map used here has positive determinant, so orientation carries over.
        let det_positive = match (self.chart, target) {
            (a, b) if a == b => true,
            _ => {
                let o: Point<S> = Point::origin();
                let e1 = Point::new(S::one(), S::zero());
                let e2 = Point::new(S::zero(), S::one());
                let f = |p: &Point<S>| convert_point(p, self.chart, target, rank);
                orient(&f(&o)?, &f(&e1)?, &f(&e2)?) > 0
            }
        };
        let orientation = if det_positive {
            self.orientation
        } else {
            self.orientation.flip()
        };
        Ok(WuPreference {
            pivot,
            orientation,
            chart: target,
        })
    }
}

impl WuPreference<Rat> {
    pub fn from_rat<S: Scalar>(&self) -> WuPreference<S> {
        WuPreference {
            pivot: self.pivot.from_rat(),
            orientation: self.orientation,
            chart: self.chart,
        }
    }
}

/// `V(p) = Σ pₙ gₙ uₙ / Σ pₙ gₙ` on `Mm` lotteries, prizes ordered `(W1, W2, W3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WuFunctional {
    #[serde(with = "crate::scalar::rat_array3")]
    pub u: [Rat; 3],
    #[serde(with = "crate::scalar::rat_array3")]
    pub g: [Rat; 3],
}

impl WuFunctional {
    pub fn new(u: [Rat; 3], g: [Rat; 3]) -> Result<Self> {
        let nonneg = g.iter().all(|x| *x >= Rat::zero());
        let nonpos = g.iter().all(|x| *x <= Rat::zero());
        if !(nonneg || nonpos) || g.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPreference(
                "weights must share one sign and not all vanish".into(),
            ));
        }
        Ok(WuFunctional { u, g })
    }

    pub fn value<S: Scalar>(&self, p: &Lottery<S>) -> Result<S> {
        if p.chart != Chart::Mm {
            return Err(Error::ChartMismatch {
                expected: Chart::Mm,
                found: p.chart,
            });
        }
        let pr = p.probs(None)?;
        let mut num = S::zero();
        let mut den = S::zero();
        for n in 0..3 {
            let g = S::from_rat(&self.g[n]);
            num = num + pr[n].clone() * g.clone() * S::from_rat(&self.u[n]);
            den = den + pr[n].clone() * g;
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(num / den)
    }

    /// Common point of all indifference lines, in the `Mm` chart.
    ///
    /// Solves `Σ xₙ gₙ uₙ = 0` and `Σ xₙ gₙ = 0` on the plane `x₁ + x₂ + x₃ = 1`.
    pub fn pivot(&self) -> Result<Point<Rat>> {
        let (u, g) = (&self.u, &self.g);
        let gu: Vec<Rat> = (0..3).map(|n| &g[n] * &u[n]).collect();
        let (a11, a12, b1) = (&gu[0] - &gu[2], &gu[1] - &gu[2], -gu[2].clone());
        let (a21, a22, b2) = (&g[0] - &g[2], &g[1] - &g[2], -g[2].clone());
        let det = &a11 * &a22 - &a12 * &a21;
        if det.is_zero() {
            return Err(Error::InvalidPreference(
                "indifference lines are parallel (expected utility)".into(),
            ));
        }
        let x = (&b1 * &a22 - &a12 * &b2) / &det;
        let y = (&a11 * &b2 - &b1 * &a21) / det;
        Ok(Point::new(x, y))
    }

    /// Geometric form of this functional. Refuses pivots inside the closed simplex.
    pub fn to_pivot(&self) -> Result<WuPreference<Rat>> {
        let pivot = self.pivot()?;
        if in_simplex(&pivot, Chart::Mm) {
            return Err(Error::InvalidPreference("pivot lies inside the simplex".into()));
        }
        let third = rat(1, 3);
        let mut probes: Vec<Lottery> = Prize::ALL.iter().map(|w| Lottery::degenerate(*w)).collect();
        probes.push(Lottery::mm(third.clone(), third).expect("centroid"));
        for a in &probes {
            for b in &probes {
                let (Ok(va), Ok(vb)) = (self.value(a), self.value(b)) else {
                    continue;
                };
                let o = orient(&pivot, &a.pos, &b.pos);
                if va > vb && o != 0 {
                    let orientation = if o > 0 {
                        Orientation::Clockwise
                    } else {
                        Orientation::CounterClockwise
                    };
                    return WuPreference::new(pivot, orientation, Chart::Mm);
                }
            }
        }
        Err(Error::InvalidPreference("functional is constant".into()))
    }
}

/// Two weighted-utility pieces glued along the `threshold` indifference line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemiWeighted {
    pub upper: WuFunctional,
    pub lower: WuFunctional,
    #[serde(with = "crate::scalar::rat_string")]
    pub threshold: Rat,
}

impl SemiWeighted {
    pub fn value<S: Scalar>(&self, p: &Lottery<S>) -> Result<S> {
        let up = self.upper.value(p)?;
        if up >= S::from_rat(&self.threshold) {
            Ok(up)
        } else {
            self.lower.value(p)
        }
    }
}

pub type LocalUtilityFn = Arc<dyn Fn(Prize, f64) -> f64 + Send + Sync>;

/// Local utility `u(w, v)` of an implicit (betweenness) representation.
#[derive(Clone)]
pub enum LocalUtility {
    /// `u(w, v) = u(w)`.
    Eu {
        u: [f64; 3],
    },
    /// `u(w, v) = g(w) (u(w) - v) + v`.
    Weighted {
        u: [f64; 3],
        g: [f64; 3],
    },
    Custom(LocalUtilityFn),
}

impl fmt::Debug for LocalUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalUtility::Eu { u } => f.debug_struct("Eu").field("u", u).finish(),
            LocalUtility::Weighted { u, g } => f.debug_struct("Weighted").field("u", u).field("g", g).finish(),
            LocalUtility::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl LocalUtility {
    pub fn eval(&self, w: Prize, v: f64) -> f64 {
        let i = w as usize;
        match self {
            LocalUtility::Eu { u } => u[i],
            LocalUtility::Weighted { u, g } => g[i] * (u[i] - v) + v,
            LocalUtility::Custom(f) => f(w, v),
        }
    }
}

pub const IMPLICIT_TOL: f64 = 1e-12;
const VALIDATION_POINTS: usize = 64;

/// Betweenness preference given implicitly: `V(p)` is the root in `[0, 1]` of
/// `Σ u(wᵢ, v) pⁱ = v u(w̄, v) + (1 - v) u(w̲, v)`.
#[derive(Clone, Debug)]
pub struct ImplicitBetweenness {
    pub local: LocalUtility,
    pub ranking: PrizeRanking,
}

impl ImplicitBetweenness {
    /// Builds the representation and checks, on a lottery grid, that the
    /// defining equation has exactly one sign change on a 64-point `v` grid.
    pub fn new(local: LocalUtility, ranking: PrizeRanking) -> Result<Self> {
        ranking.validate()?;
        let b = ImplicitBetweenness { local, ranking };
        let n = 10;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let probs = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
                let h: Vec<f64> = (0..=VALIDATION_POINTS)
                    .map(|k| b.residual(&probs, k as f64 / VALIDATION_POINTS as f64))
                    .collect();
                if h[0] * h[VALIDATION_POINTS] > 0.0 {
                    return Err(Error::RepresentationInvalid(format!(
                        "no sign change on [0, 1] at lottery {probs:?}"
                    )));
                }
                let nz: Vec<f64> = h.iter().copied().filter(|x| x.abs() > 1e-14).collect();
                let changes = nz.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
                if changes > 1 {
                    return Err(Error::RepresentationInvalid(format!(
                        "multiple roots at lottery {probs:?}"
                    )));
                }
            }
        }
        Ok(b)
    }

    /// Left side minus right side of the defining equation.
    fn residual(&self, probs: &[f64; 3], v: f64) -> f64 {
        let lhs: f64 = Prize::ALL
            .iter()
            .map(|w| self.local.eval(*w, v) * probs[*w as usize])
            .sum();
        let rhs = v * self.local.eval(self.ranking.best, v) + (1.0 - v) * self.local.eval(self.ranking.worst, v);
        lhs - rhs
    }

    /// Root of the defining equation by bisection.
    pub fn value<S: Scalar>(&self, p: &Lottery<S>, tol: f64) -> Result<f64> {
        let pr = p.probs(Some(&self.ranking))?;
        let probs = [pr[0].to_f64(), pr[1].to_f64(), pr[2].to_f64()];
        if let LocalUtility::Eu { u } = &self.local {
            // The equation is linear in v.
            let (ub, uw) = (u[self.ranking.best as usize], u[self.ranking.worst as usize]);
            if ub != uw {
                let eu: f64 = Prize::ALL.iter().map(|w| u[*w as usize] * probs[*w as usize]).sum();
                return Ok((eu - uw) / (ub - uw));
            }
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let (mut hlo, hhi) = (self.residual(&probs, lo), self.residual(&probs, hi));
        if hlo == 0.0 {
            return Ok(0.0);
        }
        if hhi == 0.0 {
            return Ok(1.0);
        }
        if hlo * hhi > 0.0 {
            return Err(Error::RepresentationInvalid("no sign change on [0, 1]".into()));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let hm = self.residual(&probs, mid);
            if hm == 0.0 {
                return Ok(mid);
            }
            if (hm > 0.0) == (hlo > 0.0) {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
            if hi - lo <= tol {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

pub fn implicit_value<S: Scalar>(b: &ImplicitBetweenness, p: &Lottery<S>, tol: f64) -> Result<f64> {
    b.value(p, tol)
}

pub fn weighted_value<S: Scalar>(f: &WuFunctional, p: &Lottery<S>) -> Result<S> {
    f.value(p)
}

pub type ValueFn = Arc<dyn Fn(&Point<f64>) -> f64 + Send + Sync>;

/// Preference represented by an arbitrary numeric value function on `Mm`
/// coordinates. Used for counterexamples outside the betweenness class.
#[derive(Clone)]
pub struct CustomValue {
    pub name: String,
    pub value: ValueFn,
}

impl fmt::Debug for CustomValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomValue({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Preference<S = Rat> {
    Eu(EuPreference<S>),
    Wu(WuPreference<S>),
    WuFunctional(WuFunctional),
    SemiWeighted(SemiWeighted),
    Implicit(ImplicitBetweenness),
    Custom(CustomValue),
}

fn cmp_values<S: PartialOrd>(a: S, b: S) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

impl<S: Scalar> Preference<S> {
    /// Trichotomous comparison: `Greater` means `p ≻ q`.
    pub fn compare(&self, p: &Lottery<S>, q: &Lottery<S>) -> Result<Ordering> {
        if p == q {
            return Ok(Ordering::Equal);
        }
        match self {
            Preference::Eu(e) => e.compare(p, q),
            Preference::Wu(w) => w.compare(p, q),
            Preference::WuFunctional(f) => Ok(cmp_values(f.value(p)?, f.value(q)?)),
            Preference::SemiWeighted(s) => Ok(cmp_values(s.value(p)?, s.value(q)?)),
            Preference::Implicit(b) => Ok(cmp_values(b.value(p, IMPLICIT_TOL)?, b.value(q, IMPLICIT_TOL)?)),
            Preference::Custom(c) => {
                same_chart(Chart::Mm, p, q)?;
                Ok(cmp_values((c.value)(&p.pos.to_f64()), (c.value)(&q.pos.to_f64())))
            }
        }
    }

    pub fn weakly_prefers(&self, p: &Lottery<S>, q: &Lottery<S>) -> Result<bool> {
        Ok(self.compare(p, q)? != Ordering::Less)
    }

    /// `M(D, ≿)`: indices of the optimal lotteries of `menu`.
    pub fn optimal_set(&self, menu: &Menu<S>) -> Result<Subset> {
        let items = menu.items();
        let mut best = Subset::singleton(0);
        let mut rep = 0usize;
        for i in 1..items.len() {
            match self.compare(&items[i], &items[rep])? {
                Ordering::Greater => {
                    best = Subset::singleton(i);
                    rep = i;
                }
                Ordering::Equal => best.insert(i),
                Ordering::Less => {}
            }
        }
        Ok(best)
    }
}

impl Preference<Rat> {
    /// Same preference over `f64` coordinates.
    pub fn from_rat<S: Scalar>(&self) -> Preference<S> {
        match self {
            Preference::Eu(e) => Preference::Eu(EuPreference {
                direction: e.direction.from_rat(),
                chart: e.chart,
            }),
            Preference::Wu(w) => Preference::Wu(w.from_rat()),
            Preference::WuFunctional(f) => Preference::WuFunctional(f.clone()),
            Preference::SemiWeighted(s) => Preference::SemiWeighted(s.clone()),
            Preference::Implicit(b) => Preference::Implicit(b.clone()),
            Preference::Custom(c) => Preference::Custom(c.clone()),
        }
    }
}

pub fn optimal_set<S: Scalar>(pref: &Preference<S>, menu: &Menu<S>) -> Result<Subset> {
    pref.optimal_set(menu)
}

/// First-order stochastic dominance of `p` over `q` (weak).
pub fn fosd<S: Scalar>(p: &Lottery<S>, q: &Lottery<S>, rank: &PrizeRanking) -> Result<bool> {
    let pp = p.probs(Some(rank))?;
    let qq = q.probs(Some(rank))?;
    let b = rank.best as usize;
    let w = rank.worst as usize;
    Ok(pp[b] >= qq[b] && pp[w] <= qq[w])
}

/// Whether a pivot (in `Slope` coordinates) with the given orientation yields
/// an FOSD-monotone weighted utility.
pub fn admissible_slope_pivot<S: Scalar>(pivot: &Point<S>, o: Orientation) -> bool {
    let abs_y = pivot.y.abs();
    match o {
        Orientation::CounterClockwise => abs_y <= -S::one() - pivot.x.clone(),
        Orientation::Clockwise => abs_y <= pivot.x.clone() - S::one(),
    }
}

/// Monotonicity with respect to first-order stochastic dominance.
///
/// Weighted-utility pivots are tested exactly against the admissible region;
/// every other preference is checked on all dominating pairs of a lottery
/// grid with `grid` steps per side.
pub fn is_fosd_monotone<S: Scalar>(pref: &Preference<S>, rank: &PrizeRanking, grid: usize) -> Result<bool> {
    if let Preference::Wu(w) = pref {
        let s = w.to_chart(Chart::Slope, Some(rank))?;
        return Ok(admissible_slope_pivot(&s.pivot, s.orientation));
    }
    let chart = match pref {
        Preference::Eu(e) => e.chart,
        _ => Chart::Mm,
    };
    let n = grid.max(1) as i64;
    let mut pts: Vec<Lottery<S>> = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let mm = Point::new(S::from_int(i) / S::from_int(n), S::from_int(j) / S::from_int(n));
            let pos = convert_point(&mm, Chart::Mm, chart, Some(rank))?;
            pts.push(Lottery { pos, chart });
        }
    }
    for p in &pts {
        for q in &pts {
            if fosd(p, q, rank)? && pref.compare(p, q)? == Ordering::Less {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Data of the first non-uniqueness example.
pub mod example1 {
    use super::*;
    use crate::scalar::int;

    pub fn utilities() -> [Rat; 3] {
        [int(0), int(1), rat(1, 2)]
    }

    pub fn v1() -> WuFunctional {
        WuFunctional::new(utilities(), [int(1), int(1), rat(1, 2)]).expect("valid")
    }

    pub fn v2() -> WuFunctional {
        WuFunctional::new(utilities(), [int(1), int(1), int(2)]).expect("valid")
    }

    /// `≿₁`: pivot `(-1/2, -1/2)`, preference increasing counterclockwise.
    pub fn pref1() -> WuPreference {
        WuPreference::new(
            Point::new(rat(-1, 2), rat(-1, 2)),
            Orientation::CounterClockwise,
            Chart::Mm,
        )
        .expect("valid")
    }

    /// `≿₂`: pivot `(1, 1)`, preference increasing clockwise.
    pub fn pref2() -> WuPreference {
        WuPreference::new(Point::new(int(1), int(1)), Orientation::Clockwise, Chart::Mm).expect("valid")
    }

    pub fn semi1() -> SemiWeighted {
        SemiWeighted {
            upper: v1(),
            lower: v2(),
            threshold: rat(1, 2),
        }
    }

    pub fn semi2() -> SemiWeighted {
        SemiWeighted {
            upper: v2(),
            lower: v1(),
            threshold: rat(1, 2),
        }
    }

    /// `p, q, p', q'` used for the joint-choice comparison.
    pub fn joint_lotteries() -> [Lottery; 4] {
        [
            Lottery::mm(int(0), rat(1, 2)).expect("valid"),
            Lottery::mm(rat(1, 4), rat(3, 4)).expect("valid"),
            Lottery::mm(rat(1, 2), int(0)).expect("valid"),
            Lottery::mm(rat(3, 4), rat(1, 4)).expect("valid"),
        ]
    }
}
