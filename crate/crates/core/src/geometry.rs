//! Planar geometry over the probability simplex.
//!
//! Points carry two coordinates in one of two charts. In the `Mm` chart a
//! lottery `(x, y)` puts mass `x` on `W1`, `y` on `W2` and `1 - x - y` on `W3`.
//! In the `Slope` chart the best prize sits at `(0, 1)`, the worst at
//! `(0, -1)` and the middle prize at `(-1, 0)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<S = Rat> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(S::zero(), S::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Point::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn neg(&self) -> Self {
        Point::new(-self.x.clone(), -self.y.clone())
    }

    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    /// z-component of `self × o`.
    pub fn cross(&self, o: &Self) -> S {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    /// `a + t (b - a)`.
    pub fn lerp(a: &Self, b: &Self, t: &S) -> Self {
        a.add(&b.sub(a).scale(t))
    }

    pub fn midpoint(a: &Self, b: &Self) -> Self {
        Point::lerp(a, b, &S::half())
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.x.to_f64(), self.y.to_f64())
    }
}

impl Point<Rat> {
    pub fn from_rat<S: Scalar>(&self) -> Point<S> {
        Point::new(S::from_rat(&self.x), S::from_rat(&self.y))
    }
}

impl<S: fmt::Display> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `(b - a) × (c - a)`.
pub fn cross<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> S {
    b.sub(a).cross(&c.sub(a))
}

/// Sign of `(b - a) × (c - a)`: `+1` for a left turn, `-1` for a right turn.
pub fn orient<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> i8 {
    cross(a, b, c).sign()
}

/// Interior angle at `p` between the rays towards `q` and `r`, in degrees.
pub fn angle_at<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>) -> Result<f64> {
    if p == q || p == r {
        return Err(Error::Degenerate("angle ray has zero length".into()));
    }
    let u = q.sub(p).to_f64();
    let v = r.sub(p).to_f64();
    let ang = u.cross(&v).abs().atan2(u.dot(&v));
    Ok(ang.to_degrees())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    #[serde(rename = "MM")]
    Mm,
    #[serde(rename = "SLOPE")]
    Slope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Prize {
    W1,
    W2,
    W3,
}

impl Prize {
    pub const ALL: [Prize; 3] = [Prize::W1, Prize::W2, Prize::W3];

    /// Vertex of the prize in the `Mm` chart.
    pub fn vertex<S: Scalar>(self) -> Point<S> {
        match self {
            Prize::W1 => Point::new(S::one(), S::zero()),
            Prize::W2 => Point::new(S::zero(), S::one()),
            Prize::W3 => Point::origin(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrizeRanking {
    pub best: Prize,
    pub worst: Prize,
    pub middle: Prize,
}

impl PrizeRanking {
    pub fn new(best: Prize, worst: Prize, middle: Prize) -> Result<Self> {
        let r = PrizeRanking { best, worst, middle };
        r.validate()?;
        Ok(r)
    }

    /// `W2` best, `W1` worst, `W3` in between: the ranking used by the worked examples.
    pub fn standard() -> Self {
        PrizeRanking {
            best: Prize::W2,
            worst: Prize::W1,
            middle: Prize::W3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.best == self.worst || self.best == self.middle || self.worst == self.middle {
            return Err(Error::InvalidPreference("prize ranking must be a permutation".into()));
        }
        Ok(())
    }
}

/// Probability of each prize for an `Mm` point.
fn mm_probs<S: Scalar>(p: &Point<S>) -> [S; 3] {
    [p.x.clone(), p.y.clone(), S::one() - p.x.clone() - p.y.clone()]
}

fn prize_index(w: Prize) -> usize {
    match w {
        Prize::W1 => 0,
        Prize::W2 => 1,
        Prize::W3 => 2,
    }
}

/// Maps a point between charts. The map is affine, so it also applies to
/// points outside the simplex such as pivots.
pub fn convert_point<S: Scalar>(p: &Point<S>, from: Chart, to: Chart, rank: Option<&PrizeRanking>) -> Result<Point<S>> {
    if from == to {
        return Ok(p.clone());
    }
    let rank = rank.ok_or(Error::MissingRanking)?;
    rank.validate()?;
    match (from, to) {
        (Chart::Mm, Chart::Slope) => {
            let pr = mm_probs(p);
            let b = pr[prize_index(rank.best)].clone();
            let w = pr[prize_index(rank.worst)].clone();
            let m = pr[prize_index(rank.middle)].clone();
            Ok(Point::new(-m, b - w))
        }
        (Chart::Slope, Chart::Mm) => {
            let two = S::one() + S::one();
            let best = (S::one() + p.x.clone() + p.y.clone()) / two.clone();
            let worst = (S::one() + p.x.clone() - p.y.clone()) / two;
            let mid = -p.x.clone();
            let mut pr = [S::zero(), S::zero(), S::zero()];
            pr[prize_index(rank.best)] = best;
            pr[prize_index(rank.worst)] = worst;
            pr[prize_index(rank.middle)] = mid;
            let [a, b, _] = pr;
            Ok(Point::new(a, b))
        }
        _ => unreachable!(),
    }
}

/// Closed-simplex membership in the given chart, with [`Scalar::slack`] tolerance.
pub fn in_simplex<S: Scalar>(p: &Point<S>, chart: Chart) -> bool {
    let e = S::slack();
    match chart {
        Chart::Mm => p.x >= -e.clone() && p.y >= -e.clone() && p.x.clone() + p.y.clone() <= S::one() + e,
        Chart::Slope => {
            p.x <= e.clone()
                && p.y.clone() - p.x.clone() <= S::one() + e.clone()
                && p.y.clone() + p.x.clone() >= -S::one() - e
        }
    }
}

/// Open-simplex membership in the `Mm` chart.
pub fn in_simplex_interior<S: Scalar>(p: &Point<S>) -> bool {
    p.x > S::zero() && p.y > S::zero() && p.x.clone() + p.y.clone() < S::one()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lottery<S = Rat> {
    pub pos: Point<S>,
    pub chart: Chart,
}

impl<S: Scalar> Lottery<S> {
    pub fn new(x: S, y: S, chart: Chart) -> Result<Self> {
        let pos = Point::new(x, y);
        if !in_simplex(&pos, chart) {
            return Err(Error::InvalidLottery(format!(
                "({:?}, {:?}) lies outside the {:?} simplex",
                pos.x, pos.y, chart
            )));
        }
        Ok(Lottery { pos, chart })
    }

    pub fn mm(x: S, y: S) -> Result<Self> {
        Lottery::new(x, y, Chart::Mm)
    }

    pub fn slope(x: S, y: S) -> Result<Self> {
        Lottery::new(x, y, Chart::Slope)
    }

    /// Degenerate lottery on `w`, in the `Mm` chart.
    pub fn degenerate(w: Prize) -> Self {
        Lottery {
            pos: w.vertex(),
            chart: Chart::Mm,
        }
    }

    pub fn x(&self) -> &S {
        &self.pos.x
    }

    pub fn y(&self) -> &S {
        &self.pos.y
    }

    /// Probability of prize `w`. `Slope` lotteries need the ranking.
    pub fn prob(&self, w: Prize, rank: Option<&PrizeRanking>) -> Result<S> {
        let mm = self.convert(Chart::Mm, rank)?;
        Ok(mm_probs(&mm.pos)[prize_index(w)].clone())
    }

    pub fn probs(&self, rank: Option<&PrizeRanking>) -> Result<[S; 3]> {
        let mm = self.convert(Chart::Mm, rank)?;
        Ok(mm_probs(&mm.pos))
    }

    pub fn convert(&self, target: Chart, rank: Option<&PrizeRanking>) -> Result<Self> {
        Ok(Lottery {
            pos: convert_point(&self.pos, self.chart, target, rank)?,
            chart: target,
        })
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: &S) -> Result<Self> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart,
                found: other.chart,
            });
        }
        Ok(Lottery {
            pos: Point::lerp(&other.pos, &self.pos, lambda),
            chart: self.chart,
        })
    }

    pub fn to_f64(&self) -> Lottery<f64> {
        Lottery {
            pos: self.pos.to_f64(),
            chart: self.chart,
        }
    }
}

impl Lottery<Rat> {
    pub fn from_rat<S: Scalar>(&self) -> Lottery<S> {
        Lottery {
            pos: self.pos.from_rat(),
            chart: self.chart,
        }
    }
}

/// Set of indices into a menu, stored as a bitmask (menus hold at most 32 items).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const MAX_MENU: usize = 32;

    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subset(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// All nonempty subsets of an `n`-item menu, in increasing mask order.
    pub fn nonempty_of(n: usize) -> impl Iterator<Item = Subset> {
        (1..=Subset::full(n).0).map(Subset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Menu<S = Rat> {
    items: Vec<Lottery<S>>,
}

impl<S: Scalar> Menu<S> {
    pub fn new(items: Vec<Lottery<S>>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidMenu("menu is empty".into()));
        }
        if items.len() > Subset::MAX_MENU {
            return Err(Error::InvalidMenu(format!(
                "menus are limited to {} lotteries",
                Subset::MAX_MENU
            )));
        }
        let chart = items[0].chart;
        for (i, a) in items.iter().enumerate() {
            if a.chart != chart {
                return Err(Error::ChartMismatch {
                    expected: chart,
                    found: a.chart,
                });
            }
            if items[..i].contains(a) {
                return Err(Error::InvalidMenu("duplicate lottery".into()));
            }
        }
        Ok(Menu { items })
    }

    pub fn items(&self) -> &[Lottery<S>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn chart(&self) -> Chart {
        self.items[0].chart
    }

    pub fn get(&self, i: usize) -> &Lottery<S> {
        &self.items[i]
    }

    pub fn index_of(&self, l: &Lottery<S>) -> Option<usize> {
        self.items.iter().position(|x| x == l)
    }

    pub fn points(&self) -> Vec<Point<S>> {
        self.items.iter().map(|l| l.pos.clone()).collect()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Checks that `a` is a nonempty subset of this menu.
    pub fn check_subset(&self, a: Subset) -> Result<()> {
        if a.is_empty() {
            return Err(Error::InvalidMenu("chosen subset is empty".into()));
        }
        if !a.is_subset_of(self.full()) {
            return Err(Error::NotSubset);
        }
        Ok(())
    }

    /// The lotteries picked out by `a`, as a menu.
    pub fn restrict(&self, a: Subset) -> Result<Menu<S>> {
        self.check_subset(a)?;
        Menu::new(a.indices().map(|i| self.items[i].clone()).collect())
    }

    /// Index mask of `sub`'s lotteries inside this menu.
    pub fn subset_of_menu(&self, sub: &Menu<S>) -> Result<Subset> {
        let mut s = Subset::empty();
        for l in sub.items() {
            s.insert(self.index_of(l).ok_or(Error::NotSubset)?);
        }
        Ok(s)
    }

    pub fn to_f64(&self) -> Menu<f64> {
        Menu {
            items: self.items.iter().map(Lottery::to_f64).collect(),
        }
    }
}

impl Menu<Rat> {
    pub fn from_rat<S: Scalar>(&self) -> Menu<S> {
        Menu {
            items: self.items.iter().map(Lottery::from_rat).collect(),
        }
    }
}

/// Strict convex hull in counterclockwise order, starting at the lowest-leftmost point.
pub fn convex_hull<S: Scalar>(pts: &[Point<S>]) -> Vec<Point<S>> {
    let mut p: Vec<Point<S>> = pts.to_vec();
    p.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap_or(Ordering::Equal)
            .then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
    });
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<Point<S>> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<Point<S>> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `q` lies in the closed segment `[a, b]`.
pub fn on_segment<S: Scalar>(a: &Point<S>, b: &Point<S>, q: &Point<S>) -> bool {
    orient(a, b, q) == 0 && q.sub(a).dot(&q.sub(b)) <= S::zero()
}

/// Whether `conv(A)` is a face of `conv(D)` and `conv(A) ∩ D = A`.
///
/// A face is a single extreme point, an edge on a supporting line, or the
/// whole hull. Works on exact coordinates.
pub fn face_of_points<S: Scalar>(a: &[Point<S>], d: &[Point<S>]) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::InvalidMenu("face candidate is empty".into()));
    }
    if !a.iter().all(|x| d.contains(x)) {
        return Err(Error::NotSubset);
    }
    let dh = convex_hull(d);
    let ah = convex_hull(a);
    let in_conv_a = |q: &Point<S>| -> bool {
        match ah.len() {
            1 => *q == ah[0],
            2 => on_segment(&ah[0], &ah[1], q),
            _ => (0..ah.len()).all(|i| orient(&ah[i], &ah[(i + 1) % ah.len()], q) >= 0),
        }
    };
    // conv(A) ∩ D = A
    if d.iter().any(|q| !a.contains(q) && in_conv_a(q)) {
        return Ok(false);
    }
    let whole = d.iter().all(|q| a.contains(q));
    if whole {
        return Ok(true);
    }
    match ah.len() {
        1 => Ok(dh.len() >= 2 && dh.contains(&ah[0]) || dh.len() == 1),
        2 => {
            if dh.len() == 2 {
                // D is collinear; a proper face is a single endpoint only.
                return Ok(false);
            }
            let n = dh.len();
            Ok((0..n).any(|i| {
                let (u, v) = (&dh[i], &dh[(i + 1) % n]);
                (u == &ah[0] && v == &ah[1]) || (u == &ah[1] && v == &ah[0])
            }))
        }
        // A two-dimensional proper subset can only be a face if it is all of conv(D).
        _ => Ok(false),
    }
}

pub fn face_of<S: Scalar>(menu_a: &Menu<S>, menu_d: &Menu<S>) -> Result<bool> {
    face_of_points(&menu_a.points(), &menu_d.points())
}

/// Directed line through two distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line<S = Rat> {
    pub a: Point<S>,
    pub b: Point<S>,
}

impl<S: Scalar> Line<S> {
    pub fn through(a: Point<S>, b: Point<S>) -> Result<Self> {
        if a == b {
            return Err(Error::Degenerate("line through coincident points".into()));
        }
        Ok(Line { a, b })
    }

    pub fn with_direction(a: Point<S>, d: &Point<S>) -> Result<Self> {
        let b = a.add(d);
        Line::through(a, b)
    }

    pub fn dir(&self) -> Point<S> {
        self.b.sub(&self.a)
    }

    /// `+1` left of `a -> b`, `-1` right, `0` on the line.
    pub fn side(&self, p: &Point<S>) -> i8 {
        orient(&self.a, &self.b, p)
    }

    pub fn at(&self, t: &S) -> Point<S> {
        Point::lerp(&self.a, &self.b, t)
    }

    pub fn is_parallel(&self, o: &Self) -> bool {
        self.dir().cross(&o.dir()).is_zero()
    }

    pub fn same_line(&self, o: &Self) -> bool {
        self.is_parallel(o) && self.side(&o.a) == 0
    }

    pub fn reversed(&self) -> Self {
        Line {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn intersection(&self, o: &Self) -> Option<Point<S>> {
        let d1 = self.dir();
        let d2 = o.dir();
        let den = d1.cross(&d2);
        if den.is_zero() {
            return None;
        }
        let t = o.a.sub(&self.a).cross(&d2) / den;
        Some(self.at(&t))
    }

    /// Parameter interval `[lo, hi]` of the line inside the closed `Mm` simplex.
    pub fn simplex_params(&self) -> Option<(S, S)> {
        // Constraints x >= 0, y >= 0, 1 - x - y >= 0 as c0 + c1 t >= 0.
        let d = self.dir();
        let a = &self.a;
        let cons = [
            (a.x.clone(), d.x.clone()),
            (a.y.clone(), d.y.clone()),
            (S::one() - a.x.clone() - a.y.clone(), -d.x.clone() - d.y.clone()),
        ];
        let mut lo: Option<S> = None;
        let mut hi: Option<S> = None;
        for (c0, c1) in cons {
            if c1.is_zero() {
                if c0 < S::zero() {
                    return None;
                }
                continue;
            }
            let t = -c0 / c1.clone();
            if c1 > S::zero() {
                if lo.as_ref().map_or(true, |l| t > *l) {
                    lo = Some(t);
                }
            } else if hi.as_ref().map_or(true, |h| t < *h) {
                hi = Some(t);
            }
        }
        let (lo, hi) = (lo?, hi?);
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    /// Intersection of the line with the closed `Mm` simplex.
    pub fn chord(&self) -> Option<(Point<S>, Point<S>)> {
        self.simplex_params().map(|(lo, hi)| (self.at(&lo), self.at(&hi)))
    }

    /// Whether the line crosses the open simplex.
    pub fn meets_interior(&self) -> bool {
        match self.simplex_params() {
            Some((lo, hi)) if lo < hi => {
                let mid = self.at(&((lo + hi) / (S::one() + S::one())));
                in_simplex_interior(&mid)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Side {
    pub fn sign(self) -> i8 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Open half-plane on one side of a directed line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfPlane<S = Rat> {
    pub line: Line<S>,
    pub side: Side,
}

impl<S: Scalar> HalfPlane<S> {
    pub fn new(a: Point<S>, b: Point<S>, side: Side) -> Result<Self> {
        Ok(HalfPlane {
            line: Line::through(a, b)?,
            side,
        })
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        self.line.side(p) == self.side.sign()
    }

    pub fn contains_closed(&self, p: &Point<S>) -> bool {
        self.line.side(p) != -self.side.sign()
    }

    pub fn complement(&self) -> Self {
        HalfPlane {
            line: self.line.clone(),
            side: self.side.flip(),
        }
    }

    /// Same half-plane written with the region on the left of the line.
    pub fn left_normalized(&self) -> Line<S> {
        match self.side {
            Side::Plus => self.line.clone(),
            Side::Minus => self.line.reversed(),
        }
    }
}

/// One boundary edge of a half-plane intersection, traversed with the
/// region on the left. `None` endpoints run off to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S = Rat> {
    pub index: usize,
    pub start: Option<Point<S>>,
    pub end: Option<Point<S>>,
}

/// Intersection of open half-planes.
#[derive(Clone, Debug, PartialEq)]
pub struct Region<S = Rat> {
    /// Boundary edges in counterclockwise order. For an unbounded region the
    /// first edge starts at infinity.
    pub edges: Vec<Edge<S>>,
    pub empty: bool,
}

impl<S: Scalar> Region<S> {
    pub fn face_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_indices(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.index).collect()
    }

    pub fn bounded(&self) -> bool {
        !self.empty && self.edges.iter().all(|e| e.start.is_some() && e.end.is_some())
    }

    pub fn vertices(&self) -> Vec<Point<S>> {
        self.edges.iter().filter_map(|e| e.end.clone()).collect()
    }
}

/// Computes the intersection of the open half-planes `hs`, its one-dimensional
/// faces and their cyclic order.
pub fn halfplane_intersection<S: Scalar>(hs: &[HalfPlane<S>]) -> Region<S> {
    let lines: Vec<Line<S>> = hs.iter().map(HalfPlane::left_normalized).collect();
    let mut edges = Vec::new();
    'outer: for (i, li) in lines.iter().enumerate() {
        let di = li.dir();
        let mut lo: Option<S> = None;
        let mut hi: Option<S> = None;
        for (j, lj) in lines.iter().enumerate() {
            if i == j {
                continue;
            }
            if li.same_line(lj) {
                if li.dir().dot(&lj.dir()) < S::zero() {
                    return Region {
                        edges: Vec::new(),
                        empty: true,
                    };
                }
                if j < i {
                    continue 'outer;
                }
                continue;
            }
            // Constraint value along li: alpha + beta t > 0.
            let alpha = cross(&lj.a, &lj.b, &li.a);
            let beta = lj.dir().cross(&di);
            if beta.is_zero() {
                if alpha <= S::zero() {
                    continue 'outer;
                }
                continue;
            }
            let t = -alpha / beta.clone();
            if beta > S::zero() {
                if lo.as_ref().map_or(true, |l| t > *l) {
                    lo = Some(t);
                }
            } else if hi.as_ref().map_or(true, |h| t < *h) {
                hi = Some(t);
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                continue;
            }
        }
        edges.push(Edge {
            index: i,
            start: lo.map(|t| li.at(&t)),
            end: hi.map(|t| li.at(&t)),
        });
    }
    if edges.is_empty() {
        return Region { edges, empty: true };
    }
    // Chain the edges: the successor of an edge starts where it ends.
    let first = edges.iter().position(|e| e.start.is_none()).unwrap_or(0);
    let mut ordered = vec![edges.swap_remove(first)];
    while !edges.is_empty() {
        let last_end = ordered.last().and_then(|e| e.end.clone());
        let next = match last_end {
            Some(p) => edges.iter().position(|e| e.start.as_ref() == Some(&p)),
            None => edges.iter().position(|e| e.start.is_none()),
        };
        match next {
            Some(k) => ordered.push(edges.swap_remove(k)),
            None => {
                ordered.append(&mut edges);
            }
        }
    }
    Region {
        edges: ordered,
        empty: false,
    }
}
