//! Distributions over preferences and the random choice they induce.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{angle_at, orient, Chart, Lottery, Menu, Point, PrizeRanking, Subset};
use crate::identification::{pivot_from_slopes, SlopeLaw};
use crate::montecarlo::{self, binomial_stderr, McConfig};
use crate::preferences::{example1, EuPreference, Orientation, Preference, WuPreference};
use crate::scalar::{format_rat, rat, Rat};

/// A choice probability: exact for finite mixtures, estimated otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(Rat),
    Estimate { value: f64, stderr: f64, samples: u64 },
}

impl Prob {
    pub fn value(&self) -> f64 {
        match self {
            Prob::Exact(r) => crate::scalar::Scalar::to_f64(r),
            Prob::Estimate { value, .. } => *value,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            Prob::Exact(_) => 0.0,
            Prob::Estimate { stderr, .. } => *stderr,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Prob::Exact(r) => Some(r),
            Prob::Estimate { .. } => None,
        }
    }

    pub fn from_count(hits: u64, n: u64) -> Self {
        let value = hits as f64 / n as f64;
        Prob::Estimate {
            value,
            stderr: binomial_stderr(value, n),
            samples: n,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_zero(),
            Prob::Estimate { value, .. } => *value == 0.0,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Prob::Exact(r) => format_rat(r),
            Prob::Estimate { value, stderr, .. } => format!("{value:.6} ± {stderr:.6}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum RandomPreference {
    /// Weighted list of preferences; weights are positive and sum to one.
    FiniteMixture(Vec<(Preference, Rat)>),
    /// Weighted utility whose pivot is uniform on a circle enclosing the
    /// simplex, with a fair coin for the orientation.
    CircleRwu { center: Point<f64>, radius: f64 },
    /// Expected utility with a gradient direction uniform on the circle.
    UniformEu,
    /// FOSD-monotone weighted utility from a law over the slopes `(m0, m1)`.
    SlopePair { law: SlopeLaw, ranking: PrizeRanking },
}

pub const DEFAULT_CENTER: (f64, f64) = (0.5, 0.5);
pub const DEFAULT_RADIUS: f64 = 0.9;

impl RandomPreference {
    pub fn finite_mixture(items: Vec<(Preference, Rat)>) -> Result<Self> {
        let mu = RandomPreference::FiniteMixture(items);
        mu.validate()?;
        Ok(mu)
    }

    pub fn circle_rwu(center: Point<f64>, radius: f64) -> Result<Self> {
        let mu = RandomPreference::CircleRwu { center, radius };
        mu.validate()?;
        Ok(mu)
    }

    pub fn slope_pair(law: SlopeLaw, ranking: PrizeRanking) -> Result<Self> {
        let mu = RandomPreference::SlopePair { law, ranking };
        mu.validate()?;
        Ok(mu)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RandomPreference::FiniteMixture(items) => {
                if items.is_empty() {
                    return Err(Error::InvalidDistribution("empty mixture".into()));
                }
                if items.iter().any(|(_, w)| *w <= Rat::zero()) {
                    return Err(Error::InvalidDistribution("mixture weights must be positive".into()));
                }
                let total: Rat = items.iter().map(|(_, w)| w.clone()).sum();
                if !total.is_one() {
                    return Err(Error::InvalidDistribution(format!(
                        "mixture weights sum to {}",
                        format_rat(&total)
                    )));
                }
                Ok(())
            }
            RandomPreference::CircleRwu { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidDistribution("radius must be positive".into()));
                }
                for v in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
                    let d = ((v.0 - center.x).powi(2) + (v.1 - center.y).powi(2)).sqrt();
                    if d >= *radius {
                        return Err(Error::InvalidDistribution(format!(
                            "circle of radius {radius} does not enclose the simplex"
                        )));
                    }
                }
                Ok(())
            }
            RandomPreference::UniformEu => Ok(()),
            RandomPreference::SlopePair { law, ranking } => {
                ranking.validate()?;
                law.validate()?;
                if let SlopeLaw::Finite { atoms } = law {
                    for a in atoms {
                        if a.m0 == a.m1 {
                            return Err(Error::InvalidDistribution(
                                "slope atoms with m0 = m1 have no pivot".into(),
                            ));
                        }
                        let (pivot, _) = pivot_from_slopes(a.m0.clone(), a.m1.clone())?;
                        if crate::geometry::in_simplex(&pivot, Chart::Slope) {
                            return Err(Error::InvalidDistribution(
                                "slope atom puts the pivot on the simplex".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RandomPreference::FiniteMixture(_))
    }

    /// Draws one preference over `f64` coordinates.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Preference<f64>> {
        match self {
            RandomPreference::FiniteMixture(items) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (p, w) in items {
                    acc += crate::scalar::Scalar::to_f64(w);
                    if u < acc {
                        return Ok(p.from_rat());
                    }
                }
                Ok(items[items.len() - 1].0.from_rat())
            }
            RandomPreference::CircleRwu { center, radius } => {
                let th = rng.gen::<f64>() * 2.0 * PI;
                let pivot = Point::new(center.x + radius * th.cos(), center.y + radius * th.sin());
                let o = if rng.gen::<bool>() {
                    Orientation::Clockwise
                } else {
                    Orientation::CounterClockwise
                };
                Ok(Preference::Wu(WuPreference::new(pivot, o, Chart::Mm)?))
            }
            RandomPreference::UniformEu => {
                let th = rng.gen::<f64>() * 2.0 * PI;
                Ok(Preference::Eu(EuPreference::new(
                    Point::new(th.cos(), th.sin()),
                    Chart::Mm,
                )?))
            }
            RandomPreference::SlopePair { law, ranking } => loop {
                let (m0, m1) = law.sample(rng)?;
                if m0 == m1 {
                    continue;
                }
                let (pivot, o) = pivot_from_slopes(m0, m1)?;
                let w = WuPreference {
                    pivot,
                    orientation: o,
                    chart: Chart::Slope,
                };
                return Ok(Preference::Wu(w.to_chart(Chart::Mm, Some(ranking))?));
            },
        }
    }
}

pub fn sample_preference(mu: &RandomPreference, seed: u64) -> Result<Preference<f64>> {
    mu.sample(&mut montecarlo::substream(seed, 0))
}

/// Chosen subset of a menu: the event `N(D, A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceEvent {
    pub menu: Menu,
    pub chosen: Subset,
}

impl ChoiceEvent {
    pub fn new(menu: Menu, chosen: Subset) -> Result<Self> {
        menu.check_subset(chosen)?;
        Ok(ChoiceEvent { menu, chosen })
    }
}

/// `ρ_D(A) = μ(N(D, A))`.
pub fn choice_prob(mu: &RandomPreference, menu: &Menu, a: Subset, mc: McConfig) -> Result<Prob> {
    menu.check_subset(a)?;
    match mu {
        RandomPreference::FiniteMixture(items) => {
            let mut total = Rat::zero();
            for (p, w) in items {
                if p.optimal_set(menu)? == a {
                    total += w;
                }
            }
            Ok(Prob::Exact(total))
        }
        _ => {
            let m = menu.to_f64();
            let hits = montecarlo::run(
                mc,
                || 0u64,
                |acc, rng| {
                    let pref = mu.sample(rng)?;
                    if pref.optimal_set(&m)? == a {
                        *acc += 1;
                    }
                    Ok(())
                },
                |x, y| x + y,
            )?;
            Ok(Prob::from_count(hits, mc.samples))
        }
    }
}

/// Menu pair related by `mixed = λ·base + (1-λ)·p`, recorded so stochastic
/// betweenness can be checked on a finite table.
#[derive(Clone, Debug, PartialEq)]
pub struct Companion {
    pub base: usize,
    pub mixed: usize,
    pub p: Lottery,
    pub lambda: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RccRow {
    pub menu: Menu,
    /// Positive-probability subsets; anything absent has probability zero.
    pub probs: BTreeMap<Subset, Prob>,
}

impl RccRow {
    pub fn prob(&self, a: Subset) -> Prob {
        self.probs.get(&a).cloned().unwrap_or(Prob::Exact(Rat::zero()))
    }

    pub fn exact_total(&self) -> Option<Rat> {
        self.probs.values().map(|p| p.exact().cloned()).sum::<Option<Rat>>()
    }
}

/// Random choice correspondence on a finite list of menus.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Rcc {
    pub rows: Vec<RccRow>,
    pub companions: Vec<Companion>,
}

impl Rcc {
    pub fn find(&self, menu: &Menu) -> Option<usize> {
        self.rows.iter().position(|r| menu_eq_unordered(&r.menu, menu))
    }

    /// Checks every row is a distribution over nonempty subsets of its menu.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for a in row.probs.keys() {
                row.menu.check_subset(*a)?;
            }
            if let Some(t) = row.exact_total() {
                if !t.is_one() {
                    return Err(Error::InvalidDistribution(format!(
                        "row {i} sums to {}",
                        format_rat(&t)
                    )));
                }
            } else {
                let t: f64 = row.probs.values().map(Prob::value).sum();
                if (t - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidDistribution(format!("row {i} sums to {t}")));
                }
            }
        }
        Ok(())
    }

    /// Exact equality of two tables with the same menus, in any subset order.
    pub fn exact_eq(&self, other: &Rcc) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.menu == b.menu
                    && a.probs.iter().all(|(s, p)| p.exact().is_some() && b.prob(*s) == *p)
                    && b.probs.iter().all(|(s, p)| p.exact().is_some() && a.prob(*s) == *p)
            })
    }
}

pub fn menu_eq_unordered<S: crate::scalar::Scalar>(a: &Menu<S>, b: &Menu<S>) -> bool {
    a.len() == b.len() && a.items().iter().all(|x| b.items().contains(x))
}

/// Random choice correspondence of `mu` on `menus`. Parametric kinds share
/// one sample across all menus.
pub fn rcc_from(mu: &RandomPreference, menus: &[Menu], mc: McConfig) -> Result<Rcc> {
    if menus.is_empty() {
        return Err(Error::InvalidMenu("no menus given".into()));
    }
    let rows = match mu {
        RandomPreference::FiniteMixture(items) => {
            let mut rows: Vec<BTreeMap<Subset, Rat>> = vec![BTreeMap::new(); menus.len()];
            for (p, w) in items {
                for (m, row) in menus.iter().zip(rows.iter_mut()) {
                    *row.entry(p.optimal_set(m)?).or_insert_with(Rat::zero) += w;
                }
            }
            rows.into_iter()
                .zip(menus)
                .map(|(r, m)| RccRow {
                    menu: m.clone(),
                    probs: r.into_iter().map(|(s, p)| (s, Prob::Exact(p))).collect(),
                })
                .collect()
        }
        _ => {
            let fm: Vec<Menu<f64>> = menus.iter().map(Menu::to_f64).collect();
            let counts = montecarlo::run(
                mc,
                || vec![BTreeMap::<Subset, u64>::new(); fm.len()],
                |acc, rng| {
                    let pref = mu.sample(rng)?;
                    for (m, row) in fm.iter().zip(acc.iter_mut()) {
                        *row.entry(pref.optimal_set(m)?).or_insert(0) += 1;
                    }
                    Ok(())
                },
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(b) {
                        for (k, v) in rb {
                            *ra.entry(k).or_insert(0) += v;
                        }
                    }
                    a
                },
            )?;
            counts
                .into_iter()
                .zip(menus)
                .map(|(r, m)| RccRow {
                    menu: m.clone(),
                    probs: r
                        .into_iter()
                        .map(|(s, c)| (s, Prob::from_count(c, mc.samples)))
                        .collect(),
                })
                .collect()
        }
    };
    Ok(Rcc {
        rows,
        companions: Vec::new(),
    })
}

/// `½ (1 - α/180)` with `α` the angle at `p` of the triangle `p, q, r`.
pub fn ternary_prob_formula(p: &Lottery, q: &Lottery, r: &Lottery) -> Result<f64> {
    if p == q || p == r || q == r {
        return Err(Error::Degenerate("lotteries must be distinct".into()));
    }
    if orient(&p.pos, &q.pos, &r.pos) == 0 {
        return Err(Error::CollinearTriple);
    }
    let alpha = angle_at(&p.pos, &q.pos, &r.pos)?;
    Ok(0.5 * (1.0 - alpha / 180.0))
}

/// `μ`: `≿₁` or `≿₂` with equal probability.
pub fn mu() -> RandomPreference {
    RandomPreference::FiniteMixture(vec![
        (Preference::Wu(example1::pref1()), rat(1, 2)),
        (Preference::Wu(example1::pref2()), rat(1, 2)),
    ])
}

/// `μ'`: `≿'₁` or `≿'₂` with weights `w` and `1 - w` (the example uses `w = 1/2`).
pub fn mu_prime_weighted(w: Rat) -> Result<RandomPreference> {
    RandomPreference::finite_mixture(vec![
        (Preference::SemiWeighted(example1::semi1()), w.clone()),
        (Preference::SemiWeighted(example1::semi2()), Rat::one() - w),
    ])
}

pub fn mu_prime() -> RandomPreference {
    mu_prime_weighted(rat(1, 2)).expect("valid weights")
}

/// `ν₁` on the circle with the default center.
pub fn nu1(radius: f64) -> Result<RandomPreference> {
    RandomPreference::circle_rwu(Point::new(DEFAULT_CENTER.0, DEFAULT_CENTER.1), radius)
}

/// `ν₂`.
pub fn nu2() -> RandomPreference {
    RandomPreference::UniformEu
}

/// Uniformly random menu of `size` distinct lotteries on the grid `1/den`.
pub fn random_menu(rng: &mut impl Rng, size: usize, den: i64) -> Menu {
    loop {
        let mut items: Vec<Lottery> = Vec::with_capacity(size);
        while items.len() < size {
            let a = rng.gen_range(0..=den);
            let b = rng.gen_range(0..=den - a);
            let l = Lottery::mm(rat(a, den), rat(b, den)).expect("grid point");
            if !items.contains(&l) {
                items.push(l);
            }
        }
        if let Ok(m) = Menu::new(items) {
            return m;
        }
    }
}

/// Random non-collinear triple on the grid `1/den`.
pub fn random_triple(rng: &mut impl Rng, den: i64) -> [Lottery; 3] {
    loop {
        let m = random_menu(rng, 3, den);
        let it = m.items();
        if orient(&it[0].pos, &it[1].pos, &it[2].pos) != 0 {
            return [it[0].clone(), it[1].clone(), it[2].clone()];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identification::SlopeAtom;
    use crate::montecarlo::substream;
    use crate::scalar::int;

    fn l(x: Rat, y: Rat) -> Lottery {
        Lottery::mm(x, y).unwrap()
    }

    #[test]
    fn choice_prob_examples() {
        let [p, q, _, _] = example1::joint_lotteries();
        let d = Menu::new(vec![p.clone(), q]).unwrap();
        let pr = choice_prob(&mu(), &d, Subset::singleton(0), McConfig::default()).unwrap();
        assert_eq!(pr, Prob::Exact(rat(1, 2)));
        let single = Menu::new(vec![p]).unwrap();
        for m in [mu(), mu_prime()] {
            assert_eq!(
                choice_prob(&m, &single, Subset::singleton(0), McConfig::default()).unwrap(),
                Prob::Exact(int(1))
            );
        }
        let est = choice_prob(&nu2(), &single, Subset::singleton(0), McConfig::new(1000, 1)).unwrap();
        assert_eq!(est.value(), 1.0);
        assert!(choice_prob(&mu(), &d, Subset::empty(), McConfig::default()).is_err());
        assert!(choice_prob(&mu(), &d, Subset::singleton(3), McConfig::default()).is_err());
    }

    #[test]
    fn right_angle_under_uniform_eu() {
        let p = l(rat(1, 4), rat(1, 4));
        let q = l(rat(3, 4), rat(1, 4));
        let r = l(rat(1, 4), rat(3, 4));
        let f = ternary_prob_formula(&p, &q, &r).unwrap();
        assert!((f - 0.25).abs() < 1e-12);
        let d = Menu::new(vec![p, q, r]).unwrap();
        let est = choice_prob(&nu2(), &d, Subset::singleton(0), McConfig::new(200_000, 3)).unwrap();
        assert!((est.value() - 0.25).abs() < 4.0 * est.stderr());
    }

    #[test]
    fn formula_examples() {
        let s3 = 3f64.sqrt();
        let p = Lottery::mm(0.1, 0.1).unwrap();
        let q = Lottery::mm(0.5, 0.1).unwrap();
        let r = Lottery::mm(0.3, 0.1 + 0.2 * s3).unwrap();
        let to_rat = |x: &Lottery<f64>| {
            l(
                crate::scalar::rat_from_f64(x.pos.x).unwrap(),
                crate::scalar::rat_from_f64(x.pos.y).unwrap(),
            )
        };
        let (p, q, r) = (to_rat(&p), to_rat(&q), to_rat(&r));
        let total = ternary_prob_formula(&p, &q, &r).unwrap()
            + ternary_prob_formula(&q, &p, &r).unwrap()
            + ternary_prob_formula(&r, &p, &q).unwrap();
        assert!((ternary_prob_formula(&p, &q, &r).unwrap() - 1.0 / 3.0).abs() < 1e-9);
        assert!((total - 1.0).abs() < 1e-12);
        let a = l(int(0), int(0));
        let b = l(rat(1, 2), int(0));
        let c = l(int(1), int(0));
        assert!(matches!(ternary_prob_formula(&b, &a, &c), Err(Error::CollinearTriple)));
        let near = l(rat(1, 2), rat(1, 1_000_000));
        assert!(ternary_prob_formula(&near, &a, &c).unwrap() < 1e-5);
    }

    #[test]
    fn validation() {
        assert!(nu1(0.5).is_err());
        assert!(nu1(0.8).is_ok());
        assert!(mu_prime_weighted(rat(2, 3)).is_ok());
        assert!(RandomPreference::finite_mixture(vec![(Preference::Wu(example1::pref1()), rat(1, 2))]).is_err());
        let bad = SlopeLaw::Finite {
            atoms: vec![SlopeAtom {
                m0: int(0),
                m1: int(0),
                weight: int(1),
            }],
        };
        assert!(RandomPreference::slope_pair(bad, PrizeRanking::standard()).is_err());
    }

    #[test]
    fn circle_pivots_on_circle() {
        let mu = nu1(0.9).unwrap();
        let mut rng = substream(5, 0);
        for _ in 0..1000 {
            let Preference::Wu(w) = mu.sample(&mut rng).unwrap() else {
                panic!("expected weighted utility");
            };
            let d = ((w.pivot.x - 0.5).powi(2) + (w.pivot.y - 0.5).powi(2)).sqrt();
            assert!((d - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_eu_symmetry() {
        let best = Lottery::<Rat>::degenerate(crate::geometry::Prize::W2);
        let worst = Lottery::<Rat>::degenerate(crate::geometry::Prize::W1);
        let d = Menu::new(vec![best, worst]).unwrap();
        let est = choice_prob(&nu2(), &d, Subset::singleton(0), McConfig::new(1_000_000, 11)).unwrap();
        assert!((est.value() - 0.5).abs() < 4.0 * est.stderr());
    }

    #[test]
    fn slope_pair_samples_are_monotone() {
        let mu = RandomPreference::slope_pair(SlopeLaw::IndependentUniform, PrizeRanking::standard()).unwrap();
        let mut rng = substream(9, 0);
        for _ in 0..200 {
            let Preference::Wu(w) = mu.sample(&mut rng).unwrap() else {
                panic!("expected weighted utility");
            };
            let s = w.to_chart(Chart::Slope, Some(&PrizeRanking::standard())).unwrap();
            assert!(
                crate::preferences::admissible_slope_pivot(&s.pivot, s.orientation) || {
                    // boundary draws can miss by rounding
                    let e = 1e-9;
                    let y = s.pivot.y.abs();
                    y <= -1.0 - s.pivot.x + e || y <= s.pivot.x - 1.0 + e
                }
            );
        }
    }

    #[test]
    fn rows_sum_to_one_and_mixture_linearity() {
        let mut rng = substream(21, 0);
        let menus: Vec<Menu> = (0..40).map(|i| random_menu(&mut rng, 2 + i % 4, 12)).collect();
        let a = rcc_from(&mu(), &menus, McConfig::default()).unwrap();
        a.validate().unwrap();
        let p1 = RandomPreference::FiniteMixture(vec![(Preference::Wu(example1::pref1()), int(1))]);
        let p2 = RandomPreference::FiniteMixture(vec![(Preference::Wu(example1::pref2()), int(1))]);
        let r1 = rcc_from(&p1, &menus, McConfig::default()).unwrap();
        let r2 = rcc_from(&p2, &menus, McConfig::default()).unwrap();
        for i in 0..menus.len() {
            for s in Subset::nonempty_of(menus[i].len()) {
                let want =
                    rat(1, 2) * r1.rows[i].prob(s).exact().unwrap() + rat(1, 2) * r2.rows[i].prob(s).exact().unwrap();
                assert_eq!(a.rows[i].prob(s), Prob::Exact(want));
            }
        }
        let single: Vec<Menu> = menus
            .iter()
            .map(|m| Menu::new(vec![m.get(0).clone()]).unwrap())
            .collect();
        let t = rcc_from(&mu(), &single, McConfig::default()).unwrap();
        assert!(t
            .rows
            .iter()
            .all(|r| r.prob(Subset::singleton(0)) == Prob::Exact(int(1))));
    }

    #[test]
    fn example1_marginals_agree() {
        let mut rng = substream(33, 0);
        let menus: Vec<Menu> = (0..200).map(|i| random_menu(&mut rng, 2 + i % 3, 16)).collect();
        let a = rcc_from(&mu(), &menus, McConfig::default()).unwrap();
        let b = rcc_from(&mu_prime(), &menus, McConfig::default()).unwrap();
        assert!(a.exact_eq(&b));
        let c = rcc_from(&mu_prime_weighted(rat(2, 5)).unwrap(), &menus, McConfig::default()).unwrap();
        assert!(!a.exact_eq(&c));
    }

    #[test]
    fn mc_rcc_rows_sum_to_one() {
        let mut rng = substream(1, 0);
        let menus: Vec<Menu> = (0..5).map(|_| random_menu(&mut rng, 3, 10)).collect();
        let r = rcc_from(&nu1(0.9).unwrap(), &menus, McConfig::new(20_000, 2)).unwrap();
        r.validate().unwrap();
    }
}
