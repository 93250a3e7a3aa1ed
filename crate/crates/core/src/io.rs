//! JSON encodings for lotteries, menus, preferences, distributions, choice
//! tables, binary events and decompositions.
//!
//! Exact quantities are strings, either `"num/den"` or a finite decimal such
//! as `"0.125"`. Subsets are lists of 0-based item indices into their menu.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Chart, Lottery, Menu, Point, PrizeRanking, Subset};
use crate::identification::SlopeLaw;
use crate::joint_choice::{BinaryEvent, Cell, Decomposition, LeafCase, Relation};
use crate::preferences::{
    EuPreference, ImplicitBetweenness, LocalUtility, Orientation, Preference, SemiWeighted, WuFunctional, WuPreference,
};
use crate::random_utility::{self, ChoiceEvent, Prob, RandomPreference, Rcc, RccRow};
use crate::scalar::{format_rat, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LotteryJson {
    pub x: String,
    pub y: String,
    pub chart: Chart,
}

impl LotteryJson {
    pub fn from_lottery(l: &Lottery) -> Self {
        LotteryJson {
            x: format_rat(&l.pos.x),
            y: format_rat(&l.pos.y),
            chart: l.chart,
        }
    }

    pub fn to_lottery(&self) -> Result<Lottery> {
        Lottery::new(parse_rat(&self.x)?, parse_rat(&self.y)?, self.chart)
    }
}

pub type MenuJson = Vec<LotteryJson>;

pub fn menu_to_json(m: &Menu) -> MenuJson {
    m.items().iter().map(LotteryJson::from_lottery).collect()
}

pub fn menu_from_json(m: &[LotteryJson]) -> Result<Menu> {
    Menu::new(m.iter().map(LotteryJson::to_lottery).collect::<Result<_>>()?)
}

pub fn menus_from_json(ms: &[MenuJson]) -> Result<Vec<Menu>> {
    ms.iter().map(|m| menu_from_json(m)).collect()
}

fn point_from(xy: &[String; 2]) -> Result<Point<Rat>> {
    Ok(Point::new(parse_rat(&xy[0])?, parse_rat(&xy[1])?))
}

fn point_to(p: &Point<Rat>) -> [String; 2] {
    [format_rat(&p.x), format_rat(&p.y)]
}

fn mm() -> Chart {
    Chart::Mm
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum LocalUtilityJson {
    Eu { u: [f64; 3] },
    Weighted { u: [f64; 3], g: [f64; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PreferenceJson {
    /// Either utilities on `(W1, W2, W3)` or a gradient in `chart`.
    Eu {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<[String; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        direction: Option<[String; 2]>,
        #[serde(default = "mm")]
        chart: Chart,
    },
    WuPivot {
        pivot: [String; 2],
        orientation: Orientation,
        #[serde(default = "mm")]
        chart: Chart,
    },
    WuFunctional(WuFunctional),
    SemiWeighted(SemiWeighted),
    Implicit {
        local: LocalUtilityJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ranking: Option<PrizeRanking>,
    },
}

impl PreferenceJson {
    pub fn from_preference(p: &Preference) -> Result<Self> {
        Ok(match p {
            Preference::Eu(e) => PreferenceJson::Eu {
                u: None,
                direction: Some(point_to(&e.direction)),
                chart: e.chart,
            },
            Preference::Wu(w) => PreferenceJson::WuPivot {
                pivot: point_to(&w.pivot),
                orientation: w.orientation,
                chart: w.chart,
            },
            Preference::WuFunctional(f) => PreferenceJson::WuFunctional(f.clone()),
            Preference::SemiWeighted(s) => PreferenceJson::SemiWeighted(s.clone()),
            Preference::Implicit(b) => PreferenceJson::Implicit {
                local: match &b.local {
                    LocalUtility::Eu { u } => LocalUtilityJson::Eu { u: *u },
                    LocalUtility::Weighted { u, g } => LocalUtilityJson::Weighted { u: *u, g: *g },
                    LocalUtility::Custom(_) => {
                        return Err(Error::Unsupported("custom local utilities have no JSON form".into()))
                    }
                },
                ranking: Some(b.ranking),
            },
            Preference::Custom(_) => return Err(Error::Unsupported("custom preferences have no JSON form".into())),
        })
    }

    pub fn to_preference(&self) -> Result<Preference> {
        Ok(match self {
            PreferenceJson::Eu { u, direction, chart } => match (u, direction) {
                (Some(u), None) => {
                    if *chart != Chart::Mm {
                        return Err(Error::InvalidPreference(
                            "EU utilities are given in the MM chart".into(),
                        ));
                    }
                    let u = [parse_rat(&u[0])?, parse_rat(&u[1])?, parse_rat(&u[2])?];
                    Preference::Eu(EuPreference::from_utilities(u)?)
                }
                (None, Some(d)) => Preference::Eu(EuPreference::new(point_from(d)?, *chart)?),
                _ => {
                    return Err(Error::InvalidPreference(
                        "EU preference needs exactly one of `u` and `direction`".into(),
                    ))
                }
            },
            PreferenceJson::WuPivot {
                pivot,
                orientation,
                chart,
            } => Preference::Wu(WuPreference::new(point_from(pivot)?, *orientation, *chart)?),
            PreferenceJson::WuFunctional(f) => Preference::WuFunctional(WuFunctional::new(f.u.clone(), f.g.clone())?),
            PreferenceJson::SemiWeighted(s) => Preference::SemiWeighted(s.clone()),
            PreferenceJson::Implicit { local, ranking } => {
                let local = match local {
                    LocalUtilityJson::Eu { u } => LocalUtility::Eu { u: *u },
                    LocalUtilityJson::Weighted { u, g } => LocalUtility::Weighted { u: *u, g: *g },
                };
                let ranking = match ranking {
                    Some(r) => *r,
                    None => PrizeRanking::standard(),
                };
                Preference::Implicit(ImplicitBetweenness::new(local, ranking)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub preference: PreferenceJson,
    pub weight: String,
}

/// Distributions used in the worked examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedDistribution {
    Mu,
    MuPrime,
    Nu1,
    Nu2,
}

fn default_center() -> [f64; 2] {
    [random_utility::DEFAULT_CENTER.0, random_utility::DEFAULT_CENTER.1]
}

fn default_radius() -> f64 {
    random_utility::DEFAULT_RADIUS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionJson {
    FiniteMixture {
        components: Vec<ComponentJson>,
    },
    CircleRwu {
        #[serde(default = "default_center")]
        center: [f64; 2],
        #[serde(default = "default_radius")]
        radius: f64,
    },
    UniformEu,
    SlopePair {
        law: SlopeLaw,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ranking: Option<PrizeRanking>,
    },
    Named {
        name: NamedDistribution,
    },
}

impl DistributionJson {
    pub fn from_distribution(mu: &RandomPreference) -> Result<Self> {
        Ok(match mu {
            RandomPreference::FiniteMixture(items) => DistributionJson::FiniteMixture {
                components: items
                    .iter()
                    .map(|(p, w)| {
                        Ok(ComponentJson {
                            preference: PreferenceJson::from_preference(p)?,
                            weight: format_rat(w),
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            RandomPreference::CircleRwu { center, radius } => DistributionJson::CircleRwu {
                center: [center.x, center.y],
                radius: *radius,
            },
            RandomPreference::UniformEu => DistributionJson::UniformEu,
            RandomPreference::SlopePair { law, ranking } => DistributionJson::SlopePair {
                law: law.clone(),
                ranking: Some(*ranking),
            },
        })
    }

    pub fn to_distribution(&self) -> Result<RandomPreference> {
        match self {
            DistributionJson::FiniteMixture { components } => RandomPreference::finite_mixture(
                components
                    .iter()
                    .map(|c| Ok((c.preference.to_preference()?, parse_rat(&c.weight)?)))
                    .collect::<Result<_>>()?,
            ),
            DistributionJson::CircleRwu { center, radius } => {
                RandomPreference::circle_rwu(Point::new(center[0], center[1]), *radius)
            }
            DistributionJson::UniformEu => Ok(RandomPreference::UniformEu),
            DistributionJson::SlopePair { law, ranking } => {
                RandomPreference::slope_pair(law.clone(), ranking.unwrap_or_else(PrizeRanking::standard))
            }
            DistributionJson::Named { name } => Ok(match name {
                NamedDistribution::Mu => random_utility::mu(),
                NamedDistribution::MuPrime => random_utility::mu_prime(),
                NamedDistribution::Nu1 => random_utility::nu1(random_utility::DEFAULT_RADIUS)?,
                NamedDistribution::Nu2 => random_utility::nu2(),
            }),
        }
    }
}

/// Exact probabilities are strings; estimates are numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbValue {
    Exact(String),
    Estimate(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetProbJson {
    pub subset: Vec<usize>,
    pub prob: ProbValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

fn prob_fields(p: &Prob) -> (ProbValue, Option<f64>, Option<u64>) {
    match p {
        Prob::Exact(r) => (ProbValue::Exact(format_rat(r)), None, None),
        Prob::Estimate { value, stderr, samples } => (ProbValue::Estimate(*value), Some(*stderr), Some(*samples)),
    }
}

fn prob_from_fields(v: &ProbValue, stderr: Option<f64>, samples: Option<u64>) -> Result<Prob> {
    match v {
        ProbValue::Exact(s) => Ok(Prob::Exact(parse_rat(s)?)),
        ProbValue::Estimate(value) if value.is_finite() => Ok(Prob::Estimate {
            value: *value,
            stderr: stderr.unwrap_or(0.0),
            samples: samples.unwrap_or(0),
        }),
        ProbValue::Estimate(v) => Err(Error::Parse(format!("probability {v} is not finite"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RccRowJson {
    pub menu: MenuJson,
    pub rows: Vec<SubsetProbJson>,
}

pub type RccJson = Vec<RccRowJson>;

fn subset_from(idx: &[usize], n: usize) -> Result<Subset> {
    if let Some(i) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::Parse(format!("subset index {i} out of range for a menu of {n}")));
    }
    Ok(Subset::from_indices(idx.iter().copied()))
}

pub fn rcc_to_json(rcc: &Rcc) -> RccJson {
    rcc.rows
        .iter()
        .map(|row| RccRowJson {
            menu: menu_to_json(&row.menu),
            rows: row
                .probs
                .iter()
                .map(|(s, p)| {
                    let (prob, stderr, samples) = prob_fields(p);
                    SubsetProbJson {
                        subset: s.indices().collect(),
                        prob,
                        stderr,
                        samples,
                    }
                })
                .collect(),
        })
        .collect()
}

/// Parses a table; companion pairs are left empty.
pub fn rcc_from_json(rows: &[RccRowJson]) -> Result<Rcc> {
    let rows = rows
        .iter()
        .map(|r| {
            let menu = menu_from_json(&r.menu)?;
            let mut probs = BTreeMap::new();
            for e in &r.rows {
                let s = subset_from(&e.subset, menu.len())?;
                if s.is_empty() {
                    return Err(Error::Parse("empty subset in a choice row".into()));
                }
                if probs
                    .insert(s, prob_from_fields(&e.prob, e.stderr, e.samples)?)
                    .is_some()
                {
                    return Err(Error::Parse("subset listed twice in a choice row".into()));
                }
            }
            Ok(RccRow { menu, probs })
        })
        .collect::<Result<_>>()?;
    let rcc = Rcc {
        rows,
        companions: Vec::new(),
    };
    rcc.validate()?;
    Ok(rcc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryEventJson {
    pub p: LotteryJson,
    pub q: LotteryJson,
    #[serde(default = "succ")]
    pub relation: Relation,
}

fn succ() -> Relation {
    Relation::Succ
}

impl BinaryEventJson {
    pub fn from_event(e: &BinaryEvent) -> Self {
        BinaryEventJson {
            p: LotteryJson::from_lottery(&e.p),
            q: LotteryJson::from_lottery(&e.q),
            relation: e.relation,
        }
    }

    pub fn to_event(&self) -> Result<BinaryEvent> {
        BinaryEvent::new(self.p.to_lottery()?, self.q.to_lottery()?, self.relation)
    }
}

pub fn events_from_json(ev: &[BinaryEventJson]) -> Result<Vec<BinaryEvent>> {
    ev.iter().map(BinaryEventJson::to_event).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub events: Vec<BinaryEventJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub cells: Vec<CellJson>,
    pub tie_overlap_witnesses: Vec<[LotteryJson; 2]>,
    pub cases: Vec<LeafCase>,
    pub fallback_used: bool,
    pub trace: Vec<String>,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionJson {
            cells: d
                .cells
                .iter()
                .map(|c| CellJson {
                    events: c.events.iter().map(BinaryEventJson::from_event).collect(),
                })
                .collect(),
            tie_overlap_witnesses: d
                .tie_overlap_witnesses
                .iter()
                .map(|(a, b)| [LotteryJson::from_lottery(a), LotteryJson::from_lottery(b)])
                .collect(),
            cases: d.cases.clone(),
            fallback_used: d.fallback_used,
            trace: d.trace.clone(),
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition> {
        Ok(Decomposition {
            cells: self
                .cells
                .iter()
                .map(|c| {
                    Ok(Cell {
                        events: events_from_json(&c.events)?,
                    })
                })
                .collect::<Result<_>>()?,
            tie_overlap_witnesses: self
                .tie_overlap_witnesses
                .iter()
                .map(|[a, b]| Ok((a.to_lottery()?, b.to_lottery()?)))
                .collect::<Result<_>>()?,
            cases: self.cases.clone(),
            trace: self.trace.clone(),
            fallback_used: self.fallback_used,
        })
    }
}

/// `chosen` is the optimal set; with `weak` it is only contained in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiceEventJson {
    pub menu: MenuJson,
    pub chosen: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub weak: bool,
}

impl ChoiceEventJson {
    pub fn from_event(e: &ChoiceEvent) -> Self {
        ChoiceEventJson {
            menu: menu_to_json(&e.menu),
            chosen: e.chosen.indices().collect(),
            weak: false,
        }
    }

    /// `p ≻ q` is the choice of `p` from `{p, q}`, `p ~ q` the choice of both
    /// and `p ≿ q` the weak choice of `p`.
    pub fn from_binary(e: &BinaryEvent) -> Self {
        let (chosen, weak) = match e.relation {
            Relation::Succ => (vec![0], false),
            Relation::Succeq => (vec![0], true),
            Relation::Indiff => (vec![0, 1], false),
        };
        ChoiceEventJson {
            menu: vec![LotteryJson::from_lottery(&e.p), LotteryJson::from_lottery(&e.q)],
            chosen,
            weak,
        }
    }

    pub fn to_event(&self) -> Result<ChoiceEvent> {
        if self.weak {
            return Err(Error::Unsupported("a weak choice is a union of choice events".into()));
        }
        let menu = menu_from_json(&self.menu)?;
        let chosen = subset_from(&self.chosen, menu.len())?;
        ChoiceEvent::new(menu, chosen)
    }
}

/// One row of a joint-choice table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointRowJson {
    pub events: Vec<ChoiceEventJson>,
    pub prob: ProbValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl JointRowJson {
    pub fn new(events: Vec<ChoiceEventJson>, p: &Prob) -> Self {
        let (prob, stderr, samples) = prob_fields(p);
        JointRowJson {
            events,
            prob,
            stderr,
            samples,
        }
    }

    pub fn prob(&self) -> Result<Prob> {
        prob_from_fields(&self.prob, self.stderr, self.samples)
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::McConfig;
    use crate::preferences::example1;
    use crate::random_utility::{mu, mu_prime, rcc_from};
    use crate::scalar::rat;

    #[test]
    fn lottery_strings() {
        let l: LotteryJson = parse_json(r#"{"x": "1/4", "y": "0.5", "chart": "MM"}"#).unwrap();
        assert_eq!(l.to_lottery().unwrap(), Lottery::mm(rat(1, 4), rat(1, 2)).unwrap());
        let out = to_json(&LotteryJson::from_lottery(&l.to_lottery().unwrap())).unwrap();
        assert!(out.contains("\"1/2\""));
        assert!(parse_json::<LotteryJson>(r#"{"x": "1/4", "y": "0.5"}"#).is_err());
        let bad: LotteryJson = parse_json(r#"{"x": "3/4", "y": "1/2", "chart": "MM"}"#).unwrap();
        assert!(bad.to_lottery().is_err());
    }

    #[test]
    fn preferences_round_trip() {
        let prefs = vec![
            Preference::Wu(example1::pref1()),
            Preference::WuFunctional(example1::v1()),
            Preference::SemiWeighted(example1::semi2()),
            Preference::Eu(EuPreference::new(Point::new(rat(1, 2), rat(-1, 3)), Chart::Mm).unwrap()),
        ];
        let l = example1::joint_lotteries();
        for p in prefs {
            let j = PreferenceJson::from_preference(&p).unwrap();
            let back: PreferenceJson = parse_json(&to_json(&j).unwrap()).unwrap();
            let q = back.to_preference().unwrap();
            for a in &l {
                for b in &l {
                    assert_eq!(p.compare(a, b).unwrap(), q.compare(a, b).unwrap());
                }
            }
        }
        let eu: PreferenceJson = parse_json(r#"{"kind": "eu", "u": ["0", "1", "1/2"]}"#).unwrap();
        assert!(eu.to_preference().is_ok());
        let both: PreferenceJson =
            parse_json(r#"{"kind": "eu", "u": ["0", "1", "1/2"], "direction": ["1", "0"]}"#).unwrap();
        assert!(both.to_preference().is_err());
        let imp: PreferenceJson =
            parse_json(r#"{"kind": "implicit", "local": {"form": "weighted", "u": [0, 1, 0.5], "g": [1, 1, 0.5]}}"#)
                .unwrap();
        assert!(matches!(imp.to_preference().unwrap(), Preference::Implicit(_)));
    }

    #[test]
    fn distributions_round_trip() {
        for mu in [mu(), mu_prime(), RandomPreference::UniformEu] {
            let j = DistributionJson::from_distribution(&mu).unwrap();
            let back = parse_json::<DistributionJson>(&to_json(&j).unwrap()).unwrap();
            assert_eq!(back, j);
            back.to_distribution().unwrap();
        }
        let n: DistributionJson = parse_json(r#"{"kind": "named", "name": "nu1"}"#).unwrap();
        assert!(matches!(
            n.to_distribution().unwrap(),
            RandomPreference::CircleRwu { .. }
        ));
        let c: DistributionJson = parse_json(r#"{"kind": "circle_rwu", "radius": 1.5}"#).unwrap();
        assert!(matches!(c.to_distribution().unwrap(), RandomPreference::CircleRwu { radius, .. } if radius == 1.5));
    }

    #[test]
    fn rcc_round_trip() {
        let [p, q, pp, qq] = example1::joint_lotteries();
        let menus = vec![Menu::new(vec![p, q, pp]).unwrap(), Menu::new(vec![qq.clone()]).unwrap()];
        let exact = rcc_from(&mu(), &menus, McConfig::default()).unwrap();
        let back = rcc_from_json(&parse_json::<RccJson>(&to_json(&rcc_to_json(&exact)).unwrap()).unwrap()).unwrap();
        assert!(back.exact_eq(&exact));
        let est = rcc_from(&crate::random_utility::nu2(), &menus, McConfig::new(2000, 3)).unwrap();
        let text = to_json(&rcc_to_json(&est)).unwrap();
        assert!(text.contains("stderr"));
        assert_eq!(rcc_from_json(&parse_json::<RccJson>(&text).unwrap()).unwrap(), est);
        let bad = r#"[{"menu": [{"x": "0", "y": "0", "chart": "MM"}], "rows": [{"subset": [1], "prob": "1"}]}]"#;
        assert!(rcc_from_json(&parse_json::<RccJson>(bad).unwrap()).is_err());
    }

    #[test]
    fn events_and_decompositions_round_trip() {
        let [p, q, pp, qq] = example1::joint_lotteries();
        let ev = vec![
            BinaryEvent::succ(p.clone(), q).unwrap(),
            BinaryEvent::succ(pp, qq).unwrap(),
        ];
        let js: Vec<BinaryEventJson> = ev.iter().map(BinaryEventJson::from_event).collect();
        let back = events_from_json(&parse_json::<Vec<BinaryEventJson>>(&to_json(&js).unwrap()).unwrap()).unwrap();
        assert_eq!(back, ev);
        let d = Decomposition {
            cells: vec![Cell { events: ev.clone() }],
            tie_overlap_witnesses: vec![(p.clone(), p)],
            cases: vec![LeafCase::C2_3],
            trace: vec!["t".into()],
            fallback_used: false,
        };
        let j = DecompositionJson::from_decomposition(&d);
        let text = to_json(&j).unwrap();
        assert!(text.contains("\"2-3\""));
        assert_eq!(
            parse_json::<DecompositionJson>(&text)
                .unwrap()
                .to_decomposition()
                .unwrap(),
            d
        );
        let ch = ChoiceEventJson::from_binary(&ev[0]);
        let row = JointRowJson::new(vec![ch.clone()], &Prob::Exact(rat(1, 2)));
        let e = row.events[0].to_event().unwrap();
        assert_eq!((e.menu.get(0), e.chosen), (&ev[0].p, Subset::singleton(0)));
        assert_eq!(row.prob().unwrap(), Prob::Exact(rat(1, 2)));
        let w = BinaryEvent::new(ev[0].p.clone(), ev[0].q.clone(), Relation::Succeq).unwrap();
        let wj = ChoiceEventJson::from_binary(&w);
        assert!(wj.weak && wj.to_event().is_err());
        assert!(to_json(&ch).unwrap().find("weak").is_none());
    }
}
