//! Joint choice across several menus, and the reduction of many binary
//! weighted-utility events to cells of at most three events.

pub mod cone;
mod decompose;
pub mod oracle;

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Chart, Lottery, Menu, PrizeRanking, Subset};
use crate::montecarlo::{self, McConfig};
use crate::preferences::Preference;
use crate::random_utility::{ChoiceEvent, Prob, RandomPreference};
use crate::scalar::{rat, Rat, Scalar};

pub use decompose::{decompose4, exact_check, facet_fan, reduce_joint_event, reduce_joint_event_with, ExactCheck};

pub const DEFAULT_MAX_DEPTH: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Succ,
    Succeq,
    Indiff,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Succ => ">",
            Relation::Succeq => ">=",
            Relation::Indiff => "~",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Succ => ord == Ordering::Greater,
            Relation::Succeq => ord != Ordering::Less,
            Relation::Indiff => ord == Ordering::Equal,
        }
    }
}

/// `p R q` for a pair of distinct lotteries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryEvent {
    pub p: Lottery,
    pub q: Lottery,
    pub relation: Relation,
}

impl BinaryEvent {
    pub fn new(p: Lottery, q: Lottery, relation: Relation) -> Result<Self> {
        if p.chart != q.chart {
            return Err(Error::ChartMismatch {
                expected: p.chart,
                found: q.chart,
            });
        }
        if p == q {
            return Err(Error::Degenerate("binary event needs two distinct lotteries".into()));
        }
        Ok(BinaryEvent { p, q, relation })
    }

    pub fn succ(p: Lottery, q: Lottery) -> Result<Self> {
        BinaryEvent::new(p, q, Relation::Succ)
    }

    /// The same event with both lotteries in the MM chart.
    pub fn to_mm(&self) -> Result<Self> {
        if self.p.chart == Chart::Mm {
            return Ok(self.clone());
        }
        let rank = PrizeRanking::standard();
        Ok(BinaryEvent {
            p: self.p.convert(Chart::Mm, Some(&rank))?,
            q: self.q.convert(Chart::Mm, Some(&rank))?,
            relation: self.relation,
        })
    }

    pub fn holds<S: Scalar>(&self, pref: &Preference<S>) -> Result<bool> {
        let p: Lottery<S> = self.p.from_rat();
        let q: Lottery<S> = self.q.from_rat();
        Ok(self.relation.holds(pref.compare(&p, &q)?))
    }
}

impl fmt::Display for BinaryEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) {} ({}, {})",
            crate::scalar::format_rat(&self.p.pos.x),
            crate::scalar::format_rat(&self.p.pos.y),
            self.relation.symbol(),
            crate::scalar::format_rat(&self.q.pos.x),
            crate::scalar::format_rat(&self.q.pos.y)
        )
    }
}

/// Conjunction of at most three binary events.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub events: Vec<BinaryEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LeafCase {
    #[serde(rename = "1")]
    C1,
    #[serde(rename = "2-1")]
    C2_1,
    #[serde(rename = "2-2")]
    C2_2,
    #[serde(rename = "2-3")]
    C2_3,
    #[serde(rename = "2-4")]
    C2_4,
    #[serde(rename = "3-1")]
    C3_1,
    #[serde(rename = "3-2")]
    C3_2,
    #[serde(rename = "3-3")]
    C3_3,
    #[serde(rename = "3-4")]
    C3_4,
    #[serde(rename = "4-1")]
    C4_1,
    #[serde(rename = "4-2")]
    C4_2,
}

impl LeafCase {
    pub const ALL: [LeafCase; 11] = [
        LeafCase::C1,
        LeafCase::C2_1,
        LeafCase::C2_2,
        LeafCase::C2_3,
        LeafCase::C2_4,
        LeafCase::C3_1,
        LeafCase::C3_2,
        LeafCase::C3_3,
        LeafCase::C3_4,
        LeafCase::C4_1,
        LeafCase::C4_2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LeafCase::C1 => "1",
            LeafCase::C2_1 => "2-1",
            LeafCase::C2_2 => "2-2",
            LeafCase::C2_3 => "2-3",
            LeafCase::C2_4 => "2-4",
            LeafCase::C3_1 => "3-1",
            LeafCase::C3_2 => "3-2",
            LeafCase::C3_3 => "3-3",
            LeafCase::C3_4 => "3-4",
            LeafCase::C4_1 => "4-1",
            LeafCase::C4_2 => "4-2",
        }
    }
}

/// Cells whose union is the input conjunction; two cells overlap only where
/// the preference is indifferent on one of the witness pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub cells: Vec<Cell>,
    pub tie_overlap_witnesses: Vec<(Lottery, Lottery)>,
    /// Leaf cases whose construction was used, in visiting order.
    pub cases: Vec<LeafCase>,
    pub trace: Vec<String>,
    /// Whether some node needed the fan construction instead of its case.
    pub fallback_used: bool,
}

impl Decomposition {
    pub fn max_cell_len(&self) -> usize {
        self.cells.iter().map(|c| c.events.len()).max().unwrap_or(0)
    }
}

/// Probability that every event occurs simultaneously.
pub fn joint_choice_prob(mu: &RandomPreference, events: &[ChoiceEvent], mc: McConfig) -> Result<Prob> {
    if events.is_empty() {
        return Err(Error::Degenerate("no choice events".into()));
    }
    for e in events {
        e.menu.check_subset(e.chosen)?;
        if e.chosen.is_empty() {
            return Err(Error::InvalidMenu("chosen subset is empty".into()));
        }
    }
    match mu {
        RandomPreference::FiniteMixture(items) => {
            let mut total = Rat::zero();
            'pref: for (pref, w) in items {
                for e in events {
                    if pref.optimal_set(&e.menu)? != e.chosen {
                        continue 'pref;
                    }
                }
                total += w;
            }
            Ok(Prob::Exact(total))
        }
        _ => {
            let menus: Vec<(Menu<f64>, Subset)> = events.iter().map(|e| (e.menu.to_f64(), e.chosen)).collect();
            let hits = montecarlo::run(
                mc,
                || 0u64,
                |acc, rng| {
                    let pref = mu.sample(rng)?;
                    for (m, a) in &menus {
                        if pref.optimal_set(m)? != *a {
                            return Ok(());
                        }
                    }
                    *acc += 1;
                    Ok(())
                },
                |a, b| a + b,
            )?;
            Ok(Prob::from_count(hits, mc.samples))
        }
    }
}

/// Probability of a conjunction of binary events, weak relations included.
pub fn binary_conjunction_prob(mu: &RandomPreference, events: &[BinaryEvent], mc: McConfig) -> Result<Prob> {
    if events.is_empty() {
        return Err(Error::Degenerate("no binary events".into()));
    }
    match mu {
        RandomPreference::FiniteMixture(items) => {
            let mut total = Rat::zero();
            'pref: for (pref, w) in items {
                for e in events {
                    if !e.relation.holds(pref.compare(&e.p, &e.q)?) {
                        continue 'pref;
                    }
                }
                total += w;
            }
            Ok(Prob::Exact(total))
        }
        _ => {
            let ev: Vec<(Lottery<f64>, Lottery<f64>, Relation)> = events
                .iter()
                .map(|e| (e.p.to_f64(), e.q.to_f64(), e.relation))
                .collect();
            let hits = montecarlo::run(
                mc,
                || 0u64,
                |acc, rng| {
                    let pref = mu.sample(rng)?;
                    for (p, q, r) in &ev {
                        if !r.holds(pref.compare(p, q)?) {
                            return Ok(());
                        }
                    }
                    *acc += 1;
                    Ok(())
                },
                |a, b| a + b,
            )?;
            Ok(Prob::from_count(hits, mc.samples))
        }
    }
}

/// `p' = ½p + ½r`, `q' = ½q + ½r`.
pub fn footnote_lotteries(p: &Lottery, q: &Lottery, r: &Lottery) -> Result<(Lottery, Lottery)> {
    let h = rat(1, 2);
    Ok((p.mix(r, &h)?, q.mix(r, &h)?))
}

/// Probability that `p` is chosen from `{p, q}` while `q'` is chosen from
/// `{p', q'}`; independence rules this out for every expected utility.
pub fn footnote_counterexample(
    mu: &RandomPreference,
    p: &Lottery,
    q: &Lottery,
    r: &Lottery,
    mc: McConfig,
) -> Result<Prob> {
    let (pp, qq) = footnote_lotteries(p, q, r)?;
    let e1 = ChoiceEvent::new(Menu::new(vec![p.clone(), q.clone()])?, Subset::singleton(0))?;
    let e2 = ChoiceEvent::new(Menu::new(vec![pp, qq])?, Subset::singleton(1))?;
    joint_choice_prob(mu, &[e1, e2], mc)
}

/// Samples on which `p ≻ q` and `p' ≻ q'` disagree.
pub fn independence_failures(
    mu: &RandomPreference,
    p: &Lottery,
    q: &Lottery,
    r: &Lottery,
    mc: McConfig,
) -> Result<u64> {
    let (pp, qq) = footnote_lotteries(p, q, r)?;
    let l = [p, q, &pp, &qq].map(|x| x.to_f64());
    montecarlo::run(
        mc,
        || 0u64,
        |acc, rng| {
            let pref = mu.sample(rng)?;
            if pref.compare(&l[0], &l[1])? != pref.compare(&l[2], &l[3])? {
                *acc += 1;
            }
            Ok(())
        },
        |a, b| a + b,
    )
}
