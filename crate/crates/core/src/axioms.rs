//! Behavioral axioms of random betweenness preferences, checked on finite
//! random choice tables.
//!
//! Passing every check does not make a table rationalizable; the axioms are
//! necessary conditions only.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{face_of, Chart, Lottery, Menu, Point, Subset};
use crate::preferences::{EuPreference, Orientation, Preference, WuPreference};
use crate::random_utility::{Companion, Prob, Rcc};
use crate::scalar::{format_rat, int, rat, Rat, Scalar};

/// Standard errors allowed between estimated probabilities.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub menu: usize,
    pub other_menu: Option<usize>,
    pub subset: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub pass: bool,
    pub checks: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    fn new(axiom: &str, checks: usize, skipped: usize, violations: Vec<Violation>) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            pass: violations.is_empty(),
            checks,
            skipped,
            violations,
        }
    }
}

fn indices(s: Subset) -> Vec<usize> {
    s.indices().collect()
}

/// `lhs ≤ rhs`, exactly for rational rows and up to [`MC_SIGMAS`] combined
/// standard errors otherwise.
fn prob_le(lhs: &Prob, rhs: &Prob) -> bool {
    match (lhs, rhs) {
        (Prob::Exact(a), Prob::Exact(b)) => a <= b,
        _ => {
            let se = (lhs.stderr().powi(2) + rhs.stderr().powi(2)).sqrt();
            lhs.value() <= rhs.value() + MC_SIGMAS * se
        }
    }
}

fn prob_eq(lhs: &Prob, rhs: &Prob, tol: f64) -> bool {
    match (lhs, rhs) {
        (Prob::Exact(a), Prob::Exact(b)) => a == b,
        _ => {
            let se = (lhs.stderr().powi(2) + rhs.stderr().powi(2)).sqrt();
            (lhs.value() - rhs.value()).abs() <= tol.max(MC_SIGMAS * se)
        }
    }
}

/// Whether every lottery of `small` is in `big`, and `small` is strictly smaller.
fn proper_submenu(small: &Menu, big: &Menu) -> bool {
    small.len() < big.len() && small.items().iter().all(|l| big.items().contains(l))
}

/// Monotonicity: `ρ_D(A) ≤ ρ_{D∖B}(A∖B)` whenever `A∖B ≠ ∅`, for every
/// nested pair of table menus.
pub fn check_monotonicity(rcc: &Rcc) -> AxiomReport {
    let n = rcc.rows.len();
    let per_row: Vec<(usize, usize, Vec<Violation>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let big = &rcc.rows[i];
            let mut checks = 0;
            let mut skipped = 0;
            let mut viol = Vec::new();
            for (j, small) in rcc.rows.iter().enumerate() {
                if i == j {
                    continue;
                }
                if !proper_submenu(&small.menu, &big.menu) {
                    skipped += 1;
                    continue;
                }
                // Position in D of each item of D' = D∖B.
                let keep: Vec<usize> = small
                    .menu
                    .items()
                    .iter()
                    .map(|l| big.menu.index_of(l).expect("submenu item"))
                    .collect();
                for a in Subset::nonempty_of(big.menu.len()) {
                    let reduced =
                        Subset::from_indices(keep.iter().enumerate().filter(|(_, &d)| a.contains(d)).map(|(k, _)| k));
                    if reduced.is_empty() {
                        continue;
                    }
                    checks += 1;
                    let lhs = big.prob(a);
                    let rhs = small.prob(reduced);
                    if !prob_le(&lhs, &rhs) {
                        viol.push(Violation {
                            menu: i,
                            other_menu: Some(j),
                            subset: indices(a),
                            detail: format!("rho_D(A) = {} > rho_D'(A minus B) = {}", lhs.display(), rhs.display()),
                        });
                    }
                }
            }
            (checks, skipped, viol)
        })
        .collect();
    merge("monotonicity", per_row)
}

fn merge(name: &str, parts: Vec<(usize, usize, Vec<Violation>)>) -> AxiomReport {
    let mut checks = 0;
    let mut skipped = 0;
    let mut viol = Vec::new();
    for (c, s, v) in parts {
        checks += c;
        skipped += s;
        viol.extend(v);
    }
    AxiomReport::new(name, checks, skipped, viol)
}

/// Extremeness: a subset chosen with positive probability is a face of its menu.
pub fn check_extremeness(rcc: &Rcc) -> AxiomReport {
    let parts: Vec<(usize, usize, Vec<Violation>)> = rcc
        .rows
        .par_iter()
        .enumerate()
        .map(|(i, row)| {
            let mut checks = 0;
            let mut viol = Vec::new();
            for (a, p) in &row.probs {
                if p.is_zero() {
                    continue;
                }
                checks += 1;
                let ok = row
                    .menu
                    .restrict(*a)
                    .and_then(|sub| face_of(&sub, &row.menu))
                    .unwrap_or(false);
                if !ok {
                    viol.push(Violation {
                        menu: i,
                        other_menu: None,
                        subset: indices(*a),
                        detail: format!("probability {} on a non-face", p.display()),
                    });
                }
            }
            (checks, 0, viol)
        })
        .collect();
    merge("extremeness", parts)
}

/// Stochastic betweenness on the recorded companion pairs:
/// `ρ_{λD+(1-λ)p}(λA+(1-λ)p) = ρ_D(A)` for `p ∈ A ⊂ D`.
pub fn check_stochastic_betweenness(rcc: &Rcc, tol: f64) -> AxiomReport {
    let parts: Vec<(usize, usize, Vec<Violation>)> = rcc
        .companions
        .par_iter()
        .map(|c| {
            let (Some(base), Some(mixed)) = (rcc.rows.get(c.base), rcc.rows.get(c.mixed)) else {
                return (0, 1, Vec::new());
            };
            let Some(pi) = base.menu.index_of(&c.p) else {
                return (0, 1, Vec::new());
            };
            // Image of each base item in the mixed menu.
            let mut image = Vec::with_capacity(base.menu.len());
            for q in base.menu.items() {
                let m = q.mix(&c.p, &c.lambda).ok().and_then(|m| mixed.menu.index_of(&m));
                match m {
                    Some(k) => image.push(k),
                    None => return (0, 1, Vec::new()),
                }
            }
            let mut checks = 0;
            let mut viol = Vec::new();
            for a in Subset::nonempty_of(base.menu.len()) {
                if !a.contains(pi) {
                    continue;
                }
                checks += 1;
                let ma = Subset::from_indices(a.indices().map(|k| image[k]));
                let lhs = mixed.prob(ma);
                let rhs = base.prob(a);
                if !prob_eq(&lhs, &rhs, tol) {
                    viol.push(Violation {
                        menu: c.base,
                        other_menu: Some(c.mixed),
                        subset: indices(a),
                        detail: format!(
                            "lambda = {}: mixed {} vs base {}",
                            format_rat(&c.lambda),
                            lhs.display(),
                            rhs.display()
                        ),
                    });
                }
            }
            (checks, 0, viol)
        })
        .collect();
    merge("stochastic_betweenness", parts)
}

/// `λD + (1-λ)D' = {λp + (1-λ)p' : p ∈ D, p' ∈ D'}`, duplicates removed.
pub fn mix_menus<S: Scalar>(d: &Menu<S>, d2: &Menu<S>, lambda: &S) -> Result<Menu<S>> {
    if !(*lambda > S::zero() && *lambda <= S::one()) {
        return Err(Error::Degenerate("mixing weight must lie in (0, 1]".into()));
    }
    let mut out: Vec<Lottery<S>> = Vec::with_capacity(d.len() * d2.len());
    for p in d.items() {
        for q in d2.items() {
            let m = p.mix(q, lambda)?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    Menu::new(out)
}

/// `λ·A + (1-λ)·A'` as lotteries.
fn mix_sets<S: Scalar>(a: &[Lottery<S>], b: &[Lottery<S>], lambda: &S) -> Result<Vec<Lottery<S>>> {
    let mut out = Vec::new();
    for p in a {
        for q in b {
            let m = p.mix(q, lambda)?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Whether `M(λD+(1-λ)D') = λM(D) + (1-λ)M(D')` for this preference.
pub fn eu_joint_identity_check<S: Scalar>(pref: &Preference<S>, d: &Menu<S>, d2: &Menu<S>, lambda: &S) -> Result<bool> {
    if !(*lambda > S::zero() && *lambda < S::one()) {
        return Err(Error::Degenerate("mixing weight must lie in (0, 1)".into()));
    }
    let mixed = mix_menus(d, d2, lambda)?;
    let best_mixed: Vec<Lottery<S>> = pref
        .optimal_set(&mixed)?
        .indices()
        .map(|i| mixed.get(i).clone())
        .collect();
    let a: Vec<Lottery<S>> = pref.optimal_set(d)?.indices().map(|i| d.get(i).clone()).collect();
    let b: Vec<Lottery<S>> = pref.optimal_set(d2)?.indices().map(|i| d2.get(i).clone()).collect();
    let want = mix_sets(&a, &b, lambda)?;
    Ok(want.len() == best_mixed.len() && want.iter().all(|x| best_mixed.contains(x)))
}

/// `λD + (1-λ)p`, the stochastic-betweenness companion of `D`.
pub fn companion_menu(d: &Menu, p: &Lottery, lambda: &Rat) -> Result<Menu> {
    if !d.items().contains(p) {
        return Err(Error::NotSubset);
    }
    let single = Menu::new(vec![p.clone()])?;
    mix_menus(d, &single, lambda)
}

/// Menu family for axiom checks: each base menu, its one-item deletions and
/// its companions `λD + (1-λ)p` for every `p ∈ D` and every `λ`.
pub fn menu_family(bases: &[Menu], lambdas: &[Rat]) -> Result<(Vec<Menu>, Vec<Companion>)> {
    let mut menus = Vec::new();
    let mut comps = Vec::new();
    for d in bases {
        let base = menus.len();
        menus.push(d.clone());
        if d.len() >= 2 {
            for k in 0..d.len() {
                let rest: Vec<Lottery> = d
                    .items()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, l)| l.clone())
                    .collect();
                menus.push(Menu::new(rest)?);
            }
        }
        for p in d.items() {
            for lam in lambdas {
                comps.push(Companion {
                    base,
                    mixed: menus.len(),
                    p: p.clone(),
                    lambda: lam.clone(),
                });
                menus.push(companion_menu(d, p, lam)?);
            }
        }
    }
    Ok((menus, comps))
}

/// Companion pairs present in a table: rows `mixed = λ·base + (1-λ)p` with
/// `p` in the base menu and `λ ∈ (0, 1)`.
pub fn discover_companions(rcc: &Rcc) -> Vec<Companion> {
    let mut out = Vec::new();
    for (bi, base) in rcc.rows.iter().enumerate() {
        let d = &base.menu;
        if d.len() < 2 {
            continue;
        }
        for (mi, mixed) in rcc.rows.iter().enumerate() {
            let m = &mixed.menu;
            if mi == bi || m.len() != d.len() || m.chart() != d.chart() {
                continue;
            }
            for p in d.items() {
                if m.index_of(p).is_none() {
                    continue;
                }
                let Some(q) = d.items().iter().find(|x| *x != p) else {
                    continue;
                };
                let dir = q.pos.sub(&p.pos);
                for img in m.items() {
                    let off = img.pos.sub(&p.pos);
                    if off.cross(&dir) != Rat::zero() || img == p {
                        continue;
                    }
                    let lambda = if dir.x != Rat::zero() {
                        &off.x / &dir.x
                    } else {
                        &off.y / &dir.y
                    };
                    if !is_open_unit(&lambda) {
                        continue;
                    }
                    let hit = d
                        .items()
                        .iter()
                        .all(|x| x.mix(p, &lambda).map(|y| m.index_of(&y).is_some()).unwrap_or(false));
                    if hit {
                        out.push(Companion {
                            base: bi,
                            mixed: mi,
                            p: p.clone(),
                            lambda,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Random weighted-utility preference with a rational pivot outside the simplex.
pub fn random_wu(rng: &mut impl Rng) -> WuPreference {
    loop {
        let x = rat(rng.gen_range(-40..=40), 8);
        let y = rat(rng.gen_range(-40..=40), 8);
        let o = if rng.gen() {
            Orientation::Clockwise
        } else {
            Orientation::CounterClockwise
        };
        if let Ok(w) = WuPreference::new(Point::new(x, y), o, Chart::Mm) {
            return w;
        }
    }
}

/// Random expected-utility preference with a rational gradient.
pub fn random_eu(rng: &mut impl Rng) -> EuPreference {
    loop {
        let d = Point::new(int(rng.gen_range(-6..=6)), int(rng.gen_range(-6..=6)));
        if let Ok(e) = EuPreference::new(d, Chart::Mm) {
            return e;
        }
    }
}

/// Random finite mixture of `k` betweenness preferences (weighted utility,
/// expected utility and the semi-weighted pair of the first example).
pub fn random_rieu(rng: &mut impl Rng, k: usize) -> Vec<(Preference, Rat)> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| {
            let p = match rng.gen_range(0..6) {
                0 | 1 | 2 => Preference::Wu(random_wu(rng)),
                3 | 4 => Preference::Eu(random_eu(rng)),
                _ => {
                    if rng.gen() {
                        Preference::SemiWeighted(crate::preferences::example1::semi1())
                    } else {
                        Preference::SemiWeighted(crate::preferences::example1::semi2())
                    }
                }
            };
            (p, rat(w, total))
        })
        .collect()
}

/// Exact total probability of each row.
pub fn row_totals(rcc: &Rcc) -> Vec<Option<Rat>> {
    rcc.rows.iter().map(|r| r.exact_total()).collect()
}

pub fn default_lambdas() -> Vec<Rat> {
    vec![rat(1, 4), rat(1, 2), rat(3, 4)]
}

/// Whether `lambda` is a valid mixing weight in `(0, 1)`.
pub fn is_open_unit(lambda: &Rat) -> bool {
    *lambda > Rat::zero() && *lambda < Rat::one()
}
