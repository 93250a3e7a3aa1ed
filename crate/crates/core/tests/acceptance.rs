//! Acceptance suite. Criteria run one after another so the runtime limits
//! are measured without competing tests; each prints one PASS/FAIL line.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use choice_lab::axioms::{default_lambdas, eu_joint_identity_check, menu_family, random_eu, random_rieu, random_wu};
use choice_lab::identification::{
    default_nodes, direct_moments, indifference_slope, recover_joint_moments, AnalyticCdf, RESIDUAL_TOL,
};
use choice_lab::joint_choice::oracle::{oracle_validate, random_configuration};
use choice_lab::joint_choice::{exact_check, footnote_counterexample, independence_failures};
use choice_lab::montecarlo::{binomial_stderr, substream, DEFAULT_SEED};
use choice_lab::preferences::{implicit_value, weighted_value, CustomValue, IMPLICIT_TOL};
use choice_lab::random_utility::{mu, mu_prime, nu1, nu2, random_menu, random_triple, rcc_from, ternary_prob_formula};
use choice_lab::scalar::{int, rat};
use choice_lab::{
    check_extremeness, check_monotonicity, check_stochastic_betweenness, decompose4, joint_choice_prob, ChoiceEvent,
    ImplicitBetweenness, LeafCase, LocalUtility, Lottery, McConfig, Menu, Point, Preference, Prize, PrizeRanking, Prob,
    RandomPreference, Rat, Rcc, RccRow, Scalar, SlopeAtom, SlopeLaw, Subset, WuFunctional,
};

type Outcome = Result<(bool, String), choice_lab::Error>;

fn l(x: Rat, y: Rat) -> Lottery {
    Lottery::mm(x, y).unwrap()
}

fn report(id: u32, name: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let verdict = if pass { "PASS" } else { "FAIL" };
    // Written to the raw handle so the line shows without --nocapture.
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id:>2} {verdict}  {name}: {detail} [{secs:.1}s]"
    );
    pass
}

fn c1_example1_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = substream(DEFAULT_SEED, 1);
    let menus: Vec<Menu> = (0..1000).map(|i| random_menu(&mut rng, 2 + i % 3, 12)).collect();
    let a = rcc_from(&mu(), &menus, McConfig::default())?;
    let b = rcc_from(&mu_prime(), &menus, McConfig::default())?;
    let equal = a.exact_eq(&b);
    let elapsed = start.elapsed();
    Ok((
        equal && elapsed < Duration::from_secs(30),
        format!(
            "1000 menus of sizes 2-4, tables equal: {equal}, {:.2}s of 30s",
            elapsed.as_secs_f64()
        ),
    ))
}

fn c2_joint_divergence() -> Outcome {
    let p = l(int(0), rat(1, 2));
    let q = l(rat(1, 4), rat(3, 4));
    let pp = l(rat(1, 2), int(0));
    let qq = l(rat(3, 4), rat(1, 4));
    let events = [
        ChoiceEvent::new(Menu::new(vec![p, q])?, Subset::singleton(0))?,
        ChoiceEvent::new(Menu::new(vec![pp, qq])?, Subset::singleton(0))?,
    ];
    let a = joint_choice_prob(&mu(), &events, McConfig::default())?;
    let b = joint_choice_prob(&mu_prime(), &events, McConfig::default())?;
    let pass = a == Prob::Exact(int(0)) && b == Prob::Exact(rat(1, 2));
    Ok((pass, format!("mu {}, mu' {}", a.display(), b.display())))
}

struct Ternary {
    menus: Vec<Menu>,
    formula: Vec<f64>,
    /// Each table with the time spent building it.
    tables: Vec<(String, Rcc, Duration)>,
}

const N: u64 = 1_000_000;

fn ternary_tables() -> Result<Ternary, choice_lab::Error> {
    let mut rng = substream(DEFAULT_SEED, 3);
    let triples: Vec<[Lottery; 3]> = (0..20).map(|_| random_triple(&mut rng, 20)).collect();
    let menus: Vec<Menu> = triples
        .iter()
        .map(|t| Menu::new(t.to_vec()))
        .collect::<Result<_, _>>()?;
    let formula = triples
        .iter()
        .map(|t| ternary_prob_formula(&t[0], &t[1], &t[2]))
        .collect::<Result<Vec<_>, _>>()?;
    let dists = [
        ("nu1(r=0.9)".to_string(), nu1(0.9)?),
        ("nu1(r=0.8)".to_string(), nu1(0.8)?),
        ("nu1(r=1.5)".to_string(), nu1(1.5)?),
        ("nu2".to_string(), nu2()),
    ];
    let mut tables = Vec::new();
    for (k, (name, d)) in dists.into_iter().enumerate() {
        let start = Instant::now();
        let tab = rcc_from(&d, &menus, McConfig::new(N, DEFAULT_SEED + 10 + k as u64))?;
        tables.push((name, tab, start.elapsed()));
    }
    Ok(Ternary { menus, formula, tables })
}

fn c3_example2_formula(t: &Ternary) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut elapsed = Duration::ZERO;
    for (name, tab, built) in &t.tables {
        if name != "nu1(r=0.9)" && name != "nu2" {
            continue;
        }
        elapsed += *built;
        for (i, f) in t.formula.iter().enumerate() {
            let est = tab.rows[i].prob(Subset::singleton(0)).value();
            let bound = 4.0 * binomial_stderr(est, N);
            let dev = (est - f).abs();
            ok &= dev <= bound;
            worst = worst.max(dev / bound);
        }
    }
    let elapsed = elapsed + start.elapsed();
    Ok((
        ok && elapsed < Duration::from_secs(60),
        format!(
            "{} triples, N = 1e6, largest deviation {worst:.2} of the 4-se bound, {:.1}s of 60s",
            t.menus.len(),
            elapsed.as_secs_f64()
        ),
    ))
}

fn c4_circle_invariance(t: &Ternary) -> Outcome {
    let find = |n: &str| &t.tables.iter().find(|(name, _, _)| name == n).unwrap().1;
    let (a, b) = (find("nu1(r=0.8)"), find("nu1(r=1.5)"));
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for i in 0..t.menus.len() {
        for s in 0..3 {
            let (x, y) = (
                a.rows[i].prob(Subset::singleton(s)),
                b.rows[i].prob(Subset::singleton(s)),
            );
            let se = (x.stderr().powi(2) + y.stderr().powi(2)).sqrt();
            worst = worst.max((x.value() - y.value()).abs() / se);
            checks += 1;
        }
    }
    Ok((
        worst <= 4.0,
        format!("{checks} comparisons, largest gap {worst:.2} combined se (limit 4)"),
    ))
}

fn c5_footnote() -> Outcome {
    let p = l(rat(1, 10), rat(1, 5));
    let q = l(rat(1, 2), rat(1, 5));
    let r = l(rat(1, 10), rat(4, 5));
    let mc = McConfig::new(N, DEFAULT_SEED + 5);
    let e2 = footnote_counterexample(&nu2(), &p, &q, &r, mc)?;
    let fails = independence_failures(&nu2(), &p, &q, &r, mc)?;
    let e1 = footnote_counterexample(&nu1(0.9)?, &p, &q, &r, mc)?;
    let z = if e1.stderr() > 0.0 {
        e1.value() / e1.stderr()
    } else {
        0.0
    };
    let pass = e2.is_zero() && fails == 0 && z >= 5.0;
    Ok((
        pass,
        format!(
            "nu2 {} with {fails} identity failures, nu1 {:.5} ({z:.1} se above 0)",
            e2.display(),
            e1.value()
        ),
    ))
}

fn c6_slope_identity() -> Outcome {
    let mut rng = substream(DEFAULT_SEED, 6);
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    while draws < 1000 {
        let m0: f64 = rng.gen_range(-1.0..1.0);
        let m1: f64 = rng.gen_range(-1.0..1.0);
        let a: f64 = rng.gen_range(0.01..0.99);
        if (m1 - m0).abs() < 0.05 {
            continue;
        }
        let s = indifference_slope(m0, m1, a)?;
        worst = worst.max((s - (a * m1 + (1.0 - a) * m0)).abs());
        draws += 1;
    }
    Ok((
        worst <= 1e-12,
        format!("{draws} draws with |m1 - m0| >= 0.05, largest error {worst:.2e}"),
    ))
}

fn c7_moment_recovery() -> Outcome {
    let atom =
        |m0: (i64, i64), m1: (i64, i64), w: (i64, i64)| SlopeAtom::new(rat(m0.0, m0.1), rat(m1.0, m1.1), rat(w.0, w.1));
    let laws = [
        SlopeLaw::point_mass(rat(-1, 2), rat(1, 3)),
        SlopeLaw::point_mass(rat(3, 5), rat(-1, 4)),
        SlopeLaw::Finite {
            atoms: vec![
                atom((-1, 2), (1, 4), (1, 4)),
                atom((1, 3), (-1, 5), (1, 4)),
                atom((3, 4), (1, 2), (1, 4)),
                atom((-1, 4), (-3, 4), (1, 4)),
            ],
        },
        SlopeLaw::Finite {
            atoms: vec![atom((-1, 1), (1, 1), (1, 3)), atom((1, 2), (0, 1), (2, 3))],
        },
        SlopeLaw::Finite {
            atoms: vec![
                atom((0, 1), (9, 10), (1, 2)),
                atom((-7, 10), (-1, 10), (3, 10)),
                atom((2, 5), (-4, 5), (1, 5)),
            ],
        },
    ];
    let nodes = default_nodes();
    let (mut worst, mut residual): (f64, f64) = (0.0, 0.0);
    for law in &laws {
        let rec = recover_joint_moments(&AnalyticCdf(law), 4, &nodes, 20_000)?;
        worst = worst.max(rec.table.max_abs_diff(&direct_moments(law, 4)?));
        residual = residual.max(rec.max_residual);
    }
    Ok((
        worst <= 1e-3 && residual <= RESIDUAL_TOL,
        format!(
            "{} laws, i + j <= 4, largest error {worst:.2e}, largest residual {residual:.2e}",
            laws.len()
        ),
    ))
}

fn c8_decomposition() -> Outcome {
    let mut rng = substream(DEFAULT_SEED, 8);
    let mut seen = BTreeSet::new();
    let (mut mismatches, mut double_fires, mut exact_bad) = (0u64, 0u64, 0usize);
    let mut configs = 0u64;
    while configs < 200 || (seen.len() < LeafCase::ALL.len() && configs < 5000) {
        let ev = random_configuration(&mut rng, 4, 12);
        let d = decompose4(&ev)?;
        if !exact_check(&ev, &d)?.ok() || d.max_cell_len() > 3 {
            exact_bad += 1;
        }
        let rep = oracle_validate(&d, &ev, 100_000, DEFAULT_SEED + configs)?;
        mismatches += rep.mismatches;
        double_fires += rep.double_fires;
        seen.extend(d.cases.iter().copied());
        configs += 1;
    }
    let missing: Vec<&str> = LeafCase::ALL
        .iter()
        .filter(|c| !seen.contains(c))
        .map(|c| c.label())
        .collect();
    let pass = mismatches == 0 && double_fires == 0 && exact_bad == 0 && missing.is_empty();
    Ok((
        pass,
        format!(
            "{configs} configurations x 1e5 samples, {mismatches} mismatches, {double_fires} double fires, \
             {exact_bad} exact-check failures, {}/11 leaf cases{}",
            seen.len(),
            if missing.is_empty() {
                String::new()
            } else {
                format!(" (missing {})", missing.join(", "))
            }
        ),
    ))
}

fn table(rows: Vec<(Menu, Vec<(Subset, Rat)>)>) -> Rcc {
    Rcc {
        rows: rows
            .into_iter()
            .map(|(menu, ps)| RccRow {
                menu,
                probs: ps.into_iter().map(|(s, p)| (s, Prob::Exact(p))).collect(),
            })
            .collect(),
        companions: Vec::new(),
    }
}

fn c9_axioms() -> Outcome {
    let mut rng = substream(DEFAULT_SEED, 9);
    let mut failures = 0;
    let mut checks = [0usize; 3];
    let mut sample = None;
    for i in 0..50 {
        let k = rng.gen_range(1..=5);
        let mix = RandomPreference::finite_mixture(random_rieu(&mut rng, k))?;
        let bases: Vec<Menu> = (0..3).map(|j| random_menu(&mut rng, 2 + j, 12)).collect();
        let (menus, comps) = menu_family(&bases, &default_lambdas())?;
        let mut r = rcc_from(&mix, &menus, McConfig::default())?;
        r.companions = comps;
        let reps = [
            check_monotonicity(&r),
            check_extremeness(&r),
            check_stochastic_betweenness(&r, 0.0),
        ];
        for (c, rep) in checks.iter_mut().zip(&reps) {
            *c += rep.checks;
        }
        if !reps.iter().all(|x| x.pass) {
            failures += 1;
        }
        if i == 0 {
            sample = Some(r);
        }
    }

    // Monotonicity: enlarging the menu raises the probability of a kept item.
    let (a, b, c) = (l(rat(1, 2), int(0)), l(int(0), rat(1, 2)), l(rat(1, 4), rat(1, 4)));
    let mono = table(vec![
        (
            Menu::new(vec![a.clone(), b.clone()])?,
            vec![(Subset::singleton(0), rat(1, 4)), (Subset::singleton(1), rat(3, 4))],
        ),
        (
            Menu::new(vec![a.clone(), b.clone(), c.clone()])?,
            vec![(Subset::singleton(0), rat(1, 2)), (Subset::singleton(1), rat(1, 2))],
        ),
    ]);
    // Extremeness: the midpoint of two menu items is chosen.
    let ext = table(vec![(
        Menu::new(vec![
            l(int(0), int(0)),
            l(int(1), int(0)),
            l(rat(1, 2), int(0)),
            l(int(0), int(1)),
        ])?,
        vec![(Subset::singleton(2), rat(1, 2)), (Subset::singleton(3), rat(1, 2))],
    )]);
    // Stochastic betweenness: move all mass of one subset of a companion row elsewhere.
    let mut sb = sample.expect("at least one table");
    let comp = sb.companions[0].clone();
    let row = &mut sb.rows[comp.mixed];
    let (top, mass) = row
        .probs
        .iter()
        .max_by(|x, y| x.1.value().total_cmp(&y.1.value()))
        .map(|(s, p)| (*s, p.clone()))
        .unwrap();
    let other = (0..row.menu.len()).map(Subset::singleton).find(|s| *s != top).unwrap();
    let moved = match (row.probs.get(&other), mass.exact()) {
        (Some(Prob::Exact(x)), Some(m)) => x + m,
        (_, Some(m)) => m.clone(),
        _ => unreachable!("finite mixtures give exact tables"),
    };
    row.probs.insert(top, Prob::Exact(int(0)));
    row.probs.insert(other, Prob::Exact(moved));
    let caught = [
        !check_monotonicity(&mono).pass,
        !check_extremeness(&ext).pass,
        !check_stochastic_betweenness(&sb, 0.0).pass,
    ];

    Ok((
        failures == 0 && caught.iter().all(|x| *x),
        format!(
            "50 mixtures, {failures} failing; checks run M {} / E {} / SB {}; planted violations caught {caught:?}",
            checks[0], checks[1], checks[2]
        ),
    ))
}

fn random_lottery(rng: &mut impl Rng) -> Lottery {
    let x = rng.gen_range(0..=1000);
    let y = rng.gen_range(0..=1000 - x);
    l(rat(x, 1000), rat(y, 1000))
}

fn c10_implicit() -> Outcome {
    let mut rng = substream(DEFAULT_SEED, 10);
    let ranking = PrizeRanking::standard();
    let (mut worst_wu, mut worst_eu): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        // Prizes ordered (W1, W2, W3); W2 is best and W1 worst.
        let mid = rat(rng.gen_range(1..100), 100);
        let scale = rat(rng.gen_range(1..=40), 10);
        let g_mid = rat(rng.gen_range(1..=40), 10);
        // Equal weights on the sure prizes give u(best, v) = 1 and u(worst, v) = 0 after rescaling;
        // without them the local utility describes a different betweenness preference.
        let g = [scale.clone(), scale, g_mid];
        let f = WuFunctional::new([int(0), int(1), mid.clone()], g.clone())?;
        let imp = ImplicitBetweenness::new(
            LocalUtility::Weighted {
                u: [0.0, 1.0, mid.to_f64()],
                g: g.map(|x| x.to_f64()),
            },
            ranking,
        )?;
        let u: [Rat; 3] = [
            rat(rng.gen_range(-20..0), 10),
            rat(rng.gen_range(21..40), 10),
            rat(rng.gen_range(0..=20), 10),
        ];
        let eu = ImplicitBetweenness::new(
            LocalUtility::Eu {
                u: u.clone().map(|x| x.to_f64()),
            },
            ranking,
        )?;
        for _ in 0..50 {
            let p = random_lottery(&mut rng);
            let want = weighted_value(&f, &p)?.to_f64();
            worst_wu = worst_wu.max((implicit_value(&imp, &p, IMPLICIT_TOL)? - want).abs());
            let pr = p.probs(None)?;
            let linear: Rat = (0..3).map(|n| &pr[n] * &u[n]).sum();
            let normalized =
                ((linear - &u[Prize::W1 as usize]) / (&u[Prize::W2 as usize] - &u[Prize::W1 as usize])).to_f64();
            worst_eu = worst_eu.max((implicit_value(&eu, &p, IMPLICIT_TOL)? - normalized).abs());
        }
    }
    Ok((
        worst_wu <= 1e-10 && worst_eu <= 4.0 * f64::EPSILON,
        format!("1000 lotteries, weighted error {worst_wu:.2e}, expected-utility error {worst_eu:.2e} (rounding only)"),
    ))
}

fn c11_eu_identity() -> Outcome {
    let mut rng = substream(DEFAULT_SEED, 11);
    let lambdas = default_lambdas();
    let mut eu_fail = 0;
    for i in 0..10_000 {
        let e = Preference::Eu(random_eu(&mut rng));
        let d = random_menu(&mut rng, 2 + i % 3, 12);
        let d2 = random_menu(&mut rng, 2 + (i / 3) % 3, 12);
        if !eu_joint_identity_check(&e, &d, &d2, &lambdas[i % 3])? {
            eu_fail += 1;
        }
    }
    let mut wu_tries = 0;
    let mut wu_found = false;
    while wu_tries < 10_000 && !wu_found {
        let w = Preference::Wu(random_wu(&mut rng));
        let d = random_menu(&mut rng, 2, 12);
        let d2 = random_menu(&mut rng, 2, 12);
        wu_found = !eu_joint_identity_check(&w, &d, &d2, &lambdas[wu_tries % 3])?;
        wu_tries += 1;
    }
    Ok((
        eu_fail == 0 && wu_found,
        format!("10000 EU draws, {eu_fail} failures; WU counterexample found after {wu_tries} tries: {wu_found}"),
    ))
}

#[test]
fn acceptance_criteria() {
    let mut results = BTreeMap::new();
    let _ = writeln!(std::io::stderr());
    let t = Instant::now();
    results.insert(1, report(1, "example 1 tables agree", t, c1_example1_equivalence()));
    let t = Instant::now();
    results.insert(2, report(2, "example 1 joint choice", t, c2_joint_divergence()));
    let t = Instant::now();
    match ternary_tables() {
        Ok(tern) => {
            results.insert(3, report(3, "example 2 formula", t, c3_example2_formula(&tern)));
            let t = Instant::now();
            results.insert(4, report(4, "circle invariance", t, c4_circle_invariance(&tern)));
        }
        Err(e) => {
            let msg = e.to_string();
            results.insert(3, report(3, "example 2 formula", t, Err(e)));
            results.insert(
                4,
                report(4, "circle invariance", t, Ok((false, format!("no tables: {msg}")))),
            );
        }
    }
    let t = Instant::now();
    results.insert(5, report(5, "independence pattern", t, c5_footnote()));
    let t = Instant::now();
    results.insert(6, report(6, "slope identity", t, c6_slope_identity()));
    let t = Instant::now();
    results.insert(7, report(7, "moment recovery", t, c7_moment_recovery()));
    let t = Instant::now();
    results.insert(8, report(8, "joint-event decomposition", t, c8_decomposition()));
    let t = Instant::now();
    results.insert(9, report(9, "axioms", t, c9_axioms()));
    let t = Instant::now();
    results.insert(10, report(10, "implicit representation", t, c10_implicit()));
    let t = Instant::now();
    results.insert(
        11,
        report(11, "expected-utility mixture identity", t, c11_eu_identity()),
    );

    let failed: Vec<u32> = results.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
    let _ = writeln!(
        std::io::stderr(),
        "acceptance: {} of {} criteria pass",
        results.len() - failed.len(),
        results.len()
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn planted_curved_preference_breaks_stochastic_betweenness() {
    // Parabolic indifference curves are outside the betweenness class.
    let toy = Preference::Custom(CustomValue {
        name: "parabola".into(),
        value: Arc::new(|p: &Point<f64>| p.y - 4.0 * (p.x - 0.25).powi(2)),
    });
    let mix = RandomPreference::finite_mixture(vec![(toy, int(1))]).unwrap();
    let mut rng = substream(DEFAULT_SEED, 12);
    let caught = (0..200).any(|_| {
        let (menus, comps) = menu_family(&[random_menu(&mut rng, 3, 12)], &default_lambdas()).unwrap();
        let mut r = rcc_from(&mix, &menus, McConfig::default()).unwrap();
        r.companions = comps;
        !check_stochastic_betweenness(&r, 0.0).pass
    });
    assert!(caught);
}
