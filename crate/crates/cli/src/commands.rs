use std::collections::BTreeSet;
use std::fmt::Write;

use anyhow::{bail, Context};
use choice_lab::axioms::{
    check_extremeness, check_monotonicity, check_stochastic_betweenness, default_lambdas, discover_companions,
    menu_family,
};
use choice_lab::geometry::{angle_at, Lottery, Menu, Subset};
use choice_lab::identification::{
    default_nodes, direct_moments, recover_joint_moments, AnalyticCdf, SimulatedCdf, SlopeLaw, MAX_ORDER, RESIDUAL_TOL,
};
use choice_lab::io::{
    menus_from_json, rcc_from_json, rcc_to_json, to_json, BinaryEventJson, ChoiceEventJson, DecompositionJson,
    DistributionJson, JointRowJson, LotteryJson, MenuJson, PreferenceJson, RccJson,
};
use choice_lab::joint_choice::oracle::oracle_validate;
use choice_lab::joint_choice::{
    binary_conjunction_prob, exact_check, footnote_counterexample, independence_failures, joint_choice_prob,
    reduce_joint_event_with, BinaryEvent,
};
use choice_lab::montecarlo::{binomial_stderr, substream, McConfig};
use choice_lab::preferences::example1;
use choice_lab::random_utility::{
    mu, mu_prime_weighted, nu1, nu2, random_menu, random_triple, rcc_from, ternary_prob_formula, ChoiceEvent, Prob,
    RandomPreference,
};
use choice_lab::scalar::{format_rat, parse_rat, rat};
use serde_json::{json, Value};

use crate::render::{render_distribution, render_preference};
use crate::report::{read_json, verdict, write, Report};
use crate::{
    CdfMode, CheckAxiomsArgs, DecomposeArgs, Example1Args, Example2Args, Global, IdentifyArgs, RenderArgs,
    SampleRccArgs,
};

/// Largest `|z|` accepted against the closed-form ternary probability.
const Z_MAX: f64 = 4.0;
/// Smallest `estimate / stderr` that counts as strictly positive.
const POSITIVE_Z: f64 = 5.0;

fn lot(l: &Lottery) -> String {
    format!("({}, {})", format_rat(&l.pos.x), format_rat(&l.pos.y))
}

fn menu_text(m: &Menu) -> String {
    m.items().iter().map(lot).collect::<Vec<_>>().join(" ")
}

fn subset_text(s: Subset) -> String {
    let v: Vec<String> = s.indices().map(|i| i.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn prob_json(p: &Prob) -> Value {
    match p {
        Prob::Exact(r) => json!(format_rat(r)),
        Prob::Estimate { value, stderr, samples } => json!({"value": value, "stderr": stderr, "samples": samples}),
    }
}

fn z_score(est: f64, target: f64, se: f64) -> f64 {
    if se > 0.0 {
        (est - target).abs() / se
    } else if est == target {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn example1(g: &Global, a: &Example1Args) -> anyhow::Result<Report> {
    if a.menus == 0 {
        bail!("--menus must be positive");
    }
    if !(2..=8).contains(&a.max_size) {
        bail!("--max-size must lie in 2..=8");
    }
    if a.den < 4 {
        bail!("--den must be at least 4");
    }
    let w = parse_rat(&a.mu_prime_weight)?;
    let m = mu();
    let mp = mu_prime_weighted(w.clone()).context("building μ′")?;
    let mut rng = substream(g.seed, 0);
    let span = a.max_size - 1;
    let menus: Vec<Menu> = (0..a.menus)
        .map(|i| random_menu(&mut rng, 2 + i % span, a.den))
        .collect();
    let mc = McConfig::new(1, g.seed);
    let ta = rcc_from(&m, &menus, mc)?;
    let tb = rcc_from(&mp, &menus, mc)?;

    let mut diffs = Vec::new();
    let mut csv = String::from("menu,items,subset,mu,mu_prime\n");
    for (i, (x, y)) in ta.rows.iter().zip(&tb.rows).enumerate() {
        let subs: BTreeSet<Subset> = x.probs.keys().chain(y.probs.keys()).copied().collect();
        for s in subs {
            let (px, py) = (x.prob(s), y.prob(s));
            let _ = writeln!(
                csv,
                "{i},{},{},{},{}",
                menu_text(&x.menu),
                s.indices().map(|k| k.to_string()).collect::<Vec<_>>().join("|"),
                px.display(),
                py.display()
            );
            if px != py {
                diffs.push((i, s, px, py));
            }
        }
    }
    let bad_menus: BTreeSet<usize> = diffs.iter().map(|d| d.0).collect();

    let [p, q, pp, qq] = example1::joint_lotteries();
    let events = vec![
        ChoiceEvent::new(Menu::new(vec![p, q])?, Subset::singleton(0))?,
        ChoiceEvent::new(Menu::new(vec![pp, qq])?, Subset::singleton(0))?,
    ];
    let ja = joint_choice_prob(&m, &events, mc)?;
    let jb = joint_choice_prob(&mp, &events, mc)?;
    let joint_ok = ja == Prob::Exact(rat(0, 1)) && jb == Prob::Exact(rat(1, 2));
    let pass = diffs.is_empty() && joint_ok;

    let mut md = String::from("# Example 1: equal choice tables, different joint choices\n\n");
    let _ = writeln!(
        md,
        "Menus: {} random menus of sizes 2 to {}, grid 1/{}, seed {}.",
        a.menus, a.max_size, a.den, g.seed
    );
    let _ = writeln!(
        md,
        "Weights of μ′: {}, {}.\n",
        format_rat(&w),
        format_rat(&(rat(1, 1) - &w))
    );
    if diffs.is_empty() {
        let _ = writeln!(md, "marginals: EQUAL (exact)");
    } else {
        let _ = writeln!(md, "marginals: DIFFER on {} of {} menus", bad_menus.len(), a.menus);
    }
    let _ = writeln!(md, "joint({{p,q}},{{p′,q′}}): {} vs {}", ja.display(), jb.display());
    if !diffs.is_empty() {
        md.push_str("\n| menu | items | subset | μ | μ′ |\n|---|---|---|---|---|\n");
        for (i, s, x, y) in diffs.iter().take(10) {
            let _ = writeln!(
                md,
                "| {i} | {} | {} | {} | {} |",
                menu_text(&menus[*i]),
                subset_text(*s),
                x.display(),
                y.display()
            );
        }
    }
    let _ = writeln!(md, "\nResult: {}", verdict(pass));

    let json = json!({
        "command": "example1",
        "seed": g.seed,
        "menus": a.menus,
        "max_size": a.max_size,
        "den": a.den,
        "mu_prime_weight": format_rat(&w),
        "marginals_equal": diffs.is_empty(),
        "mismatched_menus": bad_menus.len(),
        "mismatches": diffs.iter().take(20).map(|(i, s, x, y)| json!({
            "menu": i,
            "subset": s.indices().collect::<Vec<_>>(),
            "mu": prob_json(x),
            "mu_prime": prob_json(y),
        })).collect::<Vec<_>>(),
        "joint": {
            "events": events.iter().map(ChoiceEventJson::from_event).collect::<Vec<_>>(),
            "mu": prob_json(&ja),
            "mu_prime": prob_json(&jb),
        },
        "pass": pass,
    });
    if let Some(path) = &a.csv {
        write(path, &csv)?;
    }
    if let Some(path) = &g.out {
        write(path, &md)?;
    }
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

pub fn example2(g: &Global, a: &Example2Args) -> anyhow::Result<Report> {
    if a.n < 10_000 {
        bail!("--n must be at least 10000");
    }
    if a.radii.is_empty() || a.triples == 0 {
        bail!("need at least one radius and one triple");
    }
    let mut rng = substream(g.seed, 0);
    let triples: Vec<[Lottery; 3]> = (0..a.triples).map(|_| random_triple(&mut rng, a.den)).collect();
    let menus: Vec<Menu> = triples
        .iter()
        .map(|t| Menu::new(t.to_vec()))
        .collect::<Result<_, _>>()?;
    let mut dists: Vec<(String, Option<f64>, RandomPreference)> = Vec::new();
    for r in &a.radii {
        dists.push((format!("nu1(r={r})"), Some(*r), nu1(*r)?));
    }
    dists.push(("nu2".into(), None, nu2()));
    let tables = dists
        .iter()
        .enumerate()
        .map(|(k, (_, _, d))| rcc_from(d, &menus, McConfig::new(a.n, g.seed.wrapping_add(1 + k as u64))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut md = String::from("# Example 2: random weighted utility versus random expected utility\n\n");
    let _ = writeln!(
        md,
        "{} ternary menus on the grid 1/{}, {} samples per distribution, seed {}.\n",
        a.triples, a.den, a.n, g.seed
    );
    md.push_str("| menu | α (deg) | ½(1−α/180) |");
    for (name, _, _) in &dists {
        let _ = write!(md, " {name} | z |");
    }
    md.push_str("\n|---|---|---|");
    md.push_str(&"---|---|".repeat(dists.len()));
    md.push('\n');

    let mut csv = String::from("triple,p,q,r,alpha,formula,distribution,estimate,stderr,z\n");
    let mut rows = Vec::new();
    let mut z_max: f64 = 0.0;
    for (t, tri) in triples.iter().enumerate() {
        let f = ternary_prob_formula(&tri[0], &tri[1], &tri[2])?;
        let alpha = angle_at(&tri[0].pos, &tri[1].pos, &tri[2].pos)?;
        let _ = write!(md, "| {} | {alpha:.3} | {f:.5} |", menu_text(&menus[t]));
        let mut ests = Vec::new();
        for ((name, _, _), tab) in dists.iter().zip(&tables) {
            let est = tab.rows[t].prob(Subset::singleton(0)).value();
            let se = binomial_stderr(est, a.n);
            let z = z_score(est, f, se);
            z_max = z_max.max(z);
            let _ = write!(md, " {est:.5} | {z:.2} |");
            let _ = writeln!(
                csv,
                "{t},{},{},{},{alpha},{f},{name},{est},{se},{z}",
                lot(&tri[0]).replace(", ", " "),
                lot(&tri[1]).replace(", ", " "),
                lot(&tri[2]).replace(", ", " ")
            );
            ests.push(json!({"distribution": name, "estimate": est, "stderr": se, "z": z}));
        }
        md.push('\n');
        rows.push(json!({
            "menu": tri.iter().map(LotteryJson::from_lottery).collect::<Vec<_>>(),
            "alpha": alpha,
            "formula": f,
            "estimates": ests,
        }));
    }
    let formula_ok = z_max <= Z_MAX;

    // Choice probabilities must not depend on the circle.
    let mut inv_checks = 0usize;
    let mut inv_fail = 0usize;
    let mut inv_max: f64 = 0.0;
    let circles: Vec<usize> = (0..dists.len()).filter(|&k| dists[k].1.is_some()).collect();
    for (x, &i) in circles.iter().enumerate() {
        for &j in &circles[x + 1..] {
            for t in 0..triples.len() {
                for s in 0..3 {
                    let (u, v) = (
                        tables[i].rows[t].prob(Subset::singleton(s)),
                        tables[j].rows[t].prob(Subset::singleton(s)),
                    );
                    let se = (u.stderr().powi(2) + v.stderr().powi(2)).sqrt();
                    let z = z_score(u.value(), v.value(), se);
                    inv_checks += 1;
                    inv_max = inv_max.max(z);
                    if z > Z_MAX {
                        inv_fail += 1;
                    }
                }
            }
        }
    }

    let (fp, fq, fr) = footnote_triple();
    let fmc = McConfig::new(a.n, g.seed.wrapping_add(1000));
    let f2 = footnote_counterexample(&nu2(), &fp, &fq, &fr, fmc)?;
    let f2_fail = independence_failures(&nu2(), &fp, &fq, &fr, fmc)?;
    let mut foot_ok = f2.is_zero() && f2_fail == 0;
    let mut f1 = Vec::new();
    for (name, r, d) in &dists {
        if r.is_none() {
            continue;
        }
        let e = footnote_counterexample(d, &fp, &fq, &fr, fmc)?;
        let z = if e.stderr() > 0.0 { e.value() / e.stderr() } else { 0.0 };
        foot_ok &= z >= POSITIVE_Z;
        f1.push((name.clone(), e, z));
    }
    let pass = formula_ok && inv_fail == 0 && foot_ok;

    let _ = writeln!(md, "\nLargest z against the formula: {z_max:.3} (limit {Z_MAX}).");
    let _ = writeln!(
        md,
        "Circle invariance: {inv_checks} comparisons, {inv_fail} beyond {Z_MAX} combined standard errors (largest {inv_max:.3})."
    );
    let _ = writeln!(
        md,
        "Independence pattern with p = {}, q = {}, r = {}:",
        lot(&fp),
        lot(&fq),
        lot(&fr)
    );
    let _ = writeln!(md, "- nu2: {} ({} samples break independence)", f2.display(), f2_fail);
    for (name, e, z) in &f1 {
        let _ = writeln!(md, "- {name}: {} ({z:.1} standard errors above 0)", e.display());
    }
    let _ = writeln!(md, "\nResult: {}", verdict(pass));

    let json = json!({
        "command": "example2",
        "seed": g.seed,
        "samples": a.n,
        "radii": a.radii,
        "den": a.den,
        "triples": rows,
        "z_max": z_max,
        "formula_pass": formula_ok,
        "circle_invariance": {"checks": inv_checks, "failures": inv_fail, "max_z": inv_max},
        "footnote": {
            "p": LotteryJson::from_lottery(&fp),
            "q": LotteryJson::from_lottery(&fq),
            "r": LotteryJson::from_lottery(&fr),
            "nu2": {"prob": prob_json(&f2), "independence_failures": f2_fail},
            "nu1": f1.iter().map(|(n, e, z)| json!({"distribution": n, "prob": prob_json(e), "z": z})).collect::<Vec<_>>(),
            "pass": foot_ok,
        },
        "pass": pass,
    });
    if let Some(path) = &a.csv {
        write(path, &csv)?;
    }
    if let Some(path) = &g.out {
        write(path, &md)?;
    }
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

/// Lotteries of the independence counterexample.
pub fn footnote_triple() -> (Lottery, Lottery, Lottery) {
    let l = |a, b, c, d| Lottery::mm(rat(a, b), rat(c, d)).expect("valid lottery");
    (l(1, 10, 1, 5), l(1, 2, 1, 5), l(1, 10, 4, 5))
}

pub fn identify_moments(g: &Global, a: &IdentifyArgs) -> anyhow::Result<Report> {
    let law: SlopeLaw = read_json(&a.law)?;
    law.validate()?;
    if a.order == 0 || a.order > MAX_ORDER {
        bail!("--order must lie in 1..={MAX_ORDER}");
    }
    let nodes = default_nodes();
    let rec = match a.mode {
        CdfMode::Analytic => recover_joint_moments(&AnalyticCdf(&law), a.order, &nodes, a.grid)?,
        CdfMode::Simulated => {
            let sim = SimulatedCdf::new(law.clone(), McConfig::new(a.n, g.seed))?;
            recover_joint_moments(&sim, a.order, &nodes, a.grid)?
        }
    };
    let direct = direct_moments(&law, a.order)?;
    let tol = a.tol.unwrap_or(match a.mode {
        CdfMode::Analytic => 1e-3,
        CdfMode::Simulated => 5e-2,
    });
    let mut csv = String::from("i,j,recovered,direct,abs_err\n");
    let mut md = String::from("# Joint slope moments from CDF queries\n\n");
    let _ = writeln!(
        md,
        "Mode {:?}, order {}, grid {}, seed {}.\n\n| i | j | recovered | direct | abs_err |\n|---|---|---|---|---|",
        a.mode, a.order, a.grid, g.seed
    );
    let mut entries = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 0..=a.order {
        for j in 0..=n {
            let i = n - j;
            let r = rec.table.get(i, j).context("missing recovered moment")?;
            let d = direct.get(i, j).context("missing direct moment")?;
            let err = (r - d).abs();
            worst = worst.max(err);
            let _ = writeln!(csv, "{i},{j},{r},{d},{err:e}");
            let _ = writeln!(md, "| {i} | {j} | {r:.8} | {d:.8} | {err:.2e} |");
            entries.push(json!({"i": i, "j": j, "recovered": r, "direct": d, "abs_err": err}));
        }
    }
    let residual_ok = a.mode == CdfMode::Simulated || rec.max_residual <= RESIDUAL_TOL;
    let pass = worst <= tol && residual_ok;
    let _ = writeln!(
        md,
        "\nLargest error {worst:.3e} (tolerance {tol:e}); largest Vandermonde residual {:.3e}.\n\nResult: {}",
        rec.max_residual,
        verdict(pass)
    );
    let json = json!({
        "command": "identify-moments",
        "seed": g.seed,
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "order": a.order,
        "grid": a.grid,
        "nodes": nodes.iter().map(format_rat).collect::<Vec<_>>(),
        "moments": entries,
        "max_abs_err": worst,
        "tolerance": tol,
        "max_residual": rec.max_residual,
        "conditioning_warning": rec.conditioning_warning,
        "pass": pass,
    });
    if let Some(path) = &g.out {
        write(path, &csv)?;
    }
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

pub fn check_axioms(g: &Global, a: &CheckAxiomsArgs) -> anyhow::Result<Report> {
    let rows: RccJson = read_json(&a.rcc)?;
    let mut rcc = rcc_from_json(&rows)?;
    rcc.companions = discover_companions(&rcc);
    let reports = vec![
        check_monotonicity(&rcc),
        check_extremeness(&rcc),
        check_stochastic_betweenness(&rcc, a.tol),
    ];
    let pass = reports.iter().all(|r| r.pass);
    let note = "These axioms are necessary conditions only: passing them does not show that the table is rationalizable by a random betweenness preference.";
    let mut md = String::from("# Axiom checks\n\n");
    let _ = writeln!(
        md,
        "{} menus, {} companion pairs found.\n\n| axiom | result | checks | skipped | violations |\n|---|---|---|---|---|",
        rcc.rows.len(),
        rcc.companions.len()
    );
    for r in &reports {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} |",
            r.axiom,
            verdict(r.pass),
            r.checks,
            r.skipped,
            r.violations.len()
        );
    }
    for r in reports.iter().filter(|r| !r.pass) {
        let _ = writeln!(md, "\n{} violations:", r.axiom);
        for v in r.violations.iter().take(10) {
            let other = v.other_menu.map(|m| format!(" / menu {m}")).unwrap_or_default();
            let _ = writeln!(md, "- menu {}{other}, subset {:?}: {}", v.menu, v.subset, v.detail);
        }
    }
    let _ = writeln!(md, "\n{note}\n\nResult: {}", verdict(pass));
    let json = json!({
        "command": "check-axioms",
        "menus": rcc.rows.len(),
        "companions": rcc.companions.len(),
        "axioms": reports,
        "note": note,
        "pass": pass,
    });
    if let Some(path) = &g.out {
        write(path, &md)?;
    }
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

pub fn decompose_joint(g: &Global, a: &DecomposeArgs) -> anyhow::Result<Report> {
    let ev_json: Vec<BinaryEventJson> = read_json(&a.events)?;
    let events: Vec<BinaryEvent> = choice_lab::io::events_from_json(&ev_json)?;
    let d = reduce_joint_event_with(&events, a.max_depth)?;
    let exact = exact_check(&events, &d)?;
    let oracle = if a.validate > 0 {
        Some(oracle_validate(&d, &events, a.validate, g.seed)?)
    } else {
        None
    };
    let pass = exact.ok() && oracle.as_ref().map_or(true, |o| o.ok()) && d.max_cell_len() <= 3;

    let mut md = String::from("# Joint-event decomposition\n\n");
    let cases: Vec<&str> = d.cases.iter().map(|c| c.label()).collect();
    let _ = writeln!(
        md,
        "{} input events, {} cells, largest cell {}.\nLeaf cases: {}.\nFan fallback used: {}.\n",
        events.len(),
        d.cells.len(),
        d.max_cell_len(),
        if cases.is_empty() {
            "none".to_string()
        } else {
            cases.join(", ")
        },
        d.fallback_used
    );
    let _ = writeln!(
        md,
        "Exact check: {} faces, {} mismatches, {} multiple fires.",
        exact.faces, exact.mismatches, exact.multi_fires
    );
    if let Some(o) = &oracle {
        let _ = writeln!(
            md,
            "Oracle: {} samples, {} inside, {} mismatches, {} double fires, {} near ties skipped.",
            o.samples, o.inside, o.mismatches, o.double_fires, o.skipped_ties
        );
    }
    md.push_str("\nCells:\n");
    for (k, c) in d.cells.iter().enumerate() {
        let parts: Vec<String> = c.events.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(md, "{}. {}", k + 1, parts.join(" and "));
    }

    let mut table_json = None;
    if let Some(path) = &a.dist {
        let dj: DistributionJson = read_json(path)?;
        let mu = dj.to_distribution()?;
        let mc = McConfig::new(a.samples, g.seed.wrapping_add(1));
        let row = |evs: &[BinaryEvent]| -> anyhow::Result<JointRowJson> {
            let p = binary_conjunction_prob(&mu, evs, mc)?;
            Ok(JointRowJson::new(
                evs.iter().map(ChoiceEventJson::from_binary).collect(),
                &p,
            ))
        };
        let mut rows = vec![row(&events)?];
        for c in &d.cells {
            rows.push(row(&c.events)?);
        }
        let total: f64 = rows[1..]
            .iter()
            .map(|r| r.prob().map(|p| p.value()).unwrap_or(f64::NAN))
            .sum();
        let _ = writeln!(
            md,
            "\nJoint probability of the input: {}; sum over cells: {total:.6}.",
            rows[0].prob()?.display()
        );
        if let Some(t) = &a.table {
            write(t, &to_json(&rows)?)?;
        }
        table_json = Some(json!({"rows": rows, "cell_sum": total}));
    }
    let _ = writeln!(md, "\nResult: {}", verdict(pass));

    let dj = DecompositionJson::from_decomposition(&d);
    if let Some(path) = &g.out {
        write(path, &to_json(&dj)?)?;
    }
    let json = json!({
        "command": "decompose-joint",
        "seed": g.seed,
        "events": ev_json,
        "decomposition": dj,
        "exact_check": exact,
        "oracle": oracle,
        "joint_table": table_json,
        "pass": pass,
    });
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

pub fn sample_rcc(g: &Global, a: &SampleRccArgs) -> anyhow::Result<Report> {
    let dj: DistributionJson = read_json(&a.dist)?;
    let mu = dj.to_distribution()?;
    let menus_json: Vec<MenuJson> = read_json(&a.menus)?;
    let mut menus = menus_from_json(&menus_json)?;
    if a.family {
        menus = menu_family(&menus, &default_lambdas())?.0;
    }
    if a.n == 0 {
        bail!("--n must be positive");
    }
    let rcc = rcc_from(&mu, &menus, McConfig::new(a.n, g.seed))?;
    let pass = rcc.validate().is_ok();
    let table = rcc_to_json(&rcc);
    let mut md = String::from("# Random choice table\n\n");
    let _ = writeln!(
        md,
        "{} menus, {}.\n",
        menus.len(),
        if mu.is_exact() {
            "exact".to_string()
        } else {
            format!("{} samples, seed {}", a.n, g.seed)
        }
    );
    for row in &rcc.rows {
        let _ = writeln!(md, "Menu {}:", menu_text(&row.menu));
        for (s, p) in &row.probs {
            let _ = writeln!(md, "- {}: {}", subset_text(*s), p.display());
        }
    }
    let _ = writeln!(md, "\nResult: {}", verdict(pass));
    if let Some(path) = &g.out {
        write(path, &to_json(&table)?)?;
    }
    let json = json!({
        "command": "sample-rcc",
        "seed": g.seed,
        "exact": mu.is_exact(),
        "samples": if mu.is_exact() { None } else { Some(a.n) },
        "table": table,
        "pass": pass,
    });
    Ok(Report {
        pass,
        markdown: md,
        json,
    })
}

pub fn render(g: &Global, a: &RenderArgs) -> anyhow::Result<Report> {
    let Some(out) = &g.out else {
        bail!("render needs --out <file.svg>");
    };
    let spec: Value = read_json(&a.spec)?;
    let (kind, (svg, s)) = if let Ok(p) = serde_json::from_value::<PreferenceJson>(spec.clone()) {
        ("preference", render_preference(&p.to_preference()?, a.grid)?)
    } else {
        let d: DistributionJson =
            serde_json::from_value(spec).context("spec is neither a preference nor a distribution")?;
        (
            "distribution",
            render_distribution(&d.to_distribution()?, a.grid, a.pivots, g.seed)?,
        )
    };
    write(out, &svg)?;
    let md = format!(
        "# Render\n\n{kind}: {} indifference lines, {} arrows, {} pivots, {} sampled marks, {} off view.\nWrote {}.\n",
        s.lines,
        s.arrows,
        s.pivots,
        s.sampled,
        s.off_view,
        out.display()
    );
    let json = json!({
        "command": "render",
        "seed": g.seed,
        "kind": kind,
        "lines": s.lines,
        "arrows": s.arrows,
        "pivots": s.pivots,
        "sampled": s.sampled,
        "off_view": s.off_view,
        "pass": true,
    });
    Ok(Report {
        pass: true,
        markdown: md,
        json,
    })
}
