//! Case analysis splitting a conjunction of four or more binary
//! weighted-utility events into cells of at most three events.
//!
//! Each event is an open half-space of preference rays (see [`super::cone`]).
//! Cases are chosen from the shape of `P⁺ = ∩ H_i⁺`, the clockwise pivot
//! region, and realized by cutting with auxiliary lines through lotteries.
//! Every constructed split is checked exactly on the face arrangement before
//! it is accepted; when a case's preconditions fail, a fan of cuts through a
//! point of the simplex is used instead and the result is flagged.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::cone::{
    chord, extreme_rays, face_samples, facet_indices, in_closed_simplex, in_open_simplex, line_at_infinity,
    open_cone_witness, parallel, simplex_edges, V3,
};
use super::{BinaryEvent, Cell, Decomposition, LeafCase, Relation, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};
use crate::geometry::{Lottery, Point};
use crate::scalar::{rat, Rat};

#[derive(Clone, Debug)]
enum Src {
    Event {
        idx: usize,
        neg: bool,
    },
    /// `r ≿ s`.
    Aux {
        r: Lottery,
        s: Lottery,
    },
}

#[derive(Clone, Debug)]
struct Con {
    w: V3,
    src: Src,
}

impl Con {
    fn negate(&self) -> Con {
        let src = match &self.src {
            Src::Event { idx, neg } => Src::Event { idx: *idx, neg: !neg },
            Src::Aux { r, s } => Src::Aux {
                r: s.clone(),
                s: r.clone(),
            },
        };
        Con { w: self.w.neg(), src }
    }

    fn points<'a>(&'a self, events: &'a [BinaryEvent]) -> (&'a Lottery, &'a Lottery) {
        match &self.src {
            Src::Event { idx, .. } => (&events[*idx].p, &events[*idx].q),
            Src::Aux { r, s } => (r, s),
        }
    }
}

type Cells = Vec<Vec<Con>>;

enum Plan {
    Trivial(LeafCase),
    Cuts(LeafCase, Vec<Con>),
    Mirror,
    Fallback(String),
}

struct Ctx<'a> {
    events: &'a [BinaryEvent],
    max_depth: usize,
    trace: Vec<String>,
    cases: Vec<LeafCase>,
    witnesses: Vec<(Lottery, Lottery)>,
    fallback: bool,
}

fn half() -> Rat {
    rat(1, 2)
}

fn midpoint(a: &Point<Rat>, b: &Point<Rat>) -> Point<Rat> {
    Point::new((&a.x + &b.x) * half(), (&a.y + &b.y) * half())
}

fn lottery(p: Point<Rat>) -> Lottery {
    Lottery::mm(p.x, p.y).expect("point lies in the simplex")
}

/// Sign of `w` at a finite homogeneous point, as an affine half-plane test.
fn side(w: &V3, v: &V3) -> i8 {
    let s = w.sign_dot(v);
    if v.0[2].is_negative() {
        -s
    } else {
        s
    }
}

/// Auxiliary constraint on the line `n` with the same positive side, built
/// from two lotteries on the chord of `n` through the simplex. `anchor`, if
/// given, is used as `r`; otherwise `r` is the chord midpoint.
fn aux_con(n: &V3, anchor: Option<&Point<Rat>>) -> Option<Con> {
    if n.is_zero() {
        return None;
    }
    let (a, b) = chord(n)?;
    let m = midpoint(&a, &b);
    if !in_open_simplex(&V3::from_point(&m)) {
        return None;
    }
    let (r, s) = match anchor {
        Some(r) => {
            let rv = V3::from_point(r);
            if !n.dot(&rv).is_zero() || !in_closed_simplex(&rv) {
                return None;
            }
            let s = if m != *r { m } else { midpoint(&m, &a) };
            (r.clone(), s)
        }
        None => {
            let s = midpoint(&m, &a);
            (m, s)
        }
    };
    let mut w = V3::from_point(&r).cross(&V3::from_point(&s)).reduced();
    let (mut r, mut s) = (r, s);
    let k = (0..3).find(|&k| !n.0[k].is_zero())?;
    if w.0[k].is_positive() != n.0[k].is_positive() {
        w = w.neg();
        std::mem::swap(&mut r, &mut s);
    }
    Some(Con {
        w,
        src: Src::Aux {
            r: lottery(r),
            s: lottery(s),
        },
    })
}

fn weights(cons: &[Con]) -> Vec<V3> {
    cons.iter().map(|c| c.w.clone()).collect()
}

/// Facet constraints of the cone, `None` if it is empty.
fn facets(cons: &[Con]) -> Option<Vec<Con>> {
    facet_indices(&weights(cons)).map(|ix| ix.into_iter().map(|i| cons[i].clone()).collect())
}

/// Drops repeated constraints; `None` if two are opposite.
fn dedupe(cons: Vec<Con>) -> Option<Vec<Con>> {
    let mut out: Vec<Con> = Vec::new();
    for c in cons {
        let k = c.w.reduced();
        if out.iter().any(|o| o.w.reduced() == k.neg()) {
            return None;
        }
        if !out.iter().any(|o| o.w.reduced() == k) {
            out.push(c);
        }
    }
    Some(out)
}

/// Exact comparison of a cone with a union of cells on every face of the
/// arrangement of all lines involved, skipping pivots inside the simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactCheck {
    pub faces: usize,
    pub mismatches: usize,
    pub multi_fires: usize,
}

impl ExactCheck {
    pub fn ok(&self) -> bool {
        self.mismatches == 0 && self.multi_fires == 0
    }
}

fn check_vectors(input: &[V3], cells: &[Vec<V3>]) -> ExactCheck {
    let mut planes: Vec<V3> = input.to_vec();
    for c in cells {
        planes.extend(c.iter().cloned());
    }
    planes.extend(simplex_edges());
    planes.push(line_at_infinity());
    let mut seen = std::collections::HashSet::new();
    let mut out = ExactCheck {
        faces: 0,
        mismatches: 0,
        multi_fires: 0,
    };
    for z in face_samples(&planes) {
        if planes.iter().any(|w| w.dot(&z).is_zero()) || in_open_simplex(&z) {
            continue;
        }
        if !seen.insert(z.clone()) {
            continue;
        }
        out.faces += 1;
        let inside = input.iter().all(|w| w.dot(&z).is_positive());
        let fired = cells
            .iter()
            .filter(|c| c.iter().all(|w| w.dot(&z).is_positive()))
            .count();
        if fired > 1 {
            out.multi_fires += 1;
        }
        if inside != (fired >= 1) {
            out.mismatches += 1;
        }
    }
    out
}

fn check_cells(input: &[Con], cells: &Cells) -> ExactCheck {
    let cv: Vec<Vec<V3>> = cells.iter().map(|c| weights(c)).collect();
    check_vectors(&weights(input), &cv)
}

fn event_weight(e: &BinaryEvent) -> Result<V3> {
    match e.relation {
        Relation::Succ | Relation::Succeq => {}
        Relation::Indiff => {
            return Err(Error::Unsupported(
                "indifference events are lines, not half-spaces".into(),
            ))
        }
    }
    let e = e.to_mm()?;
    Ok(V3::from_point(&e.p.pos).cross(&V3::from_point(&e.q.pos)).reduced())
}

/// Exact check of a decomposition against its input conjunction.
pub fn exact_check(events: &[BinaryEvent], d: &Decomposition) -> Result<ExactCheck> {
    let input: Vec<V3> = events.iter().map(event_weight).collect::<Result<_>>()?;
    let cells: Vec<Vec<V3>> = d
        .cells
        .iter()
        .map(|c| c.events.iter().map(event_weight).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(check_vectors(&input, &cells))
}

impl<'a> Ctx<'a> {
    fn reduce(&mut self, cons: Vec<Con>, depth: usize) -> Result<Cells> {
        if depth > self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let Some(cons) = dedupe(cons) else {
            self.trace.push("opposite events on one line: empty".into());
            return Ok(Vec::new());
        };
        if facet_indices(&weights(&cons)).is_none() {
            return Ok(Vec::new());
        }
        if cons.len() <= 3 {
            return Ok(vec![cons]);
        }
        if cons.len() == 4 {
            return self.dispatch4(cons, depth, true);
        }
        let f = facets(&cons).expect("nonempty");
        if f.len() <= 3 {
            return Ok(vec![f]);
        }
        if f.len() == 4 {
            return self.dispatch4(f, depth, true);
        }
        self.trace.push(format!("{} facets: split the first four", f.len()));
        let (head, rest) = f.split_at(4);
        let first = self.dispatch4(head.to_vec(), depth + 1, true)?;
        let mut out = Vec::new();
        for mut cell in first {
            cell.extend(rest.iter().cloned());
            out.extend(self.reduce(cell, depth + 1)?);
        }
        Ok(out)
    }

    fn dispatch4(&mut self, cons: Vec<Con>, depth: usize, allow_mirror: bool) -> Result<Cells> {
        if depth > self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let Some(k) = facets(&cons) else {
            return Ok(Vec::new());
        };
        let mut plus = weights(&cons);
        plus.push(line_at_infinity());
        if open_cone_witness(&plus).is_none() {
            self.trace.push("re-sign: clockwise region empty".into());
            let neg: Vec<Con> = cons.iter().map(Con::negate).collect();
            let cells = self.dispatch4(neg, depth + 1, allow_mirror)?;
            return Ok(negate_cells(cells));
        }
        let plan = self.classify(&cons);
        let mark = (self.cases.len(), self.witnesses.len());
        match plan {
            Plan::Trivial(leaf) => {
                if k.len() <= 3 {
                    self.trace.push(format!("case {}: single cell", leaf.label()));
                    self.cases.push(leaf);
                    Ok(vec![k])
                } else {
                    self.fallback(cons, depth, format!("case {} leaves {} facets", leaf.label(), k.len()))
                }
            }
            Plan::Cuts(leaf, cuts) => {
                self.trace
                    .push(format!("case {}: {} auxiliary cut(s)", leaf.label(), cuts.len()));
                let cells = self.refine(cons.clone(), &cuts, depth + 1)?;
                if check_cells(&cons, &cells).ok() {
                    self.cases.push(leaf);
                    Ok(cells)
                } else {
                    self.cases.truncate(mark.0);
                    self.witnesses.truncate(mark.1);
                    self.fallback(
                        cons,
                        depth,
                        format!("case {} construction failed the exact check", leaf.label()),
                    )
                }
            }
            Plan::Mirror => {
                if !allow_mirror {
                    return self.fallback(cons, depth, "case 4-3 reached twice".into());
                }
                self.trace
                    .push("case 4-3: counterclockwise region has two faces, back to case 2".into());
                let neg: Vec<Con> = cons.iter().map(Con::negate).collect();
                let cells = self.dispatch4(neg, depth + 1, false)?;
                Ok(negate_cells(cells))
            }
            Plan::Fallback(why) => self.fallback(cons, depth, why),
        }
    }

    fn classify(&self, cons: &[Con]) -> Plan {
        let ws = weights(cons);
        let mut kp = ws.clone();
        kp.push(line_at_infinity());
        let fidx = facet_indices(&kp).expect("clockwise region nonempty");
        let faces: Vec<usize> = fidx.iter().copied().filter(|&i| i < 4).collect();
        let normals: Vec<V3> = fidx.iter().map(|&i| kp[i].clone()).collect();
        let rays = extreme_rays(&normals);
        let bounded = !rays.is_empty() && rays.iter().all(|r| r.0[2].is_positive());
        let adjacent = |i: usize, j: usize| {
            rays.iter()
                .any(|r| r.0[2].is_positive() && ws[i].dot(r).is_zero() && ws[j].dot(r).is_zero())
        };
        let others: Vec<usize> = (0..4).filter(|i| !faces.contains(i)).collect();
        let meet = |i: usize, j: usize| ws[i].cross(&ws[j]);
        let pts = |i: usize| {
            let (p, q) = cons[i].points(self.events);
            (
                V3::from_point(&p.pos),
                V3::from_point(&q.pos),
                p.pos.clone(),
                q.pos.clone(),
            )
        };
        match faces.len() {
            1 => Plan::Trivial(LeafCase::C1),
            2 => {
                let (i, j) = (faces[0], faces[1]);
                let (k, l) = (others[0], others[1]);
                if parallel(&ws[i], &ws[j]) {
                    return Plan::Trivial(LeafCase::C2_1);
                }
                if parallel(&ws[k], &ws[l]) {
                    return Plan::Trivial(LeafCase::C2_2);
                }
                let a = meet(i, j);
                let b = meet(k, l);
                let b_in = side(&ws[i], &b) < 0 && side(&ws[j], &b) < 0;
                if in_open_simplex(&a) {
                    if !b_in {
                        return Plan::Trivial(LeafCase::C2_3);
                    }
                    let ap = a.to_point().expect("finite");
                    match aux_con(&a.cross(&b), Some(&ap)) {
                        Some(c) => Plan::Cuts(LeafCase::C2_3, vec![c]),
                        None => Plan::Fallback("case 2-3: line through both apexes misses the simplex".into()),
                    }
                } else {
                    if !b_in {
                        return Plan::Trivial(LeafCase::C2_4);
                    }
                    for (one, two) in [(i, j), (j, i)] {
                        let (pv, qv, p, q) = pts(two);
                        if side(&ws[one], &pv) > 0 && side(&ws[one], &qv) > 0 {
                            let r = midpoint(&p, &q);
                            let rv = V3::from_point(&r);
                            let c5 = aux_con(&rv.cross(&ws[one].line_direction()), Some(&r));
                            let c6 = aux_con(&rv.cross(&b), Some(&r));
                            if let (Some(c5), Some(c6)) = (c5, c6) {
                                return Plan::Cuts(LeafCase::C2_4, vec![c5, c6]);
                            }
                        }
                    }
                    Plan::Fallback("case 2-4: no face pair lies on one side of the other".into())
                }
            }
            3 => {
                if bounded {
                    return Plan::Trivial(LeafCase::C3_1);
                }
                let Some(&c2) = faces
                    .iter()
                    .find(|&&f| faces.iter().filter(|&&g| g != f).all(|&g| adjacent(f, g)))
                else {
                    return Plan::Fallback("case 3: no middle face".into());
                };
                let ends: Vec<usize> = faces.iter().copied().filter(|&f| f != c2).collect();
                let (c1, c3) = (ends[0], ends[1]);
                let l4 = others[0];
                if parallel(&ws[c1], &ws[c3]) {
                    return Plan::Trivial(LeafCase::C3_1);
                }
                let c13 = meet(c1, c3);
                if side(&ws[c2], &c13) > 0 {
                    return Plan::Fallback("case 3: outer faces meet on the inner side".into());
                }
                if side(&ws[l4], &c13) <= 0 {
                    return Plan::Trivial(LeafCase::C3_2);
                }
                let order = if in_closed_simplex(&meet(c2, c3)) {
                    Some((c1, c3))
                } else if in_closed_simplex(&meet(c1, c2)) {
                    Some((c3, c1))
                } else {
                    None
                };
                if let Some((o1, o3)) = order {
                    let r = meet(c2, o3);
                    let rp = r.to_point().expect("finite");
                    let t = meet(o1, l4);
                    return match aux_con(&r.cross(&t), Some(&rp)) {
                        Some(c) => Plan::Cuts(LeafCase::C3_3, vec![c]),
                        None => Plan::Fallback("case 3-3: cut misses the simplex interior".into()),
                    };
                }
                let (p2, q2, _, _) = pts(c2);
                for (o1, o3) in [(c1, c3), (c3, c1)] {
                    if side(&ws[o3], &p2) < 0 && side(&ws[o3], &q2) < 0 {
                        let v = meet(c2, o3);
                        if let Some(c) = aux_con(&v.cross(&ws[o1].line_direction()), None) {
                            return Plan::Cuts(LeafCase::C3_4, vec![c]);
                        }
                    }
                }
                Plan::Fallback("case 3-4: no admissible labeling".into())
            }
            4 => {
                let order = match chain(&faces, &adjacent, bounded) {
                    Some(o) => o,
                    None => return Plan::Fallback("case 4: faces do not form a chain".into()),
                };
                let [c1, c2, c3, c4] = [order[0], order[1], order[2], order[3]];
                if bounded {
                    for n in [meet(c2, c3).cross(&meet(c1, c4)), meet(c1, c2).cross(&meet(c3, c4))] {
                        if let Some(c) = aux_con(&n, None) {
                            return Plan::Cuts(LeafCase::C4_1, vec![c]);
                        }
                    }
                    return Plan::Fallback("case 4-1: neither diagonal meets the simplex".into());
                }
                if parallel(&ws[c1], &ws[c4]) {
                    let n = meet(c2, c3).cross(&ws[c1].line_direction());
                    return match aux_con(&n, None) {
                        Some(c) => Plan::Cuts(LeafCase::C4_2, vec![c]),
                        None => Plan::Fallback("case 4-2: parallel cut misses the simplex".into()),
                    };
                }
                let v14 = meet(c1, c4);
                if side(&ws[c2], &v14) < 0 && side(&ws[c3], &v14) < 0 {
                    return Plan::Mirror;
                }
                Plan::Fallback("case 4: unbounded region with outer faces meeting inside".into())
            }
            n => Plan::Fallback(format!("{n} faces")),
        }
    }

    /// Splits by each cut in turn while a piece still has more than three facets.
    fn refine(&mut self, piece: Vec<Con>, cuts: &[Con], depth: usize) -> Result<Cells> {
        if depth > self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let Some(piece) = facets(&piece) else {
            return Ok(Vec::new());
        };
        if piece.len() <= 3 {
            return Ok(vec![piece]);
        }
        let Some((cut, rest)) = cuts.split_first() else {
            return self.reduce(piece, depth + 1);
        };
        let mut plus = piece.clone();
        plus.push(cut.clone());
        let mut minus = piece.clone();
        minus.push(cut.negate());
        let plus_ok = facet_indices(&weights(&plus)).is_some();
        let minus_ok = facet_indices(&weights(&minus)).is_some();
        if plus_ok && minus_ok {
            if let Src::Aux { r, s } = &cut.src {
                self.witnesses.push((r.clone(), s.clone()));
            }
            let mut out = self.refine(plus, rest, depth + 1)?;
            out.extend(self.refine(minus, rest, depth + 1)?);
            Ok(out)
        } else {
            self.refine(piece, rest, depth + 1)
        }
    }

    fn fallback(&mut self, cons: Vec<Con>, depth: usize, why: String) -> Result<Cells> {
        self.fallback = true;
        self.trace.push(format!("fallback: {why}"));
        let k = facets(&cons).unwrap_or_default();
        if k.len() <= 3 {
            return Ok(vec![k]);
        }
        let mark = self.witnesses.len();
        for (axis, r, on_facet) in self.fan_centers(&k) {
            let normals = weights(&k);
            let rays = extreme_rays(&normals);
            let cuts: Option<Vec<Con>> = rays
                .iter()
                .filter(|v| on_facet.map_or(true, |f| !k[f].w.dot(v).is_zero()))
                .map(|v| aux_con(&axis.cross(v), Some(&r)))
                .collect();
            let Some(cuts) = cuts else { continue };
            let cells = self.refine(k.clone(), &cuts, depth + 1)?;
            if cells.iter().all(|c| c.len() <= 3) && check_cells(&k, &cells).ok() {
                self.trace.push(format!("fan of {} cuts", cuts.len()));
                return Ok(cells);
            }
            self.witnesses.truncate(mark);
        }
        // Diagonals: cuts through two vertices not sharing a facet.
        let normals = weights(&k);
        let rays = extreme_rays(&normals);
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                if normals
                    .iter()
                    .any(|w| w.dot(&rays[i]).is_zero() && w.dot(&rays[j]).is_zero())
                {
                    continue;
                }
                let Some(cut) = aux_con(&rays[i].cross(&rays[j]), None) else {
                    continue;
                };
                let cells = self.refine(k.clone(), &[cut], depth + 1)?;
                if check_cells(&k, &cells).ok() {
                    self.trace.push("diagonal cut".into());
                    return Ok(cells);
                }
                self.witnesses.truncate(mark);
            }
        }
        Err(Error::Decomposition(format!("no construction found ({why})")))
    }

    /// Fan axes: points of the open simplex on a facet of the cone (either
    /// sheet), then points of the open simplex inside the cone.
    fn fan_centers(&self, k: &[Con]) -> Vec<(V3, Point<Rat>, Option<usize>)> {
        let mut out = Vec::new();
        let ws = weights(k);
        for (f, con) in k.iter().enumerate() {
            let (p, q) = con.points(self.events);
            for sheet in [1i64, -1] {
                if let Some(t) = facet_interval(&ws, f, &p.pos, &q.pos, sheet) {
                    let r = Point::new(
                        &p.pos.x + (&q.pos.x - &p.pos.x) * &t,
                        &p.pos.y + (&q.pos.y - &p.pos.y) * &t,
                    );
                    let rv = V3::from_point(&r);
                    let axis = if sheet > 0 { rv } else { rv.neg() };
                    out.push((axis, r, Some(f)));
                }
            }
        }
        for sheet in [1i64, -1] {
            let mut cons = ws.clone();
            for e in simplex_edges() {
                cons.push(if sheet > 0 { e } else { e.neg() });
            }
            let e3 = line_at_infinity();
            cons.push(if sheet > 0 { e3 } else { e3.neg() });
            if let Some(z) = open_cone_witness(&cons) {
                let r = z.to_point().expect("finite");
                out.push((z, r, None));
            }
        }
        out
    }
}

/// Parameter `t` of a point `p + t(q - p)` in the open simplex whose ray on
/// `sheet` lies in the relative interior of facet `f`.
fn facet_interval(ws: &[V3], f: usize, p: &Point<Rat>, q: &Point<Rat>, sheet: i64) -> Option<Rat> {
    let pv = V3::from_point(p);
    let qv = V3::from_point(q);
    // Homogeneous point (1-t)·P/P3 + t·Q/Q3, so each functional is affine in t.
    let at = |w: &V3, v: &V3| Rat::new(w.dot(v), v.0[2].clone());
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let mut constraints: Vec<(Rat, Rat)> = Vec::new();
    for (j, w) in ws.iter().enumerate() {
        if j == f {
            continue;
        }
        let s = Rat::from_integer(sheet.into());
        let a = at(w, &pv) * &s;
        let b = at(w, &qv) * &s - &a;
        constraints.push((a, b));
    }
    for e in simplex_edges() {
        let a = at(&e, &pv);
        let b = at(&e, &qv) - &a;
        constraints.push((a, b));
    }
    for (a, b) in constraints {
        // a + b t > 0
        if b.is_zero() {
            if !a.is_positive() {
                return None;
            }
            continue;
        }
        let t = -a / &b;
        if b.is_positive() {
            if lo.as_ref().map_or(true, |l| t > *l) {
                lo = Some(t);
            }
        } else if hi.as_ref().map_or(true, |h| t < *h) {
            hi = Some(t);
        }
    }
    let (lo, hi) = (lo?, hi?);
    if lo < hi {
        Some((lo + hi) * half())
    } else {
        None
    }
}

fn chain(faces: &[usize], adjacent: &dyn Fn(usize, usize) -> bool, cyclic: bool) -> Option<Vec<usize>> {
    let deg = |f: usize| faces.iter().filter(|&&g| g != f && adjacent(f, g)).count();
    let start = if cyclic {
        faces[0]
    } else {
        *faces.iter().find(|&&f| deg(f) == 1)?
    };
    let mut order = vec![start];
    while order.len() < faces.len() {
        let last = *order.last().expect("nonempty");
        let next = faces
            .iter()
            .copied()
            .find(|&g| !order.contains(&g) && adjacent(last, g))?;
        order.push(next);
    }
    Some(order)
}

fn negate_cells(cells: Cells) -> Cells {
    cells.into_iter().map(|c| c.iter().map(Con::negate).collect()).collect()
}

fn finish(ctx: Ctx<'_>, originals: &[BinaryEvent], cells: Cells) -> Result<Decomposition> {
    let mut out = Vec::with_capacity(cells.len());
    for c in cells {
        let mut events = Vec::with_capacity(c.len());
        for con in c {
            match con.src {
                Src::Event { idx, neg: false } => events.push(originals[idx].clone()),
                Src::Event { neg: true, .. } => return Err(Error::Decomposition("unbalanced re-signing".into())),
                Src::Aux { r, s } => events.push(BinaryEvent {
                    p: r,
                    q: s,
                    relation: Relation::Succeq,
                }),
            }
        }
        out.push(Cell { events });
    }
    Ok(Decomposition {
        cells: out,
        tie_overlap_witnesses: ctx.witnesses,
        cases: ctx.cases,
        trace: ctx.trace,
        fallback_used: ctx.fallback,
    })
}

fn setup(events: &[BinaryEvent]) -> Result<(Vec<BinaryEvent>, Vec<Con>)> {
    let mm: Vec<BinaryEvent> = events.iter().map(BinaryEvent::to_mm).collect::<Result<_>>()?;
    let cons = mm
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            Ok(Con {
                w: event_weight(e)?,
                src: Src::Event { idx, neg: false },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((mm, cons))
}

/// Splits `p_i ≻ q_i, i = 1..4` into cells of at most three events.
pub fn decompose4(events: &[BinaryEvent]) -> Result<Decomposition> {
    if events.len() != 4 {
        return Err(Error::Decomposition(format!("expected 4 events, got {}", events.len())));
    }
    if events.iter().any(|e| e.relation != Relation::Succ) {
        return Err(Error::Unsupported("decompose4 takes strict events".into()));
    }
    reduce_joint_event_with(events, DEFAULT_MAX_DEPTH)
}

pub fn reduce_joint_event(events: &[BinaryEvent]) -> Result<Decomposition> {
    reduce_joint_event_with(events, DEFAULT_MAX_DEPTH)
}

/// Repeatedly applies the four-event split until every cell has at most
/// three events.
pub fn reduce_joint_event_with(events: &[BinaryEvent], max_depth: usize) -> Result<Decomposition> {
    if events.is_empty() {
        return Err(Error::Degenerate("no events".into()));
    }
    let (mm, cons) = setup(events)?;
    let mut ctx = Ctx {
        events: &mm,
        max_depth,
        trace: Vec::new(),
        cases: Vec::new(),
        witnesses: Vec::new(),
        fallback: false,
    };
    if events.len() <= 3 {
        return finish(ctx, events, vec![cons]);
    }
    let n = cons.len();
    let cells = ctx.reduce(cons, 0)?;
    if let Some(d) = dedupe_len(events) {
        if d < n {
            ctx.trace.insert(0, format!("coincident events: {n} -> {d}"));
        }
    }
    finish(ctx, events, cells)
}

fn dedupe_len(events: &[BinaryEvent]) -> Option<usize> {
    let (_, cons) = setup(events).ok()?;
    dedupe(cons).map(|c| c.len())
}

/// Fan of cuts from `r`, a point of the open simplex on the line of event
/// `facet`: one cut to every vertex of the event cone off that facet.
pub fn facet_fan(events: &[BinaryEvent], facet: usize, r: &Lottery) -> Result<Decomposition> {
    let (mm, cons) = setup(events)?;
    let r = r.convert(
        crate::geometry::Chart::Mm,
        Some(&crate::geometry::PrizeRanking::standard()),
    )?;
    let rv = V3::from_point(&r.pos);
    if !in_open_simplex(&rv) {
        return Err(Error::InvalidLottery("fan center must be interior".into()));
    }
    let Some(k) = facets(&cons) else {
        return Err(Error::Decomposition("empty event".into()));
    };
    let Some(f) = k
        .iter()
        .position(|c| matches!(c.src, Src::Event { idx, .. } if idx == facet))
    else {
        return Err(Error::Decomposition(format!("event {facet} is not a facet")));
    };
    if !k[f].w.dot(&rv).is_zero() {
        return Err(Error::Decomposition("fan center is off the facet line".into()));
    }
    let ws = weights(&k);
    let axis = if ws.iter().all(|w| !w.dot(&rv).is_negative()) {
        rv.clone()
    } else if ws.iter().all(|w| !w.dot(&rv).is_positive()) {
        rv.neg()
    } else {
        return Err(Error::Decomposition(
            "fan center is not on the boundary of the event".into(),
        ));
    };
    let mut ctx = Ctx {
        events: &mm,
        max_depth: DEFAULT_MAX_DEPTH,
        trace: vec![format!("fan from a point of event {facet}")],
        cases: Vec::new(),
        witnesses: Vec::new(),
        fallback: false,
    };
    let cuts: Vec<Con> = extreme_rays(&ws)
        .iter()
        .filter(|v| !k[f].w.dot(v).is_zero())
        .map(|v| aux_con(&axis.cross(v), Some(&r.pos)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Decomposition("fan cut misses the simplex".into()))?;
    let cells = ctx.refine(k, &cuts, 0)?;
    finish(ctx, events, cells)
}
