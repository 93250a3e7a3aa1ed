//! Homogeneous integer geometry for weighted-utility events.
//!
//! A weighted-utility preference with pivot `c` is the ray `(c, 1)` when it
//! rotates clockwise and `-(c, 1)` otherwise. The event `p ≻ q` is then the
//! open half-space `{z : (P × Q)·z > 0}` with `P = (p, 1)`, `Q = (q, 1)`, so a
//! conjunction of binary events is an open polyhedral cone.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geometry::Point;
use crate::scalar::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct V3(pub [BigInt; 3]);

impl V3 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        V3([a, b, c])
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        V3::new(a.into(), b.into(), c.into())
    }

    pub fn dot(&self, o: &V3) -> BigInt {
        &self.0[0] * &o.0[0] + &self.0[1] * &o.0[1] + &self.0[2] * &o.0[2]
    }

    pub fn cross(&self, o: &V3) -> V3 {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        V3::new(a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0)
    }

    pub fn neg(&self) -> V3 {
        V3::new(-&self.0[0], -&self.0[1], -&self.0[2])
    }

    pub fn add(&self, o: &V3) -> V3 {
        V3::new(&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2])
    }

    pub fn scale(&self, k: &BigInt) -> V3 {
        V3::new(&self.0[0] * k, &self.0[1] * k, &self.0[2] * k)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Divides out the gcd, keeping the direction.
    pub fn reduced(&self) -> V3 {
        let g = self.0[0].gcd(&self.0[1]).gcd(&self.0[2]);
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        V3::new(&self.0[0] / &g, &self.0[1] / &g, &self.0[2] / &g)
    }

    /// Representative of the line `±self`: reduced, first nonzero entry positive.
    pub fn projective_key(&self) -> V3 {
        let r = self.reduced();
        match r.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => r.neg(),
            _ => r,
        }
    }

    /// Homogeneous coordinates `(x, y, 1)` scaled to integers.
    pub fn from_point(p: &Point<Rat>) -> V3 {
        let l = p.x.denom().lcm(p.y.denom());
        V3::new(p.x.numer() * (&l / p.x.denom()), p.y.numer() * (&l / p.y.denom()), l).reduced()
    }

    /// Affine point, if finite.
    pub fn to_point(&self) -> Option<Point<Rat>> {
        if self.0[2].is_zero() {
            return None;
        }
        Some(Point::new(
            Rat::new(self.0[0].clone(), self.0[2].clone()),
            Rat::new(self.0[1].clone(), self.0[2].clone()),
        ))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        use num_traits::ToPrimitive;
        // Scale down by a common power of two so huge entries stay finite.
        let bits = self.0.iter().map(|x| x.bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(60);
        let f = |x: &BigInt| (x >> shift).to_f64().unwrap_or(0.0);
        [f(&self.0[0]), f(&self.0[1]), f(&self.0[2])]
    }

    /// Point at infinity in the direction of the line `self`.
    pub fn line_direction(&self) -> V3 {
        V3::new(self.0[1].clone(), -&self.0[0], BigInt::zero())
    }

    pub fn sign_dot(&self, o: &V3) -> i8 {
        let d = self.dot(o);
        if d.is_positive() {
            1
        } else if d.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Edge functionals of the open simplex `{x > 0, y > 0, x + y < 1}`.
pub fn simplex_edges() -> [V3; 3] {
    [V3::ints(1, 0, 0), V3::ints(0, 1, 0), V3::ints(-1, -1, 1)]
}

pub fn line_at_infinity() -> V3 {
    V3::ints(0, 0, 1)
}

pub fn in_open_simplex(v: &V3) -> bool {
    let s = v.0[2].signum();
    !s.is_zero() && simplex_edges().iter().all(|e| (e.dot(v) * &s).is_positive())
}

pub fn in_closed_simplex(v: &V3) -> bool {
    let s = v.0[2].signum();
    !s.is_zero() && simplex_edges().iter().all(|e| !(e.dot(v) * &s).is_negative())
}

/// Whether two lines are parallel in the affine plane (or equal).
pub fn parallel(a: &V3, b: &V3) -> bool {
    a.cross(b).0[2].is_zero()
}

/// One interior point of every full-dimensional face of the arrangement of
/// planes through the origin with the given normals (both hemispheres), plus
/// possibly some extra points.
pub fn face_samples(planes: &[V3]) -> Vec<V3> {
    let mut normals: Vec<V3> = Vec::new();
    for p in planes {
        if p.is_zero() {
            continue;
        }
        let k = p.projective_key();
        if !normals.contains(&k) {
            normals.push(k);
        }
    }
    if normals.is_empty() {
        return vec![V3::ints(0, 0, 1), V3::ints(0, 0, -1)];
    }
    let mut out = Vec::new();
    for i in 0..normals.len() {
        for j in (i + 1)..normals.len() {
            let v0 = normals[i].cross(&normals[j]);
            if v0.is_zero() {
                continue;
            }
            for v in [v0.clone(), v0.neg()] {
                let mut ei = normals[j].cross(&v);
                if normals[i].dot(&ei).is_negative() {
                    ei = ei.neg();
                }
                let mut ej = normals[i].cross(&v);
                if normals[j].dot(&ej).is_negative() {
                    ej = ej.neg();
                }
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let d = ei.scale(&BigInt::from(si)).add(&ej.scale(&BigInt::from(sj)));
                    let mut m = BigInt::one();
                    for n in &normals {
                        let nv = n.dot(&v).abs();
                        if nv.is_zero() {
                            continue;
                        }
                        let nd = n.dot(&d).abs();
                        let need = nd / &nv + 1;
                        if need > m {
                            m = need;
                        }
                    }
                    out.push(v.scale(&m).add(&d).reduced());
                }
            }
        }
    }
    if out.is_empty() {
        // All planes coincide.
        out.push(normals[0].clone());
        out.push(normals[0].neg());
    }
    out
}

/// A point strictly inside `{z : w·z > 0 for all w}`, if that cone is nonempty.
pub fn open_cone_witness(cons: &[V3]) -> Option<V3> {
    face_samples(cons)
        .into_iter()
        .find(|z| cons.iter().all(|w| w.dot(z).is_positive()))
}

/// Indices of the constraints that are facets of the open cone, in input
/// order. `None` if the cone is empty. Duplicates keep their first copy.
pub fn facet_indices(cons: &[V3]) -> Option<Vec<usize>> {
    let mut keys: Vec<V3> = Vec::new();
    let mut uniq: Vec<usize> = Vec::new();
    for (i, w) in cons.iter().enumerate() {
        if w.is_zero() {
            return None;
        }
        let k = w.reduced();
        if keys.contains(&k.neg()) {
            return None;
        }
        if !keys.contains(&k) {
            keys.push(k);
            uniq.push(i);
        }
    }
    open_cone_witness(&keys)?;
    let mut out = Vec::new();
    for (a, &i) in uniq.iter().enumerate() {
        let mut test: Vec<V3> = keys
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != a)
            .map(|(_, w)| w.clone())
            .collect();
        test.push(keys[a].neg());
        if open_cone_witness(&test).is_some() {
            out.push(i);
        }
    }
    Some(out)
}

/// Extreme rays of the closed cone `{w·z ≥ 0}` for facet normals `ws`.
pub fn extreme_rays(ws: &[V3]) -> Vec<V3> {
    let mut out: Vec<V3> = Vec::new();
    for i in 0..ws.len() {
        for j in (i + 1)..ws.len() {
            let v = ws[i].cross(&ws[j]);
            if v.is_zero() {
                continue;
            }
            for cand in [v.clone(), v.neg()] {
                if ws.iter().all(|w| !w.dot(&cand).is_negative()) {
                    let r = cand.reduced();
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

/// Distinct intersection points of the line `n` with the closed simplex,
/// ordered along the line; at most the two chord endpoints are returned.
pub fn chord(n: &V3) -> Option<(Point<Rat>, Point<Rat>)> {
    let mut pts: Vec<Point<Rat>> = Vec::new();
    for e in simplex_edges() {
        let x = n.cross(&e);
        if x.is_zero() {
            // The line is an edge of the simplex.
            continue;
        }
        if in_closed_simplex(&x) {
            let p = x.to_point().expect("finite");
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    if n.cross(&simplex_edges()[0]).is_zero()
        || n.cross(&simplex_edges()[1]).is_zero()
        || n.cross(&simplex_edges()[2]).is_zero()
    {
        return None;
    }
    if pts.len() < 2 {
        return None;
    }
    let dir = n.line_direction();
    let key = |p: &Point<Rat>| p.x.clone() * Rat::from(dir.0[0].clone()) + p.y.clone() * Rat::from(dir.0[1].clone());
    pts.sort_by_key(key);
    Some((pts[0].clone(), pts[pts.len() - 1].clone()))
}

/// Whether the line `n` passes through the interior of the simplex.
pub fn meets_interior(n: &V3) -> bool {
    match chord(n) {
        Some((a, b)) => {
            let m = Point::new(
                (a.x + b.x) / Rat::from_integer(2.into()),
                (a.y + b.y) / Rat::from_integer(2.into()),
            );
            in_open_simplex(&V3::from_point(&m))
        }
        None => false,
    }
}

/// Ray of the preference with this pivot and orientation sign (`+1` clockwise).
pub fn preference_ray(pivot: &Point<Rat>, sign: i8) -> V3 {
    let v = V3::from_point(pivot);
    if sign > 0 {
        v
    } else {
        v.neg()
    }
}
