//! SVG figures in the MM chart: the simplex, indifference lines through a
//! lottery grid, pivots and arrows toward better lotteries.

use std::cmp::Ordering;
use std::fmt::Write;

use choice_lab::geometry::{Chart, Lottery, Point, PrizeRanking};
use choice_lab::montecarlo::substream;
use choice_lab::preferences::Preference;
use choice_lab::random_utility::RandomPreference;
use choice_lab::Result;

const SIZE: f64 = 640.0;
const LO: f64 = -1.1;
const HI: f64 = 2.1;
const BOUNDARY_STEPS: usize = 720;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Summary {
    pub lines: usize,
    pub arrows: usize,
    pub pivots: usize,
    pub sampled: usize,
    pub off_view: usize,
}

struct Canvas {
    body: String,
    summary: Summary,
}

fn sx(x: f64) -> f64 {
    (x - LO) / (HI - LO) * SIZE
}

fn sy(y: f64) -> f64 {
    SIZE - (y - LO) / (HI - LO) * SIZE
}

fn in_view(p: &Point<f64>) -> bool {
    (LO..=HI).contains(&p.x) && (LO..=HI).contains(&p.y)
}

/// Point at arclength fraction `t ∈ [0, 3)` of the boundary W3 → W1 → W2 → W3.
fn boundary(t: f64) -> Point<f64> {
    match t {
        t if t < 1.0 => Point::new(t, 0.0),
        t if t < 2.0 => Point::new(2.0 - t, t - 1.0),
        t => Point::new(0.0, 3.0 - t),
    }
}

fn lottery(p: Point<f64>) -> Lottery<f64> {
    Lottery {
        pos: p,
        chart: Chart::Mm,
    }
}

fn sign(pref: &Preference<f64>, a: &Point<f64>, b: &Lottery<f64>) -> Result<i8> {
    Ok(match pref.compare(&lottery(a.clone()), b)? {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    })
}

/// Boundary points indifferent to `l`.
fn level_crossings(pref: &Preference<f64>, l: &Lottery<f64>) -> Result<Vec<Point<f64>>> {
    let h = 3.0 / BOUNDARY_STEPS as f64;
    let mut out: Vec<Point<f64>> = Vec::new();
    let mut prev = sign(pref, &boundary(0.0), l)?;
    if prev == 0 {
        out.push(boundary(0.0));
    }
    for k in 1..=BOUNDARY_STEPS {
        let t1 = (k as f64 * h).min(3.0 - 1e-12);
        let s1 = sign(pref, &boundary(t1), l)?;
        if s1 == 0 {
            out.push(boundary(t1));
        } else if prev != 0 && s1 != prev {
            let (mut a, mut b) = (t1 - h, t1);
            for _ in 0..50 {
                let m = 0.5 * (a + b);
                if sign(pref, &boundary(m), l)? == prev {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(boundary(0.5 * (a + b)));
        }
        prev = s1;
    }
    Ok(out)
}

fn farthest_pair(pts: &[Point<f64>]) -> Option<(Point<f64>, Point<f64>)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].sub(&pts[j]);
            let d = d.dot(&d);
            if best.map_or(true, |(b, _, _)| d > b) {
                best = Some((d, i, j));
            }
        }
    }
    best.filter(|(d, _, _)| *d > 1e-12)
        .map(|(_, i, j)| (pts[i].clone(), pts[j].clone()))
}

fn to_mm(pref: &Preference) -> Result<Preference<f64>> {
    match pref {
        Preference::Wu(w) if w.chart != Chart::Mm => {
            Ok(Preference::Wu(w.to_chart(Chart::Mm, Some(&PrizeRanking::standard()))?).from_rat())
        }
        Preference::Eu(e) if e.chart != Chart::Mm => Err(choice_lab::Error::Unsupported(
            "expected-utility gradients are rendered in the MM chart".into(),
        )),
        p => Ok(p.from_rat()),
    }
}

fn pivots_of(pref: &Preference) -> Vec<Point<f64>> {
    match pref {
        Preference::Wu(w) => vec![w.pivot.to_f64()],
        Preference::WuFunctional(f) => f.pivot().map(|p| vec![p.to_f64()]).unwrap_or_default(),
        Preference::SemiWeighted(s) => [&s.upper, &s.lower]
            .iter()
            .filter_map(|f| f.pivot().ok())
            .map(|p| p.to_f64())
            .collect(),
        _ => Vec::new(),
    }
}

impl Canvas {
    fn new() -> Self {
        let mut c = Canvas {
            body: String::new(),
            summary: Summary::default(),
        };
        let (a, b, o) = ((sx(1.0), sy(0.0)), (sx(0.0), sy(1.0)), (sx(0.0), sy(0.0)));
        let _ = writeln!(
            c.body,
            r##"<polygon class="simplex" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="#f7f7f7" stroke="#000" stroke-width="1.5"/>"##,
            o.0, o.1, a.0, a.1, b.0, b.1
        );
        for (label, x, y) in [("w1", 1.0, 0.0), ("w2", 0.0, 1.0), ("w3", 0.0, 0.0)] {
            let _ = writeln!(
                c.body,
                r#"<text class="vertex" x="{:.3}" y="{:.3}" font-size="14">{label}</text>"#,
                sx(x) + 6.0,
                sy(y) + 16.0
            );
        }
        c
    }

    fn preference(&mut self, pref: &Preference, grid: u32, color: &str) -> Result<()> {
        let p = to_mm(pref)?;
        let g = grid.max(2);
        let mut seen: Vec<(Point<f64>, Point<f64>)> = Vec::new();
        for i in 0..=g {
            for j in 0..=(g - i) {
                let l = lottery(Point::new(i as f64 / g as f64, j as f64 / g as f64));
                let Some((a, b)) = farthest_pair(&level_crossings(&p, &l)?) else {
                    continue;
                };
                let dup = seen.iter().any(|(u, v)| {
                    let close = |x: &Point<f64>, y: &Point<f64>| (x.x - y.x).abs() + (x.y - y.y).abs() < 1e-6;
                    (close(u, &a) && close(v, &b)) || (close(u, &b) && close(v, &a))
                });
                if dup {
                    continue;
                }
                let _ = writeln!(
                    self.body,
                    r#"<line class="indifference" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="1"/>"#,
                    sx(a.x),
                    sy(a.y),
                    sx(b.x),
                    sy(b.y)
                );
                self.summary.lines += 1;
                seen.push((a.clone(), b.clone()));
                if (i + j) % 2 == 0 && i > 0 && j > 0 && i + j < g {
                    self.arrow(&p, &l, &a, &b, color)?;
                }
            }
        }
        for pv in pivots_of(pref) {
            self.pivot(&pv, color, "pivot");
        }
        Ok(())
    }

    /// Short arrow at `l`, normal to its indifference line, toward better lotteries.
    fn arrow(
        &mut self,
        p: &Preference<f64>,
        l: &Lottery<f64>,
        a: &Point<f64>,
        b: &Point<f64>,
        color: &str,
    ) -> Result<()> {
        let d = b.sub(a);
        let len = d.dot(&d).sqrt();
        let mut n = Point::new(-d.y / len, d.x / len);
        let probe = l.pos.add(&n.scale(&1e-4));
        if p.compare(&lottery(probe), l)? != Ordering::Greater {
            n = n.neg();
        }
        let tip = l.pos.add(&n.scale(&0.05));
        let _ = writeln!(
            self.body,
            r#"<line class="arrow" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="1.5" marker-end="url(#head)"/>"#,
            sx(l.pos.x),
            sy(l.pos.y),
            sx(tip.x),
            sy(tip.y)
        );
        self.summary.arrows += 1;
        Ok(())
    }

    fn pivot(&mut self, p: &Point<f64>, color: &str, class: &str) {
        if !in_view(p) {
            self.summary.off_view += 1;
            return;
        }
        let r = if class == "pivot" { 5.0 } else { 2.5 };
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{r}" fill="{color}"/>"#,
            sx(p.x),
            sy(p.y)
        );
        if class == "pivot" {
            self.summary.pivots += 1;
        } else {
            self.summary.sampled += 1;
        }
    }

    fn distribution(&mut self, mu: &RandomPreference, grid: u32, samples: u64, seed: u64) -> Result<()> {
        match mu {
            RandomPreference::FiniteMixture(items) => {
                for (k, (p, _)) in items.iter().enumerate() {
                    self.preference(p, grid, PALETTE[k % PALETTE.len()])?;
                }
                return Ok(());
            }
            RandomPreference::CircleRwu { center, radius } => {
                let _ = writeln!(
                    self.body,
                    r##"<circle class="circle" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#555" stroke-dasharray="6 4"/>"##,
                    sx(center.x),
                    sy(center.y),
                    radius / (HI - LO) * SIZE
                );
            }
            _ => {}
        }
        let mut rng = substream(seed, 0);
        for _ in 0..samples {
            match mu.sample(&mut rng)? {
                Preference::Wu(w) => {
                    let color = if w.orientation.sign() > 0 {
                        PALETTE[1]
                    } else {
                        PALETTE[0]
                    };
                    self.pivot(&w.pivot, color, "sample-pivot");
                }
                Preference::Eu(e) => {
                    let c = Point::new(1.0 / 3.0, 1.0 / 3.0);
                    let d = &e.direction;
                    let len = d.dot(d).sqrt();
                    let tip = c.add(&d.scale(&(0.3 / len)));
                    let _ = writeln!(
                        self.body,
                        r#"<line class="sample-direction" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="1" marker-end="url(#head)"/>"#,
                        sx(c.x),
                        sy(c.y),
                        sx(tip.x),
                        sy(tip.y),
                        PALETTE[2]
                    );
                    self.summary.sampled += 1;
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn finish(self, title: &str) -> (String, Summary) {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(s, "<title>{title}</title>");
        s.push_str(
            r#"<defs><marker id="head" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z"/></marker></defs>"#,
        );
        s.push('\n');
        s.push_str(&self.body);
        if self.summary.off_view > 0 {
            let _ = writeln!(
                s,
                r#"<text class="note" x="8" y="{:.0}" font-size="12">{} point(s) outside the view</text>"#,
                SIZE - 8.0,
                self.summary.off_view
            );
        }
        s.push_str("</svg>\n");
        (s, self.summary)
    }
}

pub fn render_preference(pref: &Preference, grid: u32) -> Result<(String, Summary)> {
    let mut c = Canvas::new();
    c.preference(pref, grid, PALETTE[0])?;
    Ok(c.finish("preference"))
}

pub fn render_distribution(mu: &RandomPreference, grid: u32, samples: u64, seed: u64) -> Result<(String, Summary)> {
    let mut c = Canvas::new();
    c.distribution(mu, grid, samples, seed)?;
    Ok(c.finish("distribution"))
}
