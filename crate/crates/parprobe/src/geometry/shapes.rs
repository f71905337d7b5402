//! Analytic shape primitives with polynomial/trigonometric time dependence,
//! and the text recipe parser that builds them.
//!
//! Recipe grammar (one shape per line or semicolon-separated):
//!
//! ```text
//! disk    cx=<expr> cy=<expr> r=<expr>
//! ellipse cx=<expr> cy=<expr> rx=<expr> ry=<expr> angle=<expr>
//! star    cx=<expr> cy=<expr> r0=<expr> m<j>=<expr> [phase<j>=<const>] ...
//! segment s1=<expr> s2=<expr>            (n = 1)
//! graph   amp=<const> rho0=<const>       (upper region x_n > amp·x′², for
//!                                          interface studies)
//! ```
//!
//! `<expr>` is a sum of terms `c`, `c*t`, `c*t^2`, `c*sin(w*t)`, `c*cos(w*t)`.

use crate::{Error, Result};

/// Scalar-valued function of time: polynomial plus trigonometric terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeScalar {
    /// Polynomial coefficients, constant first.
    pub poly: Vec<f64>,
    /// (amplitude, angular frequency, is_cosine) terms.
    pub trig: Vec<(f64, f64, bool)>,
}

impl TimeScalar {
    pub fn constant(c: f64) -> Self {
        TimeScalar { poly: vec![c], trig: vec![] }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = 0.0;
        let mut tp = 1.0;
        for &c in &self.poly {
            v += c * tp;
            tp *= t;
        }
        for &(a, w, is_cos) in &self.trig {
            v += if is_cos { a * (w * t).cos() } else { a * (w * t).sin() };
        }
        v
    }

    /// Parse "0.5 + 0.1*t - 0.05*sin(3*t) + 0.2*cos(1.5*t)".
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = TimeScalar::default();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Config("empty time expression".into()));
        }
        // split into signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > 0 => {
                    let prev = compact.chars().nth(i - 1).unwrap();
                    if prev != 'e' && prev != 'E' && prev != '*' && prev != '+' && prev != '-' {
                        terms.push(std::mem::take(&mut cur));
                    }
                }
                _ => {}
            }
            cur.push(ch);
        }
        terms.push(cur);

        for term in terms {
            let term = term.trim_start_matches('+').to_string();
            if term.is_empty() {
                continue;
            }
            let bad = || Error::Config(format!("cannot parse term '{term}' in '{s}'"));
            if let Some(idx) = term.find("sin(").or_else(|| term.find("cos(")) {
                let is_cos = term[idx..].starts_with("cos");
                if !term.ends_with(')') {
                    return Err(bad());
                }
                let coeff_str = term[..idx].trim_end_matches('*');
                let coeff = parse_signed_coeff(coeff_str).ok_or_else(bad)?;
                let inner = &term[idx + 4..term.len() - 1];
                let omega = match inner.strip_suffix("*t").or_else(|| inner.strip_suffix('t')) {
                    Some("") => 1.0,
                    Some(ws) => ws.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
                    None => return Err(bad()),
                };
                out.trig.push((coeff, omega, is_cos));
            } else if let Some(pos) = term.find('t') {
                let coeff = parse_signed_coeff(term[..pos].trim_end_matches('*')).ok_or_else(bad)?;
                let power = match &term[pos..] {
                    "t" => 1usize,
                    "t^2" => 2,
                    "t^3" => 3,
                    _ => return Err(bad()),
                };
                if out.poly.len() < power + 1 {
                    out.poly.resize(power + 1, 0.0);
                }
                out.poly[power] += coeff;
            } else {
                let c: f64 = term.parse().map_err(|_| bad())?;
                if out.poly.is_empty() {
                    out.poly.push(0.0);
                }
                out.poly[0] += c;
            }
        }
        Ok(out)
    }
}

fn parse_signed_coeff(s: &str) -> Option<f64> {
    match s {
        "" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// Analytic inclusion primitive. The level function is positive inside,
/// approximately a signed distance near the boundary.
#[derive(Clone, Debug)]
pub enum Shape {
    Disk { cx: TimeScalar, cy: TimeScalar, r: TimeScalar },
    Ellipse { cx: TimeScalar, cy: TimeScalar, rx: TimeScalar, ry: TimeScalar, angle: TimeScalar },
    /// Star-shaped perturbation of a disk:
    /// r(θ, t) = r0(t)·(1 + Σ_j a_j(t)·cos(jθ + φ_j)).
    Star { cx: TimeScalar, cy: TimeScalar, r0: TimeScalar, modes: Vec<(u32, TimeScalar, f64)> },
    /// n = 1 slab s1(t) < x < s2(t).
    Segment { s1: TimeScalar, s2: TimeScalar },
    /// Upper graph region x_n > amp·x′² (interface studies; unbounded).
    GraphUpper { amp: f64 },
}

impl Shape {
    pub fn level(&self, x: [f64; 2], t: f64) -> f64 {
        match self {
            Shape::Disk { cx, cy, r } => {
                r.eval(t) - (x[0] - cx.eval(t)).hypot(x[1] - cy.eval(t))
            }
            Shape::Ellipse { cx, cy, rx, ry, angle } => {
                let (dx, dy) = (x[0] - cx.eval(t), x[1] - cy.eval(t));
                let a = angle.eval(t);
                let (ca, sa) = (a.cos(), a.sin());
                let u = ca * dx + sa * dy;
                let v = -sa * dx + ca * dy;
                let (rxe, rye) = (rx.eval(t), ry.eval(t));
                rxe.min(rye) * (1.0 - ((u / rxe).powi(2) + (v / rye).powi(2)).sqrt())
            }
            Shape::Star { cx, cy, r0, modes } => {
                let (dx, dy) = (x[0] - cx.eval(t), x[1] - cy.eval(t));
                let rho = dx.hypot(dy);
                let theta = dy.atan2(dx);
                let mut r = r0.eval(t);
                let mut factor = 1.0;
                for (j, a, phase) in modes {
                    factor += a.eval(t) * ((*j as f64) * theta + phase).cos();
                }
                r *= factor;
                r - rho
            }
            Shape::Segment { s1, s2 } => (x[0] - s1.eval(t)).min(s2.eval(t) - x[0]),
            Shape::GraphUpper { amp } => x[1] - amp * x[0] * x[0],
        }
    }

    pub fn contains(&self, x: [f64; 2], t: f64) -> bool {
        self.level(x, t) > 0.0
    }

    /// Parse one shape description.
    pub fn parse(line: &str) -> Result<Shape> {
        let mut it = line.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::Config("empty shape line".into()))?;
        let mut kv = std::collections::BTreeMap::new();
        for tok in it {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{tok}'")))?;
            kv.insert(k.to_string(), v.to_string());
        }
        let need = |key: &str| -> Result<TimeScalar> {
            kv.get(key)
                .ok_or_else(|| Error::Config(format!("shape '{kind}' missing '{key}='")))
                .and_then(|v| TimeScalar::parse(v))
        };
        match kind {
            "disk" => Ok(Shape::Disk { cx: need("cx")?, cy: need("cy")?, r: need("r")? }),
            "ellipse" => Ok(Shape::Ellipse {
                cx: need("cx")?,
                cy: need("cy")?,
                rx: need("rx")?,
                ry: need("ry")?,
                angle: kv
                    .get("angle")
                    .map(|v| TimeScalar::parse(v))
                    .transpose()?
                    .unwrap_or_else(|| TimeScalar::constant(0.0)),
            }),
            "star" => {
                let mut modes = Vec::new();
                for (k, v) in &kv {
                    if let Some(j) = k.strip_prefix('m') {
                        if let Ok(j) = j.parse::<u32>() {
                            let phase = kv
                                .get(&format!("phase{j}"))
                                .map(|p| p.parse::<f64>())
                                .transpose()
                                .map_err(|_| Error::Config(format!("bad phase{j}")))?
                                .unwrap_or(0.0);
                            modes.push((j, TimeScalar::parse(v)?, phase));
                        }
                    }
                }
                Ok(Shape::Star { cx: need("cx")?, cy: need("cy")?, r0: need("r0")?, modes })
            }
            "segment" => Ok(Shape::Segment { s1: need("s1")?, s2: need("s2")? }),
            "graph" => {
                let amp = kv
                    .get("amp")
                    .ok_or_else(|| Error::Config("graph needs amp=".into()))?
                    .parse::<f64>()
                    .map_err(|_| Error::Config("bad graph amp".into()))?;
                Ok(Shape::GraphUpper { amp })
            }
            other => Err(Error::Config(format!("unknown shape kind '{other}'"))),
        }
    }
}
