//! Line-oriented canonical rendering of q-series and its parser.
//!
//! Each line is either `q^(a/D) * y^(c/r) : <cyclotomic>` (one monomial of a
//! polynomial coefficient) or `q^(a/D) : <num> / <den>` (a coefficient with a
//! nontrivial denominator). Lines are sorted by q-exponent, then y-exponent.
//! A finite truncation adds a last line `O(q^(N/D))`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::{lcm_u32, Cyclotomic, Rational, YRational};

use super::PuiseuxSeries;

fn q_exponent(e: i64, ram: u32) -> String {
    format!("q^({e}/{ram})")
}

fn y_key(e: i64, root: u32) -> Rational {
    Rational::new(e.into(), (root as i64).into())
}

fn y_term(e: i64, root: u32) -> String {
    let g = e.gcd(&(root as i64));
    format!("y^({}/{})", e / g, root as i64 / g)
}

pub fn render_canonical(s: &PuiseuxSeries) -> String {
    let mut lines = Vec::new();
    for (e, c) in s.terms() {
        let q = q_exponent(e, s.ramification());
        if c.is_polynomial() {
            let mut monos: Vec<(Rational, String)> = c
                .numerator()
                .terms()
                .map(|(k, v)| (y_key(k, c.root()), format!("{q} * {} : {v}", y_term(k, c.root()))))
                .collect();
            monos.sort_by(|a, b| a.0.cmp(&b.0));
            lines.extend(monos.into_iter().map(|(_, l)| l));
        } else {
            lines.push(format!("{q} : {c}"));
        }
    }
    if let Some(p) = s.precision() {
        lines.push(format!("O({})", q_exponent(p, s.ramification())));
    }
    if lines.is_empty() {
        return "0".into();
    }
    lines.join("\n")
}

fn parse_q(s: &str) -> Result<(i64, u32)> {
    let bad = || Error::Parse(format!("bad q exponent {s:?}"));
    let inner = s
        .trim()
        .strip_prefix("q^(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, d) = inner.split_once('/').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let d: u32 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok((a, d))
}

fn parse_y(s: &str) -> Result<(i64, u32)> {
    let bad = || Error::Parse(format!("bad y exponent {s:?}"));
    let inner = s
        .trim()
        .strip_prefix("y^(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, d) = inner.split_once('/').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let d: u32 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok((a, d))
}

/// Inverse of [`render_canonical`].
pub fn parse_canonical(text: &str) -> Result<PuiseuxSeries> {
    let mut entries: Vec<(i64, u32, YRational)> = Vec::new();
    let mut prec: Option<(i64, u32)> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line == "0" {
            continue;
        }
        let ctx = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
        if let Some(inner) = line.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            prec = Some(parse_q(inner).map_err(ctx)?);
            continue;
        }
        let (lhs, rhs) = line
            .split_once(" : ")
            .ok_or_else(|| Error::Parse(format!("line {}: missing ' : '", lineno + 1)))?;
        let (qpart, ypart) = match lhs.split_once(" * ") {
            Some((a, b)) => (a, Some(b)),
            None => (lhs, None),
        };
        let (qe, d) = parse_q(qpart).map_err(ctx)?;
        let coeff = match ypart {
            Some(y) => {
                let (ye, r) = parse_y(y).map_err(ctx)?;
                let c: Cyclotomic = rhs.parse().map_err(ctx)?;
                YRational::monomial(c, ye, r)
            }
            None => rhs.parse::<YRational>().map_err(ctx)?,
        };
        entries.push((qe, d, coeff));
    }
    let ram = entries
        .iter()
        .map(|(_, d, _)| *d)
        .chain(prec.map(|(_, d)| d))
        .fold(1, lcm_u32);
    let p = prec.map(|(a, d)| a * (ram / d) as i64);
    Ok(PuiseuxSeries::from_terms(
        ram,
        p,
        entries.into_iter().map(|(e, d, c)| (e * (ram / d) as i64, c)),
    ))
}

/// Compact single-line rendering without the truncation term.
pub fn render_human(s: &PuiseuxSeries) -> String {
    let terms: Vec<String> = s
        .terms()
        .map(|(e, c)| {
            let cs = c.pretty();
            if e == 0 {
                return cs;
            }
            let g = e.gcd(&(s.ramification() as i64));
            let (a, d) = (e / g, s.ramification() as i64 / g);
            let q = if d == 1 { format!("q^{a}") } else { format!("q^({a}/{d})") };
            if c.is_one() {
                q
            } else if cs.contains(' ') {
                format!("({cs})*{q}")
            } else {
                format!("{cs}*{q}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl PuiseuxSeries {
    pub fn render_canonical(&self) -> String {
        render_canonical(self)
    }

    pub fn render_inline(&self) -> String {
        render_human(self)
    }
}
