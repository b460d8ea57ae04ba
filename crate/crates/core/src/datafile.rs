//! JSON data files: groups, cocycles and orbifold fixed-point data.
//!
//! Every invariant violation is reported as [`Error::Input`] with a field
//! path such as `sectors[3].components[0].normal_lines[1].a`.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use crate::cohom::Cocycle2;
use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, Rational};
use crate::genus::{FixedComponent, NormalLine, OrbifoldData};
use crate::groups::{CommutingPair, FiniteGroup};
use crate::series::LinearForm;

/// A parsed data file.
#[derive(Clone, Debug)]
pub enum DataFile {
    Group(FiniteGroup),
    Cocycle(Cocycle2),
    Orbifold(OrbifoldData),
}

impl DataFile {
    pub fn kind(&self) -> &'static str {
        match self {
            DataFile::Group(_) => "group",
            DataFile::Cocycle(_) => "cocycle",
            DataFile::Orbifold(_) => "orbifold",
        }
    }
}

/// Reads and validates a data file, deciding its kind from the top-level keys.
pub fn parse_datafile(path: &Path) -> Result<DataFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_str(&text).map_err(|e| match e {
        Error::Input { path: field, message } => Error::input(format!("{}: {field}", path.display()), message),
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// As [`parse_datafile`] on the contents of a file.
pub fn parse_str(text: &str) -> Result<DataFile> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let obj = as_object(&root, "$")?;
    if obj.contains_key("ambient") || obj.contains_key("sectors") {
        orbifold(obj).map(DataFile::Orbifold)
    } else if obj.contains_key("modulus") {
        cocycle(obj).map(DataFile::Cocycle)
    } else {
        group(&root, "$").map(DataFile::Group)
    }
}

pub fn parse_group_str(text: &str) -> Result<FiniteGroup> {
    match parse_str(text)? {
        DataFile::Group(g) => Ok(g),
        other => Err(Error::input("$", format!("expected a group file, found a {} file", other.kind()))),
    }
}

pub fn parse_orbifold_str(text: &str) -> Result<OrbifoldData> {
    match parse_str(text)? {
        DataFile::Orbifold(d) => Ok(d),
        other => Err(Error::input("$", format!("expected an orbifold file, found a {} file", other.kind()))),
    }
}

pub fn parse_cocycle_str(text: &str) -> Result<Cocycle2> {
    match parse_str(text)? {
        DataFile::Cocycle(c) => Ok(c),
        other => Err(Error::input("$", format!("expected a cocycle file, found a {} file", other.kind()))),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::input(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::input(path, "expected an array"))
}

fn as_int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::input(path, "expected an integer"))
}

fn as_u32(v: &Value, path: &str) -> Result<u32> {
    let x = as_int(v, path)?;
    u32::try_from(x).map_err(|_| Error::input(path, format!("expected a non-negative integer, found {x}")))
}

fn as_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::Number(_) => Ok(Rational::from_integer(as_int(v, path)?.into())),
        Value::String(s) => parse_rational(s).map_err(|_| Error::input(path, format!("{s:?} is not a rational number"))),
        _ => Err(Error::input(path, "expected an integer or a rational string such as \"1/2\"")),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::input(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path == "$" {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::input(join(path, k), "unknown field"));
        }
    }
    Ok(())
}

fn group(v: &Value, path: &str) -> Result<FiniteGroup> {
    let obj = as_object(v, path)?;
    check_keys(obj, &["abelian", "table"], path)?;
    match (obj.get("abelian"), obj.get("table")) {
        (None, None) => Ok(FiniteGroup::trivial()),
        (Some(_), Some(_)) => Err(Error::input(path, "give either \"abelian\" or \"table\", not both")),
        (Some(orders), None) => {
            let p = join(path, "abelian");
            let orders = as_array(orders, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| as_u32(x, &format!("{p}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::abelian(&orders).map_err(|e| Error::input(p, e.to_string()))
        }
        (None, Some(table)) => {
            let p = join(path, "table");
            let t = as_object(table, &p)?;
            check_keys(t, &["elements", "mul"], &p)?;
            let ep = join(&p, "elements");
            let labels = as_array(field(t, "elements", &p)?, &ep)?
                .iter()
                .enumerate()
                .map(|(i, x)| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(Error::input(format!("{ep}[{i}]"), "expected a label")),
                })
                .collect::<Result<Vec<_>>>()?;
            let mp = join(&p, "mul");
            let rows = as_array(field(t, "mul", &p)?, &mp)?;
            let mut mul = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let rp = format!("{mp}[{i}]");
                let row = as_array(row, &rp)?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| element_ref(x, &labels, &format!("{rp}[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                mul.push(row);
            }
            FiniteGroup::from_table(labels, mul).map_err(|e| Error::input(p, e.to_string()))
        }
    }
}

/// A table entry: an index or an element label.
fn element_ref(v: &Value, labels: &[String], path: &str) -> Result<usize> {
    match v {
        Value::Number(_) => {
            let i = as_int(v, path)?;
            usize::try_from(i)
                .ok()
                .filter(|i| *i < labels.len())
                .ok_or_else(|| Error::input(path, format!("element index {i} out of range")))
        }
        Value::String(s) => labels
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| Error::input(path, format!("unknown element {s:?}"))),
        _ => Err(Error::input(path, "expected an element index or label")),
    }
}

/// A group element: an index (for cyclic groups, the residue), a component
/// vector for abelian presentations, or a label for Cayley tables.
fn element(g: &FiniteGroup, v: &Value, path: &str) -> Result<usize> {
    match v {
        Value::Array(xs) => {
            let comps = xs
                .iter()
                .enumerate()
                .map(|(i, x)| as_int(x, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            g.element(&comps).map_err(|e| Error::input(path, e.to_string()))
        }
        Value::String(s) => (0..g.order())
            .find(|&a| g.label(a) == *s)
            .ok_or_else(|| Error::input(path, format!("unknown element {s:?}"))),
        _ => {
            let i = as_int(v, path)?;
            usize::try_from(i)
                .ok()
                .filter(|i| *i < g.order())
                .ok_or_else(|| Error::input(path, format!("element index {i} out of range")))
        }
    }
}

fn cocycle(obj: &Map<String, Value>) -> Result<Cocycle2> {
    check_keys(obj, &["group", "modulus", "table"], "$")?;
    let g = match obj.get("group") {
        Some(v) => group(v, "group")?,
        None => FiniteGroup::trivial(),
    };
    let n = as_u32(field(obj, "modulus", "$")?, "modulus")?;
    if n == 0 {
        return Err(Error::input("modulus", "must be positive"));
    }
    let rows = as_array(field(obj, "table", "$")?, "table")?;
    let mut table = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("table[{i}]");
        table.push(
            as_array(row, &rp)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_int(x, &format!("{rp}[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if table.len() != g.order() || table.iter().any(|r| r.len() != g.order()) {
        return Err(Error::input("table", format!("expected a {0}×{0} table", g.order())));
    }
    if let Some((a, b, c)) = crate::cohom::cocycle_violation(&g, n, &table) {
        return Err(Error::input(
            "table",
            format!(
                "cocycle identity fails at ({}, {}, {})",
                g.label(a),
                g.label(b),
                g.label(c)
            ),
        ));
    }
    Cocycle2::new(g, n, table).map_err(|e| Error::input("table", e.to_string()))
}

fn linear_form(v: &Value, path: &str) -> Result<LinearForm> {
    let coeffs = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_rational(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearForm::new(coeffs))
}

fn component(v: &Value, path: &str) -> Result<FixedComponent> {
    let obj = as_object(v, path)?;
    check_keys(
        obj,
        &["name", "dim", "generators", "tangent_roots", "normal_lines", "integral"],
        path,
    )?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::input(join(path, "name"), "expected a string")),
        None => path.to_string(),
    };
    let dim = as_u32(field(obj, "dim", path)?, &join(path, "dim"))?;
    let gp = join(path, "generators");
    let generators = match obj.get("generators") {
        None => Vec::new(),
        Some(v) => as_array(v, &gp)?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::input(format!("{gp}[{i}]"), "expected a generator name"))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let tp = join(path, "tangent_roots");
    let tangent_roots = match obj.get("tangent_roots") {
        None => Vec::new(),
        Some(v) => as_array(v, &tp)?
            .iter()
            .enumerate()
            .map(|(i, x)| linear_form(x, &format!("{tp}[{i}]")))
            .collect::<Result<Vec<_>>>()?,
    };
    let np = join(path, "normal_lines");
    let mut normal_lines = Vec::new();
    if let Some(v) = obj.get("normal_lines") {
        for (i, line) in as_array(v, &np)?.iter().enumerate() {
            let lp = format!("{np}[{i}]");
            let l = as_object(line, &lp)?;
            check_keys(l, &["root", "a", "b", "lifts"], &lp)?;
            let root = match l.get("root") {
                Some(r) => linear_form(r, &join(&lp, "root"))?,
                None if generators.is_empty() => LinearForm::new(Vec::new()),
                None => return Err(Error::input(join(&lp, "root"), "missing field")),
            };
            let a = as_int(field(l, "a", &lp)?, &join(&lp, "a"))?;
            let b = as_int(field(l, "b", &lp)?, &join(&lp, "b"))?;
            let lift = match l.get("lifts") {
                None => None,
                Some(x) => {
                    let fp = join(&lp, "lifts");
                    let o = as_object(x, &fp)?;
                    check_keys(o, &["A", "B"], &fp)?;
                    Some((
                        as_int(field(o, "A", &fp)?, &join(&fp, "A"))?,
                        as_int(field(o, "B", &fp)?, &join(&fp, "B"))?,
                    ))
                }
            };
            normal_lines.push(NormalLine { root, a, b, lift });
        }
    }
    let ip = join(path, "integral");
    let integral = match obj.get("integral") {
        None if dim == 0 && generators.is_empty() => BTreeMap::from([(Vec::new(), Rational::from_integer(1.into()))]),
        None => return Err(Error::input(ip, "missing field")),
        Some(v) => {
            let mut out = BTreeMap::new();
            for (key, w) in as_object(v, &ip)? {
                let kp = format!("{ip}[{key:?}]");
                let idx = if key.trim().is_empty() {
                    Vec::new()
                } else {
                    key.split(',')
                        .map(|e| {
                            e.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::input(&kp, "keys are comma-separated exponent vectors such as \"1,0\""))
                        })
                        .collect::<Result<Vec<_>>>()?
                };
                out.insert(idx, as_rational(w, &kp)?);
            }
            out
        }
    };
    Ok(FixedComponent {
        name,
        dim,
        generators,
        tangent_roots,
        normal_lines,
        integral,
    })
}

fn orbifold(obj: &Map<String, Value>) -> Result<OrbifoldData> {
    check_keys(obj, &["group", "ambient", "sectors"], "$")?;
    let g = match obj.get("group") {
        Some(v) => group(v, "group")?,
        None => FiniteGroup::trivial(),
    };
    let ambient = as_array(field(obj, "ambient", "$")?, "ambient")?
        .iter()
        .enumerate()
        .map(|(i, c)| component(c, &format!("ambient[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut sectors = BTreeMap::new();
    if let Some(v) = obj.get("sectors") {
        for (i, s) in as_array(v, "sectors")?.iter().enumerate() {
            let sp = format!("sectors[{i}]");
            let so = as_object(s, &sp)?;
            check_keys(so, &["g", "h", "components"], &sp)?;
            let a = element(&g, field(so, "g", &sp)?, &join(&sp, "g"))?;
            let b = element(&g, field(so, "h", &sp)?, &join(&sp, "h"))?;
            if !g.commute(a, b) {
                return Err(Error::input(sp, "g and h do not commute"));
            }
            let cp = join(&sp, "components");
            let comps = as_array(field(so, "components", &sp)?, &cp)?
                .iter()
                .enumerate()
                .map(|(j, c)| component(c, &format!("{cp}[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            if a == g.identity() && b == g.identity() {
                return Err(Error::input(sp, "the identity sector is given by the ambient block"));
            }
            if sectors.insert(CommutingPair::new(a, b), comps).is_some() {
                return Err(Error::input(sp, "duplicate sector for this pair"));
            }
        }
    }
    OrbifoldData::new(g, ambient, sectors)
}
