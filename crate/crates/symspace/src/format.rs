//! JSON encodings of every structure the tool reads or writes.
//!
//! Scalars over GF(p) are written as JSON numbers and rationals as strings
//! (`"a"` or `"a/b"`); either spelling is accepted on input. Pair-indexed
//! families use `"i,j"` object keys; absent keys in `theta` and `delta`
//! default to zero.

use serde_json::{json, Map, Value};
use thiserror::Error;

use symspace_core::corpus::{CorpusObject, Section};
use symspace_core::envelope::{LieAlgebra, LocalRegularSTriplet};
use symspace_core::lya::{InfSManifold, LieYamagutiAlgebra};
use symspace_core::module::{LinearQuandleModule, ModuleHom};
use symspace_core::quandle::FiniteQuandle;
use symspace_core::representation::{IsmRep, LyaRep};
use symspace_core::{Field, Matrix, Scalar};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn invalid(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        path: path.to_string(),
        message: message.into(),
    }
}

type Result<T> = std::result::Result<T, FormatError>;

/// A parsed input file.
#[derive(Debug, Clone)]
pub enum Structure {
    Quandle(FiniteQuandle),
    Module(LinearQuandleModule),
    Hom(ModuleHom),
    Lya {
        lya: LieYamagutiAlgebra,
        sigma: Option<Matrix>,
    },
    Lie(LieAlgebra),
    Triplet(LocalRegularSTriplet),
    Rep {
        rep: LyaRep,
        sigma: Option<Matrix>,
        psi: Option<Matrix>,
    },
    Section(Section),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Quandle(_) => "quandle",
            Structure::Module(_) => "module",
            Structure::Hom(_) => "hom",
            Structure::Lya { .. } => "lya",
            Structure::Lie(_) => "lie",
            Structure::Triplet(_) => "triplet",
            Structure::Rep { .. } => "rep",
            Structure::Section(_) => "section",
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = field_str(v, "kind", "$")?;
        Ok(match kind {
            "quandle" => Structure::Quandle(parse_quandle(v, "$")?),
            "module" => Structure::Module(parse_module(v, "$")?),
            "hom" => Structure::Hom(parse_hom(v, "$")?),
            "lya" => {
                let (lya, sigma) = parse_lya(v, "$")?;
                Structure::Lya { lya, sigma }
            }
            "lie" => Structure::Lie(parse_lie(v, "$")?),
            "triplet" => Structure::Triplet(parse_triplet(v, "$")?),
            "rep" => {
                let (rep, sigma, psi) = parse_rep(v, "$")?;
                Structure::Rep { rep, sigma, psi }
            }
            "section" => Structure::Section(parse_section(v, "$")?),
            other => return Err(FormatError::UnknownKind(other.to_string())),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Structure::Quandle(q) => quandle_json(q),
            Structure::Module(m) => module_json(m),
            Structure::Hom(h) => hom_json(h),
            Structure::Lya { lya, sigma } => lya_json(lya, sigma.as_ref()),
            Structure::Lie(l) => lie_json(l),
            Structure::Triplet(t) => triplet_json(t),
            Structure::Rep { rep, sigma, psi } => rep_json(rep, sigma.as_ref(), psi.as_ref()),
            Structure::Section(s) => section_json(s),
        }
    }
}

impl From<CorpusObject> for Structure {
    fn from(o: CorpusObject) -> Self {
        match o {
            CorpusObject::Quandle(q) => Structure::Quandle(q),
            CorpusObject::Module(m) => Structure::Module(m),
            CorpusObject::Section(s) => Structure::Section(s),
            CorpusObject::ModuleHom(h) => Structure::Hom(h),
            CorpusObject::Ism(t) => Structure::Lya {
                lya: t.lya,
                sigma: Some(t.sigma),
            },
            CorpusObject::Rep(r) => Structure::Rep {
                rep: r.rep,
                sigma: Some(r.sigma),
                psi: Some(r.psi),
            },
        }
    }
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| invalid(path, format!("missing field {key:?}")))
}

fn field_str<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str> {
    get(v, key, path)?
        .as_str()
        .ok_or_else(|| invalid(&format!("{path}.{key}"), "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| invalid(path, "expected a non-negative integer"))
}

fn field_usize(v: &Value, key: &str, path: &str) -> Result<usize> {
    as_usize(get(v, key, path)?, &format!("{path}.{key}"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| invalid(path, "expected an array"))
}

pub fn parse_field(v: &Value, path: &str) -> Result<Field> {
    let s = v
        .as_str()
        .ok_or_else(|| invalid(path, "expected a field descriptor string"))?;
    s.parse()
        .map_err(|e: symspace_core::scalar::ScalarError| invalid(path, e.to_string()))
}

pub fn scalar_json(s: &Scalar) -> Value {
    match s.residue() {
        Some(r) => json!(r),
        None => json!(s.to_string()),
    }
}

pub fn parse_scalar(field: Field, v: &Value, path: &str) -> Result<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(invalid(path, "expected an integer or a string scalar")),
    };
    field
        .parse_scalar(&text)
        .map_err(|e| invalid(path, e.to_string()))
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn parse_vector(field: Field, len: usize, v: &Value, path: &str) -> Result<Vec<Scalar>> {
    let a = as_array(v, path)?;
    if a.len() != len {
        return Err(invalid(
            path,
            format!("expected {len} entries, found {}", a.len()),
        ));
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| parse_scalar(field, x, &format!("{path}[{i}]")))
        .collect()
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_json(r)).collect())
}

pub fn parse_matrix(
    field: Field,
    rows: usize,
    cols: usize,
    v: &Value,
    path: &str,
) -> Result<Matrix> {
    let a = as_array(v, path)?;
    if a.len() != rows {
        return Err(invalid(
            path,
            format!("expected {rows} rows, found {}", a.len()),
        ));
    }
    let data = a
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(field, cols, r, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, cols, data).map_err(|e| invalid(path, e.to_string()))
}

fn square(field: Field, n: usize, v: &Value, path: &str) -> Result<Matrix> {
    parse_matrix(field, n, n, v, path)
}

fn pair_key(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

fn parse_pair_key(k: &str, n: usize, path: &str) -> Result<(usize, usize)> {
    let bad = || invalid(path, format!("bad pair key {k:?}"));
    let (a, b) = k.split_once(',').ok_or_else(bad)?;
    let (i, j): (usize, usize) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if i >= n || j >= n {
        return Err(bad());
    }
    Ok((i, j))
}

/// A `"i,j"`-keyed family of matrices, `shape(i, j)` giving each block's shape.
fn parse_pair_family(
    field: Field,
    n: usize,
    v: &Value,
    path: &str,
    shape: impl Fn(usize, usize) -> (usize, usize),
    required: bool,
) -> Result<Vec<Matrix>> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid(path, "expected an object keyed by \"i,j\""))?;
    let mut out: Vec<Option<Matrix>> = vec![None; n * n];
    for (k, m) in obj {
        let (i, j) = parse_pair_key(k, n, path)?;
        let (r, c) = shape(i, j);
        out[i * n + j] = Some(parse_matrix(field, r, c, m, &format!("{path}[{k:?}]"))?);
    }
    out.into_iter()
        .enumerate()
        .map(|(idx, m)| match m {
            Some(m) => Ok(m),
            None if !required => {
                let (r, c) = shape(idx / n, idx % n);
                Ok(Matrix::zeros(field, r, c))
            }
            None => Err(invalid(
                path,
                format!("missing key {:?}", pair_key(idx / n, idx % n)),
            )),
        })
        .collect()
}

fn pair_family_json(n: usize, fam: &[Matrix], skip_zero: bool) -> Value {
    let mut obj = Map::new();
    for i in 0..n {
        for j in 0..n {
            let m = &fam[i * n + j];
            if !(skip_zero && m.is_zero()) {
                obj.insert(pair_key(i, j), matrix_json(m));
            }
        }
    }
    Value::Object(obj)
}

pub fn quandle_json(q: &FiniteQuandle) -> Value {
    let mut v = json!({"kind": "quandle", "size": q.size(), "table": q.rows()});
    if q.is_rack_only() {
        v["rack"] = json!(true);
    }
    v
}

pub fn parse_quandle(v: &Value, path: &str) -> Result<FiniteQuandle> {
    let n = field_usize(v, "size", path)?;
    let table = as_array(get(v, "table", path)?, &format!("{path}.table"))?;
    if table.len() != n {
        return Err(invalid(
            &format!("{path}.table"),
            format!("expected {n} rows"),
        ));
    }
    let rows = table
        .iter()
        .enumerate()
        .map(|(x, r)| {
            let p = format!("{path}.table[{x}]");
            let r = as_array(r, &p)?;
            if r.len() != n {
                return Err(invalid(&p, format!("expected {n} entries")));
            }
            r.iter()
                .map(|e| as_usize(e, &p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rack = v.get("rack").and_then(Value::as_bool).unwrap_or(false);
    FiniteQuandle::new_unverified(rows, rack)
        .map_err(|e| invalid(&format!("{path}.table"), e.to_string()))
}

pub fn module_json(m: &LinearQuandleModule) -> Value {
    let n = m.quandle().size();
    let mut eta = Map::new();
    let mut tau = Map::new();
    for x in 0..n {
        for y in 0..n {
            eta.insert(pair_key(x, y), matrix_json(m.eta(x, y)));
            tau.insert(pair_key(x, y), matrix_json(m.tau(x, y)));
        }
    }
    let mut v = json!({
        "kind": "module",
        "quandle": quandle_json(m.quandle()),
        "field": m.field().to_string(),
        "dims": m.dims(),
        "eta": eta,
        "tau": tau,
    });
    if m.is_rack_module() {
        v["rack_module"] = json!(true);
    }
    v
}

pub fn parse_module(v: &Value, path: &str) -> Result<LinearQuandleModule> {
    let q = parse_quandle(get(v, "quandle", path)?, &format!("{path}.quandle"))?;
    let field = parse_field(get(v, "field", path)?, &format!("{path}.field"))?;
    let n = q.size();
    let dims = as_array(get(v, "dims", path)?, &format!("{path}.dims"))?
        .iter()
        .map(|d| as_usize(d, &format!("{path}.dims")))
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != n {
        return Err(invalid(
            &format!("{path}.dims"),
            format!("expected {n} dimensions"),
        ));
    }
    let eta = parse_pair_family(
        field,
        n,
        get(v, "eta", path)?,
        &format!("{path}.eta"),
        |x, y| (dims[q.op(x, y)], dims[y]),
        true,
    )?;
    let tau = parse_pair_family(
        field,
        n,
        get(v, "tau", path)?,
        &format!("{path}.tau"),
        |x, y| (dims[q.op(x, y)], dims[x]),
        true,
    )?;
    let rack = v
        .get("rack_module")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    LinearQuandleModule::new(q, field, dims, eta, tau, rack)
        .map_err(|e| invalid(path, e.to_string()))
}

pub fn hom_json(h: &ModuleHom) -> Value {
    json!({
        "kind": "hom",
        "source": module_json(&h.source),
        "target": module_json(&h.target),
        "maps": h.maps.iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

pub fn parse_hom(v: &Value, path: &str) -> Result<ModuleHom> {
    let source = parse_module(get(v, "source", path)?, &format!("{path}.source"))?;
    let target = parse_module(get(v, "target", path)?, &format!("{path}.target"))?;
    let maps_v = as_array(get(v, "maps", path)?, &format!("{path}.maps"))?;
    if maps_v.len() != source.dims().len() {
        return Err(invalid(
            &format!("{path}.maps"),
            format!("expected {} maps", source.dims().len()),
        ));
    }
    let maps = maps_v
        .iter()
        .enumerate()
        .map(|(x, m)| {
            parse_matrix(
                source.field(),
                target.dims()[x],
                source.dims()[x],
                m,
                &format!("{path}.maps[{x}]"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleHom::new(source, target, maps).map_err(|e| invalid(path, e.to_string()))
}

pub fn lya_json(t: &LieYamagutiAlgebra, sigma: Option<&Matrix>) -> Value {
    let n = t.dim();
    let star: Vec<Vec<Value>> = (0..n)
        .map(|i| (0..n).map(|j| vector_json(t.star_basis(i, j))).collect())
        .collect();
    let triple: Vec<Vec<Vec<Value>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| vector_json(t.triple_basis(i, j, k)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut v = json!({"kind": "lya", "field": t.field().to_string(), "dim": n, "star": star, "triple": triple});
    if let Some(s) = sigma {
        v["sigma"] = matrix_json(s);
    }
    v
}

pub fn parse_lya(v: &Value, path: &str) -> Result<(LieYamagutiAlgebra, Option<Matrix>)> {
    let field = parse_field(get(v, "field", path)?, &format!("{path}.field"))?;
    let n = field_usize(v, "dim", path)?;
    let star_v = get(v, "star", path)?;
    let triple_v = get(v, "triple", path)?;
    let mut star = Vec::with_capacity(n * n);
    let mut triple = Vec::with_capacity(n * n * n);
    let idx = |v: &Value, i: usize, p: &str| -> Result<Value> {
        let a = as_array(v, p)?;
        if a.len() != n {
            return Err(invalid(p, format!("expected {n} entries")));
        }
        Ok(a[i].clone())
    };
    for i in 0..n {
        let si = idx(star_v, i, &format!("{path}.star"))?;
        let ti = idx(triple_v, i, &format!("{path}.triple"))?;
        for j in 0..n {
            let p = format!("{path}.star[{i}][{j}]");
            star.push(parse_vector(field, n, &idx(&si, j, &p)?, &p)?);
            let tij = idx(&ti, j, &format!("{path}.triple[{i}]"))?;
            for k in 0..n {
                let p = format!("{path}.triple[{i}][{j}][{k}]");
                triple.push(parse_vector(field, n, &idx(&tij, k, &p)?, &p)?);
            }
        }
    }
    let lya = LieYamagutiAlgebra::new(field, n, star, triple)
        .map_err(|e| invalid(path, e.to_string()))?;
    let sigma = v
        .get("sigma")
        .filter(|s| !s.is_null())
        .map(|s| square(field, n, s, &format!("{path}.sigma")))
        .transpose()?;
    Ok((lya, sigma))
}

pub fn lie_json(l: &LieAlgebra) -> Value {
    let n = l.dim();
    let bracket: Vec<Vec<Value>> = (0..n)
        .map(|i| (0..n).map(|j| vector_json(l.bracket_basis(i, j))).collect())
        .collect();
    json!({"kind": "lie", "field": l.field().to_string(), "dim": n, "bracket": bracket})
}

pub fn parse_lie(v: &Value, path: &str) -> Result<LieAlgebra> {
    let field = parse_field(get(v, "field", path)?, &format!("{path}.field"))?;
    let n = field_usize(v, "dim", path)?;
    let rows = as_array(get(v, "bracket", path)?, &format!("{path}.bracket"))?;
    if rows.len() != n {
        return Err(invalid(
            &format!("{path}.bracket"),
            format!("expected {n} rows"),
        ));
    }
    let mut bracket = Vec::with_capacity(n * n);
    for (i, r) in rows.iter().enumerate() {
        let r = as_array(r, &format!("{path}.bracket[{i}]"))?;
        if r.len() != n {
            return Err(invalid(
                &format!("{path}.bracket[{i}]"),
                format!("expected {n} entries"),
            ));
        }
        for (j, e) in r.iter().enumerate() {
            bracket.push(parse_vector(
                field,
                n,
                e,
                &format!("{path}.bracket[{i}][{j}]"),
            )?);
        }
    }
    LieAlgebra::new(field, n, bracket).map_err(|e| invalid(path, e.to_string()))
}

pub fn triplet_json(t: &LocalRegularSTriplet) -> Value {
    json!({"kind": "triplet", "lie": lie_json(&t.lie), "phi": matrix_json(&t.phi)})
}

pub fn parse_triplet(v: &Value, path: &str) -> Result<LocalRegularSTriplet> {
    let lie = parse_lie(get(v, "lie", path)?, &format!("{path}.lie"))?;
    let phi = square(
        lie.field(),
        lie.dim(),
        get(v, "phi", path)?,
        &format!("{path}.phi"),
    )?;
    Ok(LocalRegularSTriplet { lie, phi })
}

pub fn rep_json(rep: &LyaRep, sigma: Option<&Matrix>, psi: Option<&Matrix>) -> Value {
    let n = rep.lya.dim();
    let mut v = json!({
        "kind": "rep",
        "lya": lya_json(&rep.lya, sigma),
        "dimV": rep.dim_v,
        "rho": rep.rho.iter().map(matrix_json).collect::<Vec<_>>(),
        "theta": pair_family_json(n, &rep.theta, true),
        "delta": pair_family_json(n, &rep.delta, true),
    });
    if let Some(p) = psi {
        v["psi"] = matrix_json(p);
    }
    v
}

pub fn parse_rep(v: &Value, path: &str) -> Result<(LyaRep, Option<Matrix>, Option<Matrix>)> {
    let (lya, sigma) = parse_lya(get(v, "lya", path)?, &format!("{path}.lya"))?;
    let field = lya.field();
    let n = lya.dim();
    let d = field_usize(v, "dimV", path)?;
    let rho_v = as_array(get(v, "rho", path)?, &format!("{path}.rho"))?;
    if rho_v.len() != n {
        return Err(invalid(
            &format!("{path}.rho"),
            format!("expected {n} matrices"),
        ));
    }
    let rho = rho_v
        .iter()
        .enumerate()
        .map(|(i, m)| square(field, d, m, &format!("{path}.rho[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let empty = Value::Object(Map::new());
    let theta = parse_pair_family(
        field,
        n,
        v.get("theta").unwrap_or(&empty),
        &format!("{path}.theta"),
        |_, _| (d, d),
        false,
    )?;
    let delta = parse_pair_family(
        field,
        n,
        v.get("delta").unwrap_or(&empty),
        &format!("{path}.delta"),
        |_, _| (d, d),
        false,
    )?;
    let psi = v
        .get("psi")
        .filter(|s| !s.is_null())
        .map(|p| square(field, d, p, &format!("{path}.psi")))
        .transpose()?;
    let rep = LyaRep::new(lya, d, rho, theta, delta).map_err(|e| invalid(path, e.to_string()))?;
    Ok((rep, sigma, psi))
}

pub fn section_json(s: &Section) -> Value {
    json!({
        "kind": "section",
        "module": module_json(&s.module),
        "values": s.values.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
    })
}

pub fn parse_section(v: &Value, path: &str) -> Result<Section> {
    let module = parse_module(get(v, "module", path)?, &format!("{path}.module"))?;
    let vals = as_array(get(v, "values", path)?, &format!("{path}.values"))?;
    if vals.len() != module.dims().len() {
        return Err(invalid(
            &format!("{path}.values"),
            "one value per base point",
        ));
    }
    let values = vals
        .iter()
        .enumerate()
        .map(|(x, e)| {
            parse_vector(
                module.field(),
                module.dims()[x],
                e,
                &format!("{path}.values[{x}]"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Section { module, values })
}

/// An ISM representation from parsed parts; `σ` and `ψ` are both required.
pub fn ism_rep(rep: LyaRep, sigma: Option<Matrix>, psi: Option<Matrix>) -> Result<IsmRep> {
    let sigma = sigma.ok_or_else(|| {
        invalid(
            "$.lya.sigma",
            "required for an infinitesimal s-manifold representation",
        )
    })?;
    let psi = psi.ok_or_else(|| {
        invalid(
            "$.psi",
            "required for an infinitesimal s-manifold representation",
        )
    })?;
    IsmRep::new(rep, sigma, psi).map_err(|e| invalid("$", e.to_string()))
}

pub fn ism(lya: LieYamagutiAlgebra, sigma: Option<Matrix>) -> Result<InfSManifold> {
    let sigma = sigma.ok_or_else(|| invalid("$.sigma", "required"))?;
    InfSManifold::new(lya, sigma).map_err(|e| invalid("$.sigma", e.to_string()))
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use symspace_core::corpus::{build, list};

    #[test]
    fn scalars_both_spellings() {
        let f = Field::Prime(5);
        assert_eq!(parse_scalar(f, &json!(7), "x").unwrap(), f.from_i64(2));
        assert_eq!(parse_scalar(f, &json!("-1"), "x").unwrap(), f.from_i64(4));
        let q = Field::Rational;
        assert_eq!(
            parse_scalar(q, &json!("3/6"), "x").unwrap(),
            q.ratio(1, 2).unwrap()
        );
        assert_eq!(scalar_json(&q.ratio(-1, 2).unwrap()), json!("-1/2"));
        assert_eq!(scalar_json(&f.from_i64(3)), json!(3));
        assert!(parse_scalar(q, &json!(1.5), "x").is_err());
    }

    #[test]
    fn corpus_round_trips_through_json() {
        for name in list() {
            let s: Structure = build(&name).unwrap().object.into();
            let v = s.to_json();
            let back = Structure::from_json(&v).unwrap();
            assert_eq!(back.to_json(), v, "{name}");
        }
    }

    #[test]
    fn errors_name_the_path() {
        let v = json!({"kind": "quandle", "size": 2, "table": [[0, 1], [0]]});
        let e = Structure::from_json(&v).unwrap_err().to_string();
        assert!(e.contains("$.table[1]"), "{e}");
        assert!(matches!(
            Structure::from_json(&json!({"kind": "nope"})),
            Err(FormatError::UnknownKind(_))
        ));
    }
}
