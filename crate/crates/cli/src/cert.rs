//! Certificate documents: JSON builders and the parsed form consumed by the
//! verifier.
//!
//! Two document kinds share a common envelope (`kind`, `algebra`, `group`,
//! `i0`, `order`, per-degree `basis` labels, `maps`):
//!
//! * `"kind": "contraction"` — a differential `d`, a degree `-1` homotopy
//!   `sigma`, and the flat coefficient list `mcoeffs` of
//!   `[source label, target label, coefficient]` triples that determine
//!   `sigma` entry by entry.
//! * `"kind": "equivalence"` — two complexes (`d_src` on `basis`, `d_dst` on
//!   `dst_basis`) with a projection `p`, a section `g`, and a homotopy `k`
//!   witnessing `p∘g = id` and `id - g∘p = d∘k + k∘d`.
//!
//! Generator indices and `order` entries are 1-based in the documents.
//! All scalars are strings (integers or `a/b` rationals) except in Hecke
//! certificates, where a scalar is a monomial→coefficient object over the
//! parameter names listed in `params`.

use coxcert_core::chain::{ChainMap, Complex, EquivCert, SparseMat};
use coxcert_core::ring::{Laurent, Rat, Ring};
use serde_json::{Map, Value};

use crate::scalar::{
    chainmap_from_value, chainmap_to_value, int_to_value, laurent_from_value, laurent_to_value,
    mat_from_value, mat_to_value, rat_from_value, rat_to_value,
};

pub const KIND_CONTRACTION: &str = "contraction";
pub const KIND_EQUIVALENCE: &str = "equivalence";

pub fn mask_to_list(mask: u32) -> Vec<usize> {
    (0..32).filter(|s| mask & (1 << s) != 0).map(|s| s + 1).collect()
}

fn list_value(list: &[usize]) -> Value {
    Value::Array(list.iter().map(|&s| Value::from(s as u64)).collect())
}

fn degree_object(labels: &[Vec<String>]) -> Value {
    let mut obj = Map::new();
    for (k, v) in labels.iter().enumerate() {
        let arr = v.iter().map(|s| Value::String(s.clone())).collect();
        obj.insert(k.to_string(), Value::Array(arr));
    }
    Value::Object(obj)
}

fn degree_labels(v: &Value) -> Option<Vec<Vec<String>>> {
    let obj = v.as_object()?;
    let mut out = vec![Vec::new(); obj.len()];
    for (key, arr) in obj {
        let k: usize = key.parse().ok()?;
        if k >= out.len() {
            return None;
        }
        let labels = arr
            .as_array()?
            .iter()
            .map(|l| l.as_str().map(String::from))
            .collect::<Option<Vec<_>>>()?;
        out[k] = labels;
    }
    Some(out)
}

/// Build a contraction certificate from a verified homotopy.
pub fn contraction_document(
    group: &str,
    i0: u32,
    order: &[usize],
    basis: &[Vec<String>],
    d: &Complex<i128>,
    sigma: &ChainMap<i128>,
    mcoeffs: &[(String, String, i128)],
) -> Value {
    let enc = |n: &i128| int_to_value(*n);
    let mut maps = Map::new();
    maps.insert(
        String::from("d"),
        Value::Array(d.d.iter().map(|m| mat_to_value(m, &enc)).collect()),
    );
    maps.insert(String::from("sigma"), chainmap_to_value(sigma, &enc));

    let mc: Vec<Value> = mcoeffs
        .iter()
        .map(|(a, b, m)| {
            Value::Array(vec![
                Value::String(a.clone()),
                Value::String(b.clone()),
                Value::String(m.to_string()),
            ])
        })
        .collect();

    let mut obj = Map::new();
    obj.insert(String::from("kind"), Value::String(KIND_CONTRACTION.into()));
    obj.insert(String::from("algebra"), Value::String(String::from("coxeter")));
    obj.insert(String::from("group"), Value::String(group.into()));
    obj.insert(String::from("i0"), list_value(&mask_to_list(i0)));
    obj.insert(
        String::from("order"),
        list_value(&order.iter().map(|&s| s + 1).collect::<Vec<_>>()),
    );
    obj.insert(String::from("basis"), degree_object(basis));
    obj.insert(String::from("maps"), Value::Object(maps));
    obj.insert(String::from("mcoeffs"), Value::Array(mc));
    Value::Object(obj)
}

/// Build an equivalence certificate from a verified split equivalence.
#[allow(clippy::too_many_arguments)]
pub fn equivalence_document<R: Ring>(
    algebra: &str,
    group: &str,
    i0: u32,
    order: &[usize],
    params: &[String],
    basis: &[Vec<String>],
    dst_basis: &[Vec<String>],
    src: &Complex<R>,
    dst: &Complex<R>,
    cert: &EquivCert<R>,
    enc: &impl Fn(&R) -> Value,
) -> Value {
    let mats = |c: &Complex<R>| -> Value {
        Value::Array(c.d.iter().map(|m| mat_to_value(m, enc)).collect())
    };
    let mut maps = Map::new();
    maps.insert(String::from("d_src"), mats(src));
    maps.insert(String::from("d_dst"), mats(dst));
    maps.insert(String::from("p"), chainmap_to_value(&cert.p, enc));
    maps.insert(String::from("g"), chainmap_to_value(&cert.g, enc));
    maps.insert(String::from("k"), chainmap_to_value(&cert.k, enc));

    let mut obj = Map::new();
    obj.insert(String::from("kind"), Value::String(KIND_EQUIVALENCE.into()));
    obj.insert(String::from("algebra"), Value::String(algebra.into()));
    obj.insert(String::from("group"), Value::String(group.into()));
    obj.insert(String::from("i0"), list_value(&mask_to_list(i0)));
    obj.insert(
        String::from("order"),
        list_value(&order.iter().map(|&s| s + 1).collect::<Vec<_>>()),
    );
    if !params.is_empty() {
        obj.insert(
            String::from("params"),
            Value::Array(params.iter().map(|p| Value::String(p.clone())).collect()),
        );
    }
    obj.insert(String::from("basis"), degree_object(basis));
    obj.insert(String::from("dst_basis"), degree_object(dst_basis));
    obj.insert(String::from("maps"), Value::Object(maps));
    Value::Object(obj)
}

pub struct ContractionCert {
    pub group: String,
    /// 0-based generator mask.
    pub i0: u32,
    /// 0-based generator sequence.
    pub order: Vec<usize>,
    pub basis: Vec<Vec<String>>,
    pub d: Vec<SparseMat<i128>>,
    pub sigma: ChainMap<i128>,
    pub mcoeffs: Vec<(String, String, i128)>,
}

pub struct EquivalenceCert<R> {
    pub algebra: String,
    pub group: String,
    pub i0: u32,
    pub order: Vec<usize>,
    pub params: Vec<String>,
    pub basis: Vec<Vec<String>>,
    pub dst_basis: Vec<Vec<String>>,
    pub d_src: Vec<SparseMat<R>>,
    pub d_dst: Vec<SparseMat<R>>,
    pub maps: EquivCert<R>,
}

pub enum Cert {
    Contraction(ContractionCert),
    /// Hecke-algebra coefficients.
    Hecke(EquivalenceCert<Laurent>),
    /// Rational (or integral, read as rational) coefficients.
    Numeric(EquivalenceCert<Rat>),
}

fn field<'v>(obj: &'v Map<String, Value>, name: &str) -> Result<&'v Value, String> {
    obj.get(name).ok_or_else(|| format!("missing field `{name}`"))
}

fn str_field(obj: &Map<String, Value>, name: &str) -> Result<String, String> {
    Ok(field(obj, name)?
        .as_str()
        .ok_or_else(|| format!("field `{name}` must be a string"))?
        .to_string())
}

/// Parse a 1-based generator list into a 0-based mask.
fn gen_mask_field(obj: &Map<String, Value>, name: &str) -> Result<u32, String> {
    let arr = field(obj, name)?
        .as_array()
        .ok_or_else(|| format!("field `{name}` must be a list"))?;
    let mut mask = 0u32;
    for v in arr {
        let s = v
            .as_u64()
            .filter(|&s| (1..=32).contains(&s))
            .ok_or_else(|| format!("field `{name}` must list 1-based generator indices"))?;
        mask |= 1 << (s - 1);
    }
    Ok(mask)
}

fn order_field(obj: &Map<String, Value>) -> Result<Vec<usize>, String> {
    let arr = field(obj, "order")?
        .as_array()
        .ok_or_else(|| String::from("field `order` must be a list"))?;
    let mut out = Vec::with_capacity(arr.len());
    for v in arr {
        let s = v
            .as_u64()
            .filter(|&s| (1..=32).contains(&s))
            .ok_or_else(|| String::from("field `order` must list 1-based generator indices"))?;
        out.push(s as usize - 1);
    }
    Ok(out)
}

fn int_from_value(v: &Value) -> Option<i128> {
    v.as_str()?.parse::<i128>().ok()
}

fn mats_field<R: Ring>(
    maps: &Map<String, Value>,
    name: &str,
    dec: &impl Fn(&Value) -> Option<R>,
) -> Result<Vec<SparseMat<R>>, String> {
    let arr = field(maps, name)?
        .as_array()
        .ok_or_else(|| format!("map `{name}` must be a list of matrices"))?;
    arr.iter()
        .map(|m| mat_from_value(m, dec).ok_or_else(|| format!("malformed matrix in `{name}`")))
        .collect()
}

fn chainmap_field<R: Ring>(
    maps: &Map<String, Value>,
    name: &str,
    dec: &impl Fn(&Value) -> Option<R>,
) -> Result<ChainMap<R>, String> {
    chainmap_from_value(field(maps, name)?, dec)
        .ok_or_else(|| format!("malformed chain map `{name}`"))
}

/// Shape-check a differential against per-degree basis sizes.
fn check_d_shapes<R: Ring>(
    name: &str,
    d: &[SparseMat<R>],
    dims: &[usize],
) -> Result<(), String> {
    if d.len() + 1 != dims.len().max(1) {
        return Err(format!(
            "`{name}` has {} matrices for {} degrees",
            d.len(),
            dims.len()
        ));
    }
    for (k, m) in d.iter().enumerate() {
        if m.cols() != dims[k] || m.rows() != dims[k + 1] {
            return Err(format!(
                "`{name}[{k}]` is {}×{}, expected {}×{}",
                m.rows(),
                m.cols(),
                dims[k + 1],
                dims[k]
            ));
        }
    }
    Ok(())
}

fn check_map_shapes<R: Ring>(
    name: &str,
    f: &ChainMap<R>,
    dg: i32,
    src: &[usize],
    dst: &[usize],
) -> Result<(), String> {
    if f.dg != dg {
        return Err(format!("`{name}` must have degree {dg}, found {}", f.dg));
    }
    if f.mats.len() != src.len() {
        return Err(format!(
            "`{name}` has {} matrices for {} source degrees",
            f.mats.len(),
            src.len()
        ));
    }
    let dim = |dims: &[usize], k: i64| -> usize {
        if k < 0 { 0 } else { dims.get(k as usize).copied().unwrap_or(0) }
    };
    for (k, m) in f.mats.iter().enumerate() {
        let want_rows = dim(dst, k as i64 + dg as i64);
        if m.cols() != src[k] || m.rows() != want_rows {
            return Err(format!(
                "`{name}[{k}]` is {}×{}, expected {}×{}",
                m.rows(),
                m.cols(),
                want_rows,
                src[k]
            ));
        }
    }
    Ok(())
}

fn parse_equivalence<R: Ring>(
    obj: &Map<String, Value>,
    algebra: String,
    params: Vec<String>,
    dec: &impl Fn(&Value) -> Option<R>,
) -> Result<EquivalenceCert<R>, String> {
    let basis = degree_labels(field(obj, "basis")?)
        .ok_or_else(|| String::from("malformed `basis`"))?;
    let dst_basis = degree_labels(field(obj, "dst_basis")?)
        .ok_or_else(|| String::from("malformed `dst_basis`"))?;
    let maps = field(obj, "maps")?
        .as_object()
        .ok_or_else(|| String::from("field `maps` must be an object"))?;

    let d_src = mats_field(maps, "d_src", dec)?;
    let d_dst = mats_field(maps, "d_dst", dec)?;
    let p = chainmap_field(maps, "p", dec)?;
    let g = chainmap_field(maps, "g", dec)?;
    let k = chainmap_field(maps, "k", dec)?;

    let sdims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let tdims: Vec<usize> = dst_basis.iter().map(Vec::len).collect();
    check_d_shapes("d_src", &d_src, &sdims)?;
    check_d_shapes("d_dst", &d_dst, &tdims)?;
    check_map_shapes("p", &p, 0, &sdims, &tdims)?;
    check_map_shapes("g", &g, 0, &tdims, &sdims)?;
    check_map_shapes("k", &k, -1, &sdims, &sdims)?;

    Ok(EquivalenceCert {
        algebra,
        group: str_field(obj, "group")?,
        i0: gen_mask_field(obj, "i0")?,
        order: order_field(obj)?,
        params,
        basis,
        dst_basis,
        d_src,
        d_dst,
        maps: EquivCert { p, g, k },
    })
}

/// Parse and shape-check a certificate document. Errors mean the document is
/// malformed (a usage problem), not that a verification check failed.
pub fn parse_cert(v: &Value) -> Result<Cert, String> {
    let obj = v.as_object().ok_or_else(|| String::from("certificate must be a JSON object"))?;
    let kind = str_field(obj, "kind")?;
    let algebra = str_field(obj, "algebra")?;
    match (kind.as_str(), algebra.as_str()) {
        (KIND_CONTRACTION, "coxeter") => {
            let basis = degree_labels(field(obj, "basis")?)
                .ok_or_else(|| String::from("malformed `basis`"))?;
            let maps = field(obj, "maps")?
                .as_object()
                .ok_or_else(|| String::from("field `maps` must be an object"))?;
            let d = mats_field(maps, "d", &int_from_value)?;
            let sigma = chainmap_field(maps, "sigma", &int_from_value)?;
            let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
            check_d_shapes("d", &d, &dims)?;
            check_map_shapes("sigma", &sigma, -1, &dims, &dims)?;

            let mut mcoeffs = Vec::new();
            for entry in field(obj, "mcoeffs")?
                .as_array()
                .ok_or_else(|| String::from("field `mcoeffs` must be a list"))?
            {
                let t = entry
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| String::from("each `mcoeffs` entry must be a triple"))?;
                let a = t[0].as_str().ok_or_else(|| String::from("malformed `mcoeffs` label"))?;
                let b = t[1].as_str().ok_or_else(|| String::from("malformed `mcoeffs` label"))?;
                let m = int_from_value(&t[2])
                    .ok_or_else(|| String::from("malformed `mcoeffs` coefficient"))?;
                mcoeffs.push((a.to_string(), b.to_string(), m));
            }

            Ok(Cert::Contraction(ContractionCert {
                group: str_field(obj, "group")?,
                i0: gen_mask_field(obj, "i0")?,
                order: order_field(obj)?,
                basis,
                d,
                sigma,
                mcoeffs,
            }))
        }
        (KIND_EQUIVALENCE, "hecke") => {
            let params: Vec<String> = field(obj, "params")?
                .as_array()
                .ok_or_else(|| String::from("field `params` must be a list"))?
                .iter()
                .map(|p| p.as_str().map(String::from))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| String::from("field `params` must list names"))?;
            let names = params.clone();
            let dec = move |v: &Value| laurent_from_value(v, &names);
            Ok(Cert::Hecke(parse_equivalence(obj, algebra, params, &dec)?))
        }
        (KIND_EQUIVALENCE, "group" | "coxeter") => {
            Ok(Cert::Numeric(parse_equivalence(obj, algebra, Vec::new(), &rat_from_value)?))
        }
        _ => Err(format!("unsupported certificate kind `{kind}` / algebra `{algebra}`")),
    }
}

/// Encoders for the two equivalence scalar types, for building documents.
pub fn enc_rat(r: &Rat) -> Value {
    rat_to_value(r)
}

pub fn enc_int_as_rat(n: &i128) -> Value {
    int_to_value(*n)
}

pub fn enc_laurent(names: &[String]) -> impl Fn(&Laurent) -> Value + '_ {
    move |l| laurent_to_value(l, names)
}
