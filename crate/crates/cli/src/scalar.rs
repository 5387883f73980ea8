//! JSON encoding of the scalar rings and of sparse matrices / chain maps.
//!
//! Rational scalars serialize as decimal strings (`"5"`, `"-2/3"`); Laurent
//! scalars as monomial→coefficient objects (`{"q^2": 3, "q^-1": -1}`, the
//! constant monomial spelled `"1"`, several variables joined with `*` as in
//! `"q1^-1*q2^3"`). Round-trips are bit-exact: writers emit a canonical form
//! and readers accept exactly that grammar.

use coxcert_core::chain::{ChainMap, SparseMat};
use coxcert_core::ring::{rat_from_string, rat_to_string, Laurent, Mono, Rat, Ring};
use serde_json::{Map, Value};

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(rat_to_string(r))
}

pub fn int_to_value(n: i128) -> Value {
    Value::String(n.to_string())
}

pub fn rat_from_value(v: &Value) -> Option<Rat> {
    rat_from_string(v.as_str()?)
}

/// Canonical key for one monomial, e.g. `1`, `q`, `q^-2`, `q1^2*q2^-1`.
pub fn mono_key(m: &Mono, names: &[String]) -> String {
    if m.is_empty() {
        return String::from("1");
    }
    let parts: Vec<String> = m
        .iter()
        .map(|&(v, e)| {
            let name = names.get(v as usize).cloned().unwrap_or_else(|| format!("v{v}"));
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

fn mono_from_key(key: &str, names: &[String]) -> Option<Mono> {
    if key == "1" {
        return Some(Mono::new());
    }
    let mut m = Mono::new();
    for part in key.split('*') {
        let (name, exp) = match part.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().ok()?),
            None => (part, 1),
        };
        if exp == 0 {
            return None;
        }
        let var = names.iter().position(|n| n == name)? as u8;
        m.push((var, exp));
    }
    m.sort_by_key(|&(v, _)| v);
    if m.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    Some(m)
}

pub fn laurent_to_value(l: &Laurent, names: &[String]) -> Value {
    let mut obj = Map::new();
    for (m, c) in l.terms() {
        let cv = match i64::try_from(*c) {
            Ok(small) => Value::from(small),
            Err(_) => Value::String(c.to_string()),
        };
        obj.insert(mono_key(m, names), cv);
    }
    Value::Object(obj)
}

fn coeff_from_value(v: &Value) -> Option<i128> {
    if let Some(n) = v.as_i64() {
        return Some(n as i128);
    }
    v.as_str()?.parse::<i128>().ok()
}

pub fn laurent_from_value(v: &Value, names: &[String]) -> Option<Laurent> {
    let obj = v.as_object()?;
    let mut terms = Vec::with_capacity(obj.len());
    for (key, cv) in obj {
        let m = mono_from_key(key, names)?;
        let c = coeff_from_value(cv)?;
        terms.push((m, c));
    }
    Some(Laurent::from_terms(terms))
}

pub fn mat_to_value<R: Ring>(m: &SparseMat<R>, enc: &impl Fn(&R) -> Value) -> Value {
    let entries: Vec<Value> = m
        .entries()
        .map(|(r, c, v)| Value::Array(vec![Value::from(r), Value::from(c), enc(v)]))
        .collect();
    let mut obj = Map::new();
    obj.insert(String::from("rows"), Value::from(m.rows() as u64));
    obj.insert(String::from("cols"), Value::from(m.cols() as u64));
    obj.insert(String::from("entries"), Value::Array(entries));
    Value::Object(obj)
}

pub fn mat_from_value<R: Ring>(
    v: &Value,
    dec: &impl Fn(&Value) -> Option<R>,
) -> Option<SparseMat<R>> {
    let obj = v.as_object()?;
    let rows = obj.get("rows")?.as_u64()? as usize;
    let cols = obj.get("cols")?.as_u64()? as usize;
    let mut trips = Vec::new();
    for e in obj.get("entries")?.as_array()? {
        let t = e.as_array()?;
        if t.len() != 3 {
            return None;
        }
        let r = t[0].as_u64()?;
        let c = t[1].as_u64()?;
        if r >= rows as u64 || c >= cols as u64 {
            return None;
        }
        let val = dec(&t[2])?;
        if !val.is_zero() {
            trips.push((r as u32, c as u32, val));
        }
    }
    Some(SparseMat::from_triplets(rows, cols, trips))
}

pub fn chainmap_to_value<R: Ring>(f: &ChainMap<R>, enc: &impl Fn(&R) -> Value) -> Value {
    let mats: Vec<Value> = f.mats.iter().map(|m| mat_to_value(m, enc)).collect();
    let mut obj = Map::new();
    obj.insert(String::from("dg"), Value::from(f.dg));
    obj.insert(String::from("mats"), Value::Array(mats));
    Value::Object(obj)
}

pub fn chainmap_from_value<R: Ring>(
    v: &Value,
    dec: &impl Fn(&Value) -> Option<R>,
) -> Option<ChainMap<R>> {
    let obj = v.as_object()?;
    let dg = obj.get("dg")?.as_i64()?;
    if !(-2..=2).contains(&dg) {
        return None;
    }
    let mut mats = Vec::new();
    for m in obj.get("mats")?.as_array()? {
        mats.push(mat_from_value(m, dec)?);
    }
    Some(ChainMap::new(dg as i32, mats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxcert_core::ring::rat_int;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "5", "-3", "2/3", "-11/7"] {
            let r = rat_from_string(s).unwrap();
            assert_eq!(rat_to_value(&r), Value::String(s.into()));
        }
    }

    #[test]
    fn laurent_round_trip() {
        let names = vec![String::from("q1"), String::from("q2")];
        let l = Laurent::monomial(3, 0, 2)
            .add(&Laurent::monomial(-1, 1, -1))
            .add(&Laurent::constant(7))
            .add(&Laurent::monomial(2, 0, -1).mul(&Laurent::monomial(1, 1, 3)));
        let v = laurent_to_value(&l, &names);
        assert_eq!(laurent_from_value(&v, &names).unwrap(), l);
        // canonical keys
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert!(keys.contains(&&String::from("q1^-1*q2^3")));
        assert!(keys.contains(&&String::from("1")));
    }

    #[test]
    fn matrix_round_trip() {
        let m = SparseMat::from_triplets(
            3,
            2,
            vec![(0u32, 0u32, rat_int(2)), (2, 1, rat_int(-5))],
        );
        let v = mat_to_value(&m, &rat_to_value);
        let back: SparseMat<Rat> = mat_from_value(&v, &rat_from_value).unwrap();
        assert!(back.sub(&m).is_zero());
        assert_eq!(back.rows(), 3);
        assert_eq!(back.cols(), 2);
    }
}
