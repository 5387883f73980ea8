//! Single-entry perturbations of certificate documents, for the fuzz
//! rejection test: every perturbed document must fail verification.

use coxcert_core::ring::{rat_from_string, rat_to_string, rat_int};
use rand::Rng;
use serde_json::Value;

/// JSON pointers to every scalar site of a certificate: matrix entries of
/// every serialized map, and the coefficients of the flat list.
pub fn scalar_sites(cert: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let maps = match cert.get("maps").and_then(Value::as_object) {
        Some(m) => m,
        None => return out,
    };
    for (name, v) in maps {
        let base = format!("/maps/{name}");
        if let Some(list) = v.as_array() {
            for (i, m) in list.iter().enumerate() {
                matrix_sites(&format!("{base}/{i}"), m, &mut out);
            }
        } else if let Some(mats) = v.get("mats").and_then(Value::as_array) {
            for (i, m) in mats.iter().enumerate() {
                matrix_sites(&format!("{base}/mats/{i}"), m, &mut out);
            }
        }
    }
    if let Some(mc) = cert.get("mcoeffs").and_then(Value::as_array) {
        for (i, _) in mc.iter().enumerate() {
            out.push(format!("/mcoeffs/{i}/2"));
        }
    }
    out
}

fn matrix_sites(base: &str, m: &Value, out: &mut Vec<String>) {
    if let Some(entries) = m.get("entries").and_then(Value::as_array) {
        for (i, _) in entries.iter().enumerate() {
            out.push(format!("{base}/entries/{i}/2"));
        }
    }
}

/// Add a nonzero integer delta to the scalar at `site`. String scalars are
/// perturbed as rationals; Laurent scalars get one coefficient perturbed
/// (possibly deleting the term). Returns a description of what changed.
pub fn perturb_site(cert: &mut Value, site: &str, rng: &mut impl Rng) -> String {
    let delta: i64 = *[-3, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
    let slot = cert.pointer_mut(site).expect("site enumerated from the document");
    match slot {
        Value::String(s) => {
            let old = rat_from_string(s).expect("serialized scalar");
            let new = old + rat_int(delta as i128);
            *slot = Value::String(rat_to_string(&new));
            format!("{site}: {delta:+}")
        }
        Value::Object(terms) => {
            let keys: Vec<String> = terms.keys().cloned().collect();
            let key = keys[rng.gen_range(0..keys.len())].clone();
            let old = match &terms[&key] {
                Value::Number(n) => n.as_i64().unwrap_or(0) as i128,
                Value::String(s) => s.parse::<i128>().unwrap_or(0),
                _ => 0,
            };
            let new = old + delta as i128;
            if new == 0 {
                terms.remove(&key);
            } else {
                match i64::try_from(new) {
                    Ok(small) => terms.insert(key.clone(), Value::from(small)),
                    Err(_) => terms.insert(key.clone(), Value::String(new.to_string())),
                };
            }
            format!("{site} [{key}]: {delta:+}")
        }
        other => panic!("unexpected scalar shape at {site}: {other}"),
    }
}

/// Pick a random scalar site and perturb it.
pub fn perturb_random(cert: &mut Value, rng: &mut impl Rng) -> String {
    let sites = scalar_sites(cert);
    assert!(!sites.is_empty(), "certificate has no scalar sites");
    let site = &sites[rng.gen_range(0..sites.len())];
    perturb_site(cert, site, rng)
}
