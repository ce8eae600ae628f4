//! JSON form of expansions.
//!
//! ```json
//! {"weight": "3/2", "truncation": [-1, 100],
//!  "terms": [{"coeff": [["1π", "r=1", "d=1", "re=2", "im=0"]],
//!             "v": "-1/2", "q": "4", "qbar": "0", "gammas": [["-1/2", "4"]]}]}
//! ```
//!
//! Each coefficient entry `[e"π", "r=R", "d=D", "re=A", "im=B"]` denotes
//! `(A + iB)/D · π^e · √R`. A `null` weight means no declared weight.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{Atom, Basis, Coefficient, Expansion, GammaFactor, Gauss, QexpError, Window};
use crate::half::HalfInteger;
use crate::rational::{format_rational, parse_rational};
use crate::Rational;

fn bad(msg: impl Into<String>) -> QexpError {
    QexpError::Json(msg.into())
}

fn rational_value(r: &Rational) -> Value {
    match r.to_integer().to_i64() {
        Some(n) if r.is_integer() => json!(n),
        _ => json!(format_rational(r)),
    }
}

fn parse_rational_value(v: &Value) -> Result<Rational, QexpError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad(format!("non-integral number {n} (use a string for fractions)"))),
        Value::String(s) => parse_rational(s).map_err(|e| bad(e.to_string())),
        other => Err(bad(format!("expected a rational, found {other}"))),
    }
}

fn parse_half(v: &Value) -> Result<HalfInteger, QexpError> {
    let r = parse_rational_value(v)?;
    HalfInteger::from_rational(&r).ok_or_else(|| bad(format!("{} is not a half-integer", format_rational(&r))))
}

pub fn coefficient_to_json(c: &Coefficient) -> Value {
    let entries: Vec<Value> = c
        .monomials()
        .map(|(b, g)| {
            let d = g.re.denom().lcm(g.im.denom());
            let re = &g.re * Rational::from_integer(d.clone());
            let im = &g.im * Rational::from_integer(d.clone());
            json!([
                format!("{}π", b.pi),
                format!("r={}", b.radicand),
                format!("d={d}"),
                format!("re={}", re.to_integer()),
                format!("im={}", im.to_integer()),
            ])
        })
        .collect();
    Value::Array(entries)
}

pub fn coefficient_from_json(v: &Value) -> Result<Coefficient, QexpError> {
    // a bare rational string or number is accepted as shorthand
    if let Ok(r) = parse_rational_value(v) {
        return Ok(Coefficient::rational(r));
    }
    let entries = v.as_array().ok_or_else(|| bad("coefficient must be a list of monomials"))?;
    let mut total = Coefficient::zero();
    for entry in entries {
        let parts = entry.as_array().ok_or_else(|| bad("monomial must be a list of five strings"))?;
        if parts.len() != 5 {
            return Err(bad("monomial must have the five fields [eπ, r=, d=, re=, im=]"));
        }
        let field = |i: usize, prefix: &str| -> Result<String, QexpError> {
            let s = parts[i].as_str().ok_or_else(|| bad("monomial fields are strings"))?;
            let s = s.trim();
            let body = if prefix == "π" { s.strip_suffix(prefix) } else { s.strip_prefix(prefix) };
            body.map(|b| b.trim().to_string()).ok_or_else(|| bad(format!("malformed monomial field `{s}`")))
        };
        let pi: HalfInteger = field(0, "π")?.parse().map_err(|e: crate::half::ParseHalfIntegerError| bad(e.to_string()))?;
        let radicand: u64 = field(1, "r=")?.parse().map_err(|_| bad("radicand must be a positive integer"))?;
        if radicand == 0 {
            return Err(bad("radicand must be positive"));
        }
        let int_field = |i: usize, p: &str| -> Result<BigInt, QexpError> {
            field(i, p)?.replace('−', "-").parse().map_err(|_| bad(format!("field {p} must be an integer")))
        };
        let d = int_field(2, "d=")?;
        if d.is_zero() {
            return Err(bad("denominator must be nonzero"));
        }
        let re = Rational::new(int_field(3, "re=")?, d.clone());
        let im = Rational::new(int_field(4, "im=")?, d);
        total = total + Coefficient::monomial(Gauss::new(re, im), Basis { pi, radicand });
    }
    Ok(total)
}

pub fn to_json(e: &Expansion) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .map(|(a, c)| {
            let gammas: Vec<Value> = a
                .gammas()
                .iter()
                .map(|g| json!([g.s.to_string(), format_rational(&g.ell)]))
                .collect();
            json!({
                "coeff": coefficient_to_json(c),
                "v": a.v.to_string(),
                "q": format_rational(&a.q),
                "qbar": format_rational(&a.qbar),
                "gammas": gammas,
            })
        })
        .collect();
    json!({
        "weight": e.weight().map(|w| Value::String(w.to_string())).unwrap_or(Value::Null),
        "truncation": [rational_value(&e.truncation().min), rational_value(&e.truncation().max)],
        "terms": terms,
    })
}

/// Parses an expansion. Terms outside the declared truncation are an error.
pub fn from_json(v: &Value) -> Result<Expansion, QexpError> {
    let obj = v.as_object().ok_or_else(|| bad("expansion must be a JSON object"))?;
    let weight = match obj.get("weight") {
        None | Some(Value::Null) => None,
        Some(w) => Some(parse_half(w)?),
    };
    let window = match obj.get("truncation") {
        Some(Value::Array(pair)) if pair.len() == 2 => {
            let min = parse_rational_value(&pair[0])?;
            let max = parse_rational_value(&pair[1])?;
            if min > max {
                return Err(bad("truncation window is empty"));
            }
            Window::new(min, max)
        }
        _ => return Err(bad("truncation must be a pair [min, max]")),
    };
    let mut e = Expansion::zero(weight, window);
    let terms = match obj.get("terms") {
        Some(Value::Array(t)) => t.as_slice(),
        None => &[],
        _ => return Err(bad("terms must be a list")),
    };
    for t in terms {
        let t = t.as_object().ok_or_else(|| bad("term must be an object"))?;
        let get = |k: &str| t.get(k).cloned().unwrap_or(json!("0"));
        let coeff = coefficient_from_json(&t.get("coeff").cloned().unwrap_or(json!("1")))?;
        let va = parse_half(&get("v"))?;
        let q = parse_rational_value(&get("q"))?;
        let qbar = parse_rational_value(&get("qbar"))?;
        let mut gammas = Vec::new();
        if let Some(gs) = t.get("gammas") {
            for g in gs.as_array().ok_or_else(|| bad("gammas must be a list"))? {
                let pair = g.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("gamma factor must be [s, ℓ]"))?;
                let s = parse_half(&pair[0])?;
                let ell = parse_rational_value(&pair[1])?;
                if ell.is_zero() {
                    return Err(bad("gamma factor with ℓ = 0"));
                }
                gammas.push(GammaFactor::new(s, ell));
            }
        }
        let atom = Atom::new(va, q, qbar, gammas);
        if !e.add_term(coeff, atom) {
            return Err(bad("term lies outside the truncation window"));
        }
    }
    Ok(e)
}

impl Serialize for Expansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        to_json(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Expansion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses() {
        let text = r#"{"weight": "3/2", "truncation": [-1, 100], "terms": [{"coeff": [[ "2π", "r=1", "d=1", "re=2", "im=0" ]], "v": "−1/2", "q": "4", "qbar": "0", "gammas": [["−1/2","4"]]}]}"#;
        let e: Expansion = serde_json::from_str(text).unwrap();
        assert_eq!(e.weight(), Some(HalfInteger::from_twice(3)));
        assert_eq!(e.len(), 1);
        let (atom, c) = e.terms().next().unwrap();
        assert_eq!(atom.v, HalfInteger::from_twice(-1));
        assert_eq!(*c, Coefficient::int(2) * Coefficient::pi_pow(HalfInteger::from_int(2)));
        let back: Expansion = serde_json::from_value(to_json(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn roundtrip_irrational_complex() {
        let c = Coefficient::gauss(Gauss::new(Rational::new(1.into(), 3.into()), Rational::new((-5).into(), 6.into())))
            * Coefficient::sqrt_int(6)
            * Coefficient::pi_pow(HalfInteger::from_twice(-1));
        let e = Expansion::from_terms(Some(HalfInteger::from_twice(-3)), Window::ints(-4, 4), [(c, Atom::q_power(Rational::new(1.into(), 2.into())))]);
        let back = from_json(&to_json(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn rejects_out_of_window_and_garbage() {
        let text = r#"{"weight": "2", "truncation": [0, 3], "terms": [{"coeff": "1", "v": "0", "q": "5", "qbar": "0", "gammas": []}]}"#;
        assert!(serde_json::from_str::<Expansion>(text).is_err());
        assert!(serde_json::from_str::<Expansion>(r#"{"weight": "1.5", "truncation": [0, 3]}"#).is_err());
        assert!(serde_json::from_str::<Expansion>(r#"[1, 2]"#).is_err());
    }
}
