use mfhc::metaplectic::Sign;
use mfhc::MpElement;

use crate::Failure;

fn number(s: &str, what: &str) -> Result<f64, Failure> {
    s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("cannot parse {what} `{s}`")))
}

fn factor(s: &str) -> Result<MpElement, Failure> {
    let s = s.trim();
    match s {
        "I" | "id" => return Ok(MpElement::identity()),
        "-I" => return Ok(MpElement::minus_one()),
        "S" => return Ok(MpElement::s_elem()),
        "T" => return Ok(MpElement::t_elem()),
        "Z" => return Ok(MpElement::k_elem(std::f64::consts::PI)),
        _ => {}
    }
    if s.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Failure::Usage(e.to_string()))?;
        let m = v["m"].as_array().filter(|r| r.len() == 2).ok_or_else(|| Failure::Usage("`m` must be a 2×2 array".into()))?;
        let entry = |i: usize, j: usize| m[i][j].as_f64().ok_or_else(|| Failure::Usage("matrix entries must be numbers".into()));
        let branch = v["branch"].as_i64().ok_or_else(|| Failure::Usage("`branch` must be 1 or -1".into()))?;
        let mat = [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]];
        return MpElement::new(mat, branch).map_err(|e| Failure::Usage(e.to_string()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["k", theta] => Ok(MpElement::k_elem(number(theta, "θ")?)),
        ["n", b] => Ok(MpElement::n_elem(number(b, "b")?)),
        ["m", a, sign] => {
            let sign: Sign = sign.parse().map_err(Failure::Usage)?;
            MpElement::m_elem(number(a, "a")?, sign).map_err(|e| Failure::Usage(e.to_string()))
        }
        ["m", a] => MpElement::m_elem(number(a, "a")?, Sign::Plus).map_err(|e| Failure::Usage(e.to_string())),
        _ => Err(Failure::Usage(format!("unknown element `{s}` (use k:θ, n:b, m:a:s, S, T, Z, I, -I or JSON)"))),
    }
}

/// Parses a product `f₁*f₂*…` of factors.
pub fn parse(s: &str) -> Result<MpElement, Failure> {
    if s.trim_start().starts_with('{') {
        return factor(s);
    }
    s.split('*').try_fold(MpElement::identity(), |acc, f| Ok(acc.multiply(&factor(f)?)))
}
