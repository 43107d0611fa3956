//! Plain-text literals for spaces and weights, the inverse of their `label()`.
//!
//! ```text
//! space  := kind [ "+" weight ]
//! kind   := lp(p) | lp(inf) | lorentz(p, q) | orlicz(power, p) | orlicz(logpower, p, s)
//! weight := body [ "@half" ]
//! body   := const(c) | power(gamma) | table(origin; v_1, ..., v_m) | pow(body, e)
//! ```

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spaces::{SpaceKind, SpaceSpec, YoungFunction};
use crate::symbols::parse::{call, parse_real, split_args};
use crate::weights::{Domain, Weight};

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn number(text: &str) -> Result<f64> {
    match text.trim() {
        "inf" | "∞" => Ok(f64::INFINITY),
        t => parse_real(t),
    }
}

fn args(body: &str, want: usize, name: &str) -> Result<Vec<f64>> {
    let a = split_args(body);
    if a.len() != want {
        return err(format!("{name} takes {want} arguments, got {}", a.len()));
    }
    a.into_iter().map(number).collect()
}

fn as_parse(e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(m),
        other => Error::Parse(other.to_string()),
    }
}

fn parse_kind(s: &str) -> Result<SpaceKind> {
    let s = s.trim();
    if let Some(body) = call(s, "lp") {
        let a = args(body, 1, "lp")?;
        return Ok(SpaceKind::LebesgueP { p: a[0] });
    }
    if let Some(body) = call(s, "lorentz") {
        let a = args(body, 2, "lorentz")?;
        return Ok(SpaceKind::Lorentz { p: a[0], q: a[1] });
    }
    if let Some(body) = call(s, "orlicz") {
        let parts = split_args(body);
        return match parts.as_slice() {
            ["power", p] => Ok(SpaceKind::Orlicz(YoungFunction::Power { p: number(p)? })),
            ["logpower", p, s] => Ok(SpaceKind::Orlicz(YoungFunction::LogPower {
                p: number(p)?,
                s: number(s)?,
            })),
            _ => err(format!("unrecognised Young function in '{s}'")),
        };
    }
    err(format!("unrecognised space literal '{s}'"))
}

fn parse_weight_body(s: &str, domain: Domain) -> Result<Weight> {
    let s = s.trim();
    if let Some(body) = call(s, "const") {
        return Weight::constant(args(body, 1, "const")?[0], domain).map_err(as_parse);
    }
    if let Some(body) = call(s, "power") {
        let g = args(body, 1, "power")?[0];
        if !g.is_finite() {
            return err("power weight exponent must be finite");
        }
        return Ok(Weight::power(g, domain));
    }
    if let Some(body) = call(s, "table") {
        let (origin, values) = body
            .split_once(';')
            .ok_or_else(|| Error::Parse("table weight expects 'origin; v_1, ..., v_m'".into()))?;
        let origin = parse_real(origin)?;
        if origin.fract() != 0.0 {
            return err(format!("table origin must be an integer, got {origin}"));
        }
        let values = split_args(values).into_iter().map(number).collect::<Result<Vec<_>>>()?;
        return Weight::table(values, origin as i64, domain).map_err(as_parse);
    }
    if let Some(body) = call(s, "pow") {
        let parts = split_args(body);
        if parts.len() != 2 {
            return err("pow takes a weight and an exponent");
        }
        let e = number(parts[1])?;
        if !e.is_finite() {
            return err("pow exponent must be finite");
        }
        return Ok(parse_weight_body(parts[0], domain)?.pow(e));
    }
    err(format!("unrecognised weight literal '{s}'"))
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_suffix("@half") {
            Some(body) => parse_weight_body(body, Domain::HalfLine),
            None => parse_weight_body(s, Domain::FullLine),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let close = s.find(')').ok_or_else(|| Error::Parse(format!("unrecognised space literal '{s}'")))?;
        let (kind, rest) = s.split_at(close + 1);
        let weight = match rest.trim() {
            "" => None,
            r => match r.strip_prefix('+') {
                Some(w) => Some(w.parse::<Weight>()?),
                None => return err(format!("expected '+weight' after '{kind}', got '{r}'")),
            },
        };
        SpaceSpec::new(parse_kind(kind)?, weight).map_err(as_parse)
    }
}
