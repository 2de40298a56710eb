//! Textual window specs.
//!
//! ```text
//! window   = family [ ":" param { "," param } ]
//! family   = "indicator" | "gaussian" | "hermite" | "bspline" | "tp" | "sampled"
//! param    = value | key "=" value
//!
//! indicator
//! gaussian[:A]                       A > 0, default 1
//! hermite:N                          N ≥ 0
//! bspline:N                          N ≥ 0
//! tp:g=G,v=V,f=D1,D2,...[,c=C]       the values after f= are the factors
//! sampled:path=FILE[,tenv=A:P][,fenv=A:P]
//! ```
//!
//! `FILE` is a CSV with header `t,value` on a uniform grid. `tenv`/`fenv`
//! declare decay envelopes `A(1+|x|)^-P` in time and frequency.

use std::path::Path;

use gabor_rp_core::{DecayEnvelope, Side, WindowSpec};

use crate::error::{CliError, Result};
use crate::io::read_window_samples;

fn err(msg: impl Into<String>) -> CliError {
    CliError::Grammar(msg.into())
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(format!("{key}: expected a number, got {v:?}")))
}

fn order(family: &str, params: &[&str]) -> Result<u32> {
    match params {
        [n] => n.trim().parse().map_err(|_| err(format!("{family}: expected a non-negative integer order, got {n:?}"))),
        [] => Err(err(format!("{family} needs an order, e.g. {family}:2"))),
        _ => Err(err(format!("{family} takes exactly one parameter"))),
    }
}

fn envelope(key: &str, v: &str, side: Side) -> Result<DecayEnvelope> {
    let (a, p) = v.split_once(':').ok_or_else(|| err(format!("{key}: expected AMPLITUDE:ORDER, got {v:?}")))?;
    Ok(DecayEnvelope::new(number(key, a)?, number(key, p)?, side)?)
}

pub fn parse_window(text: &str) -> Result<WindowSpec> {
    let text = text.trim();
    let (family, rest) = match text.split_once(':') {
        Some((f, r)) => (f.trim(), Some(r)),
        None => (text, None),
    };
    let params: Vec<&str> = match rest {
        Some(r) if r.trim().is_empty() => return Err(err(format!("{family}: empty parameter list"))),
        Some(r) => r.split(',').map(str::trim).collect(),
        None => Vec::new(),
    };
    let spec = match family.to_ascii_lowercase().as_str() {
        "indicator" => {
            if !params.is_empty() {
                return Err(err("indicator takes no parameters"));
            }
            WindowSpec::indicator()
        }
        "gaussian" => match params.as_slice() {
            [] => WindowSpec::gaussian(1.0)?,
            [a] => WindowSpec::gaussian(number("gaussian", a.strip_prefix("a=").unwrap_or(a))?)?,
            _ => return Err(err("gaussian takes at most one parameter")),
        },
        "hermite" => WindowSpec::hermite(order("hermite", &params)?)?,
        "bspline" => WindowSpec::bspline(order("bspline", &params)?)?,
        "tp" => parse_tp(&params)?,
        "sampled" => parse_sampled(&params)?,
        "" => return Err(err("missing window family")),
        other => return Err(err(format!("unknown window family {other:?}"))),
    };
    Ok(spec)
}

fn parse_tp(params: &[&str]) -> Result<WindowSpec> {
    let (mut gamma, mut nu, mut c) = (None, None, None);
    let mut factors = Vec::new();
    let mut in_factors = false;
    for p in params {
        match p.split_once('=') {
            Some((k, v)) => {
                in_factors = false;
                match k.trim() {
                    "g" => gamma = Some(number("g", v)?),
                    "v" => nu = Some(number("v", v)?),
                    "c" => c = Some(number("c", v)?),
                    "f" => {
                        factors.push(number("f", v)?);
                        in_factors = true;
                    }
                    other => return Err(err(format!("tp: unknown key {other:?}"))),
                }
            }
            None if in_factors => factors.push(number("f", p)?),
            None => return Err(err(format!("tp: bare value {p:?} outside the factor list"))),
        }
    }
    if factors.is_empty() {
        return Err(err("tp needs at least one factor, e.g. f=0.5"));
    }
    Ok(WindowSpec::totally_positive(gamma.unwrap_or(0.0), nu.unwrap_or(0.0), factors, c.unwrap_or(1.0))?)
}

fn parse_sampled(params: &[&str]) -> Result<WindowSpec> {
    let (mut path, mut tenv, mut fenv) = (None, None, None);
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| err(format!("sampled: expected key=value, got {p:?}")))?;
        match k.trim() {
            "path" => path = Some(v.trim()),
            "tenv" => tenv = Some(envelope("tenv", v, Side::Time)?),
            "fenv" => fenv = Some(envelope("fenv", v, Side::Frequency)?),
            other => return Err(err(format!("sampled: unknown key {other:?}"))),
        }
    }
    let path = path.ok_or_else(|| err("sampled needs path=FILE"))?;
    let (start, step, samples) = read_window_samples(Path::new(path))?;
    Ok(WindowSpec::sampled(start, step, samples, tenv, fenv)?)
}
