use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::phase::{frac, Rational};
use crate::error::{Error, Result};

/// A point of T^n in turns, either exact rationals or floats, reduced mod 1.
#[derive(Clone, Debug, PartialEq)]
pub enum TorusPoint {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl TorusPoint {
    pub fn exact(t: Vec<Rational>) -> Self {
        TorusPoint::Exact(t.into_iter().map(frac).collect())
    }

    pub fn from_turns(t: Vec<f64>) -> Self {
        TorusPoint::Float(t.into_iter().map(|x| x - x.floor()).collect())
    }

    pub fn from_radians(t: &[f64]) -> Self {
        TorusPoint::from_turns(t.iter().map(|x| x / TAU).collect())
    }

    pub fn origin(rank: usize) -> Self {
        TorusPoint::Exact(vec![Rational::zero(); rank])
    }

    pub fn diagonal(rank: usize, p: i64, q: i64) -> Self {
        TorusPoint::exact(vec![Rational::new(p, q); rank])
    }

    pub fn rank(&self) -> usize {
        match self {
            TorusPoint::Exact(v) => v.len(),
            TorusPoint::Float(v) => v.len(),
        }
    }

    pub fn as_exact(&self) -> Option<&[Rational]> {
        match self {
            TorusPoint::Exact(v) => Some(v),
            TorusPoint::Float(_) => None,
        }
    }

    pub fn turns_f64(&self) -> Vec<f64> {
        match self {
            TorusPoint::Exact(v) => v.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect(),
            TorusPoint::Float(v) => v.clone(),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational turn `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, dec) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && dec.is_empty() || dec.len() > 15 {
        return Err(bad());
    }
    let digits = format!("{int}{dec}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let r = Rational::new(num, 10i64.pow(dec.len() as u32));
    Ok(if neg { -r } else { r })
}

impl FromStr for TorusPoint {
    type Err = Error;

    /// Comma-separated turns (`1/4,1/4,0.5`) or radians with a `rad` suffix.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_suffix("rad") {
            let vals = body
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("invalid radian value `{x}`"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(TorusPoint::from_radians(&vals));
        }
        let vals = s.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint::exact(vals))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusPoint::Exact(v) => {
                let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            TorusPoint::Float(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}
