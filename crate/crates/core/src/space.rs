//! Finite-dimensional sequence spaces: `l_p^n` for `1 <= p < inf` and the
//! truncation `l_inf^n` of `c_0`.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent in `[1, inf]`. Infinity is its own variant so that the
/// `c_0` / `l_inf` branches are exact rather than limits of large floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Validated constructor; `f64::INFINITY` maps to [`Exponent::Infinite`].
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() {
            return Err(Error::InvalidValue("exponent is NaN".into()));
        }
        if p == f64::INFINITY {
            return Ok(Exponent::Infinite);
        }
        if p < 1.0 {
            return Err(Error::InvalidValue(format!("exponent {p} is below 1")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Exponent::Infinite),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidValue(format!("cannot parse exponent {t:?}")))?;
                if v.is_infinite() {
                    return Err(Error::InvalidValue(format!(
                        "write infinite exponents as \"inf\", not {t:?}"
                    )));
                }
                Exponent::new(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Exponent::new(v as f64).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Exponent::new(v as f64).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

/// The ambient space `l_p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceSpec {
    pub n: usize,
    pub p: Exponent,
}

impl SpaceSpec {
    pub fn new(n: usize, p: Exponent) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidValue("space dimension must be at least 1".into()));
        }
        if let Exponent::Finite(v) = p {
            if !(v >= 1.0) || !v.is_finite() {
                return Err(Error::InvalidValue(format!("exponent {v} is not in [1, inf]")));
            }
        }
        Ok(SpaceSpec { n, p })
    }

    pub fn dual(&self) -> Exponent {
        dual_exponent(self.p)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        norm(x, self.p)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l_{}^{}", self.p, self.n)
    }
}

/// `sum |x_i|^p` for finite `p`; the building block of [`norm`] that avoids
/// the final root when only comparisons are needed.
#[inline]
pub fn power_sum(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum()
    }
}

/// The `l_p` norm; `max |x_i|` for `p = inf`.
pub fn norm(x: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinite => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        Exponent::Finite(q) if q == 1.0 => power_sum(x, 1.0),
        Exponent::Finite(q) if q == 2.0 => {
            // hypot-style scaling keeps tiny and huge entries representable
            let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if scale == 0.0 || !scale.is_finite() {
                return scale;
            }
            scale * x.iter().map(|v| (v / scale) * (v / scale)).sum::<f64>().sqrt()
        }
        Exponent::Finite(q) => {
            let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if scale == 0.0 || !scale.is_finite() {
                return scale;
            }
            scale
                * x.iter()
                    .map(|v| (v.abs() / scale).powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q)
        }
    }
}

/// Conjugate exponent: `1/p + 1/p' = 1`, with `1' = inf` and `inf' = 1`.
pub fn dual_exponent(p: Exponent) -> Exponent {
    match p {
        Exponent::Infinite => Exponent::ONE,
        Exponent::Finite(q) if q == 1.0 => Exponent::Infinite,
        Exponent::Finite(q) => Exponent::Finite(q / (q - 1.0)),
    }
}

/// The exponent `r` with `1/r = 1/2 + 1/p`, defined for `p > 2`; `r = 2` for
/// `p = inf`.
pub fn ell_r_exponent(p: Exponent) -> Result<f64> {
    match p {
        Exponent::Infinite => Ok(2.0),
        Exponent::Finite(q) if q > 2.0 => Ok(2.0 * q / (q + 2.0)),
        Exponent::Finite(q) => Err(Error::Domain(format!(
            "the l_r exponent is only defined for p > 2 (got p = {q})"
        ))),
    }
}
