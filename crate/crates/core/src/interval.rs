use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// An interval of the real line with extended-real endpoints.
///
/// Infinite endpoints are always open. `a == b` with both ends closed is a
/// singleton; with either end open it is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct LatticeInterval {
    a: f64,
    b: f64,
    left_closed: bool,
    right_closed: bool,
}

impl LatticeInterval {
    pub fn new(a: f64, b: f64, left_closed: bool, right_closed: bool) -> Result<Self> {
        if a.is_nan() || b.is_nan() {
            return Err(Error::InvalidInterval("endpoint is NaN".into()));
        }
        if a > b {
            return Err(Error::InvalidInterval(format!("left endpoint {a} exceeds right endpoint {b}")));
        }
        if a == f64::INFINITY || b == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval("interval must meet the real line".into()));
        }
        if (a.is_infinite() && left_closed) || (b.is_infinite() && right_closed) {
            return Err(Error::InvalidInterval("infinite endpoints must be open".into()));
        }
        Ok(Self { a, b, left_closed, right_closed })
    }

    /// `[a, b]`; infinite ends are opened automatically.
    pub fn closed(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, a.is_finite(), b.is_finite())
    }

    /// `(a, b)`.
    pub fn open(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn singleton(k: i64) -> Self {
        let x = k as f64;
        Self { a: x, b: x, left_closed: true, right_closed: true }
    }

    pub fn whole_line() -> Self {
        Self { a: f64::NEG_INFINITY, b: f64::INFINITY, left_closed: false, right_closed: false }
    }

    /// `(-inf, b]` or `(-inf, b)`.
    pub fn lower_ray(b: f64, closed: bool) -> Result<Self> {
        Self::new(f64::NEG_INFINITY, b, false, closed && b.is_finite())
    }

    /// `[a, inf)` or `(a, inf)`.
    pub fn upper_ray(a: f64, closed: bool) -> Result<Self> {
        Self::new(a, f64::INFINITY, closed && a.is_finite(), false)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn left_closed(&self) -> bool {
        self.left_closed
    }

    pub fn right_closed(&self) -> bool {
        self.right_closed
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b && !(self.left_closed && self.right_closed)
    }

    /// At least one endpoint is infinite.
    pub fn is_unbounded(&self) -> bool {
        self.a.is_infinite() || self.b.is_infinite()
    }

    pub fn is_whole_line(&self) -> bool {
        self.a.is_infinite() && self.b.is_infinite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let left = if self.left_closed { x >= self.a } else { x > self.a };
        let right = if self.right_closed { x <= self.b } else { x < self.b };
        left && right
    }

    /// Smallest integer in the interval, `None` when unbounded below.
    pub fn first_integer(&self) -> Option<i64> {
        if self.a.is_infinite() {
            return None;
        }
        let k = if self.left_closed { self.a.ceil() } else { self.a.floor() + 1.0 };
        Some(k as i64)
    }

    /// Largest integer in the interval, `None` when unbounded above.
    pub fn last_integer(&self) -> Option<i64> {
        if self.b.is_infinite() {
            return None;
        }
        let k = if self.right_closed { self.b.floor() } else { self.b.ceil() - 1.0 };
        Some(k as i64)
    }

    /// Length `b - a`, infinite for unbounded intervals.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

impl fmt::Display for LatticeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == self.b && self.left_closed && self.right_closed {
            return write!(f, "{{{}}}", fmt_endpoint(self.a));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.left_closed { '[' } else { '(' },
            fmt_endpoint(self.a),
            fmt_endpoint(self.b),
            if self.right_closed { ']' } else { ')' }
        )
    }
}

fn fmt_endpoint(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

/// Parse an endpoint: a decimal number, `inf`, `+inf` or `-inf`.
pub fn parse_endpoint(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::InvalidInterval(format!("cannot parse endpoint `{t}`"))),
    }
}

impl std::str::FromStr for LatticeInterval {
    type Err = Error;

    /// Bracket syntax such as `[40, 60]`, `(-inf, 3]`, `(1.5,4.5)` or `{3}`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let x = parse_endpoint(inner)?;
            return Self::closed(x, x);
        }
        let mut chars = t.chars();
        let open = chars.next();
        let close = t.chars().last();
        let left_closed = match open {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(Error::InvalidInterval(format!("expected `[` or `(` in `{t}`"))),
        };
        let right_closed = match close {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(Error::InvalidInterval(format!("expected `]` or `)` in `{t}`"))),
        };
        let body = &t[1..t.len() - 1];
        let (left, right) = body
            .split_once(',')
            .ok_or_else(|| Error::InvalidInterval(format!("missing `,` in `{t}`")))?;
        Self::new(parse_endpoint(left)?, parse_endpoint(right)?, left_closed, right_closed)
    }
}

/// Serialized form: infinite endpoints become the strings `"-inf"` / `"inf"`.
#[derive(Serialize, Deserialize)]
struct RawInterval {
    #[serde(serialize_with = "ser_endpoint", deserialize_with = "de_endpoint")]
    a: f64,
    #[serde(serialize_with = "ser_endpoint", deserialize_with = "de_endpoint")]
    b: f64,
    left_closed: bool,
    right_closed: bool,
}

impl From<LatticeInterval> for RawInterval {
    fn from(i: LatticeInterval) -> Self {
        Self { a: i.a, b: i.b, left_closed: i.left_closed, right_closed: i.right_closed }
    }
}

impl TryFrom<RawInterval> for LatticeInterval {
    type Error = Error;

    fn try_from(r: RawInterval) -> Result<Self> {
        Self::new(r.a, r.b, r.left_closed, r.right_closed)
    }
}

pub(crate) fn ser_endpoint<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

pub(crate) fn de_endpoint<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Endpoint {
        Num(f64),
        Text(String),
    }
    match Endpoint::deserialize(d)? {
        Endpoint::Num(x) => Ok(x),
        Endpoint::Text(s) => parse_endpoint(&s).map_err(serde::de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rules() {
        assert!(LatticeInterval::new(2.0, 1.0, true, true).is_err());
        assert!(LatticeInterval::new(f64::NEG_INFINITY, 1.0, true, true).is_err());
        assert!(LatticeInterval::new(0.0, f64::NAN, true, true).is_err());
        let i = LatticeInterval::closed(f64::NEG_INFINITY, 3.0).unwrap();
        assert!(!i.left_closed() && i.right_closed());
        assert!(LatticeInterval::open(1.0, 1.0).unwrap().is_empty());
        assert!(!LatticeInterval::singleton(4).is_empty());
    }

    #[test]
    fn integer_cut_points() {
        let i = LatticeInterval::open(1.5, 4.5).unwrap();
        assert_eq!((i.first_integer(), i.last_integer()), (Some(2), Some(4)));
        let j = LatticeInterval::open(1.0, 4.0).unwrap();
        assert_eq!((j.first_integer(), j.last_integer()), (Some(2), Some(3)));
        let k = LatticeInterval::closed(1.0, 4.0).unwrap();
        assert_eq!((k.first_integer(), k.last_integer()), (Some(1), Some(4)));
        assert_eq!(LatticeInterval::whole_line().first_integer(), None);
        assert!(j.contains(2.5) && !j.contains(4.0) && k.contains(4.0));
    }

    #[test]
    fn bracket_syntax() {
        let i: LatticeInterval = "(-inf, 3]".parse().unwrap();
        assert_eq!(i, LatticeInterval::lower_ray(3.0, true).unwrap());
        let j: LatticeInterval = "[40,60)".parse().unwrap();
        assert_eq!(j, LatticeInterval::new(40.0, 60.0, true, false).unwrap());
        let s: LatticeInterval = "{3}".parse().unwrap();
        assert_eq!(s, LatticeInterval::singleton(3));
        assert!("[1, 2".parse::<LatticeInterval>().is_err());
        assert!("[-inf, 2]".parse::<LatticeInterval>().is_err());
        assert_eq!(j.to_string(), "[40, 60)");
        assert_eq!(LatticeInterval::singleton(0).to_string(), "{0}");
    }

    #[test]
    fn json_keeps_infinite_endpoints() {
        let i = LatticeInterval::upper_ray(-0.5, false).unwrap();
        let text = serde_json::to_string(&i).unwrap();
        assert!(text.contains("\"inf\""));
        let back: LatticeInterval = serde_json::from_str(&text).unwrap();
        assert_eq!(back, i);
        let bad = r#"{"a": 3, "b": 1, "left_closed": true, "right_closed": true}"#;
        assert!(serde_json::from_str::<LatticeInterval>(bad).is_err());
    }
}
