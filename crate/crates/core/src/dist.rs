use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// A distance in `[0, ∞]`. Addition saturates at `Inf`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtDist<S> {
    Finite(S),
    Inf,
}

impl<S: Scalar> ExtDist<S> {
    pub fn zero() -> Self {
        ExtDist::Finite(S::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtDist::Finite(v) => Some(v),
            ExtDist::Inf => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a.add(b)),
            _ => ExtDist::Inf,
        }
    }

    /// `self <= other` up to the scalar tolerance; `Inf <= Inf`.
    pub fn approx_le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, ExtDist::Inf) => true,
            (ExtDist::Inf, ExtDist::Finite(_)) => false,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.approx_le(b),
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExtDist::Inf, ExtDist::Inf) => true,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.approx_eq(b),
            _ => false,
        }
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Ok(ExtDist::Inf)
        } else {
            S::parse(t).map(ExtDist::Finite)
        }
    }

    pub fn render(&self) -> String {
        match self {
            ExtDist::Finite(v) => v.render(),
            ExtDist::Inf => "inf".to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ExtDist::Finite(v) => v.to_json(),
            ExtDist::Inf => serde_json::Value::String("inf".into()),
        }
    }
}

impl<S: Scalar> From<S> for ExtDist<S> {
    fn from(value: S) -> Self {
        ExtDist::Finite(value)
    }
}

impl<S: Scalar> Eq for ExtDist<S> {}

impl<S: Scalar> PartialOrd for ExtDist<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for ExtDist<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Inf, ExtDist::Inf) => Ordering::Equal,
            (ExtDist::Inf, _) => Ordering::Greater,
            (_, ExtDist::Inf) => Ordering::Less,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp_exact(b),
        }
    }
}

impl<S: Scalar> fmt::Display for ExtDist<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_arithmetic() {
        let a = ExtDist::Finite(2.0);
        let inf = ExtDist::<f64>::Inf;
        assert_eq!(a.add(&inf), ExtDist::Inf);
        assert_eq!(a.clone().min(inf.clone()), a);
        assert_eq!(inf.clone().min(a.clone()), a);
        assert_eq!(a.add(&ExtDist::Finite(1.5)), ExtDist::Finite(3.5));
        assert!(a < inf);
        assert!(inf.approx_le(&inf));
        assert!(!inf.approx_le(&a));
    }

    #[test]
    fn parses_inf_token() {
        assert_eq!(ExtDist::<f64>::parse(" inf ").unwrap(), ExtDist::Inf);
        assert_eq!(ExtDist::<f64>::parse("2.5").unwrap(), ExtDist::Finite(2.5));
    }
}
