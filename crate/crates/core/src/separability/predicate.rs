use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Tolerances;

use super::bc::bc_separable_bruteforce;
use super::linear::strictly_separable;
use super::one_infty::one_infty_separable;

/// Well-behaved separability predicates with built-in oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Predicate {
    /// Strict linear separability, i.e. `(1,1)`.
    Linear,
    /// `(b,c)`-separability, decided by exhaustive search.
    Bc { b: usize, c: usize },
    /// `(1,∞)`-separability.
    OneInfinity,
}

impl Predicate {
    /// Evaluates the predicate on `(P, Q)`. `cap` bounds the point count for
    /// the exhaustive `(b,c)` oracle.
    pub fn holds(&self, p: &[Vec<f64>], q: &[Vec<f64>], cap: usize, tol: &Tolerances) -> Result<bool> {
        match *self {
            Predicate::Linear => strictly_separable(p, q, tol),
            Predicate::Bc { b, c } => Ok(bc_separable_bruteforce(p, q, b, c, cap, tol)?.separable),
            Predicate::OneInfinity => Ok(one_infty_separable(p, q, tol)?.separable),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Linear => write!(f, "linear"),
            Predicate::Bc { b, c } => write!(f, "{b},{c}"),
            Predicate::OneInfinity => write!(f, "1,inf"),
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "linear" || s == "1,1" {
            return Ok(Predicate::Linear);
        }
        let bad = || Error::BadParams(format!("unknown predicate `{s}`; use linear, 1,inf or b,c"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let is_inf = |t: &str| matches!(t.trim(), "inf" | "infinity" | "∞");
        if (a.trim() == "1" && is_inf(b)) || (is_inf(a) && b.trim() == "1") {
            return Ok(Predicate::OneInfinity);
        }
        let b_val: usize = a.trim().parse().map_err(|_| bad())?;
        let c_val: usize = b.trim().parse().map_err(|_| bad())?;
        if b_val == 0 || c_val == 0 {
            return Err(bad());
        }
        Ok(Predicate::Bc { b: b_val, c: c_val })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("1,inf".parse::<Predicate>().unwrap(), Predicate::OneInfinity);
        assert_eq!("1,1".parse::<Predicate>().unwrap(), Predicate::Linear);
        assert_eq!("1,2".parse::<Predicate>().unwrap(), Predicate::Bc { b: 1, c: 2 });
        assert!("x".parse::<Predicate>().is_err());
        assert!("0,2".parse::<Predicate>().is_err());
    }
}
