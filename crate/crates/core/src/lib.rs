//! Weyl groups, their reflection-generated elementary abelian 2-subgroups, and
//! machine verification of bases of mod-2 invariants by exact restriction.

pub mod basisver;
pub mod cosets;
pub mod error;
pub mod f2;
pub mod forms;
pub mod kinv;
pub mod linalg;
pub mod permgroup;
pub mod rootsys;
pub mod scalar;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};

/// Exact rationals used for inner products and small matrices.
pub type Rational = num_rational::Ratio<i64>;
pub use num_rational::BigRational;

/// Irreducible type families understood by the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    /// Dihedral `I2(n)`; the payload is `n`.
    I(u32),
}

/// A type label with its rank, e.g. `E8`, `B4`, `I2(5)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeSpec {
    pub family: Family,
    pub rank: usize,
}

impl TypeSpec {
    pub fn new(family: Family, rank: usize) -> Self {
        Self { family, rank }
    }

    /// C_n shares its Weyl group with B_n.
    pub fn canonical(self) -> Self {
        match self.family {
            Family::C => TypeSpec::new(Family::B, self.rank),
            _ => self,
        }
    }

    /// Dihedral order parameter for G2 and I2(n).
    pub fn dihedral_n(&self) -> Option<u32> {
        match self.family {
            Family::G => Some(6),
            Family::I(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_crystallographic_root_type(&self) -> bool {
        !matches!(self.family, Family::G | Family::I(_))
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.rank),
            Family::B => write!(f, "B{}", self.rank),
            Family::C => write!(f, "C{}", self.rank),
            Family::D => write!(f, "D{}", self.rank),
            Family::E => write!(f, "E{}", self.rank),
            Family::F => write!(f, "F{}", self.rank),
            Family::G => write!(f, "G{}", self.rank),
            Family::I(n) => write!(f, "I2({n})"),
        }
    }
}

impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let bad = || Error::Unsupported(s.to_string());
        if let Some(rest) = t.strip_prefix("I2") {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'))
                .ok_or_else(bad)?;
            let n: u32 = inner.trim().parse().map_err(|_| bad())?;
            if n < 3 {
                return Err(bad());
            }
            return Ok(TypeSpec::new(Family::I(n), 2));
        }
        let mut chars = t.chars();
        let fam = match chars.next().ok_or_else(bad)? {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let spec = TypeSpec::new(fam, rank);
        spec.validate()?;
        Ok(spec)
    }
}

impl TypeSpec {
    /// Checks the (family, rank) pair against the supported table.
    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::A => self.rank >= 1,
            Family::B | Family::C => self.rank >= 2,
            Family::D => self.rank >= 2,
            Family::E => matches!(self.rank, 6..=8),
            Family::F => self.rank == 4,
            Family::G => self.rank == 2,
            Family::I(n) => self.rank == 2 && n >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(self.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_labels() {
        assert_eq!("E8".parse::<TypeSpec>().unwrap(), TypeSpec::new(Family::E, 8));
        assert_eq!("b4".parse::<TypeSpec>().unwrap(), TypeSpec::new(Family::B, 4));
        assert_eq!("I2(4)".parse::<TypeSpec>().unwrap(), TypeSpec::new(Family::I(4), 2));
        assert_eq!("I2:5".parse::<TypeSpec>().unwrap(), TypeSpec::new(Family::I(5), 2));
        assert!("E9".parse::<TypeSpec>().is_err());
        assert!("F3".parse::<TypeSpec>().is_err());
        assert!("X1".parse::<TypeSpec>().is_err());
        assert_eq!("I2(4)".parse::<TypeSpec>().unwrap().to_string(), "I2(4)");
        assert_eq!("C3".parse::<TypeSpec>().unwrap().canonical().to_string(), "B3");
    }
}
