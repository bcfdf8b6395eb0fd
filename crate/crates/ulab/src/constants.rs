//! Registry of named irrational constants.
//!
//! Experiments that need an irrational coefficient refer to one of these
//! names instead of a floating literal, so recorded baselines are
//! byte-reproducible and "irrational" is decidable at the interface.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irrational {
    Sqrt2,
    Sqrt3,
    Sqrt5,
    GoldenRatio,
    E,
    Pi,
}

impl Irrational {
    pub fn value(self) -> f64 {
        match self {
            Irrational::Sqrt2 => std::f64::consts::SQRT_2,
            Irrational::Sqrt3 => 1.732_050_807_568_877_2,
            Irrational::Sqrt5 => 2.236_067_977_499_79,
            Irrational::GoldenRatio => 1.618_033_988_749_894_8,
            Irrational::E => std::f64::consts::E,
            Irrational::Pi => std::f64::consts::PI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Irrational::Sqrt2 => "sqrt2",
            Irrational::Sqrt3 => "sqrt3",
            Irrational::Sqrt5 => "sqrt5",
            Irrational::GoldenRatio => "golden_ratio",
            Irrational::E => "e",
            Irrational::Pi => "pi",
        }
    }

    /// Parses a registry name. Numeric literals are rejected: a decimal is a
    /// rational and the alpha-indexed set families require an irrational.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sqrt2" => Ok(Irrational::Sqrt2),
            "sqrt3" => Ok(Irrational::Sqrt3),
            "sqrt5" => Ok(Irrational::Sqrt5),
            "golden_ratio" | "phi" => Ok(Irrational::GoldenRatio),
            "e" => Ok(Irrational::E),
            "pi" => Ok(Irrational::Pi),
            other => Err(Error::InvalidArgument(format!(
                "unknown irrational constant {other:?} (rational values are not accepted here)"
            ))),
        }
    }
}
