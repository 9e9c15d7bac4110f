use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Exact rational number used for joint utilities, welfare and ratios.
///
/// Always stored in lowest terms with a positive denominator, so derived
/// equality and hashing coincide with numeric equality. Every operation is
/// checked: a result that does not fit in 64 bits is an [`Error::Overflow`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Utility {
    num: i64,
    den: i64,
}

impl Utility {
    pub const ZERO: Utility = Utility { num: 0, den: 1 };
    pub const ONE: Utility = Utility { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_int(value: i64) -> Self {
        Utility { num: value, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let num = i64::try_from(num).map_err(|_| Error::Overflow)?;
        let den = i64::try_from(den).map_err(|_| Error::Overflow)?;
        Ok(Utility { num, den })
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn checked_add(self, rhs: Utility) -> Result<Utility> {
        let (a, b, c, d) = (
            self.num as i128,
            self.den as i128,
            rhs.num as i128,
            rhs.den as i128,
        );
        let l = b.lcm(&d);
        let num = a
            .checked_mul(l / b)
            .and_then(|x| c.checked_mul(l / d).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow)?;
        Self::from_i128(num, l)
    }

    pub fn checked_sub(self, rhs: Utility) -> Result<Utility> {
        self.checked_add(Utility {
            num: -rhs.num,
            den: rhs.den,
        })
    }

    pub fn checked_mul(self, rhs: Utility) -> Result<Utility> {
        Self::from_i128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }

    pub fn checked_mul_int(self, k: i64) -> Result<Utility> {
        Self::from_i128(self.num as i128 * k as i128, self.den as i128)
    }

    pub fn checked_div(self, rhs: Utility) -> Result<Utility> {
        if rhs.num == 0 {
            return Err(Error::ZeroDenominator);
        }
        Self::from_i128(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }

    /// Decimal approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Utility {
    fn cmp(&self, other: &Self) -> Ordering {
        // i64 * i64 always fits in i128.
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Utility {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Utility {
    fn default() -> Self {
        Utility::ZERO
    }
}

impl From<i64> for Utility {
    fn from(value: i64) -> Self {
        Utility::from_int(value)
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Utility {
    type Err = Error;

    /// Accepts `p` or `p/q` with integer `p` and non-zero integer `q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Syntax {
            line: 0,
            message: format!("{what}: {s:?}"),
        };
        let parse_int = |t: &str| -> Result<i64> {
            let t = t.trim();
            if t.is_empty() {
                return Err(bad("empty number"));
            }
            t.parse::<i64>().map_err(|e| match e.kind() {
                std::num::IntErrorKind::PosOverflow | std::num::IntErrorKind::NegOverflow => {
                    Error::Overflow
                }
                _ => bad("not a rational number"),
            })
        };
        match s.split_once('/') {
            Some((p, q)) => Utility::new(parse_int(p)?, parse_int(q)?),
            None => Ok(Utility::from_int(parse_int(s)?)),
        }
    }
}
