use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Rational number in lowest terms with a positive denominator.
pub type Rat = num_rational::Ratio<i64>;

/// Parses `"n"`, `"-n"` or `"n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::input(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always renders as `"num/den"`, including integers (`"0/1"`).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    let (n, d) = (*r.numer(), *r.denom());
    Rat::new(n.mod_floor(&d), d)
}

pub(crate) fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
