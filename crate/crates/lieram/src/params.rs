//! Global configuration, exact rationals and p-adic valuations.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("cannot parse rational {0:?}; expected \"num/den\"")]
    BadRational(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Config(String),
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or a bare integer. Floats are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParamError> {
    let bad = || ParamError::BadRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde helper: rationals travel as `"num/den"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde helper: integers are JSON numbers when they fit in i64, decimal strings otherwise.
pub mod bigint_num {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(p: u64, x: &BigInt) -> Result<i64, ParamError> {
    if x.is_zero() {
        return Err(ParamError::ZeroValuation);
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Ok(v);
        }
        y = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational: vp(numerator) - vp(denominator).
pub fn vp(p: u64, x: &Rational) -> Result<i64, ParamError> {
    if x.is_zero() {
        return Err(ParamError::ZeroValuation);
    }
    Ok(vp_int(p, x.numer())? - vp_int(p, x.denom())?)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_big(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// Ceiling of a rational as an integer.
pub fn ceil_rat(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalParams {
    pub p: u64,
    /// Exponent of the coefficient period p^M.
    #[serde(rename = "M")]
    pub big_m: u32,
    /// Residue field degree: k has p^N0 elements.
    #[serde(rename = "N0")]
    pub n0: u32,
    #[serde(with = "rational_str")]
    pub v0: Rational,
    pub a_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.message)
    }
}

impl GlobalParams {
    pub fn new(p: u64, big_m: u32, n0: u32, v0: Rational, a_max: u64) -> Self {
        GlobalParams {
            p,
            big_m,
            n0,
            v0,
            a_max,
        }
    }

    /// Like `new`, but refuses parameters with any violation.
    pub fn checked(
        p: u64,
        big_m: u32,
        n0: u32,
        v0: Rational,
        a_max: u64,
    ) -> Result<Self, ParamError> {
        let g = Self::new(p, big_m, n0, v0, a_max);
        let v = validate(&g);
        if v.is_empty() {
            Ok(g)
        } else {
            Err(ParamError::Invalid(
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// w* = (p-1) v0.
    pub fn w_star(&self) -> Rational {
        rat_int(self.p as i64 - 1) * &self.v0
    }

    /// u* = (p-1)(p-2)+1.
    pub fn u_star(&self) -> u64 {
        (self.p - 1) * (self.p - 2) + 1
    }

    /// p^M as a machine word.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.big_m)
    }

    /// Largest integer strictly below (p-1) v0: the top coefficient allowed in A[u].
    pub fn max_coeff_below_wstar(&self) -> i64 {
        let w = self.w_star();
        let c = ceil_rat(&w).to_i64().expect("w* fits i64");
        c - 1
    }
}

/// Lists every violated invariant of `params`.
pub fn validate(params: &GlobalParams) -> Vec<Violation> {
    let mut out = Vec::new();
    if params.p < 3 || !is_prime(params.p) {
        out.push(Violation {
            invariant: "p_odd_prime",
            message: format!("p must be a prime >= 3, got {}", params.p),
        });
    }
    if params.big_m < 1 {
        out.push(Violation {
            invariant: "M_positive",
            message: "M must be >= 1".into(),
        });
    }
    if params.n0 < 1 {
        out.push(Violation {
            invariant: "N0_positive",
            message: "N0 must be >= 1".into(),
        });
    }
    if !params.v0.is_positive() {
        out.push(Violation {
            invariant: "v0_positive",
            message: format!("v0 must be > 0, got {}", fmt_rational(&params.v0)),
        });
    }
    if params.p >= 2 && params.v0.is_positive() {
        let need = ceil_rat(&(rat_int(params.p as i64 - 1) * &params.v0));
        if BigInt::from(params.a_max) < need {
            out.push(Violation {
                invariant: "a_max_covers_quotient",
                message: format!(
                    "a_max < (p-1)v0: need a_max >= {}, got {}",
                    need, params.a_max
                ),
            });
        }
    }
    if params.p >= 2 {
        let fits = (params.p as u128)
            .checked_pow(params.big_m)
            .map(|x| x < (1u128 << 62))
            .unwrap_or(false);
        if !fits {
            out.push(Violation {
                invariant: "modulus_fits_word",
                message: "p^M must be below 2^62".into(),
            });
        }
    }
    out
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    p: u64,
    #[serde(rename = "M")]
    big_m: u32,
    #[serde(rename = "N0")]
    n0: u32,
    v0: RawRational,
    a_max: u64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Str(String),
}

/// Parses a JSON or TOML config (JSON if the text starts with `{`).
pub fn parse_config(text: &str) -> Result<GlobalParams, ParamError> {
    let raw: RawConfig = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| ParamError::Config(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| ParamError::Config(e.to_string()))?
    };
    let v0 = match raw.v0 {
        RawRational::Int(n) => rat_int(n),
        RawRational::Str(s) => parse_rational(&s)?,
    };
    Ok(GlobalParams::new(raw.p, raw.big_m, raw.n0, v0, raw.a_max))
}

pub fn load_config(path: &Path) -> Result<GlobalParams, ParamError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParamError::Config(format!("{}: {}", path.display(), e)))?;
    parse_config(&text)
}

/// The three reference desk configurations.
pub mod desk {
    use super::*;

    pub fn c1() -> GlobalParams {
        GlobalParams::new(3, 1, 2, rat_int(1), 2)
    }

    pub fn c2() -> GlobalParams {
        GlobalParams::new(3, 2, 2, rat_int(1), 2)
    }

    pub fn c3() -> GlobalParams {
        GlobalParams::new(5, 2, 1, rat(4, 3), 6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(3, &rat_int(3)).unwrap(), 1);
        assert_eq!(vp(3, &rat_int(1)).unwrap(), 0);
        assert_eq!(vp(3, &rat_int(18)).unwrap(), 2);
        assert_eq!(vp(3, &rat(4, 3)).unwrap(), -1);
        assert!(vp(3, &rat_int(0)).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&desk::c2()).is_empty());
        assert!(validate(&desk::c1()).is_empty());
        assert!(validate(&desk::c3()).is_empty());
        let v = validate(&GlobalParams::new(2, 1, 1, rat_int(1), 5));
        assert!(v.iter().any(|x| x.invariant == "p_odd_prime"));
        let v = validate(&GlobalParams::new(3, 1, 1, rat_int(1), 1));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].invariant, "a_max_covers_quotient");
    }

    #[test]
    fn derived_constants() {
        let g = desk::c3();
        assert_eq!(g.u_star(), 13);
        assert_eq!(g.w_star(), rat(16, 3));
        assert_eq!(g.max_coeff_below_wstar(), 5);
        assert_eq!(desk::c1().max_coeff_below_wstar(), 1);
    }

    #[test]
    fn config_round_trip() {
        let j = r#"{"p":3,"M":2,"N0":2,"v0":"1/1","a_max":2}"#;
        assert_eq!(parse_config(j).unwrap(), desk::c2());
        let t = "p = 5\nM = 2\nN0 = 1\nv0 = \"4/3\"\na_max = 6\n";
        assert_eq!(parse_config(t).unwrap(), desk::c3());
        let ser = serde_json::to_string(&desk::c3()).unwrap();
        assert_eq!(parse_config(&ser).unwrap(), desk::c3());
        assert!(parse_rational("1.5").is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| rat(n, d))
    }

    fn nonzero_rat() -> impl Strategy<Value = Rational> {
        small_rat().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rationals_form_a_field(a in small_rat(), b in small_rat(), c in nonzero_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&c * (Rational::one() / &c), Rational::one());
            prop_assert_eq!(&a - &a, Rational::zero());
        }

        #[test]
        fn vp_is_a_valuation(x in nonzero_rat(), y in nonzero_rat()) {
            let p = 3;
            prop_assert_eq!(vp(p, &(&x * &y)).unwrap(), vp(p, &x).unwrap() + vp(p, &y).unwrap());
            let s = &x + &y;
            if !s.is_zero() {
                let (a, b) = (vp(p, &x).unwrap(), vp(p, &y).unwrap());
                let c = vp(p, &s).unwrap();
                prop_assert!(c >= a.min(b));
                if a != b {
                    prop_assert_eq!(c, a.min(b));
                }
            }
        }
    }
}
