//! Exact scalars: arbitrary-precision rationals and prime-field residues.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CdgError;

/// The ground field of a workspace: `Q` or `F_p` with `p < 2^31` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u32),
}

impl Field {
    pub fn parse(s: &str) -> Result<Self, CdgError> {
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u32 = p
                .parse()
                .map_err(|_| CdgError::Parse(format!("bad prime in field {s:?}")))?;
            if p >= 1 << 31 {
                return Err(CdgError::Unsupported(format!("prime {p} >= 2^31")));
            }
            if !is_prime(p) {
                return Err(CdgError::Parse(format!("{p} is not prime")));
            }
            return Ok(Field::Fp(p));
        }
        Err(CdgError::Parse(format!("unknown field {s:?}")))
    }

    pub fn name(self) -> String {
        match self {
            Field::Q => "Q".into(),
            Field::Fp(p) => format!("Fp:{p}"),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp {
                p,
                v: (n.rem_euclid(p as i64)) as u32,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar, CdgError> {
        if den == 0 {
            return Err(CdgError::Parse("zero denominator".into()));
        }
        match self {
            Field::Q => Ok(Scalar::Q(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            Field::Fp(_) => {
                let d = self.from_i64(den);
                if d.is_zero() {
                    return Err(CdgError::Parse(format!(
                        "denominator {den} vanishes in {}",
                        self.name()
                    )));
                }
                Ok(self.from_i64(num).mul(&d.inv()))
            }
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => p,
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the active field.  Rationals are kept in lowest terms with
/// positive denominator (the `BigRational` invariant); residues lie in `[0,p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        // rational addition normalizes with gcds; skip it for zero operands
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed primes");
                Scalar::Fp {
                    p: *p,
                    v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    fn is_neg_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.denom().is_one() && (r.numer() + 1u8).is_zero(),
            Scalar::Fp { p, v } => *p > 1 && *v == *p - 1,
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        // most structure constants are 0 or +-1; avoid bignum work for them
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_zero() {
            return self.clone();
        }
        if rhs.is_zero() {
            return rhs.clone();
        }
        if self.is_neg_one() {
            return rhs.neg();
        }
        if rhs.is_neg_one() {
            return self.neg();
        }
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed primes");
                Scalar::Fp {
                    p: *p,
                    v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "division by zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "division by zero");
                // Fermat: v^(p-2) mod p
                let mut result = 1u64;
                let mut base = *v as u64;
                let mut e = *p as u64 - 2;
                let m = *p as u64;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Fp {
                    p: *p,
                    v: result as u32,
                }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }

    /// Multiply by a Koszul sign (`+1` or `-1`).
    pub fn signed(&self, sign: i8) -> Scalar {
        if sign >= 0 {
            self.clone()
        } else {
            self.neg()
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Parse `"3"`, `"-2/5"`, or a JSON integer into a scalar of the given field.
pub fn parse_scalar(field: Field, s: &str) -> Result<Scalar, CdgError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| CdgError::Parse(format!("bad numerator {num:?}")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| CdgError::Parse(format!("bad denominator {den:?}")))?;
        field.from_ratio(n, d)
    } else {
        let n: i64 = s
            .parse()
            .map_err(|_| CdgError::Parse(format!("bad scalar {s:?}")))?;
        Ok(field.from_i64(n))
    }
}

impl Scalar {
    /// Positivity test used only for pretty-printing rationals.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}
