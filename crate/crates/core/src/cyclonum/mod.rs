//! Exact arithmetic in the cyclotomic fields Q(ζ_N).
//!
//! An element is stored in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}` of
//! `Q[X]/Φ_N(X)`. Every value handed out by this module is canonical: the
//! conductor is the least `N` (never `≡ 2 mod 4`) whose field contains it, so
//! equality is structural equality.

mod poly;
pub mod todd;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use poly::{cyclotomic_poly, divisors, totient};
pub use todd::{stacky_todd_closed_form, stacky_todd_sum};

pub type Rational = num_rational::BigRational;

pub const DEFAULT_CONDUCTOR_CAP: u32 = 1000;

static CONDUCTOR_CAP: AtomicU32 = AtomicU32::new(DEFAULT_CONDUCTOR_CAP);

/// Largest conductor any arithmetic result may be lifted to.
pub fn conductor_cap() -> u32 {
    CONDUCTOR_CAP.load(Ordering::Relaxed)
}

pub fn set_conductor_cap(cap: u32) {
    CONDUCTOR_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rint(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        CyclotomicNumber {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// ζ_N^k, canonicalized.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        let e = k.rem_euclid(n as i64) as usize;
        let mut terms = vec![Rational::zero(); n as usize];
        terms[e] = Rational::one();
        Self::from_exponent_poly(n, terms)
    }

    /// Builds `Σ terms[j] ζ_N^j` for a dense coefficient vector of any
    /// length (exponents are read modulo `N`), then canonicalizes.
    pub fn from_exponent_poly(n: u32, terms: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        check_cap(n as u64)?;
        let (n, terms) = if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2} for odd m
            let m = n / 2;
            let half = ((m + 1) / 2) as u64;
            let mut out = vec![Rational::zero(); m as usize];
            for (j, c) in terms.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let pos = ((j as u64 % n as u64) * half % m as u64) as usize;
                if j % 2 == 1 {
                    out[pos] -= c;
                } else {
                    out[pos] += c;
                }
            }
            (m, out)
        } else {
            (n, terms)
        };
        let coeffs = poly::reduce(terms, n);
        Ok(CyclotomicNumber {
            conductor: n,
            coeffs,
        }
        .canonicalize())
    }

    /// A power-basis vector as given, reduced modulo Φ_N but not descended
    /// to its minimal conductor. Use [`canonicalize`](Self::canonicalize) to
    /// normalize.
    pub fn from_power_basis_raw(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        if n % 4 == 2 {
            return Self::from_exponent_poly(n, coeffs);
        }
        check_cap(n as u64)?;
        Ok(CyclotomicNumber {
            conductor: n,
            coeffs: poly::reduce(coeffs, n),
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        poly::is_zero_poly(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    /// The rational value of a canonical element of conductor 1.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// The value as a machine integer, when it is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    fn lift(&self, m: u32) -> Vec<Rational> {
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut terms = vec![Rational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms[j * step] = c.clone();
            }
        }
        poly::reduce(terms, m)
    }

    fn common_conductor(&self, other: &Self) -> Result<u32> {
        let l = poly::lcm_u64(self.conductor as u64, other.conductor as u64);
        check_cap(l)?;
        Ok(l as u32)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.conductor == 1 && other.conductor == 1 {
            return Ok(Self::from_rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let m = self.common_conductor(other)?;
        let mut a = self.lift(m);
        for (x, y) in a.iter_mut().zip(other.lift(m)) {
            *x += y;
        }
        Ok(Self::canonical_from(m, a))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.conductor == 1 {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.conductor == 1 {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let m = self.common_conductor(other)?;
        let a = self.lift(m);
        let b = other.lift(m);
        let mut prod = vec![Rational::zero(); m as usize];
        let mu = m as usize;
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[(i + j) % mu] += x * y;
                }
            }
        }
        Ok(Self::canonical_from(m, poly::reduce(prod, m)))
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let inv = poly::invert_mod_phi(&self.coeffs, self.conductor).ok_or(Error::DivisionByZero)?;
        Ok(Self::canonical_from(self.conductor, inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Exact field operation on two cyclotomic numbers.
    pub fn arith(a: &Self, b: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
            ArithOp::Div => a.checked_div(b),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn neg_ref(&self) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies the automorphism ζ_N ↦ ζ_N^k.
    pub fn galois_conjugate(&self, k: i64) -> Result<Self> {
        let n = self.conductor;
        let kk = k.rem_euclid(n as i64) as u64;
        if poly::gcd_u32(kk as u32, n) != 1 && n != 1 {
            return Err(Error::InvalidAutomorphism { k, conductor: n });
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let mut terms = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms[(j as u64 * kk % n as u64) as usize] += c;
            }
        }
        Ok(Self::canonical_from(n, poly::reduce(terms, n)))
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois_conjugate(-1).expect("-1 is always a unit")
    }

    fn canonical_from(n: u32, coeffs: Vec<Rational>) -> Self {
        CyclotomicNumber {
            conductor: n,
            coeffs,
        }
        .canonicalize()
    }

    /// Minimal-conductor representative.
    pub fn canonicalize(mut self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        'outer: loop {
            if self.conductor == 1 {
                return self;
            }
            for p in poly::prime_factors(self.conductor) {
                if let Some(smaller) = self.descend(p) {
                    self = smaller;
                    continue 'outer;
                }
            }
            return self;
        }
    }

    /// Tries to rewrite the element in Q(ζ_{N/p}).
    fn descend(&self, p: u32) -> Option<Self> {
        let n = self.conductor;
        let m = n / p;
        if m % p == 0 {
            // trace to Q(ζ_{N/p}) keeps exactly the exponents divisible by p
            if self
                .coeffs
                .iter()
                .enumerate()
                .any(|(j, c)| j as u32 % p != 0 && !c.is_zero())
            {
                return None;
            }
            let terms: Vec<Rational> = self.coeffs.iter().step_by(p as usize).cloned().collect();
            return Some(Self::build_normalized(m, terms));
        }
        // p exactly divides N: Q(ζ_N) = Q(ζ_m)(ζ_p), relative degree p - 1
        let pm1 = Rational::from_integer(BigInt::from(p - 1));
        let mut trace_part = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as u32;
            if j % p == 0 {
                trace_part[j as usize] += c;
            } else {
                let target = crt_zero_mod_p(j % m, m, p);
                trace_part[target as usize] -= c / &pm1;
            }
        }
        let reduced = poly::reduce(trace_part.clone(), n);
        if reduced != self.coeffs {
            return None;
        }
        let mut terms = vec![Rational::zero(); m as usize];
        for (e, c) in trace_part.into_iter().enumerate() {
            if !c.is_zero() {
                debug_assert_eq!(e as u32 % p, 0);
                terms[e / p as usize] += c;
            }
        }
        Some(Self::build_normalized(m, terms))
    }

    fn build_normalized(m: u32, terms: Vec<Rational>) -> Self {
        if m % 4 == 2 || m == 2 {
            Self::from_exponent_poly(m, terms).expect("smaller conductor is within cap")
        } else {
            CyclotomicNumber {
                conductor: m,
                coeffs: poly::reduce(terms, m),
            }
        }
    }
}

/// The unique `e` in `[0, m·p)` with `e ≡ r (mod m)` and `e ≡ 0 (mod p)`,
/// for coprime `m`, `p`.
fn crt_zero_mod_p(r: u32, m: u32, p: u32) -> u32 {
    let mut e = r;
    while e % p != 0 {
        e += m;
    }
    e
}

fn check_cap(n: u64) -> Result<()> {
    let cap = conductor_cap() as u64;
    let effective = if n % 4 == 2 { n / 2 } else { n };
    if effective > cap {
        return Err(Error::Resource {
            what: "cyclotomic conductor",
            needed: n as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

impl Default for CyclotomicNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for CyclotomicNumber {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

// Operator forms panic on conductor-cap overflow; use the `checked_*`
// methods where that has to be reported as an error.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.neg_ref()
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.neg_ref()
    }
}

impl std::iter::Sum for CyclotomicNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (j, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "z{}", self.conductor)?,
                (_, false) => write!(f, "{abs}*z{}", self.conductor)?,
            }
            if j > 1 {
                write!(f, "^{j}")?;
            }
        }
        Ok(())
    }
}

/// Parses the display form: a sum of terms `q`, `zN`, `zN^k`, `q*zN^k`
/// with rational `q`, e.g. `3 + z3`, `-1/2`, `1/2*z12^5 - z12^7`.
impl std::str::FromStr for CyclotomicNumber {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("cannot read {text:?} as a cyclotomic number: {why}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with(['*', '^']) {
                terms.push((neg, &compact[start..i]));
                neg = ch == '-';
                start = i + 1;
            } else if i == 0 && (ch == '+' || ch == '-') {
                neg = ch == '-';
                start = 1;
            }
        }
        terms.push((neg, &compact[start..]));
        let parse_q = |q: &str| -> Result<Rational> {
            let (n, d) = q.split_once('/').unwrap_or((q, "1"));
            let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
            let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(n, d))
        };
        let mut total = CyclotomicNumber::zero();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coeff, root) = match term.split_once('*') {
                Some((c, r)) => (parse_q(c)?, Some(r)),
                None if term.starts_with('z') => (Rational::one(), Some(term)),
                None => (parse_q(term)?, None),
            };
            let mut value = CyclotomicNumber::from_rational(if neg { -coeff } else { coeff });
            if let Some(r) = root {
                let r = r.strip_prefix('z').ok_or_else(|| bad("expected zN"))?;
                let (n, k) = r.split_once('^').unwrap_or((r, "1"));
                let n: u32 = n.parse().map_err(|_| bad("bad root order"))?;
                let k: i64 = k.parse().map_err(|_| bad("bad exponent"))?;
                value = value.checked_mul(&CyclotomicNumber::root_of_unity(n, k)?)?;
            }
            total = total.checked_add(&value)?;
        }
        Ok(total)
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.conductor, self)
    }
}

/// Serde helpers encoding a rational as `["num", "den"]` decimal strings.
pub mod rational_serde {
    use super::*;

    pub fn to_pair(q: &Rational) -> [String; 2] {
        [q.numer().to_string(), q.denom().to_string()]
    }

    pub fn from_pair(pair: &[String; 2]) -> Result<Rational> {
        let num: BigInt = pair[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {:?}", pair[0])))?;
        let den: BigInt = pair[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {:?}", pair[1])))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::new(num, den))
    }

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_pair(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let pair = <[String; 2]>::deserialize(d)?;
        from_pair(&pair).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            v.iter().map(to_pair).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let pairs = <Vec<[String; 2]>>::deserialize(d)?;
            pairs
                .iter()
                .map(|p| from_pair(p).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloWire {
    conductor: u32,
    #[serde(with = "rational_serde::vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            conductor: self.conductor,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CycloWire::deserialize(d)?;
        if wire.conductor == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        if wire.coeffs.len() != totient(wire.conductor) {
            return Err(serde::de::Error::custom(format!(
                "conductor {} needs {} coefficients, got {}",
                wire.conductor,
                totient(wire.conductor),
                wire.coeffs.len()
            )));
        }
        CyclotomicNumber::from_power_basis_raw(wire.conductor, wire.coeffs)
            .map(CyclotomicNumber::canonicalize)
            .map_err(serde::de::Error::custom)
    }
}

impl CyclotomicNumber {
    pub fn to_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }
}
