//! Integer cyclotomic polynomials and dense rational polynomial helpers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn totient(n: u32) -> usize {
    let mut result = n as u64;
    for p in prime_factors(n) {
        result = result / p as u64 * (p as u64 - 1);
    }
    result as usize
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic_poly: n must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = exact_div_monic(&num, &den);
    }
    let result = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, result.clone());
    result
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces a dense polynomial in ζ_n (any length) to the power basis of
/// length φ(n), first folding with ζ^n = 1 and then dividing by Φ_n.
pub fn reduce(poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let n_us = n as usize;
    let mut p = if poly.len() > n_us {
        let mut folded = vec![Rational::zero(); n_us];
        for (i, c) in poly.into_iter().enumerate() {
            if !c.is_zero() {
                folded[i % n_us] += c;
            }
        }
        folded
    } else {
        poly
    };
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if p.len() < deg {
        p.resize(deg, Rational::zero());
        return p;
    }
    for i in (deg..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], Rational::zero());
        for (j, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                p[i - deg + j] -= &c * BigInt::from(f);
            }
        }
    }
    p.truncate(deg);
    p
}

pub fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db);
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of a nonzero element `a` modulo Φ_n via the extended Euclidean
/// algorithm over Q[x]. Returns `None` when `a` is zero.
pub fn invert_mod_phi(a: &[Rational], n: u32) -> Option<Vec<Rational>> {
    let phi: Vec<Rational> = cyclotomic_poly(n)
        .iter()
        .map(|&c| Rational::from_integer(BigInt::from(c)))
        .collect();
    let mut r0 = phi;
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    // invariant: s_i * a ≡ r_i (mod Φ_n)
    let mut s0: Vec<Rational> = vec![];
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !(r1.len() == 1) {
        if r1.is_empty() {
            // gcd is nontrivial; impossible for nonzero a since Φ_n is irreducible
            return None;
        }
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let c = r1[0].clone();
    let inv: Vec<Rational> = s1.into_iter().map(|s| s / &c).collect();
    Some(reduce(inv, n))
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u32(a as u32, b as u32) as u64 * b
}
