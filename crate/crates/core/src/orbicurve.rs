//! Orbifold curves: a coarse curve of genus `g` with stacky points of
//! orders `r_i`, fractional divisors on them, and their Riemann–Roch,
//! Gauss–Bonnet and duality formulas.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclonum::todd::{stacky_todd_closed_form, stacky_todd_sum};
use crate::cyclonum::{rint, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackyPoint {
    pub label: String,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson")]
pub struct OrbifoldCurve {
    genus: u32,
    stacky: Vec<StackyPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveJson {
    genus: u32,
    #[serde(default)]
    stacky: Vec<StackyPoint>,
}

impl TryFrom<CurveJson> for OrbifoldCurve {
    type Error = Error;
    fn try_from(c: CurveJson) -> Result<Self> {
        OrbifoldCurve::new(c.genus, c.stacky)
    }
}

impl OrbifoldCurve {
    pub fn new(genus: u32, stacky: Vec<StackyPoint>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for p in &stacky {
            if p.order < 2 {
                return Err(Error::validation(format!(
                    "stacky point {:?} has order {} (must be at least 2)",
                    p.label, p.order
                )));
            }
            if p.label.is_empty() {
                return Err(Error::validation("empty point label"));
            }
            if !seen.insert(p.label.as_str()) {
                return Err(Error::validation(format!("duplicate label {:?}", p.label)));
            }
        }
        Ok(OrbifoldCurve { genus, stacky })
    }

    /// Labels `p1, p2, …` for the given orders.
    pub fn with_orders(genus: u32, orders: &[u32]) -> Result<Self> {
        let stacky = orders
            .iter()
            .enumerate()
            .map(|(i, &order)| StackyPoint {
                label: format!("p{}", i + 1),
                order,
            })
            .collect();
        Self::new(genus, stacky)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn stacky_points(&self) -> &[StackyPoint] {
        &self.stacky
    }

    /// Ramification order at `label`; 1 for ordinary points.
    pub fn order_at(&self, label: &str) -> u32 {
        self.stacky.iter().find(|p| p.label == label).map_or(1, |p| p.order)
    }

    pub fn is_stacky(&self, label: &str) -> bool {
        self.order_at(label) > 1
    }

    /// A label not used by any stacky point, for the integral part of the
    /// canonical divisor.
    pub fn anchor_label(&self) -> String {
        let mut label = String::from("anchor");
        while self.is_stacky(&label) {
            label.push('\'');
        }
        label
    }
}

/// A divisor with rational coefficients, integral away from stacky points
/// and in `(1/r)Z` at a point of order `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracDivisor {
    curve: OrbifoldCurve,
    support: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorTerm {
    pub label: String,
    pub num: i64,
    #[serde(default = "one_i64")]
    pub den: i64,
}

fn one_i64() -> i64 {
    1
}

impl FracDivisor {
    pub fn zero(curve: &OrbifoldCurve) -> Self {
        FracDivisor {
            curve: curve.clone(),
            support: BTreeMap::new(),
        }
    }

    pub fn new(curve: &OrbifoldCurve, terms: impl IntoIterator<Item = (String, Rational)>) -> Result<Self> {
        let mut d = Self::zero(curve);
        for (label, c) in terms {
            if label.is_empty() {
                return Err(Error::validation("empty point label"));
            }
            let r = curve.order_at(&label);
            if !(rint(r as i64) * &c).is_integer() {
                return Err(Error::validation(format!(
                    "coefficient {c} at {label:?} is not in (1/{r})Z"
                )));
            }
            let entry = d.support.entry(label).or_insert_with(Rational::zero);
            *entry += c;
        }
        d.support.retain(|_, c| !c.is_zero());
        Ok(d)
    }

    pub fn from_terms(curve: &OrbifoldCurve, terms: &[DivisorTerm]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| {
                if t.den == 0 {
                    return Err(Error::validation(format!("zero denominator at {:?}", t.label)));
                }
                Ok((t.label.clone(), Rational::new(t.num.into(), t.den.into())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(curve, parsed)
    }

    pub fn to_terms(&self) -> Vec<DivisorTerm> {
        self.support
            .iter()
            .map(|(label, c)| DivisorTerm {
                label: label.clone(),
                num: c.numer().to_i64().expect("coefficient fits in i64"),
                den: c.denom().to_i64().expect("coefficient fits in i64"),
            })
            .collect()
    }

    pub fn curve(&self) -> &OrbifoldCurve {
        &self.curve
    }

    pub fn coefficient(&self, label: &str) -> Rational {
        self.support.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> &BTreeMap<String, Rational> {
        &self.support
    }

    pub fn add(&self, other: &FracDivisor) -> Result<FracDivisor> {
        if self.curve != other.curve {
            return Err(Error::validation("divisors on different curves"));
        }
        Self::new(&self.curve, self.support.iter().chain(&other.support).map(|(l, c)| (l.clone(), c.clone())))
    }

    pub fn neg(&self) -> FracDivisor {
        FracDivisor {
            curve: self.curve.clone(),
            support: self.support.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &FracDivisor) -> Result<FracDivisor> {
        self.add(&other.neg())
    }
}

/// The local multiplicity `k ∈ [0, r−1]` with `k ≡ r·coeff (mod r)`.
pub fn multiplicity(d: &FracDivisor, label: &str) -> Result<u32> {
    let r = d.curve.order_at(label);
    if r < 2 {
        return Err(Error::domain(format!("{label:?} is not a stacky point")));
    }
    let rc = d.coefficient(label) * rint(r as i64);
    let k = rc.to_integer().mod_floor(&(r as i64).into());
    Ok(k.to_u32().expect("0 ≤ k < r"))
}

pub fn degree(d: &FracDivisor) -> Rational {
    d.support.values().sum()
}

/// `χ^orb = 2 − 2g − Σ (1 − 1/r_i)`, summed over strata: the open part
/// with weight 1 and each stacky point with weight `1/r_i`.
pub fn chi_orb_curve(curve: &OrbifoldCurve) -> Rational {
    let s = curve.stacky.len() as i64;
    let open = rint(2 - 2 * curve.genus as i64 - s);
    curve
        .stacky
        .iter()
        .fold(open, |acc, p| acc + Rational::new(1.into(), (p.order as i64).into()))
}

/// `χ(D) = deg D + ½χ^orb + Σ_i (1/r_i)·T(r_i, −k_i)`, with the local Todd
/// terms summed exactly in `Q(ζ_{r_i})`; checked against the closed form
/// `deg D + 1 − g − Σ k_i/r_i` and the coarse oracle.
pub fn euler_char_rr(d: &FracDivisor) -> Result<i64> {
    let curve = &d.curve;
    let mut todd = degree(d) + chi_orb_curve(curve) / rint(2);
    let mut closed = degree(d) + rint(1 - curve.genus as i64);
    for p in &curve.stacky {
        let r = p.order as i64;
        let k = multiplicity(d, &p.label)? as i64;
        let inv_r = Rational::new(1.into(), r.into());
        // a generator of the isotropy group acts on the fibre of O(D) by ζ^{-k}
        let fibre = (r - k) % r;
        let local = stacky_todd_sum(r, fibre)?;
        if local != stacky_todd_closed_form(r, fibre)? {
            return Err(Error::inconsistent(format!("Todd sum at r={r}, k={fibre} disagrees with its closed form")));
        }
        todd += local * &inv_r;
        closed -= rint(k) * &inv_r;
    }
    if todd != closed {
        return Err(Error::inconsistent(format!(
            "Todd-class sum {todd} differs from closed form {closed}"
        )));
    }
    if !todd.is_integer() {
        return Err(Error::inconsistent(format!("Euler characteristic {todd} is not an integer")));
    }
    let chi = todd.to_integer().to_i64().ok_or_else(|| Error::inconsistent("Euler characteristic overflows i64"))?;
    let oracle = coarse_rr_oracle(d);
    if chi != oracle {
        return Err(Error::inconsistent(format!(
            "Riemann–Roch gives {chi}, coarse oracle gives {oracle}"
        )));
    }
    Ok(chi)
}

/// Classical Riemann–Roch on the coarse curve after rounding every
/// coefficient down: `deg⌊D⌋ + 1 − g`.
pub fn coarse_rr_oracle(d: &FracDivisor) -> i64 {
    let floor: i64 = d
        .support
        .values()
        .map(|c| c.floor().to_integer().to_i64().expect("coefficient fits in i64"))
        .sum();
    floor + 1 - d.curve.genus as i64
}

/// `K = (2g − 2)·anchor + Σ_i ((r_i − 1)/r_i)·x_i`.
pub fn canonical_divisor(curve: &OrbifoldCurve) -> FracDivisor {
    let anchor = curve.anchor_label();
    let mut terms = vec![(anchor, rint(2 * curve.genus as i64 - 2))];
    for p in &curve.stacky {
        let r = p.order as i64;
        terms.push((p.label.clone(), Rational::new((r - 1).into(), r.into())));
    }
    FracDivisor::new(curve, terms).expect("canonical coefficients are admissible")
}

/// The inertia-side integral: `χ^orb` of the untwisted sector plus
/// `(r_i − 1)` twisted sectors at each stacky point, each a point of
/// weight `1/r_i`. Checked to equal `2 − 2g`.
pub fn chi_top_via_inertia(curve: &OrbifoldCurve) -> Result<i64> {
    let mut total = chi_orb_curve(curve);
    for p in &curve.stacky {
        let r = p.order as i64;
        total += Rational::new((r - 1).into(), r.into());
    }
    let expected = rint(2 - 2 * curve.genus as i64);
    if total != expected {
        return Err(Error::inconsistent(format!(
            "inertia integral {total} differs from the coarse Euler characteristic {expected}"
        )));
    }
    Ok(total.to_integer().to_i64().expect("small integer"))
}

/// `χ(D) = −χ(K − D)`.
pub fn serre_duality_check(d: &FracDivisor) -> Result<bool> {
    let k = canonical_divisor(&d.curve);
    let lhs = euler_char_rr(d)?;
    let rhs = euler_char_rr(&k.sub(d)?)?;
    Ok(lhs == -rhs)
}

/// `(χ^orb, −deg K)`, equal by Gauss–Bonnet.
pub fn gauss_bonnet(curve: &OrbifoldCurve) -> (Rational, Rational) {
    (chi_orb_curve(curve), -degree(&canonical_divisor(curve)))
}

/// The `g = 0` curve with points `i` (order 2) and `rho` (order 3), and the
/// ordinary point `inf`.
pub fn modular_curve() -> OrbifoldCurve {
    OrbifoldCurve::new(
        0,
        vec![
            StackyPoint {
                label: "i".into(),
                order: 2,
            },
            StackyPoint {
                label: "rho".into(),
                order: 3,
            },
        ],
    )
    .expect("valid curve")
}

/// The divisor whose Euler characteristic is the dimension of weight-`k`
/// modular forms (even `k ≥ 0`): `−(k/2)·inf + (k/4)·i + (k/3)·rho`, of
/// degree `k/12`.
pub fn modular_forms_divisor(k: i64) -> Result<FracDivisor> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::domain(format!("weight {k} must be even and non-negative")));
    }
    FracDivisor::new(
        &modular_curve(),
        [
            ("inf".to_string(), rint(-k / 2)),
            ("i".to_string(), Rational::new(k.into(), 4.into())),
            ("rho".to_string(), Rational::new(k.into(), 3.into())),
        ],
    )
}

/// `#{(a, b) ≥ 0 : 4a + 6b = k}`, the number of monomials `E₄^a E₆^b` of
/// weight `k`.
pub fn modular_monomial_count(k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    (0..=k / 6).filter(|b| (k - 6 * b) % 4 == 0).count() as i64
}
