//! Topological, orbifold and inertia Euler characteristics of finite
//! quotient groupoids and orbifold curves, the ladder relating them, the
//! higher orbifold Euler characteristics `χ_m`, and weighted Euler
//! characteristics and determinants over stratifications.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclonum::{rational_serde, rint, Rational};
use crate::error::{Error, Result};
use crate::groupoidstack::{count_orbits, inertia, iterated_inertia, orbits, FiniteGSet, RepeatedInertia};
use crate::grouptheory::{count_commuting_tuples, FiniteGroup, TupleAlgorithm};
use crate::orbicurve::{chi_orb_curve, OrbifoldCurve};

pub const REPORT_SCHEMA_VERSION: &str = "1";

fn frac(n: u128, d: u128) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Number of orbits.
pub fn chi_top_gset(x: &FiniteGSet) -> i64 {
    count_orbits(x) as i64
}

/// `Σ_orbits 1/|Stab|`, checked against `|X|/|G|`.
pub fn chi_orb_gset(x: &FiniteGSet) -> Result<Rational> {
    let o = orbits(x);
    let n = x.group().order() as u128;
    let by_orbits: Rational = o
        .representatives
        .iter()
        .map(|&r| frac(1, x.stabilizer_elements(r).len() as u128))
        .sum();
    let by_count = frac(x.points() as u128, n);
    if by_orbits != by_count {
        return Err(Error::inconsistent(format!(
            "orbit sum {by_orbits} differs from |X|/|G| = {by_count}"
        )));
    }
    Ok(by_orbits)
}

/// Number of orbits on the inertia set.
pub fn chi_phy_gset(x: &Arc<FiniteGSet>) -> i64 {
    chi_top_gset(inertia(x).gset())
}

/// Commuting-tuple counts of stabilizers, reusable across G-sets of one
/// group. Switching to another group clears it.
#[derive(Debug, Default)]
pub struct TupleCounts {
    group: Option<Arc<FiniteGroup>>,
    counts: HashMap<(Vec<usize>, usize, TupleAlgorithm), u128>,
}

impl TupleCounts {
    pub fn new() -> Self {
        Self::default()
    }

    fn bind(&mut self, g: &Arc<FiniteGroup>) {
        let same = self.group.as_ref().is_some_and(|h| Arc::ptr_eq(h, g) || **h == **g);
        if !same {
            self.group = Some(g.clone());
            self.counts.clear();
        }
    }
}

/// `|X^(m)|` counted as `Σ_x #{commuting m-tuples in Stab(x)}`.
pub fn count_iterated_points(x: &FiniteGSet, m: usize, algorithm: TupleAlgorithm) -> Result<u128> {
    count_iterated_points_with(x, m, algorithm, &mut TupleCounts::new())
}

pub fn count_iterated_points_with(
    x: &FiniteGSet,
    m: usize,
    algorithm: TupleAlgorithm,
    cache: &mut TupleCounts,
) -> Result<u128> {
    cache.bind(x.group());
    let mut total = 0u128;
    let weights: Vec<(usize, u128)> = match algorithm {
        // every point on its own
        TupleAlgorithm::Brute => (0..x.points()).map(|p| (p, 1)).collect(),
        // one representative per orbit, weighted by the orbit size
        TupleAlgorithm::CentralizerRecursive => {
            let o = orbits(x);
            o.representatives
                .iter()
                .zip(&o.orbits)
                .map(|(&r, orb)| (r, orb.len() as u128))
                .collect()
        }
    };
    for (p, w) in weights {
        let key = (x.stabilizer_elements(p), m, algorithm);
        let n = match cache.counts.get(&key) {
            Some(&n) => n,
            None => {
                let local = x.stabilizer(p);
                let n = count_commuting_tuples(local.as_group(), m, algorithm)?;
                cache.counts.insert(key, n);
                n
            }
        };
        total += w * n;
    }
    Ok(total)
}

/// `χ_m(X) = |X^(m)| / |G|`, by per-point enumeration and by the
/// centralizer recursion over orbit representatives; the two must agree.
pub fn chi_m(x: &FiniteGSet, m: usize) -> Result<Rational> {
    chi_m_with(x, m, &mut TupleCounts::new())
}

pub fn chi_m_with(x: &FiniteGSet, m: usize, cache: &mut TupleCounts) -> Result<Rational> {
    let direct = count_iterated_points_with(x, m, TupleAlgorithm::Brute, cache)?;
    let recursive = count_iterated_points_with(x, m, TupleAlgorithm::CentralizerRecursive, cache)?;
    if direct != recursive {
        return Err(Error::inconsistent(format!(
            "|X^({m})|: enumeration gives {direct}, recursion gives {recursive}"
        )));
    }
    Ok(frac(direct, x.group().order() as u128))
}

/// `χ_m` by the recursion alone.
pub fn chi_m_fast(x: &FiniteGSet, m: usize) -> Result<Rational> {
    let n = count_iterated_points(x, m, TupleAlgorithm::CentralizerRecursive)?;
    Ok(frac(n, x.group().order() as u128))
}

/// The three ladder values at level `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderLevel {
    pub m: usize,
    /// `χ^phy(X^(m))`
    pub chi_phy: i64,
    /// `χ^top(X^(m+1))`
    pub chi_top_next: i64,
    /// `χ_{m+2}(X)`
    #[serde(with = "rational_serde")]
    pub chi_orb_next2: Rational,
    pub ok: bool,
}

/// `χ^phy(X^(m)) = χ^top(X^(m+1)) = χ_{m+2}(X)`, each side built
/// separately.
pub fn ladder_level(x: &Arc<FiniteGSet>, m: usize) -> Result<LadderLevel> {
    let xm = iterated_inertia(x, m)?;
    let chi_phy = chi_phy_gset(xm.gset());
    let chi_top_next = chi_top_gset(iterated_inertia(x, m + 1)?.gset());
    let chi_orb_next2 = chi_m(x, m + 2)?;
    let ok = chi_phy == chi_top_next && rint(chi_top_next) == chi_orb_next2;
    Ok(LadderLevel {
        m,
        chi_phy,
        chi_top_next,
        chi_orb_next2,
        ok,
    })
}

pub fn ladder_check(x: &Arc<FiniteGSet>, m: usize) -> Result<bool> {
    Ok(ladder_level(x, m)?.ok)
}

/// Ladder levels `0..=m_max` in one pass. Each `X^(d)` is built once
/// directly and once by repeated inertia; the two must be isomorphic, and
/// `χ^phy(X^(m))` is read off the repeated tower.
pub fn ladder_levels(x: &Arc<FiniteGSet>, m_max: usize, cache: &mut TupleCounts) -> Result<Vec<LadderLevel>> {
    let mut tower = RepeatedInertia::new(x);
    let mut chi_top = Vec::with_capacity(m_max + 2);
    let mut chi_phy = Vec::with_capacity(m_max + 1);
    for d in 0..=m_max + 1 {
        let direct = iterated_inertia(x, d)?;
        if d > 0 {
            tower.step();
            tower.check_against(&direct)?;
            chi_phy.push(count_orbits(tower.gset()) as i64);
        }
        chi_top.push(count_orbits(direct.gset()) as i64);
    }
    (0..=m_max)
        .map(|m| {
            let chi_orb_next2 = chi_m_with(x, m + 2, cache)?;
            let ok = chi_phy[m] == chi_top[m + 1] && rint(chi_top[m + 1]) == chi_orb_next2;
            Ok(LadderLevel {
                m,
                chi_phy: chi_phy[m],
                chi_top_next: chi_top[m + 1],
                chi_orb_next2,
                ok,
            })
        })
        .collect()
}

/// `[χ_0, …, χ_{m_max}]`, with `χ_0 = χ^orb`.
pub fn euler_series(x: &FiniteGSet, m_max: usize) -> Result<Vec<Rational>> {
    (0..=m_max).map(|m| chi_m(x, m)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSummary {
    pub m: usize,
    pub ok: bool,
}

/// Euler characteristics of a quotient groupoid or orbifold curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "EulerReportJson")]
pub struct EulerReport {
    pub schema_version: String,
    pub chi_top: i64,
    #[serde(with = "rational_serde")]
    pub chi_orb: Rational,
    pub chi_phy: i64,
    #[serde(with = "rational_serde::vec")]
    pub series: Vec<Rational>,
    pub ladder: LadderSummary,
    pub ladder_verified: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EulerReportJson {
    schema_version: String,
    chi_top: i64,
    #[serde(with = "rational_serde")]
    chi_orb: Rational,
    chi_phy: i64,
    #[serde(with = "rational_serde::vec")]
    series: Vec<Rational>,
    ladder: LadderSummary,
    ladder_verified: bool,
}

impl TryFrom<EulerReportJson> for EulerReport {
    type Error = Error;
    fn try_from(r: EulerReportJson) -> Result<Self> {
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unknown report schema {:?}", r.schema_version)));
        }
        Ok(EulerReport {
            schema_version: r.schema_version,
            chi_top: r.chi_top,
            chi_orb: r.chi_orb,
            chi_phy: r.chi_phy,
            series: r.series,
            ladder: r.ladder,
            ladder_verified: r.ladder_verified,
        })
    }
}

/// Report for `[X/G]`: the ladder is checked at every level `0..=m_max`.
pub fn euler_report(x: &Arc<FiniteGSet>, m_max: usize) -> Result<EulerReport> {
    let series = euler_series(x, m_max)?;
    let chi_orb = chi_orb_gset(x)?;
    if series[0] != chi_orb {
        return Err(Error::inconsistent("χ_0 differs from χ^orb"));
    }
    let ok = ladder_levels(x, m_max, &mut TupleCounts::new())?.iter().all(|l| l.ok);
    Ok(EulerReport {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        chi_top: chi_top_gset(x),
        chi_orb,
        chi_phy: chi_phy_gset(x),
        series,
        ladder: LadderSummary { m: m_max, ok },
        ladder_verified: ok,
    })
}

/// Iterated inertia of an orbifold curve: the untwisted sector plus, at a
/// point of order `r`, one component `[pt/Z_r]` for each non-identity
/// commuting `m`-tuple in `Z_r`.
pub fn curve_chi_orb_iterated(curve: &OrbifoldCurve, m: usize) -> Rational {
    curve.stacky_points().iter().fold(chi_orb_curve(curve), |acc, p| {
        let r = p.order as u128;
        acc + frac(r.pow(m as u32) - 1, r)
    })
}

/// `χ^top(I^m F) = 2 − 2g + Σ_i (r_i^m − 1)`.
pub fn curve_chi_top_iterated(curve: &OrbifoldCurve, m: usize) -> i64 {
    curve.stacky_points().iter().fold(2 - 2 * curve.genus() as i64, |acc, p| {
        acc + (p.order as i64).pow(m as u32) - 1
    })
}

pub fn curve_euler_report(curve: &OrbifoldCurve, m_max: usize) -> Result<EulerReport> {
    let series: Vec<Rational> = (0..=m_max).map(|m| curve_chi_orb_iterated(curve, m)).collect();
    let mut ok = true;
    for m in 0..=m_max {
        let phy = curve_chi_top_iterated(curve, m + 1);
        ok &= rint(phy) == curve_chi_orb_iterated(curve, m + 2);
    }
    Ok(EulerReport {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        chi_top: curve_chi_top_iterated(curve, 0),
        chi_orb: chi_orb_curve(curve),
        chi_phy: curve_chi_top_iterated(curve, 1),
        series,
        ladder: LadderSummary { m: m_max, ok },
        ladder_verified: ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EulerVariant {
    Top,
    Orb,
}

/// One stratum of a G-set or of an orbifold curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Stratum {
    /// A G-stable set of points of a G-set.
    Points(Vec<usize>),
    /// Finitely many labelled points of a curve (stacky or ordinary).
    CurvePoints(Vec<String>),
    /// The complement on a curve of every labelled point in the other
    /// strata.
    Open,
}

#[derive(Debug, Clone)]
pub enum StrataBase {
    GSet(Arc<FiniteGSet>),
    Curve(OrbifoldCurve),
}

/// A partition of the base into strata with one weight per stratum.
#[derive(Debug, Clone)]
pub struct WeightedStrata {
    base: StrataBase,
    strata: Vec<(Stratum, Rational)>,
}

impl WeightedStrata {
    pub fn new(base: StrataBase, strata: Vec<(Stratum, Rational)>) -> Result<Self> {
        match &base {
            StrataBase::GSet(x) => {
                let o = orbits(x);
                let mut owner = vec![usize::MAX; x.points()];
                for (i, (s, _)) in strata.iter().enumerate() {
                    let Stratum::Points(pts) = s else {
                        return Err(Error::validation(format!("stratum {i} is not a set of G-set points")));
                    };
                    for &p in pts {
                        if p >= x.points() {
                            return Err(Error::validation(format!("stratum {i}: point {p} out of range")));
                        }
                        if owner[p] != usize::MAX {
                            return Err(Error::validation(format!("point {p} lies in strata {} and {i}", owner[p])));
                        }
                        owner[p] = i;
                    }
                }
                if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
                    return Err(Error::validation(format!("point {p} lies in no stratum")));
                }
                for orb in &o.orbits {
                    if orb.iter().any(|&p| owner[p] != owner[orb[0]]) {
                        return Err(Error::validation(format!(
                            "stratum {} is not a union of orbits (orbit of point {})",
                            owner[orb[0]], orb[0]
                        )));
                    }
                }
            }
            StrataBase::Curve(_) => {
                let mut seen = BTreeSet::new();
                let mut open = 0;
                for (i, (s, _)) in strata.iter().enumerate() {
                    match s {
                        Stratum::Open => open += 1,
                        Stratum::CurvePoints(labels) => {
                            for l in labels {
                                if l.is_empty() {
                                    return Err(Error::validation(format!("stratum {i}: empty label")));
                                }
                                if !seen.insert(l.as_str()) {
                                    return Err(Error::validation(format!("label {l:?} lies in two strata")));
                                }
                            }
                        }
                        Stratum::Points(_) => {
                            return Err(Error::validation(format!("stratum {i} is not a curve stratum")))
                        }
                    }
                }
                if open != 1 {
                    return Err(Error::validation(format!("a curve needs exactly one open stratum, got {open}")));
                }
            }
        }
        Ok(WeightedStrata { base, strata })
    }

    /// Strata of a G-set together with a weight per point, which must be
    /// constant on every stratum.
    pub fn from_point_weights(x: Arc<FiniteGSet>, strata: Vec<Vec<usize>>, sigma: &[Rational]) -> Result<Self> {
        if sigma.len() != x.points() {
            return Err(Error::validation("one weight per point is required"));
        }
        let mut out = Vec::with_capacity(strata.len());
        for (i, pts) in strata.into_iter().enumerate() {
            let w = pts.first().map(|&p| sigma.get(p).cloned().unwrap_or_else(Rational::zero)).unwrap_or_else(Rational::zero);
            if let Some(&p) = pts.iter().find(|&&p| p < sigma.len() && sigma[p] != w) {
                return Err(Error::validation(format!(
                    "weight {} at point {p} differs from {w} elsewhere on stratum {i}",
                    sigma[p]
                )));
            }
            out.push((Stratum::Points(pts), w));
        }
        Self::new(StrataBase::GSet(x), out)
    }

    /// The coarsest stratification: one stratum per orbit of a G-set, or
    /// the stacky points and their complement on a curve.
    pub fn canonical(base: StrataBase, weight: impl Fn(&Stratum) -> Rational) -> Result<Self> {
        let strata: Vec<Stratum> = match &base {
            StrataBase::GSet(x) => orbits(x).orbits.into_iter().map(Stratum::Points).collect(),
            StrataBase::Curve(c) => std::iter::once(Stratum::Open)
                .chain(c.stacky_points().iter().map(|p| Stratum::CurvePoints(vec![p.label.clone()])))
                .collect(),
        };
        let mut weighted = Vec::with_capacity(strata.len());
        for s in strata {
            let w = weight(&s);
            weighted.push((s, w));
        }
        Self::new(base, weighted)
    }

    pub fn base(&self) -> &StrataBase {
        &self.base
    }

    pub fn strata(&self) -> &[(Stratum, Rational)] {
        &self.strata
    }

    /// Replaces stratum `i` by `parts`, each carrying its weight.
    pub fn refine(&self, i: usize, parts: Vec<Stratum>) -> Result<Self> {
        let (old, w) = self
            .strata
            .get(i)
            .ok_or_else(|| Error::validation(format!("no stratum {i}")))?
            .clone();
        match (&old, &self.base) {
            (Stratum::Points(pts), _) => {
                let mut covered: Vec<usize> = parts
                    .iter()
                    .flat_map(|p| match p {
                        Stratum::Points(q) => q.clone(),
                        _ => vec![usize::MAX],
                    })
                    .collect();
                covered.sort_unstable();
                let mut expected = pts.clone();
                expected.sort_unstable();
                if covered != expected {
                    return Err(Error::validation(format!("parts do not partition stratum {i}")));
                }
            }
            (Stratum::CurvePoints(labels), _) => {
                let mut covered: Vec<&String> = Vec::new();
                for p in &parts {
                    match p {
                        Stratum::CurvePoints(l) => covered.extend(l),
                        _ => return Err(Error::validation("a point stratum refines into point strata")),
                    }
                }
                covered.sort();
                let mut expected: Vec<&String> = labels.iter().collect();
                expected.sort();
                if covered != expected {
                    return Err(Error::validation(format!("parts do not partition stratum {i}")));
                }
            }
            // the open part may shed finitely many labelled points
            (Stratum::Open, _) => {
                if parts.iter().filter(|p| **p == Stratum::Open).count() != 1 {
                    return Err(Error::validation("refining the open stratum keeps exactly one open part"));
                }
                let claimed: BTreeSet<&String> = self
                    .strata
                    .iter()
                    .flat_map(|(s, _)| match s {
                        Stratum::CurvePoints(l) => l.iter().collect::<Vec<_>>(),
                        _ => vec![],
                    })
                    .collect();
                for p in &parts {
                    if let Stratum::CurvePoints(l) = p {
                        if let Some(dup) = l.iter().find(|x| claimed.contains(x)) {
                            return Err(Error::validation(format!("{dup:?} is not in the open stratum")));
                        }
                    }
                }
            }
        }
        let mut strata = self.strata.clone();
        strata.splice(i..=i, parts.into_iter().map(|p| (p, w.clone())));
        Self::new(self.base.clone(), strata)
    }

    fn named_labels(&self) -> BTreeSet<&str> {
        self.strata
            .iter()
            .flat_map(|(s, _)| match s {
                Stratum::CurvePoints(l) => l.iter().map(String::as_str).collect::<Vec<_>>(),
                _ => vec![],
            })
            .collect()
    }

    /// `χ^top` or `χ^orb` of stratum `i`.
    pub fn stratum_chi(&self, i: usize, variant: EulerVariant) -> Rational {
        let (s, _) = &self.strata[i];
        match (&self.base, s) {
            (StrataBase::GSet(x), Stratum::Points(pts)) => {
                let o = orbits(x);
                let mut reps: Vec<usize> = pts.iter().map(|&p| o.orbit_of(p)).collect();
                reps.sort_unstable();
                reps.dedup();
                match variant {
                    EulerVariant::Top => rint(reps.len() as i64),
                    EulerVariant::Orb => reps
                        .iter()
                        .map(|&k| frac(1, x.stabilizer_elements(o.representatives[k]).len() as u128))
                        .sum(),
                }
            }
            (StrataBase::Curve(c), Stratum::CurvePoints(labels)) => match variant {
                EulerVariant::Top => rint(labels.len() as i64),
                EulerVariant::Orb => labels.iter().map(|l| frac(1, c.order_at(l) as u128)).sum(),
            },
            (StrataBase::Curve(c), Stratum::Open) => {
                let named = self.named_labels();
                let mut inside_stacky = Rational::zero();
                let mut removed = named.len() as i64;
                for p in c.stacky_points() {
                    if !named.contains(p.label.as_str()) {
                        // a stacky point left inside the open part
                        removed += 1;
                        inside_stacky += frac(1, p.order as u128);
                    }
                }
                let top = rint(2 - 2 * c.genus() as i64 - named.len() as i64);
                match variant {
                    EulerVariant::Top => top,
                    EulerVariant::Orb => rint(2 - 2 * c.genus() as i64 - removed) + inside_stacky,
                }
            }
            _ => unreachable!("strata are validated against their base"),
        }
    }

    /// `χ` of the whole base.
    pub fn base_chi(&self, variant: EulerVariant) -> Result<Rational> {
        Ok(match (&self.base, variant) {
            (StrataBase::GSet(x), EulerVariant::Top) => rint(chi_top_gset(x)),
            (StrataBase::GSet(x), EulerVariant::Orb) => chi_orb_gset(x)?,
            (StrataBase::Curve(c), EulerVariant::Top) => rint(2 - 2 * c.genus() as i64),
            (StrataBase::Curve(c), EulerVariant::Orb) => chi_orb_curve(c),
        })
    }
}

/// `Σ_i σ_i · χ(stratum_i)`; weights must be integers.
pub fn weighted_chi(strata: &WeightedStrata, variant: EulerVariant) -> Result<Rational> {
    let mut total = Rational::zero();
    for (i, (_, w)) in strata.strata.iter().enumerate() {
        if !w.is_integer() {
            return Err(Error::validation(format!("weight {w} on stratum {i} is not an integer")));
        }
        total += w * strata.stratum_chi(i, variant);
    }
    Ok(total)
}

/// A formal product `Π base^exponent` with distinct bases, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerDeterminant {
    pub factors: Vec<DeterminantFactor>,
    /// The product as a rational, when every exponent is an integer.
    #[serde(with = "option_rational")]
    pub value: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterminantFactor {
    #[serde(with = "rational_serde")]
    pub base: Rational,
    #[serde(with = "rational_serde")]
    pub exponent: Rational,
}

mod option_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(rational_serde::to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<[String; 2]>::deserialize(d)?
            .map(|p| rational_serde::from_pair(&p).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl EulerDeterminant {
    pub fn from_factors(factors: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (b, e) in factors {
            if b.is_zero() {
                return Err(Error::domain("zero base in an Euler determinant"));
            }
            *merged.entry(b).or_insert_with(Rational::zero) += e;
        }
        let factors: Vec<DeterminantFactor> = merged
            .into_iter()
            .filter(|(b, e)| !e.is_zero() && !b.is_one())
            .map(|(base, exponent)| DeterminantFactor { base, exponent })
            .collect();
        let value = if factors.iter().all(|f| f.exponent.is_integer()) {
            let mut v = Rational::one();
            for f in &factors {
                let e = f.exponent.to_integer();
                let p: Rational = Pow::pow(&f.base, e.abs().to_u32().expect("exponent fits in u32"));
                v *= if e.is_negative() { p.recip() } else { p };
            }
            Some(v)
        } else {
            None
        };
        Ok(EulerDeterminant { factors, value })
    }

    pub fn mul(&self, other: &EulerDeterminant) -> Result<EulerDeterminant> {
        Self::from_factors(
            self.factors
                .iter()
                .chain(&other.factors)
                .map(|f| (f.base.clone(), f.exponent.clone())),
        )
    }
}

/// `Π_i σ_i^{χ(stratum_i)}`; weights must be nonzero.
pub fn euler_determinant(strata: &WeightedStrata, variant: EulerVariant) -> Result<EulerDeterminant> {
    let mut factors = Vec::with_capacity(strata.strata.len());
    for (i, (_, w)) in strata.strata.iter().enumerate() {
        if w.is_zero() {
            return Err(Error::domain(format!("weight on stratum {i} is zero")));
        }
        factors.push((w.clone(), strata.stratum_chi(i, variant)));
    }
    EulerDeterminant::from_factors(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclonum::rational;
    use crate::grouptheory::presets::{cyclic, symmetric};

    fn pt(g: crate::grouptheory::FiniteGroup) -> Arc<FiniteGSet> {
        Arc::new(FiniteGSet::trivial(Arc::new(g), 1))
    }

    fn free_z2() -> Arc<FiniteGSet> {
        Arc::new(FiniteGSet::new(Arc::new(cyclic(2)), &[vec![0, 1], vec![1, 0]]).unwrap())
    }

    fn s3_natural() -> Arc<FiniteGSet> {
        Arc::new(FiniteGSet::natural(Arc::new(symmetric(3))).unwrap())
    }

    #[test]
    fn basic_characteristics() {
        assert_eq!(chi_top_gset(&free_z2()), 1);
        assert_eq!(chi_top_gset(&pt(cyclic(2))), 1);
        assert_eq!(chi_top_gset(&s3_natural()), 1);
        assert_eq!(chi_orb_gset(&free_z2()).unwrap(), rint(1));
        assert_eq!(chi_orb_gset(&pt(cyclic(2))).unwrap(), rational(1, 2));
        assert_eq!(chi_orb_gset(&s3_natural()).unwrap(), rational(1, 2));
        assert_eq!(chi_phy_gset(&free_z2()), 1);
        assert_eq!(chi_phy_gset(&pt(cyclic(2))), 2);
        assert_eq!(chi_phy_gset(&pt(symmetric(3))), 3);
    }

    #[test]
    fn higher_characteristics() {
        let x = s3_natural();
        assert_eq!(chi_m(&x, 0).unwrap(), chi_orb_gset(&x).unwrap());
        let p = pt(symmetric(3));
        assert_eq!(chi_m(&p, 2).unwrap(), rint(3));
        assert_eq!(chi_m(&p, 3).unwrap(), rint(8));
        assert_eq!(
            euler_series(&p, 3).unwrap(),
            vec![rational(1, 6), rint(1), rint(3), rint(8)]
        );
        let z2 = pt(cyclic(2));
        assert_eq!(
            euler_series(&z2, 4).unwrap(),
            vec![rational(1, 2), rint(1), rint(2), rint(4), rint(8)]
        );
        assert!(euler_series(&pt(crate::grouptheory::FiniteGroup::trivial()), 5)
            .unwrap()
            .iter()
            .all(|c| c.is_one()));
    }

    #[test]
    fn ladder_examples() {
        for m in 0..4 {
            let l = ladder_level(&pt(cyclic(2)), m).unwrap();
            assert_eq!(l.chi_phy, 1 << (m + 1));
            assert!(l.ok);
        }
        let l = ladder_level(&pt(symmetric(3)), 0).unwrap();
        assert_eq!((l.chi_phy, l.chi_top_next, l.chi_orb_next2.clone()), (3, 3, rint(3)));
        for m in 0..3 {
            let l = ladder_level(&free_z2(), m).unwrap();
            assert_eq!((l.chi_phy, l.chi_top_next), (1, 1));
            assert!(l.ok);
        }
    }

    #[test]
    fn report_round_trip() {
        let r = euler_report(&s3_natural(), 3).unwrap();
        assert_eq!(r.series[0], rational(1, 2));
        assert!(r.ladder_verified);
        let text = serde_json::to_string(&r).unwrap();
        let back: EulerReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let bad = text.replace("\"schema_version\":\"1\"", "\"schema_version\":\"2\"");
        assert!(serde_json::from_str::<EulerReport>(&bad).is_err());
    }

    #[test]
    fn curve_ladder() {
        let c = OrbifoldCurve::with_orders(0, &[2, 3, 7]).unwrap();
        let r = curve_euler_report(&c, 3).unwrap();
        assert_eq!(r.chi_orb, rational(-1, 42));
        assert_eq!(r.chi_top, 2);
        assert_eq!(r.chi_phy, 2 + 1 + 2 + 6);
        assert!(r.ladder_verified);
        assert_eq!(curve_chi_orb_iterated(&c, 1), rint(2));
    }

    fn modular_strata() -> WeightedStrata {
        let c = OrbifoldCurve::with_orders(0, &[2, 3]).unwrap();
        WeightedStrata::new(
            StrataBase::Curve(c),
            vec![
                (Stratum::Open, rint(5)),
                (Stratum::CurvePoints(vec!["p1".into()]), rint(7)),
                (Stratum::CurvePoints(vec!["p2".into()]), rint(11)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn weighted_examples() {
        let s = modular_strata();
        assert_eq!(weighted_chi(&s, EulerVariant::Top).unwrap(), rint(18));
        let d = euler_determinant(&s, EulerVariant::Top).unwrap();
        assert_eq!(d.value, Some(rint(77)));
        let orb = euler_determinant(&s, EulerVariant::Orb).unwrap();
        assert_eq!(orb.value, None);
        let ones = WeightedStrata::canonical(StrataBase::GSet(s3_natural()), |_| rint(1)).unwrap();
        assert_eq!(weighted_chi(&ones, EulerVariant::Orb).unwrap(), rational(1, 2));
        assert_eq!(euler_determinant(&ones, EulerVariant::Top).unwrap().value, Some(rint(1)));
        let zeros = WeightedStrata::canonical(StrataBase::GSet(s3_natural()), |_| rint(0)).unwrap();
        assert_eq!(weighted_chi(&zeros, EulerVariant::Top).unwrap(), rint(0));
        assert!(matches!(euler_determinant(&zeros, EulerVariant::Top), Err(Error::Domain(_))));
        let g2 = OrbifoldCurve::with_orders(2, &[]).unwrap();
        let whole = WeightedStrata::new(StrataBase::Curve(g2), vec![(Stratum::Open, rint(3))]).unwrap();
        assert_eq!(euler_determinant(&whole, EulerVariant::Top).unwrap().value, Some(rational(1, 9)));
    }

    #[test]
    fn refinement_keeps_values() {
        let s = modular_strata();
        let finer = s.refine(0, vec![Stratum::Open, Stratum::CurvePoints(vec!["q".into()])]).unwrap();
        for v in [EulerVariant::Top, EulerVariant::Orb] {
            assert_eq!(weighted_chi(&finer, v).unwrap(), weighted_chi(&s, v).unwrap());
            assert_eq!(euler_determinant(&finer, v).unwrap(), euler_determinant(&s, v).unwrap());
        }
        let coarse = WeightedStrata::new(
            StrataBase::Curve(OrbifoldCurve::with_orders(0, &[2, 3]).unwrap()),
            vec![(Stratum::Open, rint(4))],
        )
        .unwrap();
        let split = coarse
            .refine(0, vec![Stratum::Open, Stratum::CurvePoints(vec!["p1".into(), "p2".into()])])
            .unwrap();
        for v in [EulerVariant::Top, EulerVariant::Orb] {
            assert_eq!(weighted_chi(&split, v).unwrap(), weighted_chi(&coarse, v).unwrap());
        }
        assert_eq!(weighted_chi(&coarse, EulerVariant::Orb).unwrap(), rint(4) * rational(5, 6));
    }

    #[test]
    fn validation_errors() {
        let x = s3_natural();
        assert!(WeightedStrata::new(StrataBase::GSet(x.clone()), vec![(Stratum::Points(vec![0]), rint(1))]).is_err());
        let sigma = vec![rint(1), rint(1), rint(2)];
        assert!(WeightedStrata::from_point_weights(x.clone(), vec![vec![0, 1, 2]], &sigma).is_err());
        let free = Arc::new(FiniteGSet::trivial(Arc::new(cyclic(2)), 3));
        let ok = WeightedStrata::from_point_weights(free, vec![vec![0, 1], vec![2]], &sigma).unwrap();
        assert_eq!(weighted_chi(&ok, EulerVariant::Top).unwrap(), rint(4));
        assert!(weighted_chi(
            &WeightedStrata::canonical(StrataBase::GSet(x), |_| rational(1, 2)).unwrap(),
            EulerVariant::Top
        )
        .is_err());
    }
}
