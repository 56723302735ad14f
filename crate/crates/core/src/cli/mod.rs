//! Batch front end: parse inputs, run one computation, emit a report.
//!
//! Exit statuses: 0 on success, 2 for unreadable or invalid input, 3 when a
//! resource cap is exceeded, 4 when a consistency check or an oracle
//! disagrees.

pub mod fixtures;
pub mod input;
mod render;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chartheory::{devissage_matrix, devissage_phi, pushforward_to_point, VirtualEqBundle};
use crate::cyclonum::{rational_serde, rint, set_conductor_cap, Rational};
use crate::error::{Error, Result};
use crate::eulerlab::{
    chi_orb_gset, count_iterated_points, curve_euler_report, euler_determinant, euler_report, weighted_chi,
    EulerVariant, StrataBase, Stratum, WeightedStrata, REPORT_SCHEMA_VERSION,
};
use crate::groupoidstack::{count_orbits, iterated_inertia, orbits, repeated_inertia_matches, FiniteGSet};
use crate::grouptheory::{count_commuting_tuples, set_tuple_cap, FiniteGroup, TupleAlgorithm};
use crate::orbicurve::{
    canonical_divisor, chi_orb_curve, chi_top_via_inertia, coarse_rr_oracle, degree, euler_char_rr, multiplicity,
    FracDivisor, OrbifoldCurve,
};
use input::Kind;

pub fn report_schema_version() -> &'static str {
    REPORT_SCHEMA_VERSION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub m_max: usize,
    pub oracle: bool,
    pub format: Format,
    pub output_path: Option<String>,
}

/// What to run, with inputs already parsed.
#[derive(Debug, Clone)]
pub enum Command {
    Classes { group: Arc<FiniteGroup> },
    Inertia { gset: Arc<FiniteGSet>, m: usize },
    Euler { target: EulerTarget },
    Series { gset: Arc<FiniteGSet> },
    Rr { divisor: FracDivisor },
    Devissage { gset: Arc<FiniteGSet>, bundle: Option<VirtualEqBundle> },
    Weighted { strata: WeightedStrata, variant: Option<EulerVariant> },
    Report { fixtures: Vec<String> },
}

#[derive(Debug, Clone)]
pub enum EulerTarget {
    GSet(Arc<FiniteGSet>),
    Curve(OrbifoldCurve),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classes { .. } => "classes",
            Command::Inertia { .. } => "inertia",
            Command::Euler { .. } => "euler",
            Command::Series { .. } => "series",
            Command::Rr { .. } => "rr",
            Command::Devissage { .. } => "devissage",
            Command::Weighted { .. } => "weighted",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub options: Options,
}

/// One formula value next to its independent oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    pub check: String,
    pub value: String,
    pub oracle: String,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliReport {
    pub schema_version: String,
    pub command: String,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracles: Option<Vec<OracleCheck>>,
}

impl CliReport {
    pub fn all_agree(&self) -> bool {
        self.oracles.iter().flatten().all(|o| o.agree)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn to_table(&self) -> String {
        render::table(self)
    }
}

/// Parses a report, rejecting unknown schema versions.
pub fn parse_report(text: &str) -> Result<CliReport> {
    let r: CliReport = serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))?;
    if r.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::Parse(format!("unknown report schema {:?}", r.schema_version)));
    }
    Ok(r)
}

/// Applies `STACKYRR_CONDUCTOR_CAP` and `STACKYRR_TUPLE_CAP`.
pub fn apply_env_caps() -> Result<()> {
    if let Ok(v) = std::env::var("STACKYRR_CONDUCTOR_CAP") {
        let cap: u32 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("STACKYRR_CONDUCTOR_CAP: not a positive integer: {v:?}")))?;
        set_conductor_cap(cap);
    }
    if let Ok(v) = std::env::var("STACKYRR_TUPLE_CAP") {
        let cap: u64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("STACKYRR_TUPLE_CAP: not a positive integer: {v:?}")))?;
        set_tuple_cap(cap);
    }
    Ok(())
}

/// The report and the exit status it implies.
pub struct Outcome {
    pub report: CliReport,
    pub status: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Table => self.report.to_table(),
        }
    }
}

pub fn run(spec: &JobSpec) -> Result<Outcome> {
    let mut oracles = Oracles::default();
    let result = execute(&spec.command, &spec.options, &mut oracles)?;
    let report = CliReport {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        command: spec.command.name().into(),
        result,
        oracles: spec.options.oracle.then_some(oracles.checks),
    };
    let status = if report.all_agree() { 0 } else { 4 };
    Ok(Outcome { report, status })
}

#[derive(Default)]
struct Oracles {
    checks: Vec<OracleCheck>,
    prefix: String,
}

impl Oracles {
    fn push(&mut self, check: &str, value: impl ToString, oracle: impl ToString) {
        let (value, oracle) = (value.to_string(), oracle.to_string());
        self.checks.push(OracleCheck {
            check: format!("{}{check}", self.prefix),
            agree: value == oracle,
            value,
            oracle,
        });
    }

    /// A check whose oracle is the absence of a consistency error.
    fn push_result(&mut self, check: &str, r: Result<()>) -> Result<()> {
        match r {
            Ok(()) => self.push(check, "ok", "ok"),
            Err(Error::Inconsistent(msg)) => self.push(check, msg, "ok"),
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

fn q(x: &Rational) -> Value {
    json!(rational_serde::to_pair(x))
}

fn execute(command: &Command, options: &Options, oracles: &mut Oracles) -> Result<Value> {
    match command {
        Command::Classes { group } => classes(group, oracles),
        Command::Inertia { gset, m } => inertia(gset, *m, oracles),
        Command::Euler { target } => euler(target, options.m_max, oracles),
        Command::Series { gset } => series(gset, options.m_max, oracles),
        Command::Rr { divisor } => rr(divisor, oracles),
        Command::Devissage { gset, bundle } => devissage(gset, bundle.as_ref(), oracles),
        Command::Weighted { strata, variant } => weighted(strata, *variant, oracles),
        Command::Report { fixtures } => report(fixtures, options, oracles),
    }
}

fn classes(g: &FiniteGroup, oracles: &mut Oracles) -> Result<Value> {
    let table = g.classes();
    let n = g.order();
    let rows: Vec<Value> = (0..table.len())
        .map(|c| {
            let r = table.representatives[c];
            let mut row = json!({
                "index": c,
                "representative": r,
                "size": table.class_sizes[c],
                "element_order": g.element_order(r),
                "centralizer_order": table.centralizer_orders[c],
            });
            if let Some(p) = g.permutation(r) {
                row["permutation"] = json!(p);
            }
            row
        })
        .collect();
    let size_sum: usize = table.class_sizes.iter().sum();
    oracles.push("class sizes sum to |G|", size_sum, n);
    let pairs = count_commuting_tuples(g, 2, TupleAlgorithm::Brute)?;
    oracles.push("#classes = #commuting pairs / |G|", table.len(), pairs / n as u128);
    for c in 0..table.len() {
        oracles.push(
            &format!("class {c}: size x centralizer order = |G|"),
            table.class_sizes[c] * table.centralizer_orders[c],
            n,
        );
    }
    Ok(json!({
        "order": n,
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "classes": rows,
    }))
}

const LISTING_LIMIT: usize = 256;

fn inertia(x: &Arc<FiniteGSet>, m: usize, oracles: &mut Oracles) -> Result<Value> {
    let xm = iterated_inertia(x, m)?;
    let o = orbits(xm.gset());
    let n = x.group().order();
    let reps: Vec<Vec<u32>> = o
        .representatives
        .iter()
        .take(LISTING_LIMIT)
        .map(|&i| xm.tuple(i).to_vec())
        .collect();
    let recursive = count_iterated_points(x, m, TupleAlgorithm::CentralizerRecursive)?;
    oracles.push("|X^(m)| against the centralizer recursion", xm.len(), recursive);
    let next = count_iterated_points(x, m + 1, TupleAlgorithm::CentralizerRecursive)?;
    oracles.push(
        "#orbits of X^(m) against Burnside |X^(m+1)|/|G|",
        rint(o.len() as i64),
        Rational::new(next.into(), (n as u128).into()),
    );
    oracles.push_result("X^(m) rebuilt by repeated inertia", repeated_inertia_matches(x, m))?;
    Ok(json!({
        "m": m,
        "points": xm.len(),
        "orbits": o.len(),
        "chi_orb": q(&Rational::new((xm.len() as u128).into(), (n as u128).into())),
        "orbit_representatives": reps,
        "orbit_representatives_truncated": o.len() > LISTING_LIMIT,
    }))
}

fn euler(target: &EulerTarget, m_max: usize, oracles: &mut Oracles) -> Result<Value> {
    match target {
        EulerTarget::GSet(x) => {
            let report = euler_report(x, m_max)?;
            let n: num_bigint::BigInt = (x.group().order() as u128).into();
            let x1 = count_iterated_points(x, 1, TupleAlgorithm::Brute)?;
            let x2 = count_iterated_points(x, 2, TupleAlgorithm::Brute)?;
            oracles.push("chi_top against Burnside |X^(1)|/|G|", rint(report.chi_top), Rational::new(x1.into(), n.clone()));
            oracles.push("chi_phy against Burnside |X^(2)|/|G|", rint(report.chi_phy), Rational::new(x2.into(), n));
            for m in 0..=m_max {
                let brute = count_iterated_points(x, m, TupleAlgorithm::Brute)?;
                let rec = count_iterated_points(x, m, TupleAlgorithm::CentralizerRecursive)?;
                oracles.push(&format!("|X^({m})| enumeration against recursion"), brute, rec);
            }
            for m in 1..=2.min(m_max + 1) {
                oracles.push_result(&format!("X^({m}) rebuilt by repeated inertia"), repeated_inertia_matches(x, m))?;
            }
            Ok(serde_json::to_value(report).expect("report serializes"))
        }
        EulerTarget::Curve(c) => {
            let report = curve_euler_report(c, m_max)?;
            oracles.push("inertia-side integral against 2 - 2g", chi_top_via_inertia(c)?, 2 - 2 * c.genus() as i64);
            oracles.push("-deg K against chi_orb", -degree(&canonical_divisor(c)), chi_orb_curve(c));
            Ok(serde_json::to_value(report).expect("report serializes"))
        }
    }
}

fn series(x: &Arc<FiniteGSet>, m_max: usize, oracles: &mut Oracles) -> Result<Value> {
    let s = crate::eulerlab::euler_series(x, m_max)?;
    let g = x.group();
    for m in 0..=m_max {
        let brute = count_iterated_points(x, m, TupleAlgorithm::Brute)?;
        let rec = count_iterated_points(x, m, TupleAlgorithm::CentralizerRecursive)?;
        oracles.push(&format!("|X^({m})| enumeration against recursion"), brute, rec);
        if x.points() == 1 && x.act(0, 0) == 0 && (0..g.order()).all(|h| x.act(0, h) == 0) {
            let hom = count_commuting_tuples(g, m, TupleAlgorithm::Brute)?;
            oracles.push(
                &format!("chi_{m} of a point against #Hom(Z^{m}, G)/|G|"),
                &s[m],
                Rational::new(hom.into(), (g.order() as u128).into()),
            );
        }
    }
    Ok(json!({ "series": s.iter().map(q).collect::<Vec<_>>() }))
}

fn rr(d: &FracDivisor, oracles: &mut Oracles) -> Result<Value> {
    let c = d.curve();
    let chi = euler_char_rr(d)?;
    let k = canonical_divisor(c);
    let dual = euler_char_rr(&k.sub(d)?)?;
    let mut mult = BTreeMap::new();
    for p in c.stacky_points() {
        mult.insert(p.label.clone(), multiplicity(d, &p.label)?);
    }
    oracles.push("chi against the round-down coarse oracle", chi, coarse_rr_oracle(d));
    oracles.push("chi(D) against -chi(K - D)", chi, -dual);
    oracles.push("-deg K against chi_orb", -degree(&k), chi_orb_curve(c));
    oracles.push("inertia-side integral against 2 - 2g", chi_top_via_inertia(c)?, 2 - 2 * c.genus() as i64);
    Ok(json!({
        "genus": c.genus(),
        "chi": chi,
        "degree": q(&degree(d)),
        "multiplicities": mult,
        "chi_orb": q(&chi_orb_curve(c)),
        "canonical_degree": q(&degree(&k)),
        "serre_duality": chi == -dual,
    }))
}

fn devissage(x: &Arc<FiniteGSet>, bundle: Option<&VirtualEqBundle>, oracles: &mut Oracles) -> Result<Value> {
    let m = devissage_matrix(x)?;
    let o = orbits(x);
    let orbit_info: Vec<Value> = o
        .representatives
        .iter()
        .map(|&r| {
            let s = x.stabilizer(r);
            let class_reps: Vec<usize> = s
                .as_group()
                .classes()
                .representatives
                .iter()
                .map(|&l| s.to_parent(l))
                .collect();
            json!({ "representative": r, "stabilizer_order": s.order(), "stabilizer_classes": class_reps })
        })
        .collect();
    let inertia = crate::groupoidstack::inertia(x);
    let io = orbits(inertia.gset());
    let inertia_reps: Vec<(usize, usize)> = io.representatives.iter().map(|&i| inertia.pair(i)).collect();
    let matrix: Vec<Vec<String>> = m.matrix.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    oracles.push("rank: fraction-free against Gauss-Jordan", m.rank, m.matrix.rank_gauss_jordan()?);
    if m.matrix.is_square() {
        oracles.push("determinant is nonzero", !m.matrix.determinant()?.is_zero(), true);
    }
    let mut out = json!({
        "rows": m.matrix.rows(),
        "cols": m.matrix.cols(),
        "rank": m.rank,
        "source_dim": m.source_dim,
        "target_dim": m.target_dim,
        "ok": m.is_isomorphism(),
        "matrix": matrix,
        "column_labels": m.column_labels,
        "orbits": orbit_info,
        "inertia_orbits": inertia_reps,
    });
    if let Some(b) = bundle {
        let phi = devissage_phi(b)?;
        let push = pushforward_to_point(b)?;
        oracles.push("pushforward: invariants against inertia sum", &push.source_side, &push.inertia_side);
        out["phi"] = json!(phi.values().iter().map(ToString::to_string).collect::<Vec<_>>());
        out["pushforward"] = json!({
            "source_side": push.source_side.to_string(),
            "inertia_side": push.inertia_side.to_string(),
        });
    }
    Ok(out)
}

/// Splits every stratum as finely as the base allows: orbits of a G-set,
/// single labelled points of a curve.
fn finest(strata: &WeightedStrata) -> Result<WeightedStrata> {
    let mut current = strata.clone();
    let mut i = 0;
    while i < current.strata().len() {
        let parts: Vec<Stratum> = match (&current.strata()[i].0, current.base()) {
            (Stratum::Points(pts), StrataBase::GSet(x)) => {
                let o = orbits(x);
                let mut ids: Vec<usize> = pts.iter().map(|&p| o.orbit_of(p)).collect();
                ids.sort_unstable();
                ids.dedup();
                ids.into_iter().map(|k| Stratum::Points(o.orbits[k].clone())).collect()
            }
            (Stratum::CurvePoints(labels), _) => labels.iter().map(|l| Stratum::CurvePoints(vec![l.clone()])).collect(),
            _ => vec![current.strata()[i].0.clone()],
        };
        let n = parts.len();
        if n > 1 {
            current = current.refine(i, parts)?;
        }
        i += n.max(1);
    }
    Ok(current)
}

fn weighted(strata: &WeightedStrata, variant: Option<EulerVariant>, oracles: &mut Oracles) -> Result<Value> {
    let variants = match variant {
        Some(v) => vec![v],
        None => vec![EulerVariant::Top, EulerVariant::Orb],
    };
    let fine = finest(strata)?;
    let integral = strata.strata().iter().all(|(_, w)| w.is_integer());
    let nonzero = strata.strata().iter().all(|(_, w)| !num_traits::Zero::is_zero(w));
    let mut out = serde_json::Map::new();
    for v in variants {
        let name = match v {
            EulerVariant::Top => "top",
            EulerVariant::Orb => "orb",
        };
        let chi = if integral {
            let a = weighted_chi(strata, v)?;
            oracles.push(&format!("{name}: weighted chi against the finest refinement"), &a, weighted_chi(&fine, v)?);
            Some(a)
        } else {
            None
        };
        let det = if nonzero {
            let d = euler_determinant(strata, v)?;
            let f = euler_determinant(&fine, v)?;
            oracles.push(
                &format!("{name}: determinant against the finest refinement"),
                serde_json::to_string(&d).expect("serializes"),
                serde_json::to_string(&f).expect("serializes"),
            );
            Some(d)
        } else {
            None
        };
        let weights_one = strata.strata().iter().all(|(_, w)| w == &rint(1));
        if weights_one && integral {
            oracles.push(&format!("{name}: unit weights against plain chi"), chi.as_ref().unwrap(), strata.base_chi(v)?);
        }
        out.insert(
            name.into(),
            json!({
                "weighted_chi": chi.as_ref().map(q),
                "determinant": det,
            }),
        );
    }
    Ok(Value::Object(out))
}

fn report(names: &[String], options: &Options, oracles: &mut Oracles) -> Result<Value> {
    let names: Vec<String> = if names.is_empty() {
        fixtures::names().map(String::from).collect()
    } else {
        names.to_vec()
    };
    let mut out = serde_json::Map::new();
    for name in names {
        let kind = fixtures::kind_of(&name).ok_or_else(|| Error::Parse(format!("no embedded fixture named {name:?}")))?;
        oracles.prefix = format!("{name}: ");
        let mut sections = serde_json::Map::new();
        match kind {
            Kind::GSet => {
                let x = Arc::new(input::gset(&name)?);
                sections.insert("classes".into(), classes(x.group(), oracles)?);
                sections.insert("inertia".into(), inertia(&x, 1, oracles)?);
                sections.insert("euler".into(), euler(&EulerTarget::GSet(x.clone()), options.m_max, oracles)?);
                sections.insert("devissage".into(), devissage(&x, None, oracles)?);
                sections.insert("chi_orb".into(), q(&chi_orb_gset(&x)?));
                sections.insert("chi_top".into(), json!(count_orbits(&x)));
            }
            Kind::Curve => {
                let c = input::curve(&name)?;
                sections.insert("euler".into(), euler(&EulerTarget::Curve(c.clone()), options.m_max, oracles)?);
                sections.insert("rr_zero".into(), rr(&FracDivisor::zero(&c), oracles)?);
                sections.insert("rr_canonical".into(), rr(&canonical_divisor(&c), oracles)?);
            }
            Kind::Divisor => {
                let curve_name = fixtures::DIVISOR_CURVES
                    .iter()
                    .find(|(d, _)| *d == name)
                    .map(|(_, c)| *c)
                    .ok_or_else(|| Error::Parse(format!("divisor fixture {name:?} has no curve")))?;
                let c = input::curve(curve_name)?;
                let d = input::divisor(&name, &c)?;
                sections.insert("curve".into(), json!(curve_name));
                sections.insert("rr".into(), rr(&d, oracles)?);
            }
            Kind::Bundle => {
                let b = input::bundle(&name)?;
                sections.insert("devissage".into(), devissage(&b.base().clone(), Some(&b), oracles)?);
            }
            Kind::Strata => {
                let s = input::strata(&name)?;
                sections.insert("weighted".into(), weighted(&s, None, oracles)?);
            }
            Kind::Group => unreachable!("no group fixtures"),
        }
        out.insert(name, Value::Object(sections));
    }
    oracles.prefix.clear();
    Ok(json!({ "fixtures": out }))
}
