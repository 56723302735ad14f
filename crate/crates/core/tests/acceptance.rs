//! Acceptance criteria 1–11, one PASS/FAIL line each, with runtime limits.
//! Runs without the libtest harness: `cargo test --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::process::Command as Process;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stackyrr::chartheory::{devissage_matrix, pushforward_to_point};
use stackyrr::cyclonum::todd::{stacky_todd_closed_form, stacky_todd_sum};
use stackyrr::cyclonum::{rational, rint};
use stackyrr::eulerlab::{
    euler_determinant, ladder_levels, EulerDeterminant, weighted_chi, TupleCounts, EulerVariant, StrataBase, Stratum, WeightedStrata,
};
use stackyrr::groupoidstack::{inertia, orbits, FiniteGSet};
use stackyrr::grouptheory::presets::{small_groups, symmetric};
use stackyrr::grouptheory::{count_commuting_tuples, TupleAlgorithm};
use stackyrr::orbicurve::{
    canonical_divisor, chi_orb_curve, chi_top_via_inertia, coarse_rr_oracle, degree, euler_char_rr,
    modular_forms_divisor, modular_monomial_count, OrbifoldCurve,
};
use stackyrr::Rational;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: stackyrr::Error) -> String {
    e.to_string()
}

fn c1_devissage() -> Outcome {
    let grid = common::devissage_grid();
    for (name, x) in &grid {
        let m = devissage_matrix(x).map_err(err)?;
        let inertia_orbits = orbits(inertia(x).gset()).len();
        let source: usize = orbits(x)
            .representatives
            .iter()
            .map(|&r| x.stabilizer(r).as_group().classes().len())
            .sum();
        check(m.matrix.is_square() && m.rank == m.matrix.rows(), || {
            format!("{name} on {} points: {}x{} of rank {}", x.points(), m.matrix.rows(), m.matrix.cols(), m.rank)
        })?;
        check(m.source_dim == source && source == inertia_orbits, || {
            format!("{name}: source {} vs {source} vs {inertia_orbits} inertia orbits", m.source_dim)
        })?;
    }
    Ok(format!("{} actions", grid.len()))
}

fn c2_pushforward() -> Outcome {
    let grid = common::devissage_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let (name, x) = &grid[rng.gen_range(0..grid.len())];
        let b = common::random_genuine_bundle(x, &mut rng);
        let p = pushforward_to_point(&b).map_err(|e| format!("bundle {i} over {name}: {e}"))?;
        check(p.source_side == p.inertia_side, || format!("bundle {i} over {name}"))?;
    }
    Ok("200 bundles".into())
}

fn c3_ladder() -> Outcome {
    let mut count = 0;
    for (name, g) in small_groups(16) {
        let g = Arc::new(g);
        let mut cache = TupleCounts::new();
        for x in common::gsets(&g, 6, 6) {
            // builds X^(0..=4) directly and by repeated inertia, and checks they agree
            let levels = ladder_levels(&x, 3, &mut cache).map_err(|e| format!("{name}: {e}"))?;
            for l in levels {
                check(l.ok, || format!("{name} on {} points: {l:?}", x.points()))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} G-sets"))
}

fn c4_series() -> Outcome {
    let g = symmetric(3);
    let x = Arc::new(FiniteGSet::trivial(Arc::new(g.clone()), 1));
    let mut got = Vec::new();
    for (m, (tuples, chi)) in [(6u128, 1i64), (18, 3), (48, 8)].into_iter().enumerate() {
        let m = m + 1;
        let brute = count_commuting_tuples(&g, m, TupleAlgorithm::Brute).map_err(err)?;
        check(brute == tuples, || format!("#commuting {m}-tuples = {brute}"))?;
        let c = stackyrr::eulerlab::chi_m(&x, m).map_err(err)?;
        check(c == rint(chi), || format!("chi_{m} = {c}"))?;
        got.push(c.to_string());
    }
    Ok(format!("({})", got.join(", ")))
}

fn random_instances(seed: u64, n: usize) -> Vec<stackyrr::orbicurve::FracDivisor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let c = common::random_curve(&mut rng);
            common::random_divisor(&c, &mut rng)
        })
        .collect()
}

fn c5_rr() -> Outcome {
    let cases = random_instances(5, 250);
    for (i, d) in cases.iter().enumerate() {
        let chi = euler_char_rr(d).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = coarse_rr_oracle(d);
        check(chi == oracle, || format!("instance {i}: {chi} vs {oracle}"))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn c6_todd() -> Outcome {
    let mut failures = 0;
    let mut total = 0;
    let mut example = None;
    for r in 2..=30i64 {
        for k in 0..r {
            total += 1;
            let sum = stacky_todd_sum(r, k).map_err(err)?;
            let closed = stacky_todd_closed_form(r, k).map_err(err)?;
            // the corrected identity must hold on both paths; a mismatch here is a real failure
            assert_eq!(sum, closed, "r={r}, k={k}: exact sum against closed form");
            let stated = rational(r - 1, 2) - rint(k);
            if sum != stated {
                failures += 1;
                example.get_or_insert(format!("r={r}, k={k}: sum is {sum}, stated value {stated}"));
            }
        }
    }
    if failures > 0 {
        return Err(format!(
            "stated value (r-1)/2 - k fails on {failures}/{total} pairs (e.g. {}); \
             both paths agree on (r-1)/2 - ((-k) mod r) everywhere",
            example.unwrap()
        ));
    }
    Ok(format!("{total} pairs"))
}

fn c7_gauss_bonnet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..250 {
        let c = common::random_curve(&mut rng);
        let k = canonical_divisor(&c);
        check(-degree(&k) == chi_orb_curve(&c), || format!("curve {i}: -deg K"))?;
        let t = chi_top_via_inertia(&c).map_err(err)?;
        check(t == 2 - 2 * c.genus() as i64, || format!("curve {i}: inertia total {t}"))?;
    }
    let c = OrbifoldCurve::with_orders(0, &[2, 3, 7]).map_err(err)?;
    let orb = chi_orb_curve(&c);
    check(orb == rational(-1, 42), || format!("(2,3,7): chi_orb = {orb}"))?;
    check(-degree(&canonical_divisor(&c)) == orb, || "(2,3,7): -deg K".into())?;
    let t = chi_top_via_inertia(&c).map_err(err)?;
    check(t == 2, || format!("(2,3,7): inertia total {t}"))?;
    Ok("250 curves; (2,3,7): chi_orb = -1/42, inertia total 2".into())
}

fn c8_serre() -> Outcome {
    let cases = random_instances(5, 250);
    for (i, d) in cases.iter().enumerate() {
        let k = canonical_divisor(d.curve());
        let lhs = euler_char_rr(d).map_err(err)?;
        let rhs = euler_char_rr(&k.sub(d).map_err(err)?).map_err(err)?;
        check(lhs == -rhs, || format!("instance {i}: chi(D) = {lhs}, chi(K-D) = {rhs}"))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn c9_modular() -> Outcome {
    let expected = [1, 1, 1, 1, 1, 2, 1];
    let mut got = Vec::new();
    for (k, want) in [0, 4, 6, 8, 10, 12, 14].into_iter().zip(expected) {
        let chi = euler_char_rr(&modular_forms_divisor(k).map_err(err)?).map_err(err)?;
        let oracle = modular_monomial_count(k);
        check(chi == oracle && chi == want, || format!("weight {k}: chi {chi}, monomials {oracle}"))?;
        got.push(chi.to_string());
    }
    Ok(format!("{{{}}}", got.join(",")))
}

fn random_weight<R: Rng>(rng: &mut R) -> Rational {
    let mut w = 0;
    while w == 0 {
        w = rng.gen_range(-5..=7);
    }
    rint(w)
}

fn gset_strata<R: Rng>(x: &Arc<FiniteGSet>, rng: &mut R) -> Vec<Vec<usize>> {
    let o = orbits(x);
    let parts = rng.gen_range(1..=o.len());
    let mut strata: Vec<Vec<usize>> = vec![Vec::new(); parts];
    for (i, orb) in o.orbits.iter().enumerate() {
        let j = if i < parts { i } else { rng.gen_range(0..parts) };
        strata[j].extend(orb);
    }
    strata
}

fn curve_strata<R: Rng>(c: &OrbifoldCurve, rng: &mut R) -> Vec<Stratum> {
    let mut named: Vec<Vec<String>> = Vec::new();
    for p in c.stacky_points() {
        match rng.gen_range(0..3) {
            0 => {}
            1 if !named.is_empty() => named.last_mut().unwrap().push(p.label.clone()),
            _ => named.push(vec![p.label.clone()]),
        }
    }
    for j in 0..rng.gen_range(0..=2) {
        named.push(vec![format!("q{j}")]);
    }
    std::iter::once(Stratum::Open).chain(named.into_iter().map(Stratum::CurvePoints)).collect()
}

/// Splits a random stratum into finer pieces.
fn random_refinement<R: Rng>(s: &WeightedStrata, rng: &mut R) -> WeightedStrata {
    let i = rng.gen_range(0..s.strata().len());
    let parts = match (&s.strata()[i].0, s.base()) {
        (Stratum::Points(pts), StrataBase::GSet(x)) => {
            let o = orbits(x);
            let mut ids: Vec<usize> = pts.iter().map(|&p| o.orbit_of(p)).collect();
            ids.sort_unstable();
            ids.dedup();
            ids.into_iter().map(|k| Stratum::Points(o.orbits[k].clone())).collect()
        }
        (Stratum::CurvePoints(l), _) => l.iter().map(|x| Stratum::CurvePoints(vec![x.clone()])).collect(),
        (Stratum::Open, _) => vec![Stratum::Open, Stratum::CurvePoints(vec![format!("fresh{}", rng.gen::<u16>())])],
        _ => unreachable!(),
    };
    s.refine(i, parts).unwrap()
}

/// A formal product rewritten over primes (and -1), so that `6^e` and
/// `2^e·3^e` compare equal.
fn prime_form(d: &EulerDeterminant) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for f in &d.factors {
        let num = f.base.numer().to_i64().expect("small base");
        let den = f.base.denom().to_i64().expect("small base");
        let mut add = |p: i64, e: Rational| *out.entry(p).or_insert_with(|| rint(0)) += e;
        if num < 0 {
            add(-1, f.exponent.clone());
        }
        for (v, sign) in [(num.abs(), 1), (den, -1)] {
            let mut v = v;
            let mut p = 2;
            while v > 1 {
                while v % p == 0 {
                    add(p, &f.exponent * rint(sign));
                    v /= p;
                }
                p += 1;
            }
        }
    }
    out.retain(|_, e| *e != rint(0));
    out
}

fn with_weights(s: &WeightedStrata, w: &[Rational]) -> WeightedStrata {
    let strata = s.strata().iter().zip(w).map(|((st, _), w)| (st.clone(), w.clone())).collect();
    WeightedStrata::new(s.base().clone(), strata).unwrap()
}

fn c10_weighted() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = common::devissage_grid();
    let mut bases = Vec::new();
    for i in 0..300 {
        if i % 2 == 0 {
            let (_, x) = &grid[rng.gen_range(0..grid.len())];
            let strata = gset_strata(x, &mut rng);
            let st = strata.into_iter().map(|p| (Stratum::Points(p), rint(1))).collect();
            bases.push(WeightedStrata::new(StrataBase::GSet(x.clone()), st).unwrap());
        } else {
            let c = common::random_curve(&mut rng);
            let st = curve_strata(&c, &mut rng).into_iter().map(|s| (s, rint(1))).collect();
            bases.push(WeightedStrata::new(StrataBase::Curve(c), st).unwrap());
        }
    }
    for (i, s0) in bases.iter().enumerate() {
        let n = s0.strata().len();
        let w1: Vec<Rational> = (0..n).map(|_| random_weight(&mut rng)).collect();
        let w2: Vec<Rational> = (0..n).map(|_| random_weight(&mut rng)).collect();
        let sum: Vec<Rational> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
        let p1: Vec<Rational> = (0..n).map(|_| rint(rng.gen_range(1..=12))).collect();
        let p2: Vec<Rational> = (0..n).map(|_| rint(rng.gen_range(1..=12))).collect();
        let prod: Vec<Rational> = p1.iter().zip(&p2).map(|(a, b)| a * b).collect();
        let s1 = with_weights(s0, &w1);
        let s2 = with_weights(s0, &w2);
        for v in [EulerVariant::Top, EulerVariant::Orb] {
            let a = weighted_chi(&s1, v).map_err(err)?;
            let b = weighted_chi(&s2, v).map_err(err)?;
            let ab = weighted_chi(&with_weights(s0, &sum), v).map_err(err)?;
            check(ab == &a + &b, || format!("case {i} {v:?}: additivity {ab} vs {a} + {b}"))?;
            let e1 = euler_determinant(&with_weights(s0, &p1), v).map_err(err)?;
            let e2 = euler_determinant(&with_weights(s0, &p2), v).map_err(err)?;
            let e12 = euler_determinant(&with_weights(s0, &prod), v).map_err(err)?;
            check(prime_form(&e12) == prime_form(&e1.mul(&e2).map_err(err)?), || {
                format!("case {i} {v:?}: determinant of a product")
            })?;
            if let (Some(a), Some(b), Some(c)) = (&e1.value, &e2.value, &e12.value) {
                check(&(a * b) == c, || format!("case {i} {v:?}: value of a product"))?;
            }
            let d1 = euler_determinant(&s1, v).map_err(err)?;
            let fine = random_refinement(&s1, &mut rng);
            check(weighted_chi(&fine, v).map_err(err)? == a, || format!("case {i} {v:?}: refinement"))?;
            check(euler_determinant(&fine, v).map_err(err)? == d1, || format!("case {i} {v:?}: refined determinant"))?;
        }
        let c = rint(rng.gen_range(2..=9));
        let constant = with_weights(s0, &vec![c.clone(); n]);
        let top = s0.base_chi(EulerVariant::Top).map_err(err)?.to_integer();
        let e = top.to_string().parse::<i32>().unwrap();
        let want = if e >= 0 { num_traits::Pow::pow(&c, e as u32) } else { num_traits::Pow::pow(&c, (-e) as u32).recip() };
        let d = euler_determinant(&constant, EulerVariant::Top).map_err(err)?;
        check(d.value.as_ref() == Some(&want), || format!("case {i}: constant {c} gives {:?}, want {want}", d.value))?;
    }
    Ok(format!("{} stratifications", bases.len()))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_stackyrr");
    let names: Vec<&str> = stackyrr::cli::fixtures::names().collect();
    for name in &names {
        let run = || {
            Process::new(bin)
                .args(["report", "--oracle", "--fixture", name])
                .output()
                .map_err(|e| e.to_string())
        };
        let a = run()?;
        let b = run()?;
        check(a.status.success(), || format!("{name}: exit {:?}", a.status.code()))?;
        check(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{name}: outputs differ"))?;
    }
    Ok(format!("{} fixtures", names.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "devissage isomorphism", limit: Some(Duration::from_secs(10)), run: c1_devissage },
        Criterion { id: 2, name: "pushforward to a point", limit: Some(Duration::from_secs(10)), run: c2_pushforward },
        Criterion { id: 3, name: "Euler ladder", limit: Some(Duration::from_secs(60)), run: c3_ladder },
        Criterion { id: 4, name: "Euler series of [pt/S3]", limit: Some(Duration::from_secs(1)), run: c4_series },
        Criterion { id: 5, name: "orbifold Riemann-Roch", limit: Some(Duration::from_secs(5)), run: c5_rr },
        Criterion { id: 6, name: "cyclotomic Todd identity", limit: Some(Duration::from_secs(10)), run: c6_todd },
        Criterion { id: 7, name: "Gauss-Bonnet", limit: Some(Duration::from_secs(1)), run: c7_gauss_bonnet },
        Criterion { id: 8, name: "Serre duality", limit: None, run: c8_serre },
        Criterion { id: 9, name: "modular forms", limit: None, run: c9_modular },
        Criterion { id: 10, name: "weighted Euler characteristics", limit: None, run: c10_weighted },
        Criterion { id: 11, name: "CLI determinism", limit: None, run: c11_determinism },
    ];
    // criterion 6 as literally stated cannot hold; see `c6_todd`
    const KNOWN_UNATTAINABLE: &[u32] = &[6];
    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match &outcome {
            Ok(detail) => println!("PASS  criterion {:>2}  {}  ({detail}; {elapsed:.2?})", c.id, c.name),
            Err(detail) => {
                println!("FAIL  criterion {:>2}  {}  ({detail}; {elapsed:.2?})", c.id, c.name);
                if !KNOWN_UNATTAINABLE.contains(&c.id) {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
