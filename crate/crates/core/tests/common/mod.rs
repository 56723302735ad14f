#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use stackyrr::chartheory::{induce, ClassFunction, VirtualEqBundle};
use stackyrr::cyclonum::{rational, rint};
use stackyrr::groupoidstack::FiniteGSet;
use stackyrr::grouptheory::presets::{alternating, cyclic, dihedral, quaternion8, symmetric};
use stackyrr::grouptheory::{subgroup_class_representatives, FiniteGroup, Subgroup};
use stackyrr::orbicurve::{FracDivisor, OrbifoldCurve, StackyPoint};
use stackyrr::Rational;

/// Z/n for n ≤ 8, S3, S4, D4, Q8 and A4.
pub fn grid_groups() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, FiniteGroup)> = (1..=8).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    out.push(("S3".into(), symmetric(3)));
    out.push(("S4".into(), symmetric(4)));
    out.push(("D4".into(), dihedral(4)));
    out.push(("Q8".into(), quaternion8()));
    out.push(("A4".into(), alternating(4)));
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// Every G-set with at most `max_points` points and at most `max_orbits`
/// orbits, up to isomorphism: disjoint unions of coset spaces `G/K`, one
/// `K` per conjugacy class.
pub fn gsets(g: &Arc<FiniteGroup>, max_points: usize, max_orbits: usize) -> Vec<Arc<FiniteGSet>> {
    let blocks: Vec<FiniteGSet> = subgroup_class_representatives(g)
        .iter()
        .filter(|k| k.index() <= max_points)
        .map(FiniteGSet::cosets)
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn walk(
        blocks: &[FiniteGSet],
        start: usize,
        room: usize,
        orbits_left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Arc<FiniteGSet>>,
    ) {
        if !chosen.is_empty() {
            let mut x = blocks[chosen[0]].clone();
            for &b in &chosen[1..] {
                x = x.disjoint_union(&blocks[b]).expect("same group");
            }
            out.push(Arc::new(x));
        }
        if orbits_left == 0 {
            return;
        }
        for b in start..blocks.len() {
            let size = blocks[b].points();
            if size <= room {
                chosen.push(b);
                walk(blocks, b, room - size, orbits_left - 1, chosen, out);
                chosen.pop();
            }
        }
    }
    walk(&blocks, 0, max_points, max_orbits, &mut chosen, &mut out);
    out
}

/// The grid used by the dévissage and pushforward criteria: every
/// transitive action and every action with at most three orbits, on at
/// most eight points.
pub fn devissage_grid() -> Vec<(String, Arc<FiniteGSet>)> {
    let mut out = Vec::new();
    for (name, g) in grid_groups() {
        for x in gsets(&g, 8, 3) {
            out.push((name.clone(), x));
        }
    }
    out
}

/// A random genuine character of `h`: a sum of inductions of linear
/// characters of cyclic subgroups, and of permutation characters.
pub fn random_genuine_character<R: Rng>(h: &Arc<FiniteGroup>, rng: &mut R) -> ClassFunction {
    let n = h.order();
    let terms = rng.gen_range(1..=3);
    let mut chi: Option<ClassFunction> = None;
    for _ in 0..terms {
        let part = match rng.gen_range(0..3) {
            0 => {
                let a = rng.gen_range(0..n);
                let c = Subgroup::generated_by(h.clone(), &[a]).unwrap();
                let gen_local = c.to_local(a).unwrap();
                let k = rng.gen_range(0..c.order().max(1)) as i64;
                let lin = ClassFunction::cyclic_linear(c.as_group().clone(), gen_local, k).unwrap();
                induce(&c, &lin, false).unwrap()
            }
            1 => {
                let subs = subgroup_class_representatives(h);
                let k = subs.choose(rng).unwrap();
                ClassFunction::permutation_character(&FiniteGSet::cosets(k))
            }
            _ => ClassFunction::trivial(h.clone()),
        };
        chi = Some(match chi {
            None => part,
            Some(c) => c.add(&part).unwrap(),
        });
    }
    chi.unwrap().assume_genuine()
}

pub fn random_genuine_bundle<R: Rng>(x: &Arc<FiniteGSet>, rng: &mut R) -> VirtualEqBundle {
    let o = stackyrr::groupoidstack::orbits(x);
    let chars = o
        .representatives
        .iter()
        .map(|&r| random_genuine_character(x.stabilizer(r).as_group(), rng))
        .collect();
    VirtualEqBundle::new(x.clone(), chars).unwrap()
}

/// A curve of genus ≤ 5 with at most six stacky points of order 2..=12.
pub fn random_curve<R: Rng>(rng: &mut R) -> OrbifoldCurve {
    let genus = rng.gen_range(0..=5);
    let n = rng.gen_range(0..=6);
    let stacky = (0..n)
        .map(|i| StackyPoint {
            label: format!("p{i}"),
            order: rng.gen_range(2..=12),
        })
        .collect();
    OrbifoldCurve::new(genus, stacky).unwrap()
}

/// A divisor supported on the stacky points and on a few ordinary ones.
pub fn random_divisor<R: Rng>(curve: &OrbifoldCurve, rng: &mut R) -> FracDivisor {
    let mut terms: Vec<(String, Rational)> = Vec::new();
    for p in curve.stacky_points() {
        if rng.gen_bool(0.8) {
            terms.push((p.label.clone(), rational(rng.gen_range(-40..=40), p.order as i64)));
        }
    }
    for j in 0..rng.gen_range(0..=2) {
        terms.push((format!("q{j}"), rint(rng.gen_range(-6..=6))));
    }
    FracDivisor::new(curve, terms).unwrap()
}
