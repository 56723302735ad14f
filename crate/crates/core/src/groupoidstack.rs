//! Finite G-sets as zero-dimensional quotient stacks `[X/G]`: orbits,
//! stabilizers, the inertia set `{(x, h) : h·x = x}` and its iterates
//! built from commuting tuples.
//!
//! Actions are left actions: `act(x, g·h) = act(act(x, h), g)`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grouptheory::{FiniteGroup, Subgroup};

pub const DEFAULT_POINT_CAP: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGSet {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<u32>,
}

impl FiniteGSet {
    /// `table[x][g]` is `g·x`. Validated against the group's generators,
    /// which suffices for the full action law.
    pub fn new(group: Arc<FiniteGroup>, table: &[Vec<usize>]) -> Result<Self> {
        let n = group.order();
        let s = table.len();
        let mut action = Vec::with_capacity(s * n);
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!(
                    "action row for point {x} has {} entries, group order is {n}",
                    row.len()
                )));
            }
            for &y in row {
                if y >= s {
                    return Err(Error::validation(format!("point {x} is sent to {y}, only {s} points")));
                }
                action.push(y as u32);
            }
        }
        let gset = FiniteGSet {
            group,
            points: s,
            action,
        };
        gset.validate()?;
        Ok(gset)
    }

    /// Closes an action given only on generators: `images[i][x]` is
    /// `gens[i]·x`.
    pub fn from_generator_images(group: Arc<FiniteGroup>, gens: &[usize], images: &[Vec<usize>]) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::validation("one image list per generator is required"));
        }
        let n = group.order();
        let s = images.first().map_or(0, Vec::len);
        if images.iter().any(|im| im.len() != s) {
            return Err(Error::validation("generator images must all have the same length"));
        }
        if let Some(&bad) = gens.iter().find(|&&g| g >= n) {
            return Err(Error::validation(format!("generator {bad} is not a group element")));
        }
        // BFS over words in the generators: (g·t)(x) = g(t(x))
        let mut perm_of: Vec<Option<Vec<usize>>> = vec![None; n];
        perm_of[0] = Some((0..s).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for (gi, &g) in gens.iter().enumerate() {
                let gt = group.mul(g, t);
                let img: Vec<usize> = perm_of[t].as_ref().unwrap().iter().map(|&x| images[gi][x]).collect();
                match &perm_of[gt] {
                    Some(existing) if *existing != img => {
                        return Err(Error::validation(format!(
                            "generator images are inconsistent at group element {gt}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        perm_of[gt] = Some(img);
                        queue.push_back(gt);
                    }
                }
            }
        }
        if perm_of.iter().any(Option::is_none) {
            return Err(Error::validation("generators do not generate the group"));
        }
        let table: Vec<Vec<usize>> = (0..s)
            .map(|x| (0..n).map(|g| perm_of[g].as_ref().unwrap()[x]).collect())
            .collect();
        Self::new(group, &table)
    }

    /// The natural action of a permutation group on its moved set.
    pub fn natural(group: Arc<FiniteGroup>) -> Result<Self> {
        let degree = group
            .degree()
            .ok_or_else(|| Error::validation("group has no permutation representation"))?;
        let table: Vec<Vec<usize>> = (0..degree)
            .map(|x| (0..group.order()).map(|g| group.permutation(g).unwrap()[x] as usize).collect())
            .collect();
        Self::new(group, &table)
    }

    /// `s` points with every element acting trivially.
    pub fn trivial(group: Arc<FiniteGroup>, s: usize) -> Self {
        let n = group.order();
        FiniteGSet {
            group,
            points: s,
            action: (0..s).flat_map(|x| std::iter::repeat(x as u32).take(n)).collect(),
        }
    }

    /// Left cosets `G/H` with `g·(xH) = (gx)H`; coset `i` is the one whose
    /// minimal element is the `i`-th smallest coset minimum.
    pub fn cosets(sub: &Subgroup) -> Self {
        let group = sub.parent().clone();
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut count = 0;
        for g in 0..n {
            if coset_of[g] == usize::MAX {
                for &h in sub.elements() {
                    coset_of[group.mul(g, h)] = count;
                }
                count += 1;
            }
        }
        let mut reps = vec![0usize; count];
        for g in (0..n).rev() {
            reps[coset_of[g]] = g;
        }
        let action = (0..count)
            .flat_map(|c| {
                let group = &group;
                let coset_of = &coset_of;
                let rep = reps[c];
                (0..n).map(move |g| coset_of[group.mul(g, rep)] as u32)
            })
            .collect();
        FiniteGSet {
            group,
            points: count,
            action,
        }
    }

    /// Disjoint union over the same group; points of `other` are shifted.
    pub fn disjoint_union(&self, other: &FiniteGSet) -> Result<Self> {
        if !Arc::ptr_eq(&self.group, &other.group) && *self.group != *other.group {
            return Err(Error::validation("disjoint union needs a common group"));
        }
        let shift = self.points as u32;
        let mut action = self.action.clone();
        action.extend(other.action.iter().map(|&y| y + shift));
        Ok(FiniteGSet {
            group: self.group.clone(),
            points: self.points + other.points,
            action,
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        for x in 0..self.points {
            if self.act(x, 0) != x {
                return Err(Error::validation(format!("identity moves point {x}")));
            }
        }
        let mut gens = self.group.generators().to_vec();
        if gens.is_empty() {
            gens = self.group.greedy_generators();
        }
        for x in 0..self.points {
            for &s in &gens {
                let sx = self.act(x, s);
                for g in 0..n {
                    if self.act(sx, g) != self.act(x, self.group.mul(g, s)) {
                        return Err(Error::validation(format!(
                            "action law fails at point {x}, elements ({g}, {s})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }


    /// The full action table from the action of each generator of the
    /// group, one lookup per entry.
    pub(crate) fn from_generator_action(group: Arc<FiniteGroup>, points: usize, gen_action: &[Vec<u32>]) -> Self {
        let n = group.order();
        let mut action = vec![0u32; points * n];
        let steps = group.word_steps();
        for (x, row) in action.chunks_exact_mut(n).enumerate() {
            row[0] = x as u32;
            for &(e, i, p) in steps {
                row[e as usize] = gen_action[i as usize][row[p as usize] as usize];
            }
        }
        FiniteGSet { group, points, action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// `g·x`
    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.action[x * self.group.order() + g] as usize
    }

    pub fn action_table(&self) -> Vec<Vec<usize>> {
        (0..self.points)
            .map(|x| (0..self.group.order()).map(|g| self.act(x, g)).collect())
            .collect()
    }

    pub fn stabilizer_elements(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(x, g) == x).collect()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::new(self.group.clone(), self.stabilizer_elements(x)).expect("stabilizers are subgroups")
    }

    pub fn fixed_points(&self, h: usize) -> Vec<usize> {
        (0..self.points).filter(|&x| self.act(x, h) == x).collect()
    }
}

/// Orbit partition with minimal-index representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub stabilizer_orders: Vec<usize>,
    orbit_of: Vec<usize>,
    transporter: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x]
    }

    /// An element `t` with `t·rep = x`, where `rep` represents x's orbit.
    pub fn transporter(&self, x: usize) -> usize {
        self.transporter[x]
    }
}

pub fn orbits(x: &FiniteGSet) -> OrbitDecomposition {
    let g = x.group();
    let mut gens = g.generators().to_vec();
    if gens.is_empty() {
        gens = g.greedy_generators();
    }
    let mut orbit_of = vec![usize::MAX; x.points()];
    let mut transporter = vec![0usize; x.points()];
    let mut orbits = Vec::new();
    for start in 0..x.points() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(y) = queue.pop_front() {
            for &s in &gens {
                let z = x.act(y, s);
                if orbit_of[z] == usize::MAX {
                    orbit_of[z] = id;
                    transporter[z] = g.mul(s, transporter[y]);
                    members.push(z);
                    queue.push_back(z);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let representatives: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
    let stabilizer_orders = orbits.iter().map(|o| g.order() / o.len()).collect();
    OrbitDecomposition {
        orbits,
        representatives,
        stabilizer_orders,
        orbit_of,
        transporter,
    }
}

/// Number of orbits, by union–find over generator edges; an independent
/// route from [`orbits`] used for large iterated-inertia sets.
pub fn count_orbits(x: &FiniteGSet) -> usize {
    let mut parent: Vec<u32> = (0..x.points() as u32).collect();
    fn find(parent: &mut [u32], mut a: u32) -> u32 {
        while parent[a as usize] != a {
            parent[a as usize] = parent[parent[a as usize] as usize];
            a = parent[a as usize];
        }
        a
    }
    let gens = x.group().greedy_generators();
    let mut components = x.points();
    for p in 0..x.points() {
        for &s in &gens {
            let q = x.act(p, s);
            let (ra, rb) = (find(&mut parent, p as u32), find(&mut parent, q as u32));
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
                components -= 1;
            }
        }
    }
    components
}

/// Dense or hashed lookup from a mixed-radix tuple code to a point index.
#[derive(Debug, Clone)]
enum TupleIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl TupleIndex {
    fn get(&self, code: u64) -> Option<usize> {
        match self {
            TupleIndex::Dense(v) => v.get(code as usize).copied().filter(|&i| i != u32::MAX).map(|i| i as usize),
            TupleIndex::Sparse(m) => m.get(&code).map(|&i| i as usize),
        }
    }
}

/// `X^(m) = {(x, h₁, …, h_m) : h_i pairwise commuting, h_i·x = x}` with
/// `g·(x, h⃗) = (g·x, g·h⃗·g⁻¹)`, points in lexicographic order.
#[derive(Debug, Clone)]
pub struct IteratedInertia {
    base: Arc<FiniteGSet>,
    depth: usize,
    tuples: Vec<u32>,
    gset: Arc<FiniteGSet>,
    index: TupleIndex,
}

/// The inertia set is the depth-one iterate.
pub type InertiaSet = IteratedInertia;

impl IteratedInertia {
    pub fn base(&self) -> &Arc<FiniteGSet> {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gset(&self) -> &Arc<FiniteGSet> {
        &self.gset
    }

    pub fn len(&self) -> usize {
        self.gset.points()
    }

    pub fn is_empty(&self) -> bool {
        self.gset.points() == 0
    }

    /// `(x, h₁, …, h_m)` for point `i`.
    pub fn tuple(&self, i: usize) -> &[u32] {
        let w = self.depth + 1;
        &self.tuples[i * w..(i + 1) * w]
    }

    /// `(x, h)` of an inertia point (depth ≥ 1 uses the last coordinate).
    pub fn pair(&self, i: usize) -> (usize, usize) {
        let t = self.tuple(i);
        (t[0] as usize, t[self.depth] as usize)
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.depth + 1 {
            return None;
        }
        let n = self.base.group().order() as u64;
        if tuple[0] >= self.base.points() || tuple[1..].iter().any(|&h| h as u64 >= n) {
            return None;
        }
        self.index.get(encode(tuple.iter().map(|&v| v as u32), n))
    }
}

fn encode(tuple: impl Iterator<Item = u32>, n: u64) -> u64 {
    let mut code = 0u64;
    let mut first = true;
    for v in tuple {
        code = if first { v as u64 } else { code * n + v as u64 };
        first = false;
    }
    code
}

pub fn inertia(x: &Arc<FiniteGSet>) -> InertiaSet {
    iterated_inertia_capped(x, 1, DEFAULT_POINT_CAP).expect("inertia of a desk-scale G-set fits the cap")
}

pub fn iterated_inertia(x: &Arc<FiniteGSet>, m: usize) -> Result<IteratedInertia> {
    iterated_inertia_capped(x, m, DEFAULT_POINT_CAP)
}

pub fn iterated_inertia_capped(x: &Arc<FiniteGSet>, m: usize, cap: usize) -> Result<IteratedInertia> {
    let g = x.group().clone();
    let n = g.order();
    let w = m + 1;
    let mut tuples: Vec<u32> = Vec::new();
    let mut count = 0usize;
    let mut current = vec![0u32; w];
    // candidates[l] holds the elements allowed at level l + 1
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for p in 0..x.points() {
        current[0] = p as u32;
        candidates[0] = x.stabilizer_elements(p);
        extend_tuples(&g, &mut candidates, 1, m, &mut current, &mut tuples, &mut count, cap)?;
    }
    let code_space = (x.points() as u128) * (n as u128).pow(m as u32);
    let index = if code_space <= 1 << 26 {
        let mut dense = vec![u32::MAX; code_space as usize];
        for i in 0..count {
            dense[encode(tuples[i * w..(i + 1) * w].iter().copied(), n as u64) as usize] = i as u32;
        }
        TupleIndex::Dense(dense)
    } else {
        let mut map = HashMap::with_capacity(count);
        for i in 0..count {
            map.insert(encode(tuples[i * w..(i + 1) * w].iter().copied(), n as u64), i as u32);
        }
        TupleIndex::Sparse(map)
    };
    let mut gen_action = Vec::with_capacity(g.generators().len());
    for &el in g.generators() {
        let conj: Vec<u64> = (0..n).map(|h| g.conj(el, h) as u64).collect();
        let mut img = Vec::with_capacity(count);
        for t in tuples.chunks_exact(w) {
            let mut code = x.act(t[0] as usize, el) as u64;
            for &h in &t[1..] {
                code = code * n as u64 + conj[h as usize];
            }
            let j = index
                .get(code)
                .expect("conjugation-translation preserves the fixed-point equations");
            img.push(j as u32);
        }
        gen_action.push(img);
    }
    let gset = Arc::new(FiniteGSet::from_generator_action(g, count, &gen_action));
    Ok(IteratedInertia {
        base: x.clone(),
        depth: m,
        tuples,
        gset,
        index,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_tuples(
    g: &FiniteGroup,
    candidates: &mut [Vec<usize>],
    level: usize,
    m: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<u32>,
    count: &mut usize,
    cap: usize,
) -> Result<()> {
    if level > m {
        if *count >= cap {
            return Err(Error::Resource {
                what: "iterated inertia points",
                needed: *count as u128 + 1,
                cap: cap as u128,
            });
        }
        out.extend_from_slice(current);
        *count += 1;
        return Ok(());
    }
    // deeper levels only write to candidates[level..]
    for i in 0..candidates[level - 1].len() {
        let h = candidates[level - 1][i];
        current[level] = h as u32;
        if level < m {
            let (done, rest) = candidates.split_at_mut(level);
            rest[0].clear();
            rest[0].extend(done[level - 1].iter().copied().filter(|&c| g.commute(c, h)));
        }
        extend_tuples(g, candidates, level + 1, m, current, out, count, cap)?;
    }
    Ok(())
}

/// Generic inertia of an arbitrary G-set, with points `(y, h)` in
/// lexicographic order; no tuple bookkeeping. This is the construction
/// iterated by hand in the isomorphism check.
pub fn plain_inertia(y: &FiniteGSet) -> (FiniteGSet, Vec<(usize, usize)>) {
    let g = y.group();
    let n = g.order();
    let mut pairs = Vec::new();
    let mut lookup = vec![u32::MAX; y.points() * n];
    for p in 0..y.points() {
        for h in 0..n {
            if y.act(p, h) == p {
                lookup[p * n + h] = pairs.len() as u32;
                pairs.push((p, h));
            }
        }
    }
    let gen_action: Vec<Vec<u32>> = g
        .generators()
        .iter()
        .map(|&el| pairs.iter().map(|&(p, h)| lookup[y.act(p, el) * n + g.conj(el, h)]).collect())
        .collect();
    (FiniteGSet::from_generator_action(g.clone(), pairs.len(), &gen_action), pairs)
}

/// Checks that `inertia(X^(m))` and `X^(m+1)` are isomorphic G-sets under
/// `((x, h⃗), h) ↦ (x, h⃗, h)` and returns that bijection.
pub fn inertia_iterate_isomorphism(x: &Arc<FiniteGSet>, m: usize) -> Result<Vec<usize>> {
    let lower = iterated_inertia(x, m)?;
    let upper = iterated_inertia(x, m + 1)?;
    let (inert, pairs) = plain_inertia(lower.gset());
    relabel_check(&inert, &pairs, &lower, &upper)
}

fn relabel_check(
    inert: &FiniteGSet,
    pairs: &[(usize, usize)],
    lower: &IteratedInertia,
    upper: &IteratedInertia,
) -> Result<Vec<usize>> {
    if inert.points() != upper.len() {
        return Err(Error::inconsistent(format!(
            "inertia of depth {} has {} points, depth {} has {}",
            lower.depth(),
            inert.points(),
            upper.depth(),
            upper.len()
        )));
    }
    let mut map = vec![usize::MAX; inert.points()];
    let mut hit = vec![false; upper.len()];
    let mut buf: Vec<usize> = Vec::with_capacity(upper.depth() + 1);
    for (i, &(p, h)) in pairs.iter().enumerate() {
        buf.clear();
        buf.extend(lower.tuple(p).iter().map(|&v| v as usize));
        buf.push(h);
        let j = upper
            .index_of(&buf)
            .ok_or_else(|| Error::inconsistent(format!("no iterated point for {buf:?}")))?;
        if hit[j] {
            return Err(Error::inconsistent("relabeling is not injective"));
        }
        hit[j] = true;
        map[i] = j;
    }
    // both sides are actions, so generators suffice
    for i in 0..inert.points() {
        for &g in inert.group().generators() {
            if map[inert.act(i, g)] != upper.gset().act(map[i], g) {
                return Err(Error::inconsistent(format!("relabeling not equivariant at point {i}, element {g}")));
            }
        }
    }
    Ok(map)
}

/// `X`, `I(X)`, `I(I(X))`, … built by repeated plain inertia, each point
/// remembering the tuple `(x, h₁, …, h_m)` it came from.
#[derive(Debug, Clone)]
pub struct RepeatedInertia {
    current: FiniteGSet,
    depth: usize,
    labels: Vec<u32>,
}

impl RepeatedInertia {
    pub fn new(x: &FiniteGSet) -> Self {
        RepeatedInertia {
            current: x.clone(),
            depth: 0,
            labels: (0..x.points() as u32).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gset(&self) -> &FiniteGSet {
        &self.current
    }

    pub fn label(&self, i: usize) -> &[u32] {
        let w = self.depth + 1;
        &self.labels[i * w..(i + 1) * w]
    }

    /// Replaces the current G-set by its inertia.
    pub fn step(&mut self) {
        let (next, pairs) = plain_inertia(&self.current);
        let mut labels = Vec::with_capacity(pairs.len() * (self.depth + 2));
        for &(p, h) in &pairs {
            labels.extend_from_slice(self.label(p));
            labels.push(h as u32);
        }
        self.current = next;
        self.labels = labels;
        self.depth += 1;
    }

    /// Checks that the current level is `X^(depth)` with the same action.
    pub fn check_against(&self, direct: &IteratedInertia) -> Result<()> {
        if direct.depth() != self.depth || direct.len() != self.current.points() {
            return Err(Error::inconsistent(format!(
                "repeated inertia has {} points at depth {}, direct construction {} at depth {}",
                self.current.points(),
                self.depth,
                direct.len(),
                direct.depth()
            )));
        }
        let n = direct.base().group().order() as u64;
        let mut map = vec![0usize; self.current.points()];
        let mut seen = vec![false; direct.len()];
        for (i, slot) in map.iter_mut().enumerate() {
            let t = self.label(i);
            let j = direct
                .index
                .get(encode(t.iter().copied(), n))
                .ok_or_else(|| Error::inconsistent(format!("tuple {t:?} missing from direct construction")))?;
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::inconsistent("repeated construction maps two points together"));
            }
            *slot = j;
        }
        for i in 0..self.current.points() {
            for &g in self.current.group().generators() {
                if map[self.current.act(i, g)] != direct.gset().act(map[i], g) {
                    return Err(Error::inconsistent(format!("actions differ at point {i}, element {g}")));
                }
            }
        }
        Ok(())
    }
}

/// Rebuilds `X^(m)` as `m` repeated plain inertia constructions and checks
/// it against the direct commuting-tuple construction.
pub fn repeated_inertia_matches(x: &Arc<FiniteGSet>, m: usize) -> Result<()> {
    let mut r = RepeatedInertia::new(x);
    for _ in 0..m {
        r.step();
    }
    r.check_against(&iterated_inertia(x, m)?)
}

/// A validated equivariant map `f : X → Y` over a homomorphism `ρ : G → K`.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    source: Arc<FiniteGSet>,
    target: Arc<FiniteGSet>,
    point_map: Vec<usize>,
    hom: Vec<usize>,
}

impl EquivariantMap {
    pub fn source(&self) -> &Arc<FiniteGSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGSet> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.point_map[x]
    }

    pub fn hom(&self, g: usize) -> usize {
        self.hom[g]
    }

    /// True when `ρ` is the identity of a common group.
    pub fn is_over_identity(&self) -> bool {
        *self.source.group() == *self.target.group() && self.hom.iter().enumerate().all(|(i, &h)| i == h)
    }
}

pub fn equivariant_map(
    x: &Arc<FiniteGSet>,
    y: &Arc<FiniteGSet>,
    f: &[usize],
    rho: &[usize],
) -> Result<EquivariantMap> {
    let (g, k) = (x.group(), y.group());
    if rho.len() != g.order() {
        return Err(Error::validation(format!(
            "homomorphism needs {} images, got {}",
            g.order(),
            rho.len()
        )));
    }
    if let Some(&bad) = rho.iter().find(|&&r| r >= k.order()) {
        return Err(Error::validation(format!("{bad} is not an element of the target group")));
    }
    if f.len() != x.points() {
        return Err(Error::validation(format!("point map needs {} images, got {}", x.points(), f.len())));
    }
    if let Some(&bad) = f.iter().find(|&&p| p >= y.points()) {
        return Err(Error::validation(format!("{bad} is not a point of the target")));
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if rho[g.mul(a, b)] != k.mul(rho[a], rho[b]) {
                return Err(Error::validation(format!("not a homomorphism: witness ({a}, {b})")));
            }
        }
    }
    for el in 0..g.order() {
        for p in 0..x.points() {
            if f[x.act(p, el)] != y.act(f[p], rho[el]) {
                return Err(Error::validation(format!("not equivariant: witness (g={el}, x={p})")));
            }
        }
    }
    Ok(EquivariantMap {
        source: x.clone(),
        target: y.clone(),
        point_map: f.to_vec(),
        hom: rho.to_vec(),
    })
}
