//! Finite groups given by Cayley tables, with conjugacy classes,
//! centralizers, subgroups and commuting-tuple counts.
//!
//! Elements are the indices `0..n`, the identity is always `0`. Groups built
//! from permutations keep the permutation of each element; composition is
//! `(g·h)(i) = g(h(i))`, so the natural action on points is a left action.

pub mod presets;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 10080;
pub const DEFAULT_TUPLE_CAP: u128 = 100_000_000;

static TUPLE_CAP: AtomicU64 = AtomicU64::new(DEFAULT_TUPLE_CAP as u64);

/// Largest number of raw tuples a brute-force enumeration may visit.
pub fn tuple_cap() -> u128 {
    TUPLE_CAP.load(Ordering::Relaxed) as u128
}

pub fn set_tuple_cap(cap: u64) {
    TUPLE_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    perms: Option<Vec<Vec<u32>>>,
    generators: Vec<usize>,
    classes: OnceLock<Arc<ConjClassTable>>,
    words: OnceLock<Vec<(u32, u32, u32)>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            perms: self.perms.clone(),
            generators: self.generators.clone(),
            classes: OnceLock::new(),
            words: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

fn validate_permutation(p: &[u32], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::validation(format!(
            "permutation {:?} has length {}, expected {}",
            p,
            p.len(),
            degree
        )));
    }
    let mut seen = vec![false; degree];
    for &i in p {
        let i = i as usize;
        if i >= degree || seen[i] {
            return Err(Error::validation(format!("{p:?} is not a bijection of 0..{degree}")));
        }
        seen[i] = true;
    }
    Ok(())
}

fn compose(g: &[u32], h: &[u32]) -> Vec<u32> {
    h.iter().map(|&i| g[i as usize]).collect()
}

impl FiniteGroup {
    /// Closure of the given permutations under composition, with the default
    /// order cap.
    pub fn from_permutations(generators: &[Vec<u32>]) -> Result<Self> {
        Self::from_permutations_capped(generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(generators: &[Vec<u32>], cap: usize) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for g in generators {
            validate_permutation(g, degree)?;
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut perms = vec![identity.clone()];
        index.insert(identity, 0);
        // right multiplication by generators, filled in BFS order
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for (si, s) in generators.iter().enumerate() {
                let p = compose(&perms[x], s);
                let idx = match index.get(&p) {
                    Some(&i) => i,
                    None => {
                        let i = perms.len() as u32;
                        if perms.len() >= cap {
                            return Err(Error::Resource {
                                what: "group order",
                                needed: perms.len() as u128 + 1,
                                cap: cap as u128,
                            });
                        }
                        index.insert(p.clone(), i);
                        perms.push(p);
                        parent.push((x as u32, si as u32));
                        queue.push_back(i as usize);
                        i
                    }
                };
                row.push(idx);
            }
            right.push(row);
        }
        let n = perms.len();
        // a·b = (a·parent(b))·s along the BFS tree of b
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            mul[a * n] = a as u32;
            for b in 1..n {
                let (pb, s) = parent[b];
                let left = mul[a * n + pb as usize] as usize;
                mul[a * n + b] = right[left][s as usize];
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| mul[a * n + b] == 0).expect("finite group has inverses");
            inv[a] = b as u32;
        }
        let gen_idx: Vec<usize> = generators
            .iter()
            .map(|g| index[g.as_slice()] as usize)
            .collect();
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            perms: Some(perms),
            generators: gen_idx,
            classes: OnceLock::new(),
            words: OnceLock::new(),
        })
    }

    /// Validates a Cayley table. Element `0` must be the identity.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::validation("empty Cayley table"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::validation(format!("row {i} contains out-of-range index {bad}")));
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::validation(format!(
                    "element 0 is not an identity: fails at element {x}"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::validation(format!(
                            "associativity fails for triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a][b] == 0)
                .ok_or_else(|| Error::validation(format!("element {a} has no inverse")))?;
            if table[b][a] != 0 {
                return Err(Error::validation(format!("element {a} has no two-sided inverse")));
            }
            inv[a] = b as u32;
        }
        let mul = table.iter().flatten().map(|&v| v as u32).collect();
        let mut g = FiniteGroup {
            order: n,
            mul,
            inv,
            perms: None,
            generators: vec![],
            classes: OnceLock::new(),
            words: OnceLock::new(),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    pub(crate) fn from_raw_table(mul: Vec<u32>, order: usize) -> Self {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            inv[a] = (0..order).find(|&b| mul[a * order + b] == 0).expect("inverse") as u32;
        }
        let mut g = FiniteGroup {
            order,
            mul,
            inv,
            perms: None,
            generators: vec![],
            classes: OnceLock::new(),
            words: OnceLock::new(),
        };
        g.generators = g.greedy_generators();
        g
    }

    pub fn trivial() -> Self {
        Self::from_raw_table(vec![0], 1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `g·h·g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn permutation(&self, a: usize) -> Option<&[u32]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p[0].len())
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| num_integer::lcm(acc, self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    /// A generating set chosen greedily by increasing index.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut members = vec![0usize];
        for a in 1..self.order {
            if span[a] {
                continue;
            }
            gens.push(a);
            // close members under right multiplication by all gens
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !span[y] {
                        span[y] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Every non-identity element `e` as `(e, i, p)` with
    /// `e = generators[i]·p` and `p` listed earlier (or the identity).
    pub(crate) fn word_steps(&self) -> &[(u32, u32, u32)] {
        self.words.get_or_init(|| {
            let mut seen = vec![false; self.order];
            seen[0] = true;
            let mut steps = Vec::with_capacity(self.order.saturating_sub(1));
            let mut queue = VecDeque::from([0usize]);
            while let Some(p) = queue.pop_front() {
                for (i, &s) in self.generators.iter().enumerate() {
                    let e = self.mul(s, p);
                    if !seen[e] {
                        seen[e] = true;
                        steps.push((e as u32, i as u32, p as u32));
                        queue.push_back(e);
                    }
                }
            }
            assert_eq!(steps.len() + 1, self.order, "generators must generate the group");
            steps
        })
    }

    pub fn classes(&self) -> &ConjClassTable {
        self.classes
            .get_or_init(|| Arc::new(ConjClassTable::compute(self)))
            .as_ref()
    }

    /// Conjugacy class index of an element.
    pub fn class_of(&self, a: usize) -> usize {
        self.classes().class_index[a]
    }

    pub fn centralizer_elements(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| elems.iter().all(|&h| self.commute(g, h)))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.order).collect();
        self.centralizer_elements(&all)
    }

    /// Direct product; element `(i, j)` has index `i·|b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let (x1, x2) = (x / nb, x % nb);
            for y in 0..n {
                let (y1, y2) = (y / nb, y % nb);
                mul[x * n + y] = (a.mul(x1, y1) * nb + b.mul(x2, y2)) as u32;
            }
        }
        FiniteGroup::from_raw_table(mul, n)
    }
}

/// Conjugacy classes with minimal-index representatives, ordered by
/// representative; class 0 is the identity class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassTable {
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub centralizer_orders: Vec<usize>,
    class_index: Vec<usize>,
}

impl ConjClassTable {
    fn compute(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut class_index = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_index[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members: Vec<usize> = Vec::new();
            for x in 0..n {
                let c = g.conj(x, a);
                if class_index[c] == usize::MAX {
                    class_index[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let representatives = classes.iter().map(|c| c[0]).collect();
        let class_sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let centralizer_orders = class_sizes.iter().map(|s| n / s).collect();
        ConjClassTable {
            classes,
            representatives,
            class_sizes,
            centralizer_orders,
            class_index,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_index[a]
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> &ConjClassTable {
    g.classes()
}

/// A subgroup stored as its sorted element set, together with the subgroup
/// as a group in its own right (local index `i` ↔ parent element
/// `elements[i]`).
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    local: Arc<FiniteGroup>,
    local_index: Vec<u32>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent_order", &self.parent.order())
            .field("elements", &self.elements)
            .finish()
    }
}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let n = parent.order();
        if elements.first() != Some(&0) {
            return Err(Error::validation("subgroup must contain the identity"));
        }
        if let Some(&bad) = elements.iter().find(|&&e| e >= n) {
            return Err(Error::validation(format!("element {bad} is not in the group")));
        }
        let mut local_index = vec![u32::MAX; n];
        for (i, &e) in elements.iter().enumerate() {
            local_index[e] = i as u32;
        }
        let k = elements.len();
        let mut mul = vec![0u32; k * k];
        for (i, &a) in elements.iter().enumerate() {
            if local_index[parent.inv(a)] == u32::MAX {
                return Err(Error::validation(format!("not closed under inverse at {a}")));
            }
            for (j, &b) in elements.iter().enumerate() {
                let ab = local_index[parent.mul(a, b)];
                if ab == u32::MAX {
                    return Err(Error::validation(format!("not closed under product ({a}, {b})")));
                }
                mul[i * k + j] = ab;
            }
        }
        let local = Arc::new(FiniteGroup::from_raw_table(mul, k));
        Ok(Subgroup {
            parent,
            elements,
            local,
            local_index,
        })
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let all = (0..parent.order()).collect();
        Self::new(parent, all).expect("whole group is a subgroup")
    }

    pub fn generated_by(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        let n = parent.order();
        if let Some(&bad) = gens.iter().find(|&&g| g >= n) {
            return Err(Error::validation(format!("element {bad} is not in the group")));
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = parent.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        Self::new(parent, members)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.local_index[g] != u32::MAX
    }

    /// The subgroup as a standalone group.
    pub fn as_group(&self) -> &Arc<FiniteGroup> {
        &self.local
    }

    /// Local index of a parent element lying in the subgroup.
    pub fn to_local(&self, g: usize) -> Option<usize> {
        let i = self.local_index[g];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn to_parent(&self, local: usize) -> usize {
        self.elements[local]
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.order())
            .all(|g| self.elements.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    /// `g·H·g⁻¹`
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let elems = self.elements.iter().map(|&h| self.parent.conj(g, h)).collect();
        Subgroup::new(self.parent.clone(), elems).expect("conjugate of a subgroup is a subgroup")
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}

pub fn centralizer(g: &Arc<FiniteGroup>, elems: &[usize]) -> Result<Subgroup> {
    if elems.is_empty() {
        return Err(Error::validation("centralizer needs at least one element"));
    }
    if let Some(&bad) = elems.iter().find(|&&e| e >= g.order()) {
        return Err(Error::validation(format!("element {bad} is not in the group")));
    }
    Subgroup::new(g.clone(), g.centralizer_elements(elems))
}

/// Every subgroup of `g`, sorted by (order, elements). Built by joining
/// cyclic subgroups until the family is closed.
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let n = g.order();
    let mut found: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut cyclic: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        let s = Subgroup::generated_by(g.clone(), &[a]).expect("valid element");
        if found.insert(s.elements.clone(), ()).is_none() {
            cyclic.push(s.elements.clone());
        }
    }
    let mut frontier: Vec<Vec<usize>> = found.keys().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for sub in &frontier {
            for cyc in &cyclic {
                if cyc.iter().all(|x| sub.binary_search(x).is_ok()) {
                    continue;
                }
                let gens: Vec<usize> = sub.iter().chain(cyc.iter()).copied().collect();
                let joined = Subgroup::generated_by(g.clone(), &gens).expect("valid elements");
                if found.insert(joined.elements.clone(), ()).is_none() {
                    next.push(joined.elements.clone());
                }
            }
        }
        frontier = next;
    }
    let mut subs: Vec<Vec<usize>> = found.into_keys().collect();
    subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subs.into_iter()
        .map(|e| Subgroup::new(g.clone(), e).expect("closed set"))
        .collect()
}

/// One subgroup from each conjugacy class of subgroups (the first in
/// [`all_subgroups`] order).
pub fn subgroup_class_representatives(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let subs = all_subgroups(g);
    let mut taken: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut reps = Vec::new();
    for s in subs {
        if taken.contains_key(&s.elements) {
            continue;
        }
        for x in 0..g.order() {
            taken.insert(s.conjugate(x).elements, ());
        }
        reps.push(s);
    }
    reps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TupleAlgorithm {
    Brute,
    CentralizerRecursive,
}

/// Number of pairwise commuting `m`-tuples of elements of `g`.
pub fn count_commuting_tuples(g: &FiniteGroup, m: usize, algorithm: TupleAlgorithm) -> Result<u128> {
    count_commuting_tuples_capped(g, m, algorithm, tuple_cap())
}

pub fn count_commuting_tuples_capped(
    g: &FiniteGroup,
    m: usize,
    algorithm: TupleAlgorithm,
    cap: u128,
) -> Result<u128> {
    match algorithm {
        TupleAlgorithm::Brute => {
            let n = g.order() as u128;
            let total = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(n));
            match total {
                Some(t) if t <= cap => {}
                other => {
                    return Err(Error::Resource {
                        what: "commuting-tuple enumeration",
                        needed: other.unwrap_or(u128::MAX),
                        cap,
                    })
                }
            }
            Ok(brute_tuples(g, m))
        }
        TupleAlgorithm::CentralizerRecursive => recursive_tuples(g, m),
    }
}

fn brute_tuples(g: &FiniteGroup, m: usize) -> u128 {
    let n = g.order();
    if m == 0 {
        return 1;
    }
    let mut tuple = vec![0usize; m];
    let mut count = 0u128;
    loop {
        let ok = (0..m).all(|i| (i + 1..m).all(|j| g.commute(tuple[i], tuple[j])));
        if ok {
            count += 1;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == m {
                return count;
            }
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// `N_m(G) = Σ_{[g]} |[g]| · N_{m-1}(Z(g))`
fn recursive_tuples(g: &FiniteGroup, m: usize) -> Result<u128> {
    if m == 0 {
        return Ok(1);
    }
    if m == 1 {
        return Ok(g.order() as u128);
    }
    if g.is_abelian() {
        return (0..m)
            .try_fold(1u128, |acc, _| acc.checked_mul(g.order() as u128))
            .ok_or(Error::Resource {
                what: "commuting-tuple count",
                needed: u128::MAX,
                cap: u128::MAX,
            });
    }
    let classes = g.classes();
    let mut total = 0u128;
    for (rep, size) in classes.representatives.iter().zip(&classes.class_sizes) {
        let cent = g.centralizer_elements(&[*rep]);
        let sub = centralizer_group(g, &cent);
        let inner = recursive_tuples(&sub, m - 1)?;
        total = inner
            .checked_mul(*size as u128)
            .and_then(|v| v.checked_add(total))
            .ok_or(Error::Resource {
                what: "commuting-tuple count",
                needed: u128::MAX,
                cap: u128::MAX,
            })?;
    }
    Ok(total)
}

fn centralizer_group(g: &FiniteGroup, elems: &[usize]) -> FiniteGroup {
    let mut local = vec![u32::MAX; g.order()];
    for (i, &e) in elems.iter().enumerate() {
        local[e] = i as u32;
    }
    let k = elems.len();
    let mut mul = vec![0u32; k * k];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            mul[i * k + j] = local[g.mul(a, b)];
        }
    }
    FiniteGroup::from_raw_table(mul, k)
}
