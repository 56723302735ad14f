//! Class functions and explicit representations over cyclotomic fields,
//! the dévissage map from equivariant bundles on `[X/G]` to functions on
//! the inertia set, and the two ways of pushing a bundle forward.
//!
//! A K₀ class of `[X/G]` is stored as one virtual character per orbit, on
//! the stabilizer of the orbit representative. Its dévissage image is the
//! function `(x, h) ↦ χ_{V_x}(h)` on inertia points, constant on inertia
//! orbits.

use std::sync::Arc;

use crate::cyclonum::{rint, CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::groupoidstack::{inertia, orbits, EquivariantMap, FiniteGSet, InertiaSet, OrbitDecomposition};
use crate::grouptheory::{FiniteGroup, Subgroup};
use crate::linalg::CycloMatrix;

/// A function on a group, constant on conjugacy classes, stored as one
/// value per class in the order of [`FiniteGroup::classes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    group: Arc<FiniteGroup>,
    values: Vec<CyclotomicNumber>,
    genuine: bool,
}

impl ClassFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<CyclotomicNumber>) -> Result<Self> {
        let k = group.classes().len();
        if values.len() != k {
            return Err(Error::validation(format!(
                "class function needs {k} values (one per class), got {}",
                values.len()
            )));
        }
        Ok(ClassFunction {
            group,
            values,
            genuine: false,
        })
    }

    /// Samples `f` at class representatives.
    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize) -> CyclotomicNumber) -> Self {
        let values = group.classes().representatives.iter().map(|&r| f(r)).collect();
        ClassFunction {
            group,
            values,
            genuine: false,
        }
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let k = group.classes().len();
        ClassFunction {
            group,
            values: vec![CyclotomicNumber::one(); k],
            genuine: true,
        }
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order() as i64;
        let mut f = Self::from_fn(group, |g| CyclotomicNumber::from_int(if g == 0 { n } else { 0 }));
        f.genuine = true;
        f
    }

    /// Indicator of the conjugacy class `class`.
    pub fn delta(group: Arc<FiniteGroup>, class: usize) -> Result<Self> {
        let k = group.classes().len();
        if class >= k {
            return Err(Error::validation(format!("class {class} out of range ({k} classes)")));
        }
        let values = (0..k)
            .map(|c| CyclotomicNumber::from_int((c == class) as i64))
            .collect();
        Self::new(group, values)
    }

    /// The number of fixed points of each element on a G-set.
    pub fn permutation_character(x: &FiniteGSet) -> Self {
        let mut f = Self::from_fn(x.group().clone(), |g| {
            CyclotomicNumber::from_int(x.fixed_points(g).len() as i64)
        });
        f.genuine = true;
        f
    }

    /// `c^a ↦ ζ_r^{a·k}` on a cyclic group generated by `generator`.
    pub fn cyclic_linear(group: Arc<FiniteGroup>, generator: usize, k: i64) -> Result<Self> {
        let r = group.element_order(generator);
        if r != group.order() {
            return Err(Error::validation(format!(
                "element {generator} of order {r} does not generate a group of order {}",
                group.order()
            )));
        }
        let mut exponent = vec![0i64; r];
        let mut x = 0;
        for a in 0..r {
            exponent[x] = a as i64;
            x = group.mul(x, generator);
        }
        let mut f = Self::from_fn(group, |g| {
            CyclotomicNumber::root_of_unity(r as u32, exponent[g] * k).expect("r > 0")
        });
        f.genuine = true;
        Ok(f)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CyclotomicNumber] {
        &self.values
    }

    pub fn is_genuine(&self) -> bool {
        self.genuine
    }

    /// Marks the function as the character of an actual representation.
    /// Callers vouch for this; [`invariants_dim`] then insists on a
    /// non-negative integer.
    pub fn assume_genuine(mut self) -> Self {
        self.genuine = true;
        self
    }

    pub fn value_at(&self, g: usize) -> &CyclotomicNumber {
        &self.values[self.group.class_of(g)]
    }

    /// Whether every restriction to a cyclic subgroup `⟨a⟩` has integer
    /// multiplicities `(1/r) Σ_j χ(a^j) ζ_r^{-jk}`. Virtual characters
    /// always pass.
    pub fn integral_on_cyclic_subgroups(&self) -> Result<bool> {
        for a in 0..self.group.order() {
            let r = self.group.element_order(a);
            let inv_r = Rational::new(1.into(), (r as i64).into());
            for k in 0..r as i64 {
                let mut total = CyclotomicNumber::zero();
                let mut x = 0;
                for j in 0..r as i64 {
                    let z = CyclotomicNumber::root_of_unity(r as u32, -j * k)?;
                    total = total.checked_add(&self.value_at(x).checked_mul(&z)?)?;
                    x = self.group.mul(x, a);
                }
                if total.scale(&inv_r).as_integer().is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn degree(&self) -> &CyclotomicNumber {
        &self.values[0]
    }

    fn same_group(&self, other: &ClassFunction) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::validation("class functions live on different groups"))
        }
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            genuine: self.genuine && other.genuine,
        })
    }

    /// Pointwise product: the character of a tensor product.
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            genuine: self.genuine && other.genuine,
        })
    }

    /// Integer multiple; stays genuine for non-negative factors.
    pub fn scale_int(&self, k: i64) -> ClassFunction {
        let c = CyclotomicNumber::from_int(k);
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * &c).collect(),
            genuine: self.genuine && k >= 0,
        }
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            genuine: false,
        }
    }

    /// The dual character `g ↦ χ(g⁻¹)`.
    pub fn dual(&self) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(CyclotomicNumber::conj).collect(),
            genuine: self.genuine,
        }
    }

    /// `(1/|G|) Σ_g χ(g)·conj(ψ(g))`
    pub fn inner(&self, other: &ClassFunction) -> Result<CyclotomicNumber> {
        self.same_group(other)?;
        let classes = self.group.classes();
        let mut total = CyclotomicNumber::zero();
        for (c, size) in classes.class_sizes.iter().enumerate() {
            let term = self.values[c].checked_mul(&other.values[c].conj())?;
            total = total.checked_add(&term.scale(&rint(*size as i64)))?;
        }
        Ok(total.scale(&Rational::new(1.into(), (self.group.order() as i64).into())))
    }
}

/// Dimension of the invariants, `(1/|G|) Σ_g χ(g)`.
pub fn invariants_dim(chi: &ClassFunction) -> Result<CyclotomicNumber> {
    let g = chi.group();
    let classes = g.classes();
    let mut total = CyclotomicNumber::zero();
    for (v, size) in chi.values.iter().zip(&classes.class_sizes) {
        total = total.checked_add(&v.scale(&rint(*size as i64)))?;
    }
    let dim = total.scale(&Rational::new(1.into(), (g.order() as i64).into()));
    if chi.genuine {
        match dim.as_integer() {
            Some(n) if n >= 0.into() => {}
            _ => {
                return Err(Error::inconsistent(format!(
                    "genuine character has non-integral invariants dimension {dim}"
                )))
            }
        }
    }
    Ok(dim)
}

/// Induction from a subgroup: `χ↑(g) = (1/|H|) Σ_{x : x⁻¹gx ∈ H} χ(x⁻¹gx)`,
/// times `[G:H]` when `scaled`.
pub fn induce(h: &Subgroup, chi: &ClassFunction, scaled: bool) -> Result<ClassFunction> {
    if **h.as_group() != **chi.group() {
        return Err(Error::validation("character is not defined on the given subgroup"));
    }
    let g = h.parent().clone();
    let inv_order = Rational::new(1.into(), (h.order() as i64).into());
    let mut values = Vec::with_capacity(g.classes().len());
    for &rep in &g.classes().representatives {
        let mut total = CyclotomicNumber::zero();
        for x in 0..g.order() {
            let c = g.conj(g.inv(x), rep);
            if let Some(local) = h.to_local(c) {
                total = total.checked_add(chi.value_at(local))?;
            }
        }
        let mut v = total.scale(&inv_order);
        if scaled {
            v = v.scale(&rint(h.index() as i64));
        }
        values.push(v);
    }
    Ok(ClassFunction {
        group: g,
        values,
        genuine: chi.genuine,
    })
}

/// Restriction to a subgroup, along the class fusion map.
pub fn restrict(h: &Subgroup, chi: &ClassFunction) -> Result<ClassFunction> {
    if **h.parent() != **chi.group() {
        return Err(Error::validation("character is not defined on the subgroup's parent"));
    }
    let local = h.as_group().clone();
    let values = local
        .classes()
        .representatives
        .iter()
        .map(|&l| chi.value_at(h.to_parent(l)).clone())
        .collect();
    Ok(ClassFunction {
        group: local,
        values,
        genuine: chi.genuine,
    })
}

/// A representation given by one matrix per group element.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<CycloMatrix>,
}

impl MatrixRep {
    /// One matrix per element; checks `ρ(g)ρ(h) = ρ(gh)` for all pairs.
    pub fn from_all(group: Arc<FiniteGroup>, matrices: Vec<CycloMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::validation("one matrix per group element is required"));
        }
        let dim = matrices[0].rows();
        if matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::validation(format!("all matrices must be {dim}x{dim}")));
        }
        if matrices[0] != CycloMatrix::identity(dim) {
            return Err(Error::validation("identity element must act as the identity matrix"));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if matrices[a].checked_mul(&matrices[b])? != matrices[group.mul(a, b)] {
                    return Err(Error::validation(format!("not a homomorphism: witness ({a}, {b})")));
                }
            }
        }
        Ok(MatrixRep { group, dim, matrices })
    }

    /// Extends images of generators to the whole group along a BFS over
    /// words, then checks `ρ(g)ρ(s) = ρ(gs)` for every element and
    /// generator, which forces the homomorphism law.
    pub fn from_generator_images(group: Arc<FiniteGroup>, gens: &[usize], images: Vec<CycloMatrix>) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::validation("one matrix per generator is required"));
        }
        let dim = images.first().map_or(0, CycloMatrix::rows);
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::validation(format!("all matrices must be {dim}x{dim}")));
        }
        let n = group.order();
        let mut mats: Vec<Option<CycloMatrix>> = vec![None; n];
        mats[0] = Some(CycloMatrix::identity(dim));
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let gs = group.mul(g, s);
                if mats[gs].is_none() {
                    mats[gs] = Some(mats[g].as_ref().unwrap().checked_mul(&images[i])?);
                    queue.push_back(gs);
                }
            }
        }
        if mats.iter().any(Option::is_none) {
            return Err(Error::validation("generators do not generate the group"));
        }
        let matrices: Vec<CycloMatrix> = mats.into_iter().map(Option::unwrap).collect();
        for g in 0..n {
            for (i, &s) in gens.iter().enumerate() {
                if matrices[g].checked_mul(&images[i])? != matrices[group.mul(g, s)] {
                    return Err(Error::validation(format!(
                        "generator images violate a relation at element {g}, generator {s}"
                    )));
                }
            }
        }
        Ok(MatrixRep { group, dim, matrices })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let matrices = vec![CycloMatrix::identity(1); group.order()];
        MatrixRep { group, dim: 1, matrices }
    }

    /// Permutation matrices of a G-set: `e_x ↦ e_{g·x}`.
    pub fn permutation(x: &FiniteGSet) -> Self {
        let s = x.points();
        let matrices = (0..x.group().order())
            .map(|g| {
                let mut m = CycloMatrix::zeros(s, s);
                for p in 0..s {
                    m[(x.act(p, g), p)] = CyclotomicNumber::one();
                }
                m
            })
            .collect();
        MatrixRep {
            group: x.group().clone(),
            dim: s,
            matrices,
        }
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|g| group.mul(g, x)).collect()).collect();
        let x = FiniteGSet::new(group, &table).expect("left multiplication is an action");
        Self::permutation(&x)
    }

    /// Sign of the underlying permutations of a permutation group.
    pub fn sign(group: Arc<FiniteGroup>) -> Result<Self> {
        if group.degree().is_none() {
            return Err(Error::validation("sign representation needs a permutation group"));
        }
        let matrices = (0..group.order())
            .map(|g| {
                let p = group.permutation(g).unwrap();
                let s = permutation_sign(p);
                CycloMatrix::from_ints(&[vec![s]]).unwrap()
            })
            .collect();
        Ok(MatrixRep { group, dim: 1, matrices })
    }

    pub fn tensor(&self, other: &MatrixRep) -> Result<MatrixRep> {
        if *self.group != *other.group {
            return Err(Error::validation("tensor product of representations of different groups"));
        }
        Ok(MatrixRep {
            group: self.group.clone(),
            dim: self.dim * other.dim,
            matrices: self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.kron(b)).collect(),
        })
    }

    pub fn direct_sum(&self, other: &MatrixRep) -> Result<MatrixRep> {
        if *self.group != *other.group {
            return Err(Error::validation("direct sum of representations of different groups"));
        }
        Ok(MatrixRep {
            group: self.group.clone(),
            dim: self.dim + other.dim,
            matrices: self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.direct_sum(b)).collect(),
        })
    }

    pub fn restrict(&self, h: &Subgroup) -> Result<MatrixRep> {
        if **h.parent() != *self.group {
            return Err(Error::validation("subgroup of a different group"));
        }
        Ok(MatrixRep {
            group: h.as_group().clone(),
            dim: self.dim,
            matrices: h.elements().iter().map(|&e| self.matrices[e].clone()).collect(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CycloMatrix {
        &self.matrices[g]
    }
}

fn permutation_sign(p: &[u32]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn character_of(rep: &MatrixRep) -> ClassFunction {
    let mut f = ClassFunction::from_fn(rep.group.clone(), |g| rep.matrices[g].trace());
    f.genuine = true;
    f
}

/// `dim V^{(ζ)}` for the action of `h` (of order `r`): the rank of the
/// projector `(1/r) Σ_a ζ^{-a} ρ(h)^a`.
pub fn eigencomponent_dim(rep: &MatrixRep, h: usize, zeta: &CyclotomicNumber) -> Result<usize> {
    let r = rep.group.element_order(h);
    if !zeta.pow(r as u64).is_one() {
        return Err(Error::domain(format!("{zeta} is not an {r}-th root of unity")));
    }
    let zeta_inv = zeta.checked_inv()?;
    let mut proj = CycloMatrix::zeros(rep.dim, rep.dim);
    let mut power = CycloMatrix::identity(rep.dim);
    let mut coeff = CyclotomicNumber::one();
    for _ in 0..r {
        proj = proj.add(&power.scale(&coeff))?;
        power = power.checked_mul(&rep.matrices[h])?;
        coeff = coeff.checked_mul(&zeta_inv)?;
    }
    proj.scale(&CyclotomicNumber::from_rational(Rational::new(1.into(), (r as i64).into())))
        .rank()
}

/// All eigenvalues of `ρ(h)` with their multiplicities, indexed by
/// `ζ_r^k` for `k = 0..r`.
pub fn eigen_decomposition(rep: &MatrixRep, h: usize) -> Result<Vec<(CyclotomicNumber, usize)>> {
    let r = rep.group.element_order(h) as u32;
    (0..r as i64)
        .map(|k| {
            let z = CyclotomicNumber::root_of_unity(r, k)?;
            let d = eigencomponent_dim(rep, h, &z)?;
            Ok((z, d))
        })
        .collect()
}

/// A virtual equivariant bundle on `[X/G]`: one class function per orbit,
/// on the stabilizer of that orbit's representative.
#[derive(Debug, Clone)]
pub struct VirtualEqBundle {
    base: Arc<FiniteGSet>,
    orbits: Arc<OrbitDecomposition>,
    stabilizers: Arc<Vec<Subgroup>>,
    chars: Vec<ClassFunction>,
}

impl VirtualEqBundle {
    pub fn new(base: Arc<FiniteGSet>, chars: Vec<ClassFunction>) -> Result<Self> {
        let (orbits, stabilizers) = Self::stabilizer_data(&base);
        Self::with_data(base, orbits, stabilizers, chars)
    }

    fn stabilizer_data(base: &Arc<FiniteGSet>) -> (Arc<OrbitDecomposition>, Arc<Vec<Subgroup>>) {
        let orbits = orbits(base);
        let stabilizers = orbits.representatives.iter().map(|&r| base.stabilizer(r)).collect();
        (Arc::new(orbits), Arc::new(stabilizers))
    }

    fn with_data(
        base: Arc<FiniteGSet>,
        orbits: Arc<OrbitDecomposition>,
        stabilizers: Arc<Vec<Subgroup>>,
        chars: Vec<ClassFunction>,
    ) -> Result<Self> {
        if chars.len() != orbits.len() {
            return Err(Error::validation(format!(
                "bundle needs one character per orbit ({}), got {}",
                orbits.len(),
                chars.len()
            )));
        }
        for (i, (c, s)) in chars.iter().zip(stabilizers.iter()).enumerate() {
            if **c.group() != **s.as_group() {
                return Err(Error::validation(format!(
                    "character for orbit {i} is not on the stabilizer of point {}",
                    orbits.representatives[i]
                )));
            }
        }
        Ok(VirtualEqBundle {
            base,
            orbits,
            stabilizers,
            chars,
        })
    }

    /// Builds each orbit's character from per-class values on its
    /// stabilizer.
    pub fn from_values(base: Arc<FiniteGSet>, values: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let (orbits, stabilizers) = Self::stabilizer_data(&base);
        let chars = values
            .into_iter()
            .zip(stabilizers.iter())
            .map(|(v, s)| ClassFunction::new(s.as_group().clone(), v))
            .collect::<Result<Vec<_>>>()?;
        Self::with_data(base, orbits, stabilizers, chars)
    }

    /// Trivial character on every orbit.
    pub fn structure_sheaf(base: Arc<FiniteGSet>) -> Self {
        let (orbits, stabilizers) = Self::stabilizer_data(&base);
        let chars = stabilizers.iter().map(|s| ClassFunction::trivial(s.as_group().clone())).collect();
        Self::with_data(base, orbits, stabilizers, chars).expect("trivial characters fit")
    }

    /// The bundle whose fibre at each orbit is the given representation of
    /// the whole group restricted to the stabilizer.
    pub fn from_group_rep(base: Arc<FiniteGSet>, rep: &MatrixRep) -> Result<Self> {
        let chi = character_of(rep);
        let (orbits, stabilizers) = Self::stabilizer_data(&base);
        let chars = stabilizers
            .iter()
            .map(|s| restrict(s, &chi))
            .collect::<Result<Vec<_>>>()?;
        Self::with_data(base, orbits, stabilizers, chars)
    }

    /// Same base and stabilizers, new characters.
    pub fn with_chars(&self, chars: Vec<ClassFunction>) -> Result<Self> {
        Self::with_data(self.base.clone(), self.orbits.clone(), self.stabilizers.clone(), chars)
    }

    pub fn base(&self) -> &Arc<FiniteGSet> {
        &self.base
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        &self.orbits
    }

    pub fn stabilizers(&self) -> &[Subgroup] {
        &self.stabilizers
    }

    pub fn chars(&self) -> &[ClassFunction] {
        &self.chars
    }

    pub fn is_genuine(&self) -> bool {
        self.chars.iter().all(ClassFunction::is_genuine)
    }

    pub fn tensor(&self, other: &VirtualEqBundle) -> Result<VirtualEqBundle> {
        let chars = self
            .chars
            .iter()
            .zip(&other.chars)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        self.with_chars(chars)
    }

    pub fn add(&self, other: &VirtualEqBundle) -> Result<VirtualEqBundle> {
        let chars = self
            .chars
            .iter()
            .zip(&other.chars)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        self.with_chars(chars)
    }

    /// Character value of the fibre at `x` on `h ∈ Stab(x)`, transported to
    /// the orbit representative: `χ_o(t⁻¹·h·t)` with `t·rep = x`.
    pub fn fibre_value(&self, x: usize, h: usize) -> Result<&CyclotomicNumber> {
        let g = self.base.group();
        if self.base.act(x, h) != x {
            return Err(Error::domain(format!("element {h} does not fix point {x}")));
        }
        let o = self.orbits.orbit_of(x);
        let t = self.orbits.transporter(x);
        let back = g.conj(g.inv(t), h);
        let local = self.stabilizers[o]
            .to_local(back)
            .ok_or_else(|| Error::inconsistent("transported element left the stabilizer"))?;
        Ok(self.chars[o].value_at(local))
    }
}

/// A function on inertia orbits.
#[derive(Debug, Clone)]
pub struct InertiaFunction {
    inertia: Arc<InertiaSet>,
    orbits: Arc<OrbitDecomposition>,
    values: Vec<CyclotomicNumber>,
}

impl InertiaFunction {
    pub fn inertia(&self) -> &Arc<InertiaSet> {
        &self.inertia
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        &self.orbits
    }

    pub fn values(&self) -> &[CyclotomicNumber] {
        &self.values
    }

    /// Value at an inertia point index.
    pub fn at_point(&self, i: usize) -> &CyclotomicNumber {
        &self.values[self.orbits.orbit_of(i)]
    }

    /// Value at `(x, h)`.
    pub fn at(&self, x: usize, h: usize) -> Option<&CyclotomicNumber> {
        self.inertia.index_of(&[x, h]).map(|i| self.at_point(i))
    }

    /// `(1/|G|) Σ_{(x,h)} f(x, h)` over all inertia points.
    pub fn integrate(&self) -> Result<CyclotomicNumber> {
        let mut total = CyclotomicNumber::zero();
        for i in 0..self.inertia.len() {
            total = total.checked_add(self.at_point(i))?;
        }
        let n = self.inertia.base().group().order() as i64;
        Ok(total.scale(&Rational::new(1.into(), n.into())))
    }

    pub fn mul(&self, other: &InertiaFunction) -> Result<InertiaFunction> {
        if self.values.len() != other.values.len() {
            return Err(Error::validation("inertia functions on different bases"));
        }
        Ok(InertiaFunction {
            inertia: self.inertia.clone(),
            orbits: self.orbits.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.checked_mul(b))
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

struct InertiaData {
    inertia: Arc<InertiaSet>,
    orbits: Arc<OrbitDecomposition>,
}

fn inertia_data(base: &Arc<FiniteGSet>) -> InertiaData {
    let inertia = Arc::new(inertia(base));
    let orbits = Arc::new(orbits(inertia.gset()));
    InertiaData { inertia, orbits }
}

fn phi_with(bundle: &VirtualEqBundle, data: &InertiaData) -> Result<InertiaFunction> {
    let mut values: Vec<Option<CyclotomicNumber>> = vec![None; data.orbits.len()];
    for i in 0..data.inertia.len() {
        let (x, h) = data.inertia.pair(i);
        let v = bundle.fibre_value(x, h)?;
        let slot = &mut values[data.orbits.orbit_of(i)];
        match slot {
            None => *slot = Some(v.clone()),
            Some(existing) if existing != v => {
                return Err(Error::inconsistent(format!(
                    "dévissage value at ({x}, {h}) is {v}, but {existing} elsewhere on its orbit"
                )))
            }
            Some(_) => {}
        }
    }
    Ok(InertiaFunction {
        inertia: data.inertia.clone(),
        orbits: data.orbits.clone(),
        values: values.into_iter().map(Option::unwrap).collect(),
    })
}

/// The dévissage map: `(x, h) ↦ χ_{V_x}(h)`, checked to be constant on
/// every inertia orbit.
pub fn devissage_phi(bundle: &VirtualEqBundle) -> Result<InertiaFunction> {
    phi_with(bundle, &inertia_data(&bundle.base))
}

/// Dévissage of a bundle given by explicit representations of the orbit
/// stabilizers, evaluated through eigenspace dimensions:
/// `Σ_ζ ζ · dim V_x^{(h, ζ)}`.
pub fn devissage_phi_eigen(base: &Arc<FiniteGSet>, reps: &[MatrixRep]) -> Result<InertiaFunction> {
    let data = inertia_data(base);
    let base_orbits = orbits(base);
    if reps.len() != base_orbits.len() {
        return Err(Error::validation("one representation per orbit is required"));
    }
    let stabs: Vec<Subgroup> = base_orbits.representatives.iter().map(|&r| base.stabilizer(r)).collect();
    let g = base.group();
    let mut values = Vec::with_capacity(data.orbits.len());
    for &i in &data.orbits.representatives {
        let (x, h) = data.inertia.pair(i);
        let o = base_orbits.orbit_of(x);
        let t = base_orbits.transporter(x);
        let local = stabs[o]
            .to_local(g.conj(g.inv(t), h))
            .ok_or_else(|| Error::inconsistent("transported element left the stabilizer"))?;
        let mut v = CyclotomicNumber::zero();
        for (z, d) in eigen_decomposition(&reps[o], local)? {
            v = v.checked_add(&z.scale(&rint(d as i64)))?;
        }
        values.push(v);
    }
    Ok(InertiaFunction {
        inertia: data.inertia,
        orbits: data.orbits,
        values,
    })
}

/// The matrix of the dévissage map from a chosen basis of bundles to the
/// basis of inertia orbits (rows are inertia orbits).
#[derive(Debug, Clone)]
pub struct DevissageMatrix {
    pub matrix: CycloMatrix,
    pub rank: usize,
    /// `Σ_orbits #classes(Stab)`.
    pub source_dim: usize,
    /// Number of inertia orbits.
    pub target_dim: usize,
    /// `(orbit, stabilizer class)` labels of the columns, for the delta basis.
    pub column_labels: Vec<(usize, usize)>,
}

impl DevissageMatrix {
    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_square() && self.source_dim == self.target_dim && self.rank == self.target_dim
    }
}

/// Dévissage matrix in the basis of class indicators on each stabilizer.
pub fn devissage_matrix(x: &Arc<FiniteGSet>) -> Result<DevissageMatrix> {
    let (orb, stabs) = VirtualEqBundle::stabilizer_data(x);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for (o, s) in stabs.iter().enumerate() {
        for c in 0..s.as_group().classes().len() {
            let chars = stabs
                .iter()
                .enumerate()
                .map(|(p, t)| {
                    let local = t.as_group().clone();
                    if p == o {
                        ClassFunction::delta(local, c)
                    } else {
                        Ok(ClassFunction::new(local.clone(), vec![CyclotomicNumber::zero(); local.classes().len()])?)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            basis.push(VirtualEqBundle::with_data(x.clone(), orb.clone(), stabs.clone(), chars)?);
            labels.push((o, c));
        }
    }
    let mut m = devissage_matrix_in_basis(x, &basis)?;
    m.column_labels = labels;
    Ok(m)
}

/// Dévissage matrix for a caller-chosen family of bundles on `x`.
pub fn devissage_matrix_in_basis(x: &Arc<FiniteGSet>, basis: &[VirtualEqBundle]) -> Result<DevissageMatrix> {
    let data = inertia_data(x);
    let source_dim: usize = orbits(x)
        .representatives
        .iter()
        .map(|&r| x.stabilizer(r).as_group().classes().len())
        .sum();
    let target_dim = data.orbits.len();
    let mut matrix = CycloMatrix::zeros(target_dim, basis.len());
    for (col, b) in basis.iter().enumerate() {
        if !Arc::ptr_eq(b.base(), x) && **b.base() != **x {
            return Err(Error::validation("basis bundle lives on a different G-set"));
        }
        let f = phi_with(b, &data)?;
        for (row, v) in f.values.into_iter().enumerate() {
            matrix[(row, col)] = v;
        }
    }
    let rank = matrix.rank()?;
    Ok(DevissageMatrix {
        matrix,
        rank,
        source_dim,
        target_dim,
        column_labels: vec![],
    })
}

/// Euler characteristic of a bundle on `[X/G]` computed on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointPushforward {
    /// `Σ_orbits dim (V_x)^{Stab(x)}`
    pub source_side: CyclotomicNumber,
    /// `(1/|G|) Σ_{(x,h)} φ(V)(x, h)`
    pub inertia_side: CyclotomicNumber,
}

pub fn pushforward_to_point(bundle: &VirtualEqBundle) -> Result<PointPushforward> {
    let mut source_side = CyclotomicNumber::zero();
    for c in &bundle.chars {
        source_side = source_side.checked_add(&invariants_dim(c)?)?;
    }
    // the inertia side visits every inertia point, not just orbit representatives
    let g = bundle.base.group();
    let mut total = CyclotomicNumber::zero();
    for x in 0..bundle.base.points() {
        for h in 0..g.order() {
            if bundle.base.act(x, h) == x {
                total = total.checked_add(bundle.fibre_value(x, h)?)?;
            }
        }
    }
    let inertia_side = total.scale(&Rational::new(1.into(), (g.order() as i64).into()));
    if source_side != inertia_side {
        return Err(Error::inconsistent(format!(
            "pushforward to a point: invariants give {source_side}, inertia sum gives {inertia_side}"
        )));
    }
    if bundle.is_genuine() && !matches!(source_side.as_integer(), Some(n) if n >= 0.into()) {
        return Err(Error::inconsistent(format!(
            "genuine bundle has Euler characteristic {source_side}"
        )));
    }
    Ok(PointPushforward {
        source_side,
        inertia_side,
    })
}

/// Pushforward of a bundle along a G-map `f : X → Y` (over the identity of
/// G): the fibre at `y` is `⊕_{x ∈ f⁻¹(y)} V_x` as a `Stab(y)`-module,
/// i.e. a sum of inductions from the stabilizers of the points above `y`.
pub fn pushforward_along(map: &EquivariantMap, bundle: &VirtualEqBundle) -> Result<VirtualEqBundle> {
    if !map.is_over_identity() {
        return Err(Error::domain("pushforward along a map needs the identity homomorphism"));
    }
    if **map.source() != *bundle.base {
        return Err(Error::validation("bundle does not live on the map's source"));
    }
    let target = map.target().clone();
    let (t_orbits, t_stabs) = VirtualEqBundle::stabilizer_data(&target);
    let mut chars = Vec::with_capacity(t_orbits.len());
    for (o, &y) in t_orbits.representatives.iter().enumerate() {
        let sy = &t_stabs[o];
        let local = sy.as_group().clone();
        let mut acc = ClassFunction::new(local.clone(), vec![CyclotomicNumber::zero(); local.classes().len()])?;
        acc.genuine = true;
        let fibre: Vec<usize> = (0..bundle.base.points()).filter(|&p| map.apply(p) == y).collect();
        let mut seen = vec![false; bundle.base.points()];
        for &p in &fibre {
            if seen[p] {
                continue;
            }
            for &k in sy.elements() {
                seen[bundle.base.act(p, k)] = true;
            }
            // Stab(p) ≤ Stab(y), expressed in local indices of Stab(y)
            let stab_p_local: Vec<usize> = bundle
                .base
                .stabilizer_elements(p)
                .into_iter()
                .map(|e| sy.to_local(e).expect("Stab(x) ≤ Stab(f(x))"))
                .collect();
            let inner = Subgroup::new(local.clone(), stab_p_local)?;
            let chi_p = ClassFunction::from_fn(inner.as_group().clone(), |l| {
                let parent_el = sy.to_parent(inner.to_parent(l));
                bundle.fibre_value(p, parent_el).expect("element fixes p").clone()
            });
            let chi_p = ClassFunction {
                genuine: bundle.chars[bundle.orbits.orbit_of(p)].genuine,
                ..chi_p
            };
            acc = acc.add(&induce(&inner, &chi_p, false)?)?;
        }
        chars.push(acc);
    }
    VirtualEqBundle::with_data(target, t_orbits, t_stabs, chars)
}

/// The inertia-side pushforward: `(f_* φ)(y, h) = Σ_{x ∈ f⁻¹(y), h·x = x} φ(x, h)`.
pub fn lefschetz_pushforward(map: &EquivariantMap, phi: &InertiaFunction) -> Result<InertiaFunction> {
    if !map.is_over_identity() {
        return Err(Error::domain("pushforward along a map needs the identity homomorphism"));
    }
    let data = inertia_data(map.target());
    let source = map.source();
    let mut values = Vec::with_capacity(data.orbits.len());
    for &i in &data.orbits.representatives {
        let (y, h) = data.inertia.pair(i);
        let mut total = CyclotomicNumber::zero();
        for x in 0..source.points() {
            if map.apply(x) == y && source.act(x, h) == x {
                let v = phi
                    .at(x, h)
                    .ok_or_else(|| Error::inconsistent(format!("({x}, {h}) missing from source inertia")))?;
                total = total.checked_add(v)?;
            }
        }
        values.push(total);
    }
    Ok(InertiaFunction {
        inertia: data.inertia,
        orbits: data.orbits,
        values,
    })
}
