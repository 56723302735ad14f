//! Named groups and builders for the families used by the presets and the
//! small-group catalog.

use super::FiniteGroup;
use crate::error::{Error, Result};

pub fn cyclic(n: usize) -> FiniteGroup {
    metacyclic(n, 1, 1, 0).expect("cyclic group parameters are valid")
}

/// The symmetric group on `n` points, as permutations.
pub fn symmetric(n: usize) -> FiniteGroup {
    if n < 2 {
        return FiniteGroup::from_permutations(&[]).expect("trivial group");
    }
    let mut swap: Vec<u32> = (0..n as u32).collect();
    swap.swap(0, 1);
    let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    FiniteGroup::from_permutations(&[swap, cycle]).expect("S_n generators are permutations")
}

/// The alternating group on `n ≥ 3` points, generated by the 3-cycles
/// `(0 1 i)`.
pub fn alternating(n: usize) -> FiniteGroup {
    let gens: Vec<Vec<u32>> = (2..n)
        .map(|i| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p[0] = 1;
            p[1] = i as u32;
            p[i] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(&gens).expect("3-cycles are permutations")
}

/// Symmetries of the regular `n`-gon (order `2n`), as permutations of the
/// vertices.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    FiniteGroup::from_permutations(&[rot, refl]).expect("dihedral generators are permutations")
}

/// `⟨x, y | x^m = 1, y^n = x^s, y·x·y⁻¹ = x^a⟩`, elements `x^i y^j` with
/// index `i + m·j`.
pub fn metacyclic(m: usize, n: usize, a: usize, s: usize) -> Result<FiniteGroup> {
    let pow_mod = |base: usize, e: usize| (0..e).fold(1usize, |acc, _| acc * base % m.max(1));
    if m == 0 || n == 0 {
        return Err(Error::validation("metacyclic parameters must be positive"));
    }
    if m > 1 && pow_mod(a, n) != 1 % m {
        return Err(Error::validation(format!("a={a} must satisfy a^{n} ≡ 1 mod {m}")));
    }
    if (s * a) % m != s % m {
        return Err(Error::validation("x^s must be central"));
    }
    let order = m * n;
    let mut table = vec![vec![0usize; order]; order];
    for (u, row) in table.iter_mut().enumerate() {
        let (i, j) = (u % m, u / m);
        for (v, cell) in row.iter_mut().enumerate() {
            let (k, l) = (v % m, v / m);
            let mut xi = i + k * pow_mod(a, j);
            let mut yj = j + l;
            if yj >= n {
                yj -= n;
                xi += s;
            }
            *cell = xi % m + m * yj;
        }
    }
    FiniteGroup::from_table(&table)
}

/// `N ⋊ K` where `action[k]` is the automorphism of `N` (as an index map)
/// attached to `k`. Element `(n, k)` has index `n + |N|·k`.
pub fn semidirect(n: &FiniteGroup, k: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroup> {
    let (nn, nk) = (n.order(), k.order());
    if action.len() != nk || action.iter().any(|m| m.len() != nn) {
        return Err(Error::validation("action must map every element of K to a map on N"));
    }
    let order = nn * nk;
    let table: Vec<Vec<usize>> = (0..order)
        .map(|u| {
            let (n1, k1) = (u % nn, u / nn);
            (0..order)
                .map(|v| {
                    let (n2, k2) = (v % nn, v / nn);
                    n.mul(n1, action[k1][n2]) + nn * k.mul(k1, k2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table)
}

/// Powers of a single automorphism of `N` attached to a cyclic `K = Z_k`.
fn cyclic_action(generator_image: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut maps = vec![(0..generator_image.len()).collect::<Vec<_>>()];
    for _ in 1..k {
        let prev = maps.last().unwrap();
        maps.push(prev.iter().map(|&x| generator_image[x]).collect());
    }
    maps
}

fn klein() -> FiniteGroup {
    FiniteGroup::direct_product(&cyclic(2), &cyclic(2))
}

pub fn quaternion8() -> FiniteGroup {
    metacyclic(4, 2, 3, 2).expect("Q8 parameters")
}

/// Resolves a preset name: `S3`, `S4`, `A4`, `D4` (order 8), `Q8`, `Q16`,
/// `Z<n>`, `D<n>` (order 2n), `S<n>`, `A<n>`, `V4`, `trivial`.
pub fn preset(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::Parse(format!("unknown group preset {name:?}"));
    match name {
        "trivial" | "1" => return Ok(FiniteGroup::trivial()),
        "Q8" => return Ok(quaternion8()),
        "Q16" => return metacyclic(8, 2, 7, 4),
        "V4" => return Ok(klein()),
        _ => {}
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let n: usize = tail.parse().map_err(|_| unknown())?;
    match head {
        "Z" | "C" if (1..=10080).contains(&n) => Ok(cyclic(n)),
        "S" if (1..=7).contains(&n) => Ok(symmetric(n)),
        "A" if (3..=7).contains(&n) => Ok(alternating(n)),
        "D" if (3..=5040).contains(&n) => Ok(dihedral(n)),
        _ => Err(unknown()),
    }
}

/// Every group of order at most `max_order` (≤ 16) up to isomorphism, each
/// with a descriptive name.
pub fn small_groups(max_order: usize) -> Vec<(String, FiniteGroup)> {
    assert!(max_order <= 16, "catalog covers orders up to 16");
    let z = cyclic;
    let prod = FiniteGroup::direct_product;
    let meta = |m, n, a, s| metacyclic(m, n, a, s).expect("catalog parameters are valid");
    let mut out: Vec<(String, FiniteGroup)> = vec![("1".into(), FiniteGroup::trivial())];
    for n in 2..=max_order {
        let mut add = |name: &str, g: FiniteGroup| {
            debug_assert_eq!(g.order(), n, "{name}");
            out.push((name.to_string(), g));
        };
        add(&format!("Z{n}"), z(n));
        match n {
            4 => add("Z2xZ2", klein()),
            6 => add("S3", symmetric(3)),
            8 => {
                add("Z4xZ2", prod(&z(4), &z(2)));
                add("Z2^3", prod(&klein(), &z(2)));
                add("D4", dihedral(4));
                add("Q8", quaternion8());
            }
            9 => add("Z3xZ3", prod(&z(3), &z(3))),
            10 => add("D5", dihedral(5)),
            12 => {
                add("Z6xZ2", prod(&z(6), &z(2)));
                add("D6", dihedral(6));
                add("A4", alternating(4));
                add("Dic3", meta(3, 4, 2, 0));
            }
            14 => add("D7", dihedral(7)),
            16 => {
                add("Z4xZ4", prod(&z(4), &z(4)));
                add("Z8xZ2", prod(&z(8), &z(2)));
                add("Z4xZ2xZ2", prod(&z(4), &klein()));
                add("Z2^4", prod(&klein(), &klein()));
                add("D8", dihedral(8));
                add("Q16", meta(8, 2, 7, 4));
                add("SD16", meta(8, 2, 3, 0));
                add("M16", meta(8, 2, 5, 0));
                add("Z4:Z4", meta(4, 4, 3, 0));
                // Z4 generator swaps the two generators of the Klein group
                let swap = cyclic_action(&[0, 2, 1, 3], 4);
                add("Z2^2:Z4", semidirect(&klein(), &z(4), &swap).expect("valid action"));
                add("D4xZ2", prod(&dihedral(4), &z(2)));
                add("Q8xZ2", prod(&quaternion8(), &z(2)));
                // (Z4 x Z2) : Z2 with b ↦ a²b, the central product Z4∘D4
                let pauli_map: Vec<usize> = (0..8)
                    .map(|u| {
                        let (i, j) = (u / 2, u % 2);
                        ((i + 2 * j) % 4) * 2 + j
                    })
                    .collect();
                let pauli = semidirect(&prod(&z(4), &z(2)), &z(2), &cyclic_action(&pauli_map, 2))
                    .expect("valid action");
                add("Pauli", pauli);
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptheory::{all_subgroups, count_commuting_tuples, TupleAlgorithm};
    use std::sync::Arc;

    fn fingerprint(g: &FiniteGroup) -> (Vec<usize>, usize, usize, u128, usize, Vec<usize>) {
        let mut orders: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
        orders.sort();
        let squares = {
            let mut s: Vec<usize> = (0..g.order()).map(|a| g.mul(a, a)).collect();
            s.sort();
            s.dedup();
            s.len()
        };
        let arc = Arc::new(g.clone());
        let mut sub_orders: Vec<usize> = all_subgroups(&arc).iter().map(|s| s.order()).collect();
        sub_orders.sort();
        (
            orders,
            g.center().len(),
            g.classes().len(),
            count_commuting_tuples(g, 3, TupleAlgorithm::CentralizerRecursive).unwrap(),
            squares,
            sub_orders,
        )
    }

    #[test]
    fn named_presets() {
        assert_eq!(preset("S3").unwrap().order(), 6);
        assert_eq!(preset("Z4").unwrap().order(), 4);
        assert_eq!(preset("D4").unwrap().order(), 8);
        assert_eq!(preset("Q8").unwrap().order(), 8);
        assert_eq!(preset("A4").unwrap().order(), 12);
        assert_eq!(preset("S4").unwrap().order(), 24);
        assert!(preset("X9").is_err());
        assert!(preset("").is_err());
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion8();
        let involutions = (1..8).filter(|&a| q.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn catalog_has_all_42_groups_pairwise_distinct() {
        let groups = small_groups(16);
        assert_eq!(groups.len(), 42);
        let per_order = |n| groups.iter().filter(|(_, g)| g.order() == n).count();
        assert_eq!(per_order(8), 5);
        assert_eq!(per_order(12), 5);
        assert_eq!(per_order(16), 14);
        for n in 1..=16 {
            let prints: Vec<_> = groups
                .iter()
                .filter(|(_, g)| g.order() == n)
                .map(|(name, g)| (name.clone(), fingerprint(g)))
                .collect();
            for i in 0..prints.len() {
                for j in i + 1..prints.len() {
                    assert_ne!(prints[i].1, prints[j].1, "{} vs {}", prints[i].0, prints[j].0);
                }
            }
        }
    }

    #[test]
    fn metacyclic_rejects_bad_parameters() {
        assert!(metacyclic(5, 2, 2, 0).is_err());
        assert!(metacyclic(4, 2, 3, 1).is_err());
    }
}
