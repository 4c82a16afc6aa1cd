//! Small-group subgroup lattices and quadratic-form stabilizers.
//!
//! `maximal_subgroups_tiny` enumerates the full subgroup lattice of a group
//! small enough to hold as bitsets over its element list.  Every subgroup is
//! generated by its elements of prime power order, so breadth-first closure
//! from the trivial subgroup, adjoining one cyclic prime-power subgroup at a
//! time, visits every conjugacy class of subgroups.  Closures that spill past
//! |G|/2 are the whole group by Lagrange and are cut off early.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::prime_factors;
use crate::grpzoo::classical::form_orbit_stabilizer;
use crate::grpzoo::forms::{enumerate_quadforms, standard_symplectic_gram, QuadForm};
use crate::grpzoo::zoo::ZooGroup;
use crate::permcore::{Perm, PermGroup};
use crate::subfpr::SubgroupHandle;

/// Order cap for whole-lattice enumeration.
pub const LATTICE_CAP: u128 = 10_000;

fn words(n: usize) -> usize {
    (n + 63) / 64
}

fn bit_set(w: &mut [u64], i: u32) {
    w[(i / 64) as usize] |= 1u64 << (i % 64);
}

fn bit_get(w: &[u64], i: u32) -> bool {
    w[(i / 64) as usize] >> (i % 64) & 1 == 1
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == *x)
}

fn apply_index_perm(bits: &[u64], pi: &[u32], nwords: usize) -> Vec<u64> {
    let mut out = vec![0u64; nwords];
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros();
            bit_set(&mut out, pi[w * 64 + b as usize]);
            word &= word - 1;
        }
    }
    out
}

struct SubRec {
    bits: Vec<u64>,
    gens: Vec<Perm>,
    order: u64,
}

/// All conjugacy classes of maximal subgroups of a group of order at most
/// `LATTICE_CAP`, one representative per class, largest first.  For a group
/// of prime order the trivial subgroup is the unique maximal subgroup.
pub fn maximal_subgroups_tiny(g: &PermGroup) -> Result<Vec<SubgroupHandle>> {
    let n = g.order();
    if n > LATTICE_CAP {
        return Err(Error::BudgetExceeded(format!("order {} over lattice cap {}", n, LATTICE_CAP)));
    }
    let elems = g.elements_budgeted(LATTICE_CAP)?;
    let n = elems.len();
    if n == 1 {
        return Ok(Vec::new());
    }
    let mut index: HashMap<Vec<u8>, u32> = HashMap::with_capacity(n);
    for (i, e) in elems.iter().enumerate() {
        index.insert(e.canonical_bytes(), i as u32);
    }
    let nwords = words(n);

    // conjugation by each generator as a permutation of element indices
    let conj_perms: Vec<Vec<u32>> = g
        .gens()
        .iter()
        .map(|gen| elems.iter().map(|e| index[&e.conj(gen).canonical_bytes()]).collect())
        .collect();

    // one generator per cyclic subgroup of prime power order
    let mut zuppos: Vec<u32> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<u8>> = HashSet::new();
    for (i, e) in elems.iter().enumerate() {
        let o = e.order();
        if o == 1 || prime_factors(o as u128).len() != 1 {
            continue;
        }
        let canon = (1..o)
            .filter(|k| num::integer::gcd(*k, o) == 1)
            .map(|k| e.power(k as i64).canonical_bytes())
            .min()
            .unwrap();
        if seen_cyclic.insert(canon) {
            zuppos.push(i as u32);
        }
    }

    let half = n as u64 / 2;
    // closure of a generator list as a bitset; None when it is all of g
    let closure = |gens: &[Perm]| -> Option<(Vec<u64>, u64)> {
        let mut bits = vec![0u64; nwords];
        let id = index[&Perm::identity(g.degree()).canonical_bytes()];
        bit_set(&mut bits, id);
        let mut stack = vec![id];
        let mut count = 1u64;
        while let Some(i) = stack.pop() {
            for gen in gens {
                let j = index[&elems[i as usize].compose(gen).canonical_bytes()];
                if !bit_get(&bits, j) {
                    bit_set(&mut bits, j);
                    count += 1;
                    if count > half {
                        return None;
                    }
                    stack.push(j);
                }
            }
        }
        Some((bits, count))
    };

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut classes: Vec<SubRec> = Vec::new();
    let mut trivial = vec![0u64; nwords];
    bit_set(&mut trivial, index[&Perm::identity(g.degree()).canonical_bytes()]);
    seen.insert(trivial.clone());
    classes.push(SubRec { bits: trivial, gens: Vec::new(), order: 1 });

    let mut at = 0;
    while at < classes.len() {
        for &z in &zuppos {
            if bit_get(&classes[at].bits, z) {
                continue;
            }
            let mut gens = classes[at].gens.clone();
            gens.push(elems[z as usize].clone());
            let Some((bits, order)) = closure(&gens) else { continue };
            if seen.contains(&bits) {
                continue;
            }
            // orbit of the new subgroup under conjugation
            let mut orbit = vec![bits.clone()];
            seen.insert(bits.clone());
            let mut oi = 0;
            while oi < orbit.len() {
                for pi in &conj_perms {
                    let img = apply_index_perm(&orbit[oi], pi, nwords);
                    if seen.insert(img.clone()) {
                        orbit.push(img);
                    }
                }
                oi += 1;
            }
            classes.push(SubRec { bits, gens, order });
        }
        at += 1;
    }

    // a class rep is maximal when no strictly larger recorded subgroup
    // contains it; `seen` holds every proper subgroup of g
    let mut out: Vec<&SubRec> = classes
        .iter()
        .filter(|s| !seen.iter().any(|w| is_subset(&s.bits, w) && *w != s.bits))
        .collect();
    out.sort_by(|a, b| b.order.cmp(&a.order).then(a.bits.cmp(&b.bits)));
    out.into_iter()
        .map(|s| {
            let h = PermGroup::new(g.degree(), s.gens.clone());
            if h.order() != s.order as u128 {
                return Err(Error::OrderMismatch { expected: s.order as u128, computed: h.order() });
            }
            Ok(SubgroupHandle::new(format!("maximal order {}", s.order), h))
        })
        .collect()
}

pub struct QuadTypeCensus {
    pub plus_count: u64,
    pub minus_count: u64,
    pub plus: SubgroupHandle,
    pub minus: SubgroupHandle,
    pub plus_form: QuadForm,
    pub minus_form: QuadForm,
}

/// In even characteristic the quadratic forms polarizing the invariant
/// symplectic form split by type, and their stabilizers are the two
/// orthogonal subgroups of Sp_2m(q).  Enumerates all q^2m forms, checks the
/// census against the closed-form counts q^m(q^m ± 1)/2, and returns the
/// stabilizer of the first form of each type as a permutation group on the
/// zoo domain, with orbit sizes and orders cross-checked.
pub fn quadratic_type_subgroups(z: &ZooGroup) -> Result<QuadTypeCensus> {
    let mats = z.mats.as_ref().ok_or(Error::UnsupportedCase("matrix group required".into()))?;
    let domain = z.domain.as_ref().ok_or(Error::UnsupportedCase("domain required".into()))?;
    let field = mats.field();
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    let m = mats.dim() / 2;
    let q = field.q();
    let gram = Arc::new(standard_symplectic_gram(field, m));
    let mut plus: Vec<QuadForm> = Vec::new();
    let mut minus: Vec<QuadForm> = Vec::new();
    for f in enumerate_quadforms(&gram)? {
        match f.epsilon()? {
            1 => plus.push(f),
            -1 => minus.push(f),
            _ => return Err(Error::FormMismatch),
        }
    }
    let qm = q.pow(m as u32);
    if plus.len() as u64 != qm * (qm + 1) / 2 || minus.len() as u64 != qm * (qm - 1) / 2 {
        return Err(Error::HypothesisViolated(format!(
            "form census {}+/{}- does not match q^m(q^m+-1)/2",
            plus.len(),
            minus.len()
        )));
    }

    let sp_order = z.base.order();
    let build = |forms: &Vec<QuadForm>, eps: &str| -> Result<SubgroupHandle> {
        let orbit = form_orbit_stabilizer(mats.gens(), forms[0].clone())?;
        if orbit.members.len() != forms.len() {
            return Err(Error::HypothesisViolated(format!(
                "type {} orbit has {} forms, census says {}",
                eps,
                orbit.members.len(),
                forms.len()
            )));
        }
        let gens = orbit
            .stab_gens
            .iter()
            .map(|s| domain.perm_of(s))
            .collect::<Result<Vec<_>>>()?;
        let h = PermGroup::new(z.full.degree(), gens);
        let expect = sp_order / forms.len() as u128;
        if h.order() != expect {
            return Err(Error::OrderMismatch { expected: expect, computed: h.order() });
        }
        Ok(SubgroupHandle::new(format!("type O{}{}({}) stabilizer", eps, 2 * m, q), h))
    };
    let plus_handle = build(&plus, "+")?;
    let minus_handle = build(&minus, "-")?;
    Ok(QuadTypeCensus {
        plus_count: plus.len() as u64,
        minus_count: minus.len() as u64,
        plus: plus_handle,
        minus: minus_handle,
        plus_form: plus.into_iter().next().unwrap(),
        minus_form: minus.into_iter().next().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::zoo::build;

    #[test]
    fn a5_maximal_orders() {
        let g = build("atlas:A5").unwrap().full;
        let maxes = maximal_subgroups_tiny(&g).unwrap();
        let orders: Vec<u128> = maxes.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![12, 10, 6]);
    }

    #[test]
    fn s6_maximals_include_socle() {
        let z = build("atlas:S6").unwrap();
        let maxes = maximal_subgroups_tiny(&z.full).unwrap();
        let a6 = maxes.iter().find(|h| h.order() == 360).expect("index-2 socle");
        for gen in z.base.gens() {
            assert!(a6.group.contains(gen));
        }
        // two classes of subgroups isomorphic to S5 sit at order 120
        assert_eq!(maxes.iter().filter(|h| h.order() == 120).count(), 2);
    }

    #[test]
    fn prime_cyclic_has_trivial_maximal() {
        let g = PermGroup::new(7, vec![Perm::from_cycles(7, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap()]);
        let maxes = maximal_subgroups_tiny(&g).unwrap();
        assert_eq!(maxes.len(), 1);
        assert_eq!(maxes[0].order(), 1);
    }

    #[test]
    fn c6_maximals_are_prime_parts() {
        let g = PermGroup::new(6, vec![Perm::from_cycles(6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap()]);
        let orders: Vec<u128> = maximal_subgroups_tiny(&g).unwrap().iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![3, 2]);
    }

    #[test]
    fn quadratic_census_q2() {
        let z = build("zoo:Sp4(2)").unwrap();
        let census = quadratic_type_subgroups(&z).unwrap();
        assert_eq!((census.plus_count, census.minus_count), (10, 6));
        assert_eq!(census.plus.order(), 72);
        assert_eq!(census.minus.order(), 120);
    }

    #[test]
    fn quadratic_census_rejects_odd() {
        let z = build("zoo:Sp4(3)").unwrap();
        assert!(matches!(quadratic_type_subgroups(&z), Err(Error::OddCharacteristic)));
    }
}
