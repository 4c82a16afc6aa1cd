//! Fixed point ratios on coset spaces, overgroup counting, and the union
//! bound on generation probabilities.
//!
//! The primary route to fpr(x, G/H) is class intersection,
//!
//!   fpr(x, G/H) = |x^G ∩ H| / |x^G|,
//!
//! computed by enumerating H against a full class table of G.  The
//! independent cross-check counts fixed cosets directly: Hr is fixed by x
//! exactly when r x r^-1 sifts into H.  Everything downstream is exact
//! rational arithmetic.

mod audit;
mod bounds;
mod curated;
mod lattice;

pub use audit::{audit_four_dim_bounds, BoundAudit, BoundCheck};
pub use bounds::{
    bound_value, nu, symplectic_involution_type, BoundFormula, BoundInterval, InvolutionClass,
    SharpCase, TwoSpaceCase,
};
pub use curated::{
    block_stabilizer, curated_maximals, falsify_maximality, isotropic_lines,
    normalizing_coset_elem, parse_subgroup_list, point_stabilizer, sp4_coset_maximals,
    write_subgroup_list,
};
pub use lattice::{maximal_subgroups_tiny, quadratic_type_subgroups, QuadTypeCensus};

use num::BigRational;

use crate::conjtab::ClassTable;
use crate::error::{Error, Result};
use crate::permcore::{Perm, PermGroup};

/// Element enumeration budget for subgroups handed to the fpr routines.
pub const SUBGROUP_ENUM_CAP: u128 = 200_000;
/// Coset transversal budget.  Identification is quadratic in the index, so
/// this is meant for the small indices the certificates actually use.
pub const TRANSVERSAL_CAP: u128 = 100_000;

/// A subgroup of some ambient group, tagged with a human-readable label
/// ("type O-4(4)", "point stabilizer", ..) used in reports.
#[derive(Clone)]
pub struct SubgroupHandle {
    pub label: String,
    pub group: PermGroup,
}

impl SubgroupHandle {
    pub fn new(label: impl Into<String>, group: PermGroup) -> SubgroupHandle {
        SubgroupHandle { label: label.into(), group }
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }
}

/// Right-coset transversal of h in g, breadth first from the identity.
/// Cosets are identified by sifting: Hg1 = Hg2 iff g1 g2^-1 in H.
pub fn coset_transversal(g: &PermGroup, h: &PermGroup, cap: u128) -> Result<Vec<Perm>> {
    for gen in h.gens() {
        if !g.contains(gen) {
            return Err(Error::ElementNotInGroup);
        }
    }
    let index = g.order() / h.order();
    if index > cap {
        return Err(Error::BudgetExceeded(format!("coset index {} over cap {}", index, cap)));
    }
    let mut reps: Vec<Perm> = vec![Perm::identity(g.degree())];
    let mut inv: Vec<Perm> = vec![Perm::identity(g.degree())];
    let mut i = 0;
    'grow: while i < reps.len() {
        for gen in g.gens() {
            let cand = reps[i].compose(gen);
            if !inv.iter().any(|ri| h.contains(&cand.compose(ri))) {
                inv.push(cand.inverse());
                reps.push(cand);
                if reps.len() as u128 == index {
                    break 'grow;
                }
            }
        }
        i += 1;
    }
    if reps.len() as u128 != index {
        // size must come out right unless h is not actually a subgroup of g
        return Err(Error::HypothesisViolated(format!(
            "coset walk found {} cosets, index is {}",
            reps.len(),
            index
        )));
    }
    Ok(reps)
}

/// Number of right cosets Hr fixed by x: those with r x r^-1 in H.
pub fn coset_fixed_points(h: &PermGroup, transversal: &[Perm], x: &Perm) -> u64 {
    transversal
        .iter()
        .filter(|r| h.contains(&r.compose(x).compose(&r.inverse())))
        .count() as u64
}

pub struct FprRecord {
    pub class_id: usize,
    pub label: String,
    /// |x^G ∩ H|
    pub class_meet: u64,
    pub class_size: u64,
    pub fpr: BigRational,
    pub cross_checked: bool,
}

/// Exact fixed point ratio of the class on G/H by class intersection, with
/// a direct fixed-coset count as cross-check while the index is in budget.
pub fn exact_fpr(
    g: &PermGroup,
    table: &ClassTable,
    class_id: usize,
    h: &SubgroupHandle,
    cross_check_cap: u128,
) -> Result<FprRecord> {
    let mut meet = 0u64;
    for e in h.group.elements_budgeted(SUBGROUP_ENUM_CAP)? {
        if table.class_of(&e)? == class_id {
            meet += 1;
        }
    }
    let class_size = table.classes[class_id].size;
    let fpr = BigRational::new(meet.into(), class_size.into());
    let index = g.order() / h.group.order();
    let mut cross_checked = false;
    if index <= cross_check_cap {
        let t = coset_transversal(g, &h.group, cross_check_cap)?;
        let fix = coset_fixed_points(&h.group, &t, &table.classes[class_id].rep);
        // meet/|x^G| == fix/|G:H| cleared of denominators
        if meet as u128 * index != fix as u128 * class_size as u128 {
            return Err(Error::HypothesisViolated(format!(
                "fpr cross-check failed on {}: meet {} index {} vs fix {} class {}",
                h.label, meet, index, fix, class_size
            )));
        }
        cross_checked = true;
    }
    Ok(FprRecord { class_id, label: h.label.clone(), class_meet: meet, class_size, fpr, cross_checked })
}

/// Number of G-conjugates of a self-normalizing H containing a member of
/// the class: (|G|/|H|) * |x^G ∩ H| / |x^G|.  The transversal gives the
/// self-normalizing verification and the direct count in one sweep, since
/// conjugates of H then correspond to cosets.
pub fn overgroup_count(
    g: &PermGroup,
    table: &ClassTable,
    class_id: usize,
    h: &SubgroupHandle,
) -> Result<u64> {
    let t = coset_transversal(g, &h.group, TRANSVERSAL_CAP)?;
    let normalizing = t
        .iter()
        .filter(|r| {
            h.group
                .gens()
                .iter()
                .all(|s| h.group.contains(&s.conj(r)))
        })
        .count() as u128;
    if normalizing != 1 {
        return Err(Error::NotSelfNormalizing);
    }
    let count = conjugates_containing(g, table, class_id, h, &t)?;
    // direct enumeration: x in r^-1 H r iff the coset Hr is fixed by x
    let direct = coset_fixed_points(&h.group, &t, &table.classes[class_id].rep);
    if direct != count {
        return Err(Error::HypothesisViolated(format!(
            "overgroup count {} disagrees with direct conjugate count {}",
            count, direct
        )));
    }
    Ok(count)
}

/// Number of G-conjugates of H (any H) containing a member of the class:
/// |H^G| * |x^G ∩ H| / |x^G|, with |H^G| read off the transversal.
pub fn overgroup_multiplicity(
    g: &PermGroup,
    table: &ClassTable,
    class_id: usize,
    h: &SubgroupHandle,
) -> Result<u64> {
    let t = coset_transversal(g, &h.group, TRANSVERSAL_CAP)?;
    conjugates_containing(g, table, class_id, h, &t)
}

fn conjugates_containing(
    g: &PermGroup,
    table: &ClassTable,
    class_id: usize,
    h: &SubgroupHandle,
    t: &[Perm],
) -> Result<u64> {
    let normalizing = t
        .iter()
        .filter(|r| h.group.gens().iter().all(|s| h.group.contains(&s.conj(r))))
        .count() as u128;
    let index = g.order() / h.group.order();
    if index % normalizing != 0 {
        return Err(Error::HypothesisViolated("normalizer order does not divide the index".into()));
    }
    let class_count = index / normalizing; // |H^G| = |G| / |N_G(H)|
    let mut meet = 0u64;
    for e in h.group.elements_budgeted(SUBGROUP_ENUM_CAP)? {
        if table.class_of(&e)? == class_id {
            meet += 1;
        }
    }
    let num = class_count * meet as u128;
    let size = table.classes[class_id].size as u128;
    if num % size != 0 {
        return Err(Error::HypothesisViolated(format!(
            "overgroup incidence {}*{} not divisible by class size {}",
            class_count, meet, size
        )));
    }
    Ok((num / size) as u64)
}

/// Everything the union bound needs about one subgroup, from a single
/// enumeration of H and a single coset transversal: per-class meets and
/// overgroup multiplicities, plus the fixed-coset cross-check of every
/// class meet when the index is within the given cap.
pub struct OvergroupProfile {
    pub label: String,
    pub subgroup_order: u128,
    pub index: u128,
    /// |H^G|, off the transversal: index / #(cosets normalizing H).
    pub conjugate_classes: u128,
    /// meets[c] = |c-th class ∩ H|.
    pub meets: Vec<u64>,
    /// mults[c] = conjugates of H containing a member of class c.
    pub mults: Vec<u64>,
    pub cross_checked: bool,
}

impl OvergroupProfile {
    pub fn fpr(&self, table: &ClassTable, class_id: usize) -> BigRational {
        BigRational::new(self.meets[class_id].into(), table.classes[class_id].size.into())
    }
}

pub fn overgroup_profile(
    g: &PermGroup,
    table: &ClassTable,
    h: &SubgroupHandle,
    cross_check_cap: u128,
) -> Result<OvergroupProfile> {
    let mut meets = vec![0u64; table.len()];
    for e in h.group.elements_budgeted(SUBGROUP_ENUM_CAP)? {
        meets[table.class_of(&e)?] += 1;
    }
    let t = coset_transversal(g, &h.group, TRANSVERSAL_CAP)?;
    let normalizing = t
        .iter()
        .filter(|r| h.group.gens().iter().all(|s| h.group.contains(&s.conj(r))))
        .count() as u128;
    let index = g.order() / h.group.order();
    if index % normalizing != 0 {
        return Err(Error::HypothesisViolated("normalizer order does not divide the index".into()));
    }
    let conjugate_classes = index / normalizing;
    let mut mults = vec![0u64; table.len()];
    for c in 0..table.len() {
        let num = conjugate_classes * meets[c] as u128;
        let size = table.classes[c].size as u128;
        if num % size != 0 {
            return Err(Error::HypothesisViolated(format!(
                "overgroup incidence {}*{} not divisible by class size {}",
                conjugate_classes, meets[c], size
            )));
        }
        mults[c] = (num / size) as u64;
    }
    let cross_checked = if index <= cross_check_cap {
        for c in 0..table.len() {
            let fix = coset_fixed_points(&h.group, &t, &table.classes[c].rep);
            if meets[c] as u128 * index != fix as u128 * table.classes[c].size as u128 {
                return Err(Error::HypothesisViolated(format!(
                    "fpr cross-check failed on {} class {}: meet {} index {} vs fix {}",
                    h.label, c, meets[c], index, fix
                )));
            }
        }
        true
    } else {
        false
    };
    Ok(OvergroupProfile {
        label: h.label.clone(),
        subgroup_order: h.group.order(),
        index,
        conjugate_classes,
        meets,
        mults,
        cross_checked,
    })
}

/// Exhaustive P(x, s): the proportion of z in the class of s for which
/// <x, z> falls short of G.
pub fn exact_p(
    g: &PermGroup,
    table: &ClassTable,
    x_class: usize,
    s_class: usize,
    cap: u64,
) -> Result<BigRational> {
    use rayon::prelude::*;
    if table.classes[x_class].element_order == 1 || table.classes[s_class].element_order == 1 {
        return Err(Error::IdentityInput);
    }
    let size = table.classes[s_class].size;
    if size > cap {
        return Err(Error::BudgetExceeded(format!("|s^G| = {} over exhaustive cap {}", size, cap)));
    }
    let members = table.members(s_class, g.gens());
    let x = &table.classes[x_class].rep;
    let fails = members
        .par_iter()
        .filter(|z| !g.is_generating(&[x.clone(), (*z).clone()]).unwrap())
        .count() as u64;
    Ok(BigRational::new(fails.into(), size.into()))
}

pub struct ClassBoundLine {
    pub class_id: usize,
    pub element_order: u64,
    /// Sum over supplied maximal classes of (conjugates containing s) * fpr.
    pub sum_bound: BigRational,
    /// Exhaustive P(x, s) when the class of s is within budget.
    pub exact: Option<BigRational>,
}

pub struct ProbBoundReport {
    pub s_class: usize,
    /// Conjugates of each supplied subgroup containing s.
    pub mults: Vec<(String, u64)>,
    /// One line per prime-order class.
    pub lines: Vec<ClassBoundLine>,
    /// Largest k such that every k-multiset of classes has bound sum < 1,
    /// i.e. the uniform spread this table certifies for the class of s.
    pub verdict_k: u64,
}

/// The union bound P(x,s) <= sum over maximal overgroups of s of
/// fpr(x, G/H), evaluated exactly per prime-order class, with the
/// exhaustive P computed alongside (and the inequality checked) whenever
/// the class of s is small enough to sweep.
///
/// The supplied list must contain every class of maximal subgroups whose
/// members can contain s for the verdict to be meaningful; subgroups that
/// meet s^G in nothing contribute zero and are harmless.
pub fn prob_bound_report(
    g: &PermGroup,
    table: &ClassTable,
    s_class: usize,
    maximals: &[SubgroupHandle],
    exhaustive_cap: u64,
) -> Result<ProbBoundReport> {
    use crate::ffield::is_prime;
    use num::{One, Zero};
    if maximals.is_empty() {
        return Err(Error::EmptyOvergroupList);
    }
    let profiles = maximals
        .iter()
        .map(|h| overgroup_profile(g, table, h, TRANSVERSAL_CAP))
        .collect::<Result<Vec<_>>>()?;
    let mults: Vec<(String, u64)> =
        profiles.iter().map(|p| (p.label.clone(), p.mults[s_class])).collect();
    let mut lines = Vec::new();
    for cid in 0..table.len() {
        let order = table.classes[cid].element_order;
        if !is_prime(order) {
            continue; // identity and composite orders reduce to prime ones
        }
        let mut sum = BigRational::zero();
        for p in &profiles {
            let mult = p.mults[s_class];
            if mult == 0 {
                continue;
            }
            sum += BigRational::from_integer(mult.into()) * p.fpr(table, cid);
        }
        let exact = if table.classes[s_class].size <= exhaustive_cap {
            let p = exact_p(g, table, cid, s_class, exhaustive_cap)?;
            if p > sum {
                return Err(Error::HypothesisViolated(format!(
                    "exact P = {} exceeds overgroup bound {} for class {}",
                    p, sum, cid
                )));
            }
            Some(p)
        } else {
            None
        };
        lines.push(ClassBoundLine { class_id: cid, element_order: order, sum_bound: sum, exact });
    }
    let max_sum = lines.iter().map(|l| l.sum_bound.clone()).max().unwrap_or_else(BigRational::zero);
    let verdict_k = if max_sum >= BigRational::one() {
        0
    } else if max_sum.is_zero() {
        u64::MAX
    } else {
        // largest k with k * max_sum < 1
        let inv = max_sum.recip();
        let floor = inv.floor().to_integer();
        let k = if BigRational::from_integer(floor.clone()) == inv { &floor - 1 } else { floor };
        use num::ToPrimitive;
        k.to_u64().unwrap_or(u64::MAX)
    };
    Ok(ProbBoundReport { s_class, mults, lines, verdict_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjtab::conjugacy_classes;
    use crate::grpzoo::zoo::build;
    use crate::permcore::Perm;

    fn a5_with_a4() -> (PermGroup, ClassTable, SubgroupHandle) {
        let g = build("atlas:A5").unwrap().full;
        let table = conjugacy_classes(&g, 60).unwrap();
        // point stabilizer of 4: generated by a 3-cycle and a double
        // transposition fixing that point
        let h = PermGroup::new(5, vec![
            Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap(),
            Perm::from_cycles(5, &[vec![0, 1], vec![2, 3]]).unwrap(),
        ]);
        assert_eq!(h.order(), 12);
        (g, table, SubgroupHandle::new("point stabilizer", h))
    }

    fn class_of_order(table: &ClassTable, n: u64) -> usize {
        (0..table.len()).find(|&i| table.classes[i].element_order == n).unwrap()
    }

    #[test]
    fn fpr_of_double_transposition_on_points() {
        let (g, table, h) = a5_with_a4();
        let two = class_of_order(&table, 2);
        let rec = exact_fpr(&g, &table, two, &h, 1000).unwrap();
        assert_eq!(rec.class_meet, 3);
        assert_eq!(rec.fpr, BigRational::new(1.into(), 5.into()));
        assert!(rec.cross_checked);
    }

    #[test]
    fn fpr_identity_and_disjoint() {
        let (g, table, h) = a5_with_a4();
        let one = class_of_order(&table, 1);
        assert_eq!(exact_fpr(&g, &table, one, &h, 1000).unwrap().fpr, BigRational::new(1.into(), 1.into()));
        let five = class_of_order(&table, 5);
        assert_eq!(exact_fpr(&g, &table, five, &h, 1000).unwrap().class_meet, 0);
    }

    #[test]
    fn overgroup_count_examples() {
        let (g, table, h) = a5_with_a4();
        let two = class_of_order(&table, 2);
        assert_eq!(overgroup_count(&g, &table, two, &h).unwrap(), 1);
        let one = class_of_order(&table, 1);
        assert_eq!(overgroup_count(&g, &table, one, &h).unwrap(), 5);
        let five = class_of_order(&table, 5);
        assert_eq!(overgroup_count(&g, &table, five, &h).unwrap(), 0);
    }

    #[test]
    fn non_self_normalizing_rejected() {
        let g = build("atlas:S6").unwrap().full;
        let table = conjugacy_classes(&g, 720).unwrap();
        // A6 is normal in S6
        let a6 = build("atlas:S6").unwrap().base;
        let h = SubgroupHandle::new("socle", a6);
        let two = (0..table.len()).find(|&i| table.classes[i].element_order == 2).unwrap();
        assert!(matches!(
            overgroup_count(&g, &table, two, &h),
            Err(Error::NotSelfNormalizing)
        ));
        // the multiplicity route handles normal subgroups fine: one class
        assert_eq!(overgroup_multiplicity(&g, &table, two, &h).unwrap() <= 1, true);
    }

    #[test]
    fn exact_p_on_a5() {
        let g = build("atlas:A5").unwrap().full;
        let table = conjugacy_classes(&g, 60).unwrap();
        let five = class_of_order(&table, 5);
        let three = class_of_order(&table, 3);
        let p = exact_p(&g, &table, three, five, 1000).unwrap();
        // brute force over the 12-element class
        let members = table.members(five, g.gens());
        let x = &table.classes[three].rep;
        let fails = members
            .iter()
            .filter(|z| !g.is_generating(&[x.clone(), (*z).clone()]).unwrap())
            .count();
        assert_eq!(p, BigRational::new((fails as u64).into(), 12.into()));
    }

    #[test]
    fn transversal_of_a4_in_a5() {
        let (g, _, h) = a5_with_a4();
        let t = coset_transversal(&g, &h.group, 100).unwrap();
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn profile_matches_single_class_routes() {
        let (g, table, h) = a5_with_a4();
        let p = overgroup_profile(&g, &table, &h, 1000).unwrap();
        assert!(p.cross_checked);
        assert_eq!(p.conjugate_classes, 5);
        for cid in 0..table.len() {
            let rec = exact_fpr(&g, &table, cid, &h, 1000).unwrap();
            assert_eq!(p.meets[cid], rec.class_meet);
            assert_eq!(p.fpr(&table, cid), rec.fpr);
            assert_eq!(p.mults[cid], overgroup_multiplicity(&g, &table, cid, &h).unwrap());
        }
    }
}
