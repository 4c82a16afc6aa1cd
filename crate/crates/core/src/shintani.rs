//! Empirical checks of the finite consequences of Shintani descent.
//!
//! The descent bijection between T-classes of the coset T*theta and classes
//! of the fixed-point group over the small field is never computed here —
//! it lives in the algebraic group.  What it implies about finite data is
//! checked exactly: equal class counts, equal centralizer-order multisets,
//! the e-th power order profile, fixed-subspace count profiles, the
//! similarity-norm identity, and the orthogonal-overgroup count
//! correspondence in even characteristic.  Every statistic is computed
//! independently on both sides and compared as a sorted multiset, so no
//! verdict depends on how classes happen to be paired up.

use std::sync::Arc;

use crate::conjtab::{coset_classes, pair_by_key, ClassTable};
use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::grpzoo::forms::{enumerate_quadforms, similarity_tau};
use crate::grpzoo::matrix::MatF;
use crate::grpzoo::semilinear::SemilinearMap;
use crate::grpzoo::zoo::{matrix_witnesses, ZooGroup};
use crate::permcore::{Perm, PermGroup};

/// Sorted multiset of centralizer orders |C_T(t*theta)| over coset classes
/// (or plain centralizer orders when the table is an ordinary one).
pub fn centralizer_profile(table: &ClassTable) -> Vec<u128> {
    let mut v = table.centralizer_orders();
    v.sort_unstable();
    v
}

/// Sorted multiset of element orders of (t*theta)^e over coset class
/// representatives.  For an ordinary table use e = 1.
pub fn epower_order_profile(table: &ClassTable, e: u32) -> Vec<u64> {
    let mut v: Vec<u64> =
        table.classes.iter().map(|c| c.rep.power(e as i64).order()).collect();
    v.sort_unstable();
    v
}

/// Sorted multiset of fixed-point counts of class representatives on the
/// permutation domain.  For the shipped symplectic groups the domain is the
/// projective space, so this is the fixed count on totally isotropic
/// 1-spaces — the representative already acts as t*theta on a coset table.
pub fn fixed_point_profile(table: &ClassTable) -> Vec<u64> {
    let mut v: Vec<u64> = table.classes.iter().map(|c| fixed_points(&c.rep)).collect();
    v.sort_unstable();
    v
}

fn fixed_points(p: &Perm) -> u64 {
    (0..p.degree() as u16).filter(|&i| p.apply(i) == i).count() as u64
}

/// Sorted multiset of counts of blocks fixed setwise by each class
/// representative; used with the totally isotropic lines of a 4-dimensional
/// symplectic space as blocks.
pub fn fixed_block_profile(table: &ClassTable, blocks: &[Vec<u16>]) -> Vec<u64> {
    let mut v: Vec<u64> = table
        .classes
        .iter()
        .map(|c| {
            blocks
                .iter()
                .filter(|b| {
                    let mut img: Vec<u16> = b.iter().map(|&x| c.rep.apply(x)).collect();
                    img.sort_unstable();
                    img == **b
                })
                .count() as u64
        })
        .collect();
    v.sort_unstable();
    v
}

/// Norm from GF(q0^e) down to GF(q0): x -> x^(1 + q0 + .. + q0^(e-1)).
pub fn field_norm(field: &Arc<FieldSpec>, e: u32, x: FieldElem) -> Result<FieldElem> {
    if field.f() % e != 0 {
        return Err(Error::NotASubfield { sub: e as u64, big: field.f() as u64 });
    }
    let q0 = (field.p() as u64).pow(field.f() / e);
    let mut exp: u64 = 0;
    let mut t = 1u64;
    for _ in 0..e {
        exp += t;
        t *= q0;
    }
    let mut acc = field.one();
    let mut base = x;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = field.mul(acc, base);
        }
        base = field.mul(base, base);
        exp >>= 1;
    }
    Ok(acc)
}

fn is_square(field: &Arc<FieldSpec>, x: FieldElem) -> bool {
    field.elems().any(|y| field.mul(y, y) == x)
}

/// tau((g*sigma)^e) = N(tau(g)) for a similarity g of the form and sigma the
/// field automorphism of order e.  The e-th power of the semilinear map is
/// linear again and its similarity scalar must be the norm of tau(g).
pub fn similarity_norm_identity(gs: &SemilinearMap, gram: &MatF, e: u32) -> Result<bool> {
    let field = gs.mat().field();
    if e == 0 || field.f() % e != 0 {
        return Err(Error::UnsupportedCase(format!("no automorphism of order {e} here")));
    }
    let tau_g = similarity_tau(gs.mat(), gram)?;
    let pe = gs.pow(e as i64);
    let lin = pe.linear_part_only()?;
    let lhs = similarity_tau(lin, gram)?;
    Ok(lhs == field_norm(field, e, tau_g)?)
}

/// The norm respects squareness: exhaustive over the multiplicative group.
pub fn norm_square_coherence(field: &Arc<FieldSpec>, e: u32) -> Result<()> {
    for x in field.elems() {
        if x == field.zero() {
            continue;
        }
        let n = field_norm(field, e, x)?;
        if is_square(field, x) != is_square_in_subfield(field, e, n)? {
            return Err(Error::HypothesisViolated(format!(
                "norm changes squareness at element {:?}",
                x
            )));
        }
    }
    Ok(())
}

fn is_square_in_subfield(field: &Arc<FieldSpec>, e: u32, n: FieldElem) -> Result<bool> {
    // squareness within the norm's target field: a square root that itself
    // lies in the subfield (y is there iff y^(q0) = y)
    let steps = field.f() / e;
    for y in field.elems() {
        let mut t = y;
        for _ in 0..steps {
            t = pow_p(field, t);
        }
        if t == y && field.mul(y, y) == n {
            return Ok(true);
        }
    }
    Ok(false)
}

fn pow_p(field: &Arc<FieldSpec>, x: FieldElem) -> FieldElem {
    let mut acc = x;
    for _ in 1..field.p() {
        acc = field.mul(acc, x);
    }
    acc
}

/// Per class, the number of quadratic forms polarizing to the group's
/// symplectic form that the class representative stabilizes, split by type:
/// (plus count, minus count).  Witnesses come from a lockstep matrix walk.
pub fn orthogonal_form_counts(
    gram: &Arc<MatF>,
    witnesses: &[SemilinearMap],
) -> Result<Vec<(u64, u64)>> {
    let forms = enumerate_quadforms(gram)?;
    let mut eps = Vec::with_capacity(forms.len());
    for q in &forms {
        eps.push(q.epsilon()?);
    }
    let mut out = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let mut plus = 0u64;
        let mut minus = 0u64;
        for (q, &s) in forms.iter().zip(&eps) {
            if q.act(w)?.key() == q.key() {
                if s == 1 {
                    plus += 1;
                } else {
                    minus += 1;
                }
            }
        }
        out.push((plus, minus));
    }
    Ok(out)
}

/// One verdict line of a correspondence report.
pub struct Verdict {
    pub statistic: &'static str,
    pub matched: bool,
    pub detail: String,
}

pub struct CorrespondenceReport {
    pub big: String,
    pub small: String,
    pub e: u32,
    pub verdicts: Vec<Verdict>,
    /// Whether the abstract-key pairing between the two class lists is a
    /// perfect matching (reported, never used for the verdicts).
    pub pairing_perfect: bool,
}

impl CorrespondenceReport {
    pub fn all_match(&self) -> bool {
        self.verdicts.iter().all(|v| v.matched)
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        t.push_str(&format!("shintani.big = {}\n", self.big));
        t.push_str(&format!("shintani.small = {}\n", self.small));
        t.push_str(&format!("shintani.e = {}\n", self.e));
        for v in &self.verdicts {
            t.push_str(&format!(
                "shintani.{} = {} ({})\n",
                v.statistic,
                if v.matched { "match" } else { "MISMATCH" },
                v.detail
            ));
        }
        t.push_str(&format!("shintani.pairing = {}\n", if self.pairing_perfect { "perfect" } else { "ambiguous" }));
        t
    }
}

fn multiset_verdict<T: Ord + std::fmt::Debug>(
    statistic: &'static str,
    big: Vec<T>,
    small: Vec<T>,
) -> Verdict {
    let matched = big == small;
    let detail = if matched {
        format!("{} values", big.len())
    } else {
        format!("big {:?} vs small {:?}", big, small)
    };
    Verdict { statistic, matched, detail }
}

/// Compare the theta-coset of a zoo group against a small-side group through
/// every implemented statistic.  `blocks` optionally adds the fixed-count
/// profile on a block system (isotropic lines); `orthogonal` adds the
/// O±-overgroup count correspondence (even characteristic only).
pub fn verify_correspondence(
    big: &ZooGroup,
    small: &ZooGroup,
    budget: u128,
    blocks: Option<(&[Vec<u16>], &[Vec<u16>])>,
    orthogonal: bool,
    seed: u64,
) -> Result<CorrespondenceReport> {
    let theta = big.theta.as_ref().ok_or(Error::UnsupportedCase("big side needs a coset".into()))?;
    let e = {
        // order of theta modulo the inner group
        let mut k = 1u32;
        let mut pw = theta.clone();
        while !big.base.contains(&pw) {
            pw = pw.compose(theta);
            k += 1;
        }
        k
    };
    let coset = coset_classes(&big.base, theta, budget)?;
    let small_table = crate::conjtab::conjugacy_classes(&small.full, budget)?;

    let mut verdicts = Vec::new();
    verdicts.push(Verdict {
        statistic: "class-count",
        matched: coset.len() == small_table.len(),
        detail: format!("{} vs {}", coset.len(), small_table.len()),
    });
    verdicts.push(multiset_verdict(
        "centralizer-orders",
        centralizer_profile(&coset),
        centralizer_profile(&small_table),
    ));
    verdicts.push(multiset_verdict(
        "epower-orders",
        epower_order_profile(&coset, e),
        epower_order_profile(&small_table, 1),
    ));
    verdicts.push(multiset_verdict(
        "fixed-isotropic-1-spaces",
        fixed_point_profile(&coset),
        fixed_point_profile(&small_table),
    ));
    if let Some((bb, sb)) = blocks {
        verdicts.push(multiset_verdict(
            "fixed-isotropic-2-spaces",
            fixed_block_profile(&coset, bb),
            fixed_block_profile(&small_table, sb),
        ));
    }
    if orthogonal {
        let bm = big.mats.as_ref().ok_or(Error::UnsupportedCase("matrix side required".into()))?;
        if bm.field().p() != 2 {
            return Err(Error::OddCharacteristic);
        }
        let big_wit = matrix_witnesses(big, &coset, true, seed, 4_000_000)?;
        let small_wit = matrix_witnesses(small, &small_table, false, seed, 4_000_000)?;
        let bgram = Arc::new(crate::grpzoo::forms::standard_symplectic_gram(
            bm.field(),
            bm.dim() / 2,
        ));
        let sm = small.mats.as_ref().ok_or(Error::UnsupportedCase("matrix side required".into()))?;
        let sgram = Arc::new(crate::grpzoo::forms::standard_symplectic_gram(
            sm.field(),
            sm.dim() / 2,
        ));
        let bc = orthogonal_form_counts(&bgram, &big_wit)?;
        let sc = orthogonal_form_counts(&sgram, &small_wit)?;
        let min_total = bc.iter().map(|&(p, m)| p + m).min().unwrap_or(0);
        // The correspondence preserves the total count of orthogonal-type
        // overgroups, not the plus/minus split: a form of minus type over the
        // subfield acquires plus type over the extension (its anisotropic
        // summand splits), so only the totals are comparable across the sides.
        let mut bt: Vec<u64> = bc.iter().map(|&(p, m)| p + m).collect();
        let mut st: Vec<u64> = sc.iter().map(|&(p, m)| p + m).collect();
        bt.sort_unstable();
        st.sort_unstable();
        let matched = bt == st;
        let detail = if matched {
            format!("totals {:?}; big split {:?}, small split {:?}", bt, bc, sc)
        } else {
            format!("big {:?} vs small {:?}", bt, st)
        };
        verdicts.push(Verdict { statistic: "orthogonal-overgroup-counts", matched, detail });
        verdicts.push(Verdict {
            statistic: "orthogonal-min-count",
            matched: min_total >= 1,
            detail: format!("minimum {}", min_total),
        });
    }
    // Coset classes are keyed by their e-th power: the descent sends a coset
    // element to something with the order profile of that power, so the raw
    // element order of t*theta is not comparable with small-side orders.
    let kb: Vec<_> = coset
        .classes
        .iter()
        .map(|c| {
            let pe = c.rep.power(e as i64);
            let (o, sig) = crate::conjtab::power_signature(&pe);
            (o, c.centralizer_order, sig)
        })
        .collect();
    let ks: Vec<_> = small_table.classes.iter().map(|c| c.abstract_key()).collect();
    let pairing = pair_by_key(&kb, &ks);
    // Equal key multisets is the checkable consequence; a perfect matching is
    // impossible whenever the small side itself has colliding keys (Sp4(2)
    // does: two classes of order 3 share centralizer order 18).
    verdicts.push(Verdict {
        statistic: "pairing-keys",
        matched: pairing.mismatched.is_empty(),
        detail: format!(
            "{} matched one-to-one, {} ambiguous, {} mismatched",
            pairing.matched.len(),
            pairing.ambiguous.len(),
            pairing.mismatched.len()
        ),
    });
    Ok(CorrespondenceReport {
        big: big.name.clone(),
        small: small.name.clone(),
        e,
        verdicts,
        pairing_perfect: pairing.is_perfect(),
    })
}

pub struct SzReport {
    /// Involutions found outside the target index-two subgroup, by class.
    pub outer_involution_classes: usize,
    /// Fixed-subgroup orders, one per outer involution class.
    pub fix_orders: Vec<u128>,
    /// Some class fixes a Frobenius group of order 20 = Sz(2).
    pub sz2_found: bool,
    /// Element orders of that fixed subgroup.
    pub sz2_element_orders: Vec<u64>,
}

/// The graph-type outer involution of Sp4(2) fixes Sz(2), the Frobenius
/// group of order 20.  Sp4(2) is realized as the S6 inside PGammaL2(9) (its
/// full automorphism group on ten points); every outer involution class is
/// swept and the fixed subgroup computed exhaustively.
pub fn sz_fixed_subgroup_check() -> Result<SzReport> {
    let fam = crate::grpzoo::atlas::a6_family()?;
    let g = &fam.gamma;
    let s6 = &fam.s6;
    let elements = g.elements_budgeted(2000)?;
    let s6_elems: Vec<Perm> =
        elements.iter().filter(|x| s6.contains(x)).cloned().collect();
    if s6_elems.len() != 720 {
        return Err(Error::OrderMismatch { expected: 720, computed: s6_elems.len() as u128 });
    }
    // outer involutions up to S6-conjugacy
    let mut seen: std::collections::HashSet<Vec<u8>> = std::collections::HashSet::new();
    let mut fix_orders = Vec::new();
    let mut sz2_found = false;
    let mut sz2_element_orders = Vec::new();
    for tau in &elements {
        if tau.order() != 2 || s6.contains(tau) || seen.contains(&tau.canonical_bytes()) {
            continue;
        }
        // mark the whole S6-class of tau
        let mut orbit = vec![tau.clone()];
        seen.insert(tau.canonical_bytes());
        let mut i = 0;
        while i < orbit.len() {
            for s in s6.gens() {
                let y = orbit[i].conj(s);
                if seen.insert(y.canonical_bytes()) {
                    orbit.push(y);
                }
            }
            i += 1;
        }
        let fixed: Vec<Perm> = s6_elems
            .iter()
            .filter(|x| x.compose(tau) == tau.compose(x))
            .cloned()
            .collect();
        let fix = PermGroup::new(g.degree(), fixed.clone());
        if fix.order() != fixed.len() as u128 {
            return Err(Error::OrderMismatch {
                expected: fixed.len() as u128,
                computed: fix.order(),
            });
        }
        fix_orders.push(fix.order());
        if fix.order() == 20 {
            let mut orders: Vec<u64> = fixed.iter().map(|x| x.order()).collect();
            orders.sort_unstable();
            let order5 = orders.iter().filter(|&&o| o == 5).count();
            let abelian = fixed
                .iter()
                .all(|a| fixed.iter().all(|b| a.compose(b) == b.compose(a)));
            // Frobenius group of order 20: orders 1,2,4,5, a unique (hence
            // normal) Sylow 5-subgroup, nonabelian
            if orders.iter().all(|o| [1, 2, 4, 5].contains(o)) && order5 == 4 && !abelian {
                sz2_found = true;
                sz2_element_orders = orders;
            }
        }
    }
    fix_orders.sort_unstable();
    Ok(SzReport {
        outer_involution_classes: fix_orders.len(),
        fix_orders,
        sz2_found,
        sz2_element_orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjtab::conjugacy_classes;
    use crate::grpzoo::zoo::build;

    #[test]
    fn degenerate_profiles_on_one_group() {
        // theta = identity coset: coset classes are plain classes
        let z = build("zoo:Sp4(2)").unwrap();
        let t = conjugacy_classes(&z.full, 1000).unwrap();
        assert_eq!(epower_order_profile(&t, 1).last(), Some(&6));
        assert_eq!(centralizer_profile(&t).len(), t.len());
    }

    #[test]
    fn norm_identity_field_level() {
        let f9 = Arc::new(FieldSpec::make(3, 2, None).unwrap());
        norm_square_coherence(&f9, 2).unwrap();
        let f27 = Arc::new(FieldSpec::make(3, 3, None).unwrap());
        norm_square_coherence(&f27, 3).unwrap();
        // norms land in the subfield and hit the right values
        let x = f9.generator();
        let n = field_norm(&f9, 2, x).unwrap();
        // generator of GF(9)* has order 8, its norm x^4 has order 2
        assert_eq!(f9.mul(n, n), f9.one());
        assert_ne!(n, f9.one());
    }

    #[test]
    fn similarity_norm_identity_random_gsp4_9() {
        use rand::{Rng, SeedableRng};
        let f9 = Arc::new(FieldSpec::make(3, 2, None).unwrap());
        let mats = crate::grpzoo::classical::gsp(&f9, 2).unwrap();
        let gram = crate::grpzoo::forms::standard_symplectic_gram(&f9, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        // random words in the generators, wrapped with the Frobenius
        let mut cur = MatF::identity(&f9, 4);
        for i in 0..500 {
            let k = rng.gen_range(0..mats.gens().len());
            cur = cur.mul(mats.gens()[k].linear_part_only().unwrap());
            let gs = SemilinearMap::new(cur.clone(), 1);
            assert!(
                similarity_norm_identity(&gs, &gram, 2).unwrap(),
                "failed at sample {i}"
            );
        }
    }

    #[test]
    fn sz2_inside_sp42() {
        let rep = sz_fixed_subgroup_check().unwrap();
        assert!(rep.sz2_found, "fix orders seen: {:?}", rep.fix_orders);
        assert_eq!(rep.sz2_element_orders.first(), Some(&1));
        assert!(rep.outer_involution_classes >= 1);
    }

    #[test]
    fn sp44_phi_vs_sp42_full_report() {
        let big = build("zoo:Sp4(4):phi").unwrap();
        let small = build("zoo:Sp4(2)").unwrap();
        let big_lines = crate::subfpr::isotropic_lines(&big).unwrap();
        let small_lines = crate::subfpr::isotropic_lines(&small).unwrap();
        let rep = verify_correspondence(
            &big,
            &small,
            1_000_000,
            Some((&big_lines, &small_lines)),
            true,
            7,
        )
        .unwrap();
        eprintln!("{}", rep.to_text());
        assert!(rep.all_match(), "{}", rep.to_text());
        // Sp4(2) has colliding (order, centralizer, signature) keys -- two
        // classes of order 3 with centralizer order 18, among others -- so a
        // one-to-one pairing cannot exist; the key multisets still agree.
        assert!(!rep.pairing_perfect);
        assert_eq!(rep.e, 2);
    }
}
