//! Spread and uniform spread of a finite group, exact for small orders.
//!
//! Everything runs through a dual view.  For a nontrivial element x let
//! B(x) = { z : <x, z> != G } be its blocker set.  A tuple (x_1, .., x_k)
//! admits a common generating partner z unless the B(x_i) jointly cover the
//! candidate set, so
//!
//!   s(G) = (minimum number of blocker sets covering G \ 1) - 1
//!   u(G) = max over classes C of (minimum cover of C) - 1
//!
//! and a minimum cover is itself the witness: an unbeatable tuple one past
//! the spread.  Only prime-order anchors matter, since <x^j, z> <= <x, z>
//! means replacing x by a prime-order power enlarges its blocker set.
//!
//! Blocker sets are computed once per prime-order class representative and
//! transported along the conjugation orbit: B(x^g) = B(x)^g.

mod certify;
mod graph;

pub use certify::{
    certify_uniform_spread, parse_certificate, Certificate, CertifyConfig, ReplayHeader, Verdict,
};
pub use graph::{generating_graph, GeneratingGraph};

use std::collections::HashMap;

use crate::conjtab::{conjugacy_classes, ClassTable};
use crate::error::{Error, Result};
use crate::ffield::{is_prime, prime_factors};
use crate::permcore::{Perm, PermGroup};

/// Order cap for the exhaustive routines in this module.
pub const EXACT_ORDER_CAP: u128 = 2000;

/// Smallest-prime power of x: x^(n/r) where r is the least prime dividing
/// the order n of x.  Blocker sets only grow under this reduction.
pub fn reduce_to_prime_order(x: &Perm) -> Result<Perm> {
    let n = x.order();
    if n == 1 {
        return Err(Error::IdentityInput);
    }
    let r = prime_factors(n as u128).into_iter().min().unwrap() as u64;
    Ok(x.power((n / r) as i64))
}

/// One prime-order anchor x together with the universe indices it blocks.
pub struct Blocker {
    pub anchor: Perm,
    /// Sorted indices i with <anchor, universe[i]> != G.
    pub blocked: Vec<u32>,
}

pub struct BlockerFamily {
    /// Candidate partners z, in the order the caller supplied them.
    pub universe: Vec<Perm>,
    /// One blocker per prime-order cyclic subgroup of G.
    pub blockers: Vec<Blocker>,
}

/// Blocker sets of every prime-order cyclic subgroup of `g`, against the
/// given universe of candidate partners.  The universe must be closed under
/// conjugation (a union of classes), since representatives are computed
/// once per class and transported.
pub fn blocker_sets(g: &PermGroup, universe: &[Perm]) -> Result<BlockerFamily> {
    if g.order() > EXACT_ORDER_CAP {
        return Err(Error::BudgetExceeded(format!(
            "blocker sets need |G| <= {}, got {}",
            EXACT_ORDER_CAP,
            g.order()
        )));
    }
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    for (i, z) in universe.iter().enumerate() {
        index.insert(z.canonical_bytes(), i as u32);
    }
    let table = conjugacy_classes(g, EXACT_ORDER_CAP)?;
    let mut blockers: Vec<Blocker> = Vec::new();
    for class in &table.classes {
        let r = class.element_order;
        if !is_prime(r) {
            continue;
        }
        let orbit = g.conj_orbit_with_stabilizer(&class.rep)?;
        // blocked set of the representative, by direct closure tests
        let mut base: Vec<u32> = Vec::new();
        for (i, z) in universe.iter().enumerate() {
            if !g.is_generating(&[class.rep.clone(), z.clone()])? {
                base.push(i as u32);
            }
        }
        // one blocker per cyclic subgroup: powers of x give the same
        // two-generator subgroups, hence the same blocked set
        let mut seen_cyclic: std::collections::HashSet<Vec<u8>> = std::collections::HashSet::new();
        for m in 0..orbit.size() {
            let x = orbit.member(m);
            let mut least = x.canonical_bytes();
            let mut p = x.clone();
            for _ in 2..r {
                p = p.compose(&x);
                let b = p.canonical_bytes();
                if b < least {
                    least = b;
                }
            }
            if !seen_cyclic.insert(least) {
                continue;
            }
            // transport: B(x^c) = B(x)^c
            let c = &orbit.conjugator[m];
            let mut blocked: Vec<u32> = Vec::with_capacity(base.len());
            for &i in &base {
                let zc = universe[i as usize].conj(c);
                let j = index
                    .get(&zc.canonical_bytes())
                    .ok_or(Error::NotInUnderlyingSet)?;
                blocked.push(*j);
            }
            blocked.sort_unstable();
            blockers.push(Blocker { anchor: x, blocked });
        }
    }
    blockers.sort_by(|a, b| a.anchor.canonical_bytes().cmp(&b.anchor.canonical_bytes()));
    Ok(BlockerFamily { universe: universe.to_vec(), blockers })
}

// ---------------------------------------------------------------------------
// minimum set cover, exact branch and bound on bitsets

fn words(n: usize) -> usize {
    (n + 63) / 64
}

fn bit_set(w: &mut [u64], i: u32) {
    w[(i / 64) as usize] |= 1u64 << (i % 64);
}

fn bit_get(w: &[u64], i: u32) -> bool {
    w[(i / 64) as usize] >> (i % 64) & 1 == 1
}

fn popcount(w: &[u64]) -> u32 {
    w.iter().map(|x| x.count_ones()).sum()
}

/// covered |= set, returning how many target bits are still missing
fn or_into(covered: &mut [u64], set: &[u64]) {
    for (c, s) in covered.iter_mut().zip(set) {
        *c |= s;
    }
}

fn missing(covered: &[u64], target: &[u64]) -> u32 {
    covered.iter().zip(target).map(|(c, t)| (t & !c).count_ones()).sum()
}

struct CoverSearch<'a> {
    sets: &'a [Vec<u64>],
    target: &'a [u64],
    /// set ids covering each bit of the target
    covering: Vec<Vec<u32>>,
    max_gain: u32,
    best: Option<Vec<u32>>,
}

impl<'a> CoverSearch<'a> {
    fn run(sets: &'a [Vec<u64>], nbits: usize, target: &'a [u64]) -> Option<Vec<u32>> {
        let mut covering: Vec<Vec<u32>> = vec![Vec::new(); nbits];
        for (s, set) in sets.iter().enumerate() {
            for i in 0..nbits as u32 {
                if bit_get(target, i) && bit_get(set, i) {
                    covering[i as usize].push(s as u32);
                }
            }
        }
        // some target bit blocked by nobody: no cover at all
        for i in 0..nbits as u32 {
            if bit_get(target, i) && covering[i as usize].is_empty() {
                return None;
            }
        }
        let max_gain = sets.iter().map(|s| popcount(s)).max().unwrap_or(0).max(1);
        let mut search = CoverSearch { sets, target, covering, max_gain, best: None };
        // greedy first, to seed the bound
        search.greedy(nbits);
        let mut covered = vec![0u64; words(nbits)];
        let mut chosen = Vec::new();
        search.dfs(&mut covered, &mut chosen, nbits);
        search.best
    }

    fn greedy(&mut self, nbits: usize) {
        let mut covered = vec![0u64; words(nbits)];
        let mut chosen: Vec<u32> = Vec::new();
        while missing(&covered, self.target) > 0 {
            let (bi, _) = self
                .sets
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let gain: u32 = s
                        .iter()
                        .zip(covered.iter().zip(self.target))
                        .map(|(sw, (cw, tw))| (sw & !cw & tw).count_ones())
                        .sum();
                    (i, gain)
                })
                .max_by_key(|&(i, gain)| (gain, std::cmp::Reverse(i)))
                .unwrap();
            or_into(&mut covered, &self.sets[bi]);
            chosen.push(bi as u32);
        }
        self.best = Some(chosen);
    }

    fn dfs(&mut self, covered: &mut Vec<u64>, chosen: &mut Vec<u32>, nbits: usize) {
        let miss = missing(covered, self.target);
        if miss == 0 {
            if self.best.as_ref().map_or(true, |b| chosen.len() < b.len()) {
                self.best = Some(chosen.clone());
            }
            return;
        }
        let bound = chosen.len() as u32 + (miss + self.max_gain - 1) / self.max_gain;
        if let Some(best) = &self.best {
            if bound >= best.len() as u32 {
                return;
            }
        }
        // branch on the uncovered bit with the fewest candidate sets
        let mut pick = u32::MAX;
        let mut fewest = usize::MAX;
        for i in 0..nbits as u32 {
            if bit_get(self.target, i) && !bit_get(covered, i) && self.covering[i as usize].len() < fewest {
                fewest = self.covering[i as usize].len();
                pick = i;
            }
        }
        let mut cands: Vec<u32> = self.covering[pick as usize].clone();
        cands.sort_by_key(|&s| {
            let gain: u32 = self.sets[s as usize]
                .iter()
                .zip(covered.iter().zip(self.target))
                .map(|(sw, (cw, tw))| (sw & !cw & tw).count_ones())
                .sum();
            std::cmp::Reverse(gain)
        });
        for s in cands {
            let saved = covered.clone();
            or_into(covered, &self.sets[s as usize]);
            chosen.push(s);
            self.dfs(covered, chosen, nbits);
            chosen.pop();
            *covered = saved;
        }
    }
}

/// Drop duplicate blocker bitsets and sets contained in another set; a
/// minimum cover never needs a dominated set.  Returns (bitsets, original
/// blocker index of each survivor).
fn dominating_sets(family: &BlockerFamily, nbits: usize) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut sets: Vec<(Vec<u64>, usize)> = Vec::new();
    'outer: for (bi, b) in family.blockers.iter().enumerate() {
        let mut w = vec![0u64; words(nbits)];
        for &i in &b.blocked {
            bit_set(&mut w, i);
        }
        let mut j = 0;
        while j < sets.len() {
            let other = &sets[j].0;
            if w.iter().zip(other).all(|(a, b)| a & !b == 0) {
                continue 'outer; // w subset of an existing set
            }
            if other.iter().zip(&w).all(|(a, b)| a & !b == 0) {
                sets.swap_remove(j); // existing set dominated by w
            } else {
                j += 1;
            }
        }
        sets.push((w, bi));
    }
    sets.sort_by_key(|(_, bi)| *bi);
    sets.into_iter().unzip()
}

pub struct SpreadValue {
    /// None: no family of blocker sets covers the universe, so arbitrarily
    /// large tuples still have common partners (cyclic groups).
    pub value: Option<u64>,
    /// Anchors of a minimum cover, an unbeatable tuple of size value + 1.
    pub witness: Vec<Perm>,
}

/// Exact spread by minimum blocker cover of G \ 1.
pub fn exact_spread(g: &PermGroup) -> Result<SpreadValue> {
    if g.order() == 1 {
        return Err(Error::UnsupportedCase("spread of the trivial group".into()));
    }
    let universe: Vec<Perm> = g
        .elements_budgeted(EXACT_ORDER_CAP)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let family = blocker_sets(g, &universe)?;
    let nbits = universe.len();
    let mut target = vec![0u64; words(nbits)];
    for i in 0..nbits as u32 {
        bit_set(&mut target, i);
    }
    let (sets, back) = dominating_sets(&family, nbits);
    match CoverSearch::run(&sets, nbits, &target) {
        None => Ok(SpreadValue { value: None, witness: Vec::new() }),
        Some(cover) => Ok(SpreadValue {
            value: Some(cover.len() as u64 - 1),
            witness: cover.iter().map(|&s| family.blockers[back[s as usize]].anchor.clone()).collect(),
        }),
    }
}

pub struct UniformSpreadValue {
    /// None: some class is uncoverable, so the uniform spread is unbounded.
    pub value: Option<u64>,
    /// Class id (in the deterministic class table of g) achieving the max.
    pub class: usize,
    /// Minimum cover anchors of the best class: no tuple of this size has a
    /// common partner in that class, pinning the value from above.
    pub witness: Vec<Perm>,
    /// (min cover of class) - 1 for every nontrivial class, None meaning
    /// the class cannot be covered at all.
    pub per_class: Vec<(usize, Option<u64>)>,
}

/// Exact uniform spread: best single witnessing class.
pub fn exact_uniform_spread(g: &PermGroup) -> Result<UniformSpreadValue> {
    if g.order() == 1 {
        return Err(Error::UnsupportedCase("uniform spread of the trivial group".into()));
    }
    let universe: Vec<Perm> = g
        .elements_budgeted(EXACT_ORDER_CAP)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let family = blocker_sets(g, &universe)?;
    let table = conjugacy_classes(g, EXACT_ORDER_CAP)?;
    let nbits = universe.len();
    let class_of: Vec<usize> = universe.iter().map(|z| table.class_of(z).unwrap()).collect();
    let (sets, back) = dominating_sets(&family, nbits);

    let mut per_class: Vec<(usize, Option<u64>)> = Vec::new();
    let mut best: Option<(u64, usize, Vec<Perm>)> = None;
    let mut unbounded: Option<usize> = None;
    for cid in 0..table.len() {
        if table.classes[cid].element_order == 1 {
            continue;
        }
        let mut target = vec![0u64; words(nbits)];
        for i in 0..nbits as u32 {
            if class_of[i as usize] == cid {
                bit_set(&mut target, i);
            }
        }
        match CoverSearch::run(&sets, nbits, &target) {
            None => {
                per_class.push((cid, None));
                unbounded.get_or_insert(cid);
            }
            Some(cover) => {
                let v = cover.len() as u64 - 1;
                per_class.push((cid, Some(v)));
                if best.as_ref().map_or(true, |(b, _, _)| v > *b) {
                    let witness =
                        cover.iter().map(|&s| family.blockers[back[s as usize]].anchor.clone()).collect();
                    best = Some((v, cid, witness));
                }
            }
        }
    }
    if let Some(cid) = unbounded {
        return Ok(UniformSpreadValue { value: None, class: cid, witness: Vec::new(), per_class });
    }
    let (value, class, witness) = best.expect("nontrivial group has nontrivial classes");
    Ok(UniformSpreadValue { value: Some(value), class, witness, per_class })
}

// ---------------------------------------------------------------------------
// tuple representatives under simultaneous conjugation

pub struct TupleRep {
    pub classes: Vec<usize>,
    pub elems: Vec<Perm>,
    pub stab_order: u128,
}

/// Orbit representatives of ordered tuples (x_1, .., x_k) with x_i in the
/// prescribed classes, under simultaneous conjugation by g: fix x_1 to the
/// class representative, then split each further class into orbits of the
/// iterated centralizer.  The enumeration is exact — one representative per
/// orbit — and deterministic, with each representative the lexicographically
/// least member of its orbit at its level.
pub fn tuple_orbit_reps(g: &PermGroup, table: &ClassTable, multiset: &[usize]) -> Result<Vec<TupleRep>> {
    if multiset.is_empty() {
        return Err(Error::Config("empty tuple".into()));
    }
    let mut classes = multiset.to_vec();
    classes.sort_unstable();
    let first = &table.classes[classes[0]];
    let c0 = g.conj_orbit_with_stabilizer(&first.rep)?;
    let mut level: Vec<(Vec<Perm>, PermGroup)> = vec![(vec![first.rep.clone()], c0.centralizer)];
    for (li, &cid) in classes.iter().enumerate().skip(1) {
        let members = table.members(cid, g.gens());
        let mut next: Vec<(Vec<Perm>, PermGroup)> = Vec::new();
        for (tuple, stab) in &level {
            for rep in orbit_reps_under(stab, &members) {
                let mut t = tuple.clone();
                let new_stab = if li + 1 < classes.len() {
                    centralizer_in(stab, &rep)
                } else {
                    PermGroup::trivial(g.degree())
                };
                t.push(rep);
                next.push((t, new_stab));
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|(elems, stab)| TupleRep {
            classes: classes.clone(),
            elems,
            stab_order: stab.order(),
        })
        .collect())
}

/// Partition `members` into conjugation orbits of `sub` and return the
/// lexicographically least member of each orbit, in that order.
fn orbit_reps_under(sub: &PermGroup, members: &[Perm]) -> Vec<Perm> {
    let mut seen: HashMap<Vec<u8>, ()> = HashMap::with_capacity(members.len());
    let mut reps: Vec<Perm> = Vec::new();
    for m in members {
        if seen.contains_key(&m.canonical_bytes()) {
            continue;
        }
        let mut orbit = vec![m.clone()];
        seen.insert(m.canonical_bytes(), ());
        let mut least = m.clone();
        let mut least_bytes = m.canonical_bytes();
        let mut i = 0;
        while i < orbit.len() {
            for s in sub.gens() {
                let y = orbit[i].conj(s);
                let b = y.canonical_bytes();
                if !seen.contains_key(&b) {
                    seen.insert(b.clone(), ());
                    if b < least_bytes {
                        least_bytes = b;
                        least = y.clone();
                    }
                    orbit.push(y);
                }
            }
            i += 1;
        }
        reps.push(least);
    }
    reps.sort_by_key(|p| p.canonical_bytes());
    reps
}

/// Centralizer of y inside sub, by a Schreier walk of the conjugation orbit
/// of y under sub (y need not lie in sub).
fn centralizer_in(sub: &PermGroup, y: &Perm) -> PermGroup {
    use crate::permcore::StabChain;
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut orbit = vec![y.clone()];
    let mut conj = vec![Perm::identity(sub.degree())];
    index.insert(y.canonical_bytes(), 0);
    let mut chain = StabChain::new(sub.degree(), &[]);
    let mut i = 0;
    while i < orbit.len() {
        for g in sub.gens() {
            let z = orbit[i].conj(g);
            match index.get(&z.canonical_bytes()) {
                None => {
                    index.insert(z.canonical_bytes(), orbit.len());
                    conj.push(conj[i].compose(g));
                    orbit.push(z);
                }
                Some(&j) => {
                    let s = conj[i].compose(g).compose(&conj[j].inverse());
                    if !s.is_identity() && !chain.contains(&s) {
                        chain.extend(s);
                    }
                }
            }
        }
        i += 1;
    }
    let cent = PermGroup::new(sub.degree(), chain.strong_gens());
    debug_assert_eq!(cent.order() * orbit.len() as u128, sub.order());
    cent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::zoo::build;
    use crate::permcore::Perm;

    fn sym(n: u16) -> PermGroup {
        let cycle: Vec<u16> = (1..n).chain(std::iter::once(0)).collect();
        let transp: Vec<u16> = (0..n).map(|i| match i {
            0 => 1,
            1 => 0,
            _ => i,
        })
        .collect();
        PermGroup::new(n as usize, vec![
            Perm::from_images(cycle).unwrap(),
            Perm::from_images(transp).unwrap(),
        ])
    }

    fn cyclic(n: u16) -> PermGroup {
        let cycle: Vec<u16> = (1..n).chain(std::iter::once(0)).collect();
        PermGroup::new(n as usize, vec![Perm::from_images(cycle).unwrap()])
    }

    #[test]
    fn prime_order_reduction() {
        let g = sym(6);
        for p in g.elements_budgeted(720).unwrap() {
            if p.is_identity() {
                assert!(matches!(reduce_to_prime_order(&p), Err(Error::IdentityInput)));
                continue;
            }
            let r = reduce_to_prime_order(&p).unwrap();
            assert!(is_prime(r.order()));
            assert_eq!(p.order() % r.order(), 0);
        }
    }

    #[test]
    fn spread_of_s6_is_two() {
        let g = build("atlas:S6").unwrap().full;
        let s = exact_spread(&g).unwrap();
        assert_eq!(s.value, Some(2));
        assert_eq!(s.witness.len(), 3);
        // the witness really is unbeatable: no z works for all three anchors
        for z in g.elements_budgeted(2000).unwrap() {
            let beaten = s
                .witness
                .iter()
                .all(|x| g.is_generating(&[x.clone(), z.clone()]).unwrap());
            assert!(!beaten);
        }
    }

    #[test]
    fn uniform_spread_of_s6_is_zero() {
        let g = build("atlas:S6").unwrap().full;
        let u = exact_uniform_spread(&g).unwrap();
        assert_eq!(u.value, Some(0));
        assert_eq!(u.witness.len(), 1);
    }

    #[test]
    fn spread_of_a5() {
        let g = build("atlas:A5").unwrap().full;
        let s = exact_spread(&g).unwrap();
        let u = exact_uniform_spread(&g).unwrap();
        assert_eq!(u.value, Some(2));
        assert!(s.value.unwrap() >= u.value.unwrap());
    }

    #[test]
    fn cyclic_spread_unbounded() {
        let s = exact_spread(&cyclic(7)).unwrap();
        assert_eq!(s.value, None);
        let s6 = exact_spread(&cyclic(6)).unwrap();
        assert_eq!(s6.value, None);
    }

    #[test]
    fn transposition_pairs_of_s3_have_two_orbits() {
        let g = sym(3);
        let table = conjugacy_classes(&g, 10).unwrap();
        let transpositions = (0..table.len())
            .find(|&i| table.classes[i].element_order == 2)
            .unwrap();
        let reps = tuple_orbit_reps(&g, &table, &[transpositions, transpositions]).unwrap();
        assert_eq!(reps.len(), 2);
        // one orbit is the equal pair, the other the unequal pairs
        let equal: Vec<bool> = reps.iter().map(|t| t.elems[0] == t.elems[1]).collect();
        assert!(equal.contains(&true) && equal.contains(&false));
    }

    #[test]
    fn tuple_reps_cover_all_pairs() {
        // sum of orbit sizes |stab_1| / |stab_2| recovers |class|^2 / ..
        let g = build("atlas:A5").unwrap().full;
        let table = conjugacy_classes(&g, 60).unwrap();
        let five = (0..table.len())
            .find(|&i| table.classes[i].element_order == 5)
            .unwrap();
        let reps = tuple_orbit_reps(&g, &table, &[five, five]).unwrap();
        // orbits of C(x1) on the class partition it: sizes add up
        let c1 = g.conj_orbit_with_stabilizer(&table.classes[five].rep).unwrap();
        let total: u128 = reps
            .iter()
            .map(|t| {
                let cent = centralizer_in(&c1.centralizer, &t.elems[1]);
                c1.centralizer.order() / cent.order()
            })
            .sum();
        assert_eq!(total, table.classes[five].size as u128);
    }

    #[test]
    fn blocker_budget_enforced() {
        let g = build("zoo:Sp4(2)").unwrap().full;
        // 720 is fine; fake cap breach via PSp4(3)
        let big = build("zoo:PSp4(3)").unwrap().full;
        assert!(matches!(exact_spread(&big), Err(Error::BudgetExceeded(_))));
        assert!(exact_spread(&g).is_ok());
    }
}
