//! Permutation groups: lazily built stabilizer chains plus the orbit
//! algorithms (conjugation orbits with stabilizer harvesting, derived
//! subgroups, generation tests) shared by the rest of the crate.

use super::{Perm, StabChain};
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::HashMap;
use std::sync::OnceLock;

pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup { degree: self.degree, gens: self.gens.clone(), chain: OnceLock::new() }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, {} gens)", self.degree, self.gens.len())
    }
}

/// A conjugation orbit x^G together with the data harvested while computing
/// it: for each orbit member, a conjugating element from the representative,
/// and the stabilizer (= centralizer of x) assembled from Schreier
/// generators.
pub struct ConjOrbit {
    pub rep: Perm,
    /// canonical bytes -> orbit index
    pub index: HashMap<Vec<u8>, u32>,
    /// conjugator[i] carries rep to the i-th orbit member.
    pub conjugator: Vec<Perm>,
    pub centralizer: PermGroup,
}

impl ConjOrbit {
    pub fn size(&self) -> usize {
        self.conjugator.len()
    }
    pub fn member(&self, i: usize) -> Perm {
        self.rep.conj(&self.conjugator[i])
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> PermGroup {
        assert!(gens.iter().all(|g| g.degree() == degree), "generator degree mismatch");
        PermGroup { degree, gens, chain: OnceLock::new() }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.gens))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    /// Exactly uniform random element.
    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        self.chain().random_element(rng)
    }

    /// All elements; errors when the order exceeds `budget`.
    pub fn elements_budgeted(&self, budget: u128) -> Result<Vec<Perm>> {
        if self.order() > budget {
            return Err(Error::BudgetExceeded(format!(
                "group order {} exceeds element budget {budget}",
                self.order()
            )));
        }
        Ok(self.chain().elements())
    }

    /// Orbit of a domain point under the generators.
    pub fn point_orbit(&self, start: u16) -> Vec<u16> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![start];
        seen[start as usize] = true;
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.gens {
                let img = g.apply(orbit[i]);
                if !seen[img as usize] {
                    seen[img as usize] = true;
                    orbit.push(img);
                }
            }
            i += 1;
        }
        orbit
    }

    /// Domain orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree as u16 {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = self.point_orbit(start);
            for &p in &orbit {
                seen[p as usize] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Does `elems` generate this whole group? Membership of every element is
    /// required (error `ElementNotInGroup`). Cheap rejections (an orbit of
    /// the candidate subgroup that is properly contained in an orbit of the
    /// group) run first; the full order comparison is the source of truth.
    pub fn is_generating(&self, elems: &[Perm]) -> Result<bool> {
        for e in elems {
            if !self.contains(e) {
                return Err(Error::ElementNotInGroup);
            }
        }
        let sub = PermGroup::new(self.degree, elems.to_vec());
        // orbit refinement check on each group orbit
        let mut seen = vec![false; self.degree];
        for start in 0..self.degree as u16 {
            if seen[start as usize] {
                continue;
            }
            let big = self.point_orbit(start);
            for &p in &big {
                seen[p as usize] = true;
            }
            if sub.point_orbit(start).len() < big.len() {
                return Ok(false);
            }
        }
        Ok(sub.order() == self.order())
    }

    /// Conjugation orbit of x with Schreier-generator centralizer.
    /// The centralizer chain is exact: |orbit| * |centralizer| = |G|.
    pub fn conj_orbit_with_stabilizer(&self, x: &Perm) -> Result<ConjOrbit> {
        if !self.contains(x) {
            return Err(Error::ElementNotInGroup);
        }
        let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut members: Vec<Perm> = vec![x.clone()];
        let mut conjugator: Vec<Perm> = vec![Perm::identity(self.degree)];
        index.insert(x.canonical_bytes(), 0);
        let mut cent = StabChain::new(self.degree, &[]);
        let mut i = 0;
        while i < members.len() {
            for g in &self.gens {
                let y = members[i].conj(g);
                let key = y.canonical_bytes();
                match index.get(&key) {
                    None => {
                        let id = members.len() as u32;
                        index.insert(key, id);
                        conjugator.push(conjugator[i].compose(g));
                        members.push(y);
                    }
                    Some(&j) => {
                        // Schreier generator of the stabilizer of x
                        let s = conjugator[i].compose(g).compose(&conjugator[j as usize].inverse());
                        if !s.is_identity() && !cent.contains(&s) {
                            cent.extend(s);
                        }
                    }
                }
            }
            i += 1;
        }
        let centralizer = PermGroup::new(self.degree, cent.strong_gens());
        Ok(ConjOrbit { rep: x.clone(), index, conjugator, centralizer })
    }

    /// Derived subgroup as the normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut chain = StabChain::new(self.degree, &[]);
        let mut pending: Vec<Perm> = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() && !chain.contains(&c) {
                    chain.extend(c.clone());
                    pending.push(c);
                }
            }
        }
        while let Some(d) = pending.pop() {
            for g in &self.gens {
                let dg = d.conj(g);
                if !chain.contains(&dg) {
                    chain.extend(dg.clone());
                    pending.push(dg);
                }
            }
        }
        PermGroup::new(self.degree, chain.strong_gens())
    }

    /// Normal closure of the given elements in this group.
    pub fn normal_closure(&self, seeds: &[Perm]) -> PermGroup {
        let mut chain = StabChain::new(self.degree, &[]);
        let mut pending: Vec<Perm> = Vec::new();
        for s in seeds {
            if !s.is_identity() && !chain.contains(s) {
                chain.extend(s.clone());
                pending.push(s.clone());
            }
        }
        while let Some(d) = pending.pop() {
            for g in &self.gens {
                let dg = d.conj(g);
                if !chain.contains(&dg) {
                    chain.extend(dg.clone());
                    pending.push(dg);
                }
            }
        }
        PermGroup::new(self.degree, chain.strong_gens())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> PermGroup {
        PermGroup::new(
            5,
            vec![
                Perm::parse_cycles(5, "(0 1 2)").unwrap(),
                Perm::parse_cycles(5, "(0 1 2 3 4)").unwrap(),
            ],
        )
    }

    fn s6() -> PermGroup {
        PermGroup::new(
            6,
            vec![
                Perm::parse_cycles(6, "(0 1)").unwrap(),
                Perm::parse_cycles(6, "(0 1 2 3 4 5)").unwrap(),
            ],
        )
    }

    #[test]
    fn orders() {
        assert_eq!(a5().order(), 60);
        assert_eq!(s6().order(), 720);
    }

    #[test]
    fn is_generating_examples() {
        let g = a5();
        let pair = vec![
            Perm::parse_cycles(5, "(0 1 2)").unwrap(),
            Perm::parse_cycles(5, "(0 1 2 3 4)").unwrap(),
        ];
        assert!(g.is_generating(&pair).unwrap());
        // two elements inside a point stabilizer cannot generate
        let stuck = vec![
            Perm::parse_cycles(5, "(1 2 3)").unwrap(),
            Perm::parse_cycles(5, "(1 2)(3 4)").unwrap(),
        ];
        assert!(!g.is_generating(&stuck).unwrap());
        // membership is part of the contract
        let outside = vec![Perm::parse_cycles(5, "(0 1)").unwrap()];
        assert!(matches!(g.is_generating(&outside), Err(Error::ElementNotInGroup)));
    }

    #[test]
    fn conj_orbit_and_centralizer_on_a5() {
        let g = a5();
        let five = Perm::parse_cycles(5, "(0 1 2 3 4)").unwrap();
        let orb = g.conj_orbit_with_stabilizer(&five).unwrap();
        assert_eq!(orb.size(), 12);
        assert_eq!(orb.centralizer.order(), 5);
        assert_eq!(orb.size() as u128 * orb.centralizer.order(), g.order());
        // conjugators actually carry the representative to each member
        for i in 0..orb.size() {
            let m = orb.member(i);
            assert_eq!(orb.index[&m.canonical_bytes()], i as u32);
        }
        let three = Perm::parse_cycles(5, "(0 1 2)").unwrap();
        let orb3 = g.conj_orbit_with_stabilizer(&three).unwrap();
        assert_eq!(orb3.size(), 20);
        assert_eq!(orb3.centralizer.order(), 3);
    }

    #[test]
    fn derived_subgroups() {
        let s = s6();
        let d = s.derived_subgroup();
        assert_eq!(d.order(), 360);
        // index check
        assert_eq!(s.order() / d.order(), 2);
        // A5 is perfect
        let a = a5();
        assert_eq!(a.derived_subgroup().order(), 60);
    }

    #[test]
    fn orbits_of_intransitive_group() {
        let g = PermGroup::new(
            6,
            vec![Perm::parse_cycles(6, "(0 1 2)").unwrap(), Perm::parse_cycles(6, "(3 4)").unwrap()],
        );
        let orbs = g.orbits();
        assert_eq!(orbs, vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn uniform_random_within_group() {
        use rand::SeedableRng;
        let g = a5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            assert!(g.contains(&g.random_element(&mut rng)));
        }
    }
}
