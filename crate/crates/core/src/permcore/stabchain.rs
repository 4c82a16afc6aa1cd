//! Deterministic Schreier-Sims construction of a base and strong generating
//! set. Completeness is certified by the construction itself: every Schreier
//! generator of every level sifts to the identity before the chain is
//! returned, so the reported order is exact.

use super::Perm;
use rand::Rng;
use std::collections::HashSet;

pub(crate) struct Level {
    pub base: u16,
    /// orbit[0] == base.
    pub orbit: Vec<u16>,
    /// position-in-orbit + 1 for each domain point, 0 if outside the orbit.
    pos: Vec<u32>,
    /// transversal[i] maps base to orbit[i]; transversal[0] is the identity.
    pub transversal: Vec<Perm>,
    pub gens: Vec<Perm>,
    /// (orbit position, generator index) pairs whose Schreier generator has
    /// been processed already.
    done: HashSet<(u32, u32)>,
}

impl Level {
    fn new(base: u16, degree: usize) -> Level {
        let mut pos = vec![0u32; degree];
        pos[base as usize] = 1;
        Level {
            base,
            orbit: vec![base],
            pos,
            transversal: vec![Perm::identity(degree)],
            gens: Vec::new(),
            done: HashSet::new(),
        }
    }
}

/// A stabilizer chain for the group generated by the permutations passed to
/// [`StabChain::new`].
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    order: u128,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain { degree, levels: Vec::new(), order: 1 };
        let mut pending: Vec<(usize, Perm)> = gens
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| (0usize, g.clone()))
            .collect();
        pending.reverse();
        chain.insert_all(pending);
        chain.order = chain.levels.iter().map(|l| l.orbit.len() as u128).product();
        chain
    }

    /// Extend the chain with one more generator (used by incremental
    /// algorithms such as centralizer harvesting). Keeps the chain complete.
    pub fn extend(&mut self, g: Perm) {
        debug_assert_eq!(g.degree(), self.degree);
        if self.sift(&g).is_none() {
            return;
        }
        self.insert_all(vec![(0, g)]);
        self.order = self.levels.iter().map(|l| l.orbit.len() as u128).product();
    }

    fn insert_all(&mut self, mut pending: Vec<(usize, Perm)>) {
        while let Some((min_level, g)) = pending.pop() {
            let (residue, level) = self.strip(g, min_level);
            let Some(residue) = residue else { continue };
            if level == self.levels.len() {
                let base = residue.first_moved().expect("nonidentity residue");
                self.levels.push(Level::new(base, self.degree));
            }
            // The residue fixes every base point above `level`, so it belongs
            // to the generating set of every level in min_level..=level, and
            // each of those levels' orbits may grow.
            for l in min_level..=level {
                self.levels[l].gens.push(residue.clone());
                self.close_level(l, &mut pending);
            }
        }
    }

    /// Extend the orbit at `level` under its generators and queue unprocessed
    /// Schreier generators for insertion one level down.
    fn close_level(&mut self, level: usize, pending: &mut Vec<(usize, Perm)>) {
        let lev = &mut self.levels[level];
        let mut i = 0;
        while i < lev.orbit.len() {
            let pt = lev.orbit[i];
            for k in 0..lev.gens.len() {
                let img = lev.gens[k].apply(pt);
                if lev.pos[img as usize] == 0 {
                    lev.pos[img as usize] = lev.orbit.len() as u32 + 1;
                    lev.orbit.push(img);
                    lev.transversal.push(lev.transversal[i].compose(&lev.gens[k]));
                }
            }
            i += 1;
        }
        // Schreier generators: t_i * gen * t_{pt^gen}^{-1}
        let mut new_pairs = Vec::new();
        for i in 0..lev.orbit.len() {
            for k in 0..lev.gens.len() {
                if lev.done.insert((i as u32, k as u32)) {
                    new_pairs.push((i, k));
                }
            }
        }
        for (i, k) in new_pairs {
            let lev = &self.levels[level];
            let img = lev.gens[k].apply(lev.orbit[i]);
            let j = (lev.pos[img as usize] - 1) as usize;
            let s = lev.transversal[i].compose(&lev.gens[k]).compose(&lev.transversal[j].inverse());
            if !s.is_identity() {
                pending.push((level + 1, s));
            }
        }
    }

    /// Sift g through levels starting at `from`; returns the nonidentity
    /// residue and the level at which sifting stopped, or None when g sifts
    /// to the identity (i.e. lies in the group of that suffix chain).
    fn strip(&self, g: Perm, from: usize) -> (Option<Perm>, usize) {
        let mut g = g;
        for l in from..self.levels.len() {
            if g.is_identity() {
                return (None, l);
            }
            let lev = &self.levels[l];
            let img = g.apply(lev.base);
            if img == lev.base {
                continue;
            }
            let p = lev.pos[img as usize];
            if p == 0 {
                return (Some(g), l);
            }
            g = g.compose(&lev.transversal[(p - 1) as usize].inverse());
        }
        if g.is_identity() {
            (None, self.levels.len())
        } else {
            (Some(g), self.levels.len())
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// All strong generators (every level's generator list).
    pub fn strong_gens(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        self.sift(g).is_none()
    }

    /// Returns the residue of sifting g through the whole chain, or None when
    /// g is a member.
    pub fn sift(&self, g: &Perm) -> Option<Perm> {
        self.strip(g.clone(), 0).0
    }

    /// Exactly uniform random element: one uniformly chosen transversal
    /// representative per level, multiplied deepest level first.
    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        let mut g = Perm::identity(self.degree);
        for lev in self.levels.iter().rev() {
            let i = rng.gen_range(0..lev.orbit.len());
            g = g.compose(&lev.transversal[i]);
        }
        g
    }

    /// Enumerate all elements (order must fit in memory; callers budget).
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for lev in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lev.orbit.len());
            for t in &lev.transversal {
                for g in &out {
                    next.push(g.compose(t));
                }
            }
            out = next;
        }
        out
    }

    /// Transversal element carrying `base` of the top level to `point`, if
    /// `point` lies in the top orbit.
    pub fn top_transversal_to(&self, point: u16) -> Option<&Perm> {
        let lev = self.levels.first()?;
        let p = lev.pos[point as usize];
        if p == 0 {
            None
        } else {
            Some(&lev.transversal[(p - 1) as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> Vec<Perm> {
        vec![
            Perm::parse_cycles(n, "(0 1)").unwrap(),
            Perm::parse_cycles(n, &format!("({})", (0..n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "))).unwrap(),
        ]
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=8 {
            let c = StabChain::new(n, &sym(n));
            let expect: u128 = (1..=n as u128).product();
            assert_eq!(c.order(), expect, "S{n}");
        }
    }

    #[test]
    fn alternating_group_and_membership() {
        let gens = vec![
            Perm::parse_cycles(5, "(0 1 2)").unwrap(),
            Perm::parse_cycles(5, "(0 1 2 3 4)").unwrap(),
        ];
        let c = StabChain::new(5, &gens);
        assert_eq!(c.order(), 60);
        assert!(c.contains(&Perm::parse_cycles(5, "(0 1)(2 3)").unwrap()));
        assert!(!c.contains(&Perm::parse_cycles(5, "(0 1)").unwrap()));
    }

    #[test]
    fn base_uses_first_moved_point() {
        let gens = vec![Perm::parse_cycles(6, "(2 3 4)").unwrap()];
        let c = StabChain::new(6, &gens);
        assert_eq!(c.base(), vec![2]);
        assert_eq!(c.order(), 3);
    }

    #[test]
    fn elements_enumeration_matches_order() {
        let gens = vec![
            Perm::parse_cycles(4, "(0 1 2 3)").unwrap(),
            Perm::parse_cycles(4, "(0 1)").unwrap(),
        ];
        let c = StabChain::new(4, &gens);
        let elems = c.elements();
        assert_eq!(elems.len() as u128, c.order());
        let set: std::collections::HashSet<Vec<u8>> =
            elems.iter().map(|p| p.canonical_bytes()).collect();
        assert_eq!(set.len(), 24);
    }

    #[test]
    fn random_elements_are_members_and_uniform_ish() {
        use rand::SeedableRng;
        let gens = vec![
            Perm::parse_cycles(5, "(0 1 2 3 4)").unwrap(),
            Perm::parse_cycles(5, "(0 1)").unwrap(),
        ];
        let c = StabChain::new(5, &gens);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..12000 {
            let g = c.random_element(&mut rng);
            assert!(c.contains(&g));
            *counts.entry(g.canonical_bytes()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 120, "every element of S5 should appear");
        // exact uniformity: expected 100 per element, allow generous slack
        assert!(counts.values().all(|&c| c > 40 && c < 200));
    }
}
