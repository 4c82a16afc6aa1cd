//! Generating graph: vertices are the nontrivial elements, edges the pairs
//! that generate.  Spread 1 is exactly "no isolated vertex"; the standard
//! sanity checks here are small diameters on the simple alternating groups.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permcore::PermGroup;

use super::EXACT_ORDER_CAP;

pub struct GeneratingGraph {
    /// Nontrivial group elements in stabilizer-chain order, as vertex labels.
    pub vertices: Vec<crate::permcore::Perm>,
    /// Adjacency rows as bitsets over vertex indices.
    pub adj: Vec<Vec<u64>>,
}

pub fn generating_graph(g: &PermGroup) -> Result<GeneratingGraph> {
    if g.order() > EXACT_ORDER_CAP {
        return Err(Error::BudgetExceeded(format!(
            "generating graph needs |G| <= {}, got {}",
            EXACT_ORDER_CAP,
            g.order()
        )));
    }
    let vertices: Vec<_> = g
        .elements_budgeted(EXACT_ORDER_CAP)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let n = vertices.len();
    let w = (n + 63) / 64;
    // upper triangle of pair tests, rows in parallel, then mirrored
    let upper: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0u64; w];
            for j in i + 1..n {
                if g.is_generating(&[vertices[i].clone(), vertices[j].clone()]).unwrap() {
                    row[j / 64] |= 1u64 << (j % 64);
                }
            }
            row
        })
        .collect();
    let mut adj = upper;
    for i in 0..n {
        for j in i + 1..n {
            if adj[i][j / 64] >> (j % 64) & 1 == 1 {
                adj[j][i / 64] |= 1u64 << (i % 64);
            }
        }
    }
    Ok(GeneratingGraph { vertices, adj })
}

impl GeneratingGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> u64 {
        let deg: u64 = self.adj.iter().map(|r| r.iter().map(|w| w.count_ones() as u64).sum::<u64>()).sum();
        deg / 2
    }

    pub fn isolated_count(&self) -> usize {
        self.adj.iter().filter(|r| r.iter().all(|&w| w == 0)).count()
    }

    /// Largest eccentricity, None when the graph is empty or disconnected.
    pub fn diameter(&self) -> Option<u32> {
        let n = self.vertices.len();
        if n == 0 {
            return None;
        }
        let w = (n + 63) / 64;
        let mut diameter = 0u32;
        let mut seen = vec![0u64; w];
        let mut frontier = vec![0u64; w];
        let mut next = vec![0u64; w];
        for start in 0..n {
            seen.iter_mut().for_each(|x| *x = 0);
            frontier.iter_mut().for_each(|x| *x = 0);
            seen[start / 64] |= 1u64 << (start % 64);
            frontier[start / 64] |= 1u64 << (start % 64);
            let mut reached = 1u32;
            let mut depth = 0u32;
            while reached < n as u32 {
                next.iter_mut().for_each(|x| *x = 0);
                for wi in 0..w {
                    let mut bits = frontier[wi];
                    while bits != 0 {
                        let v = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        for (nw, aw) in next.iter_mut().zip(&self.adj[v]) {
                            *nw |= aw;
                        }
                    }
                }
                for wi in 0..w {
                    next[wi] &= !seen[wi];
                    seen[wi] |= next[wi];
                }
                let gained: u32 = next.iter().map(|x| x.count_ones()).sum();
                if gained == 0 {
                    return None; // disconnected
                }
                reached += gained;
                depth += 1;
                std::mem::swap(&mut frontier, &mut next);
            }
            diameter = diameter.max(depth);
        }
        Some(diameter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::zoo::build;

    #[test]
    fn a5_diameter_two() {
        let g = build("atlas:A5").unwrap().full;
        let graph = generating_graph(&g).unwrap();
        assert_eq!(graph.vertex_count(), 59);
        assert_eq!(graph.isolated_count(), 0);
        assert_eq!(graph.diameter(), Some(2));
    }

    #[test]
    fn cyclic_composite_graph_disconnected() {
        use crate::permcore::{Perm, PermGroup};
        let cycle: Vec<u16> = (1..6).chain(std::iter::once(0)).collect();
        let g = PermGroup::new(6, vec![Perm::from_images(cycle).unwrap()]);
        let graph = generating_graph(&g).unwrap();
        // the two proper-divisor elements generate with the two generators
        // but not with each other; x^2, x^3, x^4 of order < 6 are the rest
        assert!(graph.isolated_count() == 0);
        assert_eq!(graph.diameter(), Some(2));
    }
}
