//! Permutations of {0, ..., n-1} and permutation groups backed by
//! base-and-strong-generating-set stabilizer chains.
//!
//! Conventions fixed here and relied on everywhere else:
//! points are acted on the right, composition reads left to right
//! (`a.compose(&b)` means "apply a, then b"), and bases are built from the
//! first moved point.

mod group;
mod stabchain;

pub use group::{ConjOrbit, PermGroup};
pub use stabchain::StabChain;

use crate::error::{Error, Result};

/// A permutation stored as its image array: `img[i]` is the image of i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Box<[u16]>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm({})", self.cycle_string())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { img: (0..degree as u16).collect() }
    }

    pub fn from_images(img: Vec<u16>) -> Result<Perm> {
        let n = img.len();
        assert!(n <= u16::MAX as usize + 1, "degree out of range");
        let mut seen = vec![false; n];
        for &x in &img {
            if (x as usize) >= n || seen[x as usize] {
                return Err(Error::Parse { line: 0, msg: "not a permutation".into() });
            }
            seen[x as usize] = true;
        }
        Ok(Perm { img: img.into_boxed_slice() })
    }

    /// Build from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u16>]) -> Result<Perm> {
        let mut img: Vec<u16> = (0..degree as u16).collect();
        for cyc in cycles {
            if cyc.iter().any(|&pt| pt as usize >= degree) {
                return Err(Error::Parse { line: 0, msg: "cycle point out of range".into() });
            }
            for i in 0..cyc.len() {
                img[cyc[i] as usize] = cyc[(i + 1) % cyc.len()];
            }
        }
        Perm::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, point: u16) -> u16 {
        self.img[point as usize]
    }

    pub fn images(&self) -> &[u16] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u16 == x)
    }

    /// First point moved by the permutation, if any.
    pub fn first_moved(&self) -> Option<u16> {
        self.img.iter().enumerate().find(|&(i, &x)| i as u16 != x).map(|(i, _)| i as u16)
    }

    /// Apply self, then other.
    #[inline]
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        let img: Vec<u16> = self.img.iter().map(|&x| other.img[x as usize]).collect();
        Perm { img: img.into_boxed_slice() }
    }

    pub fn try_compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u16; self.degree()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u16;
        }
        Perm { img: img.into_boxed_slice() }
    }

    /// self^k by binary exponentiation; negative k inverts first.
    pub fn power(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// conjugate self^g = g^-1 * self * g.
    pub fn conj(&self, g: &Perm) -> Perm {
        let mut img = vec![0u16; self.degree()];
        let gi = &g.img;
        for (i, &x) in self.img.iter().enumerate() {
            img[gi[i] as usize] = gi[x as usize];
        }
        Perm { img: img.into_boxed_slice() }
    }

    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().compose(&other.inverse()).compose(self).compose(other)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start as u16;
            loop {
                seen[x as usize] = true;
                len += 1;
                x = self.img[x as usize];
                if x as usize == start {
                    break;
                }
            }
            ord = crate::ffield::lcm(ord, len);
        }
        ord
    }

    /// Sorted multiset of cycle lengths > 1 (a conjugation invariant).
    pub fn cycle_type(&self) -> Vec<u16> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u16;
            let mut x = start as u16;
            loop {
                seen[x as usize] = true;
                len += 1;
                x = self.img[x as usize];
                if x as usize == start {
                    break;
                }
            }
            if len > 1 {
                out.push(len);
            }
        }
        out.sort_unstable();
        out
    }

    /// Canonical byte string of the image array: one byte per point for
    /// degree <= 255, two little-endian bytes otherwise.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        if self.degree() <= 255 {
            self.img.iter().map(|&x| x as u8).collect()
        } else {
            let mut v = Vec::with_capacity(2 * self.degree());
            for &x in self.img.iter() {
                v.extend_from_slice(&x.to_le_bytes());
            }
            v
        }
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        if self.degree() <= 255 {
            out.extend(self.img.iter().map(|&x| x as u8));
        } else {
            for &x in self.img.iter() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
    }

    pub fn from_canonical(degree: usize, bytes: &[u8]) -> Perm {
        let img: Vec<u16> = if degree <= 255 {
            bytes.iter().map(|&b| b as u16).collect()
        } else {
            bytes.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect()
        };
        debug_assert_eq!(img.len(), degree);
        Perm { img: img.into_boxed_slice() }
    }

    /// Cycle notation like `(0 1 2)(3 4)`; identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.img[start] as usize == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut x = start as u16;
            let mut first = true;
            loop {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&x.to_string());
                seen[x as usize] = true;
                x = self.img[x as usize];
                if x as usize == start {
                    break;
                }
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parse cycle notation; `()` is the identity.
    pub fn parse_cycles(degree: usize, s: &str) -> Result<Perm> {
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut cur: Option<Vec<u16>> = None;
        let mut num = String::new();
        let flush_num = |num: &mut String, cur: &mut Option<Vec<u16>>| -> Result<()> {
            if !num.is_empty() {
                let v: u16 = num
                    .parse()
                    .map_err(|_| Error::Parse { line: 0, msg: format!("bad point {num}") })?;
                cur.as_mut()
                    .ok_or_else(|| Error::Parse { line: 0, msg: "point outside cycle".into() })?
                    .push(v);
                num.clear();
            }
            Ok(())
        };
        for ch in s.chars() {
            match ch {
                '(' => {
                    if cur.is_some() {
                        return Err(Error::Parse { line: 0, msg: "nested cycle".into() });
                    }
                    cur = Some(Vec::new());
                }
                ')' => {
                    flush_num(&mut num, &mut cur)?;
                    let c = cur
                        .take()
                        .ok_or_else(|| Error::Parse { line: 0, msg: "unmatched )".into() })?;
                    if !c.is_empty() {
                        cycles.push(c);
                    }
                }
                ' ' | ',' => flush_num(&mut num, &mut cur)?,
                d if d.is_ascii_digit() => num.push(d),
                other => {
                    return Err(Error::Parse { line: 0, msg: format!("unexpected `{other}`") })
                }
            }
        }
        if cur.is_some() {
            return Err(Error::Parse { line: 0, msg: "unterminated cycle".into() });
        }
        // disjointness check
        let mut seen = vec![false; degree];
        for c in &cycles {
            for &pt in c {
                if pt as usize >= degree || seen[pt as usize] {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("point {pt} repeated or out of range"),
                    });
                }
                seen[pt as usize] = true;
            }
        }
        Perm::from_cycles(degree, &cycles)
    }
}
