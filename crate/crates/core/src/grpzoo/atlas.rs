//! The handful of small almost simple groups that are handled by name:
//! A5, and the four groups between A6 and PGammaL2(9).
//!
//! The A6 family is realized inside PGammaL2(9) acting on the ten points of
//! the projective line over GF(9).  The three subgroups of index two are told
//! apart by their element-order census rather than by which generators went
//! in: an element of order ten pins down PGL2(9), a maximal order of six pins
//! down S6, and M10 is what remains.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::permcore::{Perm, PermGroup};

fn perm(images: &[u16]) -> Perm {
    Perm::from_images(images.to_vec()).expect("valid permutation literal")
}

pub fn a5() -> PermGroup {
    let g = PermGroup::new(5, vec![perm(&[1, 2, 3, 4, 0]), perm(&[1, 2, 0, 3, 4])]);
    assert_eq!(g.order(), 60);
    g
}

/// The projective line over GF(9): indices 0..=8 are the field elements in
/// enumeration order, index 9 is the point at infinity.
struct Line9 {
    field: Arc<FieldSpec>,
    elems: Vec<FieldElem>,
}

impl Line9 {
    fn new() -> Result<Line9> {
        let field = Arc::new(FieldSpec::make(3, 2, None)?);
        let elems: Vec<FieldElem> = field.elems().collect();
        Ok(Line9 { field, elems })
    }

    fn index(&self, x: Option<FieldElem>) -> u16 {
        match x {
            None => 9,
            Some(e) => self.elems.iter().position(|&v| v == e).expect("field element") as u16,
        }
    }

    fn perm_of(&self, f: impl Fn(Option<FieldElem>) -> Option<FieldElem>) -> Perm {
        let mut img = Vec::with_capacity(10);
        for i in 0..9 {
            img.push(self.index(f(Some(self.elems[i]))));
        }
        img.push(self.index(f(None)));
        Perm::from_images(img).expect("fractional maps permute the line")
    }
}

/// The lattice between A6 and PGammaL2(9), all on ten points.
pub struct A6Family {
    pub gamma: PermGroup,
    pub a6: PermGroup,
    pub s6: PermGroup,
    pub pgl: PermGroup,
    pub m10: PermGroup,
}

pub fn a6_family() -> Result<A6Family> {
    let line = Line9::new()?;
    let f = &line.field;
    let zeta = f.generator();
    let translate = line.perm_of(|x| x.map(|v| f.add(v, f.one())));
    let dilate = line.perm_of(|x| x.map(|v| f.mul(v, zeta)));
    let invert = line.perm_of(|x| match x {
        None => Some(f.zero()),
        Some(v) if v == f.zero() => None,
        Some(v) => Some(f.inv(v)),
    });
    let frob = line.perm_of(|x| x.map(|v| f.frobenius(v, 1)));

    let gamma = PermGroup::new(
        10,
        vec![translate, dilate.clone(), invert, frob.clone()],
    );
    if gamma.order() != 1440 {
        return Err(Error::OrderMismatch { expected: 1440, computed: gamma.order() });
    }
    let a6 = gamma.derived_subgroup();
    if a6.order() != 360 {
        return Err(Error::OrderMismatch { expected: 360, computed: a6.order() });
    }

    let mut s6 = None;
    let mut pgl = None;
    let mut m10 = None;
    for outer in [dilate.clone(), frob.clone(), dilate.compose(&frob)] {
        if a6.contains(&outer) {
            return Err(Error::HypothesisViolated("coset representative fell into A6".into()));
        }
        let mut gens = a6.gens().to_vec();
        gens.push(outer);
        let h = PermGroup::new(10, gens);
        if h.order() != 720 {
            return Err(Error::OrderMismatch { expected: 720, computed: h.order() });
        }
        let orders: Vec<u64> = h.elements_budgeted(720)?.iter().map(|g| g.order()).collect();
        let max = *orders.iter().max().expect("nonempty");
        let slot = if orders.contains(&10) {
            &mut pgl
        } else if max == 6 {
            &mut s6
        } else if max == 8 {
            &mut m10
        } else {
            return Err(Error::HypothesisViolated(format!(
                "index-two subgroup with unexpected max element order {max}"
            )));
        };
        if slot.replace(h).is_some() {
            return Err(Error::HypothesisViolated("duplicate census label".into()));
        }
    }
    let (Some(s6), Some(pgl), Some(m10)) = (s6, pgl, m10) else {
        return Err(Error::HypothesisViolated("census did not separate the three subgroups".into()));
    };
    Ok(A6Family { gamma, a6, s6, pgl, m10 })
}

pub fn atlas_group(name: &str) -> Result<PermGroup> {
    match name {
        "A5" => Ok(a5()),
        "A6" => Ok(a6_family()?.a6),
        "S6" => Ok(a6_family()?.s6),
        "PGL2(9)" => Ok(a6_family()?.pgl),
        "M10" => Ok(a6_family()?.m10),
        "PGammaL2(9)" => Ok(a6_family()?.gamma),
        other => Err(Error::UnknownSpec(format!("atlas:{other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_a6_family_has_the_right_orders() {
        let fam = a6_family().unwrap();
        assert_eq!(fam.gamma.order(), 1440);
        assert_eq!(fam.a6.order(), 360);
        for h in [&fam.s6, &fam.pgl, &fam.m10] {
            assert_eq!(h.order(), 720);
            assert!(h.gens().iter().all(|g| fam.gamma.contains(g)));
        }
    }

    #[test]
    fn census_labels_are_consistent() {
        let fam = a6_family().unwrap();
        let orders = |g: &PermGroup| -> Vec<u64> {
            g.elements_budgeted(720).unwrap().iter().map(|x| x.order()).collect()
        };
        assert!(orders(&fam.pgl).contains(&10));
        assert_eq!(orders(&fam.s6).iter().max(), Some(&6));
        assert_eq!(orders(&fam.m10).iter().max(), Some(&8));
        assert!(!orders(&fam.m10).contains(&6));
    }

    #[test]
    fn unknown_names_error() {
        assert!(matches!(atlas_group("J1"), Err(Error::UnknownSpec(_))));
    }
}
