//! Descriptor-driven group construction.
//!
//! Descriptors look like `zoo:Sp4(4):phi`, `zoo:PSp4(3):delta`,
//! `zoo:SO5(3)` or `atlas:S6`.  Every build returns the inner group, the
//! requested outer coset representative (when there is one), and the full
//! extension, all certified against closed-form orders.  The convention for
//! domains: a leading `P` or an even-characteristic field selects projective
//! points (where the two coincide anyway); otherwise nonzero vectors keep the
//! scalar kernel visible.

use std::sync::Arc;

use super::atlas;
use super::classical::{self, MatGroup};
use super::domain::Domain;
use super::matrix::MatF;
use super::semilinear::SemilinearMap;
use crate::error::{Error, Result};
use crate::ffield::{prime_factors, FieldSpec};
use crate::permcore::{Perm, PermGroup};

/// A named group together with the scaffolding the rest of the crate needs:
/// matrix witnesses, the acting domain, and the inner/outer split.
pub struct ZooGroup {
    pub name: String,
    pub domain: Option<Domain>,
    pub mats: Option<MatGroup>,
    /// The inner (socle-side) group T.
    pub base: PermGroup,
    /// Outer coset representative when the descriptor asked for one, or when
    /// the atlas group has an index-two socle.
    pub theta: Option<Perm>,
    pub theta_map: Option<SemilinearMap>,
    /// The full group generated by base and theta.
    pub full: PermGroup,
}

impl ZooGroup {
    pub fn order(&self) -> u128 {
        self.full.order()
    }

    pub fn degree(&self) -> usize {
        self.full.degree()
    }

    fn inner_only(name: String, domain: Option<Domain>, mats: Option<MatGroup>, g: PermGroup) -> ZooGroup {
        ZooGroup {
            name,
            domain,
            mats,
            base: g.clone(),
            theta: None,
            theta_map: None,
            full: g,
        }
    }
}

/// Adjoin a semilinear map to a permutation group and certify that the
/// extension degree equals the order of theta modulo the group.
pub fn semilinear_extension(
    domain: &Domain,
    base: &PermGroup,
    theta: &SemilinearMap,
) -> Result<(PermGroup, Perm)> {
    let tp = domain.perm_of(theta)?;
    let mut gens = base.gens().to_vec();
    gens.push(tp.clone());
    let full = PermGroup::new(base.degree(), gens);
    if full.order() % base.order() != 0 {
        return Err(Error::OrderMismatch { expected: base.order(), computed: full.order() });
    }
    let ratio = full.order() / base.order();
    let mut k = 1u128;
    let mut pw = tp.clone();
    while !base.contains(&pw) {
        pw = pw.compose(&tp);
        k += 1;
        if k > 64 {
            return Err(Error::BudgetExceeded("outer element order above 64".into()));
        }
    }
    if ratio != k {
        return Err(Error::OrderMismatch { expected: k, computed: ratio });
    }
    Ok((full, tp))
}

fn field_of(qs: &str) -> Result<Arc<FieldSpec>> {
    let q: u64 = qs.parse().map_err(|_| Error::UnknownSpec(format!("field size {qs}")))?;
    let ps = prime_factors(q as u128);
    if ps.len() != 1 {
        return Err(Error::NonPrime(q));
    }
    let p = ps[0] as u32;
    let mut f = 0;
    let mut t = q;
    while t > 1 {
        t /= p as u64;
        f += 1;
    }
    if (p as u64).pow(f) != q {
        return Err(Error::NonPrime(q));
    }
    Ok(Arc::new(FieldSpec::make(p, f, None)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Sp,
    GSp,
    SO,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Projective,
    Vectors,
}

/// Build a classical group on its domain; the permutation image is verified
/// against the closed-form order, scalar kernel included.
pub fn classical_group(
    family: Family,
    m: usize,
    field: &Arc<FieldSpec>,
    kind: DomainKind,
) -> Result<ZooGroup> {
    let q = field.q();
    let scalars = if q % 2 == 1 { 2u128 } else { 1 };
    let (mats, n) = match family {
        Family::Sp => (classical::sp(field, m)?, 2 * m),
        Family::GSp => (classical::gsp(field, m)?, 2 * m),
        Family::SO | Family::Omega => (classical::so_odd(field, m)?, 2 * m + 1),
    };
    let domain = match kind {
        DomainKind::Projective => Domain::projective(field, n),
        DomainKind::Vectors => Domain::nonzero_vectors(field, n),
    };
    let pg = mats.perm_group(&domain)?;
    let expected = match (family, kind) {
        // scalars in the group survive on vectors and die projectively
        (Family::Sp, DomainKind::Vectors) => classical::sp_order(q, m as u32),
        (Family::Sp, DomainKind::Projective) => classical::sp_order(q, m as u32) / scalars,
        (Family::GSp, DomainKind::Vectors) => classical::sp_order(q, m as u32) * (q as u128 - 1),
        (Family::GSp, DomainKind::Projective) => mats.proj_order(),
        // no nontrivial scalar fixes an odd-dimensional form
        (Family::SO | Family::Omega, _) => classical::sp_order(q, m as u32),
    };
    if pg.order() != expected {
        return Err(Error::OrderMismatch { expected, computed: pg.order() });
    }
    let (name, group) = match family {
        Family::Omega => {
            let omega = pg.derived_subgroup();
            if omega.order() * 2 != pg.order() {
                return Err(Error::OrderMismatch {
                    expected: pg.order() / 2,
                    computed: omega.order(),
                });
            }
            (format!("Omega{n}({q})"), omega)
        }
        _ => (mats.name().to_string(), pg),
    };
    Ok(ZooGroup::inner_only(name, Some(domain), Some(mats), group))
}

fn build_atlas(name: &str) -> Result<ZooGroup> {
    let full = atlas::atlas_group(name)?;
    let (base, theta) = match name {
        "S6" | "PGL2(9)" | "M10" => {
            let socle = full.derived_subgroup();
            if socle.order() * 2 != full.order() {
                return Err(Error::OrderMismatch {
                    expected: full.order() / 2,
                    computed: socle.order(),
                });
            }
            let rep = full
                .gens()
                .iter()
                .find(|g| !socle.contains(g))
                .cloned()
                .ok_or(Error::SearchExhausted)?;
            (socle, Some(rep))
        }
        _ => (full.clone(), None),
    };
    Ok(ZooGroup {
        name: format!("atlas:{name}"),
        domain: None,
        mats: None,
        base,
        theta,
        theta_map: None,
        full,
    })
}

/// Parse and build a descriptor.
pub fn build(descriptor: &str) -> Result<ZooGroup> {
    if let Some(name) = descriptor.strip_prefix("atlas:") {
        return build_atlas(name);
    }
    let Some(rest) = descriptor.strip_prefix("zoo:") else {
        return Err(Error::UnknownSpec(descriptor.into()));
    };
    let (name, auto) = match rest.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    let digit_at = name
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::UnknownSpec(descriptor.into()))?;
    let (fam_str, dims) = name.split_at(digit_at);
    let (n_str, q_str) = dims
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(|| Error::UnknownSpec(descriptor.into()))?;
    let n: usize = n_str.parse().map_err(|_| Error::UnknownSpec(descriptor.into()))?;
    let field = field_of(q_str)?;
    let (family, m) = match fam_str.trim_start_matches('P') {
        "Sp" if n % 2 == 0 => (Family::Sp, n / 2),
        "GSp" if n % 2 == 0 => (Family::GSp, n / 2),
        "SO" if n % 2 == 1 => (Family::SO, n / 2),
        "Omega" if n % 2 == 1 => (Family::Omega, n / 2),
        _ => return Err(Error::UnknownSpec(descriptor.into())),
    };
    // projective wherever it is faithful: P-prefixed requests, scalar-free
    // even-characteristic symplectic groups, and all odd-dimensional
    // orthogonal groups
    let projective = fam_str.starts_with('P')
        || field.q() % 2 == 0
        || matches!(family, Family::SO | Family::Omega);
    let kind = if projective { DomainKind::Projective } else { DomainKind::Vectors };
    let mut zg = classical_group(family, m, &field, kind)?;
    zg.name = name.to_string();

    let Some(auto) = auto else { return Ok(zg) };
    let theta_map = match auto {
        "delta" => {
            if field.q() % 2 == 0 {
                return Err(Error::UnsupportedCase(
                    "diagonal automorphism is inner for even q".into(),
                ));
            }
            let nn = 2 * m;
            let mut d = MatF::identity(&field, nn);
            for i in 0..m {
                d.set(2 * i, 2 * i, field.generator());
            }
            SemilinearMap::linear(d)
        }
        _ if auto.starts_with("phi") => {
            let k: u32 = if auto == "phi" {
                1
            } else {
                auto[3..].parse().map_err(|_| Error::UnknownSpec(descriptor.into()))?
            };
            if k == 0 || k >= field.f() {
                return Err(Error::UnsupportedCase(format!(
                    "no field automorphism phi^{k} over GF({})",
                    field.q()
                )));
            }
            let nn = if matches!(family, Family::SO | Family::Omega) { 2 * m + 1 } else { 2 * m };
            SemilinearMap::new(MatF::identity(&field, nn), k)
        }
        _ => return Err(Error::UnknownSpec(descriptor.into())),
    };
    let domain = zg.domain.as_ref().expect("classical groups carry a domain");
    let (full, tp) = semilinear_extension(domain, &zg.base, &theta_map)?;
    zg.name = format!("{name}:{auto}");
    zg.theta = Some(tp);
    zg.theta_map = Some(theta_map);
    zg.full = full;
    Ok(zg)
}

/// One semilinear witness per class of `table`, by a seeded random walk
/// multiplying the matrix and permutation sides in lockstep.  With
/// `coset_only` the walk stays in the inner group and every recorded witness
/// is the walk element times theta, matching a table from coset_classes;
/// otherwise theta joins the generators and the table is the full group's.
pub fn matrix_witnesses(
    z: &ZooGroup,
    table: &crate::conjtab::ClassTable,
    coset_only: bool,
    seed: u64,
    step_budget: u64,
) -> Result<Vec<SemilinearMap>> {
    use rand::{Rng, SeedableRng};
    let mats = z.mats.as_ref().ok_or(Error::UnsupportedCase("matrix group required".into()))?;
    let domain = z.domain.as_ref().ok_or(Error::UnsupportedCase("domain required".into()))?;
    let mut pairs: Vec<(SemilinearMap, Perm)> = Vec::new();
    for m in mats.gens() {
        pairs.push((m.clone(), domain.perm_of(m)?));
    }
    if !coset_only {
        if let (Some(tm), Some(tp)) = (&z.theta_map, &z.theta) {
            pairs.push((tm.clone(), tp.clone()));
        }
    }
    let shift: Option<(&SemilinearMap, &Perm)> = if coset_only {
        Some((
            z.theta_map.as_ref().ok_or(Error::UnsupportedCase("no outer coset".into()))?,
            z.theta.as_ref().ok_or(Error::UnsupportedCase("no outer coset".into()))?,
        ))
    } else {
        None
    };
    let n = mats.dim();
    let mut found: Vec<Option<SemilinearMap>> = vec![None; table.len()];
    let mut remaining = table.len();
    let mut cur_m = SemilinearMap::linear(MatF::identity(mats.field(), n));
    let mut cur_p = Perm::identity(z.full.degree());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let record = |m: &SemilinearMap, p: &Perm, found: &mut Vec<Option<SemilinearMap>>, remaining: &mut usize| -> Result<()> {
        let cid = table.class_of(p)?;
        if found[cid].is_none() {
            if domain.perm_of(m)? != *p {
                return Err(Error::DomainNotStable);
            }
            found[cid] = Some(m.clone());
            *remaining -= 1;
        }
        Ok(())
    };
    match shift {
        None => record(&cur_m, &cur_p, &mut found, &mut remaining)?,
        Some((tm, tp)) => record(&cur_m.compose(tm), &cur_p.compose(tp), &mut found, &mut remaining)?,
    }
    for _ in 0..step_budget {
        if remaining == 0 {
            break;
        }
        let (gm, gp) = &pairs[rng.gen_range(0..pairs.len())];
        cur_m = cur_m.compose(gm);
        cur_p = cur_p.compose(gp);
        match shift {
            None => record(&cur_m, &cur_p, &mut found, &mut remaining)?,
            Some((tm, tp)) => {
                record(&cur_m.compose(tm), &cur_p.compose(tp), &mut found, &mut remaining)?
            }
        }
    }
    if remaining > 0 {
        return Err(Error::SearchExhausted);
    }
    Ok(found.into_iter().map(|w| w.unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_descriptors() {
        let g = build("zoo:Sp4(2)").unwrap();
        assert_eq!(g.order(), 720);
        assert_eq!(g.degree(), 15);

        let g = build("zoo:PSp4(3)").unwrap();
        assert_eq!(g.order(), 25920);
        assert_eq!(g.degree(), 40);

        let g = build("zoo:Sp4(3)").unwrap();
        assert_eq!(g.order(), 51840);
        assert_eq!(g.degree(), 80);
    }

    #[test]
    fn outer_extensions() {
        let g = build("zoo:Sp4(4):phi").unwrap();
        assert_eq!(g.base.order(), 979200);
        assert_eq!(g.order(), 1958400);
        assert_eq!(g.degree(), 85);
        let theta = g.theta.as_ref().unwrap();
        assert!(!g.base.contains(theta));
        assert!(g.base.contains(&theta.compose(theta)));

        let g = build("zoo:PSp4(3):delta").unwrap();
        assert_eq!(g.base.order(), 25920);
        assert_eq!(g.order(), 51840);
        assert_eq!(g.degree(), 40);
    }

    #[test]
    fn atlas_descriptors_carry_their_socle() {
        let g = build("atlas:S6").unwrap();
        assert_eq!(g.order(), 720);
        assert_eq!(g.base.order(), 360);
        assert!(g.theta.is_some());
        let g = build("atlas:A5").unwrap();
        assert_eq!(g.order(), 60);
        assert!(g.theta.is_none());
    }

    #[test]
    fn orthogonal_descriptors() {
        let g = build("zoo:SO5(3)").unwrap();
        assert_eq!(g.order(), 51840);
        assert_eq!(g.degree(), 121);
        let g = build("zoo:Omega5(3)").unwrap();
        assert_eq!(g.order(), 25920);
    }

    #[test]
    fn bad_descriptors_error() {
        assert!(build("zoo:Sp5(2)").is_err());
        assert!(build("zoo:Sp4(6)").is_err());
        assert!(build("nonsense").is_err());
        assert!(build("zoo:Sp4(2):delta").is_err());
    }
}
