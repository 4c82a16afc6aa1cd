//! Constructors for the classical matrix groups used throughout: symplectic
//! and similitude groups over small fields, orthogonal groups as quadratic
//! form stabilizers, and the decomposition / field-extension / subfield
//! subgroups that show up as maximal overgroups.
//!
//! Every constructor certifies itself: the permutation image on projective
//! points is run through the stabilizer chain and its order compared with
//! the closed-form group order. A failed comparison is a hard error, never a
//! warning.

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec, ZERO};
use crate::permcore::PermGroup;
use super::domain::Domain;
use super::forms::{self, QuadForm};
use super::matrix::MatF;
use super::semilinear::SemilinearMap;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

pub fn sp_order(q: u64, m: u32) -> u128 {
    let q = q as u128;
    let mut n = q.pow(m * m);
    for i in 1..=m {
        n *= q.pow(2 * i) - 1;
    }
    n
}

/// Full orthogonal group order in even characteristic.
pub fn go_order_even(q: u64, m: u32, eps: i32) -> u128 {
    let q = q as u128;
    let mut n = 2 * q.pow(m * (m - 1));
    n *= (q.pow(m) as i128 - eps as i128) as u128;
    for i in 1..m {
        n *= q.pow(2 * i) - 1;
    }
    n
}

/// A matrix group together with its verified permutation image on projective
/// points.
pub struct MatGroup {
    name: String,
    field: Arc<FieldSpec>,
    dim: usize,
    gens: Vec<SemilinearMap>,
    proj_order: u128,
}

impl std::fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MatGroup({}, dim {} over GF({}), {} gens, projective order {})",
            self.name,
            self.dim,
            self.field.q(),
            self.gens.len(),
            self.proj_order
        )
    }
}

impl MatGroup {
    /// Wrap generators and certify the projective permutation order.
    pub fn certified(
        name: &str,
        field: &Arc<FieldSpec>,
        dim: usize,
        gens: Vec<SemilinearMap>,
        expected_proj_order: u128,
    ) -> Result<MatGroup> {
        let domain = Domain::projective(field, dim);
        let perms: Result<Vec<_>> = gens.iter().map(|g| domain.perm_of(g)).collect();
        let pg = PermGroup::new(domain.size(), perms?);
        if pg.order() != expected_proj_order {
            return Err(Error::OrderMismatch {
                expected: expected_proj_order,
                computed: pg.order(),
            });
        }
        Ok(MatGroup { name: name.into(), field: field.clone(), dim, gens, proj_order: expected_proj_order })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gens(&self) -> &[SemilinearMap] {
        &self.gens
    }
    pub fn proj_order(&self) -> u128 {
        self.proj_order
    }

    pub fn perm_group(&self, domain: &Domain) -> Result<PermGroup> {
        let perms: Result<Vec<_>> = self.gens.iter().map(|g| domain.perm_of(g)).collect();
        Ok(PermGroup::new(domain.size(), perms?))
    }

    /// Pseudorandom element by product replacement. The distribution is only
    /// used for spot checks of identities, never for counting.
    pub fn random_word(&self, rng: &mut impl Rng, mixes: usize) -> SemilinearMap {
        let mut slots: Vec<SemilinearMap> = self.gens.clone();
        while slots.len() < 4 {
            let extra = slots[slots.len() % self.gens.len()].clone();
            slots.push(extra);
        }
        let mut acc = SemilinearMap::identity_like(self.gens[0].mat());
        for _ in 0..mixes {
            let i = rng.gen_range(0..slots.len());
            let mut j = rng.gen_range(0..slots.len() - 1);
            if j >= i {
                j += 1;
            }
            let factor = if rng.gen_bool(0.5) { slots[j].clone() } else { slots[j].inverse() };
            slots[i] = slots[i].compose(&factor);
            acc = acc.compose(&slots[i]);
        }
        acc
    }
}

/// Symplectic transvection x -> x + lambda (x, u) u for the given Gram
/// matrix; lies in Sp for every u and lambda.
pub fn transvection(gram: &MatF, u: &[FieldElem], lambda: FieldElem) -> MatF {
    let field = gram.field();
    let n = gram.rows();
    let mut t = MatF::identity(field, n);
    for i in 0..n {
        let mut b = vec![ZERO; n];
        b[i] = field.one();
        let c = field.mul(lambda, forms::bilinear(gram, &b, u));
        if c == ZERO {
            continue;
        }
        for j in 0..n {
            let v = field.add(t.at(i, j), field.mul(c, u[j]));
            t.set(i, j, v);
        }
    }
    t
}

/// Generators of SL2(q) = Sp2(q): the upper root group over a basis of the
/// field plus the Weyl reflection.
fn sl2_mats(field: &Arc<FieldSpec>) -> Vec<MatF> {
    let mut out = Vec::new();
    let xi = field.generator();
    let mut lam = field.one();
    for _ in 0..field.f() {
        let mut t = MatF::identity(field, 2);
        t.set(0, 1, lam);
        out.push(t);
        lam = field.mul(lam, xi);
    }
    let mut w = MatF::zero(field, 2, 2);
    w.set(0, 1, field.one());
    w.set(1, 0, field.neg(field.one()));
    out.push(w);
    out
}

fn embed_block(field: &Arc<FieldSpec>, n: usize, block: &MatF, at: usize) -> MatF {
    let mut m = MatF::identity(field, n);
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            m.set(at + i, at + j, block.at(i, j));
        }
    }
    m
}

fn sp_candidate_gens(field: &Arc<FieldSpec>, m: usize) -> Vec<MatF> {
    let n = 2 * m;
    let mut gens: Vec<MatF> = sl2_mats(field)
        .iter()
        .map(|b| embed_block(field, n, b, 0))
        .collect();
    if m > 1 {
        // cycle the hyperbolic pairs
        let mut sigma = MatF::zero(field, n, n);
        for i in 0..m {
            let j = (i + 1) % m;
            sigma.set(2 * i, 2 * j, field.one());
            sigma.set(2 * i + 1, 2 * j + 1, field.one());
        }
        gens.push(sigma);
        // a transvection mixing the first two pairs
        let gram = forms::standard_symplectic_gram(field, m);
        let xi = field.generator();
        let mut lam = field.one();
        for _ in 0..field.f() {
            let mut u = vec![ZERO; n];
            u[1] = field.one(); // f1
            u[2] = field.one(); // e2
            gens.push(transvection(&gram, &u, lam));
            lam = field.mul(lam, xi);
        }
    }
    gens
}

fn all_transvection_gens(field: &Arc<FieldSpec>, m: usize) -> Vec<MatF> {
    let n = 2 * m;
    let gram = forms::standard_symplectic_gram(field, m);
    let domain = Domain::projective(field, n);
    let mut gens = Vec::new();
    for idx in 0..domain.size() {
        let u = match &domain {
            Domain::Projective { points, .. } => points[idx].clone(),
            _ => unreachable!(),
        };
        let xi = field.generator();
        let mut lam = field.one();
        for _ in 0..field.f() {
            gens.push(transvection(&gram, &u, lam));
            lam = field.mul(lam, xi);
        }
    }
    gens
}

/// Sp(2m, q) in the standard frame e1,f1,...,em,fm.
pub fn sp(field: &Arc<FieldSpec>, m: usize) -> Result<MatGroup> {
    let q = field.q();
    let gram = forms::standard_symplectic_gram(field, m);
    let expected = sp_order(q, m as u32) / if q % 2 == 0 { 1 } else { 2 };
    for mats in [sp_candidate_gens(field, m), all_transvection_gens(field, m)] {
        for g in &mats {
            assert_eq!(forms::similarity_tau(g, &gram)?, field.one());
        }
        let gens = mats.into_iter().map(SemilinearMap::linear).collect();
        match MatGroup::certified(&format!("Sp{}({q})", 2 * m), field, 2 * m, gens, expected) {
            Ok(g) => return Ok(g),
            Err(Error::OrderMismatch { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::UnsupportedCase(format!("could not generate Sp{}({q})", 2 * m)))
}

/// The similitude group GSp(2m, q) = <Sp, delta> with tau(delta) a generator
/// of the multiplicative group.
pub fn gsp(field: &Arc<FieldSpec>, m: usize) -> Result<MatGroup> {
    let q = field.q();
    let base = sp(field, m)?;
    let z = field.generator();
    let mut delta = MatF::identity(field, 2 * m);
    for i in 0..m {
        delta.set(2 * i, 2 * i, z);
    }
    let gram = forms::standard_symplectic_gram(field, m);
    assert_eq!(forms::similarity_tau(&delta, &gram)?, z);
    let mut gens = base.gens().to_vec();
    gens.push(SemilinearMap::linear(delta));
    // the projective image of GSp has order |Sp| for every q
    MatGroup::certified(&format!("GSp{}({q})", 2 * m), field, 2 * m, gens, sp_order(q, m as u32))
}

/// Extend a matrix group by the field automorphism x -> x^(p^k).
pub fn extend_by_frobenius(
    g: &MatGroup,
    k: u32,
    name: &str,
    expected_proj_order: u128,
) -> Result<MatGroup> {
    let mut gens = g.gens().to_vec();
    gens.push(SemilinearMap::new(MatF::identity(g.field(), g.dim()), k));
    MatGroup::certified(name, g.field(), g.dim(), gens, expected_proj_order)
}

/// Entrywise embedding of a group over a subfield.
pub fn subfield_group(g: &MatGroup, big: &Arc<FieldSpec>, name: &str) -> Result<MatGroup> {
    let mut gens = Vec::with_capacity(g.gens().len());
    for s in g.gens() {
        let mat = s.linear_part_only()?.embed_to(big)?;
        gens.push(SemilinearMap::linear(mat));
    }
    MatGroup::certified(name, big, g.dim(), gens, g.proj_order())
}

/// Orbit of a quadratic form under linear generators, carrying matrix
/// transversals; Schreier generators assemble the stabilizer.
pub struct FormOrbit {
    pub members: Vec<QuadForm>,
    pub index: HashMap<Vec<u32>, usize>,
    pub transversal: Vec<SemilinearMap>,
    pub stab_gens: Vec<SemilinearMap>,
}

pub fn form_orbit_stabilizer(gens: &[SemilinearMap], start: QuadForm) -> Result<FormOrbit> {
    let mut members = vec![start.clone()];
    let mut index = HashMap::new();
    index.insert(start.key(), 0usize);
    let id = SemilinearMap::identity_like(gens[0].mat());
    let mut transversal = vec![id];
    let mut stab_gens: Vec<SemilinearMap> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut i = 0;
    while i < members.len() {
        for g in gens {
            let img = members[i].act(g)?;
            match index.get(&img.key()) {
                None => {
                    index.insert(img.key(), members.len());
                    transversal.push(transversal[i].compose(g));
                    members.push(img);
                }
                Some(&j) => {
                    let s = transversal[i].compose(g).compose(&transversal[j].inverse());
                    if !s.is_identity() && seen.insert(s.clone()) {
                        stab_gens.push(s);
                    }
                }
            }
        }
        i += 1;
    }
    Ok(FormOrbit { members, index, transversal, stab_gens })
}

impl FormOrbit {
    /// Given w0 with start.act(w0) inside the orbit, return w in the same
    /// coset of the orbit group with start.act(w) == start.
    pub fn stabilizing_coset_elem(&self, w0: &SemilinearMap) -> Result<SemilinearMap> {
        let img = self.members[0].act(w0)?;
        let &j = self.index.get(&img.key()).ok_or(Error::DomainNotStable)?;
        let w = w0.compose(&self.transversal[j].inverse());
        if self.members[0].act(&w)? != self.members[0] {
            return Err(Error::DomainNotStable);
        }
        Ok(w)
    }
}

/// Full orthogonal group O^eps(2m, q), q even, as the stabilizer in Sp of a
/// quadratic form of the requested type. Also returns the form.
pub fn orthogonal_stabilizer(spg: &MatGroup, eps: i32) -> Result<(MatGroup, QuadForm)> {
    let field = spg.field();
    let m = spg.dim() / 2;
    let gram = Arc::new(forms::standard_symplectic_gram(field, m));
    let q0 = forms::enumerate_quadforms(&gram)?
        .into_iter()
        .find(|f| f.epsilon().map(|e| e == eps).unwrap_or(false))
        .ok_or(Error::FormMismatch)?;
    let orbit = form_orbit_stabilizer(spg.gens(), q0.clone())?;
    let expected = go_order_even(field.q(), m as u32, eps);
    if orbit.members.len() as u128 * expected != sp_order(field.q(), m as u32) {
        return Err(Error::OrderMismatch {
            expected: sp_order(field.q(), m as u32),
            computed: orbit.members.len() as u128 * expected,
        });
    }
    // keep only Schreier generators that grow the permutation image
    let domain = Domain::projective(field, 2 * m);
    let mut chain = crate::permcore::StabChain::new(domain.size(), &[]);
    let mut kept = Vec::new();
    for s in &orbit.stab_gens {
        let p = domain.perm_of(s)?;
        if !chain.contains(&p) {
            chain.extend(p);
            kept.push(s.clone());
        }
    }
    let sign = if eps == 1 { "+" } else { "-" };
    let name = format!("GO{sign}{}({})", 2 * m, field.q());
    let g = MatGroup::certified(&name, field, 2 * m, kept, expected)?;
    Ok((g, q0))
}

/// Stabilizer of the decomposition into the m standard hyperbolic pairs:
/// Sp2(q) wr Sym(m).
pub fn sp2_wreath(field: &Arc<FieldSpec>, m: usize) -> Result<MatGroup> {
    assert!(m >= 2);
    let n = 2 * m;
    let q = field.q();
    let mut mats: Vec<MatF> = sl2_mats(field)
        .iter()
        .map(|b| embed_block(field, n, b, 0))
        .collect();
    let mut sigma = MatF::zero(field, n, n);
    for i in 0..m {
        let j = (i + 1) % m;
        sigma.set(2 * i, 2 * j, field.one());
        sigma.set(2 * i + 1, 2 * j + 1, field.one());
    }
    mats.push(sigma);
    if m > 2 {
        let mut tau = MatF::identity(field, n);
        for (a, b) in [(0usize, 2usize)] {
            tau.set(a, a, ZERO);
            tau.set(a + 1, a + 1, ZERO);
            tau.set(b, b, ZERO);
            tau.set(b + 1, b + 1, ZERO);
            tau.set(a, b, field.one());
            tau.set(a + 1, b + 1, field.one());
            tau.set(b, a, field.one());
            tau.set(b + 1, a + 1, field.one());
        }
        mats.push(tau);
    }
    let sp2 = sp_order(q, 1);
    let mut expected = sp2.pow(m as u32) * (1..=m as u128).product::<u128>();
    if q % 2 == 1 {
        expected /= 2;
    }
    let gens = mats.into_iter().map(SemilinearMap::linear).collect();
    MatGroup::certified(&format!("Sp2({q})wrS{m}"), field, n, gens, expected)
}

/// Sp_{2k}(q^d).d inside Sp_{2kd}(q): the symplectic group over the degree-d
/// extension written over the subfield, extended by the extension-field
/// Frobenius (which is q-linear). The form transported from the extension is
/// Tr(x J y^T), brought to the standard frame by a symplectic base change.
pub fn extension_field_sp(field: &Arc<FieldSpec>, d: u32, k: usize) -> Result<MatGroup> {
    let p = field.p();
    let f = field.f();
    let q = field.q();
    let big = Arc::new(FieldSpec::make(p, f * d, None)?);
    let eta = big.generator();
    let prime = Arc::new(FieldSpec::make(p, 1, None)?);
    let fd = (f * d) as usize;

    // rows of `basis_mat`: prime-field coordinates of eta^j * theta^l, the
    // F-basis-times-E-basis products that span E over GF(p)
    let theta = big.embed_from(field.generator(), field)?;
    let mut rows = Vec::with_capacity(fd);
    for j in 0..d as usize {
        for l in 0..f as usize {
            let x = big.mul(big.pow(eta, j as i64), big.pow(theta, l as i64));
            rows.push(big.coeffs(x));
        }
    }
    let basis_mat = MatF::from_rows(&prime, &rows);
    let basis_inv = basis_mat.inverse().ok_or(Error::ReduciblePolynomial)?;
    // expand an extension element into F-coordinates over the eta-basis
    let expand = |x: FieldElem| -> Vec<FieldElem> {
        let coords: Vec<FieldElem> = big.coeffs(x).into_iter().map(FieldElem).collect();
        let a = basis_inv.vec_mul(&coords);
        (0..d as usize)
            .map(|j| {
                let chunk: Vec<u32> = (0..f as usize).map(|l| a[j * f as usize + l].0).collect();
                field.from_coeffs(&chunk)
            })
            .collect()
    };
    let trace_to_f = |x: FieldElem| -> Result<FieldElem> {
        let mut t = ZERO;
        for i in 0..d {
            t = big.add(t, big.frobenius(x, f * i));
        }
        big.retract_to(t, field)?.ok_or(Error::NotASubfield { sub: q, big: big.q() })
    };

    // E-matrix (2k x 2k) written over F as a 2kd x 2kd matrix
    let n = 2 * k * d as usize;
    let flat = |i: usize, j: usize| i * d as usize + j;
    let to_f_matrix = |me: &MatF| -> MatF {
        let mut out = MatF::zero(field, n, n);
        for i in 0..2 * k {
            for j in 0..d as usize {
                for c in 0..2 * k {
                    let x = big.mul(big.pow(eta, j as i64), me.at(i, c));
                    for (l, v) in expand(x).into_iter().enumerate() {
                        out.set(flat(i, j), flat(c, l), v);
                    }
                }
            }
        }
        out
    };

    // transported Gram matrix and its normalization
    let je = forms::standard_symplectic_gram(&big, k);
    let mut gram = MatF::zero(field, n, n);
    for i in 0..2 * k {
        for j in 0..d as usize {
            for c in 0..2 * k {
                for l in 0..d as usize {
                    let x = big.mul(big.pow(eta, (j + l) as i64), je.at(i, c));
                    gram.set(flat(i, j), flat(c, l), trace_to_f(x)?);
                }
            }
        }
    }
    let pmat = forms::symplectic_basis(&gram)?;
    let pinv = pmat.inverse().expect("base change is invertible");
    let conj = |m: &MatF| pmat.mul(m).mul(&pinv);

    let mut gens: Vec<SemilinearMap> = Vec::new();
    for b in sp_candidate_gens(&big, k) {
        gens.push(SemilinearMap::linear(conj(&to_f_matrix(&b))));
    }
    if k > 1 {
        for b in all_transvection_gens(&big, k) {
            gens.push(SemilinearMap::linear(conj(&to_f_matrix(&b))));
        }
    }
    // the extension-field Frobenius x -> x^q, F-linear of order d
    let mut frob = MatF::zero(field, n, n);
    for i in 0..2 * k {
        for j in 0..d as usize {
            let x = big.frobenius(big.pow(eta, j as i64), f);
            for (l, v) in expand(x).into_iter().enumerate() {
                frob.set(flat(i, j), flat(i, l), v);
            }
        }
    }
    gens.push(SemilinearMap::linear(conj(&frob)));

    let jf = forms::standard_symplectic_gram(field, n / 2);
    for g in &gens {
        if forms::similarity_tau(g.mat(), &jf)? != field.one() {
            return Err(Error::FormMismatch);
        }
    }
    let scalars = if q % 2 == 0 { 1 } else { 2 };
    let expected = sp_order(big.q(), k as u32) * d as u128 / scalars;
    MatGroup::certified(
        &format!("Sp{}({}).{d}", 2 * k, big.q()),
        field,
        n,
        gens,
        expected,
    )
}

/// Reflection in the anisotropic vector v: u -> u - 2 (u,v)/(v,v) v.
pub fn reflection(gram: &MatF, v: &[FieldElem]) -> MatF {
    let field = gram.field();
    let n = gram.rows();
    let vv = forms::bilinear(gram, v, v);
    assert!(vv != ZERO, "reflection needs an anisotropic vector");
    let scale = field.div(field.scalar(2), vv);
    let mut out = MatF::identity(field, n);
    for i in 0..n {
        let mut e = vec![ZERO; n];
        e[i] = field.one();
        let c = field.mul(scale, forms::bilinear(gram, &e, v));
        for j in 0..n {
            let x = field.sub(out.at(i, j), field.mul(c, v[j]));
            out.set(i, j, x);
        }
    }
    out
}

/// Gram matrix used for the odd-dimensional orthogonal groups: m hyperbolic
/// planes followed by a single anisotropic point.
pub fn so_odd_gram(field: &Arc<FieldSpec>, m: usize) -> MatF {
    let n = 2 * m + 1;
    let mut g = MatF::zero(field, n, n);
    for i in 0..m {
        g.set(2 * i, 2 * i + 1, field.one());
        g.set(2 * i + 1, 2 * i, field.one());
    }
    g.set(n - 1, n - 1, field.one());
    g
}

/// SO_{2m+1}(q) for odd q, generated by products of reflection pairs and
/// certified against the symplectic group order it shares.
pub fn so_odd(field: &Arc<FieldSpec>, m: usize) -> Result<MatGroup> {
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let n = 2 * m + 1;
    let q = field.q();
    let gram = so_odd_gram(field, m);
    let elems: Vec<FieldElem> = field.elems().collect();
    // deterministic odometer sweep over vectors, keeping the anisotropic ones
    let mut aniso = Vec::new();
    let mut idx = 1u64;
    let total = q.pow(n as u32);
    while idx < total && aniso.len() < 200 {
        let mut v = Vec::with_capacity(n);
        let mut t = idx;
        for _ in 0..n {
            v.push(elems[(t % q) as usize]);
            t /= q;
        }
        if forms::bilinear(&gram, &v, &v) != ZERO {
            aniso.push(v);
        }
        idx += 1;
    }
    let r0 = reflection(&gram, &aniso[0]);
    let expected = sp_order(q, m as u32);
    let mut gens: Vec<SemilinearMap> = Vec::new();
    let mut used = 1;
    for cap in [12usize, 48, 200] {
        while used < cap.min(aniso.len()) {
            let g = r0.mul(&reflection(&gram, &aniso[used]));
            used += 1;
            if !g.is_identity() {
                gens.push(SemilinearMap::linear(g));
            }
        }
        match MatGroup::certified(&format!("SO{n}({q})"), field, n, gens.clone(), expected) {
            Ok(g) => return Ok(g),
            Err(Error::OrderMismatch { .. }) if used < aniso.len() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, f: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::make(p, f, None).unwrap())
    }

    #[test]
    fn symplectic_group_orders() {
        assert_eq!(sp_order(2, 1), 6);
        assert_eq!(sp_order(2, 2), 720);
        assert_eq!(sp_order(4, 2), 979200);
        assert_eq!(sp_order(2, 3), 1451520);
        assert_eq!(sp_order(9, 2), 3443212800);
    }

    #[test]
    fn sp2_constructions() {
        assert_eq!(sp(&gf(2, 1), 1).unwrap().proj_order(), 6);
        assert_eq!(sp(&gf(2, 2), 1).unwrap().proj_order(), 60);
        // PSL2(9) = A6
        assert_eq!(sp(&gf(3, 2), 1).unwrap().proj_order(), 360);
    }

    #[test]
    fn sp4_q2_and_q4() {
        assert_eq!(sp(&gf(2, 1), 2).unwrap().proj_order(), 720);
        assert_eq!(sp(&gf(2, 2), 2).unwrap().proj_order(), 979200);
    }

    #[test]
    fn orthogonal_stabilizers_inside_sp4_2() {
        let s = sp(&gf(2, 1), 2).unwrap();
        let (oplus, qp) = orthogonal_stabilizer(&s, 1).unwrap();
        let (ominus, qm) = orthogonal_stabilizer(&s, -1).unwrap();
        assert_eq!(oplus.proj_order(), 72);
        assert_eq!(ominus.proj_order(), 120);
        assert_eq!(qp.epsilon().unwrap(), 1);
        assert_eq!(qm.epsilon().unwrap(), -1);
    }

    #[test]
    fn wreath_product_of_two_lines() {
        assert_eq!(sp2_wreath(&gf(2, 1), 2).unwrap().proj_order(), 72);
        assert_eq!(sp2_wreath(&gf(2, 2), 2).unwrap().proj_order(), 7200);
    }

    #[test]
    fn extension_field_line_inside_sp4() {
        // Sp2(4).2 inside Sp4(2), isomorphic to GO-4(2)
        let g = extension_field_sp(&gf(2, 1), 2, 1).unwrap();
        assert_eq!(g.proj_order(), 120);
        assert_eq!(g.dim(), 4);
        // Sp2(16).2 inside Sp4(4)
        let h = extension_field_sp(&gf(2, 2), 2, 1).unwrap();
        assert_eq!(h.proj_order(), 8160);
    }

    #[test]
    fn subfield_embedding() {
        let small = sp(&gf(2, 1), 2).unwrap();
        let emb = subfield_group(&small, &gf(2, 2), "Sp4(2)b").unwrap();
        assert_eq!(emb.proj_order(), 720);
        assert_eq!(emb.field().q(), 4);
    }

    #[test]
    fn gsp_over_gf9_line() {
        // PGSp2(9) = PGL2(9), order 720
        let g = gsp(&gf(3, 2), 1).unwrap();
        assert_eq!(g.proj_order(), 720);
    }

    #[test]
    fn transvections_preserve_the_form() {
        let field = gf(2, 2);
        let gram = forms::standard_symplectic_gram(&field, 2);
        let u: Vec<FieldElem> = vec![FieldElem(1), FieldElem(2), FieldElem(0), FieldElem(3)];
        let t = transvection(&gram, &u, field.generator());
        assert_eq!(forms::similarity_tau(&t, &gram).unwrap(), field.one());
        // order p in characteristic p
        assert_eq!(t.order_budgeted(10).unwrap(), 2);
    }
}
