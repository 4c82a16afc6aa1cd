//! Factories for the torus elements used as generation witnesses.
//!
//! The common frame realizes E = GF(q0^{2d}) as a 2d-dimensional space over
//! F = GF(q0).  With lambda chosen so that lambda^{q0^d} = -lambda, the form
//!
//!   (x, y) = Tr_{E/F}(lambda * x * y^{q0^d})
//!
//! is alternating and nondegenerate, and multiplication by any element of
//! norm one over the half field GF(q0^d) preserves it.  Multiplication by a
//! generator of that norm-one group is an irreducible symplectic element of
//! order q0^d + 1; dropping lambda gives the symmetric analogue inside an
//! orthogonal group of minus type.  Hyperbolic companions [B, B^{-T}] supply
//! the tori of order q0^d - 1.

use std::sync::Arc;

use super::forms;
use super::matrix::MatF;
use super::polyf;
use crate::error::{Error, Result};
use crate::ffield::{lcm, FieldElem, FieldSpec};

/// A field extension E/F with the bookkeeping to expand E-scalars into
/// F-matrices acting on the power basis {eta^j}.
pub struct ExtFrame {
    pub base: Arc<FieldSpec>,
    pub big: Arc<FieldSpec>,
    pub deg: usize,
    basis_inv: MatF,
}

impl ExtFrame {
    pub fn new(base: &Arc<FieldSpec>, deg: usize) -> Result<ExtFrame> {
        let p = base.p();
        let f0 = base.f();
        let big = Arc::new(FieldSpec::make(p, f0 * deg as u32, None)?);
        let prime = Arc::new(FieldSpec::make(p, 1, None)?);
        let eta = big.generator();
        let theta = big.embed_from(base.generator(), base)?;
        let mut rows = Vec::with_capacity(big.f() as usize);
        for j in 0..deg {
            for l in 0..f0 as usize {
                let x = big.mul(big.pow(eta, j as i64), big.pow(theta, l as i64));
                rows.push(big.coeffs(x));
            }
        }
        let basis_mat = MatF::from_rows(&prime, &rows);
        let basis_inv = basis_mat.inverse().ok_or(Error::ReduciblePolynomial)?;
        Ok(ExtFrame { base: Arc::clone(base), big, deg, basis_inv })
    }

    /// Coordinates of x over the base field in the eta power basis.
    pub fn expand(&self, x: FieldElem) -> Vec<FieldElem> {
        let f0 = self.base.f() as usize;
        let coords: Vec<FieldElem> = self.big.coeffs(x).into_iter().map(FieldElem).collect();
        let a = self.basis_inv.vec_mul(&coords);
        (0..self.deg)
            .map(|j| {
                let chunk: Vec<u32> = (0..f0).map(|l| a[j * f0 + l].0).collect();
                self.base.from_coeffs(&chunk)
            })
            .collect()
    }

    pub fn trace(&self, x: FieldElem) -> FieldElem {
        let f0 = self.base.f();
        let mut t = self.big.zero();
        for i in 0..self.deg as u32 {
            t = self.big.add(t, self.big.frobenius(x, f0 * i));
        }
        self.big
            .retract_to(t, &self.base)
            .expect("compatible subfield")
            .expect("trace lands in the base field")
    }

    /// Multiplication by c as a base-field matrix (rows act on the right).
    pub fn mult_mat(&self, c: FieldElem) -> MatF {
        let eta = self.big.generator();
        let mut out = MatF::zero(&self.base, self.deg, self.deg);
        for j in 0..self.deg {
            let img = self.big.mul(self.big.pow(eta, j as i64), c);
            for (l, v) in self.expand(img).into_iter().enumerate() {
                out.set(j, l, v);
            }
        }
        out
    }

    /// Gram matrix of (x, y) = Tr(lambda * x * y^{p^half}) on the eta basis.
    pub fn twisted_gram(&self, lambda: FieldElem, half: u32) -> MatF {
        let eta = self.big.generator();
        let mut g = MatF::zero(&self.base, self.deg, self.deg);
        for j in 0..self.deg {
            for k in 0..self.deg {
                let y = self.big.frobenius(self.big.pow(eta, k as i64), half);
                let x = self.big.mul(lambda, self.big.mul(self.big.pow(eta, j as i64), y));
                g.set(j, k, self.trace(x));
            }
        }
        g
    }
}

/// Shared setup for the symplectic frame on GF(q0^{2d}): the frame, the norm
/// one generator a, and the change of basis into the standard Gram.
struct SympFrame {
    frame: ExtFrame,
    a: FieldElem,
    pmat: MatF,
    pinv: MatF,
}

fn symplectic_frame(d: u32, base: &Arc<FieldSpec>) -> Result<SympFrame> {
    let frame = ExtFrame::new(base, 2 * d as usize)?;
    let big = &frame.big;
    let xi = big.generator();
    let qd = base.q().pow(d);
    let lambda = if base.p() == 2 {
        big.one()
    } else {
        big.pow(xi, ((qd + 1) / 2) as i64)
    };
    let gram = frame.twisted_gram(lambda, base.f() * d);
    if !forms::is_alternating(&gram) {
        return Err(Error::FormMismatch);
    }
    let pmat = forms::symplectic_basis(&gram)?;
    let pinv = pmat.inverse().expect("base change is invertible");
    let a = big.pow(xi, (qd - 1) as i64);
    Ok(SympFrame { frame, a, pmat, pinv })
}

impl SympFrame {
    fn standardize(&self, c: FieldElem) -> MatF {
        self.pmat.mul(&self.frame.mult_mat(c)).mul(&self.pinv)
    }
}

fn check_order(m: &MatF, expected: u64) -> Result<()> {
    let got = m.order_budgeted(expected + 1)?;
    if got != expected {
        return Err(Error::OrderMismatch { expected: expected as u128, computed: got as u128 });
    }
    Ok(())
}

fn check_tau(m: &MatF, expected: FieldElem) -> Result<()> {
    let field = m.field();
    let j = forms::standard_symplectic_gram(field, m.rows() / 2);
    if forms::similarity_tau(m, &j)? != expected {
        return Err(Error::FormMismatch);
    }
    Ok(())
}

/// Irreducible symplectic element of order q0^d + 1 in Sp_{2d}(q0), written
/// on the standard basis.  Its centralizer is the cyclic torus it generates.
pub fn element_a(d: u32, base: &Arc<FieldSpec>) -> Result<MatF> {
    assert!(d >= 1, "torus rank must be positive");
    let sf = symplectic_frame(d, base)?;
    let out = sf.standardize(sf.a);
    check_order(&out, base.q().pow(d) + 1)?;
    check_tau(&out, base.one())?;
    if !polyf::is_irreducible(base, &out.charpoly()) {
        return Err(Error::ReduciblePolynomial);
    }
    Ok(out)
}

/// Minimal polynomial over the base field of the canonical generator of its
/// degree-d extension, as base-field coefficients.
fn primitive_minpoly(d: u32, base: &Arc<FieldSpec>) -> Result<Vec<FieldElem>> {
    let mid = FieldSpec::make(base.p(), base.f() * d, None)?;
    let kappa = mid.generator();
    let mut poly = vec![mid.one()];
    for i in 0..d {
        poly = polyf::mul_x_minus(&mid, &poly, mid.frobenius(kappa, base.f() * i));
    }
    poly.into_iter()
        .map(|c| {
            mid.retract_to(c, base)
                .expect("compatible subfield")
                .ok_or(Error::ReduciblePolynomial)
        })
        .collect()
}

/// Companion matrix (row convention) of a monic polynomial.
fn companion(base: &Arc<FieldSpec>, poly: &[FieldElem]) -> MatF {
    let d = poly.len() - 1;
    let mut m = MatF::zero(base, d, d);
    for i in 0..d - 1 {
        m.set(i, i + 1, base.one());
    }
    for j in 0..d {
        m.set(d - 1, j, base.neg(poly[j]));
    }
    m
}

/// Conjugate a block matrix written on (e_1..e_d, f_1..f_d) into the
/// standard interleaved basis (e_1, f_1, ..., e_d, f_d).
fn interleave(block: &MatF) -> MatF {
    let n = block.rows();
    let d = n / 2;
    let field = block.field();
    let mut pm = MatF::zero(field, n, n);
    for i in 0..d {
        pm.set(2 * i, i, field.one());
        pm.set(2 * i + 1, d + i, field.one());
    }
    pm.mul(block).mul(&pm.transpose())
}

fn hyperbolic_pair(d: u32, base: &Arc<FieldSpec>) -> Result<(MatF, MatF)> {
    let poly = primitive_minpoly(d, base)?;
    let b = companion(base, &poly);
    let bti = b.inverse().expect("companion of a nonzero polynomial").transpose();
    Ok((b, bti))
}

/// Symplectic element of order q0^d - 1 acting as [B, B^{-T}] on a pair of
/// complementary totally isotropic subspaces, B the companion matrix of a
/// primitive polynomial of degree d.
pub fn element_b(d: u32, base: &Arc<FieldSpec>) -> Result<MatF> {
    assert!(d >= 2, "hyperbolic torus needs d >= 2");
    let (b, bti) = hyperbolic_pair(d, base)?;
    let out = interleave(&MatF::block_diag(base, &[b, bti]));
    check_order(&out, base.q().pow(d) - 1)?;
    check_tau(&out, base.one())?;
    for i in 0..d as usize {
        for j in 0..d as usize {
            if out.at(2 * i, 2 * j + 1) != base.zero() {
                return Err(Error::FormMismatch);
            }
        }
    }
    if d % 2 == 1 {
        let cp = out.charpoly();
        if !polyf::is_squarefree(base, &cp) || !polyf::splits_in_extension(base, &cp, d) {
            return Err(Error::ReduciblePolynomial);
        }
    }
    Ok(out)
}

/// Similitude of order (q0^d + 1)(q0 - 1) whose (q0-1)-th power is the
/// element produced by `element_a` and whose similarity factor is the
/// canonical primitive scalar.  Only exists in odd characteristic.
pub fn element_c(d: u32, base: &Arc<FieldSpec>) -> Result<MatF> {
    if base.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let sf = symplectic_frame(d, base)?;
    let big = &sf.frame.big;
    let xi = big.generator();
    let q0 = base.q();
    let qd = q0.pow(d);
    let u = (qd - 1) / (q0 - 1);
    let zeta = base.generator();
    // Candidates xi^{uv} run over the group of similitudes in E*; v = 1 mod
    // (q0^d + 1) pins the (q0-1)-th power to a, and some residue of v mod
    // (q0-1) realizes the canonical similarity factor.
    let mut c = None;
    for k in 0..q0 - 1 {
        let v = 1 + k * (qd + 1);
        let cand = big.pow(xi, (u * v % (big.q() - 1)) as i64);
        let nrm = big.mul(cand, big.frobenius(cand, base.f() * d));
        if big.retract_to(nrm, base)? == Some(zeta) {
            c = Some(cand);
            break;
        }
    }
    let c = c.ok_or(Error::SearchExhausted)?;
    if big.pow(c, (q0 - 1) as i64) != sf.a {
        return Err(Error::SearchExhausted);
    }
    let out = sf.standardize(c);
    check_order(&out, (qd + 1) * (q0 - 1))?;
    check_tau(&out, zeta)?;
    let a_mat = sf.standardize(sf.a);
    if out.pow((q0 - 1) as i64) != a_mat {
        return Err(Error::FormMismatch);
    }
    Ok(out)
}

/// Similitude of order q0^d - 1 with canonical similarity factor, acting as
/// [zeta*B, B^{-T}] on a hyperbolic pair.  Odd characteristic only.
pub fn element_d(d: u32, base: &Arc<FieldSpec>) -> Result<MatF> {
    if base.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    assert!(d >= 2, "hyperbolic torus needs d >= 2");
    let zeta = base.generator();
    let (b, bti) = hyperbolic_pair(d, base)?;
    let out = interleave(&MatF::block_diag(base, &[b.scale(zeta), bti]));
    check_order(&out, base.q().pow(d) - 1)?;
    check_tau(&out, zeta)?;
    Ok(out)
}

/// Orthogonal counterpart of `element_a`: multiplication by the norm-one
/// generator preserving the symmetric form Tr(x * y^{q0^d}), an element of
/// SO^-_{2d}(q0) of order q0^d + 1.  Returns the matrix and its Gram.
fn orth_minus_block(d: u32, base: &Arc<FieldSpec>) -> Result<(MatF, MatF)> {
    let frame = ExtFrame::new(base, 2 * d as usize)?;
    let big = &frame.big;
    let a = big.pow(big.generator(), (base.q().pow(d) - 1) as i64);
    let gram = frame.twisted_gram(big.one(), base.f() * d);
    let m = frame.mult_mat(a);
    if m.mul(&gram).mul(&m.transpose()) != gram || m.det() != base.one() {
        return Err(Error::FormMismatch);
    }
    check_order(&m, base.q().pow(d) + 1)?;
    Ok((m, gram))
}

/// Orthogonal counterpart of `element_b`: [B, B^{-T}] preserving the
/// hyperbolic symmetric form [[0, I], [I, 0]], an element of SO^+_{2d}(q0)
/// of order q0^d - 1.
fn orth_plus_block(d: u32, base: &Arc<FieldSpec>) -> Result<(MatF, MatF)> {
    let (b, bti) = hyperbolic_pair(d, base)?;
    let dd = d as usize;
    let mut gram = MatF::zero(base, 2 * dd, 2 * dd);
    for i in 0..dd {
        gram.set(i, dd + i, base.one());
        gram.set(dd + i, i, base.one());
    }
    let m = MatF::block_diag(base, &[b, bti]);
    if m.mul(&gram).mul(&m.transpose()) != gram || m.det() != base.one() {
        return Err(Error::FormMismatch);
    }
    check_order(&m, base.q().pow(d) - 1)?;
    Ok((m, gram))
}

/// Which family of classical groups a witness element is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// Symplectic groups of rank m >= 3.
    S,
    /// Odd-dimensional orthogonal groups of rank m >= 3 (odd q only).
    O,
    /// Symplectic groups of rank 2.
    S4,
}

/// Which kind of coset the witness is aimed at: a field automorphism coset
/// or a coset mixing in the diagonal similitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetKind {
    Field,
    DiagField,
}

/// Build the distinguished witness element y for the given case, rank and
/// base field.  The result lives in Sp_{2m}(q0) or GSp_{2m}(q0) (cases S,
/// S4) or in SO_{2m+1}(q0) with respect to an internally validated Gram
/// (case O); orders are checked against the torus predictions.
pub fn witness_element(
    case: WitnessCase,
    m: u32,
    base: &Arc<FieldSpec>,
    kind: CosetKind,
) -> Result<MatF> {
    let q0 = base.q();
    if kind == CosetKind::DiagField && base.p() == 2 {
        return Err(Error::UnsupportedCase(
            "diagonal-twisted cosets need odd characteristic".into(),
        ));
    }
    match case {
        WitnessCase::S => {
            if m < 3 {
                return Err(Error::UnsupportedCase("case S needs rank at least 3".into()));
            }
            let (b1, b2) = match (kind, m % 2 == 1) {
                (CosetKind::Field, true) => (element_a(1, base)?, element_a(m - 1, base)?),
                (CosetKind::Field, false) => (element_a(1, base)?, element_b(m - 1, base)?),
                (CosetKind::DiagField, true) => (element_c(1, base)?, element_c(m - 1, base)?),
                (CosetKind::DiagField, false) => (element_c(1, base)?, element_d(m - 1, base)?),
            };
            let expected = lcm(
                b1.order_budgeted(u64::MAX)?,
                b2.order_budgeted(u64::MAX)?,
            );
            let out = MatF::block_diag(base, &[b1, b2]);
            check_order(&out, expected)?;
            let tau = match kind {
                CosetKind::Field => base.one(),
                CosetKind::DiagField => base.generator(),
            };
            check_tau(&out, tau)?;
            Ok(out)
        }
        WitnessCase::S4 => {
            if m != 2 {
                return Err(Error::UnsupportedCase("case S4 is the rank-2 case".into()));
            }
            match kind {
                CosetKind::Field => element_a(2, base),
                CosetKind::DiagField => element_c(2, base),
            }
        }
        WitnessCase::O => {
            if m < 3 {
                return Err(Error::UnsupportedCase("case O needs rank at least 3".into()));
            }
            if base.p() == 2 {
                return Err(Error::UnsupportedCase(
                    "odd-dimensional orthogonal groups need odd q".into(),
                ));
            }
            let (b1, g1) = orth_minus_block(1, base)?;
            let (b2, g2) = if m % 2 == 1 {
                orth_minus_block(m - 1, base)?
            } else {
                orth_plus_block(m - 1, base)?
            };
            let one = MatF::identity(base, 1);
            let y0 = MatF::block_diag(base, &[b1, b2, one.clone()]);
            let gram = MatF::block_diag(base, &[g1, g2, one]);
            if y0.mul(&gram).mul(&y0.transpose()) != gram || y0.det() != base.one() {
                return Err(Error::FormMismatch);
            }
            let mid = if m % 2 == 1 { q0.pow(m - 1) + 1 } else { q0.pow(m - 1) - 1 };
            let full = lcm(q0 + 1, mid);
            check_order(&y0, full)?;
            match kind {
                // squaring lands the witness inside the simple group
                CosetKind::Field => {
                    let y = y0.pow(2);
                    check_order(&y, full / 2)?;
                    Ok(y)
                }
                CosetKind::DiagField => Ok(y0),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::classical;
    use crate::grpzoo::domain::Domain;
    use crate::grpzoo::semilinear::SemilinearMap;

    fn gf(p: u32, f: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::make(p, f, None).unwrap())
    }

    #[test]
    fn torus_elements_have_the_advertised_orders() {
        for (d, p, f) in [(1, 3, 1), (1, 5, 1), (2, 2, 1), (2, 3, 1), (3, 2, 1)] {
            let base = gf(p, f);
            let a = element_a(d, &base).unwrap();
            assert_eq!(a.order_budgeted(1 << 20).unwrap(), base.q().pow(d) + 1);
            assert!(polyf::is_irreducible(&base, &a.charpoly()));
        }
    }

    #[test]
    fn element_a_centralizer_is_the_torus_itself() {
        for (d, p, expect) in [(1u32, 3u32, 4u64), (2, 2, 5)] {
            let base = gf(p, 1);
            let spg = classical::sp(&base, d as usize).unwrap();
            let dom = Domain::nonzero_vectors(&base, 2 * d as usize);
            let g = spg.perm_group(&dom).unwrap();
            let a = dom.perm_of(&SemilinearMap::linear(element_a(d, &base).unwrap())).unwrap();
            let orbit = g.conj_orbit_with_stabilizer(&a).unwrap();
            assert_eq!(orbit.centralizer.order(), expect as u128);
        }
    }

    #[test]
    fn hyperbolic_elements_split_with_distinct_eigenvalues_when_odd() {
        let b = element_b(2, &gf(3, 1)).unwrap();
        assert_eq!(b.order_budgeted(100).unwrap(), 8);

        let base = gf(2, 1);
        let b = element_b(3, &base).unwrap();
        assert_eq!(b.order_budgeted(100).unwrap(), 7);
        let cp = b.charpoly();
        assert!(polyf::is_squarefree(&base, &cp));
        assert!(polyf::splits_in_extension(&base, &cp, 3));
    }

    #[test]
    fn similitude_square_root_of_the_torus_generator() {
        let base = gf(3, 1);
        let c = element_c(1, &base).unwrap();
        let a = element_a(1, &base).unwrap();
        assert_eq!(c.order_budgeted(100).unwrap(), 8);
        assert_eq!(c.pow(2), a);
        let j = forms::standard_symplectic_gram(&base, 1);
        assert_eq!(forms::similarity_tau(&c, &j).unwrap(), base.generator());

        // brute force over all 2x2 matrices: the solutions of g^2 = A with
        // canonical similarity factor are exactly the <A>-translates of C
        let zeta = base.generator();
        let mut sols = Vec::new();
        for bits in 0..81u32 {
            let entries = [bits % 3, bits / 3 % 3, bits / 9 % 3, bits / 27 % 3];
            let g = MatF::from_rows(&base, &[entries[..2].to_vec(), entries[2..].to_vec()]);
            if g.mul(&j).mul(&g.transpose()) == j.scale(zeta) && g.pow(2) == a {
                sols.push(g);
            }
        }
        assert!(sols.contains(&c));
        let translates: Vec<MatF> = (0..4).map(|k| c.mul(&a.pow(k))).collect();
        assert!(sols.iter().all(|g| translates.contains(g)));
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn twisted_hyperbolic_similitude() {
        let base = gf(3, 1);
        let d = element_d(2, &base).unwrap();
        assert_eq!(d.order_budgeted(100).unwrap(), 8);
        let j = forms::standard_symplectic_gram(&base, 2);
        assert_eq!(forms::similarity_tau(&d, &j).unwrap(), base.generator());
    }

    #[test]
    fn witnesses_for_symplectic_ranks() {
        let y = witness_element(WitnessCase::S, 3, &gf(2, 1), CosetKind::Field).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 15);
        let y = witness_element(WitnessCase::S, 4, &gf(3, 1), CosetKind::Field).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 52);
        let y = witness_element(WitnessCase::S, 3, &gf(3, 1), CosetKind::DiagField).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 40);
        let j = forms::standard_symplectic_gram(&gf(3, 1), 3);
        assert_eq!(forms::similarity_tau(&y, &j).unwrap(), gf(3, 1).generator());
    }

    #[test]
    fn witnesses_for_rank_two_and_orthogonal_cases() {
        let y = witness_element(WitnessCase::S4, 2, &gf(2, 1), CosetKind::Field).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 5);
        let y = witness_element(WitnessCase::S4, 2, &gf(3, 1), CosetKind::DiagField).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 20);
        let y = witness_element(WitnessCase::O, 3, &gf(3, 1), CosetKind::Field).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 10);
        let y = witness_element(WitnessCase::O, 4, &gf(3, 1), CosetKind::DiagField).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 52);
        let y = witness_element(WitnessCase::O, 4, &gf(3, 1), CosetKind::Field).unwrap();
        assert_eq!(y.order_budgeted(100).unwrap(), 26);
    }

    #[test]
    fn unsupported_witness_requests_are_rejected() {
        let e2 = gf(2, 1);
        let e3 = gf(3, 1);
        assert!(matches!(
            witness_element(WitnessCase::O, 3, &e2, CosetKind::Field),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(matches!(
            witness_element(WitnessCase::S, 2, &e3, CosetKind::Field),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(matches!(
            witness_element(WitnessCase::S4, 3, &e3, CosetKind::Field),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(matches!(
            witness_element(WitnessCase::S4, 2, &e2, CosetKind::DiagField),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(matches!(element_c(1, &e2), Err(Error::EvenCharacteristic)));
    }
}
