//! Alternating bilinear forms and (even-characteristic) quadratic forms.
//!
//! Bilinear forms are Gram matrices, evaluated as (u, v) = u * F * v^T on row
//! vectors. The standard symplectic form uses the hyperbolic basis
//! e1, f1, ..., em, fm with (e_i, f_i) = 1.
//!
//! A quadratic form polarizing to a fixed Gram matrix F is stored as its
//! vector of basis values (Q(b_1), ..., Q(b_n)): in characteristic 2 these
//! determine Q via Q(sum c_i b_i) = sum c_i^2 Q(b_i) + sum_{i<j} c_i c_j F_ij,
//! and the family of such forms has size q^n.

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec, ZERO};
use super::matrix::MatF;
use super::semilinear::SemilinearMap;
use std::sync::Arc;

/// (u, v) = u * F * v^T.
pub fn bilinear(gram: &MatF, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
    let f = gram.field();
    let mut acc = ZERO;
    for (i, &ui) in u.iter().enumerate() {
        if ui == ZERO {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            let g = gram.at(i, j);
            if vj != ZERO && g != ZERO {
                acc = f.add(acc, f.mul(f.mul(ui, g), vj));
            }
        }
    }
    acc
}

/// Block-diagonal Gram matrix of m hyperbolic pairs, ordered e1,f1,...,em,fm.
pub fn standard_symplectic_gram(field: &Arc<FieldSpec>, m: usize) -> MatF {
    let mut g = MatF::zero(field, 2 * m, 2 * m);
    for i in 0..m {
        g.set(2 * i, 2 * i + 1, field.one());
        g.set(2 * i + 1, 2 * i, field.neg(field.one()));
    }
    g
}

pub fn is_alternating(gram: &MatF) -> bool {
    if gram.rows() != gram.cols() {
        return false;
    }
    let f = gram.field();
    for i in 0..gram.rows() {
        if gram.at(i, i) != ZERO {
            return false;
        }
        for j in 0..i {
            if gram.at(i, j) != f.neg(gram.at(j, i)) {
                return false;
            }
        }
    }
    true
}

/// The scalar tau with g * F * g^T = tau * F, if it exists.
pub fn similarity_tau(g: &MatF, gram: &MatF) -> Result<FieldElem> {
    let f = g.field();
    let m = g.mul(gram).mul(&g.transpose());
    let (mut i0, mut j0) = (0, 0);
    'outer: for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            if gram.at(i, j) != ZERO {
                (i0, j0) = (i, j);
                break 'outer;
            }
        }
    }
    let tau = f.div(m.at(i0, j0), gram.at(i0, j0));
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            if m.at(i, j) != f.mul(tau, gram.at(i, j)) {
                return Err(Error::NotASimilarity);
            }
        }
    }
    Ok(tau)
}

/// Base change P (rows = new basis) with P * F * P^T equal to the standard
/// symplectic Gram matrix. Errors when F is not alternating or degenerate.
pub fn symplectic_basis(gram: &MatF) -> Result<MatF> {
    if !is_alternating(gram) {
        return Err(Error::FormMismatch);
    }
    let field = gram.field().clone();
    let n = gram.rows();
    if n % 2 != 0 {
        return Err(Error::FormMismatch);
    }
    let mut pool: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            let mut v = vec![ZERO; n];
            v[i] = field.one();
            v
        })
        .collect();
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(n);
    while !pool.is_empty() {
        let u = pool.swap_remove(0);
        let Some(k) = pool.iter().position(|w| bilinear(gram, &u, w) != ZERO) else {
            // u pairs trivially with everything left: the form is degenerate
            return Err(Error::FormMismatch);
        };
        let mut v = pool.swap_remove(k);
        let c = field.inv(bilinear(gram, &u, &v));
        for x in v.iter_mut() {
            *x = field.mul(*x, c);
        }
        // correct the rest into the perp of <u, v>
        for w in pool.iter_mut() {
            let a = bilinear(gram, w, &v);
            let b = bilinear(gram, w, &u);
            for i in 0..n {
                // w -= a*u, w += b*v
                let t = field.sub(w[i], field.mul(a, u[i]));
                w[i] = field.add(t, field.mul(b, v[i]));
            }
        }
        rows.push(u);
        rows.push(v);
    }
    let p = MatF::from_rows(
        &field,
        &rows.iter().map(|r| r.iter().map(|e| e.0).collect()).collect::<Vec<_>>(),
    );
    let target = standard_symplectic_gram(&field, n / 2);
    if p.mul(gram).mul(&p.transpose()) != target {
        return Err(Error::FormMismatch);
    }
    Ok(p)
}

/// Quadratic form in characteristic 2 polarizing to a fixed alternating Gram
/// matrix, stored by its basis values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    gram: Arc<MatF>,
    diag: Vec<FieldElem>,
}

impl std::fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadForm{:?}", self.diag.iter().map(|e| e.0).collect::<Vec<_>>())
    }
}

impl QuadForm {
    pub fn new(gram: Arc<MatF>, diag: Vec<FieldElem>) -> Result<QuadForm> {
        if gram.field().p() != 2 {
            return Err(Error::UnsupportedCase(
                "quadratic form family indexed by basis values needs characteristic 2".into(),
            ));
        }
        if !is_alternating(&gram) || diag.len() != gram.rows() {
            return Err(Error::FormMismatch);
        }
        Ok(QuadForm { gram, diag })
    }

    pub fn gram(&self) -> &Arc<MatF> {
        &self.gram
    }
    pub fn diag(&self) -> &[FieldElem] {
        &self.diag
    }

    pub fn key(&self) -> Vec<u32> {
        self.diag.iter().map(|e| e.0).collect()
    }

    pub fn eval(&self, v: &[FieldElem]) -> FieldElem {
        let f = self.gram.field();
        let mut acc = ZERO;
        for (i, &vi) in v.iter().enumerate() {
            if vi == ZERO {
                continue;
            }
            acc = f.add(acc, f.mul(f.mul(vi, vi), self.diag[i]));
            for (j, &vj) in v.iter().enumerate().skip(i + 1) {
                let g = self.gram.at(i, j);
                if vj != ZERO && g != ZERO {
                    acc = f.add(acc, f.mul(f.mul(vi, vj), g));
                }
            }
        }
        acc
    }

    /// Right action of an isometry-or-Frobenius map on the form family:
    /// (Q . g)(v) = (Q(v g^{-1}))^(phi^i). The result must polarize to the
    /// same Gram matrix, which pins g to the symplectic group extended by
    /// field automorphisms.
    pub fn act(&self, g: &SemilinearMap) -> Result<QuadForm> {
        let field = self.gram.field().clone();
        let n = self.gram.rows();
        let ginv = g.inverse();
        let mut diag = Vec::with_capacity(n);
        let mut basis_img = Vec::with_capacity(n);
        for i in 0..n {
            let mut b = vec![ZERO; n];
            b[i] = field.one();
            let w = ginv.apply(&b);
            diag.push(field.frobenius(self.eval(&w), g.frob()));
            basis_img.push(w);
        }
        // polarization check: B(b_i g^{-1}, b_j g^{-1})^(phi) must equal F_ij
        for i in 0..n {
            for j in i + 1..n {
                let b = field.frobenius(bilinear(&self.gram, &basis_img[i], &basis_img[j]), g.frob());
                if b != self.gram.at(i, j) {
                    return Err(Error::DomainNotStable);
                }
            }
        }
        Ok(QuadForm { gram: self.gram.clone(), diag })
    }

    pub fn singular_count(&self) -> u64 {
        let field = self.gram.field();
        let n = self.gram.rows();
        let q = field.q();
        let mut count = 0u64;
        let mut v = vec![ZERO; n];
        loop {
            if self.eval(&v) == ZERO {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                let next = v[i].0 + 1;
                if (next as u64) < q {
                    v[i] = FieldElem(next);
                    break;
                }
                v[i] = ZERO;
                i += 1;
            }
        }
    }

    /// Arf invariant over GF(2) relative to the standard hyperbolic pairing
    /// of consecutive basis vectors: Tr(sum Q(e_i) Q(f_i)).
    pub fn arf(&self) -> Result<u32> {
        let field = self.gram.field();
        let n = self.gram.rows();
        if *self.gram != standard_symplectic_gram(field, n / 2) {
            return Err(Error::FormMismatch);
        }
        let mut s = ZERO;
        for i in 0..n / 2 {
            s = field.add(s, field.mul(self.diag[2 * i], self.diag[2 * i + 1]));
        }
        // absolute trace to GF(2)
        let mut tr = ZERO;
        let mut t = s;
        for _ in 0..field.f() {
            tr = field.add(tr, t);
            t = field.mul(t, t);
        }
        Ok(tr.0)
    }

    /// +1 or -1, decided by the singular vector count and cross-checked
    /// against the Arf invariant.
    pub fn epsilon(&self) -> Result<i32> {
        let field = self.gram.field();
        let n = self.gram.rows();
        let m = (n / 2) as u32;
        let q = field.q();
        let plus = (q.pow(m) - 1) * (q.pow(m - 1) + 1) + 1;
        let minus = (q.pow(m) + 1) * (q.pow(m - 1) - 1) + 1;
        let count = self.singular_count();
        let eps = if count == plus {
            1
        } else if count == minus {
            -1
        } else {
            return Err(Error::FormMismatch);
        };
        let arf = self.arf()?;
        let arf_eps = if arf == 0 { 1 } else { -1 };
        if arf_eps != eps {
            return Err(Error::FormMismatch);
        }
        Ok(eps)
    }
}

/// All q^n quadratic forms polarizing to the given Gram matrix.
pub fn enumerate_quadforms(gram: &Arc<MatF>) -> Result<Vec<QuadForm>> {
    let field = gram.field().clone();
    let n = gram.rows();
    let q = field.q();
    let total = q.checked_pow(n as u32).ok_or(Error::Overflow("form count"))?;
    let mut out = Vec::with_capacity(total as usize);
    let mut diag = vec![ZERO; n];
    loop {
        out.push(QuadForm::new(gram.clone(), diag.clone())?);
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            let next = diag[i].0 + 1;
            if (next as u64) < q {
                diag[i] = FieldElem(next);
                break;
            }
            diag[i] = ZERO;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, f: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::make(p, f, None).unwrap())
    }

    #[test]
    fn standard_gram_is_alternating_and_selfpaired() {
        for (p, f, m) in [(2, 2, 2), (3, 2, 3), (2, 1, 4)] {
            let fld = gf(p, f);
            let g = standard_symplectic_gram(&fld, m);
            assert!(is_alternating(&g));
            assert_eq!(g.rank(), 2 * m);
        }
    }

    #[test]
    fn symplectic_basis_normalizes_a_scrambled_gram() {
        let fld = gf(2, 2);
        let j = standard_symplectic_gram(&fld, 2);
        let a = MatF::from_rows(
            &fld,
            &[vec![1, 2, 0, 1], vec![0, 1, 1, 3], vec![1, 0, 1, 0], vec![2, 1, 0, 1]],
        );
        assert!(a.inverse().is_some());
        let g = a.mul(&j).mul(&a.transpose());
        let p = symplectic_basis(&g).unwrap();
        assert_eq!(p.mul(&g).mul(&p.transpose()), j);
    }

    #[test]
    fn symplectic_basis_rejects_degenerate() {
        let fld = gf(3, 1);
        let g = MatF::zero(&fld, 4, 4);
        assert!(matches!(symplectic_basis(&g), Err(Error::FormMismatch)));
    }

    #[test]
    fn similarity_tau_of_scaled_identity_action() {
        let fld = gf(3, 2);
        let j = standard_symplectic_gram(&fld, 2);
        // diag(z, 1, z, 1) scales the form by z
        let z = fld.generator();
        let mut d = MatF::identity(&fld, 4);
        d.set(0, 0, z);
        d.set(2, 2, z);
        assert_eq!(similarity_tau(&d, &j).unwrap(), z);
        let mut bad = MatF::identity(&fld, 4);
        bad.set(0, 0, z);
        assert!(matches!(similarity_tau(&bad, &j), Err(Error::NotASimilarity)));
    }

    #[test]
    fn quadform_types_over_gf2_and_gf4() {
        for (p, f, m, plus_expect, minus_expect) in [(2u32, 1u32, 2usize, 10u64, 6u64), (2, 2, 2, 76, 52)] {
            let fld = gf(p, f);
            let gram = Arc::new(standard_symplectic_gram(&fld, m));
            let forms = enumerate_quadforms(&gram).unwrap();
            assert_eq!(forms.len() as u64, fld.q().pow(2 * m as u32));
            let mut plus = 0u64;
            let mut minus = 0u64;
            let mut seen_counts = std::collections::HashSet::new();
            for q in &forms {
                match q.epsilon().unwrap() {
                    1 => {
                        plus += 1;
                        seen_counts.insert((1, q.singular_count()));
                    }
                    _ => {
                        minus += 1;
                        seen_counts.insert((-1, q.singular_count()));
                    }
                }
            }
            assert!(seen_counts.contains(&(1, plus_expect)));
            assert!(seen_counts.contains(&(-1, minus_expect)));
            let qq = fld.q();
            // total q^(2m) splits as q^m-1 copies weighting: #plus - #minus = q^m
            assert_eq!(plus + minus, qq.pow(2 * m as u32));
            assert_eq!(plus - minus, qq.pow(m as u32));
        }
    }

    #[test]
    fn quadform_action_preserves_type() {
        let fld = gf(2, 2);
        let gram = Arc::new(standard_symplectic_gram(&fld, 2));
        let q0 = QuadForm::new(gram.clone(), vec![ZERO, ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(q0.epsilon().unwrap(), 1);
        // a transvection along e1: v -> v + (v, e1) e1 lies in Sp4(4)
        let mut t = MatF::identity(&fld, 4);
        t.set(1, 0, fld.one());
        let g = SemilinearMap::linear(t);
        let q1 = q0.act(&g).unwrap();
        assert_eq!(q1.epsilon().unwrap(), 1);
        // right action: acting by g then g^-1 returns the original form
        let back = q1.act(&g.inverse()).unwrap();
        assert_eq!(back, q0);
    }
}
