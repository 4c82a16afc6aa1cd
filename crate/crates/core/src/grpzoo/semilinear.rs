//! Semilinear maps v -> (v^(phi^i)) * A where phi is the Frobenius x -> x^p
//! of the matrix field. The pair (A, i) composes left-to-right as
//! (A, i)(B, j) = (A^(phi^j) * B, i + j mod f), matching the right action on
//! row vectors.

use crate::error::{Error, Result};
use crate::ffield::FieldElem;
use super::matrix::MatF;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    mat: MatF,
    frob: u32,
}

impl std::fmt::Debug for SemilinearMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SemilinearMap(frob {}, {:?})", self.frob, self.mat)
    }
}

impl SemilinearMap {
    pub fn linear(mat: MatF) -> SemilinearMap {
        assert_eq!(mat.rows(), mat.cols());
        SemilinearMap { mat, frob: 0 }
    }

    pub fn new(mat: MatF, frob: u32) -> SemilinearMap {
        assert_eq!(mat.rows(), mat.cols());
        let f = mat.field().f();
        SemilinearMap { mat, frob: frob % f }
    }

    pub fn identity_like(mat: &MatF) -> SemilinearMap {
        SemilinearMap::linear(MatF::identity(mat.field(), mat.rows()))
    }

    pub fn mat(&self) -> &MatF {
        &self.mat
    }
    pub fn frob(&self) -> u32 {
        self.frob
    }
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }
    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.mat.is_identity()
    }

    /// Require a plain matrix; errors for proper semilinear maps.
    pub fn linear_part_only(&self) -> Result<&MatF> {
        if self.is_linear() {
            Ok(&self.mat)
        } else {
            Err(Error::NotLinear)
        }
    }

    pub fn apply(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let field = self.mat.field();
        let tw: Vec<FieldElem> = v.iter().map(|&x| field.frobenius(x, self.frob)).collect();
        self.mat.vec_mul(&tw)
    }

    /// Left-to-right composition: (self then other).
    pub fn compose(&self, other: &SemilinearMap) -> SemilinearMap {
        let f = self.mat.field().f();
        let mat = self.mat.frobenius(other.frob).mul(&other.mat);
        SemilinearMap { mat, frob: (self.frob + other.frob) % f }
    }

    pub fn inverse(&self) -> SemilinearMap {
        let f = self.mat.field().f();
        let j = (f - self.frob) % f;
        let inv = self.mat.inverse().expect("singular semilinear map").frobenius(j);
        SemilinearMap { mat: inv, frob: j }
    }

    pub fn conj(&self, by: &SemilinearMap) -> SemilinearMap {
        by.inverse().compose(self).compose(by)
    }

    pub fn pow(&self, k: i64) -> SemilinearMap {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let mut acc = SemilinearMap::identity_like(&self.mat);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    pub fn order_budgeted(&self, budget: u64) -> Result<u64> {
        let mut acc = self.clone();
        for k in 1..=budget {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.compose(self);
        }
        Err(Error::BudgetExceeded(format!("semilinear order exceeds {budget}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldSpec;
    use std::sync::Arc;

    fn gf9() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::make(3, 2, None).unwrap())
    }

    #[test]
    fn composition_law() {
        let f = gf9();
        let a = SemilinearMap::new(MatF::from_rows(&f, &[vec![1, 3], vec![0, 1]]), 1);
        let b = SemilinearMap::new(MatF::from_rows(&f, &[vec![4, 1], vec![2, 7]]), 1);
        let v = vec![FieldElem(5), FieldElem(8)];
        let lhs = b.apply(&a.apply(&v));
        let rhs = a.compose(&b).apply(&v);
        assert_eq!(lhs, rhs);
        assert_eq!(a.compose(&b).frob(), 0);
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf9();
        let a = SemilinearMap::new(MatF::from_rows(&f, &[vec![1, 3], vec![2, 1]]), 1);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn frobenius_order_matches_field_degree() {
        let f = gf9();
        let phi = SemilinearMap::new(MatF::identity(&f, 2), 1);
        assert_eq!(phi.order_budgeted(10).unwrap(), 2);
        let a = SemilinearMap::new(MatF::from_rows(&f, &[vec![0, 1], vec![2, 0]]), 0);
        // [[0,1],[-1,0]] has order 4 in SL2(9)
        assert_eq!(a.order_budgeted(10).unwrap(), 4);
    }

    #[test]
    fn pow_and_conj() {
        let f = gf9();
        let a = SemilinearMap::new(MatF::from_rows(&f, &[vec![1, 1], vec![0, 1]]), 1);
        assert_eq!(a.pow(3), a.compose(&a).compose(&a));
        assert!(a.pow(-2).compose(&a.pow(2)).is_identity());
        let h = SemilinearMap::linear(MatF::from_rows(&f, &[vec![2, 1], vec![1, 1]]));
        let c = a.conj(&h);
        assert_eq!(c.order_budgeted(100).unwrap(), a.order_budgeted(100).unwrap());
    }
}
