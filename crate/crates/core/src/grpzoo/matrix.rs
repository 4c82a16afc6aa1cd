//! Dense matrices over a finite field, row-major, acting on row vectors from
//! the right: v -> v*A. Dimensions stay tiny (<= 16), so plain O(n^3)
//! algorithms are used throughout.

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec, ZERO};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Clone)]
pub struct MatF {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl PartialEq for MatF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && *self.field == *other.field
    }
}
impl Eq for MatF {}

impl Hash for MatF {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.field.f().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        for e in &self.data {
            e.0.hash(state);
        }
    }
}

impl std::fmt::Debug for MatF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatF {}x{} over GF({})", self.rows, self.cols, self.field.q())?;
        for i in 0..self.rows {
            let row: Vec<u32> = (0..self.cols).map(|j| self.at(i, j).0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl MatF {
    pub fn zero(field: &Arc<FieldSpec>, rows: usize, cols: usize) -> MatF {
        MatF { field: field.clone(), rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(field: &Arc<FieldSpec>, n: usize) -> MatF {
        let mut m = MatF::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar_mat(field: &Arc<FieldSpec>, c: FieldElem, n: usize) -> MatF {
        let mut m = MatF::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Entries as packed field indices.
    pub fn from_rows(field: &Arc<FieldSpec>, rows: &[Vec<u32>]) -> MatF {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = MatF::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                assert!((v as u64) < field.q(), "entry {v} outside GF({})", field.q());
                m.set(i, j, FieldElem(v));
            }
        }
        m
    }

    pub fn block_diag(field: &Arc<FieldSpec>, blocks: &[MatF]) -> MatF {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = MatF::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols, "nonsquare block");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.at(i, j));
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    self.at(i, j) == if i == j { self.field.one() } else { ZERO }
                })
            })
    }

    pub fn is_scalar(&self) -> Option<FieldElem> {
        if self.rows != self.cols {
            return None;
        }
        let c = self.at(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.at(i, j) != (if i == j { c } else { ZERO }) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn mul(&self, other: &MatF) -> MatF {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        debug_assert!(*self.field == *other.field);
        let f = &self.field;
        let mut out = MatF::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b != ZERO {
                        let cur = out.at(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MatF) -> MatF {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &MatF) -> MatF {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn neg(&self) -> MatF {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.neg(*a);
        }
        out
    }

    pub fn scale(&self, c: FieldElem) -> MatF {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.mul(*a, c);
        }
        out
    }

    pub fn transpose(&self) -> MatF {
        let mut out = MatF::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == ZERO {
                continue;
            }
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a != ZERO {
                    out[j] = f.add(out[j], f.mul(vi, a));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: i64) -> MatF {
        assert_eq!(self.rows, self.cols);
        if k < 0 {
            return self.inverse().expect("negative power of singular matrix").pow(-k);
        }
        let mut acc = MatF::identity(&self.field, self.rows);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order; errors if it exceeds `budget`.
    pub fn order_budgeted(&self, budget: u64) -> Result<u64> {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.clone();
        for k in 1..=budget {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.mul(self);
        }
        Err(Error::BudgetExceeded(format!("matrix order exceeds {budget}")))
    }

    /// Entrywise Frobenius x -> x^(p^i).
    pub fn frobenius(&self, i: u32) -> MatF {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.frobenius(*a, i);
        }
        out
    }

    /// The same matrix with entries embedded into an extension field.
    pub fn embed_to(&self, big: &Arc<FieldSpec>) -> Result<MatF> {
        let mut out = MatF::zero(big, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, big.embed_from(self.at(i, j), &self.field)?);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the rank.
    pub fn rref(&mut self) -> usize {
        let f = self.field.clone();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| self.at(r, col) != ZERO) else {
                continue;
            };
            self.data.swap_range(r * self.cols, pivot_row * self.cols, self.cols);
            let inv = f.inv(self.at(pivot_row, col));
            for j in col..self.cols {
                let v = self.at(pivot_row, j);
                self.set(pivot_row, j, f.mul(v, inv));
            }
            for r2 in 0..self.rows {
                if r2 == pivot_row {
                    continue;
                }
                let c = self.at(r2, col);
                if c == ZERO {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(self.at(r2, j), f.mul(c, self.at(pivot_row, j)));
                    self.set(r2, j, v);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    pub fn rank(&self) -> usize {
        self.clone().rref()
    }

    /// Basis of the left kernel {v : v*A = 0}.
    pub fn left_kernel(&self) -> Vec<Vec<FieldElem>> {
        let mut t = self.transpose();
        let rank = t.rref();
        // pivot columns of the transposed system
        let mut pivots = Vec::with_capacity(rank);
        let mut col = 0;
        for r in 0..rank {
            while t.at(r, col) == ZERO {
                col += 1;
            }
            pivots.push(col);
        }
        let f = &self.field;
        let mut basis = Vec::new();
        for free in 0..self.rows {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![ZERO; self.rows];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(t.at(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<MatF> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = MatF::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, n + i, self.field.one());
        }
        if aug.rref() < n {
            return None;
        }
        let mut inv = MatF::zero(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.at(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols);
        let f = &self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for col in 0..n {
            let Some(r) = (col..n).find(|&r| m.at(r, col) != ZERO) else {
                return ZERO;
            };
            if r != col {
                m.data.swap_range(r * n, col * n, n);
                det = f.neg(det);
            }
            let piv = m.at(col, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for r2 in col + 1..n {
                let c = f.mul(m.at(r2, col), inv);
                if c == ZERO {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.at(r2, j), f.mul(c, m.at(col, j)));
                    m.set(r2, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial det(xI - A), coefficients low-to-high,
    /// monic of degree n. Hessenberg reduction followed by the standard
    /// leading-minor recurrence.
    pub fn charpoly(&self) -> Vec<FieldElem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for col in 0..n.saturating_sub(2) {
            let Some(r) = (col + 1..n).find(|&r| h.at(r, col) != ZERO) else {
                continue;
            };
            if r != col + 1 {
                h.data.swap_range(r * n, (col + 1) * n, n);
                for i in 0..n {
                    let a = h.at(i, r);
                    let b = h.at(i, col + 1);
                    h.set(i, r, b);
                    h.set(i, col + 1, a);
                }
            }
            let inv = f.inv(h.at(col + 1, col));
            for r2 in col + 2..n {
                let c = f.mul(h.at(r2, col), inv);
                if c == ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.at(r2, j), f.mul(c, h.at(col + 1, j)));
                    h.set(r2, j, v);
                }
                for i in 0..n {
                    let v = f.add(h.at(i, col + 1), f.mul(c, h.at(i, r2)));
                    h.set(i, col + 1, v);
                }
            }
        }
        // p_k = (x - h[k-1][k-1]) p_{k-1} - sum_m h[k-1-m][k-1] * prod * p_{k-1-m}
        let mut ps: Vec<Vec<FieldElem>> = vec![vec![f.one()]];
        for k in 1..=n {
            let mut p = poly_mul_linear(f, &ps[k - 1], h.at(k - 1, k - 1));
            let mut prod = f.one();
            for m in 1..k {
                prod = f.mul(prod, h.at(k - m, k - m - 1));
                let c = f.mul(h.at(k - 1 - m, k - 1), prod);
                if c == ZERO {
                    continue;
                }
                for (i, &pi) in ps[k - 1 - m].iter().enumerate() {
                    p[i] = f.sub(p[i], f.mul(c, pi));
                }
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }

    /// Evaluate a polynomial (low-to-high coefficients) at this matrix.
    pub fn eval_poly(&self, coeffs: &[FieldElem]) -> MatF {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = MatF::zero(&self.field, n, n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = acc.at(i, i);
                acc.set(i, i, self.field.add(v, c));
            }
        }
        acc
    }
}

/// p(x) * (x - c)
fn poly_mul_linear(f: &FieldSpec, p: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    let mut out = vec![ZERO; p.len() + 1];
    for (i, &pi) in p.iter().enumerate() {
        out[i + 1] = f.add(out[i + 1], pi);
        out[i] = f.sub(out[i], f.mul(c, pi));
    }
    out
}

trait SwapRange {
    fn swap_range(&mut self, a: usize, b: usize, len: usize);
}
impl SwapRange for Vec<FieldElem> {
    fn swap_range(&mut self, a: usize, b: usize, len: usize) {
        if a == b {
            return;
        }
        for i in 0..len {
            self.swap(a + i, b + i);
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
    fn inverse_round_trip_gf4() {
        let f = gf(2, 2);
        let a = MatF::from_rows(&f, &[vec![1, 2, 0], vec![3, 1, 1], vec![0, 2, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        assert_eq!(a.pow(-1), inv);
    }

    #[test]
    fn rank_and_kernel() {
        let f = gf(3, 1);
        // row2 = row0 + row1
        let a = MatF::from_rows(&f, &[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.left_kernel();
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert!(a.vec_mul(v).iter().all(|&x| x == ZERO));
    }

    #[test]
    fn det_multiplicative() {
        let f = gf(2, 2);
        let a = MatF::from_rows(&f, &[vec![1, 2], vec![3, 1]]);
        let b = MatF::from_rows(&f, &[vec![2, 1], vec![1, 0]]);
        let lhs = a.mul(&b).det();
        assert_eq!(lhs, f.mul(a.det(), b.det()));
    }

    #[test]
    fn charpoly_of_companion_matrix() {
        let f = gf(5, 1);
        // companion of x^3 + 2x + 1
        let a = MatF::from_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![4, 3, 0]]);
        let cp = a.charpoly();
        let packed: Vec<u32> = cp.iter().map(|c| c.0).collect();
        assert_eq!(packed, vec![1, 2, 0, 1]);
        // Cayley-Hamilton
        assert!(a.eval_poly(&cp).is_scalar() == Some(ZERO));
    }

    #[test]
    fn charpoly_matches_det_trace_2x2() {
        let f = gf(2, 4);
        let a = MatF::from_rows(&f, &[vec![7, 9], vec![2, 11]]);
        let cp = a.charpoly();
        assert_eq!(cp.len(), 3);
        assert_eq!(cp[0], a.det());
        let tr = f.add(a.at(0, 0), a.at(1, 1));
        assert_eq!(cp[1], f.neg(tr));
        assert_eq!(cp[2], f.one());
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = gf(3, 2);
        let a = MatF::from_rows(&f, &[vec![1, 2], vec![0, 2]]);
        assert_eq!(a.frobenius(1), a);
        let b = MatF::from_rows(&f, &[vec![3, 0], vec![0, 1]]);
        assert_ne!(b.frobenius(1), b);
        assert_eq!(b.frobenius(1).frobenius(1), b);
    }

    #[test]
    fn vec_mul_is_compatible_with_mul() {
        let f = gf(2, 2);
        let a = MatF::from_rows(&f, &[vec![1, 2, 3], vec![0, 1, 1], vec![2, 0, 1]]);
        let b = MatF::from_rows(&f, &[vec![3, 1, 0], vec![1, 1, 2], vec![0, 2, 1]]);
        let v = vec![FieldElem(1), FieldElem(3), FieldElem(2)];
        let lhs = b.vec_mul(&a.vec_mul(&v));
        let rhs = a.mul(&b).vec_mul(&v);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_of_multiplicative_generator_companion() {
        let f = gf(2, 1);
        // companion of x^4+x+1, a primitive polynomial: order 15
        let a = MatF::from_rows(
            &f,
            &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 1, 0, 0]],
        );
        assert_eq!(a.order_budgeted(100).unwrap(), 15);
        assert!(a.order_budgeted(10).is_err());
    }
}
