//! Dense univariate polynomial arithmetic over an arbitrary [`FieldSpec`].
//!
//! Coefficients are stored low-to-high.  Nothing here is asymptotically
//! clever; degrees stay tiny (bounded by matrix dimensions).

use crate::ffield::{FieldElem, FieldSpec, ZERO};

pub fn trim(p: &mut Vec<FieldElem>) {
    while p.last() == Some(&ZERO) {
        p.pop();
    }
}

/// Degree, or None for the zero polynomial.
pub fn deg(p: &[FieldElem]) -> Option<usize> {
    p.iter().rposition(|&c| c != ZERO)
}

pub fn is_constant(p: &[FieldElem]) -> bool {
    deg(p).unwrap_or(0) == 0
}

pub fn monic(f: &FieldSpec, p: &[FieldElem]) -> Vec<FieldElem> {
    let mut p = p.to_vec();
    trim(&mut p);
    if let Some(&lead) = p.last() {
        let inv = f.inv(lead);
        for c in &mut p {
            *c = f.mul(*c, inv);
        }
    }
    p
}

pub fn mul(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    trim(&mut out);
    out
}

/// Multiply by the linear factor (x - root).
pub fn mul_x_minus(f: &FieldSpec, p: &[FieldElem], root: FieldElem) -> Vec<FieldElem> {
    mul(f, p, &[f.neg(root), f.one()])
}

/// Remainder of a divided by b (b nonzero).
pub fn rem(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let db = deg(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        for i in 0..=db {
            let v = f.sub(r[dr - db + i], f.mul(c, b[i]));
            r[dr - db + i] = v;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd.
pub fn gcd(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn sub(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(ZERO);
        let y = b.get(i).copied().unwrap_or(ZERO);
        *o = f.sub(x, y);
    }
    trim(&mut out);
    out
}

pub fn mulmod(
    f: &FieldSpec,
    a: &[FieldElem],
    b: &[FieldElem],
    m: &[FieldElem],
) -> Vec<FieldElem> {
    rem(f, &mul(f, a, b), m)
}

/// a^e mod m by square and multiply.
pub fn powmod(f: &FieldSpec, a: &[FieldElem], mut e: u128, m: &[FieldElem]) -> Vec<FieldElem> {
    let mut acc = vec![f.one()];
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn derivative(f: &FieldSpec, p: &[FieldElem]) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(f.scalar(i as u32), c))
        .collect();
    trim(&mut out);
    out
}

pub fn is_squarefree(f: &FieldSpec, p: &[FieldElem]) -> bool {
    is_constant(&gcd(f, p, &derivative(f, p)))
}

/// Irreducibility over the coefficient field: c of degree n has an
/// irreducible factor of degree j iff gcd(c, x^{q^j} - x) is nonconstant,
/// and a proper factorization always contains a factor of degree <= n/2.
pub fn is_irreducible(f: &FieldSpec, c: &[FieldElem]) -> bool {
    let n = match deg(c) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x = [ZERO, f.one()];
    let mut r = rem(f, &x, c);
    for _ in 1..=n / 2 {
        r = powmod(f, &r, f.q() as u128, c);
        if !is_constant(&gcd(f, c, &sub(f, &r, &x))) {
            return false;
        }
    }
    true
}

/// All roots of p lie in the coefficient field's extension of degree e,
/// i.e. p divides x^{q^e} - x up to multiplicity; combined with
/// squarefreeness this certifies deg(p) distinct eigenvalues there.
pub fn splits_in_extension(f: &FieldSpec, p: &[FieldElem], e: u32) -> bool {
    let x = [ZERO, f.one()];
    let qe = (f.q() as u128).pow(e);
    let r = powmod(f, &x, qe, p);
    sub(f, &r, &x).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldSpec;

    fn poly(f: &FieldSpec, cs: &[u32]) -> Vec<FieldElem> {
        cs.iter().map(|&c| f.scalar(c)).collect()
    }

    #[test]
    fn gcd_and_rem_over_gf5() {
        let f = FieldSpec::make(5, 1, None).unwrap();
        // (x+1)^2 (x+2) and (x+1)(x+3) share exactly (x+1)
        let a = mul(&f, &mul(&f, &poly(&f, &[1, 1]), &poly(&f, &[1, 1])), &poly(&f, &[2, 1]));
        let b = mul(&f, &poly(&f, &[1, 1]), &poly(&f, &[3, 1]));
        assert_eq!(gcd(&f, &a, &b), poly(&f, &[1, 1]));
        assert!(rem(&f, &a, &poly(&f, &[1, 1])).is_empty());
    }

    #[test]
    fn irreducibility_matches_known_polynomials() {
        let f2 = FieldSpec::make(2, 1, None).unwrap();
        assert!(is_irreducible(&f2, &poly(&f2, &[1, 1, 0, 0, 1]))); // x^4+x+1
        assert!(!is_irreducible(&f2, &poly(&f2, &[1, 0, 0, 0, 1]))); // (x+1)^4
        assert!(is_irreducible(&f2, &poly(&f2, &[1, 1, 1])));
        assert!(!is_irreducible(&f2, &poly(&f2, &[1, 0, 1])));
        let f3 = FieldSpec::make(3, 1, None).unwrap();
        assert!(is_irreducible(&f3, &poly(&f3, &[1, 0, 1]))); // x^2+1 over GF(3)
        assert!(!is_irreducible(&f3, &poly(&f3, &[2, 0, 1]))); // x^2-1 = (x-1)(x+1)
        let f9 = FieldSpec::make(3, 2, None).unwrap();
        // over GF(9) every quadratic over GF(3) splits
        let lift: Vec<FieldElem> = [1u32, 0, 1].iter().map(|&c| f9.scalar(c)).collect();
        assert!(!is_irreducible(&f9, &lift));
    }

    #[test]
    fn squarefree_detection() {
        let f = FieldSpec::make(3, 1, None).unwrap();
        let sq = mul(&f, &poly(&f, &[1, 1]), &poly(&f, &[1, 1]));
        assert!(!is_squarefree(&f, &sq));
        assert!(is_squarefree(&f, &poly(&f, &[2, 1, 1])));
    }

    #[test]
    fn splitting_field_membership() {
        let f2 = FieldSpec::make(2, 1, None).unwrap();
        // x^2+x+1 has its roots in GF(4) but not GF(2)
        let c = poly(&f2, &[1, 1, 1]);
        assert!(!splits_in_extension(&f2, &c, 1));
        assert!(splits_in_extension(&f2, &c, 2));
    }
}
