//! Finite field arithmetic for GF(p^f) on an explicit polynomial basis.
//!
//! Elements are packed indices `sum c_i * p^i` over the coefficient vector
//! `(c_0, ..., c_{f-1})` of the residue class modulo the defining polynomial.
//! The packed order is the canonical element order used everywhere (element
//! enumeration, "least" tie-breaks, default polynomial selection).
//!
//! Multiplication goes through discrete-log tables built from a fixed
//! primitive element, so `q = p^f` is capped at 2^16.

use crate::error::{Error, Result};
use std::sync::Mutex;

pub const MAX_Q: u64 = 1 << 16;
const ADD_TABLE_MAX_Q: u64 = 2048;

/// A field element: packed coefficient index, valid only together with the
/// [`FieldSpec`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

pub const ZERO: FieldElem = FieldElem(0);
pub const ONE: FieldElem = FieldElem(1);

/// GF(p^f) with a fixed monic irreducible defining polynomial.
pub struct FieldSpec {
    p: u32,
    f: u32,
    q: u64,
    /// Monic defining polynomial, coefficients low-to-high, length f+1.
    irred: Vec<u32>,
    /// exp[i] = generator^i for i in 0..q-1.
    exp: Vec<u32>,
    /// log[x] for x in 1..q; log[0] is unused.
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    /// Cache of subfield embeddings keyed by (sub.p, sub.f, sub.irred):
    /// (images of the sub generator basis 1, r, r^2, ..., big->sub section).
    embed_cache: Mutex<Vec<(Vec<u32>, EmbedData)>>,
}

struct EmbedData {
    /// embed[y] = packed image in the big field of the sub element y.
    embed: Vec<u32>,
    /// section[x] = packed sub element for big x, or u32::MAX if outside.
    section: Vec<u32>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "FieldSpec(GF({}^{}), irred={:?})", self.p, self.f, self.irred)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.irred == other.irred
    }
}
impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of n, ascending, without multiplicity.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// Build GF(p^f). With `irred = None` the defining polynomial is the
    /// packed-order least monic irreducible of degree f. A supplied
    /// polynomial must be monic of degree f with coefficients reduced mod p.
    pub fn make(p: u32, f: u32, irred: Option<&[u32]>) -> Result<FieldSpec> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if f == 0 {
            return Err(Error::ReduciblePolynomial);
        }
        let q = (p as u64).checked_pow(f).ok_or(Error::Overflow("p^f"))?;
        if q > MAX_Q {
            return Err(Error::BudgetExceeded(format!("q = {q} exceeds {MAX_Q}")));
        }
        let irred = match irred {
            Some(c) => {
                let c = c.to_vec();
                if c.len() != f as usize + 1
                    || c[f as usize] != 1
                    || c.iter().any(|&x| x >= p)
                    || !poly_irreducible_prime_field(p, &c)
                {
                    return Err(Error::ReduciblePolynomial);
                }
                c
            }
            None => least_irreducible(p, f),
        };
        let mut spec = FieldSpec {
            p,
            f,
            q,
            irred,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
            embed_cache: Mutex::new(Vec::new()),
        };
        spec.build_tables();
        Ok(spec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn irred(&self) -> &[u32] {
        &self.irred
    }

    pub fn zero(&self) -> FieldElem {
        ZERO
    }
    pub fn one(&self) -> FieldElem {
        ONE
    }

    /// Canonical primitive element (guaranteed generator of the unit group,
    /// which is trivial over GF(2)).
    pub fn generator(&self) -> FieldElem {
        if self.q == 2 {
            ONE
        } else {
            FieldElem(self.exp[1])
        }
    }

    pub fn elems(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        assert!(coeffs.len() <= self.f as usize, "too many coefficients");
        let mut idx = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            idx += (c as u64 % self.p as u64) * (self.p as u64).pow(i as u32);
        }
        FieldElem(idx as u32)
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.f as usize);
        let mut idx = x.0 as u64;
        for _ in 0..self.f {
            v.push((idx % self.p as u64) as u32);
            idx /= self.p as u64;
        }
        v
    }

    /// Scalar c in 0..p as a field element of the prime subfield.
    pub fn scalar(&self, c: u32) -> FieldElem {
        FieldElem(c % self.p)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if let Some(t) = &self.add_table {
            return FieldElem(t[a.0 as usize * self.q as usize + b.0 as usize]);
        }
        FieldElem(self.add_digitwise(a.0, b.0))
    }

    fn add_digitwise(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let p = self.p as u64;
        let mut out = 0u64;
        let mut base = 1u64;
        for _ in 0..self.f {
            out += ((a + b) % p) * base;
            a /= p;
            b /= p;
            base *= p;
        }
        out as u32
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let mut idx = a.0 as u64;
        let p = self.p as u64;
        let mut out = 0u64;
        let mut base = 1u64;
        for _ in 0..self.f {
            out += ((p - idx % p) % p) * base;
            idx /= p;
            base *= p;
        }
        FieldElem(out as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return ZERO;
        }
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64)
            % (self.q - 1);
        FieldElem(self.exp[e as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        let e = (self.q - 1 - self.log[a.0 as usize] as u64) % (self.q - 1);
        FieldElem(self.exp[e as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// x^k with k possibly negative (x nonzero in that case).
    pub fn pow(&self, x: FieldElem, k: i64) -> FieldElem {
        if x.0 == 0 {
            assert!(k >= 0, "0 to a negative power");
            return if k == 0 { ONE } else { ZERO };
        }
        let m = self.q as i128 - 1;
        let e = (k as i128).rem_euclid(m) as u64;
        let l = (self.log[x.0 as usize] as u128 * e as u128 % m as u128) as usize;
        FieldElem(self.exp[l])
    }

    /// The field automorphism x -> x^(p^i).
    pub fn frobenius(&self, x: FieldElem, i: u32) -> FieldElem {
        if x.0 == 0 {
            return ZERO;
        }
        let m = self.q - 1;
        let mut e = 1u64;
        for _ in 0..(i % self.f.max(1)) {
            e = e * self.p as u64 % m;
        }
        // p^i mod (q-1) with i reduced mod f is exact: frobenius has order f.
        let l = (self.log[x.0 as usize] as u128 * e as u128 % m as u128) as usize;
        FieldElem(self.exp[l])
    }

    /// True for squares; in even characteristic every element is a square.
    pub fn is_square(&self, x: FieldElem) -> bool {
        if self.p == 2 || x.0 == 0 {
            return true;
        }
        self.log[x.0 as usize] % 2 == 0
    }

    pub fn mul_order(&self, x: FieldElem) -> u64 {
        assert!(x.0 != 0, "order of zero");
        let l = self.log[x.0 as usize] as u64;
        (self.q - 1) / gcd(self.q - 1, l)
    }

    /// Norm map onto the subfield `sub`, that is x -> x^((q-1)/(q1-1)),
    /// returned as an element of `sub`. Errors with `NotASubfield` when
    /// `sub` is not a subfield of this field.
    pub fn norm_to_subfield(&self, x: FieldElem, sub: &FieldSpec) -> Result<FieldElem> {
        if x.0 == 0 {
            return self.with_embedding(sub, |_| ZERO);
        }
        let e = (self.q - 1) / (sub.q - 1);
        let y = self.pow(x, e as i64);
        self.with_embedding(sub, |data| {
            let s = data.section[y.0 as usize];
            debug_assert!(s != u32::MAX, "norm landed outside the subfield");
            FieldElem(s)
        })
    }

    /// Embed a subfield element into this field.
    pub fn embed_from(&self, y: FieldElem, sub: &FieldSpec) -> Result<FieldElem> {
        self.with_embedding(sub, |data| FieldElem(data.embed[y.0 as usize]))
    }

    /// Retract x into `sub` if it lies in the embedded subfield.
    pub fn retract_to(&self, x: FieldElem, sub: &FieldSpec) -> Result<Option<FieldElem>> {
        self.with_embedding(sub, |data| {
            let s = data.section[x.0 as usize];
            if s == u32::MAX {
                None
            } else {
                Some(FieldElem(s))
            }
        })
    }

    /// The embedding is fixed by sending the sub basis element to the
    /// packed-order least root of the sub defining polynomial in this field.
    fn with_embedding<R>(&self, sub: &FieldSpec, f: impl FnOnce(&EmbedData) -> R) -> Result<R> {
        if sub.p != self.p || self.f % sub.f != 0 {
            return Err(Error::NotASubfield { sub: sub.q, big: self.q });
        }
        let key: Vec<u32> = sub.irred.iter().copied().chain([sub.f]).collect();
        let mut cache = self.embed_cache.lock().unwrap();
        if let Some((_, data)) = cache.iter().find(|(k, _)| *k == key) {
            return Ok(f(data));
        }
        let root = self
            .elems()
            .find(|&x| self.eval_int_poly(&sub.irred, x).0 == 0)
            .expect("subfield polynomial must split");
        let mut embed = vec![0u32; sub.q as usize];
        let mut section = vec![u32::MAX; self.q as usize];
        for y in 0..sub.q as u32 {
            let coeffs = sub.coeffs(FieldElem(y));
            let mut acc = ZERO;
            let mut pw = ONE;
            for &c in &coeffs {
                acc = self.add(acc, self.mul(self.scalar(c), pw));
                pw = self.mul(pw, root);
            }
            embed[y as usize] = acc.0;
            section[acc.0 as usize] = y;
        }
        cache.push((key, EmbedData { embed, section }));
        Ok(f(&cache.last().unwrap().1))
    }

    /// Evaluate a polynomial with integer (prime field) coefficients.
    fn eval_int_poly(&self, coeffs: &[u32], x: FieldElem) -> FieldElem {
        let mut acc = ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), self.scalar(c));
        }
        acc
    }

    /// Evaluate a polynomial with coefficients in this field, low-to-high.
    pub fn eval_poly(&self, coeffs: &[FieldElem], x: FieldElem) -> FieldElem {
        let mut acc = ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // polynomial multiplication bootstrap
        let mul_poly = |a: u32, b: u32| -> u32 { poly_basis_mul(self.p, self.f, &self.irred, a, b) };
        // find a primitive element: packed-order least element of order q-1
        let factors = prime_factors(self.q as u128 - 1);
        let pow_poly = |mut x: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_poly(acc, x);
                }
                x = mul_poly(x, x);
                e >>= 1;
            }
            acc
        };
        let mut gen = 0u32;
        'outer: for cand in 1..self.q as u32 {
            for &r in &factors {
                if pow_poly(cand, (self.q - 1) / r as u64) == 1 {
                    continue 'outer;
                }
            }
            gen = cand;
            break;
        }
        assert!(gen != 0, "no primitive element found");
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut acc = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = acc;
            log[acc as usize] = i as u32;
            acc = mul_poly(acc, gen);
        }
        assert!(acc == 1, "generator order mismatch");
        self.exp = exp;
        self.log = log;
        if self.p != 2 && self.q <= ADD_TABLE_MAX_Q {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..=a {
                    let s = self.add_digitwise(a as u32, b as u32);
                    t[a * q + b] = s;
                    t[b * q + a] = s;
                }
            }
            self.add_table = Some(t);
        }
    }

    /// Canonical text form of the field header: `field p f c0 c1 ... cf`.
    pub fn header(&self) -> String {
        let cs: Vec<String> = self.irred.iter().map(|c| c.to_string()).collect();
        format!("field {} {} {}", self.p, self.f, cs.join(" "))
    }
}

/// Packed-index polynomial-basis multiplication used only to bootstrap the
/// log tables (and by irreducibility tests on the prime field).
fn poly_basis_mul(p: u32, f: u32, irred: &[u32], a: u32, b: u32) -> u32 {
    let unpack = |mut x: u32| -> Vec<u64> {
        let mut v = vec![0u64; f as usize];
        for c in v.iter_mut() {
            *c = (x % p) as u64;
            x /= p;
        }
        v
    };
    let (av, bv) = (unpack(a), unpack(b));
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * f as usize];
    for (i, &ac) in av.iter().enumerate() {
        if ac == 0 {
            continue;
        }
        for (j, &bc) in bv.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ac * bc) % p64;
        }
    }
    // reduce modulo the monic irred
    for i in (f as usize..2 * f as usize).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &ic) in irred.iter().enumerate().take(f as usize) {
            let k = i - f as usize + j;
            prod[k] = (prod[k] + c * (p64 - ic as u64)) % p64;
        }
    }
    let mut out = 0u64;
    for i in (0..f as usize).rev() {
        out = out * p64 + prod[i];
    }
    out as u32
}

/// Irreducibility over GF(p) by trial division against all monic polynomials
/// of degree up to deg/2 (cheap because q = p^f stays within the cap).
fn poly_irreducible_prime_field(p: u32, coeffs: &[u32]) -> bool {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return false;
    }
    if coeffs[0] == 0 {
        return deg == 1; // divisible by x
    }
    if deg == 1 {
        return true;
    }
    // root check covers degree <= 3 fully once combined with trial division
    let eval = |x: u64| -> u64 {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = (acc * x + c as u64) % p as u64;
        }
        acc
    };
    for x in 0..p as u64 {
        if eval(x) == 0 {
            return false;
        }
    }
    // trial divide by monic polynomials of degree 2..=deg/2
    for d in 2..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for packed in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut t = packed;
            for _ in 0..d {
                divisor.push((t % p as u64) as u32);
                t /= p as u64;
            }
            divisor.push(1);
            if poly_divides_prime_field(p, &divisor, coeffs) {
                return false;
            }
        }
    }
    true
}

fn poly_divides_prime_field(p: u32, divisor: &[u32], poly: &[u32]) -> bool {
    let p64 = p as u64;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for (j, &dc) in divisor.iter().enumerate().take(dd) {
                let k = top - dd + j;
                rem[k] = (rem[k] + lead * (p64 - dc as u64)) % p64;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Packed-order least monic irreducible polynomial of degree f over GF(p).
fn least_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    for packed in 0..count {
        let mut coeffs = Vec::with_capacity(f as usize + 1);
        let mut t = packed;
        for _ in 0..f {
            coeffs.push((t % p as u64) as u32);
            t /= p as u64;
        }
        coeffs.push(1);
        if poly_irreducible_prime_field(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Smallest primitive prime divisor of a^k - 1: the least prime r dividing
/// a^k - 1 but none of a^i - 1 for 1 <= i < k. Returns `None` exactly when
/// no such prime exists (for k >= 2 and prime-power a these are the
/// Zsigmondy exceptions (a, k) = (2, 6) and (2^l - 1, 2)).
pub fn ppd(a: u64, k: u32) -> Result<Option<u64>> {
    if a < 2 || k == 0 {
        return Err(Error::HypothesisViolated("ppd needs a >= 2, k >= 1".into()));
    }
    let n = (a as u128)
        .checked_pow(k)
        .and_then(|x| x.checked_sub(1))
        .ok_or(Error::Overflow("a^k - 1"))?;
    let mut lower = Vec::new();
    for i in 1..k {
        lower.push((a as u128).pow(i) - 1);
    }
    for r in prime_factors(n) {
        if lower.iter().all(|m| m % r != 0) {
            return Ok(Some(r as u64));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_structure() {
        let f = FieldSpec::make(2, 2, None).unwrap();
        assert_eq!(f.q(), 4);
        // least irreducible of degree 2 over GF(2) is x^2 + x + 1
        assert_eq!(f.irred(), &[1, 1, 1]);
        let w = f.from_coeffs(&[0, 1]);
        // w^2 = w + 1
        assert_eq!(f.mul(w, w), f.add(w, ONE));
        assert_eq!(f.frobenius(w, 1), f.mul(w, w));
        assert_eq!(f.pow(w, 3), ONE);
    }

    #[test]
    fn gf9_default_poly_and_frobenius() {
        let f = FieldSpec::make(3, 2, None).unwrap();
        assert_eq!(f.q(), 9);
        let g = f.generator();
        assert_eq!(f.mul_order(g), 8);
        assert_eq!(f.frobenius(g, 1), f.pow(g, 3));
        for x in f.elems() {
            assert_eq!(f.frobenius(x, f.f()), x);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for (p, f) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (5, 2), (2, 6), (3, 4)] {
            let fs = FieldSpec::make(p, f, None).unwrap();
            let fixed: Vec<FieldElem> =
                fs.elems().filter(|&x| fs.frobenius(x, 1) == x).collect();
            assert_eq!(fixed.len(), p as usize, "GF({}^{})", p, f);
            for c in 0..p {
                assert!(fixed.contains(&fs.scalar(c)));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, f) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5)] {
            let fs = FieldSpec::make(p, f, None).unwrap();
            let q = fs.q() as u32;
            for a in 0..q {
                let a = FieldElem(a);
                assert_eq!(fs.add(a, ZERO), a);
                assert_eq!(fs.mul(a, ONE), a);
                assert_eq!(fs.add(a, fs.neg(a)), ZERO);
                if a != ZERO {
                    assert_eq!(fs.mul(a, fs.inv(a)), ONE);
                }
                for b in 0..q {
                    let b = FieldElem(b);
                    assert_eq!(fs.add(a, b), fs.add(b, a));
                    assert_eq!(fs.mul(a, b), fs.mul(b, a));
                    for c in 0..q {
                        let c = FieldElem(c);
                        assert_eq!(fs.mul(a, fs.add(b, c)), fs.add(fs.mul(a, b), fs.mul(a, c)));
                        assert_eq!(fs.add(a, fs.add(b, c)), fs.add(fs.add(a, b), c));
                        assert_eq!(fs.mul(a, fs.mul(b, c)), fs.mul(fs.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_surjective() {
        for (p, f, f1) in [(2u32, 2u32, 1u32), (2, 4, 2), (3, 2, 1), (3, 4, 2), (2, 6, 3), (2, 6, 2)] {
            let big = FieldSpec::make(p, f, None).unwrap();
            let sub = FieldSpec::make(p, f1, None).unwrap();
            let mut seen = std::collections::HashSet::new();
            for x in big.elems() {
                for y in big.elems() {
                    let nxy = big.norm_to_subfield(big.mul(x, y), &sub).unwrap();
                    let nx = big.norm_to_subfield(x, &sub).unwrap();
                    let ny = big.norm_to_subfield(y, &sub).unwrap();
                    assert_eq!(nxy, sub.mul(nx, ny));
                }
                if x != ZERO {
                    seen.insert(big.norm_to_subfield(x, &sub).unwrap());
                }
            }
            assert_eq!(seen.len() as u64, sub.q() - 1, "norm must be onto");
        }
    }

    #[test]
    fn norm_rejects_non_subfield() {
        let big = FieldSpec::make(2, 4, None).unwrap();
        let sub = FieldSpec::make(2, 3, None).unwrap();
        assert!(matches!(
            big.norm_to_subfield(ONE, &sub),
            Err(Error::NotASubfield { .. })
        ));
        let sub3 = FieldSpec::make(3, 1, None).unwrap();
        assert!(big.norm_to_subfield(ONE, &sub3).is_err());
    }

    #[test]
    fn is_square_matches_counting() {
        for (p, f) in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (3, 3)] {
            let fs = FieldSpec::make(p, f, None).unwrap();
            let squares: std::collections::HashSet<u32> =
                fs.elems().map(|x| fs.mul(x, x).0).collect();
            for x in fs.elems() {
                assert_eq!(fs.is_square(x), squares.contains(&x.0));
            }
        }
        let f4 = FieldSpec::make(2, 2, None).unwrap();
        assert!(f4.elems().all(|x| f4.is_square(x)));
    }

    #[test]
    fn reducible_polynomial_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(matches!(
            FieldSpec::make(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReduciblePolynomial)
        ));
        assert!(matches!(FieldSpec::make(4, 1, None), Err(Error::NonPrime(4))));
    }

    #[test]
    fn explicit_conway_like_poly_accepted() {
        // x^2 + 2x + 2 is irreducible over GF(3)
        let f = FieldSpec::make(3, 2, Some(&[2, 2, 1])).unwrap();
        let g = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul_order(g), 8);
    }

    #[test]
    fn ppd_examples() {
        assert_eq!(ppd(2, 4).unwrap(), Some(5));
        assert_eq!(ppd(2, 6).unwrap(), None);
        assert_eq!(ppd(3, 2).unwrap(), None);
        assert_eq!(ppd(7, 2).unwrap(), None);
        assert_eq!(ppd(4, 3).unwrap(), Some(7));
        assert_eq!(ppd(2, 10).unwrap(), Some(11));
        assert_eq!(ppd(5, 2).unwrap(), Some(3));
    }

    #[test]
    fn ppd_divisibility_property() {
        // any primitive prime divisor r of a^k - 1 satisfies k | r - 1
        for a in [2u64, 3, 4, 5, 7, 8, 9] {
            for k in 2..=12u32 {
                if let Some(r) = ppd(a, k).unwrap() {
                    assert_eq!((r - 1) % k as u64, 0, "a={a} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn ppd_overflow_guarded() {
        assert!(matches!(ppd(u64::MAX, 3), Err(Error::Overflow(_))));
    }

    #[test]
    fn pow_negative_exponents() {
        let f = FieldSpec::make(5, 1, None).unwrap();
        let x = FieldElem(3);
        assert_eq!(f.mul(f.pow(x, -1), x), ONE);
        assert_eq!(f.pow(x, -2), f.inv(f.mul(x, x)));
        assert_eq!(f.pow(x, 0), ONE);
    }

    #[test]
    fn embedding_roundtrip() {
        let big = FieldSpec::make(2, 4, None).unwrap();
        let sub = FieldSpec::make(2, 2, None).unwrap();
        for y in sub.elems() {
            let e = big.embed_from(y, &sub).unwrap();
            assert_eq!(big.retract_to(e, &sub).unwrap(), Some(y));
        }
        // embedding is a field homomorphism
        for y in sub.elems() {
            for z in sub.elems() {
                let ey = big.embed_from(y, &sub).unwrap();
                let ez = big.embed_from(z, &sub).unwrap();
                assert_eq!(big.embed_from(sub.add(y, z), &sub).unwrap(), big.add(ey, ez));
                assert_eq!(big.embed_from(sub.mul(y, z), &sub).unwrap(), big.mul(ey, ez));
            }
        }
    }
}
