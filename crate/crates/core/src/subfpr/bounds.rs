//! Closed-form fixed point ratio bounds, the eigenspace codimension nu, and
//! the even-characteristic involution type classifier.
//!
//! Bounds with fractional exponents like (2q+2)^(1/2) are irrational; they
//! are returned as intervals [lo, hi] with exact rational endpoints and
//! hi^b verified to enclose the b-th power, so downstream comparisons stay
//! exact.  Every formula checks its own hypotheses and refuses out-of-range
//! parameters rather than extrapolating.

use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::ffield::{is_prime, FieldSpec, ZERO};
use crate::grpzoo::forms::bilinear;
use crate::grpzoo::matrix::MatF;
use crate::grpzoo::semilinear::SemilinearMap;

/// Dyadic precision of irrational enclosures, in bits after the point.
const ROOT_BITS: usize = 96;

/// An interval with exact rational endpoints enclosing a bound value.
/// Rational bounds are stored exactly with lo == hi.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl BoundInterval {
    pub fn exact(r: BigRational) -> BoundInterval {
        BoundInterval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    fn add(&self, o: &BoundInterval) -> BoundInterval {
        BoundInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    /// Quotient of intervals with positive endpoints.
    fn div(&self, o: &BoundInterval) -> BoundInterval {
        assert!(o.lo.is_positive());
        BoundInterval { lo: &self.lo / &o.hi, hi: &self.hi / &o.lo }
    }

}

/// Enclosure of x^(1/b) for positive rational x: with t = floor(x * 2^(b*B))
/// and r = floor(t^(1/b)), r^b <= t forces lo^b <= x, and (r+1)^b >= t+1 > x * 2^(b*B)
/// forces hi^b > x.
fn root_interval(x: &BigRational, b: u64) -> BoundInterval {
    assert!(x.is_positive());
    if b == 1 {
        return BoundInterval::exact(x.clone());
    }
    let num = x.numer().to_biguint().unwrap();
    let den = x.denom().to_biguint().unwrap();
    let scaled = (num << (b as usize * ROOT_BITS)) / den;
    let r = scaled.nth_root(b as u32);
    let denom: BigInt = BigInt::one() << ROOT_BITS;
    BoundInterval {
        lo: BigRational::new(r.clone().into(), denom.clone()),
        hi: BigRational::new((r + 1u32).into(), denom),
    }
}

/// Enclosure of base^e for positive rational base and rational e.
fn rat_pow(base: &BigRational, e: &BigRational) -> BoundInterval {
    let a = e.numer().to_i32().expect("exponent numerator in range");
    let b = e.denom().to_u64().expect("exponent denominator in range");
    root_interval(&base.pow(a), b)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// q^e for integer e of either sign, exact.
fn qpow(q: u64, e: i64) -> BigRational {
    let p = BigRational::from_integer(q.into());
    p.pow(e.to_i32().unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharpCase {
    /// x in PGL(V) with nu(x) = 1
    NuOne,
    /// x in PGL(V) with nu(x) >= 2
    NuAtLeastTwo,
    /// x a field automorphism
    NotLinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoSpaceCase {
    /// x in PGL(V) with s = nu(x)
    Linear { s: u32 },
    NotLinear,
}

/// Upper bounds on fpr(x, G/H) for prime order x, named by the pair they
/// apply to.  `ell100` is the constant l in hundredths (100 unless the
/// subgroup type is one of the listed exceptions).
#[derive(Clone, Debug)]
pub enum BoundFormula {
    /// socle O_2m+1(q), q odd, m >= 3; maximal non-subspace H:
    /// (4q+4)^(1/2) / q^(m - l + eps), eps = 0 iff x is linear with nu = 1.
    OrthNonSubspace { m: u32, q: u64, ell100: u32, reflection: bool },
    /// socle PSp_2m(q), m >= 3; maximal non-subspace H:
    /// (2q+2)^(1/2) / q^(m - l).
    SympNonSubspace { m: u32, q: u64, ell100: u32 },
    /// socle PSp_2m(q), m >= 3; maximal non-subspace H; the sharper
    /// three-way bound split by nu(x).
    SympNonSubspaceSharp { m: u32, q: u64, ell100: u32, case: SharpCase },
    /// maximal subfield subgroup, x linear of prime order with nu(x) = 1,
    /// m >= 2: 2 q^-m.
    SubfieldNuOne { m: u32, q: u64 },
    /// stabilizer of a totally isotropic k-space, 1 <= k <= m, m >= 3:
    /// 2 q^-(m-1) + q^-m + q^-k.
    IsotropicStab { m: u32, q: u64, k: u32 },
    /// socle O_2m+1(q): stabilizer of a non-degenerate k-space of Witt
    /// index w, 1 <= k <= 2m, m >= 3:
    /// 2 q^-(m-1) + q^-m + q^-w + q^-(2m+1-k).
    OrthNondegStab { m: u32, q: u64, k: u32, witt: u32 },
    /// socle PSp_2m(q): stabilizer of a non-degenerate k-space,
    /// 1 <= k <= 2m-1, m >= 3:
    /// 2 q^-(m-a) + q^-m + q^-(k/2) + q^-(2m-k), a = 1 iff q even.
    SympNondegStab { m: u32, q: u64, k: u32 },
    /// Sp_2m(q), q even, H of orthogonal type, m >= 2: q^-b + q^-m where
    /// b = 1 iff x is linear with nu(x) = 1, else 2.
    QuadraticTypeStab { m: u32, q: u64, beta: u32 },
    /// socle PSp_2m(q), m >= 3: stabilizer of a non-degenerate 2-space,
    /// split by nu.
    NondegTwoSpace { m: u32, q: u64, case: TwoSpaceCase },
    /// socle PSp_4(q), q = p^f, f > 1; maximal non-subspace H:
    /// 4/(q(q-1)), sharpened to q/(q^2-1) when H has type Sp_2(q) wr S_2 or
    /// Sp_2(q^2) and x is an a_2 or t_2 involution.
    FourDimNonSubspace { p: u64, f: u32, special_involution: bool },
    /// socle PSp_4(q), H of Suzuki type: q even, f odd, f > 1: 1/q^2.
    FourDimSuzuki { p: u64, f: u32 },
    /// socle PSp_4(q), q even, H of minus-type torus normalizer over q^2:
    /// 8/(q^2 (q-1)).
    FourDimMinusTorus { p: u64, f: u32 },
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(msg.into()))
    }
}

fn check_ell(ell100: u32) -> Result<()> {
    require((100..=200).contains(&ell100), "l must lie in [1, 2]")
}

fn check_q(q: u64) -> Result<()> {
    require(q >= 2 && crate::ffield::prime_factors(q as u128).len() == 1, "q must be a prime power")
}

/// Evaluate a bound formula to an enclosing interval, verifying its
/// hypotheses first.
pub fn bound_value(formula: &BoundFormula) -> Result<BoundInterval> {
    use BoundFormula::*;
    match *formula {
        OrthNonSubspace { m, q, ell100, reflection } => {
            require(m >= 3, "odd orthogonal bound needs m >= 3")?;
            require(q % 2 == 1, "odd-dimensional orthogonal groups need odd q")?;
            check_q(q)?;
            check_ell(ell100)?;
            let num = rat_pow(&BigRational::from_integer((4 * q + 4).into()), &rat(1, 2));
            let eps100 = if reflection { 0 } else { 50 };
            let e = rat((100 * m as i64) - ell100 as i64 + eps100, 100);
            let den = rat_pow(&BigRational::from_integer(q.into()), &e);
            Ok(num.div(&den))
        }
        SympNonSubspace { m, q, ell100 } => {
            require(m >= 3, "symplectic non-subspace bound needs m >= 3")?;
            check_q(q)?;
            check_ell(ell100)?;
            let num = rat_pow(&BigRational::from_integer((2 * q + 2).into()), &rat(1, 2));
            let e = rat((100 * m as i64) - ell100 as i64, 100);
            let den = rat_pow(&BigRational::from_integer(q.into()), &e);
            Ok(num.div(&den))
        }
        SympNonSubspaceSharp { m, q, ell100, case } => {
            require(m >= 3, "sharp symplectic bound needs m >= 3")?;
            check_q(q)?;
            check_ell(ell100)?;
            match case {
                SharpCase::NotLinear => Ok(BoundInterval::exact(rat(2, 1) * qpow(q, -(m as i64)))),
                SharpCase::NuOne | SharpCase::NuAtLeastTwo => {
                    // exponent of (2q+2): 1/2 - l/2m = (100m - ell100)/(200m)
                    let e1 = rat(100 * m as i64 - ell100 as i64, 200 * m as i64);
                    let num = rat_pow(&BigRational::from_integer((2 * q + 2).into()), &e1);
                    let (m, l) = (m as i64, ell100 as i64);
                    let e2 = if case == SharpCase::NuOne {
                        rat(100 * m - l, 100)
                    } else {
                        // 2(m - l) - 3/2 + 3/2m over common denominator 200m
                        rat(400 * m * m - 4 * m * l - 300 * m + 300, 200 * m)
                    };
                    let den = rat_pow(&BigRational::from_integer(q.into()), &e2);
                    Ok(num.div(&den))
                }
            }
        }
        SubfieldNuOne { m, q } => {
            require(m >= 2, "subfield bound needs m >= 2")?;
            check_q(q)?;
            Ok(BoundInterval::exact(rat(2, 1) * qpow(q, -(m as i64))))
        }
        IsotropicStab { m, q, k } => {
            require(m >= 3, "isotropic stabilizer bound needs m >= 3")?;
            require(k >= 1 && k <= m, "totally isotropic k-space needs 1 <= k <= m")?;
            check_q(q)?;
            let v = rat(2, 1) * qpow(q, -(m as i64 - 1)) + qpow(q, -(m as i64)) + qpow(q, -(k as i64));
            Ok(BoundInterval::exact(v))
        }
        OrthNondegStab { m, q, k, witt } => {
            require(m >= 3, "orthogonal stabilizer bound needs m >= 3")?;
            require(q % 2 == 1, "odd-dimensional orthogonal groups need odd q")?;
            require(k >= 1 && k <= 2 * m, "non-degenerate k-space needs 1 <= k <= 2m")?;
            require(witt <= k / 2 && witt <= m, "Witt index at most k/2 and m")?;
            check_q(q)?;
            let v = rat(2, 1) * qpow(q, -(m as i64 - 1))
                + qpow(q, -(m as i64))
                + qpow(q, -(witt as i64))
                + qpow(q, -(2 * m as i64 + 1 - k as i64));
            Ok(BoundInterval::exact(v))
        }
        SympNondegStab { m, q, k } => {
            require(m >= 3, "symplectic stabilizer bound needs m >= 3")?;
            require(k >= 1 && k <= 2 * m - 1, "non-degenerate k-space needs 1 <= k <= 2m-1")?;
            check_q(q)?;
            let alpha = if q % 2 == 0 { 1 } else { 2 };
            let head = BoundInterval::exact(
                rat(2, 1) * qpow(q, -(m as i64 - alpha)) + qpow(q, -(m as i64)) + qpow(q, -(2 * m as i64 - k as i64)),
            );
            // q^(-k/2) is irrational for odd k
            let mid = rat_pow(&BigRational::from_integer(q.into()), &rat(-(k as i64), 2));
            Ok(head.add(&mid))
        }
        QuadraticTypeStab { m, q, beta } => {
            require(m >= 2, "orthogonal-type stabilizer bound needs m >= 2")?;
            require(q % 2 == 0, "orthogonal-type subgroups of Sp need even q")?;
            require(beta == 1 || beta == 2, "b is 1 or 2")?;
            check_q(q)?;
            Ok(BoundInterval::exact(qpow(q, -(beta as i64)) + qpow(q, -(m as i64))))
        }
        NondegTwoSpace { m, q, case } => {
            require(m >= 3, "two-space stabilizer bound needs m >= 3")?;
            check_q(q)?;
            match case {
                TwoSpaceCase::Linear { s } => {
                    require(s >= 1 && s <= 2 * m, "nu of a non-identity element is in [1, 2m]")?;
                    let v = qpow(q, -(2 * s as i64))
                        + qpow(q, -(2 * s as i64 + 2))
                        + qpow(q, -(2 * m as i64 - 2))
                        + qpow(q, -(2 * m as i64 - 1));
                    Ok(BoundInterval::exact(v))
                }
                TwoSpaceCase::NotLinear => {
                    Ok(BoundInterval::exact(rat(2, 1) * qpow(q, -(2 * m as i64 - 1))))
                }
            }
        }
        FourDimNonSubspace { p, f, special_involution } => {
            require(is_prime(p), "p must be prime")?;
            require(f > 1, "four-dimensional bound needs q = p^f with f > 1")?;
            let q = p.pow(f) as i64;
            let v = if special_involution {
                rat(q, q * q - 1)
            } else {
                rat(4, q * (q - 1))
            };
            Ok(BoundInterval::exact(v))
        }
        FourDimSuzuki { p, f } => {
            require(p == 2, "Suzuki groups live over even q")?;
            require(f % 2 == 1 && f > 1, "Suzuki subgroup needs odd f > 1")?;
            let q = 2i64.pow(f);
            Ok(BoundInterval::exact(rat(1, q * q)))
        }
        FourDimMinusTorus { p, f } => {
            require(p == 2, "minus-type torus bound needs even q")?;
            require(f > 1, "four-dimensional bound needs q = p^f with f > 1")?;
            let q = 2i64.pow(f);
            Ok(BoundInterval::exact(rat(8, q * q * (q - 1))))
        }
    }
}

/// nu(x): the codimension of the largest eigenspace of a lift of x over the
/// algebraic closure.  Every eigenvalue of an n x n matrix over GF(q) lies
/// in GF(q^j) for some j <= n, so the scan over extension degrees is
/// exhaustive.  Semilinear input is rejected.
pub fn nu(map: &SemilinearMap) -> Result<u32> {
    if !map.is_linear() {
        return Err(Error::NotLinear);
    }
    let x = map.mat();
    let field = x.field().clone();
    let n = x.rows();
    let mut best = n;
    for j in 1..=n as u32 {
        let ext = if j == 1 {
            field.clone()
        } else {
            Arc::new(FieldSpec::make(field.p(), field.f() * j, None)?)
        };
        let xe = x.embed_to(&ext)?;
        let cp = xe.charpoly();
        for lam in ext.elems() {
            if ext.eval_poly(&cp, lam) != ZERO {
                continue;
            }
            let r = xe.sub(&MatF::scalar_mat(&ext, lam, n)).rank();
            best = best.min(r);
        }
    }
    Ok(best as u32)
}

/// Involution types in symplectic groups over even q: rank s of x - 1,
/// split for even s by whether (v, v(x-1)) vanishes identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionClass {
    /// a_s: even rank, (v, v(x-1)) = 0 for all v
    A(u32),
    /// b_s: odd rank
    B(u32),
    /// c_s: even rank, (v, v(x-1)) not identically zero
    C(u32),
}

const INVOLUTION_SCAN_CAP: u64 = 1 << 20;

pub fn symplectic_involution_type(x: &MatF, gram: &MatF) -> Result<InvolutionClass> {
    let field = x.field().clone();
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    if x.is_identity() {
        return Err(Error::IdentityInput);
    }
    if !x.mul(x).is_identity() {
        return Err(Error::UnsupportedCase("element is not an involution".into()));
    }
    let n = x.rows();
    let xi = x.sub(&MatF::identity(&field, n));
    let s = xi.rank() as u32;
    if s % 2 == 1 {
        return Ok(InvolutionClass::B(s));
    }
    let q = field.q();
    if q.checked_pow(n as u32).map_or(true, |t| t > INVOLUTION_SCAN_CAP) {
        return Err(Error::BudgetExceeded("involution type scan over vector cap".into()));
    }
    let mut v = vec![ZERO; n];
    loop {
        let w = xi.vec_mul(&v);
        if bilinear(gram, &v, &w) != ZERO {
            return Ok(InvolutionClass::C(s));
        }
        let mut i = 0;
        while i < n && v[i].0 as u64 + 1 == q {
            v[i] = ZERO;
            i += 1;
        }
        if i == n {
            return Ok(InvolutionClass::A(s));
        }
        v[i] = crate::ffield::FieldElem(v[i].0 + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::forms::standard_symplectic_gram;

    fn exact_val(f: &BoundFormula) -> BigRational {
        let iv = bound_value(f).unwrap();
        assert!(iv.is_exact());
        iv.lo
    }

    #[test]
    fn four_dim_values() {
        assert_eq!(
            exact_val(&BoundFormula::FourDimNonSubspace { p: 2, f: 2, special_involution: false }),
            rat(1, 3)
        );
        assert_eq!(
            exact_val(&BoundFormula::FourDimNonSubspace { p: 2, f: 2, special_involution: true }),
            rat(4, 15)
        );
        assert_eq!(exact_val(&BoundFormula::FourDimSuzuki { p: 2, f: 3 }), rat(1, 64));
        assert_eq!(exact_val(&BoundFormula::FourDimMinusTorus { p: 2, f: 2 }), rat(1, 6));
    }

    #[test]
    fn quadratic_type_value() {
        assert_eq!(
            exact_val(&BoundFormula::QuadraticTypeStab { m: 2, q: 4, beta: 2 }),
            rat(1, 8)
        );
    }

    #[test]
    fn two_space_nonlinear_value() {
        assert_eq!(
            exact_val(&BoundFormula::NondegTwoSpace { m: 3, q: 4, case: TwoSpaceCase::NotLinear }),
            rat(2, 1024)
        );
    }

    #[test]
    fn symplectic_interval_encloses_sqrt() {
        let iv = bound_value(&BoundFormula::SympNonSubspace { m: 3, q: 4, ell100: 100 }).unwrap();
        // value is sqrt(10)/16: check by squaring the endpoints
        let target = rat(10, 256);
        assert!(iv.lo.pow(2) < target && target < iv.hi.pow(2));
        assert!(&iv.hi - &iv.lo < rat(1, 1 << 60));
    }

    #[test]
    fn sharp_interval_encloses_cube_root() {
        let iv = bound_value(&BoundFormula::SympNonSubspaceSharp {
            m: 3,
            q: 4,
            ell100: 100,
            case: SharpCase::NuOne,
        })
        .unwrap();
        // value is 10^(1/3)/16
        let target = rat(10, 4096);
        assert!(iv.lo.pow(3) < target && target < iv.hi.pow(3));
    }

    #[test]
    fn hypotheses_rejected() {
        for f in [
            BoundFormula::OrthNonSubspace { m: 3, q: 4, ell100: 100, reflection: false },
            BoundFormula::SympNonSubspace { m: 2, q: 4, ell100: 100 },
            BoundFormula::SubfieldNuOne { m: 1, q: 4 },
            BoundFormula::IsotropicStab { m: 3, q: 4, k: 4 },
            BoundFormula::QuadraticTypeStab { m: 2, q: 3, beta: 2 },
            BoundFormula::FourDimNonSubspace { p: 2, f: 1, special_involution: false },
            BoundFormula::FourDimSuzuki { p: 2, f: 2 },
            BoundFormula::FourDimNonSubspace { p: 6, f: 2, special_involution: false },
        ] {
            assert!(matches!(bound_value(&f), Err(Error::HypothesisViolated(_))), "{:?}", f);
        }
    }

    fn gf(q: u64) -> Arc<FieldSpec> {
        let (p, f) = match q {
            2 => (2, 1),
            3 => (3, 1),
            4 => (2, 2),
            9 => (3, 2),
            _ => panic!(),
        };
        Arc::new(FieldSpec::make(p, f, None).unwrap())
    }

    #[test]
    fn nu_small_cases() {
        let f4 = gf(4);
        let id = SemilinearMap::linear(MatF::identity(&f4, 4));
        assert_eq!(nu(&id).unwrap(), 0);
        // transvection: rank(x - 1) = 1
        let mut t = MatF::identity(&f4, 4);
        t.set(1, 0, f4.one());
        assert_eq!(nu(&SemilinearMap::linear(t)).unwrap(), 1);
        // reflection-like [-1, -1, 1] over GF(3)
        let f3 = gf(3);
        let mut r = MatF::identity(&f3, 3);
        let minus = f3.neg(f3.one());
        r.set(0, 0, minus);
        r.set(1, 1, minus);
        assert_eq!(nu(&SemilinearMap::linear(r)).unwrap(), 1);
    }

    #[test]
    fn nu_needs_extension_eigenvalues() {
        // companion matrix of an irreducible quadratic over GF(2) has two
        // conjugate eigenvalues in GF(4), each with a 1-dim eigenspace
        let f2 = gf(2);
        let c = MatF::from_rows(&f2, &[vec![0, 1], vec![1, 1]]);
        assert_eq!(nu(&SemilinearMap::linear(c)).unwrap(), 1);
    }

    #[test]
    fn nu_rejects_semilinear() {
        let f4 = gf(4);
        let s = SemilinearMap::new(MatF::identity(&f4, 2), 1);
        assert!(matches!(nu(&s), Err(Error::NotLinear)));
    }

    #[test]
    fn involution_types() {
        for q in [2u64, 4] {
            let f = gf(q);
            let gram = standard_symplectic_gram(&f, 2);
            let one = f.one();
            // b_1: transvection along e_1
            let mut b1 = MatF::identity(&f, 4);
            b1.set(1, 0, one);
            assert_eq!(symplectic_involution_type(&b1, &gram).unwrap(), InvolutionClass::B(1));
            // a_2: f_1 -> f_1 + e_2, f_2 -> f_2 + e_1
            let mut a2 = MatF::identity(&f, 4);
            a2.set(1, 2, one);
            a2.set(3, 0, one);
            assert_eq!(symplectic_involution_type(&a2, &gram).unwrap(), InvolutionClass::A(2));
            // c_2: product of transvections along e_1 and e_2
            let mut c2 = MatF::identity(&f, 4);
            c2.set(1, 0, one);
            c2.set(3, 2, one);
            assert_eq!(symplectic_involution_type(&c2, &gram).unwrap(), InvolutionClass::C(2));
        }
    }

    #[test]
    fn involution_classifier_guards() {
        let f9 = gf(9);
        let gram = standard_symplectic_gram(&f9, 1);
        let m = MatF::identity(&f9, 2);
        assert!(matches!(symplectic_involution_type(&m, &gram), Err(Error::OddCharacteristic)));
        let f4 = gf(4);
        let gram = standard_symplectic_gram(&f4, 1);
        assert!(matches!(
            symplectic_involution_type(&MatF::identity(&f4, 2), &gram),
            Err(Error::IdentityInput)
        ));
    }
}
