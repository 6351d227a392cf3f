//! Exact coefficient fields: arbitrary-precision rationals and odd prime
//! fields, plus the CRT / rational-reconstruction glue used to lift
//! multi-prime results back to Q.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

/// A field given as a context object; elements carry no field pointer.
pub trait Field: Clone + PartialEq + Send + Sync + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Field characteristic; 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// a - f*b, the elimination kernel step.
    #[inline]
    fn mul_sub(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(f, b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Canonical text form; must round-trip through `parse_elem` bit-exactly.
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    fn rand_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Uniform nonzero element.
    fn rand_nonzero(&self, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let x = self.rand_elem(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Field name for file headers ("Q" or "Fp:<p>").
    fn header_name(&self) -> String;
}

/// The rational numbers. Elements are `BigRational`, kept in lowest terms
/// with positive denominator by the `num` crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }

    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad rational '{s}'")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in '{s}'")));
                }
                Ok(BigRational::new(parse_int(n)?, den))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }

    fn rand_elem(&self, rng: &mut dyn RngCore) -> BigRational {
        // Small integers: what the randomized identities want.
        let n = (rng.next_u64() % 2001) as i64 - 1000;
        self.from_i64(n)
    }

    fn header_name(&self) -> String {
        "Q".into()
    }
}

/// Odd prime field F_p, p < 2^31. Elements are residues in [0, p).
///
/// Multiplication uses Barrett reduction: `shift` = floor(2^62 / p), valid
/// for any x < 2^62, so products of two reduced residues reduce in a single
/// multiply-shift.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    p: u64,
    barrett: u64,
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for Fp {}

impl Fp {
    pub fn new(p: u64) -> Result<Fp> {
        if p < 3 || p >= (1 << 31) || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp {
            p,
            barrett: ((1u128 << 62) / p as u128) as u64,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce x < 2^62 mod p.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        debug_assert!(x < (1 << 62));
        let q = ((x as u128 * self.barrett as u128) >> 62) as u64;
        let mut r = x - q * self.p;
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline(always)]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elem_from_u64(&self, x: u64) -> u64 {
        x % self.p
    }

    /// Reduce a rational mod p; errors when p divides the denominator.
    pub fn from_rat(&self, r: &BigRational) -> Result<u64> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        if den == 0 {
            return Err(Error::BadReduction);
        }
        Ok(self.mul_raw(num, self.inv(&den)?))
    }
}

impl Field for Fp {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_raw(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_raw(*a, *b)
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    #[inline]
    fn mul_sub(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        // a + (p - f)*b stays below 2^62 for p < 2^31
        self.reduce(*a + (self.p - *f) * *b)
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let t = t0.rem_euclid(self.p as i128);
        Ok(t as u64)
    }

    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if let Some(t) = s.strip_prefix('-') {
            let v: u64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue '{s}'")))?;
            return Ok(self.neg(&(v % self.p)));
        }
        // accept n/d over Fp too, so Q-written files reduce cleanly
        if let Some((n, d)) = s.split_once('/') {
            let num = self.parse_elem(n)?;
            let den = self.parse_elem(d)?;
            return self.div(&num, &den);
        }
        let v: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue '{s}'")))?;
        Ok(v % self.p)
    }

    fn rand_elem(&self, rng: &mut dyn RngCore) -> u64 {
        // rejection sampling for uniformity
        let bound = u64::MAX - u64::MAX % self.p;
        loop {
            let x = rng.next_u64();
            if x < bound {
                return x % self.p;
            }
        }
    }

    fn header_name(&self) -> String {
        format!("Fp:{}", self.p)
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Combine residues by CRT into the symmetric range (-M/2, M/2].
pub fn crt_symmetric(residues: &[(u64, u64)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(r, p) in residues {
        let pb = BigInt::from(p);
        // solve x' = x mod m, x' = r mod p
        let rm = x.mod_floor(&m);
        let diff = (BigInt::from(r) - &rm).mod_floor(&pb);
        let m_inv = mod_inverse(&m.mod_floor(&pb), &pb).expect("moduli not coprime");
        let t = (diff * m_inv).mod_floor(&pb);
        x = rm + &m * t;
        m *= pb;
    }
    // symmetric lift
    let half = &m >> 1;
    if x > half {
        x -= &m;
    }
    x
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Wang rational reconstruction: find n/d with x*d = n (mod m),
/// |n|, d <= sqrt(m/2). Returns None if no such fraction exists.
pub fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = x.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if num.gcd(&den).is_one() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn fp_rejects_non_primes() {
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(2).is_err());
        assert!(Fp::new(32004).is_err());
        assert!(Fp::new(32003).is_ok());
    }

    #[test]
    fn fp_arithmetic_matches_i128() {
        let f = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..500 {
            let a = f.rand_elem(&mut rng);
            let b = f.rand_elem(&mut rng);
            assert_eq!(f.mul_raw(a, b), ((a as u128 * b as u128) % 32003) as u64);
            assert_eq!(f.add_raw(a, b), (a + b) % 32003);
            if b != 0 {
                let binv = f.inv(&b).unwrap();
                assert_eq!(f.mul_raw(b, binv), 1);
            }
        }
    }

    #[test]
    fn barrett_handles_large_prime() {
        let p = (1u64 << 31) - 1; // Mersenne prime 2147483647
        let f = Fp::new(p).unwrap();
        let a = p - 1;
        assert_eq!(f.mul_raw(a, a), 1); // (-1)^2
        assert_eq!(f.pow(3, p - 1), 1); // Fermat
    }

    #[test]
    fn rational_parse_roundtrip() {
        let q = Rationals;
        for s in ["0", "-17", "22/7", "-3/4"] {
            let e = q.parse_elem(s).unwrap();
            assert_eq!(q.fmt_elem(&e), s);
        }
        // non-lowest terms normalize
        let e = q.parse_elem("4/6").unwrap();
        assert_eq!(q.fmt_elem(&e), "2/3");
    }

    #[test]
    fn crt_and_reconstruction_roundtrip() {
        let q = Rationals;
        let target = q.parse_elem("-1234/789").unwrap();
        let primes = [32003u64, 32009, 32027];
        let mut residues = Vec::new();
        for p in primes {
            let f = Fp::new(p).unwrap();
            residues.push((f.from_rat(&target).unwrap(), p));
        }
        let m: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
        let lifted = crt_symmetric(&residues);
        let rec = rational_reconstruct(&lifted.mod_floor(&m), &m).unwrap();
        assert_eq!(rec, target);
    }
}
