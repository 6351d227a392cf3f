//! Univariate polynomial arithmetic over F_p: Euclidean algorithms, exact
//! resultants, interpolation, squarefree and irreducible factorization, and
//! the quotient fields F_p[z]/(g) used to walk Galois orbits of points.

use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use num_bigint::BigUint;
use num_traits::One;
use rand::RngCore;

/// Coefficients ascending by power, no trailing zeros.
pub type UniPoly = Vec<u64>;

pub fn trim(v: &mut UniPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn add(fp: Fp, a: &[u64], b: &[u64]) -> UniPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] = fp.add_raw(out[i], x);
    }
    trim(&mut out);
    out
}

pub fn sub(fp: Fp, a: &[u64], b: &[u64]) -> UniPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] = fp.sub_raw(out[i], x);
    }
    trim(&mut out);
    out
}

pub fn scale(fp: Fp, a: &[u64], s: u64) -> UniPoly {
    if s == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| fp.mul_raw(x, s)).collect()
}

/// Schoolbook product with u128 accumulators; one reduction per output
/// coefficient.
pub fn mul(fp: Fp, a: &[u64], b: &[u64]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u128;
        }
    }
    let p = fp.p() as u128;
    let mut out: UniPoly = acc.iter().map(|&v| (v % p) as u64).collect();
    trim(&mut out);
    out
}

pub fn monic(fp: Fp, a: &[u64]) -> UniPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(fp, a, fp.inv(&lc).unwrap()),
    }
}

pub fn divrem(fp: Fp, a: &[u64], b: &[u64]) -> (UniPoly, UniPoly) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lcinv = fp.inv(&b[db]).unwrap();
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        if c == 0 {
            continue;
        }
        let f = fp.mul_raw(c, lcinv);
        q[k] = f;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = fp.sub_raw(r[k + i], fp.mul_raw(f, bc));
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(fp: Fp, a: &[u64], b: &[u64]) -> UniPoly {
    divrem(fp, a, b).1
}

/// Monic gcd.
pub fn gcd(fp: Fp, a: &[u64], b: &[u64]) -> UniPoly {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let r = rem(fp, &f, &g);
        f = g;
        g = r;
    }
    monic(fp, &f)
}

pub fn eval(fp: Fp, a: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = fp.add_raw(fp.mul_raw(acc, x), c);
    }
    acc
}

pub fn derivative(fp: Fp, a: &[u64]) -> UniPoly {
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut out: UniPoly = a[1..]
        .iter()
        .enumerate()
        .map(|(i, &c)| fp.mul_raw(c, ((i + 1) as u64) % fp.p()))
        .collect();
    trim(&mut out);
    out
}

/// Exact resultant by the Euclidean multiplier formula:
/// res(f,g) = lc(g)^(deg f - deg r) * (-1)^(deg f * deg g) * res(g, r).
pub fn resultant(fp: Fp, f: &[u64], g: &[u64]) -> u64 {
    let mut f = f.to_vec();
    let mut g = g.to_vec();
    trim(&mut f);
    trim(&mut g);
    let mut acc = 1u64;
    loop {
        let (df, dg) = match (deg(&f), deg(&g)) {
            (None, _) | (_, None) => {
                // res with the zero polynomial: zero unless both constants
                return 0;
            }
            (Some(df), Some(dg)) => (df, dg),
        };
        if dg == 0 {
            return fp.mul_raw(acc, fp.pow(g[0], df as u64));
        }
        if df == 0 {
            return fp.mul_raw(acc, fp.pow(f[0], dg as u64));
        }
        if df < dg {
            if (df * dg) % 2 == 1 {
                acc = fp.neg(&acc);
            }
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let r = rem(fp, &f, &g);
        let dr = deg(&r).map_or(0, |d| d);
        if r.is_empty() {
            return 0;
        }
        let lcg = *g.last().unwrap();
        acc = fp.mul_raw(acc, fp.pow(lcg, (df - dr) as u64));
        if (df * dg) % 2 == 1 {
            acc = fp.neg(&acc);
        }
        f = g;
        g = r;
    }
}

/// Newton-form interpolation through distinct nodes.
pub fn interpolate(fp: Fp, pts: &[(u64, u64)]) -> Result<UniPoly> {
    let n = pts.len();
    // divided differences
    let mut coef: Vec<u64> = pts.iter().map(|&(_, y)| y).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = fp.sub_raw(pts[i].0, pts[i - level].0);
            if dx == 0 {
                return Err(Error::Degenerate("repeated interpolation node".into()));
            }
            let num = fp.sub_raw(coef[i], coef[i - 1]);
            coef[i] = fp.mul_raw(num, fp.inv(&dx)?);
        }
    }
    // expand Newton form
    let mut out: UniPoly = Vec::new();
    for i in (0..n).rev() {
        // out = out * (x - x_i) + coef[i]
        let mut next = vec![0u64; out.len() + 1];
        for (j, &c) in out.iter().enumerate() {
            next[j + 1] = fp.add_raw(next[j + 1], c);
            next[j] = fp.sub_raw(next[j], fp.mul_raw(c, pts[i].0));
        }
        next[0] = fp.add_raw(next[0], coef[i]);
        out = next;
        trim(&mut out);
    }
    Ok(out)
}

/// base^e mod m with a big exponent.
pub fn pow_mod(fp: Fp, base: &[u64], e: &BigUint, m: &[u64]) -> UniPoly {
    let mut result = vec![1u64];
    let mut b = rem(fp, base, m);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = rem(fp, &mul(fp, &result, &b), m);
        }
        if i + 1 < bits {
            b = rem(fp, &mul(fp, &b, &b), m);
        }
    }
    result
}

/// Squarefree decomposition (Yun). Valid here because all multiplicities
/// stay below p. Returns (factor, multiplicity) with factors monic.
pub fn squarefree_decomposition(fp: Fp, f: &[u64]) -> Vec<(UniPoly, usize)> {
    let f = monic(fp, f);
    if deg(&f).map_or(true, |d| d == 0) {
        return Vec::new();
    }
    let df = derivative(fp, &f);
    let a = gcd(fp, &f, &df);
    let mut b = divrem(fp, &f, &a).0;
    let mut c = divrem(fp, &df, &a).0;
    let mut out = Vec::new();
    let mut i = 1usize;
    loop {
        let d = sub(fp, &c, &derivative(fp, &b));
        let g = gcd(fp, &b, &d);
        if deg(&g).map_or(false, |dg| dg > 0) {
            out.push((g.clone(), i));
        }
        b = divrem(fp, &b, &g).0;
        c = divrem(fp, &d, &g).0;
        i += 1;
        if deg(&b).map_or(true, |db| db == 0) {
            break;
        }
    }
    out
}

pub fn squarefree_part(fp: Fp, f: &[u64]) -> UniPoly {
    let f = monic(fp, f);
    let df = derivative(fp, &f);
    if df.is_empty() {
        return f;
    }
    let g = gcd(fp, &f, &df);
    divrem(fp, &f, &g).0
}

/// Distinct-degree factorization of a squarefree monic polynomial.
/// Returns (d, product of all irreducible factors of degree d).
pub fn distinct_degree(fp: Fp, f: &[u64]) -> Vec<(usize, UniPoly)> {
    let mut f = monic(fp, f);
    let mut out = Vec::new();
    let p = BigUint::from(fp.p());
    let mut h = pow_mod(fp, &[0, 1], &p, &f); // x^p mod f
    let mut d = 1usize;
    while deg(&f).map_or(false, |df| df >= 2 * d) {
        let g = gcd(fp, &f, &sub(fp, &h, &[0, 1]));
        if deg(&g).map_or(false, |dg| dg > 0) {
            out.push((d, g.clone()));
            f = divrem(fp, &f, &g).0;
            h = rem(fp, &h, &f);
        }
        d += 1;
        if deg(&f).map_or(true, |df| df < 2 * d) {
            break;
        }
        h = pow_mod(fp, &h, &p, &f);
    }
    if deg(&f).map_or(false, |df| df > 0) {
        out.push((deg(&f).unwrap(), f));
    }
    out
}

/// Cantor-Zassenhaus split of a product of irreducibles of equal degree d.
pub fn equal_degree(fp: Fp, f: &[u64], d: usize, rng: &mut dyn RngCore) -> Vec<UniPoly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![monic(fp, f)];
    }
    let e: BigUint = (BigUint::from(fp.p()).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: UniPoly = {
            let mut v: UniPoly = (0..n).map(|_| fp.rand_elem(rng)).collect();
            trim(&mut v);
            if v.is_empty() {
                continue;
            }
            v
        };
        let g = gcd(fp, f, &a);
        let g = if deg(&g).map_or(false, |dg| dg > 0 && dg < n) {
            g
        } else {
            let b = pow_mod(fp, &a, &e, f);
            let bm1 = sub(fp, &b, &[1]);
            let g = gcd(fp, f, &bm1);
            if deg(&g).map_or(true, |dg| dg == 0 || dg == n) {
                continue;
            }
            g
        };
        let rest = divrem(fp, f, &g).0;
        let mut out = equal_degree(fp, &g, d, rng);
        out.extend(equal_degree(fp, &rest, d, rng));
        return out;
    }
}

/// Full monic factorization: (irreducible factor, multiplicity).
pub fn factor(fp: Fp, f: &[u64], rng: &mut dyn RngCore) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    for (sq, mult) in squarefree_decomposition(fp, f) {
        for (d, prod) in distinct_degree(fp, &sq) {
            for irr in equal_degree(fp, &prod, d, rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    out
}

/// The finite field F_p[z]/(modulus), modulus monic irreducible.
/// Elements are coefficient vectors of length < deg(modulus), trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct FpExt {
    pub fp: Fp,
    pub modulus: UniPoly,
}

impl FpExt {
    pub fn new(fp: Fp, modulus: UniPoly) -> Self {
        assert!(deg(&modulus).map_or(false, |d| d >= 1));
        let modulus = monic(fp, &modulus);
        FpExt { fp, modulus }
    }

    pub fn degree(&self) -> usize {
        deg(&self.modulus).unwrap()
    }

    pub fn embed(&self, x: u64) -> UniPoly {
        let x = x % self.fp.p();
        if x == 0 {
            Vec::new()
        } else {
            vec![x]
        }
    }

    /// The residue class of z.
    pub fn gen(&self) -> UniPoly {
        if self.degree() == 1 {
            // z = -c0 in the base field
            self.embed(self.fp.neg(&self.modulus[0]))
        } else {
            vec![0, 1]
        }
    }
}

impl Field for FpExt {
    type Elem = UniPoly;

    fn zero(&self) -> UniPoly {
        Vec::new()
    }
    fn one(&self) -> UniPoly {
        vec![1]
    }
    fn is_zero(&self, a: &UniPoly) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        add(self.fp, a, b)
    }
    fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        sub(self.fp, a, b)
    }
    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        rem(self.fp, &mul(self.fp, a, b), &self.modulus)
    }
    fn neg(&self, a: &UniPoly) -> UniPoly {
        scale(self.fp, a, self.fp.p() - 1)
    }

    fn inv(&self, a: &UniPoly) -> Result<UniPoly> {
        if a.is_empty() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid in F_p[z]
        let (mut r0, mut r1) = (self.modulus.clone(), a.to_vec());
        let (mut t0, mut t1): (UniPoly, UniPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r2) = divrem(self.fp, &r0, &r1);
            let t2 = sub(self.fp, &t0, &mul(self.fp, &q, &t1));
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
        }
        if deg(&r0) != Some(0) {
            return Err(Error::DivisionByZero); // zero divisor: modulus not irreducible
        }
        Ok(scale(self.fp, &t0, self.fp.inv(&r0[0])?))
    }

    fn from_i64(&self, n: i64) -> UniPoly {
        self.embed(self.fp.from_i64(n))
    }

    fn from_bigint(&self, n: &num_bigint::BigInt) -> UniPoly {
        self.embed(self.fp.from_bigint(n))
    }

    fn characteristic(&self) -> u64 {
        self.fp.p()
    }

    fn fmt_elem(&self, a: &UniPoly) -> String {
        if a.is_empty() {
            "0".into()
        } else {
            a.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    fn parse_elem(&self, s: &str) -> Result<UniPoly> {
        let mut v = Vec::new();
        for t in s.split(',') {
            v.push(self.fp.parse_elem(t)?);
        }
        trim(&mut v);
        Ok(v)
    }

    fn rand_elem(&self, rng: &mut dyn RngCore) -> UniPoly {
        let mut v: UniPoly = (0..self.degree()).map(|_| self.fp.rand_elem(rng)).collect();
        trim(&mut v);
        v
    }

    fn header_name(&self) -> String {
        format!("Fp{}^{}", self.fp.p(), self.degree())
    }
}

/// Evaluate a multivariate polynomial over F_p at a point with coordinates
/// in an extension field.
pub fn eval_in_ext(
    poly: &crate::poly::MultiPoly<Fp>,
    ext: &FpExt,
    point: &[UniPoly],
) -> UniPoly {
    assert_eq!(point.len(), poly.nvars);
    let mut maxes = vec![0u16; poly.nvars];
    for m in poly.terms.keys() {
        for (i, &e) in m.exps().iter().enumerate() {
            maxes[i] = maxes[i].max(e);
        }
    }
    let pows: Vec<Vec<UniPoly>> = (0..poly.nvars)
        .map(|i| {
            let mut v = vec![ext.one()];
            for e in 1..=maxes[i] as usize {
                let prev = v[e - 1].clone();
                v.push(ext.mul(&prev, &point[i]));
            }
            v
        })
        .collect();
    let mut acc = ext.zero();
    for (m, c) in &poly.terms {
        let mut t = ext.embed(*c);
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = ext.mul(&t, &pows[i][e as usize]);
            }
        }
        acc = ext.add(&acc, &t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn fp() -> Fp {
        Fp::new(32003).unwrap()
    }

    fn rand_poly(fp: Fp, d: usize, rng: &mut ChaCha20Rng) -> UniPoly {
        let mut v: UniPoly = (0..d).map(|_| fp.rand_elem(rng)).collect();
        v.push(1 + rng.gen_range(0..fp.p() - 1));
        v
    }

    #[test]
    fn divrem_reconstructs() {
        let fp = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = rand_poly(fp, rng.gen_range(3..12), &mut rng);
            let b = rand_poly(fp, rng.gen_range(1..6), &mut rng);
            let (q, r) = divrem(fp, &a, &b);
            let back = add(fp, &mul(fp, &q, &b), &r);
            assert_eq!(back, a);
            assert!(deg(&r).map_or(true, |dr| dr < deg(&b).unwrap()));
        }
    }

    /// Sylvester-matrix oracle for the resultant.
    fn sylvester_res(fp: Fp, f: &[u64], g: &[u64]) -> u64 {
        let (m, n) = (deg(f).unwrap(), deg(g).unwrap());
        let size = m + n;
        let mat = Mat::from_fn(fp, size, size, |r, c| {
            if r < n {
                // row of f coefficients, descending, shifted by r
                let idx = c as i64 - r as i64;
                if idx >= 0 && idx <= m as i64 {
                    f[m - idx as usize]
                } else {
                    0
                }
            } else {
                let rr = r - n;
                let idx = c as i64 - rr as i64;
                if idx >= 0 && idx <= n as i64 {
                    g[n - idx as usize]
                } else {
                    0
                }
            }
        });
        mat.det_fraction_free().unwrap()
    }

    #[test]
    fn resultant_matches_sylvester() {
        let fp = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..40 {
            let f = rand_poly(fp, rng.gen_range(1..7), &mut rng);
            let g = rand_poly(fp, rng.gen_range(1..7), &mut rng);
            assert_eq!(resultant(fp, &f, &g), sylvester_res(fp, &f, &g));
        }
    }

    #[test]
    fn resultant_detects_common_root() {
        let fp = fp();
        // f = (x-3)(x-5), g = (x-3)(x-7)
        let f = mul(fp, &[fp.neg(&3), 1], &[fp.neg(&5), 1]);
        let g = mul(fp, &[fp.neg(&3), 1], &[fp.neg(&7), 1]);
        assert_eq!(resultant(fp, &f, &g), 0);
    }

    #[test]
    fn interpolation_recovers() {
        let fp = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let f = rand_poly(fp, 10, &mut rng);
        let pts: Vec<(u64, u64)> = (0..12).map(|x| (x, eval(fp, &f, x))).collect();
        let g = interpolate(fp, &pts).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn factorization_roundtrip() {
        let fp = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        // known factors: (x-1)^2 * (x^2+1) * (x+5)
        // x^2+1 is irreducible mod 32003 iff -1 is a non-residue: 32003 % 4 == 3
        let f = {
            let a = mul(fp, &[fp.neg(&1), 1], &[fp.neg(&1), 1]);
            let b = mul(fp, &a, &[1, 0, 1]);
            mul(fp, &b, &[5, 1])
        };
        let factors = factor(fp, &f, &mut rng);
        let mut total = 0;
        let mut rebuilt = vec![1u64];
        for (g, m) in &factors {
            total += deg(g).unwrap() * m;
            for _ in 0..*m {
                rebuilt = mul(fp, &rebuilt, g);
            }
        }
        assert_eq!(total, 5);
        assert_eq!(rebuilt, monic(fp, &f));
        assert!(factors.iter().any(|(g, m)| deg(g) == Some(2) && *m == 1));
        assert!(factors.iter().any(|(g, m)| deg(g) == Some(1) && *m == 2));
    }

    #[test]
    fn ext_field_arithmetic() {
        let fp = fp();
        // F_p[z]/(z^2+1)
        let ext = FpExt::new(fp, vec![1, 0, 1]);
        let z = ext.gen();
        let z2 = ext.mul(&z, &z);
        assert_eq!(z2, vec![fp.p() - 1]); // z^2 = -1
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = ext.rand_elem(&mut rng);
            if ext.is_zero(&a) {
                continue;
            }
            let ainv = ext.inv(&a).unwrap();
            assert_eq!(ext.mul(&a, &ainv), ext.one());
        }
    }
}

// ---- univariate helpers over an arbitrary field (used with FpExt) ----

pub fn gpoly_trim<K: Field>(field: &K, v: &mut Vec<K::Elem>) {
    while v.last().map_or(false, |c| field.is_zero(c)) {
        v.pop();
    }
}

pub fn gpoly_divrem<K: Field>(
    field: &K,
    a: &[K::Elem],
    b: &[K::Elem],
) -> (Vec<K::Elem>, Vec<K::Elem>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    gpoly_trim(field, &mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lcinv = field.inv(&b[db]).expect("nonzero leading coefficient");
    let mut q = vec![field.zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if field.is_zero(&c) {
            continue;
        }
        let f = field.mul(&c, &lcinv);
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = field.mul_sub(&r[k + i], &f, bc);
        }
        q[k] = f;
    }
    gpoly_trim(field, &mut r);
    gpoly_trim(field, &mut q);
    (q, r)
}

/// Monic gcd over any field.
pub fn gpoly_gcd<K: Field>(field: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    gpoly_trim(field, &mut f);
    gpoly_trim(field, &mut g);
    while !g.is_empty() {
        let (_, r) = gpoly_divrem(field, &f, &g);
        f = g;
        g = r;
    }
    if let Some(lc) = f.last().cloned() {
        let inv = field.inv(&lc).unwrap();
        for c in f.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
    f
}

pub fn gpoly_eval<K: Field>(field: &K, a: &[K::Elem], x: &K::Elem) -> K::Elem {
    let mut acc = field.zero();
    for c in a.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}
