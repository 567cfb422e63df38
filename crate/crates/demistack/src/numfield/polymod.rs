//! Polynomial arithmetic and factorization over prime fields F_l, plus the
//! residue-field arithmetic F_{l^d} built on top of it.
//!
//! The factorization pipeline is squarefree decomposition, then
//! distinct-degree splitting via gcd with x^{l^k} - x, then deterministic
//! splitting of equal-degree parts: root scans for linear factors and a
//! deterministic character sweep for higher degrees. All primes handled here
//! are desk scale, so the simple algorithms suffice.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub type MPoly = Vec<u64>;

#[inline]
pub fn addm(a: u64, b: u64, ell: u64) -> u64 {
    let s = a + b;
    if s >= ell {
        s - ell
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, ell: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + ell - b
    }
}

#[inline]
pub fn mulm(a: u64, b: u64, ell: u64) -> u64 {
    ((a as u128 * b as u128) % ell as u128) as u64
}

pub fn powm(mut base: u64, mut exp: u64, ell: u64) -> u64 {
    let mut acc = 1 % ell;
    base %= ell;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, ell);
        }
        base = mulm(base, base, ell);
        exp >>= 1;
    }
    acc
}

pub fn invm(a: u64, ell: u64) -> u64 {
    // Fermat; ell is prime and a nonzero mod ell.
    debug_assert!(!a.is_multiple_of(ell));
    powm(a, ell - 2, ell)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_pow_u128(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % n as u128) as u64;
        }
        base = ((base as u128 * base as u128) % n as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn trim(p: &mut MPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn reduce_int_poly(p: &[BigInt], ell: u64) -> MPoly {
    let l = BigInt::from(ell);
    let mut out: MPoly = p
        .iter()
        .map(|c| {
            let r = c.mod_floor(&l);
            r.to_u64().expect("residue fits u64")
        })
        .collect();
    trim(&mut out);
    out
}

pub fn add(a: &MPoly, b: &MPoly, ell: u64) -> MPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = addm(out[i], c, ell);
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = addm(out[i], c, ell);
    }
    trim(&mut out);
    out
}

pub fn sub(a: &MPoly, b: &MPoly, ell: u64) -> MPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = addm(out[i], c, ell);
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = subm(out[i], c, ell);
    }
    trim(&mut out);
    out
}

pub fn mul(a: &MPoly, b: &MPoly, ell: u64) -> MPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(ca, cb, ell), ell);
        }
    }
    trim(&mut out);
    out
}

pub fn divrem(a: &MPoly, b: &MPoly, ell: u64) -> (MPoly, MPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let lead_inv = invm(*b.last().unwrap(), ell);
    let mut rem = a.clone();
    let mut quo: MPoly = vec![0u64; a.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = mulm(*rem.last().unwrap(), lead_inv, ell);
        quo[shift] = addm(quo[shift], c, ell);
        for (j, &cb) in b.iter().enumerate() {
            rem[shift + j] = subm(rem[shift + j], mulm(cb, c, ell), ell);
        }
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

pub fn rem(a: &MPoly, b: &MPoly, ell: u64) -> MPoly {
    divrem(a, b, ell).1
}

pub fn make_monic(p: &mut MPoly, ell: u64) {
    if let Some(&lead) = p.last() {
        if lead != 1 {
            let inv = invm(lead, ell);
            for c in p.iter_mut() {
                *c = mulm(*c, inv, ell);
            }
        }
    }
}

pub fn gcd(a: &MPoly, b: &MPoly, ell: u64) -> MPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = rem(&x, &y, ell);
        x = y;
        y = r;
    }
    make_monic(&mut x, ell);
    x
}

pub fn derivative(p: &MPoly, ell: u64) -> MPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, &c) in p.iter().enumerate().skip(1) {
        out.push(mulm(c, (i as u64) % ell, ell));
    }
    trim(&mut out);
    out
}

pub fn eval(p: &MPoly, x: u64, ell: u64) -> u64 {
    let mut acc = 0u64;
    for &c in p.iter().rev() {
        acc = addm(mulm(acc, x, ell), c, ell);
    }
    acc
}

/// Polynomial power modulo `m`, exponent an arbitrary-precision integer.
pub fn pow_mod(base: &MPoly, exp: &BigUint, m: &MPoly, ell: u64) -> MPoly {
    let mut acc: MPoly = vec![1];
    let mut b = rem(base, m, ell);
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            acc = rem(&mul(&acc, &b, ell), m, ell);
        }
        if i + 1 < bits {
            b = rem(&mul(&b, &b, ell), m, ell);
        }
    }
    acc
}

/// Squarefree decomposition in characteristic l: returns (factor, multiplicity)
/// pairs whose product with multiplicity recovers the monic input.
fn squarefree_decomposition(f: &MPoly, ell: u64) -> Vec<(MPoly, u32)> {
    let mut out: Vec<(MPoly, u32)> = Vec::new();
    let mut stack = vec![(f.clone(), 1u32)];
    while let Some((g, outer)) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        let d = derivative(&g, ell);
        if d.is_empty() {
            // g = h(x^l) = (frobenius-twisted h)^l over F_l.
            let mut h: MPoly = Vec::new();
            for (i, &c) in g.iter().enumerate() {
                if i % (ell as usize) == 0 {
                    h.push(c);
                } else {
                    debug_assert_eq!(c, 0);
                }
            }
            trim(&mut h);
            stack.push((h, outer * ell as u32));
            continue;
        }
        // Yun-style peeling.
        let mut c = gcd(&g, &d, ell);
        let mut w = divrem(&g, &c, ell).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = gcd(&w, &c, ell);
            let fac = divrem(&w, &y, ell).0;
            if fac.len() > 1 {
                out.push((fac, outer * i));
            }
            w = y.clone();
            c = divrem(&c, &y, ell).0;
            i += 1;
        }
        // What remains of c carries the factors with multiplicity divisible
        // by l; it is an l-th power, so the derivative-zero branch above will
        // deflate it on the next pass.
        if c.len() > 1 {
            stack.push((c, outer));
        }
    }
    out
}

/// Distinct-degree splitting of a squarefree monic polynomial: returns
/// (product of irreducible factors of degree k, k) pairs.
fn distinct_degree(f: &MPoly, ell: u64) -> Vec<(MPoly, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut k = 0usize;
    let mut frob: MPoly = vec![0, 1]; // x^{l^k} mod g, starting at k=0
    while g.len() > 1 {
        k += 1;
        if 2 * k > g.len() - 1 {
            out.push((g.clone(), g.len() - 1));
            break;
        }
        frob = pow_mod(&frob, &BigUint::from(ell), &g, ell);
        let diff = sub(&frob, &vec![0, 1], ell);
        let part = gcd(&diff, &g, ell);
        if part.len() > 1 {
            out.push((part.clone(), k));
            g = divrem(&g, &part, ell).0;
            frob = rem(&frob, &g, ell);
        }
    }
    out
}

/// All roots of f in F_l by direct scan.
pub fn roots(f: &MPoly, ell: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 0..ell {
        if eval(f, x, ell) == 0 {
            out.push(x);
        }
    }
    out
}

/// Splits a squarefree product of j >= 1 irreducible factors, all of degree k.
fn equal_degree_split(f: &MPoly, k: usize, ell: u64) -> Vec<MPoly> {
    let deg = f.len() - 1;
    if deg == k {
        return vec![f.clone()];
    }
    if k == 1 {
        return roots(f, ell)
            .into_iter()
            .map(|r| vec![subm(0, r, ell), 1])
            .collect();
    }
    if ell == 2 {
        // Peel irreducible divisors by ascending enumeration; the first
        // degree-k divisor found this way is necessarily irreducible.
        let mut rest = f.clone();
        let mut found = Vec::new();
        'outer: while rest.len() - 1 > k {
            for code in 0..(1u64 << k) {
                let mut cand: MPoly = (0..k).map(|i| (code >> i) & 1).collect();
                cand.push(1);
                if rem(&rest, &cand, ell).is_empty() {
                    found.push(cand.clone());
                    rest = divrem(&rest, &cand, ell).0;
                    continue 'outer;
                }
            }
            unreachable!("squarefree part of degree multiple of k must split");
        }
        found.push(rest);
        return found;
    }
    // Odd l: deterministic character sweep with shifts x + c, escalating to
    // x^2 + c. Each gcd with w^{(l^k-1)/2} - 1 separates factors on which the
    // quadratic character of w differs; desk-scale inputs split immediately.
    let exp = (BigUint::from(ell).pow(k as u32) - BigUint::one()) / BigUint::from(2u32);
    let mut queue = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = queue.pop() {
        if g.len() - 1 == k {
            done.push(g);
            continue;
        }
        let mut split = None;
        'sweep: for stage in 0..2u32 {
            for c in 0..ell {
                let w: MPoly = if stage == 0 {
                    vec![c, 1]
                } else {
                    vec![c, 0, 1]
                };
                let p = pow_mod(&w, &exp, &g, ell);
                let cand = gcd(&sub(&p, &vec![1], ell), &g, ell);
                if cand.len() > 1 && cand.len() < g.len() {
                    split = Some(cand);
                    break 'sweep;
                }
            }
        }
        let cand = split.expect("character sweep failed to split equal-degree part");
        let other = divrem(&g, &cand, ell).0;
        queue.push(cand);
        queue.push(other);
    }
    done
}

/// Complete factorization of an integer polynomial modulo a prime, as monic
/// irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(f_int: &[BigInt], ell: u64) -> Vec<(MPoly, u32)> {
    let mut f = reduce_int_poly(f_int, ell);
    assert!(f.len() > 1, "cannot factor a constant");
    make_monic(&mut f, ell);
    let mut out: Vec<(MPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f, ell) {
        for (prod, k) in distinct_degree(&part, ell) {
            for irr in equal_degree_split(&prod, k, ell) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Dedekind's criterion: is Z[x]/(f) maximal at l?
pub fn dedekind_maximal_at(f_int: &[BigInt], ell: u64) -> bool {
    let factors = factor(f_int, ell);
    let one: MPoly = vec![1];
    let mut g_bar = one.clone();
    let mut h_bar = one.clone();
    for (fac, mult) in &factors {
        g_bar = mul(&g_bar, fac, ell);
        for _ in 1..*mult {
            h_bar = mul(&h_bar, fac, ell);
        }
    }
    if h_bar.len() <= 1 {
        return true; // squarefree reduction, always maximal
    }
    // Lift and form T = (g*h - f)/l over the integers.
    let lift = |p: &MPoly| -> Vec<BigInt> { p.iter().map(|&c| BigInt::from(c)).collect() };
    let gz = lift(&g_bar);
    let hz = lift(&h_bar);
    let mut prod = vec![BigInt::zero(); gz.len() + hz.len() - 1];
    for (i, a) in gz.iter().enumerate() {
        for (j, b) in hz.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    let n = f_int.len();
    let mut t = vec![BigInt::zero(); prod.len().max(n)];
    for (i, c) in prod.iter().enumerate() {
        t[i] += c;
    }
    for (i, c) in f_int.iter().enumerate() {
        t[i] -= c;
    }
    let l = BigInt::from(ell);
    for c in t.iter_mut() {
        let (q, r) = c.div_rem(&l);
        debug_assert!(r.is_zero(), "g*h == f mod l by construction");
        *c = q;
    }
    let t_bar = reduce_int_poly(&t, ell);
    let g1 = gcd(&g_bar, &h_bar, ell);
    let g2 = gcd(&g1, &t_bar, ell);
    g2.len() <= 1
}

/// The finite field F_{l^d} presented as F_l[x]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub ell: u64,
    pub modulus: MPoly, // monic irreducible of degree d
}

pub type FqElem = MPoly;

impl ResidueField {
    pub fn new(ell: u64, modulus: MPoly) -> Self {
        assert!(modulus.len() >= 2);
        ResidueField { ell, modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.ell).pow(self.degree() as u32)
    }

    pub fn reduce(&self, p: &MPoly) -> FqElem {
        rem(p, &self.modulus, self.ell)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        add(a, b, self.ell)
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        sub(a, b, self.ell)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.reduce(&mul(a, b, self.ell))
    }

    pub fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!a.is_empty(), "inverse of zero in residue field");
        // Extended Euclid in F_l[x].
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1): (MPoly, MPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, self.ell);
            let s = sub(&s0, &mul(&q, &s1, self.ell), self.ell);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0.len(), 1);
        let scale = invm(r0[0], self.ell);
        let mut out: FqElem = s0.iter().map(|&c| mulm(c, scale, self.ell)).collect();
        trim(&mut out);
        self.reduce(&out)
    }

    pub fn pow(&self, a: &FqElem, exp: &BigUint) -> FqElem {
        pow_mod(a, exp, &self.modulus, self.ell)
    }

    /// Deterministic element enumeration: index -> element (base-l digits).
    pub fn element_from_index(&self, mut idx: u64) -> FqElem {
        let mut out = Vec::new();
        for _ in 0..self.degree() {
            out.push(idx % self.ell);
            idx /= self.ell;
        }
        trim(&mut out);
        out
    }

    pub fn index_of(&self, a: &FqElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.iter().rev() {
            idx = idx * self.ell + c;
        }
        idx
    }

    /// Quadratic character of a nonzero element; the residue characteristic
    /// must be odd.
    pub fn is_square(&self, a: &FqElem) -> bool {
        assert!(self.ell != 2);
        assert!(!a.is_empty());
        let exp = (self.order() - BigUint::one()) / BigUint::from(2u32);
        self.pow(a, &exp) == vec![1]
    }

    /// Canonical square root of a nonzero square: Tonelli-Shanks with a
    /// deterministic nonresidue scan, returning the root of smaller index.
    pub fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        assert!(self.ell != 2);
        if a.is_empty() {
            return Some(Vec::new());
        }
        if !self.is_square(a) {
            return None;
        }
        let q = self.order();
        let mut t = &q - BigUint::one();
        let mut s = 0u32;
        while (&t % BigUint::from(2u32)).is_zero() {
            t /= BigUint::from(2u32);
            s += 1;
        }
        // Deterministic nonresidue scan in enumeration order.
        let z = {
            let mut idx = 2u64;
            loop {
                let cand = self.element_from_index(idx);
                if !cand.is_empty() && !self.is_square(&cand) {
                    break cand;
                }
                idx += 1;
            }
        };
        let mut m = s;
        let mut c = self.pow(&z, &t);
        let mut r = self.pow(a, &((&t + BigUint::one()) / BigUint::from(2u32)));
        let mut tt = self.pow(a, &t);
        while tt != vec![1] {
            // find least i with tt^{2^i} = 1
            let mut i = 0u32;
            let mut probe = tt.clone();
            while probe != vec![1] {
                probe = self.mul(&probe, &probe);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        let neg = self.sub(&Vec::new(), &r);
        Some(if self.index_of(&r) <= self.index_of(&neg) {
            r
        } else {
            neg
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zpoly(cs: &[i64]) -> Vec<BigInt> {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn factors_x2_plus_1_mod_small_primes() {
        // mod 5: (x+2)(x+3)
        let f = zpoly(&[1, 0, 1]);
        let fac5 = factor(&f, 5);
        assert_eq!(fac5, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        // mod 3: irreducible
        let fac3 = factor(&f, 3);
        assert_eq!(fac3, vec![(vec![1, 0, 1], 1)]);
        // mod 2: (x+1)^2
        let fac2 = factor(&f, 2);
        assert_eq!(fac2, vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn factor_recombines() {
        let f = zpoly(&[3, 1, 4, 1, 1]); // arbitrary quartic
        for ell in [2u64, 3, 5, 7, 11, 13] {
            let fac = factor(&f, ell);
            let mut prod: MPoly = vec![1];
            for (g, m) in &fac {
                for _ in 0..*m {
                    prod = mul(&prod, g, ell);
                }
            }
            assert_eq!(prod, reduce_int_poly(&f, ell), "mod {ell}");
        }
    }

    #[test]
    fn splits_product_of_two_quadratics() {
        // x^4+1 mod 7 = (x^2+3x+1)(x^2+4x+1)
        let f = zpoly(&[1, 0, 0, 0, 1]);
        let fac = factor(&f, 7);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, m)| g.len() == 3 && *m == 1));
        let prod = mul(&fac[0].0, &fac[1].0, 7);
        assert_eq!(prod, reduce_int_poly(&f, 7));
    }

    #[test]
    fn dedekind_criterion_known_cases() {
        // Z[i] is maximal at 2.
        assert!(dedekind_maximal_at(&zpoly(&[1, 0, 1]), 2));
        // Z[sqrt(-5)] is maximal at 2 (disc -20).
        assert!(dedekind_maximal_at(&zpoly(&[5, 0, 1]), 2));
        // Z[sqrt(-3)] is NOT maximal at 2 (index 2 in the Eisenstein order).
        assert!(!dedekind_maximal_at(&zpoly(&[3, 0, 1]), 2));
        // Good reduction is always maximal.
        assert!(dedekind_maximal_at(&zpoly(&[1, 0, 1]), 5));
    }

    #[test]
    fn residue_field_squares_mod_5() {
        // F_5 presented with the degree-1 modulus x: elements are constants.
        let fq = ResidueField::new(5, vec![0, 1]);
        let sq: Vec<u64> = (1..5).filter(|&r| fq.is_square(&vec![r])).collect();
        assert_eq!(sq, vec![1, 4]);
        // -1 = 4 mod 5; the canonical root is 2.
        assert_eq!(fq.sqrt(&vec![4]).unwrap(), vec![2]);
    }

    #[test]
    fn residue_field_f9_has_square_i() {
        // F_9 = F_3[x]/(x^2+1); the class of x has order 4 and is a square.
        let fq = ResidueField::new(3, vec![1, 0, 1]);
        let i = vec![0, 1];
        assert!(fq.is_square(&i));
        let r = fq.sqrt(&i).unwrap();
        assert_eq!(fq.mul(&r, &r), i);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(999983));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }
}
