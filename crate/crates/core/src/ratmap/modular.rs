//! Iterates reduced modulo word-size primes, for certified lower bounds on
//! term counts of iterates too large to expand exactly.
//!
//! A ring homomorphism `Z[1/D][zeta_N] -> F_p` (with `p = 1 mod N`) maps each
//! coefficient of the homogeneous composition; a coefficient that is nonzero
//! mod `p` is nonzero over the cyclotomic field, so the count of nonzero
//! residues never exceeds the true count.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::RatMap;
use crate::cyclo::CycNum;
use crate::poly::Poly;
use crate::rational::{factor_u64, is_prime};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    p: u64,
}

impl Field {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce_big(self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

/// Prime field with roots of unity of order `N` and a power of two `>= 2^k`.
pub(crate) struct NttPrime {
    f: Field,
    zeta_n: u64,
    root2: u64,
    two_adic: u32,
}

impl NttPrime {
    /// Primes `p = c * lcm(n, 2^k) + 1 < 2^62`, scanning `c` downward; `skip`
    /// selects later candidates so distinct calls give distinct primes.
    pub(crate) fn find(n: u64, k: u32, skip: usize) -> Option<NttPrime> {
        let l = n.lcm(&(1u64 << k));
        let limit = 1u64 << 62;
        if l >= limit {
            return None;
        }
        let mut c = (limit - 1) / l;
        let mut seen = 0;
        while c > 0 {
            let p = c * l + 1;
            if is_prime(p) {
                if seen == skip {
                    return Some(NttPrime::build(p, n));
                }
                seen += 1;
            }
            c -= 1;
        }
        None
    }

    fn build(p: u64, n: u64) -> NttPrime {
        let f = Field { p };
        // quadratic non-residue gives a root of maximal two-power order
        let two_adic = (p - 1).trailing_zeros();
        let mut x = 2;
        while f.pow(x, (p - 1) / 2) == 1 {
            x += 1;
        }
        let root2 = f.pow(x, (p - 1) >> two_adic);
        let primes: Vec<u64> = factor_u64(n).into_iter().map(|(q, _)| q).collect();
        let mut y = 2;
        let zeta_n = loop {
            let z = f.pow(y, (p - 1) / n);
            if primes.iter().all(|q| f.pow(z, n / q) != 1) {
                break z;
            }
            y += 1;
        };
        NttPrime { f, zeta_n, root2, two_adic }
    }

    #[cfg(test)]
    pub(crate) fn modulus(&self) -> u64 {
        self.f.p
    }

    /// Image of a cyclotomic number whose conductor divides `n`; `None` if
    /// the denominator vanishes mod `p`.
    pub(crate) fn map(&self, c: &CycNum, n: u64) -> Option<u64> {
        let f = self.f;
        let (num, den) = (c.coeffs_in(n), c.denominator());
        let d = f.reduce_big(den);
        if d == 0 {
            return None;
        }
        let dinv = f.inv(d);
        let mut acc = 0;
        let mut zpow = 1;
        for q in num {
            // q * den is integral
            let a = f.reduce_big(&(q.numer() * (den / q.denom())));
            acc = f.add(acc, f.mul(a, zpow));
            zpow = f.mul(zpow, self.zeta_n);
        }
        Some(f.mul(acc, dinv))
    }

    fn ntt(&self, a: &mut [u64], invert: bool) {
        let f = self.f;
        let n = a.len();
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = f.pow(self.root2, 1u64 << (self.two_adic - len.trailing_zeros()));
            if invert {
                w = f.inv(w);
            }
            let half = len / 2;
            let mut ws = Vec::with_capacity(half);
            let mut cur = 1;
            for _ in 0..half {
                ws.push(cur);
                cur = f.mul(cur, w);
            }
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let u = a[start + k];
                    let v = f.mul(a[start + k + half], ws[k]);
                    a[start + k] = f.add(u, v);
                    a[start + k + half] = f.sub(u, v);
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = f.inv(n as u64);
            for x in a.iter_mut() {
                *x = f.mul(*x, ninv);
            }
        }
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let out_len = a.len() + b.len() - 1;
        if a.len().min(b.len()) <= 32 {
            let f = self.f;
            let mut out = vec![0u64; out_len];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
            return out;
        }
        let size = out_len.next_power_of_two();
        assert!(size.trailing_zeros() <= self.two_adic, "transform length exceeds the prime's two-adic order");
        let mut fa = a.to_vec();
        fa.resize(size, 0);
        let mut fb = b.to_vec();
        fb.resize(size, 0);
        self.ntt(&mut fa, false);
        self.ntt(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.f.mul(*x, *y);
        }
        self.ntt(&mut fa, true);
        fa.truncate(out_len);
        fa
    }

    fn map_poly(&self, p: &Poly, n: u64) -> Option<Vec<u64>> {
        let mut v = vec![0u64; p.degree() as usize + 1];
        for (e, c) in p.terms() {
            v[*e as usize] = self.map(c, n)?;
        }
        Some(v)
    }

    fn add_scaled(&self, acc: &mut Vec<u64>, src: &[u64], c: u64) {
        if acc.len() < src.len() {
            acc.resize(src.len(), 0);
        }
        for (a, &s) in acc.iter_mut().zip(src) {
            *a = self.f.add(*a, self.f.mul(s, c));
        }
    }

    /// Nonzero residues of numerator and denominator of the iterates `1..=n`
    /// modulo `p` (homogeneous composition, no gcd), or `None` if a
    /// coefficient of `h` is not defined mod `p`.
    pub(crate) fn iterate_counts(&self, h: &RatMap, n: u32) -> Option<Vec<(usize, usize)>> {
        let cond = h.conductor();
        let f = self.map_poly(h.num(), cond)?;
        let g = self.map_poly(h.den(), cond)?;
        let dd = h.degree() as usize;
        let mut num = vec![0, 1];
        let mut den = vec![1];
        let mut counts = Vec::with_capacity(n as usize);
        for _ in 0..n {
            if h.is_polynomial() {
                // Horner: f(num)
                let mut acc = vec![f[dd]];
                for i in (0..dd).rev() {
                    acc = self.mul(&acc, &num);
                    acc[0] = self.f.add(acc[0], f[i]);
                }
                num = acc;
                counts.push((count_nonzero(&num), 1));
                continue;
            }
            let mut fp = vec![vec![1u64]];
            let mut gp = vec![vec![1u64]];
            for i in 1..=dd {
                fp.push(self.mul(&fp[i - 1], &num));
                gp.push(self.mul(&gp[i - 1], &den));
            }
            let mut nn = Vec::new();
            let mut nd = Vec::new();
            for i in 0..=dd {
                let need_f = f.get(i).is_some_and(|&c| c != 0);
                let need_g = g.get(i).is_some_and(|&c| c != 0);
                if !need_f && !need_g {
                    continue;
                }
                let prod = self.mul(&fp[i], &gp[dd - i]);
                if need_f {
                    self.add_scaled(&mut nn, &prod, f[i]);
                }
                if need_g {
                    self.add_scaled(&mut nd, &prod, g[i]);
                }
            }
            num = nn;
            den = nd;
            counts.push((count_nonzero(&num), count_nonzero(&den)));
        }
        Some(counts)
    }
}

pub(crate) fn count_nonzero(v: &[u64]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn ntt_matches_schoolbook() {
        let pr = NttPrime::find(12, 20, 0).unwrap();
        assert_eq!((pr.modulus() - 1) % 12, 0);
        let a: Vec<u64> = (0..300).map(|i| (i * 7919 + 3) % 1000).collect();
        let b: Vec<u64> = (0..200).map(|i| (i * 104729 + 11) % 997).collect();
        let f = pr.f;
        let mut want = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                want[i + j] = f.add(want[i + j], f.mul(x, y));
            }
        }
        assert_eq!(pr.mul(&a, &b), want);
    }

    #[test]
    fn zeta_image_has_exact_order() {
        let pr = NttPrime::find(15, 10, 1).unwrap();
        let z = pr.map(&CycNum::zeta(15), 15).unwrap();
        assert_eq!(pr.f.pow(z, 15), 1);
        assert_ne!(pr.f.pow(z, 5), 1);
        assert_ne!(pr.f.pow(z, 3), 1);
        // the map is a ring homomorphism on a sample
        let a = CycNum::zeta(15).scale(&rat(2, 7)).add(&CycNum::from_int(3));
        let b = CycNum::zeta_pow(15, 4).scale(&rat(-5, 3));
        let m = |c: &CycNum| pr.map(c, 15).unwrap();
        assert_eq!(m(&a.mul(&b)), pr.f.mul(m(&a), m(&b)));
        assert_eq!(m(&a.add(&b)), pr.f.add(m(&a), m(&b)));
    }
}
