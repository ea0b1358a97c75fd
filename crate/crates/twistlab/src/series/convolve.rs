//! Exact truncated products of integer coefficient vectors.
//!
//! Two strategies share one entry point, `mul`:
//!
//! * schoolbook over the nonzero entries of the sparser operand, which wins
//!   whenever one side is thin (pentagonal-number factors, short series);
//! * a multimodular number-theoretic transform for dense-by-dense products,
//!   which is what makes weight-k level-1 expansions to 10^5 coefficients
//!   affordable: reduce both operands modulo enough 62-bit NTT primes,
//!   convolve each residue image in O(L log L), reconstruct by CRT.
//!
//! Every path is exact; the NTT prime set is sized from the operand bit
//! lengths so the CRT modulus provably covers the largest possible
//! coefficient, signs included.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use crate::primes;

/// Above this many BigInt multiply-adds the schoolbook path loses to the NTT.
const SCHOOLBOOK_WORK_LIMIT: u64 = 1 << 20;

/// Supported transform length: primes are generated with 2-adicity 24.
const MAX_NTT_LOG2: u32 = 24;

/// Truncated product: returns the first `out_len` coefficients of a * b.
pub fn mul(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    assert!(!a.is_empty() && !b.is_empty(), "empty operand");
    if out_len == 0 {
        return Vec::new();
    }
    let la = a.len().min(out_len);
    let lb = b.len().min(out_len);
    let a = &a[..la];
    let b = &b[..lb];
    let nnz_a = a.iter().filter(|c| !c.is_zero()).count() as u64;
    let nnz_b = b.iter().filter(|c| !c.is_zero()).count() as u64;
    if nnz_a == 0 || nnz_b == 0 {
        return vec![BigInt::zero(); out_len];
    }
    let work = (nnz_a * lb as u64).min(nnz_b * la as u64);
    if work <= SCHOOLBOOK_WORK_LIMIT {
        mul_schoolbook(a, b, out_len)
    } else {
        mul_ntt(a, b, out_len)
    }
}

fn mul_schoolbook(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    // Iterate the sparser side outermost so zero coefficients cost nothing.
    let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
    let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
    let (outer, inner) = if nnz_a <= nnz_b { (a, b) } else { (b, a) };
    let mut out = vec![BigInt::zero(); out_len];
    for (i, ci) in outer.iter().enumerate() {
        if ci.is_zero() || i >= out_len {
            continue;
        }
        let top = inner.len().min(out_len - i);
        for (j, cj) in inner[..top].iter().enumerate() {
            if !cj.is_zero() {
                out[i + j] += ci * cj;
            }
        }
    }
    out
}

// --- Montgomery arithmetic -------------------------------------------------

/// Montgomery context for an odd prime p < 2^63, R = 2^64.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    /// -p^{-1} mod 2^64
    neg_inv: u64,
    /// 2^64 mod p (Montgomery form of 1)
    one: u64,
    /// 2^128 mod p (for converting into Montgomery form)
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < (1 << 63));
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let one = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((one as u128 * one as u128) % p as u128) as u64;
        Mont {
            p,
            neg_inv: inv.wrapping_neg(),
            one,
            r2,
        }
    }

    /// a * b * 2^{-64} mod p; inputs and output in [0, p).
    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(self, x: u64) -> u64 {
        self.mul(x, self.r2)
    }

    /// Montgomery reduction with multiplier 1: leaves Montgomery form.
    fn redc(self, x: u64) -> u64 {
        self.mul(x, 1)
    }

    fn pow(&self, base_mont: u64, mut e: u64) -> u64 {
        let mut acc = self.one;
        let mut b = base_mont;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, x_mont: u64) -> u64 {
        self.pow(x_mont, self.p - 2)
    }
}

// --- NTT prime pool --------------------------------------------------------

#[derive(Clone, Copy)]
struct NttPrime {
    p: u64,
    /// primitive root of (Z/p)^*, plain form
    g: u64,
}

fn prime_pool(at_least: usize) -> Vec<NttPrime> {
    static POOL: OnceLock<Mutex<(Vec<NttPrime>, u64)>> = OnceLock::new();
    let lock = POOL.get_or_init(|| Mutex::new((Vec::new(), (1u64 << 38) + 1)));
    let mut guard = lock.lock().unwrap();
    let (pool, next_c) = &mut *guard;
    while pool.len() < at_least {
        // p = c * 2^24 + 1 keeps 2-adicity 24 and p just above 2^62, so the
        // Montgomery path (p < 2^63) stays valid.
        let c = *next_c;
        *next_c += 2;
        let p = (c << MAX_NTT_LOG2) | 1;
        if !primes::is_prime(p) {
            continue;
        }
        let mut factors = vec![2u64];
        factors.extend(primes::distinct_prime_factors(c));
        let g = (2u64..)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&q| primes::pow_mod(g, (p - 1) / q, p) != 1)
            })
            .unwrap();
        pool.push(NttPrime { p, g });
    }
    pool[..at_least].to_vec()
}

// --- Transform -------------------------------------------------------------

/// In-place NTT over Montgomery-form values; `root_mont` must have order
/// exactly `a.len()` (a power of two).
fn ntt(a: &mut [u64], m: &Mont, root_mont: u64) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    // bit reversal permutation
    let mut j = 0usize;
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
        let wlen = m.pow(root_mont, (n / len) as u64);
        for start in (0..n).step_by(len) {
            let mut w = m.one;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = m.mul(a[start + k + len / 2], w);
                a[start + k] = m.add(u, v);
                a[start + k + len / 2] = m.sub(u, v);
                w = m.mul(w, wlen);
            }
        }
        len <<= 1;
    }
}

/// Reduce a signed BigInt into [0, p), Horner over the u64 limbs.
fn reduce_mod(x: &BigInt, m: &Mont) -> u64 {
    let (sign, limbs) = x.to_u64_digits();
    if limbs.is_empty() {
        return 0;
    }
    // 2^64 mod p == m.one (plain value), and mont mul(r, r2) = r * 2^64 mod p.
    let mut r: u64 = 0;
    for &limb in limbs.iter().rev() {
        r = m.mul(r, m.r2); // r * 2^64 mod p
        r = m.add(r, limb % m.p);
    }
    if sign == Sign::Minus && r != 0 {
        m.p - r
    } else {
        r
    }
}

fn mul_ntt(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let conv_len = a.len() + b.len() - 1;
    let size = conv_len.next_power_of_two();
    assert!(
        size <= 1 << MAX_NTT_LOG2,
        "transform length {size} exceeds supported 2^{MAX_NTT_LOG2}"
    );
    let bits_a = a.iter().map(|c| c.bits()).max().unwrap();
    let bits_b = b.iter().map(|c| c.bits()).max().unwrap();
    let min_len = a.len().min(b.len()) as u64;
    // |result coeff| <= min_len * max|a| * max|b|; one extra bit for the sign
    // half of the CRT range and one of slack.
    let need_bits = bits_a + bits_b + 64 - min_len.leading_zeros() as u64 + 2;

    let mut chosen = Vec::new();
    let mut modulus = BigInt::one();
    let mut k = 0usize;
    while modulus.bits() <= need_bits {
        k += 1;
        let pool = prime_pool(k);
        let np = pool[k - 1];
        modulus *= BigInt::from(np.p);
        chosen.push(np);
    }

    let monts: Vec<Mont> = chosen.iter().map(|np| Mont::new(np.p)).collect();
    let keep = out_len.min(conv_len);
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(chosen.len());

    for (np, m) in chosen.iter().zip(&monts) {
        let root_full = m.to_mont(np.g % np.p);
        let root = m.pow(root_full, (np.p - 1) / size as u64);
        let root_inv = m.inv(root);

        let mut fa = vec![0u64; size];
        for (i, c) in a.iter().enumerate() {
            fa[i] = m.to_mont(reduce_mod(c, m));
        }
        let mut fb = vec![0u64; size];
        for (i, c) in b.iter().enumerate() {
            fb[i] = m.to_mont(reduce_mod(c, m));
        }
        ntt(&mut fa, m, root);
        ntt(&mut fb, m, root);
        for i in 0..size {
            fa[i] = m.mul(fa[i], fb[i]);
        }
        ntt(&mut fa, m, root_inv);
        let n_inv = m.inv(m.to_mont(size as u64 % np.p));
        let mut out = Vec::with_capacity(keep);
        for v in fa.iter().take(keep) {
            out.push(m.redc(m.mul(*v, n_inv)));
        }
        residues.push(out);
    }

    // Garner reconstruction. inv_table[i][j] = p_j^{-1} mod p_i (Mont form),
    // prefix[i] = p_0 * ... * p_{i-1} as BigInt.
    let nk = chosen.len();
    let mut inv_table = vec![vec![0u64; nk]; nk];
    for i in 0..nk {
        let m = &monts[i];
        for j in 0..i {
            inv_table[i][j] = m.inv(m.to_mont(chosen[j].p % chosen[i].p));
        }
    }
    let mut prefix = Vec::with_capacity(nk);
    let mut acc = BigInt::one();
    for np in &chosen {
        prefix.push(acc.clone());
        acc *= BigInt::from(np.p);
    }
    let half = &acc >> 1;

    let mut result = Vec::with_capacity(out_len);
    let mut digits = vec![0u64; nk];
    // idx walks coefficient positions across every residue row at once, so an
    // iterator over a single row does not replace it.
    #[allow(clippy::needless_range_loop)]
    for idx in 0..keep {
        for i in 0..nk {
            let m = &monts[i];
            let mut v = residues[i][idx];
            for j in 0..i {
                let d = m.sub(v, digits[j] % m.p);
                v = m.redc(m.mul(m.to_mont(d), inv_table[i][j]));
            }
            digits[i] = v;
        }
        let mut x = BigInt::zero();
        for i in 0..nk {
            if digits[i] != 0 {
                x += &prefix[i] * BigInt::from(digits[i]);
            }
        }
        if x > half {
            x -= &acc;
        }
        result.push(x);
    }
    result.resize(out_len, BigInt::zero());
    result
}

/// Binary exponentiation of a truncated integer series.
pub fn pow(base: &[BigInt], e: u32, out_len: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::zero(); out_len];
    if out_len > 0 {
        result[0] = BigInt::one();
    }
    if e == 0 {
        return result;
    }
    let mut sq = base[..base.len().min(out_len)].to_vec();
    sq.resize(out_len.max(1), BigInt::zero());
    let mut e = e;
    loop {
        if e & 1 == 1 {
            result = mul(&result, &sq, out_len);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = mul(&sq, &sq, out_len);
    }
    result
}
