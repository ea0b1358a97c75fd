//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod q is pinned down by its exponents on a fixed generating
//! set of (Z/q)^*. The generating set convention, used everywhere including
//! serialized certificates:
//!
//! * factor q into prime powers, ascending;
//! * for an odd prime power p^a, take the smallest primitive root mod p,
//!   adjusted by +p if it fails to stay primitive mod p^2, lifted to be
//!   1 modulo the cofactor;
//! * for 2^a with a >= 3, take the pair (2^a - 1, 3), i.e. -1 then the
//!   generator of the cyclic part; for a = 2 just 3; for a <= 1 nothing.
//!
//! Enumeration is lexicographic in the exponent tuple with the first
//! generator most significant, so character indices are reproducible run
//! to run and reports can name a character by (modulus, exponents) alone.

mod cyclotomic;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{factorize, pow_mod};

/// Generators of (Z/q)^* with their orders, per the module convention.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UnitGroup {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
}

fn gcd64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Smallest generator of (Z/p^a)^* for odd prime p.
fn odd_primitive_root(p: u64, a: u32) -> u64 {
    let factors: Vec<u64> = crate::primes::distinct_prime_factors(p - 1);
    let mut g = 2u64;
    loop {
        if factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1) {
            break;
        }
        g += 1;
    }
    if a == 1 {
        return g;
    }
    // A primitive root mod p^2 stays primitive for every higher power.
    if pow_mod(g % (p * p), p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// x with x = r mod m and x = 1 mod n, for coprime m, n with m*n <= u64::MAX.
fn crt_lift(r: u64, m: u64, n: u64) -> u64 {
    // x = r + m*t where t solves m*t = 1 - r mod n; then x < m*n.
    let inv = mod_inverse(m % n, n);
    let delta = ((n as i128 + 1 - (r % n) as i128) % n as i128) as u64;
    let t = (inv as u128 * delta as u128 % n as u128) as u64;
    (r as u128 + m as u128 * t as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // Extended Euclid; panics if gcd(a, m) != 1, which callers guarantee.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "inverse of non-unit");
    (old_s.rem_euclid(m as i128)) as u64
}

fn unit_group(q: u64) -> UnitGroup {
    assert!(q >= 1);
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (p, a) in factorize(q) {
        let pa = p.pow(a);
        let cofactor = q / pa;
        if p == 2 {
            if a == 2 {
                generators.push(lift(3, pa, cofactor));
                orders.push(2);
            } else if a >= 3 {
                generators.push(lift(pa - 1, pa, cofactor));
                orders.push(2);
                generators.push(lift(3, pa, cofactor));
                orders.push(1u64 << (a - 2));
            }
        } else {
            let g = odd_primitive_root(p, a);
            generators.push(lift(g, pa, cofactor));
            orders.push(pa / p * (p - 1));
        }
    }
    UnitGroup { modulus: q, generators, orders }
}

fn lift(r: u64, m: u64, cofactor: u64) -> u64 {
    if cofactor == 1 {
        r % m
    } else {
        crt_lift(r, m, cofactor)
    }
}

/// A Dirichlet character mod q, stored as exponents on the unit-group
/// generators plus a precomputed residue-to-exponent table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CharacterDescriptor", into = "CharacterDescriptor")]
pub struct DirichletCharacter {
    modulus: u64,
    generator_exponents: Vec<u64>,
    generator_orders: Vec<u64>,
    order: u64,
    conductor: u64,
    /// values[n % q] = Some(t) meaning chi(n) = zeta_order^t, None when
    /// gcd(n, q) > 1 (where chi vanishes).
    values: Vec<Option<u64>>,
}

/// Wire form of a character: enough to reconstruct it exactly under the
/// fixed generator convention, small enough to embed in certificates.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CharacterDescriptor {
    pub modulus: u64,
    pub generator_exponents: Vec<u64>,
    pub conductor: u64,
    pub order: u64,
}

impl DirichletCharacter {
    fn build(group: &UnitGroup, exponents: Vec<u64>) -> Self {
        let q = group.modulus;
        debug_assert_eq!(exponents.len(), group.orders.len());
        let order = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &d)| d / gcd64(e, d))
            .fold(1u64, |acc, o| acc.lcm(&o));
        // chi(g_i) = zeta_{d_i}^{e_i} = zeta_order^{t_i}; d_i | e_i * order.
        let twists: Vec<u64> = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &d)| {
                let prod = e as u128 * order as u128;
                (prod / d as u128) as u64 % order
            })
            .collect();

        let mut values: Vec<Option<u64>> = vec![None; q.max(1) as usize];
        if q == 1 {
            values[0] = Some(0);
        } else {
            let pow_tables: Vec<Vec<u64>> = group
                .generators
                .iter()
                .zip(&group.orders)
                .map(|(&g, &d)| {
                    let mut row = Vec::with_capacity(d as usize);
                    let mut x = 1u64;
                    for _ in 0..d {
                        row.push(x);
                        x = (x as u128 * g as u128 % q as u128) as u64;
                    }
                    row
                })
                .collect();
            let mut digits = vec![0u64; group.orders.len()];
            loop {
                let mut n = 1u64;
                let mut t = 0u64;
                for (i, &j) in digits.iter().enumerate() {
                    n = (n as u128 * pow_tables[i][j as usize] as u128 % q as u128) as u64;
                    t = (t + j % order * (twists[i] % order)) % order;
                }
                values[n as usize] = Some(t);
                // Mixed-radix increment, least significant digit last.
                let mut i = digits.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < group.orders[i] {
                        break;
                    }
                    digits[i] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }

        let conductor = conductor_from_values(q, &values);
        DirichletCharacter {
            modulus: q,
            generator_exponents: exponents,
            generator_orders: group.orders.clone(),
            order,
            conductor,
            values,
        }
    }

    pub fn trivial(q: u64) -> Self {
        let group = unit_group(q);
        let n = group.orders.len();
        Self::build(&group, vec![0; n])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn generator_exponents(&self) -> &[u64] {
        &self.generator_exponents
    }

    /// Orders of the fixed generators, parallel to `generator_exponents`;
    /// what the exponents are taken modulo.
    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Order exactly 2: the nontrivial characters with values in {-1, 0, 1}.
    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// Real-valued: order 1 or 2.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// chi(n) as an exact element of Q(zeta_order).
    pub fn value(&self, n: u64) -> CyclotomicNumber {
        match self.exponent(n) {
            None => CyclotomicNumber::zero(self.order),
            Some(t) => CyclotomicNumber::root_of_unity(self.order, t),
        }
    }

    /// chi(n) when it is rational: Some(0), Some(1), or Some(-1).
    /// None means the value is an irrational root of unity.
    pub fn rational_value(&self, n: u64) -> Option<BigRational> {
        match self.exponent(n) {
            None => Some(BigRational::zero()),
            Some(t) => {
                let reduced = self.order / gcd64(t, self.order);
                match reduced {
                    1 => Some(BigRational::one()),
                    2 => Some(-BigRational::one()),
                    _ => None,
                }
            }
        }
    }

    /// The exponent t with chi(n) = zeta_order^t, or None when chi(n) = 0.
    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.values[(n % self.modulus.max(1)) as usize]
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.generator_exponents == other.generator_exponents
    }
}

impl Eq for DirichletCharacter {}

impl From<DirichletCharacter> for CharacterDescriptor {
    fn from(chi: DirichletCharacter) -> Self {
        CharacterDescriptor {
            modulus: chi.modulus,
            generator_exponents: chi.generator_exponents,
            conductor: chi.conductor,
            order: chi.order,
        }
    }
}

impl TryFrom<CharacterDescriptor> for DirichletCharacter {
    type Error = Error;

    fn try_from(d: CharacterDescriptor) -> Result<Self> {
        if d.modulus == 0 {
            return Err(Error::Character("modulus must be positive".into()));
        }
        let group = unit_group(d.modulus);
        if d.generator_exponents.len() != group.orders.len() {
            return Err(Error::Character(format!(
                "modulus {} has {} generators, descriptor lists {}",
                d.modulus,
                group.orders.len(),
                d.generator_exponents.len()
            )));
        }
        for (&e, &ord) in d.generator_exponents.iter().zip(&group.orders) {
            if e >= ord {
                return Err(Error::Character(format!(
                    "exponent {e} out of range for generator of order {ord}"
                )));
            }
        }
        let chi = DirichletCharacter::build(&group, d.generator_exponents);
        if chi.order != d.order || chi.conductor != d.conductor {
            return Err(Error::Character(format!(
                "descriptor claims order {} conductor {}, reconstruction gives order {} conductor {}",
                d.order, d.conductor, chi.order, chi.conductor
            )));
        }
        Ok(chi)
    }
}

/// Smallest divisor m of q such that chi(n) = 1 whenever n = 1 mod m and
/// gcd(n, q) = 1; equivalently the modulus of the inducing primitive character.
fn conductor_from_values(q: u64, values: &[Option<u64>]) -> u64 {
    if q == 1 {
        return 1;
    }
    'next: for m in (1..=q).filter(|m| q.is_multiple_of(*m)) {
        let mut n = 1u64;
        while n < q {
            if gcd64(n, q) == 1 && values[n as usize] != Some(0) {
                continue 'next;
            }
            n += m;
        }
        return m;
    }
    unreachable!("q divides q");
}

/// All phi(q) characters mod q, lexicographic in generator exponents.
pub fn enumerate_characters(q: u64) -> Vec<DirichletCharacter> {
    assert!(q >= 1, "characters need a positive modulus");
    let group = unit_group(q);
    let radices = group.orders.clone();
    let count: u64 = radices.iter().product();
    let mut out = Vec::with_capacity(count as usize);
    let mut exps = vec![0u64; radices.len()];
    loop {
        out.push(DirichletCharacter::build(&group, exps.clone()));
        // Increment with the last digit least significant, so the tuple
        // sequence is lexicographic.
        let mut i = exps.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < radices[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// chi(n) lifted into Q(zeta_target); helper for summing values of
/// characters with different orders. Requires order | target.
pub fn value_in(chi: &DirichletCharacter, n: u64, target: u64) -> CyclotomicNumber {
    chi.value(n).raise_order(target)
}
