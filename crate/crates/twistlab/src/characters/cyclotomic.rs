//! Exact arithmetic in the cyclotomic fields Q(zeta_n).
//!
//! Elements are stored in the power basis 1, zeta, ..., zeta^{phi(n)-1}
//! modulo the n-th cyclotomic polynomial, so equality is plain vector
//! comparison and no floating point ever enters character evaluation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::primes::euler_phi;

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
///
/// Built by exact division from x^d - 1 = prod_{e | d} Phi_e(x), walking the
/// divisors of n in increasing order. All divisions are by monic integer
/// polynomials, so everything stays in Z[x].
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut computed: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mut poly = vec![BigInt::zero(); d as usize + 1];
        poly[0] = -BigInt::one();
        poly[d as usize] = BigInt::one();
        for (e, phi_e) in &computed {
            if d % e == 0 {
                poly = poly_div_exact(&poly, phi_e);
            }
        }
        computed.push((d, poly));
    }
    computed.pop().expect("n divides n").1
}

/// Exact quotient of integer polynomials; `den` must be monic and divide `num`.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        let shift = i - dd;
        for (j, dj) in den[..dd].iter().enumerate() {
            if !dj.is_zero() {
                rem[shift + j] -= &c * dj;
            }
        }
        quot[shift] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

fn phi_cache(order: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("cyclotomic cache poisoned");
    map.entry(order)
        .or_insert_with(|| Arc::new(cyclotomic_polynomial(order)))
        .clone()
}

/// Reduce a dense coefficient vector modulo Phi_order and pad to degree phi(order).
fn reduce_mod_phi(mut v: Vec<BigRational>, order: u64) -> Vec<BigRational> {
    let phi = phi_cache(order);
    let deg = phi.len() - 1;
    while v.len() > deg {
        let c = v.pop().expect("len > deg >= 0");
        if c.is_zero() {
            continue;
        }
        let shift = v.len() - deg;
        for (j, pj) in phi[..deg].iter().enumerate() {
            if !pj.is_zero() {
                v[shift + j] -= &c * BigRational::from(pj.clone());
            }
        }
    }
    v.resize(deg, BigRational::zero());
    v
}

/// An element of Q(zeta_order) with exact rational coordinates.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    fn from_reduced(order: u64, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len() as u64, euler_phi(order));
        CyclotomicNumber { order, coeffs }
    }

    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        Self::from_reduced(order, vec![BigRational::zero(); euler_phi(order) as usize])
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u64, value: BigRational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = value;
        out
    }

    /// zeta_order^exponent, reduced into the power basis.
    pub fn root_of_unity(order: u64, exponent: u64) -> Self {
        assert!(order >= 1);
        let e = (exponent % order) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::from_reduced(order, reduce_mod_phi(v, order))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when all basis coordinates above the constant vanish.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express the element in Q(zeta_target); requires order | target.
    /// zeta_n maps to zeta_target^{target/n}, an injective field embedding.
    pub fn raise_order(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "cannot embed Q(zeta_{}) into Q(zeta_{})",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let stretch = (target / self.order) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * stretch + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[j * stretch] = c.clone();
            }
        }
        Self::from_reduced(target, reduce_mod_phi(v, target))
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let m = a.order.lcm(&b.order);
            (a.raise_order(m), b.raise_order(m))
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_reduced(self.order, coeffs)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::unify(self, other);
        a.coeffs == b.coeffs
    }
}

/// Prints in the power basis, writing `z{n}` for zeta_n: `1/2 - z4`.
impl std::fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = if c < &BigRational::zero() { -c } else { c.clone() };
            if first {
                if c < &BigRational::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < &BigRational::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Eq for CyclotomicNumber {}

impl std::ops::Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (mut a, b) = CyclotomicNumber::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl std::ops::Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (mut a, b) = CyclotomicNumber::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.scale(&-BigRational::one())
    }
}

impl std::ops::Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        // Rational factors act coordinatewise; skip the polynomial product.
        if let Some(c) = self.as_rational() {
            return rhs.raise_order(self.order.lcm(&rhs.order)).scale(&c);
        }
        if let Some(c) = rhs.as_rational() {
            return self.raise_order(self.order.lcm(&rhs.order)).scale(&c);
        }
        let (a, b) = CyclotomicNumber::unify(self, rhs);
        let mut prod = vec![BigRational::zero(); 2 * a.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CyclotomicNumber::from_reduced(a.order, reduce_mod_phi(prod, a.order))
    }
}
