//! Finite fields: the prime fields F_p and their extensions F_{p^d} = F_p[x]/(m(x)).
//!
//! Elements are stored as canonical coefficient vectors over the prime base,
//! so equality is structural and every operation is exact.  Primes are capped
//! at 2^31 so that a product of two canonical representatives fits in 64 bits.

use crate::error::{Error, Result};
use crate::poly::{self, Polynomial};
use std::fmt;

/// Largest supported characteristic is just below 2^31.
const PRIME_LIMIT: u64 = 1 << 31;

/// The prime field F_p.  Cheap to copy; all element operations work on
/// canonical representatives in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds F_p after checking primality by trial division (exact for the
    /// supported range).
    pub fn new(p: u64) -> Result<Self> {
        if p >= PRIME_LIMIT {
            return Err(Error::PrimeTooLarge(p));
        }
        if p < 2 || (p > 2 && p % 2 == 0) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 3;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 2;
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary signed integer.
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // a, b < 2^31, so the product fits in a u64.
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The element n of F_p.
    pub fn elem(&self, n: i64) -> FieldElement {
        FieldElement {
            parent: Field::Prime(*self),
            coeffs: vec![self.reduce(n)],
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }
}

/// The extension field F_p[x]/(m(x)) for a monic irreducible m of degree d.
/// Degree 1 is allowed and behaves exactly like the base field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtField {
    base: PrimeField,
    modulus: Polynomial,
}

impl ExtField {
    /// Builds the extension, verifying that the modulus is monic irreducible
    /// over the base.
    pub fn new(base: PrimeField, modulus: Polynomial) -> Result<Self> {
        assert_eq!(modulus.field(), base, "operands live over different fields");
        if modulus.is_zero() || modulus.degree() == 0 {
            return Err(Error::ReducibleModulus);
        }
        if modulus.leading_coeff() != 1 || !poly::is_irreducible(&modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(ExtField { base, modulus })
    }

    /// The canonical degree-d extension: modulus is the first monic
    /// irreducible of degree d in the deterministic scan order.
    pub fn with_degree(base: PrimeField, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::ReducibleModulus);
        }
        let modulus = poly::find_irreducible(base, d);
        Ok(ExtField { base, modulus })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    /// Element from base-field coefficients, lowest degree first.  Longer
    /// inputs are reduced modulo the modulus.
    pub fn elem(&self, coeffs: &[i64]) -> FieldElement {
        let p = Polynomial::new(self.base, coeffs);
        self.from_poly(&p)
    }

    /// The class of a base polynomial modulo the modulus.
    pub fn from_poly(&self, p: &Polynomial) -> FieldElement {
        let r = p.rem(&self.modulus).expect("modulus is nonzero");
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree(), 0);
        FieldElement {
            parent: Field::Ext(self.clone()),
            coeffs,
        }
    }

    /// The class of x, a generator of the extension over the base.
    pub fn gen(&self) -> FieldElement {
        self.from_poly(&Polynomial::var(self.base))
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(&[])
    }

    pub fn one(&self) -> FieldElement {
        self.elem(&[1])
    }
}

/// A field that can parent an element: either F_p itself or an extension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    Prime(PrimeField),
    Ext(ExtField),
}

impl Field {
    pub fn base(&self) -> PrimeField {
        match self {
            Field::Prime(f) => *f,
            Field::Ext(f) => f.base(),
        }
    }

    /// Degree over the prime base (1 for the base itself).
    pub fn degree(&self) -> usize {
        match self {
            Field::Prime(_) => 1,
            Field::Ext(f) => f.degree(),
        }
    }

    /// The base-field scalar c viewed as an element of this field.
    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = c % self.base().order();
        FieldElement {
            parent: self.clone(),
            coeffs,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.scalar(0)
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }
}

/// An element of a prime or extension field: a canonical coefficient vector
/// over the prime base, lowest degree first, of length `parent.degree()`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    parent: Field,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn parent(&self) -> &Field {
        &self.parent
    }

    /// Coefficients over the prime base, lowest degree first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// For prime-field elements, the canonical representative.
    pub fn rep(&self) -> u64 {
        debug_assert_eq!(self.parent.degree(), 1, "rep() is for degree-1 parents");
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.parent.base().order()
            && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_parent(&self, rhs: &FieldElement) {
        assert_eq!(self.parent, rhs.parent, "operands live over different fields");
    }

    fn as_poly(&self) -> Polynomial {
        Polynomial::from_residues(self.parent.base(), self.coeffs.clone())
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        self.check_parent(rhs);
        let p = self.parent.base();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        FieldElement {
            parent: self.parent.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.parent.base();
        FieldElement {
            parent: self.parent.clone(),
            coeffs: self.coeffs.iter().map(|&a| p.neg(a)).collect(),
        }
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        self.check_parent(rhs);
        match &self.parent {
            Field::Prime(f) => f.elem(f.mul(self.coeffs[0], rhs.coeffs[0]) as i64),
            Field::Ext(f) => f.from_poly(&self.as_poly().mul(&rhs.as_poly())),
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        match &self.parent {
            Field::Prime(f) => Ok(f.elem(f.inv(self.coeffs[0])? as i64)),
            Field::Ext(f) => {
                if self.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                // xgcd with an irreducible modulus yields a unit gcd.
                let (g, u, _) = self.as_poly().xgcd(f.modulus());
                debug_assert_eq!(g.degree(), 0);
                let ginv = f.base().inv(g.constant_coeff())?;
                Ok(f.from_poly(&u.scale(ginv)))
            }
        }
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Exponentiation with an unsigned exponent; `pow_u(0)` is one.
    pub fn pow_u(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.parent.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Signed exponentiation.  `pow(0)` is one, even at zero (empty product);
    /// a negative exponent inverts first.
    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow_u(e as u64))
        } else {
            Ok(self.inv()?.pow_u(e.unsigned_abs()))
        }
    }

    /// Norm down to the prime base: a^((q^d - 1)/(q - 1)), evaluated by the
    /// exponent ladder a -> a^q * a so no exponent ever leaves 64 bits.
    /// Errors on zero; the identity on base-field elements.
    pub fn norm(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.parent {
            Field::Prime(_) => Ok(self.clone()),
            Field::Ext(f) => {
                let q = f.base().order();
                let mut r = self.clone();
                for _ in 1..f.degree() {
                    r = r.pow_u(q).mul(self);
                }
                assert!(
                    r.coeffs[1..].iter().all(|&c| c == 0),
                    "norm landed outside the base field"
                );
                Ok(f.base().elem(r.coeffs[0] as i64))
            }
        }
    }

    /// Projection onto the m-th roots of unity: a^((q-1)/m) for a base-field
    /// element a != 0, defined when m divides q - 1.
    pub fn unity_power(&self, m: u64) -> Result<FieldElement> {
        let q = match &self.parent {
            Field::Prime(f) => f.order(),
            Field::Ext(_) => return Err(Error::MismatchedFields),
        };
        if m == 0 || (q - 1) % m != 0 {
            return Err(Error::InvalidRootOrder { m, q });
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u((q - 1) / m))
    }

    /// JSON encoding: a bare integer over F_p, a coefficient array (lowest
    /// degree first, length d) over an extension.
    pub fn to_json(&self) -> serde_json::Value {
        match &self.parent {
            Field::Prime(_) => serde_json::Value::from(self.coeffs[0]),
            Field::Ext(_) => serde_json::Value::from(self.coeffs.clone()),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.parent {
            Field::Prime(_) => write!(f, "{}", self.coeffs[0]),
            Field::Ext(_) => write!(f, "{}", poly::format_dense(&self.coeffs, "x")),
        }
    }
}
