//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are canonical representatives in `[0, p)`, lowest degree
//! first, with no trailing zeros; the zero polynomial has an empty vector.
//! The ordering used everywhere for deterministic output compares degree
//! first, then coefficients from the highest degree down, which enumerates
//! monic polynomials of a fixed degree as t^d, t^d + 1, t^d + 2, ...

mod factor;

pub use factor::{factor, factor_seeded, find_irreducible, is_irreducible, DEFAULT_FACTOR_SEED};

use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeField};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// Builds a polynomial from signed coefficients, lowest degree first.
    pub fn new(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_residues(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    /// Builds from already-reduced representatives.
    pub fn from_residues(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(field, &[1])
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::new(field, &[c])
    }

    /// The variable t.
    pub fn var(field: PrimeField) -> Self {
        Self::new(field, &[0, 1])
    }

    /// c * t^k.
    pub fn monomial(field: PrimeField, c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = field.reduce(c);
        Self::from_residues(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; by convention 0 for the zero polynomial (check `is_zero`
    /// first where the distinction matters).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn constant_coeff(&self) -> u64 {
        self.coeff(0)
    }

    /// Index of the lowest nonzero coefficient (the valuation at t = 0).
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    fn check_field(&self, rhs: &Polynomial) {
        assert_eq!(self.field, rhs.field, "operands live over different fields");
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        self.check_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.field.add(self.coeff(i), rhs.coeff(i));
        }
        Self::from_residues(self.field, out)
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Self::from_residues(self.field, coeffs)
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self::from_residues(self.field, coeffs)
    }

    /// Multiplication by t^k.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_residues(self.field, coeffs)
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Self::from_residues(self.field, out)
    }

    /// Euclidean division: f = q * g + r with deg r < deg g.
    pub fn divrem(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_field(g);
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lc_inv = self.field.inv(g.leading_coeff())?;
        let dg = g.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() < g.coeffs.len() {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = self.field.mul(rem[i], lc_inv);
            quot[i - dg] = c;
            if c != 0 {
                for (j, &gc) in g.coeffs.iter().enumerate() {
                    rem[i - dg + j] = self.field.sub(rem[i - dg + j], self.field.mul(c, gc));
                }
            }
        }
        rem.truncate(dg);
        Ok((
            Self::from_residues(self.field, quot),
            Self::from_residues(self.field, rem),
        ))
    }

    pub fn rem(&self, g: &Polynomial) -> Result<Polynomial> {
        Ok(self.divrem(g)?.1)
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, g: &Polynomial) -> Polynomial {
        let (q, r) = self.divrem(g).expect("nonzero divisor");
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Splits off the leading coefficient: f = c * monic.
    pub fn make_monic(&self) -> (u64, Polynomial) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let lc = self.leading_coeff();
        let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
        (lc, self.scale(inv))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.make_monic().1
        }
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn xgcd(&self, other: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
        self.check_field(other);
        let field = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Self::one(field), Self::zero(field));
        let (mut v0, mut v1) = (Self::zero(field), Self::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let (lc, g) = r0.make_monic();
        let inv = field.inv(lc).expect("nonzero leading coefficient");
        (g, u0.scale(inv), v0.scale(inv))
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.field);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| self.field.mul(c, self.field.reduce((i + 1) as i64)))
            .collect();
        Self::from_residues(self.field, coeffs)
    }

    /// Evaluation at a base-field point.
    pub fn eval_raw(&self, a: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add(self.field.mul(acc, a), c);
        }
        acc
    }

    /// Evaluation at an element of any field over the same prime base
    /// (coefficients are embedded as scalars).
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(x.parent().base(), self.field, "operands live over different fields");
        let mut acc = x.parent().zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&x.parent().scalar(c));
        }
        acc
    }

    /// self^e modulo a nonzero modulus.
    pub fn pow_mod(&self, mut e: u64, modulus: &Polynomial) -> Result<Polynomial> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Deterministic total order: characteristic, then degree, then
    /// coefficients from the highest degree down.
    pub fn cmp_order(&self, other: &Polynomial) -> Ordering {
        self.field
            .order()
            .cmp(&other.field.order())
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| {
                for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            })
    }

    /// JSON encoding: coefficient array, lowest degree first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.coeffs.clone())
    }
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_order(other)
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders a dense coefficient vector (lowest degree first) as a readable,
/// re-parseable expression in the given variable, e.g. `t^2+4*t+3`.
pub(crate) fn format_dense(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, c) => format!("{c}"),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (k, 1) => format!("{var}^{k}"),
            (k, c) => format!("{c}*{var}^{k}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_dense(&self.coeffs, "t"))
    }
}
