//! Nonzero rational functions over F_p in factored form, and the closed
//! points of the projective line where they are measured.
//!
//! A function is stored as a nonzero constant times a product of monic
//! irreducible polynomials with nonzero integer exponents.  The form is
//! canonical, so equality is structural, valuations are exponent lookups,
//! and multiplication never needs to refactor anything.

use crate::error::{Error, Result};
use crate::ff::{ExtField, Field, FieldElement, PrimeField};
use crate::poly::{self, Polynomial};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A closed point of the projective line over F_p: either a monic
/// irreducible polynomial (its degree is the point's degree) or the point
/// at infinity (degree 1).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ClosedPoint {
    Finite(Polynomial),
    Infinity,
}

impl ClosedPoint {
    /// A finite point from its monic irreducible generator.
    pub fn finite(generator: Polynomial) -> Result<Self> {
        if generator.leading_coeff() != 1 || !poly::is_irreducible(&generator) {
            return Err(Error::NotIrreducible);
        }
        Ok(ClosedPoint::Finite(generator))
    }

    pub fn infinity() -> Self {
        ClosedPoint::Infinity
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Finite(g) => g.degree(),
            ClosedPoint::Infinity => 1,
        }
    }

    /// The residue field at the point.  Finite points get the quotient by
    /// their generator (even in degree 1, for uniformity); infinity gets the
    /// base field itself.
    pub fn residue_field(&self, base: PrimeField) -> Result<Field> {
        match self {
            ClosedPoint::Finite(g) => Ok(Field::Ext(ExtField::new(base, g.clone())?)),
            ClosedPoint::Infinity => Ok(Field::Prime(base)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ClosedPoint::Finite(g) => g.to_json(),
            ClosedPoint::Infinity => serde_json::Value::from("inf"),
        }
    }
}

impl Ord for ClosedPoint {
    /// Finite points in the deterministic polynomial order, then infinity.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (ClosedPoint::Finite(a), ClosedPoint::Finite(b)) => a.cmp_order(b),
            (ClosedPoint::Finite(_), ClosedPoint::Infinity) => std::cmp::Ordering::Less,
            (ClosedPoint::Infinity, ClosedPoint::Finite(_)) => std::cmp::Ordering::Greater,
            (ClosedPoint::Infinity, ClosedPoint::Infinity) => std::cmp::Ordering::Equal,
        }
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Finite(g) => write!(f, "({g})"),
            ClosedPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// A nonzero element of F_p(t) in canonical factored form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    field: PrimeField,
    constant: u64,
    factors: BTreeMap<Polynomial, i64>,
}

impl RationalFunction {
    /// Canonical form of num/den: factor both, merge exponents, cancel, and
    /// pull the leading coefficients into the constant.
    pub fn normalize(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        Self::normalize_seeded(num, den, poly::DEFAULT_FACTOR_SEED)
    }

    /// [`RationalFunction::normalize`] with an explicit factorization seed.
    pub fn normalize_seeded(num: &Polynomial, den: &Polynomial, seed: u64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let field = num.field();
        let (cn, num_factors) = poly::factor_seeded(num, seed)?;
        let (cd, den_factors) = poly::factor_seeded(den, seed)?;
        let mut factors: BTreeMap<Polynomial, i64> = BTreeMap::new();
        for (g, m) in num_factors {
            *factors.entry(g).or_insert(0) += m as i64;
        }
        for (g, m) in den_factors {
            *factors.entry(g).or_insert(0) -= m as i64;
        }
        factors.retain(|_, e| *e != 0);
        Ok(RationalFunction {
            field,
            constant: field.div(cn, cd)?,
            factors,
        })
    }

    /// A nonzero polynomial viewed as a rational function.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        Self::normalize(p, &Polynomial::one(p.field()))
    }

    /// Assembles a function directly from factored data, validating that
    /// every generator is monic irreducible.
    pub fn from_factors(
        field: PrimeField,
        constant: i64,
        factors: &[(Polynomial, i64)],
    ) -> Result<Self> {
        let c = field.reduce(constant);
        if c == 0 {
            return Err(Error::ZeroFunction);
        }
        let mut map: BTreeMap<Polynomial, i64> = BTreeMap::new();
        for (g, e) in factors {
            if g.leading_coeff() != 1 || !poly::is_irreducible(g) {
                return Err(Error::NotIrreducible);
            }
            *map.entry(g.clone()).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        Ok(RationalFunction {
            field,
            constant: c,
            factors: map,
        })
    }

    /// The nonzero constant c.
    pub fn constant_fn(field: PrimeField, c: i64) -> Result<Self> {
        Self::from_factors(field, c, &[])
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant_fn(field, 1).expect("1 is nonzero")
    }

    /// The coordinate function t.
    pub fn var(field: PrimeField) -> Self {
        RationalFunction {
            field,
            constant: 1,
            factors: BTreeMap::from([(Polynomial::var(field), 1)]),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The constant in front of the monic factor product.
    pub fn constant(&self) -> u64 {
        self.constant
    }

    pub fn factors(&self) -> &BTreeMap<Polynomial, i64> {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant == 1 && self.factors.is_empty()
    }

    fn check_field(&self, rhs: &RationalFunction) {
        assert_eq!(self.field, rhs.field, "operands live over different fields");
    }

    pub fn mul(&self, rhs: &RationalFunction) -> RationalFunction {
        self.check_field(rhs);
        let mut factors = self.factors.clone();
        for (g, e) in &rhs.factors {
            *factors.entry(g.clone()).or_insert(0) += e;
        }
        factors.retain(|_, e| *e != 0);
        RationalFunction {
            field: self.field,
            constant: self.field.mul(self.constant, rhs.constant),
            factors,
        }
    }

    pub fn inv(&self) -> RationalFunction {
        RationalFunction {
            field: self.field,
            constant: self.field.inv(self.constant).expect("constant is nonzero"),
            factors: self.factors.iter().map(|(g, e)| (g.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, rhs: &RationalFunction) -> RationalFunction {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, e: i64) -> RationalFunction {
        if e == 0 {
            return Self::one(self.field);
        }
        let c = if e >= 0 {
            self.field.pow(self.constant, e as u64)
        } else {
            let inv = self.field.inv(self.constant).expect("constant is nonzero");
            self.field.pow(inv, e.unsigned_abs())
        };
        RationalFunction {
            field: self.field,
            constant: c,
            factors: self.factors.iter().map(|(g, m)| (g.clone(), m * e)).collect(),
        }
    }

    /// Addition goes through expanded numerators; the result must again be
    /// nonzero.
    pub fn add(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        self.check_field(rhs);
        let (n1, d1) = (self.numerator(), self.denominator());
        let (n2, d2) = (rhs.numerator(), rhs.denominator());
        let num = n1.mul(&d2).add(&n2.mul(&d1));
        Self::normalize(&num, &d1.mul(&d2))
    }

    pub fn neg(&self) -> RationalFunction {
        let mut out = self.clone();
        out.constant = self.field.neg(out.constant);
        out
    }

    pub fn sub(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        self.add(&rhs.neg())
    }

    /// Expanded numerator: constant * product of positive-exponent factors.
    pub fn numerator(&self) -> Polynomial {
        let mut out = Polynomial::constant(self.field, self.constant as i64);
        for (g, &e) in &self.factors {
            if e > 0 {
                for _ in 0..e {
                    out = out.mul(g);
                }
            }
        }
        out
    }

    /// Expanded denominator: product of negative-exponent factors (monic).
    pub fn denominator(&self) -> Polynomial {
        let mut out = Polynomial::one(self.field);
        for (g, &e) in &self.factors {
            if e < 0 {
                for _ in 0..-e {
                    out = out.mul(g);
                }
            }
        }
        out
    }

    /// The valuation at a closed point.  At a finite point this is the
    /// stored exponent; at infinity it is -sum(exponent * degree), the
    /// degree drop from numerator to denominator.
    pub fn valuation(&self, x: &ClosedPoint) -> i64 {
        match x {
            ClosedPoint::Finite(g) => self.factors.get(g).copied().unwrap_or(0),
            ClosedPoint::Infinity => -self
                .factors
                .iter()
                .map(|(g, &e)| e * g.degree() as i64)
                .sum::<i64>(),
        }
    }

    /// All points with nonzero valuation.
    pub fn support(&self) -> BTreeSet<ClosedPoint> {
        let mut out: BTreeSet<ClosedPoint> = self
            .factors
            .keys()
            .map(|g| ClosedPoint::Finite(g.clone()))
            .collect();
        if self.valuation(&ClosedPoint::Infinity) != 0 {
            out.insert(ClosedPoint::Infinity);
        }
        out
    }

    /// The value in the residue field k(x), defined when the valuation at x
    /// is zero.  At a finite point every factor and the constant are
    /// evaluated at the class of t; at infinity the value is the ratio of
    /// leading coefficients, which in canonical form is the constant.
    pub fn residue(&self, x: &ClosedPoint) -> Result<FieldElement> {
        let v = self.valuation(x);
        if v != 0 {
            return Err(Error::NonzeroValuation { valuation: v });
        }
        match x {
            ClosedPoint::Finite(gen) => {
                let ext = ExtField::new(self.field, gen.clone())?;
                let t = ext.gen();
                let mut acc = Field::Ext(ext).scalar(self.constant);
                for (g, &e) in &self.factors {
                    let value = g.eval(&t);
                    acc = acc.mul(&value.pow(e)?);
                }
                Ok(acc)
            }
            ClosedPoint::Infinity => Ok(self.field.elem(self.constant as i64)),
        }
    }

    /// sum over the support of deg(x) * v_x(f); always zero, which is the
    /// divisor-degree identity the character reciprocity law reduces to.
    pub fn degree_sum(&self) -> i64 {
        self.support()
            .iter()
            .map(|x| x.degree() as i64 * self.valuation(x))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let factors: Vec<serde_json::Value> = self
            .factors
            .iter()
            .map(|(g, e)| serde_json::json!({ "gen": g.to_json(), "exp": e }))
            .collect();
        serde_json::json!({ "constant": self.constant, "factors": factors })
    }
}

impl fmt::Display for RationalFunction {
    /// Prints re-parseable syntax: `c*(g1)^e1*(g2)^e2*...` with unit
    /// constant and exponent 1 elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant != 1 || self.factors.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (g, &e) in &self.factors {
            if e == 1 {
                parts.push(format!("({g})"));
            } else {
                parts.push(format!("({g})^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, coeffs: &[i64]) -> Polynomial {
        Polynomial::new(fp(p), coeffs)
    }

    #[test]
    fn normalize_cancels_common_factors() {
        // (t^2 - 1)/(t - 1) = t + 1 over F_5.
        let f = RationalFunction::normalize(&poly(5, &[-1, 0, 1]), &poly(5, &[-1, 1])).unwrap();
        assert_eq!(f.constant(), 1);
        assert_eq!(
            f.factors().iter().collect::<Vec<_>>(),
            vec![(&poly(5, &[1, 1]), &1)]
        );
    }

    #[test]
    fn normalize_keeps_irreducible_parts() {
        // (t^2 + 1)/t over F_3.
        let f = RationalFunction::normalize(&poly(3, &[1, 0, 1]), &poly(3, &[0, 1])).unwrap();
        assert_eq!(f.constant(), 1);
        let entries: Vec<_> = f.factors().iter().collect();
        assert_eq!(entries, vec![(&poly(3, &[0, 1]), &-1), (&poly(3, &[1, 0, 1]), &1)]);
    }

    #[test]
    fn constant_function_has_empty_support() {
        // (2t + 2)/(t + 1) = 2 over F_5.
        let f = RationalFunction::normalize(&poly(5, &[2, 2]), &poly(5, &[1, 1])).unwrap();
        assert_eq!(f.constant(), 2);
        assert!(f.factors().is_empty());
        assert!(f.support().is_empty());
    }

    #[test]
    fn cancellation_leaves_the_right_factor() {
        // (t^2 + 1)/(t - 2) over F_5: numerator (t+2)(t+3), denominator t+3.
        let f = RationalFunction::normalize(&poly(5, &[1, 0, 1]), &poly(5, &[-2, 1])).unwrap();
        assert_eq!(f.constant(), 1);
        assert_eq!(
            f.factors().iter().collect::<Vec<_>>(),
            vec![(&poly(5, &[2, 1]), &1)]
        );
    }

    #[test]
    fn zero_inputs_are_rejected() {
        let zero = Polynomial::zero(fp(5));
        let one = Polynomial::one(fp(5));
        assert_eq!(
            RationalFunction::normalize(&zero, &one),
            Err(Error::ZeroFunction)
        );
        assert_eq!(
            RationalFunction::normalize(&one, &zero),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn valuations_including_infinity() {
        // f = (t^2 + 1)/t over F_3.
        let f = RationalFunction::normalize(&poly(3, &[1, 0, 1]), &poly(3, &[0, 1])).unwrap();
        let at_t = ClosedPoint::finite(poly(3, &[0, 1])).unwrap();
        let at_q = ClosedPoint::finite(poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(f.valuation(&at_t), -1);
        assert_eq!(f.valuation(&at_q), 1);
        assert_eq!(f.valuation(&ClosedPoint::Infinity), -1);
        assert_eq!(f.support().len(), 3);
    }

    #[test]
    fn residue_at_infinity_is_leading_ratio() {
        // (2t + 1)/(t + 2) over F_5 has value 2 at infinity.
        let f = RationalFunction::normalize(&poly(5, &[1, 2]), &poly(5, &[2, 1])).unwrap();
        assert_eq!(f.residue(&ClosedPoint::Infinity).unwrap(), fp(5).elem(2));
    }

    #[test]
    fn residue_at_finite_point_of_degree_two() {
        // f = t at (t^2 + 1) over F_3 is the class of t in F_9.
        let f = RationalFunction::var(fp(3));
        let x = ClosedPoint::finite(poly(3, &[1, 0, 1])).unwrap();
        let r = f.residue(&x).unwrap();
        assert_eq!(r.coeffs(), &[0, 1]);
    }

    #[test]
    fn residue_requires_zero_valuation() {
        let f = RationalFunction::var(fp(5));
        let at_t = ClosedPoint::finite(poly(5, &[0, 1])).unwrap();
        assert_eq!(
            f.residue(&at_t),
            Err(Error::NonzeroValuation { valuation: 1 })
        );
    }

    #[test]
    fn closed_point_validation() {
        assert!(ClosedPoint::finite(poly(3, &[1, 0, 1])).is_ok());
        // t^2 - 1 is reducible.
        assert_eq!(
            ClosedPoint::finite(poly(3, &[-1, 0, 1])),
            Err(Error::NotIrreducible)
        );
        // 2t + 1 is irreducible but not monic.
        assert_eq!(
            ClosedPoint::finite(poly(5, &[1, 2])),
            Err(Error::NotIrreducible)
        );
    }

    fn random_function(p: u64, rng: &mut ChaCha8Rng, max_deg: usize) -> RationalFunction {
        let field = fp(p);
        loop {
            let dn = rng.gen_range(0..=max_deg);
            let dd = rng.gen_range(0..=max_deg);
            let num: Vec<i64> = (0..=dn).map(|_| rng.gen_range(0..p) as i64).collect();
            let den: Vec<i64> = (0..=dd).map(|_| rng.gen_range(0..p) as i64).collect();
            let num = Polynomial::new(field, &num);
            let den = Polynomial::new(field, &den);
            if let Ok(f) = RationalFunction::normalize(&num, &den) {
                return f;
            }
        }
    }

    #[test]
    fn degree_sum_vanishes_and_matches_expanded_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &p in &[2u64, 3, 5, 13] {
            for _ in 0..50 {
                let f = random_function(p, &mut rng, 6);
                assert_eq!(f.degree_sum(), 0);
                // Independent route for the infinity valuation: the degree
                // drop of the expanded fraction.
                let expanded = f.denominator().degree() as i64 - f.numerator().degree() as i64;
                assert_eq!(f.valuation(&ClosedPoint::Infinity), expanded);
            }
        }
    }

    #[test]
    fn multiplicative_structure_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..40 {
            let f = random_function(7, &mut rng, 5);
            let g = random_function(7, &mut rng, 5);
            let prod = f.mul(&g);
            for x in prod.support().iter().chain(f.support().iter()) {
                assert_eq!(prod.valuation(x), f.valuation(x) + g.valuation(x));
            }
            assert!(f.mul(&f.inv()).is_one());
            assert_eq!(f.pow(3), f.mul(&f).mul(&f));
            // Round trip through the expanded fraction.
            assert_eq!(
                RationalFunction::normalize(&f.numerator(), &f.denominator()).unwrap(),
                f
            );
        }
    }

    #[test]
    fn addition_and_the_zero_result() {
        let f = RationalFunction::var(fp(5));
        let one = RationalFunction::one(fp(5));
        let g = one.sub(&f).unwrap(); // 1 - t = 4*(t + 4)
        assert_eq!(g.constant(), 4);
        assert_eq!(
            g.factors().iter().collect::<Vec<_>>(),
            vec![(&poly(5, &[4, 1]), &1)]
        );
        assert_eq!(f.sub(&f), Err(Error::ZeroFunction));
    }

    #[test]
    fn display_is_reparseable_syntax() {
        let f = RationalFunction::normalize(&poly(3, &[0, 2]), &poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(f.to_string(), "2*(t)*(t^2+1)^-1");
        assert_eq!(RationalFunction::one(fp(5)).to_string(), "1");
    }
}
