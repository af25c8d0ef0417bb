//! Local symbols at closed points of the projective line and the exact
//! product laws they satisfy.
//!
//! For nonzero f, g in F_q(t) and a closed point x, the commutator value is
//! N_{k(x)/k}[(f^{v_x(g)} / g^{v_x(f)})(x)] and the tame symbol multiplies
//! it by the sign (-1)^(deg(x) v_x(f) v_x(g)).  The product of tame symbols
//! over every point of the line is 1; restricting through the m-th power
//! residue map or reading only valuations modulo n gives the Hilbert and
//! character versions of the same law.

use crate::error::Result;
use crate::ff::FieldElement;
use crate::ratfun::{ClosedPoint, RationalFunction};
use std::collections::BTreeSet;

/// Everything measured at one closed point.  `index_f` is deg(x) * v_x(f),
/// the dimension index the valuation acquires from the residue degree.
/// `symbol` is the value this point contributes to the verified product:
/// the tame symbol itself, or its m-th power-residue image for a Hilbert
/// run.
#[derive(Clone, Debug)]
pub struct LocalSymbolReport {
    pub point: ClosedPoint,
    pub v_f: i64,
    pub v_g: i64,
    pub index_f: i64,
    pub index_g: i64,
    pub commutator: FieldElement,
    pub tame: FieldElement,
    pub symbol: FieldElement,
}

impl LocalSymbolReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "point": self.point.to_json(),
            "v_f": self.v_f,
            "v_g": self.v_g,
            "index_f": self.index_f,
            "index_g": self.index_g,
            "commutator": self.commutator.to_json(),
            "tame": self.tame.to_json(),
            "symbol": self.symbol.to_json(),
        })
    }
}

/// A full product-law verification: one report per point, their product,
/// and whether it equals 1.
#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    pub points: Vec<LocalSymbolReport>,
    pub product: FieldElement,
    pub passed: bool,
}

impl ReciprocityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": self.points.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "product": self.product.to_json(),
            "passed": self.passed,
        })
    }
}

/// N_{k(x)/k}[(f^{v_x(g)} / g^{v_x(f)})(x)]: the ratio has valuation zero
/// at x, so its residue is a unit of k(x), and the norm lands in F_q.
pub fn commutator_value(
    f: &RationalFunction,
    g: &RationalFunction,
    x: &ClosedPoint,
) -> Result<FieldElement> {
    let vf = f.valuation(x);
    let vg = g.valuation(x);
    let ratio = f.pow(vg).div(&g.pow(vf));
    debug_assert_eq!(ratio.valuation(x), 0);
    ratio.residue(x)?.norm()
}

/// The tame symbol (f, g)_x = (-1)^(deg(x) v_x(f) v_x(g)) * commutator.
/// In characteristic 2 the sign is automatically trivial.
pub fn tame_symbol(
    f: &RationalFunction,
    g: &RationalFunction,
    x: &ClosedPoint,
) -> Result<FieldElement> {
    let value = commutator_value(f, g, x)?;
    let odd = x.degree() % 2 == 1 && f.valuation(x) % 2 != 0 && g.valuation(x) % 2 != 0;
    if odd {
        Ok(value.neg())
    } else {
        Ok(value)
    }
}

/// The Hilbert norm-residue symbol: the tame symbol pushed into the m-th
/// roots of unity.  Defined when m divides q - 1.
pub fn hilbert_symbol(
    f: &RationalFunction,
    g: &RationalFunction,
    x: &ClosedPoint,
    m: u64,
) -> Result<FieldElement> {
    tame_symbol(f, g, x)?.unity_power(m)
}

/// The additive character symbol: deg(x) * v_x(f) mod n.
pub fn character_value(f: &RationalFunction, x: &ClosedPoint, n: u64) -> u64 {
    let term = x.degree() as i64 * f.valuation(x);
    term.rem_euclid(n as i64) as u64
}

fn local_report(
    f: &RationalFunction,
    g: &RationalFunction,
    x: &ClosedPoint,
    m: Option<u64>,
) -> Result<LocalSymbolReport> {
    let v_f = f.valuation(x);
    let v_g = g.valuation(x);
    let d = x.degree() as i64;
    let commutator = commutator_value(f, g, x)?;
    let tame = tame_symbol(f, g, x)?;
    let symbol = match m {
        Some(m) => tame.unity_power(m)?,
        None => tame.clone(),
    };
    Ok(LocalSymbolReport {
        point: x.clone(),
        v_f,
        v_g,
        index_f: d * v_f,
        index_g: d * v_g,
        commutator,
        tame,
        symbol,
    })
}

/// The points where anything can happen: the supports of both functions,
/// plus infinity so the report always shows the point completing the
/// product.
fn relevant_points(f: &RationalFunction, g: &RationalFunction) -> BTreeSet<ClosedPoint> {
    let mut points: BTreeSet<ClosedPoint> = f.support();
    points.extend(g.support());
    points.insert(ClosedPoint::Infinity);
    points
}

fn product_report(
    f: &RationalFunction,
    g: &RationalFunction,
    m: Option<u64>,
) -> Result<ReciprocityReport> {
    assert_eq!(f.field(), g.field(), "operands live over different fields");
    let mut points = Vec::new();
    let mut product = f.field().one();
    for x in relevant_points(f, g) {
        let report = local_report(f, g, &x, m)?;
        product = product.mul(&report.symbol);
        points.push(report);
    }
    let passed = product.is_one();
    Ok(ReciprocityReport {
        points,
        product,
        passed,
    })
}

/// The full measurement at a single closed point.
pub fn symbol_report(
    f: &RationalFunction,
    g: &RationalFunction,
    x: &ClosedPoint,
) -> Result<LocalSymbolReport> {
    assert_eq!(f.field(), g.field(), "operands live over different fields");
    local_report(f, g, x, None)
}

/// Verifies the product of tame symbols over every closed point equals 1.
pub fn weil_check(f: &RationalFunction, g: &RationalFunction) -> Result<ReciprocityReport> {
    product_report(f, g, None)
}

/// Verifies the product of Hilbert symbols (values in the m-th roots of
/// unity) equals 1.
pub fn hilbert_check(
    f: &RationalFunction,
    g: &RationalFunction,
    m: u64,
) -> Result<ReciprocityReport> {
    product_report(f, g, Some(m))
}

/// Sums deg(x) * v_x(f) mod n over every point; returns the sum and whether
/// it vanishes.  This is the divisor-degree identity read modulo n.
pub fn character_check(f: &RationalFunction, n: u64) -> (u64, bool) {
    let mut points = f.support();
    points.insert(ClosedPoint::Infinity);
    let sum = points
        .iter()
        .map(|x| character_value(f, x, n))
        .sum::<u64>()
        % n;
    (sum, sum == 0)
}
