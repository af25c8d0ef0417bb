//! The determinant-line commutator engine.
//!
//! Each operator σ with V₊ and σV₊ commensurable carries a line
//! Det(V₊/(V₊∩σV₊)) ⊗ Det(σV₊/(V₊∩σV₊))*, and pairs (σ, s) with s a
//! nonzero element of that line form a central extension by k^×.  The
//! engine stores s as a scalar against the canonical ascending-monomial
//! bases of both quotients, composes lifts by an exact change-of-basis
//! determinant, and evaluates the commutator {σ,τ} = scalar(σ̃τ̃)/scalar(τ̃σ̃)
//! of commuting operators.
//!
//! Two models are supported: multiplication by rational functions on
//! V = k((t)) with V₊ = t^shift·k[[t]], and monomial finite-block
//! automorphisms on V = span{e_1, e_2, ...} with a monomial subspace V₊.
//! The Laurent-model commutator reproduces the closed-form local symbol at
//! the point t = 0.  A third base space, the complement
//! V₋ = span{t^{-1}, t^{-2}, ...}, is handled through cyclic
//! k[1/t]-submodules and yields the inverse of the V₊ commutator.

use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeField};
use crate::linalg;
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::seqspace::{self, BlockOperator, MonomialSubspace};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

/// The Laurent expansion of a rational function at t = 0: the valuation
/// and an exact on-demand coefficient oracle.  Coefficients come from long
/// division of the unit parts of numerator and denominator and are
/// memoized, so any window of coefficients is computed once.
#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    source: RationalFunction,
    field: PrimeField,
    valuation: i64,
    num_unit: Vec<u64>,
    den_unit: Vec<u64>,
    cache: RefCell<Vec<u64>>,
}

impl LaurentExpansion {
    pub fn new(f: &RationalFunction) -> Self {
        let field = f.field();
        let num = f.numerator();
        let den = f.denominator();
        let num_low = num.lowest_nonzero().expect("numerator is nonzero");
        let den_low = den.lowest_nonzero().expect("denominator is nonzero");
        LaurentExpansion {
            source: f.clone(),
            field,
            valuation: num_low as i64 - den_low as i64,
            num_unit: num.coeffs()[num_low..].to_vec(),
            den_unit: den.coeffs()[den_low..].to_vec(),
            cache: RefCell::new(Vec::new()),
        }
    }

    pub fn source(&self) -> &RationalFunction {
        &self.source
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// The coefficient of t^n in the expansion.
    pub fn coeff(&self, n: i64) -> u64 {
        if n < self.valuation {
            0
        } else {
            self.unit_coeff((n - self.valuation) as usize)
        }
    }

    fn unit_coeff(&self, k: usize) -> u64 {
        let mut cache = self.cache.borrow_mut();
        let d0_inv = self
            .field
            .inv(self.den_unit[0])
            .expect("unit part has nonzero constant term");
        while cache.len() <= k {
            let i = cache.len();
            let mut acc = self.num_unit.get(i).copied().unwrap_or(0);
            for j in 1..self.den_unit.len() {
                if j > i {
                    break;
                }
                let prod = self.field.mul(self.den_unit[j], cache[i - j]);
                acc = self.field.sub(acc, prod);
            }
            cache.push(self.field.mul(acc, d0_inv));
        }
        cache[k]
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Laurent { expansion: LaurentExpansion, shift: i64 },
    Sequence { op: BlockOperator, vplus: MonomialSubspace },
}

/// A lifted operator: the operator itself, the canonical monomial bases of
/// the two quotients V₊/(V₊∩σV₊) and σV₊/(V₊∩σV₊) (as exponent /
/// position lists), and the determinant-line coordinate relative to them.
#[derive(Clone, Debug)]
pub struct DetLift {
    engine: Engine,
    out_basis: Vec<i64>,
    in_basis: Vec<i64>,
    scalar: FieldElement,
}

fn interval_bases(a: i64, b: i64) -> (Vec<i64>, Vec<i64>) {
    ((a..b).collect(), (b..a).collect())
}

/// Image of basis position p under a monomial block operator: the target
/// position and the coefficient.
fn monomial_image(op: &BlockOperator, p: i64) -> (i64, u64) {
    let n = op.size() as i64;
    if p >= n {
        return (p, 1);
    }
    for i in 0..n {
        let c = op.entry(i as usize, p as usize);
        if c != 0 {
            return (i, c);
        }
    }
    unreachable!("invertible matrix has no zero column")
}

impl DetLift {
    /// Canonical lift of multiplication by f on V₊ = t^shift·k[[t]]:
    /// monomial quotient bases in ascending degree, scalar 1.
    pub fn mult_lift(f: &RationalFunction, shift: i64) -> DetLift {
        let expansion = LaurentExpansion::new(f);
        let v = expansion.valuation();
        let scalar = f.field().one();
        let (out_basis, in_basis) = interval_bases(shift, shift + v);
        DetLift {
            engine: Engine::Laurent { expansion, shift },
            out_basis,
            in_basis,
            scalar,
        }
    }

    /// Canonical lift of a monomial block operator over a monomial V₊.
    /// Non-monomial blocks move V₊ off the monomial lattice, where the
    /// quotients have no distinguished bases, so they are rejected.
    pub fn block_lift(op: &BlockOperator, vplus: &MonomialSubspace) -> Result<DetLift> {
        if !op.is_monomial() {
            return Err(Error::UnsupportedOperator(
                "sequence-model lifts require a monomial block matrix \
                 (exactly one nonzero entry per row and column)"
                    .into(),
            ));
        }
        let n = op.size() as i64;
        let a: BTreeSet<i64> = (0..n)
            .filter(|&p| vplus.index_set().contains(p as usize))
            .collect();
        let b: BTreeSet<i64> = a.iter().map(|&p| monomial_image(op, p).0).collect();
        let out_basis = a.difference(&b).copied().collect();
        let in_basis = b.difference(&a).copied().collect();
        Ok(DetLift {
            engine: Engine::Sequence {
                op: op.clone(),
                vplus: vplus.clone(),
            },
            out_basis,
            in_basis,
            scalar: op.field().one(),
        })
    }

    pub fn scalar(&self) -> &FieldElement {
        &self.scalar
    }

    /// Monomial exponents (or positions) spanning V₊/(V₊∩σV₊).
    pub fn out_basis(&self) -> &[i64] {
        &self.out_basis
    }

    /// Monomial exponents (or positions) spanning σV₊/(V₊∩σV₊).
    pub fn in_basis(&self) -> &[i64] {
        &self.in_basis
    }

    /// dim V₊/(V₊∩σV₊) − dim σV₊/(V₊∩σV₊).
    pub fn index(&self) -> i64 {
        self.out_basis.len() as i64 - self.in_basis.len() as i64
    }

    pub fn field(&self) -> PrimeField {
        match &self.engine {
            Engine::Laurent { expansion, .. } => expansion.field(),
            Engine::Sequence { op, .. } => op.field(),
        }
    }

    /// The same lift with another determinant-line coordinate.
    pub fn with_scalar(self, scalar: FieldElement) -> DetLift {
        assert!(
            !scalar.is_zero(),
            "determinant-line coordinate must be nonzero"
        );
        DetLift { scalar, ..self }
    }

    /// Group law: (σ, s)·(τ, u) = (στ, s·u·corr), where corr is the
    /// determinant of the change of basis carrying the glued quotient data
    /// of σ and σ(τ-data) into the canonical data of στ.
    pub fn compose(&self, other: &DetLift) -> Result<DetLift> {
        let corr = match (&self.engine, &other.engine) {
            (
                Engine::Laurent { expansion, shift },
                Engine::Laurent {
                    expansion: other_exp,
                    shift: other_shift,
                },
            ) => {
                if shift != other_shift {
                    return Err(Error::BadInput(format!(
                        "lifts use different base subspaces (shifts {shift} and {other_shift})"
                    )));
                }
                corr_mult(
                    expansion,
                    *shift,
                    other_exp.valuation(),
                    &other.out_basis,
                    &other.in_basis,
                )
            }
            (
                Engine::Sequence { op, vplus },
                Engine::Sequence {
                    op: other_op,
                    vplus: other_vplus,
                },
            ) => {
                if vplus != other_vplus {
                    return Err(Error::BadInput(
                        "lifts use different base subspaces".into(),
                    ));
                }
                corr_block(op, other_op, vplus)
            }
            _ => {
                return Err(Error::BadInput(
                    "cannot compose a Laurent-model lift with a sequence-model lift".into(),
                ))
            }
        };
        let scalar = self.scalar.mul(&other.scalar).mul(&corr);
        let canonical = match (&self.engine, &other.engine) {
            (Engine::Laurent { expansion, .. }, Engine::Laurent { expansion: other_exp, shift }) => {
                DetLift::mult_lift(&expansion.source().mul(other_exp.source()), *shift)
            }
            (Engine::Sequence { op, vplus }, Engine::Sequence { op: other_op, .. }) => {
                DetLift::block_lift(&op.compose(other_op), vplus)
                    .expect("a product of monomial blocks is monomial")
            }
            _ => unreachable!(),
        };
        Ok(canonical.with_scalar(scalar))
    }

    /// The inverse in the extension group: the scalar is pinned by
    /// compose(L, invert(L)) = (1, 1).
    pub fn invert(&self) -> DetLift {
        let canonical_inverse = match &self.engine {
            Engine::Laurent { expansion, shift } => {
                DetLift::mult_lift(&expansion.source().inv(), *shift)
            }
            Engine::Sequence { op, vplus } => DetLift::block_lift(&op.inverse(), vplus)
                .expect("the inverse of a monomial block is monomial"),
        };
        let unscaled = self.clone().with_scalar(self.field().one());
        let corr = unscaled
            .compose(&canonical_inverse)
            .expect("lifts share a model")
            .scalar
            .clone();
        let scalar = self
            .scalar
            .mul(&corr)
            .inv()
            .expect("lift scalars are nonzero");
        canonical_inverse.with_scalar(scalar)
    }
}

/// A column of a change-of-basis matrix: a reference monomial, or explicit
/// coordinates over the reference basis.
enum Col {
    Unit(i64),
    Coords(Vec<u64>),
}

fn basis_det(field: PrimeField, reference: &[i64], cols: &[Col]) -> u64 {
    assert_eq!(
        reference.len(),
        cols.len(),
        "change-of-basis matrix must be square"
    );
    let position: BTreeMap<i64, usize> = reference.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut m = vec![vec![0u64; cols.len()]; reference.len()];
    for (j, col) in cols.iter().enumerate() {
        match col {
            Col::Unit(p) => {
                let i = *position
                    .get(p)
                    .expect("monomial lies in the reference space");
                m[i][j] = 1;
            }
            Col::Coords(v) => {
                assert_eq!(v.len(), reference.len());
                for (i, &x) in v.iter().enumerate() {
                    m[i][j] = x;
                }
            }
        }
    }
    linalg::det(field, &m)
}

/// The correction factor corr(σ, τ) between glued canonical data and the
/// canonical data of στ's own line, expressed through six change-of-basis
/// determinants over the window.  A = V₊, B = σV₊, C = στV₊ are given by
/// their window parts modulo the common deep tail (so A∩B∩C is empty
/// here); sig_out / sig_in are the σ-images of τ's canonical out/in bases
/// in the coordinates of B respectively C.
fn corr_value(
    field: PrimeField,
    a: &BTreeSet<i64>,
    b: &BTreeSet<i64>,
    c: &BTreeSet<i64>,
    sig_out: Vec<Vec<u64>>,
    sig_in: Vec<Vec<u64>>,
) -> FieldElement {
    debug_assert!(a.intersection(b).all(|p| !c.contains(p)));
    let asc = |s: &BTreeSet<i64>| -> Vec<i64> { s.iter().copied().collect() };
    let (ref_a, ref_b, ref_c) = (asc(a), asc(b), asc(c));
    let units = |sets: (&BTreeSet<i64>, &BTreeSet<i64>), rest: (&BTreeSet<i64>, &BTreeSet<i64>)| {
        let mut cols: Vec<Col> = sets.0.difference(sets.1).copied().map(Col::Unit).collect();
        cols.extend(rest.0.intersection(rest.1).copied().map(Col::Unit));
        cols
    };
    let coords = |vectors: Vec<Vec<u64>>, rest: (&BTreeSet<i64>, &BTreeSet<i64>)| {
        let mut cols: Vec<Col> = vectors.into_iter().map(Col::Coords).collect();
        cols.extend(rest.0.intersection(rest.1).copied().map(Col::Unit));
        cols
    };
    let l_a = basis_det(field, &ref_a, &units((a, b), (a, b)));
    let l_b = basis_det(field, &ref_b, &units((b, a), (a, b)));
    let m_b = basis_det(field, &ref_b, &coords(sig_out, (b, c)));
    let m_c = basis_det(field, &ref_c, &coords(sig_in, (b, c)));
    let n_a = basis_det(field, &ref_a, &units((a, c), (a, c)));
    let n_c = basis_det(field, &ref_c, &units((c, a), (a, c)));
    let numerator = field.mul(field.mul(m_b, l_a), n_c);
    let denominator = field.mul(field.mul(l_b, n_a), m_c);
    let value = field
        .div(numerator, denominator)
        .expect("quotient bases are independent");
    assert_ne!(value, 0, "quotient bases are independent");
    field.elem(value as i64)
}

fn corr_mult(
    op1: &LaurentExpansion,
    shift: i64,
    v2: i64,
    out2: &[i64],
    in2: &[i64],
) -> FieldElement {
    let field = op1.field();
    let v1 = op1.valuation();
    let (a, b, c) = (shift, shift + v1, shift + v1 + v2);
    let hi = a.max(b).max(c);
    let a_set: BTreeSet<i64> = (a..hi).collect();
    let b_set: BTreeSet<i64> = (b..hi).collect();
    let c_set: BTreeSet<i64> = (c..hi).collect();
    let sig_out = out2
        .iter()
        .map(|&j| (b..hi).map(|n| op1.coeff(n - j)).collect())
        .collect();
    let sig_in = in2
        .iter()
        .map(|&j| (c..hi).map(|n| op1.coeff(n - j)).collect())
        .collect();
    corr_value(field, &a_set, &b_set, &c_set, sig_out, sig_in)
}

fn corr_block(op1: &BlockOperator, op2: &BlockOperator, vplus: &MonomialSubspace) -> FieldElement {
    let field = op1.field();
    let n = op1.size().max(op2.size()) as i64;
    let a_full: BTreeSet<i64> = (0..n)
        .filter(|&p| vplus.index_set().contains(p as usize))
        .collect();
    let b_full: BTreeSet<i64> = a_full.iter().map(|&p| monomial_image(op1, p).0).collect();
    let tau_a: BTreeSet<i64> = a_full.iter().map(|&p| monomial_image(op2, p).0).collect();
    let c_full: BTreeSet<i64> = tau_a.iter().map(|&p| monomial_image(op1, p).0).collect();
    let deep: BTreeSet<i64> = a_full
        .intersection(&b_full)
        .filter(|p| c_full.contains(p))
        .copied()
        .collect();
    let reduce = |s: &BTreeSet<i64>| -> BTreeSet<i64> { s.difference(&deep).copied().collect() };
    let (a_set, b_set, c_set) = (reduce(&a_full), reduce(&b_full), reduce(&c_full));
    let out2: Vec<i64> = a_full.difference(&tau_a).copied().collect();
    let in2: Vec<i64> = tau_a.difference(&a_full).copied().collect();
    let image_coords = |target: &BTreeSet<i64>, j: i64| -> Vec<u64> {
        let (img, coeff) = monomial_image(op1, j);
        debug_assert!(target.contains(&img));
        target
            .iter()
            .map(|&p| if p == img { coeff } else { 0 })
            .collect()
    };
    let sig_out = out2.iter().map(|&j| image_coords(&b_set, j)).collect();
    let sig_in = in2.iter().map(|&j| image_coords(&c_set, j)).collect();
    corr_value(field, &a_set, &b_set, &c_set, sig_out, sig_in)
}

/// {f, g} over V₊ = t^shift·k[[t]] for commuting multiplication operators:
/// scalar(f̃·g̃)/scalar(g̃·f̃).  Independent of the chosen lifts.
pub fn laurent_commutator(f: &RationalFunction, g: &RationalFunction, shift: i64) -> FieldElement {
    assert_eq!(
        f.field().order(),
        g.field().order(),
        "operands live over different fields"
    );
    let lf = DetLift::mult_lift(f, shift);
    let lg = DetLift::mult_lift(g, shift);
    let fg = lf.compose(&lg).expect("lifts share a model");
    let gf = lg.compose(&lf).expect("lifts share a model");
    fg.scalar()
        .div(gf.scalar())
        .expect("lift scalars are nonzero")
}

/// {σ, τ} over a monomial V₊ for commuting monomial block operators.
pub fn sequence_commutator(
    sigma: &BlockOperator,
    tau: &BlockOperator,
    vplus: &MonomialSubspace,
) -> Result<FieldElement> {
    if !sigma.commutes_with(tau) {
        return Err(Error::NotCommuting);
    }
    let ls = DetLift::block_lift(sigma, vplus)?;
    let lt = DetLift::block_lift(tau, vplus)?;
    let st = ls.compose(&lt).expect("lifts share a model");
    let ts = lt.compose(&ls).expect("lifts share a model");
    Ok(st
        .scalar()
        .div(ts.scalar())
        .expect("lift scalars are nonzero"))
}

/// f(1/t), computed on the factored form: each monic irreducible factor
/// (other than t itself) reverses to another monic irreducible times its
/// constant term, and powers of t flip sign.
fn reciprocal(f: &RationalFunction) -> RationalFunction {
    let field = f.field();
    let t = Polynomial::var(field);
    let mut constant = f.constant();
    let mut t_exp: i64 = 0;
    let mut factors: BTreeMap<Polynomial, i64> = BTreeMap::new();
    for (p, &e) in f.factors() {
        if *p == t {
            t_exp -= e;
            continue;
        }
        t_exp -= e * p.degree() as i64;
        let rev_coeffs: Vec<i64> = p.coeffs().iter().rev().map(|&c| c as i64).collect();
        let (lead, rev_monic) = Polynomial::new(field, &rev_coeffs).make_monic();
        let lead_pow = if e >= 0 {
            field.pow(lead, e as u64)
        } else {
            field
                .inv(field.pow(lead, (-e) as u64))
                .expect("constant term of an irreducible prime to t is nonzero")
        };
        constant = field.mul(constant, lead_pow);
        *factors.entry(rev_monic).or_insert(0) += e;
    }
    if t_exp != 0 {
        *factors.entry(t).or_insert(0) += t_exp;
    }
    let list: Vec<(Polynomial, i64)> = factors.into_iter().filter(|&(_, e)| e != 0).collect();
    RationalFunction::from_factors(field, constant as i64, &list)
        .expect("reciprocal substitution preserves the factored form")
}

/// The exponent map of a formal product of monic irreducibles: a cyclic
/// fractional k[z]-ideal, written by its generator ∏ p^e.
type IdealExps = BTreeMap<Polynomial, i64>;

fn ideal_mult(x: &IdealExps, y: &IdealExps) -> IdealExps {
    let mut out = x.clone();
    for (p, &e) in y {
        *out.entry(p.clone()).or_insert(0) += e;
    }
    out.retain(|_, e| *e != 0);
    out
}

/// The intersection of cyclic modules: per-prime maximum of exponents.
fn ideal_intersect(x: &IdealExps, y: &IdealExps) -> IdealExps {
    let keys: BTreeSet<&Polynomial> = x.keys().chain(y.keys()).collect();
    let mut out: IdealExps = BTreeMap::new();
    for p in keys {
        let e = (*x.get(p).unwrap_or(&0)).max(*y.get(p).unwrap_or(&0));
        if e != 0 {
            out.insert(p.clone(), e);
        }
    }
    out
}

/// g_sub / g_sup as a polynomial; requires sub ⊆ sup.
fn ideal_ratio(field: PrimeField, sub: &IdealExps, sup: &IdealExps) -> Polynomial {
    let keys: BTreeSet<&Polynomial> = sub.keys().chain(sup.keys()).collect();
    let mut out = Polynomial::one(field);
    for p in keys {
        let e = sub.get(p).unwrap_or(&0) - sup.get(p).unwrap_or(&0);
        assert!(e >= 0, "generator ratio must be a polynomial");
        for _ in 0..e {
            out = out.mul(p);
        }
    }
    out
}

/// Determinant of columns against the basis (g_X·z^i) of X/R: each column
/// is a polynomial q standing for the element g_X·q, reduced mod g_R/g_X.
fn ideal_det(field: PrimeField, x: &IdealExps, r: &IdealExps, cols: &[Polynomial]) -> u64 {
    let (_, s) = ideal_ratio(field, r, x).make_monic();
    let d = s.degree();
    assert_eq!(cols.len(), d, "change-of-basis matrix must be square");
    if d == 0 {
        return 1;
    }
    let mut m = vec![vec![0u64; d]; d];
    for (j, q) in cols.iter().enumerate() {
        let reduced = q.rem(&s).expect("modulus polynomial is nonzero");
        for i in 0..d {
            m[i][j] = reduced.coeff(i);
        }
    }
    linalg::det(field, &m)
}

/// The correction factor for composing lifts of multiplication operators
/// over V₋, in the z = 1/t picture where V₋ = z·k[z].  The spaces A = z·k[z],
/// B = (first)·A, C = (first·second)·A and all their intersections are
/// cyclic k[z]-modules with ∏p^e generators, so the same six determinants
/// as in the monomial models are evaluated over generator-times-power
/// bases.  Generators are taken monic; the operator's constant enters
/// through its action on the second lift's quotient bases.
fn ideal_corr(first: &RationalFunction, second: &RationalFunction) -> FieldElement {
    let field = first.field();
    let exps = |h: &RationalFunction| -> IdealExps {
        h.factors().iter().map(|(p, &e)| (p.clone(), e)).collect()
    };
    let a: IdealExps = [(Polynomial::var(field), 1)].into_iter().collect();
    let b = ideal_mult(&a, &exps(first));
    let c = ideal_mult(&b, &exps(second));
    let tau_a = ideal_mult(&a, &exps(second));
    let r = ideal_intersect(&ideal_intersect(&a, &b), &c);
    let ab = ideal_intersect(&a, &b);
    let bc = ideal_intersect(&b, &c);
    let ac = ideal_intersect(&a, &c);
    let a_ta = ideal_intersect(&a, &tau_a);

    let ratio = |sub: &IdealExps, sup: &IdealExps| ideal_ratio(field, sub, sup);
    let zpows = |w: &Polynomial, count: usize| -> Vec<Polynomial> {
        (0..count).map(|i| w.shift_up(i)).collect()
    };
    let stack = |w1: &Polynomial, n1: usize, w2: &Polynomial, n2: usize| -> Vec<Polynomial> {
        let mut cols = zpows(w1, n1);
        cols.extend(zpows(w2, n2));
        cols
    };

    let one = Polynomial::one(field);
    let scale = Polynomial::constant(field, first.constant() as i64);
    let w_ab_a = ratio(&ab, &a);
    let w_ab_b = ratio(&ab, &b);
    let w_bc_b = ratio(&bc, &b);
    let w_bc_c = ratio(&bc, &c);
    let w_ac_a = ratio(&ac, &a);
    let w_ac_c = ratio(&ac, &c);
    let d_ab = ratio(&r, &ab).degree();
    let d_bc = ratio(&r, &bc).degree();
    let d_ac = ratio(&r, &ac).degree();
    let k_out = ratio(&a_ta, &a).degree();
    let k_in = ratio(&a_ta, &tau_a).degree();

    let l_a = ideal_det(field, &a, &r, &stack(&one, w_ab_a.degree(), &w_ab_a, d_ab));
    let l_b = ideal_det(field, &b, &r, &stack(&one, w_ab_b.degree(), &w_ab_b, d_ab));
    let m_b = ideal_det(field, &b, &r, &stack(&scale, k_out, &w_bc_b, d_bc));
    let m_c = ideal_det(field, &c, &r, &stack(&scale, k_in, &w_bc_c, d_bc));
    let n_a = ideal_det(field, &a, &r, &stack(&one, w_ac_a.degree(), &w_ac_a, d_ac));
    let n_c = ideal_det(field, &c, &r, &stack(&one, w_ac_c.degree(), &w_ac_c, d_ac));
    let numerator = field.mul(field.mul(m_b, l_a), n_c);
    let denominator = field.mul(field.mul(l_b, n_a), m_c);
    let value = field
        .div(numerator, denominator)
        .expect("quotient bases are independent");
    field.elem(value as i64)
}

/// The commutator computed over the complement V₋ = span{t^{-1}, t^{-2}, ...}
/// instead of V₊.  Substituting z = 1/t identifies V₋ with z·k[z] acted on
/// by multiplication by f(1/z); the quotient data live on cyclic
/// k[z]-submodules and are evaluated by `ideal_corr`.  Together with the
/// V₊ value this multiplies to 1.
pub fn commutator_complement(f: &RationalFunction, g: &RationalFunction) -> FieldElement {
    assert_eq!(
        f.field().order(),
        g.field().order(),
        "operands live over different fields"
    );
    let rf = reciprocal(f);
    let rg = reciprocal(g);
    ideal_corr(&rf, &rg)
        .div(&ideal_corr(&rg, &rf))
        .expect("correction factors are nonzero")
}

/// True iff the commutator over t^a·k[[t]] agrees with the one over
/// k[[t]]; the pairing only depends on the commensurability class of V₊.
pub fn commensurability_shift_check(f: &RationalFunction, g: &RationalFunction, a: i64) -> bool {
    laurent_commutator(f, g, a) == laurent_commutator(f, g, 0)
}

/// The 2×2 antidiagonal worked example: σ = [[0,b],[a,0]],
/// τ = [[0,μ],[λ,0]] with μ = λb/a (so they commute), over the family
/// V₁ = span{e_1, e_3, ...}, V₂ = span{e_2, e_4, ...}.  Records the two
/// composed scalars over each subspace, both commutators, and the four
/// indices.
#[derive(Clone, Debug)]
pub struct GlkExample {
    pub mu: FieldElement,
    pub v1_sigma_tau: FieldElement,
    pub v1_tau_sigma: FieldElement,
    pub v1_commutator: FieldElement,
    pub v2_sigma_tau: FieldElement,
    pub v2_tau_sigma: FieldElement,
    pub v2_commutator: FieldElement,
    pub index_sigma_v1: i64,
    pub index_sigma_v2: i64,
    pub index_tau_v1: i64,
    pub index_tau_v2: i64,
}

impl GlkExample {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mu": self.mu.to_json(),
            "v1": {
                "sigma_tau": self.v1_sigma_tau.to_json(),
                "tau_sigma": self.v1_tau_sigma.to_json(),
                "commutator": self.v1_commutator.to_json(),
            },
            "v2": {
                "sigma_tau": self.v2_sigma_tau.to_json(),
                "tau_sigma": self.v2_tau_sigma.to_json(),
                "commutator": self.v2_commutator.to_json(),
            },
            "indices": {
                "sigma_v1": self.index_sigma_v1,
                "sigma_v2": self.index_sigma_v2,
                "tau_v1": self.index_tau_v1,
                "tau_v2": self.index_tau_v2,
            },
        })
    }
}

pub fn glk_example(field: PrimeField, a: i64, b: i64, lambda: i64) -> Result<GlkExample> {
    let (a, b, lambda) = (field.reduce(a), field.reduce(b), field.reduce(lambda));
    if a == 0 || b == 0 || lambda == 0 {
        return Err(Error::BadInput("a, b and lambda must be nonzero".into()));
    }
    let mu = field.mul(lambda, field.div(b, a).expect("a is nonzero"));
    let sigma = BlockOperator::new(field, &[vec![0, b as i64], vec![a as i64, 0]])?;
    let tau = BlockOperator::new(field, &[vec![0, mu as i64], vec![lambda as i64, 0]])?;
    debug_assert!(sigma.commutes_with(&tau));
    let family = seqspace::admissible_family(&seqspace::FamilyRule::Linear { modulus: 2 }, 2)?;
    let mut scalars = Vec::new();
    for vplus in &family {
        let ls = DetLift::block_lift(&sigma, vplus)?;
        let lt = DetLift::block_lift(&tau, vplus)?;
        let st = ls.compose(&lt).expect("lifts share a model");
        let ts = lt.compose(&ls).expect("lifts share a model");
        let commutator = st.scalar().div(ts.scalar()).expect("scalars are nonzero");
        scalars.push((st.scalar().clone(), ts.scalar().clone(), commutator));
    }
    Ok(GlkExample {
        mu: field.elem(mu as i64),
        v1_sigma_tau: scalars[0].0.clone(),
        v1_tau_sigma: scalars[0].1.clone(),
        v1_commutator: scalars[0].2.clone(),
        v2_sigma_tau: scalars[1].0.clone(),
        v2_tau_sigma: scalars[1].1.clone(),
        v2_commutator: scalars[1].2.clone(),
        index_sigma_v1: seqspace::index(&sigma, &family[0]),
        index_sigma_v2: seqspace::index(&sigma, &family[1]),
        index_tau_v1: seqspace::index(&tau, &family[0]),
        index_tau_v2: seqspace::index(&tau, &family[1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::ClosedPoint;
    use crate::symbols;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn rf(p: u64, num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::normalize(
            &Polynomial::new(fp(p), num),
            &Polynomial::new(fp(p), den),
        )
        .unwrap()
    }

    fn random_function(rng: &mut ChaCha8Rng, field: PrimeField, max_deg: usize) -> RationalFunction {
        let p = field.order();
        loop {
            let num: Vec<i64> = (0..=rng.gen_range(0..=max_deg))
                .map(|_| rng.gen_range(0..p as i64))
                .collect();
            let den: Vec<i64> = (0..=rng.gen_range(0..=max_deg))
                .map(|_| rng.gen_range(0..p as i64))
                .collect();
            if let Ok(f) = RationalFunction::normalize(
                &Polynomial::new(field, &num),
                &Polynomial::new(field, &den),
            ) {
                return f;
            }
        }
    }

    #[test]
    fn laurent_coefficients() {
        // 1/(1-t) over F_5: all coefficients 1.
        let f = rf(5, &[1], &[1, -1]);
        let exp = LaurentExpansion::new(&f);
        assert_eq!(exp.valuation(), 0);
        for n in 0..10 {
            assert_eq!(exp.coeff(n), 1);
        }
        assert_eq!(exp.coeff(-3), 0);
        // (t^2+1)/t over F_3: t^{-1} + t.
        let g = rf(3, &[1, 0, 1], &[0, 1]);
        let exp = LaurentExpansion::new(&g);
        assert_eq!(exp.valuation(), -1);
        let coeffs: Vec<u64> = (-1..5).map(|n| exp.coeff(n)).collect();
        assert_eq!(coeffs, vec![1, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn laurent_series_times_denominator_is_numerator() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in [2u64, 5, 13] {
            let field = fp(p);
            for _ in 0..20 {
                let f = random_function(&mut rng, field, 4);
                let exp = LaurentExpansion::new(&f);
                let num = f.numerator();
                let den = f.denominator();
                let bound = (num.degree() + den.degree() + 6) as i64;
                // Compare coefficients of den * series and num as Laurent
                // series up to the bound.
                for n in 0..bound {
                    let mut acc = 0u64;
                    for (k, &d) in den.coeffs().iter().enumerate() {
                        let c = exp.coeff(n - k as i64);
                        acc = field.add(acc, field.mul(d, c));
                    }
                    let expected = num.coeff(n as usize);
                    assert_eq!(acc, expected, "coefficient {n} of {f} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn canonical_lift_shapes() {
        let field = fp(5);
        let one = RationalFunction::one(field);
        let l = DetLift::mult_lift(&one, 0);
        assert!(l.out_basis().is_empty() && l.in_basis().is_empty());
        assert!(l.scalar().is_one());

        let t = RationalFunction::var(field);
        let l = DetLift::mult_lift(&t, 0);
        assert_eq!(l.out_basis(), &[0]);
        assert!(l.in_basis().is_empty());
        assert_eq!(l.index(), 1);

        let l = DetLift::mult_lift(&t.inv(), 0);
        assert!(l.out_basis().is_empty());
        assert_eq!(l.in_basis(), &[-1]);
        assert_eq!(l.index(), -1);

        let l = DetLift::mult_lift(&t, 2);
        assert_eq!(l.out_basis(), &[2]);
    }

    #[test]
    fn identity_lift_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let field = fp(7);
        let one = RationalFunction::one(field);
        for _ in 0..20 {
            let f = random_function(&mut rng, field, 3);
            let l = DetLift::mult_lift(&f, 0).with_scalar(field.elem(rng.gen_range(1..7)));
            let e = DetLift::mult_lift(&one, 0);
            let left = e.compose(&l).unwrap();
            let right = l.compose(&e).unwrap();
            assert_eq!(left.scalar(), l.scalar());
            assert_eq!(right.scalar(), l.scalar());
            assert_eq!(left.out_basis(), l.out_basis());
            assert_eq!(left.in_basis(), l.in_basis());
        }
    }

    #[test]
    fn compose_then_invert_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let field = fp(13);
        for _ in 0..20 {
            let f = random_function(&mut rng, field, 3);
            let l = DetLift::mult_lift(&f, rng.gen_range(-2..=2))
                .with_scalar(field.elem(rng.gen_range(1..13)));
            let product = l.compose(&l.invert()).unwrap();
            assert!(product.scalar().is_one());
            assert!(product.out_basis().is_empty());
            assert!(product.in_basis().is_empty());
        }
    }

    #[test]
    fn compose_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let field = fp(7);
        for _ in 0..15 {
            let l1 = DetLift::mult_lift(&random_function(&mut rng, field, 3), 0);
            let l2 = DetLift::mult_lift(&random_function(&mut rng, field, 3), 0);
            let l3 = DetLift::mult_lift(&random_function(&mut rng, field, 3), 0);
            let left = l1.compose(&l2).unwrap().compose(&l3).unwrap();
            let right = l1.compose(&l2.compose(&l3).unwrap()).unwrap();
            assert_eq!(left.scalar(), right.scalar());
        }
    }

    #[test]
    fn commutator_closed_forms() {
        let f7 = fp(7);
        let t = RationalFunction::var(f7);
        // {t, 3} = 3^{-1} = 5.
        let c3 = RationalFunction::constant_fn(f7, 3).unwrap();
        assert_eq!(laurent_commutator(&t, &c3, 0), f7.elem(5));
        // {2t, 3t} = 2/3 = 3.
        let f = rf(7, &[0, 2], &[1]);
        let g = rf(7, &[0, 3], &[1]);
        assert_eq!(laurent_commutator(&f, &g, 0), f7.elem(3));
        // {t^2, 3t} = 1/9 = 4.
        let t2 = t.pow(2);
        assert_eq!(laurent_commutator(&t2, &g, 0), f7.elem(4));
        // {t, 2/t} = 1/2 = 4.
        let h = rf(7, &[2], &[0, 1]);
        assert_eq!(laurent_commutator(&t, &h, 0), f7.elem(4));
        // {t, t} = 1 and {t, 1-t} = 1.
        assert!(laurent_commutator(&t, &t, 0).is_one());
        let steinberg = RationalFunction::one(f7).sub(&t).unwrap();
        assert!(laurent_commutator(&t, &steinberg, 0).is_one());
    }

    #[test]
    fn commutator_matches_local_symbol_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let origin = ClosedPoint::finite(Polynomial::var(fp(5))).unwrap();
        for _ in 0..25 {
            let f = random_function(&mut rng, fp(5), 4);
            let g = random_function(&mut rng, fp(5), 4);
            let engine = laurent_commutator(&f, &g, 0);
            let oracle = symbols::commutator_value(&f, &g, &origin).unwrap();
            assert_eq!(engine, oracle, "f = {f}, g = {g}");
        }
    }

    #[test]
    fn commutator_ignores_lift_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let field = fp(13);
        for _ in 0..15 {
            let f = random_function(&mut rng, field, 3);
            let g = random_function(&mut rng, field, 3);
            let lf = DetLift::mult_lift(&f, 0).with_scalar(field.elem(rng.gen_range(1..13)));
            let lg = DetLift::mult_lift(&g, 0).with_scalar(field.elem(rng.gen_range(1..13)));
            let fg = lf.compose(&lg).unwrap();
            let gf = lg.compose(&lf).unwrap();
            let scaled = fg.scalar().div(gf.scalar()).unwrap();
            assert_eq!(scaled, laurent_commutator(&f, &g, 0));
            // The triple-product route through invert agrees.
            let via_invert = fg.compose(&gf.invert()).unwrap();
            assert!(via_invert.out_basis().is_empty());
            assert_eq!(via_invert.scalar(), &scaled);
        }
    }

    #[test]
    fn commutator_is_bilinear_and_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let field = fp(11);
        for _ in 0..15 {
            let f1 = random_function(&mut rng, field, 3);
            let f2 = random_function(&mut rng, field, 3);
            let g = random_function(&mut rng, field, 3);
            let lhs = laurent_commutator(&f1.mul(&f2), &g, 0);
            let rhs = laurent_commutator(&f1, &g, 0).mul(&laurent_commutator(&f2, &g, 0));
            assert_eq!(lhs, rhs);
            let fwd = laurent_commutator(&f1, &g, 0);
            let bwd = laurent_commutator(&g, &f1, 0);
            assert!(fwd.mul(&bwd).is_one());
            assert!(laurent_commutator(&f1, &f1, 0).is_one());
        }
    }

    #[test]
    fn unit_operators_have_trivial_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        let field = fp(7);
        for _ in 0..20 {
            let f = random_function(&mut rng, field, 3);
            let g = random_function(&mut rng, field, 3);
            if LaurentExpansion::new(&f).valuation() == 0
                && LaurentExpansion::new(&g).valuation() == 0
            {
                assert!(laurent_commutator(&f, &g, 0).is_one());
            }
        }
    }

    #[test]
    fn shift_invariance() {
        // {t, 2} over F_5 at shift 2 is still 2^{-1} = 3.
        let f5 = fp(5);
        let t = RationalFunction::var(f5);
        let two = RationalFunction::constant_fn(f5, 2).unwrap();
        assert_eq!(laurent_commutator(&t, &two, 2), f5.elem(3));
        assert!(commensurability_shift_check(&t, &two, 2));

        let mut rng = ChaCha8Rng::seed_from_u64(39);
        for _ in 0..15 {
            let f = random_function(&mut rng, f5, 3);
            let g = random_function(&mut rng, f5, 3);
            for a in -3..=3 {
                assert!(commensurability_shift_check(&f, &g, a), "f = {f}, g = {g}, a = {a}");
            }
        }
    }

    #[test]
    fn complement_inverts_the_commutator() {
        let f7 = fp(7);
        let t = RationalFunction::var(f7);
        let c3 = RationalFunction::constant_fn(f7, 3).unwrap();
        // {t, 3} over V₋ is 3, inverse of the V₊ value 3^{-1}.
        assert_eq!(commutator_complement(&t, &c3), f7.elem(3));
        assert!(commutator_complement(&t, &t).is_one());

        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for p in [3u64, 7, 13] {
            let field = fp(p);
            for _ in 0..15 {
                let f = random_function(&mut rng, field, 3);
                let g = random_function(&mut rng, field, 3);
                let plus = laurent_commutator(&f, &g, 0);
                let minus = commutator_complement(&f, &g);
                assert!(plus.mul(&minus).is_one(), "f = {f}, g = {g} over F_{p}");
            }
        }
    }

    #[test]
    fn shift_pair_sign_identity() {
        // Over M = t^a k[[t]] and N = t^b k[[t]]: the product of the
        // commutators over M and N matches the product over M+N and M∩N up
        // to (-1)^beta, where beta sums the four cross products of
        // indices.  All four subspaces are commensurable, so the values
        // agree and beta must be even.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let field = fp(5);
        for _ in 0..15 {
            let f = random_function(&mut rng, field, 3);
            let g = random_function(&mut rng, field, 3);
            let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            let c_m = laurent_commutator(&f, &g, a);
            let c_n = laurent_commutator(&f, &g, b);
            let c_sum = laurent_commutator(&f, &g, a.min(b));
            let c_int = laurent_commutator(&f, &g, a.max(b));
            assert_eq!(c_m, c_n);
            assert_eq!(c_m, c_sum);
            assert_eq!(c_m, c_int);
            let idx = |h: &RationalFunction, shift: i64| DetLift::mult_lift(h, shift).index();
            let beta = idx(&g, a) * idx(&f, b)
                + idx(&g, b) * idx(&f, a)
                + idx(&g, a.min(b)) * idx(&f, a.max(b))
                + idx(&g, a.max(b)) * idx(&f, a.min(b));
            assert_eq!(beta.rem_euclid(2), 0);
            let sign = if beta % 2 == 0 { field.one() } else { field.elem(-1) };
            assert_eq!(c_m.mul(&c_n), sign.mul(&c_sum).mul(&c_int));
        }
    }

    #[test]
    fn golden_antidiagonal_example() {
        let f7 = fp(7);
        let report = glk_example(f7, 2, 3, 4).unwrap();
        assert_eq!(report.mu, f7.elem(6));
        // Composed scalars: a·b^{-1} = 3, lambda·mu^{-1} = 3 over V_1;
        // b·a^{-1} = 5, mu·lambda^{-1} = 5 over V_2.
        assert_eq!(report.v1_sigma_tau, f7.elem(3));
        assert_eq!(report.v1_tau_sigma, f7.elem(3));
        assert_eq!(report.v2_sigma_tau, f7.elem(5));
        assert_eq!(report.v2_tau_sigma, f7.elem(5));
        assert!(report.v1_commutator.is_one());
        assert!(report.v2_commutator.is_one());
        assert_eq!(report.index_sigma_v1, 0);
        assert_eq!(report.index_sigma_v2, 0);
        assert_eq!(report.index_tau_v1, 0);
        assert_eq!(report.index_tau_v2, 0);
    }

    #[test]
    fn golden_example_quotient_data() {
        // Over V_1 the out/in bases are e_1 (position 0) and e_2
        // (position 1) for both operators.
        let f7 = fp(7);
        let sigma = BlockOperator::new(f7, &[vec![0, 3], vec![2, 0]]).unwrap();
        let v1 = MonomialSubspace::from_set(crate::seqspace::EventuallyPeriodicSet::residue_class(
            0, 2,
        ));
        let l = DetLift::block_lift(&sigma, &v1).unwrap();
        assert_eq!(l.out_basis(), &[0]);
        assert_eq!(l.in_basis(), &[1]);
        assert!(l.scalar().is_one());
    }

    #[test]
    fn randomized_antidiagonal_commutators() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for p in [5u64, 7, 13] {
            let field = fp(p);
            for _ in 0..10 {
                let a = rng.gen_range(1..p) as i64;
                let b = rng.gen_range(1..p) as i64;
                let lambda = rng.gen_range(1..p) as i64;
                let report = glk_example(field, a, b, lambda).unwrap();
                assert!(report.v1_commutator.is_one());
                assert!(report.v2_commutator.is_one());
                assert_eq!(report.index_sigma_v1, 0);
                assert_eq!(report.index_tau_v2, 0);
            }
        }
    }

    #[test]
    fn block_commutator_over_deep_tail_agrees() {
        // With W = span{e_n : n > n0} invariant under both operators, the
        // commutator over V₊ equals the commutator over V₊ ∩ W — both are
        // 1 for finite blocks.
        let f5 = fp(5);
        let sigma = BlockOperator::new(f5, &[vec![0, 2], vec![3, 0]]).unwrap();
        let tau = BlockOperator::new(f5, &[vec![0, 4], vec![1, 0]]).unwrap();
        assert!(sigma.commutes_with(&tau));
        let v1 = MonomialSubspace::from_set(crate::seqspace::EventuallyPeriodicSet::residue_class(
            0, 2,
        ));
        let whole = sequence_commutator(&sigma, &tau, &v1).unwrap();
        // V₊ ∩ W: drop the block positions.
        let tail = MonomialSubspace::from_set(
            v1.index_set()
                .difference(&crate::seqspace::EventuallyPeriodicSet::finite(&[0, 1])),
        );
        let restricted = sequence_commutator(&sigma, &tau, &tail).unwrap();
        assert_eq!(whole, restricted);
        assert!(whole.is_one());
    }

    #[test]
    fn sequence_model_rejections() {
        let f5 = fp(5);
        let v1 = MonomialSubspace::from_set(crate::seqspace::EventuallyPeriodicSet::residue_class(
            0, 2,
        ));
        let shear = BlockOperator::new(f5, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            DetLift::block_lift(&shear, &v1),
            Err(Error::UnsupportedOperator(_))
        ));
        let sigma = BlockOperator::new(f5, &[vec![0, 2], vec![3, 0]]).unwrap();
        let diag = BlockOperator::new(f5, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            sequence_commutator(&sigma, &diag, &v1),
            Err(Error::NotCommuting)
        ));
    }

    #[test]
    fn model_and_base_mismatches_are_rejected() {
        let f5 = fp(5);
        let t = RationalFunction::var(f5);
        let l0 = DetLift::mult_lift(&t, 0);
        let l1 = DetLift::mult_lift(&t, 1);
        assert!(l0.compose(&l1).is_err());
        let sigma = BlockOperator::new(f5, &[vec![0, 2], vec![3, 0]]).unwrap();
        let v1 = MonomialSubspace::from_set(crate::seqspace::EventuallyPeriodicSet::residue_class(
            0, 2,
        ));
        let lb = DetLift::block_lift(&sigma, &v1).unwrap();
        assert!(l0.compose(&lb).is_err());
    }
}
