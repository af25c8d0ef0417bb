//! Complete factorization over F_p: squarefree decomposition (with the
//! characteristic-p derivative-zero case), distinct-degree splitting by
//! Frobenius powers, and randomized equal-degree splitting with a seeded
//! generator so runs are reproducible.

use super::Polynomial;
use crate::error::{Error, Result};
use crate::ff::PrimeField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used by [`factor`]; fixed so output is deterministic run to run.
pub const DEFAULT_FACTOR_SEED: u64 = 12345;

/// Factors f as c * prod(g_i^{m_i}) with the g_i monic irreducible and
/// pairwise distinct, sorted by degree then by coefficients from the highest
/// degree down.  Errors on the zero polynomial.
pub fn factor(f: &Polynomial) -> Result<(u64, Vec<(Polynomial, usize)>)> {
    factor_seeded(f, DEFAULT_FACTOR_SEED)
}

/// [`factor`] with an explicit seed for the equal-degree splitting step.
/// The factor set is identical for every seed; only internal choices differ.
pub fn factor_seeded(f: &Polynomial, seed: u64) -> Result<(u64, Vec<(Polynomial, usize)>)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (lc, monic) = f.make_monic();
    if monic.degree() == 0 {
        return Ok((lc, Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for (d, product) in distinct_degree(&part) {
            for g in equal_degree(product, d, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp_order(&b.0));
    Ok((lc, out))
}

/// Splits a monic f into pairwise-coprime squarefree parts with their
/// multiplicities.  In characteristic p a vanishing derivative means
/// f = g(t^p) = h^p, handled by exact p-th root extraction.
fn squarefree_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let field = f.field();
    let p = field.order() as usize;
    if f.degree() == 0 {
        return Vec::new();
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        return squarefree_decomposition(&pth_root(f))
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&deriv);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree() > 0 {
            out.push((z, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if c.degree() > 0 {
        // What remains collects the factors whose multiplicity is divisible
        // by p; it is again a p-th power.
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Exact p-th root of f = g(t^p).  Coefficient p-th roots are trivial over
/// F_p because the Frobenius is the identity there.
fn pth_root(f: &Polynomial) -> Polynomial {
    let p = f.field().order() as usize;
    let coeffs: Vec<u64> = f.coeffs().iter().step_by(p).copied().collect();
    debug_assert!(f
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, &c)| c == 0 || i % p == 0));
    Polynomial::from_residues(f.field(), coeffs)
}

/// Distinct-degree splitting of a monic squarefree f: returns (d, product of
/// all irreducible factors of degree d) for each degree that occurs, in
/// increasing order of d.
fn distinct_degree(f: &Polynomial) -> Vec<(usize, Polynomial)> {
    let field = f.field();
    let p = field.order();
    let x = Polynomial::var(field);
    let mut g = f.clone();
    let mut h = x.rem(&g).expect("nonzero modulus");
    let mut d = 0;
    let mut out = Vec::new();
    while g.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &g).expect("nonzero modulus");
        let fd = h.sub(&x).gcd(&g);
        if fd.degree() > 0 {
            g = g.div_exact(&fd);
            out.push((d, fd));
            h = h.rem(&g).expect("nonzero modulus");
        }
    }
    if g.degree() > 0 {
        out.push((g.degree(), g));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting: f is monic squarefree, a
/// product of irreducibles all of degree d.
fn equal_degree(f: Polynomial, d: usize, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    if f.degree() == d {
        return vec![f];
    }
    let g = loop {
        if let Some(g) = try_split(&f, d, rng) {
            break g;
        }
    };
    let h = f.div_exact(&g);
    let mut out = equal_degree(g, d, rng);
    out.extend(equal_degree(h, d, rng));
    out
}

fn try_split(f: &Polynomial, d: usize, rng: &mut ChaCha8Rng) -> Option<Polynomial> {
    let field = f.field();
    let p = field.order();
    let n = f.degree();
    let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..p) as i64).collect();
    let a = Polynomial::new(field, &coeffs);
    let shared = a.gcd(f);
    if shared.degree() > 0 && shared.degree() < n {
        return Some(shared);
    }
    let candidate = if p == 2 {
        // Trace map a + a^2 + ... + a^(2^(d-1)) modulo f.
        let mut term = a.rem(f).expect("nonzero modulus");
        let mut acc = term.clone();
        for _ in 1..d {
            term = term.mul(&term).rem(f).expect("nonzero modulus");
            acc = acc.add(&term);
        }
        acc
    } else {
        // a^((p^d - 1)/2) - 1 modulo f, via the factorization
        // p^d - 1 = (p - 1)(1 + p + ... + p^(d-1)) so exponents stay in u64:
        // the second factor is applied as the ladder r -> r^p * a.
        let mut r = a.rem(f).expect("nonzero modulus");
        for _ in 1..d {
            r = r.pow_mod(p, f).expect("nonzero modulus").mul(&a).rem(f).expect("nonzero modulus");
        }
        let b = r.pow_mod((p - 1) / 2, f).expect("nonzero modulus");
        b.sub(&Polynomial::one(field))
    };
    let g = candidate.gcd(f);
    if g.degree() > 0 && g.degree() < n {
        Some(g)
    } else {
        None
    }
}

/// Irreducibility over F_p: f must be nonzero of degree >= 1 and its monic
/// part must have no factor of smaller degree.  Uses the Frobenius
/// criterion: t^(p^d) = t mod f, and gcd(t^(p^(d/l)) - t, f) = 1 for every
/// prime l dividing d.
pub fn is_irreducible(f: &Polynomial) -> bool {
    if f.is_zero() || f.degree() == 0 {
        return false;
    }
    let (_, f) = f.make_monic();
    let d = f.degree();
    if d == 1 {
        return true;
    }
    let field = f.field();
    let p = field.order();
    let x = Polynomial::var(field);
    // frob[i] = t^(p^i) mod f
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(x.rem(&f).expect("nonzero modulus"));
    for i in 1..=d {
        let next = frob[i - 1].pow_mod(p, &f).expect("nonzero modulus");
        frob.push(next);
    }
    if frob[d] != x.rem(&f).expect("nonzero modulus") {
        return false;
    }
    for l in prime_divisors(d) {
        let g = frob[d / l].sub(&x).gcd(&f);
        if g.degree() != 0 {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The first monic irreducible of degree d in the deterministic scan order
/// t^d, t^d + 1, ..., i.e. non-leading coefficients counted upward with the
/// constant term varying fastest.
pub fn find_irreducible(field: PrimeField, d: usize) -> Polynomial {
    assert!(d >= 1, "degree must be positive");
    let p = field.order() as u128;
    let mut k: u128 = 0;
    loop {
        let mut coeffs = vec![0i64; d + 1];
        let mut rest = k;
        for c in coeffs.iter_mut().take(d) {
            *c = (rest % p) as i64;
            rest /= p;
        }
        assert!(rest == 0, "no irreducible of degree {d} found");
        coeffs[d] = 1;
        let candidate = Polynomial::new(field, &coeffs);
        if is_irreducible(&candidate) {
            return candidate;
        }
        k += 1;
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
    fn frozen_factorizations() {
        // t^2 + 1 is irreducible over F_3.
        let (c, fs) = factor(&poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(c, 1);
        assert_eq!(fs, vec![(poly(3, &[1, 0, 1]), 1)]);

        // t^2 - 1 = (t+1)(t+2) over F_3.
        let (c, fs) = factor(&poly(3, &[-1, 0, 1])).unwrap();
        assert_eq!(c, 1);
        assert_eq!(fs, vec![(poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 1)]);

        // t^2 + 1 = (t+2)(t+3) over F_5.
        let (c, fs) = factor(&poly(5, &[1, 0, 1])).unwrap();
        assert_eq!(c, 1);
        assert_eq!(fs, vec![(poly(5, &[2, 1]), 1), (poly(5, &[3, 1]), 1)]);
    }

    #[test]
    fn leading_unit_is_split_off() {
        // 3*(t+1)^2 over F_5.
        let f = poly(5, &[1, 1]);
        let g = f.mul(&f).scale(3);
        let (c, fs) = factor(&g).unwrap();
        assert_eq!(c, 3);
        assert_eq!(fs, vec![(poly(5, &[1, 1]), 2)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(factor(&Polynomial::zero(fp(5))), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn derivative_zero_cases() {
        // t^3 - 1 = (t + 2)^3 over F_3: derivative vanishes.
        let (c, fs) = factor(&poly(3, &[-1, 0, 0, 1])).unwrap();
        assert_eq!(c, 1);
        assert_eq!(fs, vec![(poly(3, &[2, 1]), 3)]);
        // t^4 + t^2 + 1 = (t^2 + t + 1)^2 over F_2.
        let (c, fs) = factor(&poly(2, &[1, 0, 1, 0, 1])).unwrap();
        assert_eq!(c, 1);
        assert_eq!(fs, vec![(poly(2, &[1, 1, 1]), 2)]);
    }

    #[test]
    fn find_irreducible_scan_order() {
        // F_3, degree 2: the scan t^2, t^2+1 stops at t^2+1.
        assert_eq!(find_irreducible(fp(3), 2), poly(3, &[1, 0, 1]));
        // F_2, degree 2: t^2 + t + 1 is the only irreducible quadratic.
        assert_eq!(find_irreducible(fp(2), 2), poly(2, &[1, 1, 1]));
        // F_2, degree 1: t itself.
        assert_eq!(find_irreducible(fp(2), 1), poly(2, &[0, 1]));
        assert_eq!(find_irreducible(fp(2), 3), poly(2, &[1, 1, 0, 1]));
    }

    #[test]
    fn seed_does_not_change_result() {
        let f = poly(13, &[5, 0, 3, 1, 0, 0, 1, 2]);
        let base = factor_seeded(&f, 1).unwrap();
        for seed in 2..8 {
            assert_eq!(factor_seeded(&f, seed).unwrap(), base);
        }
    }

    /// Independent oracle for degree <= 3: root scanning over F_p decides
    /// everything (a cubic or quadratic is irreducible iff it has no root).
    fn factor_by_roots(f: &Polynomial) -> (u64, Vec<(Polynomial, usize)>) {
        let field = f.field();
        let (lc, mut rest) = f.make_monic();
        let mut out: Vec<(Polynomial, usize)> = Vec::new();
        let push = |g: Polynomial, out: &mut Vec<(Polynomial, usize)>| {
            for item in out.iter_mut() {
                if item.0 == g {
                    item.1 += 1;
                    return;
                }
            }
            out.push((g, 1));
        };
        'outer: while rest.degree() >= 1 {
            for a in 0..field.order() {
                if rest.eval_raw(a) == 0 {
                    let root_factor = Polynomial::new(field, &[-(a as i64), 1]);
                    rest = rest.div_exact(&root_factor);
                    push(root_factor, &mut out);
                    continue 'outer;
                }
            }
            // No roots: degree 2 or 3 means irreducible.
            assert!(rest.degree() <= 3);
            push(rest.clone(), &mut out);
            break;
        }
        out.sort_by(|a, b| a.0.cmp_order(&b.0));
        (lc, out)
    }

    #[test]
    fn pipeline_matches_root_scan_up_to_degree_three() {
        for &p in &[2u64, 3, 5, 7] {
            let field = fp(p);
            // Every polynomial of degree 1..=3, exhaustively for p <= 3,
            // sampled for larger p.
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let total: u64 = if p <= 3 { p.pow(4) } else { 400 };
            for i in 0..total {
                let coeffs: Vec<i64> = if p <= 3 {
                    let mut c = i;
                    (0..4)
                        .map(|_| {
                            let digit = (c % p) as i64;
                            c /= p;
                            digit
                        })
                        .collect()
                } else {
                    (0..4).map(|_| rng.gen_range(0..p) as i64).collect()
                };
                let f = Polynomial::new(field, &coeffs);
                if f.is_zero() || f.degree() == 0 {
                    continue;
                }
                assert_eq!(factor(&f).unwrap(), factor_by_roots(&f), "p={p} f={f}");
            }
        }
    }

    #[test]
    fn round_trip_and_coprimality_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for &p in &[2u64, 3, 5, 7, 13] {
            let field = fp(p);
            for _ in 0..60 {
                let deg = rng.gen_range(1..=9);
                let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(0..p) as i64).collect();
                if coeffs.iter().all(|&c| c == 0) {
                    coeffs[deg] = 1;
                }
                let f = Polynomial::new(field, &coeffs);
                if f.is_zero() {
                    continue;
                }
                let (c, fs) = factor(&f).unwrap();
                let mut product = Polynomial::constant(field, c as i64);
                for (g, m) in &fs {
                    assert_eq!(g.leading_coeff(), 1);
                    assert!(is_irreducible(g));
                    for _ in 0..*m {
                        product = product.mul(g);
                    }
                }
                assert_eq!(product, f);
                for i in 0..fs.len() {
                    for j in i + 1..fs.len() {
                        assert_eq!(fs[i].0.gcd(&fs[j].0).degree(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn irreducibility_matches_factor_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for &p in &[2u64, 3, 7] {
            let field = fp(p);
            for _ in 0..150 {
                let deg = rng.gen_range(1..=6);
                let coeffs: Vec<i64> = (0..deg)
                    .map(|_| rng.gen_range(0..p) as i64)
                    .chain(std::iter::once(1))
                    .collect();
                let f = Polynomial::new(field, &coeffs);
                let via_factor = {
                    let (_, fs) = factor(&f).unwrap();
                    fs.len() == 1 && fs[0].1 == 1
                };
                assert_eq!(is_irreducible(&f), via_factor, "p={p} f={f}");
            }
        }
    }
}
