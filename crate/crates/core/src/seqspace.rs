//! The sequence space V = span{e_1, e_2, ...} over a prime field: decidable
//! subspaces spanned by eventually periodic sets of basis vectors,
//! commensurability and relative dimensions, finite-block automorphisms,
//! their indices, and reciprocity-admissible families.
//!
//! Internally every index set lives on 0-based positions; basis vector e_n
//! sits at position n - 1.  All public set data (JSON, accessors) uses the
//! 0-based positions.

use crate::error::{Error, Result};
use crate::ff::PrimeField;
use crate::linalg;
use std::collections::BTreeSet;
use std::fmt;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A subset of the non-negative integers whose membership is periodic from
/// some threshold on: below `threshold` the finite `head` decides, at and
/// above it `n mod period in residues` decides.
///
/// Values are kept canonical — minimal period first, then minimal
/// threshold — so structural equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventuallyPeriodicSet {
    threshold: usize,
    head: BTreeSet<usize>,
    period: usize,
    residues: BTreeSet<usize>,
}

impl EventuallyPeriodicSet {
    pub fn new(
        threshold: usize,
        head: &[usize],
        period: usize,
        residues: &[usize],
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::BadInput("period must be positive".into()));
        }
        if let Some(&bad) = head.iter().find(|&&h| h >= threshold) {
            return Err(Error::BadInput(format!(
                "head element {bad} is not below the threshold {threshold}"
            )));
        }
        if let Some(&bad) = residues.iter().find(|&&r| r >= period) {
            return Err(Error::BadInput(format!(
                "residue {bad} is not below the period {period}"
            )));
        }
        Ok(Self::canonical(
            threshold,
            head.iter().copied().collect(),
            period,
            residues.iter().copied().collect(),
        ))
    }

    fn canonical(
        mut threshold: usize,
        mut head: BTreeSet<usize>,
        mut period: usize,
        mut residues: BTreeSet<usize>,
    ) -> Self {
        for d in 1..=period {
            if period % d != 0 {
                continue;
            }
            let invariant = (0..period)
                .all(|r| residues.contains(&r) == residues.contains(&((r + d) % period)));
            if invariant {
                residues = residues.iter().map(|r| r % d).collect();
                period = d;
                break;
            }
        }
        while threshold > 0 {
            let last = threshold - 1;
            if head.contains(&last) == residues.contains(&(last % period)) {
                head.remove(&last);
                threshold = last;
            } else {
                break;
            }
        }
        Self {
            threshold,
            head,
            period,
            residues,
        }
    }

    pub fn empty() -> Self {
        Self::canonical(0, BTreeSet::new(), 1, BTreeSet::new())
    }

    /// All of 0, 1, 2, ...
    pub fn full() -> Self {
        Self::canonical(0, BTreeSet::new(), 1, [0].into_iter().collect())
    }

    pub fn finite(elements: &[usize]) -> Self {
        let head: BTreeSet<usize> = elements.iter().copied().collect();
        let threshold = head.iter().next_back().map_or(0, |&m| m + 1);
        Self::canonical(threshold, head, 1, BTreeSet::new())
    }

    /// {n : n mod modulus = residue mod modulus}; modulus must be positive.
    pub fn residue_class(residue: usize, modulus: usize) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self::canonical(
            0,
            BTreeSet::new(),
            modulus,
            [residue % modulus].into_iter().collect(),
        )
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn head(&self) -> &BTreeSet<usize> {
        &self.head
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.threshold {
            self.head.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_cofinite(&self) -> bool {
        self.residues.len() == self.period
    }

    /// The elements, provided the set is finite.
    pub fn finite_elements(&self) -> Option<&BTreeSet<usize>> {
        if self.is_finite() {
            Some(&self.head)
        } else {
            None
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let period = lcm(self.period, other.period);
        let threshold = self.threshold.max(other.threshold);
        let head = (0..threshold)
            .filter(|&n| f(self.contains(n), other.contains(n)))
            .collect();
        let residues = (0..period)
            .filter(|&r| {
                let n = threshold + (period + r - threshold % period) % period;
                f(self.contains(n), other.contains(n))
            })
            .collect();
        Self::canonical(threshold, head, period, residues)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        let head = (0..self.threshold)
            .filter(|n| !self.head.contains(n))
            .collect();
        let residues = (0..self.period)
            .filter(|r| !self.residues.contains(r))
            .collect();
        Self::canonical(self.threshold, head, self.period, residues)
    }

    /// The image under n -> n + k (drops nothing; positions below k become
    /// non-members).
    pub fn shift_up(&self, k: usize) -> Self {
        let head = self.head.iter().map(|&h| h + k).collect();
        let residues = self.residues.iter().map(|&r| (r + k) % self.period).collect();
        Self::canonical(self.threshold + k, head, self.period, residues)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N0": self.threshold,
            "head": self.head.iter().copied().collect::<Vec<_>>(),
            "period": self.period,
            "residues": self.residues.iter().copied().collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let field = |key: &str| -> Result<&serde_json::Value> {
            value
                .get(key)
                .ok_or_else(|| Error::BadInput(format!("missing key \"{key}\" in set description")))
        };
        let as_usize = |v: &serde_json::Value, what: &str| -> Result<usize> {
            v.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::BadInput(format!("{what} must be a non-negative integer")))
        };
        let as_list = |v: &serde_json::Value, what: &str| -> Result<Vec<usize>> {
            v.as_array()
                .ok_or_else(|| Error::BadInput(format!("{what} must be a list")))?
                .iter()
                .map(|x| as_usize(x, what))
                .collect()
        };
        let threshold = as_usize(field("N0")?, "N0")?;
        let period = as_usize(field("period")?, "period")?;
        let head = as_list(field("head")?, "head")?;
        let residues = as_list(field("residues")?, "residues")?;
        Self::new(threshold, &head, period, &residues)
    }
}

impl fmt::Display for EventuallyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |items: &BTreeSet<usize>| {
            items
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.is_finite() {
            write!(f, "{{{}}}", list(&self.head))
        } else if self.threshold == 0 {
            write!(f, "{{n : n mod {} in {{{}}}}}", self.period, list(&self.residues))
        } else if self.head.is_empty() {
            write!(
                f,
                "{{n >= {} : n mod {} in {{{}}}}}",
                self.threshold,
                self.period,
                list(&self.residues)
            )
        } else {
            write!(
                f,
                "{{{}}} + {{n >= {} : n mod {} in {{{}}}}}",
                list(&self.head),
                self.threshold,
                self.period,
                list(&self.residues)
            )
        }
    }
}

/// The subspace span{e_n : n - 1 in index_set} of V.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialSubspace {
    index_set: EventuallyPeriodicSet,
}

impl MonomialSubspace {
    pub fn from_set(index_set: EventuallyPeriodicSet) -> Self {
        Self { index_set }
    }

    pub fn index_set(&self) -> &EventuallyPeriodicSet {
        &self.index_set
    }

    /// Membership of the basis vector e_n (numbered from 1).
    pub fn contains_basis(&self, n: usize) -> bool {
        assert!(n >= 1, "basis vectors are numbered from 1");
        self.index_set.contains(n - 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.index_set.to_json()
    }
}

impl fmt::Display for MonomialSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{e_n : n in {}}}", self.index_set.shift_up(1))
    }
}

/// Two subspaces are commensurable when their sum is finite-dimensional
/// over their intersection; for monomial subspaces that is exactly a finite
/// symmetric difference of index sets.
pub fn commensurable(a: &MonomialSubspace, b: &MonomialSubspace) -> bool {
    a.index_set.difference(&b.index_set).is_finite()
        && b.index_set.difference(&a.index_set).is_finite()
}

/// (dim A/(A ∩ B), dim B/(A ∩ B)) for commensurable A, B, counted from the
/// two halves of the symmetric difference.
pub fn relative_dims(a: &MonomialSubspace, b: &MonomialSubspace) -> Result<(usize, usize)> {
    let a_only = a.index_set.difference(&b.index_set);
    let b_only = b.index_set.difference(&a.index_set);
    match (a_only.finite_elements(), b_only.finite_elements()) {
        (Some(x), Some(y)) => Ok((x.len(), y.len())),
        _ => Err(Error::NotCommensurable),
    }
}

/// An automorphism of V acting by an invertible matrix on e_1, ..., e_{n0}
/// and fixing every later basis vector.  Trailing identity rows/columns are
/// trimmed so equal operators compare equal regardless of declared size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOperator {
    field: PrimeField,
    matrix: Vec<Vec<u64>>,
}

impl BlockOperator {
    /// Builds the operator from matrix rows; `matrix[i][j]` is the
    /// coefficient of e_{i+1} in the image of e_{j+1}.
    pub fn new(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadInput("block matrix must be square".into()));
        }
        let matrix: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.reduce(x)).collect())
            .collect();
        if linalg::det(field, &matrix) == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::trimmed(field, matrix))
    }

    fn trimmed(field: PrimeField, mut matrix: Vec<Vec<u64>>) -> Self {
        while let Some(n) = matrix.len().checked_sub(1) {
            let last_col_trivial = (0..=n).all(|i| matrix[i][n] == u64::from(i == n));
            let last_row_trivial = (0..=n).all(|j| matrix[n][j] == u64::from(j == n));
            if last_col_trivial && last_row_trivial {
                matrix.pop();
                for row in &mut matrix {
                    row.pop();
                }
            } else {
                break;
            }
        }
        Self { field, matrix }
    }

    pub fn identity(field: PrimeField) -> Self {
        Self {
            field,
            matrix: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Size of the (trimmed) block.
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Matrix entry with the identity extension beyond the block.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        let n = self.matrix.len();
        if i < n && j < n {
            self.matrix[i][j]
        } else {
            u64::from(i == j)
        }
    }

    /// True when every row and column carries exactly one nonzero entry.
    pub fn is_monomial(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| self.matrix[i].iter().filter(|&&x| x != 0).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| self.matrix[i][j] != 0).count() == 1)
    }

    fn padded(&self, n: usize) -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// self ∘ other (other applied first).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.field.order(),
            other.field.order(),
            "operands live over different fields"
        );
        let n = self.size().max(other.size());
        let product = linalg::mat_mul(self.field, &self.padded(n), &other.padded(n));
        Self::trimmed(self.field, product)
    }

    pub fn inverse(&self) -> Self {
        let inv = linalg::invert(self.field, &self.matrix).expect("block matrix is invertible");
        Self::trimmed(self.field, inv)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.compose(other) == other.compose(self)
    }
}

impl fmt::Display for BlockOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matrix.is_empty() {
            return write!(f, "identity");
        }
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "[[{}]]", rows.join("],["))
    }
}

/// dim V₊/(V₊ ∩ σV₊) and dim σV₊/(V₊ ∩ σV₊), by exact rank computations
/// inside the block.  Outside the block σ is the identity, so only the
/// block coordinates of V₊ matter.
pub fn quotient_dims(sigma: &BlockOperator, vplus: &MonomialSubspace) -> (usize, usize) {
    let n = sigma.size();
    let field = sigma.field();
    let block: Vec<usize> = (0..n).filter(|&pos| vplus.index_set().contains(pos)).collect();
    let c = block.len();
    let indicator_rows: Vec<Vec<u64>> = block
        .iter()
        .map(|&s| (0..n).map(|i| u64::from(i == s)).collect())
        .collect();
    let image_rows: Vec<Vec<u64>> = block
        .iter()
        .map(|&s| (0..n).map(|i| sigma.entry(i, s)).collect())
        .collect();
    let rank_image = linalg::rank(field, &image_rows);
    let mut joint = indicator_rows;
    joint.extend(image_rows);
    let rank_sum = linalg::rank(field, &joint);
    let dim_intersection = c + rank_image - rank_sum;
    (c - dim_intersection, rank_image - dim_intersection)
}

/// The index of σ over V₊: dim V₊/(V₊ ∩ σV₊) − dim σV₊/(V₊ ∩ σV₊).
pub fn index(sigma: &BlockOperator, vplus: &MonomialSubspace) -> i64 {
    let (q1, q2) = quotient_dims(sigma, vplus);
    q1 as i64 - q2 as i64
}

/// How a family of subspaces is described.
#[derive(Clone, Debug)]
pub enum FamilyRule {
    /// Row i is the residue class (i - 1) mod `modulus` of positions, i.e.
    /// V_i = span{e_n : n ≡ i mod modulus}.
    Linear { modulus: usize },
    /// Index sets given directly.
    Explicit(Vec<EventuallyPeriodicSet>),
}

fn finite_codim_union(sets: &[EventuallyPeriodicSet]) -> bool {
    let union = sets
        .iter()
        .fold(EventuallyPeriodicSet::empty(), |acc, s| acc.union(s));
    EventuallyPeriodicSet::full().difference(&union).is_finite()
}

/// Builds the first r subspaces of the family and validates both
/// admissibility conditions: the sum is commensurable with V, and each
/// member meets the span of the others in a finite-dimensional space.
pub fn admissible_family(rule: &FamilyRule, r: usize) -> Result<Vec<MonomialSubspace>> {
    if r < 2 {
        return Err(Error::BadInput("a family needs at least two subspaces".into()));
    }
    let sets: Vec<EventuallyPeriodicSet> = match rule {
        FamilyRule::Linear { modulus } => {
            if *modulus == 0 {
                return Err(Error::BadInput("modulus must be positive".into()));
            }
            (1..=r)
                .map(|i| EventuallyPeriodicSet::residue_class((i - 1) % modulus, *modulus))
                .collect()
        }
        FamilyRule::Explicit(list) => {
            if list.len() != r {
                return Err(Error::BadInput(format!(
                    "family description lists {} subspaces but r = {}",
                    list.len(),
                    r
                )));
            }
            list.clone()
        }
    };
    if !finite_codim_union(&sets) {
        return Err(Error::InadmissibleFamily(
            "the subspaces miss infinitely many basis vectors".into(),
        ));
    }
    for i in 0..r {
        let others = sets
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(EventuallyPeriodicSet::empty(), |acc, (_, s)| acc.union(s));
        if !sets[i].intersection(&others).is_finite() {
            return Err(Error::InadmissibleFamily(format!(
                "subspace {} meets the span of the others in infinitely many basis vectors",
                i + 1
            )));
        }
    }
    Ok(sets.into_iter().map(MonomialSubspace::from_set).collect())
}

/// Checks index additivity over the parts: index(σ, ΣVᵢ) = Σ index(σ, Vᵢ),
/// and — when the parts span a finite-codimension subspace, so they form an
/// admissible family — that the index sum vanishes.  The parts must be
/// pairwise almost-disjoint.
pub fn index_additivity_check(sigma: &BlockOperator, parts: &[MonomialSubspace]) -> Result<bool> {
    if parts.is_empty() {
        return Err(Error::BadInput("no subspaces given".into()));
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !parts[i]
                .index_set()
                .intersection(parts[j].index_set())
                .is_finite()
            {
                return Err(Error::InadmissibleFamily(format!(
                    "subspaces {} and {} overlap in infinitely many basis vectors",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let union = parts
        .iter()
        .fold(EventuallyPeriodicSet::empty(), |acc, p| {
            acc.union(p.index_set())
        });
    let total = index(sigma, &MonomialSubspace::from_set(union.clone()));
    let part_sum: i64 = parts.iter().map(|p| index(sigma, p)).sum();
    let mut ok = total == part_sum;
    if EventuallyPeriodicSet::full().difference(&union).is_finite() {
        ok = ok && part_sum == 0;
    }
    Ok(ok)
}
