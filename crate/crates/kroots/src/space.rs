//! The squarefree monomial space V_{n,k} with its lexicographic order.
//!
//! V_{n,k} is spanned by the monomials x_I for k-subsets I of {1..n}.
//! Monomials are ordered by x_I < x_J iff min(I delta J) lies in I, which
//! for strictly increasing index sequences is plain lexicographic
//! comparison. A nonzero vector is positive when the coefficient of the
//! lexicographically smallest monomial in its support is positive; this
//! induces a total order on the whole space.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;
pub type Int = BigInt;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Renders a rational in lowest terms as `p/q` (positive q), or just `p`
/// for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(n: u64) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// Dimensions of the ambient space: n variables, degree k.
///
/// The public constructor enforces n >= 2 and 1 <= k <= n/2. The degenerate
/// degree-zero space V_{n,0} (rank 1, spanned by the empty monomial) shows
/// up as the codomain of the differential at k = 1 and as the home of empty
/// products; it is only reachable through [`SpaceParams::degree_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceParams {
    n: u32,
    k: u32,
}

impl SpaceParams {
    pub fn new(n: u32, k: u32) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::params(format!("n = {n}, but n >= 2 is required")));
        }
        if k == 0 {
            return Err(Error::params("k = 0, but k >= 1 is required"));
        }
        if 2 * k > n {
            return Err(Error::params(format!(
                "k = {k} exceeds n/2 for n = {n}; 2k <= n is required"
            )));
        }
        Ok(SpaceParams { n, k })
    }

    /// The rank-1 companion space V_{n,0}.
    pub fn degree_zero(n: u32) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::params(format!("n = {n}, but n >= 2 is required")));
        }
        Ok(SpaceParams { n, k: 0 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Parameters one degree down, the codomain of the differential.
    pub fn lower(&self) -> Option<SpaceParams> {
        if self.k == 0 {
            None
        } else {
            Some(SpaceParams {
                n: self.n,
                k: self.k - 1,
            })
        }
    }

    /// dim V_{n,k} = C(n,k).
    pub fn dim(&self) -> usize {
        binomial(self.n as u64, self.k as u64) as usize
    }
}

/// A squarefree monomial, stored as a strictly increasing index sequence.
///
/// The derived `Ord` compares index sequences lexicographically, which for
/// equal degrees coincides with the monomial order x_I < x_J iff
/// min(I delta J) is in I.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIndex {
    indices: Vec<u32>,
}

impl MonomialIndex {
    pub fn new(params: &SpaceParams, indices: Vec<u32>) -> Result<Self, Error> {
        if indices.len() != params.k() as usize {
            return Err(Error::params(format!(
                "monomial has degree {}, expected {}",
                indices.len(),
                params.k()
            )));
        }
        for pair in indices.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::params(
                    "monomial indices must be strictly increasing",
                ));
            }
        }
        if let Some(&last) = indices.last() {
            if indices[0] < 1 || last > params.n() {
                return Err(Error::params(format!(
                    "monomial index out of range 1..={}",
                    params.n()
                )));
            }
        }
        Ok(MonomialIndex { indices })
    }

    /// Internal constructor; caller guarantees a strictly increasing,
    /// in-range sequence.
    pub(crate) fn from_sorted(indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|p| p[0] < p[1]));
        MonomialIndex { indices }
    }

    /// The empty monomial spanning V_{n,0}.
    pub fn unit() -> Self {
        MonomialIndex { indices: vec![] }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Serialized name: `x1*x3*x4`, or `1` for the empty monomial.
    pub fn name(&self) -> String {
        if self.indices.is_empty() {
            "1".to_string()
        } else {
            self.indices
                .iter()
                .map(|i| format!("x{i}"))
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Image under an index map; the images must stay distinct.
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> MonomialIndex {
        let mut v: Vec<u32> = self.indices.iter().map(|&i| f(i)).collect();
        v.sort_unstable();
        debug_assert!(v.windows(2).all(|p| p[0] < p[1]), "relabel collided");
        MonomialIndex { indices: v }
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Monomial order comparison. Errors when the degrees differ, which is the
/// only parameter mismatch observable from the indices alone.
pub fn lex_compare(a: &MonomialIndex, b: &MonomialIndex) -> Result<Ordering, Error> {
    if a.degree() != b.degree() {
        return Err(Error::params(format!(
            "monomials of different degree ({} vs {}) are incomparable",
            a.degree(),
            b.degree()
        )));
    }
    Ok(a.cmp(b))
}

/// All degree-k monomials in ascending lexicographic order.
pub fn enumerate_monomials(params: &SpaceParams) -> Vec<MonomialIndex> {
    let k = params.k() as usize;
    if k == 0 {
        return vec![MonomialIndex::unit()];
    }
    // Combinations of an ascending range are emitted in lexicographic order.
    use itertools::Itertools;
    (1..=params.n())
        .combinations(k)
        .map(MonomialIndex::from_sorted)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorSign {
    Positive,
    Negative,
    Zero,
}

/// A vector of V_{n,k}: sparse rational coefficients on squarefree
/// monomials. Zero coefficients are never stored, and the BTreeMap keeps
/// keys in monomial order, so the leading (lexicographically smallest)
/// support monomial is the first entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVector {
    params: SpaceParams,
    entries: BTreeMap<MonomialIndex, Rat>,
}

impl SparseVector {
    pub fn zero(params: SpaceParams) -> Self {
        SparseVector {
            params,
            entries: BTreeMap::new(),
        }
    }

    pub fn monomial(params: SpaceParams, index: MonomialIndex) -> Self {
        let mut v = SparseVector::zero(params);
        v.add_term(index, Rat::one());
        v
    }

    pub fn from_entries(
        params: SpaceParams,
        entries: impl IntoIterator<Item = (MonomialIndex, Rat)>,
    ) -> Result<Self, Error> {
        let mut v = SparseVector::zero(params);
        for (index, coeff) in entries {
            // Re-validate: external callers may hand us arbitrary keys.
            let index = MonomialIndex::new(&params, index.indices)?;
            v.add_term(index, coeff);
        }
        Ok(v)
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MonomialIndex, &Rat)> {
        self.entries.iter()
    }

    pub fn coeff(&self, index: &MonomialIndex) -> Rat {
        self.entries.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `coeff * x_index`, pruning the entry if it cancels to zero.
    pub fn add_term(&mut self, index: MonomialIndex, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(index) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// self += c * other. Panics on mismatched params: vectors from
    /// different spaces never meet in correct code.
    pub fn add_assign_scaled(&mut self, other: &SparseVector, c: &Rat) {
        assert_eq!(self.params, other.params, "mixed space parameters");
        if c.is_zero() {
            return;
        }
        for (index, coeff) in &other.entries {
            self.add_term(index.clone(), coeff * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> SparseVector {
        let mut out = SparseVector::zero(self.params);
        out.add_assign_scaled(self, c);
        out
    }

    pub fn neg(&self) -> SparseVector {
        self.scale(&-Rat::one())
    }

    /// Sign of the coefficient on the leading support monomial; O(1) thanks
    /// to the ordered map.
    pub fn sign(&self) -> VectorSign {
        match self.entries.iter().next() {
            None => VectorSign::Zero,
            Some((_, c)) => {
                if c.is_positive() {
                    VectorSign::Positive
                } else {
                    VectorSign::Negative
                }
            }
        }
    }

    /// The total order on V_{n,k}: self < other iff other - self is
    /// positive. Implemented as a merge walk, comparing coefficients at the
    /// first monomial where they differ.
    pub fn order_cmp(&self, other: &SparseVector) -> Ordering {
        assert_eq!(self.params, other.params, "mixed space parameters");
        let zero = Rat::zero();
        let mut it1 = self.entries.iter().peekable();
        let mut it2 = other.entries.iter().peekable();
        loop {
            match (it1.peek(), it2.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, c1)), None) => return c1.cmp(&zero),
                (None, Some(&(_, c2))) => return zero.cmp(c2),
                (Some(&(m1, c1)), Some(&(m2, c2))) => match m1.cmp(m2) {
                    Ordering::Less => return c1.cmp(&zero),
                    Ordering::Greater => return zero.cmp(c2),
                    Ordering::Equal => {
                        if c1 != c2 {
                            return c1.cmp(c2);
                        }
                        it1.next();
                        it2.next();
                    }
                },
            }
        }
    }

    pub fn inner_product(&self, other: &SparseVector) -> Result<Rat, Error> {
        if self.params != other.params {
            return Err(Error::params(
                "inner product requires identical space parameters",
            ));
        }
        let mut acc = Rat::zero();
        // Iterate the smaller support.
        let (small, big) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (index, c) in &small.entries {
            if let Some(d) = big.entries.get(index) {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    /// JSON object mapping monomial names to rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (index, coeff) in &self.entries {
            map.insert(
                index.name(),
                serde_json::Value::String(rat_to_string(coeff)),
            );
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let one = Rat::one();
        for (pos, (index, coeff)) in self.entries.iter().enumerate() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            if pos == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if abs != one || index.degree() == 0 {
                f.write_str(&rat_to_string(&abs))?;
                if index.degree() > 0 {
                    f.write_str("*")?;
                }
            }
            if index.degree() > 0 {
                write!(f, "{index}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &SparseVector {
    type Output = SparseVector;
    fn add(self, rhs: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &Rat::one());
        out
    }
}

impl std::ops::Sub for &SparseVector {
    type Output = SparseVector;
    fn sub(self, rhs: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Rat::one());
        out
    }
}
