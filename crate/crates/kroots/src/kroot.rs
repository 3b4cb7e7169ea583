//! k-roots, defects, labels, and the canonical basis B_{n,k}.
//!
//! A k-root is a signed product of k factors (x_i - x_j) or (x_i + x_j),
//! i < j, over 2k pairwise distinct indices. Every such product expands to
//! a vector whose coefficients are all +-1, and the product is positive
//! exactly when its stored sign is +1. The defect-free positive k-roots
//! form the canonical basis; they are in bijection with lattice words of
//! length n over {1,2} with at most k twos via the label map.

use std::fmt;

use crate::error::Error;
use crate::space::{MonomialIndex, Rat, SpaceParams, SparseVector};
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn combine(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_rat(self) -> Rat {
        match self {
            Sign::Plus => Rat::one(),
            Sign::Minus => -Rat::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// (x_i - x_j): contributes a 2 at position j in the label.
    Antisymmetric,
    /// (x_i + x_j): contributes to the height.
    Symmetric,
}

/// One normal-form factor (x_i - x_j) or (x_i + x_j) with i < j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    i: u32,
    j: u32,
    kind: FactorKind,
}

impl Factor {
    pub fn new(i: u32, j: u32, kind: FactorKind) -> Result<Factor, Error> {
        if i == 0 || i >= j {
            return Err(Error::not_a_kroot(format!(
                "factor endpoints must satisfy 1 <= i < j, got ({i}, {j})"
            )));
        }
        Ok(Factor { i, j, kind })
    }

    pub(crate) fn anti(i: u32, j: u32) -> Factor {
        debug_assert!(0 < i && i < j);
        Factor {
            i,
            j,
            kind: FactorKind::Antisymmetric,
        }
    }

    pub(crate) fn sym(i: u32, j: u32) -> Factor {
        debug_assert!(0 < i && i < j);
        Factor {
            i,
            j,
            kind: FactorKind::Symmetric,
        }
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn is_symmetric(&self) -> bool {
        self.kind == FactorKind::Symmetric
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            FactorKind::Antisymmetric => '-',
            FactorKind::Symmetric => '+',
        };
        write!(f, "(x{}{}x{})", self.i, op, self.j)
    }
}

/// A raw, not yet normalized factor (s_a x_a + s_b x_b) as it appears in
/// input syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawFactor {
    pub neg_a: bool,
    pub a: u32,
    pub neg_b: bool,
    pub b: u32,
}

/// A k-root in normal form: factors sorted by smaller endpoint, all 2k
/// endpoints distinct, plus a global sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KRoot {
    params: SpaceParams,
    sign: Sign,
    factors: Vec<Factor>,
}

/// Which admissible unused index rules 7-9 pick. The final decomposition
/// does not depend on the choice; exposing both makes that checkable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnusedIndexPolicy {
    #[default]
    Smallest,
    Largest,
}

/// A defect witness: the reason a positive k-root is not canonical. Kinds
/// are listed in scan priority order; all index tuples are increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    /// Factors (x_i +- x_r) and (x_j +- x_s) with i < j < r < s.
    Crossing { first: Factor, second: Factor },
    /// A factor (x_i +- x_s) over a symmetric factor (x_j + x_r),
    /// i < j < r < s.
    NestedSymmetric { outer: Factor, inner: Factor },
    /// A factor (x_i +- x_r) over an unused index j, i < j < r.
    NestedUnused { factor: Factor, unused: u32 },
    /// A symmetric factor (x_i + x_j) left of an unused index r > j.
    ObstructedSymmetric { factor: Factor, unused: u32 },
}

impl KRoot {
    /// Validating constructor; sorts the factors by smaller endpoint.
    pub fn new(params: SpaceParams, sign: Sign, mut factors: Vec<Factor>) -> Result<KRoot, Error> {
        if factors.len() != params.k() as usize {
            return Err(Error::not_a_kroot(format!(
                "expected {} factors, got {}",
                params.k(),
                factors.len()
            )));
        }
        let mut seen = vec![false; params.n() as usize + 1];
        for f in &factors {
            if f.j > params.n() {
                return Err(Error::not_a_kroot(format!(
                    "index {} out of range 1..={}",
                    f.j,
                    params.n()
                )));
            }
            for e in [f.i, f.j] {
                if seen[e as usize] {
                    return Err(Error::not_a_kroot(format!("index {e} used twice")));
                }
                seen[e as usize] = true;
            }
        }
        factors.sort_unstable_by_key(|f| f.i);
        Ok(KRoot {
            params,
            sign,
            factors,
        })
    }

    /// The empty product, the unit of the rank-1 space V_{n,0}.
    pub fn unit(params: SpaceParams) -> Result<KRoot, Error> {
        if params.k() != 0 {
            return Err(Error::params("the empty product lives in degree 0"));
        }
        Ok(KRoot {
            params,
            sign: Sign::Plus,
            factors: vec![],
        })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of symmetric factors.
    pub fn height(&self) -> u32 {
        self.factors.iter().filter(|f| f.is_symmetric()).count() as u32
    }

    pub fn negated(&self) -> KRoot {
        KRoot {
            params: self.params,
            sign: self.sign.flip(),
            factors: self.factors.clone(),
        }
    }

    /// The positive root with the same factors, plus the sign carried.
    pub fn positive_part(&self) -> (KRoot, Sign) {
        (
            KRoot {
                params: self.params,
                sign: Sign::Plus,
                factors: self.factors.clone(),
            },
            self.sign,
        )
    }

    /// Indices of {1..n} not used by any factor, ascending.
    pub fn unused_indices(&self) -> Vec<u32> {
        let mut used = vec![false; self.params.n() as usize + 1];
        for f in &self.factors {
            used[f.i as usize] = true;
            used[f.j as usize] = true;
        }
        (1..=self.params.n())
            .filter(|&i| !used[i as usize])
            .collect()
    }

    /// Multiplies the factors out. The support has exactly 2^k monomials,
    /// every coefficient is +-1, and the result is sign-positive exactly
    /// when the root is.
    pub fn expand(&self) -> SparseVector {
        let mut terms: Vec<(Vec<u32>, i32)> = vec![(
            vec![],
            match self.sign {
                Sign::Plus => 1,
                Sign::Minus => -1,
            },
        )];
        for f in &self.factors {
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (mono, c) in &terms {
                let mut with_i = mono.clone();
                with_i.push(f.i);
                next.push((with_i, *c));
                let mut with_j = mono.clone();
                with_j.push(f.j);
                let cj = match f.kind {
                    FactorKind::Symmetric => *c,
                    FactorKind::Antisymmetric => -*c,
                };
                next.push((with_j, cj));
            }
            terms = next;
        }
        let mut out = SparseVector::zero(self.params);
        for (mut mono, c) in terms {
            mono.sort_unstable();
            out.add_term(
                MonomialIndex::from_sorted(mono),
                Rat::from_integer(c.into()),
            );
        }
        out
    }

    /// Deterministic defect scan with the default (smallest unused index)
    /// policy.
    pub fn find_defect(&self) -> Option<Defect> {
        self.find_defect_with_policy(UnusedIndexPolicy::Smallest)
    }

    /// Scan priority: crossings, then nested symmetric factors, then nested
    /// unused indices, then obstructed symmetric factors. Within a kind the
    /// witness with the lexicographically smallest index tuple wins; the
    /// policy only affects which admissible unused index is reported.
    pub fn find_defect_with_policy(&self, policy: UnusedIndexPolicy) -> Option<Defect> {
        let fs = &self.factors;

        // (i) crossings, witness tuple (i, j, r, s)
        let mut best: Option<((u32, u32, u32, u32), Defect)> = None;
        for a in 0..fs.len() {
            for b in a + 1..fs.len() {
                // factors are sorted by smaller endpoint, so fs[a].i < fs[b].i
                let (f, g) = (fs[a], fs[b]);
                if f.i < g.i && g.i < f.j && f.j < g.j {
                    let key = (f.i, g.i, f.j, g.j);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((
                            key,
                            Defect::Crossing {
                                first: f,
                                second: g,
                            },
                        ));
                    }
                }
            }
        }
        if let Some((_, d)) = best {
            return Some(d);
        }

        // (ii) nested symmetric factor, witness tuple (i, j, r, s)
        let mut best: Option<((u32, u32, u32, u32), Defect)> = None;
        for a in 0..fs.len() {
            for b in 0..fs.len() {
                let (outer, inner) = (fs[a], fs[b]);
                if inner.is_symmetric() && outer.i < inner.i && inner.j < outer.j {
                    let key = (outer.i, inner.i, inner.j, outer.j);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((key, Defect::NestedSymmetric { outer, inner }));
                    }
                }
            }
        }
        if let Some((_, d)) = best {
            return Some(d);
        }

        let unused = self.unused_indices();

        // (iii) unused index nested inside a factor, witness (i, j, r).
        // Factors are sorted by smaller endpoint and endpoints are
        // pairwise distinct, so the first factor with an admissible unused
        // index realizes the smallest tuple.
        for f in fs {
            let inside: Vec<u32> = unused
                .iter()
                .copied()
                .filter(|&u| f.i < u && u < f.j)
                .collect();
            if let Some(u) = pick(&inside, policy) {
                return Some(Defect::NestedUnused {
                    factor: *f,
                    unused: u,
                });
            }
        }

        // (iv) symmetric factor with an unused index to its right,
        // witness (i, j, r)
        for f in fs {
            if !f.is_symmetric() {
                continue;
            }
            let right: Vec<u32> = unused.iter().copied().filter(|&u| u > f.j).collect();
            if let Some(u) = pick(&right, policy) {
                return Some(Defect::ObstructedSymmetric {
                    factor: *f,
                    unused: u,
                });
            }
        }

        None
    }

    pub fn is_canonical(&self) -> bool {
        self.sign == Sign::Plus && self.find_defect().is_none()
    }

    /// The label of a canonical basis element: digit 2 at position j for
    /// each antisymmetric factor (x_i - x_j), digit 1 everywhere else.
    pub fn label(&self) -> Result<Label, Error> {
        if self.sign != Sign::Plus {
            return Err(Error::contract("labels are defined for positive k-roots"));
        }
        if let Some(d) = self.find_defect() {
            return Err(Error::contract(format!(
                "labels are defined for defect-free k-roots; found {d:?}"
            )));
        }
        let mut word = vec![1u8; self.params.n() as usize];
        for f in &self.factors {
            if !f.is_symmetric() {
                word[f.j as usize - 1] = 2;
            }
        }
        Ok(Label { word })
    }

    /// Drops the symmetric factors. On a canonical element of height h the
    /// result is the canonical (k-h)-root with the same label pattern.
    pub fn strip_symmetric(&self) -> Result<KRoot, Error> {
        if self.sign != Sign::Plus || self.find_defect().is_some() {
            return Err(Error::contract(
                "strip_symmetric is defined on canonical basis elements",
            ));
        }
        let kept: Vec<Factor> = self
            .factors
            .iter()
            .copied()
            .filter(|f| !f.is_symmetric())
            .collect();
        let params = if kept.is_empty() {
            SpaceParams::degree_zero(self.params.n())?
        } else {
            SpaceParams::new(self.params.n(), kept.len() as u32)?
        };
        KRoot::new(params, Sign::Plus, kept)
    }
}

impl fmt::Display for KRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for factor in &self.factors {
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

fn pick(candidates: &[u32], policy: UnusedIndexPolicy) -> Option<u32> {
    match policy {
        UnusedIndexPolicy::Smallest => candidates.first().copied(),
        UnusedIndexPolicy::Largest => candidates.last().copied(),
    }
}

/// Brings a raw factor list into normal form. Returns the positive normal
/// form together with the sign sigma such that sigma times the normal form
/// equals the input product.
pub fn normalize(params: SpaceParams, raw: &[RawFactor]) -> Result<(KRoot, Sign), Error> {
    let mut sign = Sign::Plus;
    let mut factors = Vec::with_capacity(raw.len());
    for rf in raw {
        if rf.a == rf.b {
            return Err(Error::not_a_kroot(format!("index {} used twice", rf.a)));
        }
        // order the two terms by index, keeping each term's sign attached
        let ((neg_lo, lo), (neg_hi, hi)) = if rf.a < rf.b {
            ((rf.neg_a, rf.a), (rf.neg_b, rf.b))
        } else {
            ((rf.neg_b, rf.b), (rf.neg_a, rf.a))
        };
        if lo == 0 {
            return Err(Error::not_a_kroot("indices start at 1"));
        }
        // factor out the sign of the smaller-index term
        if neg_lo {
            sign = sign.flip();
        }
        let kind = if neg_lo == neg_hi {
            FactorKind::Symmetric
        } else {
            FactorKind::Antisymmetric
        };
        factors.push(Factor { i: lo, j: hi, kind });
    }
    let root = KRoot::new(params, Sign::Plus, factors)?;
    Ok((root, sign))
}

/// A word over {1,2}. Lattice-ness is a property, not a type invariant:
/// monomial labels are arbitrary words, and only labels of canonical basis
/// elements are guaranteed to be lattice words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    word: Vec<u8>,
}

impl Label {
    pub fn new(word: Vec<u8>) -> Result<Label, Error> {
        if word.is_empty() {
            return Err(Error::invalid_label("empty word"));
        }
        if let Some(&d) = word.iter().find(|&&d| d != 1 && d != 2) {
            return Err(Error::invalid_label(format!(
                "digit {d} outside the alphabet {{1,2}}"
            )));
        }
        Ok(Label { word })
    }

    pub fn parse(text: &str) -> Result<Label, Error> {
        let word: Result<Vec<u8>, Error> = text
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(Error::invalid_label(format!(
                    "character {other:?} outside the alphabet {{1,2}}"
                ))),
            })
            .collect();
        Label::new(word?)
    }

    /// The word of a monomial: digit 2 exactly at the positions in I.
    pub fn of_monomial(params: &SpaceParams, index: &MonomialIndex) -> Label {
        let mut word = vec![1u8; params.n() as usize];
        for &i in index.indices() {
            word[i as usize - 1] = 2;
        }
        Label { word }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn twos(&self) -> usize {
        self.word.iter().filter(|&&d| d == 2).count()
    }

    /// Height of the canonical element carrying this label: k minus the
    /// number of 2s.
    pub fn height(&self, k: u32) -> u32 {
        k - self.twos() as u32
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.word {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    LatticeWord,
    ReverseLatticeWord,
    Both,
    Neither,
}

/// Classifies a word: lattice means every prefix has at least as many 1s
/// as 2s, reverse lattice means every suffix does.
pub fn word_class(label: &Label) -> WordClass {
    let mut lattice = true;
    let mut balance: i64 = 0;
    for &d in label.word() {
        balance += if d == 1 { 1 } else { -1 };
        if balance < 0 {
            lattice = false;
            break;
        }
    }
    let mut reverse = true;
    let mut balance: i64 = 0;
    for &d in label.word().iter().rev() {
        balance += if d == 1 { 1 } else { -1 };
        if balance < 0 {
            reverse = false;
            break;
        }
    }
    match (lattice, reverse) {
        (true, true) => WordClass::Both,
        (true, false) => WordClass::LatticeWord,
        (false, true) => WordClass::ReverseLatticeWord,
        (false, false) => WordClass::Neither,
    }
}

fn is_lattice(label: &Label) -> bool {
    matches!(word_class(label), WordClass::LatticeWord | WordClass::Both)
}

/// Reconstructs the canonical basis element with the given label.
///
/// Each 2 at position j is matched, parenthesis style, with the nearest
/// unmatched 1 at a position g(j) < j, giving the antisymmetric factor
/// (x_{g(j)} - x_j). The remaining height h = k - #2s is realized by
/// pairing the largest 2h unmatched indices consecutively into symmetric
/// factors.
pub fn from_label(label: &Label, params: SpaceParams) -> Result<KRoot, Error> {
    if label.len() != params.n() as usize {
        return Err(Error::invalid_label(format!(
            "word length {} does not match n = {}",
            label.len(),
            params.n()
        )));
    }
    if !is_lattice(label) {
        return Err(Error::invalid_label(format!(
            "{label} is not a lattice word"
        )));
    }
    let m = label.twos();
    if m > params.k() as usize {
        return Err(Error::invalid_label(format!(
            "{label} has {m} twos, more than k = {}",
            params.k()
        )));
    }

    let mut factors = Vec::with_capacity(params.k() as usize);
    let mut open: Vec<u32> = Vec::new();
    let mut matched = vec![false; params.n() as usize + 1];
    for (pos0, &d) in label.word().iter().enumerate() {
        let pos = pos0 as u32 + 1;
        if d == 1 {
            open.push(pos);
        } else {
            // lattice property guarantees an unmatched 1 to the left
            let g = open.pop().expect("lattice word ran out of openers");
            factors.push(Factor::anti(g, pos));
            matched[g as usize] = true;
            matched[pos as usize] = true;
        }
    }

    let h = params.k() as usize - m;
    let mut free: Vec<u32> = (1..=params.n()).filter(|&i| !matched[i as usize]).collect();
    let tail = free.split_off(free.len() - 2 * h);
    for pair in tail.chunks(2) {
        factors.push(Factor::sym(pair[0], pair[1]));
    }

    let root = KRoot::new(params, Sign::Plus, factors)?;
    debug_assert!(root.find_defect().is_none(), "reconstruction left a defect");
    Ok(root)
}

/// All lattice words of length n with at most k twos, ascending
/// lexicographically. There are C(n,k) of them.
pub fn enumerate_lattice_words(params: &SpaceParams) -> Vec<Label> {
    let n = params.n() as usize;
    let max_twos = params.k() as usize;
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    fn rec(
        word: &mut Vec<u8>,
        n: usize,
        ones: usize,
        twos: usize,
        max_twos: usize,
        out: &mut Vec<Label>,
    ) {
        if word.len() == n {
            out.push(Label { word: word.clone() });
            return;
        }
        word.push(1);
        rec(word, n, ones + 1, twos, max_twos, out);
        word.pop();
        if twos < max_twos && twos < ones {
            word.push(2);
            rec(word, n, ones, twos + 1, max_twos, out);
            word.pop();
        }
    }
    rec(&mut word, n, 0, 0, max_twos, &mut out);
    out
}

/// The canonical basis B_{n,k}, ordered by ascending label.
pub fn enumerate_canonical_basis(params: &SpaceParams) -> Vec<KRoot> {
    enumerate_lattice_words(params)
        .iter()
        .map(|w| from_label(w, *params).expect("lattice word enumeration produced a bad word"))
        .collect()
}

/// Every positive k-root in V_{n,k}, by brute force: all 2k-subsets, all
/// pairings, all factor kinds. Independent of the label machinery; meant
/// as an enumeration oracle and for exhaustive checks at small n.
pub fn enumerate_positive_roots(params: &SpaceParams) -> Vec<KRoot> {
    use itertools::Itertools;
    let k = params.k() as usize;
    let mut out = Vec::new();
    for support in (1..=params.n()).combinations(2 * k) {
        let mut pairings: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut current = Vec::with_capacity(k);
        pair_up(&support, &mut current, &mut pairings);
        for pairing in pairings {
            for kinds in 0..(1u32 << k) {
                let factors: Vec<Factor> = pairing
                    .iter()
                    .enumerate()
                    .map(|(t, &(i, j))| {
                        if kinds >> t & 1 == 1 {
                            Factor::sym(i, j)
                        } else {
                            Factor::anti(i, j)
                        }
                    })
                    .collect();
                out.push(
                    KRoot::new(*params, Sign::Plus, factors)
                        .expect("brute-force enumeration built an invalid root"),
                );
            }
        }
    }
    out
}

/// All perfect matchings of `rest`, each pair sorted, smallest element
/// first so every matching appears exactly once.
fn pair_up(rest: &[u32], current: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
    if rest.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = rest[0];
    for idx in 1..rest.len() {
        let partner = rest[idx];
        let remaining: Vec<u32> = rest[1..]
            .iter()
            .copied()
            .filter(|&x| x != partner)
            .collect();
        current.push((first, partner));
        pair_up(&remaining, current, out);
        current.pop();
    }
}
