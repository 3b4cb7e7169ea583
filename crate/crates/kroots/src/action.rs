//! The symmetric group action on V_{n,k} and the induced module
//! structure: representing matrices over the canonical basis, the
//! differential, the height filtration, Young symmetrizers, and the signed
//! transpositions attached to a k-root.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::Error;
use crate::kroot::{enumerate_canonical_basis, Factor, KRoot, Label, Sign};
use crate::linalg::Mat;
use crate::rewrite::Decomposer;
use crate::space::{binomial, enumerate_monomials, factorial, Rat, SpaceParams, SparseVector};

/// A permutation of {1, ..., n} in one-line form: `map[i-1]` is the image
/// of i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Permutation {
        Permutation {
            map: (1..=n).collect(),
        }
    }

    pub fn from_one_line(map: Vec<u32>) -> Result<Permutation, Error> {
        let n = map.len() as u32;
        let mut seen = vec![false; n as usize];
        for &v in &map {
            if v == 0 || v > n {
                return Err(Error::params(format!(
                    "permutation entry {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::params(format!("permutation repeats {v}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { map })
    }

    pub fn transposition(n: u32, i: u32, j: u32) -> Result<Permutation, Error> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::params(format!(
                "transposition ({i} {j}) is not valid for n = {n}"
            )));
        }
        let mut map: Vec<u32> = (1..=n).collect();
        map.swap(i as usize - 1, j as usize - 1);
        Ok(Permutation { map })
    }

    /// Accepts one-line form (`2 1 3 5 4`) or cycle form (`(1 2)(4 5)`).
    /// Cycles must be disjoint; omitted points are fixed.
    pub fn parse(text: &str, n: u32) -> Result<Permutation, Error> {
        let trimmed = text.trim();
        if trimmed.starts_with('(') {
            return Self::parse_cycles(trimmed, n);
        }
        let map: Result<Vec<u32>, _> = trimmed
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| Error::params(format!("bad permutation entry {w:?}")))
            })
            .collect();
        let map = map?;
        if map.len() != n as usize {
            return Err(Error::params(format!(
                "one-line permutation has {} entries, expected {n}",
                map.len()
            )));
        }
        Permutation::from_one_line(map)
    }

    fn parse_cycles(text: &str, n: u32) -> Result<Permutation, Error> {
        let mut map: Vec<u32> = (1..=n).collect();
        let mut moved = vec![false; n as usize];
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::params(format!(
                    "expected '(' in cycle notation near {rest:?}"
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::params("unclosed cycle"))?;
            let inner = &rest[1..close];
            rest = rest[close + 1..].trim_start();
            let entries: Result<Vec<u32>, _> = inner
                .split_whitespace()
                .map(|w| {
                    w.parse::<u32>()
                        .map_err(|_| Error::params(format!("bad cycle entry {w:?}")))
                })
                .collect();
            let entries = entries?;
            if entries.is_empty() {
                continue;
            }
            for &v in &entries {
                if v == 0 || v > n {
                    return Err(Error::params(format!(
                        "cycle entry {v} out of range 1..={n}"
                    )));
                }
                if moved[v as usize - 1] {
                    return Err(Error::params(format!("cycles are not disjoint at {v}")));
                }
                moved[v as usize - 1] = true;
            }
            for w in entries.windows(2) {
                map[w[0] as usize - 1] = w[1];
            }
            map[entries[entries.len() - 1] as usize - 1] = entries[0];
        }
        Permutation::from_one_line(map)
    }

    pub fn n(&self) -> u32 {
        self.map.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.map[i as usize - 1]
    }

    /// Function composition: `a.compose(&b)` maps i to a(b(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "mixed degrees");
        Permutation {
            map: (1..=self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0u32; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v as usize - 1] = i as u32 + 1;
        }
        Permutation { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }

    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Permutation {
        use rand::seq::SliceRandom;
        let mut map: Vec<u32> = (1..=n).collect();
        map.shuffle(rng);
        Permutation { map }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.map.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

/// The generators (m, m+1), m = 1..n-1.
pub fn adjacent_transpositions(n: u32) -> Vec<Permutation> {
    (1..n)
        .map(|m| Permutation::transposition(n, m, m + 1).expect("adjacent pair is valid"))
        .collect()
}

/// Index relabelling on a vector: x_I maps to x_{sigma(I)}.
pub fn act_on_vector(perm: &Permutation, v: &SparseVector) -> SparseVector {
    assert_eq!(perm.n(), v.params().n(), "permutation degree mismatch");
    let mut out = SparseVector::zero(*v.params());
    for (m, c) in v.iter() {
        out.add_term(m.relabel(|i| perm.apply(i)), c.clone());
    }
    out
}

/// Index relabelling on a k-root. Each antisymmetric factor whose endpoints
/// land out of order contributes one sign flip; symmetric factors never do.
pub fn act_on_kroot(perm: &Permutation, root: &KRoot) -> KRoot {
    assert_eq!(perm.n(), root.params().n(), "permutation degree mismatch");
    let mut sign = root.sign();
    let factors: Vec<Factor> = root
        .factors()
        .iter()
        .map(|f| {
            let a = perm.apply(f.i());
            let b = perm.apply(f.j());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if a > b && !f.is_symmetric() {
                sign = sign.flip();
            }
            Factor::new(lo, hi, f.kind()).expect("relabelled endpoints stay distinct")
        })
        .collect();
    KRoot::new(*root.params(), sign, factors).expect("relabelling preserves validity")
}

/// Matrix of a permutation over the canonical basis (columns: image of
/// each basis element, decomposed). Entries are integers and every column
/// reuses a single sign.
pub struct RepMatrix {
    matrix: Mat,
    sign_coherent: bool,
}

impl RepMatrix {
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn sign_coherent(&self) -> bool {
        self.sign_coherent
    }
}

pub fn rep_matrix(params: &SpaceParams, perm: &Permutation, dec: &mut Decomposer) -> RepMatrix {
    let basis = enumerate_canonical_basis(params);
    let labels: Vec<Label> = basis
        .iter()
        .map(|r| r.label().expect("basis element has a label"))
        .collect();
    let columns: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| {
            let image = dec.decompose(&act_on_kroot(perm, b));
            labels.iter().map(|l| image.coeff(l)).collect()
        })
        .collect();
    let matrix = Mat::from_columns(labels.len(), &columns);
    let sign_coherent = matrix.columns_sign_coherent();
    RepMatrix {
        matrix,
        sign_coherent,
    }
}

/// Sum of all partial derivatives; degree drops by one. Errors at k = 0,
/// where there is no lower space.
pub fn differential(v: &SparseVector) -> Result<SparseVector, Error> {
    let lower = v
        .params()
        .lower()
        .ok_or_else(|| Error::params("the differential is undefined on degree 0"))?;
    let mut out = SparseVector::zero(lower);
    for (m, c) in v.iter() {
        for drop in 0..m.degree() {
            let indices: Vec<u32> = m
                .indices()
                .iter()
                .enumerate()
                .filter(|&(pos, _)| pos != drop)
                .map(|(_, &i)| i)
                .collect();
            out.add_term(crate::space::MonomialIndex::from_sorted(indices), c.clone());
        }
    }
    Ok(out)
}

/// Matrix of the differential from V_{n,k} to V_{n,k-1} over the canonical
/// bases. Every entry is an even nonnegative integer: the image of a basis
/// element is twice a sum of positive (k-1)-roots, one per symmetric
/// factor. At k = 0 the matrix has zero rows and one column.
pub fn differential_matrix(params: &SpaceParams) -> Mat {
    let lower = match params.lower() {
        Some(l) => l,
        None => return Mat::zeros(0, 1),
    };
    let lower_labels: Vec<Label> = enumerate_canonical_basis(&lower)
        .iter()
        .map(|r| r.label().expect("basis element has a label"))
        .collect();
    let basis = enumerate_canonical_basis(params);
    let mut dec = Decomposer::new();
    let two = Rat::from_integer(crate::space::Int::from(2));
    let columns: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| {
            let mut image = crate::rewrite::Decomposition::zero(lower);
            for (pos, f) in b.factors().iter().enumerate() {
                if !f.is_symmetric() {
                    continue;
                }
                let rest: Vec<Factor> = b
                    .factors()
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != pos)
                    .map(|(_, &g)| g)
                    .collect();
                let sub = KRoot::new(lower, Sign::Plus, rest)
                    .expect("dropping a factor keeps a valid root");
                image.add_assign_scaled(&dec.decompose(&sub), &two);
            }
            lower_labels.iter().map(|l| image.coeff(l)).collect()
        })
        .collect();
    Mat::from_columns(lower_labels.len(), &columns)
}

/// Matrix of the (t+1)-st power of the differential out of V_{n,k}.
pub fn differential_power_matrix(params: &SpaceParams, t: u32) -> Mat {
    assert!(t <= params.k(), "power exceeds degree");
    let mut m = differential_matrix(params);
    let mut p = *params;
    for _ in 0..t {
        p = p.lower().expect("t <= k keeps the degree nonnegative");
        m = differential_matrix(&p).mul(&m);
    }
    m
}

/// T(n,j) = C(n,j) - C(n,j-1): the number of canonical basis elements of
/// height h in V_{n,k} is T(n, k-h).
pub fn ballot_number(n: u32, j: u32) -> u128 {
    let c = binomial(n as u64, j as u64);
    if j == 0 {
        c
    } else {
        c - binomial(n as u64, j as u64 - 1)
    }
}

/// Canonical basis elements of height at most t, in label order.
pub fn filtration_basis(params: &SpaceParams, t: u32) -> Vec<KRoot> {
    enumerate_canonical_basis(params)
        .into_iter()
        .filter(|r| r.height() <= t)
        .collect()
}

/// What `verify_filtration` checked and how it came out.
pub struct FiltrationReport {
    pub params: SpaceParams,
    pub level: u32,
    pub dimension: usize,
    pub closed_under_sn: bool,
    pub equals_kernel: bool,
    pub layer_dimension: usize,
    pub expected_layer_dimension: usize,
}

impl FiltrationReport {
    pub fn ok(&self) -> bool {
        self.closed_under_sn
            && self.equals_kernel
            && self.layer_dimension == self.expected_layer_dimension
    }
}

/// Certifies that the span of the height <= t basis elements is an
/// S_n-submodule, equals the kernel of the (t+1)-st power of the
/// differential, and contributes a layer of dimension T(n, k-t).
pub fn verify_filtration(params: &SpaceParams, t: u32) -> Result<FiltrationReport, Error> {
    if t > params.k() {
        return Err(Error::params(format!(
            "filtration level {t} exceeds k = {}",
            params.k()
        )));
    }
    let basis = enumerate_canonical_basis(params);
    let in_level: Vec<&KRoot> = basis.iter().filter(|r| r.height() <= t).collect();
    let dimension = in_level.len();

    let mut dec = Decomposer::new();
    let mut closed = true;
    'outer: for root in &in_level {
        for gen in adjacent_transpositions(params.n()) {
            let image = dec.decompose(&act_on_kroot(&gen, root));
            if image.max_height().is_some_and(|h| h > t) {
                closed = false;
                break 'outer;
            }
        }
    }

    let power = differential_power_matrix(params, t);
    let kernel_dim = basis.len() - power.rank();
    let mut contained = true;
    for (col, root) in basis.iter().enumerate() {
        if root.height() > t {
            continue;
        }
        if !power.column(col).iter().all(|c| c.is_zero()) {
            contained = false;
            break;
        }
    }
    let equals_kernel = contained && kernel_dim == dimension;

    let layer_dimension = in_level.iter().filter(|r| r.height() == t).count();
    let expected_layer_dimension = ballot_number(params.n(), params.k() - t) as usize;

    Ok(FiltrationReport {
        params: *params,
        level: t,
        dimension,
        closed_under_sn: closed,
        equals_kernel,
        layer_dimension,
        expected_layer_dimension,
    })
}

/// Applies the Young symmetrizer of the first `a` letters: the sum of all
/// permutations of {1, ..., a}, acting by relabelling. On a monomial the
/// orbit sum aggregates to m! (a-m)! times the sum over m-subsets of the
/// first a letters, where m counts indices of the monomial inside them.
pub fn young_symmetrizer_apply(v: &SparseVector, a: u32) -> Result<SparseVector, Error> {
    let n = v.params().n();
    if a == 0 || a > n {
        return Err(Error::params(format!(
            "symmetrizer width {a} out of range 1..={n}"
        )));
    }
    let mut out = SparseVector::zero(*v.params());
    for (mono, c) in v.iter() {
        let inside: Vec<u32> = mono.indices().iter().copied().filter(|&i| i <= a).collect();
        let outside: Vec<u32> = mono.indices().iter().copied().filter(|&i| i > a).collect();
        let m = inside.len() as u64;
        let weight = Rat::from_integer(factorial(m) * factorial(a as u64 - m));
        let scaled = c * &weight;
        for subset in (1..=a).combinations(m as usize) {
            let mut indices = subset;
            indices.extend_from_slice(&outside);
            indices.sort_unstable();
            out.add_term(
                crate::space::MonomialIndex::from_sorted(indices),
                scaled.clone(),
            );
        }
    }
    Ok(out)
}

/// A transposition of i and j, optionally twisted by a sign: the signed
/// version sends x_i to -x_j and x_j to -x_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedTransposition {
    pub i: u32,
    pub j: u32,
    pub signed: bool,
}

impl fmt::Display for SignedTransposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.signed {
            write!(f, "({} {})~", self.i, self.j)
        } else {
            write!(f, "({} {})", self.i, self.j)
        }
    }
}

/// The k transpositions attached to a k-root: plain for each antisymmetric
/// factor, signed for each symmetric one. The root spans the joint
/// (-1)-eigenspace of these operators.
pub fn signed_transpositions(root: &KRoot) -> Vec<SignedTransposition> {
    root.factors()
        .iter()
        .map(|f| SignedTransposition {
            i: f.i(),
            j: f.j(),
            signed: f.is_symmetric(),
        })
        .collect()
}

pub fn apply_signed(st: &SignedTransposition, v: &SparseVector) -> SparseVector {
    let mut out = SparseVector::zero(*v.params());
    for (m, c) in v.iter() {
        let has_i = m.contains(st.i);
        let has_j = m.contains(st.j);
        if has_i == has_j {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let image = m.relabel(|x| {
            if x == st.i {
                st.j
            } else if x == st.j {
                st.i
            } else {
                x
            }
        });
        let coeff = if st.signed { -c.clone() } else { c.clone() };
        out.add_term(image, coeff);
    }
    out
}

/// Dimension of the joint (-1)-eigenspace of the root's signed
/// transpositions inside V_{n,k}, computed as the nullity of the stacked
/// operators T + I.
pub fn joint_negative_eigenspace_dim(root: &KRoot) -> usize {
    let params = *root.params();
    let monomials = enumerate_monomials(&params);
    let dim = monomials.len();
    let ts = signed_transpositions(root);
    let mut stacked = Mat::zeros(dim * ts.len(), dim);
    for (block, st) in ts.iter().enumerate() {
        for (col, m) in monomials.iter().enumerate() {
            let image = apply_signed(st, &SparseVector::monomial(params, m.clone()));
            for (row, target) in monomials.iter().enumerate() {
                let mut entry = image.coeff(target);
                if row == col {
                    entry += Rat::one();
                }
                stacked[(block * dim + row, col)] = entry;
            }
        }
    }
    stacked.nullspace().len()
}
