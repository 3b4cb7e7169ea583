//! The nine-rule rewriting system and decomposition into the canonical
//! basis.
//!
//! Each rule replaces the factor(s) of one defect by a sum of two or three
//! products, preserving the expansion and strictly descending in the total
//! order on vectors, so repeated application terminates with a sum of
//! canonical basis elements with nonnegative integer multiplicities. An
//! independent oracle inverts the basis expansion matrix by fraction-free
//! Gaussian elimination; the two routes are cross-checked in the tests.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::kroot::{
    enumerate_canonical_basis, from_label, word_class, Defect, Factor, FactorKind, KRoot, Label,
    Sign, UnusedIndexPolicy, WordClass,
};
use crate::linalg::Mat;
use crate::space::{rat_to_string, Int, MonomialIndex, Rat, SpaceParams, SparseVector};

/// Positions in the index tuple i < j < r < s of a rule instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    I,
    J,
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorTemplate {
    pub lo: Slot,
    pub hi: Slot,
    pub kind: FactorKind,
}

impl FactorTemplate {
    fn instantiate(&self, slots: &SlotValues) -> Factor {
        let lo = slots.get(self.lo);
        let hi = slots.get(self.hi);
        match self.kind {
            FactorKind::Antisymmetric => Factor::anti(lo, hi),
            FactorKind::Symmetric => Factor::sym(lo, hi),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SlotValues {
    pub i: u32,
    pub j: u32,
    pub r: u32,
    pub s: u32,
}

impl SlotValues {
    fn get(&self, slot: Slot) -> u32 {
        match slot {
            Slot::I => self.i,
            Slot::J => self.j,
            Slot::R => self.r,
            Slot::S => self.s,
        }
    }
}

/// One rewrite rule: the factors it consumes and the summands it emits.
/// Rules 7-9 additionally consume an unused index (slot J for 7-8, slot R
/// for 9).
#[derive(Debug, Clone, Copy)]
pub struct RewriteRule {
    pub id: u8,
    pub lhs: &'static [FactorTemplate],
    pub rhs: &'static [&'static [FactorTemplate]],
}

const fn t(lo: Slot, hi: Slot, kind: FactorKind) -> FactorTemplate {
    FactorTemplate { lo, hi, kind }
}

use FactorKind::Antisymmetric as A;
use FactorKind::Symmetric as Y;
use Slot::{I, J, R, S};

pub static RULES: [RewriteRule; 9] = [
    RewriteRule {
        id: 1,
        lhs: &[t(I, R, A), t(J, S, A)],
        rhs: &[&[t(I, J, A), t(R, S, A)], &[t(I, S, A), t(J, R, A)]],
    },
    RewriteRule {
        id: 2,
        lhs: &[t(I, R, Y), t(J, S, A)],
        rhs: &[&[t(I, J, Y), t(R, S, A)], &[t(I, S, Y), t(J, R, A)]],
    },
    RewriteRule {
        id: 3,
        lhs: &[t(I, R, A), t(J, S, Y)],
        rhs: &[&[t(I, J, A), t(R, S, Y)], &[t(I, S, Y), t(J, R, A)]],
    },
    RewriteRule {
        id: 4,
        lhs: &[t(I, R, Y), t(J, S, Y)],
        rhs: &[&[t(I, J, Y), t(R, S, Y)], &[t(I, S, A), t(J, R, A)]],
    },
    RewriteRule {
        id: 5,
        lhs: &[t(I, S, A), t(J, R, Y)],
        rhs: &[
            &[t(I, J, A), t(R, S, Y)],
            &[t(I, J, Y), t(R, S, A)],
            &[t(I, S, Y), t(J, R, A)],
        ],
    },
    RewriteRule {
        id: 6,
        lhs: &[t(I, S, Y), t(J, R, Y)],
        rhs: &[
            &[t(I, J, A), t(R, S, A)],
            &[t(I, J, Y), t(R, S, Y)],
            &[t(I, S, A), t(J, R, A)],
        ],
    },
    RewriteRule {
        id: 7,
        lhs: &[t(I, R, A)],
        rhs: &[&[t(I, J, A)], &[t(J, R, A)]],
    },
    RewriteRule {
        id: 8,
        lhs: &[t(I, R, Y)],
        rhs: &[&[t(I, J, A)], &[t(J, R, Y)]],
    },
    RewriteRule {
        id: 9,
        lhs: &[t(I, J, Y)],
        rhs: &[&[t(I, J, A)], &[t(J, R, A)], &[t(J, R, Y)]],
    },
];

/// Maps a defect of `root` to its rule and slot assignment, validating that
/// the witness really occurs in `root`.
pub fn rule_for_defect(
    root: &KRoot,
    defect: &Defect,
) -> Result<(&'static RewriteRule, SlotValues), Error> {
    let has = |f: &Factor| root.factors().contains(f);
    let unused = root.unused_indices();
    match *defect {
        Defect::Crossing { first, second } => {
            if !has(&first)
                || !has(&second)
                || !(first.i() < second.i() && second.i() < first.j() && first.j() < second.j())
            {
                return Err(Error::contract(
                    "crossing witness does not occur in the root",
                ));
            }
            let id = match (first.kind(), second.kind()) {
                (A, A) => 1,
                (Y, A) => 2,
                (A, Y) => 3,
                (Y, Y) => 4,
            };
            Ok((
                &RULES[id - 1],
                SlotValues {
                    i: first.i(),
                    j: second.i(),
                    r: first.j(),
                    s: second.j(),
                },
            ))
        }
        Defect::NestedSymmetric { outer, inner } => {
            if !has(&outer)
                || !has(&inner)
                || !inner.is_symmetric()
                || !(outer.i() < inner.i() && inner.j() < outer.j())
            {
                return Err(Error::contract(
                    "nested symmetric witness does not occur in the root",
                ));
            }
            let id = if outer.is_symmetric() { 6 } else { 5 };
            Ok((
                &RULES[id - 1],
                SlotValues {
                    i: outer.i(),
                    j: inner.i(),
                    r: inner.j(),
                    s: outer.j(),
                },
            ))
        }
        Defect::NestedUnused { factor, unused: u } => {
            if !has(&factor) || !unused.contains(&u) || !(factor.i() < u && u < factor.j()) {
                return Err(Error::contract(
                    "nested unused witness does not occur in the root",
                ));
            }
            let id = if factor.is_symmetric() { 8 } else { 7 };
            Ok((
                &RULES[id - 1],
                SlotValues {
                    i: factor.i(),
                    j: u,
                    r: factor.j(),
                    s: 0,
                },
            ))
        }
        Defect::ObstructedSymmetric { factor, unused: u } => {
            if !has(&factor) || !factor.is_symmetric() || !unused.contains(&u) || u <= factor.j() {
                return Err(Error::contract(
                    "obstructed symmetric witness does not occur in the root",
                ));
            }
            Ok((
                &RULES[8],
                SlotValues {
                    i: factor.i(),
                    j: factor.j(),
                    r: u,
                    s: 0,
                },
            ))
        }
    }
}

/// Rewrites one defect of a positive k-root. The outputs are positive
/// normal-form k-roots whose expansions sum to the expansion of the input,
/// and each is strictly smaller in the total order.
pub fn apply_rule(root: &KRoot, defect: &Defect) -> Result<Vec<KRoot>, Error> {
    if root.sign() != Sign::Plus {
        return Err(Error::contract("rewriting acts on positive k-roots"));
    }
    let (rule, slots) = rule_for_defect(root, defect)?;
    let consumed: Vec<Factor> = rule.lhs.iter().map(|t| t.instantiate(&slots)).collect();
    let kept: Vec<Factor> = root
        .factors()
        .iter()
        .copied()
        .filter(|f| !consumed.contains(f))
        .collect();
    debug_assert_eq!(kept.len(), root.factors().len() - consumed.len());
    rule.rhs
        .iter()
        .map(|summand| {
            let mut fs = kept.clone();
            fs.extend(summand.iter().map(|t| t.instantiate(&slots)));
            KRoot::new(*root.params(), Sign::Plus, fs)
        })
        .collect()
}

/// Coordinates of a vector in the canonical basis, keyed by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    params: SpaceParams,
    coeffs: BTreeMap<Label, Rat>,
}

impl Decomposition {
    pub fn zero(params: SpaceParams) -> Self {
        Decomposition {
            params,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn coeff(&self, label: &Label) -> Rat {
        self.coeffs.get(label).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rat)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, label: Label, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(label) {
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

    pub fn add_assign_scaled(&mut self, other: &Decomposition, c: &Rat) {
        assert_eq!(self.params, other.params, "mixed space parameters");
        for (label, coeff) in &other.coeffs {
            self.add_term(label.clone(), coeff * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> Decomposition {
        let mut out = Decomposition::zero(self.params);
        out.add_assign_scaled(self, c);
        out
    }

    pub fn all_integer(&self) -> bool {
        self.coeffs.values().all(|c| c.denom().is_one())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Largest height occurring in the support.
    pub fn max_height(&self) -> Option<u32> {
        self.coeffs.keys().map(|l| l.height(self.params.k())).max()
    }

    /// Reconstructs the vector: sum of coeff * expansion of the basis
    /// element with that label.
    pub fn to_vector(&self) -> SparseVector {
        let mut v = SparseVector::zero(self.params);
        for (label, coeff) in &self.coeffs {
            let root = from_label(label, self.params).expect("decomposition has a bad label");
            v.add_assign_scaled(&root.expand(), coeff);
        }
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut coeffs = serde_json::Map::new();
        for (label, coeff) in &self.coeffs {
            coeffs.insert(
                label.to_string(),
                serde_json::Value::String(rat_to_string(coeff)),
            );
        }
        serde_json::json!({
            "n": self.params.n(),
            "k": self.params.k(),
            "coeffs": serde_json::Value::Object(coeffs),
        })
    }

    /// CSV rows `label,numerator,denominator`, one per support label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,numerator,denominator\n");
        for (label, coeff) in &self.coeffs {
            out.push_str(&format!("{label},{},{}\n", coeff.numer(), coeff.denom()));
        }
        out
    }
}

/// Memoizing rewriter. Decomposition proceeds depth first with an explicit
/// stack; every positive normal-form root reached is cached, keyed by its
/// canonical encoding, so batch work shares subproblems.
pub struct Decomposer {
    policy: UnusedIndexPolicy,
    memo: HashMap<KRoot, Rc<BTreeMap<Label, Int>>>,
}

impl Default for Decomposer {
    fn default() -> Self {
        Self::new()
    }
}

struct Frame {
    root: KRoot,
    children: Vec<KRoot>,
    next: usize,
    acc: BTreeMap<Label, Int>,
}

impl Decomposer {
    pub fn new() -> Self {
        Decomposer {
            policy: UnusedIndexPolicy::Smallest,
            memo: HashMap::new(),
        }
    }

    pub fn with_policy(policy: UnusedIndexPolicy) -> Self {
        Decomposer {
            policy,
            memo: HashMap::new(),
        }
    }

    pub fn policy(&self) -> UnusedIndexPolicy {
        self.policy
    }

    /// Decomposes any k-root; a negative root yields the negated
    /// decomposition of its positive part.
    pub fn decompose(&mut self, root: &KRoot) -> Decomposition {
        let (positive, sign) = root.positive_part();
        let map = self.decompose_positive(&positive);
        let mut out = Decomposition::zero(*root.params());
        for (label, count) in map.iter() {
            out.add_term(
                label.clone(),
                Rat::from_integer(count.clone()) * sign.to_rat(),
            );
        }
        out
    }

    fn make_frame(&self, root: KRoot) -> Frame {
        match root.find_defect_with_policy(self.policy) {
            None => {
                let label = root
                    .label()
                    .expect("defect-free positive root must have a label");
                let mut acc = BTreeMap::new();
                acc.insert(label, Int::one());
                Frame {
                    root,
                    children: vec![],
                    next: 0,
                    acc,
                }
            }
            Some(d) => {
                let children =
                    apply_rule(&root, &d).expect("defect scan returned an inapplicable witness");
                Frame {
                    root,
                    children,
                    next: 0,
                    acc: BTreeMap::new(),
                }
            }
        }
    }

    fn decompose_positive(&mut self, root: &KRoot) -> Rc<BTreeMap<Label, Int>> {
        if let Some(m) = self.memo.get(root) {
            return m.clone();
        }
        let mut stack = vec![self.make_frame(root.clone())];
        loop {
            let frame = stack.last_mut().expect("stack never empties mid-loop");
            if frame.next < frame.children.len() {
                let child = frame.children[frame.next].clone();
                frame.next += 1;
                if let Some(m) = self.memo.get(&child) {
                    merge(&mut frame.acc, m);
                } else {
                    let new_frame = self.make_frame(child);
                    stack.push(new_frame);
                }
            } else {
                let done = stack.pop().expect("stack nonempty");
                let result = Rc::new(done.acc);
                self.memo.insert(done.root, result.clone());
                match stack.last_mut() {
                    Some(parent) => merge(&mut parent.acc, &result),
                    None => return result,
                }
            }
        }
    }
}

fn merge(acc: &mut BTreeMap<Label, Int>, add: &BTreeMap<Label, Int>) {
    for (label, count) in add {
        *acc.entry(label.clone()).or_insert_with(Int::zero) += count;
    }
}

/// One-shot decomposition by rewriting.
pub fn decompose_kroot(root: &KRoot) -> Decomposition {
    Decomposer::new().decompose(root)
}

/// Canonical basis data plus the expansion matrix and its exact inverse.
/// Columns follow ascending label order, rows ascending monomial order.
pub struct BasisSolver {
    params: SpaceParams,
    labels: Vec<Label>,
    basis: Vec<KRoot>,
    monomials: Vec<MonomialIndex>,
    basis_to_monomials: Mat,
    monomials_to_basis: Mat,
}

impl BasisSolver {
    /// Builds the expansion matrix of B_{n,k} and inverts it. Panics if the
    /// matrix is singular: that would contradict basis-ness and indicates a
    /// broken invariant, not a user error.
    pub fn new(params: SpaceParams) -> BasisSolver {
        let basis = enumerate_canonical_basis(&params);
        let labels: Vec<Label> = basis
            .iter()
            .map(|r| {
                r.label()
                    .expect("enumerated basis element must be canonical")
            })
            .collect();
        let monomials = crate::space::enumerate_monomials(&params);
        let dim = monomials.len();
        assert_eq!(basis.len(), dim, "basis size must equal dim V_{{n,k}}");
        let columns: Vec<Vec<Rat>> = basis
            .iter()
            .map(|r| {
                let v = r.expand();
                monomials.iter().map(|m| v.coeff(m)).collect()
            })
            .collect();
        let basis_to_monomials = Mat::from_columns(dim, &columns);
        let monomials_to_basis = basis_to_monomials.inverse().unwrap_or_else(|| {
            panic!(
                "expansion matrix of B_{{{},{}}} is singular; the canonical set is not a basis",
                params.n(),
                params.k()
            )
        });
        BasisSolver {
            params,
            labels,
            basis,
            monomials,
            basis_to_monomials,
            monomials_to_basis,
        }
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn basis(&self) -> &[KRoot] {
        &self.basis
    }

    pub fn monomials(&self) -> &[MonomialIndex] {
        &self.monomials
    }

    pub fn basis_to_monomials(&self) -> &Mat {
        &self.basis_to_monomials
    }

    pub fn monomials_to_basis(&self) -> &Mat {
        &self.monomials_to_basis
    }

    /// Monomial coordinates of a vector, in enumeration order.
    pub fn coords(&self, v: &SparseVector) -> Vec<Rat> {
        assert_eq!(self.params, *v.params(), "mixed space parameters");
        self.monomials.iter().map(|m| v.coeff(m)).collect()
    }

    /// Exact basis coordinates via the inverted expansion matrix.
    pub fn solve(&self, v: &SparseVector) -> Decomposition {
        let coords = self.coords(v);
        let solved = self.monomials_to_basis.mul_vec(&coords);
        let mut out = Decomposition::zero(self.params);
        for (label, c) in self.labels.iter().zip(solved) {
            out.add_term(label.clone(), c);
        }
        out
    }
}

/// Decomposition by exact Gaussian elimination, independent of the
/// rewriting route.
pub fn decompose_vector_oracle(v: &SparseVector) -> Decomposition {
    BasisSolver::new(*v.params()).solve(v)
}

/// The two change-of-basis matrices (monomials to canonical basis,
/// canonical basis to monomials); exact mutual inverses.
pub fn change_of_basis(params: SpaceParams) -> (Mat, Mat) {
    let solver = BasisSolver::new(params);
    (
        solver.monomials_to_basis.clone(),
        solver.basis_to_monomials.clone(),
    )
}

/// Decomposes a single monomial x_I.
///
/// When the monomial's word is a reverse lattice word, each index in I can
/// be injectively matched to a larger index outside I (nearest unmatched
/// 1-position to the right); substituting 2 x_i = (x_i - x_f(i)) + (x_i +
/// x_f(i)) writes 2^k x_I as a sum of 2^k positive k-roots, so the
/// decomposition has nonnegative coefficients in (1/2^k) Z. Otherwise the
/// linear-algebra oracle is used and coefficients may be negative.
pub fn monomial_decompose(params: &SpaceParams, index: &MonomialIndex) -> Decomposition {
    let mut dec = Decomposer::new();
    monomial_decompose_with(params, index, &mut dec, None)
}

/// Batch-friendly variant sharing a memoized rewriter and, for the
/// fallback path, a prebuilt solver.
pub fn monomial_decompose_with(
    params: &SpaceParams,
    index: &MonomialIndex,
    dec: &mut Decomposer,
    solver: Option<&BasisSolver>,
) -> Decomposition {
    let word = Label::of_monomial(params, index);
    let reverse = matches!(
        word_class(&word),
        WordClass::ReverseLatticeWord | WordClass::Both
    );
    if !reverse {
        return match solver {
            Some(s) => s.solve(&SparseVector::monomial(*params, index.clone())),
            None => decompose_vector_oracle(&SparseVector::monomial(*params, index.clone())),
        };
    }

    // match every index of I with a larger 1-position
    let mut stack: Vec<u32> = Vec::new();
    let mut partner: Vec<(u32, u32)> = Vec::new();
    for pos in (1..=params.n()).rev() {
        if word.word()[pos as usize - 1] == 1 {
            stack.push(pos);
        } else {
            let f = stack
                .pop()
                .expect("reverse lattice word ran out of 1-positions");
            partner.push((pos, f));
        }
    }
    partner.sort_unstable();

    let k = params.k() as usize;
    let mut out = Decomposition::zero(*params);
    for signs in 0..(1u32 << k) {
        let factors: Vec<Factor> = partner
            .iter()
            .enumerate()
            .map(|(t, &(i, f))| {
                if signs >> t & 1 == 1 {
                    Factor::sym(i, f)
                } else {
                    Factor::anti(i, f)
                }
            })
            .collect();
        let root = KRoot::new(*params, Sign::Plus, factors)
            .expect("substitution produced an invalid root");
        out.add_assign_scaled(&dec.decompose(&root), &Rat::one());
    }
    out.scale(&Rat::new(Int::one(), Int::from(1u32 << k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kroot::enumerate_positive_roots;
    use crate::space::{rat, rat_int};
    use std::cmp::Ordering;

    fn params(n: u32, k: u32) -> SpaceParams {
        SpaceParams::new(n, k).unwrap()
    }

    fn root(params: SpaceParams, shape: &[(u32, u32, char)]) -> KRoot {
        let factors = shape
            .iter()
            .map(|&(i, j, c)| match c {
                '-' => Factor::anti(i, j),
                '+' => Factor::sym(i, j),
                _ => unreachable!(),
            })
            .collect();
        KRoot::new(params, Sign::Plus, factors).unwrap()
    }

    fn label(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    #[test]
    fn rules_preserve_expansion_for_all_tuples() {
        // every admissible index tuple at n = 8
        use itertools::Itertools;
        let p2 = params(8, 2);
        let p1 = params(8, 1);
        for rule in &RULES {
            let four_slots = rule.id <= 6;
            let tuples: Vec<Vec<u32>> = if four_slots {
                (1..=8u32).combinations(4).collect()
            } else {
                (1..=8u32).combinations(3).collect()
            };
            for tuple in tuples {
                let slots = SlotValues {
                    i: tuple[0],
                    j: tuple[1],
                    r: tuple[2],
                    s: if four_slots { tuple[3] } else { 0 },
                };
                let p = if rule.lhs.len() == 2 { p2 } else { p1 };
                let lhs = KRoot::new(
                    p,
                    Sign::Plus,
                    rule.lhs.iter().map(|t| t.instantiate(&slots)).collect(),
                )
                .unwrap();
                let mut rhs_sum = SparseVector::zero(p);
                for summand in rule.rhs {
                    let r = KRoot::new(
                        p,
                        Sign::Plus,
                        summand.iter().map(|t| t.instantiate(&slots)).collect(),
                    )
                    .unwrap();
                    rhs_sum.add_assign_scaled(&r.expand(), &rat_int(1));
                }
                assert_eq!(lhs.expand(), rhs_sum, "rule {} at {tuple:?}", rule.id);
            }
        }
    }

    #[test]
    fn apply_rule_crossing_example() {
        let p = params(4, 2);
        let r = root(p, &[(1, 3, '-'), (2, 4, '-')]);
        let d = r.find_defect().unwrap();
        let out = apply_rule(&r, &d).unwrap();
        assert_eq!(
            out,
            vec![
                root(p, &[(1, 2, '-'), (3, 4, '-')]),
                root(p, &[(1, 4, '-'), (2, 3, '-')]),
            ]
        );
    }

    #[test]
    fn apply_rule_nested_symmetric_example() {
        let p = params(4, 2);
        let r = root(p, &[(1, 4, '+'), (2, 3, '+')]);
        let d = r.find_defect().unwrap();
        let out = apply_rule(&r, &d).unwrap();
        assert_eq!(
            out,
            vec![
                root(p, &[(1, 2, '-'), (3, 4, '-')]),
                root(p, &[(1, 2, '+'), (3, 4, '+')]),
                root(p, &[(1, 4, '-'), (2, 3, '-')]),
            ]
        );
    }

    #[test]
    fn apply_rule_obstructed_example() {
        let p = params(3, 1);
        let r = root(p, &[(1, 2, '+')]);
        let d = r.find_defect().unwrap();
        let out = apply_rule(&r, &d).unwrap();
        assert_eq!(
            out,
            vec![
                root(p, &[(1, 2, '-')]),
                root(p, &[(2, 3, '-')]),
                root(p, &[(2, 3, '+')]),
            ]
        );
    }

    #[test]
    fn apply_rule_rejects_foreign_witness() {
        let p = params(4, 2);
        let r = root(p, &[(1, 2, '-'), (3, 4, '-')]);
        let bogus = Defect::Crossing {
            first: Factor::anti(1, 3),
            second: Factor::anti(2, 4),
        };
        assert!(apply_rule(&r, &bogus).is_err());
    }

    #[test]
    fn rewriting_descends_strictly() {
        for (n, k) in [(4u32, 2u32), (5, 2), (5, 1)] {
            let p = params(n, k);
            for r in enumerate_positive_roots(&p) {
                if let Some(d) = r.find_defect() {
                    let rv = r.expand();
                    for child in apply_rule(&r, &d).unwrap() {
                        assert_eq!(
                            child.expand().order_cmp(&rv),
                            Ordering::Less,
                            "{child} not below {r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_crossing_example() {
        let p = params(4, 2);
        let d = decompose_kroot(&root(p, &[(1, 3, '-'), (2, 4, '-')]));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&label("1212")), rat_int(1));
        assert_eq!(d.coeff(&label("1122")), rat_int(1));
    }

    #[test]
    fn decompose_chain_example() {
        // (x1+x3) at n = 4 runs rule 8 then rule 9
        let p = params(4, 1);
        let d = decompose_kroot(&root(p, &[(1, 3, '+')]));
        let expected = [("1211", 1), ("1121", 1), ("1112", 1), ("1111", 1)];
        assert_eq!(d.len(), expected.len());
        for (w, c) in expected {
            assert_eq!(d.coeff(&label(w)), rat_int(c), "{w}");
        }
    }

    #[test]
    fn decompose_fixes_basis_elements() {
        for (n, k) in [(4u32, 2u32), (5, 2), (6, 3)] {
            let p = params(n, k);
            for b in enumerate_canonical_basis(&p) {
                let d = decompose_kroot(&b);
                assert_eq!(d.len(), 1);
                assert_eq!(d.coeff(&b.label().unwrap()), rat_int(1));
            }
        }
    }

    #[test]
    fn decompose_negative_root_negates() {
        let p = params(4, 2);
        let r = root(p, &[(1, 3, '-'), (2, 4, '-')]);
        let d = decompose_kroot(&r);
        let dn = decompose_kroot(&r.negated());
        for (l, c) in d.iter() {
            assert_eq!(dn.coeff(l), -c.clone());
        }
        assert_eq!(dn.len(), d.len());
    }

    #[test]
    fn decomposition_reconstructs_the_expansion() {
        for (n, k) in [(4u32, 2u32), (5, 2), (6, 2)] {
            let p = params(n, k);
            let mut dec = Decomposer::new();
            for r in enumerate_positive_roots(&p) {
                let d = dec.decompose(&r);
                assert!(d.all_integer());
                assert!(d.all_nonnegative());
                assert_eq!(d.to_vector(), r.expand(), "{r}");
            }
        }
    }

    #[test]
    fn policy_choice_does_not_change_decompositions() {
        for (n, k) in [(5u32, 1u32), (5, 2), (6, 2)] {
            let p = params(n, k);
            let mut small = Decomposer::with_policy(UnusedIndexPolicy::Smallest);
            let mut large = Decomposer::with_policy(UnusedIndexPolicy::Largest);
            for r in enumerate_positive_roots(&p) {
                assert_eq!(small.decompose(&r), large.decompose(&r), "{r}");
            }
        }
    }

    #[test]
    fn oracle_matches_rewriting() {
        let p = params(4, 2);
        let solver = BasisSolver::new(p);
        let r = root(p, &[(1, 3, '-'), (2, 4, '-')]);
        let d = solver.solve(&r.expand());
        assert_eq!(d, decompose_kroot(&r));
        // zero vector
        assert!(solver.solve(&SparseVector::zero(p)).is_empty());
    }

    #[test]
    fn oracle_matches_rewriting_exhaustively_small() {
        for (n, k) in [(4u32, 1u32), (4, 2), (5, 2)] {
            let p = params(n, k);
            let solver = BasisSolver::new(p);
            let mut dec = Decomposer::new();
            for r in enumerate_positive_roots(&p) {
                assert_eq!(solver.solve(&r.expand()), dec.decompose(&r), "{r}");
            }
        }
    }

    #[test]
    fn change_of_basis_matrices_are_inverse() {
        for (n, k) in [(4u32, 2u32), (5, 2), (6, 3), (7, 3)] {
            let (m2b, b2m) = change_of_basis(params(n, k));
            assert!(m2b.mul(&b2m).is_identity());
            assert!(b2m.mul(&m2b).is_identity());
        }
    }

    #[test]
    fn expansion_matrix_column_of_the_all_ones_label() {
        // (x1+x2)(x3+x4) hits exactly the four monomials mixing the two pairs
        let p = params(4, 2);
        let solver = BasisSolver::new(p);
        let col_index = solver
            .labels()
            .iter()
            .position(|l| l == &label("1111"))
            .unwrap();
        let col = solver.basis_to_monomials().column(col_index);
        for (m, c) in solver.monomials().iter().zip(col) {
            let expect = match m.indices() {
                [1, 3] | [1, 4] | [2, 3] | [2, 4] => rat_int(1),
                _ => rat_int(0),
            };
            assert_eq!(c, expect, "{m}");
        }
    }

    #[test]
    fn monomial_decompose_two_variables() {
        // x1 = 1/2 (x1 - x2) + 1/2 (x1 + x2)
        let p = params(2, 1);
        let m = MonomialIndex::new(&p, vec![1]).unwrap();
        let d = monomial_decompose(&p, &m);
        assert_eq!(d.coeff(&label("12")), rat(1, 2));
        assert_eq!(d.coeff(&label("11")), rat(1, 2));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn monomial_decompose_x4_goes_negative() {
        // the word of x4 at n = 4 is 1112, not reverse lattice; the oracle
        // kicks in and produces a negative coefficient
        let p = params(4, 1);
        let m = MonomialIndex::new(&p, vec![4]).unwrap();
        let d = monomial_decompose(&p, &m);
        assert_eq!(d.coeff(&label("1111")), rat(1, 2));
        assert_eq!(d.coeff(&label("1112")), rat(-1, 2));
        assert_eq!(d.len(), 2);
        assert!(!d.all_nonnegative());
    }

    #[test]
    fn monomial_decompose_quarter_coefficients() {
        let p = params(4, 2);
        let m = MonomialIndex::new(&p, vec![1, 2]).unwrap();
        let d = monomial_decompose(&p, &m);
        assert!(d.all_nonnegative());
        for (_, c) in d.iter() {
            assert!((c * rat_int(4)).denom().is_one());
        }
        // reconstruction
        assert_eq!(d.to_vector(), SparseVector::monomial(p, m));
    }

    #[test]
    fn monomial_decompose_agrees_with_oracle() {
        for (n, k) in [(4u32, 2u32), (5, 2), (6, 3)] {
            let p = params(n, k);
            let solver = BasisSolver::new(p);
            let mut dec = Decomposer::new();
            for m in crate::space::enumerate_monomials(&p) {
                let fast = monomial_decompose_with(&p, &m, &mut dec, Some(&solver));
                let slow = solver.solve(&SparseVector::monomial(p, m.clone()));
                assert_eq!(fast, slow, "{m}");
            }
        }
    }

    #[test]
    fn decomposition_serialization() {
        let p = params(4, 2);
        let d = decompose_kroot(&root(p, &[(1, 3, '-'), (2, 4, '-')]));
        let j = d.to_json();
        assert_eq!(j["n"], 4);
        assert_eq!(j["k"], 2);
        assert_eq!(j["coeffs"]["1122"], "1");
        assert_eq!(j["coeffs"]["1212"], "1");
        let csv = d.to_csv();
        assert_eq!(csv, "label,numerator,denominator\n1122,1,1\n1212,1,1\n");
    }
}
