//! Zonal spherical functions of the Gelfand pair (S_n, S_k x S_{n-k}),
//! realized inside V_{n,k}.
//!
//! For each j = 0..k the seed root beta_j pairs the first j letters
//! antisymmetrically and the next k - j symmetrically with partners k+1,
//! ..., 2k. Summing its orbit under the symmetric group on {j+1, ..., n},
//! symmetrizing over the first k letters, and normalizing so the
//! coefficient of x_1 ... x_k is 1 yields the spherical function Phi_j.
//! All claimed properties are rechecked at construction time or by
//! [`certify`].

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::action::{
    act_on_vector, apply_signed, differential, young_symmetrizer_apply, Permutation,
    SignedTransposition,
};
use crate::error::Error;
use crate::kroot::{Factor, KRoot, Sign};
use crate::linalg::Mat;
use crate::rewrite::{BasisSolver, Decomposition};
use crate::space::{
    enumerate_monomials, factorial, Int, MonomialIndex, Rat, SpaceParams, SparseVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalParams {
    space: SpaceParams,
    j: u32,
}

impl SphericalParams {
    pub fn new(space: SpaceParams, j: u32) -> Result<Self, Error> {
        if j > space.k() {
            return Err(Error::params(format!("j = {j} exceeds k = {}", space.k())));
        }
        Ok(SphericalParams { space, j })
    }

    pub fn space(&self) -> &SpaceParams {
        &self.space
    }

    pub fn j(&self) -> u32 {
        self.j
    }
}

/// The seed: (x_1 - x_{k+1}) ... (x_j - x_{k+j}) (x_{j+1} + x_{k+j+1}) ...
/// (x_k + x_{2k}).
pub fn beta(sp: &SphericalParams) -> KRoot {
    let k = sp.space.k();
    let factors: Vec<Factor> = (1..=k)
        .map(|i| {
            if i <= sp.j {
                Factor::anti(i, k + i)
            } else {
                Factor::sym(i, k + i)
            }
        })
        .collect();
    KRoot::new(sp.space, Sign::Plus, factors).expect("seed root is valid")
}

/// Generators of the subgroup S_k x S_{n-k}: adjacent transpositions
/// within {1..k} and within {k+1..n}.
pub fn pair_subgroup_generators(params: &SpaceParams) -> Vec<Permutation> {
    let n = params.n();
    let k = params.k();
    let mut gens = Vec::new();
    for m in 1..k {
        gens.push(Permutation::transposition(n, m, m + 1).expect("valid pair"));
    }
    for m in k + 1..n {
        gens.push(Permutation::transposition(n, m, m + 1).expect("valid pair"));
    }
    gens
}

/// All ways to split a set of even size into unordered pairs.
fn pairings(items: &[u32]) -> Vec<Vec<(u32, u32)>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for idx in 1..items.len() {
        let partner = items[idx];
        let rest: Vec<u32> = items[1..]
            .iter()
            .copied()
            .filter(|&x| x != partner)
            .collect();
        for mut tail in pairings(&rest) {
            tail.insert(0, (first, partner));
            out.push(tail);
        }
    }
    out
}

fn stabilizer_order(sp: &SphericalParams) -> Int {
    let n = sp.space.n() as u64;
    let k = sp.space.k() as u64;
    let j = sp.j as u64;
    factorial(n - 2 * k) * factorial(k - j) * Int::from(2u32).pow((k - j) as u32)
}

/// Sum of sigma(beta_j) over all sigma in the symmetric group on {j+1,
/// ..., n}, including repeats. Images repeat exactly `stabilizer_order`
/// times, so the sum aggregates over distinct images: an ordered choice of
/// antisymmetric partners and a set of disjoint symmetric pairs.
pub fn orbit_sum(sp: &SphericalParams) -> SparseVector {
    let n = sp.space.n();
    let k = sp.space.k();
    let j = sp.j;
    let block: Vec<u32> = (j + 1..=n).collect();
    let weight = Rat::from_integer(stabilizer_order(sp));
    let mut total = SparseVector::zero(sp.space);
    for tuple in block.iter().copied().permutations(j as usize) {
        let rest: Vec<u32> = block
            .iter()
            .copied()
            .filter(|x| !tuple.contains(x))
            .collect();
        for choice in rest.iter().copied().combinations(2 * (k - j) as usize) {
            for pairing in pairings(&choice) {
                let mut factors: Vec<Factor> = (1..=j)
                    .map(|i| Factor::anti(i, tuple[i as usize - 1]))
                    .collect();
                factors.extend(pairing.iter().map(|&(p, q)| Factor::sym(p, q)));
                let image = KRoot::new(sp.space, Sign::Plus, factors).expect("image root is valid");
                total.add_assign_scaled(&image.expand(), &weight);
            }
        }
    }
    total
}

/// Literal version of [`orbit_sum`] looping over every permutation of the
/// block; for cross-checks at small n.
pub fn orbit_sum_brute(sp: &SphericalParams) -> SparseVector {
    let n = sp.space.n();
    let j = sp.j;
    let block: Vec<u32> = (j + 1..=n).collect();
    let seed = beta(sp).expand();
    let mut total = SparseVector::zero(sp.space);
    for image in block.iter().copied().permutations(block.len()) {
        let mut map: Vec<u32> = (1..=n).collect();
        for (pos, &val) in block.iter().zip(image.iter()) {
            map[*pos as usize - 1] = val;
        }
        let perm = Permutation::from_one_line(map).expect("block image is a permutation");
        total.add_assign_scaled(&act_on_vector(&perm, &seed), &Rat::one());
    }
    total
}

/// A spherical function together with its canonical-basis coordinates and
/// the guaranteed denominator bound N = k! (n-k)! / ((k-j)! (n-2k)!).
pub struct SphericalFunction {
    params: SphericalParams,
    vector: SparseVector,
    basis_coeffs: Decomposition,
    denominator_bound: Int,
}

impl SphericalFunction {
    pub fn params(&self) -> &SphericalParams {
        &self.params
    }

    pub fn vector(&self) -> &SparseVector {
        &self.vector
    }

    pub fn basis_coeffs(&self) -> &Decomposition {
        &self.basis_coeffs
    }

    pub fn denominator_bound(&self) -> &Int {
        &self.denominator_bound
    }
}

fn denominator_bound(sp: &SphericalParams) -> Int {
    let n = sp.space.n() as u64;
    let k = sp.space.k() as u64;
    let j = sp.j as u64;
    let mut num = Int::one();
    for v in (k - j + 1)..=k {
        num *= Int::from(v);
    }
    for v in (n - 2 * k + 1)..=(n - k) {
        num *= Int::from(v);
    }
    num
}

pub fn spherical_function(sp: &SphericalParams) -> SphericalFunction {
    spherical_function_with(sp, &BasisSolver::new(*sp.space()))
}

/// Builds Phi_j and rechecks its defining properties; panics if any fails,
/// since they are certified facts rather than input conditions.
pub fn spherical_function_with(sp: &SphericalParams, solver: &BasisSolver) -> SphericalFunction {
    let n = sp.space.n() as u64;
    let k = sp.space.k() as u64;
    let j = sp.j as u64;
    let symmetrized = young_symmetrizer_apply(&orbit_sum(sp), sp.space.k())
        .expect("k is within symmetrizer range");
    let scale = Rat::new(
        Int::one(),
        factorial(k) * factorial(n - k) * Int::from(2u32).pow((k - j) as u32) * factorial(k - j),
    );
    let vector = symmetrized.scale(&scale);

    let leading = MonomialIndex::new(&sp.space, (1..=sp.space.k()).collect())
        .expect("x_1 ... x_k is a valid monomial");
    assert!(
        vector.coeff(&leading).is_one(),
        "normalization failed: coefficient of the leading monomial is not 1"
    );

    let basis_coeffs = solver.solve(&vector);
    let bound = denominator_bound(sp);
    for (label, c) in basis_coeffs.iter() {
        assert!(
            !c.is_negative(),
            "negative canonical coefficient at {label}"
        );
        assert!(
            (c * Rat::from_integer(bound.clone())).denom().is_one(),
            "denominator of coefficient at {label} exceeds the bound"
        );
    }

    SphericalFunction {
        params: *sp,
        vector,
        basis_coeffs,
        denominator_bound: bound,
    }
}

/// Representative of the K-orbit of monomials meeting {1..k} in k - m
/// letters: x_1 ... x_{k-m} x_{k+1} ... x_{k+m}.
pub fn orbit_representative(params: &SpaceParams, m: u32) -> MonomialIndex {
    assert!(m <= params.k(), "orbit index exceeds k");
    let mut indices: Vec<u32> = (1..=params.k() - m).collect();
    indices.extend(params.k() + 1..=params.k() + m);
    MonomialIndex::new(params, indices).expect("representative is a valid monomial")
}

/// The (k+1) x (k+1) table of spherical values: row j, column m holds the
/// coefficient of Phi_j on the orbit representative with m letters outside
/// {1..k}.
pub fn spherical_table(params: &SpaceParams) -> Mat {
    let k = params.k();
    let solver = BasisSolver::new(*params);
    let mut table = Mat::zeros(k as usize + 1, k as usize + 1);
    for j in 0..=k {
        let sp = SphericalParams::new(*params, j).expect("j <= k");
        let phi = spherical_function_with(&sp, &solver);
        for m in 0..=k {
            table[(j as usize, m as usize)] = phi.vector.coeff(&orbit_representative(params, m));
        }
    }
    table
}

/// Dimension of the K-invariant subspace of V_{n,k}, computed as the joint
/// fixed space of the subgroup generators. For a Gelfand pair this equals
/// the number of spherical functions, k + 1.
pub fn k_invariant_dimension(params: &SpaceParams) -> usize {
    let monomials = enumerate_monomials(params);
    let dim = monomials.len();
    let gens = pair_subgroup_generators(params);
    if gens.is_empty() {
        return dim;
    }
    let mut stacked = Mat::zeros(dim * gens.len(), dim);
    for (block, gen) in gens.iter().enumerate() {
        for (col, m) in monomials.iter().enumerate() {
            let image = act_on_vector(gen, &SparseVector::monomial(*params, m.clone()));
            for (row, target) in monomials.iter().enumerate() {
                let mut entry = image.coeff(target);
                if row == col {
                    entry -= Rat::one();
                }
                stacked[(block * dim + row, col)] = entry;
            }
        }
    }
    stacked.nullspace().len()
}

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Certificate {
    pub params: SphericalParams,
    pub checks: Vec<CheckOutcome>,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Certifies the defining properties of Phi_j: invariance under S_k x
/// S_{n-k}, unit leading coefficient, membership in the kernel of
/// d^{k-j+1}, orthogonality to the other spherical functions, nonnegative
/// basis coordinates with bounded denominators, and constancy on K-orbits
/// of monomials.
pub fn certify(sp: &SphericalParams) -> Certificate {
    let solver = BasisSolver::new(*sp.space());
    let phi = spherical_function_with(sp, &solver);
    let k = sp.space.k();
    let mut checks = Vec::new();

    let mut invariant = true;
    let mut witness = String::new();
    for gen in pair_subgroup_generators(sp.space()) {
        if act_on_vector(&gen, &phi.vector) != phi.vector {
            invariant = false;
            witness = format!("moved by {gen}");
            break;
        }
    }
    checks.push(CheckOutcome {
        name: "subgroup_invariance",
        passed: invariant,
        detail: if invariant {
            format!(
                "fixed by all {} generators",
                pair_subgroup_generators(sp.space()).len()
            )
        } else {
            witness
        },
    });

    let leading = MonomialIndex::new(sp.space(), (1..=k).collect()).expect("leading monomial");
    let lead_coeff = phi.vector.coeff(&leading);
    checks.push(CheckOutcome {
        name: "unit_leading_coefficient",
        passed: lead_coeff.is_one(),
        detail: format!("coefficient of {leading} is {lead_coeff}"),
    });

    let mut power = phi.vector.clone();
    let mut vanished = false;
    for _ in 0..(k - sp.j + 1) {
        match differential(&power) {
            Ok(next) => power = next,
            Err(_) => {
                // degree zero reached: d annihilates constants
                vanished = true;
                break;
            }
        }
    }
    let vanished = vanished || power.is_zero();
    checks.push(CheckOutcome {
        name: "kernel_membership",
        passed: vanished,
        detail: format!("d^{} sends Phi_{} to zero", k - sp.j + 1, sp.j),
    });

    let mut orthogonal = true;
    let mut ortho_detail = String::from("orthogonal to every other spherical function");
    for other_j in 0..=k {
        if other_j == sp.j {
            continue;
        }
        let other = SphericalParams::new(*sp.space(), other_j).expect("j <= k");
        let other_phi = spherical_function_with(&other, &solver);
        let ip = phi
            .vector
            .inner_product(&other_phi.vector)
            .expect("same space");
        if !ip.is_zero() {
            orthogonal = false;
            ortho_detail = format!("inner product with Phi_{other_j} is {ip}");
            break;
        }
    }
    checks.push(CheckOutcome {
        name: "orthogonality",
        passed: orthogonal,
        detail: ortho_detail,
    });

    let nonneg = phi.basis_coeffs.all_nonnegative();
    let bounded = phi.basis_coeffs.iter().all(|(_, c)| {
        (c * Rat::from_integer(phi.denominator_bound.clone()))
            .denom()
            .is_one()
    });
    checks.push(CheckOutcome {
        name: "basis_positivity",
        passed: nonneg && bounded,
        detail: format!(
            "coordinates nonnegative: {nonneg}; N = {} clears denominators: {bounded}",
            phi.denominator_bound
        ),
    });

    let mut constant = true;
    let mut constancy_detail = String::from("coefficients depend only on the orbit");
    for mono in enumerate_monomials(sp.space()) {
        let inside = mono.indices().iter().filter(|&&i| i <= k).count() as u32;
        let rep = orbit_representative(sp.space(), k - inside);
        if phi.vector.coeff(&mono) != phi.vector.coeff(&rep) {
            constant = false;
            constancy_detail = format!("{mono} differs from its representative {rep}");
            break;
        }
    }
    checks.push(CheckOutcome {
        name: "orbit_constancy",
        passed: constant,
        detail: constancy_detail,
    });

    Certificate {
        params: *sp,
        checks,
    }
}

/// The root beta_j spans the joint (-1)-eigenspace of its signed
/// transpositions; exposed for the verification suite.
pub fn seed_transpositions(sp: &SphericalParams) -> Vec<SignedTransposition> {
    crate::action::signed_transpositions(&beta(sp))
}

/// Applies every seed transposition and checks each negates the seed.
pub fn seed_is_negated_by_its_transpositions(sp: &SphericalParams) -> bool {
    let v = beta(sp).expand();
    seed_transpositions(sp).iter().all(|t| {
        let mut image = apply_signed(t, &v);
        image.add_assign_scaled(&v, &Rat::one());
        image.is_zero()
    })
}
