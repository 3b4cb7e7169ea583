//! A named battery of exact checks over one parameter pair, used by the
//! command-line `verify` subcommand. Sampling is deterministic in the
//! seed; everything else is exhaustive over small structured sets (the
//! canonical basis, monomials, filtration levels, spherical indices).

use std::cmp::Ordering;

use num_traits::{One, Signed};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{
    act_on_kroot, act_on_vector, adjacent_transpositions, ballot_number, differential_matrix,
    joint_negative_eigenspace_dim, rep_matrix, verify_filtration, young_symmetrizer_apply,
    Permutation,
};
use crate::kroot::{
    enumerate_canonical_basis, from_label, Factor, FactorKind, KRoot, Sign, UnusedIndexPolicy,
};
use crate::rewrite::{apply_rule, monomial_decompose_with, BasisSolver, Decomposer};
use crate::space::{enumerate_monomials, Rat, SpaceParams};
use crate::spherical::{certify, orbit_sum, orbit_sum_brute, SphericalParams};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct SuiteReport {
    pub params: SpaceParams,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.params.n(),
            "k": self.params.k(),
            "seed": self.seed,
            "ok": self.ok(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// A uniformly random positive k-root: 2k indices, paired off, each pair
/// antisymmetric or symmetric with equal probability.
pub fn random_positive_root<R: Rng + ?Sized>(params: &SpaceParams, rng: &mut R) -> KRoot {
    use rand::seq::SliceRandom;
    let mut all: Vec<u32> = (1..=params.n()).collect();
    all.shuffle(rng);
    let factors: Vec<Factor> = (0..params.k() as usize)
        .map(|t| {
            let a = all[2 * t];
            let b = all[2 * t + 1];
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let kind = if rng.random::<bool>() {
                FactorKind::Symmetric
            } else {
                FactorKind::Antisymmetric
            };
            Factor::new(lo, hi, kind).expect("indices are distinct")
        })
        .collect();
    KRoot::new(*params, Sign::Plus, factors).expect("sampled root is valid")
}

fn push(checks: &mut Vec<CheckResult>, name: &'static str, passed: bool, detail: String) {
    checks.push(CheckResult {
        name,
        passed,
        detail,
    });
}

pub fn run_suite(params: &SpaceParams, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let n = params.n();
    let k = params.k();

    let basis = enumerate_canonical_basis(params);
    {
        let count_ok = basis.len() == params.dim();
        let roundtrip_ok = basis.iter().all(|b| {
            b.label()
                .ok()
                .and_then(|l| from_label(&l, *params).ok())
                .is_some_and(|r| r == *b)
        });
        push(
            &mut checks,
            "basis_count_and_label_roundtrip",
            count_ok && roundtrip_ok,
            format!("{} basis elements, dim = {}", basis.len(), params.dim()),
        );
    }

    {
        let mut ok = true;
        for h in 0..=k {
            let count = basis.iter().filter(|r| r.height() == h).count();
            if count != ballot_number(n, k - h) as usize {
                ok = false;
                break;
            }
        }
        push(
            &mut checks,
            "height_layer_counts",
            ok,
            "one layer of dimension T(n, k-h) per height h".to_string(),
        );
    }

    let samples: Vec<KRoot> = (0..24)
        .map(|_| random_positive_root(params, &mut rng))
        .collect();
    let solver = BasisSolver::new(*params);
    let mut dec = Decomposer::new();

    {
        let mut ok = true;
        for r in &samples {
            let d = dec.decompose(r);
            if !d.all_integer() || !d.all_nonnegative() || d.to_vector() != r.expand() {
                ok = false;
                break;
            }
        }
        push(
            &mut checks,
            "rewrite_soundness_and_positivity",
            ok,
            format!("{} sampled roots", samples.len()),
        );
    }

    {
        let ok = samples
            .iter()
            .all(|r| solver.solve(&r.expand()) == dec.decompose(r));
        push(
            &mut checks,
            "oracle_agreement",
            ok,
            "rewriting matches exact elimination".to_string(),
        );
    }

    {
        let mut large = Decomposer::with_policy(UnusedIndexPolicy::Largest);
        let ok = samples
            .iter()
            .all(|r| large.decompose(r) == dec.decompose(r));
        push(
            &mut checks,
            "choice_independence",
            ok,
            "smallest and largest unused index policies agree".to_string(),
        );
    }

    {
        let mut ok = true;
        for r in &samples {
            if let Some(d) = r.find_defect() {
                let v = r.expand();
                for child in apply_rule(r, &d).expect("defect is applicable") {
                    if child.expand().order_cmp(&v) != Ordering::Less {
                        ok = false;
                        break;
                    }
                }
            }
        }
        push(
            &mut checks,
            "strict_descent",
            ok,
            "every rewrite output is smaller in the total order".to_string(),
        );
    }

    {
        let ok = basis.iter().all(|b| {
            let d = dec.decompose(b);
            d.len() == 1 && d.coeff(&b.label().expect("canonical")).is_one()
        });
        push(
            &mut checks,
            "basis_indecomposability",
            ok,
            "every canonical element decomposes to itself".to_string(),
        );
    }

    let perms: Vec<Permutation> = (0..6).map(|_| Permutation::random(n, &mut rng)).collect();
    {
        let mut ok = true;
        'outer: for perm in &perms {
            for r in samples.iter().take(8) {
                if act_on_kroot(perm, r).expand() != act_on_vector(perm, &r.expand()) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        push(
            &mut checks,
            "action_commutes_with_expansion",
            ok,
            format!("{} permutations against 8 roots", perms.len()),
        );
    }

    {
        let mut ok = true;
        for gen in adjacent_transpositions(n) {
            let rep = rep_matrix(params, &gen, &mut dec);
            let integral = (0..params.dim())
                .all(|r| (0..params.dim()).all(|c| rep.matrix()[(r, c)].denom().is_one()));
            if !rep.sign_coherent() || !integral {
                ok = false;
                break;
            }
        }
        push(
            &mut checks,
            "transposition_matrices_sign_coherent",
            ok,
            "integer entries, one sign per column".to_string(),
        );
    }

    {
        let a = &perms[0];
        let b = &perms[1];
        let ma = rep_matrix(params, a, &mut dec);
        let mb = rep_matrix(params, b, &mut dec);
        let mab = rep_matrix(params, &a.compose(b), &mut dec);
        push(
            &mut checks,
            "representation_homomorphism",
            ma.matrix().mul(mb.matrix()) == *mab.matrix(),
            format!("checked on {a} and {b}"),
        );
    }

    {
        let mut ok = true;
        let mut detail = String::from("all levels closed, kernel-exact, with ballot layer sizes");
        for t in 0..=k {
            let report = verify_filtration(params, t).expect("level in range");
            if !report.ok() {
                ok = false;
                detail = format!("level {t} failed");
                break;
            }
        }
        push(&mut checks, "height_filtration", ok, detail);
    }

    {
        let m = differential_matrix(params);
        let mut ok = true;
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let e = &m[(r, c)];
                if !e.denom().is_one()
                    || e.is_negative()
                    || !(e / Rat::from_integer(2.into())).denom().is_one()
                {
                    ok = false;
                }
            }
        }
        push(
            &mut checks,
            "differential_parity",
            ok,
            "differential matrix entries are even and nonnegative".to_string(),
        );
    }

    {
        let mut ok = true;
        for t in 0..=k {
            let level = crate::action::filtration_basis(params, t);
            let boundary = n - k + t;
            let killed = level.iter().all(|b| {
                boundary == n
                    || young_symmetrizer_apply(&b.expand(), boundary + 1)
                        .expect("within range")
                        .is_zero()
            });
            let survives = level.iter().any(|b| {
                !young_symmetrizer_apply(&b.expand(), boundary)
                    .expect("within range")
                    .is_zero()
            });
            if !killed || !survives {
                ok = false;
                break;
            }
        }
        push(
            &mut checks,
            "symmetrizer_boundary",
            ok,
            "width n-k+t acts nontrivially, width n-k+t+1 annihilates".to_string(),
        );
    }

    {
        let mut ok = true;
        let mut detail = String::from("all spherical certificates pass");
        for j in 0..=k {
            let sp = SphericalParams::new(*params, j).expect("j <= k");
            let cert = certify(&sp);
            if !cert.ok() {
                ok = false;
                detail = format!("certificate failed at j = {j}");
                break;
            }
            if n <= 7 && orbit_sum(&sp) != orbit_sum_brute(&sp) {
                ok = false;
                detail = format!("orbit aggregation disagrees with brute force at j = {j}");
                break;
            }
        }
        push(&mut checks, "spherical_certificates", ok, detail);
    }

    {
        let mut ok = true;
        let two_k = Rat::from_integer(crate::space::Int::from(1u64 << k.min(63)));
        for mono in enumerate_monomials(params) {
            let word = crate::kroot::Label::of_monomial(params, &mono);
            let reverse = matches!(
                crate::kroot::word_class(&word),
                crate::kroot::WordClass::ReverseLatticeWord | crate::kroot::WordClass::Both
            );
            if !reverse {
                continue;
            }
            let d = monomial_decompose_with(params, &mono, &mut dec, Some(&solver));
            if !d.all_nonnegative() || !d.iter().all(|(_, c)| (c * &two_k).denom().is_one()) {
                ok = false;
                break;
            }
        }
        push(
            &mut checks,
            "reverse_lattice_positivity",
            ok,
            "such monomials decompose with nonnegative multiples of 2^-k".to_string(),
        );
    }

    {
        let ok = samples
            .iter()
            .take(3)
            .all(|r| joint_negative_eigenspace_dim(r) == 1);
        push(
            &mut checks,
            "signed_eigenspace_line",
            ok,
            "each sampled root spans its joint (-1)-eigenspace".to_string(),
        );
    }

    SuiteReport {
        params: *params,
        seed,
        checks,
    }
}
