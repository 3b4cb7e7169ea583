//! Exact arithmetic for k-roots.
//!
//! A k-root is a product of k binomial factors (+-x_i +- x_j) using 2k
//! distinct variable indices; it lives in the space V_{n,k} spanned by the
//! squarefree monomials of degree k in x_1..x_n. The defect-free positive
//! k-roots form a canonical basis B_{n,k} of V_{n,k}, indexed by lattice
//! words of length n over {1,2} with at most k twos. This crate provides:
//!
//! * the monomial space with its lexicographic order and the induced total
//!   order on vectors ([`space`]),
//! * k-roots, defects, labels, and the canonical basis ([`kroot`]),
//! * the nine-rule positivity-preserving rewriting system together with an
//!   independent linear-algebra decomposition oracle ([`rewrite`]),
//! * the S_n action, representation matrices, the differential operator,
//!   the height filtration, and Young symmetrizers ([`action`]),
//! * zonal spherical functions of the Gelfand pair (S_n, S_k x S_{n-k})
//!   with machine-checkable certificates ([`spherical`]),
//! * a parser for the textual k-root syntax ([`expr`]) and a property
//!   verification suite ([`suite`]).
//!
//! Everything is computed over exact rationals; there are no floating
//! point numbers anywhere. All functions are pure and the core types are
//! plain data, so batch work may be parallelized by the caller.

pub mod action;
pub mod error;
pub mod expr;
pub mod kroot;
pub mod linalg;
pub mod rewrite;
pub mod space;
pub mod spherical;
pub mod suite;

pub use action::{
    act_on_kroot, act_on_vector, adjacent_transpositions, apply_signed, ballot_number,
    differential, differential_matrix, differential_power_matrix, filtration_basis,
    joint_negative_eigenspace_dim, rep_matrix, signed_transpositions, verify_filtration,
    young_symmetrizer_apply, FiltrationReport, Permutation, RepMatrix, SignedTransposition,
};
pub use error::Error;
pub use expr::{parse_expr, parse_kroot, parse_monomial, Expr};
pub use kroot::{
    enumerate_canonical_basis, enumerate_lattice_words, enumerate_positive_roots, from_label,
    normalize, word_class, Defect, Factor, FactorKind, KRoot, Label, RawFactor, Sign,
    UnusedIndexPolicy, WordClass,
};
pub use linalg::Mat;
pub use rewrite::{
    apply_rule, change_of_basis, decompose_kroot, decompose_vector_oracle, monomial_decompose,
    monomial_decompose_with, rule_for_defect, BasisSolver, Decomposer, Decomposition, RewriteRule,
    RULES,
};
pub use space::{
    enumerate_monomials, lex_compare, Int, MonomialIndex, Rat, SpaceParams, SparseVector,
    VectorSign,
};
pub use spherical::{
    beta, certify, k_invariant_dimension, orbit_representative, orbit_sum, orbit_sum_brute,
    pair_subgroup_generators, spherical_function, spherical_function_with, spherical_table,
    Certificate, CheckOutcome, SphericalFunction, SphericalParams,
};
pub use suite::{random_positive_root, run_suite, CheckResult, SuiteReport};
