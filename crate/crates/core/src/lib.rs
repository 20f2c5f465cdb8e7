//! Exact level-set machinery for the Takagi function
//! `T(x) = Σ 2⁻ⁿ φ(2ⁿx)`, `φ(x) = dist(x, ℤ)`.
//!
//! Everything is computed over exact rationals: evaluation of `T`, Takagi
//! expansions of ordinates, inversion of `T(x) = y`, classification of level
//! set cardinalities, local level sets, humps and rigorous bounds on the
//! measure of the set of ordinates with two-point level sets. An independent
//! branch-and-bound oracle cross-checks the symbolic results.

pub mod arith;
pub mod engine;
pub mod error;
pub mod eval;
pub mod expansion;
pub mod humps;
pub mod local;
pub mod oracle;
pub mod serde_rational;

pub use arith::{
    digit_sum_d, format_rational, has_three_zero_run_after_first_one, int, is_dyadic,
    parse_rational, pow2, pow4, rat, to_binary, to_f64, BinaryExpansion, Rational,
};
pub use engine::{
    cardinality, construct_witness, doubling_bound_check, enumerate_level_set,
    is_two_point_level_set, verify_difference_claims, AffineMap, Cardinality, CardinalityResult,
    DoublingVerdict, LevelSetEnumeration, Membership, MembershipResult, WitnessConstruction,
    DEFAULT_BUDGET,
};
pub use error::{Result, TakagiError};
pub use eval::{check_functional_equation, phi, takagi, takagi_fraction, takagi_partial, PartialEvaluation};
pub use expansion::{
    alternative_expansions, canonical_expansion, expansion_to_abscissa, expansion_to_ordinate,
    fixed_point, kappa, phi_map, psi, t_k, FixedPoint, OrdinateInterval, Tail, TakagiExpansion,
};
pub use humps::{
    catalan, enumerate_humps, removed_interval, removed_intervals, s2_measure_bounds, sigma_k,
    sigma_recursion_holds, write_humps_csv, HumpDescriptor, HumpFilter, MeasureBounds,
    RemovedIntervalSystem,
};
pub use local::{local_level_set, same_local_level_set, LocalCardinality, LocalLevelSet, LocalMember};
pub use oracle::{enclose, level_set_cover, DyadicBox, IntervalCover};
