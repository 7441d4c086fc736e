//! Contraction classes of self-maps on finite metric spaces.
//!
//! The crate classifies a self-map `T` of a finite metric space against six
//! contraction conditions (Banach, Kannan, Chatterjea, perimeter
//! contracting, generalized Kannan, generalized Chatterjea), runs Picard
//! iteration with explicit rate-bound audits, checks the implications
//! between the classes on randomized corpora, and searches small spaces
//! exhaustively for separating counterexamples.
//!
//! Distances are generic over [`Scalar`]: `f64` for randomized work and
//! [`num_rational::BigRational`] wherever a result must be exact.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod io;
pub mod metric;
pub mod parallel;
pub mod props;
pub mod scalar;
pub mod search;
pub mod selfmap;
pub mod solver;

pub use num_rational;

pub use classify::{
    classify_all, membership_oracle, min_constant, ratio, ClassificationReport, Constant,
    ContractionClass,
};
pub use corpus::Instance;
pub use metric::{
    enumerate_grid_spaces, gen_euclidean, metric_repair, validate, FiniteMetricSpace, MetricError,
    Norm, RawDistanceMatrix,
};
pub use scalar::Scalar;
pub use selfmap::{
    fixed_points, has_prime_period_two, is_asymptotically_regular, orbit, prime_period,
    OrbitSummary, SelfMap,
};
pub use search::{
    dedupe, goal_predicate, run_search, verify_witness, GoalKind, SearchGoal, SearchSummary, Strategy,
    WitnessRecord,
};
pub use solver::{
    audit_rate_bounds, check_hypotheses, picard_solve, verify_fixed_point_count, OrbitTrace,
    SolveReport,
};
