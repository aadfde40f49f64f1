//! Atkinson inequality measures over income distributions, plus the national
//! accounting needed to impute unpaid household labor into GDP and compare
//! the resulting inequality against a baseline.
//!
//! The crate is organized around five building blocks:
//!
//! - [`distributions`] — weighted income distributions and a deterministic
//!   lognormal discretization.
//! - [`inequality`] — the Atkinson scale (general ε including the limits),
//!   equally distributed equivalent income, Gini, subgroup decomposition and
//!   ε sweeps.
//! - [`national_accounts`] — exact-integer GDP identities, per-capita means
//!   and the housewife-labor imputation pipeline.
//! - [`model`] — the two-stage comparison (baseline I₁ vs imputed I₂),
//!   hypothesis verdicts and the audit report.
//! - [`ingest`] — strict CSV loading and saving for all supported schemas.
//!
//! Distribution math is double precision; national aggregates are exact
//! integers with division deferred to the final per-capita step.

pub mod bundled;
pub mod distributions;
pub mod ingest;
pub mod inequality;
pub mod model;
pub mod national_accounts;

mod math;

pub use distributions::{DistributionError, IncomeDistribution, LognormalSpec};
pub use inequality::{
    atkinson, atkinson_lognormal, atkinson_ratio, decompose, ede, epsilon_sweep, gini,
    DecompositionResult, InequalityAversion, InequalityError, InequalityResult, SweepInput,
    SweepRow, DEFAULT_EPSILON_SWEEP,
};
pub use model::{
    audit_report, run_two_stage, test_hypotheses, EvaluationMode, ModelError, ModelResult,
    Report, ReportRow, RunOptions, Verdict, DEFAULT_TOLERANCE,
};
pub use national_accounts::{
    augmented_gdp, augmented_mean, gdp_expenditure, gdp_income, gdp_production,
    impute_housewife_labor, impute_snapshot, per_capita_monthly_mean, AccountsError,
    AccountsSnapshot, AugmentedMean, ExpenditureComponents, GdpExpenditure, ImputationResult,
    IncomeComponents,
};
