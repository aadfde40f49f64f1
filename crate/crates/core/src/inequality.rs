//! The Atkinson inequality scale and its companions.
//!
//! The scale ranks distributions through an additive welfare function with
//! constant relative inequality aversion ε. For a distribution with
//! frequencies f(y_i) and mean μ, the equally distributed equivalent (EDE)
//! income is the generalized mean
//!
//! ```text
//! y_EDE = [Σ f_i · y_i^(1-ε)]^(1/(1-ε))        ε ≠ 1
//!       = exp(Σ f_i · ln y_i)                  ε = 1 (geometric mean)
//!       = min_i y_i                            ε → ∞
//!       = μ                                    ε = 0
//! ```
//!
//! and the index is `I = 1 − y_EDE / μ`, in [0, 1) for positive incomes:
//! 0 at perfect equality, larger as the distribution spreads, invariant
//! under proportional scaling of all incomes. An index of I means that a
//! fraction (1 − I) of current mean income, distributed evenly, would buy
//! the same level of social welfare as the actual distribution.
//!
//! A Gini coefficient is included for side-by-side comparison, along with
//! a multiplicative between/within subgroup decomposition and ε sweeps.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distributions::{IncomeDistribution, LognormalSpec};
use crate::math::kahan_sum;

/// ε values commonly used for sensitivity sweeps.
pub const DEFAULT_EPSILON_SWEEP: [f64; 3] = [0.5, 1.0, 2.0];

/// Degree of inequality aversion: a nonnegative real, possibly infinite.
///
/// Larger ε weights transfers at the bottom of the distribution more
/// heavily; ε = 0 ranks by total income alone and the infinite limit looks
/// only at the minimum income.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InequalityAversion {
    Finite(f64),
    Infinite,
}

impl InequalityAversion {
    /// Validates ε ≥ 0; `f64::INFINITY` maps to the explicit infinite case.
    pub fn new(epsilon: f64) -> Result<Self, InequalityError> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(InequalityError::InvalidEpsilon { value: epsilon });
        }
        if epsilon.is_infinite() {
            Ok(Self::Infinite)
        } else {
            Ok(Self::Finite(epsilon))
        }
    }

    /// Shorthand for a validated finite ε.
    pub fn finite(epsilon: f64) -> Self {
        Self::new(epsilon).expect("epsilon must be finite and nonnegative")
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// Numeric value, `f64::INFINITY` for the infinite case.
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite(e) => *e,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for InequalityAversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(e) => write!(f, "{e}"),
            Self::Infinite => write!(f, "infinity"),
        }
    }
}

// JSON has no infinity literal, so the infinite case serializes as the
// string "infinity" and finite values as plain numbers.
impl Serialize for InequalityAversion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(e) => serializer.serialize_f64(*e),
            Self::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for InequalityAversion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(e) => InequalityAversion::new(e)
                .map_err(|err| D::Error::custom(err.to_string())),
            Raw::Text(s) if s == "infinity" => Ok(InequalityAversion::Infinite),
            Raw::Text(s) => Err(D::Error::custom(format!("invalid epsilon: {s}"))),
        }
    }
}

/// Errors from the inequality operations.
#[derive(Debug, Clone, PartialEq)]
pub enum InequalityError {
    /// ε must be ≥ 0 (NaN rejected).
    InvalidEpsilon { value: f64 },
    /// Ratio-mode amounts must be strictly positive and finite.
    NonPositiveAmount { name: &'static str, value: f64 },
    /// The operation is only defined for finite ε.
    InfiniteEpsilonUnsupported,
    /// Decomposition requires one label per income point.
    MissingLabel { points: usize, labels: usize },
    /// Sweeps need at least one ε.
    EmptyEpsilonList,
}

impl fmt::Display for InequalityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use InequalityError::*;
        match self {
            InvalidEpsilon { value } => write!(f, "epsilon must be >= 0, got {value}"),
            NonPositiveAmount { name, value } => {
                write!(f, "{name} must be > 0, got {value}")
            }
            InfiniteEpsilonUnsupported => {
                write!(f, "operation is not defined for infinite epsilon")
            }
            MissingLabel { points, labels } => {
                write!(f, "{points} points but {labels} group labels")
            }
            EmptyEpsilonList => write!(f, "epsilon list must not be empty"),
        }
    }
}

impl std::error::Error for InequalityError {}

/// Full result of one Atkinson evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityResult {
    /// Index I = 1 − ede/mean, in [0, 1).
    pub index: f64,
    /// Equally distributed equivalent income.
    pub ede: f64,
    /// Weighted mean income μ.
    pub mean: f64,
    pub epsilon: InequalityAversion,
    /// Social welfare: mean utility under U(y) = y^(1-ε)/(1-ε) (ln y at
    /// ε = 1, min income in the infinite limit).
    pub welfare: f64,
}

/// Between/within split of a total Atkinson index satisfying
/// `(1 − total) = (1 − between)(1 − within)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub total: f64,
    pub between: f64,
    pub within: f64,
}

/// One row of an ε sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: InequalityAversion,
    pub index: f64,
}

/// Input accepted by [`epsilon_sweep`]: a full distribution or the
/// degenerate single-income ratio form.
#[derive(Debug, Clone, Copy)]
pub enum SweepInput<'a> {
    Distribution(&'a IncomeDistribution),
    Ratio {
        income: f64,
        reference_mean: f64,
    },
}

/// Equally distributed equivalent income of `dist` at aversion `eps`.
pub fn ede(dist: &IncomeDistribution, eps: InequalityAversion) -> f64 {
    let e = match eps {
        InequalityAversion::Infinite => return dist.min_income(),
        InequalityAversion::Finite(e) => e,
    };
    if e == 0.0 {
        return dist.mean();
    }
    if e == 1.0 {
        // geometric mean
        return kahan_sum(dist.points().map(|(y, f)| f * y.ln())).exp();
    }
    // [Σ f·y^(1-ε)]^(1/(1-ε)) evaluated in log space with the largest
    // exponent factored out so extreme incomes cannot overflow the
    // intermediate sum
    let t = 1.0 - e;
    let max_exponent = dist
        .points()
        .filter(|&(_, f)| f > 0.0)
        .map(|(y, _)| t * y.ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled = kahan_sum(
        dist.points()
            .filter(|&(_, f)| f > 0.0)
            .map(|(y, f)| f * (t * y.ln() - max_exponent).exp()),
    );
    ((max_exponent + scaled.ln()) / t).exp()
}

/// Atkinson index of `dist` at aversion `eps`, together with the EDE
/// income, mean and welfare it is built from.
pub fn atkinson(dist: &IncomeDistribution, eps: InequalityAversion) -> InequalityResult {
    let mean = dist.mean();
    let ede = ede(dist, eps);
    let raw = 1.0 - ede / mean;
    // An exactly equal distribution can land a rounding step below zero.
    debug_assert!(raw > -1e-9, "index {raw} far below zero");
    let index = if raw < 0.0 { 0.0 } else { raw };
    InequalityResult {
        index,
        ede,
        mean,
        epsilon: eps,
        welfare: welfare(dist, eps),
    }
}

/// Mean utility of `dist` under the aversion-ε utility function.
fn welfare(dist: &IncomeDistribution, eps: InequalityAversion) -> f64 {
    let e = match eps {
        InequalityAversion::Infinite => return dist.min_income(),
        InequalityAversion::Finite(e) => e,
    };
    if e == 1.0 {
        return kahan_sum(dist.points().map(|(y, f)| f * y.ln()));
    }
    let t = 1.0 - e;
    kahan_sum(dist.points().map(|(y, f)| f * y.powf(t))) / t
}

/// The degenerate single-income evaluation: one representative income
/// against an externally supplied mean.
///
/// The power form `1 − [(y/μ)^(1-ε)]^(1/(1-ε))` cancels algebraically to
/// `1 − y/μ` for every finite ε ≠ 1, and the geometric-mean limit at ε = 1
/// collapses to the same value, so that is what this returns: the result
/// does not depend on ε. This is not a distributional index; it is the
/// ratio shortcut used by the bundled reproduction scenario.
pub fn atkinson_ratio(
    income: f64,
    reference_mean: f64,
    eps: InequalityAversion,
) -> Result<f64, InequalityError> {
    if !income.is_finite() || income <= 0.0 {
        return Err(InequalityError::NonPositiveAmount {
            name: "income",
            value: income,
        });
    }
    if !reference_mean.is_finite() || reference_mean <= 0.0 {
        return Err(InequalityError::NonPositiveAmount {
            name: "reference mean",
            value: reference_mean,
        });
    }
    if !eps.is_finite() {
        // no minimum exists for a single ratio
        return Err(InequalityError::InfiniteEpsilonUnsupported);
    }
    Ok(1.0 - income / reference_mean)
}

/// Closed-form Atkinson index of a lognormal distribution:
/// `1 − exp(−ε·sigma_log²/2)`.
pub fn atkinson_lognormal(
    spec: &LognormalSpec,
    eps: InequalityAversion,
) -> Result<f64, InequalityError> {
    match eps {
        InequalityAversion::Infinite => Err(InequalityError::InfiniteEpsilonUnsupported),
        InequalityAversion::Finite(e) => {
            let s = spec.sigma_log();
            Ok(1.0 - (-e * s * s / 2.0).exp())
        }
    }
}

/// Gini coefficient: weighted mean absolute difference over 2μ, in [0, 1).
///
/// Computed by sorted prefix sums in O(n log n); the O(n²) pairwise form
/// serves as the test oracle.
pub fn gini(dist: &IncomeDistribution) -> f64 {
    let mut order: Vec<usize> = (0..dist.len()).collect();
    let incomes = dist.incomes();
    order.sort_by(|&a, &b| incomes[a].total_cmp(&incomes[b]));

    let total = dist.total_weight();
    let mean = dist.mean();
    let mut cum_freq = 0.0;
    let mut cum_income = 0.0; // Σ f·y over points seen so far
    let mut acc = 0.0;
    let mut comp = 0.0;
    for &i in &order {
        let f = dist.weights()[i] / total;
        let y = incomes[i];
        // Σ_j f_j · (y_j·F_{j-1} − S_{j-1}) with Kahan compensation
        let term = f * (y * cum_freq - cum_income);
        let adj = term - comp;
        let t = acc + adj;
        comp = (t - acc) - adj;
        acc = t;
        cum_freq += f;
        cum_income += f * y;
    }
    let raw = acc / mean;
    if raw < 0.0 {
        0.0
    } else {
        raw
    }
}

/// Splits the Atkinson index into between-group and within-group parts.
///
/// The between term is the Atkinson index of the distribution with every
/// income replaced by its group's EDE income; the within term is then
/// defined by the multiplicative identity
/// `(1 − total) = (1 − between)(1 − within)`. Replacing members by their
/// group EDE leaves the overall EDE unchanged, so both parts stay in
/// [0, 1) and the identity is exact up to rounding.
pub fn decompose<L: Eq + Hash>(
    dist: &IncomeDistribution,
    group_labels: &[L],
    eps: InequalityAversion,
) -> Result<DecompositionResult, InequalityError> {
    if !eps.is_finite() {
        return Err(InequalityError::InfiniteEpsilonUnsupported);
    }
    if group_labels.len() != dist.len() {
        return Err(InequalityError::MissingLabel {
            points: dist.len(),
            labels: group_labels.len(),
        });
    }

    // gather member indices per group
    let mut groups: HashMap<&L, Vec<usize>> = HashMap::new();
    for (i, label) in group_labels.iter().enumerate() {
        groups.entry(label).or_default().push(i);
    }

    // EDE per group, re-expanded onto the original points
    let mut group_ede = vec![0.0; dist.len()];
    for members in groups.values() {
        let incomes: Vec<f64> = members.iter().map(|&i| dist.incomes()[i]).collect();
        let weights: Vec<f64> = members.iter().map(|&i| dist.weights()[i]).collect();
        let ede_g = match IncomeDistribution::from_samples(&incomes, Some(&weights)) {
            Ok(sub) => ede(&sub, eps),
            // a group whose weights are all zero never influences any
            // frequency-weighted sum; give it its own (irrelevant) minimum
            Err(_) => incomes.iter().copied().fold(f64::INFINITY, f64::min),
        };
        for &i in members {
            group_ede[i] = ede_g;
        }
    }

    let total = atkinson(dist, eps).index;
    let between_dist = IncomeDistribution::from_samples(&group_ede, Some(dist.weights()))
        .expect("group EDE incomes are positive");
    let between = atkinson(&between_dist, eps).index;
    let within_raw = 1.0 - (1.0 - total) / (1.0 - between);
    let within = if within_raw < 0.0 { 0.0 } else { within_raw };
    Ok(DecompositionResult {
        total,
        between,
        within,
    })
}

/// Evaluates the index at every ε in `eps_list`, preserving order.
pub fn epsilon_sweep(
    input: SweepInput<'_>,
    eps_list: &[InequalityAversion],
) -> Result<Vec<SweepRow>, InequalityError> {
    if eps_list.is_empty() {
        return Err(InequalityError::EmptyEpsilonList);
    }
    eps_list
        .iter()
        .map(|&epsilon| {
            let index = match input {
                SweepInput::Distribution(dist) => atkinson(dist, epsilon).index,
                SweepInput::Ratio {
                    income,
                    reference_mean,
                } => atkinson_ratio(income, reference_mean, epsilon)?,
            };
            Ok(SweepRow { epsilon, index })
        })
        .collect()
}
