//! The two-stage comparison: inequality without the housewife-labor
//! imputation (I₁), inequality with it (I₂), a hypothesis verdict, and an
//! audit report that sets computed values against originally reported ones.
//!
//! Ratio mode evaluates the index at a single representative income (the
//! gross minimum wage) against a per-capita mean, exactly as the reproduced
//! computation does; it collapses to `1 − wage/mean`, so I₂ > I₁ whenever
//! any labor is imputed (the mean rises, the wage does not). Distribution
//! mode builds an explicit grouped distribution instead: employed persons
//! carry GDP split evenly among them, housewives enter at zero (stage one)
//! or at the minimum wage (stage two), and zero-income persons are either
//! excluded (positive incomes are required) or floored at 1 TL.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::IncomeDistribution;
use crate::inequality::{atkinson, atkinson_ratio, InequalityAversion, InequalityError};
use crate::math::round_half_up;
use crate::national_accounts::{
    impute_snapshot, AccountsError, AccountsSnapshot, ImputationResult,
};

/// Default verdict tolerance: the reproduced comparison works at two
/// decimals, so 1e-4 on unrounded values separates "equal" from "changed"
/// far below display precision.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// Flag emitted when a computed value disagrees with the reported one.
pub const FLAG_PAPER_VALUE_MISMATCH: &str = "PAPER_VALUE_MISMATCH";
/// Flag emitted when the imputation was annualized (×12), which the
/// reproduced computation does not do.
pub const FLAG_NON_PAPER_ANNUALIZATION: &str = "NON_PAPER_ANNUALIZATION";

/// How the two indices are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvaluationMode {
    /// Single representative income against a per-capita mean.
    Ratio,
    /// Full Atkinson index over an explicit grouped distribution.
    Distribution,
}

impl fmt::Display for EvaluationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ratio => write!(f, "ratio"),
            Self::Distribution => write!(f, "distribution"),
        }
    }
}

/// Hypothesis verdict: H₀ (imputation does not move the index) versus H₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "H0_ACCEPTED")]
    H0Accepted,
    #[serde(rename = "H1_ACCEPTED")]
    H1Accepted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::H0Accepted => write!(f, "H0_ACCEPTED"),
            Self::H1Accepted => write!(f, "H1_ACCEPTED"),
        }
    }
}

/// Errors from the two-stage model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// Verdict tolerances must be ≥ 0.
    NegativeTolerance { value: f64 },
    /// Ratio mode needs a finite ε.
    RatioModeInfiniteEpsilon,
    /// Distribution mode cannot build a positive-income distribution that
    /// carries the snapshot's GDP.
    DistributionModeUnderspecified { reason: String },
    Accounts(AccountsError),
    Inequality(InequalityError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeTolerance { value } => {
                write!(f, "tolerance must be >= 0, got {value}")
            }
            Self::RatioModeInfiniteEpsilon => {
                write!(f, "ratio mode requires a finite epsilon")
            }
            Self::DistributionModeUnderspecified { reason } => {
                write!(f, "distribution mode is underspecified: {reason}")
            }
            Self::Accounts(e) => write!(f, "{e}"),
            Self::Inequality(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ModelError {}

impl From<AccountsError> for ModelError {
    fn from(e: AccountsError) -> Self {
        Self::Accounts(e)
    }
}

impl From<InequalityError> for ModelError {
    fn from(e: InequalityError) -> Self {
        Self::Inequality(e)
    }
}

/// Knobs for one two-stage run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub epsilon: InequalityAversion,
    pub mode: EvaluationMode,
    pub tolerance: f64,
    /// Multiply the imputed labor by 12 before adding it to annual GDP.
    pub annualize: bool,
    /// Distribution mode only: include zero-income persons at a 1 TL floor
    /// instead of excluding them.
    pub include_zero_as_floor: bool,
}

impl RunOptions {
    pub fn new(epsilon: InequalityAversion, mode: EvaluationMode) -> Self {
        Self {
            epsilon,
            mode,
            tolerance: DEFAULT_TOLERANCE,
            annualize: false,
            include_zero_as_floor: false,
        }
    }
}

impl Default for RunOptions {
    fn default() -> Self {
        Self::new(InequalityAversion::finite(2.0), EvaluationMode::Ratio)
    }
}

/// Everything one two-stage run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResult {
    /// Baseline index, no imputation.
    pub i1: f64,
    /// Index with housewife labor imputed.
    pub i2: f64,
    /// The originally reported I₂, present only for the bundled scenario.
    pub i2_paper_reported: Option<f64>,
    /// i2 − i1.
    pub delta: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub imputation: ImputationResult,
    pub epsilon: InequalityAversion,
    pub mode: EvaluationMode,
}

/// Originally reported values for a scenario, compared row by row in the
/// audit report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValues {
    pub i1: f64,
    pub i2: f64,
    pub l_kev: u64,
    pub mu_monthly: f64,
    pub mu_kev_monthly: f64,
}

/// Compares I₁ and I₂ at `tolerance`: H₀ when they agree, H₁ otherwise.
pub fn test_hypotheses(i1: f64, i2: f64, tolerance: f64) -> Result<Verdict, ModelError> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(ModelError::NegativeTolerance { value: tolerance });
    }
    if (i1 - i2).abs() <= tolerance {
        Ok(Verdict::H0Accepted)
    } else {
        Ok(Verdict::H1Accepted)
    }
}

/// Runs both stages on a snapshot and tests the hypotheses.
pub fn run_two_stage(
    snapshot: &AccountsSnapshot,
    options: &RunOptions,
) -> Result<ModelResult, ModelError> {
    if options.tolerance.is_nan() || options.tolerance < 0.0 {
        return Err(ModelError::NegativeTolerance {
            value: options.tolerance,
        });
    }
    let imputation = impute_snapshot(snapshot, options.annualize)?;
    let (i1, i2) = match options.mode {
        EvaluationMode::Ratio => {
            if !options.epsilon.is_finite() {
                return Err(ModelError::RatioModeInfiniteEpsilon);
            }
            let wage = snapshot.min_wage_monthly as f64;
            let i1 = atkinson_ratio(wage, imputation.mu_baseline_monthly, options.epsilon)?;
            let i2 = atkinson_ratio(wage, imputation.mu_kev_monthly, options.epsilon)?;
            (i1, i2)
        }
        EvaluationMode::Distribution => {
            let stage1 = stage_distribution(snapshot, options, false)?;
            let stage2 = stage_distribution(snapshot, options, true)?;
            (
                atkinson(&stage1, options.epsilon).index,
                atkinson(&stage2, options.epsilon).index,
            )
        }
    };
    let verdict = test_hypotheses(i1, i2, options.tolerance)?;
    let i2_paper_reported = if *snapshot == crate::bundled::turkey_2014() {
        Some(crate::bundled::turkey_2014_reference().i2)
    } else {
        None
    };
    Ok(ModelResult {
        i1,
        i2,
        i2_paper_reported,
        delta: i2 - i1,
        verdict,
        tolerance: options.tolerance,
        imputation,
        epsilon: options.epsilon,
        mode: options.mode,
    })
}

/// Builds the explicit grouped distribution for one stage.
///
/// Employed persons share GDP evenly (monthly), housewives get the gross
/// minimum wage once imputed, everyone else gets zero. Zero-income groups
/// are excluded unless the 1 TL floor is requested.
fn stage_distribution(
    snapshot: &AccountsSnapshot,
    options: &RunOptions,
    imputed: bool,
) -> Result<IncomeDistribution, ModelError> {
    if snapshot.employed == 0 && snapshot.gdp_annual > 0 {
        return Err(ModelError::DistributionModeUnderspecified {
            reason: "positive GDP but no employed persons to carry it".into(),
        });
    }
    let mut incomes = Vec::with_capacity(3);
    let mut weights = Vec::with_capacity(3);
    let zero_income = if options.include_zero_as_floor {
        Some(1.0)
    } else {
        None
    };
    if snapshot.employed > 0 {
        let monthly_wage =
            snapshot.gdp_annual as f64 / snapshot.employed as f64 / 12.0;
        let income = if monthly_wage > 0.0 {
            Some(monthly_wage)
        } else {
            zero_income
        };
        if let Some(y) = income {
            incomes.push(y);
            weights.push(snapshot.employed as f64);
        }
    }
    if snapshot.housewives > 0 {
        let income = if imputed {
            Some(snapshot.min_wage_monthly as f64)
        } else {
            zero_income
        };
        if let Some(y) = income {
            incomes.push(y);
            weights.push(snapshot.housewives as f64);
        }
    }
    let rest = snapshot.population - snapshot.employed - snapshot.housewives;
    if rest > 0 {
        if let Some(y) = zero_income {
            incomes.push(y);
            weights.push(rest as f64);
        }
    }
    IncomeDistribution::from_samples(&incomes, Some(&weights)).map_err(|e| {
        ModelError::DistributionModeUnderspecified {
            reason: format!("no positive-income group remains ({e})"),
        }
    })
}

/// One row of the audit table: a computed quantity next to the originally
/// reported value, when one exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub quantity: String,
    pub reported: Option<f64>,
    pub computed: f64,
    /// computed − reported.
    pub delta: Option<f64>,
    /// Whether the computed value rounds to the reported one at its
    /// reported precision.
    pub matches: Option<bool>,
}

impl ReportRow {
    fn new(quantity: &str, reported: Option<f64>, computed: f64, decimals: u32) -> Self {
        let delta = reported.map(|r| computed - r);
        let matches = reported.map(|r| round_half_up(computed, decimals) == r);
        Self {
            quantity: quantity.to_string(),
            reported,
            computed,
            delta,
            matches,
        }
    }
}

/// Reproduction-and-audit report for one run: the flat summary plus the
/// row-by-row comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub epsilon: InequalityAversion,
    pub mode: EvaluationMode,
    pub i1: f64,
    pub i2: f64,
    pub i2_paper_reported: Option<f64>,
    pub delta: f64,
    pub verdict: Verdict,
    pub l_kev: u64,
    pub l_gdp: u64,
    pub mu_monthly: f64,
    pub mu_kev_monthly: f64,
    pub tolerance: f64,
    pub flags: Vec<String>,
    pub rows: Vec<ReportRow>,
}

/// Assembles the audit report for a finished run.
///
/// A disagreement with a reported value is a finding, not a failure: it is
/// recorded in `flags` as `PAPER_VALUE_MISMATCH:<quantity>` and the report
/// is still produced normally.
pub fn audit_report(result: &ModelResult) -> Report {
    let reference = if result.i2_paper_reported.is_some() && !result.imputation.annualized {
        Some(crate::bundled::turkey_2014_reference())
    } else {
        None
    };
    let rows = vec![
        ReportRow::new("i1", reference.map(|r| r.i1), result.i1, 2),
        ReportRow::new(
            "l_kev",
            reference.map(|r| r.l_kev as f64),
            result.imputation.l_kev as f64,
            0,
        ),
        ReportRow::new(
            "mu_monthly",
            reference.map(|r| r.mu_monthly),
            result.imputation.mu_baseline_monthly,
            0,
        ),
        ReportRow::new(
            "mu_kev_monthly",
            reference.map(|r| r.mu_kev_monthly),
            result.imputation.mu_kev_monthly,
            0,
        ),
        ReportRow::new("i2", reference.map(|r| r.i2), result.i2, 2),
    ];
    let mut flags: Vec<String> = rows
        .iter()
        .filter(|row| row.matches == Some(false))
        .map(|row| format!("{FLAG_PAPER_VALUE_MISMATCH}:{}", row.quantity))
        .collect();
    if result.imputation.annualized {
        flags.push(FLAG_NON_PAPER_ANNUALIZATION.to_string());
    }
    Report {
        epsilon: result.epsilon,
        mode: result.mode,
        i1: result.i1,
        i2: result.i2,
        i2_paper_reported: result.i2_paper_reported,
        delta: result.delta,
        verdict: result.verdict,
        l_kev: result.imputation.l_kev,
        l_gdp: result.imputation.l_gdp,
        mu_monthly: result.imputation.mu_baseline_monthly,
        mu_kev_monthly: result.imputation.mu_kev_monthly,
        tolerance: result.tolerance,
        flags,
        rows,
    }
}

/// The fixed flat JSON schema; the table rows are a text/library surface.
#[derive(Serialize)]
struct JsonReport<'a> {
    epsilon: InequalityAversion,
    mode: EvaluationMode,
    i1: f64,
    i2: f64,
    i2_paper_reported: Option<f64>,
    delta: f64,
    verdict: Verdict,
    l_kev: u64,
    l_gdp: u64,
    mu_monthly: f64,
    mu_kev_monthly: f64,
    tolerance: f64,
    flags: &'a [String],
}

impl Report {
    /// Machine-readable report with the fixed key set
    /// `epsilon, mode, i1, i2, i2_paper_reported, delta, verdict, l_kev,
    /// l_gdp, mu_monthly, mu_kev_monthly, tolerance, flags`.
    pub fn to_json(&self) -> String {
        let flat = JsonReport {
            epsilon: self.epsilon,
            mode: self.mode,
            i1: self.i1,
            i2: self.i2,
            i2_paper_reported: self.i2_paper_reported,
            delta: self.delta,
            verdict: self.verdict,
            l_kev: self.l_kev,
            l_gdp: self.l_gdp,
            mu_monthly: self.mu_monthly,
            mu_kev_monthly: self.mu_kev_monthly,
            tolerance: self.tolerance,
            flags: &self.flags,
        };
        let mut s = serde_json::to_string_pretty(&flat).expect("report serializes");
        s.push('\n');
        s
    }

    /// `key,value` lines carrying the same values as the JSON output at
    /// full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push(',');
            out.push_str(&v);
            out.push('\n');
        };
        push("epsilon", self.epsilon.to_string());
        push("mode", self.mode.to_string());
        push("i1", format!("{}", self.i1));
        push("i2", format!("{}", self.i2));
        push(
            "i2_paper_reported",
            self.i2_paper_reported
                .map(|v| format!("{v}"))
                .unwrap_or_default(),
        );
        push("delta", format!("{}", self.delta));
        push("verdict", self.verdict.to_string());
        push("l_kev", format!("{}", self.l_kev));
        push("l_gdp", format!("{}", self.l_gdp));
        push("mu_monthly", format!("{}", self.mu_monthly));
        push("mu_kev_monthly", format!("{}", self.mu_kev_monthly));
        push("tolerance", format!("{}", self.tolerance));
        push("flags", self.flags.join(";"));
        out
    }

    /// Human-readable report; indices rounded half-up to four decimals,
    /// TL amounts to whole TL.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "two-stage inequality comparison (epsilon = {}, mode = {})\n\n",
            self.epsilon, self.mode
        ));
        out.push_str(&format!("  i1       = {:.4}\n", round_half_up(self.i1, 4)));
        out.push_str(&format!("  i2       = {:.4}\n", round_half_up(self.i2, 4)));
        out.push_str(&format!(
            "  delta    = {:.4}\n",
            round_half_up(self.delta, 4)
        ));
        out.push_str(&format!(
            "  verdict  = {} (tolerance {})\n",
            self.verdict, self.tolerance
        ));
        out.push_str(&format!("  l_kev    = {} TL\n", self.l_kev));
        out.push_str(&format!("  l_gdp    = {} TL\n", self.l_gdp));
        out.push_str(&format!(
            "  mu       = {:.0} TL/month\n",
            round_half_up(self.mu_monthly, 0)
        ));
        out.push_str(&format!(
            "  mu_kev   = {:.0} TL/month\n",
            round_half_up(self.mu_kev_monthly, 0)
        ));
        out.push('\n');
        // TL aggregates print as whole amounts, indices at four decimals
        let cell = |v: f64| {
            if v.abs() >= 1000.0 {
                format!("{:.0}", round_half_up(v, 0))
            } else {
                format!("{:.4}", round_half_up(v, 4))
            }
        };
        out.push_str(&format!(
            "  {:<14} {:>15} {:>15} {:>12}  match\n",
            "quantity", "reported", "computed", "delta"
        ));
        for row in &self.rows {
            let reported = row.reported.map(cell).unwrap_or_else(|| "-".into());
            let delta = row.delta.map(cell).unwrap_or_else(|| "-".into());
            let matches = match row.matches {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            out.push_str(&format!(
                "  {:<14} {:>15} {:>15} {:>12}  {}\n",
                row.quantity,
                reported,
                cell(row.computed),
                delta,
                matches
            ));
        }
        if !self.flags.is_empty() {
            out.push('\n');
            for flag in &self.flags {
                out.push_str(&format!("  flag: {flag}\n"));
            }
        }
        out
    }
}
