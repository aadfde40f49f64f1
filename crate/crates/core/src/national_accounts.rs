//! GDP accounting identities and the housewife-labor imputation.
//!
//! National aggregates are exact integers (TL for money, persons for
//! counts); every sum and product is overflow-checked and division only
//! happens at the final per-capita step, so table-scale figures reproduce
//! without accumulation error.
//!
//! The imputation pipeline follows the source convention literally: the
//! monthly gross minimum wage times the housewife head count is added to
//! annual GDP as-is. That unit mismatch (monthly wage into an annual
//! aggregate) is real; an explicit annualize toggle (×12) is provided and
//! clearly marked as a departure from the reproduced computation.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Errors from national-accounts arithmetic and snapshot validation.
#[derive(Debug, Clone, PartialEq)]
pub enum AccountsError {
    /// No value-added entries supplied.
    EmptyInput,
    /// Checked integer arithmetic overflowed.
    Overflow { operation: &'static str },
    /// Per-capita means need a positive population.
    ZeroPopulation,
    /// The gross minimum wage must be positive.
    NonPositiveMinWage,
    /// A head count exceeds the population it is drawn from.
    CountExceedsPopulation {
        field: &'static str,
        count: u64,
        population: u64,
    },
    /// Employed plus housewives exceed the population.
    WorkforceExceedsPopulation {
        employed: u64,
        housewives: u64,
        population: u64,
    },
}

impl fmt::Display for AccountsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AccountsError::*;
        match self {
            EmptyInput => write!(f, "value-added list must not be empty"),
            Overflow { operation } => write!(f, "integer overflow in {operation}"),
            ZeroPopulation => write!(f, "population must be > 0"),
            NonPositiveMinWage => write!(f, "gross minimum wage must be > 0"),
            CountExceedsPopulation {
                field,
                count,
                population,
            } => write!(
                f,
                "{field} ({count}) exceeds population ({population})"
            ),
            WorkforceExceedsPopulation {
                employed,
                housewives,
                population,
            } => write!(
                f,
                "employed ({employed}) plus housewives ({housewives}) exceed population ({population})"
            ),
        }
    }
}

impl std::error::Error for AccountsError {}

/// One country-year of the aggregates the model needs.
///
/// `housewives` counts women not in employment solely because of housework;
/// `min_wage_monthly` is the gross statutory minimum wage used as the
/// shadow price of their labor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountsSnapshot {
    pub year: i32,
    /// Annual GDP in TL.
    pub gdp_annual: u64,
    /// Total population in persons.
    pub population: u64,
    /// Persons in employment.
    pub employed: u64,
    /// Housewives (not employed due to housework), persons.
    pub housewives: u64,
    /// Gross minimum wage, TL per month.
    pub min_wage_monthly: u64,
}

impl AccountsSnapshot {
    pub fn new(
        year: i32,
        gdp_annual: u64,
        population: u64,
        employed: u64,
        housewives: u64,
        min_wage_monthly: u64,
    ) -> Result<Self, AccountsError> {
        if min_wage_monthly == 0 {
            return Err(AccountsError::NonPositiveMinWage);
        }
        if employed > population {
            return Err(AccountsError::CountExceedsPopulation {
                field: "employed",
                count: employed,
                population,
            });
        }
        if housewives > population {
            return Err(AccountsError::CountExceedsPopulation {
                field: "housewives",
                count: housewives,
                population,
            });
        }
        if employed.checked_add(housewives).is_none_or(|s| s > population) {
            return Err(AccountsError::WorkforceExceedsPopulation {
                employed,
                housewives,
                population,
            });
        }
        Ok(Self {
            year,
            gdp_annual,
            population,
            employed,
            housewives,
            min_wage_monthly,
        })
    }
}

/// Expenditure-side components, all nonnegative TL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpenditureComponents {
    pub consumption: u64,
    pub investment: u64,
    pub government: u64,
    pub exports: u64,
    pub imports: u64,
}

/// Income-side components in one of the two standard breakdowns.
///
/// Exactly one breakdown applies per use; the enum makes mixing them
/// unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IncomeComponents {
    /// Wages + capital income (rent, interest, net profit) + indirect
    /// taxes + depreciation.
    FactorIncomes {
        labor_income: u64,
        capital_income: u64,
        indirect_taxes: u64,
        depreciation: u64,
    },
    /// Employee salaries + gross operating surplus + gross mixed income +
    /// (taxes − subsidies), the net tax term given as a nonnegative total.
    OperatingSurplus {
        salaries: u64,
        gross_operating_surplus: u64,
        gross_mixed_income: u64,
        taxes_minus_subsidies: u64,
    },
}

/// Expenditure-method GDP, which is negative when imports are large
/// enough; `trade_deficit` marks imports exceeding exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdpExpenditure {
    pub total: i64,
    pub trade_deficit: bool,
}

/// Per-capita means of an augmented aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentedMean {
    pub annual: f64,
    pub monthly: f64,
}

/// Output of the imputation pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImputationResult {
    /// Imputed housewife labor, TL (head count × monthly gross minimum
    /// wage; ×12 only when annualized).
    pub l_kev: u64,
    /// Augmented GDP: baseline plus `l_kev`, TL.
    pub l_gdp: u64,
    /// Augmented per-capita mean, TL per year.
    pub mu_kev_annual: f64,
    /// Augmented per-capita mean, TL per month (`mu_kev_annual / 12`).
    pub mu_kev_monthly: f64,
    /// Baseline per-capita mean, TL per month.
    pub mu_baseline_monthly: f64,
    /// True when `l_kev` was annualized (non-standard for the reproduced
    /// computation).
    pub annualized: bool,
}

/// Production-method GDP: the exact sum of all value added.
pub fn gdp_production(value_added: &[u64]) -> Result<u64, AccountsError> {
    if value_added.is_empty() {
        return Err(AccountsError::EmptyInput);
    }
    value_added.iter().try_fold(0u64, |acc, &v| {
        acc.checked_add(v).ok_or(AccountsError::Overflow {
            operation: "production-method sum",
        })
    })
}

/// Expenditure-method GDP: C + I + G + (X − M).
pub fn gdp_expenditure(c: &ExpenditureComponents) -> Result<GdpExpenditure, AccountsError> {
    const OP: AccountsError = AccountsError::Overflow {
        operation: "expenditure-method sum",
    };
    let to_i64 = |v: u64| i64::try_from(v).map_err(|_| OP.clone());
    let domestic = to_i64(c.consumption)?
        .checked_add(to_i64(c.investment)?)
        .ok_or(OP.clone())?
        .checked_add(to_i64(c.government)?)
        .ok_or(OP.clone())?;
    let net_exports = to_i64(c.exports)?
        .checked_sub(to_i64(c.imports)?)
        .ok_or(OP.clone())?;
    let total = domestic.checked_add(net_exports).ok_or(OP)?;
    Ok(GdpExpenditure {
        total,
        trade_deficit: c.imports > c.exports,
    })
}

/// Income-method GDP: the exact sum of the populated breakdown.
pub fn gdp_income(c: &IncomeComponents) -> Result<u64, AccountsError> {
    let overflow = AccountsError::Overflow {
        operation: "income-method sum",
    };
    let parts = match *c {
        IncomeComponents::FactorIncomes {
            labor_income,
            capital_income,
            indirect_taxes,
            depreciation,
        } => [labor_income, capital_income, indirect_taxes, depreciation],
        IncomeComponents::OperatingSurplus {
            salaries,
            gross_operating_surplus,
            gross_mixed_income,
            taxes_minus_subsidies,
        } => [
            salaries,
            gross_operating_surplus,
            gross_mixed_income,
            taxes_minus_subsidies,
        ],
    };
    parts
        .iter()
        .try_fold(0u64, |acc, &v| acc.checked_add(v).ok_or(overflow.clone()))
}

/// Monthly per-capita mean: annual GDP over population over 12, full
/// double precision.
pub fn per_capita_monthly_mean(gdp_annual: u64, population: u64) -> Result<f64, AccountsError> {
    if population == 0 {
        return Err(AccountsError::ZeroPopulation);
    }
    Ok(gdp_annual as f64 / population as f64 / 12.0)
}

/// Imputed housewife labor: head count × monthly gross minimum wage,
/// exact product.
///
/// The product of a monthly wage and a head count is used directly as an
/// annual aggregate addend by the reproduced computation; see the module
/// docs for the annualize alternative.
pub fn impute_housewife_labor(
    housewives: u64,
    min_wage_monthly: u64,
) -> Result<u64, AccountsError> {
    if min_wage_monthly == 0 {
        return Err(AccountsError::NonPositiveMinWage);
    }
    housewives
        .checked_mul(min_wage_monthly)
        .ok_or(AccountsError::Overflow {
            operation: "housewife-labor product",
        })
}

/// Augmented GDP: baseline plus imputed housewife labor, exact sum.
pub fn augmented_gdp(gdp_annual: u64, l_kev: u64) -> Result<u64, AccountsError> {
    gdp_annual.checked_add(l_kev).ok_or(AccountsError::Overflow {
        operation: "augmented GDP sum",
    })
}

/// Per-capita means of the augmented aggregate.
pub fn augmented_mean(l_gdp: u64, population: u64) -> Result<AugmentedMean, AccountsError> {
    if population == 0 {
        return Err(AccountsError::ZeroPopulation);
    }
    let annual = l_gdp as f64 / population as f64;
    Ok(AugmentedMean {
        annual,
        monthly: annual / 12.0,
    })
}

/// Runs the full imputation pipeline on a snapshot.
///
/// `annualize` multiplies the imputed labor by 12 before adding it to
/// annual GDP; the default (false) reproduces the source convention.
pub fn impute_snapshot(
    snapshot: &AccountsSnapshot,
    annualize: bool,
) -> Result<ImputationResult, AccountsError> {
    let mut l_kev = impute_housewife_labor(snapshot.housewives, snapshot.min_wage_monthly)?;
    if annualize {
        l_kev = l_kev.checked_mul(12).ok_or(AccountsError::Overflow {
            operation: "annualized housewife-labor product",
        })?;
    }
    let l_gdp = augmented_gdp(snapshot.gdp_annual, l_kev)?;
    let mean = augmented_mean(l_gdp, snapshot.population)?;
    Ok(ImputationResult {
        l_kev,
        l_gdp,
        mu_kev_annual: mean.annual,
        mu_kev_monthly: mean.monthly,
        mu_baseline_monthly: per_capita_monthly_mean(snapshot.gdp_annual, snapshot.population)?,
        annualized: annualize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn production_sums_exactly() {
        assert_eq!(gdp_production(&[0, 0]).unwrap(), 0);
        assert_eq!(gdp_production(&[100, 250, 650]).unwrap(), 1000);
        assert!(matches!(
            gdp_production(&[]),
            Err(AccountsError::EmptyInput)
        ));
        assert!(matches!(
            gdp_production(&[u64::MAX, 1]),
            Err(AccountsError::Overflow { .. })
        ));
    }

    #[test]
    fn production_scales_to_national_magnitude() {
        // a million firms near the bundled GDP magnitude
        let value_added = vec![2_054_898u64; 1_000_000];
        assert_eq!(gdp_production(&value_added).unwrap(), 2_054_898_000_000);
    }

    #[test]
    fn expenditure_handles_trade_deficit() {
        let zero = ExpenditureComponents {
            consumption: 0,
            investment: 0,
            government: 0,
            exports: 0,
            imports: 0,
        };
        assert_eq!(gdp_expenditure(&zero).unwrap().total, 0);

        let c = ExpenditureComponents {
            consumption: 100,
            investment: 20,
            government: 30,
            exports: 10,
            imports: 15,
        };
        let r = gdp_expenditure(&c).unwrap();
        assert_eq!(r.total, 145);
        assert!(r.trade_deficit);

        let heavy_imports = ExpenditureComponents {
            imports: 200,
            ..c
        };
        let r = gdp_expenditure(&heavy_imports).unwrap();
        assert_eq!(r.total, -40);
        assert!(r.trade_deficit);

        let surplus = ExpenditureComponents {
            exports: 20,
            imports: 15,
            ..c
        };
        assert!(!gdp_expenditure(&surplus).unwrap().trade_deficit);

        let huge = ExpenditureComponents {
            consumption: u64::MAX,
            ..zero
        };
        assert!(matches!(
            gdp_expenditure(&huge),
            Err(AccountsError::Overflow { .. })
        ));
    }

    #[test]
    fn income_method_both_breakdowns() {
        let zeros = IncomeComponents::FactorIncomes {
            labor_income: 0,
            capital_income: 0,
            indirect_taxes: 0,
            depreciation: 0,
        };
        assert_eq!(gdp_income(&zeros).unwrap(), 0);
        let factor = IncomeComponents::FactorIncomes {
            labor_income: 1000,
            capital_income: 400,
            indirect_taxes: 100,
            depreciation: 50,
        };
        assert_eq!(gdp_income(&factor).unwrap(), 1550);
        let surplus = IncomeComponents::OperatingSurplus {
            salaries: 800,
            gross_operating_surplus: 500,
            gross_mixed_income: 200,
            taxes_minus_subsidies: 50,
        };
        assert_eq!(gdp_income(&surplus).unwrap(), 1550);
    }

    #[test]
    fn three_methods_agree_on_synthetic_economy() {
        // one economy decomposed three ways so all views sum to 1550
        let production = gdp_production(&[300, 450, 800]).unwrap();
        let expenditure = gdp_expenditure(&ExpenditureComponents {
            consumption: 900,
            investment: 300,
            government: 250,
            exports: 200,
            imports: 100,
        })
        .unwrap();
        let income = gdp_income(&IncomeComponents::FactorIncomes {
            labor_income: 1000,
            capital_income: 400,
            indirect_taxes: 100,
            depreciation: 50,
        })
        .unwrap();
        assert_eq!(production, 1550);
        assert_eq!(expenditure.total, 1550);
        assert_eq!(income, 1550);
    }

    #[test]
    fn per_capita_mean_bundled_year() {
        let mu = per_capita_monthly_mean(2_054_897_828_000, 77_695_900).unwrap();
        assert!((mu - 2203.996422805665).abs() < 1e-9);
        assert_eq!(per_capita_monthly_mean(12_000, 1).unwrap(), 1000.0);
        assert_eq!(per_capita_monthly_mean(0, 5).unwrap(), 0.0);
        assert!(matches!(
            per_capita_monthly_mean(1, 0),
            Err(AccountsError::ZeroPopulation)
        ));
    }

    #[test]
    fn imputation_product_is_exact() {
        assert_eq!(
            impute_housewife_labor(11_589_000, 1102).unwrap(),
            12_771_078_000
        );
        assert_eq!(impute_housewife_labor(0, 1102).unwrap(), 0);
        assert_eq!(impute_housewife_labor(10, 1000).unwrap(), 10_000);
        assert!(matches!(
            impute_housewife_labor(5, 0),
            Err(AccountsError::NonPositiveMinWage)
        ));
        assert!(matches!(
            impute_housewife_labor(u64::MAX, 2),
            Err(AccountsError::Overflow { .. })
        ));
    }

    #[test]
    fn augmentation_is_exact() {
        assert_eq!(
            augmented_gdp(2_054_897_828_000, 12_771_078_000).unwrap(),
            2_067_668_906_000
        );
        assert_eq!(augmented_gdp(123, 0).unwrap(), 123);
        assert_eq!(augmented_gdp(5, 7).unwrap(), 12);
    }

    #[test]
    fn augmented_mean_bundled_year() {
        let m = augmented_mean(2_067_668_906_000, 77_695_900).unwrap();
        assert!((m.annual - 26_612.329685350192).abs() < 1e-6);
        assert!((m.monthly - 2217.6941404458494).abs() < 1e-9);
        assert_eq!(m.monthly, m.annual / 12.0);
        let trivial = augmented_mean(24_000, 2).unwrap();
        assert_eq!(trivial.monthly, 1000.0);
    }

    #[test]
    fn pipeline_invariants() {
        let snapshot = bundled::turkey_2014();
        let r = impute_snapshot(&snapshot, false).unwrap();
        assert_eq!(r.l_gdp - snapshot.gdp_annual, r.l_kev);
        assert!(r.mu_kev_monthly >= r.mu_baseline_monthly);
        assert!(!r.annualized);

        let annualized = impute_snapshot(&snapshot, true).unwrap();
        assert_eq!(annualized.l_kev, 12 * r.l_kev);
        assert_eq!(annualized.l_kev, 153_252_936_000);

        // no housewives: means coincide exactly
        let none = AccountsSnapshot::new(2014, 1_200_000, 100, 40, 0, 1102).unwrap();
        let r = impute_snapshot(&none, false).unwrap();
        assert_eq!(r.l_kev, 0);
        assert_eq!(r.mu_kev_monthly, r.mu_baseline_monthly);
    }

    #[test]
    fn imputation_is_linear_in_headcount() {
        let unit = impute_housewife_labor(250, 1102).unwrap();
        for a in [0u64, 1, 3, 12] {
            assert_eq!(
                impute_housewife_labor(a * 250, 1102).unwrap(),
                a * unit
            );
        }
    }

    #[test]
    fn snapshot_validation() {
        assert!(AccountsSnapshot::new(2014, 100, 50, 20, 10, 500).is_ok());
        assert!(matches!(
            AccountsSnapshot::new(2014, 100, 50, 60, 0, 500),
            Err(AccountsError::CountExceedsPopulation { field: "employed", .. })
        ));
        assert!(matches!(
            AccountsSnapshot::new(2014, 100, 50, 0, 60, 500),
            Err(AccountsError::CountExceedsPopulation { field: "housewives", .. })
        ));
        assert!(matches!(
            AccountsSnapshot::new(2014, 100, 50, 30, 30, 500),
            Err(AccountsError::WorkforceExceedsPopulation { .. })
        ));
        assert!(matches!(
            AccountsSnapshot::new(2014, 100, 50, 20, 10, 0),
            Err(AccountsError::NonPositiveMinWage)
        ));
    }
}
