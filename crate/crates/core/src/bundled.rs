//! Sample data shipped with the crate: the Turkey 2014 national-accounts
//! snapshot (TurkStat figures) the two-stage model was originally run on,
//! the labor-force participation table, and the originally reported values
//! the audit report compares against.

use crate::model::ReferenceValues;
use crate::national_accounts::AccountsSnapshot;

/// Accounts CSV for the Turkey 2014 scenario.
pub const TURKEY_2014_CSV: &str = include_str!("../data/turkey2014.csv");

/// Labor-force participation, employment and unemployment rates as printed
/// in the source table, without correction. The printed column alignment is
/// visibly shifted (female participation exceeding male in every row), so
/// loading this file produces plausibility warnings by design.
pub const PARTICIPATION_CSV: &str = include_str!("../data/participation.csv");

/// The Turkey 2014 snapshot: GDP 2,054,897,828,000 TL, population
/// 77,695,900, employed 25,933,000, housewives 11,589,000, gross minimum
/// wage 1,102 TL/month.
pub fn turkey_2014() -> AccountsSnapshot {
    AccountsSnapshot::new(2014, 2_054_897_828_000, 77_695_900, 25_933_000, 11_589_000, 1102)
        .expect("bundled snapshot is valid")
}

/// Values originally reported for the Turkey 2014 run, used by the audit
/// report. The reported I₂ of 0.49 is not reproducible from the reported
/// inputs (the ratio form gives ≈ 0.5031); the audit flags exactly that.
pub fn turkey_2014_reference() -> ReferenceValues {
    ReferenceValues {
        i1: 0.50,
        i2: 0.49,
        l_kev: 12_771_078_000,
        mu_monthly: 2204.0,
        mu_kev_monthly: 2218.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_csv_matches_constant_snapshot() {
        let parsed = crate::ingest::parse_accounts(TURKEY_2014_CSV).unwrap();
        assert_eq!(parsed, turkey_2014());
    }

    #[test]
    fn bundled_participation_parses_with_warnings() {
        let table = crate::ingest::parse_participation(PARTICIPATION_CSV).unwrap();
        assert_eq!(table.rows.len(), 12);
        let oecd = table.rows.iter().find(|r| r.country == "OECD").unwrap();
        assert_eq!(
            (
                oecd.lfp_female,
                oecd.lfp_male,
                oecd.emp_female,
                oecd.emp_male,
                oecd.unemp_female,
                oecd.unemp_male
            ),
            (69.0, 52.5, 65.5, 49.6, 5.2, 5.7)
        );
        // printed alignment is implausible on purpose; warnings must say so
        assert!(!table.warnings.is_empty());
    }
}
