//! Strict CSV loading and saving for the three supported schemas.
//!
//! Headers must match exactly (no reordering, no extra columns), cells are
//! parsed with the decimal point only, and thousands separators are
//! rejected rather than guessed at — the source tables mix `.` and `,`
//! conventions and silent locale guessing is precisely the bug this module
//! exists to prevent. Every rejected file produces one primary error
//! naming the offending row and column; no partial data escapes.
//!
//! Rows are numbered as physical lines, with the header on line 1.
//! UTF-8 with LF or CRLF line endings is accepted; a byte-order mark is
//! not.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::distributions::{DistributionError, IncomeDistribution};
use crate::national_accounts::{AccountsError, AccountsSnapshot};

pub const ACCOUNTS_HEADER: &str =
    "year,gdp_total_tl,population_persons,employed_persons,housewives_persons,gross_min_wage_tl_month";
pub const DISTRIBUTION_HEADER: &str = "income,weight";
pub const LABELED_DISTRIBUTION_HEADER: &str = "income,weight,group";
pub const PARTICIPATION_HEADER: &str =
    "country,lfp_female,lfp_male,emp_female,emp_male,unemp_female,unemp_male";

/// Errors from loading or saving CSV files.
#[derive(Debug)]
pub enum IngestError {
    Io {
        path: String,
        source: std::io::Error,
    },
    /// The header line is missing or does not match the schema exactly.
    MissingColumn {
        expected: &'static str,
        found: String,
    },
    /// A data row has the wrong number of cells.
    WrongCellCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// A cell failed numeric parsing.
    NonNumericCell {
        row: usize,
        column: &'static str,
        value: String,
    },
    /// A parsed value violates a domain invariant (named per cell).
    InvariantViolation {
        row: usize,
        column: &'static str,
        message: String,
    },
    /// A participation rate is outside [0, 100].
    RateOutOfRange {
        row: usize,
        column: &'static str,
        value: f64,
    },
    /// The file has a header but no data rows.
    NoDataRows,
    /// An accounts file must hold exactly one snapshot row.
    TooManyRows { expected: usize, found: usize },
    /// Whole-distribution validation that is not tied to a single cell.
    Distribution(DistributionError),
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IngestError::*;
        match self {
            Io { path, source } => write!(f, "{path}: {source}"),
            MissingColumn { expected, found } => {
                write!(f, "header mismatch: expected `{expected}`, found `{found}`")
            }
            WrongCellCount {
                row,
                expected,
                found,
            } => write!(f, "row {row}: expected {expected} cells, found {found}"),
            NonNumericCell { row, column, value } => {
                write!(f, "row {row}, column `{column}`: `{value}` is not a valid number")
            }
            InvariantViolation {
                row,
                column,
                message,
            } => write!(f, "row {row}, column `{column}`: {message}"),
            RateOutOfRange { row, column, value } => {
                write!(f, "row {row}, column `{column}`: rate {value} outside [0, 100]")
            }
            NoDataRows => write!(f, "file has no data rows"),
            TooManyRows { expected, found } => {
                write!(f, "expected {expected} data row(s), found {found}")
            }
            Distribution(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IngestError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            IngestError::Io { source, .. } => Some(source),
            IngestError::Distribution(e) => Some(e),
            _ => None,
        }
    }
}

/// One row of the labor-force participation table; rates are percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationRow {
    pub country: String,
    pub lfp_female: f64,
    pub lfp_male: f64,
    pub emp_female: f64,
    pub emp_male: f64,
    pub unemp_female: f64,
    pub unemp_male: f64,
}

/// Parsed participation table plus plausibility warnings.
///
/// Warnings flag duplicate countries and rows whose printed layout is
/// internally implausible (female participation above male, employment
/// above participation); the values themselves are preserved as printed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationTable {
    pub rows: Vec<ParticipationRow>,
    pub warnings: Vec<String>,
}

fn read_file(path: &Path) -> Result<String, IngestError> {
    fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Splits into lines, accepting LF and CRLF; trailing empty line ignored.
fn split_lines(content: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = content.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    lines
}

fn check_header<'a>(
    content: &'a str,
    expected: &'static str,
) -> Result<Vec<&'a str>, IngestError> {
    let lines = split_lines(content);
    match lines.first() {
        Some(&header) if header == expected => Ok(lines[1..].to_vec()),
        Some(&header) => Err(IngestError::MissingColumn {
            expected,
            found: header.to_string(),
        }),
        None => Err(IngestError::MissingColumn {
            expected,
            found: String::new(),
        }),
    }
}

fn split_row(line: &str, row: usize, expected: usize) -> Result<Vec<&str>, IngestError> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != expected {
        return Err(IngestError::WrongCellCount {
            row,
            expected,
            found: cells.len(),
        });
    }
    Ok(cells)
}

fn parse_u64(cell: &str, row: usize, column: &'static str) -> Result<u64, IngestError> {
    if cell.is_empty() || !cell.bytes().all(|b| b.is_ascii_digit()) {
        return Err(IngestError::NonNumericCell {
            row,
            column,
            value: cell.to_string(),
        });
    }
    cell.parse().map_err(|_| IngestError::NonNumericCell {
        row,
        column,
        value: cell.to_string(),
    })
}

fn parse_i32(cell: &str, row: usize, column: &'static str) -> Result<i32, IngestError> {
    cell.parse().map_err(|_| IngestError::NonNumericCell {
        row,
        column,
        value: cell.to_string(),
    })
}

fn parse_f64(cell: &str, row: usize, column: &'static str) -> Result<f64, IngestError> {
    let parsed: f64 = cell.parse().map_err(|_| IngestError::NonNumericCell {
        row,
        column,
        value: cell.to_string(),
    })?;
    if !parsed.is_finite() {
        return Err(IngestError::NonNumericCell {
            row,
            column,
            value: cell.to_string(),
        });
    }
    Ok(parsed)
}

/// Parses one accounts snapshot from CSV text.
pub fn parse_accounts(content: &str) -> Result<AccountsSnapshot, IngestError> {
    let data = check_header(content, ACCOUNTS_HEADER)?;
    if data.is_empty() {
        return Err(IngestError::NoDataRows);
    }
    if data.len() > 1 {
        return Err(IngestError::TooManyRows {
            expected: 1,
            found: data.len(),
        });
    }
    let row = 2;
    let cells = split_row(data[0], row, 6)?;
    let year = parse_i32(cells[0], row, "year")?;
    let gdp_annual = parse_u64(cells[1], row, "gdp_total_tl")?;
    let population = parse_u64(cells[2], row, "population_persons")?;
    let employed = parse_u64(cells[3], row, "employed_persons")?;
    let housewives = parse_u64(cells[4], row, "housewives_persons")?;
    let min_wage = parse_u64(cells[5], row, "gross_min_wage_tl_month")?;
    AccountsSnapshot::new(year, gdp_annual, population, employed, housewives, min_wage).map_err(
        |e| {
            let column = match e {
                AccountsError::NonPositiveMinWage => "gross_min_wage_tl_month",
                AccountsError::CountExceedsPopulation {
                    field: "employed", ..
                } => "employed_persons",
                _ => "housewives_persons",
            };
            IngestError::InvariantViolation {
                row,
                column,
                message: e.to_string(),
            }
        },
    )
}

/// Loads one accounts snapshot from a file.
pub fn load_accounts(path: impl AsRef<Path>) -> Result<AccountsSnapshot, IngestError> {
    parse_accounts(&read_file(path.as_ref())?)
}

fn parse_distribution_rows(
    content: &str,
    header: &'static str,
    labeled: bool,
) -> Result<(IncomeDistribution, Vec<String>), IngestError> {
    let data = check_header(content, header)?;
    if data.is_empty() {
        return Err(IngestError::NoDataRows);
    }
    let mut incomes = Vec::with_capacity(data.len());
    let mut weights = Vec::with_capacity(data.len());
    let mut labels = Vec::new();
    let cell_count = if labeled { 3 } else { 2 };
    for (i, line) in data.iter().enumerate() {
        let row = i + 2;
        let cells = split_row(line, row, cell_count)?;
        let income = parse_f64(cells[0], row, "income")?;
        if income <= 0.0 {
            return Err(IngestError::InvariantViolation {
                row,
                column: "income",
                message: format!("income must be > 0, got {income}"),
            });
        }
        let weight = parse_f64(cells[1], row, "weight")?;
        if weight < 0.0 {
            return Err(IngestError::InvariantViolation {
                row,
                column: "weight",
                message: format!("weight must be >= 0, got {weight}"),
            });
        }
        incomes.push(income);
        weights.push(weight);
        if labeled {
            labels.push(cells[2].to_string());
        }
    }
    let dist = IncomeDistribution::from_samples(&incomes, Some(&weights))
        .map_err(IngestError::Distribution)?;
    Ok((dist, labels))
}

/// Parses an `income,weight` distribution from CSV text.
pub fn parse_distribution(content: &str) -> Result<IncomeDistribution, IngestError> {
    parse_distribution_rows(content, DISTRIBUTION_HEADER, false).map(|(d, _)| d)
}

/// Loads an `income,weight` distribution from a file.
pub fn load_distribution(path: impl AsRef<Path>) -> Result<IncomeDistribution, IngestError> {
    parse_distribution(&read_file(path.as_ref())?)
}

/// Parses an `income,weight,group` distribution for decomposition.
pub fn parse_labeled_distribution(
    content: &str,
) -> Result<(IncomeDistribution, Vec<String>), IngestError> {
    parse_distribution_rows(content, LABELED_DISTRIBUTION_HEADER, true)
}

/// Loads an `income,weight,group` distribution from a file.
pub fn load_labeled_distribution(
    path: impl AsRef<Path>,
) -> Result<(IncomeDistribution, Vec<String>), IngestError> {
    parse_labeled_distribution(&read_file(path.as_ref())?)
}

/// Parses the participation table from CSV text.
pub fn parse_participation(content: &str) -> Result<ParticipationTable, IngestError> {
    let data = check_header(content, PARTICIPATION_HEADER)?;
    if data.is_empty() {
        return Err(IngestError::NoDataRows);
    }
    const RATE_COLUMNS: [&str; 6] = [
        "lfp_female",
        "lfp_male",
        "emp_female",
        "emp_male",
        "unemp_female",
        "unemp_male",
    ];
    let mut rows: Vec<ParticipationRow> = Vec::with_capacity(data.len());
    let mut warnings = Vec::new();
    for (i, line) in data.iter().enumerate() {
        let row = i + 2;
        let cells = split_row(line, row, 7)?;
        let mut rates = [0.0; 6];
        for (j, rate) in rates.iter_mut().enumerate() {
            let column = RATE_COLUMNS[j];
            let value = parse_f64(cells[j + 1], row, column)?;
            if !(0.0..=100.0).contains(&value) {
                return Err(IngestError::RateOutOfRange { row, column, value });
            }
            *rate = value;
        }
        let parsed = ParticipationRow {
            country: cells[0].to_string(),
            lfp_female: rates[0],
            lfp_male: rates[1],
            emp_female: rates[2],
            emp_male: rates[3],
            unemp_female: rates[4],
            unemp_male: rates[5],
        };
        if rows.iter().any(|r| r.country == parsed.country) {
            warnings.push(format!(
                "row {row}: duplicate country `{}` kept as-is",
                parsed.country
            ));
        }
        if parsed.lfp_female > parsed.lfp_male {
            warnings.push(format!(
                "row {row} ({}): female participation {} exceeds male {}; the printed column layout is likely shifted",
                parsed.country, parsed.lfp_female, parsed.lfp_male
            ));
        }
        if parsed.emp_female > parsed.lfp_female || parsed.emp_male > parsed.lfp_male {
            warnings.push(format!(
                "row {row} ({}): employment rate exceeds participation rate",
                parsed.country
            ));
        }
        rows.push(parsed);
    }
    Ok(ParticipationTable { rows, warnings })
}

/// Loads the participation table from a file.
pub fn load_participation(path: impl AsRef<Path>) -> Result<ParticipationTable, IngestError> {
    parse_participation(&read_file(path.as_ref())?)
}

fn write_file(path: &Path, content: &str) -> Result<(), IngestError> {
    let io_err = |source| IngestError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(content.as_bytes()).map_err(io_err)
}

/// Serializes a snapshot to the accounts schema.
pub fn accounts_to_csv(snapshot: &AccountsSnapshot) -> String {
    format!(
        "{ACCOUNTS_HEADER}\n{},{},{},{},{},{}\n",
        snapshot.year,
        snapshot.gdp_annual,
        snapshot.population,
        snapshot.employed,
        snapshot.housewives,
        snapshot.min_wage_monthly
    )
}

/// Saves a snapshot; `load_accounts` reads it back identically.
pub fn save_accounts(
    path: impl AsRef<Path>,
    snapshot: &AccountsSnapshot,
) -> Result<(), IngestError> {
    write_file(path.as_ref(), &accounts_to_csv(snapshot))
}

/// Serializes a distribution to the `income,weight` schema. Floats are
/// written in shortest round-trip form, so reloading is bit-exact.
pub fn distribution_to_csv(dist: &IncomeDistribution) -> String {
    let mut out = String::from(DISTRIBUTION_HEADER);
    out.push('\n');
    for (y, w) in dist.incomes().iter().zip(dist.weights()) {
        out.push_str(&format!("{y},{w}\n"));
    }
    out
}

/// Saves a distribution; `load_distribution` reads it back identically.
pub fn save_distribution(
    path: impl AsRef<Path>,
    dist: &IncomeDistribution,
) -> Result<(), IngestError> {
    write_file(path.as_ref(), &distribution_to_csv(dist))
}
