//! Scenario runner pieces: configuration, zero-budget audits, the non-residue census,
//! product and power searches, disk experiments and report emission.

pub mod audit;
pub mod census;
pub mod config;
pub mod experiment;
pub mod report;
pub mod search;

pub use audit::{corollary_zero_budget_audit, AuditReport, AuditRow};
pub use census::{census_primes, nonresidue_census, nonresidue_count, Census};
pub use config::{BudgetFormula, Constants, ScenarioConfig};
pub use experiment::{main_theorem_experiment, MainExperiment};
pub use report::{to_csv, to_json, OutputFormat};
pub use search::{power_large_sum_search, product_large_sum_search, PowerSearch, ProductSearch};
