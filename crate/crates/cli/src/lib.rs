//! Verification campaigns and ad-hoc queries for Artin–Schreier composita over F_q(T).

pub mod campaigns;
pub mod config;
pub mod error;
pub mod explore;
pub mod report;

pub use campaigns::run_campaign;
pub use config::{lookup, CampaignConfig, CampaignName, Format, Statement, REGISTRY, SCHEMA_VERSION};
pub use error::{CliError, Result};
pub use explore::{explore, Query};
pub use report::{emit_report, CampaignReport, CheckRecord};
