//! Campaign configuration and the closed statement registry.

use std::fmt;
use std::str::FromStr;

use asfield_core::{FiniteField, finite_field::DEFAULT_MAX_ORDER};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Bumped whenever a statement is added to the registry or the report layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CampaignName {
    Lemma1,
    LocalDisjoint,
    GlobalDisjoint,
    Growth,
    AwayBound,
    P2Bound,
    Chebotarev,
}

impl CampaignName {
    pub const ALL: [CampaignName; 7] = [
        CampaignName::Lemma1,
        CampaignName::LocalDisjoint,
        CampaignName::GlobalDisjoint,
        CampaignName::Growth,
        CampaignName::AwayBound,
        CampaignName::P2Bound,
        CampaignName::Chebotarev,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CampaignName::Lemma1 => "lemma1",
            CampaignName::LocalDisjoint => "local-disjoint",
            CampaignName::GlobalDisjoint => "global-disjoint",
            CampaignName::Growth => "growth",
            CampaignName::AwayBound => "away-bound",
            CampaignName::P2Bound => "p2-bound",
            CampaignName::Chebotarev => "chebotarev",
        }
    }

    pub fn statement(&self) -> &'static Statement {
        lookup(self.as_str()).expect("registry covers every campaign")
    }
}

impl fmt::Display for CampaignName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CampaignName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        CampaignName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::InvalidCampaignName(s.to_string()))
    }
}

impl Serialize for CampaignName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Statement {
    pub id: &'static str,
    pub statement: &'static str,
}

pub const REGISTRY: [Statement; 7] = [
    Statement {
        id: "lemma1",
        statement: "for p not dividing i, a^-i generates a cyclic degree-p extension totally ramified at a \
                    with root valuation -i/p, and unramified at every other place",
    },
    Statement {
        id: "local-disjoint",
        statement: "the extensions generated by a^-i for distinct i prime to p are linearly disjoint over \
                    the completion at a: n of them have local degree p^n",
    },
    Statement {
        id: "global-disjoint",
        statement: "generators a^-i for distinct pairs (a, i) with p not dividing i are linearly disjoint \
                    over k: n of them have global degree p^n, bounding every local degree",
    },
    Statement {
        id: "growth",
        statement: "local degrees at a of the composita of a^-i over growing sets of i grow without bound \
                    as p, p^2, p^3, ...",
    },
    Statement {
        id: "away-bound",
        statement: "at a place b different from a, every compositum of extensions generated by a^-i has \
                    local degree at most p",
    },
    Statement {
        id: "p2-bound",
        statement: "for fixed i, local degrees of the compositum of the a^-i over all places a are bounded \
                    by p^2, and the bound is attained",
    },
    Statement {
        id: "chebotarev",
        statement: "Frobenius elements equidistribute: the split proportion of unramified places \
                    approaches 1/[L:k] and every Galois element occurs as a Frobenius",
    },
];

pub fn lookup(id: &str) -> Option<&'static Statement> {
    REGISTRY.iter().find(|s| s.id == id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Human => "human",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "human" => Ok(Format::Human),
            other => Err(CliError::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Format {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GUARD: i64 = asfield_core::artin_schreier::DEFAULT_GUARD;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub campaign: CampaignName,
    /// Base field as `p^m` or `p`.
    pub q: String,
    pub max_gen_degree: usize,
    pub max_place_degree: usize,
    pub max_i: u32,
    /// Generator count bound.
    pub n: usize,
    /// Fixed exponent for `p2-bound`.
    pub i: u32,
    /// Random draws per generator count in `global-disjoint`.
    pub samples: usize,
    /// Explicit generator places, overriding the degree bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub places: Option<Vec<String>>,
    /// Generator lists for `chebotarev`, each comma separated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gens: Option<Vec<String>>,
    pub seed: u64,
    pub guard: i64,
    pub tolerance: f64,
    pub format: Format,
}

impl CampaignConfig {
    /// Desk-scale defaults for a campaign.
    pub fn new(campaign: CampaignName) -> Self {
        let mut config = CampaignConfig {
            campaign,
            q: "2".to_string(),
            max_gen_degree: 2,
            max_place_degree: 3,
            max_i: 7,
            n: 4,
            i: 1,
            samples: 8,
            places: None,
            gens: None,
            seed: DEFAULT_SEED,
            guard: DEFAULT_GUARD,
            tolerance: 0.1,
            format: Format::Json,
        };
        match campaign {
            CampaignName::Growth => config.n = 5,
            CampaignName::P2Bound => config.max_gen_degree = 4,
            CampaignName::Chebotarev => config.max_place_degree = 9,
            _ => {}
        }
        config
    }

    pub fn with_q(mut self, q: &str) -> Self {
        self.q = q.to_string();
        self
    }

    pub fn field(&self) -> Result<FiniteField> {
        Ok(FiniteField::parse_spec(&self.q, DEFAULT_MAX_ORDER)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max-gen-degree", self.max_gen_degree as i64),
            ("max-place-degree", self.max_place_degree as i64),
            ("max-i", self.max_i as i64),
            ("i", self.i as i64),
            ("guard", self.guard),
        ];
        for (name, value) in positive {
            if value < 1 {
                return Err(CliError::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::InvalidConfig(format!(
                "tolerance must be a nonnegative number, got {}",
                self.tolerance
            )));
        }
        self.field()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_closed_and_resolvable() {
        for name in CampaignName::ALL {
            assert_eq!(name.as_str().parse::<CampaignName>().unwrap(), name);
            assert_eq!(name.statement().id, name.as_str());
        }
        assert!(matches!(
            "lemma9".parse::<CampaignName>(),
            Err(CliError::InvalidCampaignName(_))
        ));
    }

    #[test]
    fn validation_rejects_nonpositive_bounds() {
        let mut c = CampaignConfig::new(CampaignName::Lemma1);
        assert!(c.validate().is_ok());
        c.max_i = 0;
        assert!(matches!(c.validate(), Err(CliError::InvalidConfig(_))));
        let c = CampaignConfig::new(CampaignName::Lemma1).with_q("4^2");
        assert!(c.validate().is_err());
    }
}
