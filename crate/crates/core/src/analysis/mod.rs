//! Competitive analysis of 1-SORT and SIDLE: arc classification, per-arc
//! lemma checks, the charging construction, and numerical optimisation of
//! the resulting bounds.

pub mod arcs;
pub mod charging;
pub mod lemmas;
pub mod optimize;
pub mod params;
pub mod verify;

pub use arcs::{classify, ArcClass};
pub use charging::{charging, ChargingReport};
pub use lemmas::{verify_lemma_bounds, LemmaReport, LemmaTally};
pub use optimize::{
    betasort_lower_bound, minimize_theorem1, optimize_sidle, sidle_ratio_bound,
    sqrt2_adversary_ratio,
};
pub use params::{theorem1_rho, AnalysisParams, RatioBounds};
pub use verify::{stress_instances, verify_campaign, VerifySummary};
