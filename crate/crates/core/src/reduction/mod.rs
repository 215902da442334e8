//! Baker-Davenport reduction of the absolute bound and the campaigns that
//! apply it to every linear form.

pub mod campaigns;
pub mod lemma;
pub mod orchestrate;
pub mod soundness;

pub use campaigns::{run_campaign, CampaignReport, CampaignSpec, Fallback, ParameterResult};
pub use lemma::{
    baker_davenport, mu_value, nearest_distance, tau_for, MuSpec, ReductionCertificate, ReductionFailure,
    ReductionProblem,
};
pub use orchestrate::{run_reduction, ReductionContext, ReductionSummary};
