//! Random points on the circle: samplers, exact expectations and Monte
//! Carlo estimators.

pub mod closed_forms;
pub mod estimators;
pub mod model;

pub use closed_forms::{closed_form, erlang_p_kl, phi, phi_sum_oracle, ClosedForm};
pub use estimators::{
    equidistribution_paths, estimate, estimate_bracelet_prob, estimate_region_stats, max_spacing_check,
    transfer_check, EquidistributionReport, Model, Statistic, TransferReport,
};
pub use model::{sample_exp_model, sample_uniform_config, ExpSpacingSample};
