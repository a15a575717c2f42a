//! Executable forms of the runtime results: dominating-distribution presets,
//! exact LeadingOnes models, optimality computations, domination tests and
//! closed-form counterexamples.

mod domination;
mod leadingones;
mod levels;
mod theorems;

pub use domination::{
    dkw_epsilon, empirical_dominates, mutation_monotone_check, offspring_ones_dist, Evidence,
    Verdict,
};
pub use leadingones::{
    lo_exact_spec, lo_q_for_operator, lo_static_mean, lo_target_spec, optimal_k,
    optimal_static_rate, q_kbit, static_unbiased_audit, Audit,
};
pub use levels::{
    fitness_level_spec, jump_gap_prob, jump_lower_spec, preset_levels, LevelSpec, Preset,
    PresetModel,
};
pub use theorems::{
    counterexample_probs, fitprop_select_prob, sssp_theorem_params, Counterexample, SsspParams,
};
