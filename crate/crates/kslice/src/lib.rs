//! Sampling uniform independent sets of a fixed size k via the down-up walk
//! family, paired with an exact verification engine: stationary
//! distributions, spectral gaps, log-Sobolev constants, influence matrices,
//! cumulants, Edgeworth expansions, zero-freeness probes, induced component
//! chains, and Stein/Poisson identities, all checkable at desk scale.
//!
//! Start with the runnable examples (`cargo run --release --example <name>`);
//! each one exercises a major capability end to end. The `kslice` binary
//! exposes the same functionality as subcommands.

pub mod count;
pub mod graph;
pub mod hardcore;
pub mod numeric;
pub mod walks;

pub use count::{
    enumerate_slice, occupancy_ratio, size_counts, size_counts_brute, size_counts_structured,
    zero_free_probe, PinSet, SizeCountVector, SliceSpace, ZeroProbeConfig,
};
pub use graph::{random_subset_goodness_experiment, ComponentDecomposition, Graph, GoodnessReport};
pub use hardcore::{
    critical_activity, critical_density, cumulant_stability, cumulants, edgeworth_estimate,
    hermite, marginal_bounds, slice_probability, solve_activity, CumulantReport, HardCoreModel,
};
pub use spectral::{
    decomposition_ratio, dirichlet_form, independence_norms, induced_kernel, induced_vs_hardcore,
    influence_matrix, lsi_constant, mixing_profile, mk_identity_check, solve_poisson,
    spectral_gap, stein_difference_check, InfluenceMatrix, LsiOptions, MixingProfile,
    SpectralReport,
};
pub use walks::{
    acceptance_rate, build_glauber_kernel, build_kernel, coupling_contraction, glauber_hardcore,
    rejection_sample, simulate, step_down_up, ChainConfig, Kernel, KernelKind, Variant,
};
pub mod cli;
pub mod spectral;
