//! Unbiased estimators for k-cliques, k-independent sets and k-clique
//! covers, and the sampling driver that turns them into (ε, δ) estimates.

mod driver;
mod embed;
mod exhaustive;
mod scaled;

pub use driver::{
    analytic_rho, draw_samples, estimate, required_samples, EstimateReport, SampleConfig,
    SampleMode, SamplePlan, Target, RHO_SAFETY_FACTOR,
};
pub use embed::{embed_clique_once, embed_cover_once, Chooser, EmbedTrace, RngChooser, Symmetry};
pub use exhaustive::{exact_expectation, path_expectation, PathSummary};
pub use scaled::ScaledValue;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream for sample `index` under `seed`.
///
/// Stream 0 is reserved for graph generation, so sample `i` reads stream
/// `i + 1` of the ChaCha8 generator keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> RngChooser<ChaCha8Rng> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    RngChooser(rng)
}
