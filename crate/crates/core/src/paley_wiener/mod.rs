//! Paley-Wiener signals and translation systems `{phi(. - a)}`: spectral
//! weights, translation Grams, bound transfer from exponentials to
//! translates (Riesz and frame versions), the convolution factorization,
//! the sinc series and the periodization criterion.

mod frame;
mod lemma;
mod periodization;
mod sampling;
mod signal;
mod transfer;
mod weight;

pub use frame::{verify_frame_transfer, FrameSpace, FrameTransferReport, SUPPORT_CAVEAT};
pub use lemma::{convolution_factorization_check, FactorizationReport, NORM_BOUND_SLACK};
pub use periodization::{
    reference_profiles, zd_periodization, AxisWindow, PeriodizationReport, WindowProfile, PERIODIZATION_TOLERANCE,
};
pub use sampling::{shannon_reconstruct, ShannonReport};
pub use signal::BandlimitedSignal;
pub use transfer::{translation_gram, verify_riesz_transfer, TransferReport};
pub use weight::{bump_window, ExactModuli, SpectralWeight, WeightProfile, EXACT_AGREEMENT};
