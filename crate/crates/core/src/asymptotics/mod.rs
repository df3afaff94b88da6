//! Sampling of norm curves and their asymptotic summaries.

pub mod envelope;
pub mod fit;
pub mod hardy;
pub mod samples;
pub mod trend;
pub mod witness;

pub use envelope::{concave_envelope, envelope_translation_check, Envelope, TranslationCheck};
pub use fit::{fit_rate, RateFamily, RateFit};
pub use hardy::{hardy_check, HardyReport};
pub use samples::{sample_all, sample_norms, NormSamples, Quantity, SampledCurves, Spacing, TimeGrid};
pub use trend::{loglog_slope, DecayCriterion, DecayCurve};
pub use witness::{witness_lower_bound, witness_vector, Witness, WitnessBound};
