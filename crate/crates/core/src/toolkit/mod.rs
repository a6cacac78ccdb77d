//! Signal generation, metrics, post-processing, audio I/O and the Example 1
//! style benchmark.

pub mod benchmark;
pub mod denoise;
pub mod signal;
pub mod wav;

pub use benchmark::{benchmark_example1, BenchmarkConfig, BenchmarkReport, LambdaMode, SnrReport};
pub use denoise::{
    empirical_wiener_post, estimate_sigma_mad, estimate_sigma_spectrogram,
    scalar_threshold_denoise, ThresholdMode,
};
pub use signal::{add_awgn, gen_group_sparse, gen_harmonic, snr_db, GroupSparseSignal, NoiseLevel};
pub use wav::{read_wav, write_wav};
