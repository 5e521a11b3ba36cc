//! Runtime limits and reproducibility knobs shared by the library and CLI.

use std::path::PathBuf;

#[derive(Clone, Debug)]
pub struct Config {
    /// Largest matrix size accepted by whole-family classification.
    pub max_n: usize,
    /// Orbit enumeration aborts once its estimated footprint exceeds this.
    pub orbit_memory_budget: usize,
    /// Largest m for which GL(m,2) may be enumerated.
    pub gl_ceiling: usize,
    /// Worker threads for classification; 0 picks the machine default.
    pub threads: usize,
    /// Where class tables are cached; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    /// Seed for all sampled checks; fully determines them.
    pub seed: u64,
    /// Largest denominator tolerated in exact torus coordinates.
    pub denominator_limit: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_n: 7,
            orbit_memory_budget: 1 << 30,
            gl_ceiling: 6,
            threads: 0,
            cache_dir: None,
            seed: 0xB077_5EED,
            denominator_limit: 1 << 20,
        }
    }
}
