//! Search budgets for the brute-force routines.
//!
//! Defaults are conservative. They can be raised at process start through the
//! `HYPERSTATE_LIMITS` environment variable, a comma separated list of
//! `key=value` pairs, e.g. `HYPERSTATE_LIMITS=automorphism_max_n=12,group_order=2000000`.

use std::sync::OnceLock;

/// Upper bounds applied by the exhaustive searches.
#[derive(Debug, Clone, PartialEq)]
pub struct Limits {
    /// Largest vertex count for the automorphism search.
    pub automorphism_max_n: usize,
    /// Largest permutation group enumerated by closure.
    pub group_order: usize,
    /// Largest N for searches over all of S_N (stabilizers, realizability).
    pub symmetric_search_max_n: usize,
    /// Node budget of the product-decomposition search.
    pub product_search_nodes: usize,
    /// Largest reduced density matrix dimension.
    pub reduced_dim: usize,
    /// Largest fixed-excitation sector handled by the Hamiltonian builders.
    pub sector_dim: usize,
    /// Largest number of amplitudes materialized by a single construction.
    pub state_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            automorphism_max_n: 10,
            group_order: 1_000_000,
            symmetric_search_max_n: 8,
            product_search_nodes: 50_000_000,
            reduced_dim: 4096,
            sector_dim: 5000,
            state_terms: 4_000_000,
        }
    }
}

impl Limits {
    /// Parse an override string on top of the defaults. Unknown keys and
    /// malformed values are reported.
    pub fn parse(spec: &str) -> Result<Limits, String> {
        let mut limits = Limits::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid number in `{item}`"))?;
            let slot = match key.trim() {
                "automorphism_max_n" => &mut limits.automorphism_max_n,
                "group_order" => &mut limits.group_order,
                "symmetric_search_max_n" => &mut limits.symmetric_search_max_n,
                "product_search_nodes" => &mut limits.product_search_nodes,
                "reduced_dim" => &mut limits.reduced_dim,
                "sector_dim" => &mut limits.sector_dim,
                "state_terms" => &mut limits.state_terms,
                other => return Err(format!("unknown limit `{other}`")),
            };
            *slot = value;
        }
        Ok(limits)
    }
}

pub const ENV_VAR: &str = "HYPERSTATE_LIMITS";

static LIMITS: OnceLock<Limits> = OnceLock::new();

/// Process-wide limits, read once from the environment. A malformed variable
/// falls back to the defaults; [`check_env`] reports the problem explicitly.
pub fn limits() -> &'static Limits {
    LIMITS.get_or_init(|| match std::env::var(ENV_VAR) {
        Ok(spec) => Limits::parse(&spec).unwrap_or_default(),
        Err(_) => Limits::default(),
    })
}

/// Validate the environment override without installing it.
pub fn check_env() -> Result<(), String> {
    match std::env::var(ENV_VAR) {
        Ok(spec) => Limits::parse(&spec).map(|_| ()),
        Err(_) => Ok(()),
    }
}
