//! Limits for the exhaustive computations. Exceeding one is a refusal, never
//! an approximation.

use std::env;

/// Environment variables overriding the defaults.
pub const ENV_MAX_VERTICES: &str = "HYPERCOUNT_MAX_VERTICES";
pub const ENV_MAX_POLYMERS: &str = "HYPERCOUNT_MAX_POLYMERS";
pub const ENV_GIRTH_NODES: &str = "HYPERCOUNT_GIRTH_NODES";
pub const ENV_URSELL_VERTICES: &str = "HYPERCOUNT_URSELL_VERTICES";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Vertex cap for subset enumeration (defect-class counts, `Def(b)`).
    pub enumeration_vertices: usize,
    /// Cap on the number of polymers fed to the partition function.
    pub polymers: usize,
    /// DFS node cap for loose-cycle searches.
    pub girth_nodes: u64,
    /// Largest incompatibility graph handed to the Ursell function.
    pub ursell_vertices: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration_vertices: 24,
            polymers: 2048,
            girth_nodes: 20_000_000,
            ursell_vertices: 9,
        }
    }
}

impl Budgets {
    /// Defaults, overridden by any of the `HYPERCOUNT_*` variables that parse.
    pub fn from_env() -> Self {
        let mut b = Budgets::default();
        if let Some(v) = read(ENV_MAX_VERTICES) {
            b.enumeration_vertices = v as usize;
        }
        if let Some(v) = read(ENV_MAX_POLYMERS) {
            b.polymers = v as usize;
        }
        if let Some(v) = read(ENV_GIRTH_NODES) {
            b.girth_nodes = v;
        }
        if let Some(v) = read(ENV_URSELL_VERTICES) {
            b.ursell_vertices = v as usize;
        }
        b
    }
}

fn read(name: &str) -> Option<u64> {
    env::var(name).ok()?.trim().parse().ok()
}
