//! Benchmark inputs: fixed samples drawn from the harness generators.

use sill_core::harness::{gen_cp, gen_hcp, GenConfig};
use sill_core::surface::{print_session, Decl, DeclBody, Dialect, Pos, SessionFile};
use sill_core::typecheck::{CpDerivation, HcpDerivation};

pub const SEED: u64 = 42;

fn config(count: usize, dialect: Dialect) -> GenConfig {
    GenConfig {
        seed: SEED,
        count,
        dialect,
        ..GenConfig::default()
    }
}

/// The first `count` CP samples at the benchmark seed.
pub fn cp_samples(count: usize) -> Vec<CpDerivation> {
    let cfg = config(count, Dialect::Cp);
    (0..count).map(|i| gen_cp(&cfg, i).2).collect()
}

/// The first `count` HCP samples at the benchmark seed.
pub fn hcp_samples(count: usize) -> Vec<HcpDerivation> {
    let cfg = config(count, Dialect::Hcp);
    (0..count).map(|i| gen_hcp(&cfg, i).2).collect()
}

/// A `.sill` source declaring every sample as `P0`, `P1`, ...
pub fn session_source(samples: &[CpDerivation]) -> String {
    let decls = samples
        .iter()
        .enumerate()
        .map(|(i, d)| Decl {
            name: format!("P{i}"),
            env: d.env.clone(),
            body: DeclBody::Cp(d.term.clone()),
            pos: Pos::default(),
            body_pos: Pos::default(),
        })
        .collect();
    print_session(&SessionFile { decls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sill_core::surface::parse_session;

    #[test]
    fn session_source_parses_back() {
        let samples = cp_samples(5);
        let file = parse_session(&session_source(&samples)).unwrap();
        assert_eq!(file.decls.len(), 5);
        assert_eq!(hcp_samples(3).len(), 3);
    }
}
