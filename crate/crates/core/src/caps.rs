//! Size limits for the constructions that can blow up combinatorially.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bounds checked by automata, monoid and Boolean-algebra builders.
///
/// Exceeding any of them yields [`Error::CapExceeded`] naming the stage that
/// overflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub monoid: usize,
    pub dfa_states: usize,
    pub atoms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            monoid: 20_000,
            dfa_states: 50_000,
            atoms: 4096,
        }
    }
}

impl Caps {
    /// Parses overrides of the form `monoid=100,dfa=2000,atoms=64`.
    /// Unmentioned keys keep their defaults.
    pub fn parse_overrides(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("bad cap override `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad cap value in `{part}`")))?;
            match key.trim() {
                "monoid" => caps.monoid = value,
                "dfa" | "dfa_states" => caps.dfa_states = value,
                "atoms" => caps.atoms = value,
                other => return Err(Error::Invalid(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    /// Reads `WORDLOGIC_CAPS` from the environment, falling back to defaults.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("WORDLOGIC_CAPS") {
            Ok(spec) => Caps::parse_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}
