//! Size caps shared by every module.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Hard cap on the order of any constructed group.
    pub max_group_order: usize,
    /// Cap on the group order for subgroup enumeration.
    pub max_enumeration_order: usize,
    /// Cap on the isomorphism search.
    pub max_isomorphism_order: usize,
    /// Cap on the size of an enveloping semigroup.
    pub max_semigroup: usize,
    /// Cap on the number of points of a product flow.
    pub max_points: usize,
    /// Cap on `k` in the independence search.
    pub max_independence: usize,
    /// Cap on the number of sets in a generated lattice.
    pub max_lattice_sets: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: 2000,
            max_enumeration_order: 360,
            max_isomorphism_order: 2000,
            max_semigroup: 50_000,
            max_points: 4096,
            max_independence: 4,
            max_lattice_sets: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CapsError {
    #[error("malformed cap entry `{0}` (expected key=value)")]
    Malformed(String),
    #[error("unknown cap `{0}`")]
    UnknownKey(String),
    #[error("cap `{key}` has non-numeric value `{value}`")]
    BadValue { key: String, value: String },
}

impl Caps {
    /// Applies overrides of the form `key=value[,key=value...]`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, CapsError> {
        for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| CapsError::Malformed(entry.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            let v: usize = value.parse().map_err(|_| CapsError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })?;
            match key {
                "max_group_order" => self.max_group_order = v,
                "max_enumeration_order" => self.max_enumeration_order = v,
                "max_isomorphism_order" => self.max_isomorphism_order = v,
                "max_semigroup" => self.max_semigroup = v,
                "max_points" => self.max_points = v,
                "max_independence" => self.max_independence = v,
                "max_lattice_sets" => self.max_lattice_sets = v,
                _ => return Err(CapsError::UnknownKey(key.to_string())),
            }
        }
        Ok(self)
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max_group_order={},max_enumeration_order={},max_isomorphism_order={},max_semigroup={},max_points={},max_independence={},max_lattice_sets={}",
            self.max_group_order,
            self.max_enumeration_order,
            self.max_isomorphism_order,
            self.max_semigroup,
            self.max_points,
            self.max_independence,
            self.max_lattice_sets
        )
    }
}
