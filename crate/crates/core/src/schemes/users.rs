use std::fmt;

use super::SchemeId;

/// Number of users a scheme can serve with `K` antennas per BS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportedUsers {
    /// Across both cells.
    Total(usize),
    PerCell(usize),
    /// Only an upper bound is known: strictly fewer than `4K`.
    FarBelow(usize),
}

impl SupportedUsers {
    /// Exact count over both cells, if known.
    pub fn total(&self) -> Option<usize> {
        match *self {
            SupportedUsers::Total(n) => Some(n),
            SupportedUsers::PerCell(n) => Some(2 * n),
            SupportedUsers::FarBelow(_) => None,
        }
    }
}

impl fmt::Display for SupportedUsers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportedUsers::Total(n) => write!(f, "{n}"),
            SupportedUsers::PerCell(n) => write!(f, "{n} per cell"),
            SupportedUsers::FarBelow(n) => write!(f, "<<{n} (<<4K)"),
        }
    }
}

/// Supported-user counts of each scheme for two cells with `k` antennas.
pub fn supported_users(id: SchemeId, k: usize, jt_4k: bool) -> SupportedUsers {
    match id {
        SchemeId::NomaCb => SupportedUsers::Total(4 * k.saturating_sub(1)),
        SchemeId::NomaDcs => SupportedUsers::Total(3 * k),
        SchemeId::NomaJt => SupportedUsers::Total(if jt_4k { 4 * k } else { 3 * k }),
        SchemeId::NomaCs => SupportedUsers::FarBelow(4 * k),
        SchemeId::Noma | SchemeId::NomaTdm => SupportedUsers::PerCell(2 * k),
        SchemeId::Oma | SchemeId::OmaFfr => SupportedUsers::PerCell(k),
    }
}
