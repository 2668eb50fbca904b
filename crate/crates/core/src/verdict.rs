use serde::{Deserialize, Serialize};

/// Outcome of a single check, carrying evidence only on failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "evidence", rename_all = "snake_case")]
pub enum Verdict<E> {
    Pass,
    Fail(E),
}

impl<E> Verdict<E> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn evidence(&self) -> Option<&E> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(e) => Some(e),
        }
    }

    pub(crate) fn from_first(violation: Option<E>) -> Self {
        match violation {
            None => Verdict::Pass,
            Some(e) => Verdict::Fail(e),
        }
    }
}
