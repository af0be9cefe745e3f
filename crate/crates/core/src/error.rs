use core::fmt;

use crate::model::EntityId;

/// Precondition faults raised by the centering operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenteringError {
    /// A zero topic was requested for an entity no zero in the utterance realizes.
    ZtaTopicNotZero { entity: EntityId },
    /// Beam widths start at 1.
    EmptyBeam,
}

impl fmt::Display for CenteringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenteringError::ZtaTopicNotZero { entity } => write!(
                f,
                "zero topic candidate #{} is not realized by a zero in the utterance",
                entity.0
            ),
            CenteringError::EmptyBeam => f.write_str("beam width must be at least 1"),
        }
    }
}

impl core::error::Error for CenteringError {}
