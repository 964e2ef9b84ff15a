use thiserror::Error;

use crate::analysis::UndefinedReason;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{field}` = {value} is outside the allowed range {allowed}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("missing required parameter `{0}`")]
    MissingField(&'static str),

    #[error("unknown parameter `{0}`")]
    UnknownField(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("realization contains no base stations")]
    NoBaseStations,

    #[error("link distance {distance_km} km is below the minimum of {min_km} km")]
    DegenerateDistance { distance_km: f64, min_km: f64 },

    #[error("received powers are not in nonincreasing decode order at index {0}")]
    NotSorted(usize),

    #[error("interference plus noise must be positive, got {0}")]
    ZeroNoiseFloor(f64),

    #[error("selection radius is undefined: {0}")]
    UndefinedRadius(UndefinedReason),

    #[error("selection radius is undefined at every grid point")]
    AllUndefined,

    #[error(
        "typical cell (extent {extent_km} km, offset {offset_km} km) does not fit in a window of half-side {half_side_km} km"
    )]
    GuardViolation {
        extent_km: f64,
        offset_km: f64,
        half_side_km: f64,
    },

    #[error("trial {index} failed: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by user input (parameters, config files)
    /// rather than by the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. }
                | Error::MissingField(_)
                | Error::UnknownField(_)
                | Error::Config(_)
        )
    }
}
