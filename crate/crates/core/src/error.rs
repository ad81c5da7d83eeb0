use thiserror::Error;

use crate::free::Validity;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Display strings start with the variant name so command-line diagnostics
/// can be matched against it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidDesign: {0}")]
    InvalidDesign(String),

    #[error("InvalidAngle: fiber angle {0} rad is outside 0 < |angle| < pi/2")]
    InvalidAngle(f64),

    #[error("DegenerateState: {0:?}")]
    DegenerateState(Validity),

    #[error("OverExtended: deformed length {length} m reaches fiber length {fiber} m")]
    OverExtended { length: f64, fiber: f64 },

    #[error("NegativePressure: FREE {index} has pressure {pressure} Pa")]
    NegativePressure { index: usize, pressure: f64 },

    #[error("PressureLimit: FREE {index} has pressure {pressure} Pa above p_max {p_max} Pa")]
    PressureLimit {
        index: usize,
        pressure: f64,
        p_max: f64,
    },

    #[error("NonUnitAxis: axis norm {0} deviates from 1")]
    NonUnitAxis(f64),

    #[error("KinematicsInvalid: FREE '{name}' (index {index}) is {reason:?}")]
    KinematicsInvalid {
        index: usize,
        name: String,
        reason: Validity,
    },

    #[error("UnknownKinematicMap: '{0}'")]
    UnknownKinematicMap(String),

    #[error("EmptySelection: at least one wrench component is required")]
    EmptySelection,

    #[error("TooManyFrees: {0} FREEs exceed the corner enumeration limit of 20")]
    TooManyFrees(usize),

    #[error("DimensionMismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("WrongDimension: operation needs {expected} wrench components, zonotope has {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("EmptyAssembly: an assembly needs at least one FREE")]
    EmptyAssembly,

    #[error("ParseError: {location}: {message}")]
    Parse { location: String, message: String },

    #[error("ValidationError: {0}")]
    Validation(String),

    #[error("MissingBaseline: no zero-pressure record for state dl={dl}, dphi={dphi}")]
    MissingBaseline { dl: f64, dphi: f64 },

    #[error("LengthMismatch: {predicted} predictions vs {measured} measurements")]
    LengthMismatch { predicted: usize, measured: usize },

    #[error("EmptyInput: {0}")]
    EmptyInput(String),

    #[error("EmptyGrid: {0}")]
    EmptyGrid(String),

    /// A record-level failure while reading a dataset.
    #[error("{source} (row {row})")]
    AtRow { row: usize, source: Box<Error> },

    #[error("IoError: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the file system rather than by the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
