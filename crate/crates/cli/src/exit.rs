//! Failure classes and their process exit codes.

use ncpii_core::airy::AiryError;
use ncpii_core::flow::FlowError;
use ncpii_core::fredholm::FredholmError;
use ncpii_core::ncalg::NcError;

/// A failure with a stable name and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: &'static str,
    pub exit: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: &'static str, exit: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            exit,
            message: message.into(),
        }
    }

    pub fn bad_flags(message: impl Into<String>) -> Self {
        Self::new("BAD_FLAGS", 2, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new("IO", 3, message)
    }

    pub fn check_failed(message: impl Into<String>) -> Self {
        Self::new("CHECK_FAILED", 4, message)
    }

    /// `error[CODE]: message` on one line.
    pub fn line(&self) -> String {
        let msg = self.message.replace('\n', " ");
        format!("error[{}]: {}", self.code, msg)
    }
}

impl From<NcError> for Failure {
    fn from(e: NcError) -> Self {
        let (code, exit) = match e {
            NcError::NotATotalDerivative { .. } => ("NOT_A_TOTAL_DERIVATIVE", 10),
            NcError::SContamination => ("S_CONTAMINATION", 11),
            NcError::UnassignedLetter(_) => ("UNASSIGNED_LETTER", 12),
            NcError::Parse(_) => ("POLY_PARSE", 13),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<AiryError> for Failure {
    fn from(e: AiryError) -> Self {
        let (code, exit) = match e {
            AiryError::NonConvergence { .. } => ("NON_CONVERGENCE", 20),
            AiryError::InvalidIndex => ("INVALID_INDEX", 21),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<FredholmError> for Failure {
    fn from(e: FredholmError) -> Self {
        let (code, exit) = match e {
            FredholmError::BadShape { .. } => ("BAD_SHAPE", 30),
            FredholmError::NotHermitian { .. } => ("NOT_HERMITIAN", 31),
            FredholmError::SpectrumOutOfRange { .. } => ("SPECTRUM_OUT_OF_RANGE", 32),
            FredholmError::TruncationInsufficient { .. } => ("TRUNCATION_INSUFFICIENT", 33),
            FredholmError::NonPositiveDeterminant { .. } => ("NON_POSITIVE_DETERMINANT", 34),
            FredholmError::GridTooCoarse { .. } => ("GRID_TOO_COARSE", 35),
            FredholmError::Parse(_) => ("COUPLING_PARSE", 36),
            FredholmError::Airy(a) => return a.into(),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        let (code, exit) = match e {
            FlowError::LeadingCoefficientNotUnit { .. } => ("LEADING_COEFFICIENT_NOT_UNIT", 40),
            FlowError::TStartTooSmall { .. } => ("T_START_TOO_SMALL", 41),
            FlowError::BlowUp { .. } => ("BLOW_UP", 42),
            FlowError::StepControl { .. } => ("STEP_CONTROL", 43),
            FlowError::Algebra(a) => return a.into(),
            FlowError::Airy(a) => return a.into(),
            FlowError::Fredholm(f) => return f.into(),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::io(e.to_string())
    }
}
