use core::fmt;

use crate::network::NodeId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// sigma <= 0, prior outside [0, 1], or non-finite parameters.
    InvalidHypothesis(&'static str),
    /// mu0 == mu1: every quantizer carries zero information.
    EqualMeans,
    UnsortedThresholds,
    BitsOutOfRange {
        bits: u32,
        max: u32,
    },
    /// Some cell has mass under H0 and none under H1.
    InfiniteDivergence,
    InvalidNetwork(&'static str),
    FusionNotAtEnd,
    UnknownNode(NodeId),
    InconsistentPlan(&'static str),
    MissingQuantizer(u32),
    InvalidParameter(&'static str),
    EmptyGrid,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidHypothesis(why) => write!(f, "invalid hypothesis pair: {why}"),
            Error::EqualMeans => write!(
                f,
                "hypothesis means are equal; no quantizer carries information"
            ),
            Error::UnsortedThresholds => {
                write!(f, "quantizer thresholds must be strictly increasing")
            }
            Error::BitsOutOfRange { bits, max } => {
                write!(f, "bit count {bits} outside the supported range 1..={max}")
            }
            Error::InfiniteDivergence => {
                write!(
                    f,
                    "divergence is infinite: a cell has H0 mass but no H1 mass"
                )
            }
            Error::InvalidNetwork(why) => write!(f, "invalid network: {why}"),
            Error::FusionNotAtEnd => write!(f, "fusion node must lie at an end of the line"),
            Error::UnknownNode(id) => write!(f, "unknown node id {}", id.0),
            Error::InconsistentPlan(why) => write!(f, "plan does not match network: {why}"),
            Error::MissingQuantizer(m) => write!(f, "no quantizer available for {m} bits"),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            Error::EmptyGrid => write!(f, "sweep grid is empty"),
        }
    }
}

impl core::error::Error for Error {}
