//! Stable exit-code mapping for every library error class.
//!
//! - `0` success (a non-converged fit or an empty selection is a warning,
//!   not a failure)
//! - `2` configuration errors (bad keys, bad values, missing keys)
//! - `3` input-data errors (missing or malformed files, mode mismatches)
//! - `4` parameter and domain errors (out-of-range corrections, degenerate
//!   fits requested directly, invalid simulation parameters)
//! - `5` output write failures

use smfret::Error;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownKey { .. }
        | Error::MissingRequiredKey { .. }
        | Error::ValueOutOfDomain { .. } => 2,

        Error::FileNotFound(_)
        | Error::ReadFailed { .. }
        | Error::MalformedRow { .. }
        | Error::MixedMode { .. }
        | Error::EmptyTrace
        | Error::NegativeCount { .. }
        | Error::LengthMismatch { .. }
        | Error::NonPositiveBinWidth(_)
        | Error::UnorderedBursts { .. } => 3,

        Error::NegativeParameter { .. }
        | Error::FractionOutOfRange { .. }
        | Error::NonPositiveGamma(_)
        | Error::ZeroTotal
        | Error::NonPositiveDistance { .. }
        | Error::BadBinning { .. }
        | Error::DegenerateData { .. }
        | Error::EmptyInput
        | Error::OutOfDomainPoint { .. }
        | Error::InvalidSimParam { .. } => 4,

        Error::WriteFailed { .. } => 5,
    }
}
