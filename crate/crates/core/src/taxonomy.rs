//! The closed error taxonomy and the geometric severity scale.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the eight error types an evaluator may record.
///
/// The set is closed. Variant order is the canonical display order used in
/// reports and matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorType {
    #[serde(rename = "IMP")]
    Impact,
    #[serde(rename = "RAM")]
    RequiredAdaptationMissing,
    #[serde(rename = "TRM")]
    Terminology,
    #[serde(rename = "UGR")]
    Ungrammatical,
    #[serde(rename = "MIS")]
    Mistranslation,
    #[serde(rename = "STL")]
    Style,
    #[serde(rename = "PRF")]
    Proofreading,
    #[serde(rename = "PRN")]
    ProperName,
}

impl ErrorType {
    pub const ALL: [ErrorType; 8] = [
        ErrorType::Impact,
        ErrorType::RequiredAdaptationMissing,
        ErrorType::Terminology,
        ErrorType::Ungrammatical,
        ErrorType::Mistranslation,
        ErrorType::Style,
        ErrorType::Proofreading,
        ErrorType::ProperName,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ErrorType::Impact => "IMP",
            ErrorType::RequiredAdaptationMissing => "RAM",
            ErrorType::Terminology => "TRM",
            ErrorType::Ungrammatical => "UGR",
            ErrorType::Mistranslation => "MIS",
            ErrorType::Style => "STL",
            ErrorType::Proofreading => "PRF",
            ErrorType::ProperName => "PRN",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorType::Impact => "Impact",
            ErrorType::RequiredAdaptationMissing => "Required Adaptation Missing",
            ErrorType::Terminology => "Terminology",
            ErrorType::Ungrammatical => "Ungrammatical",
            ErrorType::Mistranslation => "Mistranslation",
            ErrorType::Style => "Style",
            ErrorType::Proofreading => "Proofreading error",
            ErrorType::ProperName => "Proper Name",
        }
    }

    /// Short guidance text shown to evaluators.
    pub fn definition(self) -> &'static str {
        match self {
            ErrorType::Impact => {
                "Inappropriate literal translation that weakens the intended effect on the target audience."
            }
            ErrorType::RequiredAdaptationMissing => {
                "The source contains an error that must be corrected, or the target market requires an adaptation that was not made."
            }
            ErrorType::Terminology => {
                "Wrong or inconsistent use of domain terms or of the client's approved terminology."
            }
            ErrorType::Ungrammatical => {
                "Grammar errors in the target: agreement, inflection, word order, syntax."
            }
            ErrorType::Mistranslation => {
                "The meaning of the source is rendered incorrectly, including plausible-looking literal renderings that make no sense."
            }
            ErrorType::Style => {
                "Awkward, unidiomatic or register-inappropriate wording that is otherwise accurate."
            }
            ErrorType::Proofreading => {
                "Spelling, punctuation, capitalization, spacing and other typographical slips."
            }
            ErrorType::ProperName => {
                "Names of people, products, companies or places translated, transliterated or altered incorrectly."
            }
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown error type code {0:?}")]
pub struct UnknownErrorType(pub String);

impl FromStr for ErrorType {
    type Err = UnknownErrorType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorType::ALL
            .into_iter()
            .find(|t| t.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownErrorType(s.to_string()))
    }
}

/// Severity of a recorded error. Weights grow geometrically: level `k` weighs `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Minor,
    Medium,
    Major,
    Severe,
    Critical,
}

impl Severity {
    pub const ALL: [Severity; 5] = [
        Severity::Minor,
        Severity::Medium,
        Severity::Major,
        Severity::Severe,
        Severity::Critical,
    ];

    pub fn weight(self) -> u64 {
        1 << self.index()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Severity::Minor => "minor",
            Severity::Medium => "medium",
            Severity::Major => "major",
            Severity::Severe => "severe",
            Severity::Critical => "critical",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown severity {0:?}")]
pub struct UnknownSeverity(pub String);

impl FromStr for Severity {
    type Err = UnknownSeverity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Severity::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSeverity(s.to_string()))
    }
}
