use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Ground truth of one trial. Detector positions are 0-based bank indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Background,
    Blacklist(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialLabel {
    pub utterance_id: String,
    pub truth: Truth,
}

/// Maximum detector score of a trial and the detector that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackScore<T> {
    pub y_star: T,
    /// 0-based position of the arg-max detector (lowest index on ties).
    pub h_star: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Blacklist membership only.
    #[serde(rename = "top_s")]
    TopS,
    /// Membership and identity; confusions count as misses.
    #[serde(rename = "top_1")]
    Top1,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::TopS => "top_s",
            Mode::Top1 => "top_1",
        })
    }
}

/// Which thresholds a sweep evaluates.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum ThresholdPolicy<T> {
    /// Every distinct observed `y*` plus the two infinite sentinels. The
    /// empirical rates only change at observed scores, so nothing is lost.
    #[default]
    Observed,
    /// A caller-supplied grid; sorted and deduplicated before use.
    Explicit(Vec<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OperatingPoint<T> {
    #[serde(with = "threshold_serde")]
    pub theta: T,
    pub p_miss: T,
    pub p_fa: T,
    pub misses: usize,
    pub false_alarms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialCounts {
    pub blacklist: usize,
    pub background: usize,
}

/// Result of one threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DetectorReport<T> {
    pub mode: Mode,
    /// Sorted by ascending threshold.
    pub operating_points: Vec<OperatingPoint<T>>,
    pub eer: T,
    #[serde(with = "threshold_serde")]
    pub eer_threshold: T,
    pub counts: TrialCounts,
}

/// Thresholds may be the infinite sentinels, which JSON numbers cannot
/// carry; they are written as the strings `"-inf"` and `"inf"`.
pub(crate) mod threshold_serde {
    use super::*;

    pub fn serialize<T: Scalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            v.serialize(s)
        } else if v.is_sign_negative() {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr<T> {
        Number(T),
        Text(String),
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        match Repr::<T>::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(T::infinity()),
            Repr::Text(t) if t == "-inf" => Ok(T::neg_infinity()),
            Repr::Text(t) => Err(de::Error::custom(format!("invalid threshold `{t}`"))),
        }
    }
}
