//! Component selectors and the `space-set-methodology` tag grammar,
//! e.g. `FP-KNN-SS` or `sp-rknn-ds`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Where distances are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceKind {
    FullSpace,
    PcaSubspace,
}

/// How each point's K-neighborhood is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Methodology {
    /// The k closest points by one distance sort.
    StaticSorting,
    /// Grow a set from the query, each round adding the point closest to
    /// any already-selected member.
    DynamicSelection,
}

/// Context set used for density estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetKind {
    Knn,
    Rknn,
    Hybrid,
    /// Natural neighbors: KNN ∩ RKNN.
    Nan,
    /// KNN \ NaN.
    NonNan,
}

impl SpaceKind {
    pub const ALL: [Self; 2] = [Self::FullSpace, Self::PcaSubspace];

    pub fn token(self) -> &'static str {
        match self {
            Self::FullSpace => "FP",
            Self::PcaSubspace => "SP",
        }
    }
}

impl Methodology {
    pub const ALL: [Self; 2] = [Self::StaticSorting, Self::DynamicSelection];

    pub fn token(self) -> &'static str {
        match self {
            Self::StaticSorting => "SS",
            Self::DynamicSelection => "DS",
        }
    }
}

impl SetKind {
    pub const ALL: [Self; 5] = [Self::Knn, Self::Rknn, Self::Hybrid, Self::Nan, Self::NonNan];

    pub fn token(self) -> &'static str {
        match self {
            Self::Knn => "KNN",
            Self::Rknn => "RKNN",
            Self::Hybrid => "Hy",
            Self::Nan => "NaN",
            Self::NonNan => "Non",
        }
    }
}

macro_rules! token_from_str {
    ($ty:ty) => {
        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL
                    .into_iter()
                    .find(|v| v.token().eq_ignore_ascii_case(s))
                    .ok_or_else(|| Error::MethodTag {
                        tag: s.to_string(),
                        token: s.to_string(),
                    })
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }
    };
}

token_from_str!(SpaceKind);
token_from_str!(Methodology);
token_from_str!(SetKind);

/// One cell of the method grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodTag {
    pub space: SpaceKind,
    pub set_kind: SetKind,
    pub methodology: Methodology,
}

impl MethodTag {
    pub fn new(space: SpaceKind, set_kind: SetKind, methodology: Methodology) -> Self {
        Self {
            space,
            set_kind,
            methodology,
        }
    }

    /// The 20 tags in table order: FP-SS, FP-DS, SP-SS, SP-DS blocks, each
    /// listing KNN, RKNN, Hy, NaN, Non.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(20);
        for space in SpaceKind::ALL {
            for methodology in Methodology::ALL {
                for set_kind in SetKind::ALL {
                    out.push(Self::new(space, set_kind, methodology));
                }
            }
        }
        out
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.space, self.set_kind, self.methodology)
    }
}

impl FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split('-').collect();
        let err = |token: &str| Error::MethodTag {
            tag: s.to_string(),
            token: token.to_string(),
        };
        let [space, set_kind, methodology] = parts[..] else {
            return Err(err(s));
        };
        Ok(Self {
            space: space.parse().map_err(|_| err(space))?,
            set_kind: set_kind.parse().map_err(|_| err(set_kind))?,
            methodology: methodology.parse().map_err(|_| err(methodology))?,
        })
    }
}

impl Serialize for MethodTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MethodTag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
