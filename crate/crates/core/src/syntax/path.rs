use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Address of an occurrence inside a formula: 1-based child indices from the
/// root. The empty path is the root itself.
///
/// Paths order lexicographically, which is pre-order on a tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid path `{text}`: {reason}")]
pub struct PathParseError {
    pub text: String,
    pub reason: &'static str,
}

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    /// Panics if any index is zero.
    pub fn new(indices: Vec<usize>) -> Path {
        assert!(indices.iter().all(|&i| i >= 1), "path indices are 1-based");
        Path(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Path {
        let mut indices = self.0.clone();
        indices.push(index);
        Path::new(indices)
    }

    pub fn parent(&self) -> Option<Path> {
        let (_, rest) = self.0.split_last()?;
        Some(Path(rest.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<&[usize]> for Path {
    fn from(indices: &[usize]) -> Path {
        Path::new(indices.to_vec())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, index) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(".")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = PathParseError;

    fn from_str(text: &str) -> Result<Path, PathParseError> {
        if text.is_empty() {
            return Ok(Path::root());
        }
        let err = |reason| PathParseError { text: text.to_string(), reason };
        text.split('.')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err("indices must be positive integers separated by `.`"));
                }
                match part.parse::<usize>() {
                    Ok(0) => Err(err("indices are 1-based")),
                    Ok(i) => Ok(i),
                    Err(_) => Err(err("index too large")),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
