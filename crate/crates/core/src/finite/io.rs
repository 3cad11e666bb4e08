//! TOML form of a finite instance:
//!
//! ```toml
//! m = 2
//! d = 1
//! matrix = [[0, 1], [1, 0]]
//! mu = ["0.5", "0.5"]
//! ```
//!
//! Measure entries are decimal strings so that they round-trip exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{FiniteCorrespondence, FiniteMeasure};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Instance {
    m: usize,
    d: u32,
    matrix: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<String>>,
}

pub fn instance_to_toml(fc: &FiniteCorrespondence, mu: Option<&FiniteMeasure>) -> String {
    let inst = Instance {
        m: fc.m(),
        d: fc.degree(),
        matrix: fc.matrix().to_vec(),
        mu: mu.map(|mu| mu.values().iter().map(|x| format!("{x:?}")).collect()),
    };
    toml::to_string(&inst).expect("instance serializes")
}

pub fn instance_from_toml(text: &str) -> Result<(FiniteCorrespondence, Option<FiniteMeasure>)> {
    let inst: Instance = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1));
        Error::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    let fc = FiniteCorrespondence::new(inst.matrix)?;
    if fc.m() != inst.m {
        return Err(Error::DimensionMismatch { expected: inst.m, got: fc.m() });
    }
    if fc.degree() != inst.d {
        return Err(Error::InvalidCorrespondence(format!(
            "declared degree {} but columns sum to {}",
            inst.d,
            fc.degree()
        )));
    }
    let mu = inst
        .mu
        .map(|entries| {
            let values = entries
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidMeasure(format!("cannot parse {s:?} as a number")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != fc.m() {
                return Err(Error::DimensionMismatch { expected: fc.m(), got: values.len() });
            }
            FiniteMeasure::new(values)
        })
        .transpose()?;
    Ok((fc, mu))
}

pub fn save_instance(path: &Path, fc: &FiniteCorrespondence, mu: Option<&FiniteMeasure>) -> Result<()> {
    std::fs::write(path, instance_to_toml(fc, mu))?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<(FiniteCorrespondence, Option<FiniteMeasure>)> {
    instance_from_toml(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let fc = FiniteCorrespondence::new(vec![vec![2, 1], vec![0, 1]]).unwrap();
        let mu = FiniteMeasure::new(vec![0.1 + 0.2, 1.0 - (0.1 + 0.2)]).unwrap();
        let text = instance_to_toml(&fc, Some(&mu));
        let (fc2, mu2) = instance_from_toml(&text).unwrap();
        assert_eq!(fc, fc2);
        assert_eq!(Some(mu), mu2);
        assert_eq!(instance_to_toml(&fc2, mu2.as_ref()), text);
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(instance_from_toml("m = 2\nd = 3\nmatrix = [[0, 1], [1, 0]]\n").is_err());
        assert!(matches!(instance_from_toml("m = [\n"), Err(Error::Parse { .. })));
    }
}
