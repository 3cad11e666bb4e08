//! Plain-text correspondence definitions.
//!
//! ```text
//! # comment
//! label = semigroup <z^2, z^2/2>
//! [component]
//! multiplicity = 1
//! coeff = 0 1 1.0 0.0
//! coeff = 2 0 -1.0 0.0
//! ```
//!
//! Each `coeff` row is `i j re im` for the term `(re + i·im)·zⁱwʲ`.
//! Numbers are written in shortest round-trip form, so save → load → save
//! reproduces the file byte for byte.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

use super::bivariate::BivariatePolynomial;
use super::correspondence::{Component, PolyCorrespondence};
use crate::error::{Error, Result};

pub fn to_text(corr: &PolyCorrespondence) -> String {
    let mut out = String::from("# holomorphic correspondence\n");
    writeln!(out, "label = {}", corr.label().replace('\n', " ")).unwrap();
    for c in corr.components() {
        out.push_str("[component]\n");
        writeln!(out, "multiplicity = {}", c.multiplicity).unwrap();
        for (i, row) in c.poly.grid().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.re.to_bits() == 0 && v.im.to_bits() == 0 {
                    continue;
                }
                writeln!(out, "coeff = {i} {j} {:?} {:?}", v.re, v.im).unwrap();
            }
        }
    }
    out
}

pub fn from_text(text: &str) -> Result<PolyCorrespondence> {
    struct Pending {
        multiplicity: Option<u32>,
        terms: Vec<(usize, usize, Complex64)>,
        line: usize,
    }
    let mut label = String::new();
    let mut comps: Vec<Pending> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "[component]" {
            comps.push(Pending {
                multiplicity: None,
                terms: Vec::new(),
                line: line_no,
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "label" => label = value.to_string(),
            "multiplicity" | "coeff" => {
                let comp = comps
                    .last_mut()
                    .ok_or_else(|| Error::parse(line_no, format!("`{key}` before any [component]")))?;
                if key == "multiplicity" {
                    let m = value
                        .parse::<u32>()
                        .map_err(|e| Error::parse(line_no, format!("bad multiplicity: {e}")))?;
                    comp.multiplicity = Some(m);
                } else {
                    let fields: Vec<&str> = value.split_whitespace().collect();
                    if fields.len() != 4 {
                        return Err(Error::parse(line_no, "coeff needs `i j re im`"));
                    }
                    let idx = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|e| Error::parse(line_no, format!("bad exponent `{s}`: {e}")))
                    };
                    let num = |s: &str| {
                        s.parse::<f64>()
                            .map_err(|e| Error::parse(line_no, format!("bad number `{s}`: {e}")))
                    };
                    comp.terms.push((
                        idx(fields[0])?,
                        idx(fields[1])?,
                        Complex64::new(num(fields[2])?, num(fields[3])?),
                    ));
                }
            }
            other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
        }
    }

    let components = comps
        .into_iter()
        .map(|p| {
            let m = p
                .multiplicity
                .ok_or_else(|| Error::parse(p.line, "component without multiplicity"))?;
            Ok(Component::new(BivariatePolynomial::from_terms(&p.terms), m))
        })
        .collect::<Result<Vec<_>>>()?;
    PolyCorrespondence::new(label, components)
}

pub fn save(corr: &PolyCorrespondence, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_text(corr))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<PolyCorrespondence> {
    from_text(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::catalog;

    #[test]
    fn round_trip_is_byte_exact() {
        let corr = catalog::semigroup_square_half_square();
        let text = to_text(&corr);
        let back = from_text(&text).unwrap();
        assert_eq!(back, corr);
        assert_eq!(to_text(&back), text);
    }

    #[test]
    fn awkward_floats_survive() {
        let p = BivariatePolynomial::from_terms(&[
            (0, 1, Complex64::new(0.1 + 0.2, -1e-300)),
            (3, 0, Complex64::new(-std::f64::consts::PI, 5e-324)),
        ]);
        let corr = PolyCorrespondence::new("odd", vec![Component::new(p, 2)]).unwrap();
        assert_eq!(from_text(&to_text(&corr)).unwrap(), corr);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = from_text("label = x\n[component]\nmultiplicity = 1\ncoeff = 0 1 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = from_text("multiplicity = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
