//! Test-function and point specifiers.
//!
//! ```text
//! const:<v>
//! stereo:<a><b><c>            or  stereo:<a>,<b>,<c>
//! fourier:<k>:re|im
//! indicator:annulus:<r1>:<r2> (r2 may be inf)
//! indicator:halfplane:re|im:<c>
//! ```

use std::fmt;

use corrlab_core::measures::{Part, TestFunction};
use corrlab_core::SpherePoint;

/// A grammar violation at a byte offset of the specifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SpecError {}

/// Colon-separated fields with their byte offsets.
struct Fields<'a> {
    spec: &'a str,
    parts: Vec<(usize, &'a str)>,
    next: usize,
}

impl<'a> Fields<'a> {
    fn new(spec: &'a str) -> Self {
        let mut parts = Vec::new();
        let mut start = 0;
        for piece in spec.split(':') {
            parts.push((start, piece));
            start += piece.len() + 1;
        }
        Fields { spec, parts, next: 0 }
    }

    fn take(&mut self, what: &str) -> Result<(usize, &'a str), SpecError> {
        let field = self.parts.get(self.next).copied().ok_or_else(|| SpecError {
            position: self.spec.len(),
            message: format!("expected {what}"),
        })?;
        self.next += 1;
        Ok(field)
    }

    fn finish(&self) -> Result<(), SpecError> {
        match self.parts.get(self.next) {
            Some(&(pos, _)) => Err(SpecError {
                position: pos.saturating_sub(1),
                message: "unexpected trailing field".into(),
            }),
            None => Ok(()),
        }
    }
}

fn number(field: (usize, &str), what: &str) -> Result<f64, SpecError> {
    let (pos, s) = field;
    let v = match s {
        "inf" | "+inf" => f64::INFINITY,
        _ => s.parse::<f64>().map_err(|_| SpecError {
            position: pos,
            message: format!("expected {what}, found {s:?}"),
        })?,
    };
    if v.is_nan() {
        return Err(SpecError {
            position: pos,
            message: format!("{what} must be a number"),
        });
    }
    Ok(v)
}

fn part(field: (usize, &str)) -> Result<Part, SpecError> {
    match field.1 {
        "re" => Ok(Part::Re),
        "im" => Ok(Part::Im),
        other => Err(SpecError {
            position: field.0,
            message: format!("expected re or im, found {other:?}"),
        }),
    }
}

fn exponents(field: (usize, &str)) -> Result<[u32; 3], SpecError> {
    let (pos, s) = field;
    let bad = |offset: usize, message: String| SpecError {
        position: pos + offset,
        message,
    };
    let values: Vec<(usize, u32)> = if s.contains(',') {
        let mut out = Vec::new();
        let mut offset = 0;
        for piece in s.split(',') {
            let v = piece
                .parse::<u32>()
                .map_err(|_| bad(offset, format!("expected an exponent, found {piece:?}")))?;
            out.push((offset, v));
            offset += piece.len() + 1;
        }
        out
    } else {
        s.char_indices()
            .map(|(i, c)| {
                c.to_digit(10)
                    .map(|d| (i, d))
                    .ok_or_else(|| bad(i, format!("expected a digit, found {c:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    match values.as_slice() {
        [(_, a), (_, b), (_, c)] => Ok([*a, *b, *c]),
        _ => Err(bad(0, format!("expected three exponents, found {}", values.len()))),
    }
}

pub fn parse_function_spec(spec: &str) -> Result<TestFunction, SpecError> {
    let mut f = Fields::new(spec.trim_end());
    let (pos, kind) = f.take("a function kind")?;
    let func = match kind {
        "const" => TestFunction::Constant(number(f.take("a value")?, "a value")?),
        "stereo" => TestFunction::Stereo(exponents(f.take("three exponents")?)?),
        "fourier" => {
            let (kpos, k) = f.take("a harmonic index")?;
            let k = k.parse::<u32>().map_err(|_| SpecError {
                position: kpos,
                message: format!("expected a non-negative integer, found {k:?}"),
            })?;
            TestFunction::Harmonic {
                k,
                part: part(f.take("re or im")?)?,
            }
        }
        "indicator" => {
            let (spos, shape) = f.take("annulus or halfplane")?;
            match shape {
                "annulus" => {
                    let inner = number(f.take("an inner radius")?, "an inner radius")?;
                    let outer_field = f.take("an outer radius")?;
                    let outer = number(outer_field, "an outer radius")?;
                    if !(inner >= 0.0 && outer >= inner) {
                        return Err(SpecError {
                            position: outer_field.0,
                            message: "radii must satisfy 0 ≤ r1 ≤ r2".into(),
                        });
                    }
                    TestFunction::Annulus { inner, outer }
                }
                "halfplane" => {
                    let part = part(f.take("re or im")?)?;
                    let threshold = number(f.take("a threshold")?, "a threshold")?;
                    TestFunction::HalfPlane { part, threshold }
                }
                other => {
                    return Err(SpecError {
                        position: spos,
                        message: format!("unknown indicator shape {other:?}"),
                    })
                }
            }
        }
        other => {
            return Err(SpecError {
                position: pos,
                message: format!("unknown function kind {other:?}"),
            })
        }
    };
    f.finish()?;
    Ok(func)
}

/// `x`, `x,y` (real and imaginary parts) or `inf`.
pub fn parse_point(spec: &str) -> Result<SpherePoint, SpecError> {
    let s = spec.trim();
    if s == "inf" || s == "infinity" {
        return Ok(SpherePoint::Infinity);
    }
    let mut coords = Vec::new();
    let mut offset = 0;
    for piece in s.split(',') {
        let v = piece.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| SpecError {
            position: offset,
            message: format!("expected a finite number, found {piece:?}"),
        })?;
        coords.push(v);
        offset += piece.len() + 1;
    }
    match coords.as_slice() {
        [x] => Ok(SpherePoint::real(*x)),
        [x, y] => Ok(SpherePoint::new(*x, *y)),
        _ => Err(SpecError {
            position: 0,
            message: "expected x, x,y or inf".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_point_at_the_bad_field() {
        let e = parse_function_spec("fourier:2:rx").unwrap_err();
        assert_eq!(e.position, 10);
        let e = parse_function_spec("stereo:0,x,1").unwrap_err();
        assert_eq!(e.position, 9);
        let e = parse_function_spec("const:1:2").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_function_spec("indicator:annulus:1").unwrap_err();
        assert_eq!(e.position, 19);
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("inf").unwrap(), SpherePoint::Infinity);
        assert_eq!(parse_point("3").unwrap(), SpherePoint::real(3.0));
        assert_eq!(parse_point("1.5,-0.5").unwrap(), SpherePoint::new(1.5, -0.5));
        assert_eq!(parse_point("1,nan").unwrap_err().position, 2);
    }
}
