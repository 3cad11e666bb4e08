//! Cloud files: a metadata comment, a column header, then one
//! `re,im,at_infinity,weight` row per point. Floats carry 17 significant
//! digits, so a save/load round trip is lossless.
//!
//! ```text
//! # count=2 generator=sample_circle_measure samples=2 seed=0
//! re,im,at_infinity,weight
//! 1.0000000000000000e0,0.0000000000000000e0,0,5.0000000000000000e-1
//! 0.0000000000000000e0,0.0000000000000000e0,1,5.0000000000000000e-1
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::cloud::WeightedPointCloud;
use crate::error::{Error, Result};
use crate::numerics::SpherePoint;

const HEADER: &str = "re,im,at_infinity,weight";

pub fn cloud_to_text(cloud: &WeightedPointCloud) -> String {
    let mut out = String::with_capacity(80 * (cloud.len() + 2));
    writeln!(
        out,
        "# count={} generator={}",
        cloud.len(),
        cloud.generator().replace('\n', " ")
    )
    .unwrap();
    out.push_str(HEADER);
    out.push('\n');
    for (p, w) in cloud.iter() {
        match p {
            SpherePoint::Finite(z) => writeln!(out, "{:.16e},{:.16e},0,{:.16e}", z.re, z.im, w),
            SpherePoint::Infinity => writeln!(out, "{:.16e},{:.16e},1,{:.16e}", 0.0, 0.0, w),
        }
        .unwrap();
    }
    out
}

pub fn cloud_from_text(text: &str) -> Result<WeightedPointCloud> {
    let mut lines = text.lines().enumerate();
    let (_, meta) = lines.next().ok_or_else(|| Error::parse(1, "empty cloud file"))?;
    let meta = meta
        .strip_prefix("# ")
        .ok_or_else(|| Error::parse(1, "missing `# count=… generator=…` header"))?;
    let (count_part, generator) = match meta.split_once(' ') {
        Some((c, g)) => (c, g.strip_prefix("generator=").unwrap_or(g)),
        None => (meta, ""),
    };
    let count: usize = count_part
        .strip_prefix("count=")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| Error::parse(1, "header must start with count=<n>"))?;
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        _ => return Err(Error::parse(2, format!("expected column header `{HEADER}`"))),
    }
    let mut points = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for (n, line) in lines {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::parse(line_no, "expected 4 comma-separated fields"));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::parse(line_no, format!("bad number `{s}`: {e}")))
        };
        let p = match f[2] {
            "0" => SpherePoint::new(num(f[0])?, num(f[1])?),
            "1" => SpherePoint::Infinity,
            other => return Err(Error::parse(line_no, format!("at_infinity must be 0 or 1, got `{other}`"))),
        };
        points.push(p);
        weights.push(num(f[3])?);
    }
    if points.len() != count {
        return Err(Error::parse(1, format!("header says {count} points, found {}", points.len())));
    }
    Ok(WeightedPointCloud::new(points, weights)?.with_generator(generator))
}

pub fn save_cloud(cloud: &WeightedPointCloud, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, cloud_to_text(cloud))?;
    Ok(())
}

pub fn load_cloud(path: impl AsRef<Path>) -> Result<WeightedPointCloud> {
    cloud_from_text(&std::fs::read_to_string(path)?)
}
