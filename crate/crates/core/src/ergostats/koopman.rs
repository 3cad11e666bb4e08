//! The Koopman operator `(U_F φ)(z) = (1/d) Σ'_{w ∈ F†(z)} φ(w)` and its iterates.
//!
//! `U_Fⁿ φ(z)` is the mean of `φ` over the `dⁿ` leaves of the backward tree
//! of `z`. Levels whose tree fits under the cap are computed exactly by a
//! depth-first walk; deeper levels are estimated by uniform backward random
//! walks, which hit every leaf with probability `d⁻ⁿ`.

use serde::Serialize;

use crate::corr::PolyCorrespondence;
use crate::error::{Error, Result};
use crate::measures::{Observable, WALK_RETRIES};
use crate::numerics::{seeded_stream, SpherePoint, Stream};

pub const DEFAULT_TREE_CAP: u64 = 1_000_000;
pub const DEFAULT_WALKS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KoopmanConfig {
    /// Largest backward tree (in leaves) evaluated exactly.
    pub cap: u64,
    /// Random walks per point once the tree exceeds the cap.
    pub walks: usize,
    pub seed: u64,
    /// When false, exceeding the cap is an error instead of a switch to sampling.
    pub allow_sampling: bool,
}

impl Default for KoopmanConfig {
    fn default() -> Self {
        KoopmanConfig {
            cap: DEFAULT_TREE_CAP,
            walks: DEFAULT_WALKS,
            seed: 0,
            allow_sampling: true,
        }
    }
}

impl KoopmanConfig {
    pub fn exact(cap: u64) -> Self {
        KoopmanConfig {
            cap,
            allow_sampling: false,
            ..Default::default()
        }
    }

    /// Deepest level whose full tree fits under the cap, limited to `n_max`.
    pub fn exact_depth(&self, d: usize, n_max: usize) -> usize {
        let mut level = 0;
        let mut size = 1.0f64;
        while level < n_max && size * d as f64 <= self.cap as f64 {
            size *= d as f64;
            level += 1;
        }
        level
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum EvalMode {
    Exact,
    Sampled { walks: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KoopmanValue {
    pub value: f64,
    /// Monte Carlo standard error; zero in exact mode.
    pub stderr: f64,
    pub mode: EvalMode,
}

/// `(U_F φ)(z)`.
pub fn koopman_apply(corr: &PolyCorrespondence, phi: &dyn Observable, z: SpherePoint) -> Result<f64> {
    let pre = corr.backward_image(z)?;
    Ok(pre.iter().map(|&w| phi.eval(w)).sum::<f64>() / pre.len() as f64)
}

/// `(U_Fⁿ φ)(z)`, exact when `dⁿ ≤ cap`, otherwise sampled (if allowed).
pub fn koopman_iterate(
    corr: &PolyCorrespondence,
    phi: &dyn Observable,
    z: SpherePoint,
    n: usize,
    cfg: &KoopmanConfig,
) -> Result<KoopmanValue> {
    let series = koopman_series(corr, &[phi], z, n, cfg, 0)?;
    Ok(series[0][n])
}

/// `(U_Fʲ φᵢ)(z)` for every observable `i` and every level `j = 0..=n_max`,
/// indexed `[i][j]`. One tree walk (and one set of random walks) serves all
/// observables and levels. `stream_id` selects the random stream used for
/// sampled levels.
pub fn koopman_series(
    corr: &PolyCorrespondence,
    phis: &[&dyn Observable],
    z: SpherePoint,
    n_max: usize,
    cfg: &KoopmanConfig,
    stream_id: u64,
) -> Result<Vec<Vec<KoopmanValue>>> {
    let d = corr.topological_degree();
    let exact_depth = cfg.exact_depth(d, n_max);
    if exact_depth < n_max && !cfg.allow_sampling {
        return Err(Error::TreeTooLarge {
            size: corr.tree_size(n_max),
            cap: cfg.cap,
        });
    }

    let mut sums = vec![vec![0.0; exact_depth + 1]; phis.len()];
    corr.walk_backward_tree(z, exact_depth, &mut |level, p| {
        for (row, phi) in sums.iter_mut().zip(phis) {
            row[level] += phi.eval(p);
        }
    })?;
    let mut out: Vec<Vec<KoopmanValue>> = sums
        .into_iter()
        .map(|row| {
            let mut count = 1.0;
            row.into_iter()
                .map(|s| {
                    let v = KoopmanValue {
                        value: s / count,
                        stderr: 0.0,
                        mode: EvalMode::Exact,
                    };
                    count *= d as f64;
                    v
                })
                .collect()
        })
        .collect();

    if exact_depth < n_max {
        let walks = cfg.walks.max(2);
        let levels = n_max - exact_depth;
        // per observable, per sampled level: running sum and sum of squares
        let mut s1 = vec![vec![0.0; levels]; phis.len()];
        let mut s2 = vec![vec![0.0; levels]; phis.len()];
        let mut rng = seeded_stream(cfg.seed, stream_id);
        let mut path = Vec::with_capacity(n_max);
        for _ in 0..walks {
            recorded_walk(corr, z, n_max, &mut rng, &mut path)?;
            for (i, phi) in phis.iter().enumerate() {
                for (k, &p) in path[exact_depth..].iter().enumerate() {
                    let v = phi.eval(p);
                    s1[i][k] += v;
                    s2[i][k] += v * v;
                }
            }
        }
        let nw = walks as f64;
        for (i, row) in out.iter_mut().enumerate() {
            for k in 0..levels {
                let mean = s1[i][k] / nw;
                let var = ((s2[i][k] / nw - mean * mean) * nw / (nw - 1.0)).max(0.0);
                row.push(KoopmanValue {
                    value: mean,
                    stderr: (var / nw).sqrt(),
                    mode: EvalMode::Sampled { walks },
                });
            }
        }
    }
    Ok(out)
}

/// Fills `path` with the nodes at depths `1..=n` of one backward walk from `z`.
pub(crate) fn recorded_walk(
    corr: &PolyCorrespondence,
    z: SpherePoint,
    n: usize,
    rng: &mut Stream,
    path: &mut Vec<SpherePoint>,
) -> Result<()> {
    let mut last = None;
    'attempt: for _ in 0..WALK_RETRIES {
        path.clear();
        let mut p = z;
        for _ in 0..n {
            match corr.random_preimage(p, rng) {
                Ok(q) => {
                    p = q;
                    path.push(q);
                }
                Err(e) => {
                    last = Some(e);
                    continue 'attempt;
                }
            }
        }
        return Ok(());
    }
    Err(Error::SamplingFailed {
        retries: WALK_RETRIES,
        last: Box::new(last.expect("failure recorded")),
    })
}
