use rand::Rng;

use super::bivariate::BivariatePolynomial;
use crate::error::{Error, Result};
use crate::numerics::{
    chordal_distance, expand_roots, poly_roots, seeded_stream, Complex64, RootOptions, SpherePoint,
};

/// Relative tolerance for deciding that two components are proportional.
pub const PROPORTIONAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub poly: BivariatePolynomial,
    pub multiplicity: u32,
}

impl Component {
    pub fn new(poly: BivariatePolynomial, multiplicity: u32) -> Self {
        Component { poly, multiplicity }
    }
}

/// A holomorphic correspondence on the sphere given as a multiplicity-weighted
/// sum of curves `{P_j(z, w) = 0}`; `w ∈ F(z)` and `z ∈ F†(w)` on each curve.
///
/// Immutable once validated.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCorrespondence {
    label: String,
    components: Vec<Component>,
    roots: RootOptions,
}

/// Non-fatal observations made while validating a correspondence.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    /// The discriminant in `z` of this component vanished at every probe
    /// point, hinting at a repeated factor.
    RepeatedFactor { component: usize },
    /// `d ≤ d_f`: equidistribution of preimages is not expected to hold.
    DegreeNotDominant { d: usize, d_f: usize },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::RepeatedFactor { component } => write!(
                f,
                "component {component} looks non-reduced (discriminant in z vanishes along a random line)"
            ),
            Diagnostic::DegreeNotDominant { d, d_f } => write!(
                f,
                "topological degree {d} does not exceed forward degree {d_f}; preimage equidistribution may fail"
            ),
        }
    }
}

impl PolyCorrespondence {
    pub fn new(label: impl Into<String>, components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidCorrespondence("no components".into()));
        }
        for (index, c) in components.iter().enumerate() {
            if c.multiplicity == 0 {
                return Err(Error::InvalidCorrespondence(format!(
                    "component {index} has multiplicity 0"
                )));
            }
            if c.poly.grid().iter().flatten().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::InvalidCorrespondence(format!(
                    "component {index} has a non-finite coefficient"
                )));
            }
            if c.poly.deg_z() == 0 || c.poly.deg_w() == 0 {
                return Err(Error::InvalidCorrespondence(format!(
                    "component {index} must involve both z and w (deg_z = {}, deg_w = {})",
                    c.poly.deg_z(),
                    c.poly.deg_w()
                )));
            }
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if components[i].poly.is_proportional(&components[j].poly, PROPORTIONAL_TOL) {
                    return Err(Error::InvalidCorrespondence(format!(
                        "components {i} and {j} are proportional; merge them into one with summed multiplicity"
                    )));
                }
            }
        }
        let corr = PolyCorrespondence {
            label: label.into(),
            components,
            roots: RootOptions::default(),
        };
        for d in corr.diagnostics() {
            log::warn!("{}: {d}", corr.label);
        }
        Ok(corr)
    }

    /// The graph of `w = f(z)` for a polynomial `f` with ascending coefficients.
    pub fn polynomial_map(label: impl Into<String>, coeffs: &[Complex64]) -> Result<Self> {
        PolyCorrespondence::new(label, vec![Component::new(map_graph(coeffs), 1)])
    }

    /// The sum of the graphs of several polynomial maps, each with multiplicity one.
    pub fn semigroup(label: impl Into<String>, maps: &[Vec<Complex64>]) -> Result<Self> {
        let components = maps
            .iter()
            .map(|c| Component::new(map_graph(c), 1))
            .collect();
        PolyCorrespondence::new(label, components)
    }

    pub fn with_root_options(mut self, roots: RootOptions) -> Self {
        self.roots = roots;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn root_options(&self) -> &RootOptions {
        &self.roots
    }

    /// `d = Σ m_j · deg_z(P_j)`.
    pub fn topological_degree(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.multiplicity as usize * c.poly.deg_z())
            .sum()
    }

    /// `d_f = Σ m_j · deg_w(P_j)`.
    pub fn forward_degree(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.multiplicity as usize * c.poly.deg_w())
            .sum()
    }

    /// `F†(w)`: all `z` with `P_j(z, w) = 0`, with multiplicity. Always `d` points.
    pub fn backward_image(&self, w: SpherePoint) -> Result<Vec<SpherePoint>> {
        let mut out = Vec::with_capacity(self.topological_degree());
        for (index, c) in self.components.iter().enumerate() {
            let roots = poly_roots(&c.poly.slice_in_z(w), &self.roots).map_err(|e| {
                Error::Component {
                    index,
                    source: Box::new(e),
                }
            })?;
            for _ in 0..c.multiplicity {
                out.extend(expand_roots(&roots));
            }
        }
        Ok(out)
    }

    /// `F(z)`: all `w` with `P_j(z, w) = 0`, with multiplicity. Always `d_f` points.
    pub fn forward_image(&self, z: SpherePoint) -> Result<Vec<SpherePoint>> {
        let mut out = Vec::with_capacity(self.forward_degree());
        for (index, c) in self.components.iter().enumerate() {
            let roots = poly_roots(&c.poly.slice_in_w(z), &self.roots).map_err(|e| {
                Error::Component {
                    index,
                    source: Box::new(e),
                }
            })?;
            for _ in 0..c.multiplicity {
                out.extend(expand_roots(&roots));
            }
        }
        Ok(out)
    }

    /// Number of leaves `dⁿ` of the depth-`n` backward tree, as a float so
    /// that it cannot overflow.
    pub fn tree_size(&self, n: usize) -> f64 {
        (self.topological_degree() as f64).powi(n as i32)
    }

    pub(crate) fn check_tree(&self, n: usize, cap: u64) -> Result<()> {
        let size = self.tree_size(n);
        if size > cap as f64 {
            return Err(Error::TreeTooLarge { size, cap });
        }
        Ok(())
    }

    /// `(Fⁿ)†(w)` with multiplicity: `dⁿ` points, in depth-first order.
    pub fn iterate_backward(&self, w: SpherePoint, n: usize, cap: u64) -> Result<Vec<SpherePoint>> {
        self.check_tree(n, cap)?;
        let mut level = vec![w];
        for _ in 0..n {
            let mut next = Vec::with_capacity(level.len() * self.topological_degree());
            for &p in &level {
                next.extend(self.backward_image(p)?);
            }
            level = next;
        }
        Ok(level)
    }

    /// Depth-first walk over the backward tree of `w`, calling `visit(depth, node)`
    /// on every node including the root. No cap check; callers bound the depth.
    pub fn walk_backward_tree<F>(&self, w: SpherePoint, depth: usize, visit: &mut F) -> Result<()>
    where
        F: FnMut(usize, SpherePoint),
    {
        visit(0, w);
        self.walk_inner(w, 0, depth, visit)
    }

    fn walk_inner<F>(&self, node: SpherePoint, level: usize, depth: usize, visit: &mut F) -> Result<()>
    where
        F: FnMut(usize, SpherePoint),
    {
        if level == depth {
            return Ok(());
        }
        for child in self.backward_image(node)? {
            visit(level + 1, child);
            self.walk_inner(child, level + 1, depth, visit)?;
        }
        Ok(())
    }

    /// True if some point of `(Fⁿ)†(w)` satisfies `pred`; stops at the first hit.
    pub fn any_backward_leaf<P>(&self, w: SpherePoint, n: usize, pred: &P) -> Result<bool>
    where
        P: Fn(SpherePoint) -> bool + ?Sized,
    {
        if n == 0 {
            return Ok(pred(w));
        }
        for child in self.backward_image(w)? {
            if self.any_backward_leaf(child, n - 1, pred)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// One uniformly chosen point of `F†(w)`, counting multiplicity.
    pub fn random_preimage<R: Rng + ?Sized>(&self, w: SpherePoint, rng: &mut R) -> Result<SpherePoint> {
        let pre = self.backward_image(w)?;
        Ok(pre[rng.random_range(0..pre.len())])
    }

    /// Fixed points `P_j(z, z) = 0` of every component, plus 0 and ∞; used
    /// only to flag suspicious start points.
    pub fn heuristic_exceptional_points(&self) -> Vec<SpherePoint> {
        let mut out = vec![SpherePoint::ZERO, SpherePoint::Infinity];
        for c in &self.components {
            let diag = c.poly.diagonal();
            if let Ok(roots) = poly_roots(&diag, &self.roots) {
                out.extend(roots.iter().map(|r| r.point));
            }
        }
        out
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let (d, d_f) = (self.topological_degree(), self.forward_degree());
        if d <= d_f {
            out.push(Diagnostic::DegreeNotDominant { d, d_f });
        }
        let mut rng = seeded_stream(0x5eed, 0);
        let base = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let dir = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for (index, c) in self.components.iter().enumerate() {
            if c.poly.deg_z() < 2 {
                continue;
            }
            let repeated_everywhere = (1..=4).all(|k| {
                let w = SpherePoint::Finite(base + dir * (0.37 * k as f64));
                let wide = RootOptions {
                    cluster_radius: 0.0,
                    ..self.roots
                };
                match poly_roots(&c.poly.slice_in_z(w), &wide) {
                    Ok(roots) => {
                        let pts = expand_roots(&roots);
                        pts.iter().enumerate().any(|(i, &p)| {
                            pts[i + 1..].iter().any(|&q| chordal_distance(p, q) < 1e-6)
                        })
                    }
                    Err(_) => false,
                }
            });
            if repeated_everywhere {
                out.push(Diagnostic::RepeatedFactor { component: index });
            }
        }
        out
    }
}

/// `w − f(z)` for ascending coefficients of `f`.
pub(crate) fn map_graph(coeffs: &[Complex64]) -> BivariatePolynomial {
    let mut terms = vec![(0, 1, Complex64::new(1.0, 0.0))];
    terms.extend(coeffs.iter().enumerate().map(|(i, &c)| (i, 0, -c)));
    BivariatePolynomial::from_terms(&terms)
}
