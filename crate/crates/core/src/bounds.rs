//! Inequalities between torsional rigidity, the bottom of the spectrum and
//! the geometry of a graph, evaluated as structured checks.
//!
//! Quantities that depend on the Dirichlet set as a whole (`η`, distances to
//! `V₀`, the symmetrized paths) are computed on the graph with all Dirichlet
//! vertices merged into one. This leaves `T_p` and `λ₀,p` unchanged. Graph
//! class and mass hypotheses (trees, paths, `m = deg`, `b = b_st`) are
//! checked on the input graph.

use crate::closed_form::{path_rigidity, PathSpecParams};
use crate::error::Error;
use crate::geometry::{min_cut_weight, q_inradius, q_mean_distance};
use crate::graph::{EdgeRecord, ProblemSpec, VertexRecord, WeightedGraph};
use crate::scalar::{cast, from_usize, max_of, min_of, Real};
use crate::spectral::{lambda0, lambda1_p2, Evidence, SpectralOptions, SpectralSolution};
use crate::surgery::{invert_edge_weights, merge_dirichlet};
use crate::torsion::{solve_torsion, SolverOptions, TorsionSolution};

/// Relative tolerance in `slack ≥ −tol·(1+|rhs|)`.
pub const SLACK_TOL: f64 = 1e-9;
/// A strict inequality counts as strict when `slack > STRICT_TOL·(1+|rhs|)`.
pub const STRICT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundId {
    SaintVenantGeneral,
    SaintVenantP2Unit,
    SymmetrizationUpper,
    SymmetrizationUpperExplicitMass,
    PolyaSzegoProduct,
    TrivialLower,
    PathInradiusLower,
    TreeInradiusLower,
    RayleighSymmetrizationLower,
    RayleighSymmetrizationExplicitMass,
    MeanDistanceSpectral,
    InradiusSpectral,
    MeanDistanceRigidity,
    InradiusRigidity,
    LandscapeLower,
    FiedlerDirichlet,
    FiedlerDirichletCosine,
    FiedlerNeumannP2,
    KohlerJobinModified,
    KohlerJobinClassical,
    KohlerJobinUnitMass,
    NormalizedSaintVenant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `lhs ≤ rhs`.
    Upper,
    /// `lhs ≥ rhs`.
    Lower,
}

impl BoundId {
    pub const ALL: [BoundId; 22] = [
        BoundId::SaintVenantGeneral,
        BoundId::SaintVenantP2Unit,
        BoundId::SymmetrizationUpper,
        BoundId::SymmetrizationUpperExplicitMass,
        BoundId::PolyaSzegoProduct,
        BoundId::TrivialLower,
        BoundId::PathInradiusLower,
        BoundId::TreeInradiusLower,
        BoundId::RayleighSymmetrizationLower,
        BoundId::RayleighSymmetrizationExplicitMass,
        BoundId::MeanDistanceSpectral,
        BoundId::InradiusSpectral,
        BoundId::MeanDistanceRigidity,
        BoundId::InradiusRigidity,
        BoundId::LandscapeLower,
        BoundId::FiedlerDirichlet,
        BoundId::FiedlerDirichletCosine,
        BoundId::FiedlerNeumannP2,
        BoundId::KohlerJobinModified,
        BoundId::KohlerJobinClassical,
        BoundId::KohlerJobinUnitMass,
        BoundId::NormalizedSaintVenant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::SaintVenantGeneral => "saint_venant_general",
            BoundId::SaintVenantP2Unit => "saint_venant_p2_unit",
            BoundId::SymmetrizationUpper => "symmetrization_upper",
            BoundId::SymmetrizationUpperExplicitMass => "symmetrization_upper_explicit_mass",
            BoundId::PolyaSzegoProduct => "polya_szego_product",
            BoundId::TrivialLower => "trivial_lower",
            BoundId::PathInradiusLower => "path_inradius_lower",
            BoundId::TreeInradiusLower => "tree_inradius_lower",
            BoundId::RayleighSymmetrizationLower => "rayleigh_symmetrization_lower",
            BoundId::RayleighSymmetrizationExplicitMass => "rayleigh_symmetrization_explicit_mass",
            BoundId::MeanDistanceSpectral => "mean_distance_spectral",
            BoundId::InradiusSpectral => "inradius_spectral",
            BoundId::MeanDistanceRigidity => "mean_distance_rigidity",
            BoundId::InradiusRigidity => "inradius_rigidity",
            BoundId::LandscapeLower => "landscape_lower",
            BoundId::FiedlerDirichlet => "fiedler_dirichlet",
            BoundId::FiedlerDirichletCosine => "fiedler_dirichlet_cosine",
            BoundId::FiedlerNeumannP2 => "fiedler_neumann_p2",
            BoundId::KohlerJobinModified => "kohler_jobin_modified",
            BoundId::KohlerJobinClassical => "kohler_jobin_classical",
            BoundId::KohlerJobinUnitMass => "kohler_jobin_unit_mass",
            BoundId::NormalizedSaintVenant => "normalized_saint_venant",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.name() == name)
    }

    pub fn kind(self) -> BoundKind {
        use BoundId::*;
        match self {
            SaintVenantGeneral | SaintVenantP2Unit | SymmetrizationUpper | SymmetrizationUpperExplicitMass
            | PolyaSzegoProduct | MeanDistanceRigidity | InradiusRigidity | NormalizedSaintVenant => BoundKind::Upper,
            _ => BoundKind::Lower,
        }
    }

    /// The inequality in symbols.
    pub fn statement(self) -> &'static str {
        match self {
            BoundId::SaintVenantGeneral => "T_p <= n^(p-1) m(V\\V0)^p / eta",
            BoundId::SaintVenantP2Unit => "T_2 <= n(n+1)(2n+1) / (6 eta)",
            BoundId::SymmetrizationUpper => "T_p <= T_p(P_eta), P_eta the tau-ordered path with edge weight eta",
            BoundId::SymmetrizationUpperExplicitMass => "T_p <= T_p(P~) / eta, excess mass at argmax tau",
            BoundId::PolyaSzegoProduct => "lambda0 T_p <= m(V\\V0)^(p-1)",
            BoundId::TrivialLower => "T_p >= m(V\\V0)^p / (b(V\\V0, V0) + c(V\\V0))",
            BoundId::PathInradiusLower => "T_p >= m(V\\V0)^p / Inr_p",
            BoundId::TreeInradiusLower => "T_p >= min m^p / Inr_p",
            BoundId::RayleighSymmetrizationLower => {
                "lambda0 >= lambda0(P_eta), P_eta the ground-state-ordered path with edge weight eta"
            }
            BoundId::RayleighSymmetrizationExplicitMass => "lambda0 >= eta lambda0(P~), excess mass at argmax phi",
            BoundId::MeanDistanceSpectral => "lambda0 >= 1 / (m(V\\V0) Mean_p(G^-1))",
            BoundId::InradiusSpectral => "lambda0 >= 1 / (m(V\\V0) Inr_p(G^-1))",
            BoundId::MeanDistanceRigidity => "T_p < m(V\\V0)^p Mean_p(G^-1)",
            BoundId::InradiusRigidity => "T_p < m(V\\V0)^p Inr_p(G^-1)",
            BoundId::LandscapeLower => "lambda0 >= |tau|_inf^-(p-1)",
            BoundId::FiedlerDirichlet => "lambda0 >= eta (sum_k (n-k)^(1/(p-1)))^-(p-1)",
            BoundId::FiedlerDirichletCosine => "lambda0 >= 2 eta (1 - cos(pi / (2n+1)))",
            BoundId::FiedlerNeumannP2 => "lambda1 >= eta / sum_k (n-k)",
            BoundId::KohlerJobinModified => "(T_2 + E/3)^(2/3) arccos(1-lambda0)^2 >= (pi / 6^(1/3))^2",
            BoundId::KohlerJobinClassical => "T_2^(2/3) lambda0 >= 1",
            BoundId::KohlerJobinUnitMass => "T_2^(2/3) lambda0 >= min deg / max deg^(4/3)",
            BoundId::NormalizedSaintVenant => "T_2 <= max deg^2 T_2(P') / eta, P' the unit-mass path",
        }
    }

    /// Whether the check bounds `λ₀` from below.
    pub fn is_spectral_lower(self) -> bool {
        use BoundId::*;
        matches!(
            self,
            RayleighSymmetrizationLower
                | RayleighSymmetrizationExplicitMass
                | MeanDistanceSpectral
                | InradiusSpectral
                | LandscapeLower
                | FiedlerDirichlet
                | FiedlerDirichletCosine
                | KohlerJobinModified
                | KohlerJobinClassical
                | KohlerJobinUnitMass
        )
    }

    fn uses_lambda0(self) -> bool {
        self.is_spectral_lower() || self == BoundId::PolyaSzegoProduct
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Applicability {
    Applicable,
    /// A hypothesis does not hold.
    Inapplicable(String),
    /// Hypotheses hold but a required computation failed.
    Inconclusive(String),
}

impl Applicability {
    pub fn name(&self) -> &'static str {
        match self {
            Applicability::Applicable => "applicable",
            Applicability::Inapplicable(_) => "inapplicable",
            Applicability::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Applicability::Applicable => None,
            Applicability::Inapplicable(r) | Applicability::Inconclusive(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck<S> {
    pub id: BoundId,
    pub applicability: Applicability,
    pub lhs: Option<S>,
    pub rhs: Option<S>,
    /// `rhs − lhs` for upper bounds, `lhs − rhs` for lower bounds.
    pub slack: Option<S>,
    pub satisfied: Option<bool>,
    /// Set when the inequality is claimed strict on this instance.
    pub strict: Option<bool>,
    /// Trust level of the `λ₀` entering the check.
    pub evidence: Option<Evidence>,
}

impl<S: Real> BoundCheck<S> {
    fn skipped(id: BoundId, applicability: Applicability) -> Self {
        Self {
            id,
            applicability,
            lhs: None,
            rhs: None,
            slack: None,
            satisfied: None,
            strict: None,
            evidence: None,
        }
    }

    fn evaluated(id: BoundId, lhs: S, rhs: S, strict_claimed: bool, evidence: Option<Evidence>) -> Self {
        let slack = match id.kind() {
            BoundKind::Upper => rhs - lhs,
            BoundKind::Lower => lhs - rhs,
        };
        let scale = S::one() + rhs.abs();
        Self {
            id,
            applicability: Applicability::Applicable,
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(slack),
            satisfied: Some(slack >= -cast::<S>(SLACK_TOL) * scale),
            strict: strict_claimed.then(|| slack > cast::<S>(STRICT_TOL) * scale),
            evidence,
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.applicability == Applicability::Applicable
    }

    pub fn is_violation(&self) -> bool {
        self.satisfied == Some(false)
    }

    /// `proven`, `consistent`, `violated`, `inapplicable` or `inconclusive`.
    ///
    /// A lower bound on `λ₀` evaluated with a variational upper bound for
    /// `λ₀` can only be reported as consistent.
    pub fn verdict(&self) -> &'static str {
        match (&self.applicability, self.satisfied) {
            (Applicability::Applicable, Some(false)) => "violated",
            (Applicability::Applicable, _) => {
                if self.id.is_spectral_lower() && self.evidence == Some(Evidence::VariationalUpperBound) {
                    "consistent"
                } else {
                    "proven"
                }
            }
            (a, _) => a.name(),
        }
    }
}

/// Shared inputs of all checks on one spec.
pub struct BoundContext<S> {
    spec: ProblemSpec<S>,
    reduced: ProblemSpec<S>,
    torsion: Result<TorsionSolution<S>, Error>,
    spectrum: Result<SpectralSolution<S>, Error>,
    eta: Option<S>,
}

type Outcome<S> = Result<(S, S), Applicability>;

fn require(cond: bool, reason: &str) -> Result<(), Applicability> {
    if cond {
        Ok(())
    } else {
        Err(Applicability::Inapplicable(reason.to_string()))
    }
}

fn inconclusive(e: &Error) -> Applicability {
    Applicability::Inconclusive(e.to_string())
}

fn all_one<S: Real>(xs: impl IntoIterator<Item = S>) -> bool {
    xs.into_iter().all(|x| x == S::one())
}

/// Path `s0 – s1 – … ` with constant edge weight; `s0` is Dirichlet when `dirichlet`.
fn ordered_path<S: Real>(masses: &[S], potentials: &[S], dirichlet: bool, weight: S, p: S) -> ProblemSpec<S> {
    let offset = usize::from(dirichlet);
    let mut vertices = Vec::with_capacity(masses.len() + offset);
    if dirichlet {
        vertices.push(VertexRecord::new("s0", S::one(), S::zero()));
    }
    for (k, (m, c)) in masses.iter().zip(potentials).enumerate() {
        vertices.push(VertexRecord::new(format!("s{}", k + offset), *m, *c));
    }
    let edges: Vec<EdgeRecord<S>> = (1..vertices.len())
        .map(|k| EdgeRecord::new(format!("s{}", k - 1), format!("s{k}"), weight))
        .collect();
    let g = WeightedGraph::build(&vertices, &edges).expect("path records are consistent");
    let dir: Vec<&str> = if dirichlet { vec!["s0"] } else { vec![] };
    ProblemSpec::new(g, dir, p).expect("exponent already validated")
}

/// Free vertices sorted by ascending `values`, ties by index.
fn ascending_order<S: Real>(free: &[usize], values: &[S]) -> Vec<usize> {
    let mut order = free.to_vec();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

fn path_rigidity_of<S: Real>(
    masses: &[S],
    potentials: &[S],
    dirichlet: bool,
    weight: S,
    p: S,
) -> Result<S, Applicability> {
    if dirichlet && potentials.iter().all(|c| c.is_zero()) {
        return path_rigidity(&PathSpecParams {
            masses: masses.to_vec(),
            weights: vec![weight; masses.len()],
            p,
        })
        .map_err(|e| inconclusive(&e));
    }
    let path = ordered_path(masses, potentials, dirichlet, weight, p);
    solve_torsion(&path, &SolverOptions::default())
        .map(|s| s.rigidity)
        .map_err(|e| inconclusive(&e))
}

impl<S: Real> BoundContext<S> {
    /// Solves for `τ` and `λ₀` once. Solver failures are kept and surface
    /// as inconclusive checks.
    pub fn new(spec: &ProblemSpec<S>) -> Self {
        let reduced = if spec.dirichlet_indices().len() > 1 {
            merge_dirichlet(spec).expect("Dirichlet set is nonempty")
        } else {
            spec.clone()
        };
        let torsion = solve_torsion(&reduced, &SolverOptions::default());
        let spectrum = lambda0(&reduced, &SpectralOptions::default());
        let eta = min_cut_weight(reduced.graph()).ok();
        Self {
            spec: spec.clone(),
            reduced,
            torsion,
            spectrum,
            eta,
        }
    }

    pub fn spec(&self) -> &ProblemSpec<S> {
        &self.spec
    }

    pub fn torsion(&self) -> Result<&TorsionSolution<S>, &Error> {
        self.torsion.as_ref()
    }

    pub fn spectrum(&self) -> Result<&SpectralSolution<S>, &Error> {
        self.spectrum.as_ref()
    }

    /// Minimal cut weight of the graph with `V₀` merged.
    pub fn eta(&self) -> Option<S> {
        self.eta
    }

    fn p(&self) -> S {
        *self.spec.p()
    }

    fn is_p2(&self) -> bool {
        self.p() == S::one() + S::one()
    }

    fn rigidity(&self) -> Result<S, Applicability> {
        self.torsion.as_ref().map(|t| t.rigidity).map_err(inconclusive)
    }

    fn tau(&self) -> Result<&[S], Applicability> {
        self.torsion.as_ref().map(|t| t.tau.values()).map_err(inconclusive)
    }

    fn lambda(&self) -> Result<S, Applicability> {
        self.spectrum.as_ref().map(|s| s.lambda0).map_err(inconclusive)
    }

    fn positive_eta(&self) -> Result<S, Applicability> {
        match self.eta {
            Some(e) if e > S::zero() => Ok(e),
            _ => Err(Applicability::Inapplicable("minimal cut weight is zero or undefined".into())),
        }
    }

    fn connected_dirichlet(&self) -> Result<(), Applicability> {
        require(self.spec.has_dirichlet(), "the Dirichlet set is empty")?;
        require(self.spec.graph().is_connected(), "graph is disconnected")
    }

    fn free_masses(&self) -> Vec<S> {
        let g = self.reduced.graph();
        self.reduced.free_indices().into_iter().map(|v| *g.measure(v)).collect()
    }

    fn unit_free_mass(&self) -> bool {
        all_one(self.free_masses())
    }

    /// `m(v) = deg_G(v)` on every free vertex of the input graph.
    fn degree_free_mass(&self) -> bool {
        let g = self.spec.graph();
        self.spec.free_indices().into_iter().all(|v| *g.measure(v) == g.degree_at(v))
    }

    fn free_degrees(&self) -> Vec<S> {
        let g = self.spec.graph();
        self.spec.free_indices().into_iter().map(|v| g.edge_degree_at(v)).collect()
    }

    /// `p = 2`, `b = b_st`, `c ≡ 0`, connected, `V₀ ≠ ∅`.
    fn kohler_jobin_gate(&self) -> Result<(), Applicability> {
        require(self.is_p2(), "requires p = 2")?;
        self.connected_dirichlet()?;
        require(self.spec.graph().has_standard_weights(), "requires standard edge weights")?;
        require(self.spec.graph().has_zero_potential(), "requires c = 0")
    }

    fn inverted_distance(&self, mean: bool) -> Result<S, Applicability> {
        let inv = self
            .reduced
            .with_graph(invert_edge_weights(self.reduced.graph()))
            .expect("inversion keeps the vertex ids");
        let r = if mean {
            q_mean_distance(&inv, self.p())
        } else {
            q_inradius(&inv, self.p())
        };
        r.map_err(|e| inconclusive(&e))
    }

    /// `min m` on every free vertex, plus all excess mass on the first
    /// maximiser of `f`, which is placed last.
    fn concentrated_masses(&self, f: &[S]) -> Vec<S> {
        let g = self.reduced.graph();
        let free = self.reduced.free_indices();
        let top = free.iter().fold(S::zero(), |a, &w| max_of(a, f[w]));
        let vmax = *free.iter().find(|&&v| f[v] == top).expect("free set is nonempty");
        let mmin = free.iter().fold(*g.measure(free[0]), |a, &v| min_of(a, *g.measure(v)));
        let excess = free
            .iter()
            .filter(|&&w| w != vmax)
            .fold(S::zero(), |a, &w| a + *g.measure(w) - mmin);
        let mut masses = vec![mmin; free.len()];
        masses[free.len() - 1] = *g.measure(vmax) + excess;
        masses
    }

    fn compute(&self, id: BoundId) -> Outcome<S> {
        let p = self.p();
        let one = S::one();
        let r = &self.reduced;
        let g = r.graph();
        let free = r.free_indices();
        let n = free.len();
        let mass = r.free_mass();
        match id {
            BoundId::SaintVenantGeneral => {
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let rhs = from_usize::<S>(n).powf(p - one) / eta * mass.powf(p);
                Ok((self.rigidity()?, rhs))
            }
            BoundId::SaintVenantP2Unit => {
                require(self.is_p2(), "requires p = 2")?;
                require(self.unit_free_mass(), "requires m = 1")?;
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let nn = from_usize::<S>(n);
                let rhs = nn * (nn + one) * (nn + nn + one) / (cast::<S>(6.0) * eta);
                Ok((self.rigidity()?, rhs))
            }
            BoundId::SymmetrizationUpper => {
                require(g.is_connected(), "graph is disconnected")?;
                let eta = self.positive_eta()?;
                let order = ascending_order(&free, self.tau()?);
                let masses: Vec<S> = order.iter().map(|&v| *g.measure(v)).collect();
                let pots: Vec<S> = order.iter().map(|&v| *g.potential(v)).collect();
                // With c = 0 this is T_p(P) / eta for the unit-weight path.
                let tp = path_rigidity_of(&masses, &pots, r.has_dirichlet(), eta, p)?;
                Ok((self.rigidity()?, tp))
            }
            BoundId::SymmetrizationUpperExplicitMass => {
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let tau = self.tau()?;
                let masses = self.concentrated_masses(tau);
                let tp = path_rigidity_of(&masses, &vec![S::zero(); n], true, one, p)?;
                Ok((self.rigidity()?, tp / eta))
            }
            BoundId::PolyaSzegoProduct => {
                let rhs = mass.powf(p - one);
                Ok((self.lambda()? * self.rigidity()?, rhs))
            }
            BoundId::TrivialLower => {
                let boundary = free.iter().fold(S::zero(), |a, &v| {
                    let to_dirichlet = g
                        .neighbors(v)
                        .iter()
                        .filter(|(w, _)| r.is_dirichlet(*w))
                        .fold(S::zero(), |s, (_, b)| s + *b);
                    a + to_dirichlet + *g.potential(v)
                });
                require(boundary > S::zero(), "denominator is zero")?;
                Ok((self.rigidity()?, mass.powf(p) / boundary))
            }
            BoundId::PathInradiusLower => {
                let og = self.spec.graph();
                let order = og.path_order();
                require(order.is_some(), "graph is not a path")?;
                let order = order.expect("checked");
                let dir = self.spec.dirichlet_indices();
                let endpoint = dir.len() == 1 && (dir[0] == order[0] || dir[0] == order[order.len() - 1]);
                require(endpoint && order.len() > 1, "requires V0 to be one endpoint")?;
                require(og.has_zero_potential(), "requires c = 0")?;
                let inr = q_inradius(&self.spec, p).map_err(|e| inconclusive(&e))?;
                Ok((self.rigidity()?, mass.powf(p) / inr))
            }
            BoundId::TreeInradiusLower => {
                let og = self.spec.graph();
                require(og.is_tree(), "graph is not a tree")?;
                require(self.spec.has_dirichlet(), "the Dirichlet set is empty")?;
                require(og.has_zero_potential(), "requires c = 0")?;
                let inr = q_inradius(&self.spec, p).map_err(|e| inconclusive(&e))?;
                let mmin = free.iter().fold(*g.measure(free[0]), |a, &v| min_of(a, *g.measure(v)));
                Ok((self.rigidity()?, mmin.powf(p) / inr))
            }
            BoundId::RayleighSymmetrizationLower => {
                require(g.is_connected(), "graph is disconnected")?;
                let eta = self.positive_eta()?;
                let lambda = self.lambda()?;
                let phi = self.spectrum.as_ref().map_err(inconclusive)?.ground_state.values();
                let order = ascending_order(&free, phi);
                let masses: Vec<S> = order.iter().map(|&v| *g.measure(v)).collect();
                let pots: Vec<S> = order.iter().map(|&v| *g.potential(v)).collect();
                let path = ordered_path(&masses, &pots, r.has_dirichlet(), eta, p);
                let lp = lambda0(&path, &SpectralOptions::default()).map_err(|e| inconclusive(&e))?;
                Ok((lambda, lp.lambda0))
            }
            BoundId::RayleighSymmetrizationExplicitMass => {
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let lambda = self.lambda()?;
                let phi = self.spectrum.as_ref().map_err(inconclusive)?.ground_state.values();
                let masses = self.concentrated_masses(phi);
                let path = ordered_path(&masses, &vec![S::zero(); n], true, one, p);
                let lp = lambda0(&path, &SpectralOptions::default()).map_err(|e| inconclusive(&e))?;
                Ok((lambda, eta * lp.lambda0))
            }
            BoundId::MeanDistanceSpectral | BoundId::InradiusSpectral => {
                self.connected_dirichlet()?;
                let d = self.inverted_distance(id == BoundId::MeanDistanceSpectral)?;
                Ok((self.lambda()?, one / (mass * d)))
            }
            BoundId::MeanDistanceRigidity | BoundId::InradiusRigidity => {
                self.connected_dirichlet()?;
                let d = self.inverted_distance(id == BoundId::MeanDistanceRigidity)?;
                Ok((self.rigidity()?, mass.powf(p) * d))
            }
            BoundId::LandscapeLower => {
                let tau = self.tau()?;
                let sup = free.iter().fold(S::zero(), |a, &v| max_of(a, tau[v].abs()));
                Ok((self.lambda()?, sup.powf(one - p)))
            }
            BoundId::FiedlerDirichlet => {
                require(self.unit_free_mass(), "requires m = 1")?;
                require(self.spec.graph().has_zero_potential(), "requires c = 0")?;
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let e = one / (p - one);
                let sum = (1..=n).fold(S::zero(), |a, j| a + from_usize::<S>(j).powf(e));
                Ok((self.lambda()?, eta * sum.powf(one - p)))
            }
            BoundId::FiedlerDirichletCosine => {
                require(self.is_p2(), "requires p = 2")?;
                require(self.unit_free_mass(), "requires m = 1")?;
                require(self.spec.graph().has_standard_weights(), "requires standard edge weights")?;
                require(self.spec.graph().has_zero_potential(), "requires c = 0")?;
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let nn = from_usize::<S>(n);
                let rhs = (eta + eta) * (one - (S::PI() / (nn + nn + one)).cos());
                Ok((self.lambda()?, rhs))
            }
            BoundId::FiedlerNeumannP2 => {
                let og = self.spec.graph();
                require(self.is_p2(), "implemented for p = 2 only")?;
                require(og.is_connected(), "graph is disconnected")?;
                require(all_one(og.measures().iter().copied()), "requires m = 1")?;
                require(og.has_zero_potential(), "requires c = 0")?;
                // An even vertex count is padded to the next odd one, so
                // |V| = 2n - 1 and |V| = 2n - 2 share the same n.
                let half = og.len() / 2 + 1;
                require(half >= 2, "needs at least two vertices")?;
                let eta = min_cut_weight(og).map_err(|e| inconclusive(&e))?;
                let sum = from_usize::<S>(half * (half - 1) / 2);
                let l1 = lambda1_p2(og).map_err(|e| inconclusive(&e))?;
                Ok((l1, eta / sum))
            }
            BoundId::KohlerJobinModified => {
                self.kohler_jobin_gate()?;
                require(self.degree_free_mass(), "requires m = deg")?;
                let lambda = self.lambda()?;
                let t = self.rigidity()?;
                let e = from_usize::<S>(self.spec.graph().edge_count());
                let three = cast::<S>(3.0);
                let arg = max_of(min_of(one - lambda, one), -one);
                let lhs = (t + e / three).powf(cast(2.0 / 3.0)) * arg.acos().powi(2);
                let rhs = (S::PI() / cast::<S>(6.0).cbrt()).powi(2);
                Ok((lhs, rhs))
            }
            BoundId::KohlerJobinClassical => {
                self.kohler_jobin_gate()?;
                require(self.degree_free_mass(), "requires m = deg")?;
                let lhs = self.rigidity()?.powf(cast(2.0 / 3.0)) * self.lambda()?;
                Ok((lhs, one))
            }
            BoundId::KohlerJobinUnitMass => {
                self.kohler_jobin_gate()?;
                require(self.unit_free_mass(), "requires m = 1")?;
                let degs = self.free_degrees();
                let dmin = degs.iter().fold(degs[0], |a, &d| min_of(a, d));
                let dmax = degs.iter().fold(degs[0], |a, &d| max_of(a, d));
                let lhs = self.rigidity()?.powf(cast(2.0 / 3.0)) * self.lambda()?;
                Ok((lhs, dmin / dmax.powf(cast(4.0 / 3.0))))
            }
            BoundId::NormalizedSaintVenant => {
                require(self.is_p2(), "requires p = 2")?;
                require(self.degree_free_mass(), "requires m = deg")?;
                require(self.spec.graph().has_zero_potential(), "requires c = 0")?;
                self.connected_dirichlet()?;
                let eta = self.positive_eta()?;
                let degs: Vec<S> = {
                    let og = self.spec.graph();
                    self.spec.free_indices().into_iter().map(|v| og.degree_at(v)).collect()
                };
                let dmax = degs.iter().fold(S::zero(), |a, &d| max_of(a, d));
                let nn = from_usize::<S>(n);
                let unit_path = nn * (nn + one) * (nn + nn + one) / cast::<S>(6.0);
                Ok((self.rigidity()?, dmax * dmax * unit_path / eta))
            }
        }
    }

    /// Whether `τ` takes more than one value on the free vertices.
    pub fn torsion_is_nonconstant(&self) -> Option<bool> {
        let tau = self.torsion.as_ref().ok()?.tau.values();
        let free = self.reduced.free_indices();
        let hi = free.iter().fold(S::zero(), |a, &v| max_of(a, tau[v]));
        let lo = free.iter().fold(hi, |a, &v| min_of(a, tau[v]));
        Some(hi - lo > cast::<S>(1e-9) * hi)
    }

    fn strict_claimed(&self, id: BoundId) -> bool {
        match id {
            BoundId::PolyaSzegoProduct | BoundId::MeanDistanceRigidity | BoundId::InradiusRigidity => {
                self.spec.has_dirichlet()
            }
            _ => false,
        }
    }

    pub fn check(&self, id: BoundId) -> BoundCheck<S> {
        match self.compute(id) {
            Ok((lhs, rhs)) => {
                let evidence = if id.uses_lambda0() {
                    self.spectrum.as_ref().ok().map(|s| s.evidence)
                } else {
                    None
                };
                BoundCheck::evaluated(id, lhs, rhs, self.strict_claimed(id), evidence)
            }
            Err(a) => BoundCheck::skipped(id, a),
        }
    }

    pub fn report(&self) -> BoundReport<S> {
        let t = self.torsion.as_ref().ok();
        let s = self.spectrum.as_ref().ok();
        BoundReport {
            p: self.p(),
            vertex_count: self.spec.len(),
            free_count: self.spec.free_count(),
            edge_count: self.spec.graph().edge_count(),
            dirichlet_count: self.spec.dirichlet_indices().len(),
            rigidity: t.map(|t| t.rigidity),
            torsion_residual: t.map(|t| t.residual_inf),
            lambda0: s.map(|s| s.lambda0),
            spectral_residual: s.map(|s| s.residual),
            evidence: s.map(|s| s.evidence),
            eta: self.eta,
            checks: BoundId::ALL.iter().map(|&id| self.check(id)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<S> {
    pub p: S,
    pub vertex_count: usize,
    pub free_count: usize,
    pub edge_count: usize,
    pub dirichlet_count: usize,
    pub rigidity: Option<S>,
    pub torsion_residual: Option<S>,
    pub lambda0: Option<S>,
    pub spectral_residual: Option<S>,
    pub evidence: Option<Evidence>,
    /// Minimal cut weight with `V₀` merged to a single vertex.
    pub eta: Option<S>,
    /// One entry per [`BoundId`], in [`BoundId::ALL`] order.
    pub checks: Vec<BoundCheck<S>>,
}

impl<S: Real> BoundReport<S> {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck<S>> {
        self.checks.iter().filter(|c| c.is_violation())
    }

    pub fn get(&self, id: BoundId) -> &BoundCheck<S> {
        &self.checks[BoundId::ALL.iter().position(|&x| x == id).expect("id is listed")]
    }
}

pub fn check<S: Real>(spec: &ProblemSpec<S>, id: BoundId) -> BoundCheck<S> {
    BoundContext::new(spec).check(id)
}

pub fn check_all<S: Real>(spec: &ProblemSpec<S>) -> BoundReport<S> {
    BoundContext::new(spec).report()
}
