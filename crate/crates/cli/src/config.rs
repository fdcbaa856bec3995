//! Config schema and assembly of solver inputs.
//!
//! A config is one TOML document. Unknown keys are rejected, and every
//! validation error names the offending field. The right-hand side is chosen
//! from a fixed catalog of forms that are safe for level-deck evaluation;
//! each carries a closed-form Lipschitz bound over the configured rectangle,
//! so certificates never depend on sampling unless estimation is requested.

use fuzzy_ck::{
    monomial_curve, saturating_deck, Branch, CoupledProblem, CoupledRhs, DarbouxProblem,
    FracOrder, LevelDeck, SingleRhs, SolverOptions,
};
use serde::Deserialize;

use crate::CliError;

/// Complete description of one batch job.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: ProblemKind,
    /// Orders of the (first) equation.
    pub order: OrderSpec,
    /// Orders of the second equation; coupled problems only. The scale
    /// parameters must match `order.rho` (both equations share one mesh).
    #[serde(default)]
    pub order2: Option<OrderSpec>,
    pub domain: DomainSpec,
    pub initial: InitialSpec,
    pub rhs: RhsSpec,
    /// Right-hand side of the second equation; coupled problems only.
    #[serde(default)]
    pub rhs2: Option<RhsSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    /// Optional inputs for the guaranteed-contraction subdomain printed in
    /// reports; requires a bound on the magnitude of the right-hand side.
    #[serde(default)]
    pub shrink: Option<ShrinkSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Single,
    Coupled,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderSpec {
    /// Fractional orders `(φ₁, φ₂)`, each in (0, 1].
    pub phi: [f64; 2],
    /// Scale parameters `(ρ₁, ρ₂)`, each positive.
    pub rho: [f64; 2],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    /// Extent along x: the rectangle is `(0, a] × (0, b]`.
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// υ(x, 0).
    pub xi1: CurveSpec,
    /// υ(0, y).
    pub xi2: CurveSpec,
    /// ω(x, 0); coupled problems only.
    #[serde(default)]
    pub eta1: Option<CurveSpec>,
    /// ω(0, y); coupled problems only.
    #[serde(default)]
    pub eta2: Option<CurveSpec>,
}

/// Initial curve `t ↦ (a, b, c) · t^power` with a triangular coefficient.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub triangular: [f64; 3],
    #[serde(default)]
    pub power: f64,
}

/// Catalog of right-hand sides. In coupled problems the state argument is
/// the sum `υ + ω`, matching the forms the solver is exercised on.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsSpec {
    /// `F ≡ 0`.
    Zero,
    /// `F ≡ value`, a triangular constant.
    Constant(ConstantRhs),
    /// `F = coeff·x^{x_power}·y^{y_power} · z + offset term`.
    Linear(LinearRhs),
    /// `F = coeff·x^{x_power}·y^{y_power} · z / (1 + z)`.
    Saturating(SaturatingRhs),
    /// `F = scale · e^{-(x + y + offset)} · (υ + ω)`; coupled only.
    ExpCoupled(ExpCoupledRhs),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantRhs {
    pub value: [f64; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRhs {
    #[serde(default)]
    pub coeff: f64,
    #[serde(default)]
    pub x_power: f64,
    #[serde(default)]
    pub y_power: f64,
    /// Crisp forcing term `offset_coeff·x^{offset_x_power}·y^{offset_y_power}`.
    #[serde(default)]
    pub offset_coeff: f64,
    #[serde(default)]
    pub offset_x_power: f64,
    #[serde(default)]
    pub offset_y_power: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturatingRhs {
    pub coeff: f64,
    #[serde(default)]
    pub x_power: f64,
    #[serde(default)]
    pub y_power: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpCoupledRhs {
    pub scale: f64,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub m: usize,
    pub levels: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        let defaults = SolverOptions::default();
        Self {
            n: defaults.n,
            m: defaults.m,
            levels: defaults.levels,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub branch: BranchSpec,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the catalog Lipschitz bound of the (first) equation.
    #[serde(default)]
    pub lipschitz_hint: Option<f64>,
    /// Overrides the catalog Lipschitz bound of the second equation.
    #[serde(default)]
    pub lipschitz_hint2: Option<f64>,
    /// Drop all hints and let the solver sample a lower bound instead.
    #[serde(default)]
    pub estimate_lipschitz: bool,
}

fn default_tol() -> f64 {
    SolverOptions::default().tol
}

fn default_max_iter() -> usize {
    SolverOptions::default().max_iter
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
            branch: BranchSpec::default(),
            seed: 0,
            lipschitz_hint: None,
            lipschitz_hint2: None,
            estimate_lipschitz: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSpec {
    /// Seek the solution of the additive integral form.
    #[default]
    S1,
    /// Seek the solution of the subtractive (Hukuhara) integral form.
    S2,
}

impl BranchSpec {
    pub fn to_branch(self) -> Branch {
        match self {
            BranchSpec::S1 => Branch::FirstKind,
            BranchSpec::S2 => Branch::SecondKind,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShrinkSpec {
    /// Diameter-growth factor of the local existence bound.
    #[serde(default = "default_shrink_k")]
    pub k: f64,
    /// Bound on the magnitude of the right-hand side over the rectangle.
    pub m_bound: f64,
}

fn default_shrink_k() -> f64 {
    1.0
}

impl RunConfig {
    /// Parses a TOML document, rejecting unknown keys.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Structural checks beyond what deserialization can express.
    fn validate(&self) -> Result<(), CliError> {
        let field = |name: &str, message: &str| {
            Err(CliError::Config(format!("{name}: {message}")))
        };
        match self.kind {
            ProblemKind::Single => {
                if self.order2.is_some() {
                    return field("order2", "only valid for coupled problems");
                }
                if self.rhs2.is_some() {
                    return field("rhs2", "only valid for coupled problems");
                }
                if self.initial.eta1.is_some() || self.initial.eta2.is_some() {
                    return field("initial.eta1/eta2", "only valid for coupled problems");
                }
                if matches!(self.rhs, RhsSpec::ExpCoupled(_)) {
                    return field("rhs", "exp_coupled requires a coupled problem");
                }
            }
            ProblemKind::Coupled => {
                if self.order2.is_none() {
                    return field("order2", "required for coupled problems");
                }
                if self.rhs2.is_none() {
                    return field("rhs2", "required for coupled problems");
                }
                if self.initial.eta1.is_none() {
                    return field("initial.eta1", "required for coupled problems");
                }
                if self.initial.eta2.is_none() {
                    return field("initial.eta2", "required for coupled problems");
                }
                let rho = self.order.rho;
                let rho2 = self.order2.as_ref().unwrap().rho;
                if rho != rho2 {
                    return field(
                        "order2.rho",
                        "must equal order.rho (both equations share one mesh)",
                    );
                }
            }
        }
        self.rhs.validate("rhs")?;
        if let Some(rhs2) = &self.rhs2 {
            rhs2.validate("rhs2")?;
        }
        Ok(())
    }

    pub fn order(&self) -> Result<FracOrder, CliError> {
        FracOrder::new(
            (self.order.phi[0], self.order.phi[1]),
            (self.order.rho[0], self.order.rho[1]),
        )
        .map_err(|e| CliError::Config(format!("order: {e}")))
    }

    pub fn order2(&self) -> Result<FracOrder, CliError> {
        let spec = self
            .order2
            .as_ref()
            .ok_or_else(|| CliError::Config("order2: required for coupled problems".into()))?;
        FracOrder::new((spec.phi[0], spec.phi[1]), (spec.rho[0], spec.rho[1]))
            .map_err(|e| CliError::Config(format!("order2: {e}")))
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            n: self.grid.n,
            m: self.grid.m,
            levels: self.grid.levels,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            seed: self.solver.seed,
            ..SolverOptions::default()
        }
    }

    /// Assembles the single-equation problem.
    pub fn build_single(&self) -> Result<DarbouxProblem, CliError> {
        if self.kind != ProblemKind::Single {
            return Err(CliError::Config(
                "kind: expected a single problem".into(),
            ));
        }
        Ok(DarbouxProblem {
            order: self.order()?,
            domain: (self.domain.a, self.domain.b),
            xi1: curve(&self.initial.xi1),
            xi2: curve(&self.initial.xi2),
            rhs: self.single_rhs()?,
            branch: self.solver.branch.to_branch(),
        })
    }

    /// Assembles the coupled problem.
    pub fn build_coupled(&self) -> Result<CoupledProblem, CliError> {
        if self.kind != ProblemKind::Coupled {
            return Err(CliError::Config(
                "kind: expected a coupled problem".into(),
            ));
        }
        let eta1 = self.initial.eta1.as_ref().unwrap();
        let eta2 = self.initial.eta2.as_ref().unwrap();
        Ok(CoupledProblem {
            order_u: self.order()?,
            order_w: self.order2()?,
            domain: (self.domain.a, self.domain.b),
            xi1: curve(&self.initial.xi1),
            xi2: curve(&self.initial.xi2),
            eta1: curve(eta1),
            eta2: curve(eta2),
            rhs_f: self.coupled_rhs(&self.rhs, self.solver.lipschitz_hint)?,
            rhs_g: self.coupled_rhs(self.rhs2.as_ref().unwrap(), self.solver.lipschitz_hint2)?,
            branch: self.solver.branch.to_branch(),
        })
    }

    fn single_rhs(&self) -> Result<SingleRhs, CliError> {
        let domain = (self.domain.a, self.domain.b);
        let levels = self.grid.levels;
        let built = match self.rhs {
            RhsSpec::Zero => SingleRhs::zero(),
            RhsSpec::Constant(c) => SingleRhs::constant(
                LevelDeck::triangular(c.value[0], c.value[1], c.value[2], levels)
                    .map_err(|e| CliError::Config(format!("rhs.constant.value: {e}")))?,
            ),
            RhsSpec::Linear(l) => {
                let hint = (l.coeff * mono_sup(domain, l.x_power, l.y_power)).abs();
                SingleRhs::new(move |x, y, u: &LevelDeck| {
                    let c = l.coeff * x.powf(l.x_power) * y.powf(l.y_power);
                    let d = l.offset_coeff
                        * x.powf(l.offset_x_power)
                        * y.powf(l.offset_y_power);
                    u.scale(c)?.add(&LevelDeck::crisp(d, u.resolution())?)
                })
                .with_hint(hint)
            }
            RhsSpec::Saturating(s) => {
                let hint = (s.coeff * mono_sup(domain, s.x_power, s.y_power)).abs();
                SingleRhs::new(move |x, y, u: &LevelDeck| {
                    saturating_deck(u)?.scale(s.coeff * x.powf(s.x_power) * y.powf(s.y_power))
                })
                .with_hint(hint)
            }
            RhsSpec::ExpCoupled(_) => {
                return Err(CliError::Config(
                    "rhs: exp_coupled requires a coupled problem".into(),
                ))
            }
        };
        Ok(self.apply_hint_policy(built, self.solver.lipschitz_hint))
    }

    fn coupled_rhs(&self, spec: &RhsSpec, hint: Option<f64>) -> Result<CoupledRhs, CliError> {
        let domain = (self.domain.a, self.domain.b);
        let levels = self.grid.levels;
        let built = match *spec {
            RhsSpec::Zero => CoupledRhs::new(|_, _, u: &LevelDeck, _: &LevelDeck| {
                LevelDeck::crisp(0.0, u.resolution())
            })
            .with_hint(0.0),
            RhsSpec::Constant(c) => {
                let value = LevelDeck::triangular(c.value[0], c.value[1], c.value[2], levels)
                    .map_err(|e| CliError::Config(format!("constant.value: {e}")))?;
                CoupledRhs::new(move |_, _, u: &LevelDeck, _: &LevelDeck| {
                    if u.resolution() != value.resolution() {
                        return Err(fuzzy_ck::Error::ResolutionMismatch(
                            value.resolution(),
                            u.resolution(),
                        ));
                    }
                    Ok(value.clone())
                })
                .with_hint(0.0)
            }
            RhsSpec::Linear(l) => {
                let hint = (l.coeff * mono_sup(domain, l.x_power, l.y_power)).abs();
                CoupledRhs::new(move |x, y, u: &LevelDeck, w: &LevelDeck| {
                    let c = l.coeff * x.powf(l.x_power) * y.powf(l.y_power);
                    let d = l.offset_coeff
                        * x.powf(l.offset_x_power)
                        * y.powf(l.offset_y_power);
                    u.add(w)?
                        .scale(c)?
                        .add(&LevelDeck::crisp(d, u.resolution())?)
                })
                .with_hint(hint)
            }
            RhsSpec::Saturating(s) => {
                let hint = (s.coeff * mono_sup(domain, s.x_power, s.y_power)).abs();
                CoupledRhs::new(move |x, y, u: &LevelDeck, w: &LevelDeck| {
                    saturating_deck(&u.add(w)?)?
                        .scale(s.coeff * x.powf(s.x_power) * y.powf(s.y_power))
                })
                .with_hint(hint)
            }
            RhsSpec::ExpCoupled(e) => {
                let hint = (e.scale * (-e.offset).exp()).abs();
                CoupledRhs::new(move |x, y, u: &LevelDeck, w: &LevelDeck| {
                    u.add(w)?.scale(e.scale * (-(x + y + e.offset)).exp())
                })
                .with_hint(hint)
            }
        };
        Ok(self.apply_hint_policy_coupled(built, hint))
    }

    fn apply_hint_policy(&self, rhs: SingleRhs, explicit: Option<f64>) -> SingleRhs {
        if self.solver.estimate_lipschitz {
            // Rebuild without a hint so the solver falls back to sampling.
            return strip_single_hint(rhs);
        }
        match explicit {
            Some(r) => rhs.with_hint(r),
            None => rhs,
        }
    }

    fn apply_hint_policy_coupled(&self, rhs: CoupledRhs, explicit: Option<f64>) -> CoupledRhs {
        if self.solver.estimate_lipschitz {
            return strip_coupled_hint(rhs);
        }
        match explicit {
            Some(r) => rhs.with_hint(r),
            None => rhs,
        }
    }
}

impl RhsSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RhsSpec::Zero => "zero",
            RhsSpec::Constant(_) => "constant",
            RhsSpec::Linear(_) => "linear",
            RhsSpec::Saturating(_) => "saturating",
            RhsSpec::ExpCoupled(_) => "exp_coupled",
        }
    }

    fn validate(&self, path: &str) -> Result<(), CliError> {
        let check_power = |field: &str, value: f64| {
            if !value.is_finite() || value < 0.0 {
                return Err(CliError::Config(format!(
                    "{path}.{}.{field}: powers must be finite and nonnegative \
                     (the Lipschitz bound needs a monotone envelope)",
                    self.name()
                )));
            }
            Ok(())
        };
        match *self {
            RhsSpec::Zero | RhsSpec::Constant(_) => Ok(()),
            RhsSpec::Linear(l) => {
                check_power("x_power", l.x_power)?;
                check_power("y_power", l.y_power)?;
                check_power("offset_x_power", l.offset_x_power)?;
                check_power("offset_y_power", l.offset_y_power)
            }
            RhsSpec::Saturating(s) => {
                check_power("x_power", s.x_power)?;
                check_power("y_power", s.y_power)
            }
            RhsSpec::ExpCoupled(e) => {
                if !e.scale.is_finite() || !e.offset.is_finite() {
                    return Err(CliError::Config(format!(
                        "{path}.exp_coupled: scale and offset must be finite"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn curve(spec: &CurveSpec) -> fuzzy_ck::CurveFn {
    let [a, b, c] = spec.triangular;
    monomial_curve(a, b, c, spec.power)
}

/// Supremum of `x^px · y^py` over `[0, a] × [0, b]` for nonnegative powers.
fn mono_sup(domain: (f64, f64), px: f64, py: f64) -> f64 {
    domain.0.powf(px) * domain.1.powf(py)
}

fn strip_single_hint(rhs: SingleRhs) -> SingleRhs {
    SingleRhs::new(move |x, y, u: &LevelDeck| rhs.eval(x, y, u))
}

fn strip_coupled_hint(rhs: CoupledRhs) -> CoupledRhs {
    CoupledRhs::new(move |x, y, u: &LevelDeck, w: &LevelDeck| rhs.eval(x, y, u, w))
}
