//! Strict JSON scenario configuration.

use serde::{Deserialize, Serialize};

use intertwine::field::{make_grid, Grid1D, Profile, TimeGrid};
use intertwine::ode::{integrate_riccati, OdeSolution, RiccatiKind};
use intertwine::verify::Tolerances;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub family: FamilyConfig,
    pub grid: GridConfig,
    pub time: TimeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceConfig>,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    /// Signed so that a negative count is reported against its key.
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    pub steps: i64,
    /// Stride of the snapshots written to the field CSVs.
    #[serde(default = "one")]
    pub record_every: i64,
}

fn one() -> i64 {
    1
}

fn one_f() -> f64 {
    1.0
}

/// A profile named by kind with its coefficient array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    /// `Σ c_k x^k`
    Polynomial { coeffs: Vec<f64> },
    /// `[a, λ]`: `a e^{λx}`
    Exponential { coeffs: [f64; 2] },
    /// `[a, ω, φ]`: `a cos(ωx + φ)`
    Trig { coeffs: [f64; 3] },
    /// `[a, κ]`: `a cosh(κx)`
    Cosh { coeffs: [f64; 2] },
    /// `[a, κ]`: `a sinh(κx)`
    Sinh { coeffs: [f64; 2] },
    /// `[a, p]`: `a x^p`
    Power { coeffs: [f64; 2] },
    Sum { terms: Vec<ProfileConfig> },
    Product { terms: Vec<ProfileConfig> },
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
    /// RK4 solution of a Riccati equation sampled on its own grid.
    Riccati { equation: String, params: Vec<f64>, start: [f64; 2], grid: GridConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiTermConfig {
    pub x: ProfileConfig,
    pub t: ProfileConfig,
    pub coeff: f64,
    /// Any nonzero value is rejected by the family.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub coeff_im: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonStatConfig {
    pub f1: ProfileConfig,
    pub sigma: f64,
    pub delta: f64,
    pub lambda0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyConfig {
    FirstOrder {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<ProfileConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<ProfileConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<ProfileConfig>,
        k: ProfileConfig,
    },
    Symmetry { omega: ProfileConfig, nu: ProfileConfig, phi: ProfileConfig },
    FokkerPlanck {
        chi: Vec<ChiTermConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<ProfileConfig>,
    },
    PainleveIv {
        f: ProfileConfig,
        m: f64,
        a: f64,
        d: f64,
        #[serde(default)]
        m0: f64,
    },
    PainleveIi { w: ProfileConfig, mtilde: f64, n: f64, k: f64 },
    FourthOrder {
        f: ProfileConfig,
        beta: f64,
        c: f64,
        a0: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default = "one_f")]
        theta0: f64,
        #[serde(default)]
        lambda0: f64,
    },
    Nonstat(NonStatConfig),
    TdOscillator { rho: ProfileConfig, nested: NonStatConfig },
}

impl FamilyConfig {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::FirstOrder { .. } => "first-order",
            Self::Symmetry { .. } => "symmetry",
            Self::FokkerPlanck { .. } => "fokker-planck",
            Self::PainleveIv { .. } => "painleve-iv",
            Self::PainleveIi { .. } => "painleve-ii",
            Self::FourthOrder { .. } => "fourth-order",
            Self::Nonstat(_) => "nonstat",
            Self::TdOscillator { .. } => "td-oscillator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceConfig {
    /// Separated eigen-solution of the second partner (first-order families).
    Separated { level: i64 },
    /// Gaussian packet propagated under the second partner.
    Packet { center: f64, width: f64, momentum: f64 },
    /// Candidate zero mode `exp(−h − ig)` (first-order families).
    ZeroMode,
    /// Dirichlet eigenstate of a stationary second partner, `φₙ(x) e^{−iEₙt}`.
    Eigenstate { level: i64 },
    /// `e^{i(kx − k²t)}`, a box mode of a free second partner.
    PlaneWave { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub momentum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refinement {
    Space,
    Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckConfig {
    Intertwining {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    ZeroMode {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Symmetry {
        operator: String,
        centers: Vec<f64>,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        times: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Expect::is_commutes")]
        expect: Expect,
        /// Upper bound when commuting, lower bound when breaking.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    NormIdentity {
        packets: Vec<PacketConfig>,
        #[serde(default)]
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Reflectionless {
        core: [f64; 2],
        #[serde(default = "ten")]
        stride: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    /// Measured construction checks recorded by the family (ODE residuals, route gaps).
    Construction {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    NonstatConstraints {
        /// Also require `V₂ ≡ 0`.
        #[serde(default)]
        free: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Convergence { refine: Refinement, levels: i64, declared_order: f64 },
}

/// Whether a symmetry candidate should commute, or must visibly fail to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    #[default]
    Commutes,
    Breaks,
}

impl Expect {
    fn is_commutes(&self) -> bool {
        *self == Expect::Commutes
    }
}

/// Symmetry operators a family offers, beyond `hamiltonian` and `charge-products`.
pub fn family_operators(tag: &str) -> &'static [&'static str] {
    match tag {
        "symmetry" => &["family"],
        "painleve-iv" => &["r1", "r2-corrected", "r2-printed"],
        "painleve-ii" => &["r-quadratic-1", "r-quadratic-2", "r-linear-1", "r-linear-2"],
        "nonstat" => &["r1", "r2", "r2-closed-form"],
        _ => &[],
    }
}

fn ten() -> i64 {
    10
}

impl CheckConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Intertwining { .. } => "intertwining",
            Self::ZeroMode { .. } => "zero-mode",
            Self::Symmetry { .. } => "symmetry",
            Self::NormIdentity { .. } => "norm-identity",
            Self::Reflectionless { .. } => "reflectionless",
            Self::Construction { .. } => "construction",
            Self::NonstatConstraints { .. } => "nonstat-constraints",
            Self::Convergence { .. } => "convergence",
        }
    }
}

/// Parses config text; errors carry the line and the offending key path.
pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
        let path = match e.path().to_string() {
            p if p == "?" || p == "." => "<document>".to_string(),
            p => p,
        };
        let inner = e.into_inner();
        CliError::Parse { line: inner.line(), column: inner.column(), key: path, message: strip_position(&inner.to_string()) }
    })?;
    de.end().map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        key: "<document>".into(),
        message: strip_position(&e.to_string()),
    })?;
    cfg.validate().map_err(|(key, message)| {
        let (line, column) = locate(text, &key).unwrap_or((0, 0));
        CliError::Parse { line, column, key, message }
    })?;
    Ok(cfg)
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Line and column of the value a path such as `checks[2].tol` names.
pub fn locate(text: &str, path: &str) -> Option<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    for seg in path.split('.').filter(|s| !s.is_empty()) {
        let (key, indices) = match seg.find('[') {
            Some(i) => (&seg[..i], &seg[i..]),
            None => (seg, ""),
        };
        if !key.is_empty() {
            let needle = format!("\"{key}\"");
            pos += text[pos..].find(&needle)?;
        }
        for idx in indices.split(['[', ']']).filter(|s| !s.is_empty()) {
            let idx: usize = idx.parse().ok()?;
            pos += text[pos..].find('[')? + 1;
            for _ in 0..idx {
                pos = skip_value(bytes, skip_ws(bytes, pos))?;
                pos = skip_ws(bytes, pos);
                if bytes.get(pos) != Some(&b',') {
                    return None;
                }
                pos += 1;
            }
            pos = skip_ws(bytes, pos);
        }
    }
    let line = text[..pos].matches('\n').count() + 1;
    let column = pos - text[..pos].rfind('\n').map_or(0, |i| i + 1) + 1;
    Some((line, column))
}

fn skip_ws(b: &[u8], mut pos: usize) -> usize {
    while pos < b.len() && b[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

/// End of the JSON value starting at `pos`.
fn skip_value(b: &[u8], mut pos: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    while pos < b.len() {
        let c = b[pos];
        if in_string {
            match c {
                b'\\' => pos += 1,
                b'"' => {
                    in_string = false;
                    if depth == 0 {
                        return Some(pos + 1);
                    }
                }
                _ => {}
            }
        } else {
            match c {
                b'"' => in_string = true,
                b'[' | b'{' => depth += 1,
                b']' | b'}' if depth == 0 => return Some(pos),
                b']' | b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(pos + 1);
                    }
                }
                b',' if depth == 0 => return Some(pos),
                c if depth == 0 && c.is_ascii_whitespace() => return Some(pos),
                _ => {}
            }
        }
        pos += 1;
    }
    None
}

type Invalid = (String, String);

fn require(ok: bool, key: impl Into<String>, msg: impl Into<String>) -> Result<(), Invalid> {
    if ok {
        Ok(())
    } else {
        Err((key.into(), msg.into()))
    }
}

fn finite(v: f64, key: &str) -> Result<(), Invalid> {
    require(v.is_finite(), key, format!("must be finite, got {v}"))
}

fn positive(v: f64, key: &str) -> Result<(), Invalid> {
    require(v > 0.0 && v.is_finite(), key, format!("must be positive, got {v}"))
}

impl GridConfig {
    fn validate(&self, prefix: &str) -> Result<(), Invalid> {
        finite(self.x_min, &format!("{prefix}.x_min"))?;
        finite(self.x_max, &format!("{prefix}.x_max"))?;
        require(self.x_min < self.x_max, format!("{prefix}.x_max"), format!("must exceed x_min = {}", self.x_min))?;
        require(self.n >= 9, format!("{prefix}.n"), format!("must be at least 9, got {}", self.n))
    }

    pub fn build(&self) -> intertwine::Result<Grid1D> {
        make_grid(self.x_min, self.x_max, self.n as usize)
    }
}

impl TimeConfig {
    pub fn build(&self) -> intertwine::Result<TimeGrid> {
        TimeGrid::new(self.t0, self.dt, self.steps as usize)
    }
}

impl ProfileConfig {
    fn validate(&self, key: &str) -> Result<(), Invalid> {
        match self {
            Self::Sum { terms } | Self::Product { terms } => {
                require(!terms.is_empty(), format!("{key}.terms"), "needs at least one term")?;
                terms.iter().try_for_each(|t| t.validate(&format!("{key}.terms")))
            }
            Self::Tabulated { xs, ys } => {
                require(xs.len() == ys.len(), format!("{key}.ys"), format!("has {} samples, xs has {}", ys.len(), xs.len()))?;
                require(xs.len() >= 4, format!("{key}.xs"), "needs at least 4 samples")
            }
            Self::Riccati { equation, params, grid, .. } => {
                RiccatiKind::from_name(equation, params).map_err(|e| (format!("{key}.equation"), e.to_string()))?;
                grid.validate(&format!("{key}.grid"))
            }
            _ => Ok(()),
        }
    }

    /// The RK4 solution behind a Riccati profile.
    pub fn riccati_solution(&self) -> Option<intertwine::Result<OdeSolution>> {
        match self {
            Self::Riccati { equation, params, start, grid } => Some(
                RiccatiKind::from_name(equation, params)
                    .and_then(|kind| integrate_riccati(kind, start[0], start[1], &grid.build()?)),
            ),
            _ => None,
        }
    }

    pub fn build(&self) -> intertwine::Result<Profile> {
        Ok(match self {
            Self::Polynomial { coeffs } => Profile::Polynomial(coeffs.clone()),
            Self::Exponential { coeffs: [a, lambda] } => Profile::Exponential { a: *a, lambda: *lambda },
            Self::Trig { coeffs: [a, omega, phase] } => Profile::Trig { a: *a, omega: *omega, phase: *phase },
            Self::Cosh { coeffs: [a, kappa] } => Profile::Cosh { a: *a, kappa: *kappa },
            Self::Sinh { coeffs: [a, kappa] } => Profile::Sinh { a: *a, kappa: *kappa },
            Self::Power { coeffs: [a, p] } => Profile::Power { a: *a, p: *p },
            Self::Sum { terms } => Profile::Sum(terms.iter().map(Self::build).collect::<intertwine::Result<_>>()?),
            Self::Product { terms } => Profile::Product(terms.iter().map(Self::build).collect::<intertwine::Result<_>>()?),
            Self::Tabulated { xs, ys } => Profile::tabulated(xs.clone(), ys.clone())?,
            Self::Riccati { equation, params, start, grid } => {
                let kind = RiccatiKind::from_name(equation, params)?;
                integrate_riccati(kind, start[0], start[1], &grid.build()?)?.to_profile()
            }
        })
    }
}

impl FamilyConfig {
    fn validate(&self) -> Result<(), Invalid> {
        let p = |cfg: &ProfileConfig, name: &str| cfg.validate(&format!("family.{name}"));
        match self {
            Self::FirstOrder { rho, mu, gamma, k } => {
                for (c, n) in [(rho, "rho"), (mu, "mu"), (gamma, "gamma")] {
                    if let Some(c) = c {
                        p(c, n)?;
                    }
                }
                p(k, "k")
            }
            Self::Symmetry { omega, nu, phi } => {
                p(omega, "omega")?;
                p(nu, "nu")?;
                p(phi, "phi")
            }
            Self::FokkerPlanck { chi, rho } => {
                require(!chi.is_empty(), "family.chi", "needs at least one term")?;
                for term in chi {
                    p(&term.x, "chi.x")?;
                    p(&term.t, "chi.t")?;
                }
                rho.as_ref().map_or(Ok(()), |r| p(r, "rho"))
            }
            Self::PainleveIv { f, .. } => p(f, "f"),
            Self::PainleveIi { w, .. } => p(w, "w"),
            Self::FourthOrder { f, .. } => p(f, "f"),
            Self::Nonstat(n) => p(&n.f1, "f1"),
            Self::TdOscillator { rho, nested } => {
                p(rho, "rho")?;
                nested.f1.validate("family.nested.f1")
            }
        }
    }
}

impl ScenarioConfig {
    /// Semantic checks that serde cannot express; returns the offending key.
    pub fn validate(&self) -> Result<(), Invalid> {
        require(!self.scenario.trim().is_empty(), "scenario", "must not be empty")?;
        self.grid.validate("grid")?;
        positive(self.time.dt, "time.dt")?;
        finite(self.time.t0, "time.t0")?;
        require(self.time.steps >= 1, "time.steps", format!("must be at least 1, got {}", self.time.steps))?;
        require(self.time.record_every >= 1, "time.record_every", format!("must be at least 1, got {}", self.time.record_every))?;
        require(
            self.time.steps % self.time.record_every == 0,
            "time.record_every",
            format!("must divide steps = {}", self.time.steps),
        )?;
        for (name, v) in [
            ("identity", self.tolerances.identity),
            ("single", self.tolerances.single),
            ("composed", self.tolerances.composed),
            ("propagated", self.tolerances.propagated),
        ] {
            positive(v, &format!("tolerances.{name}"))?;
        }
        self.family.validate()?;

        let family = self.family.tag();
        match &self.source {
            Some(SourceConfig::Separated { level }) => {
                require(family == "first-order", "source.kind", "separated sources need a first-order family")?;
                require(*level >= 0, "source.level", format!("must be non-negative, got {level}"))?;
            }
            Some(SourceConfig::Eigenstate { level }) => {
                require((0..20).contains(level), "source.level", format!("must be in 0..20, got {level}"))?;
            }
            Some(SourceConfig::ZeroMode) => {
                require(family == "first-order", "source.kind", "zero-mode sources need a first-order family")?;
            }
            Some(SourceConfig::Packet { width, .. }) => positive(*width, "source.width")?,
            Some(SourceConfig::PlaneWave { k }) => {
                finite(*k, "source.k")?;
                require(family != "fokker-planck", "source.kind", "plane waves are Schrödinger solutions; the fokker-planck pair diffuses")?;
            }
            None => {}
        }
        require(family != "symmetry" || self.source.is_none(), "source", "the symmetry family has no partner to map into")?;

        let mut mapped = false;
        for (i, check) in self.checks.iter().enumerate() {
            let key = format!("checks[{i}]");
            let kind = format!("{key}.kind");
            if let Some(tol) = check_tol(check) {
                positive(tol, &format!("{key}.tol"))?;
            }
            match check {
                CheckConfig::Intertwining { .. } => {
                    require(self.source.is_some(), &kind, "intertwining needs a source")?;
                    mapped = true;
                }
                CheckConfig::Convergence { levels, .. } => {
                    require(self.source.is_some(), &kind, "convergence needs a source")?;
                    require(*levels >= 2, format!("{key}.levels"), format!("must be at least 2, got {levels}"))?;
                }
                CheckConfig::ZeroMode { .. } => {
                    require(family == "first-order", &kind, "zero-mode checks need a first-order family")?
                }
                CheckConfig::Symmetry { operator, width, centers, .. } => {
                    let generic: &[&str] = if family == "symmetry" { &["hamiltonian"] } else { &["hamiltonian", "charge-products"] };
                    let known = generic.iter().chain(family_operators(family)).any(|o| o == operator);
                    require(known, format!("{key}.operator"), format!("`{operator}` is not offered by the {family} family"))?;
                    positive(*width, &format!("{key}.width"))?;
                    require(!centers.is_empty(), format!("{key}.centers"), "needs at least one test field")?;
                }
                CheckConfig::NormIdentity { packets, .. } => {
                    require(family == "nonstat", &kind, "norm-identity checks need a nonstat family")?;
                    require(!packets.is_empty(), format!("{key}.packets"), "needs at least one packet")?;
                    for pk in packets {
                        positive(pk.width, &format!("{key}.packets.width"))?;
                    }
                }
                CheckConfig::Reflectionless { stride, core, .. } => {
                    require(mapped, &kind, "reflectionless must follow an intertwining check")?;
                    require(
                        matches!(self.source, Some(SourceConfig::PlaneWave { .. })),
                        &kind,
                        "reflectionless needs a plane-wave source",
                    )?;
                    require(*stride >= 1, format!("{key}.stride"), format!("must be at least 1, got {stride}"))?;
                    require(core[0] < core[1], format!("{key}.core"), "must be an increasing interval")?;
                }
                CheckConfig::NonstatConstraints { .. } => require(
                    matches!(family, "nonstat" | "td-oscillator"),
                    &kind,
                    "nonstat-constraints needs a nonstat or td-oscillator family",
                )?,
                CheckConfig::Construction { .. } => {}
            }
        }
        Ok(())
    }
}

pub fn check_tol(check: &CheckConfig) -> Option<f64> {
    match check {
        CheckConfig::Intertwining { tol }
        | CheckConfig::ZeroMode { tol, .. }
        | CheckConfig::Symmetry { tol, .. }
        | CheckConfig::NormIdentity { tol, .. }
        | CheckConfig::Reflectionless { tol, .. }
        | CheckConfig::Construction { tol }
        | CheckConfig::NonstatConstraints { tol, .. } => *tol,
        CheckConfig::Convergence { .. } => None,
    }
}
