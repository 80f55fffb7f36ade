//! JSON run configuration.
//!
//! ```json
//! {
//!   "chart": {"kind": "hemisphere", "params": {"radius": 2.0}},
//!   "domain": {"kind": "disk", "radius": 1.0, "center": [0.0, 0.0]},
//!   "mesh": {"h": 0.1, "levels": 4},
//!   "problem": {"f": {"kind": "cos_r2_forcing"}, "manufactured": "cos_r2"}
//! }
//! ```
//!
//! Every object rejects unknown keys. The schema is published as
//! `docs/config.schema.json`.

use serde::{Deserialize, Serialize};

use crate::functions::{Manufactured, ScalarSpec, VectorSpec};
use crate::geometry::{Chart, ChartKind, DomainSpec, DEFAULT_LAMBDA_MIN_FLOOR};
use crate::mesh::{quadrature, QuadratureRule};
use crate::solver::NeumannOptions;
use crate::{Error, Result};

const MAX_LEVELS: usize = 8;
/// Smallest accepted `mesh.h` relative to the domain diameter.
const MIN_H_FRACTION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    #[serde(flatten)]
    pub kind: ChartKind,
    #[serde(default = "default_floor")]
    pub lambda_min_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Target edge length of the coarsest mesh.
    pub h: f64,
    /// Number of meshes in refinement studies (the coarsest included).
    #[serde(default = "default_levels")]
    pub levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// `None` means ten times the number of unknowns.
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub strict_compatibility: bool,
    #[serde(default = "default_threshold")]
    pub compatibility_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: default_tol(),
            max_iter: None,
            strict_compatibility: false,
            compatibility_threshold: default_threshold(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Right-hand side `F`.
    #[serde(default = "zero")]
    pub f: ScalarSpec,
    /// Normal component `χ` for the divergence system.
    #[serde(default = "zero")]
    pub chi: ScalarSpec,
    /// Exact solution paired with its forcing, for convergence studies.
    #[serde(default)]
    pub manufactured: Option<Manufactured>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            f: ScalarSpec::Zero,
            chi: ScalarSpec::Zero,
            manufactured: None,
        }
    }
}

impl ProblemConfig {
    /// The right-hand side: `f`, or the forcing of the manufactured problem.
    pub fn forcing(&self) -> ScalarSpec {
        match self.manufactured {
            Some(m) => m.forcing(),
            None => self.f.clone(),
        }
    }
}

/// One identity checked by the `identities` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IdentityCase {
    DivergenceTheorem { field: VectorSpec },
    IntegrationByParts { f: ScalarSpec, psi: ScalarSpec, j: usize },
}

impl IdentityCase {
    /// Cases used when the configuration lists none. The constant `e₃` field
    /// gives `0 = 0` on flat charts and is only informative on curved ones.
    pub fn default_cases() -> Vec<IdentityCase> {
        let x1_plus_2 = ScalarSpec::Polynomial {
            terms: vec![
                crate::geometry::MongeTerm { i: 0, j: 0, c: 2.0 },
                crate::geometry::MongeTerm { i: 1, j: 0, c: 1.0 },
            ],
        };
        vec![
            IdentityCase::DivergenceTheorem {
                field: VectorSpec::Planar,
            },
            IdentityCase::DivergenceTheorem {
                field: VectorSpec::Constant { value: [0.0, 0.0, 1.0] },
            },
            IdentityCase::IntegrationByParts {
                f: x1_plus_2.clone(),
                psi: ScalarSpec::X1,
                j: 1,
            },
            IdentityCase::IntegrationByParts {
                f: x1_plus_2,
                psi: ScalarSpec::ExpX2,
                j: 2,
            },
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub chart: ChartConfig,
    pub domain: DomainSpec,
    pub mesh: MeshConfig,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub problem: ProblemConfig,
    #[serde(default)]
    pub identities: Option<Vec<IdentityCase>>,
    /// Output directory; the `--out` flag overrides it.
    #[serde(default = "default_output")]
    pub output: String,
    /// Seed for random start vectors and sampled fields.
    #[serde(default)]
    pub seed: u64,
    /// Number of random fields in coercivity and norm checks.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Grid resolution of chart validation.
    #[serde(default = "default_sampling")]
    pub validation_sampling: usize,
}

fn default_floor() -> f64 {
    DEFAULT_LAMBDA_MIN_FLOOR
}
fn default_levels() -> usize {
    4
}
fn default_tol() -> f64 {
    1e-10
}
fn default_threshold() -> f64 {
    1e-8
}
fn zero() -> ScalarSpec {
    ScalarSpec::Zero
}
fn default_order() -> usize {
    4
}
fn default_output() -> String {
    "surfpoisson-out".into()
}
fn default_samples() -> usize {
    100
}
fn default_sampling() -> usize {
    32
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    /// Parse and validate a JSON document.
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<RunConfig> {
        let text = std::str::from_utf8(bytes).map_err(|e| config_error(format!("config is not UTF-8: {e}")))?;
        Self::from_json(text)
    }

    /// Range checks that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(format!("{name} must be positive and finite, got {v}")))
            }
        };
        self.domain.validate().map_err(|e| config_error(e.to_string()))?;
        positive("mesh.h", self.mesh.h)?;
        if self.mesh.h >= self.domain.diameter() {
            return Err(config_error(format!(
                "mesh.h = {} must be smaller than the domain diameter {}",
                self.mesh.h,
                self.domain.diameter()
            )));
        }
        if self.mesh.h < MIN_H_FRACTION * self.domain.diameter() {
            return Err(config_error(format!(
                "mesh.h = {} is below {MIN_H_FRACTION} times the domain diameter",
                self.mesh.h
            )));
        }
        if !(1..=MAX_LEVELS).contains(&self.mesh.levels) {
            return Err(config_error(format!("mesh.levels must lie in 1..={MAX_LEVELS}")));
        }
        if !(1..=4).contains(&self.quadrature_order) {
            return Err(config_error(format!(
                "quadrature_order must lie in 1..=4, got {}",
                self.quadrature_order
            )));
        }
        positive("solver.tol", self.solver.tol)?;
        if self.solver.max_iter == Some(0) {
            return Err(config_error("solver.max_iter must be positive"));
        }
        if !(self.solver.compatibility_threshold >= 0.0) {
            return Err(config_error("solver.compatibility_threshold must be non-negative"));
        }
        positive("chart.lambda_min_floor", self.chart.lambda_min_floor)?;
        if self.samples == 0 {
            return Err(config_error("samples must be positive"));
        }
        if self.problem.manufactured.is_some() && !self.problem.f.is_zero() {
            return Err(config_error("problem.f and problem.manufactured are mutually exclusive"));
        }
        for case in self.identities.iter().flatten() {
            if let IdentityCase::IntegrationByParts { j, .. } = case {
                if !(1..=3).contains(j) {
                    return Err(config_error(format!("integration_by_parts.j must be 1, 2 or 3, got {j}")));
                }
            }
        }
        self.build_chart()?;
        Ok(())
    }

    pub fn build_chart(&self) -> Result<Chart> {
        Chart::new(self.chart.kind.clone(), self.domain.clone())
            .map(|c| c.with_lambda_min_floor(self.chart.lambda_min_floor))
            .map_err(|e| config_error(e.to_string()))
    }

    pub fn quadrature(&self) -> Result<QuadratureRule> {
        quadrature(self.quadrature_order)
    }

    pub fn neumann_options(&self) -> NeumannOptions {
        NeumannOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            strict_compatibility: self.solver.strict_compatibility,
            compatibility_threshold: self.solver.compatibility_threshold,
            record_energy: false,
        }
    }

    pub fn identity_cases(&self) -> Vec<IdentityCase> {
        self.identities.clone().unwrap_or_else(IdentityCase::default_cases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "chart": {"kind": "flat", "params": {}},
        "domain": {"kind": "disk", "radius": 1.0},
        "mesh": {"h": 0.2}
    }"#;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.quadrature_order, 4);
        assert_eq!(cfg.mesh.levels, 4);
        assert_eq!(cfg.solver, SolverConfig::default());
        assert_eq!(cfg.problem, ProblemConfig::default());
        assert_eq!(cfg.samples, 100);
        assert_eq!(cfg.chart.lambda_min_floor, 1e-8);
        assert_eq!(cfg.identity_cases(), IdentityCase::default_cases());
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"{
            "chart": {"kind": "monge", "params": {"terms": [{"i": 2, "j": 0, "c": 0.5}]}, "lambda_min_floor": 1e-6},
            "domain": {"kind": "ellipse", "a": 2.0, "b": 1.0, "center": [0.5, 0.0]},
            "mesh": {"h": 0.25, "levels": 3},
            "quadrature_order": 3,
            "solver": {"tol": 1e-9, "max_iter": 500, "strict_compatibility": true, "compatibility_threshold": 1e-6},
            "problem": {"chi": {"kind": "constant", "value": 1.0}, "manufactured": "zero"},
            "identities": [{"kind": "integration_by_parts", "f": {"kind": "x1"}, "psi": {"kind": "x2"}, "j": 3}],
            "output": "out",
            "seed": 9,
            "samples": 10,
            "validation_sampling": 16
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.problem.manufactured, Some(Manufactured::Zero));
        assert_eq!(cfg.neumann_options().max_iter, Some(500));
        let again = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_unknown_keys_everywhere() {
        let bad = [
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}, "extra": 1}"#,
            r#"{"chart": {"kind": "flat", "params": {}, "x": 1}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}}"#,
            r#"{"chart": {"kind": "hemisphere", "params": {"radius": 2.0, "rho": 1}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}}"#,
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0, "r": 2}, "mesh": {"h": 0.2}}"#,
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2, "n": 1}}"#,
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}, "solver": {"tolerance": 1}}"#,
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}, "problem": {"g": {"kind": "zero"}}}"#,
            r#"{"chart": {"kind": "flat", "params": {}}, "domain": {"kind": "disk", "radius": 1.0}, "mesh": {"h": 0.2}, "problem": {"f": {"kind": "zero", "v": 1}}}"#,
        ];
        for text in bad {
            assert!(matches!(RunConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn rejects_out_of_range_values() {
        let base: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        let patches = [
            ("/mesh/h", serde_json::json!(0.0)),
            ("/mesh/h", serde_json::json!(5.0)),
            ("/mesh/h", serde_json::json!(1e-300)),
            ("/mesh/levels", serde_json::json!(0)),
            ("/mesh/levels", serde_json::json!(40)),
            ("/domain/radius", serde_json::json!(-1.0)),
        ];
        for (path, value) in patches {
            let mut v = base.clone();
            let (parent, key) = path.rsplit_once('/').unwrap();
            v.pointer_mut(parent).unwrap()[key] = value;
            assert!(RunConfig::from_json(&v.to_string()).is_err(), "{path}");
        }
        let mut v = base.clone();
        v["quadrature_order"] = serde_json::json!(5);
        assert!(RunConfig::from_json(&v.to_string()).is_err());
        let mut v = base.clone();
        v["chart"] = serde_json::json!({"kind": "hemisphere", "params": {"radius": 0.5}});
        assert!(matches!(RunConfig::from_json(&v.to_string()), Err(Error::Config(_))));
        let mut v = base.clone();
        v["problem"] = serde_json::json!({"f": {"kind": "x1"}, "manufactured": "cos_r2"});
        assert!(matches!(RunConfig::from_json(&v.to_string()), Err(Error::Config(_))));
        assert!(RunConfig::from_json("{").is_err());
        assert!(RunConfig::from_slice(&[0xff, 0xfe]).is_err());
    }
}
