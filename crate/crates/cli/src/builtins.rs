//! Built-in scenarios. Each is plain config JSON fed through the same parser as
//! user files, so `export` reproduces exactly what `verify` runs.

use serde_json::{json, Value};

use crate::config::{self, ScenarioConfig};
use crate::error::CliError;

pub struct Builtin {
    pub name: &'static str,
    /// Relation exercised, printed by `list` after the name.
    pub exercises: &'static str,
    pub summary: &'static str,
    config: fn() -> Value,
}

impl Builtin {
    pub fn json(&self) -> Value {
        let mut v = (self.config)();
        v["scenario"] = json!(self.name);
        v
    }

    pub fn text(&self) -> String {
        serde_json::to_string_pretty(&self.json()).expect("builtin configs serialize") + "\n"
    }

    pub fn config(&self) -> Result<ScenarioConfig, CliError> {
        config::parse(&self.text())
    }

    pub fn label(&self) -> String {
        format!("{} ({})", self.name, self.exercises)
    }
}

fn poly(c: &[f64]) -> Value {
    json!({ "kind": "polynomial", "coeffs": c })
}

fn cosh_over_root2() -> Value {
    json!({ "kind": "cosh", "coeffs": [std::f64::consts::FRAC_1_SQRT_2, 1.0] })
}

fn free_nonstat() -> Value {
    json!({ "f1": cosh_over_root2(), "sigma": 0.5, "delta": 0.5, "lambda0": 1.0 })
}

fn nonstat_family() -> Value {
    let mut f = free_nonstat();
    f["kind"] = json!("nonstat");
    f
}

fn harmonic_first_order() -> Value {
    json!({
        "family": { "kind": "first-order", "k": poly(&[0.0, 0.0, 0.5]) },
        "grid": { "x_min": -8.0, "x_max": 8.0, "n": 1601 },
        "time": { "dt": 1e-4, "steps": 200, "record_every": 20 },
        "source": { "kind": "separated", "level": 1 },
        "checks": [
            { "kind": "intertwining", "tol": 1e-5 },
            { "kind": "zero-mode" },
            { "kind": "symmetry", "operator": "charge-products", "centers": [-1.0, 0.0, 1.0], "width": 1.0 },
            { "kind": "construction" }
        ]
    })
}

fn harmonic_kernel() -> Value {
    json!({
        "family": { "kind": "first-order", "k": poly(&[0.0, 0.0, 0.5]) },
        "grid": { "x_min": -8.0, "x_max": 8.0, "n": 1601 },
        "time": { "dt": 1e-3, "steps": 20, "record_every": 10 },
        "source": { "kind": "zero-mode" },
        "checks": [{ "kind": "intertwining" }, { "kind": "zero-mode" }]
    })
}

fn quartic_zero_mode() -> Value {
    json!({
        "family": { "kind": "first-order", "k": poly(&[0.0, 0.0, 0.0, 0.0, 0.25]) },
        "grid": { "x_min": -6.0, "x_max": 6.0, "n": 2401 },
        "time": { "dt": 1e-3, "steps": 2 },
        "checks": [{ "kind": "zero-mode" }]
    })
}

fn cubic_zero_mode() -> Value {
    json!({
        "family": { "kind": "first-order", "k": poly(&[0.0, 0.0, 0.0, 1.0 / 3.0]) },
        "grid": { "x_min": -2.0, "x_max": 2.0, "n": 1601 },
        "time": { "dt": 1e-3, "steps": 2 },
        "checks": [{ "kind": "zero-mode" }]
    })
}

fn breathing_first_order() -> Value {
    json!({
        "family": {
            "kind": "first-order",
            "rho": { "kind": "exponential", "coeffs": [1.0, 1.0] },
            "k": poly(&[0.0, 0.0, 0.5])
        },
        "grid": { "x_min": -12.0, "x_max": 12.0, "n": 2401 },
        "time": { "dt": 1e-4, "steps": 200, "record_every": 20 },
        "source": { "kind": "separated", "level": 1 },
        "checks": [{ "kind": "intertwining", "tol": 1e-4 }, { "kind": "zero-mode", "t": 0.01 }]
    })
}

fn galilean_first_order() -> Value {
    json!({
        "family": {
            "kind": "first-order",
            "mu": poly(&[0.0, 0.8]),
            "gamma": poly(&[0.0, 0.16]),
            "k": poly(&[0.0, 0.0, 0.25])
        },
        "grid": { "x_min": -10.0, "x_max": 10.0, "n": 2001 },
        "time": { "dt": 1e-4, "steps": 200, "record_every": 20 },
        "source": { "kind": "packet", "center": 0.0, "width": 1.0, "momentum": 0.5 },
        "checks": [
            { "kind": "intertwining" },
            { "kind": "symmetry", "operator": "charge-products", "centers": [-1.0, 0.0, 1.0], "width": 1.0 }
        ]
    })
}

fn symmetry_traveling() -> Value {
    json!({
        "family": {
            "kind": "symmetry",
            "omega": poly(&[1.0]),
            "nu": poly(&[1.0]),
            "phi": { "kind": "sum", "terms": [{ "kind": "cosh", "coeffs": [0.0, 1.0] }, poly(&[0.0, 0.0, 0.25])] }
        },
        "grid": { "x_min": -10.0, "x_max": 10.0, "n": 2001 },
        "time": { "dt": 0.01, "steps": 100 },
        "checks": [
            { "kind": "symmetry", "operator": "family", "centers": [-1.0, 0.0, 1.0], "width": 1.0, "times": [0.2, 0.7] }
        ]
    })
}

fn fokker_planck_harmonic() -> Value {
    json!({
        "family": {
            "kind": "fokker-planck",
            "chi": [{ "x": poly(&[0.0, 0.0, 0.5]), "t": poly(&[1.0]), "coeff": 1.0 }]
        },
        "grid": { "x_min": -8.0, "x_max": 8.0, "n": 1601 },
        "time": { "dt": 1e-4, "steps": 200, "record_every": 20 },
        "source": { "kind": "packet", "center": 0.5, "width": 1.0, "momentum": 0.0 },
        "checks": [{ "kind": "intertwining" }, { "kind": "construction" }]
    })
}

fn half_inverse() -> Value {
    json!({ "kind": "power", "coeffs": [0.5, -1.0] })
}

fn painleve4_exact() -> Value {
    json!({
        "family": { "kind": "painleve-iv", "f": half_inverse(), "m": 1.0, "a": -1.0, "d": -1.0 },
        "grid": { "x_min": 1.0, "x_max": 15.0, "n": 1751 },
        "time": { "dt": 1e-4, "steps": 100, "record_every": 10 },
        "source": { "kind": "eigenstate", "level": 0 },
        "checks": [{ "kind": "construction", "tol": 1e-8 }, { "kind": "intertwining" }]
    })
}

fn painleve4_ordering() -> Value {
    let tests = json!([7.5, 8.0, 8.5]);
    json!({
        "family": { "kind": "painleve-iv", "f": half_inverse(), "m": 1.0, "a": -1.0, "d": -1.0, "m0": 0.7 },
        "grid": { "x_min": 1.0, "x_max": 15.0, "n": 1751 },
        "time": { "dt": 0.01, "steps": 100 },
        "checks": [
            { "kind": "symmetry", "operator": "r1", "centers": tests, "width": 1.0, "times": [0.35] },
            { "kind": "symmetry", "operator": "r2-corrected", "centers": tests, "width": 1.0, "times": [0.35] },
            { "kind": "symmetry", "operator": "r2-printed", "centers": tests, "width": 1.0, "times": [0.35], "expect": "breaks" }
        ]
    })
}

fn painleve4_riccati() -> Value {
    json!({
        "family": {
            "kind": "painleve-iv",
            "f": {
                "kind": "riccati",
                "equation": "painleve4-riccati",
                "params": [1.0, 2.0],
                "start": [3.0, -1.0],
                "grid": { "x_min": 3.0, "x_max": 6.0, "n": 3001 }
            },
            "m": 1.0, "a": 2.0, "d": -4.0
        },
        "grid": { "x_min": 3.05, "x_max": 5.95, "n": 291 },
        "time": { "dt": 0.01, "steps": 100 },
        "checks": [{ "kind": "construction" }]
    })
}

fn painleve2_inverse() -> Value {
    json!({
        "family": { "kind": "painleve-ii", "w": { "kind": "power", "coeffs": [1.0, -1.0] }, "mtilde": 1.0, "n": 0.4, "k": -4.0 },
        "grid": { "x_min": 1.0, "x_max": 9.0, "n": 801 },
        "time": { "dt": 0.01, "steps": 100 },
        "checks": [
            { "kind": "construction", "tol": 1e-8 },
            { "kind": "symmetry", "operator": "r-linear-1", "centers": [5.0], "width": 0.6, "times": [0.4] },
            { "kind": "symmetry", "operator": "r-quadratic-2", "centers": [5.0], "width": 0.6, "times": [0.4] }
        ]
    })
}

fn fourth_order_linear() -> Value {
    json!({
        "family": { "kind": "fourth-order", "f": poly(&[0.0, 1.0]), "beta": 8.0, "c": 0.0, "a0": 0.5, "lambda0": 0.3 },
        "grid": { "x_min": 0.5, "x_max": 6.0, "n": 1101 },
        "time": { "dt": 1e-4, "steps": 100, "record_every": 10 },
        "source": { "kind": "eigenstate", "level": 0 },
        "checks": [{ "kind": "construction", "tol": 1e-8 }, { "kind": "intertwining" }]
    })
}

fn reflectionless_nonstat() -> Value {
    json!({
        "family": nonstat_family(),
        "grid": { "x_min": -60.0, "x_max": 60.0, "n": 12001 },
        "time": { "dt": 1e-4, "steps": 40, "record_every": 20 },
        "source": { "kind": "plane-wave", "k": 2.0 * std::f64::consts::PI * 24.0 / 120.0 },
        "checks": [
            { "kind": "intertwining" },
            { "kind": "reflectionless", "core": [-20.0, 20.0], "stride": 10 }
        ]
    })
}

fn nonstat_norm() -> Value {
    json!({
        "family": nonstat_family(),
        "grid": { "x_min": -15.0, "x_max": 15.0, "n": 3001 },
        "time": { "dt": 0.01, "steps": 100 },
        "checks": [
            { "kind": "nonstat-constraints", "free": true },
            {
                "kind": "norm-identity",
                "t": 0.4,
                "packets": [
                    { "center": -1.0, "width": 1.0, "momentum": 0.5 },
                    { "center": 0.0, "width": 0.8, "momentum": 0.0 },
                    { "center": 2.0, "width": 1.3, "momentum": -1.0 }
                ]
            },
            { "kind": "symmetry", "operator": "r2", "centers": [-1.0, 0.0, 1.0], "width": 1.0, "times": [0.3] },
            { "kind": "symmetry", "operator": "r2-closed-form", "centers": [-1.0, 0.0, 1.0], "width": 1.0, "times": [0.3] }
        ]
    })
}

fn nonstat_convergence() -> Value {
    json!({
        "family": nonstat_family(),
        "grid": { "x_min": -10.0, "x_max": 10.0, "n": 101 },
        "time": { "dt": 1e-4, "steps": 10 },
        "source": { "kind": "plane-wave", "k": 2.0 * std::f64::consts::PI * 4.0 / 20.0 },
        "checks": [{ "kind": "convergence", "refine": "space", "levels": 3, "declared_order": 4.0 }]
    })
}

fn td_oscillator() -> Value {
    json!({
        "family": {
            "kind": "td-oscillator",
            "rho": { "kind": "trig", "coeffs": [1.0, 1.0, 0.0] },
            "nested": free_nonstat()
        },
        "grid": { "x_min": -8.0, "x_max": 8.0, "n": 1601 },
        "time": { "dt": 1e-4, "steps": 200, "record_every": 20 },
        "source": { "kind": "packet", "center": 0.0, "width": 1.0, "momentum": 0.5 },
        "checks": [{ "kind": "nonstat-constraints" }, { "kind": "intertwining" }]
    })
}

pub const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "harmonic-first-order",
        exercises: "Eq. V_1/2",
        summary: "oscillator partners x^2 -/+ 1; first excited state mapped to the ground state",
        config: harmonic_first_order,
    },
    Builtin {
        name: "harmonic-kernel",
        exercises: "charge kernel",
        summary: "the oscillator ground state is annihilated by the charge and flagged as a kernel element",
        config: harmonic_kernel,
    },
    Builtin {
        name: "quartic-zero-mode",
        exercises: "zero-mode normalization",
        summary: "K = y^4/4 zero mode, normalizable with a Gamma-function integral",
        config: quartic_zero_mode,
    },
    Builtin {
        name: "cubic-zero-mode",
        exercises: "zero-mode divergence",
        summary: "K = y^3/3 zero mode, annihilated but not normalizable",
        config: cubic_zero_mode,
    },
    Builtin {
        name: "breathing-first-order",
        exercises: "separated solutions",
        summary: "rho = e^t scale family; separated solution mapped through the charge",
        config: breathing_first_order,
    },
    Builtin {
        name: "galilean-first-order",
        exercises: "moving first-order frame",
        summary: "linearly moving family; propagated packet mapped, charge products commute",
        config: galilean_first_order,
    },
    Builtin {
        name: "symmetry-traveling",
        exercises: "second-order symmetry",
        summary: "traveling potential Phi(x - 2vt) with its second-order symmetry",
        config: symmetry_traveling,
    },
    Builtin {
        name: "fokker-planck-harmonic",
        exercises: "drift partner relation",
        summary: "chi = x^2/2 drift; diffusing packet mapped between the partners",
        config: fokker_planck_harmonic,
    },
    Builtin {
        name: "painleve4-exact",
        exercises: "Painlevé IV construction routes",
        summary: "f = 1/(2x) with a = d = -1; both construction routes agree",
        config: painleve4_exact,
    },
    Builtin {
        name: "painleve4-ordering",
        exercises: "Painlevé IV R2 ordering",
        summary: "R1 and the corrected R2 commute; the printed R2 ordering must not",
        config: painleve4_ordering,
    },
    Builtin {
        name: "painleve4-riccati",
        exercises: "Painlevé IV Riccati reduction",
        summary: "RK4 Riccati solution feeding a Painlevé IV pair",
        config: painleve4_riccati,
    },
    Builtin {
        name: "painleve2-inverse",
        exercises: "Painlevé II symmetries",
        summary: "W = 1/x; linear and quadratic time-dependent symmetries",
        config: painleve2_inverse,
    },
    Builtin {
        name: "fourth-order-linear",
        exercises: "fourth-order constraint",
        summary: "f = x with beta = 8; constraint residual and mapped packet",
        config: fourth_order_linear,
    },
    Builtin {
        name: "reflectionless-nonstat",
        exercises: "§4.1",
        summary: "box plane wave mapped through the corrected nonstationary partner stays one traveling wave",
        config: reflectionless_nonstat,
    },
    Builtin {
        name: "nonstat-norm",
        exercises: "norm identity",
        summary: "V2 = 0 constraints, |q+psi|^2 = |H2 psi|^2 + 1/4, and R2 = H2^2 + 1/4",
        config: nonstat_norm,
    },
    Builtin {
        name: "nonstat-convergence",
        exercises: "stencil order",
        summary: "mapped plane-wave residual under space refinement, declared fourth order",
        config: nonstat_convergence,
    },
    Builtin {
        name: "td-oscillator",
        exercises: "oscillator frame",
        summary: "nonstationary pair carried to rho = cos t; mapped packet",
        config: td_oscillator,
    },
];

pub fn find(name: &str) -> Result<&'static Builtin, CliError> {
    BUILTINS.iter().find(|b| b.name == name).ok_or_else(|| {
        let names: Vec<&str> = BUILTINS.iter().map(|b| b.name).collect();
        CliError::Usage(format!("unknown builtin `{name}`; available: {}", names.join(", ")))
    })
}
