//! Subcommand pipelines. Each returns the artifact text; checks that fail
//! still return their artifact alongside the failure.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use ncpii_core::airy::{ContourRule, QuadratureSpec};
use ncpii_core::flow::{compile_rhs, default_t0, identity_report, FlowSpec, JetState};
use ncpii_core::fredholm::{
    default_t_max, log_det_curve, uniform_grid, CouplingMatrix, FredholmSpec,
};
use ncpii_core::laxpair::{
    compatibility_residual_symbolic, lax_coefficients, zero_curvature_numeric,
};
use ncpii_core::lenard::{factorization_residual, hierarchy_residual, lenard};
use ncpii_core::ncalg::{to_json, to_latex, NcPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    AiryArgs, FredholmArgs, LaxArgs, LaxCheck, ReportFormat, SymbolicArgs, SymbolicFormat,
    TableFormat, VerifyArgs,
};
use crate::exit::Failure;

/// Artifact text plus an optional failed check.
pub struct Artifact {
    pub text: String,
    pub failure: Option<Failure>,
}

impl From<String> for Artifact {
    fn from(text: String) -> Self {
        Artifact {
            text,
            failure: None,
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// `# key=value` lines echoing every parameter for CSV artifacts.
fn csv_echo(command: &str, params: &Value) -> String {
    let mut out = format!("# command={command}\n");
    if let Value::Object(map) = params {
        for (k, v) in map {
            let _ = writeln!(out, "# {k}={v}");
        }
    }
    out
}

fn need_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::bad_flags("--n must be at least 1"));
    }
    Ok(())
}

fn read_coupling(path: &Path) -> Result<(CouplingMatrix, Value), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let c = CouplingMatrix::from_json_str(&text)?;
    let echo = serde_json::to_value(c.to_file())?;
    Ok((c, echo))
}

pub fn lenard_cmd(a: &SymbolicArgs) -> Result<Artifact, Failure> {
    let p = lenard(a.n)?;
    let params = json!({ "n": a.n, "format": a.format });
    Ok(match a.format {
        SymbolicFormat::Text => format!("{p}\n"),
        SymbolicFormat::Latex => format!("L_{{{}}}[U] = {}\n", a.n, to_latex(&p)),
        SymbolicFormat::Json => pretty(&json!({
            "command": "lenard",
            "params": params,
            "poly": to_json(&p),
        })),
    }
    .into())
}

pub fn hierarchy_cmd(a: &SymbolicArgs) -> Result<Artifact, Failure> {
    need_n(a.n)?;
    let h = hierarchy_residual(a.n)?;
    let rhs = h.rhs();
    let lhs = NcPoly::w(2 * a.n as u32);
    let params = json!({ "n": a.n, "format": a.format });
    Ok(match a.format {
        SymbolicFormat::Text => format!("{lhs} = {rhs}\n"),
        SymbolicFormat::Latex => format!("{} = {}\n", to_latex(&lhs), to_latex(&rhs)),
        SymbolicFormat::Json => pretty(&json!({
            "command": "hierarchy",
            "params": params,
            "lhs": to_json(&lhs),
            "rhs": to_json(&rhs),
            "residual": to_json(&h.residual),
        })),
    }
    .into())
}

#[derive(Serialize)]
struct CoefficientEntry {
    block: &'static str,
    order: usize,
    text: String,
    poly: Vec<ncpii_core::ncalg::JsonTerm>,
}

#[derive(Serialize)]
struct ResidualEntry {
    equation: String,
    zero: bool,
    residual: Vec<ncpii_core::ncalg::JsonTerm>,
}

#[derive(Serialize)]
struct NumericSample {
    jet: usize,
    lambda: [f64; 2],
    residual: f64,
    scale: f64,
    relative: f64,
}

pub fn lax_cmd(a: &LaxArgs) -> Result<Artifact, Failure> {
    need_n(a.n)?;
    match a.check {
        LaxCheck::Symbolic => lax_symbolic(a),
        LaxCheck::Numeric => lax_numeric(a),
    }
}

fn lax_symbolic(a: &LaxArgs) -> Result<Artifact, Failure> {
    let n = a.n;
    let co = lax_coefficients(n)?;
    let mut coeffs = Vec::new();
    let mut push = |block: &'static str, order: usize, p: &NcPoly| {
        coeffs.push(CoefficientEntry {
            block,
            order,
            text: p.to_string(),
            poly: to_json(p),
        })
    };
    for k in 0..=n {
        let even = 2 * n - 2 * k;
        push("A", even, co.a_at(even));
        if k >= 1 {
            push("G", even, co.g_at(even));
            push("E", even + 1, co.e_at(even + 1));
            push("F", even + 1, co.f_at(even + 1));
        }
    }
    let residuals: Vec<ResidualEntry> = compatibility_residual_symbolic(n)?
        .into_iter()
        .map(|r| ResidualEntry {
            zero: r.residual.is_zero(),
            residual: to_json(&r.residual),
            equation: r.equation,
        })
        .collect();
    let ok = residuals.iter().all(|r| r.zero);
    let text = match a.format {
        ReportFormat::Json => pretty(&json!({
            "command": "lax",
            "params": { "n": n, "check": a.check, "format": a.format },
            "coefficients": coeffs,
            "residuals": residuals,
            "ok": ok,
        })),
        ReportFormat::Text => {
            let mut s = String::new();
            for c in &coeffs {
                let _ = writeln!(s, "{}_{} = {}", c.block, c.order, c.text);
            }
            for r in &residuals {
                let _ = writeln!(
                    s,
                    "{} {}",
                    if r.zero { "zero" } else { "NONZERO" },
                    r.equation
                );
            }
            s
        }
    };
    Ok(Artifact {
        text,
        failure: (!ok).then(|| Failure::check_failed("nonzero compatibility residual")),
    })
}

fn lax_numeric(a: &LaxArgs) -> Result<Artifact, Failure> {
    if a.r == 0 {
        return Err(Failure::bad_flags("--r must be at least 1"));
    }
    let n = a.n;
    let rhs = compile_rhs(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let sigma: Vec<f64> = (0..a.r).map(|k| 0.25 * k as f64).collect();
    let mut samples = Vec::new();
    for jet_index in 0..a.jets {
        let w = (0..2 * n)
            .map(|_| {
                DMatrix::from_fn(a.r, a.r, |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                })
            })
            .collect();
        let state = JetState {
            t: rng.random_range(-1.0..1.0),
            w,
        };
        let jet = rhs.consistent_jet(&state, &sigma)?;
        for _ in 0..a.lambdas {
            let lambda = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let z = zero_curvature_numeric(n, &jet, lambda)?;
            samples.push(NumericSample {
                jet: jet_index,
                lambda: [lambda.re, lambda.im],
                residual: z.residual,
                scale: z.scale,
                relative: z.relative(),
            });
        }
    }
    let worst = samples.iter().map(|s| s.relative).fold(0.0, f64::max);
    let ok = worst < a.tol;
    let text = match a.format {
        ReportFormat::Json => pretty(&json!({
            "command": "lax",
            "params": {
                "n": n, "check": a.check, "format": a.format, "r": a.r, "jets": a.jets,
                "lambdas": a.lambdas, "seed": a.seed, "tol": a.tol, "sigma": sigma,
            },
            "samples": samples,
            "max_relative": worst,
            "ok": ok,
        })),
        ReportFormat::Text => {
            let mut s = String::new();
            for x in &samples {
                let _ = writeln!(
                    s,
                    "jet {} lambda {}{:+}i residual {:e} relative {:e}",
                    x.jet, x.lambda[0], x.lambda[1], x.residual, x.relative
                );
            }
            let _ = writeln!(s, "max relative {worst:e}");
            s
        }
    };
    Ok(Artifact {
        text,
        failure: (!ok).then(|| {
            Failure::check_failed(format!("relative residual {worst:e} exceeds {:e}", a.tol))
        }),
    })
}

pub fn airy_cmd(a: &AiryArgs) -> Result<Artifact, Failure> {
    need_n(a.n)?;
    if a.nodes == 0 {
        return Err(Failure::bad_flags("--nodes must be at least 1"));
    }
    let xs = uniform_grid(a.x.a, a.x.b, a.x.step);
    let spec = QuadratureSpec {
        nodes_per_panel: a.nodes,
        ..QuadratureSpec::default()
    };
    let top = a.deriv.max(2 * a.n);
    let rule = ContourRule::new(a.n, top, a.x.a, a.x.b, &spec)?;
    let sign = if a.n % 2 == 1 { 1.0 } else { -1.0 };
    let rows: Vec<(f64, f64, f64)> = xs
        .iter()
        .map(|&x| {
            let ode = (rule.eval(2 * a.n, x) - sign * x * rule.eval(0, x)).abs();
            (x, rule.eval(a.deriv, x), ode)
        })
        .collect();
    let params = json!({
        "n": a.n, "deriv": a.deriv, "x": a.x.to_string(), "nodes": a.nodes,
        "truncation": spec.truncation, "vertex_height": rule.contour.h,
    });
    Ok(match a.out {
        TableFormat::Csv => {
            let mut s = csv_echo("airy", &params);
            s.push_str("x,value,ode_residual\n");
            for (x, v, r) in rows {
                let _ = writeln!(s, "{x},{v:e},{r:e}");
            }
            s
        }
        TableFormat::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(x, v, r)| json!({ "x": x, "value": v, "ode_residual": r }))
                .collect();
            pretty(&json!({ "command": "airy", "params": params, "rows": rows }))
        }
    }
    .into())
}

fn fredholm_spec(n: usize, m: usize, t_max: Option<f64>, estimate: bool) -> FredholmSpec {
    FredholmSpec {
        t_max: Some(t_max.unwrap_or_else(|| default_t_max(n))),
        m,
        estimate_error: estimate,
        ..FredholmSpec::default()
    }
}

pub fn fredholm_cmd(a: &FredholmArgs) -> Result<Artifact, Failure> {
    need_n(a.n)?;
    if a.m == 0 {
        return Err(Failure::bad_flags("--m must be at least 1"));
    }
    let (coupling, echo) = read_coupling(&a.coupling)?;
    let spec = fredholm_spec(a.n, a.m, a.t_max, a.estimate_error);
    let grid = uniform_grid(a.t.a, a.t.b, a.t.step);
    let curve = log_det_curve(a.n, &coupling, &grid, &spec)?;
    let params = json!({
        "n": a.n, "coupling_file": a.coupling.display().to_string(), "coupling": echo,
        "t": a.t.to_string(), "m": a.m, "t_max": spec.t_max, "estimate_error": a.estimate_error,
        "truncation_threshold": spec.truncation_threshold,
    });
    Ok(match a.out {
        TableFormat::Csv => {
            let mut s = csv_echo("fredholm", &params);
            s.push_str("t,F,lnF,err_estimate\n");
            for p in &curve {
                let err = p.err_estimate.map(|e| format!("{e:e}")).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{err}", p.t, p.f, p.ln_f);
            }
            s
        }
        TableFormat::Json => {
            pretty(&json!({ "command": "fredholm", "params": params, "curve": curve }))
        }
    }
    .into())
}

pub fn verify_cmd(a: &VerifyArgs) -> Result<Artifact, Failure> {
    need_n(a.n)?;
    if a.m == 0 || !(a.dt > 0.0) {
        return Err(Failure::bad_flags("--m and --dt must be positive"));
    }
    let (coupling, echo) = read_coupling(&a.coupling)?;
    let flow = FlowSpec {
        t0: Some(a.t0.unwrap_or_else(|| default_t0(a.n))),
        dt: a.dt,
        ..FlowSpec::default()
    };
    let det = fredholm_spec(a.n, a.m, a.t_max, false);
    let report = identity_report(a.n, &coupling, a.t.a, a.t.b, a.t.step, &flow, &det)?;
    let params = json!({
        "n": a.n, "coupling_file": a.coupling.display().to_string(), "coupling": echo,
        "t": a.t.to_string(), "fd_step": a.t.step, "t0": flow.t0, "m": a.m, "t_max": det.t_max,
        "dt": a.dt, "rtol": flow.rtol, "atol": flow.atol, "tol": a.tol,
    });
    let ok = report.max_residual < a.tol;
    let text = match a.report {
        TableFormat::Json => pretty(&json!({
            "command": "verify-identity",
            "params": params,
            "report": report,
            "ok": ok,
        })),
        TableFormat::Csv => {
            let mut s = csv_echo("verify-identity", &params);
            let _ = writeln!(s, "# max_residual={:e}", report.max_residual);
            let _ = writeln!(s, "# max_error_estimate={:e}", report.max_error_estimate);
            s.push_str("t,minus_tr_w2,d2_ln_f,residual\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{:e}",
                    r.t, r.minus_tr_w2, r.d2_ln_f, r.residual
                );
            }
            s
        }
    };
    Ok(Artifact {
        text,
        failure: (!ok).then(|| {
            Failure::check_failed(format!(
                "identity residual {:e} exceeds {:e}",
                report.max_residual, a.tol
            ))
        }),
    })
}

const LENARD_TEXT: [&str; 4] = [
    "1/2 I",
    "U",
    "U_2S + 3 U U",
    "U_4S + 5 U U_2S + 5 U_2S U + 5 U_S U_S + 10 U U U",
];

const MEMBER_RESIDUALS: [&str; 3] = [
    "W_2S - 4 S W - 4 W S - 2 W W W",
    "W_4S + 16 S W + 16 W S - 4 W W W_2S - 2 W W_2S W - 2 W W_S W_S - 4 W_2S W W - 6 W_S W W_S \
     - 2 W_S W_S W + 6 W W W W W",
    "W_6S - 64 S W - 64 W S - 6 W W W_4S - 11 W W_2S W_2S - 4 W W_3S W_S - 2 W W_4S W \
     - 9 W W_S W_3S - 20 W_2S W W_2S - 11 W_2S W_2S W - 25 W_2S W_S W_S - 15 W_3S W W_S \
     - 9 W_3S W_S W - 6 W_4S W W - 15 W_S W W_3S - 20 W_S W_2S W_S - 4 W_S W_3S W \
     - 25 W_S W_S W_2S + 15 W W W W W_2S + 10 W W W W_2S W + 10 W W W W_S W_S \
     + 20 W W W_2S W W + 25 W W W_S W W_S + 15 W W W_S W_S W + 10 W W_2S W W W \
     + 5 W W_S W W W_S + 10 W W_S W W_S W + 15 W W_S W_S W W + 15 W_2S W W W W \
     + 20 W_S W W W W_S + 5 W_S W W W_S W + 25 W_S W W_S W W + 10 W_S W_S W W W \
     - 20 W W W W W W W",
];

pub fn selftest_cmd() -> Result<Artifact, Failure> {
    let mut lines = Vec::new();
    let mut failed = 0;
    let mut check = |name: String, ok: bool| {
        if !ok {
            failed += 1;
        }
        lines.push(format!("{} {name}", if ok { "PASS" } else { "FAIL" }));
    };
    for (n, want) in LENARD_TEXT.iter().enumerate() {
        check(format!("lenard n={n}"), lenard(n)?.to_string() == *want);
    }
    for (k, want) in MEMBER_RESIDUALS.iter().enumerate() {
        let h = hierarchy_residual(k + 1)?;
        check(
            format!("hierarchy n={}", k + 1),
            h.residual.to_string() == *want,
        );
    }
    for n in 0..=3 {
        check(
            format!("factorization n={n}"),
            factorization_residual(n)?.is_zero(),
        );
    }
    for n in 1..=3 {
        let all = compatibility_residual_symbolic(n)?
            .iter()
            .all(|r| r.residual.is_zero());
        check(format!("lax compatibility n={n}"), all);
    }
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Artifact {
        text,
        failure: (failed > 0)
            .then(|| Failure::check_failed(format!("{failed} golden checks failed"))),
    })
}
