//! Command implementations behind the `prodlab` binary.
//!
//! Each command returns its stdout payload (a single JSON document or plain
//! text), stderr diagnostics, and a process exit code:
//! 0 success/verified, 1 refuted or family/method mismatch, 2 parse error,
//! 3 numeric or budget failure. JSON goes to stdout only; diagnostics go to
//! stderr only.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::conjecture::{conjecture_report, ConjectureError, ConjectureReport, DEFAULT_BLOCKS};
use crate::dsl::{parse, ParsedSpec};
use crate::eval::{
    catalan_block_partial, catalan_limit, wallis_limit_extrapolated, wallis_partial,
    wallis_partial_fractions, ErrorBound, EvalMethod, EvalReport,
};
use crate::gamma::{eq13_closed_form, eq21_eval};
use crate::identity::{verify_claim, Verdict, VerifyOptions};
use crate::model::{builtin, builtin_closed_form, Product, BUILTIN_IDS};
use crate::numerics::{rat, ConstExpr, PrecisionReal, Rational};

/// Common run settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Evaluation precision in bits (at least 8).
    pub precision: usize,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 128,
            format: OutputFormat::Json,
        }
    }
}

/// Result of one command invocation.
#[derive(Debug, Clone)]
pub struct CmdOutcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl CmdOutcome {
    fn ok(stdout: String) -> Self {
        CmdOutcome {
            stdout,
            stderr: String::new(),
            exit_code: 0,
        }
    }

    fn fail(code: i32, message: String) -> Self {
        CmdOutcome {
            stdout: String::new(),
            stderr: message,
            exit_code: code,
        }
    }
}

/// Evaluation method selector for `limit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMethod {
    Gamma,
    Extrapolate,
    Blocks,
}

fn load_source(input: &str) -> Result<String, std::io::Error> {
    let path = Path::new(input);
    if path.is_file() {
        std::fs::read_to_string(path)
    } else {
        Ok(input.to_string())
    }
}

fn parse_input(input: &str) -> Result<ParsedSpec, CmdOutcome> {
    let source = match load_source(input) {
        Ok(s) => s,
        Err(e) => return Err(CmdOutcome::fail(2, format!("cannot read {input}: {e}\n"))),
    };
    parse(&source).map_err(|e| CmdOutcome::fail(2, format!("parse error: {e}\n")))
}

fn rational_decimal(r: &Rational, p: usize) -> String {
    PrecisionReal::from_rational(r, p).decimal()
}

fn bound_field(bound: &ErrorBound) -> Value {
    match bound {
        ErrorBound::Bound(b) => Value::String(b.to_decimal(6)),
        ErrorBound::Heuristic => Value::String("heuristic".into()),
    }
}

fn emit(config: &RunConfig, doc: Value, text: String) -> CmdOutcome {
    match config.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
            s.push('\n');
            CmdOutcome::ok(s)
        }
        OutputFormat::Text => CmdOutcome::ok(text),
    }
}

fn report_fields(report: &EvalReport) -> (Value, String) {
    let doc = json!({
        "value_decimal": report.value.decimal(),
        "method": report.method.name(),
        "terms_or_blocks_used": report.terms_or_blocks_used,
        "error_bound": bound_field(&report.error_bound),
    });
    let mut text = String::new();
    let _ = writeln!(text, "value: {}", report.value.decimal());
    let _ = writeln!(text, "method: {}", report.method.name());
    let _ = writeln!(text, "terms/blocks: {}", report.terms_or_blocks_used);
    let _ = writeln!(
        text,
        "error bound: {}",
        match &report.error_bound {
            ErrorBound::Bound(b) => b.to_decimal(6),
            ErrorBound::Heuristic => "heuristic".into(),
        }
    );
    (doc, text)
}

/// `prodlab eval <spec>`: exact rational partials for Wallis-type specs,
/// block partials for Catalan-type ones.
pub fn cmd_eval(
    spec: &str,
    periods: Option<u64>,
    blocks: Option<u64>,
    fractions: Option<u64>,
    config: &RunConfig,
) -> CmdOutcome {
    let parsed = match parse_input(spec) {
        Ok(p) => p,
        Err(out) => return out,
    };
    match parsed {
        ParsedSpec::Claim(_) => CmdOutcome::fail(2, "eval expects a product, not a claim\n".into()),
        ParsedSpec::Wallis(w) => {
            if blocks.is_some() {
                return CmdOutcome::fail(
                    1,
                    "a block count applies to block products; use --periods or --fractions here\n".into(),
                );
            }
            let value = match (periods, fractions) {
                (_, Some(m)) => wallis_partial_fractions(&w, m),
                (Some(n), None) => wallis_partial(&w, n),
                (None, None) => wallis_partial(&w, 8),
            };
            let decimal = rational_decimal(&value, config.precision);
            let doc = json!({
                "rational": format!("{}/{}", value.numer(), value.denom()),
                "value_decimal": decimal,
                "method": EvalMethod::ExactPartial.name(),
            });
            let text = format!(
                "rational: {}/{}\nvalue: {}\nmethod: {}\n",
                value.numer(),
                value.denom(),
                decimal,
                EvalMethod::ExactPartial.name()
            );
            emit(config, doc, text)
        }
        ParsedSpec::Catalan(c) => {
            if periods.is_some() || fractions.is_some() {
                return CmdOutcome::fail(
                    1,
                    "period and fraction counts apply to periodic products; use --blocks here\n".into(),
                );
            }
            let report = catalan_block_partial(&c, blocks.unwrap_or(8), config.precision);
            let (doc, text) = report_fields(&report);
            emit(config, doc, text)
        }
    }
}

fn find_builtin_id(product: &Product) -> Option<u32> {
    BUILTIN_IDS
        .into_iter()
        .find(|&id| builtin(id).as_ref() == Ok(product))
}

/// Closed form attached to gamma-method limits: catalog forms for catalog
/// structures, the general sine form for the two-residue general family.
fn known_closed_form(w: &crate::model::WallisProduct) -> Option<ConstExpr> {
    let product = Product::Wallis(w.clone());
    if let Some(id) = find_builtin_id(&product) {
        return builtin_closed_form(id);
    }
    let k = w.period();
    if k >= 2 && w.num_residues() == [k, k] && w.den_residues() == [k - 1, k + 1] {
        return Some(eq13_closed_form(k));
    }
    None
}

/// `prodlab limit <spec> --method <gamma|extrapolate|blocks>`.
pub fn cmd_limit(
    spec: &str,
    method: LimitMethod,
    periods: Option<u64>,
    tol: Option<Rational>,
    config: &RunConfig,
) -> CmdOutcome {
    let parsed = match parse_input(spec) {
        Ok(p) => p,
        Err(out) => return out,
    };
    let p = config.precision;
    match (parsed, method) {
        (ParsedSpec::Claim(_), _) => CmdOutcome::fail(2, "limit expects a product, not a claim\n".into()),
        (ParsedSpec::Wallis(w), LimitMethod::Gamma) => {
            let value = match eq21_eval(&w, p) {
                Ok(v) => v,
                Err(e) => return CmdOutcome::fail(3, format!("{e}\n")),
            };
            let bound = PrecisionReal::from_bigfloat_rounded(value.abs_error_bound(), p);
            let closed = known_closed_form(&w);
            let mut doc = json!({
                "value_decimal": value.decimal(),
                "method": EvalMethod::Gamma.name(),
                "error_bound": bound.to_decimal(6),
            });
            let mut text = format!(
                "value: {}\nmethod: {}\nerror bound: {}\n",
                value.decimal(),
                EvalMethod::Gamma.name(),
                bound.to_decimal(6)
            );
            if let Some(expr) = closed {
                doc["closed_form"] = Value::String(expr.render());
                let _ = writeln!(text, "closed form: {}", expr.render());
            }
            emit(config, doc, text)
        }
        (ParsedSpec::Wallis(w), LimitMethod::Extrapolate) => {
            match wallis_limit_extrapolated(&w, periods.unwrap_or(1 << 14), 3, p) {
                Ok(report) => {
                    let (doc, text) = report_fields(&report);
                    emit(config, doc, text)
                }
                Err(e) => CmdOutcome::fail(3, format!("{e}\n")),
            }
        }
        (ParsedSpec::Wallis(_), LimitMethod::Blocks) => CmdOutcome::fail(
            1,
            "the blocks method applies to block products; use gamma or extrapolate\n".into(),
        ),
        (ParsedSpec::Catalan(c), LimitMethod::Blocks) => {
            let tol = tol.unwrap_or_else(|| rat(1, 10).pow(10));
            match catalan_limit(&c, &tol, p) {
                Ok(report) => {
                    let (doc, text) = report_fields(&report);
                    emit(config, doc, text)
                }
                Err(e) => CmdOutcome::fail(3, format!("{e}\n")),
            }
        }
        (ParsedSpec::Catalan(_), _) => CmdOutcome::fail(
            1,
            "gamma and extrapolate apply to periodic products; use --method blocks\n".into(),
        ),
    }
}

/// `prodlab verify <claim-file-or-inline>`.
pub fn cmd_verify(claim: &str, tol: Option<Rational>, config: &RunConfig) -> CmdOutcome {
    let parsed = match parse_input(claim) {
        Ok(p) => p,
        Err(out) => return out,
    };
    let ParsedSpec::Claim(claim) = parsed else {
        return CmdOutcome::fail(2, "verify expects a claim specification\n".into());
    };
    let opts = VerifyOptions {
        tolerance: tol.unwrap_or_else(|| rat(1, 10).pow(10)),
        precision: config.precision,
        ..VerifyOptions::default()
    };
    let verdict = match verify_claim(&claim, &opts) {
        Ok(v) => v,
        Err(e) => return CmdOutcome::fail(1, format!("{e}\n")),
    };
    let mut doc = json!({ "verdict": verdict.kind_name() });
    let mut text = format!("verdict: {}\n", verdict.kind_name());
    match &verdict {
        Verdict::StructuralEqual { residual } => {
            doc["residual"] = Value::String(residual.to_string());
            let _ = writeln!(text, "residual: {residual}");
        }
        Verdict::NumericEqual { tolerance } => {
            doc["tolerance"] = Value::String(tolerance.to_string());
            let _ = writeln!(text, "tolerance: {tolerance}");
        }
        Verdict::Refuted { witness } => {
            doc["witness"] = Value::String(witness.clone());
            let _ = writeln!(text, "witness: {witness}");
        }
        Verdict::Inconclusive { reason } => {
            doc["reason"] = Value::String(reason.clone());
            let _ = writeln!(text, "reason: {reason}");
        }
    }
    let out = emit(config, doc, text);
    CmdOutcome {
        exit_code: if verdict.verified() { 0 } else { 1 },
        ..out
    }
}

fn conjecture_doc(report: &ConjectureReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let candidates: Vec<Value> = row
                .candidates
                .iter()
                .map(|c| {
                    json!({
                        "expr": c.expr().render(),
                        "x": c.x.to_string(),
                        "y": c.y.to_string(),
                        "r": c.r.to_string(),
                        "residual": c.residual.to_decimal(6),
                    })
                })
                .collect();
            json!({
                "k": row.base,
                "value_decimal": row.estimate.decimal(),
                "error_bound": row.tail_bound.to_decimal(6),
                "blocks": row.blocks_used,
                "conjectural": row.conjectural,
                "recognition_threshold": row.recognition_threshold.to_string(),
                "candidates": candidates,
            })
        })
        .collect();
    let trend = report.trend.as_ref().map(|t| {
        json!({
            "x_rule": t.x_rule.clone(),
            "y_rule": t.y_rule.clone(),
            "conjectural": true,
        })
    });
    json!({
        "precision_bits": report.precision_bits,
        "rows": rows,
        "trend": trend,
    })
}

fn conjecture_text(report: &ConjectureReport) -> String {
    let mut text = String::new();
    for row in &report.rows {
        let _ = writeln!(
            text,
            "K={}: value {} (tail bound {}, {} blocks){}",
            row.base,
            row.estimate.decimal(),
            row.tail_bound.to_decimal(6),
            row.blocks_used,
            if row.conjectural { " [conjectural]" } else { "" }
        );
        match row.candidates.first() {
            Some(c) => {
                let _ = writeln!(
                    text,
                    "  best candidate: {} (residual {})",
                    c.expr().render(),
                    c.residual.to_decimal(6)
                );
            }
            None => {
                let _ = writeln!(text, "  no closed-form candidate within threshold");
            }
        }
    }
    if let Some(t) = &report.trend {
        let _ = writeln!(
            text,
            "trend (conjectural): x(K) = {}, y(K) = {}",
            t.x_rule.as_deref().unwrap_or("?"),
            t.y_rule.as_deref().unwrap_or("?")
        );
    }
    text
}

/// `prodlab conjecture --k A..B`.
pub fn cmd_conjecture(bases: &[u64], blocks: Option<u64>, config: &RunConfig) -> CmdOutcome {
    if bases.is_empty() || bases.iter().any(|&k| k < 2) {
        return CmdOutcome::fail(2, "the base range needs values of at least 2\n".into());
    }
    match conjecture_report(bases, blocks.unwrap_or(DEFAULT_BLOCKS), config.precision) {
        Ok(report) => emit(config, conjecture_doc(&report), conjecture_text(&report)),
        Err(e @ ConjectureError::BudgetExceeded { .. }) => CmdOutcome::fail(3, format!("{e}\n")),
        Err(e) => CmdOutcome::fail(3, format!("{e}\n")),
    }
}

/// Parse `--k` arguments: a single base (`4`) or an inclusive range (`2..5`).
pub fn parse_base_range(s: &str) -> Option<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().ok()?;
        let b: u64 = b.trim().parse().ok()?;
        if a > b {
            return None;
        }
        Some((a..=b).collect())
    } else {
        let k: u64 = s.trim().parse().ok()?;
        Some(vec![k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn eval_exact_partial() {
        let out = cmd_eval("paper(1)", Some(3), None, None, &cfg());
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["rational"], "256/175");
        assert!(doc["value_decimal"].as_str().unwrap().starts_with("1.4628571428"));
        let out = cmd_eval("paper(1)", Some(0), None, None, &cfg());
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["rational"], "1/1");
    }

    #[test]
    fn eval_block_partial() {
        let out = cmd_eval("paper(18)", None, Some(1), None, &cfg());
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        // (3/2)^(1/3)
        assert!(doc["value_decimal"].as_str().unwrap().starts_with("1.144714242553331867"));
        assert_eq!(doc["method"], "block-sum");
    }

    #[test]
    fn eval_mismatched_flags() {
        assert_eq!(cmd_eval("paper(1)", None, Some(3), None, &cfg()).exit_code, 1);
        assert_eq!(cmd_eval("paper(18)", Some(3), None, None, &cfg()).exit_code, 1);
        assert_eq!(cmd_eval("paper(99)", Some(3), None, None, &cfg()).exit_code, 2);
    }

    #[test]
    fn limit_gamma_reports_closed_forms() {
        let out = cmd_limit("wallis_general(3)", LimitMethod::Gamma, None, None, &cfg());
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["closed_form"], "2*pi/(3*sqrt(3))");
        assert!(doc["value_decimal"].as_str().unwrap().starts_with("1.2091995761"));

        let out = cmd_limit("paper(9)", LimitMethod::Gamma, None, None, &cfg());
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["closed_form"], "sqrt(2-sqrt(2))");
        assert!(doc["value_decimal"].as_str().unwrap().starts_with("0.7653668647"));
    }

    #[test]
    fn limit_blocks_and_mismatches() {
        let out = cmd_limit(
            "paper(5)",
            LimitMethod::Blocks,
            None,
            Some(rat(1, 100_000)),
            &cfg(),
        );
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(doc["value_decimal"].as_str().unwrap().starts_with("1.35914"));
        assert_eq!(cmd_limit("paper(5)", LimitMethod::Gamma, None, None, &cfg()).exit_code, 1);
        assert_eq!(cmd_limit("paper(1)", LimitMethod::Blocks, None, None, &cfg()).exit_code, 1);
    }

    #[test]
    fn verify_exit_codes() {
        let out = cmd_verify("claim{lhs=paper(1); rhs=paper(6)*paper(7)}", None, &cfg());
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["verdict"], "structural");

        let out = cmd_verify("claim{lhs=paper(1); rhs=paper(6)*paper(6)}", None, &cfg());
        assert_eq!(out.exit_code, 1);
        let out = cmd_verify("claim{lhs=paper(1); rhs=}", None, &cfg());
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn conjecture_budget() {
        let out = cmd_conjecture(&[100], None, &cfg());
        assert_eq!(out.exit_code, 3);
        assert!(out.stderr.contains("budget"));
    }

    #[test]
    fn base_range_parsing() {
        assert_eq!(parse_base_range("2..5"), Some(vec![2, 3, 4, 5]));
        assert_eq!(parse_base_range("7"), Some(vec![7]));
        assert_eq!(parse_base_range("5..2"), None);
        assert_eq!(parse_base_range("x"), None);
    }

    #[test]
    fn output_is_deterministic() {
        let a = cmd_limit("paper(9)", LimitMethod::Gamma, None, None, &cfg());
        let b = cmd_limit("paper(9)", LimitMethod::Gamma, None, None, &cfg());
        assert_eq!(a.stdout, b.stdout);
    }

    #[test]
    fn text_format() {
        let mut config = cfg();
        config.format = OutputFormat::Text;
        let out = cmd_eval("paper(1)", Some(3), None, None, &config);
        assert!(out.stdout.contains("rational: 256/175"));
    }
}
