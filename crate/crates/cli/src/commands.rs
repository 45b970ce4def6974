use clap::ValueEnum;
use serde_json::{json, Value};

use rkit::arith::{self, PrimePower, SpfSieve};
use rkit::engine::{
    checkpoints, coeff_closed_with, coeff_gcd_with, evaluate_expansion, mean_value_estimate,
    CoefficientFamily, ExpansionOptions, FamilyKind, Truncation,
};
use rkit::ramanujan::{
    identity_suite, lambda_star_partial_sums, orthogonality_counterexample, ramanujan_sum, SumKind,
};

use crate::args::{
    CheckArgs, CoeffArgs, CoeffMode, Command, EvalArgs, EvalFunction, ExpandArgs, FamilyOpts,
    LambdaStarArgs, MeanValueArgs, RenderArgs, Suite,
};
use crate::report::{int_value, ReportDocument};
use crate::{CliError, Settings};

pub fn run(
    command: &Command,
    settings: &Settings,
    argv: &[String],
) -> Result<ReportDocument, CliError> {
    let name = match command {
        Command::Eval(_) => "eval",
        Command::Coeff(_) => "coeff",
        Command::Expand(_) => "expand",
        Command::Check(_) => "check",
        Command::Meanvalue(_) => "meanvalue",
        Command::LambdaStar(_) => "lambda-star",
        Command::Render(a) => return render(a),
    };
    let mut doc = ReportDocument::new(name, argv);
    match command {
        Command::Eval(a) => eval(a, &mut doc)?,
        Command::Coeff(a) => coeff(a, &mut doc)?,
        Command::Expand(a) => expand(a, settings, &mut doc)?,
        Command::Check(a) => check(a, &mut doc)?,
        Command::Meanvalue(a) => meanvalue(a, &mut doc)?,
        Command::LambdaStar(a) => lambda_star(a, &mut doc)?,
        Command::Render(_) => unreachable!(),
    }
    Ok(doc)
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn log_form(pp: Option<PrimePower>, weighted: bool) -> (Value, Value, String, f64) {
    match pp {
        None => (Value::Null, Value::Null, "0".to_string(), 0.0),
        Some(pp) => {
            let (text, x) = if weighted && pp.e > 1 {
                (format!("{} log {}", pp.e, pp.p), pp.nu_log_p())
            } else if weighted {
                (format!("log {}", pp.p), pp.nu_log_p())
            } else {
                (format!("log {}", pp.p), pp.log_p())
            };
            (json!(pp.p), json!(pp.e), text, x)
        }
    }
}

fn eval(a: &EvalArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    use EvalFunction::*;
    let name = value_name(&a.function);
    doc.param("function", name.as_str());
    match a.function {
        UnitaryGcd | Rsum => {
            let [x, y] = a.args[..] else {
                return Err(CliError::Usage(format!(
                    "{name} takes exactly two arguments"
                )));
            };
            if a.function == Rsum {
                let kind = SumKind::from(a.kind);
                doc.param("kind", kind.to_string());
                doc.row(json!({"q": x, "n": y, "value": int_value(ramanujan_sum(kind, x, y)?)}));
            } else {
                doc.row(json!({"k": x, "n": y, "value": arith::unitary_gcd(x, y)?}));
            }
            return Ok(());
        }
        Sigma | JordanPhi => {
            doc.param("s", a.s.unwrap_or(1));
        }
        Piltz => {
            let m =
                a.m.ok_or_else(|| CliError::Usage("piltz needs --m".to_string()))?;
            doc.param("m", m);
        }
        _ => {}
    }
    for &n in &a.args {
        let value = match a.function {
            Mobius => int_value(arith::mobius(n)?),
            Omega => json!(arith::omega(n)?),
            BigOmega => json!(arith::big_omega(n)?),
            Liouville => int_value(arith::liouville(n)?),
            Phi => int_value(arith::euler_phi(n)?),
            JordanPhi => int_value(arith::jordan_phi(a.s.unwrap_or(1), n)?),
            Sigma => int_value(arith::sigma_s(a.s.unwrap_or(1), n)?),
            Tau => int_value(arith::tau(n)?),
            Piltz => int_value(arith::piltz_tau(a.m.unwrap_or(1), n)?),
            MuStar => int_value(arith::mu_star(n)?),
            SigmaStar => int_value(arith::sigma_star(n)?),
            TauStar => int_value(arith::tau_star(n)?),
            PhiStar => int_value(arith::phi_star(n)?),
            R => int_value(arith::sum_of_two_squares_r(n)?),
            Chi4 => int_value(arith::chi4(n)),
            Divisors => json!(arith::divisors(n)?),
            UnitaryDivisors => json!(arith::unitary_divisors(n)?),
            Mangoldt | MangoldtStar => {
                let star = a.function == MangoldtStar;
                let pp = if star {
                    arith::mangoldt_star(n)?
                } else {
                    arith::mangoldt(n)?
                };
                let (p, e, text, x) = log_form(pp, star);
                doc.row(json!({"n": n, "p": p, "nu": e, "value": text, "numeric": x}));
                continue;
            }
            UnitaryGcd | Rsum => unreachable!(),
        };
        doc.row(json!({"n": n, "value": value}));
    }
    Ok(())
}

fn build_family(opts: &FamilyOpts, k: Option<usize>) -> Result<CoefficientFamily, CliError> {
    let k = opts
        .k
        .or(k)
        .ok_or_else(|| CliError::Usage("--k is required".to_string()))?;
    let kind = FamilyKind::from_name(&opts.family, opts.s, opts.m)?;
    Ok(CoefficientFamily::new(kind, opts.kind.into(), k)?)
}

fn describe_family(doc: &mut ReportDocument, f: &CoefficientFamily, opts: &FamilyOpts) {
    doc.param("family", f.family().to_string())
        .param("kind", f.kind().to_string())
        .param("k", f.k());
    if f.kind() == SumKind::Unitary {
        doc.param("support", value_name(&opts.support));
    }
}

fn coeff(a: &CoeffArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    let f = build_family(&a.family, Some(a.q.len()))?;
    let support = a.family.support.into();
    describe_family(doc, &f, &a.family);
    doc.param("q", a.q.clone())
        .param("mode", value_name(&a.mode));
    let closed = coeff_closed_with(&f, &a.q, support)?;
    let symbolic = closed.symbolic.as_ref().map(|s| s.to_string());
    match a.mode {
        CoeffMode::Closed => {
            doc.row(json!({
                "q": closed.q,
                "lcm": closed.lcm,
                "symbolic": symbolic,
                "value": closed.value,
            }));
        }
        CoeffMode::Series => {
            doc.param("M", a.m_terms);
            let s = coeff_gcd_with(&f, &a.q, a.m_terms, support, None)?;
            let bound = if s.tail_bound.is_some() {
                "rigorous"
            } else {
                "heuristic"
            };
            doc.row(json!({
                "q": s.q,
                "lcm": s.lcm,
                "M": s.m,
                "value": s.value,
                "tail_bound": s.tail_bound,
                "bound": bound,
                "doubling_estimate": s.doubling_estimate,
                "rounding": s.rounding,
                "closed_value": closed.value,
                "symbolic": symbolic,
            }));
        }
    }
    Ok(())
}

fn expand(a: &ExpandArgs, settings: &Settings, doc: &mut ReportDocument) -> Result<(), CliError> {
    let f = build_family(&a.family, Some(a.n.len()))?;
    describe_family(doc, &f, &a.family);
    let mode: Truncation = a.mode.into();
    doc.param("n", a.n.clone())
        .param("qmax", a.qmax)
        .param("mode", mode.to_string());
    let mut opts = ExpansionOptions {
        mode,
        support: a.family.support.into(),
        deterministic: settings.deterministic,
        ..ExpansionOptions::default()
    };
    if let Some(b) = settings.budget {
        opts.budget = b;
    }
    doc.provenance("truncation", mode.to_string())
        .provenance(
            "merge",
            if opts.deterministic {
                "block-order"
            } else {
                "completion-order"
            },
        )
        .provenance("budget", opts.budget.to_string());
    let r = evaluate_expansion(&f, &a.n, a.qmax, &opts)?;
    for c in &r.checkpoints {
        doc.row(json!({
            "q_max": c.q_max,
            "partial": c.partial,
            "lhs": r.lhs,
            "abs_error": (c.partial - r.lhs).abs(),
        }));
    }
    doc.summary("lhs", r.lhs)
        .summary("lhs_exact", r.lhs_exact.map(|v| v.to_string()))
        .summary("partial", r.partial)
        .summary("abs_error", r.abs_error())
        .summary("doubling_estimate", r.doubling_estimate)
        .summary("nonzero_terms", r.nonzero_terms)
        .summary("terms", r.terms.to_string());
    Ok(())
}

fn check(a: &CheckArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    doc.param("suite", value_name(&a.suite));
    match a.suite {
        Suite::RamanujanIdentities => {
            doc.param("max", a.max);
            let report = identity_suite(a.max, a.max)?;
            for r in &report.results {
                doc.row(json!({
                    "identity": r.identity.name(),
                    "checked": r.checked,
                    "failures": r.failures.len(),
                    "first_failure": r.failures.first().map(|&(q, n)| json!({"q": q, "n": n})),
                }));
            }
            doc.summary("failures", report.failure_count());
            if !report.passed() {
                doc.fail();
            }
        }
        Suite::ClosedVsSeries => closed_vs_series(a, doc)?,
        Suite::OrthogonalityCounterexample => {
            doc.param("p", a.p);
            let sum = orthogonality_counterexample(a.p)?;
            let p = a.p as i128;
            let expected = p * p * (p - 1);
            doc.row(json!({
                "p": a.p,
                "sum": int_value(sum),
                "expected": int_value(expected),
            }));
            if sum != expected {
                doc.fail();
            }
        }
    }
    Ok(())
}

fn tuples(k: usize, max: u64) -> Vec<Vec<u64>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (1..=max).map(move |q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect()
    })
}

fn closed_vs_series(a: &CheckArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    use FamilyKind::*;
    if a.qmax == 0 || a.m_terms == 0 {
        return Err(rkit::Error::Domain("--qmax and --M must be >= 1".to_string()).into());
    }
    doc.param("qmax", a.qmax).param("M", a.m_terms);
    doc.provenance("tolerance", "tail bound + rounding bound + 8 eps |closed|");
    let sieve = SpfSieve::new(a.m_terms);
    let families = [
        Sigma { s: 1.0 },
        Sigma { s: 2.0 },
        Tau,
        Phi { s: 1.0 },
        Piltz { m: 3 },
        R,
        Beta { s: 1.0 },
        Psi { s: 1.0 },
        One,
    ];
    let mut outside_total = 0;
    for fk in families {
        for kind in [SumKind::Classical, SumKind::Unitary] {
            for k in 1..=2 {
                let Ok(f) = CoefficientFamily::new(fk, kind, k) else {
                    continue;
                };
                let (mut checked, mut outside, mut heuristic) = (0u64, 0u64, 0u64);
                let mut worst = 0.0f64;
                let mut first = Value::Null;
                for q in tuples(k, a.qmax) {
                    let closed = coeff_closed_with(&f, &q, Default::default())?.value;
                    let s = coeff_gcd_with(&f, &q, a.m_terms, Default::default(), Some(&sieve))?;
                    checked += 1;
                    let Some(tail) = s.tail_bound else {
                        heuristic += 1;
                        continue;
                    };
                    let allowed = tail + s.rounding + 8.0 * f64::EPSILON * closed.abs();
                    let diff = (closed - s.value).abs();
                    if allowed > 0.0 {
                        worst = worst.max(diff / allowed);
                    }
                    if diff > allowed {
                        outside += 1;
                        if first.is_null() {
                            first = json!(q);
                        }
                    }
                }
                outside_total += outside;
                doc.row(json!({
                    "family": f.family().to_string(),
                    "kind": kind.to_string(),
                    "k": k,
                    "checked": checked,
                    "outside": outside,
                    "no_bound": heuristic,
                    "max_ratio": worst,
                    "first_outside": first,
                }));
            }
        }
    }
    doc.summary("outside", outside_total);
    if outside_total > 0 {
        doc.fail();
    }
    Ok(())
}

fn meanvalue(a: &MeanValueArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    let f = build_family(&a.family, None)?;
    describe_family(doc, &f, &a.family);
    for &x in &a.x {
        let r = mean_value_estimate(&f, x)?;
        doc.row(json!({
            "x": r.x,
            "estimate": r.estimate,
            "target": r.target,
            "relative_error": r.relative_error(),
        }));
    }
    Ok(())
}

fn lambda_star(a: &LambdaStarArgs, doc: &mut ReportDocument) -> Result<(), CliError> {
    doc.param("q", a.q).param("N", a.n.clone());
    doc.provenance("note", "exploratory partial sums; no limit is asserted");
    let cps = match a.n[..] {
        [n] => checkpoints(n),
        _ => a.n.clone(),
    };
    for r in lambda_star_partial_sums(a.q, &cps)? {
        doc.row(json!({
            "N": r.n,
            "unitary_partial": r.unitary_partial,
            "unitary_target": r.unitary_target,
            "unitary_gap": r.unitary_partial - r.unitary_target,
            "classical_partial": r.classical_partial,
            "classical_target": r.classical_target,
            "classical_gap": r.classical_partial - r.classical_target,
        }));
    }
    Ok(())
}

fn render(a: &RenderArgs) -> Result<ReportDocument, CliError> {
    let text = match &a.path {
        Some(path) => std::fs::read_to_string(path)?,
        None => std::io::read_to_string(std::io::stdin())?,
    };
    ReportDocument::parse_json(&text)
}
