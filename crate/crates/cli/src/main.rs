//! fundalloc: scenario-driven CLI over the allocation, classification,
//! fuzziness, and trajectory solvers.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 validation failure
//! (a structurally sound preference matrix that breaks reciprocity).

mod format;
mod scenario;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fundalloc::capm::MarketParams;
use fundalloc::control::{performance_index, ControlProblem};
use fundalloc::fuzziness::{
    fuzz_entropy, fuzz_metric, hamming_distance, minkowski_distance, EntropyConfig, MetricOrder,
};
use fundalloc::fuzzy::{FuzzySubset, PreferenceRelation, PreferenceViolation};
use fundalloc::utility::{
    bordered_hessian, classify, solve_allocation, QuadraticUtilityParams, CLASS_B_TIE_TOL,
};

use format::{format_sig, round_sig};
use scenario::{parse_scenario, Scenario};

#[derive(Parser)]
#[command(
    name = "fundalloc",
    version,
    about = "Fund allocation between a market portfolio and a risk-free asset: \
             classification, fuzzy risk profiles, and allocation trajectories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the scenario file
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<PathBuf>,

    /// Emit one machine-readable JSON record instead of the human report
    #[arg(long, global = true)]
    machine: bool,

    /// Significant digits for numeric output (1-17)
    #[arg(long, global = true, default_value_t = 6, value_name = "N")]
    digits: u8,

    /// Write the primary output to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the allocation problem and classify the investor
    Classify,
    /// Profile shape and fuzziness measures of a fuzzy risk profile
    Fuzziness,
    /// Validate the reciprocity of a fuzzy preference matrix
    PreferenceCheck,
    /// Tabulate the allocation trajectory over time
    Trajectory,
}

struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if !(1..=17).contains(&cli.digits) {
        return Err(usage("--digits must be between 1 and 17"));
    }
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| usage("--scenario <PATH> is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let scenario = parse_scenario(&text).map_err(|e| usage(e.to_string()))?;
    match cli.command {
        Command::Classify => cmd_classify(cli, &scenario),
        Command::Fuzziness => cmd_fuzziness(cli, &scenario),
        Command::PreferenceCheck => cmd_preference_check(cli, &scenario),
        Command::Trajectory => cmd_trajectory(cli, &scenario),
    }
}

/// Writes the primary output to --out when given, standard output
/// otherwise.
fn emit(cli: &Cli, content: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn num(v: f64, digits: u8) -> Value {
    serde_json::Number::from_f64(round_sig(v, digits)).map_or(Value::Null, Value::Number)
}

fn machine_record(entries: Vec<(&str, Value)>) -> String {
    let map: BTreeMap<&str, Value> = entries.into_iter().collect();
    let mut line = serde_json::to_string(&map).expect("a string-keyed map serializes");
    line.push('\n');
    line
}

fn cmd_classify(cli: &Cli, scenario: &Scenario) -> Result<(), Failure> {
    let u = scenario
        .utility
        .ok_or_else(|| usage("scenario has no [utility] section (required by classify)"))?;
    let params = QuadraticUtilityParams::new(u.a, u.b);
    let solution = solve_allocation(&params).map_err(|e| usage(e.to_string()))?;
    let tie_tol = scenario.tolerances.class_b_tie.unwrap_or(CLASS_B_TIE_TOL);
    let class = classify(&solution, tie_tol);
    let hessian = bordered_hessian(&params);
    let market = scenario
        .market
        .map(|m| MarketParams::new(m.expected_market_return, m.risk_free_rate, m.market_stdev))
        .transpose()
        .map_err(|e| usage(e.to_string()))?;

    let d = cli.digits;
    if cli.machine {
        let mut entries = vec![
            ("command", json!("classify")),
            ("a", num(u.a, d)),
            ("b", num(u.b, d)),
            ("x_star", num(solution.x_star, d)),
            ("y_star", num(solution.y_star, d)),
            ("lambda_star", num(solution.lambda_star, d)),
            ("u_star", num(solution.u_star, d)),
            ("bordered_hessian", num(hessian, d)),
            ("is_maximum", json!(solution.flags.is_maximum)),
            ("is_feasible", json!(solution.flags.is_feasible)),
            ("lambda_residual", num(solution.flags.lambda_residual, d)),
            ("class", json!(class.code())),
        ];
        if let Some(m) = &market {
            entries.push((
                "portfolio_expected_return",
                num(m.portfolio_expected_return(&solution), d),
            ));
            entries.push((
                "optimal_portfolio_risk",
                num(m.optimal_portfolio_risk(&solution), d),
            ));
        }
        return emit(cli, &machine_record(entries));
    }

    let mut report = String::new();
    let mut line = |key: &str, value: String| {
        report.push_str(key);
        report.push_str(": ");
        report.push_str(&value);
        report.push('\n');
    };
    line("a", format_sig(u.a, d));
    line("b", format_sig(u.b, d));
    line("x_star", format_sig(solution.x_star, d));
    line("y_star", format_sig(solution.y_star, d));
    line("lambda_star", format_sig(solution.lambda_star, d));
    line("u_star", format_sig(solution.u_star, d));
    line("bordered_hessian", format_sig(hessian, d));
    line("is_maximum", solution.flags.is_maximum.to_string());
    line("is_feasible", solution.flags.is_feasible.to_string());
    line(
        "lambda_residual",
        format_sig(solution.flags.lambda_residual, d),
    );
    line("class", class.code().to_string());
    line("class_description", class.description().to_string());
    if let Some(m) = &market {
        line(
            "portfolio_expected_return",
            format_sig(m.portfolio_expected_return(&solution), d),
        );
        line(
            "optimal_portfolio_risk",
            format_sig(m.optimal_portfolio_risk(&solution), d),
        );
    }
    emit(cli, &report)
}

fn cmd_fuzziness(cli: &Cli, scenario: &Scenario) -> Result<(), Failure> {
    let fz = scenario
        .fuzzy
        .as_ref()
        .ok_or_else(|| usage("scenario has no [fuzzy] section (required by fuzziness)"))?;
    let subset = FuzzySubset::new(fz.labels.clone(), fz.degrees.clone())
        .map_err(|e| usage(e.to_string()))?;
    let height = subset.height().map_err(|e| usage(e.to_string()))?;
    let n = subset.len();

    let tol = &scenario.tolerances;
    let config = match (tol.entropy_scale_k, tol.entropy_log_base) {
        (None, None) => EntropyConfig::normalized(n),
        (k, base) => EntropyConfig::new(k.unwrap_or(1.0 / n as f64), base.unwrap_or(2.0))
            .map_err(|e| usage(e.to_string()))?,
    };

    let mut rhos: Vec<u32> = vec![1, 2];
    rhos.extend(&tol.metric_orders);
    rhos.sort_unstable();
    rhos.dedup();
    let mut orders = Vec::with_capacity(rhos.len());
    for rho in rhos {
        orders.push(MetricOrder::new(rho).map_err(|e| usage(e.to_string()))?);
    }

    let entropy = fuzz_entropy(&subset, config);
    let hamming = hamming_distance(&subset);
    let support = subset.support();

    let d = cli.digits;
    if cli.machine {
        let mut entries = vec![
            ("command", json!("fuzziness")),
            ("labels", json!(subset.labels())),
            (
                "degrees",
                Value::Array(subset.degrees().iter().map(|&v| num(v, d)).collect()),
            ),
            ("height", num(height, d)),
            ("support", json!(support)),
            ("is_normal", json!(subset.is_normal())),
            ("fuzz_entropy", num(entropy, d)),
            ("hamming_distance", num(hamming, d)),
        ];
        let keys: Vec<(String, String, MetricOrder)> = orders
            .iter()
            .map(|&o| {
                (
                    format!("minkowski_rho_{}", o.rho()),
                    format!("fuzz_metric_rho_{}", o.rho()),
                    o,
                )
            })
            .collect();
        for (mk, fk, order) in &keys {
            entries.push((mk.as_str(), num(minkowski_distance(&subset, *order), d)));
            entries.push((fk.as_str(), num(fuzz_metric(&subset, *order), d)));
        }
        return emit(cli, &machine_record(entries));
    }

    let mut report = String::new();
    let mut line = |key: &str, value: String| {
        report.push_str(key);
        report.push_str(": ");
        report.push_str(&value);
        report.push('\n');
    };
    line("labels", subset.labels().join(", "));
    line(
        "degrees",
        subset
            .degrees()
            .iter()
            .map(|&v| format_sig(v, d))
            .collect::<Vec<_>>()
            .join(", "),
    );
    line("height", format_sig(height, d));
    line("support", support.join(", "));
    line("is_normal", subset.is_normal().to_string());
    line("fuzz_entropy", format_sig(entropy, d));
    line("hamming_distance", format_sig(hamming, d));
    for order in &orders {
        line(
            &format!("minkowski_rho_{}", order.rho()),
            format_sig(minkowski_distance(&subset, *order), d),
        );
        line(
            &format!("fuzz_metric_rho_{}", order.rho()),
            format_sig(fuzz_metric(&subset, *order), d),
        );
    }
    emit(cli, &report)
}

fn cmd_preference_check(cli: &Cli, scenario: &Scenario) -> Result<(), Failure> {
    let mu = scenario.preference.as_ref().ok_or_else(|| {
        usage("scenario has no [preference] section (required by preference-check)")
    })?;
    let violations = PreferenceRelation::violations(mu).map_err(|e| usage(e.to_string()))?;
    let valid = violations.is_empty();

    let d = cli.digits;
    if cli.machine {
        let cells: Vec<Value> = violations
            .iter()
            .map(|v| match *v {
                PreferenceViolation::EntryOutOfRange { row, col, value } => json!({
                    "kind": "entry_out_of_range", "row": row, "col": col,
                    "value": num(value, d),
                }),
                PreferenceViolation::DiagonalNotNeutral { index, value } => json!({
                    "kind": "diagonal", "row": index, "col": index,
                    "value": num(value, d),
                }),
                PreferenceViolation::ReciprocityBroken { row, col, sum } => json!({
                    "kind": "reciprocity", "row": row, "col": col,
                    "sum": num(sum, d),
                }),
            })
            .collect();
        emit(
            cli,
            &machine_record(vec![
                ("command", json!("preference-check")),
                ("size", json!(mu.len())),
                ("valid", json!(valid)),
                ("violations", Value::Array(cells)),
            ]),
        )?;
    } else {
        let mut report = String::new();
        report.push_str(&format!("size: {}\n", mu.len()));
        report.push_str(&format!("valid: {valid}\n"));
        if !valid {
            report.push_str(&format!("violations: {}\n", violations.len()));
            for v in &violations {
                let cell = match *v {
                    PreferenceViolation::EntryOutOfRange { row, col, value } => format!(
                        "cell ({row},{col}): entry {} outside [0, 1]",
                        format_sig(value, d)
                    ),
                    PreferenceViolation::DiagonalNotNeutral { index, value } => format!(
                        "cell ({index},{index}): diagonal entry {}, expected 0.5",
                        format_sig(value, d)
                    ),
                    PreferenceViolation::ReciprocityBroken { row, col, sum } => format!(
                        "cell ({row},{col}): entries sum to {}, expected 1",
                        format_sig(sum, d)
                    ),
                };
                report.push_str(&cell);
                report.push('\n');
            }
        }
        emit(cli, &report)?;
    }

    if valid {
        Ok(())
    } else {
        Err(validation(format!(
            "preference relation is invalid ({} violation{} listed)",
            violations.len(),
            if violations.len() == 1 { "" } else { "s" }
        )))
    }
}

fn cmd_trajectory(cli: &Cli, scenario: &Scenario) -> Result<(), Failure> {
    let u = scenario
        .utility
        .ok_or_else(|| usage("scenario has no [utility] section (required by trajectory)"))?;
    let c = scenario
        .control
        .ok_or_else(|| usage("scenario has no [control] section (required by trajectory)"))?;
    let params = QuadraticUtilityParams::new(u.a, u.b);
    let problem = match c.step {
        Some(step) => ControlProblem::new(params, c.x0, c.horizon, step),
        None => ControlProblem::with_default_step(params, c.x0, c.horizon),
    }
    .map_err(|e| usage(e.to_string()))?;
    let integrated = problem
        .integrate_trajectory()
        .map_err(|e| usage(e.to_string()))?;
    let analytic = problem.analytic_trajectory();

    let d = cli.digits;
    let mut table = String::from("t,x,y,x_analytic,abs_error\n");
    for (s, a) in integrated.samples().iter().zip(analytic.samples()) {
        table.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig(s.t, d),
            format_sig(s.x, d),
            format_sig(s.y, d),
            format_sig(a.x, d),
            format_sig((s.x - a.x).abs(), d),
        ));
    }

    let index = performance_index(&params, &integrated).ok();
    let crossing = integrated.first_time_market_fraction_negative();
    let last = integrated.samples().last().expect("grid is never empty");
    let last_analytic = analytic.samples().last().expect("same grid");

    if cli.machine {
        let record = machine_record(vec![
            ("command", json!("trajectory")),
            ("a", num(u.a, d)),
            ("b", num(u.b, d)),
            ("x0", num(problem.x0(), d)),
            ("horizon", num(problem.horizon_t(), d)),
            ("step", num(problem.step(), d)),
            ("samples", json!(integrated.len())),
            ("t_final", num(last.t, d)),
            ("x_final", num(last.x, d)),
            ("x_analytic_final", num(last_analytic.x, d)),
            ("abs_error_final", num((last.x - last_analytic.x).abs(), d)),
            (
                "performance_index",
                index.map_or(Value::Null, |j| num(j, d)),
            ),
            (
                "first_negative_t",
                crossing.map_or(Value::Null, |t| num(t, d)),
            ),
        ]);
        if let Some(path) = &cli.out {
            fs::write(path, &table)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        }
        print!("{record}");
        return Ok(());
    }

    emit(cli, &table)?;
    match index {
        Some(j) => println!("# performance_index: {}", format_sig(j, d)),
        None => println!("# performance_index: unavailable (non-uniform sample spacing)"),
    }
    if let Some(t) = crossing {
        println!("# market fraction first negative at t = {}", format_sig(t, d));
    }
    Ok(())
}
