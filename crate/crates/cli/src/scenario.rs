//! Scenario file parser.
//!
//! Scenarios are sectioned key-value text. `[section]` headers open a
//! section, `key = value` lines fill it, `#` starts a comment anywhere,
//! and blank lines are ignored. Lists are comma-separated; the
//! `[preference]` section is special in holding bare comma-separated
//! matrix rows, one per line. Unknown sections and keys are errors so
//! typos surface instead of silently dropping settings.

use std::fmt;

/// Parse failure with the 1-based line it occurred on (0 for file-level
/// problems).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "scenario: {}", self.message)
        } else {
            write!(f, "scenario line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ScenarioError {}

fn err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilitySection {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketSection {
    pub expected_market_return: f64,
    pub risk_free_rate: f64,
    pub market_stdev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySection {
    pub labels: Vec<String>,
    pub degrees: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSection {
    pub x0: f64,
    pub horizon: f64,
    /// Defaults to horizon / 1000 when absent.
    pub step: Option<f64>,
}

/// Optional numeric policies; every field has a library default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tolerances {
    pub class_b_tie: Option<f64>,
    pub entropy_scale_k: Option<f64>,
    pub entropy_log_base: Option<f64>,
    /// Metric orders to report beyond the standard {1, 2}.
    pub metric_orders: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub utility: Option<UtilitySection>,
    pub market: Option<MarketSection>,
    pub fuzzy: Option<FuzzySection>,
    pub preference: Option<Vec<Vec<f64>>>,
    pub control: Option<ControlSection>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Utility,
    Market,
    Fuzzy,
    Preference,
    Control,
    Tolerances,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Utility => "utility",
            Section::Market => "market",
            Section::Fuzzy => "fuzzy",
            Section::Preference => "preference",
            Section::Control => "control",
            Section::Tolerances => "tolerances",
        }
    }
}

/// Raw per-section key-value store while parsing; sections are
/// finalized once the whole file is read.
#[derive(Default)]
struct Builder {
    utility_a: Option<f64>,
    utility_b: Option<f64>,
    market_return: Option<f64>,
    market_rf: Option<f64>,
    market_stdev: Option<f64>,
    fuzzy_labels: Option<Vec<String>>,
    fuzzy_degrees: Option<Vec<f64>>,
    preference_rows: Vec<Vec<f64>>,
    control_x0: Option<f64>,
    control_horizon: Option<f64>,
    control_step: Option<f64>,
    tolerances: Tolerances,
    seen: Vec<Section>,
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("cannot parse {key} value {value:?} as a number")))
}

fn parse_number_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ScenarioError> {
    value
        .split(',')
        .map(|item| parse_number(line, key, item.trim()))
        .collect()
}

fn set<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ScenarioError> {
    if slot.is_some() {
        return Err(err(line, format!("duplicate key {key}")));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut b = Builder::default();
    let mut current: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, format!("malformed section header {line:?}")))?
                .trim();
            let section = match name {
                "utility" => Section::Utility,
                "market" => Section::Market,
                "fuzzy" => Section::Fuzzy,
                "preference" => Section::Preference,
                "control" => Section::Control,
                "tolerances" => Section::Tolerances,
                other => return Err(err(line_no, format!("unknown section [{other}]"))),
            };
            if b.seen.contains(&section) {
                return Err(err(line_no, format!("duplicate section [{}]", section.name())));
            }
            b.seen.push(section);
            current = Some(section);
            continue;
        }

        let section = current
            .ok_or_else(|| err(line_no, "data before any [section] header".to_string()))?;

        if section == Section::Preference {
            if line.contains('=') {
                return Err(err(
                    line_no,
                    "preference rows are bare comma-separated numbers, not key = value pairs",
                ));
            }
            b.preference_rows
                .push(parse_number_list(line_no, "matrix row", line)?);
            continue;
        }

        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected key = value, got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(err(line_no, format!("key {key} has no value")));
        }

        match (section, key) {
            (Section::Utility, "a") => {
                set(&mut b.utility_a, parse_number(line_no, key, value)?, line_no, key)?
            }
            (Section::Utility, "b") => {
                set(&mut b.utility_b, parse_number(line_no, key, value)?, line_no, key)?
            }
            (Section::Market, "expected_market_return") => set(
                &mut b.market_return,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Market, "risk_free_rate") => set(
                &mut b.market_rf,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Market, "market_stdev") => set(
                &mut b.market_stdev,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Fuzzy, "labels") => {
                let labels: Vec<String> =
                    value.split(',').map(|l| l.trim().to_string()).collect();
                if labels.iter().any(String::is_empty) {
                    return Err(err(line_no, "labels must be non-empty"));
                }
                set(&mut b.fuzzy_labels, labels, line_no, key)?
            }
            (Section::Fuzzy, "degrees") => set(
                &mut b.fuzzy_degrees,
                parse_number_list(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Control, "x0") => {
                set(&mut b.control_x0, parse_number(line_no, key, value)?, line_no, key)?
            }
            (Section::Control, "horizon") => set(
                &mut b.control_horizon,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Control, "step") => set(
                &mut b.control_step,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Tolerances, "class_b_tie") => set(
                &mut b.tolerances.class_b_tie,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Tolerances, "entropy_scale_k") => set(
                &mut b.tolerances.entropy_scale_k,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Tolerances, "entropy_log_base") => set(
                &mut b.tolerances.entropy_log_base,
                parse_number(line_no, key, value)?,
                line_no,
                key,
            )?,
            (Section::Tolerances, "metric_orders") => {
                if !b.tolerances.metric_orders.is_empty() {
                    return Err(err(line_no, "duplicate key metric_orders"));
                }
                for item in value.split(',') {
                    let item = item.trim();
                    let rho: u32 = item.parse().map_err(|_| {
                        err(
                            line_no,
                            format!("cannot parse metric order {item:?} as a positive integer"),
                        )
                    })?;
                    b.tolerances.metric_orders.push(rho);
                }
            }
            (section, key) => {
                return Err(err(
                    line_no,
                    format!("unknown key {key} in section [{}]", section.name()),
                ))
            }
        }
    }

    if b.seen.is_empty() {
        return Err(err(0, "no sections found; a scenario needs at least one"));
    }

    let require = |present: bool, section: Section, key: &str| -> Result<(), ScenarioError> {
        if present {
            Ok(())
        } else {
            Err(err(
                0,
                format!("section [{}] is missing key {key}", section.name()),
            ))
        }
    };

    let mut scenario = Scenario {
        tolerances: b.tolerances,
        ..Scenario::default()
    };
    for section in &b.seen {
        match section {
            Section::Utility => {
                require(b.utility_a.is_some(), Section::Utility, "a")?;
                require(b.utility_b.is_some(), Section::Utility, "b")?;
                scenario.utility = Some(UtilitySection {
                    a: b.utility_a.unwrap(),
                    b: b.utility_b.unwrap(),
                });
            }
            Section::Market => {
                require(b.market_return.is_some(), Section::Market, "expected_market_return")?;
                require(b.market_rf.is_some(), Section::Market, "risk_free_rate")?;
                require(b.market_stdev.is_some(), Section::Market, "market_stdev")?;
                scenario.market = Some(MarketSection {
                    expected_market_return: b.market_return.unwrap(),
                    risk_free_rate: b.market_rf.unwrap(),
                    market_stdev: b.market_stdev.unwrap(),
                });
            }
            Section::Fuzzy => {
                require(b.fuzzy_labels.is_some(), Section::Fuzzy, "labels")?;
                require(b.fuzzy_degrees.is_some(), Section::Fuzzy, "degrees")?;
                scenario.fuzzy = Some(FuzzySection {
                    labels: b.fuzzy_labels.take().unwrap(),
                    degrees: b.fuzzy_degrees.take().unwrap(),
                });
            }
            Section::Preference => {
                if b.preference_rows.is_empty() {
                    return Err(err(0, "section [preference] has no matrix rows"));
                }
                scenario.preference = Some(std::mem::take(&mut b.preference_rows));
            }
            Section::Control => {
                require(b.control_x0.is_some(), Section::Control, "x0")?;
                require(b.control_horizon.is_some(), Section::Control, "horizon")?;
                scenario.control = Some(ControlSection {
                    x0: b.control_x0.unwrap(),
                    horizon: b.control_horizon.unwrap(),
                    step: b.control_step,
                });
            }
            Section::Tolerances => {}
        }
    }
    Ok(scenario)
}
