use pivotal::harness::{default_k_grid, default_p_grid, etalag_scan, run_suite, EtalagScan};
use pivotal::measure::{mean, mean_derivative};
use pivotal::montecarlo::{
    estimate_influence, estimate_mean, estimate_total_influence, SampleEstimate, GENERATOR_ID,
};
use pivotal::pivotal::{
    conditional_stats, correlation_xi, total_influence, ConditionalStats, InfluenceProfile,
};
use pivotal::tail::{exact_tail, hoeffding_bound, HoeffdingVariant};
use pivotal::{BooleanFunction, CheckResult, Relation};
use serde::Serialize;

use crate::input::{Descriptor, Input};
use crate::output::{nums, to_json, Cell, Num, Table, SCHEMA_VERSION, TOOL_VERSION};
use crate::{CliError, Format};

/// Rendered output plus whether every applicable check held.
pub struct Outcome {
    pub text: String,
    pub checks_hold: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            checks_hold: true,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    command: &'static str,
    function: Descriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    blocks: Vec<Block>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<Vec<crate::output::JsonRow<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_checks_hold: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    etalag_scan: Option<ScanBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimates: Option<Vec<crate::output::JsonRow<'a>>>,
}

impl Report<'_> {
    fn new(command: &'static str, function: Descriptor) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "pivotal",
            tool_version: TOOL_VERSION,
            command,
            function,
            seed: None,
            generator: None,
            blocks: Vec::new(),
            checks: None,
            all_checks_hold: None,
            etalag_scan: None,
            estimates: None,
        }
    }
}

#[derive(Serialize)]
struct InfluenceBlock {
    p: Num,
    per_coord: Vec<Num>,
    total: Num,
    sum_of_squares: Num,
    monotone_input: bool,
}

impl From<&InfluenceProfile> for InfluenceBlock {
    fn from(pr: &InfluenceProfile) -> Self {
        InfluenceBlock {
            p: Num(pr.p),
            per_coord: nums(&pr.per_coord),
            total: Num(pr.total),
            sum_of_squares: Num(pr.sum_of_squares()),
            monotone_input: pr.monotone_input,
        }
    }
}

#[derive(Serialize)]
struct ConditionalBlock {
    p: Num,
    prob_one: Num,
    cond_pivotal: Num,
    cond_sn: Num,
    cond_xi: Vec<Num>,
    cond_pivotal_coord: Vec<Num>,
}

impl From<&ConditionalStats> for ConditionalBlock {
    fn from(c: &ConditionalStats) -> Self {
        ConditionalBlock {
            p: Num(c.p),
            prob_one: Num(c.prob_one),
            cond_pivotal: Num(c.cond_pivotal),
            cond_sn: Num(c.cond_sn),
            cond_xi: nums(&c.cond_xi),
            cond_pivotal_coord: nums(&c.cond_pivotal_coord),
        }
    }
}

/// Everything computed at one bias.
#[derive(Serialize)]
struct Block {
    p: Num,
    mean: Num,
    mean_derivative: Option<Num>,
    influence: InfluenceBlock,
    correlation_xi: Option<Vec<Num>>,
    conditional: Option<ConditionalBlock>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ScanRow {
    k: Num,
    rhs: Num,
    passes: bool,
}

/// Report-only; never affects the exit status.
#[derive(Serialize)]
struct ScanBlock {
    p: Num,
    lhs: Num,
    w: Num,
    minimal_k: Option<Num>,
    rows: Vec<ScanRow>,
    notes: String,
}

impl From<EtalagScan> for ScanBlock {
    fn from(s: EtalagScan) -> Self {
        ScanBlock {
            p: Num(0.5),
            lhs: Num(s.lhs),
            w: Num(s.w),
            minimal_k: s.minimal_k.map(Num),
            rows: s
                .rows
                .iter()
                .map(|r| ScanRow {
                    k: Num(r.k),
                    rhs: Num(r.rhs),
                    passes: r.passes,
                })
                .collect(),
            notes: s.notes,
        }
    }
}

fn block(f: &BooleanFunction, p: f64) -> Result<Block, CliError> {
    let mut notes = Vec::new();
    let mut keep = |r: pivotal::Result<f64>, what: &str| match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    };
    let derivative = keep(mean_derivative(f, p), "mean_derivative");
    let correlations: Option<Vec<f64>> = (1..=f.arity())
        .map(|i| correlation_xi(f, i, p))
        .collect::<pivotal::Result<_>>()
        .map_err(|e| notes.push(format!("correlation_xi: {e}")))
        .ok();
    let conditional = conditional_stats(f, p)
        .map_err(|e| notes.push(format!("conditional: {e}")))
        .ok();
    Ok(Block {
        p: Num(p),
        mean: Num(mean(f, p)?),
        mean_derivative: derivative.map(Num),
        influence: InfluenceBlock::from(&total_influence(f, p)?),
        correlation_xi: correlations.as_deref().map(nums),
        conditional: conditional.as_ref().map(ConditionalBlock::from),
        notes,
    })
}

const CHECK_COLUMNS: &[&str] = &[
    "check",
    "p",
    "lhs",
    "rhs",
    "slack",
    "holds",
    "applicable",
    "relation",
    "tolerance",
    "notes",
];

/// Check rows sorted by `(check, p)`.
fn check_table(mut checks: Vec<CheckResult>) -> Table {
    checks.sort_by(|a, b| a.name.cmp(&b.name).then(a.p.total_cmp(&b.p)));
    let mut t = Table::new(CHECK_COLUMNS);
    for c in checks {
        let relation = match c.relation {
            Relation::AtMost => "at_most",
            Relation::Equal => "equal",
        };
        t.push(vec![
            Cell::Text(c.name),
            Cell::Num(c.p),
            Cell::Num(c.lhs),
            Cell::Num(c.rhs),
            Cell::Num(c.slack),
            Cell::Bool(c.holds),
            Cell::Bool(c.applicable),
            Cell::Text(relation.into()),
            Cell::Num(c.tolerance),
            Cell::Text(c.notes),
        ]);
    }
    t
}

fn all_hold(checks: &[CheckResult]) -> bool {
    checks.iter().all(CheckResult::passes)
}

fn scan(f: &BooleanFunction) -> Option<ScanBlock> {
    if f.is_monotone() {
        etalag_scan(f, &default_k_grid()).ok().map(ScanBlock::from)
    } else {
        None
    }
}

pub fn analyze(input: &Input, p: f64, format: Format) -> Result<Outcome, CliError> {
    let f = input.exact()?;
    let checks = run_suite(&f, &[p]);
    let table = check_table(checks.clone());
    match format {
        Format::Csv => Ok(Outcome::ok(table.to_csv()?)),
        Format::Json => {
            let mut report = Report::new("analyze", input.descriptor(Some(&f)));
            report.blocks.push(block(&f, p)?);
            report.checks = Some(table.json_rows());
            report.all_checks_hold = Some(all_hold(&checks));
            report.etalag_scan = scan(&f);
            Ok(Outcome::ok(to_json(&report)?))
        }
    }
}

pub fn check(input: &Input, grid: &[f64], format: Format) -> Result<Outcome, CliError> {
    let f = input.exact()?;
    let checks = run_suite(&f, grid);
    let hold = all_hold(&checks);
    let table = check_table(checks);
    let text = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => {
            let mut report = Report::new("check", input.descriptor(Some(&f)));
            for &p in grid {
                report.blocks.push(block(&f, p)?);
            }
            report.checks = Some(table.json_rows());
            report.all_checks_hold = Some(hold);
            report.etalag_scan = scan(&f);
            to_json(&report)?
        }
    };
    Ok(Outcome {
        text,
        checks_hold: hold,
    })
}

const SWEEP_COLUMNS: &[&str] = &["p", "mean", "mean_derivative", "total_influence"];

pub fn sweep(input: &Input, grid: &[f64], format: Format) -> Result<Outcome, CliError> {
    let f = input.exact()?;
    let mut t = Table::new(SWEEP_COLUMNS);
    for &p in grid {
        t.push(vec![
            Cell::Num(p),
            Cell::Num(mean(&f, p)?),
            Cell::Num(mean_derivative(&f, p)?),
            Cell::Num(total_influence(&f, p)?.total),
        ]);
    }
    render_table(t, "sweep", Some(input.descriptor(Some(&f))), format)
}

const TAIL_COLUMNS: &[&str] = &["u", "exact", "bound_stated", "bound_proved"];

pub fn tail(n: u64, p: f64, us: &[f64], format: Format) -> Result<Outcome, CliError> {
    pivotal::measure::Bias::interior(p)?;
    let mut t = Table::new(TAIL_COLUMNS);
    for &u in us {
        let point = exact_tail(n, p, u)?;
        t.push(vec![
            Cell::Num(u),
            Cell::Num(point.exact),
            Cell::Num(point.bound),
            Cell::Num(hoeffding_bound(n, p, u, HoeffdingVariant::Proved)?),
        ]);
    }
    render_table(t, "tail", None, format)
}

fn render_table(
    t: Table,
    command: &'static str,
    function: Option<Descriptor>,
    format: Format,
) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct TableReport<'a> {
        schema_version: u32,
        tool: &'static str,
        tool_version: &'static str,
        command: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        function: Option<Descriptor>,
        columns: &'static [&'static str],
        rows: Vec<crate::output::JsonRow<'a>>,
    }
    Ok(Outcome::ok(match format {
        Format::Csv => t.to_csv()?,
        Format::Json => to_json(&TableReport {
            schema_version: SCHEMA_VERSION,
            tool: "pivotal",
            tool_version: TOOL_VERSION,
            command,
            function,
            columns: t.columns,
            rows: t.json_rows(),
        })?,
    }))
}

/// What to estimate by sampling.
pub struct Sampling {
    pub p: f64,
    pub m: u64,
    pub delta: f64,
    pub seed: u64,
    pub coord: Option<usize>,
    pub total: bool,
    pub subsample: Option<usize>,
}

const ESTIMATE_COLUMNS: &[&str] = &[
    "quantity",
    "coord",
    "p",
    "mean",
    "half_width",
    "lower",
    "upper",
    "samples",
    "delta",
    "seed",
    "generator",
    "notes",
];

fn estimate_row(quantity: &str, coord: Option<usize>, p: f64, e: SampleEstimate) -> Vec<Cell> {
    let (lower, upper) = e.interval();
    vec![
        Cell::Text(quantity.into()),
        coord.map_or(Cell::Empty, |i| Cell::Int(i as u64)),
        Cell::Num(p),
        Cell::Num(e.mean),
        Cell::Num(e.half_width),
        Cell::Num(lower),
        Cell::Num(upper),
        Cell::Int(e.samples),
        Cell::Num(e.delta),
        Cell::Int(e.seed),
        Cell::Text(e.generator.into()),
        Cell::Text(e.notes),
    ]
}

pub fn estimate(
    input: &Input,
    s: &Sampling,
    command: &'static str,
    format: Format,
) -> Result<Outcome, CliError> {
    let oracle = input.oracle()?;
    let oracle = oracle.as_ref();
    let mut t = Table::new(ESTIMATE_COLUMNS);
    let e = estimate_mean(oracle, s.p, s.m, s.delta, s.seed)?;
    t.push(estimate_row("mean", None, s.p, e));
    if let Some(i) = s.coord {
        let e = estimate_influence(oracle, i, s.p, s.m, s.delta, s.seed)?;
        t.push(estimate_row("influence", Some(i), s.p, e));
    }
    if s.total {
        let e = estimate_total_influence(oracle, s.p, s.m, s.delta, s.seed, s.subsample)?;
        t.push(estimate_row("total_influence", None, s.p, e));
    }
    Ok(Outcome::ok(match format {
        Format::Csv => t.to_csv()?,
        Format::Json => {
            let mut report = Report::new(command, input.descriptor(None));
            report.seed = Some(s.seed);
            report.generator = Some(GENERATOR_ID);
            report.estimates = Some(t.json_rows());
            to_json(&report)?
        }
    }))
}

/// A bias grid given as `a:b:steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// `a:b:steps` with `0 < a < b < 1` and `steps >= 2`; endpoints included.
/// Interior points are rounded to 12 decimals so that `0.1:0.9:9` yields
/// exactly the doubles nearest to `0.1, 0.2, ..., 0.9`.
pub fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, steps] = parts.as_slice() else {
        return Err(format!("expected a:b:steps, got {text:?}"));
    };
    let a: f64 = a.trim().parse().map_err(|_| format!("bad start {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad end {b:?}"))?;
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| format!("bad step count {steps:?}"))?;
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(format!("need 0 < a < b < 1, got a = {a}, b = {b}"));
    }
    if steps < 2 {
        return Err(format!("need at least 2 steps, got {steps}"));
    }
    let last = (steps - 1) as f64;
    Ok(Grid(
        (0..steps)
            .map(|k| {
                let t = k as f64 / last;
                ((a + (b - a) * t) * 1e12).round() / 1e12
            })
            .collect(),
    ))
}

pub fn default_grid() -> Vec<f64> {
    default_p_grid()
}
