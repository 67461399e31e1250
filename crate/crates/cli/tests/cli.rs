//! End-to-end runs of the `aoi` binary.

use std::process::{Command, Output};

fn aoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoi")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key} in {text}")).parse().unwrap()
}

#[test]
fn analytic_single_cell_exponential() {
    let out = aoi(&["analytic", "--m", "1", "--lambda", "1", "--service", "exp:1"]);
    assert!(out.status.success());
    assert_eq!(value(&stdout(&out), "mean_aoi"), 2.0);
}

#[test]
fn analytic_two_cells_prints_ten_digits() {
    let out = aoi(&["analytic", "--m", "2", "--lambda", "1", "--service", "exp:1"]);
    assert!(stdout(&out).contains("mean_aoi = 2.416666667"), "{}", stdout(&out));
}

#[test]
fn header_echoes_resolved_defaults() {
    let text = stdout(&aoi(&["simulate", "--m", "2", "--lambda", "1", "--horizon", "1e4"]));
    for line in ["# service = exp:1", "# arrivals = exp:1", "# warmup = 500", "# replications = 8"] {
        assert!(text.contains(line), "missing {line:?} in {text}");
    }
}

#[test]
fn zero_rate_is_an_error() {
    let out = aoi(&["analytic", "--m", "3", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lambda"));
}

#[test]
fn no_closed_form_beyond_three_cells() {
    let out = aoi(&["analytic", "--m", "4", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("simulate"), "{}", stderr(&out));
}

#[test]
fn bad_service_spec_is_reported() {
    let out = aoi(&["analytic", "--m", "1", "--lambda", "1", "--service", "weibull:2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("weibull"), "{}", stderr(&out));
}

#[test]
fn empty_buffer_list_is_a_usage_error() {
    let out = aoi(&["sweep", "--m", ""]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_csv_is_byte_stable() {
    let args = [
        "sweep",
        "--m",
        "1,2,3",
        "--lambda",
        "0.5:2:0.5",
        "--service",
        "det:1",
        "--method",
        "both",
        "--horizon",
        "2e3",
        "--replications",
        "2",
        "--format",
        "csv",
    ];
    let a = aoi(&args);
    let b = aoi(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "lambda,m,method,mean_aoi,ci_halfwidth");
    assert_eq!(rows.len(), 1 + 4 * 3 * 2);
    assert!(rows[1].starts_with("0.5,1,analytic,"));
    assert!(rows[2].starts_with("0.5,1,simulated,"));
}

#[test]
fn sweep_writes_svg_plot() {
    let dir = std::env::temp_dir().join(format!("aoi-cli-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("fig.svg");
    let out = aoi(&["sweep", "--lambda", "0.5:4:0.5", "--plot", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.contains("m = 3"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = ["simulate", "--m", "3", "--lambda", "1", "--horizon", "2e4", "--seed", "5", "--replications", "3"];
    let a = stdout(&aoi(&args));
    assert_eq!(a, stdout(&aoi(&args)));
    let other = stdout(&aoi(&[
        "simulate",
        "--m",
        "3",
        "--lambda",
        "1",
        "--horizon",
        "2e4",
        "--seed",
        "6",
        "--replications",
        "3",
    ]));
    assert_ne!(value(&a, "mean_aoi"), value(&other, "mean_aoi"));
}

#[test]
fn simulate_three_cells_lands_near_closed_form() {
    let out = aoi(&["simulate", "--m", "3", "--lambda", "1", "--horizon", "2e5", "--replications", "4"]);
    let text = stdout(&out);
    let (mean, hw) = (value(&text, "mean_aoi"), value(&text, "ci_halfwidth"));
    // 2.53125 is the three-cell closed form at λ = μ = 1, exponential service
    assert!((mean - 2.53125).abs() < 4.0 * hw.max(1e-3), "{mean} ± {hw}");
}

#[test]
fn event_log_has_one_json_line_per_departure() {
    let dir = std::env::temp_dir().join(format!("aoi-cli-log-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let log = dir.join("events.ndjson");
    let out = aoi(&[
        "simulate",
        "--m",
        "2",
        "--lambda",
        "1",
        "--horizon",
        "1e3",
        "--replications",
        "1",
        "--event-log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let departures = value(&stdout(&out), "departures") as usize;
    let text = std::fs::read_to_string(&log).unwrap();
    assert_eq!(text.lines().count(), departures);
    assert!(text.lines().next().unwrap().contains("\"aoi\""));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_short_horizon_flags_wide_intervals() {
    let out = aoi(&["validate", "--m", "3", "--lambda", "1", "--service", "exp:1", "--horizon", "1e3"]);
    let text = stdout(&out);
    assert!(text.contains("wide CI"), "{text}");
}

#[test]
fn validate_csv_keeps_header() {
    let out =
        aoi(&["validate", "--m", "2", "--lambda", "1", "--service", "exp:1", "--horizon", "1e4", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("# aoi validate"), "{text}");
    assert!(text.contains("m,lambda,service,analytic,simulated,ci_halfwidth,pass"));
}
