//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use aamp::amplify::{eqaaa_run_prepared, qaaa_run_prepared};
use aamp::distributed::{deqaaa_run_prepared, Partition};
use aamp::gate::Circuit;
use aamp::metrics::decompose_circuit;
use aamp::report::{dual_metrics, RunReport};
use aamp::sample::{kl_divergence, sample};
use aamp::state::StateVector;

use crate::config::{
    render_index, resolve_output, resolve_state, resolve_targets, AlgorithmChoice, RunConfig,
    TargetToken,
};
use crate::CliError;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

fn histogram_csv(state: &StateVector, shots: u64, seed: u64, bit_reverse: bool) -> Result<String, CliError> {
    let hist = sample(state, shots, seed)?;
    let n = state.n_qubits();
    let mut out = String::from("bitstring,count,probability\n");
    for (&x, &c) in hist.counts() {
        let _ = writeln!(
            out,
            "{},{},{}",
            render_index(x, n, bit_reverse),
            c,
            c as f64 / shots as f64
        );
    }
    Ok(out)
}

/// Executes one configured run, writing the JSON report and optionally a
/// sampled histogram CSV.
pub fn cmd_run(config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let prep = resolve_state(&config.state, config.normalize)?;
    let n = prep.spec.n_qubits();
    let targets = resolve_targets(&config.targets, n, config.bit_reverse)?;
    let backend = config.backend.into();

    let (mut report, final_state, circuit) = match config.algorithm {
        AlgorithmChoice::Qaaa => {
            let out = qaaa_run_prepared(&prep, &targets, backend)?;
            (
                RunReport::from_outcome(&out, targets.bitstrings()),
                out.final_state,
                out.circuit,
            )
        }
        AlgorithmChoice::Eqaaa => {
            let out = eqaaa_run_prepared(&prep, &targets, backend)?;
            (
                RunReport::from_outcome(&out, targets.bitstrings()),
                out.final_state,
                out.circuit,
            )
        }
        AlgorithmChoice::Deqaaa => {
            let sizes = config.partition.clone().expect("validated");
            let partition = Partition::new(sizes)?;
            let out = deqaaa_run_prepared(&prep, &targets, &partition, backend)?;
            (
                RunReport::from_deqaaa(&out, targets.bitstrings()),
                out.final_state,
                out.circuit,
            )
        }
    };

    let histogram_path = match (config.shots, &config.histogram) {
        (Some(shots), Some(path)) => {
            let path = resolve_output(path);
            write_file(&path, &histogram_csv(&final_state, shots, config.seed, config.bit_reverse)?)?;
            Some(path.display().to_string())
        }
        _ => None,
    };
    if let Some(shots) = config.shots {
        report = report.with_sampling(config.seed, shots, histogram_path);
    }

    let report_path = resolve_output(&config.report);
    write_file(&report_path, &report.to_json())?;
    if config.decompose {
        let ir_path = report_path.with_extension("decomposed.ir");
        write_file(&ir_path, &decompose_circuit(&circuit).to_ir())?;
    }
    println!(
        "{}: n={} p_initial={:.6} iterations={} p_final={:.10} report={}",
        report.algorithm,
        report.n,
        report.p_initial,
        report.iterations,
        report.p_final,
        report_path.display()
    );
    Ok(report)
}

/// One row of the comparison table.
#[derive(Debug, serde::Serialize)]
pub struct CompareRow {
    pub algorithm: String,
    pub n: usize,
    pub iterations: u32,
    pub p_final: f64,
    pub gate_count: usize,
    pub depth: usize,
    pub decomposed_gate_count: usize,
    pub decomposed_depth: usize,
    /// Reduction of decomposed gate count relative to the first row, percent.
    pub gate_reduction_pct: f64,
    pub depth_reduction_pct: f64,
}

/// Spec of one comparison member: an algorithm plus its partition when
/// distributed. A per-run `targets` entry, when present, must resolve to the
/// shared target set; rows over different targets are not comparable.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRun {
    pub algorithm: AlgorithmChoice,
    pub partition: Option<Vec<usize>>,
    pub targets: Option<Vec<crate::config::TargetEntry>>,
}

/// Comparison config: shared state and targets, two or more runs.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub state: String,
    pub targets: Vec<crate::config::TargetEntry>,
    #[serde(default)]
    pub bit_reverse: bool,
    #[serde(default)]
    pub normalize: bool,
    pub runs: Vec<CompareRun>,
}

/// Runs every member on the shared instance and tabulates both depth
/// conventions plus reduction percentages against the first row.
pub fn cmd_compare(
    config: &CompareConfig,
    csv_path: &Path,
    json_path: Option<&Path>,
) -> Result<Vec<CompareRow>, CliError> {
    if config.runs.len() < 2 {
        return Err(CliError::config("compare needs at least two runs".into()));
    }
    let prep = resolve_state(&config.state, config.normalize)?;
    let n = prep.spec.n_qubits();
    let shared: Vec<TargetToken> =
        config.targets.iter().cloned().map(TargetToken::from).collect();
    let targets = resolve_targets(&shared, n, config.bit_reverse)?;
    let backend = aamp::amplify::Backend::Projector;

    let mut rows: Vec<CompareRow> = Vec::new();
    for run in &config.runs {
        if let Some(own) = &run.targets {
            let own: Vec<TargetToken> = own.iter().cloned().map(TargetToken::from).collect();
            let own = resolve_targets(&own, n, config.bit_reverse)?;
            if own != targets {
                return Err(CliError::config(
                    "heterogeneous target sets: every compared run must use the shared targets"
                        .into(),
                ));
            }
        }
        let (algorithm, iterations, p_final, circuit): (String, u32, f64, Circuit) =
            match run.algorithm {
                AlgorithmChoice::Qaaa | AlgorithmChoice::Eqaaa => {
                    if run.partition.is_some() {
                        return Err(CliError::config(
                            "partition is only meaningful for deqaaa".into(),
                        ));
                    }
                    let out = match run.algorithm {
                        AlgorithmChoice::Qaaa => qaaa_run_prepared(&prep, &targets, backend)?,
                        _ => eqaaa_run_prepared(&prep, &targets, backend)?,
                    };
                    (
                        out.algorithm.name().to_string(),
                        out.iterations,
                        out.p_final,
                        out.circuit,
                    )
                }
                AlgorithmChoice::Deqaaa => {
                    let sizes = run
                        .partition
                        .clone()
                        .ok_or_else(|| CliError::config("deqaaa requires a partition".into()))?;
                    let partition = Partition::new(sizes)?;
                    let out = deqaaa_run_prepared(&prep, &targets, &partition, backend)?;
                    (
                        "deqaaa".to_string(),
                        out.hat_iterations(),
                        out.p_final,
                        out.circuit,
                    )
                }
            };
        let (plain, decomposed) = dual_metrics(&circuit);
        rows.push(CompareRow {
            algorithm,
            n,
            iterations,
            p_final,
            gate_count: plain.gate_count,
            depth: plain.depth,
            decomposed_gate_count: decomposed.gate_count,
            decomposed_depth: decomposed.depth,
            gate_reduction_pct: 0.0,
            depth_reduction_pct: 0.0,
        });
    }
    let base_gates = rows[0].decomposed_gate_count as f64;
    let base_depth = rows[0].decomposed_depth as f64;
    for row in &mut rows {
        row.gate_reduction_pct = 100.0 * (1.0 - row.decomposed_gate_count as f64 / base_gates);
        row.depth_reduction_pct = 100.0 * (1.0 - row.decomposed_depth as f64 / base_depth);
    }

    let mut csv = String::from(
        "algorithm,n,iterations,p_final,gate_count,depth,decomposed_gate_count,decomposed_depth,gate_reduction_pct,depth_reduction_pct\n",
    );
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{:.2},{:.2}",
            r.algorithm,
            r.n,
            r.iterations,
            r.p_final,
            r.gate_count,
            r.depth,
            r.decomposed_gate_count,
            r.decomposed_depth,
            r.gate_reduction_pct,
            r.depth_reduction_pct
        );
    }
    write_file(&resolve_output(csv_path), &csv)?;
    if let Some(json_path) = json_path {
        let mut text = serde_json::to_string_pretty(&rows).expect("rows serialize");
        text.push('\n');
        write_file(&resolve_output(json_path), &text)?;
    }
    println!("compared {} runs on {} (n={n})", rows.len(), config.state);
    Ok(rows)
}

/// Samples the preset at each shot count over a seed range and tabulates the
/// KL divergence to the exact distribution, with per-shot-count medians.
pub fn cmd_kl_study(
    state_source: &str,
    shot_counts: &[u64],
    seeds: u64,
    seed_base: u64,
    out_path: &Path,
) -> Result<String, CliError> {
    if shot_counts.is_empty() || seeds == 0 {
        return Err(CliError::config("need at least one shot count and one seed".into()));
    }
    let prep = resolve_state(state_source, false)?;
    let state = aamp::prep::prepare_direct(&prep.spec);
    let exact = state.exact_distribution();
    let n = state.n_qubits();

    let mut csv = String::from("shots,seed,kl_divergence\n");
    let mut medians = Vec::new();
    for &shots in shot_counts {
        let mut values = Vec::with_capacity(seeds as usize);
        for seed in seed_base..seed_base + seeds {
            let hist = sample(&state, shots, seed)?;
            let kl = kl_divergence(&hist.to_distribution(n)?, &exact)?;
            let _ = writeln!(csv, "{shots},{seed},{kl}");
            values.push(kl);
        }
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len() % 2 == 0 {
            (values[mid - 1] + values[mid]) / 2.0
        } else {
            values[mid]
        };
        medians.push((shots, median));
    }
    for (shots, median) in &medians {
        let _ = writeln!(csv, "{shots},median,{median}");
    }
    write_file(&resolve_output(out_path), &csv)?;
    for (shots, median) in &medians {
        println!("kl-study: shots={shots} median={median:.6e}");
    }
    Ok(csv)
}

/// Reads a circuit in the text IR, expands every multi-controlled gate, and
/// writes the result back out in the same format.
pub fn cmd_decompose(input: &Path, output: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", input.display())))?;
    let circuit = Circuit::from_ir(&text)?;
    let decomposed = decompose_circuit(&circuit);
    let (before, after) = (dual_metrics(&circuit).0, dual_metrics(&decomposed).0);
    write_file(&resolve_output(output), &decomposed.to_ir())?;
    println!(
        "decomposed {} gates (depth {}) into {} gates (depth {})",
        before.gate_count, before.depth, after.gate_count, after.depth
    );
    Ok(())
}

/// Loads a comparison config file.
pub fn load_compare_config(path: &Path) -> Result<CompareConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
}
