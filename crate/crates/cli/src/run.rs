//! Mode dispatch and artifact writing.
//!
//! Artifacts depend only on the configuration and seed. Timing goes to the
//! returned summary, never into files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qwfc_core::content::{ContentInstance, Distribution, RuleModel};
use qwfc_core::cwfc::{cwfc_generate, EntropySelector};
use qwfc_core::hwfc::{hwfc_exact_distribution, hwfc_generate, HwfcOptions};
use qwfc_core::pipcg::{exact_distribution_oracle, Budget, OrderSelector, PatternValueSelector, RandomSource};
use qwfc_core::qwfc::{
    build_circuit, exact_distribution, export_qasm, lower_to_gates, sample, simulate, CircuitOptions,
    QuantumCircuit,
};

use crate::config::{Mode, RunConfig};
use crate::render::render;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] qwfc_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mode: Mode,
    pub instances: usize,
    pub valid: usize,
    pub restarts: usize,
    pub qubits: Option<usize>,
    pub distribution_size: Option<usize>,
    pub files: Vec<PathBuf>,
    pub seconds: f64,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "mode: {}", self.mode.name())?;
        writeln!(f, "instances: {} ({} valid)", self.instances, self.valid)?;
        writeln!(f, "restarts: {}", self.restarts)?;
        if let Some(q) = self.qubits {
            writeln!(f, "qubits: {q}")?;
        }
        if let Some(k) = self.distribution_size {
            writeln!(f, "distribution support: {k}")?;
        }
        writeln!(f, "files written: {}", self.files.len())?;
        write!(f, "wall time: {:.3} s", self.seconds)
    }
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }
}

fn full_circuit(config: &RunConfig) -> Result<QuantumCircuit, qwfc_core::Error> {
    build_circuit(
        &config.adjacency,
        &config.alphabet,
        &config.ruleset,
        &config.order,
        &ContentInstance::new(config.segment_count()),
        CircuitOptions::default(),
    )
}

/// Distribution file keyed by canonical integer, plus a legend mapping each
/// integer to its per-segment values.
fn distribution_json(dist: &Distribution) -> (String, String) {
    let rows = dist.by_integer();
    let mut probs = serde_json::Map::new();
    let mut legend = serde_json::Map::new();
    for (n, values, p) in rows {
        probs.insert(n.to_string(), serde_json::json!(p));
        legend.insert(n.to_string(), serde_json::json!(values));
    }
    let legend = serde_json::json!({
        "segments": dist.segments().len(),
        "bits_per_segment": dist.bits_per_segment(),
        "encoding": "segment k holds bits k*q..(k+1)*q of the integer, value little-endian",
        "instances": legend,
    });
    (
        serde_json::to_string_pretty(&serde_json::Value::Object(probs)).expect("json") + "\n",
        serde_json::to_string_pretty(&legend).expect("json") + "\n",
    )
}

/// Runs `config` and writes its artifacts under `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<Summary, RunError> {
    let start = Instant::now();
    fs::create_dir_all(out).map_err(|source| RunError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let mut w = Writer {
        dir: out,
        files: Vec::new(),
    };
    let n = config.segment_count();
    let mut instances: Vec<Vec<usize>> = Vec::new();
    let mut restarts = 0;
    let mut qubits = None;
    let mut exact: Option<Distribution> = None;
    let model = RuleModel::new(&config.adjacency, &config.ruleset, config.alphabet.size());

    match config.mode {
        Mode::Cwfc => {
            for shot in 0..config.shots {
                let mut rng = RandomSource::substream(config.seed, shot as u64);
                let run = cwfc_generate(
                    &config.adjacency,
                    &config.alphabet,
                    &config.ruleset,
                    &mut rng,
                    config.max_restarts,
                )?;
                restarts += run.restarts;
                instances.push(run.instance.values().expect("complete"));
            }
            if config.output.exact_dist {
                exact = Some(exact_distribution_oracle(
                    n,
                    &EntropySelector::new(&model),
                    &PatternValueSelector::new(&model),
                    Budget::default(),
                )?);
            }
        }
        Mode::Qwfc => {
            let circuit = full_circuit(config)?;
            qubits = Some(circuit.qubit_count());
            if config.output.qasm {
                let text = export_qasm(&lower_to_gates(&circuit), &circuit.layout);
                w.write("circuit.qasm", text.as_bytes())?;
            }
            let sv = simulate(&circuit)?;
            let mut rng = RandomSource::new(config.seed);
            for shot in sample(&sv, &circuit.layout, config.shots, &mut rng) {
                instances.push(shot.values().expect("complete"));
            }
            if config.output.exact_dist {
                exact = Some(exact_distribution(&sv, &circuit.layout));
            }
        }
        Mode::Hwfc => {
            let parts = config.partitioning.as_ref().expect("checked when resolving");
            let mut max_qubits = 0;
            for shot in 0..config.shots {
                let mut rng = RandomSource::substream(config.seed, shot as u64);
                let run = hwfc_generate(
                    &config.adjacency,
                    &config.alphabet,
                    &config.ruleset,
                    parts,
                    &mut rng,
                    HwfcOptions::default(),
                )?;
                max_qubits = max_qubits.max(run.max_qubits);
                instances.push(run.instance.values().expect("complete"));
            }
            qubits = Some(max_qubits);
            if config.output.qasm {
                // the circuits that produced the first instance
                let first = &instances[0];
                let mut frozen = ContentInstance::new(n);
                for (h, part) in parts.parts().iter().enumerate() {
                    let circuit = build_circuit(
                        &config.adjacency,
                        &config.alphabet,
                        &config.ruleset,
                        part,
                        &frozen,
                        CircuitOptions::default(),
                    )?;
                    let text = export_qasm(&lower_to_gates(&circuit), &circuit.layout);
                    w.write(&format!("circuit_p{h:03}.qasm"), text.as_bytes())?;
                    for &s in part {
                        frozen.push(s, first[s])?;
                    }
                }
            }
            if config.output.exact_dist {
                exact = Some(hwfc_exact_distribution(
                    &config.adjacency,
                    &config.alphabet,
                    &config.ruleset,
                    parts,
                    Budget::default(),
                    HwfcOptions::default(),
                )?);
            }
        }
        Mode::Oracle => {
            let dist = exact_distribution_oracle(
                n,
                &OrderSelector::new(config.order.clone(), n),
                &PatternValueSelector::new(&model),
                Budget::default(),
            )?;
            if config.output.qasm {
                let circuit = full_circuit(config)?;
                qubits = Some(circuit.qubit_count());
                let text = export_qasm(&lower_to_gates(&circuit), &circuit.layout);
                w.write("circuit.qasm", text.as_bytes())?;
            }
            exact = Some(dist);
        }
    }

    let mut report = String::new();
    report.push_str(&format!("name: {}\nmode: {}\nseed: {}\n", config.name, config.mode.name(), config.seed));
    report.push_str(&format!("validator: {}\n", config.validator.name()));
    let mut valid = 0;
    for (k, values) in instances.iter().enumerate() {
        let violations = config.validator.check(
            &config.topology,
            &config.adjacency,
            &config.ruleset,
            config.alphabet.size(),
            values,
        );
        if violations.is_empty() {
            valid += 1;
            report.push_str(&format!("instance {k}: pass\n"));
        } else {
            report.push_str(&format!("instance {k}: FAIL\n"));
            for v in violations {
                report.push_str(&format!("  {v}\n"));
            }
        }
        if config.output.instances {
            let bytes = render(values, &config.topology, &config.alphabet, config.output.format, config.output.tile);
            w.write(&format!("instance_{k:04}.{}", config.output.format.extension()), &bytes)?;
        }
    }
    report.push_str(&format!("valid: {valid}/{}\n", instances.len()));
    if config.mode == Mode::Cwfc {
        report.push_str(&format!("restarts: {restarts}\n"));
    }
    if let Some(q) = qubits {
        report.push_str(&format!("qubits: {q}\n"));
    }
    let distribution_size = exact.as_ref().map(Distribution::len);
    if let Some(dist) = &exact {
        let (probs, legend) = distribution_json(dist);
        w.write("exact_dist.json", probs.as_bytes())?;
        w.write("exact_dist_legend.json", legend.as_bytes())?;
        report.push_str(&format!(
            "distribution: {} instances, total mass {:.12}\n",
            dist.len(),
            dist.total_mass()
        ));
    }
    w.write("report.txt", report.as_bytes())?;

    Ok(Summary {
        mode: config.mode,
        instances: instances.len(),
        valid,
        restarts,
        qubits,
        distribution_size,
        files: w.files,
        seconds: start.elapsed().as_secs_f64(),
    })
}
