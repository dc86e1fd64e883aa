//! Run configuration: a TOML document deserialised into [`ConfigFile`] and
//! resolved against the core types into a [`RunConfig`].
//!
//! Segment ids and values are 0-based. Values in rules may be given by symbol
//! name or by index; pattern keys are the topology's direction names.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qwfc_core::content::{Alphabet, FunctionalFactor, Pattern, Rule, Ruleset, Symbol};
use qwfc_core::corpus::{
    checkerboard_usecase, generate_hexmap_ruleset, generate_pipes_ruleset, hexmap_alphabet,
    pipes_alphabet, platformer_alphabet, platformer_ruleset, voxel_alphabet, voxel_ruleset,
    Validator, DEFAULT_BLUE_WEIGHT,
};
use qwfc_core::cwfc::DEFAULT_MAX_RESTARTS;
use qwfc_core::hwfc::{validate_partitioning, Partitioning};
use qwfc_core::topology::{OrderSpec, PartitionSpec, Topology};
use qwfc_core::content::AdjacencyConfig;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cwfc,
    Qwfc,
    Hwfc,
    Oracle,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cwfc" => Some(Mode::Cwfc),
            "qwfc" => Some(Mode::Qwfc),
            "hwfc" => Some(Mode::Hwfc),
            "oracle" => Some(Mode::Oracle),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Cwfc => "cwfc",
            Mode::Qwfc => "qwfc",
            Mode::Hwfc => "hwfc",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Ppm,
    VoxelSlices,
    Dump,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ascii" => Some(Format::Ascii),
            "ppm" => Some(Format::Ppm),
            "voxel-slices" => Some(Format::VoxelSlices),
            "dump" => Some(Format::Dump),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Ascii | Format::VoxelSlices => "txt",
            Format::Ppm => "ppm",
            Format::Dump => "dump",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightField {
    Constant(f64),
    Factor(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderField {
    Named(String),
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionField {
    Named(String),
    Explicit(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TopologyFile {
    Grid2d {
        width: usize,
        height: usize,
    },
    Hexgrid {
        radius: usize,
    },
    /// Vertical columns of voxels; `depth = 1` gives a side-on level.
    Grid3d {
        width: usize,
        depth: usize,
        height: usize,
    },
    Custom {
        segments: usize,
        directions: Vec<String>,
        /// `edges[d]` lists `[from, to]` pairs of direction `d`.
        edges: Vec<Vec<[usize; 2]>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_blue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub name: String,
    pub glyph: String,
    pub color: [u8; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub value: ValueRef,
    pub weight: WeightField,
    #[serde(default)]
    pub pattern: BTreeMap<String, ValueRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_dist: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qasm: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tile: Option<usize>,
}

/// The document as written, with every default filled in after resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validator: Option<String>,
    pub topology: TopologyFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<SymbolFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleFile>>,
    #[serde(default)]
    pub output: OutputFile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: Format,
    pub instances: bool,
    pub exact_dist: bool,
    pub qasm: bool,
    pub tile: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Normalised document; serialising it reproduces this configuration.
    pub file: ConfigFile,
    pub name: String,
    pub seed: u64,
    pub mode: Mode,
    pub shots: usize,
    pub max_restarts: usize,
    pub topology: Topology,
    pub adjacency: AdjacencyConfig,
    pub alphabet: Alphabet,
    pub ruleset: Ruleset,
    pub validator: Validator,
    pub order: Vec<usize>,
    pub partitioning: Option<Partitioning>,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn segment_count(&self) -> usize {
        self.adjacency.segment_count()
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses a configuration document without resolving it.
pub fn parse_file(text: &str) -> Result<ConfigFile, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

/// Parses and resolves a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    resolve(parse_file(text)?)
}

/// TOML text of the normalised document.
pub fn serialize_config(config: &RunConfig) -> String {
    toml::to_string(&config.file).expect("configuration documents serialise")
}

fn resolve_topology(t: &TopologyFile) -> Result<Topology, ConfigError> {
    let positive = |field: &str, v: usize| {
        if v == 0 {
            Err(invalid(format!("topology.{field}"), "must be at least 1"))
        } else {
            Ok(())
        }
    };
    Ok(match t {
        TopologyFile::Grid2d { width, height } => {
            positive("width", *width)?;
            positive("height", *height)?;
            Topology::Grid2d {
                width: *width,
                height: *height,
            }
        }
        TopologyFile::Hexgrid { radius } => Topology::Hex { radius: *radius },
        TopologyFile::Grid3d {
            width,
            depth,
            height,
        } => {
            positive("width", *width)?;
            positive("depth", *depth)?;
            positive("height", *height)?;
            Topology::Columns {
                width: *width,
                depth: *depth,
                height: *height,
            }
        }
        TopologyFile::Custom {
            segments,
            directions,
            edges,
        } => {
            if edges.len() != directions.len() {
                return Err(invalid(
                    "topology.edges",
                    format!("{} edge lists for {} directions", edges.len(), directions.len()),
                ));
            }
            let lists: Vec<Vec<(usize, usize)>> = edges
                .iter()
                .map(|list| list.iter().map(|e| (e[0], e[1])).collect())
                .collect();
            let adjacency = AdjacencyConfig::from_edges(*segments, &lists)
                .map_err(|e| invalid("topology.edges", e.to_string()))?;
            Topology::Custom {
                adjacency,
                direction_names: directions.clone(),
            }
        }
    })
}

fn resolve_value(alphabet: &Alphabet, v: &ValueRef, field: &str) -> Result<usize, ConfigError> {
    match v {
        ValueRef::Index(i) if *i < alphabet.size() => Ok(*i),
        ValueRef::Index(i) => Err(invalid(
            field,
            format!("value {i} outside an alphabet of {} symbols", alphabet.size()),
        )),
        ValueRef::Name(n) => alphabet
            .index_of(n)
            .ok_or_else(|| invalid(field, format!("unknown symbol '{n}'"))),
    }
}

fn literal_alphabet(symbols: &[SymbolFile]) -> Result<Alphabet, ConfigError> {
    let mut out = Vec::with_capacity(symbols.len());
    for (k, s) in symbols.iter().enumerate() {
        let mut chars = s.glyph.chars();
        let glyph = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(invalid(format!("alphabet[{k}].glyph"), "must be a single character")),
        };
        out.push(Symbol::new(s.name.clone(), glyph, s.color));
    }
    Alphabet::new(out).map_err(|e| invalid("alphabet", e.to_string()))
}

fn literal_rules(
    rules: &[RuleFile],
    alphabet: &Alphabet,
    topology: &Topology,
) -> Result<Ruleset, ConfigError> {
    let mut out = Vec::with_capacity(rules.len());
    for (k, r) in rules.iter().enumerate() {
        let value = resolve_value(alphabet, &r.value, &format!("rules[{k}].value"))?;
        let mut pairs = Vec::new();
        for (dir, v) in &r.pattern {
            let field = format!("rules[{k}].pattern.{dir}");
            let d = topology.direction_index(dir).ok_or_else(|| {
                invalid(
                    &field,
                    format!("unknown direction; expected one of {:?}", topology.direction_names()),
                )
            })?;
            pairs.push((d, resolve_value(alphabet, v, &field)?));
        }
        let pattern = Pattern::new(pairs).map_err(|e| invalid(format!("rules[{k}].pattern"), e.to_string()))?;
        let field = format!("rules[{k}].weight");
        let rule = match &r.weight {
            WeightField::Constant(u) if u.is_finite() && *u > 0.0 => Rule::new(value, *u, pattern),
            WeightField::Constant(u) => return Err(invalid(field, format!("weight {u} must be finite and > 0"))),
            WeightField::Factor(spec) => {
                let (layers, height) = topology.layers().map_err(|e| invalid(&field, e.to_string()))?;
                let factor = FunctionalFactor::parse(spec, &layers, height)
                    .map_err(|e| invalid(&field, e.to_string()))?;
                Rule::functional(value, factor, pattern)
            }
        };
        out.push(rule);
    }
    Ruleset::new(out).map_err(|e| invalid("rules", e.to_string()))
}

struct Generated {
    alphabet: Alphabet,
    ruleset: Ruleset,
    validator: Validator,
    order: OrderSpec,
}

fn generated(g: &GeneratorFile, topology: &Topology) -> Result<Generated, ConfigError> {
    let needs = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(invalid("generator.name", format!("'{}' needs a {what} topology", g.name)))
        }
    };
    if g.u_blue.is_some() && g.name != "hexmap" {
        return Err(invalid("generator.u_blue", "only the hexmap generator takes u_blue"));
    }
    Ok(match g.name.as_str() {
        "checkerboard" => {
            needs(matches!(topology, Topology::Grid2d { .. }), "grid2d")?;
            let uc = checkerboard_usecase(1, 1);
            Generated {
                alphabet: uc.alphabet,
                ruleset: uc.ruleset,
                validator: Validator::Checkerboard,
                order: OrderSpec::Snake,
            }
        }
        "pipes" => {
            needs(matches!(topology, Topology::Grid2d { .. }), "grid2d")?;
            Generated {
                alphabet: pipes_alphabet(),
                ruleset: generate_pipes_ruleset(),
                validator: Validator::Pipes,
                order: OrderSpec::Raster,
            }
        }
        "hexmap" => {
            needs(matches!(topology, Topology::Hex { .. }), "hexgrid")?;
            let u = g.u_blue.unwrap_or(DEFAULT_BLUE_WEIGHT);
            if !(u.is_finite() && u > 0.0) {
                return Err(invalid("generator.u_blue", "must be finite and > 0"));
            }
            Generated {
                alphabet: hexmap_alphabet(),
                ruleset: generate_hexmap_ruleset(u),
                validator: Validator::Hexmap,
                order: OrderSpec::Raster,
            }
        }
        "platformer" => {
            needs(matches!(topology, Topology::Columns { depth: 1, .. }), "grid3d (depth 1)")?;
            Generated {
                alphabet: platformer_alphabet(),
                ruleset: platformer_ruleset(topology).map_err(|e| invalid("topology", e.to_string()))?,
                validator: Validator::Platformer,
                order: OrderSpec::Raster,
            }
        }
        "voxel" => {
            needs(matches!(topology, Topology::Columns { .. }), "grid3d")?;
            Generated {
                alphabet: voxel_alphabet(),
                ruleset: voxel_ruleset(topology).map_err(|e| invalid("topology", e.to_string()))?,
                validator: Validator::Voxel,
                order: OrderSpec::Raster,
            }
        }
        other => return Err(invalid("generator.name", format!("unknown generator '{other}'"))),
    })
}

fn order_field(spec: &OrderSpec) -> OrderField {
    match spec {
        OrderSpec::Explicit(list) => OrderField::Explicit(list.clone()),
        named => OrderField::Named(named.to_string()),
    }
}

/// Resolves a document, filling its defaults in place.
pub fn resolve(mut file: ConfigFile) -> Result<RunConfig, ConfigError> {
    let seed = file.seed.ok_or_else(|| invalid("seed", "a seed is required"))?;
    let mode_name = file.mode.clone().ok_or_else(|| invalid("mode", "a mode is required"))?;
    let mode = Mode::parse(&mode_name)
        .ok_or_else(|| invalid("mode", format!("'{mode_name}' is not one of cwfc, qwfc, hwfc, oracle")))?;
    let topology = resolve_topology(&file.topology)?;
    let adjacency = topology.adjacency();
    let n = adjacency.segment_count();
    if n == 0 {
        return Err(invalid("topology", "has no segments"));
    }

    let (alphabet, ruleset, default_validator, default_order) = match &file.generator {
        Some(g) => {
            if file.alphabet.is_some() || file.rules.is_some() {
                return Err(invalid("generator", "cannot be combined with a literal alphabet or rules"));
            }
            let gen = generated(g, &topology)?;
            (gen.alphabet, gen.ruleset, gen.validator, gen.order)
        }
        None => {
            let symbols = file.alphabet.as_deref().ok_or_else(|| invalid("alphabet", "missing (or give a generator)"))?;
            let alphabet = literal_alphabet(symbols)?;
            let rules = file.rules.as_deref().ok_or_else(|| invalid("rules", "missing (or give a generator)"))?;
            let ruleset = literal_rules(rules, &alphabet, &topology)?;
            (alphabet, ruleset, Validator::RuleConsistency, OrderSpec::Raster)
        }
    };
    ruleset
        .check(alphabet.size(), &adjacency)
        .map_err(|e| invalid("rules", e.to_string()))?;

    let validator = match &file.validator {
        Some(name) => Validator::from_name(name).ok_or_else(|| invalid("validator", format!("unknown validator '{name}'")))?,
        None => default_validator,
    };

    let order_spec = match &file.order {
        None => default_order,
        Some(OrderField::Named(s)) => s.parse().map_err(|e: qwfc_core::Error| invalid("order", e.to_string()))?,
        Some(OrderField::Explicit(list)) => OrderSpec::Explicit(list.clone()),
    };
    let order = topology.order(&order_spec).map_err(|e| invalid("order", e.to_string()))?;

    let partitioning = match &file.partition {
        None => None,
        Some(field) => {
            let spec = match field {
                PartitionField::Named(s) => s.parse().map_err(|e: qwfc_core::Error| invalid("partition", e.to_string()))?,
                PartitionField::Explicit(parts) => PartitionSpec::Explicit(parts.clone()),
            };
            let p = topology.partition(&spec, &order).map_err(|e| invalid("partition", e.to_string()))?;
            let report = validate_partitioning(&p, n);
            if let Some(v) = report.first() {
                return Err(invalid("partition", v.to_string()));
            }
            Some(p)
        }
    };
    if mode == Mode::Hwfc && partitioning.is_none() {
        return Err(invalid("partition", "hwfc mode needs a partition"));
    }

    let shots = file.shots.unwrap_or(1);
    if shots == 0 {
        return Err(invalid("shots", "must be at least 1"));
    }
    let max_restarts = file.max_restarts.unwrap_or(DEFAULT_MAX_RESTARTS);
    let format_name = file.output.format.clone().unwrap_or_else(|| "ascii".into());
    let format = Format::parse(&format_name).ok_or_else(|| {
        invalid("output.format", format!("'{format_name}' is not one of ascii, ppm, voxel-slices, dump"))
    })?;
    let output = OutputConfig {
        format,
        instances: file.output.instances.unwrap_or(mode != Mode::Oracle),
        exact_dist: file.output.exact_dist.unwrap_or(mode == Mode::Oracle),
        qasm: file.output.qasm.unwrap_or(false),
        tile: file.output.tile.unwrap_or(16),
    };
    if output.tile == 0 {
        return Err(invalid("output.tile", "must be at least 1"));
    }
    let name = file.name.clone().unwrap_or_else(|| "run".into());

    file.name = Some(name.clone());
    file.shots = Some(shots);
    file.max_restarts = Some(max_restarts);
    file.order = Some(order_field(&order_spec));
    file.validator = Some(validator.name().into());
    file.output = OutputFile {
        format: Some(format_name),
        instances: Some(output.instances),
        exact_dist: Some(output.exact_dist),
        qasm: Some(output.qasm),
        tile: Some(output.tile),
    };

    Ok(RunConfig {
        file,
        name,
        seed,
        mode,
        shots,
        max_restarts,
        topology,
        adjacency,
        alphabet,
        ruleset,
        validator,
        order,
        partitioning,
        output,
    })
}
