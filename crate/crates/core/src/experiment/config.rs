//! Experiment configuration: a UTF-8 key-value file with `[experiment]`,
//! `[model]` and `[parameters]` sections.
//!
//! ```text
//! [experiment]
//! command = thermal-entry
//! seed = 7
//!
//! [model]
//! type = lattice
//! dims = 8
//! boundary = open
//! hop = -1
//!
//! [parameters]
//! beta = 0.5, 2, 4
//! eps_pa = 0.01
//! ```
//!
//! Every problem found is reported, not only the first one.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::clock::GateList;
use crate::error::{Error, Result};
use crate::oracle::lattice::ANY_DOMAIN;
use crate::oracle::{Boundary, Disorder, Domain, HoppingEntry, LatticeSpec};

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_EPS2: f64 = 0.1;
pub const DEFAULT_EPS_PA: f64 = 0.01;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    ThermalEntry,
    DynamicsEntry,
    Greens,
    EnergyDensity,
    ParticleDensity,
    FreeEnergy,
    ClockOverlap,
    Theorem1Demo,
    BaselineCompare,
    ApproxBound,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::ThermalEntry,
        Command::DynamicsEntry,
        Command::Greens,
        Command::EnergyDensity,
        Command::ParticleDensity,
        Command::FreeEnergy,
        Command::ClockOverlap,
        Command::Theorem1Demo,
        Command::BaselineCompare,
        Command::ApproxBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ThermalEntry => "thermal-entry",
            Command::DynamicsEntry => "dynamics-entry",
            Command::Greens => "greens",
            Command::EnergyDensity => "energy-density",
            Command::ParticleDensity => "particle-density",
            Command::FreeEnergy => "free-energy",
            Command::ClockOverlap => "clock-overlap",
            Command::Theorem1Demo => "theorem1-demo",
            Command::BaselineCompare => "baseline-compare",
            Command::ApproxBound => "approx-bound",
        }
    }

    fn needs_model(self) -> bool {
        !matches!(self, Command::ClockOverlap | Command::ApproxBound)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
                format!(
                    "unknown command `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Hamiltonian or correlation-matrix source.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Lattice(LatticeSpec),
    Margulis { side: usize },
    Clock(GateList),
    FermiSea { n: u32, fill: f64 },
}

/// Initial correlation matrix for dynamics commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// |k⟩⟨k| for mode k.
    Site(usize),
    /// Thermal state of the model at this β.
    Thermal(f64),
    /// Lowest `fill · N` modes occupied.
    FermiSea(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    All,
    List(Vec<(usize, usize)>),
}

impl Entries {
    pub fn expand(&self, dim: usize) -> Vec<(usize, usize)> {
        match self {
            Entries::All => (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .collect(),
            Entries::List(list) => list.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameters {
    pub beta: Vec<f64>,
    pub t: Vec<f64>,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub eta: Vec<f64>,
    pub omega: Vec<f64>,
    pub c: Vec<f64>,
    pub degree: Vec<usize>,
    pub order: Vec<usize>,
    pub lengths: Vec<usize>,
    pub eps_pa: f64,
    pub eps2: f64,
    pub eps: f64,
    pub delta: f64,
    pub delta_qsvt: f64,
    pub samples: usize,
    pub entries: Entries,
    pub m0: InitialState,
    pub threshold: Option<f64>,
    pub target: String,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            beta: Vec::new(),
            t: Vec::new(),
            t1: Vec::new(),
            t2: Vec::new(),
            eta: Vec::new(),
            omega: Vec::new(),
            c: Vec::new(),
            degree: Vec::new(),
            order: Vec::new(),
            lengths: Vec::new(),
            eps_pa: DEFAULT_EPS_PA,
            eps2: DEFAULT_EPS2,
            eps: DEFAULT_EPS2,
            delta: DEFAULT_DELTA,
            delta_qsvt: 0.0,
            samples: DEFAULT_SAMPLES,
            entries: Entries::List(vec![(0, 0)]),
            m0: InitialState::Site(0),
            threshold: None,
            target: "fermi-dirac".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: Option<ModelSpec>,
    pub params: Parameters,
    pub seed: u64,
    /// CSV file name, relative to the output directory.
    pub csv: String,
    /// Report file name, relative to the output directory.
    pub report: String,
}

struct Line {
    number: usize,
    key: String,
    value: String,
}

#[derive(Default)]
struct Sections {
    experiment: Vec<Line>,
    model: Vec<Line>,
    parameters: Vec<Line>,
}

/// Parses a configuration, resolving gate files against the working
/// directory.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    parse_config_at(text, Path::new("."))
}

/// Parses a configuration, resolving gate files against `base`.
pub fn parse_config_at(text: &str, base: &Path) -> Result<ExperimentConfig> {
    let mut errors = Vec::new();
    let sections = split_sections(text, &mut errors);
    let mut p = Parser {
        errors: &mut errors,
    };

    let mut command = None;
    let mut seed = DEFAULT_SEED;
    let mut csv = None;
    let mut report = None;
    for line in &sections.experiment {
        match line.key.as_str() {
            "command" => match line.value.parse::<Command>() {
                Ok(c) => command = Some(c),
                Err(e) => p.error(line, e),
            },
            "seed" => seed = p.scalar(line).unwrap_or(seed),
            "csv" => csv = Some(line.value.clone()),
            "report" => report = Some(line.value.clone()),
            _ => p.unknown(line, "experiment"),
        }
    }
    if command.is_none() && !sections.experiment.iter().any(|l| l.key == "command") {
        p.errors.push("[experiment]: missing `command`".into());
    }

    let model = if sections.model.is_empty() {
        None
    } else {
        parse_model(&sections.model, base, &mut p)
    };
    if let Some(c) = command {
        if c.needs_model() && model.is_none() && sections.model.is_empty() {
            p.errors
                .push(format!("command `{c}` needs a [model] section"));
        }
    }

    let params = parse_parameters(&sections.parameters, &mut p);
    if let Some(c) = command {
        check_required(c, &params, model.as_ref(), &mut p);
    }

    match command {
        Some(command) if errors.is_empty() => Ok(ExperimentConfig {
            command,
            model,
            params,
            seed,
            csv: csv.unwrap_or_else(|| format!("{command}.csv")),
            report: report.unwrap_or_else(|| format!("{command}.report.txt")),
        }),
        _ => Err(Error::Config(errors)),
    }
}

/// Reads and parses a configuration file; gate files resolve relative to it.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    parse_config_at(&text, &base)
}

fn split_sections(text: &str, errors: &mut Vec<String>) -> Sections {
    let mut sections = Sections::default();
    let mut current: Option<&str> = None;
    for (k, raw) in text.lines().enumerate() {
        let number = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            current = match name {
                "experiment" | "model" | "parameters" => Some(match name {
                    "experiment" => "experiment",
                    "model" => "model",
                    _ => "parameters",
                }),
                other => {
                    errors.push(format!("line {number}: unknown section [{other}]"));
                    None
                }
            };
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!(
                "line {number}: expected `key = value`, got `{line}`"
            ));
            continue;
        };
        let entry = Line {
            number,
            key: key.trim().to_ascii_lowercase(),
            value: value.trim().to_string(),
        };
        match current {
            Some("experiment") => sections.experiment.push(entry),
            Some("model") => sections.model.push(entry),
            Some(_) => sections.parameters.push(entry),
            None => errors.push(format!(
                "line {number}: `{}` appears outside a known section",
                entry.key
            )),
        }
    }
    sections
}

struct Parser<'a> {
    errors: &'a mut Vec<String>,
}

impl Parser<'_> {
    fn error(&mut self, line: &Line, message: impl fmt::Display) {
        self.errors
            .push(format!("line {} (`{}`): {message}", line.number, line.key));
    }

    fn unknown(&mut self, line: &Line, section: &str) {
        self.error(line, format!("unknown key in [{section}]"));
    }

    fn scalar<T: FromStr>(&mut self, line: &Line) -> Option<T> {
        match line.value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.error(line, format!("malformed value `{}`", line.value));
                None
            }
        }
    }

    fn list<T: FromStr>(&mut self, line: &Line) -> Option<Vec<T>> {
        let mut out = Vec::new();
        for item in line.value.split(',').map(str::trim) {
            match item.parse() {
                Ok(v) => out.push(v),
                Err(_) => {
                    self.error(line, format!("malformed number `{item}`"));
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn parse_model(lines: &[Line], base: &Path, p: &mut Parser) -> Option<ModelSpec> {
    let Some(kind) = lines.iter().find(|l| l.key == "type") else {
        p.errors.push("[model]: missing `type`".into());
        return None;
    };
    match kind.value.as_str() {
        "lattice" => parse_lattice(lines, p).map(ModelSpec::Lattice),
        "margulis" => {
            let mut side = None;
            for line in lines {
                match line.key.as_str() {
                    "type" => {}
                    "side" => side = p.scalar(line),
                    _ => p.unknown(line, "model"),
                }
            }
            if side.is_none() && !lines.iter().any(|l| l.key == "side") {
                p.errors.push("[model]: margulis needs `side`".into());
            }
            side.map(|side| ModelSpec::Margulis { side })
        }
        "fermi-sea" => {
            let mut n = None;
            let mut fill = None;
            for line in lines {
                match line.key.as_str() {
                    "type" => {}
                    "n" => n = p.scalar(line),
                    "fill" => fill = p.scalar(line),
                    _ => p.unknown(line, "model"),
                }
            }
            match (n, fill) {
                (Some(n), Some(fill)) => Some(ModelSpec::FermiSea { n, fill }),
                _ => {
                    p.errors
                        .push("[model]: fermi-sea needs `n` and `fill`".into());
                    None
                }
            }
        }
        "clock" => parse_clock(lines, base, p).map(ModelSpec::Clock),
        other => {
            p.error(
                kind,
                format!(
                    "unknown model type `{other}` (expected lattice, margulis, clock or fermi-sea)"
                ),
            );
            None
        }
    }
}

fn parse_clock(lines: &[Line], base: &Path, p: &mut Parser) -> Option<GateList> {
    let mut text = String::new();
    for line in lines {
        match line.key.as_str() {
            "type" => {}
            "gates" => match std::fs::read_to_string(base.join(&line.value)) {
                Ok(content) => text.push_str(&content),
                Err(e) => p.error(line, format!("cannot read gate file `{}`: {e}", line.value)),
            },
            "gate" => {
                text.push_str(&line.value);
                text.push('\n');
            }
            "qubits" => text.push_str(&format!("qubits {}\n", line.value)),
            _ => p.unknown(line, "model"),
        }
    }
    match text.parse::<GateList>() {
        Ok(list) if !list.is_empty() => Some(list),
        Ok(_) => {
            p.errors.push("[model]: clock model has no gates".into());
            None
        }
        Err(e) => {
            p.errors.push(format!("[model]: gate list: {e}"));
            None
        }
    }
}

fn parse_lattice(lines: &[Line], p: &mut Parser) -> Option<LatticeSpec> {
    let mut dims: Option<Vec<usize>> = None;
    let mut boundary = Boundary::Open;
    let mut orbitals = 1;
    let mut hop = None;
    let mut onsite = None;
    let mut domains = Vec::new();
    let mut hoppings = Vec::new();
    let mut disorder = None;
    let mut range = None;
    let start = p.errors.len();
    for line in lines {
        match line.key.as_str() {
            "type" => {}
            "dims" => dims = p.list(line),
            "boundary" => match line.value.as_str() {
                "open" => boundary = Boundary::Open,
                "periodic" => boundary = Boundary::Periodic,
                other => p.error(
                    line,
                    format!("boundary must be open or periodic, got `{other}`"),
                ),
            },
            "orbitals" => orbitals = p.scalar(line).unwrap_or(1),
            "hop" => hop = p.scalar::<f64>(line),
            "onsite" => onsite = p.scalar::<f64>(line),
            "range" => range = p.scalar::<usize>(line),
            "domain" => {
                // label lo_1 .. lo_d hi_1 .. hi_d
                let tokens: Vec<&str> = line.value.split_whitespace().collect();
                let coords: std::result::Result<Vec<usize>, _> =
                    tokens.iter().skip(1).map(|t| t.parse()).collect();
                match coords {
                    Ok(c) if !tokens.is_empty() && !c.is_empty() && c.len() % 2 == 0 => {
                        let half = c.len() / 2;
                        domains.push(Domain {
                            label: tokens[0].to_string(),
                            lo: c[..half].to_vec(),
                            hi: c[half..].to_vec(),
                        })
                    }
                    _ => p.error(line, "expected `label lo.. hi..` with integer corners"),
                }
            }
            "hopping" => match parse_hopping(&line.value) {
                Ok(h) => hoppings.push(h),
                Err(e) => p.error(line, e),
            },
            "disorder" => {
                let tokens: Vec<&str> = line.value.split_whitespace().collect();
                match (
                    tokens.first().and_then(|t| t.parse().ok()),
                    tokens.get(1),
                    tokens.get(2).and_then(|t| t.parse().ok()),
                ) {
                    (Some(key), Some(domain), Some(amplitude)) if tokens.len() == 3 => {
                        disorder = Some(Disorder {
                            key,
                            domain: domain.to_string(),
                            amplitude,
                        })
                    }
                    _ => p.error(line, "expected `key domain W`"),
                }
            }
            _ => p.unknown(line, "model"),
        }
    }
    let Some(dims) = dims else {
        if !lines.iter().any(|l| l.key == "dims") {
            p.errors.push("[model]: lattice needs `dims`".into());
        }
        return None;
    };
    let mut spec = match hop {
        Some(h) => LatticeSpec::uniform(&dims, boundary, h),
        None => LatticeSpec::uniform(&dims, boundary, 0.0),
    };
    if hop.is_none() {
        spec.hoppings.clear();
    }
    spec.orbitals = orbitals;
    spec.domains = domains;
    spec.hoppings.extend(hoppings);
    if let Some(e) = onsite {
        spec = spec.with_onsite(e);
    }
    spec.disorder = disorder;
    spec.range = range.unwrap_or_else(|| {
        spec.hoppings
            .iter()
            .flat_map(|h| h.displacement.iter().map(|t| t.unsigned_abs() as usize))
            .max()
            .unwrap_or(1)
            .max(1)
    });
    if p.errors.len() > start {
        return None;
    }
    if spec.hoppings.is_empty() {
        p.errors
            .push("[model]: lattice has no hopping terms (give `hop` or `hopping`)".into());
        return None;
    }
    if let Err(e) = spec.validate() {
        p.errors.push(format!("[model]: {e}"));
        return None;
    }
    Some(spec)
}

/// `o1 o2 D1 D2 t_1,..,t_d re im`; `*` matches any domain.
fn parse_hopping(value: &str) -> std::result::Result<HoppingEntry, String> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    if tokens.len() != 7 {
        return Err("expected `o1 o2 domain1 domain2 t1,..,td re im`".into());
    }
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| format!("malformed number `{t}`"))
    };
    let int = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| format!("malformed orbital `{t}`"))
    };
    let displacement = tokens[4]
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("malformed displacement `{t}`"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let domain = |t: &str| {
        if t == "*" {
            ANY_DOMAIN.to_string()
        } else {
            t.to_string()
        }
    };
    Ok(HoppingEntry {
        from_orbital: int(tokens[0])?,
        to_orbital: int(tokens[1])?,
        from_domain: domain(tokens[2]),
        to_domain: domain(tokens[3]),
        displacement,
        amplitude: Complex64::new(num(tokens[5])?, num(tokens[6])?),
    })
}

fn parse_entries(value: &str) -> std::result::Result<Entries, String> {
    if value == "all" {
        return Ok(Entries::All);
    }
    let mut list = Vec::new();
    for item in value.split(',').map(str::trim) {
        let (i, j) = item
            .split_once(':')
            .ok_or_else(|| format!("entry `{item}` is not of the form i:j"))?;
        let i = i
            .trim()
            .parse()
            .map_err(|_| format!("malformed index `{i}`"))?;
        let j = j
            .trim()
            .parse()
            .map_err(|_| format!("malformed index `{j}`"))?;
        list.push((i, j));
    }
    Ok(Entries::List(list))
}

fn parse_initial(value: &str) -> std::result::Result<InitialState, String> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    let arg = |t: Option<&&str>| t.and_then(|t| t.parse::<f64>().ok());
    match tokens.as_slice() {
        ["site", k] => k
            .parse()
            .map(InitialState::Site)
            .map_err(|_| format!("malformed site `{k}`")),
        ["thermal", _] => arg(tokens.get(1))
            .filter(|b| *b >= 0.0)
            .map(InitialState::Thermal)
            .ok_or_else(|| "thermal needs a non-negative beta".into()),
        ["fermi-sea", _] => arg(tokens.get(1))
            .filter(|f| (0.0..=1.0).contains(f))
            .map(InitialState::FermiSea)
            .ok_or_else(|| "fermi-sea needs a fill fraction in [0, 1]".into()),
        _ => Err(format!(
            "expected `site k`, `thermal beta` or `fermi-sea fill`, got `{value}`"
        )),
    }
}

fn parse_parameters(lines: &[Line], p: &mut Parser) -> Parameters {
    let mut out = Parameters::default();
    for line in lines {
        let key = line.key.as_str();
        match key {
            "beta" | "t" | "t1" | "t2" | "eta" | "omega" | "c" => {
                if let Some(v) = p.list::<f64>(line) {
                    if v.iter().any(|x| !x.is_finite()) {
                        p.error(line, "values must be finite");
                    }
                    if key == "beta" && v.iter().any(|&b| b < 0.0) {
                        p.error(line, "beta must be non-negative");
                    }
                    if (key == "eta" || key == "c") && v.iter().any(|&x| x <= 0.0) {
                        p.error(line, format!("{key} must be positive"));
                    }
                    let slot = match key {
                        "beta" => &mut out.beta,
                        "t" => &mut out.t,
                        "t1" => &mut out.t1,
                        "t2" => &mut out.t2,
                        "eta" => &mut out.eta,
                        "omega" => &mut out.omega,
                        _ => &mut out.c,
                    };
                    *slot = v;
                }
            }
            "degree" | "d" => out.degree = p.list(line).unwrap_or_default(),
            "order" | "k" => out.order = p.list(line).unwrap_or_default(),
            "l" | "length" => out.lengths = p.list(line).unwrap_or_default(),
            "eps_pa" | "eps2" | "eps" | "delta" => {
                if let Some(v) = p.scalar::<f64>(line) {
                    if !(v > 0.0) || !v.is_finite() {
                        p.error(line, "tolerances must be positive");
                    }
                    if key == "delta" && v >= 1.0 {
                        p.error(line, "delta must be below 1");
                    }
                    match key {
                        "eps_pa" => out.eps_pa = v,
                        "eps2" => out.eps2 = v,
                        "eps" => out.eps = v,
                        _ => out.delta = v,
                    }
                }
            }
            "delta_qsvt" => {
                if let Some(v) = p.scalar::<f64>(line) {
                    if !(v >= 0.0) {
                        p.error(line, "delta_qsvt must be non-negative");
                    }
                    out.delta_qsvt = v;
                }
            }
            "samples" => {
                if let Some(v) = p.scalar::<usize>(line) {
                    if v == 0 {
                        p.error(line, "samples must be positive");
                    }
                    out.samples = v;
                }
            }
            "threshold" => out.threshold = p.scalar(line),
            "entries" => match parse_entries(&line.value) {
                Ok(e) => out.entries = e,
                Err(e) => p.error(line, e),
            },
            "m0" => match parse_initial(&line.value) {
                Ok(m) => out.m0 = m,
                Err(e) => p.error(line, e),
            },
            "target" => match line.value.as_str() {
                "fermi-dirac" | "log-fermi" => out.target = line.value.clone(),
                other => p.error(
                    line,
                    format!("target must be fermi-dirac or log-fermi, got `{other}`"),
                ),
            },
            _ => p.unknown(line, "parameters"),
        }
    }
    out
}

fn check_required(
    command: Command,
    params: &Parameters,
    model: Option<&ModelSpec>,
    p: &mut Parser,
) {
    let mut need = |name: &str, empty: bool| {
        if empty {
            p.errors.push(format!(
                "command `{command}` needs a non-empty `{name}` sweep"
            ));
        }
    };
    match command {
        Command::ThermalEntry | Command::EnergyDensity | Command::FreeEnergy => {
            need("beta", params.beta.is_empty())
        }
        Command::BaselineCompare => {
            need("beta", params.beta.is_empty());
            need("order", params.order.is_empty());
        }
        Command::DynamicsEntry => need("t", params.t.is_empty() && params.t1.is_empty()),
        Command::Greens => {
            need("beta", params.beta.is_empty());
            need("eta", params.eta.is_empty());
            need("omega", params.omega.is_empty());
        }
        Command::ParticleDensity => {
            let sea = matches!(model, Some(ModelSpec::FermiSea { .. }));
            need("beta", !sea && params.beta.is_empty());
        }
        Command::ClockOverlap => need("L", params.lengths.is_empty()),
        Command::Theorem1Demo => need("t", params.t.is_empty()),
        Command::ApproxBound => {
            need("c", params.c.is_empty());
            need("degree", params.degree.is_empty());
        }
    }
    if !params.t1.is_empty() && params.t1.len() != params.t2.len() {
        p.errors
            .push("`t1` and `t2` must have the same length".into());
    }
    if command == Command::Theorem1Demo
        && model.is_some()
        && !matches!(model, Some(ModelSpec::Clock(_)))
    {
        p.errors.push("theorem1-demo needs a clock model".into());
    }
    let hamiltonian = matches!(
        model,
        Some(ModelSpec::Lattice(_) | ModelSpec::Margulis { .. })
    );
    let wants_h = matches!(
        command,
        Command::ThermalEntry
            | Command::DynamicsEntry
            | Command::Greens
            | Command::EnergyDensity
            | Command::FreeEnergy
            | Command::BaselineCompare
    );
    if wants_h && model.is_some() && !hamiltonian && !matches!(model, Some(ModelSpec::Clock(_))) {
        p.errors.push(format!(
            "command `{command}` needs a lattice, margulis or clock model"
        ));
    }
}
