use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{Command, ExperimentConfig, InitialState, ModelSpec, Parameters};
use super::table::{ccol, col, emit_csv, Column, Table, Value};
use crate::baseline::{local_dynamics_entry, local_thermal_entry};
use crate::block_encoding::{dilate, BlockEncoding};
use crate::chebyshev::{
    fermi_dirac_bound, fermi_dirac_degree, fermi_dirac_scaled, greens_bound_terms, greens_degree,
    log_fermi_approx, ChebyshevApprox, GRID_POINTS,
};
use crate::clock::{
    averaging_grid, build_clock_hamiltonian, gap_lower_bound, grid_search_overlap, hopping_chain,
    limiting_overlap_average, randomized_time_average, theorem1_instance, GateList,
};
use crate::correlation::{
    exact_reference, greens_fourier, thermal_correlation, time_evolved_correlation, Degree,
    PipelineOptions, Reference,
};
use crate::error::{invalid, Error, Result};
use crate::estimator::{
    energy_density_all_terms, estimate_energy_density, estimate_entry, exact_free_energy_density,
    free_energy_density, particle_density,
};
use crate::linalg::{trace, Mat, ONE, ZERO};
use crate::oracle::{build_fermi_sea, build_margulis, build_tight_binding, OracleTuple};

/// Slack for floating-point rounding in declared-vs-measured comparisons.
pub const FP_ALLOWANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub output_dir: PathBuf,
    /// Overrides the configured seed.
    pub seed: Option<u64>,
    /// Worker threads for sweep points; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            output_dir: PathBuf::from("."),
            seed: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
    pub table: Table,
    pub report: String,
}

/// Rows and report text produced by one sweep point.
type PointOutput = (Vec<Vec<Value>>, String);

/// Result of running the sweep without touching the file system. `error`
/// holds the first failure; `table` then holds the rows before it.
pub struct Execution {
    pub table: Table,
    pub report: String,
    pub error: Option<Error>,
}

/// Runs the experiment and writes its CSV and report into the output
/// directory. On failure the rows computed before the failing sweep point
/// are still written, followed by a truncation marker.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    std::fs::create_dir_all(&opts.output_dir)?;
    let csv_path = opts.output_dir.join(&cfg.csv);
    let report_path = opts.output_dir.join(&cfg.report);
    let exec = execute(cfg, opts.seed.unwrap_or(cfg.seed), opts.jobs)?;
    let note = exec.error.as_ref().map(ToString::to_string);
    emit_csv(&exec.table, &csv_path, note.as_deref())?;
    let mut report = exec.report;
    if let Some(n) = &note {
        let _ = writeln!(
            report,
            "\nTRUNCATED after {} rows: {n}",
            exec.table.rows.len()
        );
    }
    std::fs::write(&report_path, &report)?;
    match exec.error {
        Some(e) => Err(e),
        None => Ok(RunOutcome {
            csv_path,
            report_path,
            table: exec.table,
            report,
        }),
    }
}

/// Runs the sweep in memory.
pub fn execute(cfg: &ExperimentConfig, seed: u64, jobs: usize) -> Result<Execution> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| invalid("jobs", e.to_string()))?;
    let mut report = header(cfg, seed);
    let model = match &cfg.model {
        Some(m) => Some(Model::build(m)?),
        None => None,
    };
    if let Some(m) = &model {
        let _ = writeln!(report, "model: {}", m.describe());
    }
    let ctx = Context {
        cfg,
        params: &cfg.params,
        model: model.as_ref(),
        seed,
    };
    let (columns, points): (Vec<Column>, Vec<Point>) = ctx.plan()?;
    let outputs: Vec<Result<PointOutput>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(k, p)| ctx.run_point(k, p))
            .collect()
    });
    let mut table = Table::new(columns);
    let mut error = None;
    for out in outputs {
        match out {
            Ok((rows, text)) => {
                table.rows.extend(rows);
                report.push_str(&text);
            }
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    Ok(Execution {
        table,
        report,
        error,
    })
}

fn header(cfg: &ExperimentConfig, seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment: {}", cfg.command);
    let _ = writeln!(out, "seed: {seed}");
    out
}

/// Built model: a Hamiltonian oracle, or a fixed correlation matrix.
struct Model {
    spec: ModelSpec,
    oracle: OracleTuple,
}

impl Model {
    fn build(spec: &ModelSpec) -> Result<Self> {
        let oracle = match spec {
            ModelSpec::Lattice(l) => build_tight_binding(l)?,
            ModelSpec::Margulis { side } => build_margulis(*side)?,
            ModelSpec::Clock(g) => build_clock_hamiltonian(g)?,
            ModelSpec::FermiSea { n, fill } => build_fermi_sea(*n, *fill)?,
        };
        Ok(Model {
            spec: spec.clone(),
            oracle,
        })
    }

    fn describe(&self) -> String {
        format!(
            "{} (n = {}, s = {}, max |entry| = {}, normalization = {})",
            self.oracle.describe(),
            self.oracle.n(),
            self.oracle.s(),
            self.oracle.max_entry(),
            self.oracle.normalization()
        )
    }

    fn hamiltonian(&self) -> Result<&OracleTuple> {
        match self.spec {
            ModelSpec::FermiSea { .. } => {
                Err(invalid("model", "a fermi-sea model has no Hamiltonian"))
            }
            _ => Ok(&self.oracle),
        }
    }

    fn gates(&self) -> Result<&GateList> {
        match &self.spec {
            ModelSpec::Clock(g) => Ok(g),
            _ => Err(invalid("model", "this command needs a clock model")),
        }
    }
}

/// One sweep point.
#[derive(Debug, Clone, Copy)]
enum Point {
    Thermal {
        beta: f64,
        degree: Option<usize>,
    },
    Dynamics {
        t1: f64,
        t2: f64,
    },
    Greens {
        beta: f64,
        eta: f64,
        omega: f64,
        degree: Option<usize>,
    },
    Clock {
        length: usize,
    },
    Theorem1 {
        t: f64,
    },
    Baseline {
        beta: f64,
        order: usize,
        t: Option<f64>,
    },
    Approx {
        c: f64,
        degree: usize,
    },
    Density {
        beta: Option<f64>,
        degree: Option<usize>,
    },
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    params: &'a Parameters,
    model: Option<&'a Model>,
    seed: u64,
}

fn degrees(p: &Parameters) -> Vec<Option<usize>> {
    if p.degree.is_empty() {
        vec![None]
    } else {
        p.degree.iter().map(|&d| Some(d)).collect()
    }
}

fn entry_columns(leading: &[&str]) -> Vec<Column> {
    let mut out: Vec<Column> = leading.iter().map(|n| col(n)).collect();
    out.extend([
        col("i"),
        col("j"),
        ccol("block"),
        ccol("estimate"),
        ccol("exact"),
        col("eps1"),
        col("eps2"),
        col("delta"),
        col("samples"),
        col("declared_eps"),
        col("deviation"),
        col("within_declared"),
    ]);
    out
}

impl Context<'_> {
    fn model(&self) -> Result<&Model> {
        self.model
            .ok_or_else(|| invalid("model", "this command needs a model"))
    }

    fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            delta_qsvt: self.params.delta_qsvt,
            ..PipelineOptions::default()
        }
    }

    fn plan(&self) -> Result<(Vec<Column>, Vec<Point>)> {
        let p = self.params;
        let mut points = Vec::new();
        let columns = match self.cfg.command {
            Command::ThermalEntry => {
                for d in degrees(p) {
                    for &beta in &p.beta {
                        points.push(Point::Thermal { beta, degree: d });
                    }
                }
                entry_columns(&["beta", "degree"])
            }
            Command::DynamicsEntry => {
                if p.t1.is_empty() {
                    points.extend(p.t.iter().map(|&t| Point::Dynamics { t1: t, t2: t }));
                } else {
                    points.extend(
                        p.t1.iter()
                            .zip(&p.t2)
                            .map(|(&t1, &t2)| Point::Dynamics { t1, t2 }),
                    );
                }
                let mut c = entry_columns(&["t1", "t2"]);
                c.push(col("trace_drift"));
                c
            }
            Command::Greens => {
                for d in degrees(p) {
                    for &beta in &p.beta {
                        for &eta in &p.eta {
                            for &omega in &p.omega {
                                points.push(Point::Greens {
                                    beta,
                                    eta,
                                    omega,
                                    degree: d,
                                });
                            }
                        }
                    }
                }
                let mut c = entry_columns(&["beta", "eta", "omega", "degree"]);
                c.extend([col("eps_pa"), col("eps_ph"), col("delta_qsvt")]);
                c
            }
            Command::EnergyDensity | Command::FreeEnergy => {
                for d in degrees(p) {
                    for &beta in &p.beta {
                        points.push(Point::Density {
                            beta: Some(beta),
                            degree: d,
                        });
                    }
                }
                vec![
                    col("beta"),
                    col("degree"),
                    col("estimate"),
                    col("exact"),
                    col("samples"),
                    col("declared_eps"),
                    col("statistical_eps"),
                    col("deviation"),
                    col("within_declared"),
                ]
            }
            Command::ParticleDensity => {
                if p.beta.is_empty() {
                    points.push(Point::Density {
                        beta: None,
                        degree: None,
                    });
                } else {
                    for d in degrees(p) {
                        for &beta in &p.beta {
                            points.push(Point::Density {
                                beta: Some(beta),
                                degree: d,
                            });
                        }
                    }
                }
                vec![
                    col("beta"),
                    col("degree"),
                    col("estimate"),
                    col("exact"),
                    col("samples"),
                    col("declared_eps"),
                    col("statistical_eps"),
                    col("deviation"),
                    col("within_declared"),
                ]
            }
            Command::ClockOverlap => {
                points.extend(p.lengths.iter().map(|&length| Point::Clock { length }));
                vec![
                    col("L"),
                    col("spectrum_error"),
                    col("min_gap"),
                    col("gap_bound"),
                    col("grid_points"),
                    col("time_average"),
                    col("reference"),
                    col("tolerance"),
                    col("average_within"),
                    col("max_overlap"),
                    col("argmax_t"),
                    col("max_above_threshold"),
                ]
            }
            Command::Theorem1Demo => {
                points.extend(p.t.iter().map(|&t| Point::Theorem1 { t }));
                vec![
                    col("t"),
                    col("estimate"),
                    col("pipeline"),
                    col("exact"),
                    col("error_claim"),
                    col("samples"),
                    col("within_claim"),
                    col("threshold"),
                    col("accept"),
                ]
            }
            Command::BaselineCompare => {
                let times: Vec<Option<f64>> = if p.t.is_empty() {
                    vec![None]
                } else {
                    p.t.iter().map(|&t| Some(t)).collect()
                };
                for &order in &p.order {
                    for &beta in &p.beta {
                        for &t in &times {
                            points.push(Point::Baseline { beta, order, t });
                        }
                    }
                }
                vec![
                    col("method"),
                    col("quantity"),
                    col("beta"),
                    col("t"),
                    col("order"),
                    col("i"),
                    col("j"),
                    ccol("estimate"),
                    ccol("exact"),
                    col("error"),
                    col("certified_bound"),
                    col("work"),
                ]
            }
            Command::ApproxBound => {
                for &c in &p.c {
                    for &degree in &p.degree {
                        points.push(Point::Approx { c, degree });
                    }
                }
                vec![
                    col("target"),
                    col("c"),
                    col("degree"),
                    col("certified"),
                    col("bound_kind"),
                    col("measured"),
                    col("closed_form"),
                    col("measured_within"),
                ]
            }
        };
        Ok((columns, points))
    }

    fn point_seed(&self, point: usize, sub: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(((point as u64) << 32) | sub as u64)
    }

    fn run_point(&self, index: usize, point: &Point) -> Result<PointOutput> {
        match (*point, self.cfg.command) {
            (Point::Thermal { beta, degree }, _) => self.thermal(index, beta, degree),
            (Point::Dynamics { t1, t2 }, _) => self.dynamics(index, t1, t2),
            (
                Point::Greens {
                    beta,
                    eta,
                    omega,
                    degree,
                },
                _,
            ) => self.greens(index, beta, eta, omega, degree),
            (Point::Density { beta, degree }, Command::EnergyDensity) => {
                self.energy(index, beta.unwrap_or(0.0), degree)
            }
            (Point::Density { beta, degree }, Command::FreeEnergy) => {
                self.free_energy(index, beta.unwrap_or(0.0), degree)
            }
            (Point::Density { beta, degree }, _) => self.particles(index, beta, degree),
            (Point::Clock { length }, _) => self.clock(length),
            (Point::Theorem1 { t }, _) => self.theorem1(index, t),
            (Point::Baseline { beta, order, t }, _) => self.baseline(beta, order, t),
            (Point::Approx { c, degree }, _) => self.approx(c, degree),
        }
    }

    fn thermal_degree(
        &self,
        oracle: &OracleTuple,
        beta: f64,
        degree: Option<usize>,
    ) -> Result<usize> {
        match degree {
            Some(d) => Ok(d),
            None => fermi_dirac_degree(beta * oracle.normalization(), self.params.eps_pa),
        }
    }

    fn thermal_encoding(
        &self,
        oracle: &OracleTuple,
        beta: f64,
        degree: Option<usize>,
    ) -> Result<(BlockEncoding, usize)> {
        let d = self.thermal_degree(oracle, beta, degree)?;
        let be = thermal_correlation(oracle, beta, Degree::Fixed(d), &self.pipeline_options())?;
        Ok((be, d))
    }

    fn entry_rows(
        &self,
        index: usize,
        leading: Vec<Value>,
        be: &BlockEncoding,
        exact: &Mat,
    ) -> Result<(Vec<Vec<Value>>, f64)> {
        let p = self.params;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (k, (i, j)) in p.entries.expand(be.system_dim()).into_iter().enumerate() {
            let block = be.amplitude(i, j)? * be.alpha();
            let est = estimate_entry(be, i, j, p.eps2, p.delta, self.point_seed(index, k))?;
            let deviation = (block - exact[(i, j)]).norm();
            worst = worst.max(deviation);
            let mut row = leading.clone();
            row.extend([
                i.into(),
                j.into(),
                block.into(),
                est.value.into(),
                exact[(i, j)].into(),
                est.eps1.into(),
                est.eps2.into(),
                est.delta.into(),
                est.samples.into(),
                be.eps().into(),
                deviation.into(),
                (deviation <= be.eps() + FP_ALLOWANCE).into(),
            ]);
            rows.push(row);
        }
        Ok((rows, worst))
    }

    fn thermal(&self, index: usize, beta: f64, degree: Option<usize>) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let (be, d) = self.thermal_encoding(oracle, beta, degree)?;
        let h = oracle.materialize()?;
        let exact = exact_reference(&h, &Reference::Thermal { beta })?;
        let (rows, worst) = self.entry_rows(index, vec![beta.into(), d.into()], &be, &exact)?;
        let mut text = format!("\nbeta = {beta}, degree = {d}\n");
        let _ = writeln!(
            text,
            "  declared eps_Tot = {:e}, max measured entry deviation = {worst:e}",
            be.eps()
        );
        text.push_str(&indent(&be.report()));
        Ok((rows, text))
    }

    fn initial_state(&self, h: &Mat) -> Result<Mat> {
        let dim = h.nrows();
        Ok(match self.params.m0 {
            InitialState::Site(k) => {
                if k >= dim {
                    return Err(Error::IndexOutOfRange { index: k, dim });
                }
                Mat::from_fn(dim, dim, |r, c| if r == k && c == k { ONE } else { ZERO })
            }
            InitialState::Thermal(beta) => exact_reference(h, &Reference::Thermal { beta })?,
            InitialState::FermiSea(fill) => {
                let filled = (fill * dim as f64).round() as usize;
                Mat::from_fn(
                    dim,
                    dim,
                    |r, c| if r == c && r < filled { ONE } else { ZERO },
                )
            }
        })
    }

    fn dynamics(&self, index: usize, t1: f64, t2: f64) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let h = oracle.materialize()?;
        let m0 = self.initial_state(&h)?;
        let be_m0 = dilate(&m0)?;
        let be = time_evolved_correlation(oracle, &be_m0, t1, t2, &self.pipeline_options())?;
        let exact = exact_reference(
            &h,
            &Reference::Evolved {
                m0: m0.clone(),
                t1,
                t2,
            },
        )?;
        let drift = (trace(&be.extract_block()) - trace(&m0)).norm();
        let (mut rows, worst) = self.entry_rows(index, vec![t1.into(), t2.into()], &be, &exact)?;
        for row in &mut rows {
            row.push(drift.into());
        }
        let mut text = format!("\nt1 = {t1}, t2 = {t2}\n");
        let _ = writeln!(
            text,
            "  declared eps = {:e}, max measured entry deviation = {worst:e}, trace drift = {drift:e}",
            be.eps()
        );
        text.push_str(&indent(&be.report()));
        Ok((rows, text))
    }

    fn greens(
        &self,
        index: usize,
        beta: f64,
        eta: f64,
        omega: f64,
        degree: Option<usize>,
    ) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let s = oracle.normalization();
        let d = match degree {
            Some(d) => d,
            None => greens_degree(beta, s, eta, self.params.eps_pa)?,
        };
        let be = greens_fourier(
            oracle,
            beta,
            eta,
            omega,
            Degree::Fixed(d),
            &self.pipeline_options(),
        )?;
        let h = oracle.materialize()?;
        let exact = exact_reference(&h, &Reference::Greens { beta, eta, omega })?;
        let leading = vec![beta.into(), eta.into(), omega.into(), d.into()];
        let (mut rows, worst) = self.entry_rows(index, leading, &be, &exact)?;
        let budget = be.budget().copied().unwrap_or_default();
        for row in &mut rows {
            row.extend([
                budget.eps_pa.into(),
                budget.eps_ph.into(),
                budget.delta_qsvt.into(),
            ]);
        }
        let terms = greens_bound_terms(beta, s, eta, d);
        let mut text = format!("\nbeta = {beta}, eta = {eta}, omega = {omega}, degree = {d}\n");
        let _ = writeln!(
            text,
            "  eps_Tot = eps_PA + eps_ph + delta_qsvt = {:e} + {:e} + {:e} = {:e}",
            budget.eps_pa,
            budget.eps_ph,
            budget.delta_qsvt,
            be.eps()
        );
        let _ = writeln!(
            text,
            "  scalar bound terms: fermi {:e}, resolvent {:e}, direct resolvent {:e}",
            terms.fermi, terms.resolvent, terms.resolvent_direct
        );
        let _ = writeln!(text, "  max measured entry deviation = {worst:e}");
        text.push_str(&indent(&be.report()));
        Ok((rows, text))
    }

    fn energy(&self, index: usize, beta: f64, degree: Option<usize>) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let (be, d) = self.thermal_encoding(oracle, beta, degree)?;
        let p = self.params;
        let est = estimate_energy_density(&be, oracle, p.eps, p.delta, self.point_seed(index, 0))?;
        let h = oracle.materialize()?;
        let exact_m = exact_reference(&h, &Reference::Thermal { beta })?;
        let exact = energy_density_all_terms(&exact_m, oracle)?;
        // each term reads at most two entries weighted by |h_ij|
        let declared = 2.0 * oracle.max_entry() * be.eps();
        let deviation = (est.value - exact).abs();
        let row = vec![
            beta.into(),
            d.into(),
            est.value.into(),
            exact.into(),
            est.samples.into(),
            declared.into(),
            p.eps.into(),
            deviation.into(),
            (deviation <= declared + p.eps + FP_ALLOWANCE).into(),
        ];
        let text = format!(
            "\nbeta = {beta}, degree = {d}: energy density {:.6} (exact {exact:.6}) from {} of {} terms\n",
            est.value, est.samples, est.population
        );
        Ok((vec![row], text))
    }

    fn free_energy(&self, index: usize, beta: f64, degree: Option<usize>) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let p = self.params;
        let deg = degree.map_or(Degree::Target(p.eps_pa), Degree::Fixed);
        let est = free_energy_density(oracle, beta, deg, p.samples, self.point_seed(index, 0))?;
        let exact = exact_free_energy_density(&oracle.materialize()?, beta);
        let halfwidth = est.sampling_halfwidth(beta, p.delta);
        let deviation = (est.value - exact).abs();
        let row = vec![
            beta.into(),
            est.degree.into(),
            est.value.into(),
            exact.into(),
            est.samples.into(),
            est.certified_error.into(),
            halfwidth.into(),
            deviation.into(),
            (deviation <= est.certified_error + halfwidth + FP_ALLOWANCE).into(),
        ];
        let text = format!(
            "\nbeta = {beta}, degree = {}: free-energy density {:.6} (exact {exact:.6}), certified {:e} + sampling {:e}\n",
            est.degree, est.value, est.certified_error, halfwidth
        );
        Ok((vec![row], text))
    }

    fn particles(
        &self,
        index: usize,
        beta: Option<f64>,
        degree: Option<usize>,
    ) -> Result<PointOutput> {
        let model = self.model()?;
        let p = self.params;
        let (be, exact_m, d) = match (beta, &model.spec) {
            (None, ModelSpec::FermiSea { .. }) | (Some(_), ModelSpec::FermiSea { .. }) => {
                let m = model.oracle.materialize()?;
                (dilate(&m)?, m, None)
            }
            (Some(beta), _) => {
                let oracle = model.hamiltonian()?;
                let (be, d) = self.thermal_encoding(oracle, beta, degree)?;
                let exact = exact_reference(&oracle.materialize()?, &Reference::Thermal { beta })?;
                (be, exact, Some(d))
            }
            (None, _) => {
                return Err(invalid(
                    "beta",
                    "particle density of a Hamiltonian model needs beta",
                ))
            }
        };
        let est = particle_density(&be, p.samples, self.point_seed(index, 0))?;
        let exact = trace(&exact_m).re / exact_m.nrows() as f64;
        let halfwidth = ((2.0 / p.delta).ln() / (2.0 * p.samples as f64)).sqrt();
        let deviation = (est.value - exact).abs();
        let row = vec![
            beta.into(),
            d.into(),
            est.value.into(),
            exact.into(),
            est.samples.into(),
            be.eps().into(),
            halfwidth.into(),
            deviation.into(),
            (deviation <= be.eps() + halfwidth + FP_ALLOWANCE).into(),
        ];
        let text = format!(
            "\nbeta = {}: particle density {:.6} (exact {exact:.6}) from {} samples\n",
            beta.map_or("-".to_string(), |b| b.to_string()),
            est.value,
            est.samples
        );
        Ok((vec![row], text))
    }

    fn clock(&self, length: usize) -> Result<PointOutput> {
        let chain = hopping_chain(length)?;
        let spectrum_error = chain
            .values
            .iter()
            .zip(chain.analytic_values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let grid = averaging_grid(length);
        let average = randomized_time_average(length, &grid);
        let reference = limiting_overlap_average(length);
        let tolerance = 1.0 / (2.0 * (length + 2) as f64);
        let (t_best, best) = grid_search_overlap(length);
        let row = vec![
            length.into(),
            spectrum_error.into(),
            chain.min_gap().into(),
            gap_lower_bound(length).into(),
            grid.len().into(),
            average.into(),
            reference.into(),
            tolerance.into(),
            ((average - reference).abs() <= tolerance).into(),
            best.into(),
            t_best.into(),
            (best >= tolerance).into(),
        ];
        let mut text = format!("\nL = {length}\n");
        let _ = writeln!(
            text,
            "  spectrum vs 2cos(pi k/(L+2)): max error {spectrum_error:e}"
        );
        let _ = writeln!(
            text,
            "  time average over {} grid points = {average:.6}, reference 3/(2(L+2)) = {reference:.6}, tolerance {tolerance:.6}",
            grid.len()
        );
        let _ = writeln!(text, "  max overlap {best:.6} at t = {t_best:.4}");
        Ok((vec![row], text))
    }

    fn theorem1(&self, index: usize, t: f64) -> Result<PointOutput> {
        let gates = self.model()?.gates()?;
        let p = self.params;
        let result = theorem1_instance(gates, t, p.eps2, p.delta, self.point_seed(index, 0))?;
        let length = gates.padded()?.len();
        let threshold = p.threshold.unwrap_or(1.0 / (2.0 * (length + 2) as f64));
        let row = vec![
            t.into(),
            result.estimate.value.re.into(),
            result.pipeline_value.into(),
            result.exact.into(),
            result.estimate.error_claim().into(),
            result.estimate.samples.into(),
            result.within_claim().into(),
            threshold.into(),
            result.accepts(threshold).into(),
        ];
        let text = format!(
            "\nt = {t}: estimate {:.6}, pipeline {:.6}, exact {:.6}, claim {:e}, accept = {}\n",
            result.estimate.value.re,
            result.pipeline_value,
            result.exact,
            result.estimate.error_claim(),
            result.accepts(threshold)
        );
        Ok((vec![row], text))
    }

    fn baseline(&self, beta: f64, order: usize, t: Option<f64>) -> Result<PointOutput> {
        let oracle = self.model()?.hamiltonian()?;
        let h = oracle.materialize()?;
        let pairs = self.params.entries.expand(oracle.dim());
        let mut rows = Vec::new();
        let mut text = String::new();
        let (quantity, be, exact) = match t {
            None => {
                let (be, _) = self.thermal_encoding(oracle, beta, None)?;
                (
                    "thermal",
                    be,
                    exact_reference(&h, &Reference::Thermal { beta })?,
                )
            }
            Some(t) => {
                let m0 = self.initial_state(&h)?;
                let be = time_evolved_correlation(
                    oracle,
                    &dilate(&m0)?,
                    t,
                    t,
                    &self.pipeline_options(),
                )?;
                let exact = exact_reference(&h, &Reference::Evolved { m0, t1: t, t2: t })?;
                ("dynamics", be, exact)
            }
        };
        let m0 = self.initial_state(&h)?;
        let calls = be.resources().oracle_calls;
        for (i, j) in pairs {
            let classical = match t {
                None => local_thermal_entry(oracle, beta, i, j, order)?,
                Some(t) => local_dynamics_entry(oracle, |k, l| m0[(k, l)], t, i, j, order)?,
            };
            let quantum = be.amplitude(i, j)? * be.alpha();
            let e = exact[(i, j)];
            let common = |method: &str| -> Vec<Value> {
                vec![
                    method.into(),
                    quantity.into(),
                    beta.into(),
                    t.into(),
                    order.into(),
                    i.into(),
                    j.into(),
                ]
            };
            let mut q = common("quantum-pipeline");
            q.extend([
                quantum.into(),
                e.into(),
                (quantum - e).norm().into(),
                be.eps().into(),
                calls.map_or(Value::Empty, |c| c.round().into()),
            ]);
            rows.push(q);
            let mut c = common("classical-local");
            c.extend([
                classical.value.into(),
                e.into(),
                (classical.value - e).norm().into(),
                classical.certified_bound.into(),
                classical.work.into(),
            ]);
            rows.push(c);
            let _ = writeln!(
                text,
                "{quantity} ({i}, {j}) K = {order}: classical error {:e} (bound {:e}, {} reads), pipeline error {:e}",
                (classical.value - e).norm(),
                classical.certified_bound,
                classical.work,
                (quantum - e).norm()
            );
        }
        Ok((rows, text))
    }

    fn approx(&self, c: f64, degree: usize) -> Result<PointOutput> {
        let (approx, closed): (ChebyshevApprox, f64) = match self.params.target.as_str() {
            "log-fermi" => (log_fermi_approx(c, 1.0, degree)?, f64::NAN),
            _ => (
                fermi_dirac_scaled(c, degree, 1.0)?,
                fermi_dirac_bound(c, degree),
            ),
        };
        let measured = approx
            .measured_error(GRID_POINTS)
            .ok_or_else(|| invalid("target", "target is not evaluable on the grid"))?;
        let row = vec![
            self.params.target.clone().into(),
            c.into(),
            degree.into(),
            approx.certified_bound.into(),
            approx.bound_kind.to_string().into(),
            measured.into(),
            if closed.is_nan() {
                Value::Empty
            } else {
                closed.into()
            },
            (measured <= approx.certified_bound).into(),
        ];
        let text = format!(
            "\n{} c = {c}, d = {degree}: measured {measured:e} <= certified {:e} ({})\n",
            self.params.target, approx.certified_bound, approx.bound_kind
        );
        Ok((vec![row], text))
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

/// Convenience for tests and the CLI: parse a file and run it.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let cfg = super::config::load_config(path)?;
    run_experiment(&cfg, opts)
}
