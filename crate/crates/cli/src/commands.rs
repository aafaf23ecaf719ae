//! The four subcommands, callable without a process boundary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dsm::diagnostics::{disk_oracle_error, lemma_sweep};
use dsm::indicator::{superlevel_components, Component, IndicatorGrid};
use dsm::measurement::{add_noise, FieldSamples, Geometry, NoiseSpec, SampleKind};
use dsm::pipeline::{incident_seed, reconstruct, synthesize, IncidentData};
use dsm::{Dim, Point, WaveContext};

use crate::config::{Config, DataSelection};
use crate::error::{CliError, CliResult};
use crate::io::{format_grid_csv, heatmap_ppm, read_samples, write_atomic, write_samples, SampleMeta};

fn eps_label(e: f64) -> String {
    format!("{e}")
}

fn kinds(sel: DataSelection) -> Vec<SampleKind> {
    let mut v = Vec::new();
    if sel.near() {
        v.push(SampleKind::Near);
    }
    if sel.far() {
        v.push(SampleKind::Far);
    }
    v
}

fn noisy(data: &IncidentData, kind: SampleKind, epsilon: f64, seed: u64, l: usize) -> CliResult<FieldSamples> {
    let clean = data.samples(kind);
    if epsilon == 0.0 {
        return Ok(clean.clone());
    }
    Ok(add_noise(clean, &NoiseSpec::new(epsilon, incident_seed(seed, l))?)?)
}

/// Writes one sample file per incident, field type and noise level, and
/// returns their paths in writing order.
pub fn cmd_synthesize(cfg: &Config, out: &Path) -> CliResult<Vec<PathBuf>> {
    let ctx = cfg.context()?;
    let (shapes, incidents) = cfg.problem()?;
    let syn = synthesize(&ctx, &shapes, &incidents, &cfg.synthesis(&ctx))?;
    let mut written = Vec::new();
    for (l, data) in syn.data.iter().enumerate() {
        for kind in kinds(cfg.data) {
            for &e in &cfg.epsilons {
                let s = noisy(data, kind, e, cfg.seed, l)?;
                let path = out.join(format!("{}_inc{l}_eps{}.csv", kind.as_str(), eps_label(e)));
                let meta = SampleMeta {
                    k: ctx.k(),
                    epsilon: e,
                    seed: cfg.seed,
                };
                write_samples(&path, &s, &meta)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn same_geometry(a: &Geometry, b: &Geometry) -> bool {
    let close = |p: &Point, q: &Point| p.distance(q) <= 1e-12 * (1.0 + p.norm());
    match (a, b) {
        (Geometry::Far { directions: x }, Geometry::Far { directions: y }) => {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| close(p.as_point(), q.as_point()))
        }
        (Geometry::Near { radius: r, points: x }, Geometry::Near { radius: s, points: y }) => {
            (r - s).abs() <= 1e-12 * r && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| close(p, q))
        }
        _ => false,
    }
}

/// Loads sample files that describe one experiment.
pub fn load_datasets(cfg: &Config, files: &[PathBuf]) -> CliResult<Vec<FieldSamples>> {
    let ctx = cfg.context()?;
    if files.is_empty() {
        return Err(CliError::Config("no data files given".into()));
    }
    let mut out: Vec<FieldSamples> = Vec::new();
    for f in files {
        let s = read_samples(f)?;
        if (s.k - ctx.k()).abs() > 1e-12 * ctx.k() {
            return Err(CliError::data(
                f,
                format!("k = {} differs from the configured {}", s.k, ctx.k()),
            ));
        }
        if let Some(first) = out.first() {
            if !same_geometry(first.geometry(), s.samples.geometry()) {
                return Err(CliError::data(f, "sample geometry differs from the first file"));
            }
        }
        out.push(s.samples);
    }
    Ok(out)
}

/// Images the data and writes `<name>.csv` and `<name>.ppm`.
pub fn write_image(img: &IndicatorGrid, out: &Path, name: &str) -> CliResult<()> {
    write_atomic(&out.join(format!("{name}.csv")), format_grid_csv(img).as_bytes())?;
    write_atomic(&out.join(format!("{name}.ppm")), &heatmap_ppm(img))
}

/// Max-combined normalized indicator of the given sample files.
pub fn cmd_image(cfg: &Config, files: &[PathBuf], out: &Path, name: &str) -> CliResult<IndicatorGrid> {
    let ctx = cfg.context()?;
    let data = load_datasets(cfg, files)?;
    let img = reconstruct(&ctx, &data, &cfg.grid(&ctx)?)?;
    write_image(&img, out, name)?;
    Ok(img)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub dims: Vec<Dim>,
    /// Forces one quadrature size for every dimension.
    pub nquad: Option<usize>,
    pub pairs: usize,
    pub rmax: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dims: vec![Dim::Two, Dim::Three],
            nquad: None,
            pairs: 200,
            rmax: 4.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Metric {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Correlation identity sweeps and the disk oracle; fails with the names of
/// the metrics above tolerance.
pub fn cmd_verify(opts: &VerifyOptions, out: &Path) -> CliResult<Vec<Metric>> {
    let mut metrics = Vec::new();
    for &dim in &opts.dims {
        let ctx = WaveContext::unit_wavelength(dim);
        let nquad = opts.nquad.unwrap_or(match dim {
            Dim::Two => 512,
            Dim::Three => 64,
        });
        let r = lemma_sweep(&ctx, opts.rmax, opts.pairs, nquad, opts.seed)?;
        metrics.push(Metric {
            name: format!("lemma_{}d_nquad{nquad}", dim.count()),
            value: r.max_error,
            tolerance: 1e-8,
        });
    }
    let ctx = WaveContext::unit_wavelength(Dim::Two);
    metrics.push(Metric {
        name: "disk_oracle_relative_l2".into(),
        value: disk_oracle_error(&ctx, 0.3, 1.5, ctx.lambda() / 40.0, 64)?,
        tolerance: 0.02,
    });
    let mut report = String::from("metric,value,tolerance,status\n");
    for m in &metrics {
        let status = if m.passed() { "pass" } else { "fail" };
        let _ = writeln!(report, "{},{:.6e},{:.1e},{status}", m.name, m.value, m.tolerance);
    }
    write_atomic(&out.join("verify_report.csv"), report.as_bytes())?;
    let failed: Vec<String> = metrics
        .iter()
        .filter(|m| !m.passed())
        .map(|m| format!("{} = {:.3e} > {:.1e}", m.name, m.value, m.tolerance))
        .collect();
    if failed.is_empty() {
        Ok(metrics)
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}

/// One imaging run of [`cmd_reproduce`].
#[derive(Clone, Debug)]
pub struct Run {
    pub kind: SampleKind,
    pub epsilon: f64,
    pub seed: u64,
    pub argmax: Point,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub scenario: String,
    pub cutoff: f64,
    pub runs: Vec<Run>,
    pub files: Vec<PathBuf>,
}

/// Synthesizes the preset's data, then for every field type, noise level
/// and seed writes the data, the image and a component report.
/// Noise-free runs ignore the seed and are produced once.
pub fn cmd_reproduce(id: &str, base: &Config, epsilons: &[f64], seeds: &[u64], out: &Path) -> CliResult<Reproduction> {
    let mut cfg = base.clone();
    cfg.scenario = Some(id.to_string());
    dsm::scenarios::build(id).map_err(|e| CliError::Config(e.to_string()))?;
    let ctx = cfg.context()?;
    let (shapes, incidents) = cfg.problem()?;
    let grid = cfg.grid(&ctx)?;
    let syn = synthesize(&ctx, &shapes, &incidents, &cfg.synthesis(&ctx))?;
    let mut runs = Vec::new();
    let mut files = Vec::new();
    let mut report = String::new();
    let _ = writeln!(
        report,
        "scenario {id}: {} incident(s), forward cells {}, h {}, converged {}",
        incidents.len(),
        syn.solution.grid.len(),
        syn.solution.grid.h(),
        syn.solution.converged
    );
    for kind in kinds(cfg.data) {
        for &e in epsilons {
            let run_seeds: &[u64] = if e == 0.0 { &seeds[..1.min(seeds.len())] } else { seeds };
            for &seed in run_seeds {
                let tag = format!("{}_eps{}_seed{seed}", kind.as_str(), eps_label(e));
                let data = syn
                    .data
                    .iter()
                    .enumerate()
                    .map(|(l, d)| noisy(d, kind, e, seed, l))
                    .collect::<CliResult<Vec<_>>>()?;
                for (l, s) in data.iter().enumerate() {
                    let path = out.join(format!("data_{tag}_inc{l}.csv"));
                    write_samples(
                        &path,
                        s,
                        &SampleMeta {
                            k: ctx.k(),
                            epsilon: e,
                            seed,
                        },
                    )?;
                    files.push(path);
                }
                let img = reconstruct(&ctx, &data, &grid)?;
                let name = format!("image_{tag}");
                write_image(&img, out, &name)?;
                files.push(out.join(format!("{name}.csv")));
                files.push(out.join(format!("{name}.ppm")));
                let (_, argmax) = img.argmax();
                let components = superlevel_components(&img, cfg.cutoff)?;
                let _ = writeln!(
                    report,
                    "{tag}: argmax ({:.4}, {:.4}), {} component(s) at cutoff {}",
                    argmax.x(),
                    argmax.y(),
                    components.len(),
                    cfg.cutoff
                );
                for (i, c) in components.iter().enumerate() {
                    let (w, h) = c.extent();
                    let _ = writeln!(
                        report,
                        "  component {i}: nodes {}, centroid ({:.4}, {:.4}), extent {:.4} x {:.4}",
                        c.len(),
                        c.centroid.x(),
                        c.centroid.y(),
                        w,
                        h
                    );
                }
                runs.push(Run {
                    kind,
                    epsilon: e,
                    seed,
                    argmax,
                    components,
                });
            }
        }
    }
    let path = out.join("report.txt");
    write_atomic(&path, report.as_bytes())?;
    files.push(path);
    Ok(Reproduction {
        scenario: id.to_string(),
        cutoff: cfg.cutoff,
        runs,
        files,
    })
}
