//! Scenario files: parsing, validation and report generation for the command line.
//!
//! Rendering is pure: [`Scenario::render`] returns the report files as strings and
//! [`Scenario::run`] writes them, so identical configs give identical bytes.

mod config;

pub use config::{
    Command, CorrelationSection, CountSection, Grid, GuinandSection, ResiduesSection, ScanSection,
    ScenarioSpec, TransformSection, ZetaMethod, ZetaSection,
};

use num_complex::Complex64;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::flow::{
    CorrelationKernel, Observable, ObservableSpec, TransformEngine, TransformOptions,
};
use crate::numeric::ordered_par_map;
use crate::orthospectrum::{length_spectrum_oriented, starting_length, steiner_count, Orientation};
use crate::spectral::{
    atom_extract, check_beta, dirac_comb, guinand_meyer_measure, lambda_beta, singularity_scan,
    ScanOptions,
};
use crate::zeta::{ConvexZeta, ZetaOptions};

const MAX_GRID: usize = 1_000_000;
const MAX_THREADS: usize = 1024;
const DEFAULT_SCALE_RATIOS: [f64; 5] = [0.22, 0.247, 0.279, 0.314, 0.358];

/// One report file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub contents: String,
}

/// A validated scenario with defaults filled in.
#[derive(Debug, Clone)]
pub struct Scenario {
    command: Command,
    dim: usize,
    spec: ScenarioSpec,
    bodies: Option<[ConvexBody; 2]>,
    t0: Option<f64>,
}

fn cfg(path: &str, msg: impl Into<String>) -> Error {
    Error::config(path, msg)
}

impl Grid {
    /// Expanded grid values; `path` names the key in error messages.
    pub fn values(&self, path: &str) -> Result<Vec<f64>> {
        let out = match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return Err(cfg(path, "grid bounds must be finite"));
                }
                if !(step > 0.0) || stop < start {
                    return Err(cfg(path, "grid needs step > 0 and stop >= start"));
                }
                let n = ((stop - start) / step + 1e-9).floor() + 1.0;
                if n > MAX_GRID as f64 {
                    return Err(cfg(path, format!("grid has more than {MAX_GRID} points")));
                }
                (0..n as usize).map(|i| start + i as f64 * step).collect()
            }
        };
        if out.is_empty() {
            return Err(cfg(path, "grid is empty"));
        }
        if out.len() > MAX_GRID {
            return Err(cfg(path, format!("grid has more than {MAX_GRID} points")));
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(cfg(path, "grid values must be finite"));
        }
        Ok(out)
    }
}

/// Parses a scenario whose `command` key names the command.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    parse_with(text, None)
}

/// Parses a scenario for `command`; a `command` key in the file must agree.
pub fn parse_scenario_for(text: &str, command: Command) -> Result<Scenario> {
    parse_with(text, Some(command))
}

fn parse_with(text: &str, command: Option<Command>) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut spec: ScenarioSpec = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::config(e.path().to_string(), e.into_inner().to_string()))?;
    let command = match (command, spec.command) {
        (Some(a), Some(b)) if a != b => {
            return Err(cfg(
                "command",
                format!("file is for `{}`, invoked as `{}`", b.name(), a.name()),
            ))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(cfg("command", "missing command")),
    };
    spec.command = Some(command);
    if let Some(n) = spec.threads {
        if n == 0 || n > MAX_THREADS {
            return Err(cfg("threads", format!("must be in 1..={MAX_THREADS}")));
        }
    }

    let mut dim = spec.dimension;
    let mut agree = |found: usize, path: &str| -> Result<()> {
        match dim {
            Some(d) if d != found => Err(cfg(
                path,
                format!("dimension {found} does not match dimension {d}"),
            )),
            _ => {
                dim = Some(found);
                Ok(())
            }
        }
    };

    let mut bodies = None;
    let mut t0 = None;
    if command.needs_bodies() {
        let specs = spec
            .bodies
            .as_ref()
            .ok_or_else(|| cfg("bodies", "two bodies are required"))?;
        let mut built = Vec::with_capacity(2);
        for (i, b) in specs.iter().enumerate() {
            let path = format!("bodies[{i}]");
            let body = b.build().map_err(|e| cfg(&path, e.to_string()))?;
            agree(body.dim(), &path)?;
            built.push(body);
        }
        let k2 = built.pop().unwrap();
        let k1 = built.pop().unwrap();
        t0 = Some(starting_length(&k1, &k2));
        bodies = Some([k1, k2]);
    }
    if let Some(w) = &spec.one_form {
        agree(w.dim(), "one_form.beta")?;
        w.validate().map_err(|e| cfg("one_form", e.to_string()))?;
    }

    let needs_t = matches!(
        command,
        Command::Spectrum | Command::Count | Command::Scan | Command::Guinand
    );
    if needs_t {
        let t = spec.t.ok_or_else(|| cfg("T", "cutoff T is required"))?;
        let t0 = t0.unwrap();
        if !(t.is_finite() && t > t0) {
            return Err(cfg("T", format!("T = {t} must exceed T0 = {t0}")));
        }
    }

    match command {
        Command::Count => {
            let sec = spec.count.get_or_insert_with(CountSection::default);
            let (t0, t) = (t0.unwrap(), spec.t.unwrap());
            let grid = sec.t.get_or_insert_with(|| {
                Grid::List((1..=20).map(|k| t0 + (t - t0) * k as f64 / 20.0).collect())
            });
            let vals = grid.values("count.T")?;
            if vals.iter().any(|&x| !(x > 0.0 && x <= t)) {
                return Err(cfg("count.T", "evaluation points must lie in (0, T]"));
            }
        }
        Command::Zeta => {
            let sec = spec
                .zeta
                .as_ref()
                .ok_or_else(|| cfg("zeta", "section required"))?;
            check_points(&sec.s, "zeta.s")?;
        }
        Command::Residues => {
            spec.residues.get_or_insert_with(ResiduesSection::default);
        }
        Command::Scan => {
            let t = spec.t.unwrap();
            let sec = spec.scan.get_or_insert_with(ScanSection::default);
            sec.taus.values("scan.taus")?;
            let scales = sec
                .scales
                .get_or_insert_with(|| DEFAULT_SCALE_RATIOS.iter().map(|r| r * t).collect());
            if scales.len() < 4
                || scales[0] <= 0.0
                || scales.windows(2).any(|w| !(w[1] > w[0]))
                || scales.iter().any(|s| !s.is_finite())
            {
                return Err(cfg(
                    "scan.scales",
                    "need at least 4 positive increasing scales",
                ));
            }
            if !(sec.threshold.is_finite() && sec.max_residual > 0.0) {
                return Err(cfg(
                    "scan",
                    "threshold must be finite, max_residual positive",
                ));
            }
        }
        Command::Guinand => {
            let w = spec
                .one_form
                .as_ref()
                .ok_or_else(|| cfg("one_form", "guinand needs a one-form with beta not in Z^d"))?;
            check_beta(&w.beta).map_err(|e| cfg("one_form.beta", e.to_string()))?;
            let t = spec.t.unwrap();
            let sec = spec.guinand.get_or_insert_with(GuinandSection::default);
            let sigma = *sec.sigma.get_or_insert(t);
            let lmax = *sec.lambda_max.get_or_insert(3.0);
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(cfg("guinand.sigma", "must be positive"));
            }
            if !(lmax > 0.0 && lmax <= 100.0) {
                return Err(cfg("guinand.lambda_max", "must lie in (0, 100]"));
            }
        }
        Command::Correlation => {
            let sec = spec
                .correlation
                .as_ref()
                .ok_or_else(|| cfg("correlation", "section required"))?;
            let p = observable(&sec.phi, "correlation.phi")?;
            agree(p.dim(), "correlation.phi")?;
            if let Some(psi) = &sec.psi {
                agree(observable(psi, "correlation.psi")?.dim(), "correlation.psi")?;
            }
            sec.t.values("correlation.t")?;
        }
        Command::Laplace | Command::Mellin => {
            let key = command.name();
            let sec = if command == Command::Laplace {
                spec.laplace.as_ref()
            } else {
                spec.mellin.as_ref()
            }
            .ok_or_else(|| cfg(key, "section required"))?;
            let p = observable(&sec.phi, &format!("{key}.phi"))?;
            agree(p.dim(), &format!("{key}.phi"))?;
            if let Some(psi) = &sec.psi {
                let path = format!("{key}.psi");
                agree(observable(psi, &path)?.dim(), &path)?;
            }
            check_points(&sec.s, &format!("{key}.s"))?;
            transform_options(sec)
                .validate()
                .map_err(|e| cfg(key, e.to_string()))?;
        }
        Command::Spectrum => {}
    }

    let dim = dim.ok_or_else(|| cfg("dimension", "could not infer the dimension"))?;
    spec.dimension = Some(dim);
    Ok(Scenario {
        command,
        dim,
        spec,
        bodies,
        t0,
    })
}

fn check_points(s: &[crate::flow::Amplitude], path: &str) -> Result<()> {
    if s.is_empty() {
        return Err(cfg(path, "at least one point is required"));
    }
    if s.len() > MAX_GRID {
        return Err(cfg(path, format!("more than {MAX_GRID} points")));
    }
    if s.iter()
        .any(|z| !(z.value().re.is_finite() && z.value().im.is_finite()))
    {
        return Err(cfg(path, "points must be finite"));
    }
    Ok(())
}

fn observable(spec: &ObservableSpec, path: &str) -> Result<Observable> {
    Observable::from_spec(spec).map_err(|e| match e {
        Error::Config { path: p, message } => cfg(&format!("{path}.{p}"), message),
        other => cfg(path, other.to_string()),
    })
}

fn transform_options(sec: &TransformSection) -> TransformOptions {
    let d = TransformOptions::default();
    let im_max = sec.s.iter().map(|z| z.value().im.abs()).fold(0.0, f64::max);
    TransformOptions {
        t_split: sec.t_split.unwrap_or(d.t_split),
        im_max,
        chi_cutoff: sec.chi_cutoff.unwrap_or(d.chi_cutoff),
    }
}

fn c_fields(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

fn summary(value: serde_json::Value) -> Output {
    Output {
        name: "summary.json".into(),
        contents: serde_json::to_string_pretty(&value).expect("summary serializes") + "\n",
    }
}

impl Scenario {
    pub fn command(&self) -> Command {
        self.command
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `T0 = diam K1 + diam K2 + 1` when the command uses bodies.
    pub fn t0(&self) -> Option<f64> {
        self.t0
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn threads(&self) -> Option<usize> {
        self.spec.threads
    }

    pub fn set_threads(&mut self, n: usize) -> Result<()> {
        if n == 0 || n > MAX_THREADS {
            return Err(cfg("threads", format!("must be in 1..={MAX_THREADS}")));
        }
        self.spec.threads = Some(n);
        Ok(())
    }

    fn bodies(&self) -> (&ConvexBody, &ConvexBody) {
        let b = self.bodies.as_ref().expect("validated scenario has bodies");
        (&b[0], &b[1])
    }

    /// Computes all report files without touching the file system.
    pub fn render(&self) -> Result<Vec<Output>> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.spec.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
        pool.install(|| self.render_inner())
    }

    /// Renders and writes the reports into `dir`, returning the written paths.
    pub fn run(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let outputs = self.render()?;
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::with_capacity(outputs.len());
        for o in outputs {
            let p = dir.join(&o.name);
            std::fs::write(&p, o.contents)?;
            paths.push(p);
        }
        Ok(paths)
    }

    fn render_inner(&self) -> Result<Vec<Output>> {
        match self.command {
            Command::Spectrum => self.render_spectrum(),
            Command::Count => self.render_count(),
            Command::Zeta => self.render_zeta(),
            Command::Residues => self.render_residues(),
            Command::Scan => self.render_scan(),
            Command::Guinand => self.render_guinand(),
            Command::Correlation => self.render_correlation(),
            Command::Laplace => self.render_laplace(),
            Command::Mellin => self.render_mellin(),
        }
    }

    fn header(&self) -> serde_json::Map<String, serde_json::Value> {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!(self.command.name()));
        m.insert("dimension".into(), json!(self.dim));
        if let Some(t0) = self.t0 {
            m.insert("T0".into(), json!(t0));
        }
        if let Some(t) = self.spec.t {
            m.insert("T".into(), json!(t));
        }
        m
    }

    fn render_spectrum(&self) -> Result<Vec<Output>> {
        let (k1, k2) = self.bodies();
        let t = self.spec.t.unwrap();
        let s = length_spectrum_oriented(
            k1,
            k2,
            t,
            self.spec.one_form.as_ref(),
            self.spec.orientation,
        )?;
        let mut head = self.header();
        head.insert("records".into(), json!(s.len()));
        head.insert("orientation".into(), json!(self.spec.orientation));
        Ok(vec![
            Output {
                name: "spectrum.csv".into(),
                contents: s.to_csv(),
            },
            summary(head.into()),
        ])
    }

    fn render_count(&self) -> Result<Vec<Output>> {
        let (k1, k2) = self.bodies();
        let ts = self
            .spec
            .count
            .as_ref()
            .unwrap()
            .t
            .as_ref()
            .unwrap()
            .values("count.T")?;
        let spec =
            length_spectrum_oriented(k1, k2, self.spec.t.unwrap(), None, Orientation::K1ToK2)?;
        let mut csv = String::from("T,N,steiner\n");
        for &t in &ts {
            let n = spec.counting_function(t)?;
            let pred = steiner_count(k1, k2, t)?;
            writeln!(csv, "{t},{n},{pred}").unwrap();
        }
        let mut head = self.header();
        head.insert("points".into(), json!(ts.len()));
        head.insert("records".into(), json!(spec.len()));
        Ok(vec![
            Output {
                name: "count.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn zeta_engine(&self, t1: Option<f64>, t_max: Option<f64>) -> Result<ConvexZeta> {
        let (k1, k2) = self.bodies();
        ConvexZeta::new(k1, k2, ZetaOptions { t1, t_max })
    }

    fn render_zeta(&self) -> Result<Vec<Output>> {
        let sec = self.spec.zeta.as_ref().unwrap();
        let z = self.zeta_engine(sec.t1, sec.t_max)?;
        let points: Vec<Complex64> = sec.s.iter().map(|a| a.value()).collect();
        let vals = ordered_par_map(points.len(), |i| match sec.method {
            ZetaMethod::Continued => z.continued(points[i]),
            ZetaMethod::Direct => z.direct(points[i], z.t_max()),
        });
        let mut csv = String::from("s_re,s_im,re,im,tail_bound,method\n");
        for v in vals {
            let v = v?;
            let method = serde_json::to_value(v.method).unwrap();
            writeln!(
                csv,
                "{},{},{},{}",
                c_fields(v.s),
                c_fields(v.value),
                v.tail_bound,
                method.as_str().unwrap()
            )
            .unwrap();
        }
        let mut head = self.header();
        head.insert("T1".into(), json!(z.t1()));
        head.insert("T_max".into(), json!(z.t_max()));
        head.insert("intrinsic_volumes".into(), json!(z.intrinsic_volumes()));
        Ok(vec![
            Output {
                name: "zeta.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn render_residues(&self) -> Result<Vec<Output>> {
        let sec = self.spec.residues.as_ref().unwrap();
        let z = self.zeta_engine(sec.t1, sec.t_max)?;
        let reports = z.residues()?;
        let mut csv = String::from("pole,re,im,predicted_re,predicted_im,relative_gap,source\n");
        for r in &reports {
            let src = serde_json::to_value(r.source).unwrap();
            writeln!(
                csv,
                "{},{},{},{},{}",
                r.location,
                c_fields(r.residue),
                c_fields(r.predicted),
                r.relative_gap,
                src.as_str().unwrap()
            )
            .unwrap();
        }
        let mut head = self.header();
        head.insert("T1".into(), json!(z.t1()));
        head.insert("T_max".into(), json!(z.t_max()));
        head.insert("poles".into(), json!(reports));
        Ok(vec![
            Output {
                name: "residues.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn render_scan(&self) -> Result<Vec<Output>> {
        let (k1, k2) = self.bodies();
        let sec = self.spec.scan.as_ref().unwrap();
        let spec = length_spectrum_oriented(
            k1,
            k2,
            self.spec.t.unwrap(),
            self.spec.one_form.as_ref(),
            self.spec.orientation,
        )?;
        let comb = dirac_comb(&spec);
        let taus = sec.taus.values("scan.taus")?;
        let report = singularity_scan(
            &comb,
            &taus,
            sec.scales.as_ref().unwrap(),
            ScanOptions {
                threshold: sec.threshold,
                max_residual: sec.max_residual,
            },
        )?;
        let mut head = self.header();
        head.insert("atoms".into(), json!(comb.len()));
        head.insert("flagged".into(), json!(report.flagged_taus()));
        head.insert("truncation_weight".into(), json!(report.truncation_weight));
        Ok(vec![
            Output {
                name: "scan.csv".into(),
                contents: report.to_csv(),
            },
            summary(head.into()),
        ])
    }

    fn render_guinand(&self) -> Result<Vec<Output>> {
        let (k1, k2) = self.bodies();
        let t = self.spec.t.unwrap();
        let w = self.spec.one_form.as_ref().unwrap();
        let sec = self.spec.guinand.as_ref().unwrap();
        let (sigma, lmax) = (sec.sigma.unwrap(), sec.lambda_max.unwrap());
        let s12 = length_spectrum_oriented(k1, k2, t, Some(w), Orientation::K1ToK2)?;
        let s21 = length_spectrum_oriented(k1, k2, t, Some(w), Orientation::K2ToK1)?;
        let mu = guinand_meyer_measure(&s12, &s21)?;
        let lams = lambda_beta(&w.beta, lmax);
        let pos: Vec<f64> = lams.iter().copied().filter(|&x| x > 0.0).collect();
        let mut probes: Vec<(&str, f64)> = lams.iter().map(|&x| ("atom", x)).collect();
        probes.extend(pos.windows(2).map(|p| ("midgap", 0.5 * (p[0] + p[1]))));
        let vals = ordered_par_map(probes.len(), |i| atom_extract(&mu, probes[i].1, sigma));
        let mut csv = String::from("kind,lambda,re,im,abs\n");
        for ((kind, x), v) in probes.iter().zip(vals) {
            let v = v?;
            writeln!(csv, "{kind},{x},{},{}", c_fields(v), v.norm()).unwrap();
        }
        let mut head = self.header();
        head.insert("atoms".into(), json!(mu.len()));
        head.insert("sigma".into(), json!(sigma));
        head.insert("beta".into(), json!(w.beta));
        Ok(vec![
            Output {
                name: "guinand.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn pair(
        &self,
        phi: &ObservableSpec,
        psi: Option<&ObservableSpec>,
    ) -> Result<(Observable, Observable)> {
        let p = Observable::from_spec(phi)?;
        let q = match psi {
            Some(s) => Observable::from_spec(s)?,
            None => p.clone(),
        };
        Ok((p, q))
    }

    fn render_correlation(&self) -> Result<Vec<Output>> {
        let sec = self.spec.correlation.as_ref().unwrap();
        let (phi, psi) = self.pair(&sec.phi, sec.psi.as_ref())?;
        let ts = sec.t.values("correlation.t")?;
        let tmax = ts.iter().map(|t| t.abs()).fold(0.0, f64::max);
        let k = CorrelationKernel::new(&phi, &psi, tmax)?;
        let vals = k.eval_many(&ts)?;
        let mut csv = String::from("t,re,im,leading_re,leading_im\n");
        for (t, v) in ts.iter().zip(&vals) {
            let lead = if *t >= 1.0 {
                c_fields(k.leading(*t)?)
            } else {
                ",".into()
            };
            writeln!(csv, "{t},{},{lead}", c_fields(*v)).unwrap();
        }
        let mut head = self.header();
        head.insert("invariant".into(), json!(k.invariant()));
        head.insert("points".into(), json!(ts.len()));
        Ok(vec![
            Output {
                name: "correlation.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn engine(&self, sec: &TransformSection) -> Result<TransformEngine> {
        let (phi, psi) = self.pair(&sec.phi, sec.psi.as_ref())?;
        TransformEngine::new(&phi, &psi, transform_options(sec))
    }

    fn render_laplace(&self) -> Result<Vec<Output>> {
        let sec = self.spec.laplace.as_ref().unwrap();
        let e = self.engine(sec)?;
        let mut csv = String::from("s_re,s_im,re,im\n");
        for z in &sec.s {
            let s = z.value();
            writeln!(csv, "{},{}", c_fields(s), c_fields(e.laplace(s)?)).unwrap();
        }
        let mut head = self.header();
        head.insert("invariant".into(), json!(e.invariant()));
        head.insert("t_split".into(), json!(e.options().t_split));
        head.insert("singularities".into(), json!(e.laplace_singularities()));
        Ok(vec![
            Output {
                name: "laplace.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }

    fn render_mellin(&self) -> Result<Vec<Output>> {
        let sec = self.spec.mellin.as_ref().unwrap();
        let e = self.engine(sec)?;
        let mut csv = String::from("s_re,s_im,re,im,local_re,local_im,tail_re,tail_im\n");
        for z in &sec.s {
            let s = z.value();
            let m = e.mellin(s)?;
            writeln!(
                csv,
                "{},{},{},{}",
                c_fields(s),
                c_fields(m.value),
                c_fields(m.local),
                c_fields(m.tail)
            )
            .unwrap();
        }
        let mut head = self.header();
        head.insert("residue_at_1".into(), json!(e.invariant()));
        head.insert("t_split".into(), json!(e.options().t_split));
        head.insert("chi_cutoff".into(), json!(e.options().chi_cutoff));
        Ok(vec![
            Output {
                name: "mellin.csv".into(),
                contents: csv,
            },
            summary(head.into()),
        ])
    }
}

/// Machine-readable error report printed by the command line front end.
pub fn error_json(e: &Error) -> String {
    let mut v = json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": e.exit_code(),
        }
    });
    if let Error::Config { path, .. } = e {
        v["error"]["path"] = json!(path);
    }
    serde_json::to_string(&v).expect("error serializes")
}
