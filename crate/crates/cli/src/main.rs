use std::fs;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isokam::dynamics::{invert_frequency_map, CompareCase, CompareConfig, FrequencyMap, InversionMethod, InversionOptions, SchemePair};
use isokam::freq::{DivisorGuard, FreqSymbol, Frequencies};
use isokam::lindstedt::{lindstedt_run, Scheme};
use isokam::normalform::{birkhoff_normalize, kolmogorov_normalize, FrequencyRelation, NormalFormResult, TorusSolution};
use isokam::prep::{parse_scalar, prepare, to_action_angle, OscillatorModel};
use isokam::series::{Bindings, PoissonSeries};

/// Appends a line to the summary buffer.
macro_rules! outln {
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "isokam", version, about = "Normal forms and Lindstedt series for isochronous oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Birkhoff normal form (divisors in ω₀).
    Birkhoff(RunArgs),
    /// Direct Lindstedt construction.
    Lindstedt {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "k")]
        scheme: SchemeArg,
    },
    /// Kolmogorov normal form on the torus of fixed frequency ω.
    Kolmogorov(RunArgs),
    /// Amplitude J₀ of the torus with frequency ω.
    Invert {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "reversion")]
        method: MethodArg,
    },
    /// Analytic-versus-numeric error curves for schemes B and K.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Pretty-print a serialized series or result file.
    Show { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    B,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Reversion,
    Newton,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Built-in model (quartic, cubic).
    #[arg(long, conflicts_with = "model_file")]
    model: Option<String>,
    /// TOML model file.
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Truncation order R (default 2; 4 for invert and compare).
    #[arg(long)]
    order: Option<u32>,
    /// Exact rational/√2 arithmetic (default).
    #[arg(long, conflicts_with = "numeric")]
    exact: bool,
    /// Floating-point coefficients.
    #[arg(long)]
    numeric: bool,
    #[arg(long)]
    eps: Option<f64>,
    /// Unperturbed frequencies, comma separated; overrides the model file.
    #[arg(long, value_delimiter = ',')]
    omega0: Option<Vec<String>>,
    /// Torus frequencies, comma separated.
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    j0: Option<Vec<f64>>,
    /// Output file (JSON, or CSV for compare).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn order(&self, default: u32) -> u32 {
        self.order.unwrap_or(default)
    }

    fn frequencies(&self, values: &[String]) -> Result<Frequencies> {
        let v = values.iter().map(|s| parse_scalar(s).map(|x| if self.numeric { x.to_numeric() } else { x })).collect::<isokam::Result<Vec<_>>>()?;
        Ok(Frequencies::Values(v))
    }

    fn model(&self) -> Result<OscillatorModel> {
        let mut model = match (&self.model, &self.model_file) {
            (_, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                OscillatorModel::from_toml_str(&text)?
            }
            (name, None) => OscillatorModel::catalog(name.as_deref().unwrap_or("quartic"))?,
        };
        if let Some(w0) = &self.omega0 {
            let f = self.frequencies(w0)?;
            f.check(model.n_dof)?;
            model.omega0 = f;
        }
        Ok(if self.numeric { model.to_numeric() } else { model })
    }

    /// Divisor frequencies `ω`: bound by `--omega` or symbolic (1 DOF).
    fn omega(&self, n_dof: usize) -> Result<Frequencies> {
        let f = match &self.omega {
            Some(w) => self.frequencies(w)?,
            None => Frequencies::Symbolic(FreqSymbol::Omega),
        };
        if f.is_symbolic() && n_dof != 1 {
            bail!("{n_dof} degrees of freedom need explicit --omega values");
        }
        f.check(n_dof)?;
        Ok(f)
    }

    fn scalar(&self, name: &str, v: Option<f64>) -> Result<f64> {
        v.with_context(|| format!("--{name} is required"))
    }

    /// The first value of a comma list given as a number.
    fn scalar_list(&self, name: &str, v: &Option<Vec<String>>) -> Result<f64> {
        let list = v.as_ref().with_context(|| format!("--{name} is required"))?;
        match list.as_slice() {
            [one] => Ok(parse_scalar(one)?.to_f64()),
            _ => bail!("--{name} takes a single value here"),
        }
    }

    fn bindings(&self) -> Bindings {
        let first = |v: &Option<Vec<String>>| v.as_ref().and_then(|w| w.first()).and_then(|w| parse_scalar(w).ok()).map(|s| s.to_f64());
        Bindings { eps: self.eps, j0: self.j0.clone(), omega: first(&self.omega), omega0: first(&self.omega0), ..Bindings::default() }
    }
}

fn relation_text(rel: &FrequencyRelation, n_dof: usize) -> Vec<String> {
    let (lhs, base, list) = match rel {
        FrequencyRelation::Omega0FromOmega { a } => ("omega0", "omega", a),
        FrequencyRelation::OmegaFromOmega0 { c } => ("omega", "omega0", c),
    };
    (0..n_dof)
        .map(|i| {
            let sfx = if n_dof > 1 { format!("_{}", i + 1) } else { String::new() };
            let mut s = format!("{lhs}{sfx} = {base}{sfx}");
            for (r, per) in list.iter().enumerate() {
                s.push_str(&format!(" + eps^{} * ({})", r + 1, per[i]));
            }
            s
        })
        .collect()
}

fn coefficient_lines(letter: &str, rel: &FrequencyRelation, n_dof: usize) -> Vec<String> {
    let list = match rel {
        FrequencyRelation::Omega0FromOmega { a } => a,
        FrequencyRelation::OmegaFromOmega0 { c } => c,
    };
    let mut out = Vec::new();
    for (r, per) in list.iter().enumerate() {
        for (i, s) in per.iter().enumerate().take(n_dof) {
            let sfx = if n_dof > 1 { format!("[{}]", i + 1) } else { String::new() };
            out.push(format!("{letter}{}{sfx} = {s}", r + 1));
        }
    }
    out
}

fn print_solution(o: &mut String, sol: &TorusSolution, args: &RunArgs) {
    let n = sol.n_dof();
    outln!(o, "frequency relation:");
    for line in relation_text(&sol.frequency, n) {
        outln!(o, "  {line}");
    }
    let letter = if matches!(sol.frequency, FrequencyRelation::Omega0FromOmega { .. }) { "a" } else { "c" };
    for line in coefficient_lines(letter, &sol.frequency, n) {
        outln!(o, "  {line}");
    }
    for i in 0..n {
        let sfx = if n > 1 { format!("_{}", i + 1) } else { String::new() };
        outln!(o, "q{sfx} - phi{sfx} = {}", sol.q[i].series);
        outln!(o, "J{sfx} = {}", sol.j[i].series);
    }
    if n == 1 {
        let b = args.bindings();
        if b.eps.is_some() && b.j0.is_some() {
            if let Ok(full) = sol.frequency.complete(&b) {
                outln!(o, "at eps={} J0={}: omega={:.12} omega0={:.12}", full.eps.unwrap_or(0.0), full.j0.as_ref().map_or(0.0, |v| v[0]), full.omega.unwrap_or(f64::NAN), full.omega0.unwrap_or(f64::NAN));
            }
        }
    }
}

fn write_json(o: &mut String, path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    outln!(o, "wrote {}", path.display());
    Ok(())
}

fn normal_form_output(o: &mut String, args: &RunArgs, model: &OscillatorModel, nf: &NormalFormResult) -> Result<()> {
    let sol = nf.torus_solution()?;
    outln!(o, "model: {} ({} DOF), method: {:?}, order {}", model.name, model.n_dof, nf.method, nf.order);
    outln!(o, "normal form Z = {}", nf.normal_form);
    print_solution(o, &sol, args);
    if let Some(out) = &args.out {
        let mut doc = nf.to_json(Some(&model.hash()));
        doc["torus_solution"] = sol.to_json();
        write_json(o, out, &doc)?;
    }
    Ok(())
}

fn run_birkhoff(args: &RunArgs) -> Result<String> {
    let mut o = String::new();
    let model = args.model()?;
    let order = args.order(2);
    let nf = birkhoff_normalize(&prepare(&model, order)?, order, &DivisorGuard::new(model.omega0.clone()))?;
    normal_form_output(&mut o, args, &model, &nf)?;
    Ok(o)
}

fn run_kolmogorov(args: &RunArgs) -> Result<String> {
    let mut o = String::new();
    let model = args.model()?;
    let order = args.order(2);
    let guard = DivisorGuard::new(args.omega(model.n_dof)?);
    let nf = kolmogorov_normalize(&prepare(&model, order)?, order, &guard)?;
    normal_form_output(&mut o, args, &model, &nf)?;
    Ok(o)
}

fn run_lindstedt(args: &RunArgs, scheme: SchemeArg) -> Result<String> {
    let mut o = String::new();
    let model = args.model()?;
    let order = args.order(2);
    let aa = to_action_angle(&model)?;
    let (scheme, base) = match scheme {
        SchemeArg::B => (Scheme::B, Scheme::B.default_base(&aa)),
        SchemeArg::K => (Scheme::K, args.omega(model.n_dof)?),
    };
    let sol = lindstedt_run(&aa, scheme, order, &base)?;
    outln!(o, "model: {} ({} DOF), method: Lindstedt scheme {:?}, order {order}", model.name, model.n_dof, scheme);
    print_solution(&mut o, &sol, args);
    if let Some(out) = &args.out {
        write_json(&mut o, out, &json!({ "model_hash": model.hash(), "scheme": format!("{scheme:?}"), "torus_solution": sol.to_json() }))?;
    }
    Ok(o)
}

fn reference_case(args: &RunArgs) -> Result<CompareCase> {
    Ok(CompareCase { eps: args.scalar("eps", args.eps)?, omega0: args.scalar_list("omega0", &args.omega0)?, omega: args.scalar_list("omega", &args.omega)? })
}

fn one_dof_model(args: &RunArgs) -> Result<OscillatorModel> {
    let mut model = args.model()?;
    if model.n_dof != 1 {
        bail!("this command supports one degree of freedom, the model has {}", model.n_dof);
    }
    // The numeric comparison binds ω₀ itself.
    model.omega0 = Frequencies::Symbolic(FreqSymbol::Omega0);
    Ok(model)
}

fn run_invert(args: &RunArgs, method: MethodArg) -> Result<String> {
    let mut o = String::new();
    let model = one_dof_model(args)?;
    let case = reference_case(args)?;
    let order = args.order(4);
    let aa = to_action_angle(&model)?;
    let sol = lindstedt_run(&aa, Scheme::K, order, &Scheme::K.default_base(&aa))?;
    let map = FrequencyMap::new(&sol.frequency)?;
    let opts = match method {
        MethodArg::Reversion => InversionOptions::default(),
        MethodArg::Newton => InversionOptions::newton(),
    };
    let inv = invert_frequency_map(&map, case.omega - case.omega0, case.eps, case.omega0, &opts)?;
    outln!(o, "model: {}, order {order}, method: {}", model.name, if matches!(opts.method, InversionMethod::Newton) { "newton" } else { "reversion" });
    outln!(o, "frequency relation:");
    for line in relation_text(&sol.frequency, 1) {
        outln!(o, "  {line}");
    }
    outln!(o, "eps={} omega0={} omega={}", case.eps, case.omega0, case.omega);
    outln!(o, "J0={:.9}", inv.j0);
    outln!(o, "residual={:.3e} iterations={}", inv.residual, inv.iterations);
    if let Some(out) = &args.out {
        write_json(&mut o, out, &json!({ "eps": case.eps, "omega0": case.omega0, "omega": case.omega, "order": order, "J0": inv.j0, "residual": inv.residual }))?;
    }
    Ok(o)
}

fn run_compare(args: &RunArgs, t_max: f64, samples: usize) -> Result<String> {
    let mut o = String::new();
    if samples < 3 || t_max <= 0.0 {
        bail!("--samples must be at least 3 and --t-max positive");
    }
    let model = one_dof_model(args)?;
    let case = reference_case(args)?;
    let config = CompareConfig { order: args.order(4), t_max, samples, ..CompareConfig::default() };
    let pair = SchemePair::build(&model, config.order)?;
    let curve = pair.error_curve(&case, &config)?;
    let summary = curve.summary(config.transient);
    outln!(o, "frequency relation (scheme K):");
    for line in relation_text(&pair.scheme_k.frequency, 1) {
        outln!(o, "  {line}");
    }
    outln!(o, "frequency relation (scheme B):");
    for line in relation_text(&pair.scheme_b.frequency, 1) {
        outln!(o, "  {line}");
    }
    let _ = write!(o, "{}", summary.to_text(&curve.meta));
    if let Some(out) = &args.out {
        let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
        let mut w = std::io::BufWriter::new(file);
        curve.write_csv(&mut w)?;
        w.flush()?;
        outln!(o, "wrote {}", out.display());
    }
    Ok(o)
}

fn print_series_tree(o: &mut String, label: &str, v: &Value) {
    if v.get("terms").is_some() {
        let parsed = serde_json::from_value(v.clone()).map_err(isokam::Error::from).and_then(|j| PoissonSeries::from_json(&j));
        match parsed {
            Ok(s) => outln!(o, "{label} = {s}"),
            Err(e) => outln!(o, "{label}: unreadable series ({e})"),
        }
        return;
    }
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| print_series_tree(o, &join(label, k), x)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| print_series_tree(o, &format!("{label}[{i}]"), x)),
        other => outln!(o, "{label} = {other}"),
    }
}

fn join(label: &str, key: &str) -> String {
    if label.is_empty() { key.to_string() } else { format!("{label}.{key}") }
}

fn run_show(file: &Path) -> Result<String> {
    let mut o = String::new();
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", file.display()))?;
    if v.get("terms").is_some() {
        let s = PoissonSeries::from_json_str(&text)?;
        outln!(o, "{s}");
        let mode = if s.is_exact() { "exact" } else { "numeric" };
        outln!(o, "({} terms, {} DOF, {mode}, eps cutoff {})", s.len(), s.n_dof(), s.eps_cutoff());
    } else {
        print_series_tree(&mut o, "", &v);
    }
    Ok(o)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Birkhoff(a) => run_birkhoff(&a),
        Command::Lindstedt { run, scheme } => run_lindstedt(&run, scheme),
        Command::Kolmogorov(a) => run_kolmogorov(&a),
        Command::Invert { run, method } => run_invert(&run, method),
        Command::Compare { run, t_max, samples } => run_compare(&run, t_max, samples),
        Command::Show { file } => run_show(&file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            // A closed pipe (e.g. `| head`) is not an error.
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::FAILURE
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::FAILURE
        }
    }
}
