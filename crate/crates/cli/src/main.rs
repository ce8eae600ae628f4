mod element;
mod verify;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mfhc::arith::{hurwitz, hurwitz_table};
use mfhc::forms::{self, Example};
use mfhc::hcmodule::{classify_form_module, ktype_diagram, ps_decompose, ModuleClass, DEFAULT_WINDOW};
use mfhc::qexp::json::{from_json, to_json};
use mfhc::rational::{format_rational, parse_rational};
use mfhc::weil::{self, FiniteQuadraticModule, GaussNormalization};
use mfhc::{operators, Complex64, Expansion, HalfInteger};
use serde_json::{json, Value};

/// Exit statuses: 0 pass, 1 property failure, 2 usage error, 3 out of scope.
pub enum Failure {
    Property(String),
    Usage(String),
    OutOfScope(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Usage(_) => 2,
            Failure::OutOfScope(_) => 3,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Parser)]
#[command(name = "mfhc", version, about = "Harmonic weak Maass forms: expansions, operators, Harish-Chandra modules, Weil representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lowering {
    Zero,
    Nonzero,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    Raise,
    Lower,
    Laplacian,
    Xi,
    D,
    Bol,
    BolRaising,
    Flip,
    Dtau,
    Dtaubar,
    Conj,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildForm {
    E2star,
    E32star,
    Shintani,
    Theta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    Sigma,
    InverseSigma,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
pub enum Suite {
    Operators,
    Hcmodule,
    Weil,
    Shintani,
    Mp,
    All,
}

#[derive(Subcommand)]
enum MpCommand {
    /// Product x·y.
    Mul {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        json: bool,
    },
    Inv {
        #[arg(long)]
        x: String,
        #[arg(long)]
        json: bool,
    },
    /// x = n(b)·m(a, +1)·k(θ).
    Decompose {
        #[arg(long)]
        x: String,
        #[arg(long)]
        json: bool,
    },
    Project {
        #[arg(long)]
        x: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Command {
    /// K-type diagram of the module generated by a harmonic form.
    Classify {
        /// Half-integral weight, e.g. 3/2 or -1/2.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "form")]
        weight: Option<String>,
        /// Whether the lowering operator kills the form.
        #[arg(long, value_enum, default_value = "nonzero")]
        lowering: Lowering,
        /// One of the built-in examples instead of a weight.
        #[arg(long, conflicts_with = "weight")]
        form: Option<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long)]
        json: bool,
    },
    /// Composition series of the principal series I(ε, ν).
    Psdecomp {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        json: bool,
    },
    /// Applies a differential operator to an expansion read as JSON.
    Op {
        #[arg(long, value_enum)]
        name: OpName,
        /// Overrides the declared weight of the input.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Input file, or `-` for standard input.
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Builds one of the built-in expansions.
    Build {
        #[arg(value_enum)]
        form: BuildForm,
        #[arg(long, default_value_t = forms::DEFAULT_N_MAX)]
        nmax: u64,
        #[arg(long, default_value_t = forms::DEFAULT_D_MAX)]
        dmax: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3)]
        delta: i64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluates an expansion numerically.
    Eval {
        #[arg(long = "in", default_value = "-")]
        input: String,
        /// Points like `0.5+1i`; repeatable.
        #[arg(long, required = true, allow_hyphen_values = true)]
        tau: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Hurwitz class numbers H(D).
    Hurwitz {
        #[arg(long, conflicts_with = "d")]
        max: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Metaplectic group arithmetic. Elements: `k:θ`, `n:b`, `m:a:s`, `S`,
    /// `T`, `Z`, `I`, `-I`, or products joined by `*`.
    Mp {
        #[command(subcommand)]
        command: MpCommand,
    },
    /// Weil representation of a finite quadratic module.
    Weil {
        /// e.g. `Z/2:1/4 + Z/4:1/8`.
        #[arg(long)]
        fqm: String,
        #[arg(long, value_enum, default_value = "sigma")]
        normalization: Normalization,
        #[arg(long)]
        json: bool,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(value_enum)]
        suite_arg: Option<Suite>,
        #[arg(long, value_enum, conflicts_with = "suite_arg")]
        suite: Option<Suite>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<i64>,
        #[arg(long, default_value_t = forms::DEFAULT_D_MAX)]
        dmax: u64,
        #[arg(long, default_value_t = forms::DEFAULT_N_MAX)]
        nmax: u64,
        /// Adds deliberately corrupted fixtures, which must fail.
        #[arg(long)]
        negative_control: bool,
        #[arg(long)]
        json: bool,
    },
}

/// `MFHC_PRECISION` replaces every numeric tolerance when set.
fn precision_override() -> Result<Option<f64>, Failure> {
    match std::env::var("MFHC_PRECISION") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Some(t)),
            _ => Err(Failure::Usage(format!("MFHC_PRECISION must be a positive number, got `{s}`"))),
        },
    }
}

fn parse_weight(s: &str) -> Result<HalfInteger, Failure> {
    s.parse::<HalfInteger>().map_err(|_| Failure::Usage(format!("weight `{s}` is not a half-integer (write 3/2, -1/2, 2)")))
}

fn read_expansion(path: &str) -> Result<Expansion, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(usage)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    from_json(&v).map_err(usage)
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_expansion(f: &Expansion, json: bool) {
    if json {
        print_json(&to_json(f));
    } else {
        let w = f.weight().map(|w| w.to_string()).unwrap_or_else(|| "none".into());
        println!("weight {w}, truncation {}, {} terms", f.truncation(), f.len());
        println!("{f}");
    }
}

const INTEGRAL_POINTER: &str = "integral weights are out of scope here: their Harish-Chandra modules follow the SL₂(ℝ) classification (cases I–IV)";

fn module_json(m: &ModuleClass) -> Value {
    serde_json::to_value(m).expect("module classes serialize")
}

fn run_classify(weight: Option<String>, lowering: Lowering, form: Option<String>, window: usize, json: bool) -> Result<(), Failure> {
    let (class, diagram) = if let Some(form) = form {
        let ex: Example = form.parse().map_err(Failure::Usage)?;
        let (c, _) = forms::classify_example(ex).map_err(usage)?;
        let d = ktype_diagram(&c, window).map_err(usage)?;
        (c, d)
    } else {
        let k = parse_weight(weight.as_deref().expect("clap requires weight or form"))?;
        if k.is_integral() {
            return Err(Failure::OutOfScope(format!("weight {k}: {INTEGRAL_POINTER}")));
        }
        let c = classify_form_module(k, matches!(lowering, Lowering::Zero)).map_err(usage)?;
        let d = ktype_diagram(&c, window).map_err(usage)?;
        (c, d)
    };
    if json {
        print_json(&json!({"module": module_json(&class), "diagram": diagram.to_json()}));
    } else {
        print!("{}", diagram.to_ascii());
    }
    if class.is_out_of_scope() {
        return Err(Failure::OutOfScope(class.to_string()));
    }
    Ok(())
}

fn run_psdecomp(epsilon: &str, nu: &str, json: bool) -> Result<(), Failure> {
    let eps = parse_weight(epsilon)?;
    let nu = parse_rational(nu).map_err(usage)?;
    let class = ps_decompose(eps, &nu);
    if json {
        print_json(&module_json(&class));
    } else {
        println!("{class}");
    }
    if class.is_out_of_scope() {
        return Err(Failure::OutOfScope(class.to_string()));
    }
    Ok(())
}

fn run_op(name: OpName, weight: Option<String>, input: &str, json: bool) -> Result<(), Failure> {
    let mut f = read_expansion(input)?;
    if let Some(w) = weight {
        f = f.with_weight(Some(parse_weight(&w)?));
    }
    let out = match name {
        OpName::Raise => operators::raise(&f),
        OpName::Lower => operators::lower(&f),
        OpName::Laplacian => operators::laplacian(&f),
        OpName::Xi => operators::xi(&f),
        OpName::D => Ok(operators::d_op(&f)),
        OpName::Bol => operators::bol(&f),
        OpName::BolRaising => operators::bol_via_raising(&f),
        OpName::Flip => operators::flip(&f),
        OpName::Dtau => Ok(f.d_tau()),
        OpName::Dtaubar => Ok(f.d_taubar()),
        OpName::Conj => f.conjugate().map_err(Into::into),
    }
    .map_err(usage)?;
    print_expansion(&out, json);
    Ok(())
}

fn run_build(form: BuildForm, nmax: u64, dmax: u64, delta: i64, json: bool) -> Result<(), Failure> {
    let f = match form {
        BuildForm::E2star => forms::build_e2star(nmax),
        BuildForm::E32star => forms::build_e32star(dmax, nmax),
        BuildForm::Shintani => forms::shintani_rhs(delta, dmax, nmax),
        BuildForm::Theta => Ok(forms::theta_expansion(nmax)),
    }
    .map_err(usage)?;
    print_expansion(&f, json);
    Ok(())
}

fn run_eval(input: &str, taus: &[String], json: bool) -> Result<(), Failure> {
    let f = read_expansion(input)?;
    let mut rows = Vec::new();
    for t in taus {
        let tau: Complex64 = t.replace(' ', "").parse().map_err(|_| Failure::Usage(format!("cannot parse τ = `{t}` (write 0.5+1i)")))?;
        let z = f.eval_numeric::<f64>(tau).map_err(usage)?;
        rows.push((tau, z));
    }
    if json {
        let v: Vec<Value> = rows.iter().map(|(t, z)| json!({"tau": [t.re, t.im], "value": [z.re, z.im]})).collect();
        print_json(&Value::Array(v));
    } else {
        for (t, z) in rows {
            println!("f({t}) = {z}");
        }
    }
    Ok(())
}

fn run_hurwitz(max: Option<u64>, d: Option<u64>, json: bool) -> Result<(), Failure> {
    let rows: Vec<(u64, String)> = match (max, d) {
        (_, Some(d)) => vec![(d, format_rational(&hurwitz(d)))],
        (Some(m), None) => hurwitz_table(m).iter().enumerate().map(|(d, h)| (d as u64, format_rational(h))).collect(),
        (None, None) => return Err(Failure::Usage("give --max N or --d D".into())),
    };
    if json {
        let v: Vec<Value> = rows.iter().map(|(d, h)| json!({"D": d, "H": h})).collect();
        print_json(&Value::Array(v));
    } else {
        for (d, h) in rows {
            println!("H({d}) = {h}");
        }
    }
    Ok(())
}

fn run_mp(cmd: MpCommand) -> Result<(), Failure> {
    let show = |x: &mfhc::MpElement, json: bool| {
        if json {
            print_json(&x.to_json());
        } else {
            println!("{x}");
        }
    };
    match cmd {
        MpCommand::Mul { x, y, json } => {
            let p = element::parse(&x)?.multiply(&element::parse(&y)?);
            show(&p, json);
        }
        MpCommand::Inv { x, json } => show(&element::parse(&x)?.inverse(), json),
        MpCommand::Project { x, json } => {
            let m = element::parse(&x)?.project();
            if json {
                print_json(&json!(m));
            } else {
                println!("{m:?}");
            }
        }
        MpCommand::Decompose { x, json } => {
            let x = element::parse(&x)?;
            let (n, m, k, p) = x.nmk_decompose();
            let back = n.multiply(&m).multiply(&k);
            let ok = back.approx_eq(&x, 1e-12);
            if json {
                print_json(&json!({"b": p.b, "a": p.a, "theta": p.theta, "n": n.to_json(), "m": m.to_json(), "k": k.to_json(), "roundtrip": ok}));
            } else {
                println!("x = n({}) · m({}, +1) · k({})", p.b, p.a, p.theta);
                println!("roundtrip {}", if ok { "exact to 1e-12" } else { "FAILED" });
            }
            if !ok {
                return Err(Failure::Property("n·m·k does not reproduce x".into()));
            }
        }
    }
    Ok(())
}

fn run_weil(fqm: &str, norm: Normalization, json: bool) -> Result<(), Failure> {
    let d = FiniteQuadraticModule::parse(fqm).map_err(usage)?;
    let tol = precision_override()?.unwrap_or(1e-10);
    let norm = match norm {
        Normalization::Sigma => GaussNormalization::Sigma,
        Normalization::InverseSigma => GaussNormalization::InverseSigma,
    };
    let sigma = weil::sigma_invariant::<f64>(&d).map_err(|e| Failure::Property(e.to_string()))?;
    let t = weil::rho_t::<f64>(&d);
    let s = weil::rho_s_normalized::<f64>(&d, norm).map_err(|e| Failure::Property(e.to_string()))?;
    let report = weil::check_relations_normalized(&d, tol, norm);
    if json {
        print_json(&json!({
            "module": d.to_string(),
            "order": d.order(),
            "sigma": {"value": [sigma.value.re, sigma.value.im], "eighth_root": sigma.eighth_root.map(|j| format!("e(-{j}/8)"))},
            "rho_T": t.to_json(),
            "rho_S": s.to_json(),
            "relations": report.to_json(),
        }));
    } else {
        println!("D = {d}, #M = {}", d.order());
        match sigma.eighth_root {
            Some(j) => println!("σ(D) = e(-{j}/8) = {}", sigma.value),
            None => println!("σ(D) = {}", sigma.value),
        }
        println!("ρ(T) = {}", t.to_json());
        println!("ρ(S) = {}", s.to_json());
        for (name, dev) in report.entries() {
            println!("{}  {name}  {dev:.3e}", if dev <= tol { "PASS" } else { "FAIL" });
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property(format!("relations fail for {d} (max deviation {:.3e})", report.max_deviation())))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { weight, lowering, form, window, json } => run_classify(weight, lowering, form, window, json),
        Command::Psdecomp { epsilon, nu, json } => run_psdecomp(&epsilon, &nu, json),
        Command::Op { name, weight, input, json } => run_op(name, weight, &input, json),
        Command::Build { form, nmax, dmax, delta, json } => run_build(form, nmax, dmax, delta, json),
        Command::Eval { input, tau, json } => run_eval(&input, &tau, json),
        Command::Hurwitz { max, d, json } => run_hurwitz(max, d, json),
        Command::Mp { command } => run_mp(command),
        Command::Weil { fqm, normalization, json } => run_weil(&fqm, normalization, json),
        Command::Verify { suite_arg, suite, delta, dmax, nmax, negative_control, json } => {
            let suite = suite.or(suite_arg).unwrap_or(Suite::All);
            let opts = verify::Options { delta, dmax, nmax, negative_control, tolerance: precision_override()? };
            verify::run(suite, &opts, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Property(m) => eprintln!("failed: {m}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::OutOfScope(m) => eprintln!("{m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
