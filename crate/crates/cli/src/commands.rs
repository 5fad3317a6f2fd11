use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use planet_core::construct::{braid_net, hessian_net, pencil_net, singular_cubic_net, torus_net, TorusOptions};
use planet_core::cubic::{is_algebraic_with, Algebraicity, SingularCase};
use planet_core::geom::{dual_line, Line};
use planet_core::io::{cubic_to_json, net_to_json, parse_json, read_net, triple_to_json, vector_from_json, AnyNet, JsonField};
use planet_core::net::{euler_feasible, verify_net};
use planet_core::quasigroup::{group_identify, latin_from_net, normalize_to_loop, GroupId, Labels, LatinSquare};
use planet_core::resonance::{essential_component, net_resonance, os_h1_dim, Arrangement};
use planet_core::selftest::run_all;
use planet_core::{ApproxComplex, CyclotomicField, Error, Field, Net};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{BackendArg, Cli, Command, ConstructKind, Format, SessionArgs};

/// A failed command: message for stderr and process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_) | Error::Inconclusive(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

struct Session {
    approx: ApproxComplex,
    eps_series: f64,
    seed: u64,
    format: Format,
    backend: BackendArg,
}

impl Session {
    fn new(args: &SessionArgs) -> Result<Self, Failure> {
        if !(args.eps_series > 0.0) {
            return Err(usage("--eps-series must be positive"));
        }
        Ok(Session {
            approx: ApproxComplex::new(args.eps_eq, args.eps_rank)?,
            eps_series: args.eps_series,
            seed: args.seed,
            format: args.format,
            backend: args.backend,
        })
    }

    /// Prints the JSON document or its text rendering.
    fn emit(&self, doc: &Value, text: impl FnOnce() -> String) -> Result<(), Failure> {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
            Format::Text => text(),
        };
        write_output(Path::new("-"), &out)
    }

    fn cyclotomic(&self, default_order: u64) -> Result<CyclotomicField, Failure> {
        let n = match self.backend {
            BackendArg::Cyclotomic(Some(n)) => n,
            _ => default_order,
        };
        Ok(CyclotomicField::new(n)?)
    }

    /// Reads a net document, converting it to the requested backend.
    fn read_net(&self, path: &Path) -> Result<AnyNet, Failure> {
        let net = read_net(&read_input(path)?, &self.approx)?;
        match (self.backend, net) {
            (BackendArg::Complex, AnyNet::Cyclotomic(n)) => Ok(AnyNet::Complex(to_approx(&n, &self.approx)?)),
            (BackendArg::Cyclotomic(_), AnyNet::Complex(_)) => {
                Err(Error::BackendMismatch("the document is a complex net".into()).into())
            }
            (BackendArg::Cyclotomic(Some(n)), AnyNet::Cyclotomic(net)) if net.field().order() != n => {
                Err(Error::BackendMismatch(format!("the document is over Q(zeta_{})", net.field().order())).into())
            }
            (_, net) => Ok(net),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    let res = if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        fs::write(path, text)
    };
    match res {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(usage(format!("cannot write {}: {e}", path.display())))
        }
        _ => Ok(()),
    }
}

fn to_approx(net: &Net<CyclotomicField>, f: &ApproxComplex) -> Result<Net<ApproxComplex>, Failure> {
    let q = net.field();
    let classes = net
        .classes()
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| Line::new(f, l.coords().clone().map(|x| q.to_complex(&x))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Net::new(*f, classes))
}

macro_rules! with_net {
    ($any:expr, $net:ident => $body:expr) => {
        match $any {
            AnyNet::Complex($net) => $body,
            AnyNet::Cyclotomic($net) => $body,
        }
    };
}

pub fn run(cli: &Cli) -> Outcome {
    let s = Session::new(&cli.session)?;
    match &cli.command {
        Command::Construct { kind, output } => construct(&s, kind, output),
        Command::Verify { file } => with_net!(s.read_net(file)?, net => verify(&s, &net)),
        Command::Euler { k, m, r } => euler(&s, *k, *m, *r),
        Command::Latin { file, shuffle } => with_net!(s.read_net(file)?, net => latin(&s, &net, *shuffle)),
        Command::Group { file, shuffle } => group(&s, file, *shuffle),
        Command::Algebraize { file } => with_net!(s.read_net(file)?, net => algebraize(&s, &net)),
        Command::Resonance { file, vector } => {
            let v = vector.as_deref().map(read_input).transpose()?;
            with_net!(s.read_net(file)?, net => resonance(&s, &net, v.as_deref()))
        }
        Command::Selftest { trials } => selftest(&s, *trials),
    }
}

fn construct(s: &Session, kind: &ConstructKind, output: &Path) -> Outcome {
    let exact_order = match kind {
        ConstructKind::Pencil { m } => Some(*m as u64),
        ConstructKind::Braid => Some(1),
        ConstructKind::Hessian => Some(3),
        ConstructKind::Singular { case, m } => {
            let m = *m as u64;
            Some(match case {
                SingularCase::ConicLineTransverse if m.is_multiple_of(4) => m,
                SingularCase::ConicLineTransverse if m.is_multiple_of(2) => 2 * m,
                SingularCase::ConicLineTransverse => 4 * m,
                _ => m,
            })
        }
        ConstructKind::Torus { .. } => None,
    };
    let doc = match (s.backend, exact_order) {
        (BackendArg::Complex, _) | (BackendArg::Auto, None) => net_to_json(&build(&s.approx, s, kind)?),
        (_, Some(n)) => net_to_json(&build(&s.cyclotomic(n.max(1))?, s, kind)?),
        (BackendArg::Cyclotomic(_), None) => {
            return Err(Error::BackendMismatch("torus nets exist only in the complex backend".into()).into())
        }
    };
    write_output(output, &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"))?;
    Ok(0)
}

trait Build: Field + JsonField {
    fn torus(&self, s: &Session, invariants: &[usize], tau: Option<num_complex::Complex64>) -> planet_core::Result<Net<Self>>;
}

impl Build for ApproxComplex {
    fn torus(&self, s: &Session, invariants: &[usize], tau: Option<num_complex::Complex64>) -> planet_core::Result<Net<Self>> {
        let mut opts = TorusOptions { eps_series: s.eps_series, ..TorusOptions::default() };
        if let Some(t) = tau {
            opts.tau = t;
        }
        torus_net(self, invariants, &opts)
    }
}

impl Build for CyclotomicField {
    fn torus(&self, _: &Session, _: &[usize], _: Option<num_complex::Complex64>) -> planet_core::Result<Net<Self>> {
        Err(Error::BackendMismatch("torus nets exist only in the complex backend".into()))
    }
}

fn build<F: Build>(f: &F, s: &Session, kind: &ConstructKind) -> planet_core::Result<Net<F>> {
    match kind {
        ConstructKind::Pencil { m } => pencil_net(f, *m),
        ConstructKind::Braid => braid_net(f),
        ConstructKind::Hessian => hessian_net(f),
        ConstructKind::Torus { invariants, tau } => f.torus(s, invariants, *tau),
        ConstructKind::Singular { case, m } => singular_cubic_net(f, *case, *m, None),
    }
}

fn verify<F: Field>(s: &Session, net: &Net<F>) -> Outcome {
    let report = verify_net(net)?;
    let doc = serde_json::to_value(&report).expect("serializable");
    s.emit(&doc, || {
        let mut t = String::new();
        let _ = writeln!(t, "verdict   {}", if report.ok { "net" } else { "not a net" });
        let _ = writeln!(t, "classes   {}", report.k);
        let _ = writeln!(t, "order     {}", report.m);
        let _ = writeln!(t, "pencils   {}", report.r);
        let _ = writeln!(t, "points    {}", report.points);
        for v in &report.violations {
            let _ = writeln!(t, "violation {}: {}", v.axiom(), serde_json::to_string(v).expect("serializable"));
        }
        for w in &report.warnings {
            let _ = writeln!(t, "warning   {w}");
        }
        t
    })?;
    Ok(if report.ok { 0 } else { 1 })
}

fn euler(s: &Session, k: i64, m: i64, r: i64) -> Outcome {
    let f = euler_feasible(k, m, r)?;
    let verdict = if f.feasible { "feasible" } else { "infeasible" };
    let mut doc = serde_json::to_value(&f).expect("serializable");
    doc["k"] = json!(k);
    doc["m"] = json!(m);
    doc["r"] = json!(r);
    doc["verdict"] = json!(verdict);
    s.emit(&doc, || {
        format!(
            "{verdict}: k = {k} {} {} for m = {m}, r = {r}\n",
            if f.feasible { "<=" } else { ">" },
            f.rhs
        )
    })?;
    Ok(if f.feasible { 0 } else { 1 })
}

fn shuffled_labels(m: usize, seed: u64) -> Labels {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm = || {
        let mut p: Vec<usize> = (0..m).collect();
        p.shuffle(&mut rng);
        p
    };
    Labels { rows: perm(), cols: perm(), symbols: perm() }
}

fn latin_of<F: Field>(net: &Net<F>, shuffle: Option<u64>) -> planet_core::Result<LatinSquare> {
    let m = net.classes().first().map_or(0, Vec::len);
    let labels = shuffle.map(|seed| shuffled_labels(m, seed));
    latin_from_net(net, labels.as_ref())
}

fn table_text(ls: &LatinSquare) -> String {
    let w = ls.m.saturating_sub(1).to_string().len();
    ls.table
        .iter()
        .map(|row| row.iter().map(|x| format!("{x:>w$}")).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

fn latin<F: Field>(s: &Session, net: &Net<F>, shuffle: Option<u64>) -> Outcome {
    let ls = latin_of(net, shuffle)?;
    s.emit(&serde_json::to_value(&ls).expect("serializable"), || table_text(&ls))?;
    Ok(0)
}

fn read_latin(doc: Value) -> Result<LatinSquare, Failure> {
    let table: Vec<Vec<usize>> = serde_json::from_value(doc["table"].clone())
        .map_err(|e| Error::Parse(format!("$.table: {e}")))?;
    Ok(match doc.get("labels") {
        None | Some(Value::Null) => LatinSquare::new(table)?,
        Some(l) => {
            let labels: Labels =
                serde_json::from_value(l.clone()).map_err(|e| Error::Parse(format!("$.labels: {e}")))?;
            LatinSquare::with_labels(table, labels)?
        }
    })
}

fn group(s: &Session, file: &Path, shuffle: Option<u64>) -> Outcome {
    let text = read_input(file)?;
    let doc = parse_json(&text)?;
    let ls = if doc.get("table").is_some() {
        read_latin(doc)?
    } else {
        let net = read_net(&text, &s.approx)?;
        let net = match (s.backend, net) {
            (BackendArg::Complex, AnyNet::Cyclotomic(n)) => AnyNet::Complex(to_approx(&n, &s.approx)?),
            (_, n) => n,
        };
        with_net!(net, n => latin_of(&n, shuffle)?)
    };
    let id = group_identify(&normalize_to_loop(&ls, 0, 0)?);
    let mut out = serde_json::to_value(&ls).expect("serializable");
    out["group"] = serde_json::to_value(&id).expect("serializable");
    s.emit(&out, || format!("{id}\n"))?;
    Ok(if matches!(id, GroupId::NotAGroup) { 1 } else { 0 })
}

fn algebraize<F: Field + JsonField>(s: &Session, net: &Net<F>) -> Outcome {
    let f = net.field();
    match is_algebraic_with(net, s.seed)? {
        Algebraicity::Yes { cubic, class } => {
            let pts: Vec<_> = net.lines().map(dual_line).collect();
            let residuals: Vec<f64> = pts.iter().map(|p| cubic.residual(f, p)).collect();
            let regular = pts.iter().all(|p| cubic.is_regular_point(f, p));
            let c = ApproxComplex::default();
            let doc = json!({
                "algebraic": true,
                "cubic": cubic_to_json(f, &cubic),
                "class": {
                    "tag": class.tag,
                    "singular_points": class.singular_points.iter().map(|p| triple_to_json(&c, p.coords())).collect::<Vec<_>>(),
                    "components": class.components.as_ref().map(|cs| cs
                        .iter()
                        .map(|form| form.coeffs().iter().map(|x| c.scalar_to_json(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>()),
                },
                "regular": regular,
                "residuals": residuals,
            });
            let max = residuals.iter().cloned().fold(0.0, f64::max);
            s.emit(&doc, || {
                format!(
                    "algebraic  yes\nclass      {}\nsingular   {}\nregular    {}\nresidual   {max:.3e}\n",
                    class.tag,
                    class.singular_points.len(),
                    if regular { "yes" } else { "no" }
                )
            })?;
            Ok(if regular { 0 } else { 1 })
        }
        Algebraicity::No { diagnostic } => {
            let doc = json!({"algebraic": false, "diagnostic": diagnostic});
            s.emit(&doc, || format!("algebraic  no\n{diagnostic}\n"))?;
            Ok(1)
        }
    }
}

fn resonance<F: Field + JsonField>(s: &Session, net: &Net<F>, vector: Option<&str>) -> Outcome {
    let f = net.field();
    let data = net_resonance(net)?;
    let component = essential_component(net).ok();
    let h1 = match vector {
        None => None,
        Some(text) => {
            let v = parse_json(text)?;
            let (v, path) = match v.get("vector") {
                Some(inner) => (inner.clone(), "$.vector"),
                None => (v, "$"),
            };
            let a = vector_from_json(f, &v, path)?;
            Some(os_h1_dim(&Arrangement::from_net(net)?, &a)?)
        }
    };
    let mut doc = serde_json::to_value(&data).expect("serializable");
    doc["dimV"] = json!(component.as_ref().map(|c| c.dim()));
    doc["basisV"] = json!(component.as_ref().map(|c| &c.basis));
    doc["h1"] = json!(h1);
    s.emit(&doc, || {
        let mut t = String::new();
        let _ = writeln!(t, "lines          {}", data.q.len());
        let _ = writeln!(t, "blocks         {}", data.blocks.len());
        let _ = writeln!(t, "affine blocks  {}", data.affine_blocks);
        let _ = writeln!(t, "covers all     {}", if data.covers_all { "yes" } else { "no" });
        match &component {
            Some(c) => {
                let _ = writeln!(t, "dim V          {}", c.dim());
            }
            None => {
                let _ = writeln!(t, "dim V          - (not a verified net)");
            }
        }
        if let Some(h) = h1 {
            let _ = writeln!(t, "h1             {h}");
        }
        t
    })?;
    Ok(0)
}

fn selftest(s: &Session, trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let reports = run_all(&s.approx, s.eps_series, trials, &mut rng)?;
    let passed = reports.iter().all(|r| r.passed());
    let doc = json!({"passed": passed, "suites": reports});
    s.emit(&doc, || {
        let mut t = String::new();
        for r in &reports {
            let _ = write!(
                t,
                "{} {:<40} trials {:>5} failures {:>3} max residual {:.2e}",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.trials,
                r.failures,
                r.max_residual
            );
            if let Some(sep) = r.min_separation {
                let _ = write!(t, " min separation {sep:.2e}");
            }
            t.push('\n');
        }
        t
    })?;
    Ok(if passed { 0 } else { 1 })
}
