//! Checking whole files, and the command-line interface.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::check::{Checker, ErrorCode, Span, TypeError};
use crate::eval::{normalize_at, whnf};
use crate::surface::{self, pretty, SourceModule};
use crate::syntax::{Context, Global, Globals, Name, Tm};

/// Version of the JSON diagnostic schema.
pub const DIAGNOSTIC_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub version: u32,
    pub severity: &'static str,
    pub code: String,
    pub message: String,
    pub file: String,
    pub start: (usize, usize),
    pub end: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip)]
    pub context: String,
}

impl Diagnostic {
    fn from_error(e: &TypeError, file: &str, fallback: Span) -> Diagnostic {
        let span = e.span.unwrap_or(fallback);
        Diagnostic {
            version: DIAGNOSTIC_VERSION,
            severity: "error",
            code: e.code.to_string(),
            message: e.message.clone(),
            file: file.to_string(),
            start: span.start,
            end: span.end,
            expected: e.expected.clone(),
            actual: e.actual.clone(),
            context: e.context.clone(),
        }
    }

    fn io(file: &str, message: String) -> Diagnostic {
        Diagnostic {
            version: DIAGNOSTIC_VERSION,
            severity: "error",
            code: "IoError".into(),
            message,
            file: file.to_string(),
            start: (1, 1),
            end: (1, 1),
            expected: None,
            actual: None,
            context: String::new(),
        }
    }

    pub fn code(&self) -> Option<ErrorCode> {
        ErrorCode::parse(&self.code)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}:{}:{}: error[{}]: {}",
            self.file, self.start.0, self.start.1, self.code, self.message
        );
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            out.push_str(&format!("\n  expected: {e}\n  actual:   {a}"));
        }
        if !self.context.is_empty() {
            out.push_str(&format!("\n  in context: {}", self.context));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}

#[derive(Clone, Debug)]
pub enum Failure {
    Io(Diagnostic),
    Parse(Diagnostic),
    Type(Diagnostic),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Type(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn diagnostic(&self) -> &Diagnostic {
        match self {
            Failure::Io(d) | Failure::Parse(d) | Failure::Type(d) => d,
        }
    }

    fn from_error(e: TypeError, file: &str, fallback: Span) -> Failure {
        let d = Diagnostic::from_error(&e, file, fallback);
        if e.code == ErrorCode::SyntaxError {
            Failure::Parse(d)
        } else {
            Failure::Type(d)
        }
    }
}

/// A checked module together with everything in scope at its end.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub path: PathBuf,
    pub module: SourceModule,
    pub globals: Arc<Globals>,
}

impl Loaded {
    pub fn context(&self) -> Context {
        Context::new(self.globals.clone())
    }
}

/// Loads and checks files, caching imported modules.
#[derive(Default)]
pub struct Loader {
    cache: HashMap<PathBuf, Arc<Globals>>,
    stack: Vec<PathBuf>,
    timings: Vec<(String, Duration)>,
}

const NOWHERE: Span = Span {
    start: (1, 1),
    end: (1, 1),
};

impl Loader {
    pub fn new() -> Loader {
        Loader::default()
    }

    /// Time spent checking each declaration, in order.
    pub fn timings(&self) -> &[(String, Duration)] {
        &self.timings
    }

    pub fn load(&mut self, path: &Path) -> Result<Loaded, Failure> {
        let label = path.display().to_string();
        let src = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(Diagnostic::io(&label, format!("cannot read {label}: {e}"))))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        self.stack.push(key);
        let out = self.load_source(&src, &label, &dir);
        self.stack.pop();
        out.map(|(module, globals)| Loaded {
            path: path.to_path_buf(),
            module,
            globals,
        })
    }

    /// Parse and check source text; imports resolve relative to `dir`.
    pub fn load_source(&mut self, src: &str, label: &str, dir: &Path) -> Result<(SourceModule, Arc<Globals>), Failure> {
        let module = surface::parse_module(src).map_err(|e| Failure::from_error(e, label, NOWHERE))?;
        let mut globals = Globals::new();
        let mut origin: HashMap<Name, String> = HashMap::new();
        for (name, span) in &module.imports {
            let path = dir.join(format!("{name}.ctt"));
            let key = path.canonicalize().unwrap_or_else(|_| path.clone());
            if self.stack.contains(&key) {
                return Err(Failure::Parse(Diagnostic::from_error(
                    &TypeError::new(ErrorCode::SyntaxError, format!("import cycle through `{name}`")),
                    label,
                    *span,
                )));
            }
            let imported = match self.cache.get(&key) {
                Some(g) => g.clone(),
                None => {
                    let loaded = self.load(&path).map_err(|f| match f {
                        Failure::Io(mut d) => {
                            d.file = label.to_string();
                            d.start = span.start;
                            d.end = span.end;
                            Failure::Io(d)
                        }
                        other => other,
                    })?;
                    self.cache.insert(key, loaded.globals.clone());
                    loaded.globals
                }
            };
            for (x, g) in imported.iter() {
                match origin.get(x) {
                    Some(from) if from != name && !imported_same(&globals, x, g) => {
                        return Err(Failure::Type(Diagnostic::from_error(
                            &TypeError::new(
                                ErrorCode::DuplicateDeclaration,
                                format!("`{x}` is imported from both `{from}` and `{name}`"),
                            ),
                            label,
                            *span,
                        )))
                    }
                    Some(_) => {}
                    None => {
                        origin.insert(x.clone(), name.clone());
                        globals.insert(x.clone(), g.clone());
                    }
                }
            }
        }
        let globals = self.check_decls(&module, globals, label)?;
        Ok((module, globals))
    }

    fn check_decls(&mut self, module: &SourceModule, globals: Globals, label: &str) -> Result<Arc<Globals>, Failure> {
        let mut globals = Arc::new(globals);
        for d in &module.decls {
            let started = Instant::now();
            let fail = |e: TypeError| Failure::from_error(e, label, d.span);
            if globals.contains(&d.name) {
                return Err(fail(TypeError::new(
                    ErrorCode::DuplicateDeclaration,
                    format!("`{}` is already declared", d.name),
                )));
            }
            {
                let ctx = Context::new(globals.clone());
                let mut checker = Checker::new();
                checker.check_type(&ctx, d.ty()).map_err(fail)?;
                if let Some(body) = d.body() {
                    checker.check(&ctx, body, d.ty()).map_err(fail)?;
                }
            }
            Arc::make_mut(&mut globals).insert(
                d.name.clone(),
                Global {
                    ty: d.ty().clone(),
                    body: d.body().cloned(),
                },
            );
            self.timings.push((d.name.to_string(), started.elapsed()));
        }
        Ok(globals)
    }
}

fn imported_same(globals: &Globals, x: &Name, g: &Global) -> bool {
    globals.get(x).is_some_and(|h| {
        crate::syntax::alpha_eq(&h.ty, &g.ty)
            && match (&h.body, &g.body) {
                (Some(a), Some(b)) => crate::syntax::alpha_eq(a, b),
                (None, None) => true,
                _ => false,
            }
    })
}

/// Check a file and everything it imports.
pub fn check_file(path: &Path) -> Result<Loaded, Failure> {
    Loader::new().load(path)
}

/// Check source text that has no imports.
pub fn check_source(src: &str) -> Result<Loaded, Failure> {
    let (module, globals) = Loader::new().load_source(src, "<input>", Path::new("."))?;
    Ok(Loaded {
        path: PathBuf::from("<input>"),
        module,
        globals,
    })
}

/// The result of evaluating an expression in the scope of a checked module.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub term: Tm,
    pub ty: Tm,
    pub value: Tm,
}

impl Evaluated {
    pub fn render(&self, globals: &Globals) -> String {
        pretty::term_avoiding(&self.value, globals.iter().map(|(x, _)| x.clone()))
    }
}

/// Parse `expr`, infer its type in the scope of `loaded`, and normalize it
/// (fully, or to weak-head normal form only).
pub fn evaluate(loaded: &Loaded, expr: &str, weak: bool) -> Result<Evaluated, Failure> {
    let label = "<expr>";
    let span = Span {
        start: (1, 1),
        end: (1, expr.chars().count() + 1),
    };
    let term = surface::parse_term(expr).map_err(|e| Failure::from_error(e, label, span))?;
    let ctx = loaded.context();
    let ty = Checker::new()
        .infer(&ctx, &term)
        .map_err(|e| Failure::from_error(e, label, span))?;
    let value = if weak { whnf(&ctx, &term) } else { normalize_at(&ctx, &term, &ty) };
    Ok(Evaluated { term, ty, value })
}

#[derive(Parser, Debug)]
#[command(name = "gctt", version, about = "Type checker for guarded cubical type theory")]
struct Cli {
    /// Print diagnostics as JSON, one object per line.
    #[arg(long, global = true)]
    json: bool,
    /// Log every conversion check to stderr.
    #[arg(long, global = true)]
    trace_conversion: bool,
    /// Report the time spent on each declaration on stderr.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type check every declaration of the given files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Normalize an expression in the scope of a file.
    Normalize {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Stop at weak-head normal form.
        #[arg(long)]
        whnf: bool,
    },
    /// Run a corpus manifest and print a TAP report.
    Corpus {
        manifest: PathBuf,
        /// Also write the report as JSON to this file.
        #[arg(long = "report")]
        report: Option<PathBuf>,
    },
}

fn init_logging(trace: bool) {
    let mut b = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("off"));
    if trace {
        b.filter_module("gctt::check::conv", log::LevelFilter::Trace);
    }
    b.format_timestamp(None).target(env_logger::Target::Stderr);
    let _ = b.try_init();
}

fn report_failure(f: &Failure, json: bool, out: &mut dyn Write, err: &mut dyn Write) {
    let d = f.diagnostic();
    if json {
        let _ = writeln!(out, "{}", d.to_json());
    } else {
        let _ = writeln!(err, "{}", d.render());
    }
}

/// Run the command line with explicit output streams; returns the exit code.
pub fn run_cli_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    init_logging(cli.trace_conversion);
    match cli.command {
        Command::Check { files } => {
            let mut code = 0;
            for file in files {
                let mut loader = Loader::new();
                match loader.load(&file) {
                    Ok(loaded) => {
                        let n = loaded.module.decls.len();
                        if cli.json {
                            let _ = writeln!(
                                out,
                                "{}",
                                serde_json::json!({
                                    "version": DIAGNOSTIC_VERSION,
                                    "file": file.display().to_string(),
                                    "status": "ok",
                                    "declarations": n,
                                })
                            );
                        } else {
                            let _ = writeln!(out, "{}: ok ({n} declarations)", file.display());
                        }
                    }
                    Err(f) => {
                        report_failure(&f, cli.json, out, err);
                        code = code.max(f.exit_code());
                    }
                }
                if cli.timings {
                    for (name, t) in loader.timings() {
                        let _ = writeln!(err, "{:>10.3} ms  {name}", t.as_secs_f64() * 1000.0);
                    }
                }
            }
            code
        }
        Command::Normalize { file, expr, whnf } => {
            let loaded = match check_file(&file) {
                Ok(l) => l,
                Err(f) => {
                    report_failure(&f, cli.json, out, err);
                    return f.exit_code();
                }
            };
            match evaluate(&loaded, &expr, whnf) {
                Ok(v) => {
                    let shown = v.render(&loaded.globals);
                    if cli.json {
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::json!({
                                "version": DIAGNOSTIC_VERSION,
                                "value": shown,
                                "type": pretty::term(&v.ty),
                            })
                        );
                    } else {
                        let _ = writeln!(out, "{shown}");
                    }
                    0
                }
                Err(f) => {
                    report_failure(&f, cli.json, out, err);
                    f.exit_code()
                }
            }
        }
        Command::Corpus { manifest, report } => match crate::corpus::run_manifest(&manifest) {
            Ok(r) => {
                let _ = write!(out, "{}", r.tap());
                if let Some(path) = report {
                    if let Err(e) = std::fs::write(&path, r.json()) {
                        let _ = writeln!(err, "cannot write {}: {e}", path.display());
                        return 3;
                    }
                }
                if r.all_passed() {
                    0
                } else {
                    1
                }
            }
            Err(e) => {
                let _ = writeln!(err, "{e}");
                3
            }
        },
    }
}

/// Entry point of the `gctt` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
