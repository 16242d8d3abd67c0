//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 malformed or invalid input, 3 hypothesis
//! not met under `--strict`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classify::{
    brunnian_representative, cor2_consistency, homotopy_normal_form, homotopy_trivial, link_homotopic, selfdelta_equivalent,
    selfdelta_trivial, selfdelta_vector, NormalForm, SelfDeltaVector, Verdict,
};
use crate::diagram::{
    make_milnor_link, make_v_pi, make_v_tau, parse_diagram_file, Diagram, LinkDiagram, LinkFile,
    ParsedDiagram, StringLinkDiagram,
};
use crate::error::Error;
use crate::invariants::{table, DeltaMode};
use crate::multiindex::{InjectionPi, SurjectionTau};

#[derive(Parser, Debug)]
#[command(name = "milnor", version, about = "Milnor invariants and classification of links and string links")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate invariants of each input file.
    Invariants(InvariantsArgs),
    /// Normal forms, self-delta vectors and pairwise verdicts.
    Classify(ClassifyArgs),
    /// Emit a generator diagram as a PD link file.
    #[command(subcommand)]
    Generate(Generate),
    /// Replace components by zero-framed parallel copies.
    Cable(CableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaArg {
    MilnorCyclic,
    PaperStrict,
}

impl From<DeltaArg> for DeltaMode {
    fn from(d: DeltaArg) -> Self {
        match d {
            DeltaArg::MilnorCyclic => DeltaMode::MilnorCyclic,
            DeltaArg::PaperStrict => DeltaMode::PaperStrict,
        }
    }
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_length: usize,
    #[arg(long, default_value_t = 2)]
    pub max_r: usize,
    #[arg(long, value_enum, default_value = "milnor-cyclic")]
    pub delta_mode: DeltaArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Only print rows with a nonzero value.
    #[arg(long)]
    pub nonzero: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(required = true, num_args = 1..=2)]
    pub files: Vec<PathBuf>,
    /// Decide link-homotopy of two string links.
    #[arg(long, conflicts_with = "self_delta")]
    pub homotopy: bool,
    /// Decide self-delta equivalence of two links.
    #[arg(long)]
    pub self_delta: bool,
    #[arg(long, value_enum, default_value = "milnor-cyclic")]
    pub delta_mode: DeltaArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Exit with status 3 when a theorem's hypothesis is not met.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    /// Closure of V_(1 2 ... n).
    MilnorLink {
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// V_π for an injection given as comma-separated values.
    VPi {
        values: String,
        /// Component count (defaults to the largest value).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        closure: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// V_τ for τ(1)..τ(m-2) given as comma-separated values.
    VTau {
        values: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        closure: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trivial link or string link.
    Trivial {
        n: usize,
        #[arg(long)]
        string_link: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cable of a link file.
    Cable(CableArgs),
}

#[derive(Args, Debug)]
pub struct CableArgs {
    pub file: PathBuf,
    /// Comma-separated multiplicities, one per component.
    pub multiplicities: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Errors carrying their exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Hypothesis(String),
}

pub fn exit_code(e: &anyhow::Error) -> i32 {
    if let Some(c) = e.downcast_ref::<CliError>() {
        return match c {
            CliError::Usage(_) => 1,
            CliError::Hypothesis(_) => 3,
        };
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Hypothesis(_)) => 3,
        Some(Error::ComponentMismatch(..)) | Some(Error::InvalidParameters(_)) => 1,
        _ => 2,
    }
}

/// Parses `std::env::args`, runs, prints, and returns the exit status.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command and returns what it would print.
pub fn execute(cli: &Cli) -> anyhow::Result<String> {
    if let Some(j) = cli.jobs {
        // Fails harmlessly if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match &cli.command {
        Command::Invariants(a) => cmd_invariants(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Generate(g) => cmd_generate(g),
        Command::Cable(a) => cmd_cable(a),
    }
}

fn load(path: &Path) -> anyhow::Result<(String, ParsedDiagram)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let d = parse_diagram_file(&text).with_context(|| format!("in {}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((name, d))
}

fn parse_list(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!(CliError::Usage(format!("bad list entry {t:?}")))))
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_invariants(a: &InvariantsArgs) -> anyhow::Result<String> {
    if a.max_length < 2 || a.max_r < 1 {
        return Err(CliError::Usage("need --max-length >= 2 and --max-r >= 1".into()).into());
    }
    let mut tables = Vec::new();
    for f in &a.files {
        let (name, d) = load(f)?;
        tables.push(table(d.diagram(), &name, a.max_length, a.max_r, a.delta_mode.into())?);
    }
    Ok(match a.format {
        Format::Json if tables.len() == 1 => to_json(&tables[0]),
        Format::Json => to_json(&tables),
        Format::Table => tables.iter().map(|t| t.to_text(a.nonzero)).collect::<Vec<_>>().join("\n"),
    })
}

fn vector_text(name: &str, v: &SelfDeltaVector) -> String {
    let mut out = String::new();
    if v.hypothesis_ok {
        out += &format!("{name}: hypothesis holds (r <= 2 invariants vanish up to length {})\n", 2 * v.n - 1);
        for e in v.entries.iter().filter(|e| !e.residue.is_zero()) {
            out += &format!("  {}: {}\n", e.index, e.residue);
        }
    } else if let Some(o) = &v.obstruction {
        out += &format!("{name}: hypothesis fails at {}: {}\n", o.index, o.residue);
    }
    out
}

fn normal_form_text(name: &str, nf: &NormalForm) -> String {
    let mut out = format!("{name}: link-homotopy normal form\n");
    for e in nf.entries.iter().filter(|e| e.exponent != 0) {
        out += &format!("  V_{}^{}\n", e.pi, e.exponent);
    }
    if nf.is_trivial() {
        out += "  trivial\n";
    }
    out
}

fn cmd_classify(a: &ClassifyArgs) -> anyhow::Result<String> {
    let mode: DeltaMode = a.delta_mode.into();
    let inputs = a.files.iter().map(|f| load(f)).collect::<anyhow::Result<Vec<_>>>()?;
    match inputs.as_slice() {
        [(name, ParsedDiagram::StringLink(s))] => {
            if a.self_delta {
                return Err(CliError::Usage("--self-delta applies to links".into()).into());
            }
            let nf = homotopy_normal_form(s)?;
            Ok(match a.format {
                Format::Json => to_json(&json!({ "subject": name, "kind": "stringlink", "normal_form": nf })),
                Format::Table => normal_form_text(name, &nf),
            })
        }
        [(name, ParsedDiagram::Link(l))] => {
            if a.homotopy {
                return Err(CliError::Usage("--homotopy applies to string links".into()).into());
            }
            let v = selfdelta_vector(l, mode)?;
            if a.strict && !v.hypothesis_ok {
                return Err(CliError::Hypothesis(vector_text(name, &v).trim_end().to_string()).into());
            }
            let trivial = selfdelta_trivial(l, mode)?;
            let homotopy = homotopy_trivial(l, mode)?;
            let cor2 = cor2_consistency(l, mode)?;
            let brunnian = if v.hypothesis_ok && l.n() >= 2 { Some(brunnian_representative(l, mode)?) } else { None };
            Ok(match a.format {
                Format::Json => to_json(&json!({
                    "subject": name,
                    "kind": "link",
                    "selfdelta_vector": v,
                    "selfdelta_trivial": trivial,
                    "homotopy_trivial": homotopy,
                    "cor2": cor2,
                    "brunnian_representative": brunnian,
                })),
                Format::Table => {
                    let mut out = vector_text(name, &v);
                    out += &format!("  link-homotopy trivial: {homotopy}\n");
                    out += &format!("  self-delta trivial: {trivial}\n");
                    out += &format!(
                        "  doubled link homotopy-trivial: {} (consistent: {})\n",
                        cor2.cable_homotopy_trivial, cor2.consistent
                    );
                    if let Some(b) = &brunnian {
                        for e in b.epsilon.iter().chain(&b.r_exponents).chain(&b.p_exponents) {
                            if e.exponent != 0 {
                                out += &format!("  V_{}^{}\n", e.tau, e.exponent);
                            }
                        }
                    }
                    out
                }
            })
        }
        [(na, ParsedDiagram::StringLink(x)), (nb, ParsedDiagram::StringLink(y))] => {
            if a.self_delta {
                return Err(CliError::Usage("--self-delta applies to links".into()).into());
            }
            let same = link_homotopic(x, y)?;
            let (fa, fb) = (homotopy_normal_form(x)?, homotopy_normal_form(y)?);
            Ok(match a.format {
                Format::Json => to_json(&json!({
                    "subjects": [na, nb],
                    "link_homotopic": same,
                    "normal_forms": [fa, fb],
                })),
                Format::Table => format!("{}\n", if same { "link-homotopic" } else { "not link-homotopic" }),
            })
        }
        [(na, ParsedDiagram::Link(x)), (nb, ParsedDiagram::Link(y))] => {
            if a.homotopy {
                return Err(CliError::Usage("--homotopy compares string links".into()).into());
            }
            let d = selfdelta_equivalent(x, y, mode)?;
            if a.strict && d.verdict == Verdict::Undecided {
                return Err(CliError::Hypothesis("Undecided: the classification hypothesis fails".into()).into());
            }
            Ok(match a.format {
                Format::Json => to_json(&json!({ "subjects": [na, nb], "decision": d })),
                Format::Table => format!("{}\n", d.verdict),
            })
        }
        _ => Err(CliError::Usage("cannot compare a link with a string link".into()).into()),
    }
}

fn emit(d: &Diagram, default_name: &str, out: &OutputArgs) -> anyhow::Result<String> {
    let name = out.name.clone().unwrap_or_else(|| default_name.to_string());
    let text = LinkFile::from_diagram(d, &name).to_json() + "\n";
    match &out.output {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn sign(inverse: bool) -> i8 {
    if inverse {
        -1
    } else {
        1
    }
}

fn finish(s: StringLinkDiagram, closure: bool) -> Diagram {
    if closure {
        s.closure().diagram().clone()
    } else {
        s.diagram().clone()
    }
}

fn cmd_generate(g: &Generate) -> anyhow::Result<String> {
    match g {
        Generate::MilnorLink { n, out } => emit(make_milnor_link(*n)?.diagram(), &format!("milnor-{n}"), out),
        Generate::VPi { values, n, inverse, closure, out } => {
            let values = parse_list(values)?;
            let n = n.unwrap_or_else(|| values.iter().copied().max().unwrap_or(0));
            let pi = InjectionPi::new(n, values)?;
            let s = make_v_pi(&pi, sign(*inverse))?;
            emit(&finish(s, *closure), &format!("v-pi-{pi}"), out)
        }
        Generate::VTau { values, k, n, inverse, closure, out } => {
            let values = parse_list(values)?;
            let tau = SurjectionTau::new(values.len() + 2, *k, *n, values)?;
            let s = make_v_tau(&tau, sign(*inverse))?;
            emit(&finish(s, *closure), &format!("v-tau-{}", tau.index()), out)
        }
        Generate::Trivial { n, string_link, out } => {
            let d = if *string_link {
                StringLinkDiagram::trivial(*n).diagram().clone()
            } else {
                LinkDiagram::trivial(*n).diagram().clone()
            };
            emit(&d, &format!("trivial-{n}"), out)
        }
        Generate::Cable(a) => cmd_cable(a),
    }
}

fn cmd_cable(a: &CableArgs) -> anyhow::Result<String> {
    let (name, d) = load(&a.file)?;
    let ParsedDiagram::Link(l) = d else {
        return Err(CliError::Usage("cabling needs a link".into()).into());
    };
    let mults = parse_list(&a.multiplicities)?;
    let (c, _) = l.cable(&mults)?;
    emit(c.diagram(), &format!("{name}-cable"), &a.out)
}
