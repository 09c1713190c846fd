//! `sak`: command-line access to lap signatures, Sturm permutations and
//! connection graphs.

use std::fs;
use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sturm_core::bijection::{compose_paths, permutation_to_signature, signature_to_permutation};
use sturm_core::census::{census_with_limit, is_integrable_involution, CensusClass, Dedup};
use sturm_core::conngraph::{
    neumann_graph, neumann_graph_labelled, quotient_periodic, transitive_reduction, ConnectionGraph,
};
use sturm_core::lapsig::{
    counts, enumerate_signatures, labels, parse_signature, validate, Bound, FullLapSignature,
};
use sturm_core::pitchfork::{find_pitchforks, fully_reducible, fully_reducible_exhaustive};
use sturm_core::render::{graph_dot, graph_json, meander_arcs, meander_dot, meander_json, meander_svg, SvgOptions};
use sturm_core::{Error, Permutation};

#[derive(Parser, Debug)]
#[command(name = "sak", version, about = "Sturm attractor toolkit")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,

    /// Worker threads for census and enumeration (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a full lap signature against all nine axioms.
    ValidateSig {
        signature: String,
        #[arg(long)]
        json: bool,
    },
    /// Report the Sturm and integrability clauses of a permutation.
    ValidatePerm {
        permutation: String,
        #[arg(long)]
        json: bool,
    },
    /// List all signatures within a bound, one per reversal class.
    Enumerate(EnumerateArgs),
    /// Integrable Sturm involution of a signature.
    SigToPerm {
        signature: String,
        /// Also print the min/max pairs.
        #[arg(long)]
        pairing: bool,
    },
    /// Signature of an integrable Sturm involution.
    PermToSig { permutation: String },
    /// Connection graph of a Sturm permutation or a signature.
    Graph(GraphArgs),
    /// Stylized meander of a permutation.
    Meander(MeanderArgs),
    /// Count Sturm permutations of one size.
    Census(CensusArgs),
    /// Formal pitchfork reduction towards N = 1.
    Pitchfork {
        permutation: String,
        /// Print every intermediate permutation.
        #[arg(long)]
        trace: bool,
        /// Try every pitchfork order instead of the first one each time.
        #[arg(long)]
        exhaustive: bool,
    },
    /// The permutation h0⁻¹ ∘ h1.
    ComposePaths { h0: String, h1: String },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("bound").required(true).args(["max_nq", "max_n"])))]
struct EnumerateArgs {
    /// Bound n + q ≤ K.
    #[arg(long = "max-nq", value_name = "K")]
    max_nq: Option<usize>,
    /// Bound N = n + 2q ≤ M.
    #[arg(long = "max-N", value_name = "M")]
    max_n: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Print raw and reversal-class counts per N instead of the list.
    #[arg(long)]
    summary: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BcArg {
    Neumann,
    Periodic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct GraphArgs {
    permutation: Option<String>,
    #[arg(long)]
    sig: Option<String>,
    #[arg(long, value_enum, default_value = "neumann")]
    bc: BcArg,
    /// Keep only the edges not implied by transitivity.
    #[arg(long)]
    reduce: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MeanderFormat {
    Svg,
    Dot,
    Json,
}

#[derive(Args, Debug)]
struct MeanderArgs {
    permutation: Option<String>,
    #[arg(long)]
    sig: Option<String>,
    #[arg(long, value_enum, default_value = "svg")]
    format: MeanderFormat,
    /// Number the axis positions.
    #[arg(long)]
    labels: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ClassArg {
    All,
    Involutions,
    Integrable,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DedupArg {
    None,
    Trivial,
    Both,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long = "N", value_name = "M")]
    n: usize,
    #[arg(long, value_enum, default_value = "all")]
    class: ClassArg,
    #[arg(long, value_enum, default_value = "both")]
    dedup: DedupArg,
    /// Largest N accepted.
    #[arg(long)]
    limit: Option<usize>,
    /// Include the members in the report.
    #[arg(long)]
    list: bool,
}

/// Outcome of a command that ran without error but may report a failed check.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn read_arg(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn perm_arg(arg: &str) -> Result<Permutation, Error> {
    read_arg(arg)?.parse()
}

fn sig_arg(arg: &str) -> Result<FullLapSignature, Error> {
    parse_signature(&read_arg(arg)?)
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn validate_sig(text: &str, as_json: bool) -> Result<Output, Error> {
    let sig = match sig_arg(text) {
        Ok(s) => s,
        Err(Error::InvalidSignature(v)) => {
            return Ok(report_violations(&v, as_json));
        }
        Err(e) => return Err(e),
    };
    let violations = validate(&sig);
    if !violations.is_empty() {
        return Ok(report_violations(&violations, as_json));
    }
    let c = counts(&sig)?;
    let text = if as_json {
        line(json!({"valid": true, "signature": sig.to_string(), "n": c.n, "q": c.q, "N": c.big_n, "centers": c.centers}))
    } else {
        format!("valid {sig}\nn={} q={} N={} centers={}\n", c.n, c.q, c.big_n, c.centers)
    };
    Ok(Output::ok(text))
}

fn report_violations(v: &[sturm_core::lapsig::Violation], as_json: bool) -> Output {
    let text = if as_json {
        line(json!({"valid": false, "violations": v}))
    } else {
        v.iter().map(|x| format!("violation {x}\n")).collect()
    };
    Output { text, ok: false }
}

fn validate_perm(text: &str, as_json: bool) -> Result<Output, Error> {
    let p = perm_arg(text)?;
    let r = is_integrable_involution(&p);
    let text = if as_json {
        line(serde_json::to_string(&r).unwrap_or_default())
    } else {
        line(&r)
    };
    Ok(Output { text, ok: r.sturm })
}

fn enumerate(args: &EnumerateArgs) -> Result<Output, Error> {
    let bound = match (args.max_nq, args.max_n) {
        (Some(k), _) => Bound::MaxNQ(k),
        (None, Some(m)) => Bound::MaxN(m),
        (None, None) => return Err(Error::InvalidArgument("give --max-nq or --max-N".into())),
    };
    let e = enumerate_signatures(bound);
    if args.summary {
        let by_n: serde_json::Map<String, serde_json::Value> = e
            .counts_by_big_n()
            .into_iter()
            .map(|(n, (raw, dedup))| (n.to_string(), json!({"raw": raw, "uptoTrivial": dedup})))
            .collect();
        return Ok(Output::ok(line(
            json!({"raw": e.raw_count(), "uptoTrivial": e.dedup_count(), "byN": by_n}),
        )));
    }
    let text = e
        .signatures
        .iter()
        .map(|s| {
            if args.json {
                line(json!({"signature": s.signature.to_string(), "n": s.counts.n, "q": s.counts.q, "N": s.counts.big_n}))
            } else {
                line(&s.signature)
            }
        })
        .collect();
    Ok(Output::ok(text))
}

fn sig_to_perm(text: &str, pairing: bool) -> Result<Output, Error> {
    let (p, pairs) = signature_to_permutation(&sig_arg(text)?)?;
    let mut out = line(&p);
    if pairing {
        let listed: Vec<String> = pairs.pairs.iter().map(|x| format!("({},{})", x.min, x.max)).collect();
        out.push_str(&line(listed.join(" ")));
    }
    Ok(Output::ok(out))
}

fn graph(args: &GraphArgs) -> Result<Output, Error> {
    let (p, sig) = resolve(args.permutation.as_deref(), args.sig.as_deref())?;
    let g: ConnectionGraph = match (args.bc, sig) {
        (BcArg::Neumann, None) => neumann_graph(&p)?,
        (BcArg::Neumann, Some(s)) => neumann_graph_labelled(&p, &labels(&s)?)?,
        (BcArg::Periodic, sig) => {
            let s = match sig {
                Some(s) => s,
                None => permutation_to_signature(&p)?,
            };
            let (_, pairing) = signature_to_permutation(&s)?;
            let l = labels(&s)?;
            quotient_periodic(&neumann_graph_labelled(&p, &l)?, &pairing, &l)?
        }
    };
    let g = if args.reduce { transitive_reduction(&g)? } else { g };
    let text = match args.format {
        GraphFormat::Json => line(graph_json(&g)),
        GraphFormat::Dot => graph_dot(&g),
    };
    Ok(Output::ok(text))
}

/// Permutation and optional signature from the positional and `--sig` inputs.
fn resolve(perm: Option<&str>, sig: Option<&str>) -> Result<(Permutation, Option<FullLapSignature>), Error> {
    let sig = sig.map(sig_arg).transpose()?;
    let p = match (perm, &sig) {
        (Some(p), _) => perm_arg(p)?,
        (None, Some(s)) => signature_to_permutation(s)?.0,
        (None, None) => return Err(Error::InvalidArgument("give a permutation or --sig".into())),
    };
    if let Some(s) = &sig {
        let (image, _) = signature_to_permutation(s)?;
        if image != p {
            return Err(Error::InvalidArgument(format!("signature {s} belongs to {image}, not {p}")));
        }
    }
    Ok((p, sig))
}

fn meander(args: &MeanderArgs) -> Result<Output, Error> {
    let (p, sig) = resolve(args.permutation.as_deref(), args.sig.as_deref())?;
    let l = sig.as_ref().map(labels).transpose()?;
    let m = meander_arcs(&p, l.as_deref())?;
    let text = match args.format {
        MeanderFormat::Svg => meander_svg(&m, SvgOptions { labels: args.labels }),
        MeanderFormat::Dot => meander_dot(&m),
        MeanderFormat::Json => line(meander_json(&m)),
    };
    Ok(Output::ok(text))
}

fn census(args: &CensusArgs) -> Result<Output, Error> {
    let class = match args.class {
        ClassArg::All => CensusClass::All,
        ClassArg::Involutions => CensusClass::Involutions,
        ClassArg::Integrable => CensusClass::Integrable,
    };
    let dedup = if args.dedup == DedupArg::Trivial { Dedup::Trivial } else { Dedup::None };
    let limit = args.limit.unwrap_or(class.default_limit());
    let r = census_with_limit(args.n, class, dedup, limit)?;
    let mut doc = serde_json::Map::new();
    doc.insert("N".into(), json!(r.n));
    doc.insert("class".into(), json!(r.class));
    if args.dedup != DedupArg::Trivial {
        doc.insert("raw".into(), json!(r.raw));
    }
    if args.dedup != DedupArg::None {
        doc.insert("uptoTrivial".into(), json!(r.upto_trivial));
    }
    if args.list {
        let members: Vec<String> = r.members.iter().map(|p| p.to_string()).collect();
        doc.insert("members".into(), json!(members));
    }
    Ok(Output::ok(line(serde_json::Value::Object(doc))))
}

fn pitchfork(text: &str, trace: bool, exhaustive: bool) -> Result<Output, Error> {
    let p = perm_arg(text)?;
    if p.len() > 1 && find_pitchforks(&p)?.is_empty() {
        return Ok(Output { text: line("no pitchfork"), ok: false });
    }
    let (ok, steps) = if exhaustive {
        match fully_reducible_exhaustive(&p)? {
            Some(t) => (true, t),
            None => (false, Vec::new()),
        }
    } else {
        fully_reducible(&p)
    };
    let mut out = String::new();
    if trace {
        out.push_str(&line(&p));
        for s in &steps {
            out.push_str(&line(&s.result));
        }
    }
    if ok {
        out.push_str(&line(format!("reducible to N=1 in {} steps", steps.len())));
    } else if exhaustive {
        out.push_str(&line("no reduction order reaches N=1"));
    } else {
        let n = steps.last().map(|s| s.result.len()).unwrap_or(p.len());
        out.push_str(&line(format!("stuck at N={n} after {} steps", steps.len())));
    }
    Ok(Output { text: out, ok })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::ValidateSig { signature, json } => validate_sig(signature, *json),
        Command::ValidatePerm { permutation, json } => validate_perm(permutation, *json),
        Command::Enumerate(a) => enumerate(a),
        Command::SigToPerm { signature, pairing } => sig_to_perm(signature, *pairing),
        Command::PermToSig { permutation } => {
            Ok(Output::ok(line(permutation_to_signature(&perm_arg(permutation)?)?)))
        }
        Command::Graph(a) => graph(a),
        Command::Meander(a) => meander(a),
        Command::Census(a) => census(a),
        Command::Pitchfork { permutation, trace, exhaustive } => pitchfork(permutation, *trace, *exhaustive),
        Command::ComposePaths { h0, h1 } => Ok(Output::ok(line(compose_paths(&perm_arg(h0)?, &perm_arg(h1)?)?))),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::MalformedPermutation(_) | Error::InvalidArgument(_) => 2,
        Error::InternalInvariant(_) => 3,
        _ => 1,
    }
}

fn diagnostic(msg: &str) {
    let color = std::env::var("SAK_COLOR").map(|v| v != "0").unwrap_or(true) && std::io::stderr().is_terminal();
    if color {
        eprintln!("\x1b[1;31merror:\x1b[0m {msg}");
    } else {
        eprintln!("error: {msg}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            diagnostic(&format!("cannot configure {k} worker threads: {e}"));
            return ExitCode::from(3);
        }
    }
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            diagnostic(&e.to_string());
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        diagnostic(&format!("cannot write output: {e}"));
        return ExitCode::from(2);
    }
    ExitCode::from(if out.ok { 0 } else { 1 })
}
