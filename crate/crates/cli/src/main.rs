use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use snakelat_core::bruhat::{reduced_words, verify_three_way, weak_interval};
use snakelat_core::calculus::{find_crossings, Grafting, Instance, Resolved};
use snakelat_core::matchings::{enclosed_set, enumerate_matchings, matching_lattice};
use snakelat_core::verify::{check_word, sweep, Falsification};
use snakelat_core::{ArrowWord, Exec, Letter, SnakeGraph, StringModule};

#[derive(Parser)]
#[command(name = "snakelat", version, about = "Snake graphs, string modules and their lattices")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Snake graph of a string.
    Build { word: String },
    /// All perfect matchings with their enclosed tiles.
    Matchings { word: String },
    /// Matching lattice, covers labeled by tile.
    Lattice { word: String },
    /// Canonical submodule lattice and dimension-vector census.
    Submodules { word: String },
    /// Coxeter element, reduced words and the three-way comparison.
    Bruhat { word: String },
    /// Full pipeline on one word, or on every word up to a length.
    Verify {
        word: Option<String>,
        #[arg(long, value_name = "N")]
        sweep: Option<usize>,
        /// Run the sweep on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Resolution strings w3..w6.
    Resolve(Pair),
    /// Exhaustive check of the matching bijection.
    Phi(Pair),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Pair {
    /// All crossings of two strings.
    #[arg(long, num_args = 2, value_names = ["W1", "W2"])]
    cross: Option<Vec<String>>,
    /// Graft W2 onto W1 at vertex POS through connector E (> or <).
    #[arg(long, num_args = 4, value_names = ["W1", "POS", "E", "W2"])]
    graft: Option<Vec<String>>,
}

enum Failure {
    Parse(String),
    Verification(Vec<Falsification>),
}

impl From<snakelat_core::Error> for Failure {
    fn from(e: snakelat_core::Error) -> Self {
        Failure::Parse(e.to_string())
    }
}

fn word(s: &str) -> Result<ArrowWord, Failure> {
    s.parse().map_err(|e: snakelat_core::Error| Failure::Parse(format!("{s:?}: {e}")))
}

fn letter(s: &str) -> Result<Letter, Failure> {
    match s {
        ">" | "D" | "direct" => Ok(Letter::Direct),
        "<" | "I" | "inverse" => Ok(Letter::Inverse),
        _ => Err(Failure::Parse(format!("connector must be > or <, got {s:?}"))),
    }
}

fn instances(pair: &Pair) -> Result<Vec<Instance>, Failure> {
    if let Some(c) = &pair.cross {
        let (w1, w2) = (word(&c[0])?, word(&c[1])?);
        return Ok(find_crossings(&w1, &w2).into_iter().map(Instance::Crossing).collect());
    }
    let g = pair.graft.as_ref().expect("clap enforces one of the two");
    let pos = g[1].parse::<usize>().map_err(|_| Failure::Parse(format!("bad vertex position {:?}", g[1])))?;
    let graft = Grafting::new(word(&g[0])?, pos, letter(&g[2])?, word(&g[3])?)?;
    Ok(vec![Instance::Grafting(graft)])
}

fn json_out(v: &impl Serialize) {
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("plain data"));
}

fn support(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fmt = cli.format;
    match cli.command {
        Command::Build { word: w } => {
            let g = SnakeGraph::build(&word(&w)?);
            match fmt {
                Format::Json => json_out(&g.to_json()),
                Format::Dot => print!("{}", g.to_dot()),
                Format::Text => {
                    let dirs: Vec<String> = g.directions().iter().map(|d| format!("{d:?}")).collect();
                    println!("tiles {}", g.tile_count());
                    println!("directions [{}]", dirs.join(","));
                    for k in 1..=g.tile_count() {
                        println!("tile {k} at {:?} weight {}", g.tile(k), g.weight(k));
                    }
                }
            }
        }
        Command::Matchings { word: w } => {
            let m = StringModule::new(&word(&w)?);
            let all = enumerate_matchings(m.graph());
            let enclosed: Vec<Vec<usize>> = all.iter().map(|p| enclosed_set(m.graph(), p, m.minimal_matching())).collect();
            match fmt {
                Format::Json => json_out(&json!({ "count": all.len(), "matchings": all, "enclosed": enclosed })),
                Format::Dot => print!("{}", m.graph().to_dot()),
                Format::Text => {
                    println!("{} perfect matchings", all.len());
                    for (p, e) in all.iter().zip(&enclosed) {
                        let edges: Vec<String> = p.edges().iter().map(|e| format!("{:?}-{:?}", e.0, e.1)).collect();
                        println!("{} {}", support(e), edges.join(" "));
                    }
                }
            }
        }
        Command::Lattice { word: w } => {
            let m = StringModule::new(&word(&w)?);
            let l = matching_lattice(m.graph());
            let name = |_: usize, p: &_| support(&enclosed_set(m.graph(), p, m.minimal_matching()));
            match fmt {
                Format::Json => json_out(&l),
                Format::Dot => print!("{}", l.to_dot(name)),
                Format::Text => {
                    for i in 0..l.len() {
                        println!("node {i} rank {} encloses {}", l.rank(i), name(i, l.node(i)));
                    }
                    for c in l.covers() {
                        println!("{} -> {} by tile {}", c.lo, c.hi, c.label);
                    }
                }
            }
        }
        Command::Submodules { word: w } => {
            let m = StringModule::new(&word(&w)?);
            let l = m.submodule_lattice();
            let mut census: BTreeMap<String, (Value, usize)> = BTreeMap::new();
            for n in l.nodes() {
                let dv = m.dimension_vector(n);
                let key = serde_json::to_string(&dv).expect("plain data");
                census.entry(key).or_insert((json!(dv), 0)).1 += 1;
            }
            let census: Vec<Value> = census.into_values().map(|(dv, c)| json!({ "dimension_vector": dv, "count": c })).collect();
            match fmt {
                Format::Json => json_out(&json!({ "lattice": l, "census": census })),
                Format::Dot => print!("{}", l.to_dot(|_, n| support(n.support()))),
                Format::Text => {
                    println!("{} submodules", l.len());
                    for n in l.nodes() {
                        println!("{} dim {:?}", support(n.support()), m.dimension_vector(n));
                    }
                }
            }
        }
        Command::Bruhat { word: w } => {
            let m = StringModule::new(&word(&w)?);
            let report = verify_three_way(&m);
            let words = report.sigma.as_ref().map(reduced_words).unwrap_or_default();
            match fmt {
                Format::Json => json_out(&json!({ "report": report, "reduced_words": words })),
                Format::Dot => {
                    if let Some(s) = &report.sigma {
                        print!("{}", weak_interval(s).to_dot(|_, p| format!("{:?}", p.one_line())));
                    }
                }
                Format::Text => {
                    println!(
                        "nodes {}/{}/{} (matchings/submodules/interval)",
                        report.matching_nodes, report.submodule_nodes, report.interval_nodes
                    );
                    if let Some(s) = &report.sigma {
                        println!("sigma {:?}", s.one_line());
                    }
                    println!("{} reduced words, {} maximal chains", report.reduced_words, report.maximal_chains);
                    for r in &words {
                        println!("  {r:?}");
                    }
                }
            }
            if !report.passed() {
                return Err(Failure::Verification(report.failures));
            }
        }
        Command::Verify { word: w, sweep: n, sequential } => {
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let failures = match (w, n) {
                (Some(w), _) => {
                    let w = word(&w)?;
                    let f = check_word(&w);
                    if fmt == Format::Text {
                        println!("{w}: {} failures", f.len());
                    } else {
                        json_out(&json!({ "word": w, "failures": f }));
                    }
                    f
                }
                (None, n) => {
                    let r = sweep(n.unwrap_or(6), exec);
                    if fmt == Format::Text {
                        println!("{} words up to length {}: {} failures", r.words, r.max_len, r.failures.len());
                    } else {
                        json_out(&r);
                    }
                    r.failures
                }
            };
            if !failures.is_empty() {
                return Err(Failure::Verification(failures));
            }
        }
        Command::Resolve(pair) => {
            let list: Vec<Value> = instances(&pair)?
                .into_iter()
                .map(|i| {
                    let r = snakelat_core::calculus::resolve(&i);
                    json!({ "instance": i, "resolution": r })
                })
                .collect();
            match fmt {
                Format::Text => {
                    for v in &list {
                        let r = &v["resolution"];
                        let ws: Vec<&str> = ["w3", "w4", "w5", "w6"].iter().map(|k| r[k].as_str().unwrap_or_default()).collect();
                        println!("{}", ws.join(" "));
                    }
                }
                _ => json_out(&list),
            }
        }
        Command::Phi(pair) => {
            let reports: Vec<_> = instances(&pair)?.into_iter().map(|i| Resolved::new(i).verify(Exec::default())).collect();
            match fmt {
                Format::Text => {
                    for r in &reports {
                        println!(
                            "{}: counts {:?}, {} pairs, {} resolved, {} residual, bijective {}",
                            r.instance, r.counts, r.pairs, r.resolved, r.residual, r.bijective
                        );
                    }
                }
                _ => json_out(&reports),
            }
            let failures: Vec<Falsification> = reports.into_iter().flat_map(|r| r.failures).collect();
            if !failures.is_empty() {
                return Err(Failure::Verification(failures));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(f)) => {
            json_out(&json!({ "falsifications": f }));
            ExitCode::from(2)
        }
    }
}
