use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use discmono::arrangement::{chamber_count, coxeter_euler_checks, Arrangement};
use discmono::coxeter::{generate_group, molien_degrees, molien_series, CoxeterDiagram, GroupType, RootSystemData};
use discmono::finite_field::CharSumSetup;
use discmono::invariants::{basic_invariants, discriminant_in_invariants, discriminant_poly};
use discmono::macdonald::{integral_report, max_report, MacdonaldConstants, DEFAULT_SEED};
use discmono::monodromy::{MonodromyClass, RotationNumber};
use discmono::recursion::{check_ab2, connected_subgraphs, qn_class, DiagramClassCache, IdentityCheck};

const SCHEMA: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "discmono",
    version,
    about = "Monodromy of Coxeter discriminants and related checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum At {
    #[value(name = "0")]
    Zero,
    Inf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "M")]
    M,
    #[value(name = "globalB")]
    GlobalB,
    #[value(name = "qN")]
    QN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    Deg,
    Conn,
    Compl,
    Otherform,
    Ab2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zeta function of the local monodromy in factored form.
    Zeta { diagram: String },
    /// A monodromy class and its zeta function.
    Class {
        diagram: String,
        /// Point of the global family; implies `--which globalB` unless given.
        #[arg(long, value_enum)]
        at: Option<At>,
        #[arg(long, value_enum)]
        which: Option<Which>,
    },
    /// Connected induced subdiagrams with their types.
    Subgraphs { diagram: String },
    /// Degrees of the basic invariants.
    Degrees { group: String },
    /// Degrees recovered from the Molien series of the generated group.
    Molien { group: String },
    /// Number of chambers of the reflection arrangement.
    Chambers { group: String },
    /// Euler characteristic of the arrangement complement in the unit quadric.
    Euler { group: String },
    /// Basic invariants, starting with the quadratic form.
    Invariants { group: String },
    /// The discriminant in basic invariant coordinates.
    Discriminant { group: String },
    /// The constant kappa and the discriminant of the quadratic form.
    Kappa { group: String },
    /// Maximum of the discriminant on the unit sphere, optimized and closed form.
    Max {
        group: String,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Gaussian integral of a power of the discriminant.
    Integral {
        group: String,
        #[arg(short = 's')]
        s: u32,
    },
    /// Brute-force character sums over a prime field.
    Charsum {
        group: String,
        #[arg(short = 'p')]
        p: u64,
        /// Character index; all characters when omitted.
        #[arg(long)]
        chi: Option<u64>,
    },
    /// Character sums against the Gauss-sum product.
    VerifyFinite {
        group: String,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long)]
        chi: Option<u64>,
    },
    /// Runs one identity between monodromy classes.
    Check {
        diagram: String,
        #[arg(long, value_enum)]
        identity: Identity,
        /// Rotation number `a/k`, used by `ab2`.
        #[arg(long, default_value = "0")]
        chi: String,
    },
}

struct Output {
    text: String,
    json: Value,
    pass: bool,
}

impl Output {
    fn info(text: String, json: Value) -> Self {
        Self { text, json, pass: true }
    }
}

fn parse_type(s: &str) -> Result<GroupType> {
    s.parse().with_context(|| format!("unknown type `{s}`"))
}

fn parse_diagram(s: &str) -> Result<CoxeterDiagram> {
    CoxeterDiagram::parse(s).with_context(|| format!("unknown diagram `{s}`"))
}

fn class_json(c: &MonodromyClass) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .map(|(r, m)| json!({ "rotation": r.to_string(), "multiplicity": m }))
        .collect();
    Value::Array(terms)
}

fn class_output(label: &str, c: &MonodromyClass) -> Result<Output> {
    let zeta = c.zeta()?;
    Ok(Output::info(
        format!("{label}: {c}\nzeta: {zeta}"),
        json!({ "label": label, "class": class_json(c), "text": c.to_string(), "zeta": zeta, "zeta_text": zeta.to_string() }),
    ))
}

fn identity_output(check: &IdentityCheck) -> Output {
    let pass = check.holds();
    let text = if pass {
        format!("{}: holds ({} = {})", check.identity, check.lhs, check.rhs)
    } else {
        format!(
            "{}: FAILS\n  lhs: {}\n  rhs: {}\n  lhs - rhs: {}",
            check.identity,
            check.lhs,
            check.rhs,
            check.difference()
        )
    };
    Output {
        text,
        json: json!({
            "identity": check.identity,
            "lhs": class_json(&check.lhs),
            "rhs": class_json(&check.rhs),
            "pass": pass,
        }),
        pass,
    }
}

fn run(command: &Command) -> Result<Output> {
    let cache = DiagramClassCache::new();
    Ok(match command {
        Command::Zeta { diagram } => {
            let z = cache.local_class(&parse_diagram(diagram)?)?.zeta()?;
            Output::info(
                z.to_string(),
                json!({ "diagram": diagram, "zeta": z, "text": z.to_string() }),
            )
        }
        Command::Class { diagram, at, which } => {
            let d = parse_diagram(diagram)?;
            let which = which.unwrap_or(if at.is_some() { Which::GlobalB } else { Which::M });
            let (label, c) = match which {
                Which::M => ("M".to_string(), cache.local_class(&d)?),
                Which::QN => ("qN".to_string(), qn_class(&d)?),
                Which::GlobalB => match at.unwrap_or(At::Zero) {
                    At::Zero => ("globalB at 0".to_string(), cache.global_class_at_0(&d)?),
                    At::Inf => ("globalB at inf".to_string(), cache.global_class_at_inf(&d)?),
                },
            };
            class_output(&label, &c)?
        }
        Command::Subgraphs { diagram } => {
            let subs = connected_subgraphs(&parse_diagram(diagram)?)?;
            let text = subs
                .iter()
                .map(|s| {
                    let v: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
                    format!("{{{}}} {}", v.join(","), s.group_type)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let rows: Vec<Value> = subs
                .iter()
                .map(|s| json!({ "vertices": s.vertices, "type": s.group_type.to_string() }))
                .collect();
            Output::info(text, json!({ "diagram": diagram, "subgraphs": rows }))
        }
        Command::Degrees { group } => {
            let t = parse_type(group)?;
            let d = t.degrees();
            Output::info(
                join(&d),
                json!({ "type": t.to_string(), "degrees": d, "order": t.order().to_string() }),
            )
        }
        Command::Molien { group } => {
            let t = parse_type(group)?;
            let elements = generate_group(&RootSystemData::new(&t))?;
            let found = molien_degrees(&elements)?;
            let mut table = t.degrees();
            table.sort_unstable();
            let top = table.iter().sum::<u32>() as usize;
            let series: Vec<String> = molien_series(&elements, top).iter().map(ToString::to_string).collect();
            let pass = found == table;
            Output {
                text: format!(
                    "group order: {}\nseries: {}\nMolien degrees: {}\ntable degrees: {}",
                    elements.len(),
                    series.join(" "),
                    join(&found),
                    join(&table)
                ),
                json: json!({ "type": t.to_string(), "order": elements.len(), "series": series, "molien_degrees": found, "table_degrees": table, "pass": pass }),
                pass,
            }
        }
        Command::Chambers { group } => {
            let t = parse_type(group)?;
            let count = chamber_count(&Arrangement::coxeter(&RootSystemData::new(&t))?)?;
            Output::info(count.to_string(), json!({ "type": t.to_string(), "chambers": count }))
        }
        Command::Euler { group } => {
            let rep = coxeter_euler_checks(&parse_type(group)?)?;
            Output {
                text: format!(
                    "chambers: {}\n|G|: {}\nchi(B): {}\nexpected: {}\nchi(B)/|G|: {}\n{}",
                    rep.chambers,
                    rep.order,
                    rep.chi_b,
                    rep.expected_chi_b,
                    rep.chi_quotient,
                    verdict(rep.pass)
                ),
                pass: rep.pass,
                json: serde_json::to_value(&rep)?,
            }
        }
        Command::Invariants { group } => {
            let pres = basic_invariants(&parse_type(group)?)?;
            let polys: Vec<String> = pres.invariants().iter().map(|f| f.to_string_with_prefix("x")).collect();
            let text = polys
                .iter()
                .enumerate()
                .map(|(i, f)| format!("f{} = {f}", i + 1))
                .collect::<Vec<_>>()
                .join("\n");
            Output::info(
                text,
                json!({ "type": group, "degrees": pres.degrees(), "invariants": polys, "seeds": pres.seeds() }),
            )
        }
        Command::Discriminant { group } => {
            let t = parse_type(group)?;
            let pres = discriminant_in_invariants(&t)?;
            let delta = discriminant_poly(&RootSystemData::new(&t))?.to_string_with_prefix("x");
            let tilde = pres
                .discriminant()
                .context("discriminant missing from presentation")?
                .to_string_with_prefix("y");
            Output::info(
                format!("Delta(x) = {delta}\nDelta~(y) = {tilde}"),
                json!({ "type": t.to_string(), "delta": delta, "delta_tilde": tilde, "basis": pres.invariants().iter().map(|f| f.to_string_with_prefix("x")).collect::<Vec<_>>(), "seeds": pres.seeds() }),
            )
        }
        Command::Kappa { group } => {
            let t = parse_type(group)?;
            let c = MacdonaldConstants::new(&RootSystemData::new(&t));
            let kappa = c
                .kappa
                .as_ref()
                .map_or_else(|| format!("{:.15e}", c.kappa_f64), ToString::to_string);
            let discr = c
                .discr
                .as_ref()
                .map_or_else(|| format!("{:.15e}", c.discr_f64), ToString::to_string);
            Output::info(
                format!("kappa = {kappa}\ndiscr q = {discr}"),
                json!({ "type": t.to_string(), "kappa": kappa, "kappa_f64": c.kappa_f64, "discr": discr, "discr_f64": c.discr_f64, "exact": c.kappa.is_some() }),
            )
        }
        Command::Max { group, restarts, seed } => {
            let rep = max_report(&parse_type(group)?, *restarts, *seed)?;
            let closed = rep
                .closed_form_exact
                .clone()
                .unwrap_or_else(|| format!("{:.15e}", rep.closed_form));
            Output {
                text: format!(
                    "optimized: {:.15e}\nclosed form: {closed}\nrel err: {:.3e}\n{}",
                    rep.optimized,
                    rep.rel_err,
                    verdict(rep.pass)
                ),
                pass: rep.pass,
                json: serde_json::to_value(&rep)?,
            }
        }
        Command::Integral { group, s } => {
            let rep = integral_report(&parse_type(group)?, *s)?;
            Output {
                text: format!(
                    "lhs: {:.15e}\nrhs: {:.15e}\nrel err: {:.3e}\n{}",
                    rep.lhs,
                    rep.rhs,
                    rep.rel_err,
                    verdict(rep.pass)
                ),
                pass: rep.pass,
                json: serde_json::to_value(&rep)?,
            }
        }
        Command::Charsum { group, p, chi } => {
            let setup = CharSumSetup::new(&parse_type(group)?, *p)?;
            let chars = character_list(&setup, *chi)?;
            let rows: Vec<(u64, f64, f64)> = chars
                .iter()
                .map(|&j| {
                    let s = setup.char_sum(setup.field().char(j));
                    (j, s.re, s.im)
                })
                .collect();
            let text = rows
                .iter()
                .map(|(j, re, im)| format!("chi {j}: S = {re:.12} {:+.12}i", im))
                .collect::<Vec<_>>()
                .join("\n");
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|(j, re, im)| json!({ "chi_index": j, "S_re": re, "S_im": im }))
                .collect();
            Output::info(text, json!({ "type": group, "p": p, "rows": json_rows }))
        }
        Command::VerifyFinite { group, p, chi } => {
            let setup = CharSumSetup::new(&parse_type(group)?, *p)?;
            let chars = character_list(&setup, *chi)?;
            let rep = setup.verify_chars(chars.iter().map(|&j| setup.field().char(j)));
            let mut lines: Vec<String> = rep
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "chi {:>2}: S = {:+.9} {:+.9}i  RHS = {:+.9} {:+.9}i  |diff| = {:.1e}  {}",
                        r.chi_index,
                        r.s_re,
                        r.s_im,
                        r.rhs_re,
                        r.rhs_im,
                        r.abs_diff,
                        verdict(r.pass)
                    )
                })
                .collect();
            lines.push(format!("{}/{} characters pass", rep.passed(), rep.rows.len()));
            Output {
                text: lines.join("\n"),
                pass: rep.pass,
                json: serde_json::to_value(&rep)?,
            }
        }
        Command::Check { diagram, identity, chi } => {
            let d = parse_diagram(diagram)?;
            let check = match identity {
                Identity::Deg => cache.degree_identity(&d)?,
                Identity::Conn => cache.check_conn(&d)?,
                Identity::Compl => cache.check_compl(&d)?,
                Identity::Otherform => cache.check_otherform(&d)?,
                Identity::Ab2 => {
                    let r: RotationNumber = chi.parse().with_context(|| format!("bad rotation number `{chi}`"))?;
                    check_ab2(&d, r)?
                }
            };
            identity_output(&check)
        }
    })
}

fn character_list(setup: &CharSumSetup, chi: Option<u64>) -> Result<Vec<u64>> {
    let order = setup.field().p() - 1;
    match chi {
        Some(j) if j >= order => bail!("character index {j} out of range 0..{order}"),
        Some(j) => Ok(vec![j]),
        None => Ok((0..order).collect()),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Zeta { .. } => "zeta",
        Command::Class { .. } => "class",
        Command::Subgraphs { .. } => "subgraphs",
        Command::Degrees { .. } => "degrees",
        Command::Molien { .. } => "molien",
        Command::Chambers { .. } => "chambers",
        Command::Euler { .. } => "euler",
        Command::Invariants { .. } => "invariants",
        Command::Discriminant { .. } => "discriminant",
        Command::Kappa { .. } => "kappa",
        Command::Max { .. } => "max",
        Command::Integral { .. } => "integral",
        Command::Charsum { .. } => "charsum",
        Command::VerifyFinite { .. } => "verify-finite",
        Command::Check { .. } => "check",
    }
}

/// 0 when every check passed, 1 when one failed, 2 when the command could
/// not be run.
fn status(pass: Option<bool>) -> u8 {
    match pass {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json || cli.format == Format::Json;
    match run(&cli.command) {
        Ok(out) => {
            if json {
                let mut payload = json!({ "schema": SCHEMA, "command": command_name(&cli.command) });
                if let (Some(obj), Value::Object(extra)) = (payload.as_object_mut(), out.json) {
                    obj.extend(extra);
                }
                payload["pass"] = Value::Bool(out.pass);
                println!(
                    "{}",
                    serde_json::to_string_pretty(&payload).expect("JSON values serialize")
                );
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(status(Some(out.pass)))
        }
        Err(e) => {
            if json {
                let payload =
                    json!({ "schema": SCHEMA, "command": command_name(&cli.command), "error": format!("{e:#}") });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&payload).expect("JSON values serialize")
                );
            }
            eprintln!("error: {e:#}");
            ExitCode::from(status(None))
        }
    }
}
