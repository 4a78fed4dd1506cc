use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rinf_core::rewrite::BudgetDimension;
use rinf_core::twisted::{CENSUS_MAX_LENGTH, CENSUS_MAX_WITNESS};
use rinf_core::{
    abelianization_certificate, bounded_census_free, classify, kb_complete, pure_braid, reidemeister_abelian, table,
    todd_coxeter, twisted_classes_finite, verify_goldberg, BraidGroupId, EnumerateError, FiniteEndo, FiniteGroup,
    Flavor, FreeEndo, GoldbergStatus, IntMatrix, KbBudget, Presentation, ReidemeisterCount, RewriteError, SurfaceSpec,
    Word, DEFAULT_MAX_COSETS,
};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_REFUTED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "rinf", version, about = "Surface braid presentations, Goldberg certificates and Reidemeister numbers")]
struct Cli {
    /// Pretty-print output with this many spaces of indentation.
    #[arg(long, global = true, value_name = "N")]
    json_indent: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation of the pure braid group of a punctured surface.
    Present {
        /// sphere:p, o:g,p or n:g,p
        #[arg(long)]
        surface: SurfaceSpec,
        #[arg(long)]
        strands: u32,
    },
    /// Certify that killing the Artin braids leaves the direct power of pi1.
    GoldbergVerify {
        #[arg(long)]
        surface: SurfaceSpec,
        #[arg(long)]
        strands: u32,
        #[arg(long, default_value_t = KbBudget::default().max_rules)]
        kb_max_rules: usize,
        #[arg(long, default_value_t = KbBudget::default().max_rule_length)]
        kb_max_rule_length: usize,
        #[arg(long, default_value_t = KbBudget::default().max_steps)]
        kb_max_steps: u64,
        /// Exit 1 on Refuted and 3 on Unverified.
        #[arg(long)]
        require_verified: bool,
    },
    /// R-infinity verdict for an orientable surface braid group, with its proof trace.
    Classify {
        #[arg(long)]
        surface: SurfaceSpec,
        #[arg(long)]
        strands: u32,
        #[arg(long, value_enum, default_value_t = FlavorArg::Pure)]
        flavor: FlavorArg,
    },
    /// Verdict matrix over a grid of orientable surfaces.
    Table {
        #[arg(long, default_value_t = 3)]
        max_g: u32,
        #[arg(long, default_value_t = 4)]
        max_p: u32,
        #[arg(long, default_value_t = 6)]
        max_n: u32,
    },
    /// Reidemeister number of a finite, abelian or free-group endomorphism.
    Reidemeister {
        /// FiniteGroup JSON; pair with --endo.
        #[arg(long, requires = "endo", conflicts_with_all = ["matrix", "presentation"])]
        group: Option<String>,
        /// Array of images of the group elements.
        #[arg(long)]
        endo: Option<String>,
        /// Integer matrix of an endomorphism of Z^k, columns being images.
        #[arg(long, conflicts_with = "presentation")]
        matrix: Option<String>,
        /// Presentation JSON; pair with --images for the abelianization bound.
        #[arg(long, requires = "images")]
        presentation: Option<String>,
        /// Array of generator images as words.
        #[arg(long)]
        images: Option<String>,
    },
    /// Abelian invariants and relation matrix of a presentation.
    Abelianize {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Knuth-Bendix completion of a presentation.
    KbComplete {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value_t = KbBudget::default().max_rules)]
        max_rules: usize,
        #[arg(long, default_value_t = KbBudget::default().max_rule_length)]
        max_rule_length: usize,
        #[arg(long, default_value_t = KbBudget::default().max_steps)]
        max_steps: u64,
        /// Exit 3 when the budget runs out.
        #[arg(long)]
        require_verified: bool,
    },
    /// Todd-Coxeter enumeration of the cosets of the trivial subgroup.
    Enumerate {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Exit 3 when the coset budget overflows.
        #[arg(long)]
        require_verified: bool,
    },
    /// Upper bound on twisted classes of a free-group endomorphism.
    Census {
        /// FreeEndo JSON: {"generators": [...], "images": [...]}.
        #[arg(long, default_value = "-")]
        endo: String,
        #[arg(long, default_value_t = CENSUS_MAX_LENGTH)]
        max_length: usize,
        #[arg(long, default_value_t = CENSUS_MAX_WITNESS)]
        max_witness: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Pure,
    Full,
}

struct Output {
    value: Value,
    code: u8,
}

impl Output {
    fn ok(value: impl Serialize) -> Result<Self> {
        Ok(Output {
            value: serde_json::to_value(value)?,
            code: 0,
        })
    }
}

/// Inline JSON, `-` for standard input, or a file path.
fn load_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
}

fn budget_json(dimension: BudgetDimension, rules: usize, steps: u64) -> Value {
    json!({ "status": "exhausted", "dimension": dimension, "rules": rules, "steps": steps })
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Present { surface, strands } => Output::ok(pure_braid(surface, strands)?),
        Command::GoldbergVerify {
            surface,
            strands,
            kb_max_rules,
            kb_max_rule_length,
            kb_max_steps,
            require_verified,
        } => {
            let budget = KbBudget {
                max_rules: kb_max_rules,
                max_rule_length: kb_max_rule_length,
                max_steps: kb_max_steps,
            };
            let cert = verify_goldberg(surface, strands, &budget)?;
            let code = match (&cert.status, require_verified) {
                (_, false) | (GoldbergStatus::Verified, true) => 0,
                (GoldbergStatus::Refuted { .. }, true) => EXIT_REFUTED,
                (GoldbergStatus::Unverified { .. }, true) => EXIT_EXHAUSTED,
            };
            Ok(Output {
                value: serde_json::to_value(&cert)?,
                code,
            })
        }
        Command::Classify {
            surface,
            strands,
            flavor,
        } => {
            let flavor = match flavor {
                FlavorArg::Pure => Flavor::Pure,
                FlavorArg::Full => Flavor::Full,
            };
            Output::ok(classify(BraidGroupId {
                surface,
                strands,
                flavor,
            })?)
        }
        Command::Table { max_g, max_p, max_n } => {
            if max_n == 0 {
                bail!("--max-n must be at least 1");
            }
            Output::ok(json!({ "max_g": max_g, "max_p": max_p, "max_n": max_n, "rows": table(max_g, max_p, max_n) }))
        }
        Command::Reidemeister {
            group,
            endo,
            matrix,
            presentation,
            images,
        } => {
            if let (Some(group), Some(endo)) = (group, endo) {
                let g: FiniteGroup = load_json(&group)?;
                let f = FiniteEndo::new(&g, load_json(&endo)?)?;
                let r = ReidemeisterCount::finite(twisted_classes_finite(&g, &f).len() as u64);
                Output::ok(json!({ "R": r, "method": "orbit" }))
            } else if let Some(matrix) = matrix {
                let rows: Vec<Vec<i64>> = load_json(&matrix)?;
                if rows.iter().any(|r| r.len() != rows.len()) {
                    bail!("matrix must be square");
                }
                let r = reidemeister_abelian(&IntMatrix::from_rows(&rows))?;
                Output::ok(json!({ "R": r, "method": "abelian" }))
            } else if let (Some(presentation), Some(images)) = (presentation, images) {
                let p: Presentation = load_json(&presentation)?;
                let images: Vec<Word> = load_json(&images)?;
                let cert = abelianization_certificate(&p, &images)?;
                Output::ok(json!({
                    "R": cert.bound,
                    "method": "certificate",
                    "exact": cert.certified_infinite(),
                    "matrix": cert.matrix,
                }))
            } else {
                bail!("give --group with --endo, --matrix, or --presentation with --images")
            }
        }
        Command::Abelianize { input } => {
            let p: Presentation = load_json(&input)?;
            let mut value = serde_json::to_value(p.abelian_invariants())?;
            value["matrix"] = serde_json::to_value(p.abelianization_matrix())?;
            Ok(Output { value, code: 0 })
        }
        Command::KbComplete {
            input,
            max_rules,
            max_rule_length,
            max_steps,
            require_verified,
        } => {
            let p: Presentation = load_json(&input)?;
            let budget = KbBudget {
                max_rules,
                max_rule_length,
                max_steps,
            };
            match kb_complete(p.relators(), p.generators(), &budget) {
                Ok(rs) => {
                    let mut value = serde_json::to_value(&rs)?;
                    value["status"] = json!("complete");
                    value["rule_count"] = json!(rs.rule_count());
                    Ok(Output { value, code: 0 })
                }
                Err(RewriteError::Exhausted { dimension, rules, steps }) => Ok(Output {
                    value: budget_json(dimension, rules, steps),
                    code: if require_verified { EXIT_EXHAUSTED } else { 0 },
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Enumerate {
            input,
            max_cosets,
            require_verified,
        } => {
            let p: Presentation = load_json(&input)?;
            match todd_coxeter(&p, max_cosets) {
                Ok(t) => {
                    let cols = 2 * p.generators().len();
                    let rows: Vec<Vec<Option<usize>>> =
                        (0..t.len()).map(|c| (0..cols).map(|x| t.entry(c, x)).collect()).collect();
                    let group = t.to_finite_group()?;
                    Output::ok(json!({
                        "status": "closed",
                        "order": t.len(),
                        "columns": p.generators().iter().flat_map(|g| [g.to_string(), format!("{g}^-1")]).collect::<Vec<_>>(),
                        "coset_table": rows,
                        "group": group,
                    }))
                }
                Err(EnumerateError::Overflow { max_cosets }) => Ok(Output {
                    value: json!({ "status": "overflow", "max_cosets": max_cosets }),
                    code: if require_verified { EXIT_EXHAUSTED } else { 0 },
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Census {
            endo,
            max_length,
            max_witness,
        } => {
            let e: FreeEndo = load_json(&endo)?;
            let e = FreeEndo::new(e.generators, e.images)?;
            let count = bounded_census_free(&e, max_length, max_witness)?;
            Output::ok(json!({ "upper_bound": count, "max_length": max_length, "max_witness": max_witness }))
        }
    }
}

fn render(value: &Value, indent: Option<usize>) -> Result<String> {
    match indent {
        None => Ok(serde_json::to_string(value)?),
        Some(n) => {
            let pad = vec![b' '; n];
            let mut out = Vec::new();
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
            value.serialize(&mut ser)?;
            Ok(String::from_utf8(out)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let indent = cli.json_indent;
    match run(cli.command).and_then(|o| Ok((render(&o.value, indent)?, o.code))) {
        Ok((text, code)) => {
            let mut stdout = std::io::stdout().lock();
            if writeln!(stdout, "{text}").is_err() {
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
