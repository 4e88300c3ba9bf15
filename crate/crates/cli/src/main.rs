use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use latcon::census::{self, CensusError};
use latcon::congruence::{self as cg, CongruenceFamily};
use latcon::constructions as cons;
use latcon::involution::BzLattice;
use latcon::io::{self as lio, Structure};

/// Congruences of finite lattices with involution.
#[derive(Parser)]
#[command(name = "latcon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Lattice,
    I,
    Bz,
    Con0,
    Con01,
    I0,
    I01,
    Bz0,
    Bz01,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Theorem {
    /// Maximum |Con_I| and its witnesses.
    #[value(name = "i-max", alias = "maxcgkl")]
    IMax,
    /// Maximum |Con_BZ| over antiortholattices with 0 meet-irreducible.
    #[value(name = "bz-max", alias = "maxcgaol")]
    BzMax,
    /// Threshold characterisation of |Con| for plain lattices.
    #[value(name = "lattice", alias = "maxcglat")]
    Lattice,
    /// Second-largest counts in the modular, Kleene and BZ classes.
    Second,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document describes a valid structure.
    Validate { file: Option<PathBuf> },
    /// List the congruences of a structure.
    Con {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long)]
        count_only: bool,
    },
    /// Atoms of a congruence lattice.
    Atoms {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Prime intervals [a,b] with a meet-irreducible and b join-irreducible.
    Narrows { file: Option<PathBuf> },
    /// Order-theoretic and involution properties.
    Classify { file: Option<PathBuf> },
    /// Whether the congruence lattice has exactly one atom.
    Si {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Quotient by the congruence with the given index in `con` order.
    Quotient {
        file: Option<PathBuf>,
        #[arg(long)]
        by: usize,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a catalog structure, or combine documents with
    /// `ordinal A B`, `hsum A B`, `product A B`, `triple M K`.
    Construct {
        /// chain N, boolean K, M3, N5, B6, L3hL3, L4hL4, L3hL5, L3hL2xL3, L2xL3, L4xL5,
        /// M, H, L, E N, EKN K N, F N, G N; or ordinal, hsum, product, triple.
        name: String,
        /// Numeric parameters, or the two document files for a combinator.
        params: Vec<String>,
        /// Attach the trivial Brouwer complement.
        #[arg(long)]
        bz: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate all i-lattices of size N and summarise their congruences.
    Census {
        n: usize,
        #[arg(long, default_value_t = census::DEFAULT_CAP)]
        max: usize,
        /// Census record as JSON, to FILE or alone on stdout.
        #[arg(long, value_name = "FILE", num_args = 0..=1)]
        report: Option<Option<PathBuf>>,
        /// Histogram as CSV, to FILE or alone on stdout.
        #[arg(long, value_name = "FILE", num_args = 0..=1)]
        csv: Option<Option<PathBuf>>,
        #[arg(long, value_enum, value_delimiter = ',')]
        verify: Vec<Theorem>,
    },
    /// Congruence counts of the worked examples, computed and expected.
    ExamplesTable,
    /// Hasse diagram in DOT.
    Dot {
        file: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        show_involution: bool,
    },
}

enum Failure {
    Invalid(anyhow::Error),
    Theorem(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
    {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing standard output: {e}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Theorem(e)) => {
            eprintln!("theorem violated: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read_input(file: Option<&Path>) -> anyhow::Result<String> {
    match file {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

fn load(file: Option<&Path>) -> anyhow::Result<Structure> {
    Ok(lio::parse(&read_input(file)?)?)
}

/// Writes to a file, or appends to the buffered standard output for `-`
/// and no path.
fn emit_to(path: Option<&Path>, text: &str, out: &mut String) -> anyhow::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn default_kind(s: &Structure) -> Kind {
    match s {
        Structure::Lattice(_) => Kind::Lattice,
        Structure::Involution(_) => Kind::I,
        Structure::Bz(_) => Kind::Bz,
    }
}

fn bz_of(s: &Structure) -> anyhow::Result<BzLattice> {
    match s {
        Structure::Bz(bz) => Ok(bz.clone()),
        Structure::Involution(il) => BzLattice::trivial(il.clone())
            .context("the i-lattice does not carry the trivial Brouwer complement"),
        Structure::Lattice(_) => bail!("BZ congruences need an involution"),
    }
}

fn family(s: &Structure, kind: Kind) -> anyhow::Result<CongruenceFamily> {
    let l = s.lattice();
    let con = cg::all_congruences(l);
    let need_i = || {
        s.involution()
            .ok_or_else(|| anyhow!("{kind:?} congruences need an involution"))
    };
    Ok(match kind {
        Kind::Lattice => con,
        Kind::Con0 => cg::con0(l, &con),
        Kind::Con01 => cg::con01(l, &con),
        Kind::I | Kind::I0 | Kind::I01 => {
            let fam = cg::i_congruences_from(need_i()?, &con)?;
            match kind {
                Kind::I0 => cg::con0(l, &fam),
                Kind::I01 => cg::con01(l, &fam),
                _ => fam,
            }
        }
        Kind::Bz | Kind::Bz0 | Kind::Bz01 => {
            let bz = bz_of(s)?;
            let ifam = cg::i_congruences_from(bz.base(), &con)?;
            let fam = cg::bz_congruences_from(&bz, &ifam)?;
            match kind {
                Kind::Bz0 => cg::con0(l, &fam),
                Kind::Bz01 => cg::con01(l, &fam),
                _ => fam,
            }
        }
    })
}

fn blocks(s: &Structure, p: &latcon::partition::Partition) -> String {
    p.format_blocks(Some(&s.lattice().label_list()))
}

fn run(command: Command, out: &mut String) -> Outcome {
    match command {
        Command::Validate { file } => {
            let s = load(file.as_deref())?;
            writeln!(
                out,
                "OK: {} with {} elements",
                s.kind_name(),
                s.lattice().len()
            )
            .ok();
        }
        Command::Con {
            file,
            kind,
            count_only,
        } => {
            let s = load(file.as_deref())?;
            let fam = family(&s, kind.unwrap_or_else(|| default_kind(&s)))?;
            writeln!(out, "{}", fam.len()).ok();
            if !count_only {
                for p in fam.iter() {
                    writeln!(out, "{}", blocks(&s, p)).ok();
                }
            }
        }
        Command::Atoms { file, kind } => {
            let s = load(file.as_deref())?;
            let fam = family(&s, kind.unwrap_or_else(|| default_kind(&s)))?;
            for p in fam.atoms() {
                writeln!(out, "{}", blocks(&s, &p)).ok();
            }
        }
        Command::Narrows { file } => {
            let s = load(file.as_deref())?;
            let l = s.lattice();
            for iv in l.narrows() {
                writeln!(out, "[{},{}]", l.label(iv.lo), l.label(iv.hi)).ok();
            }
        }
        Command::Classify { file } => {
            let s = load(file.as_deref())?;
            classify(&s, out);
        }
        Command::Si { file, kind } => {
            let s = load(file.as_deref())?;
            let fam = family(&s, kind.unwrap_or_else(|| default_kind(&s)))?;
            let atoms = fam.atoms().len();
            let si = if fam.is_subdirectly_irreducible() {
                "yes"
            } else {
                "no"
            };
            writeln!(
                out,
                "{si} ({atoms} atom{})",
                if atoms == 1 { "" } else { "s" }
            )
            .ok();
        }
        Command::Quotient {
            file,
            by,
            kind,
            output,
        } => {
            let s = load(file.as_deref())?;
            let kind = kind.unwrap_or_else(|| default_kind(&s));
            let fam = family(&s, kind)?;
            let theta = fam.members().get(by).ok_or_else(|| {
                anyhow!("index {by} out of range, family has {} members", fam.len())
            })?;
            let q: Structure = match kind {
                Kind::Lattice | Kind::Con0 | Kind::Con01 => {
                    cg::quotient(s.lattice(), theta)?.into()
                }
                Kind::I | Kind::I0 | Kind::I01 => {
                    cg::quotient_i(s.involution().expect("i family"), theta)?.into()
                }
                Kind::Bz | Kind::Bz0 | Kind::Bz01 => cg::quotient_bz(&bz_of(&s)?, theta)?.into(),
            };
            emit_to(output.as_deref(), &lio::emit(&q), out)?;
        }
        Command::Construct {
            name,
            params,
            bz,
            output,
        } => {
            let mut s = construct(&name, &params)?;
            if bz {
                s = Structure::Bz(bz_of(&s)?);
            }
            emit_to(output.as_deref(), &lio::emit(&s), out)?;
        }
        Command::Census {
            n,
            max,
            report,
            csv,
            verify,
        } => run_census(n, max, report, csv, &verify, out)?,
        Command::ExamplesTable => examples_table(out)?,
        Command::Dot {
            file,
            output,
            show_involution,
        } => {
            let s = load(file.as_deref())?;
            emit_to(output.as_deref(), &lio::emit_dot(&s, show_involution), out)?;
        }
    }
    Ok(())
}

fn classify(s: &Structure, out: &mut String) {
    let l = s.lattice();
    writeln!(out, "kind: {}", s.kind_name()).ok();
    writeln!(out, "elements: {}", l.len()).ok();
    writeln!(out, "modular: {}", l.is_modular()).ok();
    writeln!(out, "distributive: {}", l.is_distributive()).ok();
    let flags = match s {
        Structure::Lattice(_) => None,
        Structure::Involution(il) => Some(il.classify()),
        Structure::Bz(bz) => Some(bz.classify()),
    };
    if let (Some(flags), Some(il)) = (flags, s.involution()) {
        writeln!(out, "flags: {flags}").ok();
        let c = il.cones();
        let names = |m: u64| -> String {
            latcon::bits::iter(m)
                .map(|x| l.label(x))
                .collect::<Vec<_>>()
                .join(",")
        };
        writeln!(out, "N: {{{}}}", names(c.n)).ok();
        writeln!(out, "Z: {{{}}}", names(c.z)).ok();
        writeln!(out, "P: {{{}}}", names(c.p)).ok();
        writeln!(out, "incomparable: {{{}}}", names(c.incomparable)).ok();
    }
}

fn construct(name: &str, params: &[String]) -> anyhow::Result<Structure> {
    let combinator = matches!(name, "ordinal" | "hsum" | "product" | "triple");
    if !combinator {
        let nums = params
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .with_context(|| format!("parameter {p:?} is not a number"))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(cons::catalog(name, &nums)?.into());
    }
    let [a, b] = params else {
        bail!("{name} takes two document files");
    };
    let a = load(Some(Path::new(a)))?;
    let b = load(Some(Path::new(b)))?;
    Ok(match (name, a.involution(), b.involution()) {
        ("ordinal", _, _) => cons::ordinal_sum(a.lattice(), b.lattice())?.lattice.into(),
        ("hsum", Some(x), Some(y)) => cons::i_horizontal_sum(x, y)?.lattice.into(),
        ("hsum", _, _) => cons::horizontal_sum(a.lattice(), b.lattice())?
            .lattice
            .into(),
        ("product", Some(x), Some(y)) => cons::i_direct_product(x, y)?.into(),
        ("product", _, _) => cons::direct_product(a.lattice(), b.lattice())?.into(),
        (_, _, Some(k)) => cons::i_ordinal_triple(a.lattice(), k)?.into(),
        _ => bail!("triple needs an involution on its second argument"),
    })
}

fn theorem_failure(e: CensusError) -> Failure {
    match e {
        CensusError::TheoremViolated { .. } => Failure::Theorem(e.into()),
        other => Failure::Invalid(other.into()),
    }
}

fn run_census(
    n: usize,
    max: usize,
    report: Option<Option<PathBuf>>,
    csv: Option<Option<PathBuf>>,
    verify: &[Theorem],
    sink: &mut String,
) -> Outcome {
    let survey = census::survey_pooled(n, max).map_err(theorem_failure)?;
    let record = survey.record();
    let to_stdout = |t: &Option<Option<PathBuf>>| match t {
        Some(None) => true,
        Some(Some(p)) => p == Path::new("-"),
        None => false,
    };
    let quiet = to_stdout(&report) || to_stdout(&csv);
    let mut summary = String::new();
    let out = &mut summary;
    writeln!(out, "n = {n}").ok();
    writeln!(out, "lattice classes: {}", record.lattice_class_count).ok();
    writeln!(out, "i-lattice classes: {}", record.i_lattice_class_count).ok();
    writeln!(
        out,
        "max |Con_I|: {} ({} witnesses)",
        record.max_i_congruences,
        record.extremal_witnesses.len()
    )
    .ok();
    if let Some(r) = record.runner_up {
        writeln!(
            out,
            "runner-up |Con_I|: {r} ({} witnesses)",
            record.runner_up_witnesses.len()
        )
        .ok();
    }
    for t in verify {
        match t {
            Theorem::IMax => {
                census::verify_max_theorem(&survey).map_err(theorem_failure)?;
            }
            Theorem::BzMax => {
                let best = census::verify_bz_theorem(&survey).map_err(theorem_failure)?;
                if let Some(b) = best {
                    writeln!(out, "max |Con_BZ|: {b}").ok();
                }
            }
            Theorem::Lattice => census::verify_lattice_theorem(&survey).map_err(theorem_failure)?,
            Theorem::Second => {
                let s = census::verify_second_largest(&survey).map_err(theorem_failure)?;
                let show = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
                writeln!(out,
                    "second largest: modular {}, modular pseudo-Kleene {}, Kleene {}, BZ modular {}, BZ distributive {}",
                    show(s.modular),
                    show(s.modular_pseudo_kleene),
                    show(s.kleene),
                    show(s.bz_modular),
                    show(s.bz_distributive)
                ).ok();
            }
        }
        writeln!(
            out,
            "verified {}",
            t.to_possible_value().expect("no skipped values").get_name()
        )
        .ok();
    }
    if !quiet {
        sink.push_str(&summary);
    }
    if let Some(p) = report {
        emit_to(p.as_deref(), &lio::census_json(&record), sink)?;
    }
    if let Some(p) = csv {
        emit_to(
            p.as_deref(),
            &lio::census_csv(std::slice::from_ref(&record)),
            sink,
        )?;
    }
    Ok(())
}

fn examples_table(out: &mut String) -> Outcome {
    writeln!(
        out,
        "{:<8} {:>10} {:>10} {:>10} {:>10}  status",
        "example", "|Con|", "expected", "|Con_I|", "expected"
    )
    .ok();
    let mut bad = Vec::new();
    for row in cons::paper_examples() {
        let l = row.structure.lattice();
        let con = cg::all_congruences(l);
        let ci = cg::i_congruences_from(&row.structure, &con)?;
        let ok = row.con.is_none_or(|c| c == con.len() as u64) && ci.len() as u64 == row.con_i;
        let expected = row.con.map_or("-".to_string(), |c| c.to_string());
        writeln!(
            out,
            "{:<8} {:>10} {:>10} {:>10} {:>10}  {}",
            row.name,
            con.len(),
            expected,
            ci.len(),
            row.con_i,
            if ok { "ok" } else { "MISMATCH" }
        )
        .ok();
        if !ok {
            bad.push(row.name);
        }
    }
    if !bad.is_empty() {
        return Err(Failure::Theorem(anyhow!(
            "counts differ for {}",
            bad.join(", ")
        )));
    }
    Ok(())
}
