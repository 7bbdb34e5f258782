use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilform::exact::{format_scalar, kernels_agree, parse_scalar, ExactMatrix};
use nilform::genfun::{
    closed_form_kernel_gf, conjecture_check, cushman_sanders_check, empirical_gf, empirical_subs_kernel_gf,
    subs_kernel_gf_closed_form, ClosedFormGF,
};
use nilform::mapfile::MapFile;
use nilform::nilpotent::{
    build_sl2_triple, check_m_reconstruction_for, verify_weak_inverse, verify_word_relations, NilpotentSpec,
};
use nilform::normalizer::{check_direct_sum, check_style_membership, normalize, versal_deformation, Style};
use nilform::sl2::{describe_irreducible_nf, kernel_basis, lift_triple};
use nilform::Error;

#[derive(Parser)]
#[command(name = "nilform", version, about = "Exact sl2 normal forms for maps with nilpotent linear part")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BlockArgs {
    /// Jordan block sizes, e.g. 2,3
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the matrix triple (n_bar, h_bar, m_bar) and its bracket status
    Triple {
        #[command(flatten)]
        spec: BlockArgs,
        /// JSON file holding the conjugator as an n x n array of rationals
        #[arg(long)]
        conjugator: Option<PathBuf>,
    },
    /// Run the relation and operator checks up to a slice degree
    Verify {
        #[command(flatten)]
        spec: BlockArgs,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Normalize the map in a map file
    Normalize {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value = "ker-conn-m")]
        style: Style,
        /// Emit a map file with the normal form plus result fields
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical kernel basis of one slice with weights
    Kernel {
        #[command(flatten)]
        spec: BlockArgs,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Print the Cushman-Sanders table
    Cstest {
        #[command(flatten)]
        spec: BlockArgs,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare empirical kernel generating functions with closed forms
    Genfun {
        #[command(flatten)]
        spec: BlockArgs,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long)]
        closed_form: bool,
    },
    /// Print the normal-form families for one Jordan block
    Describe {
        #[arg(long)]
        n: usize,
    },
    /// Print the parameterized linear versal deformation
    Versal {
        #[command(flatten)]
        spec: BlockArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn check(identity: impl Into<String>) -> Self {
        Failure { code: 3, message: format!("check failed: {}", identity.into()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidBlocks(_)
            | Error::DimensionMismatch { .. }
            | Error::SingularConjugator
            | Error::DegenerateTriple(_)
            | Error::ConstantTerm
            | Error::LinearPartMismatch
            | Error::BlockOrder(..)
            | Error::Precondition(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Triple { spec, conjugator } => triple(&spec.blocks, conjugator.as_deref()),
        Command::Verify { spec, max_degree } => verify(&make_spec(&spec.blocks)?, max_degree),
        Command::Normalize { map, degree, style, json } => normalize_cmd(&map, degree, style, json),
        Command::Kernel { spec, degree } => kernel(&make_spec(&spec.blocks)?, degree),
        Command::Cstest { spec, max_degree, json } => cstest(&make_spec(&spec.blocks)?, max_degree, json),
        Command::Genfun { spec, max_degree, closed_form } => genfun(&make_spec(&spec.blocks)?, max_degree, closed_form),
        Command::Describe { n } => describe(n),
        Command::Versal { spec } => {
            let v = versal_deformation(&make_spec(&spec.blocks)?)?;
            Ok(format!("parameters: {}\n{v}\n", v.parameters.len()))
        }
    }
}

fn make_spec(blocks: &[usize]) -> Result<NilpotentSpec, Failure> {
    Ok(NilpotentSpec::new(blocks)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn triple(blocks: &[usize], conjugator: Option<&Path>) -> Outcome {
    let spec = match conjugator {
        None => make_spec(blocks)?,
        Some(path) => {
            let rows: Vec<Vec<Value>> =
                serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("conjugator: {e}")))?;
            let mut dense = Vec::new();
            for row in rows {
                let mut r = Vec::new();
                for v in row {
                    let text = match v {
                        Value::String(s) => s,
                        Value::Number(n) => n.to_string(),
                        other => return Err(Failure::input(format!("conjugator entry {other} is not a rational"))),
                    };
                    r.push(parse_scalar(&text).map_err(|e| Failure::input(e.to_string()))?);
                }
                dense.push(r);
            }
            NilpotentSpec::with_conjugator(blocks, ExactMatrix::from_rows(dense)?)?
        }
    };
    let t = build_sl2_triple(&spec)?;
    let mut out = String::new();
    for (name, m) in [("n_bar", &t.n_bar), ("h_bar", &t.h_bar), ("m_bar", &t.m_bar)] {
        writeln!(out, "{name}:\n{m}").unwrap();
    }
    writeln!(out, "brackets: ok").unwrap();
    Ok(out)
}

fn verify(spec: &NilpotentSpec, max_degree: usize) -> Outcome {
    let mut out = String::new();
    let t = build_sl2_triple(spec)?;
    writeln!(out, "ok   matrix brackets").unwrap();
    let p = spec.index();
    let words = verify_word_relations(spec, p + 1)?;
    if let Some(f) = words.failure {
        return Err(Failure::check(format!("{} at k={} l={}", f.identity, f.k, f.l)));
    }
    writeln!(out, "ok   word relations ({} checked)", words.checked).unwrap();
    if !verify_weak_inverse(spec) {
        return Err(Failure::check("n m n = n, m n m = m"));
    }
    writeln!(out, "ok   n m n = n, m n m = m").unwrap();
    if !kernels_agree(&t.m_bar, &t.raw_m) {
        return Err(Failure::check("ker m_bar = ker m"));
    }
    writeln!(out, "ok   ker m_bar = ker m").unwrap();
    if !check_m_reconstruction_for(spec)?.holds {
        return Err(Failure::check("m reconstructed from the triple"));
    }
    writeln!(out, "ok   m reconstructed from the triple").unwrap();
    for d in 0..=max_degree {
        lift_triple(spec, d)?;
        let k = kernel_basis(spec, d)?;
        if !k.dimension_identity_holds() {
            let c = k.dimension_count();
            return Err(Failure::check(format!(
                "Cushman-Sanders count at degree {d}: {} != {}",
                c.weight_sum, c.expected
            )));
        }
        let ds = check_direct_sum(spec, d)?;
        if !ds.passed() {
            return Err(Failure::check(format!("im conn_n + ker conn_m direct sum at degree {d}")));
        }
        writeln!(out, "ok   degree {d}: lifted brackets, Cushman-Sanders, direct sum").unwrap();
    }
    Ok(out)
}

fn normalize_cmd(path: &Path, degree: usize, style: Style, json: bool) -> Outcome {
    let file = MapFile::parse(&read(path)?).map_err(|e| Failure::input(e.to_string()))?;
    let r = normalize(&file.map(), &file.spec, degree, style)?;
    if style == Style::KerConnM {
        if let Some(v) = check_style_membership(&r.normal_form, &file.spec, degree)?.violation {
            return Err(Failure::check(format!("normal form slice {} in ker conn_m", v.degree)));
        }
    }
    if json {
        let mut value = serde_json::to_value(MapFile::record(&file.spec, &r.normal_form)).expect("serializable record");
        let generator = MapFile::record(&file.spec, &r.generator).terms;
        let obj = value.as_object_mut().expect("record is an object");
        obj.insert("style".into(), json!(r.style.to_string()));
        obj.insert("degree".into(), json!(r.degree));
        obj.insert("generator".into(), serde_json::to_value(generator).expect("serializable terms"));
        obj.insert("ledger".into(), serde_json::to_value(&r.ledger).expect("serializable ledger"));
        return Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable value")));
    }
    let mut out = String::new();
    writeln!(out, "style: {}\ndegree: {}", r.style, r.degree).unwrap();
    writeln!(out, "normal form:").unwrap();
    for d in r.normal_form.degrees() {
        writeln!(out, "  [{d}] {}", r.normal_form.slice(d)).unwrap();
    }
    writeln!(out, "generator: {}", r.generator).unwrap();
    writeln!(out, "degree  removed  kept").unwrap();
    for l in &r.ledger {
        writeln!(out, "{:>6}  {:>7}  {:>4}", l.degree, l.removed_dim, l.kept_dim).unwrap();
    }
    Ok(out)
}

fn kernel(spec: &NilpotentSpec, degree: usize) -> Outcome {
    let k = kernel_basis(spec, degree)?;
    let mut out = format!("degree {degree}: dim {}\n", k.dim());
    for v in &k.vectors {
        writeln!(out, "  weight {:>2}: {}", v.weight, v.element).unwrap();
    }
    Ok(out)
}

fn cstest(spec: &NilpotentSpec, max_degree: usize, json: bool) -> Outcome {
    let r = cushman_sanders_check(spec, max_degree)?;
    let out = if json {
        format!("{}\n", serde_json::to_string_pretty(&r).expect("serializable report"))
    } else {
        let mut out = String::from("degree  kernel  cs_sum  expected  weights\n");
        for row in &r.rows {
            let w: Vec<String> = row.weights.iter().map(i64::to_string).collect();
            writeln!(
                out,
                "{:>6}  {:>6}  {:>6}  {:>8}  {}",
                row.degree,
                row.kernel_dim,
                row.weight_sum,
                row.expected,
                w.join(",")
            )
            .unwrap();
        }
        out
    };
    match r.first_failure() {
        None => Ok(out + if json { "" } else { "pass\n" }),
        Some(d) => {
            print!("{out}");
            Err(Failure::check(format!("Cushman-Sanders count at degree {d}")))
        }
    }
}

fn genfun(spec: &NilpotentSpec, max_t: usize, closed_form: bool) -> Outcome {
    let emp = empirical_gf(spec, max_t)?;
    let mut out = format!("empirical: {emp}\n");
    if !closed_form {
        return Ok(out);
    }
    let blocks = spec.blocks();
    if blocks.len() != 2 {
        let r = conjecture_check(spec, max_t)?;
        writeln!(out, "conjectured: {}", nilform::genfun::conjectured_gf(blocks)).unwrap();
        writeln!(out, "degree  empirical  conjectured").unwrap();
        for d in 0..=max_t {
            writeln!(out, "{d:>6}  {:>9}  {:>11}", format_scalar(&r.empirical[d]), format_scalar(&r.conjectured[d]))
                .unwrap();
        }
        match r.first_disagreement {
            None => writeln!(out, "conjecture: agrees through t^{max_t}").unwrap(),
            Some(d) => writeln!(out, "conjecture: first disagreement at t^{d}").unwrap(),
        }
        return Ok(out);
    }
    let (k1, k2) = (blocks[0].min(blocks[1]), blocks[0].max(blocks[1]));
    let mut mismatches = Vec::new();
    let conn = closed_form_kernel_gf(k1, k2)?;
    let agree = conn.expand(max_t).at_u_one() == emp.at_u_one();
    writeln!(out, "conn kernel closed form: {conn}\n  u=1 agreement through t^{max_t}: {agree}").unwrap();
    if !agree {
        mismatches.push("conn kernel dimensions");
    }
    let subs = subs_kernel_gf_closed_form(k1, k2)?;
    let subs_emp = empirical_subs_kernel_gf(spec, max_t)?;
    let subs_cf = subs.expand(max_t);
    let u1 = subs_cf.at_u_one() == subs_emp.at_u_one();
    let biv = subs_cf == subs_emp;
    writeln!(out, "subs kernel closed form: {subs}").unwrap();
    writeln!(out, "  u=1 agreement through t^{max_t}: {u1}").unwrap();
    writeln!(out, "  u-powers equal operator weights through t^{max_t}: {biv}").unwrap();
    if !u1 {
        mismatches.push("subs kernel dimensions");
    }
    let order = max_t.max(12);
    let mut tau = ClosedFormGF::default();
    tau.push(nilform::exact::int(1), 0, 0, (k1 + k2) as i64);
    let cs = subs.cushman_sanders().expand(order) == tau.expand(order);
    writeln!(out, "  d/du(uG) at u=1 equals 1/(1-t)^{} through t^{order}: {cs}", k1 + k2).unwrap();
    if !cs {
        mismatches.push("subs kernel Cushman-Sanders identity");
    }
    if !mismatches.is_empty() {
        print!("{out}");
        return Err(Failure::check(mismatches.join(", ")));
    }
    Ok(out)
}

fn describe(n: usize) -> Outcome {
    let families = describe_irreducible_nf(n)?;
    let mut out = format!("n={n}: {} families\n", families.len());
    for f in families {
        writeln!(out, "{f}").unwrap();
    }
    Ok(out)
}
