//! Command-line front end for the k-root library.
//!
//! Exit codes: 0 success, 1 a requested verification failed, 2 parameter
//! error, 3 expression parse error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kroots::{
    certify, enumerate_canonical_basis, enumerate_monomials, k_invariant_dimension,
    monomial_decompose_with, parse_kroot, parse_monomial, rep_matrix, run_suite, spherical_table,
    verify_filtration, BasisSolver, Decomposer, Error, Label, Permutation, SpaceParams,
    SphericalParams, WordClass,
};

#[derive(Parser)]
#[command(
    name = "kroots",
    version,
    about = "Exact computations with k-roots: canonical bases, rewriting, group actions, spherical functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Number of variables
    #[arg(short = 'n', long)]
    n: u32,
    /// Number of factors
    #[arg(short = 'k', long)]
    k: u32,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the canonical basis: label, factored form, height
    Basis {
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a k-root or monomial over the canonical basis
    Decompose {
        #[command(flatten)]
        common: Common,
        /// A k-root such as "(x1-x4)(x2+x3)"
        #[arg(long)]
        root: Option<String>,
        /// A monomial such as "x1*x3*x4"
        #[arg(long)]
        monomial: Option<String>,
        /// Scan every monomial and report which are positive in the basis
        #[arg(long)]
        all: bool,
    },
    /// Spherical functions: vectors, basis coefficients, value table, certificates
    Spherical {
        #[command(flatten)]
        common: Common,
        /// Restrict to a single index j (0 <= j <= k)
        #[arg(long)]
        j: Option<u32>,
        /// All indices j = 0..k (the default when --j is absent)
        #[arg(long)]
        all: bool,
    },
    /// Representation matrix of a permutation over the canonical basis
    Matrix {
        #[command(flatten)]
        common: Common,
        /// One-line ("2 1 3 5 4") or cycle ("(1 2)(4 5)") notation
        #[arg(long)]
        perm: String,
    },
    /// Height filtration: dimensions and submodule/kernel verification
    Filtration {
        #[command(flatten)]
        common: Common,
        /// Verify a single level t (0 <= t <= k)
        #[arg(long)]
        level: Option<u32>,
        /// All levels (the default when --level is absent)
        #[arg(long)]
        all: bool,
    },
    /// Run the verification suite at the given parameters
    Verify {
        #[command(flatten)]
        common: Common,
        /// Seed for the sampled checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::InvalidLabel(_) => 3u8,
                _ => 2u8,
            })
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::params(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::params(format!("cannot write to stdout: {e}")))
        }
    }
}

fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs one subcommand; Ok(false) means a requested check failed.
fn dispatch(command: Command) -> Result<bool, Error> {
    match command {
        Command::Basis { common } => basis_cmd(&common),
        Command::Decompose {
            common,
            root,
            monomial,
            all,
        } => decompose_cmd(&common, root.as_deref(), monomial.as_deref(), all),
        Command::Spherical { common, j, all } => spherical_cmd(&common, j, all),
        Command::Matrix { common, perm } => matrix_cmd(&common, &perm),
        Command::Filtration { common, level, all } => filtration_cmd(&common, level, all),
        Command::Verify { common, seed } => verify_cmd(&common, seed),
    }
}

fn basis_cmd(common: &Common) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    let basis = enumerate_canonical_basis(&params);
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            for b in &basis {
                let label = b.label().expect("canonical element");
                s.push_str(&format!("{label}  {b}  height {}\n", b.height()));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("label,element,height\n");
            for b in &basis {
                let label = b.label().expect("canonical element");
                s.push_str(&format!("{label},{b},{}\n", b.height()));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = basis
                .iter()
                .map(|b| {
                    serde_json::json!({
                        "label": b.label().expect("canonical element").to_string(),
                        "element": b.to_string(),
                        "height": b.height(),
                    })
                })
                .collect();
            json_string(&serde_json::json!({
                "n": common.n,
                "k": common.k,
                "basis": rows,
            }))
        }
    };
    emit(&common.out, &text)?;
    Ok(true)
}

fn render_decomposition(
    common: &Common,
    input: &str,
    dec: &kroots::Decomposition,
) -> Result<(), Error> {
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            if dec.is_empty() {
                s.push_str("0\n");
            }
            for (label, coeff) in dec.iter() {
                s.push_str(&format!(
                    "{label}  {}\n",
                    kroots::space::rat_to_string(coeff)
                ));
            }
            s
        }
        Format::Csv => dec.to_csv(),
        Format::Json => {
            let mut value = dec.to_json();
            value
                .as_object_mut()
                .expect("decomposition serializes to an object")
                .insert("input".into(), serde_json::Value::String(input.to_string()));
            json_string(&value)
        }
    };
    emit(&common.out, &text)
}

fn decompose_cmd(
    common: &Common,
    root: Option<&str>,
    monomial: Option<&str>,
    all: bool,
) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    let picked = root.is_some() as u8 + monomial.is_some() as u8 + all as u8;
    if picked != 1 {
        return Err(Error::params(
            "pass exactly one of --root, --monomial, --all",
        ));
    }
    let mut dec = Decomposer::new();
    if let Some(text) = root {
        let r = parse_kroot(text, &params)?;
        let d = dec.decompose(&r);
        render_decomposition(common, text, &d)?;
        return Ok(true);
    }
    if let Some(text) = monomial {
        let m = parse_monomial(text, &params)?;
        let d = kroots::monomial_decompose(&params, &m);
        render_decomposition(common, text, &d)?;
        return Ok(true);
    }

    // scan: which monomials are positive in the basis, and which words are
    // reverse lattice words
    let solver = BasisSolver::new(params);
    let mut rows = Vec::new();
    for m in enumerate_monomials(&params) {
        let word = Label::of_monomial(&params, &m);
        let reverse = matches!(
            kroots::word_class(&word),
            WordClass::ReverseLatticeWord | WordClass::Both
        );
        let d = monomial_decompose_with(&params, &m, &mut dec, Some(&solver));
        rows.push((m, word, reverse, d));
    }
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            for (m, word, reverse, d) in &rows {
                s.push_str(&format!(
                    "{m}  word {word}  reverse_lattice {reverse}  positive {}\n",
                    d.all_nonnegative()
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("monomial,word,reverse_lattice,positive\n");
            for (m, word, reverse, d) in &rows {
                s.push_str(&format!("{m},{word},{reverse},{}\n", d.all_nonnegative()));
            }
            s
        }
        Format::Json => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|(m, word, reverse, d)| {
                    serde_json::json!({
                        "monomial": m.to_string(),
                        "word": word.to_string(),
                        "reverse_lattice": reverse,
                        "positive": d.all_nonnegative(),
                        "coeffs": d.to_json()["coeffs"],
                    })
                })
                .collect();
            json_string(&serde_json::json!({
                "n": common.n,
                "k": common.k,
                "monomials": entries,
            }))
        }
    };
    emit(&common.out, &text)?;
    Ok(true)
}

fn spherical_cmd(common: &Common, j: Option<u32>, all: bool) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    if let (Some(_), true) = (j, all) {
        return Err(Error::params("pass at most one of --j, --all"));
    }
    let js: Vec<u32> = match j {
        Some(one) => {
            if one > common.k {
                return Err(Error::params(format!("j = {one} exceeds k = {}", common.k)));
            }
            vec![one]
        }
        None => (0..=common.k).collect(),
    };

    let mut certificates = Vec::new();
    let mut all_ok = true;
    for &jj in &js {
        let sp = SphericalParams::new(params, jj)?;
        let cert = certify(&sp);
        all_ok &= cert.ok();
        certificates.push(cert);
    }
    let table = spherical_table(&params);
    let solver = BasisSolver::new(params);

    let text = match common.format {
        Format::Csv => {
            // one row of table values per requested j
            let mut s = String::new();
            for &jj in &js {
                let row: Vec<String> = (0..=common.k as usize)
                    .map(|m| kroots::space::rat_to_string(&table[(jj as usize, m)]))
                    .collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for (pos, &jj) in js.iter().enumerate() {
                let sp = SphericalParams::new(params, jj)?;
                let phi = kroots::spherical_function_with(&sp, &solver);
                s.push_str(&format!("Phi_{jj} = {}\n", phi.vector()));
                for (label, coeff) in phi.basis_coeffs().iter() {
                    s.push_str(&format!(
                        "  {label}  {}\n",
                        kroots::space::rat_to_string(coeff)
                    ));
                }
                s.push_str(&format!(
                    "  denominator bound {}\n",
                    phi.denominator_bound()
                ));
                for check in &certificates[pos].checks {
                    s.push_str(&format!(
                        "  {} {}: {}\n",
                        if check.passed { "pass" } else { "FAIL" },
                        check.name,
                        check.detail
                    ));
                }
            }
            let rows: Vec<String> = (0..=common.k as usize)
                .map(|r| {
                    let row: Vec<String> = (0..=common.k as usize)
                        .map(|c| kroots::space::rat_to_string(&table[(r, c)]))
                        .collect();
                    row.join(" ")
                })
                .collect();
            s.push_str(&format!("table\n{}\n", rows.join("\n")));
            s.push_str(&format!(
                "invariant dimension {}\n",
                k_invariant_dimension(&params)
            ));
            s
        }
        Format::Json => {
            let functions: Vec<serde_json::Value> = js
                .iter()
                .zip(&certificates)
                .map(|(&jj, cert)| {
                    let sp = SphericalParams::new(params, jj).expect("validated");
                    let phi = kroots::spherical_function_with(&sp, &solver);
                    serde_json::json!({
                        "j": jj,
                        "vector": phi.vector().to_json(),
                        "basis_coeffs": phi.basis_coeffs().to_json()["coeffs"],
                        "denominator_bound": phi.denominator_bound().to_string(),
                        "certificate": {
                            "ok": cert.ok(),
                            "checks": cert.checks.iter().map(|c| serde_json::json!({
                                "name": c.name,
                                "passed": c.passed,
                                "detail": c.detail,
                            })).collect::<Vec<_>>(),
                        },
                    })
                })
                .collect();
            let table_rows: Vec<Vec<String>> = (0..=common.k as usize)
                .map(|r| {
                    (0..=common.k as usize)
                        .map(|c| kroots::space::rat_to_string(&table[(r, c)]))
                        .collect()
                })
                .collect();
            json_string(&serde_json::json!({
                "n": common.n,
                "k": common.k,
                "functions": functions,
                "table": table_rows,
            }))
        }
    };
    emit(&common.out, &text)?;
    Ok(all_ok)
}

fn matrix_cmd(common: &Common, perm_text: &str) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    let perm = Permutation::parse(perm_text, common.n)?;
    let mut dec = Decomposer::new();
    let rep = rep_matrix(&params, &perm, &mut dec);
    let dim = params.dim();
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            for r in 0..dim {
                let row: Vec<String> = (0..dim)
                    .map(|c| kroots::space::rat_to_string(&rep.matrix()[(r, c)]))
                    .collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
            s.push_str(&format!("sign_coherent {}\n", rep.sign_coherent()));
            s
        }
        Format::Csv => {
            let mut s = String::new();
            for r in 0..dim {
                let row: Vec<String> = (0..dim)
                    .map(|c| kroots::space::rat_to_string(&rep.matrix()[(r, c)]))
                    .collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => json_string(&serde_json::json!({
            "n": common.n,
            "k": common.k,
            "perm": perm.to_string(),
            "sign_coherent": rep.sign_coherent(),
            "matrix": rep.matrix().to_json(),
        })),
    };
    emit(&common.out, &text)?;
    Ok(rep.sign_coherent())
}

fn filtration_cmd(common: &Common, level: Option<u32>, all: bool) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    if let (Some(_), true) = (level, all) {
        return Err(Error::params("pass at most one of --level, --all"));
    }
    let levels: Vec<u32> = match level {
        Some(t) => vec![t],
        None => (0..=common.k).collect(),
    };
    let mut reports = Vec::new();
    let mut all_ok = true;
    for &t in &levels {
        let report = verify_filtration(&params, t)?;
        all_ok &= report.ok();
        reports.push(report);
    }
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!(
                    "level {}  dim {}  layer {} (expected {})  closed {}  kernel {}  {}\n",
                    r.level,
                    r.dimension,
                    r.layer_dimension,
                    r.expected_layer_dimension,
                    r.closed_under_sn,
                    r.equals_kernel,
                    if r.ok() { "ok" } else { "FAIL" }
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("level,dimension,layer,expected_layer,closed,kernel,ok\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.level,
                    r.dimension,
                    r.layer_dimension,
                    r.expected_layer_dimension,
                    r.closed_under_sn,
                    r.equals_kernel,
                    r.ok()
                ));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "level": r.level,
                        "dimension": r.dimension,
                        "layer_dimension": r.layer_dimension,
                        "expected_layer_dimension": r.expected_layer_dimension,
                        "closed_under_sn": r.closed_under_sn,
                        "equals_kernel": r.equals_kernel,
                        "ok": r.ok(),
                    })
                })
                .collect();
            json_string(&serde_json::json!({
                "n": common.n,
                "k": common.k,
                "levels": rows,
            }))
        }
    };
    emit(&common.out, &text)?;
    Ok(all_ok)
}

fn verify_cmd(common: &Common, seed: u64) -> Result<bool, Error> {
    let params = SpaceParams::new(common.n, common.k)?;
    let report = run_suite(&params, seed);
    let text = match common.format {
        Format::Plain => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(&format!(
                    "{} {}: {}\n",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            s.push_str(&format!(
                "{} of {} checks passed\n",
                report.checks.iter().filter(|c| c.passed).count(),
                report.checks.len()
            ));
            s
        }
        Format::Csv => {
            let mut s = String::from("name,passed\n");
            for c in &report.checks {
                s.push_str(&format!("{},{}\n", c.name, c.passed));
            }
            s
        }
        Format::Json => json_string(&report.to_json()),
    };
    emit(&common.out, &text)?;
    Ok(report.ok())
}
