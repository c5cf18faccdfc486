//! `bisym`: evaluate symmetric-function expressions and run the stable
//! cohomology pipelines from the command line.

use std::fmt::Write as _;
use std::process::ExitCode;

use bisym_core::applications::{albanese_counts, albanese_report, decomposition_report, Variant, VariantSpec};
use bisym_core::bases::{schur_pair_expansion, DecompositionReport};
use bisym_core::exprlang::eval_str;
use bisym_core::{BiSymSeries, Partition, Rational, Truncation};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bisym", version, about = "Exact calculus of bisymmetric functions")]
struct Cli {
    /// Degree bound in the x-alphabet.
    #[arg(long, global = true, default_value_t = 6, allow_negative_numbers = true)]
    deg_x: u32,
    /// Degree bound in the y-alphabet.
    #[arg(long, global = true, default_value_t = 6, allow_negative_numbers = true)]
    deg_y: u32,
    /// Lowest power of hbar kept.
    #[arg(long, global = true, default_value_t = -8, allow_negative_numbers = true)]
    hbar_min: i32,
    /// Highest power of hbar kept.
    #[arg(long, global = true, default_value_t = 8, allow_negative_numbers = true)]
    hbar_max: i32,
    /// Basis for printing series.
    #[arg(long, global = true, value_enum, default_value_t = Basis::Schur)]
    basis: Basis,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    P,
    Schur,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "Qtilde")]
    Qtilde,
    #[value(name = "Qprime")]
    Qprime,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Q => Variant::Full,
            VariantArg::Qtilde => Variant::SubProp,
            VariantArg::Qprime => Variant::NonUnital,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print the result.
    Eval {
        /// Expression text, e.g. "pleth(h[2](x), h[2](x))".
        expr: String,
    },
    /// Schur-pair decomposition of the degree-d stable cohomology character.
    Autfn {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        d: u32,
        /// Largest output arity (default 4; for Qprime, d).
        #[arg(long)]
        q_max: Option<u32>,
        /// Largest input arity (default 4; for Qprime, 2d).
        #[arg(long)]
        p_max: Option<u32>,
    },
    /// Counts of irreducible summands of the Albanese cohomology.
    Table1 {
        #[arg(long)]
        d_max: u32,
    },
}

fn hbar_coeff(c: &Rational, k: i32) -> Rational {
    if k.rem_euclid(2) == 1 {
        -c
    } else {
        c.clone()
    }
}

fn parts(p: &Partition) -> String {
    p.parts().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

/// `c * hbar^k * f1 * f2 ...` with unit coefficients and empty factors
/// elided.
fn term(c: &Rational, k: i32, factors: &[String]) -> (bool, String) {
    let negative = c < &Rational::from_integer(0.into());
    let abs = if negative { -c } else { c.clone() };
    let mut pieces = Vec::new();
    let unit = abs == Rational::from_integer(1.into());
    if !unit || (k == 0 && factors.is_empty()) {
        pieces.push(abs.to_string());
    }
    match k {
        0 => {}
        1 => pieces.push("hbar".into()),
        k => pieces.push(format!("hbar^{k}")),
    }
    pieces.extend(factors.iter().cloned());
    (negative, pieces.join("*"))
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, t)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&t);
    }
    out
}

fn schur_factors(x: &Partition, y: &Partition) -> Vec<String> {
    let mut f = Vec::new();
    if !x.is_empty() {
        f.push(format!("s[{}](x)", parts(x)));
    }
    if !y.is_empty() {
        f.push(format!("s[{}](y)", parts(y)));
    }
    f
}

fn render_series(f: &BiSymSeries, basis: Basis, format: Format) -> Result<String, String> {
    match (basis, format) {
        (_, Format::Csv) => Err("csv output is only available for table1".into()),
        (Basis::P, Format::Text) => {
            let terms = f
                .terms()
                .map(|(m, c)| {
                    let mut factors = Vec::new();
                    if !m.x.is_empty() {
                        factors.push(format!("p[{}](x)", parts(&m.x)));
                    }
                    if !m.y.is_empty() {
                        factors.push(format!("p[{}](y)", parts(&m.y)));
                    }
                    term(&hbar_coeff(c, m.t), m.t, &factors)
                })
                .collect();
            Ok(join_terms(terms))
        }
        (Basis::P, Format::Json) => {
            let terms: Vec<_> = f
                .terms()
                .map(|(m, c)| json!({"x": m.x, "y": m.y, "hbar_deg": m.t, "coeff": hbar_coeff(c, m.t).to_string()}))
                .collect();
            Ok(json!({"basis": "p", "terms": terms}).to_string())
        }
        (Basis::Schur, Format::Text) => {
            let rep = schur_pair_expansion(f);
            let terms = rep
                .rows
                .iter()
                .map(|r| term(&hbar_coeff(&r.mult, r.hbar_deg), r.hbar_deg, &schur_factors(&r.x_part, &r.y_part)))
                .collect();
            Ok(join_terms(terms))
        }
        (Basis::Schur, Format::Json) => {
            let rows: Vec<_> = schur_pair_expansion(f)
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "x_part": r.x_part,
                        "y_part": r.y_part,
                        "hbar_deg": r.hbar_deg,
                        "coeff": hbar_coeff(&r.mult, r.hbar_deg).to_string(),
                    })
                })
                .collect();
            Ok(json!({"basis": "schur", "terms": rows}).to_string())
        }
    }
}

fn render_report(spec: &VariantSpec, report: &DecompositionReport, format: Format) -> Result<String, String> {
    let derived = spec.variant == Variant::SubProp;
    match format {
        Format::Json => {
            let mut v = report.to_json();
            let obj = v.as_object_mut().expect("report is an object");
            obj.insert("variant".into(), json!(spec.variant.name()));
            obj.insert("d".into(), json!(spec.d));
            obj.insert("q_max".into(), json!(spec.q_max));
            obj.insert("p_max".into(), json!(spec.p_max));
            if derived {
                obj.insert("derived".into(), json!(true));
            }
            Ok(v.to_string())
        }
        Format::Text => {
            let mut out = String::new();
            if derived {
                out.push_str("# derived: computed by the pipeline, no published reference values\n");
            }
            let _ = writeln!(
                out,
                "# variant {}, degree {}, q <= {}, p <= {}: {} irreducibles, total multiplicity {}",
                spec.variant,
                spec.d,
                spec.q_max,
                spec.p_max,
                report.n_irr(),
                report.sum_mult()
            );
            for r in &report.rows {
                let pair = format!("({}) ({})", parts(&r.x_part), parts(&r.y_part));
                let _ = writeln!(out, "{pair} {}", r.mult);
            }
            Ok(out.trim_end().to_string())
        }
        Format::Csv => Err("csv output is only available for table1".into()),
    }
}

fn run(cli: Cli) -> Result<String, String> {
    match cli.command {
        Command::Eval { expr } => {
            let trunc = Truncation::new(cli.deg_x, cli.deg_y, cli.hbar_min, cli.hbar_max).map_err(|e| e.to_string())?;
            let f = eval_str(&expr, trunc).map_err(|e| e.to_string())?;
            render_series(&f, cli.basis, cli.format)
        }
        Command::Autfn { variant, d, q_max, p_max } => {
            let variant = Variant::from(variant);
            let (dq, dp) = if variant == Variant::NonUnital { (d, 2 * d) } else { (4, 4) };
            let spec = VariantSpec::new(variant, d, q_max.unwrap_or(dq), p_max.unwrap_or(dp));
            let report = if variant == Variant::NonUnital && q_max.is_none() && p_max.is_none() {
                albanese_report(d)
            } else {
                decomposition_report(&spec)
            }
            .map_err(|e| e.to_string())?;
            render_report(&spec, &report, cli.format)
        }
        Command::Table1 { d_max } => {
            if d_max == 0 {
                return Err("--d-max must be at least 1".into());
            }
            let rows = albanese_counts(d_max).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => Ok(serde_json::to_string(&rows).expect("rows serialize")),
                Format::Text | Format::Csv => {
                    let mut out = String::from("d,n_irr,sum_mult");
                    for r in rows {
                        let _ = write!(out, "\n{},{},{}", r.d, r.n_irr, r.sum_mult);
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
