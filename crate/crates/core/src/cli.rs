//! Command-line front end. Results go to stdout (or `--out`), diagnostics
//! to stderr. Exit codes: 0 success, 1 failed check or runtime error,
//! 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chartab::{label_permutation_classes, nikulin_euler_table, validated_table};
use crate::cyclo::CycloNum;
use crate::exactmat::{hermite_normal_form, integer_kernel, smith_normal_form, IntMatrix};
use crate::exec::Exec;
use crate::gf2code::{build_golay, find_trio, octad_intersection_census_with, verify_steiner_with, CodeProfile};
use crate::k3audit::{
    disc_solutions, glue_order_candidates, lefschetz_fixed_rank, order3_matrix, order4_matrix,
    orbit_type_enumeration, polarization_index_check, run_all_with, solve_multiplicities, summarize,
    GlueCandidates, INVARIANT_DET,
};
use crate::lattices::{key_lemma_case, niemeier_a1_24, KeyLemmaCase, Lattice};
use crate::permgrp::{projective_label, PermutationGroup};
use crate::represent::{
    act_on_polynomial, character_of, hessian, invariant_dimension_with, klein_quartic, klein_sextic,
    matrix_group_closure, variable_names, v3_generators, CycloMatrix,
};

#[derive(Parser, Debug)]
#[command(name = "l27", version, about = "Exact checks for the Golay code, A1^24 lattices and the group of order 168")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extended binary Golay code.
    #[command(subcommand)]
    Golay(GolayCmd),
    /// The permutation group of order 168 on the projective line over F7.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Root lattice A1^24, its Niemeier overlattice and invariant sublattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The 3-dimensional representation and its invariants.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Arithmetic checks on invariant lattices.
    #[command(subcommand)]
    Audit(AuditCmd),
    /// Integer matrix utilities on a text file ("rows cols" then rows).
    #[command(subcommand)]
    Matrix(MatrixCmd),
}

#[derive(Subcommand, Debug)]
pub enum GolayCmd {
    Build,
    Weights,
    Steiner,
    Trio,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    Order,
    Histogram,
    Classes,
    Center,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CaseArg {
    Star,
    Dstar,
}

impl From<CaseArg> for KeyLemmaCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Star => KeyLemmaCase::Star,
            CaseArg::Dstar => KeyLemmaCase::DoubleStar,
        }
    }
}

#[derive(Args, Debug)]
pub struct CaseOpt {
    #[arg(long, value_enum, default_value_t = CaseArg::Star)]
    pub case: CaseArg,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    Niemeier,
    Keylemma(CaseOpt),
    /// Discriminant group of an invariant lattice, or of a lattice file.
    Discgroup {
        #[arg(long, value_enum, default_value_t = CaseArg::Star)]
        case: CaseArg,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepCmd {
    Closure,
    Klein,
    Hessian,
    Invariants {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(3..=4))]
        vars: u8,
    },
    Characters,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
}

#[derive(Subcommand, Debug)]
pub enum AuditCmd {
    Rank,
    Multiplicities,
    Glue {
        #[arg(long, value_enum)]
        order: OrderArg,
    },
    /// Positive (m, n) with l^2 * 196 = c m^2 * 2n, c = 3 for order 3 and 4 for order 4.
    Disc {
        #[arg(long, value_enum)]
        order: OrderArg,
        #[arg(long, default_value_t = 1)]
        ell: u64,
    },
    OrbitTypes {
        #[arg(long, default_value_t = 5)]
        parts: usize,
    },
    /// Whether det(T) * H^2 / 196 is the square of an index.
    #[command(name = "index-check", alias = "remark212")]
    IndexCheck {
        #[arg(long, default_value_t = 196)]
        det_t: u64,
        #[arg(long, default_value_t = 2)]
        h_sq: u64,
    },
    All,
}

#[derive(Subcommand, Debug)]
pub enum MatrixCmd {
    Det { file: PathBuf },
    Snf { file: PathBuf },
    Hnf { file: PathBuf },
    Kernel { file: PathBuf },
}

/// Rendered result of one command.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let out = match dispatch(&cli.command, exec) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let mut body = match cli.format {
        Format::Text => out.text,
        Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize"),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{body}"),
    }
    if out.ok {
        0
    } else {
        1
    }
}

fn dispatch(cmd: &Command, exec: Exec) -> Result<Output, String> {
    match cmd {
        Command::Golay(c) => golay(c, exec),
        Command::Group(c) => Ok(group(c)),
        Command::Lattice(c) => lattice(c),
        Command::Rep(c) => rep(c, exec),
        Command::Audit(c) => audit(c, exec),
        Command::Matrix(c) => matrix(c),
    }
}

fn join_map<K: ToString, V: ToString>(m: impl IntoIterator<Item = (K, V)>) -> String {
    m.into_iter().map(|(k, v)| format!("{}:{}", k.to_string(), v.to_string())).collect::<Vec<_>>().join(" ")
}

fn golay(cmd: &GolayCmd, exec: Exec) -> Result<Output, String> {
    let code = build_golay();
    Ok(match cmd {
        GolayCmd::Build => {
            let p = CodeProfile::of(&code);
            let rows: Vec<Vec<usize>> = code.generator().iter().map(|w| w.support()).collect();
            Output::ok(code.to_string(), json!({ "profile": p, "generator": rows }))
        }
        GolayCmd::Weights => {
            let w = code.weight_enumerator();
            Output::ok(join_map(&w), json!(w))
        }
        GolayCmd::Steiner => {
            let s = verify_steiner_with(&code, exec);
            let census = octad_intersection_census_with(&code, exec);
            let text = format!(
                "five-sets = {}\nincidences = {}\ncount per five-set = {}..{}\nholds = {}\noctad intersections = {:?}",
                s.five_sets, s.incidence_total, s.min_count, s.max_count, s.holds, census
            );
            let ok = s.holds && census.iter().copied().eq([0, 2, 4]);
            Output { text, json: json!({ "steiner": s, "intersections": census }), ok }
        }
        GolayCmd::Trio => match find_trio(&code) {
            Some(t) => {
                let supports: Vec<Vec<usize>> = t.iter().map(|w| w.support()).collect();
                let text = supports.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join("\n");
                Output::ok(text, json!(supports))
            }
            None => return Err("no trio found".into()),
        },
    })
}

fn group(cmd: &GroupCmd) -> Output {
    let g = PermutationGroup::psl2_7();
    match cmd {
        GroupCmd::Order => {
            let orders: Vec<usize> = g.generators().iter().map(|p| p.order()).collect();
            Output::ok(
                format!("order = {}\ngenerator orders = {orders:?}", g.order()),
                json!({ "order": g.order(), "generator_orders": orders }),
            )
        }
        GroupCmd::Histogram => {
            let h = g.element_order_histogram();
            Output::ok(join_map(&h), json!(h))
        }
        GroupCmd::Classes => {
            let classes = label_permutation_classes(&g);
            let mut text = String::new();
            for (label, c) in &classes {
                let rep = c.representative.cycle_string(projective_label);
                writeln!(text, "{label:<3} size {:>2}  order {}  {rep}", c.size, c.element_order).unwrap();
            }
            let json: Vec<Value> = classes
                .iter()
                .map(|(label, c)| {
                    json!({
                        "label": label,
                        "size": c.size,
                        "element_order": c.element_order,
                        "representative": c.representative.cycle_string(projective_label),
                    })
                })
                .collect();
            Output::ok(text, Value::Array(json))
        }
        GroupCmd::Center => {
            let z = g.center();
            Output::ok(
                format!("center order = {}\nsimple = {}", z.order(), g.is_simple()),
                json!({ "center_order": z.order(), "simple": g.is_simple() }),
            )
        }
    }
}

fn lattice(cmd: &LatticeCmd) -> Result<Output, String> {
    let code = build_golay();
    Ok(match cmd {
        LatticeCmd::Niemeier => {
            let n = niemeier_a1_24(&code).map_err(|e| e.to_string())?;
            let (rank, even, det, neg) = (n.rank(), n.is_even(), n.abs_det(), n.is_negative_definite());
            let text = format!("rank = {rank}\neven = {even}\nabs_det = {det}\nnegative_definite = {neg}");
            let ok = rank == 24 && even && det == 1.into() && neg;
            Output {
                text,
                json: json!({ "rank": rank, "even": even, "abs_det": det.to_string(), "negative_definite": neg }),
                ok,
            }
        }
        LatticeCmd::Keylemma(opt) => {
            let r = key_lemma_case(&code, opt.case.into()).map_err(|e| e.to_string())?;
            let mut text = format!("case {}\norbits {:?}\nGram:\n{}", r.case.name(), r.partition, r.gram.aligned());
            let factors: Vec<String> = r.invariant_factors.iter().map(ToString::to_string).collect();
            writeln!(text, "abs_det = {}", r.abs_det).unwrap();
            writeln!(text, "invariant factors = {}", factors.join(" ")).unwrap();
            writeln!(text, "glue subsets = {:?}", r.glue_subsets).unwrap();
            writeln!(text, "gram matches = {}", r.gram_matches).unwrap();
            write!(text, "basis equals intersection = {}", r.basis_equals_intersection).unwrap();
            let ok = r.gram_matches && r.basis_equals_intersection && r.glue_generates_intersection;
            Output { text, json: json!(r), ok }
        }
        LatticeCmd::Discgroup { case, file } => {
            let l: Lattice = match file {
                Some(path) => read(path)?.parse().map_err(|e: crate::lattices::LatticeError| e.to_string())?,
                None => {
                    let r = key_lemma_case(&code, (*case).into()).map_err(|e| e.to_string())?;
                    Lattice::new(r.gram.clone(), IntMatrix::identity(r.gram.rows()).to_rational())
                        .map_err(|e| e.to_string())?
                }
            };
            let d = l.discriminant_group().map_err(|e| e.to_string())?;
            let factors: Vec<String> = d.invariant_factors.iter().map(ToString::to_string).collect();
            let text = format!("order = {}\ninvariant factors = {}", d.order(), factors.join(" "));
            Output::ok(text, json!({ "order": d.order().to_string(), "invariant_factors": factors }))
        }
    })
}

fn closure() -> Result<Vec<CycloMatrix>, String> {
    matrix_group_closure(&v3_generators()).map_err(|e| e.to_string())
}

fn rep(cmd: &RepCmd, exec: Exec) -> Result<Output, String> {
    let names_owned = variable_names(3);
    let names: Vec<&str> = names_owned.iter().map(String::as_str).collect();
    Ok(match cmd {
        RepCmd::Closure => {
            let g = closure()?;
            let mut hist = std::collections::BTreeMap::new();
            for m in &g {
                *hist.entry(m.order(168).map_err(|e| e.to_string())?).or_insert(0usize) += 1;
            }
            Output {
                text: format!("order = {}\nelement orders = {}", g.len(), join_map(&hist)),
                json: json!({ "order": g.len(), "element_orders": hist }),
                ok: g.len() == 168,
            }
        }
        RepCmd::Klein => {
            let g = closure()?;
            let f = klein_quartic();
            let fixed = g.iter().filter(|m| act_on_polynomial(m, &f).as_ref() == Ok(&f)).count();
            Output {
                text: format!("F = {}\nfixed by {fixed} of {} matrices", f.pretty(&names), g.len()),
                json: json!({ "polynomial": f.pretty(&names), "fixed_by": fixed, "group_order": g.len() }),
                ok: fixed == g.len(),
            }
        }
        RepCmd::Hessian => {
            let h = hessian(&klein_quartic()).map_err(|e| e.to_string())?;
            let sextic = klein_sextic();
            let ok = h == sextic.scale(&CycloNum::from_int(54));
            Output {
                text: format!("Hess(F) = {}\nequals 54 * ({}) = {ok}", h.pretty(&names), sextic.pretty(&names)),
                json: json!({ "hessian": h.pretty(&names), "sextic": sextic.pretty(&names), "scalar": 54, "matches": ok }),
                ok,
            }
        }
        RepCmd::Invariants { degree, vars } => {
            let mut g = closure()?;
            if *vars == 4 {
                g = g.iter().map(CycloMatrix::with_trivial_summand).collect();
            }
            let space = invariant_dimension_with(&g, *degree, exec);
            let vn = variable_names(*vars as usize);
            let vn: Vec<&str> = vn.iter().map(String::as_str).collect();
            let basis: Vec<String> = space.basis.iter().map(|p| p.pretty(&vn)).collect();
            let mut text = format!("degree {degree}, {vars} variables: dimension {}", space.dimension());
            for b in &basis {
                write!(text, "\n  {b}").unwrap();
            }
            Output::ok(text, json!({ "degree": degree, "vars": vars, "dimension": space.dimension(), "basis": basis }))
        }
        RepCmd::Characters => {
            let table = validated_table();
            let traces = character_of(&closure()?).map_err(|e| e.to_string())?;
            let mut text = table.render();
            text.push_str("\ntraces of the 3-dimensional representation:\n");
            for t in &traces {
                writeln!(text, "  order {} size {:>2}: {}", t.element_order, t.size, t.trace.pretty()).unwrap();
            }
            Output {
                text,
                json: json!({ "table": table, "v3_traces": traces }),
                ok: table.validate().is_ok(),
            }
        }
    })
}

fn glue_json(c: &GlueCandidates) -> (String, Value) {
    match c {
        GlueCandidates::Unconstrained => ("unconstrained".into(), json!("unconstrained")),
        GlueCandidates::Orders { det, orders, rejected_divisors, non_divisors_checked } => (
            format!(
                "det(M - I) = {det}\nadmissible l = {orders:?}\nrejected divisors = {rejected_divisors:?}\nnon-divisors without fixed class = {non_divisors_checked}"
            ),
            json!({ "det": det, "orders": orders, "rejected_divisors": rejected_divisors, "non_divisors_checked": non_divisors_checked }),
        ),
    }
}

fn audit(cmd: &AuditCmd, exec: Exec) -> Result<Output, String> {
    Ok(match cmd {
        AuditCmd::Rank => {
            let h = PermutationGroup::psl2_7().element_order_histogram();
            let r = lefschetz_fixed_rank(&h, &nikulin_euler_table()).map_err(|e| e.to_string())?;
            Output {
                text: format!("histogram = {}\naverage Euler number = {}\nrank = {}", join_map(&h), r.average, r.rank),
                json: json!({ "histogram": h, "average": r.average.to_string(), "rank": r.rank.to_string() }),
                ok: r.rank == num_rational::BigRational::from_integer(3.into()),
            }
        }
        AuditCmd::Multiplicities => {
            let m = solve_multiplicities(&validated_table(), &nikulin_euler_table()).map_err(|e| e.to_string())?;
            Output {
                text: format!("n = {:?}\nunique with entries in 0..={}", m.n, m.search_bound),
                json: json!(m),
                ok: m.n == [1, 0, 0, 2, 1, 0],
            }
        }
        AuditCmd::Glue { order } => {
            let m = match order {
                OrderArg::Three => order3_matrix(),
                OrderArg::Four => order4_matrix(),
            };
            let (text, json) = glue_json(&glue_order_candidates(&m));
            Output::ok(text, json)
        }
        AuditCmd::Disc { order, ell } => {
            let coeff = match order {
                OrderArg::Three => 3,
                OrderArg::Four => 4,
            };
            let sols: Vec<(u64, u64)> = disc_solutions(INVARIANT_DET as u64, *ell, coeff).into_iter().collect();
            Output::ok(
                format!("l = {ell}, det(T) = {coeff} m^2\n(m, n) = {sols:?}"),
                json!({ "ell": ell, "coeff": coeff, "solutions": sols }),
            )
        }
        AuditCmd::OrbitTypes { parts } => {
            let r = orbit_type_enumeration(24, *parts, 3);
            let mut text = String::new();
            for t in &r.types {
                writeln!(text, "{t:?}").unwrap();
            }
            for (s, why) in &r.excluded_sizes {
                writeln!(text, "size {s} excluded: {why}").unwrap();
            }
            Output::ok(text, json!(r))
        }
        AuditCmd::IndexCheck { det_t, h_sq } => {
            let r = polarization_index_check(*det_t, *h_sq, INVARIANT_DET as u64);
            Output::ok(
                format!(
                    "det(T) * H^2 / 196 = {}\nindex = {}\ncompatible = {}",
                    r.ratio,
                    r.index.map_or("none".into(), |i| i.to_string()),
                    r.compatible
                ),
                json!(r),
            )
        }
        AuditCmd::All => {
            let reports = run_all_with(&build_golay(), exec);
            let summary = summarize(&reports);
            let mut text = String::new();
            for r in &reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(text, "{tag} {:<34} {}", r.claim_id, r.computed).unwrap();
            }
            write!(text, "{} of {} checks passed", summary.passed, summary.total).unwrap();
            Output {
                text,
                json: json!({
                    "build": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
                    "reports": reports,
                    "summary": summary,
                }),
                ok: summary.failed == 0,
            }
        }
    })
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn read_matrix(path: &PathBuf) -> Result<IntMatrix, String> {
    read(path)?.parse().map_err(|e: crate::exactmat::MatrixError| e.to_string())
}

fn matrix(cmd: &MatrixCmd) -> Result<Output, String> {
    Ok(match cmd {
        MatrixCmd::Det { file } => {
            let d = read_matrix(file)?.det().map_err(|e| e.to_string())?;
            Output::ok(d.to_string(), json!(d.to_string()))
        }
        MatrixCmd::Snf { file } => {
            let s = smith_normal_form(&read_matrix(file)?);
            let f: Vec<String> = s.invariant_factors().iter().map(ToString::to_string).collect();
            Output::ok(
                format!("invariant factors = {}\n{}", f.join(" "), s.d.aligned()),
                json!({ "invariant_factors": f, "rank": s.rank() }),
            )
        }
        MatrixCmd::Hnf { file } => {
            let h = hermite_normal_form(&read_matrix(file)?);
            Output::ok(h.aligned(), json!(h.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()))
        }
        MatrixCmd::Kernel { file } => {
            let k = integer_kernel(&read_matrix(file)?);
            let rows: Vec<Vec<String>> = k.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            let text = if rows.is_empty() { "trivial kernel".to_string() } else { rows.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n") };
            Output::ok(text, json!(rows))
        }
    })
}
