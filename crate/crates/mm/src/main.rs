use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mm::config::SuiteConfig;
use mm::suites::run_suite;
use modmot::exactfield::{restrict_scalars, KMatrix, Matrix, NumberField, Scalar};
use modmot::laumon::{cartier_dual_dims, compati_check, lm_construct, r_dr};
use modmot::modcoh::{hdr_compute_over, hdr_dim_oracle, hdr_duality, hdr_pull};
use modmot::noriquiver::{end_compute, mpo_build, mpo_vertex};
use modmot::projline::{parse_curve_map, parse_divisor, ModulusTriple};

#[derive(Parser)]
#[command(name = "mm", version, about = "Exact checks for curves with modulus, Nori coalgebras and Laumon 1-motives")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite over the generated corpus.
    Verify(VerifyArgs),
    /// Relative de Rham cohomology of a triple.
    #[command(subcommand)]
    Modcoh(ModcohCmd),
    /// Quiver representations and their endomorphism algebras.
    #[command(subcommand)]
    Nori(NoriCmd),
    /// Linear Laumon 1-motives.
    #[command(subcommand)]
    Laumon(LaumonCmd),
}

#[derive(Args)]
struct VerifyArgs {
    /// dims, decomposition, duality, functoriality, nori-end, coalgebra, lemma, laumon-compat, filtration, ayoub or all
    suite: String,
    /// Field as minimal-polynomial coefficients, lowest degree first; repeatable. "" is Q.
    #[arg(long = "field", allow_hyphen_values = true)]
    fields: Vec<String>,
    #[arg(long, default_value_t = 6)]
    maxdeg: usize,
    #[arg(long, default_value_t = 2)]
    max_comps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed Čech truncation N instead of deg Y + deg Z + 4.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    torsion_cap: Option<u32>,
    /// Comma-separated scaling factors, e.g. "2,3,g".
    #[arg(long, allow_hyphen_values = true)]
    multipliers: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    morphisms: Option<usize>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the markdown report here.
    #[arg(long)]
    md: Option<PathBuf>,
    /// Flip one matrix entry per suite, to see the failure path.
    #[arg(long)]
    inject_fault: bool,
}

#[derive(Args)]
struct TripleArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    field: String,
    /// Divisor such as "2*(t)+inf"; components with @c.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    y: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 1)]
    comps: usize,
}

#[derive(Subcommand)]
enum ModcohCmd {
    /// Dimensions, basis labels and the Čech-free oracle.
    Hdr(TripleArgs),
    /// Gram matrix of the duality pairing with the swapped triple.
    Pair(TripleArgs),
    /// Pullback matrix along a map src → dst.
    Pull {
        #[command(flatten)]
        src: TripleArgs,
        #[arg(long = "dst-y", default_value = "", allow_hyphen_values = true)]
        dst_y: String,
        #[arg(long = "dst-z", default_value = "", allow_hyphen_values = true)]
        dst_z: String,
        #[arg(long = "dst-comps", default_value_t = 1)]
        dst_comps: usize,
        /// e.g. "(t^2)/(1)"; unions as "(t)/(1)@0->1;(t)/(1)@1->0"
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand)]
enum NoriCmd {
    /// The P_n quiver over a field, with edge labels and vertex dims.
    Mpo(MpoArgs),
    /// dim End(T|E) for E = P_2..P_nmax.
    End(MpoArgs),
}

#[derive(Args)]
struct MpoArgs {
    #[arg(long, default_value = "-2,0,1", allow_hyphen_values = true)]
    field: String,
    #[arg(long, default_value_t = 5)]
    nmax: usize,
}

#[derive(Subcommand)]
enum LaumonCmd {
    /// Dimensions and structure maps of LM(T).
    Lm(TripleArgs),
    /// R_dR(LM(T)) against the canonical decomposition of H1(T).
    Compat(TripleArgs),
    /// Cartier dual dimensions next to LM of the swapped triple.
    Dual(TripleArgs),
}

fn mat<S: Scalar + std::fmt::Display>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| json!(x.to_string())).collect())).collect())
}

fn field(spec: &str) -> Result<NumberField, String> {
    NumberField::parse(spec).map_err(|e| format!("field {:?}: {}", spec, e))
}

fn triple(k: &NumberField, y: &str, z: &str, comps: usize) -> Result<ModulusTriple, String> {
    let y = parse_divisor(k, y).map_err(|e| format!("Y: {}", e))?;
    let z = parse_divisor(k, z).map_err(|e| format!("Z: {}", e))?;
    ModulusTriple::new(comps, y, z).map_err(|e| e.to_string())
}

fn read_triple(a: &TripleArgs) -> Result<(NumberField, ModulusTriple), String> {
    let k = field(&a.field)?;
    let t = triple(&k, &a.y, &a.z, a.comps)?;
    Ok((k, t))
}

fn verify(a: VerifyArgs) -> Result<bool, String> {
    let mut cfg = SuiteConfig { max_deg: a.maxdeg, max_comps: a.max_comps, seed: a.seed, truncation: a.truncation, inject_fault: a.inject_fault, ..SuiteConfig::default() };
    if !a.fields.is_empty() {
        cfg.fields = a.fields;
    }
    if let Some(t) = a.torsion_cap {
        cfg.torsion_cap = t;
    }
    if let Some(m) = a.multipliers {
        cfg.multipliers = m.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(p) = a.pairs {
        cfg.pairs = p;
    }
    if let Some(m) = a.morphisms {
        cfg.morphisms = m;
    }
    if let Some(n) = a.nmax {
        cfg.nori_n_max = n;
    }
    let report = run_suite(&a.suite, &cfg).map_err(|e| e.to_string())?;
    if let Some(p) = &a.json {
        report.write_json(p).map_err(|e| format!("{}: {}", p.display(), e))?;
    }
    if let Some(p) = &a.md {
        report.write_markdown(p).map_err(|e| format!("{}: {}", p.display(), e))?;
    }
    for c in &report.checks {
        eprintln!("{} {} ({} instances, {} ms)", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.instances, c.millis);
    }
    for w in &report.warnings {
        eprintln!("warning: {}", w);
    }
    if a.json.is_none() && a.md.is_none() {
        println!("{}", report.to_json());
    }
    Ok(report.passed())
}

fn modcoh(cmd: ModcohCmd) -> Result<Value, String> {
    match cmd {
        ModcohCmd::Hdr(a) => {
            let (k, t) = read_triple(&a)?;
            let h = hdr_compute_over(&t, &k.zero());
            Ok(json!({ "triple": t.to_string(), "dims": h.dims(), "oracle": hdr_dim_oracle(&t), "basis": h.basis_labels() }))
        }
        ModcohCmd::Pair(a) => {
            let (_, t) = read_triple(&a)?;
            let g = hdr_duality(&t);
            Ok(json!({ "triple": t.to_string(), "dual": t.swap().to_string(), "gram": mat(&g), "rank": g.rank() }))
        }
        ModcohCmd::Pull { src, dst_y, dst_z, dst_comps, map } => {
            let (k, s) = read_triple(&src)?;
            let d = triple(&k, &dst_y, &dst_z, dst_comps)?;
            let f = parse_curve_map(&k, &map, s.comps, d.comps).map_err(|e| e.to_string())?;
            let p: KMatrix = hdr_pull(&f, &s, &d).map_err(|e| e.to_string())?;
            Ok(json!({ "map": f.to_string(), "src": s.to_string(), "dst": d.to_string(), "pullback": mat(&p), "over_Q": mat(&restrict_scalars(&k, &p)) }))
        }
    }
}

fn nori(cmd: NoriCmd) -> Result<Value, String> {
    let (NoriCmd::Mpo(a) | NoriCmd::End(a)) = &cmd;
    let k = field(&a.field)?;
    let mults = modmot::noriquiver::default_multipliers(&k, a.nmax);
    let rep = mpo_build(a.nmax, &k, &mults).map_err(|e| e.to_string())?;
    match cmd {
        NoriCmd::Mpo(_) => Ok(json!({
            "variance": rep.variance,
            "vertices": rep.vertices,
            "edges": rep.edges.iter().map(|e| json!({ "label": e.label, "src": e.src, "dst": e.dst, "shape": [e.matrix.rows(), e.matrix.cols()] })).collect::<Vec<_>>(),
        })),
        NoriCmd::End(a) => {
            let names: Vec<String> = (2..=a.nmax).map(mpo_vertex).collect();
            let e: Vec<&str> = names.iter().map(String::as_str).collect();
            let end = end_compute(&rep, &e).map_err(|e| e.to_string())?;
            Ok(json!({ "field": a.field, "vertices": names, "end_dim": end.dim(), "degree": k.degree() }))
        }
    }
}

fn laumon(cmd: LaumonCmd) -> Result<Value, String> {
    match cmd {
        LaumonCmd::Lm(a) => {
            let (_, t) = read_triple(&a)?;
            let m = lm_construct(&t).map_err(|e| e.to_string())?;
            Ok(json!({ "triple": t.to_string(), "dims": m.dims(), "rdr": r_dr(&m), "u_inf": mat(&m.u_inf), "et_uni": mat(&m.et_uni) }))
        }
        LaumonCmd::Compat(a) => {
            let (_, t) = read_triple(&a)?;
            let r = compati_check(&t).map_err(|e| e.to_string())?;
            serde_json::to_value(&r).map_err(|e| e.to_string())
        }
        LaumonCmd::Dual(a) => {
            let (_, t) = read_triple(&a)?;
            let m = lm_construct(&t).map_err(|e| e.to_string())?;
            let s = lm_construct(&t.swap()).map_err(|e| e.to_string())?;
            Ok(json!({ "triple": t.to_string(), "cartier_dual": cartier_dual_dims(&m).dims(), "swapped": s.dims() }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Verify(a) => match verify(a) {
            Ok(true) => return ExitCode::SUCCESS,
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
        Cmd::Modcoh(c) => modcoh(c),
        Cmd::Nori(c) => nori(c),
        Cmd::Laumon(c) => laumon(c),
    };
    match out {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("plain data"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
