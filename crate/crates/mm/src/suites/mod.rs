//! Property suites over the corpus. Each suite turns into a list of checks;
//! a check aggregates one property over many instances and keeps the first
//! few failing instances as its witness.

mod cohomology;
mod laumon;
mod nori;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use modmot::exactfield::{Matrix, Scalar};
use modmot::modcoh::{hdr_compute_over, GradedCoh};
use modmot::projline::ModulusTriple;

use crate::config::{threads_from_env, SuiteConfig};
use crate::corpus::{corpus_generate, Corpus, CorpusError};
use crate::report::{Check, Report, Status};

pub const SUITES: &[&str] = &["dims", "decomposition", "duality", "functoriality", "nori-end", "coalgebra", "lemma", "laumon-compat", "filtration", "ayoub"];

/// Witnesses kept per failing check.
const WITNESS_LIMIT: usize = 5;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; expected all or one of: {1}")]
    Unknown(String, String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Corpora for every configured field, plus lazily computed cohomology.
pub struct Ctx {
    pub cfg: SuiteConfig,
    pub corpora: Vec<Corpus>,
    /// Per corpus: the single triples followed by the disjoint-union totals.
    instances: Vec<Vec<ModulusTriple>>,
    cohs: Vec<OnceLock<Vec<GradedCoh>>>,
}

impl Ctx {
    pub fn new(cfg: &SuiteConfig) -> Result<Self, SuiteError> {
        let corpora: Vec<Corpus> = cfg.fields.iter().map(|f| corpus_generate(cfg, f)).collect::<Result<_, _>>()?;
        let instances = corpora.iter().map(|c| c.triples.iter().cloned().chain(c.unions.iter().map(|u| u.total.clone())).collect()).collect();
        let cohs = corpora.iter().map(|_| OnceLock::new()).collect();
        Ok(Ctx { cfg: cfg.clone(), corpora, instances, cohs })
    }

    pub fn instances(&self, c: usize) -> &[ModulusTriple] {
        &self.instances[c]
    }

    pub fn cohs(&self, c: usize) -> &[GradedCoh] {
        self.cohs[c].get_or_init(|| {
            let proto = self.corpora[c].field.zero();
            self.instances[c].par_iter().map(|t| hdr_compute_over(t, &proto)).collect()
        })
    }

    /// Whether instance i of a check is the one that receives the injected fault.
    pub fn inject(&self, i: usize, target: Option<usize>) -> bool {
        self.cfg.inject_fault && target == Some(i)
    }
}

/// m with one entry changed by one; used only by the fault-injection mode.
pub(crate) fn flip_at<S: Scalar>(m: &Matrix<S>, r: usize, c: usize) -> Matrix<S> {
    let mut out = m.clone();
    if r < m.rows() && c < m.cols() {
        let v = m.get(r, c).add(&m.proto().one_like());
        out.set(r, c, v);
    }
    out
}

pub(crate) fn flip<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    flip_at(m, 0, 0)
}

pub(crate) fn mat<S: Scalar + std::fmt::Display>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into())
}

fn finish(name: String, instances: usize, failures: Vec<Value>, start: Instant) -> Check {
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    let witness = (!failures.is_empty()).then(|| json!({ "failing": failures.len(), "first": failures.into_iter().take(WITNESS_LIMIT).collect::<Vec<_>>() }));
    Check { name, status, instances, witness, millis: start.elapsed().as_millis() as u64 }
}

/// Runs f on every item in parallel. Err values and panics become witnesses.
pub(crate) fn check_each<T: Sync>(name: impl Into<String>, items: &[T], f: impl Fn(usize, &T) -> Result<(), Value> + Sync) -> Check {
    let start = Instant::now();
    let failures: Vec<Value> = items
        .par_iter()
        .enumerate()
        .filter_map(|(i, x)| match catch_unwind(AssertUnwindSafe(|| f(i, x))) {
            Ok(Ok(())) => None,
            Ok(Err(w)) => Some(w),
            Err(p) => Some(json!({ "index": i, "panic": panic_message(p) })),
        })
        .collect();
    finish(name.into(), items.len(), failures, start)
}

/// A check over a fixed set of instances computed inside f, which returns how many it saw.
pub(crate) fn check_once(name: impl Into<String>, f: impl FnOnce() -> Result<usize, Value>) -> Check {
    let start = Instant::now();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(n)) => finish(name.into(), n, Vec::new(), start),
        Ok(Err(w)) => finish(name.into(), 1, vec![w], start),
        Err(p) => finish(name.into(), 1, vec![json!({ "panic": panic_message(p) })], start),
    }
}

fn dispatch(ctx: &Ctx, suite: &str, report: &mut Report) {
    match suite {
        "dims" => cohomology::dims(ctx, report),
        "decomposition" => cohomology::decomposition(ctx, report),
        "duality" => cohomology::duality(ctx, report),
        "functoriality" => cohomology::functoriality(ctx, report),
        "nori-end" => nori::nori_end(ctx, report),
        "coalgebra" => nori::coalgebra(ctx, report),
        "lemma" => nori::lemma(ctx, report),
        "ayoub" => nori::ayoub(ctx, report),
        "laumon-compat" => laumon::compat(ctx, report),
        "filtration" => laumon::filtration(ctx, report),
        _ => unreachable!("suite names are validated before dispatch"),
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report, SuiteError> {
    let ctx = Ctx::new(cfg)?;
    run_with(&ctx, name)
}

pub fn run_with(ctx: &Ctx, name: &str) -> Result<Report, SuiteError> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(SuiteError::Unknown(n.to_string(), SUITES.join(", "))),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads_from_env().unwrap_or(0)).build().map_err(|e| SuiteError::Pool(e.to_string()))?;
    let mut report = Report::new(name, &ctx.cfg);
    for c in &ctx.corpora {
        if c.is_empty() {
            report.warnings.push(format!("corpus over {} is empty: corpus-driven checks pass vacuously", c.field_name()));
        }
    }
    pool.install(|| {
        for n in names {
            dispatch(ctx, n, &mut report);
        }
    });
    Ok(report)
}

/// "suite/what [field]"
pub(crate) fn label(suite: &str, what: &str, corpus: &Corpus) -> String {
    format!("{}/{} [{}]", suite, what, corpus.field_name())
}
