use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::crs::{parse_system, reduce_crs, CrsOutcome, Document, NormalKind, TextError};
use crate::lambda::{parse_term, reduce, Outcome, ParseError, Strategy, Term};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Lambda { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    System { path: PathBuf, source: TextError },
}

/// The λ-terms under `lambda/*.lam` and the rewrite systems under
/// `crs/*.trs` of a corpus directory, each sorted by file name.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub lambda: Vec<(PathBuf, Term)>,
    pub systems: Vec<(PathBuf, Document)>,
}

fn files(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, CorpusError> {
    let io = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Corpus {
    pub fn load(root: &Path) -> Result<Corpus, CorpusError> {
        let mut corpus = Corpus::default();
        for path in files(&root.join("lambda"), "lam")? {
            let term = parse_term(&read(&path)?).map_err(|source| CorpusError::Lambda {
                path: path.clone(),
                source,
            })?;
            corpus.lambda.push((path, term));
        }
        for path in files(&root.join("crs"), "trs")? {
            let doc = parse_system(&read(&path)?).map_err(|source| CorpusError::System {
                path: path.clone(),
                source,
            })?;
            corpus.systems.push((path, doc));
        }
        Ok(corpus)
    }
}

/// `dir/name.lam` ↦ `dir/name.expect.json`.
pub fn expectation_path(path: &Path) -> PathBuf {
    path.with_extension("expect.json")
}

fn lambda_entry(term: &Term, strategy: Strategy, budget: u64) -> Value {
    let r = reduce(term, strategy, budget);
    let outcome = match r.outcome {
        Outcome::NormalForm(_) => "normal_form",
        Outcome::BudgetExhausted(_) => "budget_exhausted",
    };
    json!({
        "outcome": outcome,
        "steps": r.steps,
        "result": r.outcome.term().to_string(),
    })
}

/// Expected call-by-value and call-by-name results of a λ-term, computed
/// by the reference reducers.
pub fn lambda_expectation(term: &Term, budget: u64) -> String {
    let v = json!({
        "schema": 1,
        "budget": budget,
        "lambda-cbv": lambda_entry(term, Strategy::Cbv, budget),
        "lambda-cbn": lambda_entry(term, Strategy::Cbn, budget),
    });
    serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
}

/// Expected leftmost-innermost results of every term of a system file.
pub fn system_expectation(doc: &Document, budget: u64) -> String {
    let terms: Vec<Value> = doc
        .terms
        .iter()
        .map(|t| {
            let r = reduce_crs(&doc.system, t, budget);
            let outcome = match r.outcome {
                CrsOutcome::NormalForm(_, NormalKind::ConstructorTerm) => "normal_form",
                CrsOutcome::NormalForm(_, NormalKind::Stuck) => "stuck",
                CrsOutcome::BudgetExhausted(_) => "budget_exhausted",
            };
            json!({
                "term": t.to_string(),
                "outcome": outcome,
                "steps": r.steps,
                "result": r.outcome.term().to_string(),
            })
        })
        .collect();
    let v = json!({ "schema": 1, "budget": budget, "crs": terms });
    serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
}
