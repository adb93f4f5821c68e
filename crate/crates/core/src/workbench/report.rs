use indexmap::IndexMap;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Hex SHA-256 of an input's text.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    /// A normal form; for rewriting engines, a constructor term.
    NormalForm,
    /// A rewriting normal form that still contains a function symbol.
    Stuck,
    BudgetExhausted,
}

impl OutcomeKind {
    pub fn terminated(self) -> bool {
        self != OutcomeKind::BudgetExhausted
    }
}

/// One engine's run.
#[derive(Debug, Clone, Serialize)]
pub struct EngineRun {
    pub engine: String,
    pub outcome: OutcomeKind,
    pub steps: u64,
    /// The final term, printed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    /// Node count after each step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_series: Option<Vec<usize>>,
    /// Total node visits of search and firing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_visits: Option<u64>,
    /// Whether the graph's unfolding was computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unfolded: Option<bool>,
    #[serde(skip)]
    pub millis: f64,
}

impl EngineRun {
    pub fn new(engine: &str, outcome: OutcomeKind, steps: u64) -> EngineRun {
        EngineRun {
            engine: engine.to_string(),
            outcome,
            steps,
            result: None,
            size_series: None,
            node_visits: None,
            unfolded: None,
            millis: 0.0,
        }
    }

    pub fn terminated(&self) -> bool {
        self.outcome.terminated()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRelation {
    pub left: String,
    pub right: String,
    /// `left_steps / right_steps`, absent when `right_steps` is zero.
    pub ratio: Option<f64>,
    pub left_steps: u64,
    pub right_steps: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl TheoremCheck {
    pub fn new(name: &str, holds: bool, detail: impl Into<String>) -> TheoremCheck {
        TheoremCheck {
            name: name.to_string(),
            holds,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CostReport {
    pub schema: u32,
    pub command: String,
    pub input: String,
    pub digest: String,
    pub runs: Vec<EngineRun>,
    pub relations: Vec<StepRelation>,
    pub theorems: Vec<TheoremCheck>,
    /// Wall time per engine in milliseconds; the only nondeterministic part.
    pub timing: IndexMap<String, f64>,
}

impl CostReport {
    pub fn new(command: &str, input: &str, text: &str) -> CostReport {
        CostReport {
            schema: 1,
            command: command.to_string(),
            input: input.to_string(),
            digest: digest(text),
            runs: Vec::new(),
            relations: Vec::new(),
            theorems: Vec::new(),
            timing: IndexMap::new(),
        }
    }

    pub fn push_run(&mut self, run: EngineRun) {
        let mut key = run.engine.clone();
        let mut k = 1;
        while self.timing.contains_key(&key) {
            k += 1;
            key = format!("{}#{k}", run.engine);
        }
        self.timing.insert(key, run.millis);
        self.runs.push(run);
    }

    pub fn run(&self, engine: &str) -> Option<&EngineRun> {
        self.runs.iter().find(|r| r.engine == engine)
    }

    /// Records `left / right` when both runs exist.
    pub fn relate(&mut self, left: &str, right: &str) {
        let (Some(l), Some(r)) = (self.run(left), self.run(right)) else {
            return;
        };
        let rel = StepRelation {
            left: left.to_string(),
            right: right.to_string(),
            ratio: (r.steps > 0).then(|| l.steps as f64 / r.steps as f64),
            left_steps: l.steps,
            right_steps: r.steps,
        };
        self.relations.push(rel);
    }

    pub fn check(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.theorems.push(TheoremCheck::new(name, holds, detail));
    }

    /// True iff no theorem check failed.
    pub fn all_hold(&self) -> bool {
        self.theorems.iter().all(|t| t.holds)
    }

    /// Appends the checks and runs of `other`, e.g. one report per term of a
    /// rewrite system file.
    pub fn absorb(&mut self, other: CostReport) {
        for run in other.runs {
            self.push_run(run);
        }
        self.relations.extend(other.relations);
        self.theorems.extend(other.theorems);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// The JSON without the `timing` object.
    pub fn to_json_untimed(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
    }
}
