use dblcat::double::{Budget, LawOutcome, LawReport};
use serde::Serialize;
use serde_json::Value;

/// Everything a command produced. A report with `passed == true` is exactly
/// one that exits 0.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub kind: String,
    pub seed: u64,
    pub budget: String,
    pub passed: bool,
    pub laws: Vec<LawOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

pub fn describe_budget(b: &Budget) -> String {
    match b {
        Budget::Exhaustive => "exhaustive".into(),
        Budget::Sampled { draws, .. } => format!("sampled({draws})"),
    }
}

impl Report {
    pub fn new(command: &str, inputs: &[String], kind: &str, seed: u64, budget: String) -> Self {
        Self {
            tool: format!("dblcat {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            inputs: inputs.to_vec(),
            kind: kind.into(),
            seed,
            budget,
            passed: true,
            laws: Vec::new(),
            result: None,
            error: None,
            elapsed_ms: None,
            timestamp: None,
        }
    }

    pub fn with_laws(mut self, laws: LawReport) -> Self {
        self.passed &= laws.passed();
        self.laws.extend(laws.outcomes);
        self
    }

    pub fn with_result(mut self, result: Value) -> Self {
        self.result = Some(result);
        self
    }

    pub fn fail(mut self, error: String) -> Self {
        self.passed = false;
        self.error = Some(error);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} [{}] {} (seed {}, budget {})\n",
            self.tool,
            self.command,
            self.kind,
            self.inputs.join(" "),
            self.seed,
            self.budget
        );
        s.push_str(&LawReport { outcomes: self.laws.clone() }.summary());
        if let Some(r) = &self.result {
            s.push_str(&serde_json::to_string_pretty(r).expect("values serialize"));
            s.push('\n');
        }
        if let Some(e) = &self.error {
            s.push_str(&format!("error: {e}\n"));
        }
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("elapsed: {ms} ms\n"));
        }
        if let Some(t) = &self.timestamp {
            s.push_str(&format!("timestamp: {t}\n"));
        }
        s.push_str(if self.passed { "result: PASS\n" } else { "result: FAIL\n" });
        s
    }
}
