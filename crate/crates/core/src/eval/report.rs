use std::collections::BTreeMap;
use std::fmt::Write;

/// Outcome of one evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: String,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
    pub train_count: usize,
    pub test_count: usize,
    pub train_fraction: f64,
    pub params: BTreeMap<String, String>,
    pub assignments: Option<Vec<usize>>,
}

impl EvalReport {
    pub fn new(task: &str, seed: u64, metric: &str, value: f64) -> Self {
        EvalReport {
            task: task.to_string(),
            seed,
            metric: metric.to_string(),
            value,
            train_count: 0,
            test_count: 0,
            train_fraction: 0.0,
            params: BTreeMap::new(),
            assignments: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Flat `key=value` block, one entry per line. Parameters are prefixed `param.`.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "task={}", self.task);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "metric={}", self.metric);
        let _ = writeln!(out, "value={}", self.value);
        let _ = writeln!(out, "train_count={}", self.train_count);
        let _ = writeln!(out, "test_count={}", self.test_count);
        let _ = writeln!(out, "train_fraction={}", self.train_fraction);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k}={v}");
        }
        if let Some(a) = &self.assignments {
            let joined: Vec<String> = a.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "assignments={}", joined.join(","));
        }
        out
    }

    pub fn csv_header() -> &'static str {
        "task,seed,metric,value,train_count,test_count,train_fraction,params"
    }

    /// One CSV row; parameters are packed as `k=v;k=v` in the last column.
    pub fn csv_row(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.task,
            self.seed,
            self.metric,
            self.value,
            self.train_count,
            self.test_count,
            self.train_fraction,
            params.join(";")
        )
    }
}
