//! Row-level diagnostics, reported as JSON lines.

use std::io::{self, Write};
use std::sync::Mutex;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    MalformedRow,
    UnknownComponent,
    FreeRuleVariable,
    PromotionThresholdWarning,
    UnsupportedOntologyValue,
    DroppedAuxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            file: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, file: Option<&str>, line: usize) -> Self {
        self.file = file.map(str::to_owned);
        self.line = Some(line);
        self
    }

    pub fn to_json_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("diagnostic serializes");
        s.push('\n');
        s
    }
}

/// Where diagnostics go. Writes are serialized; one record per line.
pub struct DiagnosticSink {
    out: Mutex<Box<dyn Write + Send>>,
}

impl DiagnosticSink {
    pub fn new(out: Box<dyn Write + Send>) -> Self {
        DiagnosticSink { out: Mutex::new(out) }
    }

    pub fn stderr() -> Self {
        DiagnosticSink::new(Box::new(io::stderr()))
    }

    pub fn discard() -> Self {
        DiagnosticSink::new(Box::new(io::sink()))
    }

    pub fn emit(&self, d: &Diagnostic) -> io::Result<()> {
        let mut out = self.out.lock().expect("diagnostic sink poisoned");
        out.write_all(d.to_json_line().as_bytes())
    }

    pub fn flush(&self) -> io::Result<()> {
        self.out.lock().expect("diagnostic sink poisoned").flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_line_shape() {
        let d = Diagnostic::new(DiagnosticKind::PromotionThresholdWarning, "p=0.85").at(Some("b.tsv"), 3);
        assert_eq!(
            d.to_json_line(),
            "{\"kind\":\"promotion_threshold_warning\",\"file\":\"b.tsv\",\"line\":3,\"message\":\"p=0.85\"}\n"
        );
    }
}
