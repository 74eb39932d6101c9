//! Machine-readable output records and the plain/json/csv emitters.
//!
//! The same decimal strings appear in every format, so format choice never
//! changes a value.

use std::io::Write;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Gamma,
    ZetaDeriv,
    IdentityCheck,
    CrossvalCell,
}

impl RecordKind {
    fn as_str(&self) -> &'static str {
        match self {
            RecordKind::Gamma => "gamma",
            RecordKind::ZetaDeriv => "zeta_deriv",
            RecordKind::IdentityCheck => "identity_check",
            RecordKind::CrossvalCell => "crossval_cell",
        }
    }
}

/// One output row. `value` and `error_estimate` are decimal strings at the
/// requested digit count; index fields are filled when relevant.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub kind: RecordKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub value: String,
    pub error_estimate: String,
    pub converged: bool,
}

impl OutputRecord {
    pub fn new(kind: RecordKind, value: String, error_estimate: String, converged: bool) -> Self {
        OutputRecord {
            kind,
            m: None,
            l: None,
            method: None,
            lambda: None,
            u: None,
            label: None,
            value,
            error_estimate,
            converged,
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m as u64);
        self
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = Some(l as u64);
        self
    }

    pub fn with_method(mut self, method: impl Into<String>) -> Self {
        self.method = Some(method.into());
        self
    }

    pub fn with_lambda(mut self, lambda: impl Into<String>) -> Self {
        self.lambda = Some(lambda.into());
        self
    }

    pub fn with_u(mut self, u: impl Into<String>) -> Self {
        self.u = Some(u.into());
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// Row shape used for CSV so that absent fields serialize as empty cells
/// in a fixed column order.
#[derive(Serialize)]
struct CsvRow<'a> {
    kind: &'a str,
    m: String,
    l: String,
    method: String,
    lambda: String,
    u: String,
    label: String,
    value: &'a str,
    error_estimate: &'a str,
    converged: bool,
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn emit(records: &[OutputRecord], format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Plain => {
            for r in records {
                let mut line = String::from(r.kind.as_str());
                if let Some(m) = r.m {
                    line.push_str(&format!(" m={m}"));
                }
                if let Some(l) = r.l {
                    line.push_str(&format!(" l={l}"));
                }
                if let Some(method) = &r.method {
                    line.push_str(&format!(" method={method}"));
                }
                if let Some(lambda) = &r.lambda {
                    line.push_str(&format!(" lambda={lambda}"));
                }
                if let Some(u) = &r.u {
                    line.push_str(&format!(" u={u}"));
                }
                if let Some(label) = &r.label {
                    line.push_str(&format!(" label={label}"));
                }
                line.push_str(&format!(
                    " value={} error={} converged={}",
                    r.value, r.error_estimate, r.converged
                ));
                writeln!(out, "{line}")?;
            }
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(records).expect("serialize records");
            writeln!(out, "{text}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            for r in records {
                w.serialize(CsvRow {
                    kind: r.kind.as_str(),
                    m: opt_str(&r.m),
                    l: opt_str(&r.l),
                    method: opt_str(&r.method),
                    lambda: opt_str(&r.lambda),
                    u: opt_str(&r.u),
                    label: opt_str(&r.label),
                    value: &r.value,
                    error_estimate: &r.error_estimate,
                    converged: r.converged,
                })
                .expect("serialize csv row");
            }
            let bytes = w.into_inner().expect("flush csv");
            out.write_all(&bytes)?;
        }
    }
    Ok(())
}
