//! The example corpus: one `key = value` file per equation, embedded at build time.

use crate::error::{CliError, Result};

const FILES: [(&str, &str); 9] = [
    ("eq38", include_str!("../corpus/eq38.txt")),
    ("ex4", include_str!("../corpus/ex4.txt")),
    ("ex5", include_str!("../corpus/ex5.txt")),
    ("kamke-542", include_str!("../corpus/kamke-542.txt")),
    ("painleve-ince-V", include_str!("../corpus/painleve-ince-V.txt")),
    ("painleve-ince-XIV", include_str!("../corpus/painleve-ince-XIV.txt")),
    ("painleve-ince-XV", include_str!("../corpus/painleve-ince-XV.txt")),
    ("painleve-ince-XVI", include_str!("../corpus/painleve-ince-XVI.txt")),
    ("vlr2", include_str!("../corpus/vlr2.txt")),
];

/// A known λ-symmetry given with its own λ.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownSymmetry {
    pub tau: String,
    pub eta: String,
    pub lambda: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub t1: String,
    pub y1: String,
    pub rhs: String,
}

/// Initial data for the numeric drift check; the window is one time unit.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftCase {
    pub bindings: Vec<String>,
    pub ic: (f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub ode_text: String,
    pub expected_lambda: String,
    /// (tau, eta) pairs that are λ-symmetries for λ_J.
    pub expected_symmetries: Vec<(String, String)>,
    /// Symmetries with their own λ, each equivalent to the first expected symmetry.
    pub equivalent: Vec<KnownSymmetry>,
    pub expected_integrals: Vec<String>,
    pub basis_hints: Vec<String>,
    pub invariant_hints: Vec<String>,
    pub window: i32,
    pub reduction: Option<Reduction>,
    pub drift: Option<DriftCase>,
}

/// Splits at commas outside parentheses.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur.trim().to_string());
    out
}

fn fields<const N: usize>(id: &str, key: &str, value: &str) -> Result<[String; N]> {
    let parts = split_top_level(value);
    parts.try_into().map_err(|p: Vec<String>| CliError::CorpusParse {
        id: id.to_string(),
        message: format!("`{key}` needs {N} comma-separated fields, found {}", p.len()),
    })
}

pub fn parse_floats(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl CorpusEntry {
    pub fn parse(text: &str) -> Result<CorpusEntry> {
        let mut e = CorpusEntry {
            id: String::new(),
            ode_text: String::new(),
            expected_lambda: String::new(),
            expected_symmetries: Vec::new(),
            equivalent: Vec::new(),
            expected_integrals: Vec::new(),
            basis_hints: Vec::new(),
            invariant_hints: Vec::new(),
            window: crate::DEFAULT_WINDOW,
            reduction: None,
            drift: None,
        };
        let mut bindings = Vec::new();
        let mut ic = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::CorpusParse {
                id: e.id.clone(),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim().to_string());
            match key {
                "id" => e.id = value,
                "ode" => e.ode_text = value,
                "lambda" => e.expected_lambda = value,
                "symmetry" => {
                    let [tau, eta] = fields(&e.id, key, &value)?;
                    e.expected_symmetries.push((tau, eta));
                }
                "equivalent" => {
                    let [tau, eta, lambda] = fields(&e.id, key, &value)?;
                    e.equivalent.push(KnownSymmetry { tau, eta, lambda });
                }
                "integral" => e.expected_integrals.push(value),
                "hint" => e.basis_hints.push(value),
                "invariant_hint" => e.invariant_hints.push(value),
                "window" => {
                    e.window = value
                        .parse()
                        .map_err(|_| err(format!("window `{value}` is not an integer")))?
                }
                "reduction" => {
                    let [t1, y1, rhs] = fields(&e.id, key, &value)?;
                    e.reduction = Some(Reduction { t1, y1, rhs });
                }
                "bind" => bindings.push(value),
                "ic" => match parse_floats(&value).as_deref() {
                    Some(&[t0, y0, yp0]) => ic = Some((t0, y0, yp0)),
                    _ => return Err(err(format!("ic `{value}` needs three numbers"))),
                },
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        if e.id.is_empty() || e.ode_text.is_empty() || e.expected_lambda.is_empty() {
            return Err(CliError::CorpusParse {
                id: e.id,
                message: "`id`, `ode` and `lambda` are required".into(),
            });
        }
        if let Some(ic) = ic {
            e.drift = Some(DriftCase { bindings, ic });
        }
        Ok(e)
    }
}

/// All entries, sorted by id.
pub fn entries() -> Result<Vec<CorpusEntry>> {
    FILES.iter().map(|(_, text)| CorpusEntry::parse(text)).collect()
}

pub fn entry(id: &str) -> Result<CorpusEntry> {
    let (_, text) = FILES
        .iter()
        .find(|(name, _)| *name == id)
        .ok_or_else(|| CliError::CorpusParse {
            id: id.to_string(),
            message: "no such corpus entry".into(),
        })?;
    CorpusEntry::parse(text)
}

pub fn ids() -> Vec<&'static str> {
    FILES.iter().map(|(id, _)| *id).collect()
}
