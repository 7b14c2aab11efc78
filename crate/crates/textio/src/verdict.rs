//! Key-value verdict reports: one `key value` pair per line, in order.
//!
//! This is the textual result format of the command-line tools; keeping it
//! parseable makes reports diffable and machine-checkable.

use crate::diag::{is_identifier, tokenize, Diagnostic, SourceSpan};
use std::fmt;

/// An ordered list of `(key, value)` report entries.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Verdict {
    entries: Vec<(String, String)>,
}

impl Verdict {
    pub fn new() -> Self {
        Verdict::default()
    }

    /// Appends an entry. Keys must be identifiers; values must be single
    /// whitespace-free tokens (rationals, names, `inf`, `yes`/`no`, paths).
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        assert!(is_identifier(key), "verdict key `{key}` must be an identifier");
        let v = value.to_string();
        assert!(
            !v.is_empty() && !v.contains(char::is_whitespace),
            "verdict value `{v}` must be one token"
        );
        self.entries.push((key.to_string(), v));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

pub fn serialize_verdict(v: &Verdict) -> String {
    let mut out = String::new();
    for (k, val) in &v.entries {
        out.push_str(&format!("{} {}\n", k, val));
    }
    out
}

pub fn parse_verdict(text: &str, file: &str) -> Result<Verdict, Vec<Diagnostic>> {
    let mut errs = Vec::new();
    let mut v = Verdict::new();
    for (li, line) in text.lines().enumerate() {
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let at = |col: u32| SourceSpan::new(file, (li + 1) as u32, col);
        if toks.len() != 2 {
            errs.push(Diagnostic::new(at(toks[0].column), "expected `key value`"));
            continue;
        }
        if !is_identifier(toks[0].text) {
            errs.push(Diagnostic::new(
                at(toks[0].column),
                format!("key `{}` is not an identifier", toks[0].text),
            ));
            continue;
        }
        v.entries.push((toks[0].text.to_string(), toks[1].text.to_string()));
    }
    if errs.is_empty() {
        Ok(v)
    } else {
        Err(errs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_round_trips() {
        let mut v = Verdict::new();
        v.push("decision", "yes");
        v.push("nu_star", core_model::Rational::from_int(3));
        v.push("expectation", core_model::Rational::new(5, 3));
        let text = serialize_verdict(&v);
        assert_eq!(text, "decision yes\nnu_star 3\nexpectation 5/3\n");
        assert_eq!(parse_verdict(&text, "v").unwrap(), v);
        assert_eq!(v.get("nu_star"), Some("3"));
        assert_eq!(v.get("absent"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        let errs = parse_verdict("just-one-token\n", "v").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("expected `key value`"));
    }
}
