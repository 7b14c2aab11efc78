//! The `.bwcm` machine format, for stochastic models and strategies alike.
//!
//! ```text
//! model <name>
//! mem <id>             # one per memory element, in order
//! init <id>
//! update <mem> <state> <mem>
//! next <mem> <state> <dst> <p/q>
//! ```
//!
//! States refer to a game parsed beforehand. Each `(mem, state)` group of
//! `next` rows must sum to exactly 1; update rows must be deterministic.
//! Totality over reachable pairs is a per-role concern checked at instance
//! assembly, not here.

use crate::diag::{is_identifier, tokenize, Diagnostic, SourceSpan};
use core_model::{GameGraph, MachineBuilder, MemId, MooreMachine, Owner, Rational, StateId};
use std::collections::BTreeMap;

pub fn parse_machine(
    text: &str,
    file: &str,
    game: &GameGraph,
) -> Result<MooreMachine, Vec<Diagnostic>> {
    let mut errs: Vec<Diagnostic> = Vec::new();
    let mut name: Option<&str> = None;
    let mut mems: Vec<(&str, SourceSpan)> = Vec::new();
    let mut init: Option<(&str, SourceSpan)> = None;
    let mut updates: Vec<(&str, &str, &str, SourceSpan)> = Vec::new();
    let mut nexts: Vec<(&str, &str, &str, Rational, SourceSpan)> = Vec::new();
    let mut first_directive = true;
    for (li, line) in text.lines().enumerate() {
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let at = |col: u32| SourceSpan::new(file, (li + 1) as u32, col);
        let head = toks[0];
        if first_directive {
            first_directive = false;
            if head.text != "model" {
                errs.push(Diagnostic::new(at(head.column), "first directive must be `model <name>`"));
            }
        }
        match head.text {
            "model" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `model <name>`"));
                } else if name.is_some() {
                    errs.push(Diagnostic::new(at(head.column), "duplicate `model` header"));
                } else if !is_identifier(toks[1].text) {
                    errs.push(Diagnostic::new(
                        at(toks[1].column),
                        format!("model name `{}` is not an identifier", toks[1].text),
                    ));
                } else {
                    name = Some(toks[1].text);
                }
            }
            "mem" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `mem <id>`"));
                } else if !is_identifier(toks[1].text) {
                    errs.push(Diagnostic::new(
                        at(toks[1].column),
                        format!("memory name `{}` is not an identifier", toks[1].text),
                    ));
                } else {
                    mems.push((toks[1].text, at(toks[1].column)));
                }
            }
            "init" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `init <id>`"));
                } else if init.is_some() {
                    errs.push(Diagnostic::new(at(head.column), "duplicate `init` directive"));
                } else {
                    init = Some((toks[1].text, at(toks[1].column)));
                }
            }
            "update" => {
                if toks.len() != 4 {
                    errs.push(Diagnostic::new(
                        at(head.column),
                        "expected `update <mem> <state> <mem>`",
                    ));
                } else {
                    updates.push((toks[1].text, toks[2].text, toks[3].text, at(head.column)));
                }
            }
            "next" => {
                if toks.len() != 5 {
                    errs.push(Diagnostic::new(
                        at(head.column),
                        "expected `next <mem> <state> <dst> <p/q>`",
                    ));
                    continue;
                }
                match toks[4].text.parse::<Rational>() {
                    Ok(p) if !p.is_negative() && p <= Rational::one() => {
                        nexts.push((toks[1].text, toks[2].text, toks[3].text, p, at(head.column)));
                    }
                    Ok(p) => errs.push(Diagnostic::new(
                        at(toks[4].column),
                        format!("probability {} is outside [0, 1]", p),
                    )),
                    Err(_) => errs.push(Diagnostic::new(
                        at(toks[4].column),
                        format!("malformed probability `{}`", toks[4].text),
                    )),
                }
            }
            other => errs.push(Diagnostic::new(
                at(head.column),
                format!("unknown directive `{}`", other),
            )),
        }
    }
    if name.is_none() && errs.is_empty() {
        errs.push(Diagnostic::new(SourceSpan::new(file, 1, 1), "missing `model` header"));
    }

    let mut b = MachineBuilder::new(name.unwrap_or("invalid"));
    let mut mem_ids: BTreeMap<&str, MemId> = BTreeMap::new();
    for (m, span) in &mems {
        match b.memory(m) {
            Ok(id) => {
                mem_ids.insert(m, id);
            }
            Err(_) => errs.push(Diagnostic::new(span.clone(), format!("duplicate memory `{}`", m))),
        }
    }
    let lookup_mem = |mems: &BTreeMap<&str, MemId>, n: &str, span: &SourceSpan, errs: &mut Vec<Diagnostic>| {
        let id = mems.get(n).copied();
        if id.is_none() {
            errs.push(Diagnostic::new(span.clone(), format!("undeclared memory `{}`", n)));
        }
        id
    };
    let lookup_state = |n: &str, span: &SourceSpan, errs: &mut Vec<Diagnostic>| {
        let id = game.state_id(n);
        if id.is_none() {
            errs.push(Diagnostic::new(span.clone(), format!("unknown game state `{}`", n)));
        }
        id
    };
    match &init {
        Some((n, span)) => {
            if lookup_mem(&mem_ids, n, span, &mut errs).is_some() {
                b.init(n).expect("declared");
            }
        }
        None => {
            if name.is_some() {
                errs.push(Diagnostic::new(SourceSpan::new(file, 1, 1), "missing `init` directive"));
            }
        }
    }
    let mut update_seen: BTreeMap<(MemId, StateId), &str> = BTreeMap::new();
    for (m, s, m2, span) in &updates {
        let (mi, si, ni) = (
            lookup_mem(&mem_ids, m, span, &mut errs),
            lookup_state(s, span, &mut errs),
            lookup_mem(&mem_ids, m2, span, &mut errs),
        );
        if let (Some(mi), Some(si), Some(ni)) = (mi, si, ni) {
            if let Some(prev) = update_seen.insert((mi, si), m2) {
                if prev != *m2 {
                    errs.push(Diagnostic::new(
                        span.clone(),
                        format!("non-deterministic update for ({}, {})", m, s),
                    ));
                    continue;
                }
            }
            b.update_id(mi, si, ni);
        }
    }
    let mut groups: BTreeMap<(MemId, StateId), (Rational, SourceSpan, String, String)> = BTreeMap::new();
    let mut entry_seen: BTreeMap<(MemId, StateId, StateId), ()> = BTreeMap::new();
    for (m, s, d, p, span) in &nexts {
        let (mi, si, di) = (
            lookup_mem(&mem_ids, m, span, &mut errs),
            lookup_state(s, span, &mut errs),
            lookup_state(d, span, &mut errs),
        );
        if let (Some(mi), Some(si), Some(di)) = (mi, si, di) {
            if game.edge_weight(si, di).is_none() {
                errs.push(Diagnostic::new(
                    span.clone(),
                    format!("support outside successors: no edge `{}` -> `{}`", s, d),
                ));
                continue;
            }
            if entry_seen.insert((mi, si, di), ()).is_some() {
                errs.push(Diagnostic::new(
                    span.clone(),
                    format!("duplicate `next` row for ({}, {}, {})", m, s, d),
                ));
                continue;
            }
            b.output_entry(mi, si, di, p.clone());
            let g = groups.entry((mi, si)).or_insert_with(|| {
                (Rational::zero(), span.clone(), m.to_string(), s.to_string())
            });
            g.0 = &g.0 + p;
        }
    }
    for ((_, _), (sum, span, m, s)) in &groups {
        if *sum != Rational::one() {
            errs.push(Diagnostic::new(
                span.clone(),
                format!("distribution for ({}, {}) sums to {}, expected 1", m, s, sum),
            ));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    match b.finish() {
        Ok(machine) => Ok(machine),
        Err(e) => Err(vec![Diagnostic::new(SourceSpan::new(file, 1, 1), e.to_string())]),
    }
}

/// Renders a machine in the `.bwcm` grammar; parsing the result against the
/// same game reproduces the machine structurally.
pub fn serialize_machine(machine: &MooreMachine, game: &GameGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", machine.name()));
    for m in machine.mem_ids() {
        out.push_str(&format!("mem {}\n", machine.mem_name(m)));
    }
    out.push_str(&format!("init {}\n", machine.mem_name(machine.initial_memory())));
    for (m, s, m2) in machine.update_rows() {
        out.push_str(&format!(
            "update {} {} {}\n",
            machine.mem_name(m),
            game.state_name(s),
            machine.mem_name(m2)
        ));
    }
    for (m, s, dist) in machine.output_rows() {
        for (d, p) in dist.entries() {
            out.push_str(&format!(
                "next {} {} {} {}\n",
                machine.mem_name(m),
                game.state_name(s),
                game.state_name(*d),
                p
            ));
        }
    }
    out
}
