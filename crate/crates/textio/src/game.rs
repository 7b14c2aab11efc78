//! The `.bwcg` game format.
//!
//! ```text
//! game <name>
//! state <id> p1|p2
//! edge <src> <dst> <integer-weight>
//! init <id>
//! target <id>          # zero or more
//! ```

use crate::diag::{is_identifier, tokenize, Diagnostic, SourceSpan};
use core_model::{validate, GameBuilder, GameGraph, Owner, Violation};
use std::collections::BTreeMap;

/// What to do with several edges over one ordered state pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MultiEdges {
    /// Report a duplicate-edge diagnostic.
    #[default]
    Reject,
    /// Split every edge in two, copying its weight onto both halves, which
    /// keeps all mean-payoff values intact (paths double in both length and
    /// total weight). Applied only when a duplicate pair is present.
    Split,
}

struct RawGame<'a> {
    name: Option<&'a str>,
    states: Vec<(&'a str, Owner, SourceSpan)>,
    edges: Vec<(&'a str, &'a str, i64, SourceSpan)>,
    init: Option<(&'a str, SourceSpan)>,
    targets: Vec<(&'a str, SourceSpan)>,
}

/// Parses a game, rejecting duplicate edges.
pub fn parse_game(text: &str, file: &str) -> Result<GameGraph, Vec<Diagnostic>> {
    parse_game_with(text, file, MultiEdges::Reject)
}

/// Parses a game with an explicit duplicate-edge policy.
pub fn parse_game_with(
    text: &str,
    file: &str,
    policy: MultiEdges,
) -> Result<GameGraph, Vec<Diagnostic>> {
    let mut errs: Vec<Diagnostic> = Vec::new();
    let mut raw = RawGame { name: None, states: Vec::new(), edges: Vec::new(), init: None, targets: Vec::new() };
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
            if head.text != "game" {
                errs.push(Diagnostic::new(at(head.column), "first directive must be `game <name>`"));
            }
        }
        let ident = |tok: &crate::diag::Token, what: &str, errs: &mut Vec<Diagnostic>| {
            if !is_identifier(tok.text) {
                errs.push(Diagnostic::new(
                    at(tok.column),
                    format!("{} `{}` is not an identifier", what, tok.text),
                ));
                false
            } else {
                true
            }
        };
        match head.text {
            "game" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `game <name>`"));
                    continue;
                }
                if raw.name.is_some() {
                    errs.push(Diagnostic::new(at(head.column), "duplicate `game` header"));
                } else if ident(&toks[1], "game name", &mut errs) {
                    raw.name = Some(toks[1].text);
                }
            }
            "state" => {
                if toks.len() != 3 {
                    errs.push(Diagnostic::new(at(head.column), "expected `state <id> p1|p2`"));
                    continue;
                }
                let owner = match toks[2].text {
                    "p1" => Owner::P1,
                    "p2" => Owner::P2,
                    other => {
                        errs.push(Diagnostic::new(
                            at(toks[2].column),
                            format!("owner must be `p1` or `p2`, found `{}`", other),
                        ));
                        continue;
                    }
                };
                if ident(&toks[1], "state name", &mut errs) {
                    raw.states.push((toks[1].text, owner, at(toks[1].column)));
                }
            }
            "edge" => {
                if toks.len() != 4 {
                    errs.push(Diagnostic::new(at(head.column), "expected `edge <src> <dst> <weight>`"));
                    continue;
                }
                let ok =
                    ident(&toks[1], "source", &mut errs) & ident(&toks[2], "destination", &mut errs);
                match toks[3].text.parse::<i64>() {
                    Ok(w) if ok => raw.edges.push((toks[1].text, toks[2].text, w, at(head.column))),
                    Ok(_) => {}
                    Err(_) => errs.push(Diagnostic::new(
                        at(toks[3].column),
                        format!("non-integer weight `{}`", toks[3].text),
                    )),
                }
            }
            "init" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `init <id>`"));
                    continue;
                }
                if raw.init.is_some() {
                    errs.push(Diagnostic::new(at(head.column), "duplicate `init` directive"));
                } else if ident(&toks[1], "initial state", &mut errs) {
                    raw.init = Some((toks[1].text, at(toks[1].column)));
                }
            }
            "target" => {
                if toks.len() != 2 {
                    errs.push(Diagnostic::new(at(head.column), "expected `target <id>`"));
                    continue;
                }
                if ident(&toks[1], "target state", &mut errs) {
                    raw.targets.push((toks[1].text, at(toks[1].column)));
                }
            }
            other => {
                errs.push(Diagnostic::new(
                    at(head.column),
                    format!("unknown directive `{}`", other),
                ));
            }
        }
    }
    if raw.name.is_none() && errs.is_empty() {
        errs.push(Diagnostic::new(SourceSpan::new(file, 1, 1), "missing `game` header"));
    }
    finish_game(file, raw, policy, errs)
}

fn finish_game(
    file: &str,
    raw: RawGame<'_>,
    policy: MultiEdges,
    mut errs: Vec<Diagnostic>,
) -> Result<GameGraph, Vec<Diagnostic>> {
    let header_span =
        raw.states.first().map(|(_, _, s)| s.clone()).unwrap_or_else(|| SourceSpan::new(file, 1, 1));
    let mut declared: BTreeMap<&str, SourceSpan> = BTreeMap::new();
    for (name, _, span) in &raw.states {
        if declared.insert(name, span.clone()).is_some() {
            errs.push(Diagnostic::new(span.clone(), format!("duplicate state `{}`", name)));
        }
    }
    let mut check_ref = |name: &str, span: &SourceSpan, errs: &mut Vec<Diagnostic>| {
        if !declared.contains_key(name) {
            errs.push(Diagnostic::new(span.clone(), format!("undeclared state `{}`", name)));
        }
    };
    let mut seen_pairs: BTreeMap<(&str, &str), ()> = BTreeMap::new();
    let mut has_duplicate = false;
    for (src, dst, _, span) in &raw.edges {
        check_ref(src, span, &mut errs);
        check_ref(dst, span, &mut errs);
        if seen_pairs.insert((src, dst), ()).is_some() {
            has_duplicate = true;
            if policy == MultiEdges::Reject {
                errs.push(Diagnostic::new(
                    span.clone(),
                    format!("duplicate edge `{}` -> `{}`", src, dst),
                ));
            }
        }
    }
    match &raw.init {
        Some((name, span)) => check_ref(name, span, &mut errs),
        None => {
            if raw.name.is_some() {
                errs.push(Diagnostic::new(header_span.clone(), "missing `init` directive"));
            }
        }
    }
    for (name, span) in &raw.targets {
        check_ref(name, span, &mut errs);
    }
    if !errs.is_empty() {
        return Err(errs);
    }

    let mut b = GameBuilder::new(raw.name.expect("header checked"));
    for (name, owner, _) in &raw.states {
        b.state(name, *owner).expect("duplicates diagnosed");
    }
    for (src, dst, w, _) in &raw.edges {
        b.edge(src, dst, *w).expect("references diagnosed");
    }
    b.init(raw.init.as_ref().expect("missing init diagnosed").0).expect("reference diagnosed");
    for (name, _) in &raw.targets {
        b.target(name).expect("reference diagnosed");
    }
    let mut game = b.finish().expect("init present");
    if has_duplicate && policy == MultiEdges::Split {
        game = split_all_edges(&game);
    }
    for v in validate(&game) {
        let span = match &v {
            Violation::Deadlock(name) => declared.get(name.as_str()).cloned().unwrap_or(header_span.clone()),
            _ => header_span.clone(),
        };
        errs.push(Diagnostic::new(span, v.to_string()));
    }
    if errs.is_empty() {
        Ok(game)
    } else {
        Err(errs)
    }
}

/// Splits every edge `u -w-> v` into `u -w-> d -w-> v` with a fresh
/// pass-through state `d` owned by player 1. Every path doubles in length
/// and total weight, so all mean-payoff values are preserved, and duplicate
/// ordered pairs become distinct.
pub fn split_all_edges(game: &GameGraph) -> GameGraph {
    let mut taken: std::collections::BTreeSet<String> =
        game.state_ids().map(|s| game.state_name(s).to_string()).collect();
    let mut b = GameBuilder::new(game.name());
    for s in game.state_ids() {
        b.state(game.state_name(s), game.owner(s)).expect("unique names");
    }
    let mut counter: BTreeMap<(core_model::StateId, core_model::StateId), u32> = BTreeMap::new();
    for s in game.state_ids() {
        for &(t, w) in game.succ(s) {
            let k = counter.entry((s, t)).or_insert(0);
            *k += 1;
            let mut name = format!("{}.{}.{}", game.state_name(s), game.state_name(t), k);
            while taken.contains(&name) {
                name.push('x');
            }
            taken.insert(name.clone());
            let d = b.state(&name, Owner::P1).expect("fresh name");
            b.edge_ids(s, d, w);
            b.edge_ids(d, t, w);
        }
    }
    b.init_id(game.initial());
    for &t in game.targets() {
        b.target_id(t);
    }
    b.finish().expect("initial present")
}

/// Renders a game in the `.bwcg` grammar; parsing the result reproduces the
/// graph structurally.
pub fn serialize_game(game: &GameGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("game {}\n", game.name()));
    for s in game.state_ids() {
        let owner = match game.owner(s) {
            Owner::P1 => "p1",
            Owner::P2 => "p2",
        };
        out.push_str(&format!("state {} {}\n", game.state_name(s), owner));
    }
    for s in game.state_ids() {
        for &(t, w) in game.succ(s) {
            out.push_str(&format!("edge {} {} {}\n", game.state_name(s), game.state_name(t), w));
        }
    }
    out.push_str(&format!("init {}\n", game.state_name(game.initial())));
    for &t in game.targets() {
        out.push_str(&format!("target {}\n", game.state_name(t)));
    }
    out
}
