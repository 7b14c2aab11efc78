//! DOT rendering: player-1 states as circles, player-2 states as boxes,
//! targets double-bordered, the initial state marked by an arrow from a
//! point node. Chain edges carry `weight;probability` labels.

use core_model::{GameGraph, MarkovChain, Owner};

fn init_marker_name(game: &GameGraph) -> String {
    let mut name = "__init".to_string();
    while game.state_id(&name).is_some() {
        name.push('_');
    }
    name
}

fn header(out: &mut String, game: &GameGraph) {
    out.push_str(&format!("digraph \"{}\" {{\n", game.name()));
    out.push_str("  rankdir=LR;\n");
    let marker = init_marker_name(game);
    out.push_str(&format!("  \"{}\" [shape=point, label=\"\"];\n", marker));
    for s in game.state_ids() {
        let shape = match game.owner(s) {
            Owner::P1 => "circle",
            Owner::P2 => "box",
        };
        let extra = if game.is_target(s) { ", peripheries=2" } else { "" };
        out.push_str(&format!("  \"{}\" [shape={}{}];\n", game.state_name(s), shape, extra));
    }
    out.push_str(&format!(
        "  \"{}\" -> \"{}\";\n",
        marker,
        game.state_name(game.initial())
    ));
}

/// Renders a game; edge labels are the integer weights.
pub fn to_dot(game: &GameGraph) -> String {
    let mut out = String::new();
    header(&mut out, game);
    for s in game.state_ids() {
        for &(t, w) in game.succ(s) {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                game.state_name(s),
                game.state_name(t),
                w
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Renders a chain; edge labels are `weight;probability`.
pub fn chain_to_dot(chain: &MarkovChain) -> String {
    let game = chain.graph();
    let mut out = String::new();
    header(&mut out, game);
    for s in game.state_ids() {
        for &(t, w) in game.succ(s) {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{};{}\"];\n",
                game.state_name(s),
                game.state_name(t),
                w,
                chain.delta(s).prob(t)
            ));
        }
    }
    out.push_str("}\n");
    out
}
