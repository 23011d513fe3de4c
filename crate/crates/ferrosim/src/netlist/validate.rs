//! Connectivity diagnostics: advisory checks that do not block parsing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::types::{ElementKind, Netlist};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// No element touches node `0`.
    NoGround,
    /// Node touched by exactly one element terminal.
    DanglingNode(String),
    /// Both FTJ terminals are capacitively isolated from every source and
    /// from ground, so no programming stimulus can reach the device.
    FtjNoDcPath(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoGround => write!(f, "no ground reference (node 0) in the netlist"),
            Diagnostic::DanglingNode(n) => write!(f, "node `{n}` is touched by only one terminal"),
            Diagnostic::FtjNoDcPath(e) => {
                write!(f, "FTJ `{e}` has no DC path to any source for programming")
            }
        }
    }
}

/// Flags structural problems; an empty list means the netlist is clean.
pub fn validate_netlist(netlist: &Netlist) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut touch_count: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &netlist.elements {
        for node in &e.nodes {
            *touch_count.entry(node.as_str()).or_default() += 1;
        }
    }
    if !touch_count.contains_key("0") {
        out.push(Diagnostic::NoGround);
    }
    for (node, count) in &touch_count {
        if *node != "0" && *count == 1 {
            out.push(Diagnostic::DanglingNode(node.to_string()));
        }
    }

    // DC-conduction graph: R, V, MOSFET channel (d-s), and FTJs themselves.
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut driven: BTreeSet<&str> = BTreeSet::new();
    driven.insert("0");
    for e in &netlist.elements {
        match &e.kind {
            ElementKind::Resistor(_) | ElementKind::Ftj(_) => {
                adj.entry(&e.nodes[0]).or_default().push(&e.nodes[1]);
                adj.entry(&e.nodes[1]).or_default().push(&e.nodes[0]);
            }
            ElementKind::Vsource(_) => {
                adj.entry(&e.nodes[0]).or_default().push(&e.nodes[1]);
                adj.entry(&e.nodes[1]).or_default().push(&e.nodes[0]);
                driven.insert(&e.nodes[0]);
                driven.insert(&e.nodes[1]);
            }
            ElementKind::Mosfet { .. } => {
                // Channel between drain (0) and source (2).
                adj.entry(&e.nodes[0]).or_default().push(&e.nodes[2]);
                adj.entry(&e.nodes[2]).or_default().push(&e.nodes[0]);
            }
            ElementKind::Capacitor { .. } => {}
        }
    }
    let reaches_driven = |start: &str| -> bool {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            if driven.contains(node) {
                return true;
            }
            if !seen.insert(node) {
                continue;
            }
            if let Some(neigh) = adj.get(node) {
                stack.extend(neigh.iter().copied());
            }
        }
        false
    };
    for e in &netlist.elements {
        if let ElementKind::Ftj(_) = e.kind {
            if !reaches_driven(&e.nodes[0]) && !reaches_driven(&e.nodes[1]) {
                out.push(Diagnostic::FtjNoDcPath(e.name.clone()));
            }
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_netlist;

    #[test]
    fn missing_ground_flagged() {
        let n = parse_netlist("t\nR1 a b 1k\nR2 b a 1k\n.end").unwrap();
        let diags = validate_netlist(&n);
        assert!(diags.contains(&Diagnostic::NoGround));
    }

    #[test]
    fn single_resistor_dangles_twice() {
        let n = parse_netlist("t\nR1 n1 n2 1k\n.end").unwrap();
        let diags = validate_netlist(&n);
        assert!(diags.contains(&Diagnostic::DanglingNode("n1".into())));
        assert!(diags.contains(&Diagnostic::DanglingNode("n2".into())));
    }

    #[test]
    fn clean_divider_has_no_diagnostics() {
        let n = parse_netlist("t\nV1 in 0 DC 1\nR1 in mid 1k\nR2 mid 0 1k\n.end").unwrap();
        assert!(validate_netlist(&n).is_empty());
    }

    #[test]
    fn capacitively_isolated_ftj_flagged() {
        let n = parse_netlist(
            "t\nV1 in 0 DC 1\nC1 in a 1p\nF1 a b VARIANT=A\nC2 b 0 1p\n.end",
        )
        .unwrap();
        let diags = validate_netlist(&n);
        assert!(diags.contains(&Diagnostic::FtjNoDcPath("f1".into())));
    }

    #[test]
    fn ftj_with_one_driven_side_is_fine() {
        // Matches the 2T1C shape: the internal node is capacitive, the top
        // side reaches a source through the access transistor channel.
        let n = parse_netlist(
            "t\n.model nm nmos\nV1 bl 0 DC 1\nVW wl 0 DC 5\nM1 bl wl ft 0 nm\nF1 ft n VARIANT=A\nC1 n 0 2f\nVP plx 0 DC 0\nR1 plx n 1g\n.end",
        )
        .unwrap();
        let diags = validate_netlist(&n);
        assert!(!diags.iter().any(|d| matches!(d, Diagnostic::FtjNoDcPath(_))), "{diags:?}");
    }
}
