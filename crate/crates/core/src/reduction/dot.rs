use std::fmt::Write;

use super::ReductionTree;

/// Graphviz rendering of the resolution: components as boxes labeled
/// `D<j> (<self-intersection>)`, reduced points as ellipses, incidence edges,
/// and bold edges between components meeting at a corner.
pub fn to_dot(tree: &ReductionTree) -> String {
    let components: Vec<(usize, i64)> = tree.components.iter().map(|c| (c.id, c.self_intersection)).collect();
    let points: Vec<(usize, String, Vec<usize>)> = tree
        .points
        .iter()
        .map(|p| (p.id, p.class.label(), p.incident.iter().map(|i| i.component).collect()))
        .collect();
    render_dot(&components, &points)
}

/// Renders components `(id, self-intersection)` and points
/// `(id, label, incident components)`; a point on two components is a corner.
pub(crate) fn render_dot(components: &[(usize, i64)], points: &[(usize, String, Vec<usize>)]) -> String {
    let mut s = String::from("graph reduction {\n");
    for (id, si) in components {
        let _ = writeln!(s, "  D{id} [shape=box, label=\"D{id} ({si})\"];");
    }
    for (id, label, _) in points {
        let _ = writeln!(s, "  P{id} [label=\"P{id}: {}\"];", escape(label));
    }
    for (id, _, incident) in points {
        for c in incident {
            let _ = writeln!(s, "  D{c} -- P{id};");
        }
    }
    for (_, _, incident) in points {
        if let [a, b] = incident.as_slice() {
            let _ = writeln!(s, "  D{} -- D{} [style=bold];", a.min(b), a.max(b));
        }
    }
    s.push_str("}\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
