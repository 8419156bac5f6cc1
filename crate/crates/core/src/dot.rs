//! Graphviz rendering of interval posets.
//!
//! Intervals are nodes and precision covers are edges, drawn from the
//! coarser interval to the finer one. Degenerate intervals are dashed,
//! non-degenerate ones solid; filled corners are gray and highlighted
//! intervals red.

use std::fmt::Write;

use crate::interval::IntervalPoset;

/// Styling inputs for [`interval_dot`]; all index lists refer to `[P]`.
#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Intervals whose labels are filler data.
    pub filled: Vec<usize>,
    /// Intervals on a failing square.
    pub highlight: Vec<usize>,
    /// Extra text under each interval name, one entry per interval.
    pub captions: Option<Vec<String>>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT source for `ip`, with nodes in interval order.
pub fn interval_dot(ip: &IntervalPoset, options: &DotOptions) -> String {
    let mut out = String::from("digraph intervals {\n  rankdir=BT;\n  node [shape=box];\n");
    for k in 0..ip.len() {
        let mut label = ip.name(k).to_string();
        if let Some(caption) = options.captions.as_ref().and_then(|c| c.get(k)) {
            label.push_str("\\n");
            label.push_str(caption);
        }
        let style = if ip.interval(k).is_degenerate() { "dashed" } else { "solid" };
        let mut attrs = format!("label={}, style={style}", quote(&label));
        if options.highlight.contains(&k) {
            attrs.push_str(", color=red, penwidth=2");
        } else if options.filled.contains(&k) {
            attrs.push_str(", color=gray, fontcolor=gray");
        }
        writeln!(out, "  n{k} [{attrs}];").expect("writing to a String");
    }
    let mut covers = ip.carrier().covers();
    covers.sort_unstable();
    for (i, j) in covers {
        let hot = options.highlight.contains(&i) && options.highlight.contains(&j);
        let attrs = if hot { " [color=red]" } else { "" };
        writeln!(out, "  n{i} -> n{j}{attrs};").expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::interval_poset;
    use crate::lattice::downset_lattice;
    use crate::poset::FinPoset;

    #[test]
    fn diamond_has_nine_nodes_and_styles() {
        let d = downset_lattice(&FinPoset::antichain(2)).lattice;
        let ip = interval_poset(d.carrier());
        let whole = ip.index_by_names("{}", "{0,1}").unwrap();
        let dot = interval_dot(
            &ip,
            &DotOptions {
                filled: vec![whole],
                ..Default::default()
            },
        );
        assert_eq!(dot.matches("label=").count(), 9);
        assert_eq!(dot.matches("style=dashed").count(), 4);
        assert_eq!(dot.matches("style=solid").count(), 5);
        assert_eq!(dot.matches("fontcolor=gray").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), ip.carrier().covers().len());
    }
}
