use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, MetricKind, Request};
use crate::ratio::{format_ratio, int};
use crate::text::lines;

/// Parses the line-oriented instance format. Header lines come first in
/// fixed order (`instance`, `metric`, `speed`, `nodes`), followed by
/// `edge` and `request` lines.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = lines(text);
    let mut header = |keyword: &str, usage: &str| -> Result<_> {
        let line = lines.next().ok_or_else(|| Error::Syntax {
            line: text.lines().count() + 1,
            column: 1,
            message: format!("missing `{usage}` line"),
        })?;
        if line.keyword() != keyword {
            return Err(line.tokens[0].error(format!("expected `{usage}`")));
        }
        line.expect_len(2..=2, usage)?;
        Ok(line.tokens[1])
    };

    let name = header("instance", "instance <name>")?.text.to_string();
    let metric_token = header("metric", "metric tree|general")?;
    let metric = match metric_token.text {
        "tree" => MetricKind::Tree,
        "general" => MetricKind::General,
        other => return Err(metric_token.error(format!("unknown metric {other:?}"))),
    };
    let speed = header("speed", "speed <rational>")?.ratio()?;
    let node_count = header("nodes", "nodes <n>")?.index()?;

    let mut edges = Vec::new();
    let mut requests = Vec::new();
    for line in lines {
        match line.keyword() {
            "edge" => {
                line.expect_len(4..=4, "edge <u> <v> <weight>")?;
                edges.push(Edge {
                    u: line.tokens[1].index()?,
                    v: line.tokens[2].index()?,
                    weight: line.tokens[3].ratio()?,
                });
            }
            "request" => {
                line.expect_len(4..=5, "request <id> <node> <release> [<profit>]")?;
                requests.push(Request {
                    id: line.tokens[1].text.to_string(),
                    node: line.tokens[2].index()?,
                    release: line.tokens[3].ratio()?,
                    profit: match line.tokens.get(4) {
                        Some(token) => token.ratio()?,
                        None => int(1),
                    },
                });
            }
            other => {
                return Err(line.tokens[0].error(format!("unknown directive {other:?}")));
            }
        }
    }
    Instance::new(name, metric, node_count, edges, requests, speed)
}

/// Canonical text form; `parse_instance` of the output reproduces the instance.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance {}\n", inst.name()));
    out.push_str(&format!("metric {}\n", inst.metric()));
    out.push_str(&format!("speed {}\n", format_ratio(inst.speed())));
    out.push_str(&format!("nodes {}\n", inst.node_count()));
    for edge in inst.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            edge.u,
            edge.v,
            format_ratio(&edge.weight)
        ));
    }
    for request in inst.requests() {
        out.push_str(&format!(
            "request {} {} {} {}\n",
            request.id,
            request.node,
            format_ratio(&request.release),
            format_ratio(&request.profit)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::frac;

    const MINIMAL: &str = "\
instance tiny
metric tree
speed 1
nodes 2
edge 0 1 1
request a 1 0.5 1
";

    #[test]
    fn parses_minimal_instance() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.node_count(), 2);
        assert_eq!(inst.requests().len(), 1);
        assert_eq!(inst.request(0).release, frac(1, 2));
    }

    #[test]
    fn two_edges_on_two_nodes_is_not_a_tree() {
        let text = MINIMAL.replace("edge 0 1 1\n", "edge 0 1 1\nedge 1 0 2\n");
        let err = parse_instance(&text).unwrap_err();
        assert!(err.to_string().contains("not a tree"), "{err}");
    }

    #[test]
    fn speed_two_halves_travel_time() {
        let text = MINIMAL.replace("speed 1", "speed 2");
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.distance(0, 1).unwrap(), frac(1, 2));
    }

    #[test]
    fn comments_and_default_profit() {
        let text = "# header\ninstance x # trailing\n\nmetric general\nspeed 3/2\nnodes 1\nrequest q 0 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.request(0).profit, int(1));
        assert_eq!(inst.speed(), &frac(3, 2));
    }

    #[test]
    fn syntax_errors_report_position() {
        let text = MINIMAL.replace("edge 0 1 1", "edge 0 one 1");
        assert_eq!(
            parse_instance(&text).unwrap_err(),
            Error::Syntax {
                line: 5,
                column: 8,
                message: "expected a non-negative integer, found \"one\"".into()
            }
        );
        let text = MINIMAL.replace("metric tree", "metric ring");
        assert!(matches!(
            parse_instance(&text),
            Err(Error::Syntax {
                line: 2,
                column: 8,
                ..
            })
        ));
        let text = MINIMAL.replace("request a 1 0.5 1", "request a 1");
        assert!(matches!(
            parse_instance(&text),
            Err(Error::Syntax {
                line: 6,
                column: 12,
                ..
            })
        ));
        assert!(matches!(
            parse_instance("instance x\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn serialization_is_canonical() {
        let text = "instance c\nmetric tree\nspeed 1\nnodes 3\nedge 2 1 0.25\nedge 1 0 1\nrequest b 2 1.5 2\nrequest a 0 0.1 1\n";
        let inst = parse_instance(text).unwrap();
        let canonical = serialize_instance(&inst);
        assert_eq!(
            canonical,
            "instance c\nmetric tree\nspeed 1\nnodes 3\nedge 0 1 1\nedge 1 2 1/4\nrequest a 0 1/10 1\nrequest b 2 3/2 2\n"
        );
        assert_eq!(parse_instance(&canonical).unwrap(), inst);
    }
}
