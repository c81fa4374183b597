//! Line-oriented text format for networks, plus the point and segment
//! notation shared by every other file format in the crate.
//!
//! ```text
//! # comment
//! node A
//! node B
//! arc AB A B 3/2
//! ```
//!
//! Points are written as a node name or `arc@offset`; regions as a
//! `;`-separated list of `arc[lo,hi]`, or `-` when empty.

use super::{ArcId, Network, NetworkBuilder, Point, Region, Segment};
use crate::error::{parse_error, Error, Result};
use crate::rational::{format_rational, parse_rational};

pub fn parse_network(text: &str) -> Result<Network> {
    let mut b = NetworkBuilder::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        last_line = line_no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["node", name] => {
                b.add_node(name).map_err(|e| parse_error(line_no, e.to_string()))?;
            }
            ["arc", name, u, v, len] => {
                let u = b
                    .node_id(u)
                    .ok_or_else(|| parse_error(line_no, format!("unknown node {u}")))?;
                let v = b
                    .node_id(v)
                    .ok_or_else(|| parse_error(line_no, format!("unknown node {v}")))?;
                let len = parse_rational(len)
                    .ok_or_else(|| parse_error(line_no, format!("bad length {len:?}")))?;
                if len <= crate::rational::zero() {
                    return Err(parse_error(line_no, format!("nonpositive length for arc {name}")));
                }
                b.add_arc(name, u, v, len)
                    .map_err(|e| parse_error(line_no, e.to_string()))?;
            }
            ["node", ..] | ["arc", ..] => {
                return Err(parse_error(line_no, format!("wrong number of fields: {line}")))
            }
            [other, ..] => return Err(parse_error(line_no, format!("unknown record {other:?}"))),
            [] => unreachable!(),
        }
    }
    b.build().map_err(|e| match e {
        Error::InvalidNetwork(msg) => parse_error(last_line, msg),
        other => other,
    })
}

pub fn write_network(net: &Network) -> String {
    let mut out = String::new();
    for n in net.node_ids() {
        out.push_str(&format!("node {}\n", net.node_name(n)));
    }
    for a in net.arcs() {
        out.push_str(&format!(
            "arc {} {} {} {}\n",
            a.name,
            net.node_name(a.u),
            net.node_name(a.v),
            format_rational(&a.length)
        ));
    }
    out
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub fn format_point(net: &Network, p: &Point) -> String {
    match *p {
        Point::Node(n) => net.node_name(n).to_string(),
        Point::Interior { arc, offset } => {
            format!("{}@{}", net.arc(arc).name, format_rational(&offset))
        }
    }
}

pub fn parse_point(net: &Network, text: &str) -> Result<Point> {
    match text.split_once('@') {
        Some((arc, offset)) => {
            let arc = arc_by_name(net, arc)?;
            let offset = parse_rational(offset)
                .ok_or_else(|| Error::InvalidPoint(format!("bad offset {offset:?}")))?;
            net.point(arc, offset)
        }
        None => net
            .node_id(text)
            .map(Point::Node)
            .ok_or_else(|| Error::InvalidPoint(format!("unknown node {text}"))),
    }
}

pub(crate) fn arc_by_name(net: &Network, name: &str) -> Result<ArcId> {
    net.arc_id(name)
        .ok_or_else(|| Error::InvalidPoint(format!("unknown arc {name}")))
}

pub fn format_region(net: &Network, region: &Region) -> String {
    if region.is_empty() {
        return "-".into();
    }
    region
        .segments()
        .iter()
        .map(|s| {
            format!(
                "{}[{},{}]",
                net.arc(s.arc).name,
                format_rational(&s.lo),
                format_rational(&s.hi)
            )
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_region(net: &Network, text: &str) -> Result<Region> {
    if text == "-" {
        return Ok(Region::empty());
    }
    let mut segments = Vec::new();
    for piece in text.split(';') {
        let bad = || Error::InvalidParameter(format!("bad segment {piece:?}"));
        let (arc, rest) = piece.split_once('[').ok_or_else(bad)?;
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
        let arc = arc_by_name(net, arc)?;
        let lo = parse_rational(lo).ok_or_else(bad)?;
        let hi = parse_rational(hi).ok_or_else(bad)?;
        segments.push(Segment::new(net, arc, lo, hi)?);
    }
    Ok(Region::from_segments(segments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::generators::sample_tree;
    use crate::rational::{int, rat};

    #[test]
    fn round_trips_sample_tree() {
        let t = sample_tree();
        let text = write_network(&t);
        assert_eq!(parse_network(&text).unwrap(), t);
    }

    #[test]
    fn accepts_decimals_and_comments() {
        let net = parse_network("# two arcs\nnode a\nnode b # end\nnode c\narc x a b 0.5\narc y b c 3/2\n").unwrap();
        assert_eq!(net.total_length(), int(2));
    }

    #[test]
    fn line_numbered_errors() {
        let err = parse_network("node a\nnode b\narc x a b 0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "nonpositive length for arc x".into() });
        let err = parse_network("node a\nnode b\nnode c\narc x a b 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = parse_network("node a\nedge x a b 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_network("node a\narc x a q 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn points_and_regions() {
        let t = sample_tree();
        let p = parse_point(&t, "BC@1/2").unwrap();
        assert_eq!(format_point(&t, &p), "BC@1/2");
        assert_eq!(parse_point(&t, "BC@0").unwrap(), parse_point(&t, "B").unwrap());
        let r = parse_region(&t, "AB[0,1];BC[1/2,2]").unwrap();
        assert_eq!(r.measure(), rat(5, 2));
        assert_eq!(format_region(&t, &r), "AB[0,1];BC[1/2,2]");
        assert!(parse_region(&t, "AB[0,3]").is_err());
    }
}
