//! Text form of strategies. Every rational is written exactly, so a file
//! read back gives an equal strategy.
//!
//! ```text
//! T=240
//! temporal uniform 240
//! atom L3 2/17
//! uniform 3/17 AB[0,1];BC[0,1]
//! ```
//!
//! ```text
//! mix 1/2 phase=uniform
//! walk A AB:0>1 wait:1/2 AB:1>0
//! ```

use super::{AttackStrategy, Phase, PatrolComponent, PatrolStrategy, TemporalLaw};
use crate::error::{parse_error, Error, Result};
use crate::measure::{SpatialMeasure, UniformPart};
use crate::network::format::{arc_by_name, format_point, format_region, parse_point, parse_region, strip_comment};
use crate::network::{Network, Step, Walk};
use crate::rational::{format_rational, parse_rational, Rational};

fn rational(line: usize, text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| parse_error(line, format!("bad number {text:?}")))
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Parse { .. } => e,
        other => parse_error(line, other.to_string()),
    }
}

pub fn write_attack(net: &Network, a: &AttackStrategy) -> String {
    let mut out = String::new();
    match a.temporal {
        TemporalLaw::Fixed(t) => out.push_str(&format!("temporal fixed {}\n", format_rational(&t))),
        TemporalLaw::Uniform(h) => {
            out.push_str(&format!("T={}\n", format_rational(&h)));
            out.push_str(&format!("temporal uniform {}\n", format_rational(&h)));
        }
    }
    for (p, m) in &a.spatial.atoms {
        out.push_str(&format!("atom {} {}\n", format_point(net, p), format_rational(m)));
    }
    for u in &a.spatial.uniform {
        out.push_str(&format!(
            "uniform {} {}\n",
            format_rational(&u.mass),
            format_region(net, &u.region)
        ));
    }
    out
}

pub fn parse_attack(net: &Network, text: &str) -> Result<AttackStrategy> {
    let mut temporal = None;
    let mut header = None;
    let mut spatial = SpatialMeasure::default();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        last = n;
        if let Some(h) = line.strip_prefix("T=") {
            header = Some((n, rational(n, h)?));
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["temporal", "fixed", t] => temporal = Some(TemporalLaw::Fixed(rational(n, t)?)),
            ["temporal", "uniform", h] => temporal = Some(TemporalLaw::Uniform(rational(n, h)?)),
            ["atom", p, m] => {
                let p = parse_point(net, p).map_err(at_line(n))?;
                spatial.atoms.push((p, rational(n, m)?));
            }
            ["uniform", m, region] => {
                let region = parse_region(net, region).map_err(at_line(n))?;
                spatial.uniform.push(UniformPart { region, mass: rational(n, m)? });
            }
            [kind, ..] => return Err(parse_error(n, format!("unknown or malformed record {kind:?}"))),
            [] => unreachable!(),
        }
    }
    let temporal = temporal.ok_or_else(|| parse_error(last.max(1), "missing temporal record"))?;
    if let Some((n, h)) = header {
        if temporal != TemporalLaw::Uniform(h) {
            return Err(parse_error(n, "T= header disagrees with the temporal record"));
        }
    }
    AttackStrategy::new(net, spatial, temporal).map_err(at_line(last.max(1)))
}

fn format_step(net: &Network, s: &Step) -> String {
    match *s {
        Step::Traverse { arc, from, to } => format!(
            "{}:{}>{}",
            net.arc(arc).name,
            format_rational(&from),
            format_rational(&to)
        ),
        Step::Dwell(d) => format!("wait:{}", format_rational(&d)),
    }
}

fn parse_step(net: &Network, line: usize, text: &str) -> Result<Step> {
    let (head, tail) = text
        .split_once(':')
        .ok_or_else(|| parse_error(line, format!("bad step {text:?}")))?;
    match tail.split_once('>') {
        Some((from, to)) => Ok(Step::Traverse {
            arc: arc_by_name(net, head).map_err(at_line(line))?,
            from: rational(line, from)?,
            to: rational(line, to)?,
        }),
        None if head == "wait" => Ok(Step::Dwell(rational(line, tail)?)),
        None => Err(parse_error(line, format!("bad step {text:?}"))),
    }
}

pub fn write_patrol(net: &Network, p: &PatrolStrategy) -> String {
    let mut out = String::new();
    for c in p.components() {
        let phase = match c.phase {
            Phase::Uniform => "uniform".to_string(),
            Phase::Fixed(t) => format!("fixed:{}", format_rational(&t)),
        };
        out.push_str(&format!("mix {} phase={phase}\n", format_rational(&c.probability)));
        out.push_str(&format!("walk {}", format_point(net, &c.walk.start())));
        for s in c.walk.steps() {
            out.push(' ');
            out.push_str(&format_step(net, s));
        }
        out.push('\n');
    }
    out
}

pub fn parse_patrol(net: &Network, text: &str) -> Result<PatrolStrategy> {
    let mut components = Vec::new();
    let mut pending: Option<(usize, Rational, Phase)> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        last = n;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["mix", prob, phase] => {
                if pending.is_some() {
                    return Err(parse_error(n, "mix record without a walk"));
                }
                let phase = match phase.strip_prefix("phase=") {
                    Some("uniform") => Phase::Uniform,
                    Some(f) => match f.strip_prefix("fixed:") {
                        Some(t) => Phase::Fixed(rational(n, t)?),
                        None => return Err(parse_error(n, format!("bad phase {phase:?}"))),
                    },
                    None => return Err(parse_error(n, format!("bad phase {phase:?}"))),
                };
                pending = Some((n, rational(n, prob)?, phase));
            }
            ["walk", start, steps @ ..] => {
                let (_, probability, phase) =
                    pending.take().ok_or_else(|| parse_error(n, "walk record without a mix"))?;
                let start = parse_point(net, start).map_err(at_line(n))?;
                let steps = steps
                    .iter()
                    .map(|s| parse_step(net, n, s))
                    .collect::<Result<Vec<_>>>()?;
                let walk = Walk::new(net, start, steps).map_err(at_line(n))?;
                components.push(PatrolComponent { walk, probability, phase });
            }
            [kind, ..] => return Err(parse_error(n, format!("unknown or malformed record {kind:?}"))),
            [] => unreachable!(),
        }
    }
    if let Some((n, _, _)) = pending {
        return Err(parse_error(n, "mix record without a walk"));
    }
    PatrolStrategy::new(components).map_err(at_line(last.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::round_robin_one_factorization;
    use crate::network::generators::{complete, sample_tree};
    use crate::rational::int;
    use crate::strategy::{complete_patrolling, e_patrolling, k4_window_attack, tree_attack_strategy};

    #[test]
    fn attack_round_trip() {
        let t = sample_tree();
        for alpha in [2, 4, 6, 8] {
            let a = tree_attack_strategy(&t, int(alpha), int(240)).unwrap();
            let text = write_attack(&t, &a);
            assert!(text.starts_with("T=240\n"));
            assert_eq!(parse_attack(&t, &text).unwrap(), a);
        }
        let k4 = complete(4, |_, _| int(1));
        let a = k4_window_attack(&k4, int(6)).unwrap();
        assert_eq!(parse_attack(&k4, &write_attack(&k4, &a)).unwrap(), a);
    }

    #[test]
    fn patrol_round_trip() {
        let t = sample_tree();
        let p = e_patrolling(&t, int(4)).unwrap();
        assert_eq!(parse_patrol(&t, &write_patrol(&t, &p)).unwrap(), p);
        let k4 = complete(4, |_, _| int(1));
        let p = complete_patrolling(&k4, &round_robin_one_factorization(&k4).unwrap()).unwrap();
        assert_eq!(parse_patrol(&k4, &write_patrol(&k4, &p)).unwrap(), p);
        let text = "mix 1 phase=fixed:1/2\nwalk AB@1/2 AB:1/2>1 wait:2 AB:1>0\n";
        let p = parse_patrol(&t, text).unwrap();
        assert_eq!(write_patrol(&t, &p), text);
    }

    #[test]
    fn errors_carry_lines() {
        let t = sample_tree();
        let err = parse_attack(&t, "temporal fixed 0\natom L3 1/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_patrol(&t, "mix 1 phase=uniform\nwalk A AB:0>1 BC:1>2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_attack(&t, "T=5\ntemporal uniform 6\natom L3 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }
}
