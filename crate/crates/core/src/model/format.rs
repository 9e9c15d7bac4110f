//! Line-based text formats for instances and partitions.
//!
//! ```text
//! hgcrp 1
//! agents 3
//! # comment
//! 0 0
//! 1,2 2
//! 0,1,2 1/2
//! ```
//!
//! An optional `allow-non-ir` line directly after the `agents` line marks
//! an instance whose list keeps coalitions that are not individually
//! rational. Partition files hold one coalition per line in the same
//! member syntax.

use std::collections::HashSet;
use std::fmt::Write;

use super::{Coalition, Instance, Partition, Utility};
use crate::error::{Error, Result};

const MAGIC: &str = "hgcrp 1";
const NON_IR_DIRECTIVE: &str = "allow-non-ir";

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Meaningful lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `i1,i2,...,ik` with strictly ascending members.
pub(crate) fn parse_members(s: &str, line: usize) -> Result<Coalition> {
    let mut members = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let i: usize = tok
            .parse()
            .map_err(|_| syntax(line, format!("bad agent index {tok:?}")))?;
        if members.last().is_some_and(|&prev| prev >= i) {
            return Err(syntax(line, "members must be strictly ascending"));
        }
        members.push(i);
    }
    Ok(Coalition::from_sorted(members))
}

fn with_line(e: Error, line: usize) -> Error {
    match e {
        Error::Syntax { message, .. } => Error::Syntax { line, message },
        other => other,
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text).peekable();
    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((l, other)) => return Err(syntax(l, format!("expected {MAGIC:?}, found {other:?}"))),
        None => return Err(syntax(1, "empty input")),
    }
    let n = match lines.next() {
        Some((l, s)) => {
            let rest = s
                .strip_prefix("agents")
                .ok_or_else(|| syntax(l, "expected `agents <n>`"))?;
            rest.trim()
                .parse::<usize>()
                .map_err(|_| syntax(l, "bad agent count"))?
        }
        None => return Err(syntax(2, "missing `agents <n>` line")),
    };
    let allow_non_ir = lines.next_if(|(_, s)| *s == NON_IR_DIRECTIVE).is_some();

    let mut seen = HashSet::new();
    let mut list = Vec::new();
    for (l, s) in lines {
        let (members, value) = s
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(l, "expected `<members> <utility>`"))?;
        let c = parse_members(members, l)?;
        if c.max_member() >= n {
            return Err(Error::AgentOutOfRange {
                agent: c.max_member(),
                n,
            });
        }
        let u: Utility = value.trim().parse().map_err(|e| with_line(e, l))?;
        if u.is_negative() {
            return Err(Error::NegativeUtility { coalition: c });
        }
        if !seen.insert(c.clone()) {
            return Err(Error::DuplicateCoalition {
                line: l,
                coalition: c,
            });
        }
        list.push((c, u));
    }
    Instance::build(n, list, allow_non_ir)
}

/// Canonical text: coalitions by size then lexicographically, utilities in
/// lowest terms.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "agents {}", inst.agent_count()).unwrap();
    if inst.allows_non_ir() {
        writeln!(out, "{NON_IR_DIRECTIVE}").unwrap();
    }
    for (c, u) in inst.coalitions() {
        writeln!(out, "{} {u}", member_list(c)).unwrap();
    }
    out
}

fn member_list(c: &Coalition) -> String {
    c.members()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_partition(inst: &Instance, text: &str) -> Result<Partition> {
    let coalitions = content_lines(text)
        .map(|(l, s)| parse_members(s, l))
        .collect::<Result<Vec<_>>>()?;
    Partition::new(inst, coalitions)
}

pub fn serialize_partition(pi: &Partition) -> String {
    pi.coalitions()
        .iter()
        .map(|c| member_list(c) + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "hgcrp 1\nagents 2\n# two agents\n0 1\n1 0\n\n0,1 1\n";

    #[test]
    fn parses_two_agents() {
        let inst = parse_instance(EX1).unwrap();
        assert_eq!(inst.agent_count(), 2);
        assert_eq!(inst.len(), 3);
        assert_eq!(
            serialize_instance(&inst),
            "hgcrp 1\nagents 2\n0 1\n1 0\n0,1 1\n"
        );
    }

    #[test]
    fn smallest_instance() {
        let inst = parse_instance("hgcrp 1\nagents 1\n0 0\n").unwrap();
        assert_eq!(inst.len(), 1);
    }

    #[test]
    fn reports_errors() {
        type Case = (&'static str, fn(&Error) -> bool);
        let cases: &[Case] = &[
            ("hgcrp 2\nagents 1\n0 0\n", |e| {
                matches!(e, Error::Syntax { line: 1, .. })
            }),
            ("hgcrp 1\nagents x\n", |e| {
                matches!(e, Error::Syntax { line: 2, .. })
            }),
            ("hgcrp 1\nagents 2\n0 1\n1 1\n1,0 1\n", |e| {
                matches!(e, Error::Syntax { line: 5, .. })
            }),
            ("hgcrp 1\nagents 2\n0 1\n1 1\n0,1 x\n", |e| {
                matches!(e, Error::Syntax { line: 5, .. })
            }),
            ("hgcrp 1\nagents 2\n0 1\n0 1\n", |e| {
                matches!(e, Error::DuplicateCoalition { line: 4, .. })
            }),
            ("hgcrp 1\nagents 2\n0 1\n", |e| {
                matches!(e, Error::MissingSingleton { agent: 1 })
            }),
            ("hgcrp 1\nagents 2\n0 1\n1 0\n0,1 0\n", |e| {
                matches!(e, Error::NotIndividuallyRational { .. })
            }),
            ("hgcrp 1\nagents 1\n0 1\n0,1 1\n", |e| {
                matches!(e, Error::AgentOutOfRange { agent: 1, n: 1 })
            }),
            ("hgcrp 1\nagents 1\n0 -1\n", |e| {
                matches!(e, Error::NegativeUtility { .. })
            }),
            ("hgcrp 1\nagents 1\n0 1/0\n", |e| {
                matches!(e, Error::ZeroDenominator)
            }),
            ("hgcrp 1\nagents 1\n0 9223372036854775808\n", |e| {
                matches!(e, Error::Overflow)
            }),
        ];
        for (text, check) in cases {
            let err = parse_instance(text).unwrap_err();
            assert!(check(&err), "{text:?} gave {err:?}");
        }
    }

    #[test]
    fn non_ir_directive_round_trips() {
        let text = "hgcrp 1\nagents 2\nallow-non-ir\n0 3/2\n1 0\n0,1 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.allows_non_ir());
        assert_eq!(serialize_instance(&inst), text);
        assert!(parse_instance(&text.replace("allow-non-ir\n", "")).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let inst = parse_instance(EX1).unwrap();
        let p = parse_partition(&inst, "# grand\n0,1\n").unwrap();
        assert_eq!(serialize_partition(&p), "0,1\n");
        assert!(parse_partition(&inst, "0\n").is_err());
    }
}
