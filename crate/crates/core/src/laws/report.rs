//! Law check outcomes and their line-oriented serialization.
//!
//! One record per line:
//!
//! ```text
//! law=<id> model=<id> seed=<u64> cases=<n> status=<pass|fail|skip> eq=<exact|sampled:tol,pts> [case=<idx>] [counterexample=<text>]
//! ```
//!
//! `counterexample` runs to the end of the line, so it must come last.

use std::fmt;
use std::str::FromStr;

use crate::category::EqContract;
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// No case could be generated; never counted as a pass.
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub law: String,
    pub model: String,
    pub seed: u64,
    /// Cases actually checked (generated and evaluated).
    pub cases: usize,
    pub status: Status,
    pub eq: EqContract,
    /// Index of the failing case, for replay.
    pub case: Option<usize>,
    pub counterexample: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn parse(line: &str) -> Result<LawReport, ParseError> {
        parse_line(line)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "law={} model={} seed={} cases={} status={} eq={}",
            self.law, self.model, self.seed, self.cases, self.status, self.eq
        )?;
        if let Some(case) = self.case {
            write!(f, " case={case}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, " counterexample={cx}")?;
        }
        Ok(())
    }
}

impl FromStr for LawReport {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_line(s)
    }
}

/// Makes free text safe for the single-line format.
pub fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn parse_eq(value: &str, line: &str, at: usize) -> Result<EqContract, ParseError> {
    if value == "exact" {
        return Ok(EqContract::Exact);
    }
    let bad = || ParseError::new(format!("bad equality contract '{value}'"), line, at);
    let rest = value.strip_prefix("sampled:").ok_or_else(bad)?;
    let (tol, pts) = rest.split_once(',').ok_or_else(bad)?;
    let tolerance: f64 = tol.parse().map_err(|_| bad())?;
    let points: usize = pts.parse().map_err(|_| bad())?;
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(bad());
    }
    Ok(EqContract::Sampled { tolerance, points })
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace)
}

fn parse_line(line: &str) -> Result<LawReport, ParseError> {
    let mut law = None;
    let mut model = None;
    let mut seed = None;
    let mut cases = None;
    let mut status = None;
    let mut eq = None;
    let mut case = None;
    let mut counterexample = None;

    let mut pos = 0;
    while pos < line.len() {
        let rest = &line[pos..];
        let trimmed = rest.trim_start_matches(' ');
        pos += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let (key, after) = trimmed
            .split_once('=')
            .ok_or_else(|| ParseError::new("expected key=value", line, pos))?;
        if key.contains(' ') {
            return Err(ParseError::new("expected key=value", line, pos));
        }
        let value_at = pos + key.len() + 1;
        if key == "counterexample" {
            counterexample = Some(after.to_string());
            break;
        }
        let value = after.split(' ').next().unwrap_or("");
        let bad = |what: &str| ParseError::new(format!("bad {what} '{value}'"), line, value_at);
        let dup = || ParseError::new(format!("duplicate field '{key}'"), line, pos);
        match key {
            "law" if law.is_none() && valid_id(value) => law = Some(value.to_string()),
            "model" if model.is_none() && valid_id(value) => model = Some(value.to_string()),
            "seed" if seed.is_none() => seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "cases" if cases.is_none() => cases = Some(value.parse().map_err(|_| bad("cases"))?),
            "case" if case.is_none() => case = Some(value.parse().map_err(|_| bad("case"))?),
            "status" if status.is_none() => {
                status = Some(match value {
                    "pass" => Status::Pass,
                    "fail" => Status::Fail,
                    "skip" => Status::Skip,
                    _ => return Err(bad("status")),
                })
            }
            "eq" if eq.is_none() => eq = Some(parse_eq(value, line, value_at)?),
            "law" | "model" if !valid_id(value) => return Err(bad(key)),
            "law" | "model" | "seed" | "cases" | "case" | "status" | "eq" => return Err(dup()),
            _ => {
                return Err(ParseError::new(format!("unknown field '{key}'"), line, pos));
            }
        }
        pos = value_at + value.len();
    }

    let missing = |name: &str| ParseError::new(format!("missing field '{name}'"), line, line.len());
    let report = LawReport {
        law: law.ok_or_else(|| missing("law"))?,
        model: model.ok_or_else(|| missing("model"))?,
        seed: seed.ok_or_else(|| missing("seed"))?,
        cases: cases.ok_or_else(|| missing("cases"))?,
        status: status.ok_or_else(|| missing("status"))?,
        eq: eq.ok_or_else(|| missing("eq"))?,
        case,
        counterexample,
    };
    if report.status == Status::Fail && report.counterexample.is_none() {
        return Err(ParseError::new(
            "a failing record needs a counterexample",
            line,
            line.len(),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn failing_record_round_trips() {
        let r = LawReport {
            law: "CD.3".into(),
            model: "poly".into(),
            seed: 42,
            cases: 17,
            status: Status::Fail,
            eq: EqContract::Exact,
            case: Some(0),
            counterexample: Some("D[1] = π₁: R -> R : [0] != (R*R) -> R : [x2]".into()),
        };
        let line = r.to_string();
        assert!(line.starts_with("law=CD.3 model=poly seed=42 cases=17 status=fail eq=exact case=0 "));
        assert_eq!(LawReport::parse(&line).unwrap(), r);
    }

    #[test]
    fn sampled_contract_round_trips() {
        let line = "law=L.1 model=smooth seed=1 cases=100 status=pass eq=sampled:1e-6,100";
        let r = LawReport::parse(line).unwrap();
        assert_eq!(
            r.eq,
            EqContract::Sampled {
                tolerance: 1e-6,
                points: 100
            }
        );
        assert_eq!(r.to_string(), line);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        for bad in [
            "",
            "law=x",
            "law=x model=m seed=-1 cases=1 status=pass eq=exact",
            "law=x model=m seed=1 cases=1 status=maybe eq=exact",
            "law=x model=m seed=1 cases=1 status=fail eq=exact",
            "law=x model=m seed=1 cases=1 status=pass eq=sampled:abc",
            "law=x law=y model=m seed=1 cases=1 status=pass eq=exact",
            "law=x model=m seed=1 cases=1 status=pass eq=exact color=red",
        ] {
            assert!(LawReport::parse(bad).is_err(), "{bad}");
        }
    }

    fn arb_report() -> impl Strategy<Value = LawReport> {
        (
            "[A-Za-z0-9.@()*\\[\\],]{1,12}",
            "[a-z]{1,8}",
            any::<u64>(),
            0usize..10_000,
            prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::Skip)],
            prop_oneof![
                Just(EqContract::Exact),
                (1u32..12, 1usize..500).prop_map(|(e, p)| EqContract::Sampled {
                    tolerance: 10f64.powi(-(e as i32)),
                    points: p
                })
            ],
            proptest::option::of(0usize..10_000),
            "[ -~]{0,40}",
        )
            .prop_map(|(law, model, seed, cases, status, eq, case, cx)| {
                let counterexample = match status {
                    Status::Fail => Some(one_line(&format!("x {cx}"))),
                    _ => None,
                };
                LawReport {
                    law,
                    model,
                    seed,
                    cases,
                    status,
                    eq,
                    case,
                    counterexample,
                }
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(r in arb_report()) {
            prop_assert_eq!(LawReport::parse(&r.to_string()).unwrap(), r);
        }
    }
}
