use headdrive::engine::{RunStats, TraceDump, Verdict};
use headdrive::recognizers::Algorithm;
use serde::{Deserialize, Serialize};

/// The `--json` output of `recognize`, and one entry of `compare --json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub grammar: String,
    pub algorithm: Algorithm,
    pub input: Vec<String>,
    pub verdict: Verdict,
    pub stats: RunStats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<TraceDump>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Accept => "accept",
        Verdict::Reject => "reject",
        Verdict::ResourceLimit => "resource-limit",
    }
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Accept => 0,
        Verdict::Reject => 1,
        Verdict::ResourceLimit => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let r = RunReport {
            grammar: "g.hg".into(),
            algorithm: Algorithm::Phi,
            input: vec!["a".into()],
            verdict: Verdict::ResourceLimit,
            stats: RunStats {
                configurations_explored: 3,
                ..RunStats::default()
            },
            trace: None,
        };
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains(r#""algorithm":"phi""#));
        assert!(text.contains(r#""verdict":"resource-limit""#));
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), r);
    }
}
