//! Generators for the Markov-chain and weather-HMM benchmark programs.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

/// Three locations; uniform start, fixed transition matrix.
pub const MARKOV: &str = "\
% initial distribution
in ~ [a, b, c] @ 0.
% transition matrix and define walk
in ~ [[a, 0.9], [b, 0.05], [c, 0.05]] @ T+1 :- in=a @ T.
in ~ [[a, 0.7], [c, 0.3]] @ T+1 :- in=b @ T.
in ~ [[a, 0.8], [c, 0.2]] @ T+1 :- in=c @ T.
";

/// Weather HMM; `obs` is the accumulated rain, growing by 3..30 on rainy and 0..5 on
/// sunny days.
pub const HMM: &str = "\
config(inst_sol, true).
config(show_info, false).
config(cautious_disjointing, true).
state ~ [[rainy, 0.6], [sunny, 0.4]] @ 0.

state ~ [[rainy, 0.7], [sunny, 0.3]] @ T+1 :- state=rainy @ T.
state ~ [[rainy, 0.4], [sunny, 0.6]] @ T+1 :- state=sunny @ T.

obs ~ [3..30] @ 0 :- state=rainy @ 0.
obs ~ [0..5] @ 0 :- state=sunny @ 0.

obs ~ [R+3..R+30] @ T :-
  state=rainy @ T,
  T > 0,
  obs=R @ T-1.

obs ~ [R..R+5] @ T :-
  state=sunny @ T,
  T > 0,
  obs=R @ T-1.
";

/// Observations of the mixed-weather family; longer runs repeat the last value.
pub const MIXED_OBS: [i64; 7] = [0, 4, 24, 34, 38, 38, 42];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    MarkovTimesteps,
    MarkovSpecificity,
    MarkovTimepoint,
    HmmRainy,
    HmmSunny,
    HmmMixed,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::MarkovTimesteps,
        Family::MarkovSpecificity,
        Family::MarkovTimepoint,
        Family::HmmRainy,
        Family::HmmSunny,
        Family::HmmMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MarkovTimesteps => "markov-timesteps",
            Family::MarkovSpecificity => "markov-specificity",
            Family::MarkovTimepoint => "markov-timepoint",
            Family::HmmRainy => "hmm-rainy",
            Family::HmmSunny => "hmm-sunny",
            Family::HmmMixed => "hmm-mixed",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown benchmark family `{0}`")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// Evidence `(time, obs)` of an HMM family at complexity `n`.
pub fn hmm_evidence(family: Family, n: usize) -> Vec<(i64, i64)> {
    (1..=n as i64)
        .map(|k| {
            let v = match family {
                Family::HmmRainy => 4 * k,
                Family::HmmSunny => 0,
                _ => MIXED_OBS[(k as usize - 1).min(MIXED_OBS.len() - 1)],
            };
            (k, v)
        })
        .collect()
}

/// Program text plus one query for `family` at complexity `n`.
pub fn generate(family: Family, n: usize) -> String {
    let mut out = String::new();
    match family {
        Family::MarkovTimesteps | Family::MarkovSpecificity | Family::MarkovTimepoint => {
            out.push_str(MARKOV);
            out.push('\n');
            let (eot, goals): (usize, Vec<String>) = match family {
                Family::MarkovTimesteps => (n, (0..=n).map(|t| format!("in=a @ {t}")).collect()),
                Family::MarkovSpecificity => (
                    8,
                    (0..9)
                        .map(|t| {
                            if t < n {
                                format!("in=L{t} @ {t}")
                            } else {
                                format!("in=a @ {t}")
                            }
                        })
                        .collect(),
                ),
                _ => (n, vec![format!("in=a @ {n}")]),
            };
            let _ = writeln!(out, "% {family}");
            let _ = writeln!(out, "config(eot, {eot}).");
            let _ = writeln!(out, "?-\n  {}.", goals.join(",\n  "));
        }
        Family::HmmRainy | Family::HmmSunny | Family::HmmMixed => {
            out.push_str(HMM);
            out.push('\n');
            let evidence: Vec<String> = hmm_evidence(family, n)
                .into_iter()
                .map(|(t, v)| format!("obs={v} @ {t}"))
                .collect();
            let _ = writeln!(out, "% {family}");
            let _ = writeln!(out, "config(eot, {n}).");
            if evidence.is_empty() {
                let _ = writeln!(out, "?-\n  state=S @ {n}.");
            } else {
                let _ = writeln!(out, "?-\n  state=S @ {n}\n  |\n  {}.", evidence.join(",\n  "));
            }
        }
    }
    out
}
