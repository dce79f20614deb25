use crate::logic::{Rule, Term};
use crate::parser::{parse_program, SourceProgram};
use crate::strat::{
    build_stratification, check_time_constrained, time_relation, RuleInfo, Schedule, Stratification, StratumId, TimeRel,
};
use crate::Error;

/// A checked program: range-restricted rules, their time-constraint analysis, and the
/// predicate stratification.
#[derive(Clone, Debug)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub infos: Vec<RuleInfo>,
    pub strat: Stratification,
    /// Strata whose rules can feed each other at the same time point; these are swept
    /// repeatedly until nothing new is derived.
    pub recursive: Vec<bool>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Result<Program, Error> {
        let infos = rules
            .iter()
            .map(check_time_constrained)
            .collect::<Result<Vec<_>, _>>()?;
        let strat = build_stratification(&rules, &infos)?;
        let mut recursive = vec![false; strat.len()];
        for (rule, info) in rules.iter().zip(&infos) {
            let Some(s) = rule_stratum(rule, &strat) else { continue };
            let same_time = |t: &Term| match &info.schedule {
                Schedule::Now { var, .. } => {
                    matches!(time_relation(t, var, &[]), TimeRel::Eq | TimeRel::Le | TimeRel::Unknown)
                }
                Schedule::Head => t == rule.head.time() || !t.is_ground(),
                Schedule::Future { .. } => false,
            };
            for a in rule.body.positives.iter().filter(|a| !a.is_builtin()) {
                if strat.stratum_of(a.pred_name().unwrap()) == Some(s) && same_time(a.time().unwrap()) {
                    recursive[s] = true;
                }
            }
        }
        Ok(Program {
            rules,
            infos,
            strat,
            recursive,
        })
    }

    pub fn from_source(src: &SourceProgram) -> Result<Program, Error> {
        Program::new(src.rules.clone())
    }

    pub fn parse(text: &str) -> Result<Program, Error> {
        Program::from_source(&parse_program(text)?)
    }
}

/// Stratum of the predicates defined by a rule's head.
pub fn rule_stratum(rule: &Rule, strat: &Stratification) -> Option<StratumId> {
    rule.head.preds().first().and_then(|p| strat.stratum_of(p))
}
