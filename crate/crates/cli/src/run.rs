use std::fmt::Write as _;

use ordrank::chain::{ChainDescriptor, ChainShift, FixedPoints, Orientation, ShiftMap};
use ordrank::construct::{
    build_fixed_point_example, build_omega_increasing_example, oracle_verify_rank_correspondences,
    oracle_verify_theorem3, OracleReport, Recipe, RankReport, RelationKind,
};
use ordrank::field::AutomorphismTower;
use ordrank::rank::{principal_rank_of, rank_of, RankDescriptor};
use ordrank::rational::int;
use serde_json::{json, Value};

use crate::parse::{render, Command, Invocation, Suite, Which};

/// The result of running an invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// 0 on success, 1 when an oracle check fails, 2 on invalid input.
    pub exit_code: i32,
    /// The machine report; empty when the invocation failed.
    pub json: String,
    /// A human-readable summary.
    pub prose: String,
}

type Report = Result<(Value, String), ordrank::Error>;

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
}

pub fn run(inv: &Invocation) -> Outcome {
    let line = render(inv);
    if let Command::Verify { suite, n, m } = &inv.command {
        return match verify(*suite, *n, *m, inv.cap) {
            Ok(report) => Outcome {
                exit_code: if report.passed() { 0 } else { 1 },
                json: report.to_json_lines(),
                prose: verify_prose(&line, &report),
            },
            Err(e) => failure(e),
        };
    }
    let result = match &inv.command {
        Command::Construct { recipe, m, eta } => construct(*recipe, *m, eta.clone()),
        Command::Classify { chain, shift } => classify(chain, shift),
        Command::Rank { chain, shift, which } => rank(chain, shift.as_ref(), *which),
        Command::Quotient { chain, shift } => quotient(chain, shift, inv.cap),
        Command::Verify { .. } => unreachable!("handled above"),
    };
    match result {
        Ok((mut value, prose)) => {
            value
                .as_object_mut()
                .expect("reports are objects")
                .insert("invocation".into(), Value::String(line));
            Outcome {
                exit_code: 0,
                json: pretty(&value),
                prose,
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: ordrank::Error) -> Outcome {
    Outcome {
        exit_code: 2,
        json: String::new(),
        prose: format!("error: {e}\n"),
    }
}

fn rank_lines(ranks: &[&RankDescriptor]) -> String {
    ranks.iter().map(|r| format!("  {r}\n")).collect()
}

fn construct(recipe: Recipe, m: usize, eta: Option<ShiftMap>) -> Report {
    let ex = match recipe {
        Recipe::Omega => build_omega_increasing_example(m)?,
        Recipe::FixedPoint => build_fixed_point_example(m, eta.unwrap_or(ShiftMap::Scale(int(2))))?,
    };
    let c = ex.classification();
    let mut prose = format!("{recipe} construction with m = {m}: Γ = {}, σ_Γ = {}\n", ex.chain(), ex.shift().map());
    let _ = writeln!(
        prose,
        "  isometry: {}\n  weak isometry: {}\n  ω-increasing: {}\n  square growth: {}",
        c.isometry, c.weak_isometry, c.omega_increasing, c.square_growth
    );
    prose += &rank_lines(&ex.ranks().all());
    Ok((serde_json::to_value(&ex).expect("constructions serialize"), prose))
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::RightShift => "right-shift",
        Orientation::LeftShift => "left-shift",
        Orientation::Neutral => "neutral",
    }
}

fn fixed_points_value(shift: &ChainShift) -> Value {
    match shift.fixed_points() {
        FixedPoints::Everything => Value::String("everything".into()),
        FixedPoints::Points(ps) => Value::Array(ps.iter().map(|p| Value::String(p.to_string())).collect()),
    }
}

fn classify(chain: &ChainDescriptor, map: &ShiftMap) -> Report {
    let shift = ChainShift::new(chain.clone(), map.clone())?;
    let orientation = orientation_name(shift.orientation());
    let strict = shift.is_strict_left_shift();
    let mut prose = format!("{map} on {chain}: {orientation}, strict left shift: {strict}\n");
    let classification = if shift.is_bijective() {
        let c = AutomorphismTower::from_chain_shift(&shift)?.classify()?;
        let _ = writeln!(
            prose,
            "  lifted automorphism: isometry {}, weak isometry {}, ω-increasing {}, square growth {}",
            c.isometry, c.weak_isometry, c.omega_increasing, c.square_growth
        );
        serde_json::to_value(&c).expect("classifications serialize")
    } else {
        prose += "  not bijective: no lifted field automorphism\n";
        Value::Null
    };
    Ok((
        json!({
            "chain": chain.to_string(),
            "shift": map.to_string(),
            "orientation": orientation,
            "strict_left_shift": strict,
            "bijective": shift.is_bijective(),
            "fixed_points": fixed_points_value(&shift),
            "classification": classification,
        }),
        prose,
    ))
}

fn rank(chain: &ChainDescriptor, map: Option<&ShiftMap>, which: Which) -> Report {
    let all: Vec<RankDescriptor> = match map {
        Some(map) => {
            let shift = ChainShift::new(chain.clone(), map.clone())?;
            RankReport::of(&shift)?.all().into_iter().cloned().collect()
        }
        None => {
            if !matches!(which, Which::All | Which::Rank | Which::Principal) {
                return Err(ordrank::Error::UnsupportedShape("σ-ranks need --shift".into()));
            }
            vec![rank_of(chain)?, principal_rank_of(chain)?]
        }
    };
    let wanted = |i: usize| match which {
        Which::All => true,
        Which::Rank => i == 0,
        Which::Principal => i == 1,
        Which::Sigma => i == 2,
        Which::SigmaPrincipal => i == 3,
        Which::Intersection => i == 4,
    };
    let chosen: Vec<&RankDescriptor> = all.iter().enumerate().filter(|(i, _)| wanted(*i)).map(|(_, r)| r).collect();
    let prose = format!("ranks of {chain}:\n{}", rank_lines(&chosen));
    Ok((
        json!({
            "chain": chain.to_string(),
            "shift": map.map(ToString::to_string),
            "ranks": serde_json::to_value(&chosen).expect("ranks serialize"),
        }),
        prose,
    ))
}

fn quotient(chain: &ChainDescriptor, map: &ShiftMap, cap: u32) -> Report {
    let shift = ChainShift::new(chain.clone(), map.clone())?;
    let canonical = shift.canonical_quotient();
    let reps = shift.class_representatives();
    if canonical.is_none() && reps.is_none() {
        return Err(ordrank::Error::NoCanonicalQuotient(format!("{chain} under {map}")));
    }
    let mut prose = format!("{} ≅ {}\n", shift.quotient(), canonical.as_ref().map_or("?".into(), ToString::to_string));
    if let Some(reps) = &reps {
        for (i, r) in reps.iter().enumerate() {
            let _ = writeln!(prose, "  class {i}: [{r}]");
        }
        debug_assert!(reps.iter().enumerate().all(|(i, r)| shift.class_index(r, cap) == Ok(Some(i))));
    }
    Ok((
        json!({
            "chain": chain.to_string(),
            "shift": map.to_string(),
            "quotient": shift.quotient().to_string(),
            "canonical": canonical.map(|c| c.to_string()),
            "classes": reps.map(|rs| rs.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }),
        prose,
    ))
}

fn verify(suite: Suite, n: Option<usize>, m: Option<usize>, cap: u32) -> Result<OracleReport, ordrank::Error> {
    let mut report = OracleReport::default();
    if matches!(suite, Suite::Correspondences | Suite::All) {
        for k in 1..=n.unwrap_or(8) {
            report.extend(oracle_verify_rank_correspondences(k)?);
        }
    }
    if matches!(suite, Suite::Theorem3 | Suite::All) {
        let finite = ChainShift::identity(ChainDescriptor::Finite(n.unwrap_or(3).min(6)));
        report.extend(oracle_verify_theorem3(&finite, RelationKind::Mult, cap)?);
        let omega = build_omega_increasing_example(m.unwrap_or(2))?;
        report.extend(oracle_verify_theorem3(omega.shift(), RelationKind::Sigma, cap)?);
    }
    Ok(report)
}

fn verify_prose(line: &str, report: &OracleReport) -> String {
    let mut prose = format!("{line}: {report}\n");
    for f in report.failures() {
        let _ = writeln!(
            prose,
            "  FAIL {} {}: {}",
            f.case_id,
            f.property,
            f.witness.as_deref().unwrap_or("")
        );
    }
    prose
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn go(line: &str) -> Outcome {
        run(&parse(line).unwrap())
    }

    #[test]
    fn omega_construction_report() {
        let out = go("construct omega --m 3");
        assert_eq!(out.exit_code, 0);
        let v: Value = serde_json::from_str(&out.json).unwrap();
        assert_eq!(v["ranks"]["principal_sigma_rank"]["order_type"], "finite(3)");
        assert_eq!(v["invocation"], "construct omega --m 3");
    }

    #[test]
    fn classify_translation() {
        let out = go("classify --chain Q --shift translate(-1/1)");
        assert_eq!(out.exit_code, 0);
        let v: Value = serde_json::from_str(&out.json).unwrap();
        assert_eq!(v["strict_left_shift"], true);
        assert_eq!(v["classification"]["omega_increasing"]["verdict"], "proven");
    }

    #[test]
    fn verify_small_correspondences() {
        let out = go("verify correspondences --n 3");
        assert_eq!(out.exit_code, 0, "{}", out.prose);
        assert!(out.json.lines().all(|l| l.contains("\"status\":\"pass\"")));
    }

    #[test]
    fn domain_errors_exit_two() {
        assert_eq!(go("classify --chain Qnn --shift translate(1)").exit_code, 2);
        assert_eq!(go("construct fixedpoint --m 2 --eta identity").exit_code, 2);
        assert_eq!(go("verify correspondences --n 9").exit_code, 2);
        assert_eq!(go("rank --chain Q --which sigma").exit_code, 2);
    }

    #[test]
    fn quotient_lists_classes() {
        let out = go("quotient --chain concat(finite(3),Q) --shift percopy(translate(-1/1))");
        let v: Value = serde_json::from_str(&out.json).unwrap();
        assert_eq!(v["canonical"], "finite(3)");
        assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    }
}
