//! Frequency analysis of capture counts: two-cell equal-expectation
//! goodness-of-fit between pairs of sampling conditions, plus the
//! within-study share of captures per condition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulation::StudyOutcome;
use crate::special;

/// Chi-square goodness-of-fit comparison of two capture counts.
///
/// With equal expected frequencies on two cells the statistic reduces to
/// (f1 − f2)² / (f1 + f2); w = sqrt(chi2 / (f1 + f2)); p is the upper
/// tail of chi-square with 1 df. No continuity correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub label: String,
    pub f1: u64,
    pub f2: u64,
    pub chi2: f64,
    pub w: f64,
    pub p: f64,
}

/// Equal-expectation two-cell goodness-of-fit on (f1, f2).
pub fn pairwise_gof(f1: u64, f2: u64) -> Result<PairwiseComparison> {
    if f1 + f2 == 0 {
        return Err(Error::Degenerate(
            "pairwise goodness-of-fit needs at least one observation".into(),
        ));
    }
    let n = (f1 + f2) as f64;
    let diff = f1 as f64 - f2 as f64;
    let chi2 = diff * diff / n;
    let w = (chi2 / n).sqrt();
    // upper tail of chi-square(1) taken directly, so huge statistics keep
    // a positive (if denormal-small) p instead of rounding to zero
    let p = special::reg_inc_gamma_upper(0.5, 0.5 * chi2)?.max(f64::MIN_POSITIVE);
    Ok(PairwiseComparison {
        label: String::new(),
        f1,
        f2,
        chi2,
        w,
        p,
    })
}

/// As [`pairwise_gof`], labelled "name1-name2".
pub fn compare_conditions(
    name1: &str,
    f1: u64,
    name2: &str,
    f2: u64,
) -> Result<PairwiseComparison> {
    let mut cmp = pairwise_gof(f1, f2)?;
    cmp.label = format!("{name1}-{name2}");
    Ok(cmp)
}

/// Each condition's share of the total captures, in percent.
pub fn condition_shares(counts: &BTreeMap<String, u64>) -> Result<BTreeMap<String, f64>> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::Degenerate(
            "cannot take shares of all-zero capture counts".into(),
        ));
    }
    Ok(counts
        .iter()
        .map(|(name, &f)| (name.clone(), 100.0 * f as f64 / total as f64))
        .collect())
}

/// Aggregate view over a whole simulation: total captures, shares, and
/// all pairwise comparisons, overall and per study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureAnalysis {
    pub totals: BTreeMap<String, u64>,
    pub shares: BTreeMap<String, f64>,
    pub pairwise: Vec<PairwiseComparison>,
    pub per_study: Vec<StudyAnalysis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyAnalysis {
    pub study_index: usize,
    pub captures: BTreeMap<String, u64>,
    pub shares: BTreeMap<String, f64>,
    pub pairwise: Vec<PairwiseComparison>,
}

fn all_pairs(counts: &BTreeMap<String, u64>) -> Result<Vec<PairwiseComparison>> {
    let items: Vec<(&String, &u64)> = counts.iter().collect();
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            // A pair with no captures at all carries no information; skip
            // it rather than failing the whole analysis.
            if *items[i].1 + *items[j].1 == 0 {
                continue;
            }
            out.push(compare_conditions(
                items[i].0,
                *items[i].1,
                items[j].0,
                *items[j].1,
            )?);
        }
    }
    Ok(out)
}

/// Analyze capture counts across studies.
pub fn analyze_captures(outcomes: &[StudyOutcome]) -> Result<CaptureAnalysis> {
    if outcomes.is_empty() {
        return Err(Error::Degenerate("no study outcomes to analyze".into()));
    }
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for outcome in outcomes {
        for (name, &f) in &outcome.captures {
            *totals.entry(name.clone()).or_insert(0) += f as u64;
        }
    }
    let shares = condition_shares(&totals)?;
    let pairwise = all_pairs(&totals)?;

    let per_study = outcomes
        .iter()
        .map(|outcome| {
            let captures: BTreeMap<String, u64> = outcome
                .captures
                .iter()
                .map(|(k, &v)| (k.clone(), v as u64))
                .collect();
            Ok(StudyAnalysis {
                study_index: outcome.study_index,
                shares: condition_shares(&captures).unwrap_or_default(),
                pairwise: all_pairs(&captures)?,
                captures,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CaptureAnalysis {
        totals,
        shares,
        pairwise,
        per_study,
    })
}
