//! Seeded Monte Carlo replication of the nested-population sampling
//! study: macro-populations with a built-in group difference, research
//! populations extracted from them anew for every round, and one
//! independent sample per sampling condition, each tested with a
//! one-tailed pooled t test.
//!
//! A sample counts as a *capture* when its test is significant at the
//! configured level AND its effect size 2t/sqrt(df) exceeds the
//! configured threshold; significant-but-small and large-but-
//! nonsignificant samples are both ignored.
//!
//! Work is embarrassingly parallel across (study, population) pairs.
//! Every pair owns a derived RNG substream, so the parallel and
//! sequential drivers produce identical output for identical configs.

mod rng;
mod ttest;

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sensitiveness::Tails;

pub use rng::substream;
pub use ttest::{TTestResult, two_sample_t};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A macro-population: two equal-sized groups of normal draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroPopulation {
    /// Size of EACH group (the macro-population totals twice this).
    pub group_size: usize,
    pub mean1: f64,
    pub mean2: f64,
    pub sd: f64,
}

/// One study's extraction rule: which macro-population its research
/// populations come from and their total size (split equally).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub macro_index: usize,
    /// Total research-population size; each group gets half.
    pub population_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub seed: u64,
    pub macro_pops: Vec<MacroPopulation>,
    /// One entry per study.
    pub extraction_plan: Vec<Extraction>,
    pub n_studies: usize,
    pub pops_per_study: usize,
    /// Condition name -> total sample size (even; equal groups).
    pub condition_ns: BTreeMap<String, usize>,
    #[serde(default = "default_sig")]
    pub sig: f64,
    /// The study's t tests are one-tailed by construction.
    #[serde(default = "default_tails")]
    pub tails: Tails,
    /// Capture threshold on the sample effect size d.
    #[serde(default = "default_mes_threshold")]
    pub mes_threshold: f64,
}

fn default_sig() -> f64 {
    0.05
}

fn default_tails() -> Tails {
    Tails::One
}

fn default_mes_threshold() -> f64 {
    0.495
}

impl SimulationConfig {
    /// Full-scale configuration: four macro-populations (group sizes
    /// 10000/5000/2000/1000) with N(10,1) vs N(10.5,1) groups, eight
    /// studies of 43 populations, and the PWR=102 / SNS=48 / THMB=30
    /// sampling conditions.
    pub fn full_scale(seed: u64) -> Self {
        let macro_pops = [10_000, 5_000, 2_000, 1_000]
            .into_iter()
            .map(|group_size| MacroPopulation {
                group_size,
                mean1: 10.0,
                mean2: 10.5,
                sd: 1.0,
            })
            .collect();
        let extraction_plan = vec![
            Extraction { macro_index: 1, population_size: 2000 },
            Extraction { macro_index: 0, population_size: 2000 },
            Extraction { macro_index: 2, population_size: 1000 },
            Extraction { macro_index: 2, population_size: 200 },
            Extraction { macro_index: 3, population_size: 200 },
            Extraction { macro_index: 0, population_size: 1000 },
            Extraction { macro_index: 1, population_size: 500 },
            Extraction { macro_index: 3, population_size: 500 },
        ];
        SimulationConfig {
            seed,
            macro_pops,
            extraction_plan,
            n_studies: 8,
            pops_per_study: 43,
            condition_ns: default_conditions(),
            sig: default_sig(),
            tails: default_tails(),
            mes_threshold: default_mes_threshold(),
        }
    }

    /// Desk-scale configuration for fast test runs: macro-population
    /// group sizes capped at 2000 and two studies instead of eight.
    /// Conditions and thresholds are unchanged.
    pub fn desk_scale(seed: u64) -> Self {
        let macro_pops = [2_000, 1_000, 400, 200]
            .into_iter()
            .map(|group_size| MacroPopulation {
                group_size,
                mean1: 10.0,
                mean2: 10.5,
                sd: 1.0,
            })
            .collect();
        let extraction_plan = vec![
            Extraction { macro_index: 0, population_size: 400 },
            Extraction { macro_index: 1, population_size: 400 },
        ];
        SimulationConfig {
            seed,
            macro_pops,
            extraction_plan,
            n_studies: 2,
            pops_per_study: 43,
            condition_ns: default_conditions(),
            sig: default_sig(),
            tails: default_tails(),
            mes_threshold: default_mes_threshold(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: SimulationConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid JSON config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: SimulationConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("invalid TOML config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.macro_pops.is_empty() {
            return Err(Error::Config("at least one macro-population required".into()));
        }
        for (i, m) in self.macro_pops.iter().enumerate() {
            if m.group_size < 2 {
                return Err(Error::Config(format!(
                    "macro-population {i}: group_size must be >= 2"
                )));
            }
            if !m.mean1.is_finite() || !m.mean2.is_finite() {
                return Err(Error::Config(format!(
                    "macro-population {i}: means must be finite"
                )));
            }
            if !m.sd.is_finite() || m.sd <= 0.0 {
                return Err(Error::Config(format!(
                    "macro-population {i}: sd must be positive"
                )));
            }
        }
        if self.n_studies == 0 {
            return Err(Error::Config("n_studies must be >= 1".into()));
        }
        if self.pops_per_study == 0 {
            return Err(Error::Config("pops_per_study must be >= 1".into()));
        }
        if self.extraction_plan.len() != self.n_studies {
            return Err(Error::Config(format!(
                "extraction_plan has {} entries but n_studies = {}",
                self.extraction_plan.len(),
                self.n_studies
            )));
        }
        for (i, e) in self.extraction_plan.iter().enumerate() {
            let Some(m) = self.macro_pops.get(e.macro_index) else {
                return Err(Error::Config(format!(
                    "extraction {i}: macro_index {} out of range",
                    e.macro_index
                )));
            };
            if e.population_size < 4 || e.population_size % 2 != 0 {
                return Err(Error::Config(format!(
                    "extraction {i}: population_size must be an even number >= 4"
                )));
            }
            if e.population_size / 2 > m.group_size {
                return Err(Error::Config(format!(
                    "extraction {i}: population group of {} exceeds macro group of {}",
                    e.population_size / 2,
                    m.group_size
                )));
            }
        }
        if self.condition_ns.is_empty() {
            return Err(Error::Config("at least one condition required".into()));
        }
        for (name, &n) in &self.condition_ns {
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::Config(format!(
                    "condition name {name:?} must be nonempty and use only [A-Za-z0-9_-]"
                )));
            }
            if n < 4 || n % 2 != 0 {
                return Err(Error::Config(format!(
                    "condition {name}: sample size must be an even number >= 4"
                )));
            }
            for (i, e) in self.extraction_plan.iter().enumerate() {
                if n > e.population_size {
                    return Err(Error::Config(format!(
                        "condition {name}: sample of {n} exceeds population of {} (study {i})",
                        e.population_size
                    )));
                }
            }
        }
        if !self.sig.is_finite() || self.sig <= 0.0 || self.sig > 0.5 {
            return Err(Error::Config(format!(
                "sig must be in (0, 0.5], got {}",
                self.sig
            )));
        }
        if self.tails != Tails::One {
            return Err(Error::Config(
                "the simulation's t tests are one-tailed; tails must be \"one\"".into(),
            ));
        }
        if !self.mes_threshold.is_finite() || self.mes_threshold < 0.0 {
            return Err(Error::Config("mes_threshold must be >= 0".into()));
        }
        Ok(())
    }
}

fn default_conditions() -> BTreeMap<String, usize> {
    [("PWR", 102), ("SNS", 48), ("THMB", 30)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Group means, SDs, and pooled-SD effect size of one research population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationSummary {
    pub mean1: f64,
    pub sd1: f64,
    pub mean2: f64,
    pub sd2: f64,
    pub d: f64,
}

/// Per-study results: capture and significance counts per condition,
/// plus the descriptives of every research population tested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyOutcome {
    pub study_index: usize,
    /// Total size of each research population in this study.
    pub research_n: usize,
    /// Condition -> number of samples that were significant AND above
    /// the effect-size threshold.
    pub captures: BTreeMap<String, u32>,
    /// Condition -> number of significant samples regardless of size.
    pub significant_any: BTreeMap<String, u32>,
    pub populations: Vec<PopulationSummary>,
}

/// One condition's drawn sample and its test, as used for counting.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionDraw {
    pub condition: String,
    pub group_a: Vec<f64>,
    pub group_b: Vec<f64>,
    pub test: TTestResult,
    pub significant: bool,
    pub captured: bool,
}

/// Draw one equal-split sample per condition from a research population
/// and run the one-tailed t test on each. Exposed so single populations
/// can be driven directly (and audited) without the extraction pipeline.
pub fn sample_and_test_population(
    pop_group1: &[f64],
    pop_group2: &[f64],
    condition_ns: &BTreeMap<String, usize>,
    sig: f64,
    mes_threshold: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ConditionDraw>> {
    let mut draws = Vec::with_capacity(condition_ns.len());
    for (name, &n) in condition_ns {
        if n % 2 != 0 || n < 4 {
            return Err(Error::Config(format!(
                "condition {name}: sample size must be an even number >= 4"
            )));
        }
        let half = n / 2;
        if half > pop_group1.len() || half > pop_group2.len() {
            return Err(Error::Config(format!(
                "condition {name}: sample group of {half} exceeds population groups of {} and {}",
                pop_group1.len(),
                pop_group2.len()
            )));
        }
        let group_a = rng::sample_without_replacement(rng, pop_group1, half);
        let group_b = rng::sample_without_replacement(rng, pop_group2, half);
        let test = two_sample_t(&group_a, &group_b)?;
        let significant = test.p_one_tailed <= sig;
        let captured = significant && test.d > mes_threshold;
        draws.push(ConditionDraw {
            condition: name.clone(),
            group_a,
            group_b,
            test,
            significant,
            captured,
        });
    }
    Ok(draws)
}

struct MacroData {
    group1: Vec<f64>,
    group2: Vec<f64>,
}

fn generate_one_macro(config: &SimulationConfig, index: usize) -> MacroData {
    let m = &config.macro_pops[index];
    let mut rng = rng::substream(config.seed, &[rng::TAG_MACRO, index as u64]);
    MacroData {
        group1: rng::normal_vec(&mut rng, m.mean1, m.sd, m.group_size),
        group2: rng::normal_vec(&mut rng, m.mean2, m.sd, m.group_size),
    }
}

#[cfg(feature = "parallel")]
fn generate_macros_par(config: &SimulationConfig) -> Vec<MacroData> {
    (0..config.macro_pops.len())
        .into_par_iter()
        .map(|i| generate_one_macro(config, i))
        .collect()
}

fn generate_macros(config: &SimulationConfig) -> Vec<MacroData> {
    (0..config.macro_pops.len())
        .map(|i| generate_one_macro(config, i))
        .collect()
}

struct PopulationResult {
    study: usize,
    summary: PopulationSummary,
    /// (significant, captured) per condition, in condition-name order.
    flags: Vec<(bool, bool)>,
}

fn descriptives(group1: &[f64], group2: &[f64]) -> PopulationSummary {
    let stats = |xs: &[f64]| {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
        (mean, (ss / (n - 1.0)).sqrt(), ss)
    };
    let (mean1, sd1, ss1) = stats(group1);
    let (mean2, sd2, ss2) = stats(group2);
    let df = (group1.len() + group2.len() - 2) as f64;
    let pooled = ((ss1 + ss2) / df).sqrt().max(f64::MIN_POSITIVE.sqrt());
    PopulationSummary {
        mean1,
        sd1,
        mean2,
        sd2,
        d: (mean2 - mean1) / pooled,
    }
}

fn run_population(
    config: &SimulationConfig,
    macros: &[MacroData],
    study: usize,
    pop: usize,
) -> Result<PopulationResult> {
    let mut rng = rng::substream(
        config.seed,
        &[rng::TAG_POPULATION, study as u64, pop as u64],
    );
    let extraction = &config.extraction_plan[study];
    let source = &macros[extraction.macro_index];
    let half = extraction.population_size / 2;

    let group1 = rng::sample_without_replacement(&mut rng, &source.group1, half);
    let group2 = rng::sample_without_replacement(&mut rng, &source.group2, half);
    let summary = descriptives(&group1, &group2);

    let draws = sample_and_test_population(
        &group1,
        &group2,
        &config.condition_ns,
        config.sig,
        config.mes_threshold,
        &mut rng,
    )?;
    Ok(PopulationResult {
        study,
        summary,
        flags: draws.iter().map(|d| (d.significant, d.captured)).collect(),
    })
}

fn fold_results(
    config: &SimulationConfig,
    results: Vec<PopulationResult>,
) -> Vec<StudyOutcome> {
    let names: Vec<&String> = config.condition_ns.keys().collect();
    let mut outcomes: Vec<StudyOutcome> = (0..config.n_studies)
        .map(|s| StudyOutcome {
            study_index: s,
            research_n: config.extraction_plan[s].population_size,
            captures: names.iter().map(|n| ((*n).clone(), 0u32)).collect(),
            significant_any: names.iter().map(|n| ((*n).clone(), 0u32)).collect(),
            populations: Vec::with_capacity(config.pops_per_study),
        })
        .collect();

    for r in results {
        let outcome = &mut outcomes[r.study];
        outcome.populations.push(r.summary);
        for (name, (significant, captured)) in names.iter().zip(r.flags) {
            if significant {
                *outcome.significant_any.get_mut(*name).expect("known key") += 1;
            }
            if captured {
                *outcome.captures.get_mut(*name).expect("known key") += 1;
            }
        }
    }
    outcomes
}

/// Run the configured study. Dispatches to the parallel driver when the
/// `parallel` feature is enabled, the sequential one otherwise; both
/// produce identical output for identical configs.
pub fn run_simulation(config: &SimulationConfig) -> Result<Vec<StudyOutcome>> {
    #[cfg(feature = "parallel")]
    {
        run_simulation_par(config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_simulation_seq(config)
    }
}

fn task_list(config: &SimulationConfig) -> Vec<(usize, usize)> {
    (0..config.n_studies)
        .flat_map(|s| (0..config.pops_per_study).map(move |p| (s, p)))
        .collect()
}

/// Sequential driver.
pub fn run_simulation_seq(config: &SimulationConfig) -> Result<Vec<StudyOutcome>> {
    config.validate()?;
    let macros = generate_macros(config);
    let results = task_list(config)
        .into_iter()
        .map(|(s, p)| run_population(config, &macros, s, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_results(config, results))
}

/// Rayon driver: data-parallel over (study, population) pairs.
#[cfg(feature = "parallel")]
pub fn run_simulation_par(config: &SimulationConfig) -> Result<Vec<StudyOutcome>> {
    config.validate()?;
    let macros = generate_macros_par(config);
    let results = task_list(config)
        .into_par_iter()
        .map(|(s, p)| run_population(config, &macros, s, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_results(config, results))
}

/// Per-study aggregate used by tabular output: descriptive means across
/// the study's populations, percent significant, and capture counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub study_index: usize,
    pub research_n: usize,
    pub populations: usize,
    pub mean1: f64,
    pub sd1: f64,
    pub mean2: f64,
    pub sd2: f64,
    pub d: f64,
    pub pct_significant: BTreeMap<String, f64>,
    pub captures: BTreeMap<String, u32>,
}

pub fn summarize_studies(outcomes: &[StudyOutcome]) -> Vec<StudySummary> {
    outcomes
        .iter()
        .map(|o| {
            let k = o.populations.len().max(1) as f64;
            let avg = |f: fn(&PopulationSummary) -> f64| {
                o.populations.iter().map(f).sum::<f64>() / k
            };
            let pops = o.populations.len().max(1) as f64;
            StudySummary {
                study_index: o.study_index,
                research_n: o.research_n,
                populations: o.populations.len(),
                mean1: avg(|p| p.mean1),
                sd1: avg(|p| p.sd1),
                mean2: avg(|p| p.mean2),
                sd2: avg(|p| p.sd2),
                d: avg(|p| p.d),
                pct_significant: o
                    .significant_any
                    .iter()
                    .map(|(name, &c)| (name.clone(), 100.0 * c as f64 / pops))
                    .collect(),
                captures: o.captures.clone(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(seed: u64) -> SimulationConfig {
        let mut config = SimulationConfig::desk_scale(seed);
        config.pops_per_study = 6;
        config
    }

    #[test]
    fn defaults_validate() {
        SimulationConfig::full_scale(1).validate().unwrap();
        SimulationConfig::desk_scale(1).validate().unwrap();
    }

    #[test]
    fn validation_catches_bad_configs() {
        let mut c = SimulationConfig::desk_scale(1);
        c.extraction_plan[0].population_size = 30_000;
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.condition_ns.insert("ODD".into(), 31);
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.condition_ns.insert("BIG".into(), 600);
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.extraction_plan.pop();
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.extraction_plan[1].macro_index = 11;
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.sig = 0.7;
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = SimulationConfig::desk_scale(1);
        c.tails = Tails::Two;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn config_round_trips_through_json_and_toml() {
        let config = SimulationConfig::desk_scale(11);
        let json = serde_json::to_string(&config).unwrap();
        assert_eq!(SimulationConfig::from_json_str(&json).unwrap(), config);
        let toml_text = toml::to_string(&config).unwrap();
        assert_eq!(SimulationConfig::from_toml_str(&toml_text).unwrap(), config);
    }

    #[test]
    fn outcome_shape_and_count_invariants() {
        let config = tiny_config(5);
        let outcomes = run_simulation_seq(&config).unwrap();
        assert_eq!(outcomes.len(), config.n_studies);
        for (s, o) in outcomes.iter().enumerate() {
            assert_eq!(o.study_index, s);
            assert_eq!(o.populations.len(), config.pops_per_study);
            for name in config.condition_ns.keys() {
                let f = o.captures[name];
                let sig = o.significant_any[name];
                assert!(f <= sig, "captures exceed significant count");
                assert!(sig as usize <= config.pops_per_study);
            }
        }
    }

    #[test]
    fn identical_configs_are_bit_identical() {
        let config = tiny_config(17);
        let a = run_simulation_seq(&config).unwrap();
        let b = run_simulation_seq(&config).unwrap();
        assert_eq!(a, b);
        let c = run_simulation_seq(&tiny_config(18)).unwrap();
        assert_ne!(a, c);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_equals_sequential() {
        let config = tiny_config(23);
        let seq = run_simulation_seq(&config).unwrap();
        let par = run_simulation_par(&config).unwrap();
        assert_eq!(seq, par);
    }

    /// Every capture decision must agree with a brute-force recomputation
    /// of the t test from the drawn samples (direct mean/variance
    /// formulas; significance judged against the critical value, the dual
    /// route to the p-value comparison).
    #[test]
    fn capture_decisions_match_brute_force_oracle() {
        let conditions = default_conditions();
        for seed in [3u64, 4, 5, 6] {
            let mut rng = substream(seed, &[rng::TAG_POPULATION, 0, 0]);
            let mut big = substream(seed, &[rng::TAG_MACRO, 0]);
            let pop1 = rng::normal_vec(&mut big, 10.0, 1.0, 300);
            let pop2 = rng::normal_vec(&mut big, 10.5, 1.0, 300);
            let draws =
                sample_and_test_population(&pop1, &pop2, &conditions, 0.05, 0.495, &mut rng)
                    .unwrap();
            assert_eq!(draws.len(), 3);
            for d in draws {
                assert_eq!(d.group_a.len(), conditions[&d.condition] / 2);
                assert_eq!(d.group_b.len(), conditions[&d.condition] / 2);

                // oracle: plain sums, no shared code path with ttest.rs
                let (na, nb) = (d.group_a.len() as f64, d.group_b.len() as f64);
                let ma = d.group_a.iter().sum::<f64>() / na;
                let mb = d.group_b.iter().sum::<f64>() / nb;
                let ssa: f64 = d.group_a.iter().map(|x| (x - ma) * (x - ma)).sum();
                let ssb: f64 = d.group_b.iter().map(|x| (x - mb) * (x - mb)).sum();
                let df = na + nb - 2.0;
                let t_oracle =
                    (mb - ma) / ((ssa + ssb) / df * (1.0 / na + 1.0 / nb)).sqrt();
                let d_oracle = 2.0 * t_oracle / df.sqrt();
                assert!((t_oracle - d.test.t).abs() < 1e-10);
                assert!((d_oracle - d.test.d).abs() < 1e-10);

                let t_crit = crate::DistributionParams::student_t(df as u64)
                    .unwrap()
                    .quantile(0.95)
                    .unwrap();
                assert_eq!(d.significant, t_oracle >= t_crit, "{}", d.condition);
                assert_eq!(
                    d.captured,
                    (t_oracle >= t_crit) && d_oracle > 0.495,
                    "{}",
                    d.condition
                );
            }
        }
    }

    /// With equal-mean populations the one-tailed significance rate must
    /// sit within 3 binomial SEs of the nominal level. Over 1e4+ tests
    /// that band is [.0437, .0563].
    #[test]
    fn null_significance_rate_calibrated() {
        let mut config = SimulationConfig::desk_scale(29);
        for m in &mut config.macro_pops {
            m.mean2 = m.mean1;
        }
        config.n_studies = 1;
        config.extraction_plan.truncate(1);
        config.pops_per_study = 3400; // 3 conditions -> 10,200 tests
        let outcomes = run_simulation_seq(&config).unwrap();
        let tests = 3.0 * config.pops_per_study as f64;
        let sig: u32 = outcomes
            .iter()
            .flat_map(|o| o.significant_any.values())
            .sum();
        let rate = sig as f64 / tests;
        let se = (0.05 * 0.95 / tests).sqrt();
        assert!(
            (rate - 0.05).abs() <= 3.0 * se,
            "null significance rate {rate:.4} outside 0.05 +- {:.4}",
            3.0 * se
        );
        // captures cannot exceed the significant counts anywhere
        for o in &outcomes {
            for (name, &f) in &o.captures {
                assert!(f <= o.significant_any[name]);
            }
        }
    }

    #[test]
    fn oversized_sample_rejected_before_work() {
        let mut config = tiny_config(1);
        config.condition_ns.insert("HUGE".into(), 500);
        assert!(matches!(
            run_simulation_seq(&config),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn summaries_track_population_descriptives() {
        let config = tiny_config(31);
        let outcomes = run_simulation_seq(&config).unwrap();
        let summaries = summarize_studies(&outcomes);
        assert_eq!(summaries.len(), outcomes.len());
        for (s, o) in summaries.iter().zip(&outcomes) {
            assert_eq!(s.populations, o.populations.len());
            // group means should hover near the generating parameters
            assert!((s.mean1 - 10.0).abs() < 0.5, "mean1 {}", s.mean1);
            assert!((s.mean2 - 10.5).abs() < 0.5, "mean2 {}", s.mean2);
            assert!(s.d > 0.0 && s.d < 1.1, "d {}", s.d);
            for name in config.condition_ns.keys() {
                assert_eq!(
                    s.pct_significant[name],
                    100.0 * o.significant_any[name] as f64 / config.pops_per_study as f64
                );
            }
        }
    }
}
