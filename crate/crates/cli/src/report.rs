use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use dioph::basis::{build_basis, verify_basis};
use dioph::checks::{run_checks, CheckOptions};
use dioph::matrix::IntMatrix;
use dioph::presentation::{build_presentation, verify_presentation};
use dioph::quotients::{
    check_c_divisibility, compute_c, d_chain, reference_basis, s_mod_si_by_snf, s_mod_ui_by_snf,
};
use dioph::solution::{choose_m, Coefficients, MStrategy};
use dioph::{Int, QuotientStructure};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub text: String,
    pub elementary: String,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
    pub elementary_divisors: BTreeMap<String, Vec<String>>,
}

impl From<&QuotientStructure> for QuotientJson {
    fn from(q: &QuotientStructure) -> Self {
        QuotientJson {
            text: q.to_string(),
            elementary: q.elementary_form(),
            free_rank: q.free_rank,
            invariant_factors: strings(&q.invariant_factors),
            elementary_divisors: q
                .elementary_divisors
                .iter()
                .map(|(p, v)| (p.to_string(), strings(v)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedQuotient {
    pub i: usize,
    #[serde(flatten)]
    pub quotient: QuotientJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quotients {
    #[serde(rename = "S_mod_Si")]
    pub s_mod_si: Vec<IndexedQuotient>,
    #[serde(rename = "S_mod_Ui")]
    pub s_mod_ui: Vec<IndexedQuotient>,
    #[serde(rename = "W_mod_S")]
    pub w_mod_s: QuotientJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub d: usize,
    pub e: usize,
    pub rank: usize,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
    pub relation_matrix: Vec<Vec<String>>,
    pub snf_diagonal: Vec<String>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrixJson {
    pub rows: Vec<Vec<String>>,
    pub divisibility: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    /// Kept under this name for compatibility with existing consumers; holds
    /// the statement that was checked.
    pub paper_ref: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: Option<String>,
    pub m_strategy: String,
    pub bound: u64,
    pub coefficients: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    pub pivot: usize,
    pub basis: Vec<Vec<String>>,
    pub w_coordinates: Vec<Vec<String>>,
    pub det: String,
    pub quotients: Quotients,
    pub d_chain: Option<Vec<String>>,
    pub c_matrix: Option<CMatrixJson>,
    pub presentation: PresentationJson,
    pub checks: Vec<CheckJson>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub strategy: MStrategy,
    pub pivot: Option<usize>,
    pub only_i: Option<usize>,
    pub bound: u64,
}

pub fn strings(v: &[Int]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

pub fn strategy_name(s: MStrategy) -> &'static str {
    match s {
        MStrategy::All => "all",
        MStrategy::GreedyMinimal => "greedy-minimal",
    }
}

pub fn parse_strategy(s: &str) -> Result<MStrategy> {
    match s {
        "all" => Ok(MStrategy::All),
        "greedy-minimal" => Ok(MStrategy::GreedyMinimal),
        _ => bail!("unknown M strategy {s:?}"),
    }
}

pub fn parse_int(s: &str) -> Result<Int> {
    s.trim()
        .parse::<BigInt>()
        .with_context(|| format!("not an integer: {s:?}"))
}

pub fn build_report(c: &Coefficients, opts: &Options, seed: Option<u64>) -> Result<Report> {
    let n = c.n();
    if let Some(i) = opts.only_i {
        c.check_index(i)?;
    }
    let m = choose_m(c, opts.strategy);
    let built = build_basis(c, &m)?;
    let pivot = opts.pivot.unwrap_or(built.pivot);
    c.check_index(pivot)?;
    let cert = verify_basis(c, &built.basis, pivot)
        .map_err(|r| anyhow::anyhow!("basis certificate at pivot {pivot} rejected: {r}"))?;

    let reference = reference_basis(c)?;
    let indices: Vec<usize> = match opts.only_i {
        Some(i) => vec![i],
        None => (1..=n).collect(),
    };
    let mut s_mod_si = Vec::new();
    let mut s_mod_ui = Vec::new();
    for &i in &indices {
        s_mod_si.push(IndexedQuotient {
            i,
            quotient: (&s_mod_si_by_snf(c, i, &reference)?).into(),
        });
        s_mod_ui.push(IndexedQuotient {
            i,
            quotient: (&s_mod_ui_by_snf(c, i, &reference)?).into(),
        });
    }
    let w_mod_s = QuotientStructure::from_relation_matrix(&cert.w_matrix)?;

    let chain_ok = n > 2 && !c.get(1).is_zero();
    let d_chain = if chain_ok {
        Some(strings(d_chain(c)?.values()))
    } else {
        None
    };
    let c_matrix = if chain_ok {
        let cm = compute_c(c)?;
        Some(CMatrixJson {
            divisibility: check_c_divisibility(&cm),
            rows: matrix_rows(&cm),
        })
    } else {
        None
    };

    let p = build_presentation(c, &m);
    let verified = verify_presentation(c, &p);
    let snf = dioph::snf(&p.rel);
    let presentation = PresentationJson {
        d: p.d(),
        e: p.e(),
        rank: snf.rank,
        pairs: p.d_pairs.clone(),
        triples: p.e_triples.clone(),
        relation_matrix: matrix_rows(&p.rel),
        snf_diagonal: strings(&snf.invariant_factors),
        verified: verified.is_ok(),
    };

    let checks = run_checks(
        c,
        &CheckOptions {
            strategy: opts.strategy,
            bound: opts.bound,
            ..CheckOptions::default()
        },
    )
    .into_iter()
    .map(|k| CheckJson {
        name: k.name,
        paper_ref: k.statement.to_string(),
        pass: k.pass,
        detail: k.detail,
    })
    .collect();

    Ok(Report {
        seed: seed.map(|s| s.to_string()),
        m_strategy: strategy_name(opts.strategy).to_string(),
        bound: opts.bound,
        coefficients: strings(c.as_slice()),
        m: m.as_slice().to_vec(),
        pivot,
        basis: cert.vectors.iter().map(|v| strings(v.as_slice())).collect(),
        w_coordinates: matrix_rows(&cert.w_matrix),
        det: cert.det.to_string(),
        quotients: Quotients {
            s_mod_si,
            s_mod_ui,
            w_mod_s: (&w_mod_s).into(),
        },
        d_chain,
        c_matrix,
        presentation,
        checks,
    })
}

/// Output of `verify`: the seed and one report per instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub seed: Option<String>,
    pub m_strategy: String,
    pub bound: u64,
    pub passed: bool,
    pub instances: Vec<Report>,
}

/// Recomputes a parsed report from its coefficients and options, and checks
/// that the reported basis is still certified and that every check has the
/// same outcome.
pub fn recheck(old: &Report) -> Result<Report> {
    let a = old
        .coefficients
        .iter()
        .map(|s| parse_int(s))
        .collect::<Result<Vec<_>>>()?;
    let c = Coefficients::new(a)?;
    let only_i = match old.quotients.s_mod_si.as_slice() {
        [one] => Some(one.i),
        _ => None,
    };
    let opts = Options {
        strategy: parse_strategy(&old.m_strategy)?,
        pivot: Some(old.pivot),
        only_i,
        bound: old.bound,
    };
    let seed = old
        .seed
        .as_deref()
        .map(str::parse)
        .transpose()
        .context("bad seed")?;
    let new = build_report(&c, &opts, seed)?;

    let basis = old
        .basis
        .iter()
        .map(|v| v.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if let Err(r) = verify_basis(&c, &basis, old.pivot) {
        bail!("reported basis for {c} fails its certificate: {r}");
    }
    let outcome = |r: &Report| -> Vec<(String, bool)> {
        r.checks.iter().map(|k| (k.name.clone(), k.pass)).collect()
    };
    if outcome(old) != outcome(&new) {
        bail!("check outcomes for {c} differ from the report");
    }
    if old.quotients != new.quotients {
        bail!("quotient structures for {c} differ from the report");
    }
    Ok(new)
}
