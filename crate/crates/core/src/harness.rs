//! Seeded parameter sweeps over the six-case family and report rendering.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analyzer::{
    classify, three_way, Agreement, ClassificationVerdict, FirstIntegralOutcome, IifOutcome,
    Obstruction, Witness,
};
use crate::error::Result;
use crate::family::{sample_params, satisfied_cases, AplicaParams, SampleMode};
use crate::lv::InvariantCurveCertificate;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSample {
    pub index: usize,
    pub params: AplicaParams,
    pub cases: Vec<u8>,
    pub integrable: bool,
    pub obstruction: Option<Obstruction>,
    pub agreement: Agreement,
}

impl SweepSample {
    /// The verdict matches the case conditions and all three tests agree.
    pub fn consistent(&self) -> bool {
        self.integrable == !self.cases.is_empty()
            && self.agreement.consistent()
            && self.agreement.normal_form == self.integrable
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub seed: u64,
    pub mode: SampleMode,
    pub max_degree: u32,
    pub samples: Vec<SweepSample>,
}

impl SweepReport {
    pub fn integrable_count(&self) -> usize {
        self.samples.iter().filter(|s| s.integrable).count()
    }

    pub fn obstructed_count(&self) -> usize {
        self.samples.len() - self.integrable_count()
    }

    pub fn disagreements(&self) -> Vec<usize> {
        self.samples
            .iter()
            .filter(|s| !s.consistent())
            .map(|s| s.index)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|s| {
                json!({
                    "index": s.index,
                    "params": s.params.to_string(),
                    "cases": s.cases,
                    "integrable": s.integrable,
                    "obstruction": s.obstruction.as_ref().map(Obstruction::to_json),
                    "first_integral": s.agreement.first_integral,
                    "iif": s.agreement.iif,
                    "consistent": s.consistent(),
                })
            })
            .collect();
        json!({
            "seed": self.seed,
            "mode": self.mode.to_string(),
            "max_degree": self.max_degree,
            "count": self.samples.len(),
            "integrable": self.integrable_count(),
            "obstructed": self.obstructed_count(),
            "disagreements": self.disagreements(),
            "samples": samples,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "sweep mode={} seed={} max_degree={} count={}\n",
            self.mode,
            self.seed,
            self.max_degree,
            self.samples.len()
        );
        for s in &self.samples {
            let verdict = if s.integrable { "integrable" } else { "obstructed" };
            let cases: Vec<String> = s.cases.iter().map(u8::to_string).collect();
            out.push_str(&format!(
                "{:>4} {} {:<10} cases=[{}]{}\n",
                s.index,
                s.params,
                verdict,
                cases.join(","),
                if s.consistent() { "" } else { " DISAGREEMENT" }
            ));
        }
        out.push_str(&format!(
            "integrable={} obstructed={} disagreements={}\n",
            self.integrable_count(),
            self.obstructed_count(),
            self.disagreements().len()
        ));
        out
    }
}

pub fn analyze_sample(index: usize, params: AplicaParams, max_degree: u32) -> Result<SweepSample> {
    let f = params.field();
    let verdict = classify(&f, max_degree)?;
    let agreement = three_way(&f, max_degree)?;
    let obstruction = match verdict.witness {
        Witness::Obstruction(o) => Some(o),
        Witness::FirstIntegral(_) => None,
    };
    Ok(SweepSample {
        index,
        cases: satisfied_cases(&params),
        params,
        integrable: verdict.integrable,
        obstruction,
        agreement,
    })
}

/// Draws `count` samples from one seeded stream, analyzes them in parallel,
/// and reports them in draw order.
pub fn run_sweep(seed: u64, count: usize, mode: SampleMode, max_degree: u32) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<AplicaParams> = (0..count).map(|_| sample_params(mode, &mut rng)).collect();
    let samples = params
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| analyze_sample(i, p, max_degree))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        seed,
        mode,
        max_degree,
        samples,
    })
}

pub fn verdict_to_json(v: &ClassificationVerdict) -> Value {
    let witness = match &v.witness {
        Witness::FirstIntegral(c) => json!({
            "first_integral": c.integral.to_string(),
            "leading": c.leading.body().to_string(),
            "verified_to_degree": c.verified_to_degree,
        }),
        Witness::Obstruction(o) => json!({"obstruction": o.to_json()}),
    };
    json!({
        "integrable": v.integrable,
        "max_degree": v.report.max_degree,
        "lv": {"p": v.report.lv.p, "q": v.report.lv.q, "r": v.report.lv.r, "M": v.report.lv.m()},
        "witness": witness,
    })
}

pub fn verdict_to_text(v: &ClassificationVerdict) -> String {
    let lv = &v.report.lv;
    let head = format!(
        "(p,q,r) = ({},{},{}), M = {}, max degree {}\n",
        lv.p,
        lv.q,
        lv.r,
        lv.m(),
        v.report.max_degree
    );
    match &v.witness {
        Witness::FirstIntegral(c) => format!(
            "{head}integrable\nfirst integral through degree {}: {}\n",
            c.verified_to_degree, c.integral
        ),
        Witness::Obstruction(o) => format!(
            "{head}obstructed\neta_{} = {}\n",
            o.degree,
            v.report.eta_poly(o.degree)
        ),
    }
}

pub fn first_integral_to_json(o: &FirstIntegralOutcome) -> Value {
    match o {
        FirstIntegralOutcome::Integral(c) => json!({
            "integrable": true,
            "integral": c.integral.to_string(),
            "leading": c.leading.body().to_string(),
            "verified_to_degree": c.verified_to_degree,
        }),
        FirstIntegralOutcome::Obstructed(o) => json!({"integrable": false, "obstruction": o.to_json()}),
    }
}

pub fn iif_to_json(o: &IifOutcome) -> Value {
    match o {
        IifOutcome::Factor(c) => json!({
            "integrable": true,
            "v": c.v.to_string(),
            "verified_to_degree": c.verified_to_degree,
        }),
        IifOutcome::Obstructed(o) => json!({"integrable": false, "obstruction": o.to_json()}),
    }
}

pub fn curve_to_json(c: &InvariantCurveCertificate) -> Value {
    json!({
        "curve": c.curve.to_string(),
        "cofactor": c.cofactor.to_string(),
        "verified_to_degree": c.verified_to_degree,
    })
}
