//! Deterministic JSON and text rendering of an analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::coefficients::DeepestCoefficients;
use crate::fan::Fan;
use crate::lattice_poly::AlgebraicScalar;
use crate::nondegeneracy::{FaceStatus, Status, Witness};
use crate::pipeline::{Analysis, PoleAnalysis};
use crate::poles::{Evidence, Family, VanishingCertificate};
use crate::problem::ProblemSpec;
use crate::rational::format_rational;
use crate::verify::Verification;

pub const SCHEMA: &str = "zetascope-report/1";

/// A double written with 17 significant digits; non-finite values become `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format!("{:.16e}", self.0))
                .map_err(S::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub input: ProblemSpec,
    pub input_sha256: String,
    pub dimension: usize,
    pub depth: String,
    pub seed: u64,
    pub newton: NewtonJson,
    pub convenience: ConvenienceJson,
    pub nondegeneracy: NondegeneracyJson,
    pub fan: FanSection,
    pub charts: Vec<ChartJson>,
    pub poles: Vec<PoleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct NewtonJson {
    pub vertices: Vec<Vec<u32>>,
    pub facets: Vec<FacetJson>,
    pub compact_faces: Vec<FaceJson>,
}

#[derive(Serialize)]
pub struct FacetJson {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Serialize)]
pub struct FaceJson {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

#[derive(Serialize)]
pub struct ConvenienceJson {
    pub convenient: bool,
    pub witnesses: Vec<Option<Vec<u32>>>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessJson {
    Exact(Vec<String>),
    Approximate(Vec<Float>),
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Exact(v) => WitnessJson::Exact(v.iter().map(format_rational).collect()),
            Witness::Approximate(v) => WitnessJson::Approximate(v.iter().map(|&x| Float(x)).collect()),
        }
    }
}

#[derive(Serialize)]
pub struct FaceVerdictJson {
    pub face: usize,
    pub dim: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_residual: Option<Float>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Serialize)]
pub struct NondegeneracyJson {
    pub status: &'static str,
    pub faces: Vec<FaceVerdictJson>,
}

#[derive(Serialize)]
pub struct FanJson {
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl From<&Fan> for FanJson {
    fn from(f: &Fan) -> Self {
        FanJson {
            rays: f.rays.clone(),
            maximal_cones: f.maximal.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct FanSection {
    pub dual: FanJson,
    pub smooth: FanJson,
    /// Index of the dual-fan cone containing each smooth cone.
    pub parent: Vec<usize>,
    pub covering: bool,
    pub refinement: bool,
    pub unimodular: bool,
    pub oriented: bool,
}

#[derive(Serialize)]
pub struct ChartJson {
    pub cone: usize,
    pub generators: Vec<Vec<i64>>,
    pub l: Vec<i64>,
    pub norm: Vec<i64>,
    pub unit: String,
    pub unit_at_origin: String,
}

#[derive(Serialize)]
pub struct ConeJson {
    pub rays: Vec<usize>,
    pub nu: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<usize>,
}

#[derive(Serialize)]
pub struct ConeLevelJson {
    pub k: usize,
    pub cones: Vec<ConeJson>,
}

#[derive(Serialize)]
pub struct DeltaJson {
    pub k: usize,
    pub lattice_points: Vec<Vec<u32>>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceJson {
    OddNu { dim: usize, witnesses: Vec<OddWitness> },
    DisjointSupport { dim: usize, delta_points: Vec<Vec<u32>> },
}

#[derive(Serialize)]
pub struct OddWitness {
    pub rays: Vec<usize>,
    pub position: usize,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub rule: String,
    pub from_k: usize,
    pub to_k: usize,
    pub families: Vec<String>,
    pub evidence: EvidenceJson,
}

impl From<&VanishingCertificate> for CertificateJson {
    fn from(c: &VanishingCertificate) -> Self {
        let evidence = match &c.evidence {
            Evidence::OddNu { dim, witnesses } => EvidenceJson::OddNu {
                dim: *dim,
                witnesses: witnesses
                    .iter()
                    .map(|(rays, i)| OddWitness {
                        rays: rays.clone(),
                        position: *i,
                    })
                    .collect(),
            },
            Evidence::DisjointSupport { dim, delta_points } => EvidenceJson::DisjointSupport {
                dim: *dim,
                delta_points: delta_points.iter().map(|p| p.entries().to_vec()).collect(),
            },
        };
        CertificateJson {
            rule: c.rule.to_string(),
            from_k: c.from_k,
            to_k: c.to_k,
            families: c.families.iter().map(ToString::to_string).collect(),
            evidence,
        }
    }
}

#[derive(Serialize)]
pub struct ScalarJson {
    /// `[r, b, e]` for each term `r·b^e`.
    pub terms: Vec<[String; 3]>,
    pub exact: String,
    pub float: Float,
}

impl From<&AlgebraicScalar> for ScalarJson {
    fn from(s: &AlgebraicScalar) -> Self {
        ScalarJson {
            terms: s
                .terms()
                .iter()
                .map(|(r, b, e)| [format_rational(r), format_rational(b), format_rational(e)])
                .collect(),
            exact: s.to_string(),
            float: Float(s.to_f64()),
        }
    }
}

#[derive(Serialize)]
pub struct ComplexJson {
    pub re: Float,
    pub im: Float,
}

#[derive(Serialize)]
pub struct SignCountJson {
    pub chart: usize,
    pub c_plus: i64,
    pub c_minus: i64,
}

#[derive(Serialize)]
pub struct DeepestJson {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<ScalarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_plus: Option<ScalarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_minus: Option<ScalarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_plus: Option<ScalarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_minus: Option<ScalarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_osc: Option<ComplexJson>,
    pub integer_caveat: bool,
    pub sign_counts: Vec<SignCountJson>,
}

fn deepest_json(d: Option<&DeepestCoefficients>, skipped: Option<&String>, signs: &BTreeMap<usize, (i64, i64)>) -> DeepestJson {
    let sign_counts = signs
        .iter()
        .map(|(&chart, &(c_plus, c_minus))| SignCountJson { chart, c_plus, c_minus })
        .collect();
    let Some(d) = d else {
        return DeepestJson {
            applicable: false,
            reason: skipped.cloned(),
            a: None,
            a_plus: None,
            a_minus: None,
            b_plus: None,
            b_minus: None,
            c_osc: None,
            integer_caveat: false,
            sign_counts,
        };
    };
    let mut reasons = Vec::new();
    if let Err(e) = &d.a {
        reasons.push(format!("a: {e}"));
    }
    if let Err(e) = &d.signed {
        reasons.push(format!("signed: {e}"));
    }
    let signed = d.signed.as_ref().ok();
    let valid = signed.filter(|s| s.laurent_valid);
    if signed.is_some() && valid.is_none() {
        reasons.push("a_plus, a_minus: λ is an integer".into());
    }
    DeepestJson {
        applicable: d.a.is_ok(),
        reason: (!reasons.is_empty()).then(|| reasons.join("; ")),
        a: d.a.as_ref().ok().map(ScalarJson::from),
        a_plus: valid.map(|s| ScalarJson::from(&s.b_plus)),
        a_minus: valid.map(|s| ScalarJson::from(&s.b_minus)),
        b_plus: signed.map(|s| ScalarJson::from(&s.b_plus)),
        b_minus: signed.map(|s| ScalarJson::from(&s.b_minus)),
        c_osc: d.c_osc.map(|(re, im)| ComplexJson {
            re: Float(re),
            im: Float(im),
        }),
        integer_caveat: d.integer_caveat,
        sign_counts,
    }
}

#[derive(Serialize)]
pub struct PoleJson {
    pub j: usize,
    pub lambda: String,
    pub pole: String,
    pub integer: bool,
    pub k_j: usize,
    pub contributing_rays: Vec<usize>,
    pub cones: Vec<ConeLevelJson>,
    pub delta: Vec<DeltaJson>,
    pub certificates: Vec<CertificateJson>,
    /// Family name to the first certified-zero index.
    pub vanishing_from: BTreeMap<String, usize>,
    /// Every coefficient of `∫ |f|^λ φ` at this pole is certified zero.
    pub fake: bool,
    pub deepest: DeepestJson,
}

fn pole_json(p: &PoleAnalysis) -> PoleJson {
    let c = &p.pole;
    PoleJson {
        j: c.index,
        lambda: format_rational(&c.lambda),
        pole: format_rational(&-c.lambda.clone()),
        integer: c.is_integer,
        k_j: c.kj,
        contributing_rays: c.contributing_rays.clone(),
        cones: (1..=c.dim())
            .map(|k| ConeLevelJson {
                k,
                cones: c
                    .cones(k)
                    .iter()
                    .map(|e| ConeJson {
                        rays: e.rays.clone(),
                        nu: e.nu.clone(),
                        chart: e.maximal,
                    })
                    .collect(),
            })
            .filter(|l| !l.cones.is_empty())
            .collect(),
        delta: p
            .deltas
            .iter()
            .map(|d| DeltaJson {
                k: d.k,
                lattice_points: d.lattice_points.iter().map(|e| e.entries().to_vec()).collect(),
            })
            .collect(),
        certificates: p.certificates.iter().map(CertificateJson::from).collect(),
        vanishing_from: p.vanishing_from.iter().map(|(f, k)| (f.to_string(), *k)).collect(),
        fake: p.vanishing_from.get(&Family::Abs) == Some(&1),
        deepest: deepest_json(p.deepest.as_ref(), p.deepest_skipped.as_ref(), &p.signs),
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub predicted: Float,
    pub fitted: Float,
    pub abs_err: Float,
    pub rel_err: Float,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct VerificationJson {
    pub passed: bool,
    /// No numerical check could be run.
    pub skipped: bool,
    pub checks: Vec<CheckJson>,
    pub notes: Vec<String>,
}

impl From<&Verification> for VerificationJson {
    fn from(v: &Verification) -> Self {
        VerificationJson {
            passed: v.passed(),
            skipped: v.checks.is_empty(),
            checks: v
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    predicted: Float(c.predicted),
                    fitted: Float(c.fitted),
                    abs_err: Float(c.abs_err),
                    rel_err: Float(c.rel_err),
                    pass: c.pass,
                })
                .collect(),
            notes: v.notes.clone(),
        }
    }
}

fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Proven => "proven",
        Status::ProbablyNondegenerate { .. } => "probably_nondegenerate",
        Status::Degenerate { .. } => "degenerate",
    }
}

pub fn input_hash(spec: &ProblemSpec) -> String {
    let digest = Sha256::digest(spec.canonical_json().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn build(analysis: &Analysis, verification: Option<&Verification>) -> Report {
    let poly = &analysis.poly;
    let names = &analysis.problem.names;
    Report {
        schema: SCHEMA,
        input: analysis.problem.spec.clone(),
        input_sha256: input_hash(&analysis.problem.spec),
        dimension: analysis.problem.dim(),
        depth: format_rational(&analysis.depth),
        seed: analysis.seed,
        newton: NewtonJson {
            vertices: poly.vertices.iter().map(|v| v.entries().to_vec()).collect(),
            facets: poly
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: f.normal.clone(),
                    offset: f.offset,
                })
                .collect(),
            compact_faces: poly
                .compact_faces
                .iter()
                .map(|f| FaceJson {
                    dim: f.dim,
                    vertices: f.vertices.clone(),
                })
                .collect(),
        },
        convenience: ConvenienceJson {
            convenient: analysis.convenience.convenient,
            witnesses: analysis
                .convenience
                .witnesses
                .iter()
                .map(|w| w.as_ref().map(|e| e.entries().to_vec()))
                .collect(),
        },
        nondegeneracy: NondegeneracyJson {
            status: status_name(&analysis.nondegeneracy.status),
            faces: analysis
                .nondegeneracy
                .faces
                .iter()
                .map(|f| {
                    let (status, trials, best_residual, witness) = match &f.status {
                        FaceStatus::Proven => ("proven", None, None, None),
                        FaceStatus::NoWitnessFound { trials, best_residual } => {
                            ("no_witness_found", Some(*trials), Some(Float(*best_residual)), None)
                        }
                        FaceStatus::Degenerate(w) => ("degenerate", None, None, Some(WitnessJson::from(w))),
                    };
                    FaceVerdictJson {
                        face: f.face,
                        dim: f.dim,
                        status,
                        trials,
                        best_residual,
                        witness,
                    }
                })
                .collect(),
        },
        fan: FanSection {
            dual: FanJson::from(&analysis.coarse),
            smooth: FanJson::from(&analysis.fine),
            parent: analysis.fine.parent.clone(),
            covering: analysis.fan_check.covering,
            refinement: analysis.fan_check.refinement,
            unimodular: analysis.fan_check.unimodular,
            oriented: analysis.fan_check.oriented,
        },
        charts: analysis
            .charts
            .iter()
            .map(|c| ChartJson {
                cone: c.index,
                generators: c.cone.generators.clone(),
                l: c.l_vector.clone(),
                norm: c.norm_sums.clone(),
                unit: c.f_sigma.display_with(&chart_names(names.len())),
                unit_at_origin: format_rational(&c.c0),
            })
            .collect(),
        poles: analysis.poles.iter().map(pole_json).collect(),
        verification: verification.map(VerificationJson::from),
        warnings: analysis.warnings.clone(),
    }
}

fn chart_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Human-readable summary with one row per pole.
pub fn to_text(analysis: &Analysis, verification: Option<&Verification>) -> String {
    let mut out = String::new();
    let p = &analysis.problem;
    let _ = writeln!(out, "f = {}", p.f.display_with(&p.names));
    let _ = writeln!(
        out,
        "Newton polyhedron: {} vertices, {} compact faces",
        analysis.poly.vertices.len(),
        analysis.poly.compact_faces.len()
    );
    let _ = writeln!(
        out,
        "fan: {} dual rays, {} smooth rays, {} charts",
        analysis.coarse.rays.len(),
        analysis.fine.rays.len(),
        analysis.charts.len()
    );
    let _ = writeln!(out, "non-degeneracy: {}", status_name(&analysis.nondegeneracy.status));
    let _ = writeln!(out, "candidate poles up to depth {}:", format_rational(&analysis.depth));
    let _ = writeln!(out, "{:>4}  {:>10}  {:>4}  {:<24}  {:<24}  certificates", "j", "pole", "k_j", "a_{j,n}", "c_osc");
    for pa in &analysis.poles {
        let c = &pa.pole;
        let (a, osc) = match &pa.deepest {
            Some(d) => (
                d.a.as_ref().map_or("-".to_string(), ToString::to_string),
                d.c_osc.map_or("-".to_string(), |(re, im)| format!("{re:.6}{im:+.6}i")),
            ),
            None => ("-".into(), "-".into()),
        };
        let rules: Vec<String> = pa.certificates.iter().map(|c| format!("{}@{}", c.rule, c.from_k)).collect();
        let _ = writeln!(
            out,
            "{:>4}  {:>10}  {:>4}  {:<24}  {:<24}  {}",
            c.index,
            format_rational(&-c.lambda.clone()),
            c.kj,
            a,
            osc,
            if rules.is_empty() { "-".into() } else { rules.join(" ") }
        );
    }
    if let Some(v) = verification {
        let status = if v.checks.is_empty() {
            "skipped"
        } else if v.passed() {
            "passed"
        } else {
            "FAILED"
        };
        let _ = writeln!(out, "verification: {status}");
        for c in &v.checks {
            let _ = writeln!(
                out,
                "  [{}] {}: predicted {:.10e}, fitted {:.10e}, error {:.2e}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.predicted,
                c.fitted,
                c.abs_err
            );
        }
        for note in &v.notes {
            let _ = writeln!(out, "  note: {note}");
        }
    }
    for w in &analysis.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(serde_json::to_string(&Float(1.0 / 6.0)).unwrap(), "1.6666666666666666e-1");
        assert_eq!(serde_json::to_string(&Float(f64::NAN)).unwrap(), "null");
        let back: f64 = serde_json::from_str(&serde_json::to_string(&Float(0.1)).unwrap()).unwrap();
        assert_eq!(back, 0.1);
    }
}
