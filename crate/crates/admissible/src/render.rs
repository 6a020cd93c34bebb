//! Text and JSON renderings shared by the command-line front end.

use serde::Serialize;

use crate::branch::PhiKind;
use crate::gaussian::GaussianRational;
use crate::ideal::{IdealCase, IdealDescription, MembershipVerdict};
use crate::oracle::OracleReport;
use crate::poly::MultiPoly;
use crate::puiseux::newton::PuiseuxBranch;

/// JSON form of an [`IdealDescription`].
#[derive(Serialize)]
pub struct IdealJson {
    pub case: String,
    pub generators: Vec<String>,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "L_or_K")]
    pub l_or_k: u32,
    pub g: Option<String>,
}

impl From<&IdealDescription> for IdealJson {
    fn from(d: &IdealDescription) -> Self {
        IdealJson {
            case: d.case.name().to_string(),
            generators: d.generators.iter().map(|g| g.to_string()).collect(),
            h: d.h.to_string(),
            l_or_k: d.l_or_k,
            g: d.g.as_ref().map(|g| g.to_string()),
        }
    }
}

fn index_label(case: IdealCase) -> &'static str {
    match case {
        IdealCase::Principal => "none",
        IdealCase::Definite => "L",
        IdealCase::LinearForm => "k",
        IdealCase::IsolatedDegenerate => "K",
    }
}

pub fn ideal_text(d: &IdealDescription) -> String {
    let mut s = String::new();
    s += &format!("p: {}\n", d.p);
    let grad: Vec<String> = d.branch.grad0.iter().map(|g| g.to_string()).collect();
    s += &format!("gradient: [{}]\n", grad.join(", "));
    s += &format!("phi (through degree {}): {}\n", d.branch.order(), d.branch.phi.poly());
    match &d.classification.kind {
        PhiKind::AllRealUpToOrder { order } => s += &format!("classification: real through degree {}\n", order),
        PhiKind::FirstImagTerm => {
            let c = &d.classification;
            s += &format!(
                "classification: first non-real degree {}, Im phi_{} = {}, {}\n",
                2 * c.l,
                2 * c.l,
                c.im_part,
                if c.definite { "positive definite" } else { "not definite" }
            );
        }
    }
    s += &format!("case: {}\n", d.case.name());
    if d.case != IdealCase::Principal {
        s += &format!("{}: {}\n", index_label(d.case), d.l_or_k);
    }
    if let Some((l, k)) = &d.linear_form {
        s += &format!("linear form: ({})^{}\n", l, k);
    }
    s += &format!("H: {}\n", d.h);
    match &d.g {
        Some(g) => s += &format!("g: {}\n", g),
        None => s += "g: none\n",
    }
    if let Some(loc) = &d.model {
        if let Some(kl) = loc.k_lemma {
            s += &format!("branch bound: {}\n", kl);
        }
        if let Some(c) = &loc.comparability {
            s += &format!("comparability interval: [{:.4}, {:.4}]\n", c.min, c.max);
        }
    }
    let gens: Vec<String> = d.generators.iter().map(|g| g.to_string()).collect();
    s += &format!("ideal: ({})\n", gens.join(", "));
    s += "generators:\n";
    for g in &d.generators {
        s += &format!("  {}\n", g);
    }
    s
}

pub fn ideal_json(d: &IdealDescription) -> String {
    serde_json::to_string_pretty(&IdealJson::from(d)).unwrap()
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub path: Vec<String>,
    pub description: String,
    pub z_imag_exponent: Option<u32>,
    pub ratios: Vec<(f64, f64)>,
}

#[derive(Serialize)]
pub struct OracleJson {
    pub shell_max: Vec<f64>,
    pub divergent: bool,
    pub real_divergent: bool,
}

#[derive(Serialize)]
pub struct MembershipJson {
    pub verdict: String,
    pub reduced_numerator: String,
    pub certificate: String,
    pub witness: Option<WitnessJson>,
    pub oracle: Option<OracleJson>,
}

fn rounded(v: f64) -> f64 {
    if v.is_finite() && v != 0.0 {
        format!("{:.6e}", v).parse().unwrap()
    } else {
        v
    }
}

pub fn membership_json(m: &MembershipVerdict, oracle: Option<&OracleReport>) -> String {
    let j = MembershipJson {
        verdict: m.verdict.name().to_string(),
        reduced_numerator: m.reduced_numerator.poly().to_string(),
        certificate: m.certificate.clone(),
        witness: m.witness.as_ref().map(|w| WitnessJson {
            path: w.x.iter().map(|c| c.to_string()).collect(),
            description: w.description.clone(),
            z_imag_exponent: w.z_imag_exponent,
            ratios: w.ratios.iter().map(|&(t, r)| (t, rounded(r))).collect(),
        }),
        oracle: oracle.map(|o| OracleJson {
            shell_max: o.shell_max.iter().map(|&v| rounded(v)).collect(),
            divergent: o.divergent,
            real_divergent: o.real_divergent,
        }),
    };
    serde_json::to_string_pretty(&j).unwrap()
}

pub fn membership_text(m: &MembershipVerdict, oracle: Option<&OracleReport>) -> String {
    let mut s = format!("verdict: {}\n", m.verdict.name());
    s += &format!("reduced numerator: {}\n", m.reduced_numerator.poly());
    s += &format!("certificate: {}\n", m.certificate);
    if let Some(w) = &m.witness {
        s += &format!("witness: {}\n", w.description);
        for (t, r) in &w.ratios {
            s += &format!("  t = {:.6e}  ratio = {:.6e}\n", t, r);
        }
    }
    if let Some(o) = oracle {
        let shells: Vec<String> = o.shell_max.iter().map(|v| format!("{:.6e}", v)).collect();
        s += &format!("oracle: {} (shell maxima {})\n", if o.divergent { "divergent" } else { "bounded" }, shells.join(", "));
    }
    s
}

/// `Σ ψ_m t^m`; coefficients outside `Q(i)` are shown as `(a + b·sqrt(d))`.
pub fn psi_string(b: &PuiseuxBranch) -> String {
    if let Some(cs) = b.psi.iter().map(|c| c.to_gauss()).collect::<Option<Vec<GaussianRational>>>() {
        let v = crate::poly::vars(&["t"]);
        let terms = cs.into_iter().enumerate().map(|(m, c)| (vec![m as u32], c));
        return MultiPoly::from_terms(&v, terms).to_string();
    }
    let parts: Vec<String> = b
        .psi
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(m, c)| if m == 0 { format!("({})", c) } else { format!("({})*t^{}", c, m) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Serialize)]
pub struct BranchJson {
    pub r: u32,
    pub psi: String,
    pub order: u32,
    pub conjugate_partner: Option<usize>,
}

pub fn branches_text(bs: &[PuiseuxBranch]) -> String {
    let mut s = format!("branches: {} (y = psi(t), x = t^r)\n", bs.len());
    for (k, b) in bs.iter().enumerate() {
        s += &format!("  {}: r={} psi={} through t^{}", k + 1, b.r, psi_string(b), b.order);
        match b.conjugate_partner {
            Some(j) if j == k => s += ", self-conjugate",
            Some(j) => s += &format!(", conjugate of {}", j + 1),
            None => {}
        }
        s += "\n";
    }
    s
}

pub fn branches_json(bs: &[PuiseuxBranch]) -> String {
    let v: Vec<BranchJson> = bs
        .iter()
        .map(|b| BranchJson { r: b.r, psi: psi_string(b), order: b.order, conjugate_partner: b.conjugate_partner })
        .collect();
    serde_json::to_string_pretty(&v).unwrap()
}

#[derive(Serialize)]
pub struct PolynomialJson {
    pub polynomial: String,
}

pub fn polynomial_json(p: &MultiPoly) -> String {
    serde_json::to_string_pretty(&PolynomialJson { polynomial: p.to_string() }).unwrap()
}

#[derive(Serialize)]
pub struct ExampleJson {
    pub name: String,
    pub summary: String,
    pub p: String,
    pub ideal: IdealJson,
}
