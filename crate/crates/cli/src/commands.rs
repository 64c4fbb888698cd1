//! The subcommands. Each returns a table, a JSON value and, when a
//! cross-check failed after the report was assembled, the reason.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};

use ffp_core::carlitz::{carlitz_product_formula, ProductFormulaReport};
use ffp_core::lfunctions::{a_psi_phi, mu_art_v, regularized_sum, z_v_rational, ClassFunctionQ, LocalGaloisDatum};
use ffp_core::schema::{CmJson, GaloisJson, RegularizeJson};
use ffp_core::shtuka::{omega_period, omega_valuation_via_l, CMAlgebra, Embedding};
use ffp_core::{Error, LogQValue, Rat, RatFunc, TowerConfig};

const MAX_Q: u64 = 16;
const MAX_DEGREE: u32 = 3;
const MAX_DEPTH: u32 = 6;

pub struct Outcome {
    pub table: String,
    pub json: Value,
    pub check_failure: Option<String>,
}

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, error: anyhow!(msg.into()) }
    }
}

/// Validation problems exit with 2, failed mathematical checks with 1.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::MissingWildTable { .. }
            | Error::WildUnsupported(_)
            | Error::MixedComponent(..)
            | Error::TowerBound { .. }
            | Error::UnsupportedTower(_)
            | Error::NonUnit(_)
            | Error::FieldMismatch => 2,
            _ => 1,
        };
        Failure { code, error: e.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|error| Failure { code: 2, error })
}

fn r(x: &Rat) -> String {
    x.to_string()
}

fn lq(x: &LogQValue) -> String {
    x.coefficient().to_string()
}

pub fn carlitz(q: u64, max_degree: u32, depth: u32, config: TowerConfig) -> Result<Outcome, Failure> {
    if !(2..=MAX_Q).contains(&q) {
        return Err(Failure::input(format!("q must lie in 2..={MAX_Q}")));
    }
    if !(1..=MAX_DEGREE).contains(&max_degree) {
        return Err(Failure::input(format!("--max-degree must lie in 1..={MAX_DEGREE}")));
    }
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(Failure::input(format!("--depth must lie in 1..={MAX_DEPTH}")));
    }
    let rep = carlitz_product_formula(q, max_degree, depth, config)?;
    let check_failure =
        (!rep.value.is_zero()).then(|| format!("product formula evaluates to {}, not 0", rep.value));
    Ok(Outcome { table: carlitz_table(&rep), json: carlitz_json(&rep, depth), check_failure })
}

fn carlitz_table(rep: &ProductFormulaReport) -> String {
    let mut s = String::new();
    let inf = &rep.infinity;
    let _ = writeln!(s, "Carlitz motive over F_{}[t], explicit places of degree ≤ {}", rep.q, rep.max_degree);
    let _ = writeln!(s, "∞: v(∫ω) = {}, log|∫ω| = {} (N = {})", r(&inf.valuation), inf.log_abs, inf.n);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<16} {:>3} {:>6} {:>3} {:>8} {:>12} {:>10} {:>6}", "place", "deg", "q_v", "v̂", "v(∫ω)", "log|∫ω|_v", "Z_v(𝟙,1)", "depth");
    for p in &rep.places {
        let depth = if p.closed_form_fallback { "closed".to_string() } else { p.depth_used.to_string() };
        let _ = writeln!(
            s,
            "{:<16} {:>3} {:>6} {:>3} {:>8} {:>12} {:>10} {:>6}",
            p.place.to_string(),
            p.degree,
            p.q_v,
            p.hat_order,
            r(&p.valuation),
            lq(&p.log_abs),
            r(&p.z_v_at_one),
            depth
        );
    }
    let g = &rep.regularization;
    let _ = writeln!(s);
    let _ = writeln!(s, "−Z^∞(𝟙,0):          {}", g.z_infty);
    let _ = writeln!(s, "−μ^∞:               {}", g.mu_infty);
    let _ = writeln!(s, "genus term:         {}", g.genus);
    let _ = writeln!(s, "explicit defects:   {}", g.explicit);
    let _ = writeln!(s, "finite places:      {}", g.total);
    let _ = writeln!(s, "∞ term:             {}", inf.log_abs);
    let _ = writeln!(s, "total: {}", rep.value);
    s
}

fn carlitz_json(rep: &ProductFormulaReport, depth: u32) -> Value {
    let g = &rep.regularization;
    json!({
        "schema": "1",
        "q": rep.q,
        "max_degree": rep.max_degree,
        "depth": depth,
        "infty": {
            "n": rep.infinity.n,
            "valuation": r(&rep.infinity.valuation),
            "log_abs": lq(&rep.infinity.log_abs),
        },
        "places": rep.places.iter().map(|p| json!({
            "place": p.place.to_string(),
            "degree": p.degree,
            "q_v": p.q_v,
            "hat_order": p.hat_order,
            "valuation": r(&p.valuation),
            "log_abs": lq(&p.log_abs),
            "z_v_at_one": r(&p.z_v_at_one),
            "matches_local_factor": p.matches_local_factor(),
            "depth_used": p.depth_used,
            "closed_form_fallback": p.closed_form_fallback,
        })).collect::<Vec<_>>(),
        "regularization": {
            "z_infty": lq(&g.z_infty),
            "mu_infty": lq(&g.mu_infty),
            "genus": lq(&g.genus),
            "explicit": lq(&g.explicit),
            "total": lq(&g.total),
        },
        "total": lq(&rep.value),
    })
}

fn parse_embedding(cm: &CMAlgebra, s: &str) -> Result<Embedding, Failure> {
    let e: Embedding = s.parse()?;
    cm.check_embedding(&e)?;
    Ok(e)
}

fn load_cm(path: &Path) -> Result<(CMAlgebra, ffp_core::CMType), Failure> {
    Ok(CmJson::parse(&read(path)?)?.build()?)
}

/// Names the tables a wild component lacks.
fn check_wild_tables(cm: &CMAlgebra, i: usize) -> Result<(), Failure> {
    let c = cm.component(i)?;
    if c.tame {
        return Ok(());
    }
    let mut missing = Vec::new();
    if c.diff_valuation.is_none() {
        missing.push("diff_valuation");
    }
    if c.pairwise.is_none() {
        missing.push("pairwise");
    }
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingWildTable { component: i, fields: missing.join(", ") }.into())
    }
}

pub fn omega(path: &Path, phi: &str, psi: &str, depth: usize, config: TowerConfig) -> Result<Outcome, Failure> {
    let (cm, _) = load_cm(path)?;
    let phi = parse_embedding(&cm, phi)?;
    let psi = parse_embedding(&cm, psi)?;
    if phi.i != psi.i {
        return Err(Error::MixedComponent(phi.i, psi.i).into());
    }
    check_wild_tables(&cm, psi.i)?;
    let tame = cm.component(psi.i)?.tame;

    let closed_hat = cm.omega_hat_closed(&phi, &psi)?;
    let closed = cm.omega_valuation_closed(&phi, &psi)?;
    let (series_hat, series, depth_used, via_l) = if tame {
        let p = omega_period(&cm, &phi, &psi, depth, config)?;
        let v = p.element.valuation()?;
        (Some(p.element.hat_valuation()), Some(v), Some(p.element.depth_used), Some(omega_valuation_via_l(&cm, &phi, &psi, config)?))
    } else {
        (None, None, None, None)
    };
    let agree = series_hat.is_none_or(|h| h == closed_hat)
        && series.as_ref().is_none_or(|v| *v == closed)
        && via_l.as_ref().is_none_or(|v| *v == closed);

    let opt = |v: &Option<Rat>| v.as_ref().map_or("unavailable (wild component)".to_string(), r);
    let mut t = String::new();
    let _ = writeln!(t, "Ω(E_v, φ = {phi}, ψ = {psi}) over F_{}((z))", cm.q_v());
    let _ = writeln!(t, "v̂ (series):        {}", series_hat.map_or("unavailable (wild component)".into(), |h| h.to_string()));
    let _ = writeln!(t, "v̂ (closed form):   {closed_hat}");
    let _ = writeln!(t, "v (series):         {}", opt(&series));
    let _ = writeln!(t, "v (closed form):    {}", r(&closed));
    let _ = writeln!(t, "v (L-function):     {}", opt(&via_l));
    if let Some(d) = depth_used {
        let _ = writeln!(t, "depth used:         {d}");
    }
    let _ = writeln!(t, "agree: {agree}");
    let json = json!({
        "schema": "1",
        "phi": phi.to_string(),
        "psi": psi.to_string(),
        "hat_order": { "series": series_hat, "closed": closed_hat },
        "valuation": {
            "series": series.as_ref().map(r),
            "closed": r(&closed),
            "l_function": via_l.as_ref().map(r),
        },
        "depth_used": depth_used,
        "agree": agree,
    });
    let check_failure = (!agree).then(|| "valuation routes disagree".to_string());
    Ok(Outcome { table: t, json, check_failure })
}

fn zv_report(d: &LocalGaloisDatum, a: &ClassFunctionQ, source: Value) -> Result<Outcome, Failure> {
    let z = z_v_rational(d, a)?;
    if z.den().coeff(0) == Rat::from_integer(0.into()) {
        return Err(Error::Pole("Z_v has a pole at x = 0".into()).into());
    }
    let at = |x: Rat| -> Option<Rat> { z.eval(&x).ok() };
    let z0 = at(Rat::from_integer(1.into()));
    let z1 = at(Rat::new(1.into(), d.q_v().into()));
    let mu = d.mu().map(|_| mu_art_v(d, a)).transpose()?;
    let show = |v: &Option<Rat>| v.as_ref().map_or("pole".to_string(), r);
    let mut t = String::new();
    let _ = writeln!(t, "x = q_v^(-s), q_v = {}, |G| = {}, e = {}, f = {}", d.q_v(), d.order(), d.e_l(), d.f_l());
    let _ = writeln!(t, "Z = {}", render(&z));
    let _ = writeln!(t, "Z(0) = {}", show(&z0));
    let _ = writeln!(t, "Z(1) = {}", show(&z1));
    let _ = writeln!(t, "μ_Art = {}", mu.as_ref().map_or("unavailable (no μ table)".to_string(), r));
    let json = json!({
        "schema": "1",
        "source": source,
        "q_v": d.q_v(),
        "z": render(&z),
        "z_at_0": z0.as_ref().map(r),
        "z_at_1": z1.as_ref().map(r),
        "mu_art": mu.as_ref().map(r),
    });
    Ok(Outcome { table: t, json, check_failure: None })
}

fn render(z: &RatFunc) -> String {
    z.render("x").replace(" - ", " − ").replace("(-", "(−")
}

pub fn zv_galois(path: &Path, config: TowerConfig) -> Result<Outcome, Failure> {
    let (d, a) = GaloisJson::parse(&read(path)?)?.build(config)?;
    zv_report(&d, &a, json!({ "galois": path.display().to_string() }))
}

pub fn zv_cm(path: &Path, phi: &str, psi: &str, config: TowerConfig) -> Result<Outcome, Failure> {
    let (cm, _) = load_cm(path)?;
    let phi = parse_embedding(&cm, phi)?;
    let psi = parse_embedding(&cm, psi)?;
    let c = cm.component(psi.i)?;
    if !c.tame {
        return Err(Error::WildUnsupported(psi.i).into());
    }
    let d = LocalGaloisDatum::tame(cm.q_v(), c.f, c.e, config)?;
    let a = a_psi_phi(&d, &cm, &psi, &phi)?;
    zv_report(&d, &a, json!({ "cm": path.display().to_string(), "phi": phi.to_string(), "psi": psi.to_string() }))
}

pub fn regularize(path: &Path) -> Result<Outcome, Failure> {
    let input = RegularizeJson::parse(&read(path)?)?.build()?;
    let g = regularized_sum(input.q, &input.tail, input.genus, &input.explicit)?;
    let total = input.infinity.clone().map_or(g.total.clone(), |inf| inf + g.total.clone());
    let mut t = String::new();
    let _ = writeln!(t, "−Z^∞(a*,0):         {}", g.z_infty);
    let _ = writeln!(t, "−μ^∞_Art(a):        {}", g.mu_infty);
    let _ = writeln!(t, "−2g·a(1)·log q:     {}", g.genus);
    let _ = writeln!(t, "Σ explicit defects: {}", g.explicit);
    let _ = writeln!(t, "finite places:      {}", g.total);
    if let Some(inf) = &input.infinity {
        let _ = writeln!(t, "∞ term:             {inf}");
    }
    let _ = writeln!(t, "total: {total}");
    let json = json!({
        "schema": "1",
        "q": input.q,
        "z_infty": lq(&g.z_infty),
        "mu_infty": lq(&g.mu_infty),
        "genus": lq(&g.genus),
        "explicit": lq(&g.explicit),
        "finite_total": lq(&g.total),
        "infinity": input.infinity.as_ref().map(lq),
        "total": lq(&total),
    });
    Ok(Outcome { table: t, json, check_failure: None })
}
