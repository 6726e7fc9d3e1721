//! Analysis report assembly: one JSON document per input polynomial, plus
//! the SVG rendering of the weight-cone section. Identical input and
//! flags produce byte-identical output; every rational is rendered as
//! an exact `p/q` string and the report carries a content hash.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{
    bound_convenient_with, bound_general_with, refine_bound_with, Assumptions, BoundReport,
};
use crate::config::Config;
use crate::curve::{Exactness, ProbeResult};
use crate::diagram::{
    build_dual_diagram_with, export_simplex_projection, theta_prime, CellClass, DualDiagram,
    SimplexPlan,
};
use crate::error::LojaError;
use crate::newton::{axis_data, is_k_convenient};
use crate::poly::Polynomial;
use crate::rational::format_rational;
use crate::sweep::{sweep_monomial_curves_with, SweepResult};
use crate::tame::{inv_tame_certificate, nondegeneracy_certificate};
use crate::Result;

pub const SCHEMA_ID: &str = "loja-report/1";

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub assume: Assumptions,
    /// Run the monomial-curve sweep with (budget, samples).
    pub sweep: Option<(u64, u32)>,
    pub config: Config,
}

/// Everything `analyze` computes, with the serialized report.
pub struct Analysis {
    pub general: BoundReport,
    pub refined: BoundReport,
    pub convenient: Option<BoundReport>,
    pub sweep: Option<SweepResult>,
    pub json: Value,
}

pub fn bound_report_json(r: &BoundReport) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "axis_bound": r.axis_bound.as_ref().map(|b| b.to_string()),
        "theta_tilde": r.theta_tilde.as_ref().map(format_rational),
        "region_max": r.region_max.as_ref().map(format_rational),
        "bound": format_rational(&r.bound),
        "status": r.status.as_str(),
        "equality_certificate": r.equality_certificate.as_ref().map(|c| json!({
            "axis": c.axis,
            "axis_exponent": c.axis_exponent,
            "padding_exponent": c.padding_exponent,
        })),
        "per_cell": r.per_cell.iter().map(|c| json!({
            "cell": c.cell,
            "cell_dim": c.cell_dim,
            "class": c.class.as_str(),
            "value": format_rational(&c.value),
            "mechanism": c.mechanism.to_string(),
            "certificate": c.certificate.as_ref().map(|s| s.as_str()),
        })).collect::<Vec<_>>(),
        "assumptions": r.assumptions,
    })
}

pub fn probe_result_json(r: &ProbeResult) -> Value {
    json!({
        "ord_f": format_rational(&r.ord_f),
        "ord_grad": format_rational(&r.ord_grad),
        "theta": format_rational(&r.theta),
        "truncation": format_rational(&r.truncation_used),
        "exactness": match &r.exactness {
            Exactness::Exact => json!("exact"),
            Exactness::Numeric { tolerance } => json!({ "numeric": tolerance }),
        },
    })
}

/// Guard-scale integers fit i64; anything larger degrades to a string.
fn int_json(v: &BigInt) -> Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn diagram_json(diagram: &DualDiagram, f: &Polynomial) -> Result<Value> {
    let mut counts: Map<String, Value> = Map::new();
    for cell in &diagram.cells {
        let key = format!("dim{}:{}", cell.cell_dim, cell.class.as_str());
        let v = counts.get(&key).and_then(Value::as_u64).unwrap_or(0) + 1;
        counts.insert(key, json!(v));
    }
    let mut vertices = Vec::new();
    for cell in diagram.facet_vertices() {
        let normalized: Option<Vec<String>> = if cell.d.is_zero() {
            None
        } else {
            Some(
                cell.normalized_rep()?
                    .iter()
                    .map(format_rational)
                    .collect(),
            )
        };
        let tp = if cell.in_bound_scope() {
            Some(format_rational(&theta_prime(cell, f)?))
        } else {
            None
        };
        let cert = if cell.class == CellClass::Positive {
            Some(nondegeneracy_certificate(f, cell)?)
        } else if cell.in_bound_scope() && cell.face.dim >= 1 {
            Some(inv_tame_certificate(f, cell)?)
        } else {
            None
        };
        vertices.push(json!({
            "rep": cell.rep.iter().map(int_json).collect::<Vec<_>>(),
            "d": int_json(&cell.d),
            "class": cell.class.as_str(),
            "normalized": normalized,
            "theta_prime": tp,
            "certificate": cert.map(|c| json!({
                "status": c.status.as_str(),
                "evidence": c.evidence.to_string(),
            })),
        }));
    }
    let mut regions = Vec::new();
    for cell in diagram.regions() {
        let nu = diagram.region_monomial(cell);
        let deg = nu.total_degree();
        let value = BigRational::new(BigInt::from(deg as i64 - 1), BigInt::from(deg));
        regions.push(json!({
            "monomial": nu.0,
            "degree": deg,
            "value": format_rational(&value),
        }));
    }
    let facets = diagram
        .facets
        .iter()
        .map(|fct| {
            json!({
                "normal": fct.normal.iter().map(int_json).collect::<Vec<_>>(),
                "d": int_json(&fct.d),
                "face": fct.face.on_points.iter().map(|p| p.0.clone()).collect::<Vec<_>>(),
                "recession": fct.face.recession.iter().collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>();
    Ok(json!({
        "cell_counts": Value::Object(counts),
        "facets": facets,
        "facet_vertices": vertices,
        "regions": regions,
    }))
}

/// Hex SHA-256 of the canonical serialization.
pub fn content_hash(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("report serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Full analysis: diagram, certificates, every applicable bound, optional
/// sweep, assembled into the versioned report document.
pub fn analyze(f: &Polynomial, options: &AnalysisOptions) -> Result<Analysis> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    let cfg = &options.config;
    let diagram = build_dual_diagram_with(f, cfg)?;
    let general = bound_general_with(f, &options.assume, cfg)?;
    let refined = refine_bound_with(f, &options.assume, cfg)?;
    let convenient = if is_k_convenient(f, f.n() - 1) {
        Some(bound_convenient_with(f, &options.assume, cfg)?)
    } else {
        None
    };
    let sweep = match options.sweep {
        Some((budget, samples)) => sweep_monomial_curves_with(f, budget, samples, cfg)?,
        None => None,
    };

    let ad = axis_data(f)?;
    let level = (0..f.n()).rev().find(|&k| is_k_convenient(f, k)).unwrap_or(0);
    let mut assumptions: Vec<String> = Vec::new();
    if options.assume.nondegenerate {
        assumptions.push("nondegenerate".into());
    }
    if options.assume.inv_tame {
        assumptions.push("inv-tame".into());
    }
    if options.assume.ci_nondegenerate {
        assumptions.push("ci-nondegenerate".into());
    }

    let mut report = json!({
        "schema": SCHEMA_ID,
        "version": env!("CARGO_PKG_VERSION"),
        "input": {
            "text": f.to_text(),
            "n": f.n(),
            "support": f.support().iter().map(|e| e.0.clone()).collect::<Vec<_>>(),
        },
        "convenience": {
            "convenient": level + 1 == f.n(),
            "level": level,
        },
        "axis": {
            "b": ad.b,
            "max": ad.max_b,
            "argmax": ad.argmax.iter().collect::<Vec<_>>(),
        },
        "diagram": diagram_json(&diagram, f)?,
        "bounds": {
            "general": bound_report_json(&general),
            "refined": bound_report_json(&refined),
            "convenient": convenient.as_ref().map(bound_report_json),
        },
        "probe": sweep.as_ref().map(|s| {
            let mut p = probe_result_json(&s.result);
            let obj = p.as_object_mut().unwrap();
            obj.insert("weight".into(), json!(s.weight));
            obj.insert("witness".into(), s.witness.to_json());
            p
        }),
        "assumptions": assumptions,
    });
    let hash = content_hash(&report);
    report
        .as_object_mut()
        .expect("report is an object")
        .insert("hash".into(), Value::String(hash));
    Ok(Analysis {
        general,
        refined,
        convenient,
        sweep,
        json: report,
    })
}

// ---- SVG ----

/// Fixed-point decimal with three places, exactly rounded.
fn svg_coord(x: &BigRational) -> String {
    let scaled = x * BigRational::from_integer(BigInt::from(1000));
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let mag = rounded.abs();
    let whole = &mag / BigInt::from(1000);
    let frac = &mag % BigInt::from(1000);
    let sign = if negative { "-" } else { "" };
    format!("{sign}{whole}.{frac:03}")
}

fn class_color(class: CellClass) -> &'static str {
    match class {
        CellClass::Positive => "#000000",
        CellClass::Vanishing => "#1f4e9c",
        CellClass::Nonvanishing => "#c02020",
    }
}

/// Standalone SVG of the n = 3 section: shaded regions, cell segments,
/// labeled vertex points, class-coded colors.
pub fn render_svg(plan: &SimplexPlan) -> String {
    let mut out = String::new();
    let flip = |y: &BigRational| {
        BigRational::from_integer(BigInt::from(866)) - y
    };
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 866\" \
         font-family=\"monospace\" font-size=\"18\">\n",
    );
    out.push_str("  <rect x=\"0\" y=\"0\" width=\"1000\" height=\"866\" fill=\"#ffffff\"/>\n");
    for (i, region) in plan.regions.iter().enumerate() {
        let pts: Vec<String> = region
            .polygon
            .iter()
            .map(|(x, y)| format!("{},{}", svg_coord(x), svg_coord(&flip(y))))
            .collect();
        let shade = 235 - 12 * (i as i64 % 4);
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"rgb({shade},{shade},{shade})\" \
             stroke=\"none\"><title>{} value {}</title></polygon>\n",
            pts.join(" "),
            region.label,
            format_rational(&region.value),
        ));
    }
    for segment in &plan.segments {
        let (a, b) = &segment.endpoints;
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            svg_coord(&a.0),
            svg_coord(&flip(&a.1)),
            svg_coord(&b.0),
            svg_coord(&flip(&b.1)),
            class_color(segment.class),
        ));
    }
    for point in &plan.points {
        let x = svg_coord(&point.xy.0);
        let y = svg_coord(&flip(&point.xy.1));
        out.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{y}\" r=\"7\" fill=\"{}\"/>\n",
            class_color(point.class),
        ));
        let label = match &point.theta_prime {
            Some(tp) => format!("{} {}", point.label, format_rational(tp)),
            None => point.label.clone(),
        };
        out.push_str(&format!(
            "  <text x=\"{x}\" y=\"{y}\" dx=\"10\" dy=\"-6\" fill=\"{}\">{}</text>\n",
            class_color(point.class),
            label,
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// SVG for n = 3 inputs, JSON plan for any n = 3; errors otherwise.
pub fn emit_diagram_svg(f: &Polynomial, cfg: &Config) -> Result<String> {
    let diagram = build_dual_diagram_with(f, cfg)?;
    let plan = export_simplex_projection(&diagram, f)?;
    Ok(render_svg(&plan))
}

pub fn emit_diagram_json(f: &Polynomial, cfg: &Config) -> Result<Value> {
    let diagram = build_dual_diagram_with(f, cfg)?;
    let plan = export_simplex_projection(&diagram, f)?;
    Ok(plan.to_json())
}
