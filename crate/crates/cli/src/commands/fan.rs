use momentforge_core::fan::{parse_fan, Fan, ParseOptions, Projectivity, ProjectivityLp};
use serde_json::{json, Value};

use crate::datasets::{load_input, Loaded};
use crate::report::{rat_vec, Report};
use crate::{CliError, Ctx};

pub(crate) fn load_fan(path: &str, trust_fan: bool) -> Result<(Loaded, Fan), CliError> {
    let input = load_input(path)?;
    let fan = parse_fan(&input.text, ParseOptions { trust_fan })
        .map_err(|e| CliError::Input(format!("{}: {e}", input.path.display())))?;
    Ok((input, fan))
}

pub fn check(ctx: &Ctx, path: &str) -> Result<Report, CliError> {
    let (input, fan) = load_fan(path, ctx.trust_fan)?;
    let mut r = Report::new(&ctx.command, &[&input.text]);
    if let Some(d) = &input.dataset {
        r.note(format!("bundled dataset {} (sha256 pinned)", d.id));
    }
    if ctx.cross_check {
        r.seed = Some(ctx.seed);
    }
    r.verdict("name", fan.name())
        .verdict("dim", fan.dim())
        .verdict("rays", fan.ray_count())
        .verdict("max_cones", fan.max_cones().len())
        .verdict("simplicial", true)
        .verdict("face_to_face_checked", fan.face_checked());
    r.token("simplicial");
    if !fan.face_checked() {
        r.note("face-to-face check skipped");
    }

    let smooth = r.timed("smooth", || fan.is_smooth());
    r.verdict("smooth", smooth.smooth);
    r.token(if smooth.smooth { "smooth" } else { "singular" });
    if let Some((ci, factors)) = &smooth.offending {
        r.certificate(
            "singular_cone",
            json!({
                "cone": ci,
                "rays": fan.max_cones()[*ci],
                "invariant_factors": factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            }),
        );
    }

    let complete = r.timed("complete", || fan.is_complete());
    r.verdict("complete", complete);
    r.token(if complete { "complete" } else { "incomplete" });
    if ctx.cross_check {
        let hole = r.timed("complete_sampled", || fan.uncovered_direction(1000, ctx.seed));
        r.verdict("complete_sampled", hole.is_none());
        if let Some(d) = &hole {
            r.certificate("uncovered_direction", json!(d));
        }
        if hole.is_none() != complete {
            r.fail("wall criterion and direction sampling disagree on completeness");
        }
    }

    if complete {
        let proj = r.timed("projective", || fan.is_projective_with(ProjectivityLp::RayValues));
        let proj = proj.expect("complete fan");
        r.verdict("projective", proj.is_projective());
        r.token(if proj.is_projective() {
            "projective"
        } else {
            "nonprojective"
        });
        match &proj {
            Projectivity::Projective(w) => {
                let ok = fan.verify_support_function(w);
                r.certificate(
                    "support_function",
                    json!({
                        "m": w.m.iter().map(rat_vec).collect::<Vec<Value>>(),
                        "reverified": ok,
                    }),
                );
                if !ok {
                    r.fail("support-function witness failed exact re-verification");
                }
            }
            Projectivity::NonProjective => {
                r.note("no strictly convex support function: the exact LP is infeasible");
            }
        }
        if ctx.cross_check {
            let other = r.timed("projective_cross", || {
                fan.is_projective_with(ProjectivityLp::ConeFunctionals)
                    .expect("complete fan")
            });
            r.verdict("projective_cone_lp", other.is_projective());
            if other.is_projective() != proj.is_projective() {
                r.fail("ray-value and cone-functional LPs disagree on projectivity");
            }
        }
    } else {
        r.verdict("projective", Value::Null);
        r.note("projectivity is only decided for complete fans");
    }

    match r.timed("class_group", || fan.class_group()) {
        Ok(cg) => {
            let torsion: Vec<String> = cg.torsion.iter().map(|t| t.to_string()).collect();
            r.verdict("class_group", json!({ "free_rank": cg.free_rank, "torsion": torsion }));
            r.token(format!("rank={}", cg.free_rank));
            if torsion.is_empty() {
                r.token("torsion-free");
            } else {
                r.token(format!("torsion={}", torsion.join("x")));
            }
        }
        Err(e) => {
            r.verdict("class_group", Value::Null);
            r.note(format!("class group: {e}"));
        }
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}
