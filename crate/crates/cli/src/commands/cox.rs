use momentforge_core::cox::{
    action_free, chamber_contains, cox_weights, fan_chamber, fiber_classify, level_to_target, point_relevant,
    semistable_support, stable_support, target_to_level, Chamber, CoxError, FiberVerdict, SupportSet, WeightMatrix,
};
use momentforge_core::lattice::{smith_normal_form, RatVector};
use serde_json::{json, Value};

use super::fan::load_fan;
use crate::parse;
use crate::report::{int_matrix, rat_vec, Report};
use crate::{CliError, Ctx};

/// Where a weight matrix comes from: a fan (its Gale dual) or given inline.
#[derive(Clone, Debug, Default)]
pub struct WeightSource {
    pub fan: Option<String>,
    pub weights: Option<String>,
}

/// Momentum level or scaled target, exactly one of them.
#[derive(Clone, Debug, Default)]
pub struct TargetArg {
    pub target: Option<String>,
    pub level: Option<String>,
}

impl TargetArg {
    fn is_given(&self) -> bool {
        self.target.is_some() || self.level.is_some()
    }

    /// Returns the scaled target `b = −level/2`, recording both forms.
    fn resolve(&self, r: &mut Report) -> Result<RatVector, CliError> {
        let b = match (&self.target, &self.level) {
            (Some(t), None) => parse::rat_vector(t)?,
            (None, Some(l)) => level_to_target(&parse::rat_vector(l)?),
            (Some(_), Some(_)) => return Err(CliError::Input("give --target or --level, not both".into())),
            (None, None) => return Err(CliError::Input("missing --target or --level".into())),
        };
        r.verdict("level", rat_vec(&target_to_level(&b)));
        r.verdict("target", rat_vec(&b));
        r.note("target b = -level/2, level = -2 b (momentum mu_j = -2 sum_rho A_j,rho |z_rho|^2)");
        Ok(b)
    }
}

fn cox_error(r: &mut Report, e: CoxError) -> Result<(), CliError> {
    match e {
        CoxError::TargetDimension { .. } | CoxError::SupportIndex { .. } => Err(CliError::Input(e.to_string())),
        CoxError::TorsionClassGroup(ref t) => {
            r.token("torsion");
            r.verdict("torsion", json!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
            r.fail(format!("torsion-class-group: {e}"));
            Ok(())
        }
        CoxError::Fan(f) => {
            r.fail(f.to_string());
            Ok(())
        }
    }
}

fn weights_from(
    ctx: &Ctx,
    src: &WeightSource,
    inputs: &mut Vec<String>,
) -> Result<Result<WeightMatrix, CoxError>, CliError> {
    match (&src.fan, &src.weights) {
        (Some(path), None) => {
            let (input, fan) = load_fan(path, ctx.trust_fan)?;
            inputs.push(input.text);
            Ok(cox_weights(&fan))
        }
        (None, Some(w)) => {
            inputs.push(w.clone());
            Ok(Ok(WeightMatrix::from_rows(&parse::int_rows(w)?)))
        }
        _ => Err(CliError::Input("give exactly one of a fan file or --weights".into())),
    }
}

pub fn weights(ctx: &Ctx, path: &str) -> Result<Report, CliError> {
    let (input, fan) = load_fan(path, ctx.trust_fan)?;
    let mut r = Report::new(&ctx.command, &[&input.text]);
    match r.timed("weights", || cox_weights(&fan)) {
        Ok(w) => {
            let gale = w.a.mul(&fan.ray_matrix()).is_zero();
            let snf_units = w.k() == 0 || smith_normal_form(&w.a).all_units();
            r.verdict("k", w.k())
                .verdict("n", w.n())
                .verdict("gale_dual", gale)
                .verdict("snf_all_units", snf_units);
            r.certificate("A", int_matrix(&w.a));
            r.certificate("R", int_matrix(&fan.ray_matrix()));
            r.token(format!("k={}", w.k()));
            r.token(format!("shape={}x{}", w.k(), w.n()));
            if gale && snf_units {
                r.token("gale-dual");
            } else {
                r.fail("weight matrix fails A*R = 0 or surjectivity");
            }
        }
        Err(e) => cox_error(&mut r, e)?,
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn free(ctx: &Ctx, path: &str) -> Result<Report, CliError> {
    let (input, fan) = load_fan(path, ctx.trust_fan)?;
    let mut r = Report::new(&ctx.command, &[&input.text]);
    match cox_weights(&fan) {
        Ok(w) => {
            let v = r.timed("free", || action_free(&fan, &w));
            r.verdict("free", v.free);
            r.token(if v.free { "free" } else { "not-free" });
            if let Some((ci, factors)) = v.offending {
                r.certificate(
                    "stabilizer_cone",
                    json!({
                        "cone": ci,
                        "complement": fan.complement(ci),
                        "invariant_factors": factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    }),
                );
            }
        }
        Err(e) => cox_error(&mut r, e)?,
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn chamber(ctx: &Ctx, path: &str, target: &TargetArg) -> Result<Report, CliError> {
    let (input, fan) = load_fan(path, ctx.trust_fan)?;
    let mut r = Report::new(&ctx.command, &[&input.text]);
    let w = match cox_weights(&fan) {
        Ok(w) => w,
        Err(e) => {
            cox_error(&mut r, e)?;
            r.check_expect(&ctx.expect);
            return Ok(r);
        }
    };
    if target.is_given() {
        let b = target.resolve(&mut r)?;
        match chamber_contains(&fan, &w, &b) {
            Ok(Ok(())) => {
                r.verdict("in_chamber", true);
                r.token("inside");
            }
            Ok(Err((ci, on_wall))) => {
                r.verdict("in_chamber", false);
                r.certificate("missed_cone", json!({ "cone": ci, "complement": fan.complement(ci) }));
                if on_wall {
                    r.token("boundary");
                    r.note(format!(
                        "boundary: target lies on a wall of the complementary cone of maximal cone {ci}; \
                         no semistable-quotient verdict is given there"
                    ));
                } else {
                    r.token("outside");
                }
            }
            Err(e) => cox_error(&mut r, e)?,
        }
    } else {
        match r.timed("chamber", || fan_chamber(&fan, &w)) {
            Ok(Chamber::Witness { target, lambdas }) => {
                r.verdict("chamber", "nonempty");
                r.token("nonempty");
                r.certificate("target", rat_vec(&target));
                r.certificate("level", rat_vec(&target_to_level(&target)));
                r.certificate("lambdas", Value::Array(lambdas.iter().map(rat_vec).collect()));
            }
            Ok(Chamber::Empty) => {
                r.verdict("chamber", "empty");
                r.token("empty");
                r.note("the relative interiors of the complementary weight cones have no common point");
            }
            Err(e) => cox_error(&mut r, e)?,
        }
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn relevant(ctx: &Ctx, path: &str, support: &str) -> Result<Report, CliError> {
    let (input, fan) = load_fan(path, ctx.trust_fan)?;
    let idx = parse::indices(support)?;
    if let Some(&bad) = idx.iter().find(|&&i| i >= fan.ray_count()) {
        return Err(CliError::Input(format!("support index {bad} out of range")));
    }
    let mut r = Report::new(&ctx.command, &[&input.text, support]);
    let s = SupportSet::new(idx);
    let rel = point_relevant(&fan, &s);
    r.verdict("relevant", rel);
    r.token(if rel { "relevant" } else { "irrelevant" });
    if let Some(ci) = (0..fan.max_cones().len()).find(|&ci| fan.complement(ci).iter().all(|&x| s.contains(x))) {
        r.certificate("cone", json!({ "cone": ci, "complement": fan.complement(ci) }));
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn semistable(
    ctx: &Ctx,
    src: &WeightSource,
    target: &TargetArg,
    support: &str,
    stable: bool,
) -> Result<Report, CliError> {
    let mut inputs = Vec::new();
    let w = weights_from(ctx, src, &mut inputs)?;
    inputs.push(support.to_string());
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let mut r = Report::new(&ctx.command, &refs);
    let w = match w {
        Ok(w) => w,
        Err(e) => {
            cox_error(&mut r, e)?;
            return Ok(r);
        }
    };
    let b = target.resolve(&mut r)?;
    let s = SupportSet::new(parse::indices(support)?);
    let verdict = if stable {
        stable_support(&w, &b, &s)
    } else {
        semistable_support(&w, &b, &s)
    };
    match verdict {
        Ok(v) => {
            let key = if stable { "stable" } else { "semistable" };
            r.verdict(key, v.semistable);
            r.token(if v.semistable {
                key.to_string()
            } else {
                format!("not-{key}")
            });
            if let Some(l) = &v.lambda {
                r.certificate("lambda", rat_vec(l));
                r.certificate("support", json!(s.iter().collect::<Vec<_>>()));
            }
        }
        Err(e) => cox_error(&mut r, e)?,
    }
    r.certificate("A", int_matrix(&w.a));
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn fiber(ctx: &Ctx, src: &WeightSource, target: &TargetArg) -> Result<Report, CliError> {
    let mut inputs = Vec::new();
    let w = weights_from(ctx, src, &mut inputs)?;
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let mut r = Report::new(&ctx.command, &refs);
    let w = match w {
        Ok(w) => w,
        Err(e) => {
            cox_error(&mut r, e)?;
            return Ok(r);
        }
    };
    let b = target.resolve(&mut r)?;
    match fiber_classify(&w, &b) {
        Ok(v) => {
            r.verdict("fiber", v.label());
            r.token(v.label());
            match &v {
                FiberVerdict::Empty => {}
                FiberVerdict::Compact { point } => {
                    r.certificate("point", rat_vec(point));
                }
                FiberVerdict::Noncompact { point, direction } => {
                    r.certificate("point", rat_vec(point));
                    r.certificate("recession_direction", rat_vec(direction));
                }
            }
        }
        Err(e) => cox_error(&mut r, e)?,
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}
