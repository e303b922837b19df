use momentforge_core::cox::{level_to_target, semistable_support, target_to_level, SupportSet, WeightMatrix};
use momentforge_core::forms::PotentialChart;
use momentforge_core::lattice::rat_to_f64;
use momentforge_core::moment::{
    momentum_affine, momentum_from_potential, momentum_projective, orbit_distance_minimize, LieAlgebraAction,
    MomentError,
};
use serde_json::json;

use super::cox::TargetArg;
use crate::parse;
use crate::report::{float, floats, rat_vec, Report};
use crate::{CliError, Ctx};

fn input(e: MomentError) -> CliError {
    CliError::Input(e.to_string())
}

pub struct EvalArgs<'a> {
    pub weights: &'a str,
    pub at: &'a str,
    pub projective: bool,
    pub shift: Option<&'a str>,
    pub potential: Option<&'a str>,
    pub c: f64,
}

pub fn eval(ctx: &Ctx, a: &EvalArgs) -> Result<Report, CliError> {
    let rows = parse::int_rows(a.weights)?;
    let act = LieAlgebraAction::torus(&rows);
    let v = parse::point(a.at)?;
    let shift = a.shift.map(parse::floats).transpose()?;
    let mut r = Report::new(&ctx.command, &[]);
    let mu = if a.projective {
        momentum_projective(&act, &v, shift.as_deref()).map_err(input)?
    } else {
        momentum_affine(&act, &v, shift.as_deref()).map_err(input)?
    };
    r.verdict("map", if a.projective { "projective" } else { "affine" });
    r.verdict("mu", floats(&mu));
    if let Some(id) = a.potential {
        let pot = PotentialChart::builtin(id, v.len(), a.c).map_err(|e| CliError::Input(e.to_string()))?;
        let from_pot = momentum_from_potential(&pot, &act, &v).map_err(input)?;
        r.verdict("mu_from_potential", floats(&from_pot));
        r.note(format!(
            "potential {} differentiated along J xi_V(v), step 1e-5 max(1,|v|)",
            pot.id()
        ));
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn orbit_min(
    ctx: &Ctx,
    weights: &str,
    at: &str,
    target: &TargetArg,
    iters: usize,
    tol: f64,
) -> Result<Report, CliError> {
    let rows = parse::int_rows(weights)?;
    let w = WeightMatrix::from_rows(&rows);
    let z = parse::point(at)?;
    let mut r = Report::new(&ctx.command, &[]);
    r.seed = Some(ctx.seed);
    let b = match (&target.target, &target.level) {
        (Some(t), None) => parse::rat_vector(t)?,
        (None, Some(l)) => level_to_target(&parse::rat_vector(l)?),
        _ => return Err(CliError::Input("give exactly one of --target or --level".into())),
    };
    r.verdict("target", rat_vec(&b));
    r.verdict("level", rat_vec(&target_to_level(&b)));
    let bf: Vec<f64> = b.0.iter().map(rat_to_f64).collect();
    let res = r.timed("descent", || orbit_distance_minimize(&w, &z, &bf, ctx.seed, iters));
    let res = match res {
        Ok(res) => res,
        Err(MomentError::Diverged) => {
            r.verdict("diverged", true);
            r.fail("diverged");
            return Ok(r);
        }
        Err(e) => return Err(input(e)),
    };
    let reached = res.residual < tol;
    r.verdict("residual", float(res.residual))
        .verdict("iterations", res.iterations)
        .verdict("reached", reached);
    r.certificate("theta", floats(&res.theta));
    r.token(if reached { "reached" } else { "not-reached" });
    let support = SupportSet::new((0..z.len()).filter(|&i| z[i].norm_sqr() > 0.0));
    let exact = semistable_support(&w, &b, &support).map_err(|e| CliError::Input(e.to_string()))?;
    r.verdict("semistable_exact", exact.semistable);
    r.token(if exact.semistable {
        "semistable"
    } else {
        "not-semistable"
    });
    r.certificate("support", json!(support.iter().collect::<Vec<_>>()));
    if exact.semistable != reached {
        r.note("orbit descent and the exact cone test disagree; targets on a cone wall converge slowly");
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}
