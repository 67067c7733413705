use num::Zero;

use crate::circuit::{Circuit, CircuitBuilder, GateId, GateKey, Point};
use crate::error::{Error, Result};
use crate::rational::{vandermonde_inverse, Q};

pub const GRID_CAP: usize = 200_000;

/// Circuit for the coefficient of ∏ t_j^{target_j} in `c`, where t_j is the
/// aux variable `vars[j]` of degree at most `bounds[j]`. Other aux variables
/// are kept.
pub fn extract_coefficient(c: &Circuit, vars: &[u32], bounds: &[usize], target: &[usize]) -> Result<Circuit> {
    let mut b = CircuitBuilder::new(c.rows(), c.cols(), c.group());
    let out = extract_into(&mut b, c, vars, bounds, target, "x.", &[])?;
    Ok(b.finish(out))
}

/// As [`extract_coefficient`], emitting into an existing builder. Copies are
/// keyed with `prefix` and the given support.
pub fn extract_into(
    b: &mut CircuitBuilder,
    c: &Circuit,
    vars: &[u32],
    bounds: &[usize],
    target: &[usize],
    prefix: &str,
    support: &[Point],
) -> Result<GateId> {
    if vars.len() != bounds.len() || vars.len() != target.len() {
        return Err(Error::InvalidArgument("vars, bounds and target must have equal length".into()));
    }
    for (j, (&t, &d)) in target.iter().zip(bounds).enumerate() {
        if t > d {
            return Err(Error::InvalidArgument(format!("target degree {t} of variable {j} exceeds its bound {d}")));
        }
    }
    let grid: usize = bounds.iter().map(|d| d + 1).try_fold(1usize, |a, x| a.checked_mul(x)).unwrap_or(usize::MAX);
    if grid > GRID_CAP {
        return Err(Error::cap("interpolation grid size", grid, GRID_CAP));
    }
    let inverses: Vec<Vec<Vec<Q>>> = bounds
        .iter()
        .map(|&d| vandermonde_inverse(&(0..=d).map(|p| Q::from_integer((p as i64).into())).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    let mut p = vec![0usize; vars.len()];
    for idx in 0..grid {
        let mut w = Q::from_integer(1.into());
        for j in 0..vars.len() {
            w *= &inverses[j][target[j]][p[j]];
        }
        if !w.is_zero() {
            let point = p.clone();
            let subst = |a: u32| vars.iter().position(|&v| v == a).map(|j| Q::from_integer((point[j] as i64).into()));
            let copy = b.import(c, &subst, &format!("{prefix}p{idx}."));
            let t = b.scale(w, copy);
            b.key(t, GateKey::new(format!("{prefix}w{idx}"), support.to_vec()));
            terms.push(t);
        }
        for j in (0..p.len()).rev() {
            p[j] += 1;
            if p[j] <= bounds[j] {
                break;
            }
            p[j] = 0;
        }
    }
    let out = b.sum(terms);
    b.key(out, GateKey::new(format!("{prefix}coef"), support.to_vec()));
    Ok(out)
}
