use super::{check_pair, FormulaId, KernelEval};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, Vec2};
use crate::model_kernels::StripKernels;

pub(super) fn thin_rod(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let DomainSpec::ThinRodStrip {
        half_length: a,
        width: w,
        epsilon: eps,
        ..
    } = *spec
    else {
        return Err(Error::Unsupported("thin-rod needs a ThinRodStrip".into()));
    };
    check_pair(spec, x, y, Error::NotInRod)?;
    let k = StripKernels::new(w);
    let (xv, yv) = (x.v2()?, y.v2()?);
    let shift = |p: Vec2, s: f64| Vec2::new(p.x / eps, (p.y - s * a) / eps);
    let (zpi, zmi) = (k.zeta_inf_plus(), k.zeta_inf_minus());
    let zp = |p: Vec2| k.zeta_plus(shift(p, 1.0));
    let zm = |p: Vec2| k.zeta_minus(shift(p, -1.0));
    let linear = |p: Vec2| p.y / (eps * w) - 0.5 * (zmi - zpi) + zp(p) - zm(p);
    let den = 2.0 * a / w + eps * (zpi + zmi);
    let terms = vec![
        ("half-strip-plus", k.g_plus(shift(xv, 1.0), shift(yv, 1.0))?),
        (
            "half-strip-minus",
            k.g_minus(shift(xv, -1.0), shift(yv, -1.0))?,
        ),
        ("strip-compensator", -k.g_inf(xv / eps, yv / eps)?),
        ("flux-cross-term", -eps * linear(xv) * linear(yv) / den),
        (
            "end-constant",
            0.25 * (2.0 * a / (eps * w) + zmi + zpi - 2.0 * (zp(xv) + zm(xv) + zp(yv) + zm(yv))),
        ),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::ThinRod,
        *x,
        *y,
        eps,
        terms,
    ))
}
