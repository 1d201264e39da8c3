use super::{check_pair, FormulaId, KernelEval};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, Vec2};
use crate::model_kernels::{PsiNormalization, SectorKernels};

pub(super) fn truncated_cone(
    spec: &DomainSpec,
    psi: PsiNormalization,
    x: &Point,
    y: &Point,
) -> Result<KernelEval> {
    let DomainSpec::TruncatedSector {
        alpha,
        epsilon: eps,
    } = *spec
    else {
        return Err(Error::Unsupported(
            "truncated-cone needs a TruncatedSector".into(),
        ));
    };
    check_pair(spec, x, y, Error::NotInTruncatedSector)?;
    let k = SectorKernels::new(alpha, psi);
    let l = k.eigen.lambda;
    let (xv, yv) = (x.v2()?, y.v2()?);
    let (xi, eta) = (xv / eps, yv / eps);
    // |ξ|^λ Ψ − Z∞(ξ) and |y|^{−λ} Ψ − Z₀(y)
    let outer_defect = |p: Vec2| -> Result<f64> {
        Ok((p / eps).norm().powf(l) * k.psi_at(p)? - k.z_inf(p / eps)?)
    };
    let inner_defect =
        |p: Vec2| -> Result<f64> { Ok(p.norm().powf(-l) * k.psi_at(p)? - k.z_zero(p)?) };
    let bracket = outer_defect(xv)? * inner_defect(yv)? + outer_defect(yv)? * inner_defect(xv)?;
    let terms = vec![
        ("inner-sector-green", k.g_zero(xv, yv)?),
        ("outer-sector-green", k.g_inf(xi, eta)?),
        ("cone-compensator", -k.g_cone(xv, yv)?),
        ("eigen-correction", eps.powf(l) / (2.0 * l) * bracket),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::TruncatedCone,
        *x,
        *y,
        eps,
        terms,
    ))
}
