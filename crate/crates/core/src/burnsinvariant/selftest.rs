use serde::Serialize;

use super::{
    l_ratio_check_discriminant, l_ratio_squared_exact, omega_loc_torsion, resolvent_factor_check,
    ComputeOptions, Verdict,
};
use crate::biquadratic::field_data;
use crate::error::Result;
use crate::grouprings::{CharLabel, GaloisChar, GroupElement};
use crate::localterms::{
    build_tame_complex, residue_class, tame_class, verify_residue_resolution, TameComplexSpec,
};
use crate::perfectcomplex::{char_specialize, cohomology_basis};
use crate::rational::{format_rational, int, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestCase {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn case(name: &'static str, passed: bool, detail: impl Into<String>) -> SelftestCase {
    SelftestCase {
        name,
        passed,
        detail: detail.into(),
    }
}

fn show(values: &[Rational]) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(", ")
}

/// The reference values that the library must reproduce exactly.
pub fn selftest() -> Result<Vec<SelftestCase>> {
    let (a, b) = (GroupElement::A, GroupElement::B);
    let mut out = Vec::new();

    for (p, want) in [
        (3, [rat(1, 4), int(-1), rat(-1, 2), int(-1)]),
        (5, [rat(1, 8), int(-1), rat(-1, 3), int(-1)]),
    ] {
        let h = tame_class(&TameComplexSpec::new(p, a, b)?)?;
        out.push(case(
            if p == 3 {
                "tame determinants p=3"
            } else {
                "tame determinants p=5"
            },
            h.values() == &want,
            show(h.values()),
        ));
    }

    let c = build_tame_complex(&TameComplexSpec::new(5, a, b)?)?;
    let triv = char_specialize(&c, &GaloisChar::v4(CharLabel::Trivial))?;
    out.push(case(
        "trivial specialisation of lambda at p=5",
        triv.maps()[0].column(0) == vec![int(4), int(0)],
        show(&triv.maps()[0].column(0)),
    ));
    let unram = char_specialize(&c, &GaloisChar::v4_from_signs(1, -1))?;
    out.push(case(
        "unramified specialisation of lambda at p=5",
        unram.maps()[0].column(0) == vec![int(-6), int(0)],
        show(&unram.maps()[0].column(0)),
    ));
    let dims: Vec<Vec<usize>> = CharLabel::ALL
        .iter()
        .map(|&l| {
            char_specialize(&c, &GaloisChar::v4(l)).map(|rc| {
                cohomology_basis(&rc)
                    .iter()
                    .map(|h| h.cohomology.len())
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    out.push(case(
        "tame cohomology dimensions",
        dims[0] == [0, 1, 1] && dims[1..].iter().all(|d| d.iter().all(|&x| x == 0)),
        format!("{dims:?}"),
    ));

    let r = verify_residue_resolution(5, a);
    out.push(case(
        "residue identity x - a x = 1 - a",
        r.difference_identity,
        format!("{r:?}"),
    ));
    let all_pass = (3..50u64)
        .filter(|&p| crate::biquadratic::is_prime(p))
        .all(|p| verify_residue_resolution(p, a).passed());
    out.push(case("residue resolution p < 50", all_pass, ""));
    let rc = residue_class(5, a);
    out.push(case(
        "residue class p=5",
        rc.values() == &[int(5), int(1), int(5), int(1)],
        show(rc.values()),
    ));

    let f = field_data(5, 13, false)?;
    let trivial = l_ratio_squared_exact(&GaloisChar::v4(CharLabel::Trivial), &f);
    let chi5 = l_ratio_squared_exact(&GaloisChar::v4(CharLabel::Chi1), &f);
    out.push(case(
        "exact L-ratio squares",
        trivial == int(4) && chi5 == rat(4, 5),
        show(&[trivial, chi5]),
    ));
    let numeric = l_ratio_check_discriminant(5, 1e-9);
    out.push(case(
        "numeric L-ratio at conductor 5",
        numeric.is_ok(),
        numeric.map_or_else(|e| e.to_string(), |c| format!("{:.9}", c.lhs_numeric)),
    ));

    let res = resolvent_factor_check(&field_data(2, 17, false)?)?;
    let r = res.as_ref().and_then(|c| c.r.clone());
    out.push(case(
        "resolvent factor for (2, 17)",
        r == Some(rat(17, 1024)),
        r.map_or("none".into(), |q| format_rational(&q)),
    ));

    let report = omega_loc_torsion(5, 13, &ComputeOptions::default())?;
    out.push(case(
        "invariant vanishes for (5, 13)",
        report.verdict == Verdict::Vanishes,
        format!("{:?}", report.verdict),
    ));
    let report = omega_loc_torsion(2, 5, &ComputeOptions::default())?;
    out.push(case(
        "(2, 5) is inadmissible",
        report.verdict == Verdict::Inadmissible,
        format!("{:?}", report.verdict),
    ));
    Ok(out)
}
