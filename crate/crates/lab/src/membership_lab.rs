//! Limits of uMPS families, infeasibility certificates for tensors outside
//! uMPS, and the exact membership test for uMPS(2,2,4).

use std::sync::Arc;

use serde_json::{json, Value};
use umps_core::arith::{rat_int, ComplexF, Cyclotomic, CyclotomicField, QuadExt, Rational, Ring};
use umps_core::linalg::Mat;
use umps_core::necklace::{w_state, CyclicTensor, NecklaceBasis};
use umps_core::poly::{format_poly, parse_poly, Ideal, MonomialOrder, MultiPoly, PolyRing};
use umps_core::umps::{evaluate_in_basis, MatrixTuple};
use umps_core::{Error, Result};

use crate::golden::{reference_224, Reference224};

/// Default λ grid: 10^-1, 10^-1.5, …, 10^-3.
pub fn default_grid() -> Vec<f64> {
    [-1.0, -1.5, -2.0, -2.5, -3.0]
        .iter()
        .map(|e: &f64| 10f64.powf(*e))
        .collect()
}

/// Residuals below this are treated as numerically zero.
pub const RESIDUAL_FLOOR: f64 = 1e-14;
/// Allowed difference between fitted and claimed exponent.
pub const RATE_TOLERANCE: f64 = 0.1;

/// A one-parameter family `λ ↦ (λ^{e_0} A_0, …, λ^{e_{d−1}} A_{d−1})` with
/// exact base matrices in a cyclotomic field.
#[derive(Clone, Debug)]
pub struct LimitFamily {
    pub label: String,
    pub n: usize,
    pub base: MatrixTuple<Cyclotomic>,
    pub exponents: Vec<i64>,
    pub target: CyclicTensor<Cyclotomic>,
    /// `r` with ‖T_N(ℳ_λ) − target‖ = O(λ^r).
    pub claimed_rate: i64,
}

/// One necklace coordinate as `λ^exponent · coefficient`.
#[derive(Clone, Debug)]
struct Term {
    exponent: i64,
    coefficient: Cyclotomic,
    target: Cyclotomic,
}

impl LimitFamily {
    pub fn bond(&self) -> usize {
        self.base.bond()
    }

    pub fn phys(&self) -> usize {
        self.base.phys()
    }

    fn terms(&self) -> Vec<Term> {
        let basis = self.target.basis().clone();
        let coeffs = evaluate_in_basis(&self.base, &basis).into_coords();
        basis
            .necklaces()
            .iter()
            .zip(coeffs)
            .zip(self.target.coords())
            .map(|((w, c), t)| Term {
                exponent: w.word().iter().map(|&s| self.exponents[s as usize]).sum(),
                coefficient: c,
                target: t.clone(),
            })
            .collect()
    }

    /// Numeric tuple at λ.
    pub fn tuple_at(&self, lambda: f64) -> MatrixTuple<ComplexF> {
        let mats = self
            .base
            .mats()
            .iter()
            .zip(&self.exponents)
            .map(|(m, &e)| {
                let s = ComplexF::new(lambda.powi(e as i32), 0.0);
                m.map(|x| x.to_complex() * s)
            })
            .collect();
        MatrixTuple::new(mats).expect("base tuple is well formed")
    }

    /// Exact `T_N(ℳ_λ)` at a nonzero rational λ.
    pub fn evaluate_exact(&self, lambda: &Rational) -> Result<CyclicTensor<Cyclotomic>> {
        if lambda.is_zero() {
            return Err(Error::InvalidArgument("λ must be nonzero".into()));
        }
        let field = self.base.like().field().clone();
        let coords = self
            .terms()
            .into_iter()
            .map(|t| t.coefficient * &field.from_rational(lambda.pow(t.exponent as i32)))
            .collect();
        Ok(CyclicTensor::new(self.target.basis().clone(), coords))
    }

    /// Euclidean norm of `T_N(ℳ_λ) − target` over necklace coordinates.
    /// Coordinates whose λ-power is zero are subtracted exactly.
    pub fn residual_norm(&self, lambda: f64) -> f64 {
        self.terms()
            .iter()
            .map(|t| {
                let r = if t.exponent == 0 {
                    (t.coefficient.clone() - &t.target).to_complex()
                } else {
                    t.coefficient.to_complex() * lambda.powi(t.exponent as i32)
                        - t.target.to_complex()
                };
                r.norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Exact order of vanishing of the residual at λ = 0: the smallest
    /// exponent among coordinates that differ from the target. `None` when
    /// the residual is identically zero; a value ≤ 0 means no convergence.
    pub fn residual_order(&self) -> Option<i64> {
        self.terms()
            .iter()
            .filter_map(|t| {
                if t.exponent == 0 {
                    (!(t.coefficient.clone() - &t.target).is_zero()).then_some(0)
                } else if !t.target.is_zero() {
                    Some(t.exponent.min(0))
                } else {
                    (!t.coefficient.is_zero()).then_some(t.exponent)
                }
            })
            .min()
    }

    /// A family that does not move: residual identically zero.
    pub fn constant(label: &str, tuple: &MatrixTuple<Rational>, n: usize) -> Result<Self> {
        let field = CyclotomicField::new(1);
        let base = tuple.map(|q| field.from_rational(q.clone()));
        let basis = NecklaceBasis::new(n, tuple.phys() as u8);
        let target = evaluate_in_basis(&base, &basis);
        Ok(LimitFamily {
            label: label.to_string(),
            n,
            exponents: vec![0; tuple.phys()],
            base,
            target,
            claimed_rate: 0,
        })
    }
}

fn matrix(rows: [[Cyclotomic; 2]; 2]) -> Mat<Cyclotomic> {
    Mat::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
}

/// The three families: `"e012"`, `"wstate(N)"` and `"wstate_real(N)"`.
pub fn builtin_family(name: &str) -> Result<LimitFamily> {
    let name = name.trim();
    if name == "e012" {
        let f = CyclotomicField::new(1);
        let (o, z) = (f.from_rational(rat_int(1)), f.from_rational(rat_int(0)));
        let mats = vec![
            matrix([[o.clone(), z.clone()], [z.clone(), z.clone()]]),
            matrix([[z.clone(), o.clone()], [z.clone(), z.clone()]]),
            matrix([[z.clone(), z.clone()], [o.clone(), z.clone()]]),
        ];
        let basis = NecklaceBasis::new(3, 3);
        let mut target = CyclicTensor::zero(basis, &z);
        target.set_coord("012", o)?;
        return Ok(LimitFamily {
            label: "e012".into(),
            n: 3,
            base: MatrixTuple::new(mats)?,
            exponents: vec![2, -1, -1],
            target,
            claimed_rate: 6,
        });
    }
    let (kind, n) = parse_family_name(name)?;
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "{name}: N must be at least 3"
        )));
    }
    match kind {
        "wstate" => {
            // ζ = exp(iπ/N), so ζ^N = −1
            let f = CyclotomicField::new(2 * n as u32);
            let (o, z, zeta) = (
                f.from_rational(rat_int(1)),
                f.from_rational(rat_int(0)),
                f.zeta_pow(1),
            );
            let mats = vec![
                matrix([[o.clone(), z.clone()], [z.clone(), zeta.clone()]]),
                matrix([[o.clone(), z.clone()], [z.clone(), -zeta]]),
            ];
            let two = f.from_rational(rat_int(2));
            Ok(LimitFamily {
                label: format!("wstate({n})"),
                n,
                base: MatrixTuple::new(mats)?,
                exponents: vec![-1, n as i64 - 1],
                target: w_state(n, &z).scale(&two),
                claimed_rate: 2 * n as i64,
            })
        }
        "wstate_real" => {
            // ζ = exp(iπ/(2N)): the λ^{-N} coordinate ζ^N + ζ^{-N} vanishes
            let f = CyclotomicField::new(4 * n as u32);
            let (o, z) = (f.from_rational(rat_int(1)), f.from_rational(rat_int(0)));
            let s = f.zeta_pow(1) + &f.zeta_pow(-1);
            let mats = vec![
                matrix([[s, o.clone()], [-o.clone(), z.clone()]]),
                matrix([[o.clone(), z.clone()], [z.clone(), o]]),
            ];
            let c = f.zeta_pow(n as i64 - 1) + &f.zeta_pow(1 - n as i64);
            Ok(LimitFamily {
                label: format!("wstate_real({n})"),
                n,
                base: MatrixTuple::new(mats)?,
                exponents: vec![-1, n as i64 - 1],
                target: w_state(n, &z).scale(&c),
                claimed_rate: n as i64,
            })
        }
        _ => unreachable!(),
    }
}

fn parse_family_name(name: &str) -> Result<(&'static str, usize)> {
    let unknown = || Error::InvalidArgument(format!("unknown family {name:?}"));
    let (head, rest) = name.split_once('(').ok_or_else(unknown)?;
    let n: usize = rest
        .strip_suffix(')')
        .ok_or_else(unknown)?
        .trim()
        .parse()
        .map_err(|_| unknown())?;
    match head.trim() {
        "wstate" => Ok(("wstate", n)),
        "wstate_real" => Ok(("wstate_real", n)),
        _ => Err(unknown()),
    }
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    pub label: String,
    pub claimed_rate: i64,
    /// `(λ, ‖residual‖)` on the grid.
    pub points: Vec<(f64, f64)>,
    pub slope: Option<f64>,
    pub residual_order: Option<i64>,
    pub exact: bool,
    pub pass: bool,
}

impl LimitReport {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.label,
            "claimed_rate": self.claimed_rate,
            "points": self.points.iter().map(|(l, r)| json!({"lambda": l, "residual": r})).collect::<Vec<_>>(),
            "slope": self.slope,
            "residual_order": self.residual_order,
            "exact": self.exact,
            "pass": self.pass,
        })
    }
}

/// Least-squares slope of `log ‖residual‖` against `log λ`.
pub fn limit_experiment(family: &LimitFamily, grid: &[f64]) -> Result<LimitReport> {
    if grid.len() < 3 {
        return Err(Error::InvalidArgument(
            "λ grid needs at least 3 values".into(),
        ));
    }
    if grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "λ grid must be positive and decreasing".into(),
        ));
    }
    let points: Vec<(f64, f64)> = grid.iter().map(|&l| (l, family.residual_norm(l))).collect();
    let residual_order = family.residual_order();
    let base = LimitReport {
        label: family.label.clone(),
        claimed_rate: family.claimed_rate,
        points: points.clone(),
        slope: None,
        residual_order,
        exact: false,
        pass: false,
    };
    if residual_order.is_none() {
        return Ok(LimitReport {
            exact: true,
            pass: true,
            ..base
        });
    }
    if points.iter().all(|&(_, r)| r < RESIDUAL_FLOOR) {
        return Err(Error::InvalidArgument(format!(
            "{}: residual below {RESIDUAL_FLOOR:e} on the whole grid, nothing to fit",
            family.label
        )));
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, r)| r > 0.0)
        .map(|&(l, r)| (l.ln(), r.ln()))
        .collect();
    if xy.len() < 2 {
        return Err(Error::InvalidArgument(
            "fewer than two nonzero residuals".into(),
        ));
    }
    let k = xy.len() as f64;
    let (mx, my) = (
        xy.iter().map(|p| p.0).sum::<f64>() / k,
        xy.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(LimitReport {
        slope: Some(slope),
        pass: (slope - family.claimed_rate as f64).abs() <= RATE_TOLERANCE,
        ..base
    })
}

/// A polynomial system and what its Gröbner basis says about it.
#[derive(Clone, Debug)]
pub struct SystemResult {
    pub label: String,
    pub vars: Vec<String>,
    pub equations: Vec<String>,
    pub groebner_basis: Vec<String>,
    pub infeasible: bool,
}

impl SystemResult {
    fn solve(
        label: &str,
        ring: &Arc<PolyRing>,
        eqs: Vec<MultiPoly<Rational>>,
        budget: Option<u64>,
    ) -> Result<Self> {
        let equations = eqs
            .iter()
            .map(|e| format!("{} = 0", format_poly(e)))
            .collect();
        let ideal = Ideal::new(ring.clone(), eqs)?;
        let g = ideal.groebner(MonomialOrder::GrevLex, budget)?;
        let basis = g.basis().unwrap();
        let infeasible = basis.len() == 1 && basis[0].is_constant();
        Ok(SystemResult {
            label: label.to_string(),
            vars: ring.vars().to_vec(),
            equations,
            groebner_basis: basis.iter().map(format_poly).collect(),
            infeasible,
        })
    }

    pub fn to_json(&self) -> Value {
        const SHOWN: usize = 12;
        let shown: Vec<&String> = self.groebner_basis.iter().take(SHOWN).collect();
        json!({
            "system": self.label,
            "vars": self.vars,
            "equations": self.equations,
            "groebner_basis": shown,
            "groebner_basis_size": self.groebner_basis.len(),
            "infeasible": self.infeasible,
        })
    }
}

fn entry(ring: &Arc<PolyRing>, s: &str) -> MultiPoly<Rational> {
    parse_poly(ring, s).expect("entry parses")
}

fn poly_tuple(ring: &Arc<PolyRing>, mats: &[[[&str; 2]; 2]]) -> MatrixTuple<MultiPoly<Rational>> {
    let mats = mats
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(|s| entry(ring, s)).collect())
                .collect()
        })
        .collect();
    MatrixTuple::from_rows(mats).expect("2×2 matrices")
}

/// `T_N(tuple) − target`, one equation per necklace.
fn necklace_system(
    tuple: &MatrixTuple<MultiPoly<Rational>>,
    target: &CyclicTensor<Rational>,
) -> Vec<MultiPoly<Rational>> {
    let ring = tuple.like().ring().clone();
    evaluate_in_basis(tuple, target.basis())
        .into_coords()
        .into_iter()
        .zip(target.coords())
        .map(|(f, t)| f - MultiPoly::constant(ring.clone(), t.clone()))
        .collect()
}

/// Hand-condensed subsets of the e₀₁₂ systems, nilpotent case.
const CONDENSED_JORDAN_233: [&str; 4] = [
    "a2*c2 + c2*d2",
    "a3*c3 + c3*d3",
    "a2*c3 + c2*d3",
    "a3*c2 + c3*d2 - 1",
];

/// Hand-condensed diagonal system.
const CONDENSED_DIAGONAL_233: [&str; 11] = [
    "a1^3 + d1^3",
    "a2^3 + 3*a2*b2*c2 + 3*b2*c2*d2 + d2^3",
    "a3^3 + 3*a3*b3*c3 + 3*b3*c3*d3 + d3^3",
    "a1*a2^2 + a1*b2*c2 + b2*c2*d1 + d1*d2^2",
    "a1^2*a2 + d1^2*d2",
    "a1*a3^2 + a1*b3*c3 + b3*c3*d1 + d1*d3^2",
    "a1^2*a3 + d1^2*d3",
    "a2*a3^2 + a3*b3*c2 + a3*b2*c3 + a2*b3*c3 + b3*c3*d2 + b3*c2*d3 + b2*c3*d3 + d2*d3^2",
    "a2^2*a3 + a3*b2*c2 + a2*b3*c2 + a2*b2*c3 + b3*c2*d2 + b2*c3*d2 + b2*c2*d3 + d2^2*d3",
    "a1*a2*a3 + a1*b2*c3 + b3*c2*d1 + d1*d2*d3 - 1",
    "a1*a2*a3 + a1*b3*c2 + b2*c3*d1 + d1*d2*d3",
];

const UNKNOWNS_233: [&str; 8] = ["a2", "b2", "c2", "d2", "a3", "b3", "c3", "d3"];

/// Whether every polynomial in `condensed` equals, up to a nonzero scalar,
/// some polynomial in `generated` (compared by variable names).
pub fn appears_among(condensed: &[MultiPoly<Rational>], generated: &[MultiPoly<Rational>]) -> bool {
    condensed.iter().all(|p| {
        generated
            .iter()
            .any(|g| crate::variety_lab::proportional(g, p))
    })
}

#[derive(Clone, Debug)]
pub struct E012Certificate {
    pub jordan: SystemResult,
    pub diagonal: SystemResult,
    pub condensed_jordan: SystemResult,
    pub condensed_diagonal: SystemResult,
    /// Condensed systems found among the generated ones.
    pub condensed_match: bool,
    /// Condensed Jordan system without its `= 1` equation.
    pub control: SystemResult,
    pub certified: bool,
}

impl E012Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "claim": "e012 is not in uMPS(2,3,3)",
            "systems": [
                self.jordan.to_json(),
                self.diagonal.to_json(),
                self.condensed_jordan.to_json(),
                self.condensed_diagonal.to_json(),
                self.control.to_json(),
            ],
            "condensed_systems_among_generated": self.condensed_match,
            "verdict": self.certified,
        })
    }
}

/// `e₀₁₂ ∉ uMPS(2,3,3)`: with `M₀` in Jordan form, the equations
/// `T₃(M₀, M₁, M₂) = e₀₁₂` have no solution in either Jordan case.
pub fn certify_not_member_e012() -> Result<E012Certificate> {
    let basis = NecklaceBasis::new(3, 3);
    let mut target = CyclicTensor::zero(basis, &rat_int(0));
    target.set_coord("012", rat_int(1))?;
    let m12: [[[&str; 2]; 2]; 2] = [[["a2", "b2"], ["c2", "d2"]], [["a3", "b3"], ["c3", "d3"]]];

    let jr = PolyRing::grevlex(std::iter::once("a").chain(UNKNOWNS_233));
    let jt = poly_tuple(&jr, &[[["a", "1"], ["0", "a"]], m12[0], m12[1]]);
    let jordan_eqs = necklace_system(&jt, &target);

    let dr = PolyRing::grevlex(["a1", "d1"].into_iter().chain(UNKNOWNS_233));
    let dt = poly_tuple(&dr, &[[["a1", "0"], ["0", "d1"]], m12[0], m12[1]]);
    let diagonal_eqs = necklace_system(&dt, &target);

    let pr = PolyRing::grevlex(UNKNOWNS_233);
    let condensed_j: Vec<_> = CONDENSED_JORDAN_233.iter().map(|s| entry(&pr, s)).collect();
    let condensed_d: Vec<_> = CONDENSED_DIAGONAL_233
        .iter()
        .map(|s| entry(&dr, s))
        .collect();

    // the condensed Jordan system is the generated one at a = 0
    let at_zero: Vec<MultiPoly<Rational>> = jordan_eqs
        .iter()
        .map(|g| g.substitute(0, &rat_int(0)))
        .collect();
    let condensed_in_jordan = appears_among(
        &condensed_j
            .iter()
            .map(|p| p.into_ring(jr.clone()))
            .collect::<Result<Vec<_>>>()?,
        &at_zero,
    );
    let condensed_match = condensed_in_jordan && appears_among(&condensed_d, &diagonal_eqs);

    let jordan = SystemResult::solve("generated, M0 = [[a,1],[0,a]]", &jr, jordan_eqs, None)?;
    let diagonal = SystemResult::solve("generated, M0 = diag(a1,d1)", &dr, diagonal_eqs, None)?;
    let condensed_jordan = SystemResult::solve(
        "condensed, nilpotent Jordan block",
        &pr,
        condensed_j.clone(),
        None,
    )?;
    let condensed_diagonal = SystemResult::solve("condensed, diagonal", &dr, condensed_d, None)?;
    let control = SystemResult::solve(
        "condensed nilpotent system without its = 1 equation",
        &pr,
        condensed_j[..3].to_vec(),
        None,
    )?;
    Ok(E012Certificate {
        certified: jordan.infeasible && diagonal.infeasible,
        jordan,
        diagonal,
        condensed_jordan,
        condensed_diagonal,
        condensed_match,
        control,
    })
}

#[derive(Clone, Debug)]
pub struct WStateCertificate {
    pub n: usize,
    pub jordan: SystemResult,
    pub diagonal: SystemResult,
    /// Both systems infeasible: `W_N ∉ uMPS(2,2,N)`.
    pub certified: bool,
}

impl WStateCertificate {
    pub fn member(&self) -> bool {
        !self.certified
    }

    pub fn to_json(&self) -> Value {
        json!({
            "claim": format!("W_{} is not in uMPS(2,2,{})", self.n, self.n),
            "systems": [self.jordan.to_json(), self.diagonal.to_json()],
            "verdict": if self.certified { "not a member" } else { "member" },
        })
    }
}

/// Equations `T_N(M₀, M₁) = W_N` with `M₀ = [[a,1],[0,a]]` or
/// `M₀ = diag(a, d)` and `M₁ = [[A,B],[C,D]]`, solved over ℚ.
pub fn certify_not_member_wstate(n: usize, budget: Option<u64>) -> Result<WStateCertificate> {
    if !(3..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "W-state certificate needs 3 ≤ N ≤ 8, got {n}"
        )));
    }
    let target = w_state(n, &rat_int(0));
    let m1 = [["A", "B"], ["C", "D"]];
    let jr = PolyRing::grevlex(["a", "A", "B", "C", "D"]);
    let jt = poly_tuple(&jr, &[[["a", "1"], ["0", "a"]], m1]);
    let dr = PolyRing::grevlex(["a", "d", "A", "B", "C", "D"]);
    let dt = poly_tuple(&dr, &[[["a", "0"], ["0", "d"]], m1]);
    let jordan = SystemResult::solve(
        "M0 = [[a,1],[0,a]]",
        &jr,
        necklace_system(&jt, &target),
        budget,
    )?;
    let diagonal =
        SystemResult::solve("M0 = diag(a,d)", &dr, necklace_system(&dt, &target), budget)?;
    Ok(WStateCertificate {
        n,
        certified: jordan.infeasible && diagonal.infeasible,
        jordan,
        diagonal,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub point: CyclicTensor<QuadExt>,
    pub in_closure: bool,
    /// Always decided for uMPS(2,2,4).
    pub in_set: Option<bool>,
    pub certificate: Vec<String>,
}

impl MembershipVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point.to_json(),
            "in_closure": self.in_closure,
            "in_set": self.in_set,
            "certificate": self.certificate,
        })
    }
}

fn ordered_point(ring: &PolyRing, t: &CyclicTensor<QuadExt>) -> Result<Vec<QuadExt>> {
    ring.vars()
        .iter()
        .map(|v| {
            let label = v.strip_prefix('x').unwrap_or(v);
            t.coord(label)
                .cloned()
                .ok_or_else(|| Error::Shape(format!("no coordinate {label}")))
        })
        .collect()
}

/// Membership in uMPS(2,2,4) = (V(f) ∖ (V(I₁) ∪ V(I₂) ∪ V(I₃))) ∪ V(J).
pub fn decide_membership_224(point: &CyclicTensor<QuadExt>) -> Result<MembershipVerdict> {
    static DATA: std::sync::OnceLock<Reference224> = std::sync::OnceLock::new();
    let data = DATA.get_or_init(reference_224);
    if point.n() != 4 || point.d() != 2 {
        return Err(Error::Shape(format!(
            "need N = 4, d = 2, got N = {}, d = {}",
            point.n(),
            point.d()
        )));
    }
    let x = ordered_point(data.f.ring(), point)?;
    let in_closure = data.f.evaluate(&x)?.is_zero();
    let mut certificate = vec![format!(
        "f224 {}",
        if in_closure {
            "vanishes"
        } else {
            "does not vanish"
        }
    )];
    let vanishes = |file: &umps_core::poly::PolyFile<QuadExt>| -> Result<bool> {
        Ideal::new(file.ring.clone(), file.polys.clone())?
            .vanishes_at(&ordered_point(&file.ring, point)?)
    };
    let in_j = vanishes(&data.j)?;
    let removed = [("I1", &data.i1), ("I2", &data.i2), ("I3", &data.i3)]
        .into_iter()
        .map(|(name, file)| vanishes(file).map(|v| (name, v)))
        .collect::<Result<Vec<_>>>()?;
    for (name, v) in &removed {
        if *v {
            certificate.push(format!("point lies on V({name})"));
        }
    }
    if in_j {
        certificate.push("point lies on V(J)".into());
    }
    let in_removed = removed.iter().any(|(_, v)| *v);
    let in_set = (in_closure && !in_removed) || in_j;
    Ok(MembershipVerdict {
        point: point.clone(),
        in_closure,
        in_set: Some(in_set),
        certificate,
    })
}

/// Rational convenience wrapper around [`decide_membership_224`].
pub fn decide_membership_224_rational(point: &CyclicTensor<Rational>) -> Result<MembershipVerdict> {
    decide_membership_224(&point.map(|q| QuadExt::from_rational(q.clone())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialReason {
    /// `d = 1` or `N = 1`: every tensor is reached.
    FullSpace,
    /// `D = 1`: the Veronese cone of N-th powers.
    Veronese,
    /// `N = 2`: symmetric matrices of rank at most `D²`.
    BoundedRankSymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialCase {
    Closed(TrivialReason),
    Nontrivial,
}

impl TrivialCase {
    pub fn describe(&self) -> &'static str {
        match self {
            TrivialCase::Closed(TrivialReason::FullSpace) => "closed (trivial): full space",
            TrivialCase::Closed(TrivialReason::Veronese) => "closed (trivial): Veronese cone",
            TrivialCase::Closed(TrivialReason::BoundedRankSymmetric) => {
                "closed (trivial): symmetric matrices of rank at most D^2"
            }
            TrivialCase::Nontrivial => "nontrivial",
        }
    }
}

/// Cases where uMPS(D, d, N) is closed for elementary reasons.
pub fn trivial_case_check(bond: usize, d: usize, n: usize) -> TrivialCase {
    if d == 1 || n == 1 {
        TrivialCase::Closed(TrivialReason::FullSpace)
    } else if bond == 1 {
        TrivialCase::Closed(TrivialReason::Veronese)
    } else if n == 2 {
        TrivialCase::Closed(TrivialReason::BoundedRankSymmetric)
    } else {
        TrivialCase::Nontrivial
    }
}

/// Closedness of uMPS(D, 2, N) as far as a computation here decides it.
#[derive(Clone, Debug, PartialEq)]
pub enum Closedness {
    Trivial(TrivialReason),
    /// W-state certificate plus a converging limit family.
    NotClosed {
        slope: Option<f64>,
    },
    /// Surjectivity certificate on a linear subspace.
    ClosedAndFills,
    Unknown,
}

impl Closedness {
    pub fn describe(&self) -> String {
        match self {
            Closedness::Trivial(r) => TrivialCase::Closed(*r).describe().to_string(),
            Closedness::NotClosed { .. } => "not closed (certificate + limit)".into(),
            Closedness::ClosedAndFills => "closed and fills (surjectivity certificate)".into(),
            Closedness::Unknown => "unknown".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableCell {
    pub bond: usize,
    pub n: usize,
    pub ambient: u64,
    pub expected: u64,
    pub jacobian_rank: u64,
    pub fills: bool,
    pub closedness: Closedness,
    pub table_letter: Option<char>,
}

impl TableCell {
    /// `F` when the Jacobian rank fills the ambient space, else the
    /// closedness verdict as `C`/`N`, else `?`.
    pub fn letter(&self) -> char {
        if self.fills {
            'F'
        } else {
            match self.closedness {
                Closedness::Trivial(_) | Closedness::ClosedAndFills => 'C',
                Closedness::NotClosed { .. } => 'N',
                Closedness::Unknown => '?',
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let slope = match self.closedness {
            Closedness::NotClosed { slope } => slope,
            _ => None,
        };
        json!({
            "D": self.bond,
            "d": 2,
            "N": self.n,
            "ambient": self.ambient,
            "expected": self.expected,
            "jacobian_rank": self.jacobian_rank,
            "fills": self.fills,
            "closedness": self.closedness.describe(),
            "limit_slope": slope,
            "computed_letter": self.letter().to_string(),
            "table_letter": self.table_letter.map(|c| c.to_string()),
        })
    }
}

/// One cell of the d = 2 closedness table.
pub fn classify_cell(bond: usize, n: usize, seed: u64, budget: Option<u64>) -> Result<TableCell> {
    let dims = crate::variety_lab::jacobian_dimension(bond, 2, n, 8, seed)?;
    let closedness = match trivial_case_check(bond, 2, n) {
        TrivialCase::Closed(r) => Closedness::Trivial(r),
        TrivialCase::Nontrivial if bond == 2 && (4..=8).contains(&n) => {
            let cert = certify_not_member_wstate(n, budget)?;
            let family = builtin_family(&format!("wstate({n})"))?;
            let converges = family.residual_order().is_none_or(|r| r > 0);
            let slope = limit_experiment(&family, &default_grid())
                .ok()
                .and_then(|r| r.slope);
            if cert.certified && converges {
                Closedness::NotClosed { slope }
            } else {
                Closedness::Unknown
            }
        }
        TrivialCase::Nontrivial if bond == 3 && n == 4 => {
            let sub = crate::variety_lab::LinearSubspace::example_324();
            let r = crate::variety_lab::surjectivity_check(&sub, 4, budget, seed)?;
            if r.verdict == crate::variety_lab::SurjectivityVerdict::ClosedAndFills {
                Closedness::ClosedAndFills
            } else {
                Closedness::Unknown
            }
        }
        TrivialCase::Nontrivial => Closedness::Unknown,
    };
    Ok(TableCell {
        bond,
        n,
        ambient: dims.ambient,
        expected: dims.expected,
        jacobian_rank: dims.jacobian_rank,
        fills: dims.fills_ambient,
        closedness,
        table_letter: crate::variety_lab::table_letter(bond, n),
    })
}
