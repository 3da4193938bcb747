//! The Poisson tensor `Π_r` on the unitary group and the identities that make
//! it a Poisson–Lie structure.
//!
//! Covectors at `g` are pulled back to the identity fiber by right
//! translation, so everything here works with `(g, QuotientClass)` pairs. The
//! tensor only sees a class through `p_{b₂⁺}(x)`, which does not depend on the
//! coset member `x`; [`b_plus_recovery`] computes it from the representative.

use crate::error::Result;
use crate::expm::exp_skew;
use crate::matrix::{ComplexMatrix, SkewHermitian, UnitaryElement};
use crate::pairing::{class_of, coadjoint_group, eval_class, QuotientClass};
use crate::residual::{max_magnitude, Identity, ResidualRecord};
use crate::truncation::{p_b2, p_u2, BasisWindow};

/// Central finite-difference step for the derivative checks.
pub const FD_STEP: f64 = 1e-5;

fn window(dim: usize) -> Result<BasisWindow> {
    BasisWindow::for_dim(dim)
}

fn im_tr(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.trace_product(b).expect("dims checked by caller").im
}

fn comm(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.commutator(b).expect("dims checked by caller")
}

/// `p_{b₂⁺}(x)` for any member `x` of the class. Since `p_b2` depends only on
/// `x + x* = 2·rep`, this is `(T₊₊ + ½T₀)(2·rep)`, i.e. `p_b2(rep)`.
pub fn b_plus_recovery(c: &QuotientClass) -> Result<ComplexMatrix> {
    p_b2(c.rep(), &window(c.dim())?)
}

/// `Im Tr(A · p_u2(B))` with `A, B` the conjugated `b⁺` parts.
fn pi_r_from_parts(
    g: &UnitaryElement,
    x1: &ComplexMatrix,
    x2: &ComplexMatrix,
    w: &BasisWindow,
) -> Result<f64> {
    let a = x1.conjugate_by(g)?;
    let b = x2.conjugate_by(g)?;
    Ok(im_tr(&a, &p_u2(&b, w)?))
}

/// `Π_r(g)([x₁], [x₂]) = Im Tr(g⁻¹X₁g · p_{u₂}(g⁻¹X₂g))`, `Xᵢ = p_{b₂⁺}(xᵢ)`.
pub fn pi_r(g: &UnitaryElement, c1: &QuotientClass, c2: &QuotientClass) -> Result<f64> {
    c1.rep().check_same_dim(c2.rep())?;
    let w = window(c1.dim())?;
    pi_r_from_parts(g, &b_plus_recovery(c1)?, &b_plus_recovery(c2)?, &w)
}

/// Interior product `ι_{[x]}Π_r(g) = −g p_{u₂}(g⁻¹ p_{b₂⁺}(x) g) g⁻¹`.
///
/// Contracts the first slot: `pi_r(g, c, c2) = eval_class(c2, sharp(g, c))`.
pub fn sharp(g: &UnitaryElement, c: &QuotientClass) -> Result<SkewHermitian> {
    let w = window(c.dim())?;
    let inner = p_u2(&b_plus_recovery(c)?.conjugate_by(g)?, &w)?;
    Ok(SkewHermitian::new_unchecked(
        -&inner.conjugate_inverse_by(g)?,
    ))
}

/// Derivative of `Π_r` at the identity along `Y`:
/// `Im Tr(Y [p_{b₂⁺}(x₁), p_{b₂⁺}(x₂)])`.
pub fn d_pi_e(y: &SkewHermitian, c1: &QuotientClass, c2: &QuotientClass) -> Result<f64> {
    c1.rep().check_same_dim(c2.rep())?;
    y.matrix().check_same_dim(c1.rep())?;
    let x1 = b_plus_recovery(c1)?;
    let x2 = b_plus_recovery(c2)?;
    Ok(im_tr(y.matrix(), &comm(&x1, &x2)))
}

/// Derivative of `Π_r` at `g` along the right-translated vector `X g`:
/// `Im Tr(g⁻¹Xg [p_{b₂⁺}(g⁻¹x₁g), p_{b₂⁺}(g⁻¹x₂g)])`.
pub fn d_pi_translated(
    g: &UnitaryElement,
    x: &SkewHermitian,
    c1: &QuotientClass,
    c2: &QuotientClass,
) -> Result<f64> {
    let moved1 = coadjoint_group(g, c1)?;
    let moved2 = coadjoint_group(g, c2)?;
    let x_conj = x.matrix().conjugate_by(g)?;
    let bracket = comm(&b_plus_recovery(&moved1)?, &b_plus_recovery(&moved2)?);
    Ok(im_tr(&x_conj, &bracket))
}

fn central_difference(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    Ok((f(h)? - f(-h)?) / (2.0 * h))
}

/// Compares a closed-form derivative against central differences of `f` at
/// step `h`; if the relative error exceeds `tolerance`, retries with the
/// Richardson combination of steps `h` and `h/2`.
fn derivative_record(
    identity: Identity,
    dim: usize,
    exact: f64,
    f: impl Fn(f64) -> Result<f64>,
    h: f64,
    tolerance: f64,
) -> Result<ResidualRecord> {
    let fd = central_difference(&f, h)?;
    let first = ResidualRecord::new(identity, dim, fd - exact, max_magnitude(&[exact, fd]));
    if first.passes(tolerance) {
        return Ok(first);
    }
    let fd_half = central_difference(&f, h / 2.0)?;
    let richardson = (4.0 * fd_half - fd) / 3.0;
    let second = ResidualRecord::new(
        identity,
        dim,
        richardson - exact,
        max_magnitude(&[exact, richardson]),
    );
    Ok(if second.relative() < first.relative() {
        second
    } else {
        first
    })
}

/// Central differences of `t ↦ Π_r(exp(tY))(c1, c2)` against [`d_pi_e`].
pub fn derivative_e_residual(
    y: &SkewHermitian,
    c1: &QuotientClass,
    c2: &QuotientClass,
    tolerance: f64,
) -> Result<ResidualRecord> {
    let exact = d_pi_e(y, c1, c2)?;
    let curve = |t: f64| pi_r(&exp_skew(&y.scale(t))?, c1, c2);
    derivative_record(
        Identity::DerivativeB2,
        c1.dim(),
        exact,
        curve,
        FD_STEP,
        tolerance,
    )
}

/// Central differences of `t ↦ Π_r(exp(tX) g)(c1, c2)` against [`d_pi_translated`].
pub fn derivative_translated_residual(
    g: &UnitaryElement,
    x: &SkewHermitian,
    c1: &QuotientClass,
    c2: &QuotientClass,
    tolerance: f64,
) -> Result<ResidualRecord> {
    let exact = d_pi_translated(g, x, c1, c2)?;
    let curve = |t: f64| pi_r(&exp_skew(&x.scale(t))?.compose(g)?, c1, c2);
    derivative_record(
        Identity::DerivativeTranslated,
        c1.dim(),
        exact,
        curve,
        FD_STEP,
        tolerance,
    )
}

/// Residual of the multiplicativity cocycle
/// `Π_r(gu)(c1, c2) = Π_r(u)(Ad*_g c1, Ad*_g c2) + Π_r(g)(c1, c2)`.
pub fn cocycle_residual(
    g: &UnitaryElement,
    u: &UnitaryElement,
    c1: &QuotientClass,
    c2: &QuotientClass,
) -> Result<ResidualRecord> {
    let gu = g.compose(u)?;
    let lhs = pi_r(&gu, c1, c2)?;
    let moved = pi_r(u, &coadjoint_group(g, c1)?, &coadjoint_group(g, c2)?)?;
    let at_g = pi_r(g, c1, c2)?;
    Ok(ResidualRecord::new(
        Identity::Cocycle,
        c1.dim(),
        lhs - moved - at_g,
        max_magnitude(&[lhs, moved, at_g]),
    ))
}

/// Residual of the sharp-map contraction `Π_r(g)(c, c2) = ⟨c2, ι_c Π_r(g)⟩`.
pub fn sharp_contraction_residual(
    g: &UnitaryElement,
    c: &QuotientClass,
    c2: &QuotientClass,
) -> Result<ResidualRecord> {
    let direct = pi_r(g, c, c2)?;
    let contracted = eval_class(c2, &sharp(g, c)?)?;
    Ok(ResidualRecord::new(
        Identity::SharpContraction,
        c.dim(),
        direct - contracted,
        max_magnitude(&[direct, contracted]),
    ))
}

/// One cyclic summand of the Jacobi check, each term computed two ways.
#[derive(Clone, Copy, Debug)]
pub struct JacobiSummand {
    /// `T_gΠ_r(R_g ι_{[x₃]}Π_r(g))([x₁], [x₂])` evaluated directly.
    pub derivative_direct: f64,
    /// Its closed form `−Im Tr p_u2(C)[p_b2(A), p_b2(B)]`.
    pub derivative_closed: f64,
    /// `⟨x₁, [ι_{[x₃]}Π_r(g), ι_{[x₂]}Π_r(g)]⟩` evaluated directly.
    pub bracket_direct: f64,
    /// Its closed form `−Im Tr p_u2(C)[p_b2(A), p_u2(B)]`.
    pub bracket_closed: f64,
}

#[derive(Clone, Debug)]
pub struct JacobiCheck {
    pub summands: [JacobiSummand; 3],
    /// `|Σ_cyclic (derivative + bracket)|`.
    pub cyclic_sum: ResidualRecord,
    /// Worst mismatch between a closed form and its direct evaluation.
    pub closed_form: ResidualRecord,
    /// Worst step of the cancellation chain
    /// `Σ closed forms = −Im Tr C[A, B] = −Im Tr X₃[X₁, X₂] = 0`.
    pub cancellation: ResidualRecord,
}

fn jacobi_summand(
    g: &UnitaryElement,
    w: &BasisWindow,
    classes: [&QuotientClass; 3],
    conj_parts: [&ComplexMatrix; 3],
) -> Result<JacobiSummand> {
    let [c1, c2, c3] = classes;
    let [a, b, c] = conj_parts;
    let sharp2 = sharp(g, c2)?;
    let sharp3 = sharp(g, c3)?;

    let derivative_direct = d_pi_translated(g, &sharp3, c1, c2)?;
    let bracket = SkewHermitian::new_unchecked(comm(sharp3.matrix(), sharp2.matrix()));
    let bracket_direct = eval_class(c1, &bracket)?;

    let pu_c = p_u2(c, w)?;
    let pb_a = p_b2(a, w)?;
    let derivative_closed = -im_tr(&pu_c, &comm(&pb_a, &p_b2(b, w)?));
    let bracket_closed = -im_tr(&pu_c, &comm(&pb_a, &p_u2(b, w)?));
    Ok(JacobiSummand {
        derivative_direct,
        derivative_closed,
        bracket_direct,
        bracket_closed,
    })
}

/// Jacobi identity for the Poisson structure at `g`, via the cyclic sum of
/// the derivative and bracket terms.
pub fn jacobi_cyclic_sum(
    g: &UnitaryElement,
    c1: &QuotientClass,
    c2: &QuotientClass,
    c3: &QuotientClass,
) -> Result<JacobiCheck> {
    c1.rep().check_same_dim(c2.rep())?;
    c1.rep().check_same_dim(c3.rep())?;
    let dim = c1.dim();
    let w = window(dim)?;
    let x = [
        b_plus_recovery(c1)?,
        b_plus_recovery(c2)?,
        b_plus_recovery(c3)?,
    ];
    let conj = [
        x[0].conjugate_by(g)?,
        x[1].conjugate_by(g)?,
        x[2].conjugate_by(g)?,
    ];
    let cls = [c1, c2, c3];
    let mut summands = Vec::with_capacity(3);
    for shift in 0..3 {
        let idx = [shift, (shift + 1) % 3, (shift + 2) % 3];
        summands.push(jacobi_summand(
            g,
            &w,
            idx.map(|i| cls[i]),
            idx.map(|i| &conj[i]),
        )?);
    }
    let summands: [JacobiSummand; 3] = summands.try_into().expect("three summands");

    let terms: Vec<f64> = summands
        .iter()
        .flat_map(|s| {
            [
                s.derivative_direct,
                s.derivative_closed,
                s.bracket_direct,
                s.bracket_closed,
            ]
        })
        .collect();
    let scale = max_magnitude(&terms);

    let sum: f64 = summands
        .iter()
        .map(|s| s.derivative_direct + s.bracket_direct)
        .sum();
    let cyclic_sum = ResidualRecord::new(Identity::Jacobi, dim, sum, scale);

    let closed_gap = summands
        .iter()
        .map(|s| {
            (s.derivative_direct - s.derivative_closed)
                .abs()
                .max((s.bracket_direct - s.bracket_closed).abs())
        })
        .fold(0.0, f64::max);
    let closed_form = ResidualRecord::new(Identity::JacobiClosedForm, dim, closed_gap, scale);

    let closed_sum: f64 = summands
        .iter()
        .map(|s| s.derivative_closed + s.bracket_closed)
        .sum();
    let [a, b, c] = &conj;
    let conjugated = -im_tr(c, &comm(a, b));
    let at_identity = -im_tr(&x[2], &comm(&x[0], &x[1]));
    let steps = [
        (closed_sum - conjugated).abs(),
        (conjugated - at_identity).abs(),
        at_identity.abs(),
    ];
    let cancellation = ResidualRecord::new(
        Identity::JacobiCancellation,
        dim,
        steps.iter().fold(0.0, |m: f64, s| m.max(*s)),
        scale.max(max_magnitude(&[closed_sum, conjugated, at_identity])),
    );

    Ok(JacobiCheck {
        summands,
        cyclic_sum,
        closed_form,
        cancellation,
    })
}

/// Lie bracket on `L₁/u₁`: `([x₁], [x₂]) ↦ [[p_{b₂⁺}(x₁), p_{b₂⁺}(x₂)]]`.
pub fn quotient_bracket(c1: &QuotientClass, c2: &QuotientClass) -> Result<QuotientClass> {
    c1.rep().check_same_dim(c2.rep())?;
    let x1 = b_plus_recovery(c1)?;
    let x2 = b_plus_recovery(c2)?;
    Ok(class_of(&comm(&x1, &x2)))
}

/// Jacobi identity of [`quotient_bracket`], measured in ‖·‖₂ on representatives.
pub fn bracket_jacobi_residual(
    c1: &QuotientClass,
    c2: &QuotientClass,
    c3: &QuotientClass,
) -> Result<ResidualRecord> {
    let t1 = quotient_bracket(&quotient_bracket(c1, c2)?, c3)?;
    let t2 = quotient_bracket(&quotient_bracket(c2, c3)?, c1)?;
    let t3 = quotient_bracket(&quotient_bracket(c3, c1)?, c2)?;
    let sum = &(t1.rep() + t2.rep()) + t3.rep();
    let scale = max_magnitude(&[
        t1.rep().frobenius_norm(),
        t2.rep().frobenius_norm(),
        t3.rep().frobenius_norm(),
    ]);
    Ok(ResidualRecord::new(
        Identity::BracketJacobi,
        c1.dim(),
        sum.frobenius_norm(),
        scale,
    ))
}

#[derive(Clone, Debug)]
pub struct ConjIdentityCheck {
    /// `p_b2(g⁻¹xg) = p_b2(g⁻¹ p_b2(x) g)`.
    pub b: ResidualRecord,
    /// `p_u2(g⁻¹xg) = g⁻¹ p_u2(x) g + p_u2(g⁻¹ p_b2(x) g)`.
    pub u: ResidualRecord,
}

/// Residuals, in ‖·‖₂, of how the two projections interact with conjugation.
pub fn conj_identities_residual(
    g: &UnitaryElement,
    x: &ComplexMatrix,
) -> Result<ConjIdentityCheck> {
    let w = window(x.dim())?;
    let scale = x.frobenius_norm();
    let (xu, xb) = crate::truncation::split(x, &w)?;
    let conj_x = x.conjugate_by(g)?;
    let conj_xb = xb.conjugate_by(g)?;

    let b_lhs = p_b2(&conj_x, &w)?;
    let b_rhs = p_b2(&conj_xb, &w)?;
    let b = ResidualRecord::new(
        Identity::ConjIdentityB,
        x.dim(),
        (&b_lhs - &b_rhs).frobenius_norm(),
        scale,
    );

    let u_lhs = p_u2(&conj_x, &w)?;
    let u_rhs = &xu.conjugate_by(g)? + &p_u2(&conj_xb, &w)?;
    let u = ResidualRecord::new(
        Identity::ConjIdentityU,
        x.dim(),
        (&u_lhs - &u_rhs).frobenius_norm(),
        scale,
    );
    Ok(ConjIdentityCheck { b, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE, ZERO};
    use crate::random::{random_skew_hermitian, random_trace_class, random_unitary};
    use crate::truncation::in_b_plus;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_4;

    fn rand_class(dim: usize, seed: u64) -> QuotientClass {
        class_of(&random_trace_class(dim, seed, true))
    }

    fn e(dim: usize, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::unit(dim, r, c)
    }

    #[test]
    fn recovery_examples() {
        assert_eq!(
            b_plus_recovery(&QuotientClass::zero(4)).unwrap(),
            ComplexMatrix::zeros(4)
        );
        let w = BasisWindow::for_dim(6).unwrap();
        let b = p_b2(&random_trace_class(6, 1, false), &w).unwrap();
        let got = b_plus_recovery(&class_of(&b)).unwrap();
        assert!((&got - &b).max_abs() < 1e-15);

        let x = random_trace_class(6, 2, false);
        let s = random_skew_hermitian(6, 3);
        let r1 = b_plus_recovery(&class_of(&x)).unwrap();
        let r2 = b_plus_recovery(&class_of(&(&x + s.matrix()))).unwrap();
        assert!(in_b_plus(&r1));
        assert!((&r1 - &r2).max_abs() <= 1e-12 * r1.max_abs());
        assert!((&r1 - &p_b2(&x, &w).unwrap()).max_abs() <= 1e-14 * r1.max_abs());
    }

    #[test]
    fn pi_r_trivial_cases() {
        let c1 = rand_class(4, 1);
        let c2 = rand_class(4, 2);
        assert_eq!(pi_r(&UnitaryElement::identity(4), &c1, &c2).unwrap(), 0.0);
        let g = random_unitary(4, 9);
        assert!(pi_r(&g, &c1, &c1).unwrap().abs() < 1e-15);
        let forward = pi_r(&g, &c1, &c2).unwrap();
        let backward = pi_r(&g, &c2, &c1).unwrap();
        assert!((forward + backward).abs() <= 1e-12 * forward.abs());
    }

    /// Straight-line evaluation of the tensor with explicit 2×2 arithmetic,
    /// independent of the window/projection code path.
    fn pi_r_2x2_oracle(
        g: [[Complex64; 2]; 2],
        x1: [[Complex64; 2]; 2],
        x2: [[Complex64; 2]; 2],
    ) -> f64 {
        type M = [[Complex64; 2]; 2];
        let mul = |a: M, b: M| -> M {
            let mut out = [[ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            out
        };
        let adj = |a: M| -> M {
            [
                [a[0][0].conj(), a[1][0].conj()],
                [a[0][1].conj(), a[1][1].conj()],
            ]
        };
        // storage index 1 is the larger ℤ-label: b⁺ keeps (1,0) and the real diagonal.
        let pb = |x: M| -> M {
            let h = [
                [x[0][0] + x[0][0].conj(), x[0][1] + x[1][0].conj()],
                [x[1][0] + x[0][1].conj(), x[1][1] + x[1][1].conj()],
            ];
            [[h[0][0] * 0.5, ZERO], [h[1][0], h[1][1] * 0.5]]
        };
        let pu = |x: M| -> M {
            let b = pb(x);
            [
                [x[0][0] - b[0][0], x[0][1] - b[0][1]],
                [x[1][0] - b[1][0], x[1][1] - b[1][1]],
            ]
        };
        let gi = adj(g);
        let a = mul(mul(gi, pb(x1)), g);
        let b = mul(mul(gi, pb(x2)), g);
        let p = mul(a, pu(b));
        (p[0][0] + p[1][1]).im
    }

    #[test]
    fn pi_r_matches_explicit_two_by_two_oracle() {
        let gen = (&e(2, 0, 1) - &e(2, 1, 0)).scale_real(FRAC_PI_4);
        let g = exp_skew(&SkewHermitian::new(gen).unwrap()).unwrap();
        let c1 = class_of(&e(2, 0, 0));
        let c2 = class_of(&e(2, 1, 0).scale(I));
        let got = pi_r(&g, &c1, &c2).unwrap();

        let s = FRAC_PI_4.sin();
        let c = FRAC_PI_4.cos();
        let gm = [[ONE * c, ONE * s], [-ONE * s, ONE * c]];
        let x1 = [[ONE, ZERO], [ZERO, ZERO]];
        let x2 = [[ZERO, ZERO], [I, ZERO]];
        let expected = pi_r_2x2_oracle(gm, x1, x2);
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        assert!(expected.abs() > 0.1);
    }

    #[test]
    fn sharp_examples_and_contraction() {
        let c = rand_class(6, 4);
        let id = UnitaryElement::identity(6);
        assert!(sharp(&id, &c).unwrap().matrix().max_abs() < 1e-15);
        let g = random_unitary(6, 5);
        assert_eq!(
            sharp(&g, &QuotientClass::zero(6))
                .unwrap()
                .matrix()
                .max_abs(),
            0.0
        );
        for seed in 0..10 {
            let dim = 2 + 2 * (seed as usize % 8);
            let g = random_unitary(dim, seed);
            let c = rand_class(dim, seed + 10);
            let c2 = rand_class(dim, seed + 20);
            let r = sharp_contraction_residual(&g, &c, &c2).unwrap();
            assert!(r.relative() <= 1e-12, "dim {dim}: {}", r.relative());
        }
    }

    #[test]
    fn d_pi_e_examples() {
        let c1 = class_of(&e(2, 1, 0));
        let c2 = class_of(&e(2, 0, 0));
        assert_eq!(d_pi_e(&SkewHermitian::zeros(2), &c1, &c2).unwrap(), 0.0);
        let y = SkewHermitian::new((&e(2, 0, 1) + &e(2, 1, 0)).scale(I)).unwrap();
        assert!((d_pi_e(&y, &c1, &c2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for seed in 0..6 {
            let dim = [2, 4, 8][seed as usize % 3];
            let y = random_skew_hermitian(dim, seed);
            let r = derivative_e_residual(
                &y,
                &rand_class(dim, seed + 1),
                &rand_class(dim, seed + 2),
                1e-6,
            )
            .unwrap();
            assert!(r.relative() <= 1e-6, "{}", r.relative());

            let g = random_unitary(dim, seed + 3);
            let r = derivative_translated_residual(
                &g,
                &y,
                &rand_class(dim, seed + 4),
                &rand_class(dim, seed + 5),
                1e-6,
            )
            .unwrap();
            assert!(r.relative() <= 1e-6, "{}", r.relative());
        }
    }

    #[test]
    fn translated_derivative_specializes() {
        let c1 = rand_class(4, 1);
        let c2 = rand_class(4, 2);
        let y = random_skew_hermitian(4, 3);
        let id = UnitaryElement::identity(4);
        let a = d_pi_translated(&id, &y, &c1, &c2).unwrap();
        let b = d_pi_e(&y, &c1, &c2).unwrap();
        assert!((a - b).abs() <= 1e-14 * b.abs());
        let g = random_unitary(4, 7);
        assert_eq!(
            d_pi_translated(&g, &SkewHermitian::zeros(4), &c1, &c2).unwrap(),
            0.0
        );
    }

    #[test]
    fn cocycle_trivial_and_random() {
        let g = random_unitary(4, 1);
        let c1 = rand_class(4, 2);
        let c2 = rand_class(4, 3);
        let id = UnitaryElement::identity(4);
        assert!(cocycle_residual(&g, &id, &c1, &c2).unwrap().residual < 1e-15);
        assert!(cocycle_residual(&id, &g, &c1, &c2).unwrap().relative() < 1e-14);
        for seed in 0..10 {
            let dim = [2, 4, 8, 16][seed as usize % 4];
            let r = cocycle_residual(
                &random_unitary(dim, seed),
                &random_unitary(dim, seed + 100),
                &rand_class(dim, seed + 200),
                &rand_class(dim, seed + 300),
            )
            .unwrap();
            assert!(r.relative() <= 1e-10, "dim {dim}: {}", r.relative());
        }
    }

    #[test]
    fn jacobi_trivial_cases() {
        let c1 = rand_class(4, 1);
        let c2 = rand_class(4, 2);
        let c3 = rand_class(4, 3);
        let check = jacobi_cyclic_sum(&UnitaryElement::identity(4), &c1, &c2, &c3).unwrap();
        for s in &check.summands {
            assert_eq!(s.derivative_direct, 0.0);
            assert_eq!(s.bracket_direct, 0.0);
        }
        let g = random_unitary(4, 8);
        let repeated = jacobi_cyclic_sum(&g, &c1, &c1, &c3).unwrap();
        assert!(repeated.cyclic_sum.relative() < 1e-12);
    }

    #[test]
    fn jacobi_random() {
        for seed in 0..8 {
            let dim = [2, 4, 8, 16][seed as usize % 4];
            let check = jacobi_cyclic_sum(
                &random_unitary(dim, seed),
                &rand_class(dim, seed + 1),
                &rand_class(dim, seed + 2),
                &rand_class(dim, seed + 3),
            )
            .unwrap();
            assert!(
                check.cyclic_sum.relative() <= 1e-9,
                "{:?}",
                check.cyclic_sum
            );
            assert!(
                check.closed_form.relative() <= 1e-10,
                "{:?}",
                check.closed_form
            );
            assert!(
                check.cancellation.relative() <= 1e-9,
                "{:?}",
                check.cancellation
            );
        }
    }

    #[test]
    fn bracket_examples() {
        let c = rand_class(4, 1);
        assert!(quotient_bracket(&c, &c).unwrap().rep().max_abs() < 1e-15);
        let got = quotient_bracket(&class_of(&e(2, 0, 0)), &class_of(&e(2, 1, 0))).unwrap();
        assert_eq!(got, class_of(&e(2, 1, 0).scale_real(-1.0)));

        let c1 = rand_class(6, 2);
        let c2 = rand_class(6, 3);
        let x1 = random_trace_class(6, 2, true);
        let s = random_skew_hermitian(6, 4);
        let perturbed = class_of(&(&x1 + s.matrix()));
        let a = quotient_bracket(&c1, &c2).unwrap();
        let b = quotient_bracket(&perturbed, &c2).unwrap();
        assert!((a.rep() - b.rep()).max_abs() <= 1e-12 * a.rep().max_abs());
        assert!(
            bracket_jacobi_residual(&c1, &c2, &rand_class(6, 5))
                .unwrap()
                .relative()
                <= 1e-10
        );
    }

    #[test]
    fn conj_identities() {
        let x = random_trace_class(6, 1, false);
        let id = UnitaryElement::identity(6);
        let check = conj_identities_residual(&id, &x).unwrap();
        assert_eq!(check.b.residual, 0.0);
        assert!(check.u.residual < 1e-15);

        let s = random_skew_hermitian(6, 2);
        let g = random_unitary(6, 3);
        let skew = conj_identities_residual(&g, s.matrix()).unwrap();
        assert!(skew.b.relative() <= 1e-11);

        for seed in 0..6 {
            let dim = [2, 8, 32][seed as usize % 3];
            let check = conj_identities_residual(
                &random_unitary(dim, seed),
                &random_trace_class(dim, seed + 50, false),
            )
            .unwrap();
            assert!(check.b.relative() <= 1e-11);
            assert!(check.u.relative() <= 1e-11);
        }
    }

    #[test]
    fn odd_dimensions_are_rejected() {
        let c = class_of(&ComplexMatrix::identity(3));
        assert!(b_plus_recovery(&c).is_err());
    }
}
