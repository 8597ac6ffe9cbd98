"""Named checks for every closed-form operator identity in the package.

Each check builds both sides of one identity and compares them either
exactly (Pauli algebra with exact scalars, zero residual demanded) or as
dense matrices with an explicit tolerance.  Checks never raise on a failed
identity; they return an IdentityCheck carrying the verdict, the residual
and human-readable detail lines, so the whole battery can run to the end.

Conjugations by exp(i A phi) at eighth-turn angles are done exactly: for
any Hermitian A with A**3 = A the exponential is I + (cos phi - 1) A**2 +
i sin phi A, and eighth-turn sines/cosines live in the scalar ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .codes import build_code, encoded_cphase
from .jw import (
    CarReport,
    TruncatedBosonSpace,
    boson_approx_commutator,
    compound_mapping_check,
    verify_car,
)
from .pauli import (
    HALF,
    I_UNIT,
    ONE,
    OperatorSum,
    Scalar,
    commutator,
    matrix_exponential,
    realize,
)
from .parafermion import bilinear_su2, number_site

TOL = 1e-10


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    metric: str  # "exact" or "max_abs_diff"
    tolerance: float
    passed: bool
    residual: float
    details: tuple = ()


# -- exact eighth-turn conjugation ----------------------------------------

_COS8 = (Scalar(1), Scalar(0, 0, Fraction(1, 2)), Scalar(0),
         Scalar(0, 0, Fraction(-1, 2)), Scalar(-1),
         Scalar(0, 0, Fraction(-1, 2)), Scalar(0),
         Scalar(0, 0, Fraction(1, 2)))
_SIN8 = (Scalar(0), Scalar(0, 0, Fraction(1, 2)), Scalar(1),
         Scalar(0, 0, Fraction(1, 2)), Scalar(0),
         Scalar(0, 0, Fraction(-1, 2)), Scalar(-1),
         Scalar(0, 0, Fraction(-1, 2)))


def exact_exp(gen: OperatorSum, eighths: int) -> OperatorSum:
    """exp(i gen (eighths * pi/4)) for generators satisfying gen**3 = gen."""
    sq = gen * gen
    if sq * gen != gen:
        raise ValueError("exact_exp needs gen**3 = gen")
    k = eighths % 8
    ident = OperatorSum.identity(gen.n_modes)
    return ident + sq * (_COS8[k] - ONE) + gen * (_SIN8[k] * I_UNIT)


def conjugate_eighth(op: OperatorSum, gen: OperatorSum,
                     eighths: int) -> OperatorSum:
    """exp(-i gen phi) op exp(i gen phi) at phi = eighths * pi/4, exact."""
    return exact_exp(gen, -eighths) * op * exact_exp(gen, eighths)


def _exact_residual(diff: OperatorSum) -> float:
    if diff.is_zero:
        return 0.0
    return max(abs(c.to_complex()) for _, c in diff.items())


def _dense_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs)))


# -- selective recoupling ---------------------------------------------------

def check_recoupling(A: OperatorSum | None = None,
                     B: OperatorSum | None = None,
                     theta: float = 0.7,
                     phi: float = math.pi / 4) -> IdentityCheck:
    """Conjugation of exp(i theta B) by exp(i A phi) for anticommuting A, B.

    With {A, B} = 0 and A**2 = I the conjugated flow is exp(i theta (B cos
    2phi + iBA sin 2phi)); at phi = pi/2 this is exp(-i theta B) and at
    phi = pi/4 it is exp(i theta (iBA)).  Note the operator order: iBA, not
    iAB; the two differ by a sign for anticommuting pairs, and iBA is the
    one the quarter-turn Euler rotation of X into Y fixes.
    """
    if A is None:
        A = OperatorSum.z(0, 1)
    if B is None:
        B = OperatorSum.x(0, 1)
    details = []
    anti = A * B + B * A
    sq = A * A
    ident = OperatorSum.identity(A.n_modes)
    details.append(f"precondition {{A,B}} = 0: {'ok' if anti.is_zero else 'VIOLATED'}")
    details.append(f"precondition A**2 = I: {'ok' if sq == ident else 'VIOLATED'}")
    ok = anti.is_zero and sq == ident
    residual = 0.0

    iba = (B * A) * I_UNIT
    if ok:
        quarter = conjugate_eighth(B, A, 1)
        r = _exact_residual(quarter - iba)
        residual = max(residual, r)
        details.append(f"exact quarter-turn conjugate equals iBA: residual {r:g}")
        details.append("note: iAB = -iBA here; the iBA form reproduces the "
                       "Euler rotation exp(-i pi Z/4) X exp(i pi Z/4) = Y")
        half = conjugate_eighth(B, A, 2)
        r = _exact_residual(half + B)
        residual = max(residual, r)
        details.append(f"exact half-turn conjugate equals -B: residual {r:g}")

        a_d, b_d = realize(A), realize(B)
        lhs = (matrix_exponential(a_d, -1j * phi)
               @ matrix_exponential(b_d, 1j * theta)
               @ matrix_exponential(a_d, 1j * phi))
        target = (realize(B) * math.cos(2 * phi)
                  + realize(iba) * math.sin(2 * phi))
        rhs = matrix_exponential(target, 1j * theta)
        r = _dense_residual(lhs, rhs)
        residual = max(residual, r)
        details.append(f"dense flow at theta={theta:g}, phi={phi:g}: residual {r:g}")
    return IdentityCheck("recoupling", "max_abs_diff", TOL,
                         ok and residual <= TOL, residual, tuple(details))


def check_angular_recoupling(theta: float = 0.9,
                             phi: float = math.pi) -> IdentityCheck:
    """Rotation formula for su(2) triples without the A**2 = I assumption.

    Uses the two-mode pairing triple: with J_z = R_z/2 the conjugation
    exp(-i phi J_z) R_x exp(i phi J_z) = R_x cos phi + (R_y/2) sin phi, and
    conjugating by the unhalved R_z doubles the angle.
    """
    details = []
    r_x, r_y, r_z = bilinear_su2((0, 1), 2, family="pairing")
    half_rz = r_z * HALF
    half_ry = r_y * HALF

    # J_z = R_z/2 fails the cube condition; use R_z at half the angle
    quarter = conjugate_eighth(r_x, r_z, 1)  # phi = pi/2 on J_z
    r0 = _exact_residual(quarter - half_ry)
    details.append(f"exact quarter rotation R_x -> R_y/2: residual {r0:g}")
    halfturn = conjugate_eighth(r_x, r_z, 2)
    r1 = _exact_residual(halfturn + r_x)
    details.append(f"exact half rotation R_x -> -R_x: residual {r1:g}")

    jz_d, jx_d, jy_d = realize(half_rz), realize(r_x), realize(half_ry)
    lhs = (matrix_exponential(jz_d, -1j * phi) @ jx_d
           @ matrix_exponential(jz_d, 1j * phi))
    rhs = jx_d * math.cos(phi) + jy_d * math.sin(phi)
    r2 = _dense_residual(lhs, rhs)
    details.append(f"dense rotation at phi={phi:g}: residual {r2:g}")

    # unhalved generator doubles the angle inside the exp flow
    rz_d = realize(r_z)
    lhs = (matrix_exponential(rz_d, -1j * phi)
           @ matrix_exponential(jx_d, 1j * theta)
           @ matrix_exponential(rz_d, 1j * phi))
    target = jx_d * math.cos(2 * phi) + jy_d * math.sin(2 * phi)
    rhs = matrix_exponential(target, 1j * theta)
    r3 = _dense_residual(lhs, rhs)
    details.append(f"dense flow with doubled angle 2*phi: residual {r3:g}")

    residual = max(r0, r1, r2, r3)
    return IdentityCheck("angular", "max_abs_diff", TOL,
                         residual <= TOL, residual, tuple(details))


def check_canonical_reduction() -> IdentityCheck:
    """Two-step reduction of the symmetric two-site coupling to ZZ form."""
    details = []
    n = 2
    xx = OperatorSum(n, {(3, 0): ONE})
    yy = OperatorSum(n, {(3, 3): ONE})
    zz = OperatorSum(n, {(0, 3): ONE})
    xy_sum = xx + yy
    x0 = OperatorSum.x(0, n)
    y0, y1 = OperatorSum.y(0, n), OperatorSum.y(1, n)

    flipped = conjugate_eighth(xy_sum, x0, 2)
    r0 = _exact_residual(flipped - (xx - yy))
    details.append(f"exact half-turn about X flips YY sign: residual {r0:g}")

    step2 = conjugate_eighth(conjugate_eighth(xx, y0, 1), y1, 1)
    r1 = _exact_residual(step2 - zz)
    details.append(f"exact quarter-turns about Y take XX to ZZ: residual {r1:g}")

    residual = max(r0, r1)
    xy_d, xx_d, zz_d = realize(xy_sum), realize(xx), realize(zz)
    x0_d = realize(x0)
    ys_d = realize(y0 + y1)
    for theta in (0.1, 0.7, math.pi / 3):
        inner = (matrix_exponential(x0_d, -1j * math.pi / 2)
                 @ matrix_exponential(xy_d, 1j * theta / 2)
                 @ matrix_exponential(x0_d, 1j * math.pi / 2))
        lhs = matrix_exponential(xy_d, 1j * theta / 2) @ inner
        r = _dense_residual(lhs, matrix_exponential(xx_d, 1j * theta))
        details.append(f"step 1 flow at theta={theta:g}: residual {r:g}")
        residual = max(residual, r)
        lhs2 = (matrix_exponential(ys_d, -1j * math.pi / 4)
                @ matrix_exponential(xx_d, 1j * theta)
                @ matrix_exponential(ys_d, 1j * math.pi / 4))
        r = _dense_residual(lhs2, matrix_exponential(zz_d, 1j * theta))
        details.append(f"step 2 flow at theta={theta:g}: residual {r:g}")
        residual = max(residual, r)
    return IdentityCheck("canonical", "max_abs_diff", TOL,
                         residual <= TOL, residual, tuple(details))


# -- Kerr / self-interaction -----------------------------------------------

def check_kerr_selfkerr() -> IdentityCheck:
    """Three-gate self-interaction circuit equals the Kerr gate on dual rails.

    Four bosonic modes at cutoff 2; the beamsplitter between the two active
    modes conserves their total occupation (at most 2 on dual-rail inputs)
    so the truncation is exact on the subspace.
    """
    details = []
    space = TruncatedBosonSpace(4, 2)
    n1, n3 = space.number(1), space.number(3)
    lhs = matrix_exponential(n1 @ n3, -1j * math.pi)

    rails = [space.index_of(occ) for occ in
             ((1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1))]
    block = lhs[np.ix_(rails, rails)]
    r0 = _dense_residual(block, np.diag([1, 1, 1, -1]).astype(complex))
    details.append(f"Kerr gate on dual rails is diag(1,1,1,-1): residual {r0:g}")

    bs = space.create(1) @ space.annihilate(3) - space.create(3) @ space.annihilate(1)
    self_int = matrix_exponential(
        n1 @ n1 + n3 @ n3 - n1 - n3, -1j * math.pi / 2)
    rhs = (matrix_exponential(bs, -math.pi / 4) @ self_int
           @ matrix_exponential(bs, math.pi / 4))
    r1 = _dense_residual(lhs[:, rails], rhs[:, rails])
    details.append(f"three-gate circuit matches on dual-rail inputs: residual {r1:g}")

    # beamsplitter rotation of a creation operator, below the cutoff
    two = TruncatedBosonSpace(2, 2)
    gen = two.create(0) @ two.annihilate(1) - two.create(1) @ two.annihilate(0)
    phi = 0.37
    conj = (matrix_exponential(gen, phi) @ two.create(1)
            @ matrix_exponential(gen, -phi))
    want = math.cos(phi) * two.create(1) + math.sin(phi) * two.create(0)
    cols = [k for k in range(two.dim) if sum(two.occupations(k)) <= 1]
    r2 = _dense_residual(conj[:, cols], want[:, cols])
    details.append(f"beamsplitter rotates b+ into cos b+ + sin a+: residual {r2:g}")

    residual = max(r0, r1, r2)
    return IdentityCheck("kerr", "max_abs_diff", TOL,
                         residual <= TOL, residual, tuple(details))


# -- series expansion -------------------------------------------------------

def check_bch_series(A: OperatorSum | None = None,
                     B: OperatorSum | None = None,
                     alpha: float = 1e-2,
                     order: int = 4) -> IdentityCheck:
    """Truncated similarity-transform series against the dense conjugation.

    The series is sum_k (-alpha)**k / k! ad_A^k(B): signs alternate.  (A
    well-known typo writes the cubic term with a plus sign; the alternating
    form is what the exponential derivative gives.)  The truncation error
    must scale as alpha**(order+1), tested by halving alpha.
    """
    if A is None:
        A = OperatorSum.z(0, 1)
    if B is None:
        B = OperatorSum.x(0, 1)
    if order > 6:
        raise ValueError("order capped at 6")
    details = []

    nested = []
    term = B
    for _ in range(order + 1):
        nested.append(realize(term))
        term = commutator(A, term)
    a_d, b_d = realize(A), realize(B)

    def residual_at(a: float) -> float:
        conj = (matrix_exponential(a_d, -a) @ b_d
                @ matrix_exponential(a_d, a))
        acc = np.zeros_like(b_d)
        for k, mat in enumerate(nested):
            acc = acc + ((-a) ** k / math.factorial(k)) * mat
        return _dense_residual(conj, acc)

    r_full = residual_at(alpha)
    r_half = residual_at(alpha / 2)
    details.append(f"residual at alpha={alpha:g}: {r_full:g}")
    details.append(f"residual at alpha/2: {r_half:g}")
    if r_full < 1e-14 and r_half < 1e-14:
        details.append("residual at machine zero (commuting inputs); "
                       "scaling test vacuous")
        passed = True
        ratio = float("inf")
    else:
        ratio = r_full / r_half if r_half > 0 else float("inf")
        expect = 2.0 ** (order + 1)
        details.append(f"halving ratio {ratio:.3f}, expected about {expect:g}")
        passed = ratio >= 0.8 * 2.0 ** order
    return IdentityCheck("bch", "max_abs_diff", TOL,
                         passed and r_full < 1e-6, r_full, tuple(details))


# -- phonon-mediated coupling ----------------------------------------------

def check_iontrap_xy(cutoff: int = 2) -> IdentityCheck:
    """Phonon-mediated pair coupling reduces to the symmetric XY term.

    On qubits (a, b) sharing one bosonic mode, 2i[s_a^- b+ + s_a^+ b,
    s_b^- b+ + s_b^+ b] = X_a Y_b - Y_a X_b wherever [b, b+] = 1, and the
    quarter-turn generated by (Z_a - Z_b)/2 carries that to X_a X_b +
    Y_a Y_b.  The conjugation by the unhalved Z_a - Z_b over-rotates and
    only flips the commutator's sign; both residuals are reported.  The
    top truncated boson level violates [b, b+] = 1, so sectors are compared
    separately and only the sub-cutoff ones are required to match.
    """
    details = []
    n_q = 2
    dim_q = 4
    space = TruncatedBosonSpace(1, cutoff)

    def hybrid(qubit_op: OperatorSum, boson_mat: np.ndarray) -> np.ndarray:
        return np.kron(boson_mat, realize(qubit_op))

    sp = [OperatorSum(n_q, {(1 << i, 0): HALF,
                            (1 << i, 1 << i): HALF * I_UNIT})
          for i in range(2)]
    sm = [OperatorSum(n_q, {(1 << i, 0): HALF,
                            (1 << i, 1 << i): -(HALF * I_UNIT)})
          for i in range(2)]
    bd, b = space.create(0), space.annihilate(0)
    v = [hybrid(sm[i], bd) + hybrid(sp[i], b) for i in range(2)]
    comm2i = 2j * (v[0] @ v[1] - v[1] @ v[0])

    z_diff = OperatorSum.z(0, n_q) - OperatorSum.z(1, n_q)
    xy = realize(OperatorSum(n_q, {(3, 0): ONE, (3, 3): ONE}))  # XX + YY
    half_gen = hybrid(z_diff * HALF, space.identity())
    rot = matrix_exponential(half_gen, -1j * math.pi / 4)
    rot_inv = matrix_exponential(half_gen, 1j * math.pi / 4)
    conj = rot @ comm2i @ rot_inv

    residual = 0.0
    for sector in range(cutoff + 1):
        rows = [q + dim_q * sector for q in range(dim_q)]
        block = conj[np.ix_(rows, rows)]
        r = _dense_residual(block, xy)
        if sector < cutoff:
            residual = max(residual, r)
            details.append(f"boson sector {sector}: residual {r:g}")
        else:
            details.append(f"boson sector {sector} (top, truncated): "
                           f"residual {r:g} — truncation artifact, excluded")

    full_gen = hybrid(z_diff, space.identity())
    lit = (matrix_exponential(full_gen, -1j * math.pi / 4) @ comm2i
           @ matrix_exponential(full_gen, 1j * math.pi / 4))
    r_lit = _dense_residual(lit[:dim_q, :dim_q], xy)
    details.append(
        f"with the unhalved generator the sector-0 residual is {r_lit:g}: "
        "the stated conjugation needs the generator halved, (Z_a - Z_b)/2")
    return IdentityCheck("iontrap", "max_abs_diff", TOL,
                         residual <= TOL, residual, tuple(details))


# -- encoded antisymmetric-XY identities -----------------------------------

def _tx(i: int, j: int, n: int) -> OperatorSum:
    x_like, _, _ = bilinear_su2((i, j), n, family="hopping")
    return x_like


def check_axy_encoded() -> IdentityCheck:
    """Encoded selective recoupling identities, then the inter-pair ZZ table."""
    details = []
    n = 3
    t01, t12, t02 = _tx(0, 1, n), _tx(1, 2, n), _tx(0, 2, n)
    zz01 = OperatorSum(n, {(0, 3): ONE})
    step1 = conjugate_eighth(t12, t01, 2)
    want1 = (zz01 * t02) * I_UNIT
    r0 = _exact_residual(step1 - want1)
    details.append(f"half-turn recoupling gives i Z0 Z1 Tx(0,2): residual {r0:g}")

    step2 = conjugate_eighth(step1, t02, 1)
    z0 = OperatorSum.z(0, n)
    z1 = OperatorSum.z(1, n)
    z2 = OperatorSum.z(2, n)
    want2 = (z1 * (z2 - z0)) * HALF
    r1 = _exact_residual(step2 - want2)
    details.append(f"quarter-turn then gives Z1 (Z2 - Z0)/2: residual {r1:g}")

    code = build_code(2, 1)
    gate = encoded_cphase(code, code)
    zz = np.real(np.diag(gate.zz_action))
    r2 = _dense_residual(zz, np.array([-1.0, 1.0, 1.0, -1.0]))
    details.append("boundary ZZ on the paired single-excitation codes acts as "
                   f"diag(-1,1,1,-1): residual {r2:g}")
    residual = max(r0, r1, r2)
    return IdentityCheck("axy-encoded", "exact", TOL,
                         residual == 0.0, residual, tuple(details))


def check_axy_split() -> IdentityCheck:
    """Pair Hamiltonian splits exactly into commuting hopping/pairing blocks.

    For one pair, H0 + V with V = Jxy X0 Y1 + Jyx Y0 X1 equals
    (J~/2) R_y + e+ R_z - (D~/2) T_y + e- T_z with J~ = Jxy + Jyx,
    D~ = Jxy - Jyx and e+- = (e0 +- e1)/2.  The halved couplings, the minus
    sign on the T_y term and the averaged detunings are what the exact
    algebra forces; displayed versions without them do not balance.
    """
    details = []
    n = 2
    t_x, t_y, t_z = bilinear_su2((0, 1), n, family="hopping")
    r_x, r_y, r_z = bilinear_su2((0, 1), n, family="pairing")
    x0y1 = OperatorSum(n, {(3, 2): ONE})
    y0x1 = OperatorSum(n, {(3, 1): ONE})
    z0 = OperatorSum.z(0, n)
    z1 = OperatorSum.z(1, n)

    cases = [
        (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(-1, 7)),
        (Fraction(1), Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(-1), Fraction(2), Fraction(3)),
        (Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
    ]
    residual = 0.0
    for jxy, jyx, e0, e1 in cases:
        h = (x0y1 * Scalar(jxy) + y0x1 * Scalar(jyx)
             + z0 * Scalar(e0 / 2) + z1 * Scalar(e1 / 2))
        j_sym = Scalar((jxy + jyx) / 2)
        d_asym = Scalar((jxy - jyx) / 2)
        e_plus = Scalar((e0 + e1) / 2)
        e_minus = Scalar((e0 - e1) / 2)
        split = (r_y * j_sym + r_z * e_plus
                 - t_y * d_asym + t_z * e_minus)
        r = _exact_residual(h - split)
        residual = max(residual, r)
        details.append(
            f"Jxy={jxy}, Jyx={jyx}, e=({e0},{e1}): residual {r:g}")
        if jxy == jyx and not (t_y * d_asym).is_zero:
            details.append("symmetric case leaked a T_y term")
            residual = max(residual, 1.0)
        if jxy == -jyx and not (r_y * j_sym).is_zero:
            details.append("antisymmetric case leaked an R_y term")
            residual = max(residual, 1.0)

    for t_part in (t_x, t_y, t_z):
        for r_part in (r_x, r_y, r_z):
            r = _exact_residual(commutator(t_part, r_part))
            residual = max(residual, r)
    details.append("hopping and pairing blocks commute exactly")
    return IdentityCheck("axy-split", "exact", TOL,
                         residual == 0.0, residual, tuple(details))


# -- wrappers over other modules -------------------------------------------

def check_boson_commutator(n_max: int = 6) -> IdentityCheck:
    details = []
    residual = 0.0
    for n in range(1, n_max + 1):
        got = boson_approx_commutator(n)
        want = OperatorSum.identity(n)
        for i in range(n):
            want = want - number_site(i, n) * Scalar(Fraction(2, n))
        r = _exact_residual(got - want)
        residual = max(residual, r)
        details.append(f"N={n}: [B, B+] = 1 - (2/N) n_total, residual {r:g}")
    return IdentityCheck("boson-commutator", "exact", 0.0,
                         residual == 0.0, residual, tuple(details))


def check_car(n_modes: int = 5) -> IdentityCheck:
    report: CarReport = verify_car(n_modes)
    bad = [c.name for c in report.checks if not c.passed]
    details = [f"{len(report.checks)} relations on {n_modes} modes"]
    details.extend(f"FAILED: {name}" for name in bad)
    return IdentityCheck("car", "exact", 0.0, report.ok,
                         0.0 if report.ok else float(len(bad)),
                         tuple(details))


def _check_compound(case: int) -> IdentityCheck:
    details = []
    ok = True
    worst = 0.0
    for n_pairs in (1, 2, 3):
        report = compound_mapping_check(case, n_pairs)
        bad = [c.name for c in report.checks if not c.passed]
        ok = ok and report.ok
        worst = max(worst, float(len(bad)))
        details.append(f"{n_pairs} pair(s): "
                       f"{'all relations hold' if report.ok else bad}")
    tol = 1e-10 if case == 3 else 0.0
    return IdentityCheck(f"compound-{case}", "exact" if case != 3 else
                         "max_abs_diff", tol, ok, worst, tuple(details))


def check_compound_1() -> IdentityCheck:
    return _check_compound(1)


def check_compound_2() -> IdentityCheck:
    return _check_compound(2)


def check_compound_3() -> IdentityCheck:
    return _check_compound(3)


CHECKS = {
    "recoupling": check_recoupling,
    "angular": check_angular_recoupling,
    "canonical": check_canonical_reduction,
    "kerr": check_kerr_selfkerr,
    "bch": check_bch_series,
    "iontrap": check_iontrap_xy,
    "axy-encoded": check_axy_encoded,
    "axy-split": check_axy_split,
    "boson-commutator": check_boson_commutator,
    "compound-1": check_compound_1,
    "compound-2": check_compound_2,
    "compound-3": check_compound_3,
    "car": check_car,
}


def run_all() -> list:
    return [CHECKS[name]() for name in CHECKS]
