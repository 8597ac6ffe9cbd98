"""Exact algebra of multi-mode Pauli operators.

Encoding: a term on N modes is a pair of bit masks ``(x_mask, z_mask)`` plus
a phase ``i**k``.  Bit ``i`` of ``x_mask`` (``z_mask``) records an X (Z)
factor on mode ``i``; a mode with both bits set carries Y.  The reference
operator for a mask pair is

    P(x, z) = i**popcount(x & z) * X**x * Z**z

which is Hermitian, so a term with phase +1 is Hermitian and a sum is
Hermitian exactly when every stored coefficient is real.

Coefficients are exact scalars ``a + b*sqrt(2) + i*(c + d*sqrt(2))`` with
rational a, b, c, d.  The sqrt(2) parts are there so that conjugation by
eighth-turn exponentials (cos and sin both sqrt(2)/2) stays inside the
representation; everyday operators carry plain Gaussian-rational
coefficients.

Mode 0 is the least significant bit of basis-state labels in the dense
realization, i.e. ``realize`` maps mode 0 to the last Kronecker factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

from .config import dense_limit
from .errors import DenseLimitError, ModeMismatchError

_SQRT2 = 2 ** 0.5


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


class Scalar:
    """Exact complex number a + b*sqrt(2) + i*(c + d*sqrt(2)), rational a..d."""

    __slots__ = ("re", "re2", "im", "im2")

    def __init__(self, re=0, im=0, re2=0, im2=0):
        self.re = _frac(re)
        self.im = _frac(im)
        self.re2 = _frac(re2)
        self.im2 = _frac(im2)

    @classmethod
    def of(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls(_frac(value))

    def __add__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im,
                      self.re2 + other.re2, self.im2 + other.im2)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) + (-self)

    def __neg__(self):
        return Scalar(-self.re, -self.im, -self.re2, -self.im2)

    def __mul__(self, other):
        other = Scalar.of(other)
        a1, b1, c1, d1 = self.re, self.re2, self.im, self.im2
        a2, b2, c2, d2 = other.re, other.re2, other.im, other.im2
        return Scalar(
            a1 * a2 + 2 * b1 * b2 - c1 * c2 - 2 * d1 * d2,
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _frac(other)
        return Scalar(self.re / other, self.im / other,
                      self.re2 / other, self.im2 / other)

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im, self.re2, -self.im2)

    def times_i(self, power: int = 1) -> "Scalar":
        """Multiply by i**power without going through __mul__."""
        power %= 4
        if power == 0:
            return self
        if power == 1:
            return Scalar(-self.im, self.re, -self.im2, self.re2)
        if power == 2:
            return -self
        return Scalar(self.im, -self.re, self.im2, -self.re2)

    @property
    def is_zero(self) -> bool:
        return not (self.re or self.im or self.re2 or self.im2)

    @property
    def is_real(self) -> bool:
        return not (self.im or self.im2)

    @property
    def is_rational(self) -> bool:
        """True when the sqrt(2) parts vanish."""
        return not (self.re2 or self.im2)

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Scalar.of(other)
            return (self.re == other.re and self.im == other.im
                    and self.re2 == other.re2 and self.im2 == other.im2)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im, self.re2, self.im2))

    def to_complex(self) -> complex:
        return complex(float(self.re) + float(self.re2) * _SQRT2,
                       float(self.im) + float(self.im2) * _SQRT2)

    def __repr__(self):
        return f"Scalar({self.re!r}, {self.im!r}, {self.re2!r}, {self.im2!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)
HALF = Scalar(Fraction(1, 2))
# cos(pi/4) = sin(pi/4), exact
RT2_HALF = Scalar(0, 0, Fraction(1, 2), 0)


def _product_phase_exp(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i in P(x1,z1) * P(x2,z2) = i**e * P(x1^x2, z1^z2)."""
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    e = ((x1 & z1).bit_count() + (x2 & z2).bit_count()
         - (x3 & z3).bit_count() + 2 * (z1 & x2).bit_count())
    return e % 4


@dataclass(frozen=True)
class PauliTerm:
    """One Pauli string: phase * P(x_mask, z_mask), phase = i**phase_exp."""

    n_modes: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_modes < 0:
            raise ValueError("n_modes must be nonnegative")
        full = (1 << self.n_modes) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask exceeds the declared mode count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def adjoint(self) -> "PauliTerm":
        return PauliTerm(self.n_modes, self.x_mask, self.z_mask, -self.phase_exp)

    def support(self) -> int:
        return self.x_mask | self.z_mask

    def to_operator(self, coeff=1) -> "OperatorSum":
        c = Scalar.of(coeff).times_i(self.phase_exp)
        return OperatorSum(self.n_modes, {(self.x_mask, self.z_mask): c})

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return multiply(self, other)
        return NotImplemented


def multiply(lhs: PauliTerm, rhs: PauliTerm) -> PauliTerm:
    """Exact product of two Pauli terms."""
    if lhs.n_modes != rhs.n_modes:
        raise ModeMismatchError(
            f"cannot multiply terms on {lhs.n_modes} and {rhs.n_modes} modes")
    e = _product_phase_exp(lhs.x_mask, lhs.z_mask, rhs.x_mask, rhs.z_mask)
    return PauliTerm(lhs.n_modes, lhs.x_mask ^ rhs.x_mask,
                     lhs.z_mask ^ rhs.z_mask, lhs.phase_exp + rhs.phase_exp + e)


class OperatorSum:
    """Finite sum of Pauli terms with exact coefficients.

    Stored as a map (x_mask, z_mask) -> Scalar, the coefficient of the
    Hermitian reference term P(x, z).  Zero coefficients are dropped.
    """

    __slots__ = ("n_modes", "_terms")

    def __init__(self, n_modes: int, terms=None):
        self.n_modes = n_modes
        clean = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Scalar.of(coeff)
                if coeff:
                    clean[key] = coeff
        self._terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n_modes: int) -> "OperatorSum":
        return cls(n_modes)

    @classmethod
    def identity(cls, n_modes: int) -> "OperatorSum":
        return cls(n_modes, {(0, 0): ONE})

    @classmethod
    def x(cls, mode: int, n_modes: int) -> "OperatorSum":
        return cls(n_modes, {(1 << mode, 0): ONE})

    @classmethod
    def y(cls, mode: int, n_modes: int) -> "OperatorSum":
        return cls(n_modes, {(1 << mode, 1 << mode): ONE})

    @classmethod
    def z(cls, mode: int, n_modes: int) -> "OperatorSum":
        return cls(n_modes, {(0, 1 << mode): ONE})

    # -- inspection -------------------------------------------------------

    def items(self):
        """Terms in canonical (x_mask, z_mask) order."""
        return sorted(self._terms.items())

    def coefficient(self, x_mask: int, z_mask: int) -> Scalar:
        return self._terms.get((x_mask, z_mask), ZERO)

    @property
    def n_terms(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_hermitian(self) -> bool:
        return all(c.is_real for c in self._terms.values())

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self._terms.values())

    def support(self) -> int:
        mask = 0
        for x, z in self._terms:
            mask |= x | z
        return mask

    def support_modes(self) -> set:
        mask = self.support()
        return {i for i in range(self.n_modes) if mask >> i & 1}

    def trace_part(self) -> Scalar:
        """Coefficient of the identity term."""
        return self.coefficient(0, 0)

    def traceless(self) -> "OperatorSum":
        rest = dict(self._terms)
        rest.pop((0, 0), None)
        return OperatorSum(self.n_modes, rest)

    # -- algebra ----------------------------------------------------------

    def _check_modes(self, other):
        if self.n_modes != other.n_modes:
            raise ModeMismatchError(
                f"operands on {self.n_modes} and {other.n_modes} modes")

    def __add__(self, other):
        if isinstance(other, PauliTerm):
            other = other.to_operator()
        if not isinstance(other, OperatorSum):
            return NotImplemented
        self._check_modes(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            out[key] = out.get(key, ZERO) + coeff
        return OperatorSum(self.n_modes, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return OperatorSum(self.n_modes,
                           {k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            scale = Scalar.of(other)
            return OperatorSum(self.n_modes,
                               {k: c * scale for k, c in self._terms.items()})
        if isinstance(other, PauliTerm):
            other = other.to_operator()
        if not isinstance(other, OperatorSum):
            return NotImplemented
        self._check_modes(other)
        out = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                e = _product_phase_exp(x1, z1, x2, z2)
                key = (x1 ^ x2, z1 ^ z2)
                contrib = (c1 * c2).times_i(e)
                acc = out.get(key)
                out[key] = contrib if acc is None else acc + contrib
        return OperatorSum(self.n_modes, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * Scalar(Fraction(1, 1) / _frac(other))

    def adjoint(self) -> "OperatorSum":
        return OperatorSum(self.n_modes,
                           {k: c.conjugate() for k, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, PauliTerm):
            other = other.to_operator()
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self.n_modes == other.n_modes and self._terms == other._terms

    def __hash__(self):
        return hash((self.n_modes, frozenset(self._terms.items())))

    def apply_basis_state(self, label: int) -> dict:
        """Exact action on computational basis state |label>.

        Returns {out_label: Scalar amplitude}.  Uses Z|0> = +|0>,
        Z|1> = -|1> and X as the bit flip, with mode i on bit i.
        """
        out = {}
        for (x, z), coeff in self._terms.items():
            amp = coeff.times_i((x & z).bit_count())
            if (z & label).bit_count() & 1:
                amp = -amp
            target = label ^ x
            acc = out.get(target)
            total = amp if acc is None else acc + amp
            if total:
                out[target] = total
            elif acc is not None:
                del out[target]
        return out

    def __repr__(self):
        if self.is_zero:
            return f"OperatorSum({self.n_modes}, 0)"
        bits = []
        for (x, z), c in self.items():
            ops = []
            for i in range(self.n_modes):
                xb, zb = x >> i & 1, z >> i & 1
                if xb and zb:
                    ops.append(f"Y{i}")
                elif xb:
                    ops.append(f"X{i}")
                elif zb:
                    ops.append(f"Z{i}")
            label = ".".join(ops) if ops else "I"
            bits.append(f"({c.to_complex():.3g})*{label}")
        return " + ".join(bits)


def commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    return a * b - b * a


def anticommutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    return a * b + b * a


def all_terms(n_modes: int):
    """Iterate every Hermitian reference term P(x, z) on n_modes modes."""
    size = 1 << n_modes
    for x in range(size):
        for z in range(size):
            yield PauliTerm(n_modes, x, z)


# -- dense realization ----------------------------------------------------

@lru_cache(maxsize=None)
def _parity_signs(n_modes: int) -> np.ndarray:
    """(-1)**popcount(v) for v in [0, 2**n)."""
    v = np.arange(1 << n_modes, dtype=np.uint32)
    pop = np.zeros(1 << n_modes, dtype=np.int64)
    for i in range(n_modes):
        pop += (v >> i) & 1
    return np.where(pop & 1, -1.0, 1.0)


def realize(op, limit: int | None = None) -> np.ndarray:
    """Dense complex matrix of a PauliTerm or OperatorSum.

    Basis-state labels carry mode i on bit i (mode 0 least significant).
    """
    if isinstance(op, PauliTerm):
        op = op.to_operator()
    cap = dense_limit() if limit is None else limit
    if op.n_modes > cap:
        raise DenseLimitError(
            f"{op.n_modes} modes exceeds the dense limit of {cap}")
    dim = 1 << op.n_modes
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    signs = _parity_signs(op.n_modes)
    for (x, z), coeff in op._terms.items():
        phase = coeff.to_complex() * (1j) ** ((x & z).bit_count())
        out[cols ^ x, cols] += phase * signs[cols & z]
    return out


def matrix_exponential(matrix: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * matrix) by scaling and squaring (deterministic)."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("square matrix required")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return scipy.linalg.expm(scale * m)
