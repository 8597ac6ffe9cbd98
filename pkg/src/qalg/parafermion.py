"""Second-quantized expressions and the parafermion-to-Pauli dictionary.

A parafermion here is a hard-core mode: creation and annihilation operators
anticommute on site ({a, a'} = 1, a^2 = 0) but commute across sites.  The
on-site qubit dictionary is

    raising  -> a',   lowering -> a,   2n - 1 -> Z

with raising/lowering built from (X +- iY)/2, so the occupied state of a
mode is the Z = +1 eigenstate.  Number and parity conservation of an
operator are judged by exact commutation with the total number operator and
with the product of on-site (1 - 2n) factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_ENUM_LIMIT
from .errors import ModeMismatchError, SpeciesError
from .pauli import HALF, I_UNIT, ONE, OperatorSum, Scalar, commutator

SPECIES = ("parafermion", "fermion", "boson")

CREATE = "+"
ANNIHILATE = "-"
NUMBER = "n"
_KINDS = (CREATE, ANNIHILATE, NUMBER)


class SecondQuantizedExpr:
    """Sum of scalar-weighted products of mode operators of one species.

    terms is a tuple of (Scalar, factors) pairs where factors is a tuple of
    (kind, mode) with kind one of "+", "-", "n".  Factor order is preserved;
    nothing is normal-ordered behind the caller's back.
    """

    __slots__ = ("n_modes", "species", "terms")

    def __init__(self, n_modes: int, species: str, terms=()):
        if species not in SPECIES:
            raise SpeciesError(f"unknown species {species!r}")
        if n_modes < 1:
            raise ValueError("n_modes must be positive")
        clean = []
        for coeff, factors in terms:
            coeff = Scalar.of(coeff)
            factors = tuple(factors)
            for kind, mode in factors:
                if kind not in _KINDS:
                    raise ValueError(f"unknown factor kind {kind!r}")
                if not 0 <= mode < n_modes:
                    raise ValueError(f"mode {mode} out of range for {n_modes} modes")
            if coeff:
                clean.append((coeff, factors))
        self.n_modes = n_modes
        self.species = species
        self.terms = tuple(clean)

    # -- constructors -----------------------------------------------------

    @classmethod
    def create(cls, mode: int, n_modes: int, species: str = "parafermion"):
        return cls(n_modes, species, [(ONE, ((CREATE, mode),))])

    @classmethod
    def annihilate(cls, mode: int, n_modes: int, species: str = "parafermion"):
        return cls(n_modes, species, [(ONE, ((ANNIHILATE, mode),))])

    @classmethod
    def number(cls, mode: int, n_modes: int, species: str = "parafermion"):
        return cls(n_modes, species, [(ONE, ((NUMBER, mode),))])

    @classmethod
    def constant(cls, value, n_modes: int, species: str = "parafermion"):
        return cls(n_modes, species, [(Scalar.of(value), ())])

    # -- algebra ----------------------------------------------------------

    def _check(self, other):
        if self.n_modes != other.n_modes:
            raise ModeMismatchError(
                f"operands on {self.n_modes} and {other.n_modes} modes")
        if self.species != other.species:
            raise SpeciesError(
                f"cannot mix species {self.species!r} and {other.species!r}")

    def __add__(self, other):
        if not isinstance(other, SecondQuantizedExpr):
            return NotImplemented
        self._check(other)
        return SecondQuantizedExpr(self.n_modes, self.species,
                                   self.terms + other.terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SecondQuantizedExpr(
            self.n_modes, self.species,
            [(-c, f) for c, f in self.terms])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            scale = Scalar.of(other)
            return SecondQuantizedExpr(
                self.n_modes, self.species,
                [(c * scale, f) for c, f in self.terms])
        if not isinstance(other, SecondQuantizedExpr):
            return NotImplemented
        self._check(other)
        out = [(c1 * c2, f1 + f2)
               for c1, f1 in self.terms
               for c2, f2 in other.terms]
        return SecondQuantizedExpr(self.n_modes, self.species, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "SecondQuantizedExpr":
        flip = {CREATE: ANNIHILATE, ANNIHILATE: CREATE, NUMBER: NUMBER}
        out = []
        for coeff, factors in self.terms:
            rev = tuple((flip[k], m) for k, m in reversed(factors))
            out.append((coeff.conjugate(), rev))
        return SecondQuantizedExpr(self.n_modes, self.species, out)

    def __eq__(self, other):
        if not isinstance(other, SecondQuantizedExpr):
            return NotImplemented
        return (self.n_modes == other.n_modes
                and self.species == other.species
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n_modes, self.species, self.terms))

    def __repr__(self):
        from .dsl import print_expr
        try:
            return f"<{self.species} expr: {print_expr(self)}>"
        except ValueError:
            return f"<{self.species} expr, {len(self.terms)} terms>"


# -- single-site Pauli images ---------------------------------------------

def raising_op(mode: int, n_modes: int) -> OperatorSum:
    """(X + iY)/2 on one mode; the image of a creation operator."""
    bit = 1 << mode
    return OperatorSum(n_modes, {(bit, 0): HALF, (bit, bit): HALF * I_UNIT})

def lowering_op(mode: int, n_modes: int) -> OperatorSum:
    bit = 1 << mode
    return OperatorSum(n_modes, {(bit, 0): HALF, (bit, bit): -(HALF * I_UNIT)})

def number_site(mode: int, n_modes: int) -> OperatorSum:
    """(1 + Z)/2 on one mode: the occupied state is the Z = +1 eigenstate."""
    return OperatorSum(n_modes, {(0, 0): HALF, (0, 1 << mode): HALF})

def number_operator(n_modes: int) -> OperatorSum:
    """Total number operator, sum of on-site (1 + Z)/2."""
    total = OperatorSum.zero(n_modes)
    for i in range(n_modes):
        total = total + number_site(i, n_modes)
    return total

def parity_operator(n_modes: int) -> OperatorSum:
    """(-1)**number: the product of on-site (1 - 2n) = -Z factors."""
    full = (1 << n_modes) - 1
    sign = ONE if n_modes % 2 == 0 else -ONE
    return OperatorSum(n_modes, {(0, full): sign})


_FACTOR_IMAGE = {CREATE: raising_op, ANNIHILATE: lowering_op, NUMBER: number_site}


def to_pauli(expr: SecondQuantizedExpr) -> OperatorSum:
    """Exact Pauli image of a parafermion expression."""
    if expr.species != "parafermion":
        raise SpeciesError(
            f"to_pauli maps parafermion expressions, got {expr.species!r}")
    total = OperatorSum.zero(expr.n_modes)
    for coeff, factors in expr.terms:
        acc = OperatorSum.identity(expr.n_modes) * coeff
        for kind, mode in factors:
            acc = acc * _FACTOR_IMAGE[kind](mode, expr.n_modes)
        total = total + acc
    return total


# -- transfer-operator catalogue ------------------------------------------

@dataclass(frozen=True)
class GeneratorIndex:
    """Index (alpha, beta) of a normal-ordered transfer monomial.

    alpha and beta are occupation bit masks: the monomial creates on the
    modes of alpha (descending mode order) and annihilates on the modes of
    beta (descending mode order).  Repeated modes therefore appear as
    creation-before-annihilation, i.e. as number operators.
    """

    n_modes: int
    alpha: int
    beta: int

    def __post_init__(self):
        full = (1 << self.n_modes) - 1
        if self.alpha & ~full or self.beta & ~full:
            raise ValueError("index mask exceeds the mode count")

    @property
    def n_created(self) -> int:
        return self.alpha.bit_count()

    @property
    def n_annihilated(self) -> int:
        return self.beta.bit_count()

    @property
    def conserves_number(self) -> bool:
        return self.n_created == self.n_annihilated

    @property
    def conserves_parity(self) -> bool:
        return (self.n_created - self.n_annihilated) % 2 == 0

    def monomial(self) -> SecondQuantizedExpr:
        factors = []
        for mode in range(self.n_modes - 1, -1, -1):
            if self.alpha >> mode & 1:
                factors.append((CREATE, mode))
        for mode in range(self.n_modes - 1, -1, -1):
            if self.beta >> mode & 1:
                factors.append((ANNIHILATE, mode))
        return SecondQuantizedExpr(self.n_modes, "parafermion",
                                   [(ONE, tuple(factors))])


def enumerate_generators(n_modes: int, filter: str | None = None,
                         limit: int | None = None):
    """All 4**n_modes transfer monomial indices in (alpha, beta) order.

    filter "number" keeps the number-conserving ones (equal masses of
    creations and annihilations), "parity" the parity-conserving ones
    (mass difference even).
    """
    cap = DEFAULT_ENUM_LIMIT if limit is None else limit
    if n_modes > cap:
        raise ValueError(
            f"{n_modes} modes exceeds the enumeration limit of {cap}")
    if filter not in (None, "number", "parity"):
        raise ValueError(f"unknown filter {filter!r}")
    out = []
    for alpha in range(1 << n_modes):
        for beta in range(1 << n_modes):
            idx = GeneratorIndex(n_modes, alpha, beta)
            if filter == "number" and not idx.conserves_number:
                continue
            if filter == "parity" and not idx.conserves_parity:
                continue
            out.append(idx)
    return out


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraVerdict:
    conserves_number: bool
    conserves_parity: bool
    support: frozenset


def classify(op: OperatorSum) -> SubalgebraVerdict:
    """Exact conservation properties of a Hermitian operator."""
    if not op.is_hermitian:
        raise ValueError("classify expects a Hermitian operator")
    n = op.n_modes
    conserves_number = commutator(op, number_operator(n)).is_zero
    conserves_parity = (conserves_number
                        or commutator(op, parity_operator(n)).is_zero)
    return SubalgebraVerdict(conserves_number, conserves_parity,
                             frozenset(op.support_modes()))


# -- two-mode angular-momentum pairs ---------------------------------------

def bilinear_su2(pair, n_modes: int, family: str = "hopping"):
    """Angular-momentum triple built from a pair of modes.

    family "hopping" is number conserving: X-like is the symmetric hop,
    Z-like the population difference n_i - n_j.  family "pairing" is
    parity conserving: X-like creates/destroys the pair, Z-like is
    n_i + n_j - 1.  In both cases Y-like = i[X-like, Z-like], and the
    (X, Y/2, Z) rescaling satisfies the standard Pauli relations.
    """
    i, j = pair
    if i == j or not (0 <= i < n_modes and 0 <= j < n_modes):
        raise ValueError(f"invalid mode pair {pair!r} on {n_modes} modes")
    ai = SecondQuantizedExpr.annihilate(i, n_modes)
    aj = SecondQuantizedExpr.annihilate(j, n_modes)
    adi = SecondQuantizedExpr.create(i, n_modes)
    adj = SecondQuantizedExpr.create(j, n_modes)
    ni = SecondQuantizedExpr.number(i, n_modes)
    nj = SecondQuantizedExpr.number(j, n_modes)
    one = SecondQuantizedExpr.constant(1, n_modes)
    if family == "hopping":
        x_like = to_pauli(adj * ai + adi * aj)
        z_like = to_pauli(ni - nj)
    elif family == "pairing":
        x_like = to_pauli(ai * aj + adj * adi)
        z_like = to_pauli(ni + nj - one)
    else:
        raise ValueError(f"unknown family {family!r}")
    y_like = commutator(x_like, z_like) * I_UNIT
    return x_like, y_like, z_like
