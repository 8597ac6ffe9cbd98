"""Constant-excitation code subspaces and their encoded operations.

A code C(N, n) is spanned by the N-mode basis states carrying exactly n
excitations.  Codewords are kept as occupation masks (bit i = occupation of
mode i) and printed mode-0-first, so the string "001" on three modes means
mode 2 is excited.  The order is ascending in the printed string value,
which makes the small examples come out in the familiar ladder order
|00...01> < |00...10> < ... and fixes every matrix in this module.

Encoded one-pair generators are the projections of the two-mode hopping
operators: the x kind swaps the two occupations (and kills codewords where
they agree), the z kind is diagonal with entry q_j - q_i.  An inter-block
ZZ interaction between the last mode of one code and the first mode of the
next factorizes over the two codes and induces a generalized CPHASE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import dense_limit
from .pauli import OperatorSum
from .parafermion import bilinear_su2


def _bit_reversed(mask: int, width: int) -> int:
    out = 0
    for k in range(width):
        if mask >> k & 1:
            out |= 1 << (width - 1 - k)
    return out


@dataclass(frozen=True)
class CodeSubspace:
    """Span of the n-excitation basis states on n_modes modes."""

    n_modes: int
    excitations: int

    def __post_init__(self):
        if not 0 <= self.excitations <= self.n_modes:
            raise ValueError(
                f"excitation count {self.excitations} invalid "
                f"for {self.n_modes} modes")
        if self.n_modes > dense_limit():
            raise ValueError(
                f"{self.n_modes} modes exceeds the dense limit")

    @cached_property
    def codewords(self) -> tuple:
        """Occupation masks, ascending in printed (mode-0-first) value."""
        masks = [m for m in range(1 << self.n_modes)
                 if m.bit_count() == self.excitations]
        masks.sort(key=lambda m: _bit_reversed(m, self.n_modes))
        return tuple(masks)

    @property
    def dim(self) -> int:
        return math.comb(self.n_modes, self.excitations)

    @cached_property
    def dense_indices(self) -> tuple:
        """Dense basis labels of the codewords (label bit = 1 - occupation)."""
        full = (1 << self.n_modes) - 1
        return tuple(full ^ m for m in self.codewords)

    def codeword_strings(self) -> tuple:
        return tuple(
            "".join("1" if m >> k & 1 else "0" for k in range(self.n_modes))
            for m in self.codewords)

    @cached_property
    def projector(self) -> np.ndarray:
        diag = np.zeros(1 << self.n_modes)
        for label in self.dense_indices:
            diag[label] = 1.0
        return np.diag(diag).astype(complex)

    def index_of(self, mask: int) -> int:
        return self.codewords.index(mask)


def build_code(n_modes: int, excitations: int) -> CodeSubspace:
    code = CodeSubspace(n_modes, excitations)
    code.codewords  # force enumeration so errors surface here
    return code


def rate(n_modes: int, excitations: int) -> float:
    """Encoded qubits per physical mode, log2(dim)/N."""
    code_dim = math.comb(n_modes, excitations)
    return math.log2(code_dim) / n_modes


def shannon_entropy(p: float) -> float:
    """Binary entropy S(p); the asymptotic rate of C(N, pN)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


# -- encoded operations ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class EncodedGate:
    """Action of a block-preserving physical operator on the codeword basis.

    Generators (kinds x and z) are Hermitian; circuit gates are unitary.
    """

    name: str
    support: tuple
    action: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "action", np.asarray(self.action, complex))

    @property
    def is_hermitian(self) -> bool:
        return bool(np.max(np.abs(self.action - self.action.conj().T)) < 1e-10)

    @property
    def is_unitary(self) -> bool:
        d = self.action.shape[0]
        return bool(np.max(np.abs(
            self.action @ self.action.conj().T - np.eye(d))) < 1e-10)


def _project(code: CodeSubspace, op: OperatorSum) -> np.ndarray:
    """Matrix elements of op between codewords; raises on block leakage."""
    from .errors import SubspaceLeakError

    indices = code.dense_indices
    pos = {label: k for k, label in enumerate(indices)}
    mat = np.zeros((code.dim, code.dim), dtype=complex)
    leaks = []
    for col, label in enumerate(indices):
        for out_label, amp in op.apply_basis_state(label).items():
            row = pos.get(out_label)
            if row is None:
                leaks.append((label, out_label))
            else:
                mat[row, col] += amp.to_complex()
    if leaks:
        raise SubspaceLeakError("operator leaks out of the code", leaks=leaks)
    return mat


def physical_generator(kind: str, pair, n_modes: int) -> OperatorSum:
    """The two-mode Hermitian operator whose projection is the encoded gate."""
    i, j = pair
    x_like, _, z_like = bilinear_su2((i, j), n_modes, family="hopping")
    if kind == "x":
        return x_like
    if kind == "z":
        return -z_like  # diagonal entry q_j - q_i on basis states
    raise ValueError(f"unknown generator kind {kind!r}")


def encoded_generator(code: CodeSubspace, kind: str, pair) -> EncodedGate:
    """Projected hopping generator on a mode pair.

    kind "x" swaps the occupations of the pair (zero on codewords where
    they agree); kind "z" is diag(q_j - q_i).  Accepts "x"/"z" or the
    longer "Tx"/"Tz" spellings.
    """
    kind = kind.lower().lstrip("t")
    i, j = pair
    if not 0 <= i < j < code.n_modes:
        raise ValueError(f"invalid pair {pair!r} for {code.n_modes} modes")
    op = physical_generator(kind, (i, j), code.n_modes)
    return EncodedGate(
        name=f"T{kind}({i},{j})", support=(i, j),
        action=_project(code, op))


@dataclass(frozen=True, eq=False)
class EncodedCphase(EncodedGate):
    """Inter-block ZZ diagonal, its two factors, and the induced gate."""

    left_signs: tuple = ()
    right_signs: tuple = ()
    zz_action: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        if self.zz_action is not None:
            object.__setattr__(self, "zz_action",
                               np.asarray(self.zz_action, complex))


def encoded_cphase(code_a: CodeSubspace, code_b: CodeSubspace) -> EncodedCphase:
    """ZZ coupling between the last mode of code_a and the first of code_b.

    The coupling is diagonal on codeword pairs with sign
    (1 - 2 q_last(a)) * (1 - 2 q_first(b)), so it factorizes exactly into a
    tensor product of per-block sign vectors.  The reported gate is the
    quarter-turn it generates, normalized so the first basis state is fixed;
    its entries are +-1.
    """
    left = tuple(1 - 2 * (m >> (code_a.n_modes - 1) & 1)
                 for m in code_a.codewords)
    right = tuple(1 - 2 * (m & 1) for m in code_b.codewords)
    diag = np.array([l * r for l in left for r in right], dtype=float)
    zz = np.diag(diag).astype(complex)
    gate = np.diag(diag * diag[0]).astype(complex)
    return EncodedCphase(
        name="CPHASE", support=(code_a.n_modes - 1, code_a.n_modes),
        action=gate, left_signs=left, right_signs=right, zz_action=zz)


# -- full subspace algebra -------------------------------------------------

@dataclass(frozen=True)
class SynthesisResult:
    """Closure of the projected pair generators on a code."""

    basis: "LieBasis"
    success: bool
    counting: dict


def synthesize_su_d(code: CodeSubspace, d_limit: int = 20,
                    pairs: str = "all") -> SynthesisResult:
    """Close projected {Tx(i,j), Tz(i,j)} on the code; full su(d) is success.

    pairs "all" uses every mode pair i < j, the inventory the counting
    argument assumes: each pair swaps C(N-2, n-1) codeword pairs, and the
    total over all C(N,2) pairs dominates the codeword count whenever
    n(N-n)/2 > 1.  pairs "nearest" restricts to (i, i+1) links.  The
    nearest-neighbor chain cannot reach su(d) when C(N-2, n-1) > 1: those
    generators match their string-transformed quadratic images, so their
    closure stays inside the N^2-dimensional bilinear algebra no matter
    how it is projected, and swap conjugation cannot leave a Lie closure.
    A non-adjacent hard-core hop differs from its quadratic image by the
    occupations in between, which is what breaks the bound.
    """
    from .lie import GeneratorSet, close_on_subspace

    n_big, n_exc = code.n_modes, code.excitations
    if not 0 < n_exc < n_big:
        raise ValueError("synthesis needs 0 < excitations < n_modes")
    if pairs not in ("all", "nearest"):
        raise ValueError(f"unknown pair range {pairs!r}")
    d = code.dim
    if d > d_limit:
        raise ValueError(f"code dimension {d} exceeds the limit {d_limit}")
    if pairs == "all":
        links = [(i, j) for i in range(n_big) for j in range(i + 1, n_big)]
    else:
        links = [(i, i + 1) for i in range(n_big - 1)]
    gens = []
    for link in links:
        gens.append(physical_generator("x", link, n_big))
        gens.append(physical_generator("z", link, n_big))
    basis = close_on_subspace(
        GeneratorSet(n_big, gens,
                     label=f"{pairs} pairs on C({n_big},{n_exc})"),
        code)
    pairs_per_link = math.comb(n_big - 2, n_exc - 1)
    links = math.comb(n_big, 2)
    counting = {
        "pairs_per_link": pairs_per_link,
        "links": links,
        "pair_budget": pairs_per_link * links,
        "dim": d,
        "budget_covers_dim": pairs_per_link * links >= d,
        "half_n_times_rest": n_exc * (n_big - n_exc) / 2,
        "interior_condition": n_exc * (n_big - n_exc) / 2 > 1,
    }
    return SynthesisResult(
        basis=basis,
        success=basis.dimension_traceless == d * d - 1,
        counting=counting)
