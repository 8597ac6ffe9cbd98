"""Exact Lie closure of Hermitian generator sets, and algebra classification.

Hermitian Pauli sums with rational coefficients are vectors over the
Hermitian reference strings with rational coordinates; the bracket
(A, B) -> i[A, B] keeps them real.  Closure therefore runs in exact integer
arithmetic: every operator is scaled to a primitive integer vector, new
commutators are reduced against the current basis by fraction-free
elimination on the smallest Pauli key, and independent remainders are
appended in discovery order.  Dimensions are exact ranks, not numerical
estimates.

A separate floating-point path closes generators after projection onto a
code subspace, where the projected matrices leave the rational span.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli import OperatorSum, Scalar, commutator, realize
from .parafermion import number_operator, parity_operator


@dataclass
class GeneratorSet:
    """Labelled list of Hermitian generators on a common mode count."""

    n_modes: int
    generators: list
    label: str = ""

    def __post_init__(self):
        if not self.generators:
            raise ValueError("empty generator set")
        for g in self.generators:
            if g.n_modes != self.n_modes:
                raise ValueError("generator mode count mismatch")
            if g.is_zero:
                raise ValueError("zero generator")
            if not g.is_hermitian:
                raise ValueError("generators must be Hermitian")


@dataclass
class LieBasis:
    """Result of a closure run.

    basis holds the reduced elements in discovery order: OperatorSum for the
    exact path, d x d ndarrays for the subspace path.  provenance[k] is None
    for a seed generator and (i, j) when element k came from i[basis_i,
    basis_j].  dimension counts all independent elements; the traceless
    count excludes an identity component when one lies in the span.
    """

    n_modes: int
    basis: tuple
    dimension: int
    dimension_traceless: int
    closed: bool
    rounds: int
    provenance: tuple
    subspace_dim: int | None = None

    @property
    def contains_identity(self) -> bool:
        return self.dimension_traceless < self.dimension

    @property
    def provenance_depth(self) -> int:
        depth = []
        for src in self.provenance:
            if src is None:
                depth.append(0)
            else:
                i, j = src
                depth.append(max(depth[i], depth[j]) + 1)
        return max(depth, default=0)


# -- integer vector layer --------------------------------------------------

def _to_vec(op: OperatorSum) -> dict:
    """Primitive integer coordinate vector of a rational Hermitian sum."""
    n = op.n_modes
    coords = {}
    denom = 1
    for (x, z), c in op.items():
        if not c.is_rational:
            raise ValueError(
                "exact closure requires rational coefficients; "
                "irrational coefficient encountered")
        coords[(x << n) | z] = c.re
        denom = denom * c.re.denominator // math.gcd(denom, c.re.denominator)
    vec = {k: int(v * denom) for k, v in coords.items()}
    return _normalize(vec)


def _normalize(vec: dict) -> dict:
    if not vec:
        return vec
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
    lead = vec[min(vec)]
    if lead < 0:
        g = -g
    return {k: v // g for k, v in vec.items()}


def _from_vec(vec: dict, n_modes: int) -> OperatorSum:
    mask = (1 << n_modes) - 1
    return OperatorSum(n_modes, {
        (k >> n_modes, k & mask): Scalar(Fraction(v))
        for k, v in vec.items()})


def _bracket(va: dict, vb: dict, n_modes: int) -> dict:
    """i[A, B] of two integer vectors, unnormalized."""
    mask = (1 << n_modes) - 1
    out = {}
    for ka, ca in va.items():
        xa, za = ka >> n_modes, ka & mask
        for kb, cb in vb.items():
            xb, zb = kb >> n_modes, kb & mask
            if ((za & xb).bit_count() + (xa & zb).bit_count()) % 2 == 0:
                continue
            e = ((xa & za).bit_count() + (xb & zb).bit_count()
                 - ((xa ^ xb) & (za ^ zb)).bit_count()
                 + 2 * (za & xb).bit_count() + 1) % 4
            s = 2 * ca * cb if e == 0 else -2 * ca * cb
            k3 = ((xa ^ xb) << n_modes) | (za ^ zb)
            c = out.get(k3, 0) + s
            if c:
                out[k3] = c
            else:
                out.pop(k3, None)
    return out


def _reduce(vec: dict, pivots: dict) -> dict:
    """Eliminate vec against the pivot table; return the normalized rest."""
    while vec:
        k = min(vec)
        row = pivots.get(k)
        if row is None:
            return _normalize(vec)
        a, b = vec[k], row[k]
        g = math.gcd(a, b)
        ma, mb = b // g, a // g
        new = {}
        for key, v in vec.items():
            new[key] = v * ma
        for key, v in row.items():
            c = new.get(key, 0) - v * mb
            if c:
                new[key] = c
            else:
                new.pop(key, None)
        vec = _normalize(new)
    return vec


def close(generator_set: GeneratorSet, max_dim: int | None = None) -> LieBasis:
    """Breadth-first exact Lie closure of a Hermitian generator set.

    Seeds with the independent generators, then brackets every earlier
    element with each member of the newest batch, in index order, reducing
    exactly and appending independent results.  Stops when a full round
    adds nothing, when the span saturates the whole operator space, or at
    max_dim (reported via closed=False, not an error).
    """
    n = generator_set.n_modes
    full_dim = 4 ** n
    cap = full_dim if max_dim is None else min(max_dim, full_dim)
    pivots: dict = {}
    vectors: list = []
    provenance: list = []

    def insert(vec, src):
        rest = _reduce(vec, pivots)
        if not rest:
            return False
        pivots[min(rest)] = rest
        vectors.append(rest)
        provenance.append(src)
        return True

    for g in generator_set.generators:
        insert(_to_vec(g), None)

    def saturated():
        if len(vectors) == full_dim:
            return True
        return (len(vectors) == full_dim - 1
                and 0 not in pivots
                and all(0 not in v for v in vectors))

    rounds = 0
    closed = True
    batch_start = 0
    while batch_start < len(vectors):
        if saturated():
            break
        if len(vectors) >= cap and cap < full_dim:
            closed = False
            break
        rounds += 1
        batch_end = len(vectors)
        stop = False
        for j in range(batch_start, batch_end):
            for i in range(j):
                out = _bracket(vectors[i], vectors[j], n)
                if out and insert(out, (i, j)):
                    if saturated():
                        stop = True
                        break
                    if len(vectors) >= cap and cap < full_dim:
                        closed = False
                        stop = True
                        break
            if stop:
                break
        if stop:
            break
        batch_start = batch_end

    has_identity = not _reduce({0: 1}, pivots)
    dim = len(vectors)
    return LieBasis(
        n_modes=n,
        basis=tuple(_from_vec(v, n) for v in vectors),
        dimension=dim,
        dimension_traceless=dim - 1 if has_identity else dim,
        closed=closed,
        rounds=rounds,
        provenance=tuple(provenance))


# -- classification --------------------------------------------------------

CANDIDATE_ALGEBRAS = ("su(2^N)", "u(2^N)", "so(2N+1)", "so(2N)",
                      "u(N)", "su(N)", "number-conserving", "parity-conserving")


def expected_dimension(name: str, n_modes: int) -> int:
    n = n_modes
    table = {
        "su(2^N)": 4 ** n - 1,
        "u(2^N)": 4 ** n,
        "so(2N+1)": n * (2 * n + 1),
        "so(2N)": n * (2 * n - 1),
        "u(N)": n * n,
        "su(N)": n * n - 1,
        "number-conserving": math.comb(2 * n, n),
        "parity-conserving": 2 ** (2 * n - 1),
    }
    if name not in table:
        raise ValueError(f"unknown algebra name {name!r}")
    return table[name]


@dataclass(frozen=True)
class CandidateMatch:
    name: str
    expected_dim: int
    hit: bool


@dataclass(frozen=True)
class AlgebraVerdict:
    dimension: int
    dimension_traceless: int
    matches: tuple
    conserves_number: bool
    conserves_parity: bool
    universal_full_space: bool


# su/so counts are traceless; u and the maximal subalgebras include identity
_TRACELESS_CANDIDATES = {"su(2^N)", "so(2N+1)", "so(2N)", "su(N)"}
_NUMBER_CANDIDATES = {"u(N)", "su(N)", "number-conserving"}
_PARITY_CANDIDATES = {"so(2N+1)", "so(2N)", "parity-conserving"}


def classify_algebra(basis: LieBasis) -> AlgebraVerdict:
    """Compare a closed basis against the named algebra dimensions."""
    if not basis.closed:
        raise ValueError("classify_algebra requires a closed basis")
    if basis.subspace_dim is not None:
        raise ValueError("classification applies to full-space closures")
    n = basis.n_modes
    nhat = number_operator(n)
    phat = parity_operator(n)
    conserves_number = all(commutator(b, nhat).is_zero for b in basis.basis)
    conserves_parity = conserves_number or all(
        commutator(b, phat).is_zero for b in basis.basis)
    matches = []
    for name in CANDIDATE_ALGEBRAS:
        want = expected_dimension(name, n)
        got = (basis.dimension_traceless if name in _TRACELESS_CANDIDATES
               else basis.dimension)
        hit = got == want
        if name in _NUMBER_CANDIDATES:
            hit = hit and conserves_number
        if name in _PARITY_CANDIDATES:
            hit = hit and conserves_parity
        matches.append(CandidateMatch(name, want, hit))
    return AlgebraVerdict(
        dimension=basis.dimension,
        dimension_traceless=basis.dimension_traceless,
        matches=tuple(matches),
        conserves_number=conserves_number,
        conserves_parity=conserves_parity,
        universal_full_space=basis.dimension_traceless >= 4 ** n - 1)


# -- dense cross-checks ----------------------------------------------------

def dense_span_rank(ops, tol: float = 1e-9) -> int:
    """Rank of realized operators' vectorizations; closure cross-check."""
    mats = [realize(op).reshape(-1) for op in ops]
    if not mats:
        return 0
    stack = np.array(mats)
    svals = np.linalg.svd(stack, compute_uv=False)
    return int(np.sum(svals > tol * max(1.0, svals[0])))


# -- projected (subspace) closure ------------------------------------------

def _orthonormal_insert(rows: list, mat: np.ndarray, tol: float) -> bool:
    """Gram-Schmidt a flattened matrix into rows; True if rank grew."""
    v = mat.reshape(-1).astype(complex)
    norm0 = np.linalg.norm(v)
    if norm0 <= tol:
        return False
    for _ in range(2):  # reorthogonalize once for numerical safety
        for r in rows:
            v = v - np.vdot(r, v) * r
    norm = np.linalg.norm(v)
    if norm <= tol * max(1.0, norm0):
        return False
    rows.append(v / norm)
    return True


def close_on_subspace(generator_set: GeneratorSet, subspace,
                      max_dim: int | None = None,
                      tol: float = 1e-9) -> LieBasis:
    """Lie closure of the generators' actions on a code subspace.

    Each generator must preserve the subspace exactly (checked symbolically
    on the codeword basis states; leaks raise).  The projected d x d
    matrices then close under i[.,.] with floating-point rank decisions at
    the given tolerance.  The identity-on-subspace component is tracked so
    both dimensions are reported.
    """
    from .errors import SubspaceLeakError

    n = generator_set.n_modes
    if subspace.n_modes != n:
        raise ValueError("subspace mode count mismatch")
    indices = subspace.dense_indices
    index_pos = {label: k for k, label in enumerate(indices)}
    d = len(indices)

    projected = []
    for g_num, g in enumerate(generator_set.generators):
        mat = np.zeros((d, d), dtype=complex)
        leaks = []
        for col, label in enumerate(indices):
            for out_label, amp in g.apply_basis_state(label).items():
                row = index_pos.get(out_label)
                if row is None:
                    leaks.append((label, out_label))
                else:
                    mat[row, col] += amp.to_complex()
        if leaks:
            raise SubspaceLeakError(
                f"generator {g_num} maps code states outside the subspace",
                leaks=leaks)
        projected.append(mat)

    cap = d * d if max_dim is None else min(max_dim, d * d)
    rows: list = []
    mats: list = []
    provenance: list = []

    def insert(mat, src):
        if _orthonormal_insert(rows, mat, tol):
            mats.append(mat)
            provenance.append(src)
            return True
        return False

    for m in projected:
        insert(m, None)

    rounds = 0
    closed = True
    batch_start = 0
    while batch_start < len(mats):
        if len(mats) >= cap:
            closed = len(mats) == d * d
            break
        rounds += 1
        batch_end = len(mats)
        stop = False
        for j in range(batch_start, batch_end):
            for i in range(j):
                br = 1j * (mats[i] @ mats[j] - mats[j] @ mats[i])
                if insert(br, (i, j)) and len(mats) >= cap:
                    closed = len(mats) == d * d
                    stop = True
                    break
            if stop:
                break
        if stop:
            break
        batch_start = batch_end

    ident_rows = [r.copy() for r in rows]
    has_identity = not _orthonormal_insert(
        ident_rows, np.eye(d, dtype=complex), tol)
    dim = len(mats)
    return LieBasis(
        n_modes=n,
        basis=tuple(mats),
        dimension=dim,
        dimension_traceless=dim - 1 if has_identity else dim,
        closed=closed,
        rounds=rounds,
        provenance=tuple(provenance),
        subspace_dim=d)
