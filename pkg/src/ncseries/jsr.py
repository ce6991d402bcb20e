"""Joint spectral radius: certified bounds and stable-region membership.

All norms are the operator norm induced by the maximum norm on C^k (largest
absolute row sum).  The joint spectral radius does not depend on that choice,
but the certified upper bounds do.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ExpansionTooLarge, PreconditionError
from .matrix_tuple import MatrixTuple, opnorm, opnorms

DEFAULT_TOL = 1e-6
DEFAULT_MAX_DEPTH = 20
DEFAULT_MAX_FRONTIER = 10**6
# exhaustive enumeration of all words of one length stops here
EXHAUSTIVE_LIMIT = 2**21
# products enumerated exhaustively to seed the lower bound
SEED_LIMIT = 2**12


def _as_tuple(M) -> MatrixTuple:
    return M if isinstance(M, MatrixTuple) else MatrixTuple(M)


def _spectral_radii(stack: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.eigvals(stack)).max(axis=-1)


def _words_stack(mats: np.ndarray, t: int) -> np.ndarray:
    """All n**t products of length t, words in lexicographic order."""
    n = mats.shape[0]
    if n**t > EXHAUSTIVE_LIMIT:
        raise ExpansionTooLarge(f"{n}**{t} products exceed the enumeration limit {EXHAUSTIVE_LIMIT}")
    stack = mats
    for _ in range(t - 1):
        stack = (stack[:, None] @ mats[None, :]).reshape(-1, *mats.shape[1:])
    return stack


def norm_upper(M, t: int) -> float:
    """max over words of length t of ||M^I||^(1/t); an upper bound for every t."""
    if t < 1:
        raise PreconditionError("t must be at least 1")
    M = _as_tuple(M)
    return float(opnorms(_words_stack(M.matrices, t)).max() ** (1.0 / t))


def spectral_lower(M, t: int) -> float:
    """max over words with 1 <= |I| <= t of rho(M^I)^(1/|I|); a lower bound."""
    if t < 1:
        raise PreconditionError("t must be at least 1")
    M = _as_tuple(M)
    best = 0.0
    stack = M.matrices
    for length in range(1, t + 1):
        if length > 1:
            if stack.shape[0] * M.n > EXHAUSTIVE_LIMIT:
                raise ExpansionTooLarge(f"{M.n}**{length} products exceed the enumeration limit")
            stack = (stack[:, None] @ M.matrices[None, :]).reshape(-1, M.k, M.k)
        best = max(best, float(_spectral_radii(stack).max() ** (1.0 / length)))
    return best


@dataclass(frozen=True)
class JsrBounds:
    lower: float
    upper: float
    depth: int
    status: str  # "converged" or "depth_limited"
    word: tuple = ()  # a product whose spectral radius root realizes ``lower``

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def format(self, precision: int = 6) -> str:
        return f"{self.lower:.{precision}f} {self.upper:.{precision}f} {self.status}"


def _seed_depth(n: int, max_depth: int) -> int:
    t, total = 0, 0
    while t < max_depth and total + n ** (t + 1) <= SEED_LIMIT:
        t += 1
        total += n**t
    return max(t, 1)


def _seed_lower(mats: np.ndarray, depth: int):
    n, k = mats.shape[0], mats.shape[1]
    best, best_word = 0.0, ()
    stack = mats
    for length in range(1, depth + 1):
        if length > 1:
            stack = (stack[:, None] @ mats[None, :]).reshape(-1, k, k)
        roots = _spectral_radii(stack) ** (1.0 / length)
        i = int(np.argmax(roots))
        if roots[i] > best:
            best = float(roots[i])
            digits = np.unravel_index(i, (n,) * length) if length > 1 else (i,)
            best_word = tuple(int(d) + 1 for d in digits)
    return best, best_word


def jsr_estimate(
    M,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_frontier: int = DEFAULT_MAX_FRONTIER,
) -> JsrBounds:
    """Branch and bound over the product tree.

    The tuple is first scaled so its largest generator norm is 1, which makes
    both bounds exactly homogeneous; ``tol`` is measured on that scale.  A node
    W whose root ||M^W||^(1/|W|) is at most lower + tol is not expanded: every
    infinite product splits into blocks that are either such nodes or
    unexpanded leaves, so the joint spectral radius is at most the largest
    block root.  Leaves are refined by a min/max pass over the explored tree.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    if max_depth < 1:
        raise PreconditionError("max_depth must be at least 1")
    M = _as_tuple(M)
    scale = M.max_norm()
    if scale == 0.0:
        return JsrBounds(0.0, 0.0, 1, "converged")
    mats = M.matrices / scale
    n = M.n

    if n == 1:
        # one matrix: the joint spectral radius is its spectral radius
        rho = float(_spectral_radii(mats[:1])[0])
        return JsrBounds(rho * scale, (rho + tol) * scale, 1, "converged", (1,))

    lower, lower_word = _seed_lower(mats, _seed_depth(n, max_depth))

    # flat tree storage: node i has product prods[i], root roots[i], parent parents[i]
    prods, roots, parents, lengths, letters = [], [], [], [], []
    expanded = []
    heap = []
    counter = itertools.count()

    def add(prod, parent, length, letter):
        idx = len(prods)
        prods.append(prod)
        root = opnorm(prod) ** (1.0 / length)
        roots.append(root)
        parents.append(parent)
        lengths.append(length)
        letters.append(letter)
        expanded.append(False)
        heapq.heappush(heap, (-root, next(counter), idx))

    for a in range(n):
        add(mats[a], -1, 1, a + 1)

    deepest = 1
    capped = False
    while heap:
        neg_root, _, idx = heap[0]
        if -neg_root <= lower + tol:
            break  # everything left is prunable
        if lengths[idx] >= max_depth:
            heapq.heappop(heap)
            continue  # a leaf at the depth limit
        if len(heap) + n > max_frontier:
            capped = True
            break
        heapq.heappop(heap)
        expanded[idx] = True
        prods_children = prods[idx][None] @ mats
        length = lengths[idx] + 1
        deepest = max(deepest, length)
        radii = _spectral_radii(prods_children) ** (1.0 / length)
        for a in range(n):
            if radii[a] > lower:
                lower = float(radii[a])
                lower_word = _word_of(idx, parents, letters) + (a + 1,)
            add(prods_children[a], idx, length, a + 1)
        prods[idx] = None  # interior products are no longer needed

    # min/max refinement: a subtree may be cut at any node along each path
    child_max = [-np.inf] * len(prods)
    top = -np.inf
    for idx in range(len(prods) - 1, -1, -1):
        value = min(roots[idx], child_max[idx]) if expanded[idx] else roots[idx]
        p = parents[idx]
        if p < 0:
            top = max(top, value)
        else:
            child_max[p] = max(child_max[p], value)
    converged = top <= lower + tol and not capped
    upper = lower + tol if converged else max(lower + tol, top)
    return JsrBounds(lower * scale, upper * scale, deepest, "converged" if converged else "depth_limited", lower_word)


def _word_of(idx, parents, letters) -> tuple:
    out = []
    while idx >= 0:
        out.append(letters[idx])
        idx = parents[idx]
    return tuple(reversed(out))


class Region(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class StableVerdict:
    region: Region
    bounds: JsrBounds
    radius: float

    def __bool__(self) -> bool:
        return self.region is Region.INSIDE


def in_stable_region(M, P=None, r: float = 1.0, tol: float = DEFAULT_TOL, max_depth: int = DEFAULT_MAX_DEPTH) -> StableVerdict:
    """Three-valued test of |M - P| < r; UNKNOWN when the bounds straddle r."""
    if not r > 0:
        raise PreconditionError("radius must be positive")
    M = _as_tuple(M)
    if P is not None:
        P = _as_tuple(P)
        if P.matrices.shape != M.matrices.shape:
            raise PreconditionError(f"center shape {P.matrices.shape} differs from {M.matrices.shape}")
        M = M - P
    bounds = jsr_estimate(M, tol, max_depth)
    if bounds.upper < r:
        region = Region.INSIDE
    elif bounds.lower >= r:
        region = Region.OUTSIDE
    else:
        region = Region.UNKNOWN
    return StableVerdict(region, bounds, r)
