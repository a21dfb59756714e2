"""Minimality tests and the constructive local-minimization procedure.

A cochain is minimal if no coboundary shift lowers its norm, and locally
minimal if each localization into a link is minimal there. Local
minimization repeatedly applies the canonically-first strictly improving
link-coboundary move; the integer numerator of the norm strictly decreases,
which bounds the number of steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .caps import check_enumeration
from .cohomology import coboundary, space_basis
from .core import Cochain, Complex, Face
from .errors import BadDimension
from .f2 import iter_bits, iter_span_gray


def is_minimal(X: Complex, A: Cochain, cap: int | None = None) -> bool:
    """True iff no element of B^k strictly lowers the norm of A."""
    X.check_bound(A)
    if A.k == -1:
        return True  # B^(-1) is trivial
    basis = space_basis(X, A.k, "coboundaries")
    check_enumeration(1 << basis.dim, cap, f"coboundary space at dimension {A.k}")
    tops = X.top_counts(A.k)
    base = A.top_sum()
    for s in iter_span_gray(basis.row_bits()):
        if s and sum(tops[i] for i in iter_bits(A.bits ^ s)) < base:
            return False
    return True


def _candidate_sites(X: Complex, A: Cochain) -> list[Face]:
    """Nonempty faces whose localization of A can be nonempty, by dimension."""
    from itertools import combinations

    seen: set[Face] = set()
    for f in A.faces():
        for size in range(1, A.k + 1):
            for sub in combinations(f, size):
                seen.add(sub)
    return sorted(seen, key=lambda f: (len(f), f))


def is_locally_minimal(X: Complex, A: Cochain, cap: int | None = None) -> bool:
    """True iff every localization of A is minimal in its link.

    Faces not contained in any member of A localize to the empty cochain,
    which is always minimal, so only subfaces of members need checking.
    """
    X.check_bound(A)
    for sigma in _candidate_sites(X, A):
        loc = X.localize(sigma, A)
        if loc and not is_minimal(X.link(sigma), loc, cap):
            return False
    return True


@dataclass(frozen=True)
class MinimizeTrace:
    initial: Cochain
    final: Cochain
    gamma: Cochain  # final = initial + coboundary(gamma)
    steps: tuple[tuple[Face, Cochain], ...]  # (site face, link corrector)


def _first_improving_move(
    X: Complex, A: Cochain, cap: int | None
) -> tuple[Face, Cochain] | None:
    """First (site, corrector) strictly lowering a localized norm.

    Sites are scanned by dimension ascending then canonical face order;
    candidate link coboundaries in echelon-combination counting order.
    """
    for size in range(1, A.k + 1):
        for sigma in X.faces(size - 1):
            loc = X.localize(sigma, A)
            if not loc:
                continue
            link = X.link(sigma)
            basis = space_basis(link, loc.k, "coboundaries")
            check_enumeration(
                1 << basis.dim, cap, f"link coboundary space at {X.tokens_of(sigma)}"
            )
            rows = basis.row_bits()
            tops = link.top_counts(loc.k)
            base = loc.top_sum()
            for m in range(1, 1 << basis.dim):
                b = 0
                for i in iter_bits(m):
                    b ^= rows[i]
                if sum(tops[i] for i in iter_bits(loc.bits ^ b)) < base:
                    c_bits = 0
                    for i in iter_bits(m):
                        c_bits ^= basis.preimages[i].bits
                    return sigma, Cochain(link, loc.k - 1, c_bits)
    return None


def locally_minimize(X: Complex, A: Cochain, cap: int | None = None) -> MinimizeTrace:
    """Drive A to a locally minimal cochain by coboundary corrections.

    The returned trace satisfies final = initial + coboundary(gamma),
    ||final|| <= ||initial||, and the step count is bounded by the integer
    norm numerator of the initial cochain.
    """
    X.check_bound(A)
    if A.k < 0:
        raise BadDimension("local minimization needs a cochain of dimension >= 0")
    initial = A
    gamma = X.empty_cochain(A.k - 1)
    steps: list[tuple[Face, Cochain]] = []
    budget = initial.top_sum()
    while True:
        move = _first_improving_move(X, A, cap)
        if move is None:
            break
        sigma, corrector = move
        lifted = X.lift(sigma, corrector)
        new = A + coboundary(lifted)
        if not new.top_sum() < A.top_sum():
            raise AssertionError("improving move failed to lower the norm")
        A = new
        gamma = gamma + lifted
        steps.append((sigma, corrector))
        if len(steps) > budget:
            raise AssertionError("step count exceeded the integer decrease bound")
    return MinimizeTrace(initial, A, gamma, tuple(steps))
