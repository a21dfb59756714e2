"""Shared test utilities: random instances and independent oracles.

The oracles here recompute values by definition-level enumeration with
their own tiny GF(2) routines, deliberately sharing no search logic with
the library paths they check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from hdx.core import Cochain, Complex, build_complex

# -- random instances --------------------------------------------------------


def random_pure_complex(
    rng: random.Random,
    dims=(1, 2, 3),
    min_n: int = 4,
    max_n: int = 10,
    max_tops: int = 8,
) -> Complex:
    d = rng.choice(list(dims))
    n = rng.randint(max(d + 2, min_n), max_n)
    pool = list(combinations(range(n), d + 1))
    tops = rng.sample(pool, rng.randint(1, min(max_tops, len(pool))))
    return build_complex([tuple(str(v) for v in f) for f in tops])


def random_cochain(rng: random.Random, X: Complex, k: int) -> Cochain:
    return X.cochain_from_bits(k, rng.getrandbits(X.n_faces(k)))


# -- independent GF(2) helpers -------------------------------------------------


def gf2_echelon_rows(vectors: list[int]) -> list[int]:
    """Naive row echelon (not fully reduced), lowest set bit as pivot."""
    rows: list[int] = []
    for v in vectors:
        for r in rows:
            low = r & -r
            if v & low:
                v ^= r
        if v:
            rows.append(v)
            rows.sort(key=lambda x: x & -x)
    return rows


def gf2_canonical(v: int, rows: list[int]) -> int:
    """Coset representative with zero pivot coordinates.

    rows must be echelon with ascending pivots; one ascending pass suffices
    because each reduction only touches bits at or above its pivot."""
    for r in rows:
        if v & (r & -r):
            v ^= r
    return v


# -- definition-level oracles ----------------------------------------------------


def oracle_coboundary_bits(X: Complex, k: int, bits: int) -> int:
    """Parity count over codimension-one subfaces, straight from face tuples."""
    members = [set(X.faces(k)[i]) for i in range(X.n_faces(k)) if (bits >> i) & 1]
    out = 0
    for j, tau in enumerate(X.faces(k + 1)):
        taus = set(tau)
        count = sum(1 for m in members if m < taus)
        if count % 2:
            out |= 1 << j
    return out


def oracle_subspace_rows(X: Complex, k: int, kind: str) -> list[int]:
    """Echelon rows of B^k or Z^k built by raw enumeration of images/kernel."""
    if kind == "coboundaries":
        images = [
            oracle_coboundary_bits(X, k - 1, 1 << j) for j in range(X.n_faces(k - 1))
        ]
        return gf2_echelon_rows(images)
    assert kind == "cocycles"
    n = X.n_faces(k)
    if k == X.d:
        return [1 << i for i in range(n)]
    singles = [oracle_coboundary_bits(X, k, 1 << i) for i in range(n)]
    rows: list[int] = []
    for bits in range(1, 1 << n):
        img = 0
        for i in range(n):
            if (bits >> i) & 1:
                img ^= singles[i]
        if img == 0:
            rows = gf2_echelon_rows(rows + [bits])
    return rows


def _norm_table(tops, n: int) -> list[int]:
    """Integer norm numerator for every bitmask, by one-bit recurrence."""
    table = [0] * (1 << n)
    for bits in range(1, 1 << n):
        low = (bits & -bits).bit_length() - 1
        table[bits] = table[bits & (bits - 1)] + tops[low]
    return table


def oracle_flat_expansion(X: Complex, k: int, mode: str):
    """Flat scan of every k-cochain; returns the expansion value (or inf).

    Coboundaries of singletons come from direct subset counting; a flat
    pass groups cochains into cosets by an independent echelon reduction.
    """
    n = X.n_faces(k)
    kind = "coboundaries" if mode == "coboundary" else "cocycles"
    rows = oracle_subspace_rows(X, k, kind)
    singles = [oracle_coboundary_bits(X, k, 1 << i) for i in range(n)]
    norm_k = _norm_table(X.top_counts(k), n)
    norm_up = _norm_table(X.top_counts(k + 1), X.n_faces(k + 1))
    den_k = X.norm_den(k)
    den_up = X.norm_den(k + 1)
    coset_min: dict[int, int] = {}
    for bits in range(1 << n):
        key = gf2_canonical(bits, rows)
        t = norm_k[bits]
        if key not in coset_min or t < coset_min[key]:
            coset_min[key] = t
    best = None
    for bits in range(1 << n):
        key = gf2_canonical(bits, rows)
        if key == 0:
            continue
        db = 0
        for i in range(n):
            if (bits >> i) & 1:
                db ^= singles[i]
        ratio = Fraction(norm_up[db] * den_k, den_up * coset_min[key])
        if best is None or ratio < best:
            best = ratio
    return float("inf") if best is None else best


def oracle_flat_cosystole(X: Complex, k: int):
    n = X.n_faces(k)
    brows = oracle_subspace_rows(X, k, "coboundaries")
    singles = (
        [oracle_coboundary_bits(X, k, 1 << i) for i in range(n)] if k < X.d else None
    )
    norm_k = _norm_table(X.top_counts(k), n)
    best = None
    for bits in range(1, 1 << n):
        if singles is not None:
            img = 0
            for i in range(n):
                if (bits >> i) & 1:
                    img ^= singles[i]
            if img != 0:
                continue
        if gf2_canonical(bits, brows) == 0:
            continue
        t = norm_k[bits]
        if best is None or t < best:
            best = t
    return float("inf") if best is None else Fraction(best, X.norm_den(k))


def oracle_is_minimal(X: Complex, A: Cochain) -> bool:
    """Compare against every coboundary shift, enumerating correctors directly."""
    if A.k == -1:
        return True
    base = A.norm()
    n_low = X.n_faces(A.k - 1)
    for gamma in range(1 << n_low):
        shifted = A.bits ^ oracle_coboundary_bits(X, A.k - 1, gamma)
        if X.cochain_from_bits(A.k, shifted).norm() < base:
            return False
    return True


def oracle_minimal_representative(X: Complex, A: Cochain) -> Cochain:
    """Minimum-norm element of A's coboundary coset, by direct enumeration."""
    best = (A.norm(), A.bits)
    n_low = X.n_faces(A.k - 1) if A.k >= 0 else 0
    for gamma in range(1 << n_low):
        bits = A.bits ^ oracle_coboundary_bits(X, A.k - 1, gamma)
        cand = (X.cochain_from_bits(A.k, bits).norm(), bits)
        if cand < best:
            best = cand
    return X.cochain_from_bits(A.k, best[1])


# -- fat-machinery oracles ----------------------------------------------------------


def oracle_ladder(X: Complex, level_sets: dict[int, set], sigma, k: int) -> set:
    """Reachable members of the top level via fat chains; memoized recursion on
    face tuples, no bitsets."""
    memo: dict = {}

    def reach(face) -> set:
        if face in memo:
            return memo[face]
        lvl = len(face) - 1
        if face not in level_sets[lvl]:
            memo[face] = set()
        elif lvl == k:
            memo[face] = {face}
        else:
            out = set()
            for tau in level_sets[lvl + 1]:
                if set(face) < set(tau):
                    out |= reach(tau)
            memo[face] = out
        return memo[face]

    return reach(tuple(sigma))


def oracle_degenerate(X: Complex, level_sets: dict[int, set], k: int) -> set:
    """Degenerate (k+1)-faces by scanning subset pairs of each face."""
    out = set()
    for p in X.faces(k + 1):
        found = False
        for j in range(0, k + 1):
            for a, b in combinations(combinations(sorted(p), j + 1), 2):
                inter = tuple(sorted(set(a) & set(b)))
                if len(inter) != j:
                    continue
                if (
                    a in level_sets[j]
                    and b in level_sets[j]
                    and inter not in level_sets[j - 1]
                ):
                    found = True
                    break
            if found:
                break
        if found:
            out.add(p)
    return out


def level_sets_of(profile) -> dict[int, set]:
    return {i: set(c.faces()) for i, c in profile.levels.items()}
