"""Pure simplicial complexes with exact weighted norms.

A complex is built from its maximal faces and is immutable afterwards.
Vertex identifiers are opaque strings at the boundary; internally they are
interned to dense integers in sorted-token order, so face enumeration is
canonical (dimension-major, then lexicographic) and reproducible.

The unique (-1)-face (the empty set) is materialized explicitly: it is a
face of every nonempty complex, carries weight 1, and makes the spaces of
(-1)-cochains and their coboundary map ordinary cases.

All weights and norms are exact `fractions.Fraction` values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .errors import (
    BadDimension,
    ComplexMismatch,
    EmptyInput,
    FaceNotInComplex,
    NotPure,
    UnknownVertex,
)
from .f2 import iter_bits

Face = tuple[int, ...]  # sorted internal vertex ids; () is the (-1)-face


class Complex:
    """A finite pure d-dimensional simplicial complex."""

    def __init__(self, d: int, vertex_names: tuple[str, ...], top_faces: tuple[Face, ...]):
        """Internal constructor; use :meth:`build` or a generator instead."""
        self.d = d
        self.vertex_names = vertex_names
        self._vid = {name: i for i, name in enumerate(vertex_names)}

        # downward closure with top-face incidence counts
        counts: dict[int, dict[Face, int]] = {k: {} for k in range(-1, d + 1)}
        for top in top_faces:
            for k in range(-1, d + 1):
                for sub in combinations(top, k + 1):
                    counts[k][sub] = counts[k].get(sub, 0) + 1

        n_top = len(top_faces)
        self._faces: dict[int, tuple[Face, ...]] = {}
        self._index: dict[int, dict[Face, int]] = {}
        self._tops: dict[int, tuple[int, ...]] = {}
        self._den: dict[int, int] = {}
        for k in range(-1, d + 1):
            faces_k = tuple(sorted(counts[k]))
            self._faces[k] = faces_k
            self._index[k] = {f: i for i, f in enumerate(faces_k)}
            self._tops[k] = tuple(counts[k][f] for f in faces_k)
            self._den[k] = comb(d + 1, k + 1) * n_top

        # up[k][i] = bitmask over X(k+1) of the cofaces of face i in X(k)
        self._up: dict[int, list[int]] = {k: [0] * len(self._faces[k]) for k in range(-1, d)}
        for k in range(0, d + 1):
            idx_down = self._index[k - 1]
            up_row = self._up[k - 1]
            for i, f in enumerate(self._faces[k]):
                bit = 1 << i
                for sub in combinations(f, k):
                    up_row[idx_down[sub]] |= bit

        self._links: dict[Face, Complex] = {}
        self._link_maps: dict[Face, dict[int, tuple[list[int], dict[int, int]]]] = {}
        self._skeletons: dict[int, Complex] = {}
        self._cache: dict = {}  # scratch memoization for other modules
        self._hash = hash((d, vertex_names, self._faces[d]))

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, maximal_faces: Iterable[Iterable[object]]) -> "Complex":
        """Downward closure of the given maximal faces.

        Faces that are subsets of other input faces are absorbed silently;
        after absorption all maximal faces must share one dimension.
        """
        sets = {frozenset(str(t) for t in f) for f in maximal_faces}
        sets = {s for s in sets if s}
        if not sets:
            raise EmptyInput("no nonempty maximal faces given")
        maximal = [s for s in sets if not any(s < t for t in sets)]
        sizes = {len(s) for s in maximal}
        if len(sizes) != 1:
            small = min(maximal, key=len)
            raise NotPure(
                f"maximal faces of mixed dimensions: {sorted(small)} has "
                f"{len(small)} vertices, expected {max(sizes)}"
            )
        d = sizes.pop() - 1
        names = tuple(sorted({t for s in maximal for t in s}))
        vid = {name: i for i, name in enumerate(names)}
        tops = tuple(sorted(tuple(sorted(vid[t] for t in s)) for s in maximal))
        return cls(d, names, tops)

    # -- basic accessors ----------------------------------------------------

    def faces(self, k: int) -> tuple[Face, ...]:
        self._check_dim(k)
        return self._faces[k]

    def n_faces(self, k: int) -> int:
        self._check_dim(k)
        return len(self._faces[k])

    @property
    def n_top(self) -> int:
        return len(self._faces[self.d])

    @property
    def total_face_count(self) -> int:
        """Number of faces including the empty face."""
        return sum(len(v) for v in self._faces.values())

    def _check_dim(self, k: int) -> None:
        if not -1 <= k <= self.d:
            raise BadDimension(f"dimension {k} outside -1..{self.d}")

    def face_index(self, face: Face) -> int:
        k = len(face) - 1
        self._check_dim(k)
        try:
            return self._index[k][face]
        except KeyError:
            raise FaceNotInComplex(f"{self.tokens_of(face)} is not a face") from None

    def has_face(self, face: Face) -> bool:
        k = len(face) - 1
        return -1 <= k <= self.d and face in self._index[k]

    def face_from_tokens(self, tokens: Iterable[object]) -> Face:
        ids = []
        for t in tokens:
            name = str(t)
            if name not in self._vid:
                raise UnknownVertex(f"unknown vertex {name!r}")
            ids.append(self._vid[name])
        face = tuple(sorted(ids))
        if len(set(face)) != len(face):
            raise FaceNotInComplex(f"repeated vertices in {tuple(tokens)}")
        self.face_index(face)  # existence check
        return face

    def as_face(self, face: Iterable[object]) -> Face:
        """Coerce tokens or internal ids to a validated internal face."""
        items = tuple(face)
        if all(isinstance(t, int) for t in items):
            f = tuple(sorted(items))
            self.face_index(f)
            return f
        return self.face_from_tokens(items)

    def tokens_of(self, face: Face) -> tuple[str, ...]:
        return tuple(self.vertex_names[v] for v in face)

    def vertex_ids(self, vertices: Iterable[object]) -> set[int]:
        out = set()
        for t in vertices:
            if isinstance(t, int):
                if not 0 <= t < len(self.vertex_names):
                    raise UnknownVertex(f"vertex id {t} out of range")
                out.add(t)
            else:
                name = str(t)
                if name not in self._vid:
                    raise UnknownVertex(f"unknown vertex {name!r}")
                out.add(self._vid[name])
        return out

    # -- weights and cochains ------------------------------------------------

    def weight(self, face: Iterable[object]) -> Fraction:
        f = self.as_face(face)
        k = len(f) - 1
        return Fraction(self._tops[k][self._index[k][f]], self._den[k])

    def top_counts(self, k: int) -> tuple[int, ...]:
        self._check_dim(k)
        return self._tops[k]

    def norm_den(self, k: int) -> int:
        self._check_dim(k)
        return self._den[k]

    def cochain_from_bits(self, k: int, bits: int) -> "Cochain":
        self._check_dim(k)
        if bits < 0 or bits >> len(self._faces[k]):
            raise BadDimension(f"bits outside X({k}) of size {len(self._faces[k])}")
        return Cochain(self, k, bits)

    def cochain(self, k: int, faces: Iterable[Iterable[object]] = ()) -> "Cochain":
        bits = 0
        for f in faces:
            face = self.as_face(f)
            if len(face) - 1 != k:
                raise BadDimension(f"{face} has dimension {len(face) - 1}, expected {k}")
            bits |= 1 << self._index[k][face]
        self._check_dim(k)
        return Cochain(self, k, bits)

    def empty_cochain(self, k: int) -> "Cochain":
        self._check_dim(k)
        return Cochain(self, k, 0)

    def full_cochain(self, k: int) -> "Cochain":
        self._check_dim(k)
        return Cochain(self, k, (1 << len(self._faces[k])) - 1)

    def check_bound(self, A: "Cochain", k: int | None = None) -> None:
        if A.complex is not self and A.complex != self:
            raise ComplexMismatch("cochain belongs to a different complex")
        if k is not None and A.k != k:
            raise BadDimension(f"cochain has dimension {A.k}, expected {k}")

    # -- containers ----------------------------------------------------------

    def container(self, A: "Cochain", r: int) -> "Cochain":
        """All r-faces containing a member of A (for r >= dim A)."""
        self.check_bound(A)
        if not A.k <= r <= self.d:
            raise BadDimension(f"container dimension {r} outside {A.k}..{self.d}")
        bits = A.bits
        for k in range(A.k, r):
            up = self._up[k]
            nxt = 0
            for i in iter_bits(bits):
                nxt |= up[i]
            bits = nxt
        return Cochain(self, r, bits)

    # -- links, localization, lifting ----------------------------------------

    def link(self, sigma: Iterable[object]) -> "Complex":
        """The link of sigma, as a fresh complex with its own weights."""
        f = self.as_face(sigma)
        if len(f) == self.d + 1:
            raise BadDimension("the link of a top face is the empty complex")
        if not f:
            return self
        if f not in self._links:
            fset = set(f)
            tops = [
                self.tokens_of(tuple(v for v in top if v not in fset))
                for top in self._faces[self.d]
                if fset.issubset(top)
            ]
            self._links[f] = Complex.build(tops)
            self._link_maps[f] = {}
        return self._links[f]

    def _link_map(self, f: Face, k_link: int) -> tuple[list[int], dict[int, int]]:
        """Index maps between link faces at k_link and their parent faces."""
        link = self._links[f]
        maps = self._link_maps[f]
        if k_link not in maps:
            to_parent = []
            for lf in link._faces[k_link]:
                parent = tuple(sorted(f + tuple(self._vid[t] for t in link.tokens_of(lf))))
                to_parent.append(self._index[len(parent) - 1][parent])
            maps[k_link] = (to_parent, {p: j for j, p in enumerate(to_parent)})
        return maps[k_link]

    def localize(self, sigma: Iterable[object], A: "Cochain") -> "Cochain":
        """Restrict A to the faces containing sigma, viewed inside the link."""
        f = self.as_face(sigma)
        self.check_bound(A)
        k_link = A.k - len(f)
        if k_link < -1:
            raise BadDimension(f"cannot localize a {A.k}-cochain at a face of {len(f)} vertices")
        link = self.link(f)
        if not f:
            return A
        to_parent, _ = self._link_map(f, k_link)
        bits = 0
        a = A.bits
        for j, p in enumerate(to_parent):
            if (a >> p) & 1:
                bits |= 1 << j
        return Cochain(link, k_link, bits)

    def lift(self, sigma: Iterable[object], B: "Cochain") -> "Cochain":
        """Adjoin sigma to every face of the link cochain B."""
        f = self.as_face(sigma)
        link = self.link(f)
        if not f:
            self.check_bound(B)
            return B
        link.check_bound(B)
        to_parent, _ = self._link_map(f, B.k)
        bits = 0
        for j in iter_bits(B.bits):
            bits |= 1 << to_parent[j]
        return Cochain(self, B.k + len(f), bits)

    def faces_containing(self, sigma: Iterable[object], A: "Cochain") -> "Cochain":
        """The members of A that contain sigma, as a cochain of the same
        dimension; equals lift(localize(A)) wherever the link is proper, and
        stays defined even when sigma is a top face."""
        f = self.as_face(sigma)
        self.check_bound(A)
        if len(f) > A.k + 1:
            return Cochain(self, A.k, 0)
        mask = self.container(self.cochain(len(f) - 1, [f]), A.k).bits
        return Cochain(self, A.k, mask & A.bits)

    # -- skeletons and vertex-set edges ---------------------------------------

    def skeleton(self, k: int) -> "Complex":
        """The k-skeleton, reweighted as a pure k-complex."""
        if not 0 <= k <= self.d:
            raise BadDimension(f"skeleton dimension {k} outside 0..{self.d}")
        if k == self.d:
            return self
        if k not in self._skeletons:
            self._skeletons[k] = Complex.build(
                [self.tokens_of(f) for f in self._faces[k]]
            )
        return self._skeletons[k]

    def edges_between(self, a: Iterable[object], b: Iterable[object]) -> "Cochain":
        """Edges with one endpoint in a and the other in b (a = b allowed)."""
        if self.d < 1:
            raise BadDimension("complex has no edges")
        sa = self.vertex_ids(a)
        sb = self.vertex_ids(b)
        bits = 0
        for i, (u, v) in enumerate(self._faces[1]):
            if (u in sa and v in sb) or (v in sa and u in sb):
                bits |= 1 << i
        return Cochain(self, 1, bits)

    def max_vertex_link_size(self) -> int:
        """Largest total face count (including the empty face) of a vertex link."""
        return max(self.link((v,)).total_face_count for v in range(len(self.vertex_names)))

    # -- dunder ---------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Complex)
            and self.d == other.d
            and self.vertex_names == other.vertex_names
            and self._faces[self.d] == other._faces[other.d]
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        fvec = ", ".join(str(len(self._faces[k])) for k in range(0, self.d + 1))
        return f"Complex(d={self.d}, faces=[{fvec}])"


class Cochain:
    """A subset of X(k) as a bitset bound to its complex.

    Addition is symmetric difference (F2)."""

    __slots__ = ("complex", "k", "bits")

    def __init__(self, complex: Complex, k: int, bits: int):
        self.complex = complex
        self.k = k
        self.bits = bits

    def norm(self) -> Fraction:
        return Fraction(self.top_sum(), self.complex.norm_den(self.k))

    def top_sum(self) -> int:
        """Integer numerator of the norm over the fixed per-dimension denominator."""
        tops = self.complex.top_counts(self.k)
        return sum(tops[i] for i in iter_bits(self.bits))

    def indices(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def faces(self) -> list[Face]:
        fs = self.complex.faces(self.k)
        return [fs[i] for i in iter_bits(self.bits)]

    def token_faces(self) -> list[tuple[str, ...]]:
        return [self.complex.tokens_of(f) for f in self.faces()]

    def _binop_check(self, other: "Cochain") -> None:
        if not isinstance(other, Cochain):
            raise TypeError("expected a Cochain")
        if other.complex is not self.complex and other.complex != self.complex:
            raise ComplexMismatch("cochains bound to different complexes")
        if other.k != self.k:
            raise BadDimension(f"cochain dimensions differ: {self.k} vs {other.k}")

    def __xor__(self, other: "Cochain") -> "Cochain":
        self._binop_check(other)
        return Cochain(self.complex, self.k, self.bits ^ other.bits)

    __add__ = __xor__  # F2 addition is symmetric difference

    def __and__(self, other: "Cochain") -> "Cochain":
        self._binop_check(other)
        return Cochain(self.complex, self.k, self.bits & other.bits)

    def __or__(self, other: "Cochain") -> "Cochain":
        self._binop_check(other)
        return Cochain(self.complex, self.k, self.bits | other.bits)

    def subset_of(self, other: "Cochain") -> bool:
        self._binop_check(other)
        return self.bits & ~other.bits == 0

    def __contains__(self, face: Face) -> bool:
        return bool((self.bits >> self.complex.face_index(face)) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cochain)
            and self.k == other.k
            and self.bits == other.bits
            and (self.complex is other.complex or self.complex == other.complex)
        )

    def __hash__(self) -> int:
        return hash((self.k, self.bits))

    def __repr__(self) -> str:
        return f"Cochain(k={self.k}, size={len(self)})"


def build_complex(maximal_faces: Iterable[Iterable[object]]) -> Complex:
    """Functional alias for :meth:`Complex.build`."""
    return Complex.build(maximal_faces)
