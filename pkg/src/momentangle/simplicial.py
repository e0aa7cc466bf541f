"""Simplicial complexes and the coordinate subspace arrangements they encode.

A complex lives on the ambient vertex set {1, .., m} and is stored by its
facets (inclusion-maximal faces).  The empty face is always present, so the
smallest representable complex is {emptyset}; the void complex is not
representable, and "ghost vertices" (indices i with {i} not a face) are
allowed.

A subset I of {1, .., m} names the coordinate subspace z_i = 0 for i in I of
complex m-space.  Sending a complex K to the arrangement generated by its
minimal non-faces, and an arrangement to the complex of subsets containing no
generator, is an order-reversing bijection between complexes whose vertices
are all genuine and arrangements without hyperplanes.  Hyperplanes split off
C* factors of the complement and are stripped separately.

The unit cube model: each face J of K spans the cube face with y_i free or 0
on J and y_i = 1 off J; the union over faces is a cone (Euler characteristic
one).  Restricting the same bookkeeping to the polydisk gives the cell count
behind the moment-angle Euler characteristic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass


class HyperplaneError(ValueError):
    """A hyperplane z_i = 0 appears where the correspondence forbids it."""


def _mask_of(subset, m: int) -> int:
    mask = 0
    for i in subset:
        if not isinstance(i, int) or isinstance(i, bool) or not (1 <= i <= m):
            raise ValueError(f"vertex index {i!r} outside 1..{m}")
        mask |= 1 << (i - 1)
    return mask


def _set_of(mask: int) -> frozenset:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _submasks(mask: int):
    """All submasks of mask, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class SimplicialComplex:
    """A simplicial complex on {1, .., m}, stored by facets.

    Construction keeps only inclusion-maximal input subsets; membership is
    "J is a face iff J is contained in some facet".  An empty facet list
    yields the complex {emptyset}.  Instances are immutable and hashable.
    """

    __slots__ = ("m", "facets", "_facet_masks", "_hash", "_faces", "_face_cache",
                 "_nonfaces")

    def __init__(self, m: int, facets=()):
        if m < 0:
            raise ValueError("ambient vertex count must be nonnegative")
        self.m = m
        masks = set()
        for f in facets:
            masks.add(_mask_of(f, m))
        maximal = [
            a for a in masks
            if not any(a != b and a & ~b == 0 for b in masks)
        ]
        if not maximal:
            maximal = [0]
        maximal.sort(key=lambda a: (bin(a).count("1"), a))
        self._facet_masks = tuple(maximal)
        self.facets = tuple(_set_of(a) for a in maximal)
        self._hash = hash((m, frozenset(maximal)))
        self._faces = None
        self._face_cache = {}
        self._nonfaces = None

    @classmethod
    def from_facets(cls, m: int, facets) -> "SimplicialComplex":
        return cls(m, facets)

    # -- basic queries -------------------------------------------------

    @property
    def max_face_size(self) -> int:
        return max(bin(a).count("1") for a in self._facet_masks)

    @property
    def dim(self) -> int:
        return self.max_face_size - 1

    def is_face(self, subset) -> bool:
        return self._is_face_mask(_mask_of(subset, self.m))

    def _is_face_mask(self, mask: int) -> bool:
        cached = self._face_cache.get(mask)
        if cached is None:
            cached = any(mask & ~f == 0 for f in self._facet_masks)
            self._face_cache[mask] = cached
        return cached

    def vertices(self) -> frozenset:
        """Indices i with {i} a face (ghost vertices excluded)."""
        mask = 0
        for f in self._facet_masks:
            mask |= f
        return _set_of(mask)

    def has_all_vertices(self) -> bool:
        return len(self.vertices()) == self.m

    def is_full_simplex(self) -> bool:
        return self._facet_masks == ((1 << self.m) - 1,)

    def face_masks(self):
        """All faces as bitmasks, ascending; cached.  Exponential in dim."""
        if self._faces is None:
            seen = set()
            for f in self._facet_masks:
                for s in _submasks(f):
                    seen.add(s)
            self._faces = tuple(sorted(seen))
        return self._faces

    def all_faces(self):
        return [_set_of(a) for a in self.face_masks()]

    def f_vector(self):
        """f[k] = number of faces with k vertices (f[0] = 1 for the empty face)."""
        counts = [0] * (self.max_face_size + 1)
        for a in self.face_masks():
            counts[bin(a).count("1")] += 1
        return counts

    # -- derived complexes ----------------------------------------------

    def minimal_nonfaces(self):
        """Inclusion-minimal non-faces; the squarefree ideal generators.

        A minimal non-face of size s has all its (s-1)-subsets as faces, so
        s never exceeds max_face_size + 1.
        """
        if self._nonfaces is None:
            out = []
            universe = list(range(1, self.m + 1))
            for s in range(1, self.max_face_size + 2):
                for combo in itertools.combinations(universe, s):
                    mask = _mask_of(combo, self.m)
                    if self._is_face_mask(mask):
                        continue
                    if all(
                        self._is_face_mask(mask & ~(1 << (i - 1)))
                        for i in combo
                    ):
                        out.append(frozenset(combo))
            self._nonfaces = tuple(out)
        return self._nonfaces

    def dual_complex(self) -> "SimplicialComplex":
        """The complex whose faces are complements of non-faces.

        J is a face of the dual iff {1..m} minus J is not a face of self, so
        the dual's facets are the complements of the minimal non-faces.  The
        full simplex has no non-faces, its dual would be void, hence the
        error.  On everything else the operation is an involution.
        """
        if self.is_full_simplex():
            raise ValueError("dual of the full simplex is the void complex")
        full = frozenset(range(1, self.m + 1))
        return SimplicialComplex(self.m, [full - n for n in self.minimal_nonfaces()])

    def full_subcomplex(self, subset) -> "SimplicialComplex":
        """Faces contained in `subset`, re-indexed to 1..|subset| in order."""
        sub = sorted(set(subset))
        _mask_of(sub, self.m)  # range check
        relabel = {v: k + 1 for k, v in enumerate(sub)}
        keep = frozenset(sub)
        facets = [frozenset(relabel[v] for v in (f & keep)) for f in self.facets]
        return SimplicialComplex(len(sub), facets)

    # -- plumbing --------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "facets": [sorted(f) for f in self.facets],
        }

    @classmethod
    def from_json_dict(cls, data) -> "SimplicialComplex":
        if not isinstance(data, dict):
            raise ValueError("complex JSON must be an object")
        try:
            m = data["m"]
            facets = data["facets"]
        except (KeyError, TypeError):
            raise ValueError('complex JSON needs keys "m" and "facets"') from None
        if not isinstance(m, int) or isinstance(m, bool):
            raise ValueError('"m" must be an integer')
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise ValueError('"facets" must be a list of vertex lists')
        return cls(m, facets)

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialComplex)
            and self.m == other.m
            and self._facet_masks == other._facet_masks
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SimplicialComplex(m={self.m}, facets={[sorted(f) for f in self.facets]})"


class Arrangement:
    """An antichain of index subsets generating a coordinate arrangement.

    Each generator I names the subspace z_i = 0 (i in I); maximal subspaces
    correspond to inclusion-minimal index sets, hence the antichain.
    Singleton generators are hyperplanes; they are legal here but rejected by
    the complex correspondence until stripped.
    """

    __slots__ = ("m", "generators", "_gen_masks")

    def __init__(self, m: int, generators=()):
        if m < 0:
            raise ValueError("ambient dimension must be nonnegative")
        self.m = m
        gens = sorted(
            {_mask_of(g, m) for g in generators},
            key=lambda a: (bin(a).count("1"), a),
        )
        for g in gens:
            if g == 0:
                raise ValueError("arrangement generators must be nonempty")
        for a, b in itertools.combinations(gens, 2):
            if a & ~b == 0 or b & ~a == 0:
                raise ValueError(
                    f"generators {sorted(_set_of(a))} and {sorted(_set_of(b))} are comparable"
                )
        self._gen_masks = tuple(gens)
        self.generators = tuple(_set_of(a) for a in gens)

    def has_hyperplane(self) -> bool:
        return any(len(g) == 1 for g in self.generators)

    def to_json_dict(self) -> dict:
        return {"m": self.m, "generators": [sorted(g) for g in self.generators]}

    def __eq__(self, other):
        return (
            isinstance(other, Arrangement)
            and self.m == other.m
            and self._gen_masks == other._gen_masks
        )

    def __hash__(self):
        return hash((self.m, self._gen_masks))

    def __repr__(self):
        return f"Arrangement(m={self.m}, generators={[sorted(g) for g in self.generators]})"


def complex_to_arrangement(K: SimplicialComplex) -> Arrangement:
    """The arrangement whose maximal subspaces are K's minimal non-faces.

    Requires every singleton to be a face: a ghost vertex would force the
    hyperplane z_i = 0 into the arrangement, which the correspondence
    excludes.
    """
    for i in range(1, K.m + 1):
        if not K.is_face({i}):
            raise HyperplaneError(
                f"vertex {i} is not a face; the arrangement would contain a hyperplane"
            )
    return Arrangement(K.m, K.minimal_nonfaces())


def arrangement_to_complex(A: Arrangement) -> SimplicialComplex:
    """The complex whose faces are the subsets containing no generator."""
    if A.has_hyperplane():
        raise HyperplaneError(
            "arrangement contains a hyperplane; strip_hyperplanes first"
        )
    if A.m > 16:
        raise ValueError("refusing to enumerate faces for m > 16")
    gens = A._gen_masks
    full = (1 << A.m) - 1
    facets = []
    for mask in range(full + 1):
        if any(g & ~mask == 0 for g in gens):
            continue
        # maximal iff every added vertex completes some generator
        maximal = True
        rest = full & ~mask
        while rest:
            bit = rest & -rest
            if not any(g & ~(mask | bit) == 0 for g in gens):
                maximal = False
                break
            rest &= rest - 1
        if maximal:
            facets.append(_set_of(mask))
    return SimplicialComplex(A.m, facets)


def strip_hyperplanes(A: Arrangement):
    """Remove hyperplane generators and re-index the surviving coordinates.

    Returns (stripped arrangement in dimension m - k, k).  Each removed
    hyperplane contributes a C* factor to the complement, i.e. an exterior
    generator of degree one downstream.  The antichain property guarantees no
    surviving generator touches a removed coordinate.
    """
    removed = sorted(next(iter(g)) for g in A.generators if len(g) == 1)
    if not removed:
        return A, 0
    survivors = [i for i in range(1, A.m + 1) if i not in removed]
    relabel = {v: k + 1 for k, v in enumerate(survivors)}
    gens = [
        frozenset(relabel[v] for v in g)
        for g in A.generators
        if len(g) > 1
    ]
    return Arrangement(A.m - len(removed), gens), len(removed)


@dataclass(frozen=True)
class CubicalCell:
    """One cube face: coordinates in `free` vary, others are pinned 0 or 1."""

    free: frozenset
    fixed_zero: frozenset
    fixed_one: frozenset

    @property
    def dimension(self) -> int:
        return len(self.free)


def cubical_cells(K: SimplicialComplex):
    """Cells of the cubical model: (F, Z, O) partitions with F + Z a face.

    For each face G, the cells with F + Z = G sweep the cube face lying over
    G; the list is closed under passing to cube faces (shrink F into Z or O).
    """
    full = frozenset(range(1, K.m + 1))
    cells = []
    for g in K.all_faces():
        g_sorted = sorted(g)
        rest = full - g
        for size in range(len(g) + 1):
            for free in itertools.combinations(g_sorted, size):
                fset = frozenset(free)
                cells.append(CubicalCell(fset, g - fset, rest))
    return cells


def cubical_euler(K: SimplicialComplex) -> int:
    """Euler characteristic of the cubical model (always 1: it is a cone)."""
    return sum((-1) ** cell.dimension for cell in cubical_cells(K))


def moment_angle_euler(K: SimplicialComplex) -> int:
    """Euler characteristic of the polydisk cell model.

    A product cell chooses, per coordinate, a disk cell (dims 0/1/2) or a
    circle cell (dims 0/1); the 2-cell choices must form a face J.  The
    circle coordinates contribute a factor 1 - 1 = 0 each, so only J with
    all m coordinates survives: 1 for the full simplex, 0 otherwise.
    """
    return sum(0 ** (K.m - bin(a).count("1")) for a in K.face_masks())


# -- stock complexes ---------------------------------------------------------


def simplex(m: int) -> SimplicialComplex:
    """The full simplex on m vertices."""
    return SimplicialComplex(m, [range(1, m + 1)])


def simplex_boundary(m: int) -> SimplicialComplex:
    """Boundary of the (m-1)-simplex: all proper subsets of {1..m}."""
    if m < 1:
        raise ValueError("boundary needs m >= 1")
    full = frozenset(range(1, m + 1))
    return SimplicialComplex(m, [full - {i} for i in full])


def disjoint_points(m: int) -> SimplicialComplex:
    return SimplicialComplex(m, [{i} for i in range(1, m + 1)])


def polygon(m: int) -> SimplicialComplex:
    """Boundary complex of an m-gon (m >= 3 for an honest cycle)."""
    if m < 3:
        raise ValueError("polygon needs m >= 3")
    edges = [{i, i % m + 1} for i in range(1, m + 1)]
    return SimplicialComplex(m, edges)


def real_projective_plane_6() -> SimplicialComplex:
    """The 6-vertex triangulation of the real projective plane.

    Ten triangles on the antipodal quotient of the icosahedron; its first
    homology is 2-torsion, so Betti tables over Q and F_2 differ.
    """
    facets = [
        {1, 2, 5}, {1, 2, 6}, {1, 3, 4}, {1, 3, 6}, {1, 4, 5},
        {2, 3, 4}, {2, 3, 5}, {2, 4, 6}, {3, 5, 6}, {4, 5, 6},
    ]
    return SimplicialComplex(6, facets)


def random_complex(m: int, density: float = 0.5, seed: int = 0) -> SimplicialComplex:
    """Reproducible random complex: subset J enters with probability density^|J|.

    Subsets are visited in a fixed (size, lexicographic) order and the draws
    come from random.Random(seed), so equal arguments give equal complexes
    byte for byte.  Chosen subsets are passed through facet normalization,
    which closes the family downward.
    """
    if m > 16:
        raise ValueError("random_complex enumerates subsets; m > 16 refused")
    if not (0.0 <= density <= 1.0):
        raise ValueError("density must be in [0, 1]")
    rng = random.Random(seed)
    chosen = []
    universe = list(range(1, m + 1))
    for size in range(1, m + 1):
        for combo in itertools.combinations(universe, size):
            if rng.random() < density ** size:
                chosen.append(combo)
    if not chosen:
        chosen = [(1,)] if m >= 1 else []
    return SimplicialComplex(m, chosen)
