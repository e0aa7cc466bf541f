"""Reduced simplicial homology and the subcomplex-homology Betti formula.

This is the independent oracle for the Koszul pipeline: the bigraded Betti
number at (-i, 2j) equals the sum over vertex subsets I of size j of
dim H~_(|I| - i - 1) of the full subcomplex on I (Hochster's formula).  The
sum runs over every subset including the empty one, whose subcomplex is
{emptyset} with H~_(-1) = k, which is what makes the (0, 0) entry come out
as 1 with no special casing.  Subsets consisting of ghost vertices
contribute the same way; they carry the bookkeeping for stripped
hyperplanes.

Homology is computed from the augmented chain complex (empty face in degree
-1, boundary with alternating signs) by two ranks per degree; everything is
exact, nothing is floating point.
"""

from __future__ import annotations

from functools import lru_cache

from .fields import Field, rank_of_dense_rows
from .koszul import BettiTable
from .simplicial import SimplicialComplex, _set_of


@lru_cache(maxsize=65536)
def _chain_structure(face_masks: tuple):
    """Chain group sizes and integer boundary matrices of a face family.

    face_masks must be downward closed and contain 0 (the empty face).
    Returns (counts, boundaries) where counts[k] is the number of faces with
    k vertices and boundaries[k] holds (rows, cols, triples) for the boundary
    from k-vertex faces to (k-1)-vertex faces; the k = 0 entry is the empty
    0 x 1 matrix under the augmentation convention.
    """
    by_size = {}
    for mask in face_masks:
        by_size.setdefault(bin(mask).count("1"), []).append(mask)
    top = max(by_size)
    levels = [sorted(by_size.get(k, ())) for k in range(top + 1)]
    index = [{mask: idx for idx, mask in enumerate(level)} for level in levels]
    counts = tuple(len(level) for level in levels)
    boundaries = [(0, counts[0], ())]
    for k in range(1, top + 1):
        triples = []
        lower = index[k - 1]
        for col, mask in enumerate(levels[k]):
            sign = 1
            rest = mask
            while rest:
                bit = rest & -rest
                row = lower.get(mask & ~bit)
                if row is not None:
                    triples.append((row, col, sign))
                sign = -sign
                rest &= rest - 1
        boundaries.append((counts[k - 1], counts[k], tuple(triples)))
    return counts, tuple(boundaries)


def _homology_from_masks(face_masks: tuple, field: Field):
    """Reduced homology dims {degree: dim} of a downward closed face family."""
    counts, boundaries = _chain_structure(face_masks)
    n = len(counts)
    ranks = [0] * (n + 1)
    for k in range(1, n):
        rows, cols, triples = boundaries[k]
        if rows and cols and triples:
            dense = [[0] * cols for _ in range(rows)]
            for r, c, v in triples:
                dense[r][c] = v
            ranks[k] = rank_of_dense_rows(dense, field)
    dims = {}
    for k in range(n):
        d = counts[k] - ranks[k] - ranks[k + 1]
        if d:
            dims[k - 1] = d  # faces with k vertices live in degree k - 1
    return dims


def reduced_homology(K: SimplicialComplex, field: Field):
    """Reduced homology profile {degree: dim} over the field, zeros omitted.

    The empty complex {emptyset} has exactly {-1: 1}; a complex with
    vertices never has degree -1 homology.
    """
    return _homology_from_masks(K.face_masks(), field)


def is_sphere_profile(profile, n: int) -> bool:
    """Whether a homology profile equals that of the (n-1)-sphere."""
    if n == 0:
        return profile == {-1: 1}
    return profile == {n - 1: 1}


def hochster_betti(
    K: SimplicialComplex, field: Field, multigraded: bool = False
) -> BettiTable:
    """Betti table assembled from full subcomplex homology.

    For each subset I the faces of the full subcomplex are read off the
    precomputed face list of K by mask intersection, which is the same
    family full_subcomplex(K, I) produces after relabeling.
    """
    m = K.m
    all_faces = K.face_masks()
    table = BettiTable(refined={} if multigraded else None)
    for i_mask in range(1 << m):
        sub_faces = tuple(f for f in all_faces if f & ~i_mask == 0)
        size = bin(i_mask).count("1")
        dims = _homology_from_masks(sub_faces, field)
        for d, dim in sorted(dims.items()):
            i = size - d - 1
            table.add(i, 2 * size, dim, _set_of(i_mask) if multigraded else None)
    return table
