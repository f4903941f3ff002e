"""Geometric audit of embedding sets.

The signatures measured here — anisotropy (mean pairwise cosine),
singular spectrum with effective rank and participation ratio, and
principal-angle overlap between varieties — quantify how much of the
space a set of vectors actually uses and whether one variety's
representations are absorbed by another's.

Embedding file format: first line ``<n> <d>``, then one row per line:
``<label> <d space-separated floats>``. Labels must not contain spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

ANISOTROPY_EXACT_LIMIT = 2000  # above this, sample pairs with a fixed seed
ANISOTROPY_SAMPLE_SEED = 0
_RANK_TOL = 1e-10


@dataclass(frozen=True)
class EmbeddingSet:
    label: str
    row_labels: tuple[str, ...]
    vectors: np.ndarray  # shape (n, dim)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 2:
            raise ValidationError(
                f"embedding set {self.label!r} needs shape (n>=2, dim>=2), got {v.shape}"
            )
        if len(self.row_labels) != v.shape[0]:
            raise ValidationError("row label count does not match vector count")
        if not np.isfinite(v).all():
            raise ValidationError(f"non-finite component in set {self.label!r}")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def row(self, label: str) -> np.ndarray:
        try:
            return self.vectors[self.row_labels.index(label)]
        except ValueError:
            raise LookupError(label) from None


@dataclass(frozen=True)
class GeometryReport:
    label: str
    anisotropy: float
    singular_values: tuple[float, ...]  # centered, descending
    singular_values_uncentered: tuple[float, ...]
    effective_rank: float
    participation_ratio: float
    anisotropy_sample_seed: int | None = None  # set when pairs were sampled


def parse_embeddings(source: str, label: str = "") -> EmbeddingSet:
    lines = [l for l in source.replace("\r\n", "\n").split("\n") if l.strip()]
    if not lines:
        raise ParseError("empty embedding file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError("first line must be '<n> <d>'", line=1)
    n, d = int(head[0]), int(head[1])
    if len(lines) - 1 != n:
        raise ParseError(f"header declares {n} rows, found {len(lines) - 1}")
    labels = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split()
        if len(cells) != d + 1:
            raise ParseError(f"expected label + {d} floats", line=lineno)
        labels.append(cells[0])
        try:
            rows.append([float(c) for c in cells[1:]])
        except ValueError:
            raise ParseError("non-numeric component", line=lineno) from None
    return EmbeddingSet(label=label, row_labels=tuple(labels), vectors=np.array(rows))


def _unit_rows(vectors: np.ndarray, label: str) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1)
    zero = np.nonzero(norms == 0)[0]
    if zero.size:
        raise ValidationError(f"zero vector at row {zero[0]} of set {label!r}")
    return vectors / norms[:, None]


def anisotropy(emb: EmbeddingSet) -> float:
    """Mean cosine similarity over unordered row pairs.

    Exact for sets up to ANISOTROPY_EXACT_LIMIT rows; larger sets are
    estimated from a fixed-seed uniform sample of as many pairs as the
    limit would have produced exactly.
    """
    u = _unit_rows(emb.vectors, emb.label)
    n = len(u)
    if n <= ANISOTROPY_EXACT_LIMIT:
        g = u @ u.T
        iu = np.triu_indices(n, k=1)
        return float(g[iu].mean())
    rng = np.random.default_rng(ANISOTROPY_SAMPLE_SEED)
    n_pairs = ANISOTROPY_EXACT_LIMIT * (ANISOTROPY_EXACT_LIMIT - 1) // 2
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n - 1, size=n_pairs)
    j = np.where(j >= i, j + 1, j)  # uniform over off-diagonal pairs
    return float(np.einsum("ij,ij->i", u[i], u[j]).mean())


def _entropy_effective_rank(sv: np.ndarray) -> float:
    total = sv.sum()
    if total <= 0:
        return 1.0
    p = sv[sv > _RANK_TOL * sv[0]] / total
    return float(np.exp(-(p * np.log(p)).sum()))


def _participation_ratio(sv: np.ndarray) -> float:
    s2 = (sv**2).sum()
    s4 = (sv**4).sum()
    return float(s2**2 / s4) if s4 > 0 else 1.0


def spectrum(emb: EmbeddingSet) -> GeometryReport:
    """Singular spectrum of the row-centered matrix plus collapse stats.

    Centering first: raw embeddings carry a large common mean component
    that masks collapse. The uncentered spectrum is reported alongside
    for comparison.
    """
    centered = emb.vectors - emb.vectors.mean(axis=0)
    sv_c = np.linalg.svd(centered, compute_uv=False)
    sv_u = np.linalg.svd(emb.vectors, compute_uv=False)
    return GeometryReport(
        label=emb.label,
        anisotropy=anisotropy(emb),
        singular_values=tuple(float(s) for s in sv_c),
        singular_values_uncentered=tuple(float(s) for s in sv_u),
        effective_rank=_entropy_effective_rank(sv_c),
        participation_ratio=_participation_ratio(sv_c),
        anisotropy_sample_seed=(
            ANISOTROPY_SAMPLE_SEED if len(emb) > ANISOTROPY_EXACT_LIMIT else None
        ),
    )


def _principal_basis(emb: EmbeddingSet, k: int) -> np.ndarray:
    centered = emb.vectors - emb.vectors.mean(axis=0)
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int((sv > _RANK_TOL * max(sv[0], 1.0)).sum())
    if k > rank:
        raise ValidationError(
            f"k={k} exceeds rank {rank} of set {emb.label!r}"
        )
    return vt[:k].T  # (dim, k), orthonormal columns


def subspace_convergence(
    a: EmbeddingSet, b: EmbeddingSet, k: int
) -> tuple[float, float]:
    """(centroid cosine, mean principal-angle cosine of top-k subspaces).

    Both near 1 indicate one variety's representations sit inside the
    other's span — convergence/absorption.
    """
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if k < 1:
        raise ValidationError("k must be positive")
    ca, cb = a.vectors.mean(axis=0), b.vectors.mean(axis=0)
    na, nb = np.linalg.norm(ca), np.linalg.norm(cb)
    centroid_cos = float(ca @ cb / (na * nb)) if na > 0 and nb > 0 else 0.0
    ua = _principal_basis(a, k)
    ub = _principal_basis(b, k)
    cosines = np.linalg.svd(ua.T @ ub, compute_uv=False)
    cosines = np.clip(cosines, 0.0, 1.0)
    return centroid_cos, float(cosines.mean())


def association_probe(
    emb: EmbeddingSet,
    target: str,
    pos_attrs: list[str],
    neg_attrs: list[str],
) -> float:
    """Mean cosine(target, pos) minus mean cosine(target, neg).

    Positive values mean the target sits closer to the positive attribute
    set; the sign and magnitude expose differential association.
    """
    if not pos_attrs or not neg_attrs:
        raise ValidationError("attribute lists must be non-empty")
    t = emb.row(target)
    tn = np.linalg.norm(t)
    if tn == 0:
        raise ValidationError(f"zero vector for target {target!r}")

    def mean_cos(labels: list[str]) -> float:
        vals = []
        for lab in labels:
            v = emb.row(lab)
            nv = np.linalg.norm(v)
            if nv == 0:
                raise ValidationError(f"zero vector for attribute {lab!r}")
            vals.append(float(t @ v / (tn * nv)))
        return sum(vals) / len(vals)

    return mean_cos(pos_attrs) - mean_cos(neg_attrs)
