"""Tuples of square matrices: points of M_k(C)^n, with a JSON text form."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError


def opnorm(a: np.ndarray) -> float:
    """Operator norm induced by the maximum norm on C^k (largest absolute row sum)."""
    return float(np.abs(a).sum(axis=-1).max()) if a.size else 0.0


def opnorms(stack: np.ndarray) -> np.ndarray:
    """Row-sum operator norms of a stack of matrices of shape (m, k, k)."""
    return np.abs(stack).sum(axis=-1).max(axis=-1)


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """n complex k x k matrices, optionally carrying a center tuple."""

    matrices: np.ndarray
    center: "MatrixTuple | None" = None

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[1] < 1:
            raise PreconditionError(f"expected shape (n, k, k) with k >= 1, got {mats.shape}")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)
        if self.center is not None and self.center.matrices.shape != mats.shape:
            raise PreconditionError("center has a different shape")

    @classmethod
    def scalars(cls, values) -> "MatrixTuple":
        return cls(np.asarray(values, dtype=complex).reshape(-1, 1, 1))

    @classmethod
    def zeros(cls, n: int, k: int) -> "MatrixTuple":
        return cls(np.zeros((n, k, k), dtype=complex))

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def k(self) -> int:
        return self.matrices.shape[1]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self) -> int:
        return self.n

    def _same_shape(self, other: "MatrixTuple"):
        if other.matrices.shape != self.matrices.shape:
            raise PreconditionError(f"shape mismatch: {self.matrices.shape} vs {other.matrices.shape}")

    def __add__(self, other: "MatrixTuple") -> "MatrixTuple":
        self._same_shape(other)
        return MatrixTuple(self.matrices + other.matrices)

    def __sub__(self, other: "MatrixTuple") -> "MatrixTuple":
        self._same_shape(other)
        return MatrixTuple(self.matrices - other.matrices)

    def scale(self, s) -> "MatrixTuple":
        return MatrixTuple(self.matrices * s)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def centered(self) -> "MatrixTuple":
        return self if self.center is None else self - self.center

    def product(self, word) -> np.ndarray:
        """M^I = M_{i_1} ... M_{i_t} for a word of 1-based letters."""
        out = np.eye(self.k, dtype=complex)
        for letter in word:
            out = out @ self.matrices[letter - 1]
        return out

    def max_norm(self) -> float:
        return max(opnorm(m) for m in self.matrices)

    def is_real(self) -> bool:
        return not np.any(self.matrices.imag)

    # -- text form -----------------------------------------------------------

    def to_dict(self, field: str = "complex") -> dict:
        def entries(mats):
            out = []
            for m in mats:
                flat = m.reshape(-1)
                if field == "real":
                    out.append([float(z.real) for z in flat])
                else:
                    out.append([[float(z.real), float(z.imag)] for z in flat])
            return out

        doc = {"n": self.n, "k": self.k, "field": field, "matrices": entries(self.matrices)}
        if self.center is not None:
            doc["center"] = entries(self.center.matrices)
        return doc

    def to_json(self, field: str = "complex") -> str:
        if field == "real" and not self.is_real():
            raise PreconditionError("tuple has complex entries; cannot write it as real")
        return json.dumps(self.to_dict(field), indent=1)

    @classmethod
    def from_dict(cls, doc: dict) -> "MatrixTuple":
        try:
            n, k = int(doc["n"]), int(doc["k"])
            mats = _parse_entries(doc["matrices"], n, k)
            center = _parse_entries(doc["center"], n, k) if doc.get("center") is not None else None
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed matrix tuple document: {exc}") from exc
        return cls(mats, None if center is None else cls(center))

    @classmethod
    def from_json(cls, text: str) -> "MatrixTuple":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"matrix tuple is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def __repr__(self) -> str:
        return f"MatrixTuple(n={self.n}, k={self.k})"


def _parse_entries(raw, n: int, k: int) -> np.ndarray:
    if len(raw) != n:
        raise ValueError(f"expected {n} matrices, got {len(raw)}")
    out = np.zeros((n, k, k), dtype=complex)
    for i, m in enumerate(raw):
        flat = []
        for item in m:
            # accept nested rows as well as a flat row-major list
            if isinstance(item, list) and item and isinstance(item[0], list):
                flat.extend(item)
            else:
                flat.append(item)
        if len(flat) != k * k:
            raise ValueError(f"matrix {i} has {len(flat)} entries, expected {k * k}")
        for j, z in enumerate(flat):
            if isinstance(z, list):
                if len(z) != 2:
                    raise ValueError("complex entries are [re, im] pairs")
                z = complex(float(z[0]), float(z[1]))
            else:
                z = complex(float(z))
            out[i].flat[j] = z
    return out
