"""Brute-force ground truth: density profiles and exact maxima by enumeration."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .formula import Formula

DEFAULT_ENUM_CAP = 24


class CapExceeded(RuntimeError):
    """The instance is too large for exhaustive enumeration or dense simulation."""


@dataclass(frozen=True)
class DensityProfile:
    """Number of satisfied clauses ``d_k`` for every assignment ``k``."""

    n: int
    m: int
    densities: np.ndarray = field(repr=False)
    histogram: dict[int, int]

    @classmethod
    def from_densities(cls, n: int, m: int, densities) -> "DensityProfile":
        d = np.asarray(densities, dtype=np.int64)
        if d.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} densities, got shape {d.shape}")
        hist = {int(k): int(v) for k, v in sorted(Counter(d.tolist()).items())}
        return cls(n, m, d, hist)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def mean(self) -> float:
        return float(self.densities.sum()) / self.N

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "density"])
        for k, d in enumerate(self.densities.tolist()):
            w.writerow([k, d])
        return buf.getvalue()

    def histogram_json(self) -> str:
        return json.dumps({str(d): c for d, c in self.histogram.items()}, sort_keys=False)


@dataclass(frozen=True)
class MaxReport:
    d_max: int
    argmax: tuple[int, ...]
    d_nm: int | None
    satisfiable: bool

    def to_dict(self) -> dict:
        return {"d_max": self.d_max, "argmax": list(self.argmax), "d_nm": self.d_nm,
                "satisfiable": self.satisfiable}


def check_cap(n: int, cap: int = DEFAULT_ENUM_CAP) -> None:
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap of {cap} (2^{n} assignments)")


def density_profile(f: Formula, cap: int = DEFAULT_ENUM_CAP) -> DensityProfile:
    check_cap(f.n, cap)
    vars_, neg = f.clause_arrays()
    d = kernels.clause_densities(f.n, vars_, neg)
    return DensityProfile.from_densities(f.n, f.m, d)


def max_report(profile: DensityProfile) -> MaxReport:
    levels = sorted(profile.histogram, reverse=True)
    d_max = levels[0]
    argmax = tuple(int(k) for k in np.flatnonzero(profile.densities == d_max))
    d_nm = levels[1] if len(levels) > 1 else None
    return MaxReport(d_max, argmax, d_nm, d_max == profile.m)


def brute_force_max(f: Formula, cap: int = DEFAULT_ENUM_CAP) -> MaxReport:
    return max_report(density_profile(f, cap))
