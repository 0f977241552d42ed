"""E3-CNF data model, DIMACS I/O, clause evaluation and instance generators.

Assignments are integers: bit ``i`` of ``k`` is the value of ``x_i``.
Truth vectors are integers as well: bit ``j`` is the value of clause ``c_j``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np


class FormulaError(ValueError):
    """Raised for malformed formulas or DIMACS text."""


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def value(self, assignment: int) -> int:
        bit = (assignment >> self.var) & 1
        return bit ^ int(self.negated)

    def to_dimacs(self) -> int:
        return -(self.var + 1) if self.negated else self.var + 1

    @classmethod
    def from_dimacs(cls, v: int) -> "Literal":
        if v == 0:
            raise FormulaError("literal 0 is the clause terminator, not a literal")
        return cls(abs(v) - 1, v < 0)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(self.literals)
        if len(lits) != 3:
            raise FormulaError(f"clause must have exactly 3 literals, got {len(lits)}")
        if len({lit.var for lit in lits}) != 3:
            raise FormulaError(f"repeated variable in clause {[lit.to_dimacs() for lit in lits]}")
        if any(lit.var < 0 for lit in lits):
            raise FormulaError("negative variable index")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, *dimacs_lits: int) -> "Clause":
        """Build a clause from signed 1-based DIMACS integers, e.g. ``Clause.of(1, -2, 3)``."""
        return cls(tuple(Literal.from_dimacs(v) for v in dimacs_lits))

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(lit.var for lit in self.literals)

    @property
    def conditions(self) -> tuple[int, int, int]:
        """Control conditions of the Toffoli-style gate encoding this clause.

        A positive literal gets condition 1 (control satisfied when the
        variable is 0), a negated literal gets 0. The gate flips a target
        initialised to 1 exactly when every literal is false.
        """
        return tuple(0 if lit.negated else 1 for lit in self.literals)


def eval_clause(c: Clause, a: int) -> int:
    """OR of the three literals under assignment ``a``."""
    return int(any(lit.value(a) for lit in c.literals))


def eval_clause_xor(c: Clause, a: int) -> int:
    """Same value as :func:`eval_clause`, computed as ``((l0^1)&(l1^1)&(l2^1))^1``."""
    l0, l1, l2 = (lit.value(a) for lit in c.literals)
    return ((l0 ^ 1) & (l1 ^ 1) & (l2 ^ 1)) ^ 1


def max_clauses(n: int) -> int:
    """Number of distinct E3 clauses over ``n`` variables, (4/3)n(n-1)(n-2)."""
    return 8 * comb(n, 3)


@dataclass(frozen=True)
class Formula:
    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.n < 3:
            raise FormulaError(f"need n >= 3 variables, got {self.n}")
        if not self.clauses:
            raise FormulaError("formula must contain at least one clause")
        for j, c in enumerate(self.clauses):
            if max(c.variables) >= self.n:
                raise FormulaError(f"clause {j} uses variable index >= n={self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def num_assignments(self) -> int:
        return 1 << self.n

    def truth_vector(self, a: int) -> int:
        return truth_vector(self, a)

    def clause_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(vars, negated)`` as ``(m, 3)`` int64 / uint8 arrays for the kernels."""
        vars_ = np.array([c.variables for c in self.clauses], dtype=np.int64).reshape(self.m, 3)
        neg = np.array([[lit.negated for lit in c.literals] for c in self.clauses],
                       dtype=np.uint8).reshape(self.m, 3)
        return vars_, neg


def truth_vector(f: Formula, a: int) -> int:
    tv = 0
    for j, c in enumerate(f.clauses):
        if eval_clause(c, a):
            tv |= 1 << j
    return tv


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_to_str(value: int, width: int) -> str:
    """Bit string with bit 0 first, e.g. assignment ``x0x1...``."""
    return "".join(str((value >> i) & 1) for i in range(width))


def str_to_bits(s: str) -> int:
    return sum(int(ch) << i for i, ch in enumerate(s))


# -- DIMACS -----------------------------------------------------------------

def parse_dimacs(text: str) -> Formula:
    n = m = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise FormulaError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"line {lineno}: invalid problem line {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormulaError(f"line {lineno}: invalid problem line {line!r}") from None
            continue
        if n is None:
            raise FormulaError(f"line {lineno}: clause before 'p cnf' header")
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormulaError(f"line {lineno}: non-integer token in {line!r}") from None
        for v in values:
            if v != 0:
                pending.append(v)
                continue
            if len(pending) != 3:
                raise FormulaError(f"line {lineno}: clause must have exactly 3 literals, got {len(pending)}")
            for lit in pending:
                if abs(lit) > n:
                    raise FormulaError(f"line {lineno}: variable {abs(lit)} out of range 1..{n}")
            try:
                clauses.append(Clause.of(*pending))
            except FormulaError as exc:
                raise FormulaError(f"line {lineno}: {exc}") from None
            pending = []
    if n is None:
        raise FormulaError("missing 'p cnf' header")
    if pending:
        raise FormulaError("last clause is not terminated by 0")
    if len(clauses) != m:
        raise FormulaError(f"header declares {m} clauses but {len(clauses)} were found")
    return Formula(n, tuple(clauses))


def serialize_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.n} {f.m}"]
    for c in f.clauses:
        lines.append(" ".join(str(lit.to_dimacs()) for lit in c.literals) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def write_dimacs(f: Formula, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_dimacs(f))


# -- generators -------------------------------------------------------------

def all_clauses(n: int) -> list[Clause]:
    """Every E3 clause over ``n`` variables in canonical order.

    Variable triples ascend lexicographically; within a triple the sign
    pattern ``s`` ascends from 0 to 7, literal ``a`` negated iff bit ``a`` of
    ``s`` is set.
    """
    if n < 3:
        raise FormulaError(f"need n >= 3 variables, got {n}")
    out = []
    for triple in itertools.combinations(range(n), 3):
        for s in range(8):
            out.append(Clause(tuple(Literal(v, bool((s >> a) & 1)) for a, v in enumerate(triple))))
    return out


def generate_complete(n: int) -> Formula:
    return Formula(n, tuple(all_clauses(n)))


def generate_random(n: int, m: int, seed: int) -> Formula:
    """``m`` distinct clauses drawn uniformly from :func:`all_clauses` (PCG64 stream)."""
    pool = all_clauses(n)
    if not 1 <= m <= len(pool):
        raise FormulaError(f"m must be in [1, {len(pool)}] for n={n}, got {m}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(pool), size=m, replace=False)
    return Formula(n, tuple(pool[i] for i in idx))
