"""CNF clause database, variable allocation and cardinality encodings.

Cardinality constraints use the sequential counter: auxiliary variables
r[i][j] mean "at least j of the first i literals are true", defined by
biconditional clauses so every model extension is unique.
"""
from __future__ import annotations


class CnfError(ValueError):
    """Empty clause or out-of-range literal."""


class CnfInstance:
    def __init__(self):
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.incremental_marks: list[int] = []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, n: int) -> list[int]:
        return [self.new_var() for _ in range(n)]

    def add_clause(self, lits) -> None:
        lits = list(lits)
        if not lits:
            raise CnfError("empty clause (instance would be trivially UNSAT)")
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise CnfError(f"literal {lit} out of range (num_vars={self.num_vars})")
        self.clauses.append(lits)

    def mark_step(self) -> None:
        self.incremental_marks.append(len(self.clauses))

    # cardinality encodings

    def _emit(self, lits, guard: int | None) -> None:
        if guard is None:
            self.add_clause(lits)
        else:
            self.add_clause([-guard] + list(lits))

    def exactly_k(self, lits, k: int, guard: int | None = None) -> None:
        """Exactly k of lits true; active only when `guard` holds, if given."""
        lits = list(lits)
        n = len(lits)
        if not 0 <= k <= n:
            raise CnfError(f"exactly_k: k={k} out of range for {n} literals")
        if k == 0:
            for lit in lits:
                self._emit([-lit], guard)
            return
        if k == n:
            for lit in lits:
                self._emit([lit], guard)
            return
        r = self._sequential_counter(lits, k + 1, guard)
        self._emit([r[n - 1][k - 1]], guard)     # at least k
        self._emit([-r[n - 1][k]], guard)        # at most k

    def _sequential_counter(self, lits: list[int], width: int,
                            guard: int | None = None) -> list[list[int]]:
        """r[i][j-1] <-> at least j of lits[0..i] are true, for j in 1..width."""
        n = len(lits)
        r = [[self.new_var() for _ in range(width)] for _ in range(n)]
        # base row: r[0][0] <-> lits[0], higher counts false
        self._emit([-lits[0], r[0][0]], guard)
        self._emit([lits[0], -r[0][0]], guard)
        for j in range(1, width):
            self._emit([-r[0][j]], guard)
        for i in range(1, n):
            for j in range(width):
                below = r[i - 1][j - 1] if j > 0 else None
                # r[i][j] <- r[i-1][j]
                self._emit([-r[i - 1][j], r[i][j]], guard)
                # r[i][j] <- lits[i] & r[i-1][j-1]   (j=0: <- lits[i])
                if below is None:
                    self._emit([-lits[i], r[i][j]], guard)
                else:
                    self._emit([-lits[i], -below, r[i][j]], guard)
                # r[i][j] -> r[i-1][j] | (lits[i] & r[i-1][j-1])
                if below is None:
                    self._emit([-r[i][j], r[i - 1][j], lits[i]], guard)
                else:
                    self._emit([-r[i][j], r[i - 1][j], lits[i]], guard)
                    self._emit([-r[i][j], r[i - 1][j], below], guard)
        return r

    def at_most_one(self, lits, guard: int | None = None) -> None:
        lits = list(lits)
        if len(lits) <= 1:
            return
        if len(lits) <= 4:
            # pairwise is smaller for tiny groups
            for a in range(len(lits)):
                for b in range(a + 1, len(lits)):
                    self._emit([-lits[a], -lits[b]], guard)
            return
        r = self._sequential_counter(lits, 2, guard)
        self._emit([-r[len(lits) - 1][1]], guard)

    def exactly_one(self, lits, guard: int | None = None) -> None:
        lits = list(lits)
        if not lits:
            raise CnfError("exactly_one over no literals is unsatisfiable")
        self._emit(lits, guard)
        self.at_most_one(lits, guard)

    def exactly_two(self, lits, guard: int | None = None) -> None:
        self.exactly_k(lits, 2, guard)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CnfInstance":
        inst = cls()
        declared_clauses = None
        pending: list[int] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise CnfError(f"bad DIMACS header {line!r}")
                inst.num_vars = int(parts[2])
                declared_clauses = int(parts[3])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    inst.add_clause(pending)
                    pending = []
                else:
                    pending.append(lit)
        if pending:
            raise CnfError("trailing literals without terminating 0")
        if declared_clauses is not None and declared_clauses != len(inst.clauses):
            raise CnfError(
                f"header declares {declared_clauses} clauses, found {len(inst.clauses)}"
            )
        return inst

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CnfInstance)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )

    def __repr__(self) -> str:
        return f"CnfInstance(vars={self.num_vars}, clauses={len(self.clauses)})"
