"""Gate-level circuit representation, counting and a plain-text format.

Qubit ``q`` is bit ``2**(n - 1 - q)`` of a basis index, so qubit 0 is the most
significant.  Two-register circuits place register A on qubits ``0..n-1`` and
register B on ``n..2n-1``.

Gate conventions::

    RZ(t)       = diag(exp(-i t/2), exp(i t/2))
    ZZ(t)       = exp(-i t Z Z)
    ZZZ(t)      = exp(-i t Z Z Z)
    PHASE(a)    = exp(i a) (global)
    CNOT(c, t), H, X as usual
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

ARITY = {"RZ": 1, "H": 1, "X": 1, "CNOT": 2, "ZZ": 2, "ZZZ": 3, "PHASE": 0}
ANGLED = {"RZ", "ZZ", "ZZZ", "PHASE"}
DIAGONAL = {"RZ", "ZZ", "ZZZ", "PHASE"}
CNOT_COST = {"CNOT": 1, "ZZ": 2, "ZZZ": 4}
ANGLE_DIGITS = 12


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in ARITY:
            raise ValidationError(f"unknown gate {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if len(qs) != ARITY[self.kind]:
            raise ValidationError(f"{self.kind} acts on {ARITY[self.kind]} qubits")
        if len(set(qs)) != len(qs):
            raise ValidationError(f"{self.kind} qubits must be distinct")
        if (self.kind in ANGLED) != (self.angle is not None):
            raise ValidationError(f"bad angle for {self.kind}")
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))

    def inverse(self) -> "Gate":
        if self.kind in ANGLED:
            return Gate(self.kind, self.qubits, -self.angle)
        return self


def RZ(q, t):
    return Gate("RZ", (q,), t)


def ZZ(p, q, t):
    return Gate("ZZ", (p, q), t)


def ZZZ(p, q, r, t):
    return Gate("ZZZ", (p, q, r), t)


def CNOT(c, t):
    return Gate("CNOT", (c, t))


def H(q):
    return Gate("H", (q,))


def X(q):
    return Gate("X", (q,))


def PHASE(a):
    return Gate("PHASE", (), a)


@dataclass
class Circuit:
    """Ordered gate list; the first gate is applied first."""

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    registers: int = 1
    declared_cnot: int | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError("a circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate):
        if any(q < 0 or q >= self.n_qubits for q in g.qubits):
            raise ValidationError(f"gate {g} addresses a qubit outside 0..{self.n_qubits - 1}")

    def append(self, g: Gate) -> "Circuit":
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValidationError("qubit counts differ")
        dc = None
        if self.declared_cnot is not None and other.declared_cnot is not None:
            dc = self.declared_cnot + other.declared_cnot
        return Circuit(self.n_qubits, self.gates + other.gates, self.registers, dc)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)],
                       self.registers, self.declared_cnot)

    def shifted(self, offset: int, n_qubits: int) -> "Circuit":
        """Relabel qubits ``q -> q + offset`` inside a wider circuit."""
        return Circuit(n_qubits, [Gate(g.kind, tuple(q + offset for q in g.qubits), g.angle)
                                  for g in self.gates], declared_cnot=self.declared_cnot)

    def expand(self) -> "Circuit":
        """Rewrite ZZ and ZZZ in terms of CNOT and RZ."""
        out = Circuit(self.n_qubits, registers=self.registers,
                      declared_cnot=self.declared_cnot)
        for g in self.gates:
            if g.kind == "ZZ":
                p, q = g.qubits
                out.extend([CNOT(p, q), RZ(q, 2 * g.angle), CNOT(p, q)])
            elif g.kind == "ZZZ":
                p, q, r = g.qubits
                out.extend([CNOT(p, r), CNOT(q, r), RZ(r, 2 * g.angle),
                            CNOT(q, r), CNOT(p, r)])
            else:
                out.append(g)
        return out

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.gates == other.gates

    def __len__(self):
        return len(self.gates)


@dataclass(frozen=True)
class GateCount:
    rz: int = 0
    zz: int = 0
    zzz: int = 0
    cnot: int = 0
    h: int = 0
    x: int = 0
    phase: int = 0

    @property
    def cnot_equiv(self) -> int:
        return self.cnot + CNOT_COST["ZZ"] * self.zz + CNOT_COST["ZZZ"] * self.zzz


def gate_count(circuit: Circuit) -> GateCount:
    """Count gates by kind; ``cnot_equiv`` uses 2 per ZZ and 4 per ZZZ."""
    counts = {k.lower(): 0 for k in ARITY}
    for g in circuit.gates:
        counts[g.kind.lower()] += 1
    return GateCount(**counts)


def _fmt(a: float) -> str:
    return f"{a:.{ANGLE_DIGITS}g}"


def emit_circuit_text(circuit: Circuit) -> str:
    """Serialize a circuit, one gate per line, angles to 12 significant digits."""
    lines = [f"# qubits={circuit.n_qubits}"]
    for g in circuit.gates:
        parts = [g.kind] + [f"q{q}" for q in g.qubits]
        if g.angle is not None:
            parts.append(_fmt(g.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_circuit_text(text: str) -> Circuit:
    """Inverse of :func:`emit_circuit_text`; other ``#`` lines are ignored."""
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("qubits="):
                n = int(body.split("=", 1)[1])
            continue
        tok = line.split()
        kind = tok[0]
        if kind not in ARITY:
            raise ValidationError(f"line {lineno}: unknown gate {kind!r}")
        k = ARITY[kind]
        try:
            qs = tuple(int(t[1:]) for t in tok[1:1 + k] if t.startswith("q"))
            if len(qs) != k:
                raise ValueError
            angle = float(tok[1 + k]) if kind in ANGLED else None
            if len(tok) != 1 + k + (kind in ANGLED):
                raise ValueError
        except (ValueError, IndexError):
            raise ValidationError(f"line {lineno}: malformed gate {line!r}") from None
        gates.append(Gate(kind, qs, angle))
    if n is None:
        raise ValidationError("missing '# qubits=N' header")
    return Circuit(n, gates)


def rounded(circuit: Circuit) -> Circuit:
    """Copy with angles rounded to the text format precision."""
    return Circuit(circuit.n_qubits,
                   [Gate(g.kind, g.qubits, None if g.angle is None else float(_fmt(g.angle)))
                    for g in circuit.gates], circuit.registers, circuit.declared_cnot)
