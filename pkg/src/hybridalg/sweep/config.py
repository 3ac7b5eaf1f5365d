"""Line-oriented ``key = value`` configuration for sweeps.

Example::

    # oscillator sweep
    N_q = 32
    N_p = 32
    hamiltonian = (2,0,1/2), (0,2,1/2)
    state = classical-gaussian(0, 0, 1, 1)

Keys are case-sensitive; ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

__all__ = ["ConfigError", "StateSpec", "SweepConfig", "parse_config", "load_config", "OSCILLATOR"]

OSCILLATOR = ((2, 0, Fraction(1, 2)), (0, 2, Fraction(1, 2)))


class ConfigError(ValueError):
    def __init__(self, message: str, *, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.key = key


@dataclass(frozen=True)
class StateSpec:
    kind: str  # embedded-ground-state | classical-gaussian | delta
    params: tuple[float, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({', '.join(repr(p) for p in self.params)})"


@dataclass(frozen=True)
class SweepConfig:
    N_q: int = 32
    N_p: int = 32
    L_q: float = 20.0
    h0: float = 2 * math.pi
    steps: int = 11
    hamiltonian: tuple[tuple[int, int, Fraction], ...] = OSCILLATOR
    c_q: complex = complex(math.sqrt(0.5))
    c_p: complex = complex(math.sqrt(0.5))
    state: StateSpec = field(default_factory=lambda: StateSpec("embedded-ground-state"))
    a_vector: str = "gaussian"
    b_vector: str = "gaussian"
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        for key in ("N_q", "N_p"):
            n = getattr(self, key)
            if n < 2 or n % 2:
                raise ConfigError(f"must be an even count >= 2, got {n}", key=key)
        if not self.L_q > 0:
            raise ConfigError(f"must be positive, got {self.L_q}", key="L_q")
        if not self.h0 > 0:
            raise ConfigError(f"must be positive, got {self.h0}", key="h0")
        if self.steps < 2:
            raise ConfigError(f"must be >= 2, got {self.steps}", key="steps")
        weight = abs(self.c_q) ** 2 + abs(self.c_p) ** 2
        if abs(weight - 1) > 1e-12:
            raise ConfigError(f"weight condition violated: |c_q|^2 + |c_p|^2 = {weight!r}", key="c_q")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"must be csv or json, got {self.format!r}", key="format")
        if not self.hamiltonian:
            raise ConfigError("at least one term required", key="hamiltonian")
        if self.state.kind == "embedded-ground-state" and self.N_q != self.N_p:
            raise ConfigError("embedded-ground-state needs N_q == N_p (square Fourier transport)", key="state")

    @property
    def hbar0(self) -> float:
        return self.h0 / (2 * math.pi)

    def h_values(self) -> list[float]:
        # endpoints set exactly; interior points evenly spaced
        hs = [self.h0 * i / (self.steps - 1) for i in range(self.steps)]
        hs[0], hs[-1] = 0.0, self.h0
        return hs

    def with_overrides(self, **kw) -> SweepConfig:
        return replace(self, **kw)


_TERM = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*([^()]+?)\s*\)")
_STATE = re.compile(r"^([a-z-]+)\s*(?:\((.*)\))?$")
_STATE_ARITY = {"embedded-ground-state": 0, "classical-gaussian": 4, "delta": 2}


def _number(text: str) -> Fraction:
    return Fraction(text.strip())


def _parse_hamiltonian(value: str):
    terms = []
    pos = 0
    for m in _TERM.finditer(value):
        gap = value[pos:m.start()].strip()
        if gap not in ("", ","):
            raise ValueError(f"unexpected text {gap!r}")
        terms.append((int(m.group(1)), int(m.group(2)), _number(m.group(3))))
        pos = m.end()
    if value[pos:].strip() or not terms:
        raise ValueError("expected a list of (n, m, coefficient) triples")
    return tuple(terms)


def _parse_state(value: str) -> StateSpec:
    m = _STATE.match(value.strip())
    if not m or m.group(1) not in _STATE_ARITY:
        raise ValueError(f"unknown state {value!r}; use one of {', '.join(_STATE_ARITY)}")
    kind = m.group(1)
    params = tuple(float(x) for x in m.group(2).split(",")) if m.group(2) else ()
    if len(params) != _STATE_ARITY[kind]:
        raise ValueError(f"{kind} takes {_STATE_ARITY[kind]} parameters, got {len(params)}")
    if kind == "classical-gaussian" and not (params[2] > 0 and params[3] > 0):
        raise ValueError("classical-gaussian widths must be positive")
    return StateSpec(kind, params)


def _parse_complex(value: str) -> complex:
    return complex(value.replace(" ", "").replace("i", "j"))


def _parse_int(value: str) -> int:
    return int(value)


_CONVERTERS = {
    "N_q": _parse_int,
    "N_p": _parse_int,
    "L_q": float,
    "h0": float,
    "steps": _parse_int,
    "hamiltonian": _parse_hamiltonian,
    "c_q": _parse_complex,
    "c_p": _parse_complex,
    "state": _parse_state,
    "a_vector": str,
    "b_vector": str,
    "output": str,
    "format": str,
}


def parse_config(text: str, base_dir: str | Path | None = None) -> SweepConfig:
    """Parse config text; relative vector/output paths resolve against ``base_dir``."""
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONVERTERS:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in values:
            raise ConfigError("duplicate key", line=lineno, key=key)
        try:
            values[key] = _CONVERTERS[key](value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc), line=lineno, key=key) from None
        lines[key] = lineno
    if base_dir is not None:
        for key in ("a_vector", "b_vector", "output"):
            v = values.get(key)
            if v and v not in ("gaussian", "-") and not Path(v).is_absolute():
                values[key] = str(Path(base_dir) / v)
    try:
        return SweepConfig(**values)
    except ConfigError as exc:
        line = lines.get(exc.key) or (lines.get("c_p") if exc.key == "c_q" else None)
        if line is not None:
            raise ConfigError(str(exc).split(": ", 1)[1], line=line, key=exc.key) from None
        raise


def load_config(path: str | Path) -> SweepConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)
