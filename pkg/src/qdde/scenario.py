"""Flat key=value scenario files driving the command-line workbench."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .problem import DdeProblem
from .rebase import GATE_SETS


class ScenarioError(ValueError):
    """Raised for unknown keys, malformed values, or invalid combinations."""


_INT_KEYS = {"d", "n_x", "n_t", "N_shots", "seed"}
_FLOAT_KEYS = {"L", "T", "a", "D", "zeta", "epsilon", "x0", "fable_tolerance"}
_STR_KEYS = {"state_prep_method", "oaa_mode", "reflection", "out"}
_INT_LIST_KEYS = {"n_x_list", "N_list", "d_list", "q_list"}
_STR_LIST_KEYS = {"gate_sets", "subroutines"}
_POINT_KEYS = {"points"}

_STATE_PREPS = ("naive", "low_rank")
_OAA_MODES = ("fixed_count", "oracle_count")
_REFLECTIONS = ("full", "fable")


@dataclass
class Scenario:
    """One workbench configuration: problem parameters plus run controls."""

    d: int = 1
    n_x: int = 32
    n_t: int = 100
    L: float = 20.0
    T: float = 10.0
    a: float = 0.2366
    D: float = 0.2455
    zeta: float = 1.0
    epsilon: float = 0.03
    x0: float = 2.0
    N_shots: int = 50000
    seed: int = 1234
    gate_sets: tuple[str, ...] = ("tket", "star")
    state_prep_method: str = "low_rank"
    oaa_mode: str = "fixed_count"
    reflection: str = "full"
    fable_tolerance: float | None = None
    out: str = "out"
    n_x_list: tuple[int, ...] = (16, 32, 64, 128)
    N_list: tuple[int, ...] = (50, 100, 250, 500, 1000, 5000, 10000, 50000,
                               100000)
    d_list: tuple[int, ...] = (1, 2, 3)
    q_list: tuple[int, ...] = (2, 3, 4, 5)
    subroutines: tuple[str, ...] = ("QFT", "FABLE")
    points: tuple[tuple[int, int], ...] = ((1, 16), (2, 32))

    def validate(self) -> "Scenario":
        if self.N_shots < 1:
            raise ScenarioError(f"N_shots must be >= 1, got {self.N_shots}")
        for gs in self.gate_sets:
            if gs not in GATE_SETS:
                raise ScenarioError(
                    f"unknown gate set {gs!r}; valid: {sorted(GATE_SETS)}")
        if self.state_prep_method not in _STATE_PREPS:
            raise ScenarioError(
                f"state_prep_method must be one of {_STATE_PREPS}")
        if self.oaa_mode not in _OAA_MODES:
            raise ScenarioError(f"oaa_mode must be one of {_OAA_MODES}")
        if self.reflection not in _REFLECTIONS:
            raise ScenarioError(f"reflection must be one of {_REFLECTIONS}")
        for name in ("n_x_list", "N_list", "d_list", "q_list"):
            if not getattr(self, name):
                raise ScenarioError(f"{name} must not be empty")
        for sub in self.subroutines:
            if sub.lower() not in ("qft", "fable"):
                raise ScenarioError(f"unknown subroutine {sub!r}")
        self.problem()
        return self

    def problem(self, **overrides) -> DdeProblem:
        kw = {"d": self.d, "n_x": self.n_x, "n_t": self.n_t, "L": self.L,
              "T": self.T, "a": self.a, "D": self.D, "zeta": self.zeta,
              "epsilon": self.epsilon, "x0": self.x0}
        kw.update(overrides)
        try:
            return DdeProblem(**kw)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc

    def updated(self, **changes) -> "Scenario":
        return replace(self, **changes)


_ALL_KEYS = (_INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _INT_LIST_KEYS
             | _STR_LIST_KEYS | _POINT_KEYS)
assert _ALL_KEYS == {f.name for f in fields(Scenario)}


def _parse_value(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _STR_KEYS:
            return raw
        if key in _INT_LIST_KEYS:
            return tuple(int(v) for v in raw.split(",") if v)
        if key in _STR_LIST_KEYS:
            return tuple(v.strip().lower() if key == "gate_sets" else v.strip()
                         for v in raw.split(",") if v.strip())
        if key in _POINT_KEYS:
            out = []
            for item in raw.split(","):
                if not item.strip():
                    continue
                dim, nx = item.split(":")
                out.append((int(dim), int(nx)))
            return tuple(out)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"bad value for {key!r}: {raw!r}") from exc
    raise ScenarioError(f"unknown scenario key {key!r}")


def parse_scenario(text: str) -> Scenario:
    values: dict[str, object] = {}
    for ln_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ScenarioError(f"line {ln_no}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ScenarioError(f"line {ln_no}: unknown scenario key {key!r}")
        if key in values:
            raise ScenarioError(f"line {ln_no}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw.strip())
    return Scenario(**values).validate()


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text)
