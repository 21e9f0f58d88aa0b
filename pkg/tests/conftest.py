"""Shared test helpers and the acceptance criteria summary banner."""
from __future__ import annotations

import numpy as np

from qdde.circuit import Circuit

CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, verdict: str, detail: str) -> None:
    """Store one acceptance line; printed after the run in numeric order."""
    CRITERION_LINES[number] = f"criterion {number:2d} {verdict}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[number])


KINDS_1Q = ("H", "X", "Z", "S", "Sdg", "T", "Tdg", "SX")


def random_circuit(rng: np.random.Generator, width: int, n_gates: int) -> Circuit:
    """Mixed-vocabulary circuit touching every rewrite path of the rebase."""
    c = Circuit(width)
    for _ in range(n_gates):
        r = rng.random()
        if r < 0.35:
            c.add(str(rng.choice(KINDS_1Q)), int(rng.integers(width)))
        elif r < 0.5:
            c.add(str(rng.choice(["RX", "RY", "RZ", "Phase"])),
                  int(rng.integers(width)),
                  params=(float(rng.uniform(-np.pi, np.pi)),))
        elif r < 0.75:
            a, b = rng.permutation(width)[:2]
            c.add(str(rng.choice(["CX", "CZ", "SWAP"])), int(a), int(b))
        elif r < 0.85:
            a, b = rng.permutation(width)[:2]
            c.add(str(rng.choice(["CPhase", "MS"])), int(a), int(b),
                  params=(float(rng.uniform(-np.pi, np.pi)),))
        elif r < 0.93 and width >= 3:
            a, b, t = rng.permutation(width)[:3]
            c.add("CCX", int(a), int(b), int(t))
        elif width >= 3:
            n_c = int(rng.integers(2, width))
            qs = rng.permutation(width)[: n_c + 1]
            pols = tuple(bool(x) for x in rng.integers(0, 2, n_c))
            c.add(str(rng.choice(["MCX", "MCZ"])), *map(int, qs),
                  polarities=pols)
    return c
