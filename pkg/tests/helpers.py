"""Random generators shared by the test modules."""

from __future__ import annotations

from cliffchan.circuit import Circuit, Dephase, Discard, Gate, PrepChaotic, PrepZero
from cliffchan.clifford import GATE_ARITY

ONE_QUBIT = ["H", "S", "X", "Y", "Z"]
TWO_QUBIT = ["CNOT", "CZ"]


def random_circuit(n_in: int, n_out: int, rng, extra_preps: int | None = None, gates: int = 8, dephase_p: float = 0.15) -> Circuit:
    """Random non-adaptive circuit with the requested input and output counts."""
    if extra_preps is None:
        extra_preps = int(rng.integers(0, 3))
    n_prep = max(0, n_out - n_in) + extra_preps
    n_disc = n_in + n_prep - n_out
    live = list(range(n_in))
    next_wire = n_in
    ins = []
    budget = {"prep": n_prep, "disc": n_disc, "gate": gates}
    while any(budget.values()):
        choices = [k for k, v in budget.items() if v]
        if not live and "disc" in choices:
            choices.remove("disc")
        if not live:
            choices = [k for k in choices if k != "gate"] or choices
        kind = choices[int(rng.integers(len(choices)))]
        budget[kind] -= 1
        if kind == "prep":
            ins.append(PrepZero() if rng.random() < 0.5 else PrepChaotic())
            live.append(next_wire)
            next_wire += 1
        elif kind == "disc":
            q = live.pop(int(rng.integers(len(live))))
            ins.append(Discard(q))
        elif live:
            if rng.random() < dephase_p:
                ins.append(Dephase(live[int(rng.integers(len(live)))]))
                continue
            names = ONE_QUBIT + (TWO_QUBIT if len(live) > 1 else [])
            name = names[int(rng.integers(len(names)))]
            qs = tuple(int(live[i]) for i in rng.choice(len(live), size=GATE_ARITY[name], replace=False))
            ins.append(Gate(name, qs))
    return Circuit(n_in, tuple(ins))
