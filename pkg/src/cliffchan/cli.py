"""Command-line front end: ``cliffchan <command> FILE... [--pretty]``.

Every command prints one JSON object on stdout. Exit status is 0 on
success, 1 on parse or validation errors and 2 when a dense size guard
trips.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

from .channel import (
    ChannelError,
    apply_channel,
    capacities,
    channel_report,
    channels_equivalent,
    choi_of_channel,
    classify_channel,
    normal_form,
)
from .circuit import Circuit, CircuitError, StinespringForm, compile_circuit, parse_circuit, rewrite_adaptive
from .clifford import CliffordError
from .oracle import (
    MAX_MEMBERSHIP_QUBITS,
    MAX_PRESERVING_INPUTS,
    MAX_UNITARY_QUBITS,
    SizeGuardError,
    check_stabilizer_preserving_dense,
    dense_of_channel,
    dense_of_circuit,
)
from .pauli import PauliError
from .stabstate import StabilizerError, parse_tableau

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2


class _Inputs:
    """Reads input files once and remembers their bytes for the digest."""

    def __init__(self):
        self.blobs: list[bytes] = []

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise ChannelError(f"cannot read {path}: {exc.strerror}") from exc
        self.blobs.append(data)
        return data.decode("utf-8")

    def digest(self) -> str:
        h = hashlib.sha256()
        for blob in self.blobs:
            h.update(len(blob).to_bytes(8, "big"))
            h.update(blob)
        return "sha256:" + h.hexdigest()


def _load_circuit(inputs: _Inputs, path: str) -> Circuit:
    return parse_circuit(inputs.read(path))


def _channel(c: Circuit) -> StinespringForm:
    # restricted adaptive circuits are rewritten first; anything else raises
    return compile_circuit(rewrite_adaptive(c) if c.is_adaptive else c)


def _roles(c: Circuit) -> list[str]:
    return (rewrite_adaptive(c) if c.is_adaptive else c).output_roles()


def cmd_choi(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    sigma = choi_of_channel(_channel(c))
    return {"n_in": sigma.n_in, "n_out": sigma.n_out, "rank": sigma.rank, "choi_tableau": sigma.canonical_strings()}


def cmd_normal_form(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    return channel_report(_channel(c), _roles(c))


def cmd_capacities(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    return {"capacities": capacities(normal_form(_channel(c))).as_dict()}


def cmd_classify(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    return {"class": classify_channel(_channel(c)).value}


def cmd_equiv(args, inputs):
    f = _channel(_load_circuit(inputs, args.first))
    g = _channel(_load_circuit(inputs, args.second))
    return {"equivalent": channels_equivalent(f, g)}


def cmd_simulate(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    state = parse_tableau(inputs.read(args.state), n=c.n_in)
    if state.n != c.n_in:
        raise ChannelError(f"input state has {state.n} qubits, circuit expects {c.n_in}")
    out = apply_channel(_channel(c), state)
    return {"n": out.n, "rank": out.rank, "output_state": [str(p) for p in out.canonicalize().generators]}


def cmd_rewrite(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    r = rewrite_adaptive(c)
    return {"circuit": str(r), "classical_wires": sorted(r.classical_wires), "output_roles": r.output_roles()}


def cmd_verify_dense(args, inputs):
    c = _load_circuit(inputs, args.circuit)
    ch = _channel(c)
    nf = normal_form(ch)
    rec = nf.to_channel()
    for what, n in (("dilation", ch.n_total), ("normal-form dilation", rec.n_total)):
        if n > MAX_UNITARY_QUBITS:
            raise SizeGuardError(f"{what} has {n} qubits; dense limit is {MAX_UNITARY_QUBITS}")
    if ch.n_in > MAX_PRESERVING_INPUTS or ch.n_in + ch.n_out > MAX_MEMBERSHIP_QUBITS:
        raise SizeGuardError(
            f"dense checks need n_in <= {MAX_PRESERVING_INPUTS} and n_in + n_out <= {MAX_MEMBERSHIP_QUBITS}"
        )
    direct = dense_of_circuit(c)
    compiled = dense_of_channel(ch)
    preserving = check_stabilizer_preserving_dense(compiled)
    d_compiled = direct.distance(compiled)
    d_normal = compiled.distance(dense_of_channel(rec))
    tol = 1e-9
    report = {
        "direct_vs_compiled": d_compiled,
        "compiled_vs_normal_form": d_normal,
        "cptp": compiled.is_cptp(),
        "stabilizer_preserving": preserving.preserving,
        "choi_is_stabilizer": preserving.choi_ok,
        "checks_agree": preserving.agree,
    }
    report["ok"] = bool(
        d_compiled <= tol and d_normal <= tol and report["cptp"] and preserving.preserving and preserving.choi_ok
    )
    # distances are rounded so the report is byte-stable across platforms
    report["direct_vs_compiled"] = round(d_compiled, 12)
    report["compiled_vs_normal_form"] = round(d_normal, 12)
    return report


COMMANDS = {
    "choi": (cmd_choi, ["circuit"], "Choi tableau of a circuit"),
    "normal-form": (cmd_normal_form, ["circuit"], "normal-form counts, capacities and encoder/decoder gates"),
    "capacities": (cmd_capacities, ["circuit"], "classical, assisted and quantum capacities"),
    "classify": (cmd_classify, ["circuit"], "channel class"),
    "equiv": (cmd_equiv, ["first", "second"], "whether two circuits give the same channel"),
    "simulate": (cmd_simulate, ["circuit", "state"], "output tableau for an input tableau"),
    "rewrite": (cmd_rewrite, ["circuit"], "non-adaptive rewrite of a restricted adaptive circuit"),
    "verify-dense": (cmd_verify_dense, ["circuit"], "dense-matrix cross-check (small circuits only)"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cliffchan", description="Analyze Clifford channels given as stabilizer circuits.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, params, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        for param in params:
            p.add_argument(param)
        p.add_argument("--pretty", action="store_true", help="indented JSON with aligned Pauli strings")
    return parser


def _align(strings: list[str]) -> list[str]:
    """Right-align sign prefixes so the Pauli letters line up."""
    split = [(s[: len(s) - len(s.lstrip("+-i"))], s.lstrip("+-i")) for s in strings]
    width = max((len(p) for p, _ in split), default=0)
    return [p.rjust(width) + body for p, body in split]


def render(report: dict, pretty: bool) -> str:
    if not pretty:
        return json.dumps(report, separators=(",", ":"))
    shown = {k: _align(v) if k in ("choi_tableau", "output_state") else v for k, v in report.items()}
    return json.dumps(shown, indent=2)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    inputs = _Inputs()
    envelope = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        payload = handler(args, inputs)
        code = EXIT_OK
    except SizeGuardError as exc:
        payload, code = {"error": str(exc)}, EXIT_GUARD
    except (CircuitError, ChannelError, StabilizerError, PauliError, CliffordError, UnicodeDecodeError) as exc:
        payload, code = {"error": str(exc)}, EXIT_INPUT
    envelope["input_digest"] = inputs.digest()
    envelope.update(payload)
    if code:
        print(f"cliffchan {args.command}: {payload['error']}", file=stderr)
    print(render(envelope, args.pretty), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
