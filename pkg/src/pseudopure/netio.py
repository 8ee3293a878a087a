"""Text formats: network files, state files and run configs.

Network file, one gate per line::

    # control target angle
    1 2 acos:1/3
    2 1 pi/2
    repeat 3

Angle tokens are ``deg:<x>``, ``pi/2``, ``pi`` and ``acos:<x>`` (``x`` may be
a fraction such as ``-1/7``). ``repeat <r>`` and ``qubits <n>`` lines are
optional; without ``qubits`` the register size is the largest qubit index.

State and config files are YAML. A state is either ``populations: [...]`` or
``thermal: [p1, p2, ...]``; a config may also hold ``network`` (a path or an
inline ``{gates: [[c, t, angle], ...], repeat: r}``), ``relaxation`` and any
command-line option under its long name with dashes replaced by underscores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from pseudopure.gatekernel import GateNetwork, TransferGate
from pseudopure.statemodel import PopulationState, thermal_state


class ParseError(ValueError):
    pass


def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {text!r}") from None


def parse_angle(token: Any) -> float:
    """Angle token to radians."""
    if isinstance(token, (int, float)) and not isinstance(token, bool):
        raise ParseError(f"bare number {token!r} is ambiguous; write deg:{token}")
    tok = str(token).strip().lower()
    if tok == "pi":
        return math.pi
    if tok == "pi/2":
        return math.pi / 2
    if tok.startswith("deg:"):
        return math.radians(_number(tok[4:]))
    if tok.startswith("acos:"):
        x = _number(tok[5:])
        if not -1.0 <= x <= 1.0:
            raise ParseError(f"acos argument {x} outside [-1, 1]")
        return math.acos(x)
    raise ParseError(f"unknown angle token {token!r}")


def format_angle(theta: float) -> str:
    return f"deg:{math.degrees(theta)!r}"


@dataclass(frozen=True)
class NetworkFile:
    network: GateNetwork
    n_qubits: int


def _gate(c, t, angle, where: str) -> TransferGate:
    try:
        return TransferGate(int(c), int(t), parse_angle(angle))
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{where}: bad gate ({exc})") from None


def parse_network(text: str) -> NetworkFile:
    gates = []
    repeat = 1
    n_qubits = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"line {lineno}"
        if parts[0] in ("repeat", "qubits"):
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError(f"{where}: expected '{parts[0]} <positive integer>'")
            if parts[0] == "repeat":
                repeat = int(parts[1])
            else:
                n_qubits = int(parts[1])
            continue
        if len(parts) != 3:
            raise ParseError(f"{where}: expected 'control target angle', got {line!r}")
        if not (parts[0].isdigit() and parts[1].isdigit()):
            raise ParseError(f"{where}: qubit indices must be positive integers")
        gates.append(_gate(parts[0], parts[1], parts[2], where))
    if not gates:
        raise ParseError("network file has no gates")
    net = GateNetwork(tuple(gates), repeat)
    if n_qubits is None:
        n_qubits = net.n_qubits
    elif n_qubits < net.n_qubits:
        raise ParseError(f"network declares {n_qubits} qubits but uses qubit {net.n_qubits}")
    return NetworkFile(net, n_qubits)


def network_from_mapping(data: Any) -> NetworkFile:
    if not isinstance(data, dict) or "gates" not in data:
        raise ParseError("inline network needs a 'gates' list")
    gates = []
    for i, entry in enumerate(data["gates"]):
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ParseError(f"gate {i}: expected [control, target, angle]")
        gates.append(_gate(*entry, where=f"gate {i}"))
    if not gates:
        raise ParseError("inline network has no gates")
    repeat = data.get("repeat", 1)
    if not isinstance(repeat, int) or repeat < 1:
        raise ParseError("repeat must be a positive integer")
    net = GateNetwork(tuple(gates), repeat)
    n = data.get("qubits", net.n_qubits)
    if not isinstance(n, int) or n < net.n_qubits:
        raise ParseError("qubits must be an integer covering every gate")
    return NetworkFile(net, n)


def format_network(net: GateNetwork, n_qubits: int | None = None) -> str:
    lines = [f"{g.control} {g.target} {format_angle(g.theta)}" for g in net.gates]
    if n_qubits is not None:
        lines.insert(0, f"qubits {n_qubits}")
    if net.repetitions != 1:
        lines.append(f"repeat {net.repetitions}")
    return "\n".join(lines) + "\n"


def load_network(path: str | Path) -> NetworkFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read network file {path}: {exc.strerror}") from None
    return parse_network(text)


def _number_list(values: Any, what: str) -> list[float]:
    if not isinstance(values, (list, tuple)) or not values:
        raise ParseError(f"{what} must be a non-empty list")
    out = []
    for v in values:
        if isinstance(v, bool):
            raise ParseError(f"{what} entries must be numbers")
        out.append(_number(str(v)))
    return out


def state_from_mapping(data: Any) -> PopulationState:
    if not isinstance(data, dict):
        raise ParseError("state must be a mapping with 'populations' or 'thermal'")
    keys = {"populations", "thermal"} & set(data)
    if len(keys) != 1:
        raise ParseError("state needs exactly one of 'populations' or 'thermal'")
    try:
        if "thermal" in keys:
            return thermal_state(_number_list(data["thermal"], "thermal"))
        return PopulationState(_number_list(data["populations"], "populations"))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_thermal_flag(text: str) -> PopulationState:
    return thermal_state([_number(x) for x in text.split(",")])


def load_yaml(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML ({exc})") from None


def load_state(path: str | Path) -> PopulationState:
    data = load_yaml(path)
    if isinstance(data, dict) and "state" in data and isinstance(data["state"], dict):
        data = data["state"]
    return state_from_mapping(data)


def load_config(path: str | Path) -> dict:
    data = load_yaml(path)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ParseError("config must be a YAML mapping")
    return data
