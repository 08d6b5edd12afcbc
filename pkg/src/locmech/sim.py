"""Synchronous round-based message passing in the LOCAL and CONGEST models.

Every node runs the same :class:`NodeProgram`.  In round ``r`` each live node
gets the messages its neighbours sent in round ``r - 1`` and produces new
messages plus, optionally, a :class:`Halt` carrying its output.  A node may
send in the round it halts; afterwards it is silent and messages addressed
to it are dropped.

Messages are tuples ``(kind, *fields)``.  A program's ``schema`` maps each
kind to its field types, which fixes the serialised width used for CONGEST
accounting:

=========  ==========================
``id``     ceil(log2 n)
``color``  ceil(log2 n)
``value``  ceil(log2 (W + 1))
``count``  ceil(log2 (n + 1))
``flag``   1
=========  ==========================

plus ceil(log2 #kinds) bits for the kind tag.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .graph import WeightedGraph


class ModelKind(str, enum.Enum):
    LOCAL = "local"
    CONGEST = "congest"


@dataclass(frozen=True)
class ExecutionModel:
    kind: ModelKind = ModelKind.LOCAL
    congest_constant: int | None = None

    def __post_init__(self):
        if self.kind == ModelKind.CONGEST and (self.congest_constant is None
                                               or self.congest_constant <= 0):
            raise ValueError("CONGEST needs a positive constant c")

    def budget(self, n: int) -> int | None:
        if self.kind == ModelKind.LOCAL:
            return None
        return self.congest_constant * clog2(max(n, 2))


LOCAL = ExecutionModel()


def congest(c: int = 8) -> ExecutionModel:
    return ExecutionModel(ModelKind.CONGEST, c)


@dataclass(frozen=True)
class RoundTrace:
    rounds: int = 0
    messages_total: int = 0
    max_message_bits: int = 0

    def then(self, other: "RoundTrace") -> "RoundTrace":
        """Sequential composition of two phases."""
        return RoundTrace(self.rounds + other.rounds,
                          self.messages_total + other.messages_total,
                          max(self.max_message_bits, other.max_message_bits))

    def to_json(self) -> dict:
        return {"rounds": self.rounds, "messages_total": self.messages_total,
                "max_message_bits": self.max_message_bits}


class NonTerminationError(RuntimeError):
    pass


class CongestionError(RuntimeError):
    def __init__(self, rnd: int, sender: int, bits: int, budget: int):
        super().__init__(f"round {rnd}: node {sender} sent {bits} bits, "
                         f"budget is {budget}")
        self.round = rnd
        self.sender = sender
        self.bits = bits
        self.budget = budget


@dataclass(frozen=True)
class Halt:
    output: Any


@dataclass(frozen=True)
class NodeContext:
    """What a node knows before the first round: its id, ports and globals."""

    node: int
    neighbors: tuple[int, ...]
    n: int
    max_degree: int
    weight_bound: int


class NodeProgram:
    """Base class; subclasses implement :meth:`step` as a pure function."""

    schema: Mapping[str, tuple[str, ...]] = {}

    def init(self, ctx: NodeContext, local_input: Any) -> Any:
        return local_input

    def step(self, ctx: NodeContext, state: Any, rnd: int,
             inbox: Sequence[tuple[int, tuple]]):
        """Return ``(state, outbox, halt)``; ``outbox`` maps neighbour -> message."""
        raise NotImplementedError


def clog2(x: int) -> int:
    return max(0, math.ceil(math.log2(x))) if x > 1 else 0


def log_star(n: float) -> int:
    k = 0
    while n > 1:
        n = math.log2(n)
        k += 1
    return k


def default_round_cap(g: WeightedGraph) -> int:
    d, W = g.max_degree, g.weight_bound
    return 16 * (d ** 3 * (W + 1) + 64 * log_star(g.node_count) + 64)


_round_cap: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "round_cap", default=None)


@contextlib.contextmanager
def round_cap(limit: int | None):
    """Cap every :func:`run` inside the block that does not pass ``max_rounds``."""
    token = _round_cap.set(limit)
    try:
        yield
    finally:
        _round_cap.reset(token)


def _value_bits(x, W: int) -> int:
    if isinstance(x, Fraction) and x.denominator != 1:
        return abs(x.numerator).bit_length() + x.denominator.bit_length()
    return max(1, clog2(W + 1), int(abs(x)).bit_length())


def message_bits(schema: Mapping[str, tuple[str, ...]], msg: tuple,
                 n: int, W: int) -> int:
    kind, *fields = msg
    try:
        layout = schema[kind]
    except KeyError:
        raise ValueError(f"message kind {kind!r} not in schema") from None
    if len(layout) != len(fields):
        raise ValueError(f"message {msg!r} does not match layout {layout}")
    bits = clog2(len(schema))
    for ftype, x in zip(layout, fields):
        if ftype in ("id", "color"):
            bits += max(1, clog2(n), int(x).bit_length())
        elif ftype == "value":
            bits += _value_bits(x, W)
        elif ftype == "count":
            bits += max(1, clog2(n + 1))
        elif ftype == "flag":
            bits += 1
        else:
            raise ValueError(f"unknown field type {ftype!r}")
    return bits


def run(program: NodeProgram, g: WeightedGraph, inputs: Sequence | None = None,
        model: ExecutionModel = LOCAL, max_rounds: int | None = None,
        log: list | None = None):
    """Execute ``program`` on every node of ``g`` until all nodes halt.

    Returns ``(outputs, trace)``.  When ``log`` is a list, every delivered or
    dropped message is appended as ``(round, sender, receiver, message)``.
    """
    n = g.node_count
    if inputs is None:
        inputs = [None] * n
    if max_rounds is None:
        max_rounds = _round_cap.get()
    cap = default_round_cap(g) if max_rounds is None else max_rounds
    budget = model.budget(n)
    ctxs = [NodeContext(v, g.adjacency[v], n, g.max_degree, g.weight_bound)
            for v in range(n)]
    states = [program.init(ctxs[v], inputs[v]) for v in range(n)]
    live = set(range(n))
    outputs: list[Any] = [None] * n
    inboxes: list[list] = [[] for _ in range(n)]
    rounds = messages = max_bits = 0
    rnd = 0
    while live:
        rnd += 1
        if rnd > cap:
            raise NonTerminationError(
                f"{len(live)} node(s) still running after {cap} rounds")
        nxt: list[list] = [[] for _ in range(n)]
        halted = []
        for v in sorted(live):
            inbox = sorted(inboxes[v], key=lambda m: m[0])
            states[v], outbox, halt = program.step(ctxs[v], states[v], rnd, inbox)
            for u in sorted(outbox):
                if u not in ctxs[v].neighbors:
                    raise ValueError(f"node {v} addressed non-neighbour {u}")
                msg = outbox[u]
                bits = message_bits(program.schema, msg, n, g.weight_bound)
                if budget is not None and bits > budget:
                    raise CongestionError(rnd, v, bits, budget)
                messages += 1
                max_bits = max(max_bits, bits)
                nxt[u].append((v, msg))
                if log is not None:
                    log.append((rnd, v, u, msg))
            if halt is not None:
                outputs[v] = halt.output
                halted.append(v)
        live.difference_update(halted)
        for v in range(n):
            inboxes[v] = nxt[v] if v in live else []
        rounds = rnd
    return outputs, RoundTrace(rounds, messages, max_bits)


def assert_congest(trace: RoundTrace, n: int, c: int) -> str | None:
    """``None`` if every message fit ``c * ceil(log2 max(n, 2))`` bits."""
    budget = c * clog2(max(n, 2))
    if trace.max_message_bits <= budget:
        return None
    return f"max message {trace.max_message_bits} bits exceeds budget {budget}"


def broadcast(ctx: NodeContext, msg: tuple, to: Sequence[int] | None = None):
    return {u: msg for u in (ctx.neighbors if to is None else to)}
