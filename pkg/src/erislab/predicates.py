"""Postcondition DSL over values: a small predicate AST with total
evaluation (shape mismatches are false, never errors) and a JSON codec.

JSON encoding, by kind:

    {"kind": "true"}
    {"kind": "eq", "value": <val>}
    {"kind": "lt"|"le"|"gt"|"ge", "bound": int}
    {"kind": "in", "set": [int, ...]}
    {"kind": "is_pair", "fst": <pred>, "snd": <pred>}
    {"kind": "is_inl"|"is_inr", "sub": <pred>}
    {"kind": "and"|"or", "subs": [<pred>, ...]}
    {"kind": "not", "sub": <pred>}

Values encode as {"kind": "int"|"bool"|"unit"|"loc"|"lbl"|"pair"|"inl"|"inr", ...}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .lang import (Val, VBool, VInl, VInr, VInt, VLbl, VLoc, VPair, VUnit)

__all__ = ["Pred", "PTrue", "PEq", "PCmp", "PIn", "PIsPair", "PIsInl",
           "PIsInr", "PAnd", "POr", "PNot", "evaluate", "pred_from_json",
           "pred_to_json", "val_from_json", "val_to_json", "TRUE"]


class Pred:
    __slots__ = ()

    def __call__(self, v: Val) -> bool:
        return evaluate(self, v)


@dataclass(frozen=True)
class PTrue(Pred):
    pass


@dataclass(frozen=True)
class PEq(Pred):
    value: Val


@dataclass(frozen=True)
class PCmp(Pred):
    op: str  # lt | le | gt | ge
    bound: int


@dataclass(frozen=True)
class PIn(Pred):
    members: frozenset[int]


@dataclass(frozen=True)
class PIsPair(Pred):
    fst: Pred
    snd: Pred


@dataclass(frozen=True)
class PIsInl(Pred):
    sub: Pred


@dataclass(frozen=True)
class PIsInr(Pred):
    sub: Pred


@dataclass(frozen=True)
class PAnd(Pred):
    subs: tuple[Pred, ...]


@dataclass(frozen=True)
class POr(Pred):
    subs: tuple[Pred, ...]


@dataclass(frozen=True)
class PNot(Pred):
    sub: Pred


TRUE = PTrue()

_CMPS: dict[str, Callable[[int, int], bool]] = {
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}


def evaluate(p: Pred, v: Val) -> bool:
    if isinstance(p, PTrue):
        return True
    if isinstance(p, PEq):
        return v == p.value
    if isinstance(p, PCmp):
        return isinstance(v, VInt) and _CMPS[p.op](v.value, p.bound)
    if isinstance(p, PIn):
        return isinstance(v, VInt) and v.value in p.members
    if isinstance(p, PIsPair):
        return (isinstance(v, VPair)
                and evaluate(p.fst, v.fst) and evaluate(p.snd, v.snd))
    if isinstance(p, PIsInl):
        return isinstance(v, VInl) and evaluate(p.sub, v.value)
    if isinstance(p, PIsInr):
        return isinstance(v, VInr) and evaluate(p.sub, v.value)
    if isinstance(p, PAnd):
        return all(evaluate(q, v) for q in p.subs)
    if isinstance(p, POr):
        return any(evaluate(q, v) for q in p.subs)
    if isinstance(p, PNot):
        return not evaluate(p.sub, v)
    raise TypeError(f"unknown predicate {p!r}")


def val_to_json(v: Val) -> dict:
    if isinstance(v, VInt):
        return {"kind": "int", "value": v.value}
    if isinstance(v, VBool):
        return {"kind": "bool", "value": v.value}
    if isinstance(v, VUnit):
        return {"kind": "unit"}
    if isinstance(v, VLoc):
        return {"kind": "loc", "index": v.index}
    if isinstance(v, VLbl):
        return {"kind": "lbl", "index": v.index}
    if isinstance(v, VPair):
        return {"kind": "pair", "fst": val_to_json(v.fst), "snd": val_to_json(v.snd)}
    if isinstance(v, VInl):
        return {"kind": "inl", "value": val_to_json(v.value)}
    if isinstance(v, VInr):
        return {"kind": "inr", "value": val_to_json(v.value)}
    raise ValueError(f"value {v!r} has no JSON form")


def val_from_json(d: dict) -> Val:
    kind = d.get("kind")
    if kind == "int":
        return VInt(int(d["value"]))
    if kind == "bool":
        return VBool(bool(d["value"]))
    if kind == "unit":
        return VUnit()
    if kind == "loc":
        return VLoc(int(d["index"]))
    if kind == "lbl":
        return VLbl(int(d["index"]))
    if kind == "pair":
        return VPair(val_from_json(d["fst"]), val_from_json(d["snd"]))
    if kind == "inl":
        return VInl(val_from_json(d["value"]))
    if kind == "inr":
        return VInr(val_from_json(d["value"]))
    raise ValueError(f"unknown value kind {kind!r}")


def pred_to_json(p: Pred) -> dict:
    if isinstance(p, PTrue):
        return {"kind": "true"}
    if isinstance(p, PEq):
        return {"kind": "eq", "value": val_to_json(p.value)}
    if isinstance(p, PCmp):
        return {"kind": p.op, "bound": p.bound}
    if isinstance(p, PIn):
        return {"kind": "in", "set": sorted(p.members)}
    if isinstance(p, PIsPair):
        return {"kind": "is_pair", "fst": pred_to_json(p.fst), "snd": pred_to_json(p.snd)}
    if isinstance(p, PIsInl):
        return {"kind": "is_inl", "sub": pred_to_json(p.sub)}
    if isinstance(p, PIsInr):
        return {"kind": "is_inr", "sub": pred_to_json(p.sub)}
    if isinstance(p, PAnd):
        return {"kind": "and", "subs": [pred_to_json(q) for q in p.subs]}
    if isinstance(p, POr):
        return {"kind": "or", "subs": [pred_to_json(q) for q in p.subs]}
    if isinstance(p, PNot):
        return {"kind": "not", "sub": pred_to_json(p.sub)}
    raise TypeError(f"unknown predicate {p!r}")


def pred_from_json(d: dict) -> Pred:
    kind = d.get("kind")
    if kind == "true":
        return TRUE
    if kind == "eq":
        return PEq(val_from_json(d["value"]))
    if kind in _CMPS:
        return PCmp(kind, int(d["bound"]))
    if kind == "in":
        return PIn(frozenset(int(x) for x in d["set"]))
    if kind == "is_pair":
        return PIsPair(pred_from_json(d["fst"]), pred_from_json(d["snd"]))
    if kind == "is_inl":
        return PIsInl(pred_from_json(d["sub"]))
    if kind == "is_inr":
        return PIsInr(pred_from_json(d["sub"]))
    if kind == "and":
        return PAnd(tuple(pred_from_json(q) for q in d["subs"]))
    if kind == "or":
        return POr(tuple(pred_from_json(q) for q in d["subs"]))
    if kind == "not":
        return PNot(pred_from_json(d["sub"]))
    raise ValueError(f"unknown predicate kind {kind!r}")
