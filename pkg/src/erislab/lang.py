"""Abstract syntax, surface syntax, substitution, and configuration
classification for the eris language.

The surface syntax is S-expressions (see docs/syntax.md).  Sugar forms
(``lam``, ``let``, ``seq``, ``alloc``, ``flip``) are eliminated by the
parser; the core AST below never contains them.

Evaluation is right-to-left: in an application the argument is reduced
to a value before the function, and the same discipline applies to every
multi-argument construct (binary operators, pairs, allocN, store,
randlbl).  Random sampling sites (``rand``/``randlbl`` nodes) carry an
integer id assigned in evaluation-order preorder over the desugared AST;
ids are metadata and do not take part in structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional, Union

__all__ = [
    "Expr", "IntLit", "BoolLit", "UnitLit", "LocLit", "LblLit", "Var", "Rec",
    "App", "BinOp", "If", "Pair", "Fst", "Snd", "Inl", "Inr", "Match",
    "AllocN", "Load", "Store", "Rand", "AllocTape", "RandLbl",
    "Val", "VInt", "VBool", "VUnit", "VLoc", "VLbl", "VClosure", "VPair",
    "VInl", "VInr",
    "Tape", "State", "Config",
    "IsValue", "Reducible", "Stuck",
    "ParseError", "parse_expr", "print_expr", "print_val", "subst",
    "as_value", "to_expr", "free_vars", "is_closed", "assign_sites",
    "eval_order_children", "rand_sites", "classify", "OMEGA_SOURCE",
]

BINOPS = ("+", "-", "*", "=", "<", "<=", "&&", "||")


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class UnitLit(Expr):
    pass


@dataclass(frozen=True)
class LocLit(Expr):
    index: int


@dataclass(frozen=True)
class LblLit(Expr):
    index: int


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Rec(Expr):
    fname: str
    arg: str
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    argument: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class If(Expr):
    guard: Expr
    then: Expr
    other: Expr


@dataclass(frozen=True)
class Pair(Expr):
    fst: Expr
    snd: Expr


@dataclass(frozen=True)
class Fst(Expr):
    arg: Expr


@dataclass(frozen=True)
class Snd(Expr):
    arg: Expr


@dataclass(frozen=True)
class Inl(Expr):
    arg: Expr


@dataclass(frozen=True)
class Inr(Expr):
    arg: Expr


@dataclass(frozen=True)
class Match(Expr):
    scrutinee: Expr
    lname: str
    lbody: Expr
    rname: str
    rbody: Expr


@dataclass(frozen=True)
class AllocN(Expr):
    length: Expr
    init: Expr


@dataclass(frozen=True)
class Load(Expr):
    arg: Expr


@dataclass(frozen=True)
class Store(Expr):
    dest: Expr
    value: Expr


@dataclass(frozen=True)
class Rand(Expr):
    bound: Expr
    site: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class AllocTape(Expr):
    bound: Expr


@dataclass(frozen=True)
class RandLbl(Expr):
    bound: Expr
    label: Expr
    site: Optional[int] = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Values

class Val:
    __slots__ = ()


@dataclass(frozen=True)
class VInt(Val):
    value: int


@dataclass(frozen=True)
class VBool(Val):
    value: bool


@dataclass(frozen=True)
class VUnit(Val):
    pass


@dataclass(frozen=True)
class VLoc(Val):
    index: int


@dataclass(frozen=True)
class VLbl(Val):
    index: int


@dataclass(frozen=True)
class VClosure(Val):
    fname: str
    arg: str
    body: Expr


@dataclass(frozen=True)
class VPair(Val):
    fst: Val
    snd: Val


@dataclass(frozen=True)
class VInl(Val):
    value: Val


@dataclass(frozen=True)
class VInr(Val):
    value: Val


UNIT = VUnit()
_TRUE = VBool(True)
_FALSE = VBool(False)
_SMALL_VINTS = tuple(VInt(i) for i in range(257))


def as_value(e: Expr) -> Optional[Val]:
    """Return the value an expression denotes, or None if it is not one."""
    if isinstance(e, IntLit):
        n = e.value
        return _SMALL_VINTS[n] if 0 <= n < 257 else VInt(n)
    if isinstance(e, BoolLit):
        return _TRUE if e.value else _FALSE
    if isinstance(e, UnitLit):
        return UNIT
    if isinstance(e, LocLit):
        return VLoc(e.index)
    if isinstance(e, LblLit):
        return VLbl(e.index)
    if isinstance(e, Rec):
        return VClosure(e.fname, e.arg, e.body)
    if isinstance(e, Pair):
        l = as_value(e.fst)
        if l is None:
            return None
        r = as_value(e.snd)
        if r is None:
            return None
        return VPair(l, r)
    if isinstance(e, Inl):
        v = as_value(e.arg)
        return None if v is None else VInl(v)
    if isinstance(e, Inr):
        v = as_value(e.arg)
        return None if v is None else VInr(v)
    return None


def to_expr(v: Val) -> Expr:
    """Inject a value back into the expression syntax."""
    if isinstance(v, VInt):
        return IntLit(v.value)
    if isinstance(v, VBool):
        return BoolLit(v.value)
    if isinstance(v, VUnit):
        return UnitLit()
    if isinstance(v, VLoc):
        return LocLit(v.index)
    if isinstance(v, VLbl):
        return LblLit(v.index)
    if isinstance(v, VClosure):
        return Rec(v.fname, v.arg, v.body)
    if isinstance(v, VPair):
        return Pair(to_expr(v.fst), to_expr(v.snd))
    if isinstance(v, VInl):
        return Inl(to_expr(v.value))
    if isinstance(v, VInr):
        return Inr(to_expr(v.value))
    raise TypeError(f"not a value: {v!r}")


# ---------------------------------------------------------------------------
# State and configurations

@dataclass(frozen=True)
class Tape:
    bound: int
    queue: tuple[int, ...] = ()

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("tape bound must be a natural")
        if any(n < 0 or n > self.bound for n in self.queue):
            raise ValueError("queued tape value exceeds tape bound")


@dataclass(frozen=True)
class State:
    """Heap and presampling tapes, with monotone allocation counters.

    Both maps are kept as tuples sorted by key so states are hashable
    and structurally comparable.
    """

    heap: tuple[tuple[int, Val], ...] = ()
    tapes: tuple[tuple[int, Tape], ...] = ()
    next_loc: int = 0
    next_label: int = 0

    def heap_get(self, loc: int) -> Optional[Val]:
        for k, v in self.heap:
            if k == loc:
                return v
        return None

    def heap_set(self, loc: int, v: Val) -> "State":
        new = tuple((k, v if k == loc else old) for k, old in self.heap)
        return replace(self, heap=new)

    def alloc_block(self, n: int, v: Val) -> tuple["State", int]:
        base = self.next_loc
        cells = tuple((base + i, v) for i in range(n))
        return replace(self, heap=self.heap + cells, next_loc=base + n), base

    def tape_get(self, lbl: int) -> Optional[Tape]:
        for k, t in self.tapes:
            if k == lbl:
                return t
        return None

    def tape_set(self, lbl: int, t: Tape) -> "State":
        new = tuple((k, t if k == lbl else old) for k, old in self.tapes)
        return replace(self, tapes=new)

    def alloc_tape(self, bound: int) -> tuple["State", int]:
        lbl = self.next_label
        new = self.tapes + ((lbl, Tape(bound)),)
        return replace(self, tapes=new, next_label=lbl + 1), lbl

    def with_tape(self, lbl: int, bound: int, queue: tuple[int, ...]) -> "State":
        """Install a tape at an explicit label (for presampling setups)."""
        if self.tape_get(lbl) is not None:
            return self.tape_set(lbl, Tape(bound, queue))
        new = self.tapes + ((lbl, Tape(bound, queue)),)
        nl = max(self.next_label, lbl + 1)
        return replace(self, tapes=tuple(sorted(new)), next_label=nl)


@dataclass(frozen=True)
class Config:
    expr: Expr
    state: State


# ---------------------------------------------------------------------------
# Substitution

def subst(e: Expr, name: str, v: Val) -> Expr:
    """Capture-free substitution of the closed value v for name in e."""
    ve = None  # injected lazily; most nodes do not hit the variable

    def go(t: Expr) -> Expr:
        nonlocal ve
        if isinstance(t, Var):
            if t.name == name:
                if ve is None:
                    ve = to_expr(v)
                return ve
            return t
        if isinstance(t, (IntLit, BoolLit, UnitLit, LocLit, LblLit)):
            return t
        if isinstance(t, Rec):
            if t.fname == name or t.arg == name:
                return t
            return Rec(t.fname, t.arg, go(t.body))
        if isinstance(t, App):
            return App(go(t.fn), go(t.argument))
        if isinstance(t, BinOp):
            return BinOp(t.op, go(t.left), go(t.right))
        if isinstance(t, If):
            return If(go(t.guard), go(t.then), go(t.other))
        if isinstance(t, Pair):
            return Pair(go(t.fst), go(t.snd))
        if isinstance(t, Fst):
            return Fst(go(t.arg))
        if isinstance(t, Snd):
            return Snd(go(t.arg))
        if isinstance(t, Inl):
            return Inl(go(t.arg))
        if isinstance(t, Inr):
            return Inr(go(t.arg))
        if isinstance(t, Match):
            lbody = t.lbody if t.lname == name else go(t.lbody)
            rbody = t.rbody if t.rname == name else go(t.rbody)
            return Match(go(t.scrutinee), t.lname, lbody, t.rname, rbody)
        if isinstance(t, AllocN):
            return AllocN(go(t.length), go(t.init))
        if isinstance(t, Load):
            return Load(go(t.arg))
        if isinstance(t, Store):
            return Store(go(t.dest), go(t.value))
        if isinstance(t, Rand):
            return Rand(go(t.bound), site=t.site)
        if isinstance(t, AllocTape):
            return AllocTape(go(t.bound))
        if isinstance(t, RandLbl):
            return RandLbl(go(t.bound), go(t.label), site=t.site)
        raise TypeError(f"unknown expression node {t!r}")

    return go(e)


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Rec):
        return free_vars(e.body) - {e.fname, e.arg}
    if isinstance(e, Match):
        return (free_vars(e.scrutinee)
                | (free_vars(e.lbody) - {e.lname})
                | (free_vars(e.rbody) - {e.rname}))
    out: frozenset[str] = frozenset()
    for child in _children(e):
        out |= free_vars(child)
    return out


def is_closed(e: Expr) -> bool:
    return not free_vars(e)


def _children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (IntLit, BoolLit, UnitLit, LocLit, LblLit, Var)):
        return ()
    if isinstance(e, Rec):
        return (e.body,)
    if isinstance(e, App):
        return (e.fn, e.argument)
    if isinstance(e, BinOp):
        return (e.left, e.right)
    if isinstance(e, If):
        return (e.guard, e.then, e.other)
    if isinstance(e, Pair):
        return (e.fst, e.snd)
    if isinstance(e, (Fst, Snd, Inl, Inr)):
        return (e.arg,)
    if isinstance(e, Match):
        return (e.scrutinee, e.lbody, e.rbody)
    if isinstance(e, AllocN):
        return (e.length, e.init)
    if isinstance(e, Load):
        return (e.arg,)
    if isinstance(e, Store):
        return (e.dest, e.value)
    if isinstance(e, (Rand, AllocTape)):
        return (e.bound,)
    if isinstance(e, RandLbl):
        return (e.bound, e.label)
    raise TypeError(f"unknown expression node {e!r}")


def eval_order_children(e: Expr) -> tuple[Expr, ...]:
    """Children in the order evaluation visits them (right-to-left for
    multi-argument forms, guard first for if/match)."""
    if isinstance(e, App):
        return (e.argument, e.fn)
    if isinstance(e, BinOp):
        return (e.right, e.left)
    if isinstance(e, Pair):
        return (e.snd, e.fst)
    if isinstance(e, AllocN):
        return (e.init, e.length)
    if isinstance(e, Store):
        return (e.value, e.dest)
    if isinstance(e, RandLbl):
        return (e.label, e.bound)
    return _children(e)


# ---------------------------------------------------------------------------
# Sampling-site assignment

def assign_sites(e: Expr) -> Expr:
    """Number every rand/randlbl node in evaluation-order preorder.

    Site ids address Err2 tables in credit schedules; for straight-line
    code the numbering coincides with firing order.
    """
    counter = [0]

    def go(t: Expr) -> Expr:
        if isinstance(t, (IntLit, BoolLit, UnitLit, LocLit, LblLit, Var)):
            return t
        if isinstance(t, Rand):
            sid = counter[0]
            counter[0] += 1
            return Rand(go(t.bound), site=sid)
        if isinstance(t, RandLbl):
            sid = counter[0]
            counter[0] += 1
            lbl = go(t.label)
            bound = go(t.bound)
            return RandLbl(bound, lbl, site=sid)
        if isinstance(t, Rec):
            return Rec(t.fname, t.arg, go(t.body))
        if isinstance(t, App):
            arg = go(t.argument)
            return App(go(t.fn), arg)
        if isinstance(t, BinOp):
            right = go(t.right)
            return BinOp(t.op, go(t.left), right)
        if isinstance(t, If):
            return If(go(t.guard), go(t.then), go(t.other))
        if isinstance(t, Pair):
            snd = go(t.snd)
            return Pair(go(t.fst), snd)
        if isinstance(t, Fst):
            return Fst(go(t.arg))
        if isinstance(t, Snd):
            return Snd(go(t.arg))
        if isinstance(t, Inl):
            return Inl(go(t.arg))
        if isinstance(t, Inr):
            return Inr(go(t.arg))
        if isinstance(t, Match):
            return Match(go(t.scrutinee), t.lname, go(t.lbody), t.rname, go(t.rbody))
        if isinstance(t, AllocN):
            init = go(t.init)
            return AllocN(go(t.length), init)
        if isinstance(t, Load):
            return Load(go(t.arg))
        if isinstance(t, Store):
            value = go(t.value)
            return Store(go(t.dest), value)
        if isinstance(t, AllocTape):
            return AllocTape(go(t.bound))
        raise TypeError(f"unknown expression node {t!r}")

    return go(e)


def rand_sites(e: Expr) -> list[tuple[int, str]]:
    """List (site id, printed node) for every sampling site in e."""
    out: list[tuple[int, str]] = []

    def walk(t: Expr) -> None:
        if isinstance(t, (Rand, RandLbl)) and t.site is not None:
            out.append((t.site, print_expr(t)))
        for c in eval_order_children(t):
            walk(c)

    walk(e)
    return sorted(out)


# ---------------------------------------------------------------------------
# Surface syntax

KEYWORDS = {
    "rec", "lam", "let", "seq", "if", "pair", "fst", "snd", "inl", "inr",
    "match", "allocN", "alloc", "load", "store", "rand", "alloctape",
    "randlbl", "flip", "unit", "true", "false", "loc", "lbl",
}

OMEGA_SOURCE = "((rec f x (f x)) 0)"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            col += 1
            i += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in "()":
            toks.append(_Tok(c, line, col))
            col += 1
            i += 1
            continue
        start = i
        startcol = col
        while i < n and text[i] not in " \t\r\n();":
            i += 1
            col += 1
        toks.append(_Tok(text[start:i], line, startcol))
    return toks


def _read(toks: list[_Tok], pos: int):
    """Read one S-expression; returns (node, next_pos).  Nodes are _Tok
    for atoms or (list, _Tok-of-open-paren) for lists."""
    if pos >= len(toks):
        last = toks[-1] if toks else _Tok("", 1, 1)
        raise ParseError("unexpected end of input", last.line, last.col)
    t = toks[pos]
    if t.text == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(toks):
                raise ParseError("missing closing parenthesis", t.line, t.col)
            if toks[pos].text == ")":
                return (items, t), pos + 1
            node, pos = _read(toks, pos)
            items.append(node)
    if t.text == ")":
        raise ParseError("unexpected ')'", t.line, t.col)
    return t, pos + 1


_INT_CHARS = set("0123456789")


def _is_int(s: str) -> bool:
    body = s[1:] if s[:1] == "-" else s
    return bool(body) and set(body) <= _INT_CHARS


def _is_name(s: str) -> bool:
    if not s or s in KEYWORDS or s in BINOPS or _is_int(s):
        return False
    if not (s[0].isalpha() or s[0] == "_"):
        return False
    return all(ch.isalnum() or ch in "_'" for ch in s)


def _expect_name(node, what: str) -> str:
    if isinstance(node, _Tok) and _is_name(node.text):
        return node.text
    tok = node if isinstance(node, _Tok) else node[1]
    raise ParseError(f"expected {what} name, got {tok.text!r}", tok.line, tok.col)


def _desugar(node) -> Expr:
    if isinstance(node, _Tok):
        s = node.text
        if _is_int(s):
            return IntLit(int(s))
        if s == "true":
            return BoolLit(True)
        if s == "false":
            return BoolLit(False)
        if s == "unit":
            return UnitLit()
        if _is_name(s):
            return Var(s)
        raise ParseError(f"unknown atom {s!r}", node.line, node.col)

    items, opener = node
    if not items:
        return UnitLit()
    head = items[0]
    args = items[1:]

    def need(k: int, form: str) -> None:
        if len(args) != k:
            raise ParseError(
                f"{form} takes {k} argument{'s' if k != 1 else ''}, got {len(args)}",
                opener.line, opener.col)

    if isinstance(head, _Tok):
        h = head.text
        if h in BINOPS:
            need(2, h)
            return BinOp(h, _desugar(args[0]), _desugar(args[1]))
        if h == "rec":
            need(3, "rec")
            return Rec(_expect_name(args[0], "function"),
                       _expect_name(args[1], "argument"), _desugar(args[2]))
        if h == "lam":
            need(2, "lam")
            return Rec("_", _expect_name(args[0], "argument"), _desugar(args[1]))
        if h == "let":
            need(3, "let")
            x = _expect_name(args[0], "binder")
            return App(Rec("_", x, _desugar(args[2])), _desugar(args[1]))
        if h == "seq":
            need(2, "seq")
            return App(Rec("_", "_", _desugar(args[1])), _desugar(args[0]))
        if h == "if":
            need(3, "if")
            return If(_desugar(args[0]), _desugar(args[1]), _desugar(args[2]))
        if h == "pair":
            need(2, "pair")
            return Pair(_desugar(args[0]), _desugar(args[1]))
        if h == "fst":
            need(1, "fst")
            return Fst(_desugar(args[0]))
        if h == "snd":
            need(1, "snd")
            return Snd(_desugar(args[0]))
        if h == "inl":
            need(1, "inl")
            return Inl(_desugar(args[0]))
        if h == "inr":
            need(1, "inr")
            return Inr(_desugar(args[0]))
        if h == "match":
            need(3, "match")
            larm, rarm = args[1], args[2]
            for arm, tag in ((larm, "inl"), (rarm, "inr")):
                if (isinstance(arm, _Tok) or len(arm[0]) != 3
                        or not isinstance(arm[0][0], _Tok) or arm[0][0].text != tag):
                    raise ParseError(f"match arm must be ({tag} name expr)",
                                     opener.line, opener.col)
            return Match(_desugar(args[0]),
                         _expect_name(larm[0][1], "binder"), _desugar(larm[0][2]),
                         _expect_name(rarm[0][1], "binder"), _desugar(rarm[0][2]))
        if h == "allocN":
            need(2, "allocN")
            return AllocN(_desugar(args[0]), _desugar(args[1]))
        if h == "alloc":
            need(1, "alloc")
            return AllocN(IntLit(1), _desugar(args[0]))
        if h == "load":
            need(1, "load")
            return Load(_desugar(args[0]))
        if h == "store":
            need(2, "store")
            return Store(_desugar(args[0]), _desugar(args[1]))
        if h == "rand":
            need(1, "rand")
            return Rand(_desugar(args[0]))
        if h == "alloctape":
            need(1, "alloctape")
            return AllocTape(_desugar(args[0]))
        if h == "randlbl":
            need(2, "randlbl")
            return RandLbl(_desugar(args[0]), _desugar(args[1]))
        if h == "flip":
            need(0, "flip")
            return BinOp("=", Rand(IntLit(1)), IntLit(1))
        if h == "loc":
            need(1, "loc")
            if isinstance(args[0], _Tok) and _is_int(args[0].text):
                return LocLit(int(args[0].text))
            raise ParseError("loc takes an integer index", opener.line, opener.col)
        if h == "lbl":
            need(1, "lbl")
            if isinstance(args[0], _Tok) and _is_int(args[0].text):
                return LblLit(int(args[0].text))
            raise ParseError("lbl takes an integer index", opener.line, opener.col)
        if h in KEYWORDS and h not in ("true", "false", "unit"):
            raise ParseError(f"malformed {h} form", opener.line, opener.col)

    # plain application; (f a b) associates as ((f a) b)
    if not args:
        raise ParseError("application needs an argument", opener.line, opener.col)
    e = _desugar(head)
    for a in args:
        e = App(e, _desugar(a))
    return e


def parse_expr(text: str) -> Expr:
    """Parse one surface program into the desugared core AST."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty input", 1, 1)
    node, pos = _read(toks, 0)
    if pos != len(toks):
        t = toks[pos]
        raise ParseError("trailing input after expression", t.line, t.col)
    return assign_sites(_desugar(node))


def print_expr(e: Expr) -> str:
    """Canonical printed form; parse_expr(print_expr(e)) == e."""
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, UnitLit):
        return "unit"
    if isinstance(e, LocLit):
        return f"(loc {e.index})"
    if isinstance(e, LblLit):
        return f"(lbl {e.index})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Rec):
        return f"(rec {e.fname} {e.arg} {print_expr(e.body)})"
    if isinstance(e, App):
        return f"({print_expr(e.fn)} {print_expr(e.argument)})"
    if isinstance(e, BinOp):
        return f"({e.op} {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, If):
        return f"(if {print_expr(e.guard)} {print_expr(e.then)} {print_expr(e.other)})"
    if isinstance(e, Pair):
        return f"(pair {print_expr(e.fst)} {print_expr(e.snd)})"
    if isinstance(e, Fst):
        return f"(fst {print_expr(e.arg)})"
    if isinstance(e, Snd):
        return f"(snd {print_expr(e.arg)})"
    if isinstance(e, Inl):
        return f"(inl {print_expr(e.arg)})"
    if isinstance(e, Inr):
        return f"(inr {print_expr(e.arg)})"
    if isinstance(e, Match):
        return (f"(match {print_expr(e.scrutinee)} "
                f"(inl {e.lname} {print_expr(e.lbody)}) "
                f"(inr {e.rname} {print_expr(e.rbody)}))")
    if isinstance(e, AllocN):
        return f"(allocN {print_expr(e.length)} {print_expr(e.init)})"
    if isinstance(e, Load):
        return f"(load {print_expr(e.arg)})"
    if isinstance(e, Store):
        return f"(store {print_expr(e.dest)} {print_expr(e.value)})"
    if isinstance(e, Rand):
        return f"(rand {print_expr(e.bound)})"
    if isinstance(e, AllocTape):
        return f"(alloctape {print_expr(e.bound)})"
    if isinstance(e, RandLbl):
        return f"(randlbl {print_expr(e.bound)} {print_expr(e.label)})"
    raise TypeError(f"unknown expression node {e!r}")


def print_val(v: Val) -> str:
    return print_expr(to_expr(v))


# ---------------------------------------------------------------------------
# Classification

@dataclass(frozen=True)
class IsValue:
    value: Val


@dataclass(frozen=True)
class Reducible:
    pass


@dataclass(frozen=True)
class Stuck:
    pass


def classify(cfg: Config) -> Union[IsValue, Reducible, Stuck]:
    """Exactly one of IsValue / Reducible / Stuck holds per configuration."""
    from . import semantics  # local import to avoid a cycle

    shape = semantics.step_shape(cfg)
    if isinstance(shape, semantics.ShapeValue):
        return IsValue(shape.value)
    if isinstance(shape, semantics.ShapeStuck):
        return Stuck()
    return Reducible()
