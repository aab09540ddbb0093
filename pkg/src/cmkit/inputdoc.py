"""Sectioned text input for the command line.

Blocks are `[kind name]` headers followed by `key = value` lines.  Values are
integers, bare names, quoted polynomial strings, or (nested) bracket lists of
those.  Parse problems are collected with line/column positions instead of
bailing at the first bad token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ValidationError
from .order import MonomialOrder
from .ring import Field, GradedRing, Poly
from .freemod import FreeModule
from .modules import PresentedModule
from .mf import MatrixFactorization

BLOCK_KINDS = ("ring", "module", "mf", "artin", "small-extension")

_HEADER = re.compile(r"^\[\s*([a-z-]+)\s+([A-Za-z_][A-Za-z0-9_-]*)\s*\]\s*$")
_KEYVAL = re.compile(r"^([A-Za-z-][A-Za-z0-9_-]*)\s*=\s*(.*)$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"-?[0-9]+")
_DERIVE = re.compile(r"^([a-z]+)\(\s*([A-Za-z0-9_-]*)\s*\)$")


@dataclass
class ParseIssue:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}: {self.message}"


class DocumentError(ValidationError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass
class Block:
    kind: str
    name: str
    line: int
    entries: dict = field(default_factory=dict)   # key -> (value, line, col)


def _parse_value(text: str, line: int, col0: int, issues: list):
    """One value: int | name | "quoted" | [v, v, ...].  Returns (value, rest, col)."""
    i = 0
    n = len(text)
    while i < n and text[i].isspace():
        i += 1
    if i >= n:
        issues.append(ParseIssue(line, col0 + i, "missing value"))
        return None, "", col0 + i
    c = text[i]
    if c == '"':
        j = text.find('"', i + 1)
        if j < 0:
            issues.append(ParseIssue(line, col0 + i, "unterminated string"))
            return None, "", col0 + n
        return ("str", text[i + 1:j]), text[j + 1:], col0 + j + 1
    if c == "[":
        items = []
        rest = text[i + 1:]
        col = col0 + i + 1
        while True:
            k = 0
            while k < len(rest) and rest[k].isspace():
                k += 1
            if k < len(rest) and rest[k] == "]":
                return ("list", items), rest[k + 1:], col + k + 1
            v, rest2, col2 = _parse_value(rest[k:], line, col + k, issues)
            if v is None:
                return None, "", col2
            items.append(v)
            rest, col = rest2, col2
            k = 0
            while k < len(rest) and rest[k].isspace():
                k += 1
            if k < len(rest) and rest[k] == ",":
                rest, col = rest[k + 1:], col + k + 1
            elif k < len(rest) and rest[k] == "]":
                return ("list", items), rest[k + 1:], col + k + 1
            else:
                issues.append(ParseIssue(line, col + k, "expected ',' or ']' in list"))
                return None, "", col + k
    m = _INT.match(text, i)
    if m and (m.end() >= n or not (text[m.end()].isalnum() or text[m.end()] == "_")):
        return ("int", int(m.group())), text[m.end():], col0 + m.end()
    m = _NAME.match(text, i)
    if m:
        word = m.group()
        rest = text[m.end():]
        stripped = rest.lstrip()
        if stripped.startswith("("):
            j = rest.find(")")
            if j < 0:
                issues.append(ParseIssue(line, col0 + i, "unterminated call"))
                return None, "", col0 + n
            inner = rest[: j + 1]
            return ("call", word + inner.strip()), rest[j + 1:], col0 + m.end() + j + 1
        return ("name", word), rest, col0 + m.end()
    issues.append(ParseIssue(line, col0 + i, f"unexpected character {c!r}"))
    return None, "", col0 + i


@dataclass
class InputDocument:
    defaults: dict
    blocks: dict          # (kind, name) -> Block
    order: list           # [(kind, name)] in file order

    def block(self, kind: str, name: str) -> Block:
        b = self.blocks.get((kind, name))
        if b is None:
            raise ValidationError(f"no [{kind} {name}] block in the input")
        return b

    def names(self, kind: str) -> list[str]:
        return [n for (k, n) in self.order if k == kind]


def parse_input(path: str) -> InputDocument:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_text(text)


def parse_text(text: str) -> InputDocument:
    issues: list[ParseIssue] = []
    defaults: dict = {}
    blocks: dict = {}
    order: list = []
    current: Block | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        mh = _HEADER.match(line.strip())
        if mh:
            kind, name = mh.group(1), mh.group(2)
            if kind not in BLOCK_KINDS:
                issues.append(ParseIssue(ln, line.find("[") + 1,
                                         f"unknown block kind '{kind}'"))
                current = None
                continue
            if (kind, name) in blocks:
                issues.append(ParseIssue(ln, 1, f"duplicate block [{kind} {name}]"))
            current = Block(kind, name, ln)
            blocks[(kind, name)] = current
            order.append((kind, name))
            continue
        mkv = _KEYVAL.match(line.strip())
        if not mkv:
            issues.append(ParseIssue(ln, 1, "expected '[kind name]' or 'key = value'"))
            continue
        key = mkv.group(1)
        vcol = line.find("=") + 2
        value, rest, _ = _parse_value(mkv.group(2), ln, vcol, issues)
        if value is None:
            continue
        if rest.strip():
            issues.append(ParseIssue(ln, vcol, f"trailing text {rest.strip()!r}"))
            continue
        if current is None:
            defaults[key] = (value, ln, vcol)
        else:
            if key in current.entries:
                issues.append(ParseIssue(ln, 1, f"duplicate key '{key}'"))
            current.entries[key] = (value, ln, vcol)
    if issues:
        raise DocumentError(issues)
    return InputDocument(defaults, blocks, order)


# -- semantic construction ---------------------------------------------------------


class Environment:
    """Built objects from a document, with by-name lookup and caching."""

    def __init__(self, doc: InputDocument, field: Field | None = None,
                 order: str | None = None):
        self.doc = doc
        spec = order or self._default_str("order") or "grevlex"
        self.order = MonomialOrder.parse(spec)
        self.field = field if field is not None else self._default_field()
        self._cache: dict = {}

    def _default_str(self, key):
        ent = self.doc.defaults.get(key)
        if ent is None:
            return None
        (tag, v), ln, col = ent
        if tag not in ("name", "str"):
            raise DocumentError([ParseIssue(ln, col, f"'{key}' must be a name")])
        return v

    def _default_field(self) -> Field:
        ent = self.doc.defaults.get("field")
        if ent is None:
            return Field.gf(32003)
        (tag, v), ln, col = ent
        if tag == "int":
            if v == 0:
                return Field.rationals()
            return Field.gf(v)
        if tag in ("name", "str") and str(v).upper() in ("Q", "QQ"):
            return Field.rationals()
        raise DocumentError([ParseIssue(ln, col, "bad field spec (prime or QQ)")])

    # -- typed entry readers ---------------------------------------------------

    def _need(self, b: Block, key: str):
        ent = b.entries.get(key)
        if ent is None:
            raise DocumentError([ParseIssue(b.line, 1,
                                 f"[{b.kind} {b.name}] is missing '{key}'")])
        return ent

    def _name_list(self, b: Block, key: str) -> tuple:
        (tag, v), ln, col = self._need(b, key)
        if tag != "list" or any(t != "name" for (t, _) in v):
            raise DocumentError([ParseIssue(ln, col, f"'{key}' must be a list of names")])
        return tuple(x for (_, x) in v)

    def _int_list(self, b: Block, key: str, default=None):
        ent = b.entries.get(key)
        if ent is None:
            return default
        (tag, v), ln, col = ent
        if tag != "list" or any(t != "int" for (t, _) in v):
            raise DocumentError([ParseIssue(ln, col, f"'{key}' must be a list of integers")])
        return tuple(x for (_, x) in v)

    def _str_list(self, b: Block, key: str, default=None):
        ent = b.entries.get(key)
        if ent is None:
            return default
        (tag, v), ln, col = ent
        if tag != "list" or any(t != "str" for (t, _) in v):
            raise DocumentError([ParseIssue(ln, col, f"'{key}' must be a list of quoted strings")])
        return [x for (_, x) in v]

    def _matrix(self, b: Block, key: str):
        (tag, v), ln, col = self._need(b, key)
        bad = DocumentError([ParseIssue(ln, col,
                            f"'{key}' must be a list of lists of quoted strings")])
        if tag != "list":
            raise bad
        rows = []
        for (t, row) in v:
            if t != "list" or any(tt != "str" for (tt, _) in row):
                raise bad
            rows.append([x for (_, x) in row])
        return rows, ln, col

    def _ref(self, b: Block, key: str, kinds) -> Block:
        (tag, v), ln, col = self._need(b, key)
        if tag != "name":
            raise DocumentError([ParseIssue(ln, col, f"'{key}' must be a block name")])
        for kind in kinds:
            blk = self.doc.blocks.get((kind, v))
            if blk is not None:
                return blk
        raise DocumentError([ParseIssue(ln, col,
                            f"'{key} = {v}' does not resolve to any of {kinds}")])

    def _parse_poly(self, ring: GradedRing, s: str, ln: int, col: int) -> Poly:
        try:
            return ring.parse(s)
        except Exception as e:
            raise DocumentError([ParseIssue(ln, col, f"{s!r}: {e}")])

    # -- builders ----------------------------------------------------------------

    def ring(self, name: str) -> GradedRing:
        key = ("ring-or-artin", name)
        if key in self._cache:
            return self._cache[key]
        b = self.doc.blocks.get(("ring", name)) or self.doc.blocks.get(("artin", name))
        if b is None:
            raise ValidationError(f"no [ring {name}] or [artin {name}] block")
        names = self._name_list(b, "variables")
        degrees = self._int_list(b, "degrees", default=tuple([1] * len(names)))
        if len(degrees) != len(names):
            raise DocumentError([ParseIssue(b.line, 1,
                                 "degrees and variables differ in length")])
        rel_strs = self._str_list(b, "relations", default=[])
        r = GradedRing(self.field, names, degrees, self.order)
        rels = []
        for s in rel_strs:
            ent = b.entries["relations"]
            rels.append(self._parse_poly(r, s, ent[1], ent[2]))
        out = GradedRing(self.field, names, degrees, self.order, rels) if rels else r
        self._cache[key] = out
        return out

    def module(self, name: str) -> PresentedModule:
        key = ("module", name)
        if key in self._cache:
            return self._cache[key]
        b = self.doc.block("module", name)
        ring = self.ring(self._ref(b, "ring", ("ring", "artin")).name)
        if "derive" in b.entries:
            out = self._derived(b, ring)
        else:
            gd = self._int_list(b, "degrees", default=(0,))
            free = FreeModule(ring, gd)
            ent = b.entries.get("relations")
            rels = []
            if ent is not None:
                rows, ln, col = self._matrix(b, "relations")
                for row in rows:
                    if len(row) != len(gd):
                        raise DocumentError([ParseIssue(ln, col,
                            f"relation {row} has {len(row)} entries for {len(gd)} generators")])
                    rels.append(free.from_entries(
                        [self._parse_poly(ring, s, ln, col) for s in row]))
            out = PresentedModule(ring, gd, rels)
        self._cache[key] = out
        return out

    def _derived(self, b: Block, ring: GradedRing) -> PresentedModule:
        from .homalg import canonical_module
        from .cmapprox import mcm_approx_cm, fundamental_module
        (tag, v), ln, col = b.entries["derive"]
        if tag == "name":
            v = v + "()"
        elif tag not in ("call", "str"):
            raise DocumentError([ParseIssue(ln, col, "'derive' must be name(arg)")])
        m = _DERIVE.match(v.replace(" ", ""))
        if not m:
            raise DocumentError([ParseIssue(ln, col, f"cannot read derivation {v!r}")])
        op, arg = m.group(1), m.group(2)
        if op == "residue":
            return PresentedModule.residue_field(ring)
        if op == "omega":
            return canonical_module(ring)
        if op == "approx":
            base = self.module(arg)
            c = base.ring.dim() - base.krull_dim()
            trip = mcm_approx_cm(base, c, canonical_module(base.ring))
            return trip.m
        if op == "fundamental":
            e, *_ = fundamental_module(ring)
            return e
        raise DocumentError([ParseIssue(ln, col, f"unknown derivation '{op}'")])

    def mf(self, name: str) -> MatrixFactorization:
        key = ("mf", name)
        if key in self._cache:
            return self._cache[key]
        b = self.doc.block("mf", name)
        q = self.ring(self._ref(b, "ring", ("ring",)).name)
        fent = self._need(b, "f")
        (tag, fv), ln, col = fent
        if tag != "str":
            raise DocumentError([ParseIssue(ln, col, "'f' must be a quoted polynomial")])
        f = self._parse_poly(q, fv, ln, col)
        phi_rows, pln, pcol = self._matrix(b, "phi")
        psi_rows, sln, scol = self._matrix(b, "psi")
        phi = tuple(tuple(self._parse_poly(q, s, pln, pcol) for s in row)
                    for row in phi_rows)
        psi = tuple(tuple(self._parse_poly(q, s, sln, scol) for s in row)
                    for row in psi_rows)
        n = len(phi)
        degs0 = self._int_list(b, "row-degrees", default=None)
        degs1 = self._int_list(b, "col-degrees", default=None)
        if degs0 is None:
            degs0 = tuple([0] * n)
        if degs1 is None:
            cols = []
            for j in range(n):
                d = None
                for i in range(n):
                    if not phi[i][j].is_zero:
                        d = degs0[i] + phi[i][j].degree()
                        break
                if d is None:
                    raise DocumentError([ParseIssue(pln, pcol,
                        f"column {j} of phi is zero; give col-degrees explicitly")])
                cols.append(d)
            degs1 = tuple(cols)
        out = MatrixFactorization(q, f, phi, psi, tuple(degs0), tuple(degs1))
        self._cache[key] = out
        return out

    def small_extension(self, name: str):
        from .deform import ArtinAlgebra, SmallExtension
        key = ("se", name)
        if key in self._cache:
            return self._cache[key]
        b = self.doc.block("small-extension", name)
        up = self.ring(self._ref(b, "upstairs", ("artin", "ring")).name)
        down = self.ring(self._ref(b, "downstairs", ("artin", "ring")).name)
        out = SmallExtension(ArtinAlgebra(up), ArtinAlgebra(down))
        self._cache[key] = out
        return out
