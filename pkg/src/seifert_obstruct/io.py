"""Manifold text format and JSON documents.

Manifold files are line oriented::

    # comment
    block v genus 2 free 0
    block w genus 2 free 0
    edge w v glue 2 1 5 2

``edge x y glue a b c d`` gives the gluing matrix of the directed edge x -> y.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .manifold import GluingMatrix, GraphManifold, SeifertBlock, validate


class ManifoldParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ManifoldValidationError(ValueError):
    def __init__(self, report, lines: dict | None = None):
        self.report = report
        msgs = []
        for p in report.problems:
            where = ""
            if lines:
                for key, ln in lines.items():
                    if p.startswith(key + ":") or p.startswith(key + " "):
                        where = f"line {ln}: "
                        break
            msgs.append(where + p)
        super().__init__("invalid manifold:\n" + "\n".join(msgs))


def _check_id(tok: str, line: int) -> str:
    if not tok or any(ch in tok for ch in "#:"):
        raise ManifoldParseError(f"bad block id {tok!r}", line)
    return tok


def _int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ManifoldParseError(f"expected an integer, got {tok!r}", line) from None


def parse_manifold(text: str, check: bool = True) -> GraphManifold:
    blocks: dict[str, SeifertBlock] = {}
    edges: dict = {}
    where: dict[str, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        if kind == "block":
            if len(toks) != 6 or toks[2] != "genus" or toks[4] != "free":
                raise ManifoldParseError("expected 'block <id> genus <int> free <int>'", ln)
            bid = _check_id(toks[1], ln)
            if bid in blocks:
                raise ManifoldParseError(f"duplicate block id {bid!r}", ln)
            blocks[bid] = SeifertBlock(bid, _int(toks[3], ln), _int(toks[5], ln))
            where[f"block {bid}"] = ln
        elif kind == "edge":
            if len(toks) != 8 or toks[3] != "glue":
                raise ManifoldParseError("expected 'edge <id> <id> glue <a> <b> <c> <d>'", ln)
            v, w = _check_id(toks[1], ln), _check_id(toks[2], ln)
            if v == w:
                raise ManifoldParseError(f"self-loop edge at block {v!r}", ln)
            if (v, w) in edges or (w, v) in edges:
                raise ManifoldParseError(f"duplicate edge between {v!r} and {w!r}", ln)
            edges[(v, w)] = GluingMatrix(*(_int(t, ln) for t in toks[4:8]))
            where[f"edge {v} {w}"] = ln
        else:
            raise ManifoldParseError(f"unknown keyword {kind!r}", ln)
    for (v, w) in edges:
        for x in (v, w):
            if x not in blocks:
                raise ManifoldParseError(f"edge refers to unknown block {x!r}", where[f"edge {v} {w}"])
    m = GraphManifold(blocks, edges)
    if check:
        report = validate(m)
        if not report.ok:
            raise ManifoldValidationError(report, where)
    return m


def serialize_manifold(m: GraphManifold) -> str:
    lines = []
    for bid in m.block_ids():
        b = m.blocks[bid]
        lines.append(f"block {bid} genus {b.genus} free {b.free_boundaries}")
    for v, w in m.undirected_edges():
        g = m.edges[(v, w)]
        lines.append(f"edge {v} {w} glue {g.a} {g.b} {g.c} {g.d}")
    return "\n".join(lines) + "\n"


def read_manifold(path, check: bool = True) -> GraphManifold:
    with open(path) as fh:
        return parse_manifold(fh.read(), check=check)


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(path, data: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dump_json(data))


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# lossless reals


def real_to_json(x):
    """Ints and Fractions as exact strings, floats as hex."""
    if isinstance(x, bool):
        raise TypeError("bool is not a real")
    if isinstance(x, int):
        return {"int": str(x)}
    if isinstance(x, Fraction):
        return {"rational": f"{x.numerator}/{x.denominator}"}
    return {"float": float(x).hex()}


def real_from_json(d):
    if "int" in d:
        return int(d["int"])
    if "rational" in d:
        return Fraction(d["rational"])
    if "float" in d:
        return float.fromhex(d["float"])
    raise ValueError(f"unrecognized real encoding {d!r}")
