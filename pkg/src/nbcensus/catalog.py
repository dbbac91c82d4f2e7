"""Declarative motif catalog: one entry per rooted pattern id.

Entry kinds:
  {"kind": "expr", "expr": <tree>}         counted by an expression tree
  {"kind": "rowrev_of", "of": id}          reversal partner of a sibling
  {"kind": "gamma_of", "of": id,
   "num": p, "den": q}                     vertex count = (p/q) * gamma(edge count)

Ids follow the appendix labels; vertex-rooted ids carry a trailing "v" so
both rootings of the same family can live in one namespace. Two entries
are deliberately not as printed: the X45 and X052 lines are defined as
reversals of themselves in the source, which is circular; they are pinned
to the only sibling that completes the root-orbit set and both fixes are
oracle-verified (see CORRECTIONS.md).

The association id -> concrete pattern (shape + root) is not derivable
from the formulas alone; it was established once by matching every
formula against the embedding oracle over a corpus of small graphs and is
frozen in data/motif_patterns.json.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .graphs import Graph

# shared subtrees -----------------------------------------------------------

_SQL = ("had", "square", ("rowrev", "B2"))
_SQR = ("had", "square", ("colrev", "B2"))
_B1 = ("rowsum", "B")
_TRI1 = ("rowsum", "tri")


def _expr(tree):
    return {"kind": "expr", "expr": tree}


def _rev(of):
    return {"kind": "rowrev_of", "of": of}


def _gamma(of, num=1, den=1):
    return {"kind": "gamma_of", "of": of, "num": num, "den": den}


EDGE_ORDER3 = {
    "P3": _expr(_B1),
    "P3r": _rev("P3"),
    "C3": _expr(_TRI1),
}

VERTEX_ORDER3 = {
    "P3v": _gamma("P3"),
    "P3rv": _gamma("P3r", 1, 2),
    "C3v": _gamma("C3", 1, 2),
}

EDGE_ORDER4 = {
    "X11": _expr(("rowsum", "square")),
    "X21": _expr(("rowsum", "wedge")),
    "X22": _rev("X21"),
    "X23": _expr(("sub", ("had", _B1, ("colsum", "B")), _TRI1)),
    "X31": _expr(("binom", _B1, 2)),
    "X32": _rev("X31"),
    "X41": _expr(("div", ("rowsum", "twin"), 2)),
    "X42": _rev("X41"),
    "X43": _expr(("colsum", "twin")),
    "X44": _expr(("had", _TRI1, ("sshift", _B1, 1))),
    "X45": _rev("X44"),
    "X51": _expr(("binom", _TRI1, 2)),
    "X52": _expr(("rowsum", _SQR)),
    "X53": _rev("X52"),
    "X61": _expr(("div", ("rowsum", "crossed"), 2)),
}

VERTEX_ORDER4 = {
    "X11v": _gamma("X11", 1, 2),
    "X21v": _gamma("X21"),
    "X22v": _gamma("X22"),
    # The printed star links pair each vertex form with its same-numbered
    # edge form, but a third of the leaf-rooted aggregate is not an
    # integer: the links only work crossed (see CORRECTIONS.md).
    "X31v": _gamma("X32", 1, 3),
    "X32v": _gamma("X31"),
    "X41v": _gamma("X41"),
    "X42v": _gamma("X42"),
    "X43v": _gamma("X43"),
    "X51v": _gamma("X51"),
    "X52v": _gamma("X52", 1, 2),
    "X61v": _gamma("X61", 1, 3),
}

EDGE_ORDER5 = {
    # 01: stars
    "X011": _expr(("binom", ("rowrev", _B1), 3)),
    "X012": _rev("X011"),
    # 02
    "X021": _expr(("sub", ("had", ("rowsum", "wedge"), ("sshift", _B1, 1)),
                   ("rowsum", "twin"))),
    "X022": _rev("X021"),
    "X023": _expr(("sub", ("had", ("binom", _B1, 2), ("rowrev", _B1)),
                   ("had", _TRI1, ("sshift", _B1, 1)))),
    "X024": _rev("X023"),
    "X025": _expr(("sub", ("mm", "B", ("binom", _B1, 2)), ("rowsum", "texit"))),
    "X026": _rev("X025"),
    # 03
    "X031": _expr(("rowsum", "chordless3")),
    "X032": _rev("X031"),
    "X033": _expr(("sub", ("sub", ("had", ("rowsum", "wedge"), ("rowrev", _B1)),
                           ("rowsum", "square")), ("rowsum", "texit"))),
    "X034": _rev("X033"),
    # 04
    "X041": _expr(("div", ("rowsum", ("had", "chordless3", ("colrev", "B2"))), 2)),
    "X042": _rev("X041"),
    "X043": _expr(("sub", ("had", ("rowsum", "square"),
                           ("sshift", ("rowrev", _B1), 1)), ("rowsum", _SQL))),
    "X044": _rev("X043"),
    "X045": _expr(("colsum", ("had", "chordless3", ("colrev", "B2")))),
    "X046": _rev("X045"),
    # 05
    # The degree factor here reads off the far endpoint of the reversed
    # root edge; the unreversed form is fractional on some graphs.
    "X051": _expr(("div", ("had", ("colsum", "texit"),
                           ("sshift", ("rowrev", _B1), 2)), 2)),
    "X052": _rev("X051"),
    "X053": _expr(("had", _TRI1, ("binom", ("sshift", _B1, 1), 2))),
    "X054": _rev("X053"),
    "X055": _expr(("div", ("rowsum", ("sub", ("mm", "texit", ("rowrev", "B")),
                                      ("scale", 2, "texit"))), 2)),
    # 06
    "X061": _expr(("rowsum", ("had", "B3", ("T", "B2")))),
    # 07
    "X071": _expr(("div", ("rowsum", ("had", "crossed", "join")), 6)),
    # 08
    "X081": _expr(("div", ("rowsum", ("had", "crossed", ("mm", "texit", "B"))), 2)),
    "X082": _expr(("div", ("colsum", ("had", "crossed", ("mm", "texit", "B"))), 2)),
    "X083": _rev("X082"),
    # 09
    "X091": _expr(("div", ("rowsum", ("sub", ("mm", "crossed", "tri"),
                                      ("scale", 2, "crossed"))), 2)),
    "X092": _expr(("rowsum", ("had", ("mm", "crossed", "square"), "B"))),
    "X093": _rev("X092"),
    "X094": _expr(("div", ("had", ("rowsum", "crossed"),
                           ("sshift", _TRI1, 2)), 2)),
    "X095": _expr(("div", ("sub", ("colsum", ("mm", "crossed", "tri")),
                           ("scale", 2, ("rowsum", "crossed"))), 2)),
    "X096": _rev("X095"),
    # 10
    "X101": _expr(("rowsum", ("had", "square", "join"))),
    "X102": _expr(("rowsum", ("binom", ("had", ("mm", "tri", ("rowrev", "tri")),
                                        ("T", "B")), 2))),
    "X103": _rev("X102"),
    # 11
    "X111": _expr(("div", ("had", ("rowsum", "crossed"),
                           ("sshift", ("rowrev", _B1), 2)), 2)),
    "X112": _rev("X111"),
    "X113": _expr(("div", ("colsum", ("sub", ("mm", "crossed", "B"),
                                      ("scale", 2, "crossed"))), 6)),
    "X114": _rev("X113"),
    "X115": _expr(("sub", ("rowsum", ("mm", "crossed", "B")),
                   ("scale", 2, ("colsum", "crossed")))),
    # 12
    "X121": _expr(("colsum", ("sub",
                   ("had", "B3", ("had", ("mm", "tri", ("rowrev", "tri")),
                                  ("T", "B"))),
                   ("had", ("mm", "tri", ("rowrev", "tri")), ("T", "B"))))),
    "X122": _rev("X121"),
    "X123": _expr(("div", ("colsum", ("had", ("mm", "square", "tri"), "B2")), 2)),
    "X124": _expr(("div", ("colsum", ("had", "square", ("mm", "texit", "B"))), 2)),
    "X125": _rev("X124"),
    # 13
    "X131": _expr(("rowsum", ("had", ("mm", "square", "square"), ("T", "B")))),
    "X132": _rev("X131"),
    "X133": _expr(("sub", ("had", ("rowsum", _SQL), ("sshift", _TRI1, 1)),
                   ("rowsum", "crossed"))),
    "X134": _rev("X133"),
    "X135": _expr(("rowsum", ("sub", ("sub", ("mm", _SQL, "tri"), _SQL),
                              "crossed"))),
    "X136": _rev("X135"),
    "X137": _expr(("rowsum", ("sub",
                   ("sub", ("mm", ("had", ("had", "B3", "B2"), ("T", "B")), "tri"),
                    ("had", ("had", "B3", "B2"), ("T", "B"))),
                   "crossed"))),
    # 14
    "X141": _expr(("binom", _TRI1, 3)),
    "X142": _expr(("mm", "tri", ("binom", ("sshift", _TRI1, 1), 2))),
    "X143": _rev("X142"),
    # 15
    "X151": _expr(("div", ("colsum", ("hadnot", ("hadnot", ("mm", "texit", "tri"),
                                                 "B"), ("rowrev", "B"))), 2)),
    "X152": _rev("X151"),
    "X153": _expr(("div", ("rowsum", ("hadnot", ("hadnot", ("mm", "texit", "tri"),
                                                 "B"), ("rowrev", "B"))), 2)),
    # 16
    "X161": _expr(("div", ("colsum", ("sub", ("sub", ("mm", _SQR, ("rowrev", "B")),
                                              "crossed"), _SQR)), 2)),
    "X162": _rev("X161"),
    "X163": _expr(("sub", ("had", ("rowsum", _SQL), ("sshift", _B1, 1)),
                   ("rowsum", "crossed"))),
    "X164": _rev("X163"),
    "X165": _expr(("rowsum", ("sub", ("hadnot", ("mm", _SQR, ("rowrev", "B")),
                                      ("colrev", "B")), "crossed"))),
    "X166": _rev("X165"),
    "X167": _expr(("sub", ("had", ("sshift", _TRI1, 1), ("rowsum", "texit")),
                   ("rowsum", "crossed"))),
    # 17
    "X171": _expr(("sub", ("mm", "B", ("binom", _TRI1, 2)), ("rowsum", _SQR))),
    "X172": _rev("X171"),
    "X173": _expr(("had", ("rowsum", _SQR), ("sshift", _B1, 2))),
    "X174": _rev("X173"),
    "X175": _expr(("rowsum", ("hadnot", ("hadnot", ("mm", _SQR, "B"),
                                         ("colrev", "B")), ("T", "B")))),
    "X176": _rev("X175"),
    "X177": _expr(("had", ("binom", _TRI1, 2), ("sshift", _B1, 2))),
    "X178": _rev("X177"),
    # 18
    "X181": _expr(("rowsum", ("hadnot", ("hadnot", ("mm", "tri", "square"),
                                         ("colrev", "B")), "B"))),
    "X182": _rev("X181"),
    "X183": _expr(("rowsum", ("sub", ("hadnot", ("mm", ("had", "B3", ("T", "B")),
                                                 "tri"), "B"), _SQL))),
    "X184": _rev("X183"),
    "X185": _expr(("colsum", ("hadnot", ("hadnot", ("mm", "tri", "square"),
                                         ("colrev", "B")), "B"))),
    "X186": _expr(("sub", ("had", _TRI1, ("rowsum", "square")),
                   ("rowsum", ("had", "square",
                               ("add", ("colrev", "B2"), ("rowrev", "B2")))))),
    # 19
    "X191": _expr(("colsum", ("binom", ("had", "B3", ("T", "B")), 2))),
    "X192": _rev("X191"),
    # 20
    "X201": _expr(("div", ("colsum",
                   ("hadnot", ("hadnot", ("hadnot", ("hadnot", ("mm", "texit", "B"),
                    "B"), ("rowrev", "B")), ("colrev", "B")), ("T", "B"))), 2)),
    "X202": _rev("X201"),
    "X203": _expr(("div", ("sub", ("had", ("colsum", "texit"), _B1),
                           ("scale", 2, ("rowsum", _SQL))), 2)),
    "X204": _rev("X203"),
    # Both collapse corrections subtract; the printed difference form
    # undercorrects the chorded-square collapse.
    "X205": _expr(("sub", ("had", _TRI1, ("rowsum", "wedge")),
                   ("rowsum", ("add", "texit", _SQR)))),
    "X206": _rev("X205"),
    "X207": _expr(("rowsum",
                   ("hadnot", ("hadnot", ("hadnot", ("hadnot", ("mm", "texit", "B"),
                    "B"), ("rowrev", "B")), ("colrev", "B")), ("T", "B")))),
}

VERTEX_ORDER5 = {
    "X011v": _gamma("X011", 1, 4),
    "X012v": _gamma("X012"),
    "X021v": _gamma("X022", 1, 2),
    "X022v": _gamma("X021"),
    "X023v": _gamma("X023"),
    "X024v": _gamma("X025"),
    "X031v": _gamma("X031"),
    "X032v": _gamma("X032"),
    "X033v": _gamma("X034", 1, 2),
    "X041v": _gamma("X041"),
    "X042v": _gamma("X043", 1, 2),
    "X043v": _gamma("X044"),
    "X044v": _gamma("X045", 1, 2),
    "X051v": _gamma("X052"),
    "X052v": _gamma("X051", 1, 2),
    "X053v": _gamma("X053"),
    "X061v": _gamma("X061", 1, 2),
    "X071v": _gamma("X071", 1, 4),
    "X081v": _gamma("X081", 1, 2),
    "X082v": _gamma("X083", 1, 3),
    "X091v": _gamma("X091"),
    "X092v": _gamma("X096"),
    "X093v": _gamma("X095", 1, 2),
    "X101v": _gamma("X101", 1, 2),
    "X102v": _gamma("X102", 1, 4),
    "X111v": _gamma("X111", 1, 3),
    "X112v": _gamma("X112"),
    "X113v": _gamma("X114"),
    "X121v": _gamma("X121", 1, 2),
    "X122v": _gamma("X122", 1, 2),
    "X123v": _gamma("X125", 1, 2),
    "X131v": _gamma("X131", 1, 2),
    "X132v": _gamma("X132"),
    "X133v": _gamma("X134"),
    "X141v": _gamma("X141"),
    "X142v": _gamma("X143", 1, 2),
    "X151v": _gamma("X151"),
    "X152v": _gamma("X152", 1, 4),
    "X161v": _gamma("X162"),
    "X162v": _gamma("X161"),
    "X163v": _gamma("X163"),
    "X164v": _gamma("X165", 1, 2),
    "X171v": _gamma("X171"),
    "X172v": _gamma("X172"),
    "X173v": _gamma("X175"),
    "X174v": _gamma("X176", 1, 2),
    "X181v": _gamma("X182", 1, 2),
    "X182v": _gamma("X181"),
    "X183v": _gamma("X184"),
    "X191v": _gamma("X191", 1, 3),
    "X192v": _gamma("X192", 1, 2),
    "X201v": _gamma("X202"),
    "X202v": _gamma("X201"),
    "X203v": _gamma("X203"),
    "X204v": _gamma("X205"),
}


def entries_for_order(order: int) -> tuple[dict, dict]:
    if order == 3:
        return EDGE_ORDER3, VERTEX_ORDER3
    if order == 4:
        return EDGE_ORDER4, VERTEX_ORDER4
    if order == 5:
        return EDGE_ORDER5, VERTEX_ORDER5
    raise ValueError("catalog carries orders 3, 4 and 5")


def all_ids() -> list[str]:
    out = []
    for order in (3, 4, 5):
        e, v = entries_for_order(order)
        out.extend(e)
        out.extend(v)
    return out


@lru_cache(maxsize=1)
def _patterns_raw() -> dict:
    path = resources.files("nbcensus.data").joinpath("motif_patterns.json")
    return json.loads(path.read_text())


def pattern_for(mid: str) -> tuple[Graph, tuple[int, ...]]:
    """The frozen (shape, root) behind a catalog id.

    Edge-rooted ids return a directed pair root; vertex-rooted ids a
    1-tuple. Raises KeyError for ids without a frozen pattern.
    """
    info = _patterns_raw()[mid]
    g = Graph(info["order"], [tuple(e) for e in info["edges"]])
    return g, tuple(info["root"])
