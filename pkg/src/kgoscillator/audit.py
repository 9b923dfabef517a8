"""Comparison of recomputed rows against the published table.

The published values ship with the package as ``data/published_table.csv``. Each
discrepancy becomes a :class:`Finding` so that callers (and CI) can assert
on codes instead of parsing prose.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

from .measures import (INEQUALITIES, PAPER_DIVERGENCE, TABLE_COLUMNS,
                       evaluate_inequalities)

TABLE_GAMMAS = (0.0, -0.16, -0.32, -0.48, -0.64, -0.80)
TABLE_NS = (0, 1, 2)

CLAIMS = {
    "stam": ("stam_x", "stam_p"),
    "cramer_rao": ("cramer_rao_x", "cramer_rao_p"),
    "fisher_product": ("fisher_product",),
    "bbm": ("bbm",),
}


@lru_cache(maxsize=None)
def _load():
    text = resources.files("kgoscillator").joinpath("data/published_table.csv").read_text()
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {k: float(v) for k, v in rec.items()}
        row["n"] = int(row["n"])
        rows.append(row)
    return tuple(rows)


def published_table():
    """Copies of the published rows, in printed order."""
    return [dict(r) for r in _load()]


def published_row(n, gamma):
    for r in _load():
        if r["n"] == n and abs(r["gamma"] - gamma) < 1e-9:
            return dict(r)
    return None


@dataclass
class Finding:
    code: str
    n: int
    gamma: float
    message: str
    published: dict | None = None
    recomputed: dict | None = None

    def to_dict(self):
        return asdict(self)


def _record_dict(rec):
    return None if rec is None else asdict(rec)


def _recomputed_values(rep, rec=None):
    out = {k: getattr(rep, k) for k in ("E", "x2", "p2", "Fx", "Fp", "Sx", "Sp", "S_sum")}
    out["record"] = _record_dict(rec)
    out["flags"] = list(rep.flags)
    return out


def published_inequalities(pub):
    return evaluate_inequalities(pub["x2"], pub["p2"], pub["Fx"], pub["Fp"],
                                 pub["Sx"], pub["Sp"])


def _caveat(rep):
    # a second moment of a sign-changing density is not a variance
    bad = [f for f in rep.flags if f.startswith(("weight_sign_change:", "forensic:"))]
    return f" (row flags: {', '.join(bad)})" if bad else ""


def row_findings(rep, compare_paper=False):
    """Structured diagnostics for one recomputed row."""
    out = []
    for name, rec in rep.inequalities().items():
        if rec is not None and not rec.satisfied:
            out.append(Finding(
                code=f"recomputed_{name}_violation", n=rep.n, gamma=rep.gamma,
                message=f"{name}: {rec.lhs:.6g} {rec.relation} {rec.rhs:.6g} "
                        f"fails by {-rec.margin:.3g}{_caveat(rep)}",
                recomputed=_recomputed_values(rep, rec)))

    for space, paper, direct in (("coordinate", rep.Fx_paper, rep.Fx),
                                 ("momentum", rep.Fp_paper, rep.Fp)):
        if paper is None or direct is None or "fisher_mode:paper" in rep.flags:
            continue
        if abs(paper - direct) > PAPER_DIVERGENCE * abs(direct):
            out.append(Finding(
                code="paper_fisher_discrepancy", n=rep.n, gamma=rep.gamma,
                message=f"{space} closed-form Fisher {paper:.6g} vs direct {direct:.6g}",
                published={"space": space, "closed_form": paper},
                recomputed={"space": space, "direct": direct,
                            "relative_deviation": (paper - direct) / direct}))

    if compare_paper:
        pub = published_row(rep.n, rep.gamma)
        if pub is not None:
            mine = rep.inequalities()
            for name, rec in published_inequalities(pub).items():
                if rec is not None and not rec.satisfied:
                    out.append(Finding(
                        code=f"published_{name}_violation", n=rep.n, gamma=rep.gamma,
                        message=f"published {name}: {rec.lhs:.6g} {rec.relation} "
                                f"{rec.rhs:.6g} fails by {-rec.margin:.3g}",
                        published=_record_dict(rec),
                        recomputed=_recomputed_values(rep, mine[name])))
    return out


def deviations(rep, pub):
    """Recomputed minus published, per table column (``None`` where missing)."""
    out = {}
    for col in TABLE_COLUMNS[2:]:
        mine = getattr(rep, col)
        out[col] = None if mine is None else mine - pub[col]
    return out


@dataclass
class ClaimSummary:
    claim: str
    satisfied: int = 0
    violated: int = 0
    undetermined: int = 0
    published_violated: int = 0
    verdict: str = ""
    rows: list = field(default_factory=list)


def summarize(reports, compare_paper=False):
    """Tally each uncertainty claim over the given rows."""
    summaries = {}
    for claim, names in CLAIMS.items():
        cs = ClaimSummary(claim=claim)
        for rep in reports:
            for name in names:
                rec = getattr(rep, name)
                if rec is None:
                    cs.undetermined += 1
                elif rec.satisfied:
                    cs.satisfied += 1
                else:
                    cs.violated += 1
                    cs.rows.append({"n": rep.n, "gamma": rep.gamma, "relation": name})
                if compare_paper:
                    pub = published_row(rep.n, rep.gamma)
                    if pub is not None:
                        prec = published_inequalities(pub)[name]
                        if prec is not None and not prec.satisfied:
                            cs.published_violated += 1
        if cs.violated:
            cs.verdict = "violated"
        elif cs.undetermined:
            cs.verdict = "holds where computable"
        else:
            cs.verdict = "holds"
        summaries[claim] = asdict(cs)
    return summaries


__all__ = ["CLAIMS", "Finding", "INEQUALITIES", "TABLE_GAMMAS", "TABLE_NS",
           "deviations", "published_row", "published_table", "row_findings",
           "summarize"]
