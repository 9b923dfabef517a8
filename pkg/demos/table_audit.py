"""Recompute the published table and list what disagrees with it."""
from kgoscillator.audit import TABLE_GAMMAS, TABLE_NS, published_row, row_findings, summarize
from kgoscillator.measures import report

reports = [report(g, n) for n in TABLE_NS for g in TABLE_GAMMAS]


def fmt(v):
    return "      --" if v is None else f"{v:8.4f}"


print("  n   gamma      x2   x2(pub)      Fx   Fx(pub)   S_sum  S_sum(pub)")
for rep in reports:
    pub = published_row(rep.n, rep.gamma)
    print(f"{rep.n:3d} {rep.gamma:+7.2f}  {fmt(rep.x2)}  {fmt(pub['x2'])}  {fmt(rep.Fx)}  "
          f"{fmt(pub['Fx'])}  {fmt(rep.S_sum)}  {fmt(pub['S_sum'])}")

# published rows that break their own inequalities, and closed-form Fisher mismatches
print()
for rep in reports:
    for f in row_findings(rep, compare_paper=True):
        if f.code.startswith("published_bbm") or (f.code == "paper_fisher_discrepancy" and rep.gamma == 0):
            print(f"n={f.n} gamma={f.gamma:+.2f} {f.code}: {f.message}")

print()
for claim, s in summarize(reports, compare_paper=True).items():
    print(f"{claim:15s} {s['verdict']:24s} ok={s['satisfied']} bad={s['violated']} "
          f"n/a={s['undetermined']} published_bad={s['published_violated']}")
