"""Summarize the bundled 13-dataset recall table and test the gaps.

Prints per-dataset recall at rank 4000, the mean/sd summary for each
system and rank, and one-sided paired t-tests asking whether the
regularized ratio's mean recall beats each baseline's.
"""
from ruleratio import compare_systems, load_benchmark, summary

table = load_benchmark()
systems = ("proposed", "apriori", "additive")
ranks = (1000, 4000, 12000)

print("recall at rank 4000 by dataset:")
cols = {s: table.column(s, 4000) for s in systems}
print(f"  {'dataset':<10}" + "".join(f"{s:>10}" for s in systems))
for i, name in enumerate(table.datasets):
    print(f"  {name:<10}" + "".join(f"{cols[s][i]:>10.4f}" for s in systems))

print("\nmean recall (sample sd) over the 13 datasets:")
for s in systems:
    cells = []
    for k in ranks:
        m, sd = summary(table.column(s, k))
        cells.append(f"@{k}: {m:.4f} ({sd:.4f})")
    print(f"  {s:<10} " + "   ".join(cells))

print("\none-sided paired t-tests, proposed vs baseline (12 dof):")
for other in ("apriori", "additive"):
    for k in ranks:
        res, a, b = compare_systems(table, "proposed", other, k)
        m, _ = summary([x - y for x, y in zip(a, b)])
        print(f"  vs {other:<9} @{k:<6} mean diff {m:+.4f}   "
              f"t = {res.t:6.3f}   p = {res.p:.2e}")
