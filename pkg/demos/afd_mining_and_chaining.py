"""
Approximate dependencies: mining, prediction, chains, cycles
============================================================

Functional dependencies in dirty data rarely hold exactly; an AFD keeps
the rule and remembers how often it lies.  This mines rules from a small
listing table, fills a row through a chained lookup, and shows the one
failure mode: two rules that need each other.
"""

from nullbayes import (
    Afd,
    Row,
    Schema,
    Table,
    afd_impute_tuple,
    best_afds,
    fit_naive_bayes,
    mine_afds,
)

schema = Schema(
    ("Make", "Model", "Year", "Body", "Mileage"),
    {
        "Make": ("Acura", "Audi", "BMW", "Hyundai"),
        "Model": ("645", "745", "A8", "MDX", "Santa"),
        "Year": ("1990", "1993", "1999", "2002", "2005"),
        "Body": ("Convt", "SUV", "Sedan"),
        "Mileage": ("12000", "15000", "20000", "30000", "40000", "45000"),
    },
)
rows = [
    ("Audi", None, None, "Sedan", "20000"),
    ("Audi", "A8", None, "Sedan", "15000"),
    ("BMW", "745", "2002", "Sedan", "40000"),
    ("Audi", None, "2005", "Sedan", "20000"),
    ("Audi", "A8", "2005", "Sedan", "20000"),
    ("BMW", "645", "1999", "Convt", None),
    ("Hyundai", "Santa", "1990", "SUV", "45000"),
    ("Hyundai", "Santa", "1993", None, "40000"),
    ("Acura", "MDX", "1990", "SUV", "30000"),
    ("Acura", "MDX", "1990", None, "12000"),
]
table = Table(schema, [Row(i + 1, c) for i, c in enumerate(rows)])

#############################################################################
# Mine every rule with up to two determining attributes.  Confidence is the
# fraction of (null-free) rows the rule gets right, so 1.0 means it never
# missed in this table.

afds = mine_afds(table)
print(f"{len(afds)} rules mined; the strongest per target:")
for target, rule in sorted(best_afds(afds).items()):
    lhs = ", ".join(rule.determining)
    print(f"  {lhs} -> {target}   confidence {rule.confidence:.3f}")

#############################################################################
# Row 8 lost its Body.  Its Model is Santa, and Model -> Body holds with
# confidence 1.0, so the naive Bayes tie to the determining values fills it.

model = fit_naive_bayes(table)
completed, unpredictable = afd_impute_tuple(afds, model, table.rows[7])
print("\nrow 8 before:", table.rows[7].cells)
print("row 8 after: ", completed.cells, " unpredictable:", unpredictable)

#############################################################################
# Chains resolve missing determinants: if the best rule for Body needs Model
# and Model is null too, Model's own best rule runs first.  But a cycle of
# needs has no entry point.  Both attributes stay null and are reported.

cyclic = [Afd(("B",), "A", 0.9), Afd(("A",), "B", 0.9)]
tiny = Schema(("A", "B"), {"A": ("0", "1"), "B": ("0", "1")})
nb = fit_naive_bayes(Table(tiny, [Row(1, ("0", "0")), Row(2, ("1", "1"))]))
filled, stuck = afd_impute_tuple(cyclic, nb, Row(1, (None, None)))
print("\ncyclic ruleset, both cells null:")
print("  cells stay", filled.cells, " unpredictable:", stuck)
