"""
Rewriting queries over a ten-row car listing
============================================

A mediator fronts a listing table it can only reach through selection
queries.  Four sedans answer ``Body=Sedan`` directly; three more rows
have a null where Body should be.  This walks the whole trick: hand a
Bayes net the sample, read Body's Markov blanket, and issue the blanket
projections of the certain answers as new queries, ranked by how likely
their matches are to be sedans.
"""

import numpy as np

from nullbayes import (
    AutonomousSource,
    BayesNet,
    BeamConfig,
    Row,
    Schema,
    SelectionQuery,
    Table,
    bn_all_mb,
    bn_beam,
    fit_parameters,
    markov_blanket,
    uniform_cpts,
)

#############################################################################
# The listing table.  Empty strings below stand for cells the source never
# filled in; ids are 1-based so they read like the table in a catalog.

schema = Schema(
    ("Make", "Model", "Year", "Body", "Mileage"),
    {
        "Make": ("Acura", "Audi", "BMW"),
        "Model": ("645", "745", "A8", "tl"),
        "Year": ("1999", "2002", "2003", "2005"),
        "Body": ("Convt", "Coupe", "Sedan"),
        "Mileage": ("15000", "20000", "40000"),
    },
)

_raw = [
    ("Audi", "A8", "2005", "Sedan", "20000"),
    ("Audi", "A8", "2005", None, "15000"),
    ("Acura", "tl", "2003", "Sedan", None),
    ("BMW", "745", "2002", "Sedan", "40000"),
    (None, "745", "2002", "Sedan", None),
    (None, "645", "1999", "Convt", None),
    (None, "645", "1999", "Coupe", None),
    (None, "645", "1999", "Convt", None),
    ("BMW", "645", "1999", "Coupe", "40000"),
    ("BMW", "645", "1999", "Convt", "40000"),
]
table = Table(schema, [Row(i + 1, cells) for i, cells in enumerate(_raw)])

#############################################################################
# A net whose structure we fix by hand: Model follows Make, Body follows
# Model and Year, Mileage follows Year.  Parameters come from the table
# itself with Laplace smoothing.

parents = {"Model": ("Make",), "Body": ("Model", "Year"), "Mileage": ("Year",)}
net = fit_parameters(BayesNet(schema, parents, uniform_cpts(schema, parents)), table)

print("Markov blanket of Body:", sorted(markov_blanket(net, "Body")))

#############################################################################
# BN-All-MB: project the certain answers onto the blanket, one rewritten
# query per distinct projection, ranked by expected precision.

query = SelectionQuery({"Body": "Sedan"})
result = bn_all_mb(net, table, AutonomousSource(table), query, sample_ratio=1.0)

print(f"\ncertain answers for {query.text()}: rows",
      [r.id for r in result.base])
print("rewritten queries, best first:")
for rq in result.issued:
    s = rq.score
    print(f"  P={s.precision:.3f}  ExpSel={s.selectivity:.1f}  {rq.text()}")
print("extended answers:")
for ans in result.answers:
    print(f"  row {ans.row.id}  relevance {ans.relevance:.3f}  cells {ans.row.cells}")

#############################################################################
# The same machinery on a two-attribute query, this time with beam search
# over subsets of the blanket attributes.  Row 5 hides its Make; the beam
# finds it through Model and Year alone.

query2 = SelectionQuery({"Make": "BMW", "Mileage": "40000"})
beamed = bn_beam(
    net, table, AutonomousSource(table), query2,
    BeamConfig(width=5, depth=2, alpha=0.0, top_k=10), sample_ratio=1.0,
)
print(f"\ncertain answers for {query2.text()}: rows",
      [r.id for r in beamed.base])
print("beam candidates:")
for rq in beamed.candidates:
    print(f"  P={rq.score.precision:.3f}  {rq.text()}")
print("extended answers:", [a.row.id for a in beamed.answers])
