"""The full exploration loop, scripted.

View, inspect a cluster, absorb it as background knowledge, view again:
the pattern disappears from the comparison and the next structure takes
its place.  The brushed row sets are the frozen cluster selections that
ship with the package.
"""

from tilepursuit import PointSelection, Session, crosstab
from tilepursuit.german import frozen_selections, load_german, unguided_hypothesis

data = load_german()
clusters = frozen_selections()

session = Session(data, seed=0)
session.set_hypothesis(unguided_hypothesis(data))

view1 = session.compute_view()
print(f"step 1: gain {view1.gain:.3f}")

# inspect the brushed cluster before committing it
sel = PointSelection(clusters["cluster1"], source="brush step 1")
for col in ("Region", "Type"):
    print(f"  {col}: {crosstab(data, col, sel)}")
report = session.selection_report(sel, tau=2 / 3)
low = [(c.name, round(c.ratio, 2)) for c in report.columns if c.chosen]
print(f"  homogeneous attributes (ratio < 2/3): {low}")

# commit: the selection becomes a tile in the background knowledge
session.add_tile_from_selection(sel, tau=2 / 3)
view2 = session.compute_view()
print(f"\nstep 2: gain {view2.gain:.3f} (dropped: the cluster is now expected)")

sel2 = PointSelection(clusters["cluster2"], source="brush step 2")
for col in ("Region", "Type"):
    print(f"  {col}: {crosstab(data, col, sel2)}")

# the event log replays to the same state, bit for bit
replayed = Session.replay(data, session.history, seed=session.seed)
replay_view = replayed.compute_view()
print("\nreplay reproduces the view exactly:",
      (replay_view.coords_data == view2.coords_data).all()
      and (replay_view.coords_sample_h1 == view2.coords_sample_h1).all())
