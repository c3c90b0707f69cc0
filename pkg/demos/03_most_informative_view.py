"""First look at the district data: the generic most-informative view.

With no background knowledge and the most generic interest (every
relation between every column), the optimal direction coincides with the
first principal component of the correlation matrix; the view still adds
the two surrogate overlays that show what each hypothesis side predicts.

Writes `district_view.svg` next to this script when run directly.
"""

from pathlib import Path

import numpy as np

from tilepursuit import Session
from tilepursuit.german import load_german, unguided_hypothesis

data = load_german()  # synthetic stand-in unless TILEPURSUIT_GERMAN_CSV is set
print(f"{data.n_rows} districts x {data.n_cols} attributes; factors: {list(data.side_cols)}")

session = Session(data, seed=0)
session.set_hypothesis(unguided_hypothesis(data))
view = session.compute_view(num_samples=1)

print(f"\ngain of the optimal view: {view.gain:.3f}")
for axis, labels in enumerate(view.axis_labels(data.col_names)):
    pretty = ", ".join(f"{l['name']} {l['value']:+.2f}" for l in labels)
    print(f"axis {axis + 1} leading loadings: {pretty}")

# where do the East rural districts land?
region = np.asarray(data.side_cols["Region"])
typ = np.asarray(data.side_cols["Type"])
east_rural = (region == "East") & (typ == "Rural")
coords = view.coords_data
print(f"\nEast-rural centroid: ({coords[east_rural, 0].mean():+.2f}, {coords[east_rural, 1].mean():+.2f})")
print(f"everyone else:       ({coords[~east_rural, 0].mean():+.2f}, {coords[~east_rural, 1].mean():+.2f})")

if __name__ == "__main__":
    from tilepursuit.experiments import _scatter_svg

    out = Path(__file__).with_name("district_view.svg")
    _scatter_svg(out, view, data, title="generic exploration view")
    print(f"\nwrote {out}")
