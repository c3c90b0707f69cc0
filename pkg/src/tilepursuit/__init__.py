"""Human-guided data exploration with tile-constrained randomisation.

The background knowledge and interests of a user exploring a numeric
table are modelled as permutation distributions constrained by tiles
(row x column blocks whose relations are preserved).  Comparing the two
distributions of a hypothesis pair yields, via whitening and an
eigendecomposition, the linear projection in which they differ most;
marking patterns in that projection produces new tiles, closing the loop.
"""

from .covariance import CenteredData, CovariancePair, center, hypothesis_covariances, tiling_covariance
from .errors import TilePursuitError
from .ingestion import DataMatrix, from_values, load_csv, make_toy, perturb
from .projection import (
    ProjectionResult,
    gain,
    most_informative_directions,
    pca_limit_check,
    project,
    whiten,
)
from .sampler import SampleConfig, sample_dataset, sample_permutation
from .selection import AttributeReport, PointSelection, attribute_ratios, crosstab, selection_to_tile
from .session import GainMatrixSpec, GainTable, Session, ViewState, create_session, gain_matrix
from .tiling import (
    HypothesisTilings,
    Tile,
    TileMap,
    enumerate_allowed,
    hypothesis_tilings,
    is_allowed,
    merge_tile,
    new_tilemap,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeReport",
    "CenteredData",
    "CovariancePair",
    "DataMatrix",
    "GainMatrixSpec",
    "GainTable",
    "HypothesisTilings",
    "PointSelection",
    "ProjectionResult",
    "SampleConfig",
    "Session",
    "Tile",
    "TileMap",
    "TilePursuitError",
    "ViewState",
    "attribute_ratios",
    "center",
    "create_session",
    "crosstab",
    "enumerate_allowed",
    "from_values",
    "gain",
    "gain_matrix",
    "hypothesis_covariances",
    "hypothesis_tilings",
    "is_allowed",
    "load_csv",
    "make_toy",
    "merge_tile",
    "most_informative_directions",
    "new_tilemap",
    "pca_limit_check",
    "perturb",
    "project",
    "sample_dataset",
    "sample_permutation",
    "selection_to_tile",
    "tiling_covariance",
    "whiten",
]
