"""Default parameter sets in one place; the CLI builds its flag defaults here.

Matching: t_feat = 0.8, t_geom = 0.0, vertex cap 512, unit geometric weights
with saturation scale r0 = 1.0.  Annealing: 1000 sweeps, beta 0.1 -> 10,
16 restarts.
"""

from .conflict import MatchParams
from .detector import DetectorParams
from .graph_model import GeomWeights
from .solvers import AnnealSchedule


def default_geom_weights() -> GeomWeights:
    return GeomWeights()


def default_match_params() -> MatchParams:
    return MatchParams()


def default_detector_params() -> DetectorParams:
    return DetectorParams()


def default_anneal_schedule(seed: int = 0) -> AnnealSchedule:
    return AnnealSchedule(seed=seed)
