"""Cost model, configurator and trace replay for hybrid VM and serverless inference pools."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"


def to_dict(obj):
    """JSON form of any object exposing to_json()."""
    return _json.loads(obj.to_json())


def plan_for(profile, dist, pricing, n=None, r_max=100.0, slo=None, options=None):
    """Feasibility filter plus selection in one call. Raises InfeasibleError."""
    from ._core import CostOptions, InfeasibleError, select_plan, slo_feasible

    slo = profile.slo if slo is None else slo
    feasible = slo_feasible(profile, pricing, r_max, slo)
    if not feasible:
        raise InfeasibleError("No configuration meets SLO.")
    options = CostOptions(transmission_s=pricing.offload_transmission_s) if options is None else options
    return select_plan(profile, dist, feasible, pricing, r_max if n is None else n, r_max, slo, options)
