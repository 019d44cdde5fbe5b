"""Feature range analysis for hybrid automata."""

import json

from ._core import Error, ResourceExhausted, SyntaxError, feature_automaton
from ._core import Problem as _Problem

__all__ = ["Error", "ResourceExhausted", "SyntaxError", "Problem", "load", "from_text", "feature_automaton"]


def _params(params):
    return {k: str(v) for k, v in (params or {}).items()}


class Problem:
    """A model paired with a grounded feature. Report methods return dicts."""

    def __init__(self, core):
        self._core = core

    @property
    def feature_name(self):
        return self._core.feature_name

    @property
    def warnings(self):
        return list(self._core.warnings)

    def bounds(self):
        return json.loads(self._core.bounds())

    def product_text(self):
        return self._core.product_text()

    def reach(self, horizon, max_states=20000):
        return json.loads(self._core.reach(str(horizon), max_states))

    def corner(self, horizon, hops=15, step_size="1/1000000", epsilon="1/1000000", direct=False,
               max_paths=100000, max_work=10000000):
        return json.loads(self._core.corner(str(horizon), hops, str(step_size), str(epsilon), direct,
                                            max_paths, max_work))

    def sim(self, horizon, runs=100, seed=1, dt=1e-3):
        return json.loads(self._core.sim(str(horizon), runs, seed, dt))

    def compare(self, horizon, hops=15, step_size="1/1000000", epsilon="1/1000000", runs=100, seed=1,
                dt=1e-3, max_states=20000):
        return json.loads(self._core.compare(str(horizon), hops, str(step_size), str(epsilon), runs, seed, dt,
                                             max_states))


def load(model, feature, params=None, hybridize=True):
    return Problem(_Problem.from_files(str(model), str(feature), _params(params), hybridize))


def from_text(model, feature, params=None, hybridize=True):
    return Problem(_Problem.from_text(model, feature, _params(params), hybridize))
