"""typing.py

Provide type definitions for use in other modules
"""

from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

#: a point of the unit torus, either exact or Float64
CirclePoint = Union[Fraction, float]
#: anything we accept where a real parameter is expected (strings like "1/3" included)
RealLike = Union[Fraction, float, int, str]
#: a materialized list of points, a tuple of Fractions in exact mode or a float64 array
PointArray = Union[Tuple[Fraction, ...], np.ndarray]
PointsLike = Union[PointArray, Sequence[CirclePoint], Iterable[CirclePoint]]
