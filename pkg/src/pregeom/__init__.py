"""Permutation-group actions on pregeometries: quotients, basic pairs, and their classification."""

from .action import BoundAction, bind, in_family_G
from .errors import (CapacityError, ClassificationError, MembershipError, PregeomError, TheoremViolation,
                     ValidationError)
from .geom import Pregeometry, direct_sum, gamma_km
from .perm import PermGroup

__version__ = "0.1.0"
