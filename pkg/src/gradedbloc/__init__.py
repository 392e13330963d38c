"""Group gradings on full and upper block-triangular matrix algebras."""

from .abgroup import AbGroup, Bicharacter, Character, FinSubgroup, Hom, QuadraticForm
from .blocktri import BlockProfile, KappaFn
from .classify import (TypeIIParams, TypeIParams, UTminusParams, build, enumerate_classes,
                       iso_decide, iso_utminus, validate)
from .cyclo import CycloNum, root_of_unity
from .gradedmat import GradedAlgebra, Mat, verify_grading

__version__ = "0.1.0"
