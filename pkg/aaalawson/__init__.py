from .aaa import SampleSet, aaa_fit
from .barycentric import INFINITY, BarycentricRational, evaluate, poles
from .lawson import LawsonConfig, lawson_run
