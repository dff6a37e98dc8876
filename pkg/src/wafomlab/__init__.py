"""Walsh figure of merit for subgroups of G^(s x n) over a finite abelian group G."""

from .abelian import GroupSpec, dft, dft_naive, inverse_dft, poisson_sum_check
from .enumerator import (
    INFINITE_WEIGHT, WeightEnumerator, direct_enumerator, min_dick_weight, weight_enumerator,
)
from .errors import (
    CapacityError, CorruptGroupError, NetFormatError, PreconditionError, SpecMismatchError, WafomError,
)
from .netfile import format_net, parse_net_file, parse_net_text, write_net_file
from .netgen import (
    GeneratingMatrices, GeneratorSet, PointGroup, digital_net, dual, span, trivial_group, whole_group,
)
from .qmc import discretized_qmc, make_function, walsh, walsh_coefficient_check
from .search import SearchConfig, SearchResult, run_search, success_probability_bound
from .wafom import (
    WafomReport, evaluate, existence_bound, lower_bound, order_window, tail_bound, tail_exact,
    wafom_dual, wafom_exact, wafom_fast,
)
from .weight import dick_weight, sphere_sizes, volume

__version__ = "0.1.0"
