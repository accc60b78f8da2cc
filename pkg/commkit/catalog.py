from enum import Enum


class MetricId(str, Enum):
    """
    Edge scorers available to the divisive engine.

    Values are the identifiers accepted on the command line.
    """

    BETWEENNESS = "betweenness"  # Girvan-Newman edge betweenness
    RADICCHI = "radicchi"  # edge clustering coefficient
    CN = "cn"  # common neighbours
    AA = "aa"  # Adamic-Adar
    RA = "ra"  # resource allocation
    PA = "pa"  # preferential attachment
    JA = "ja"  # Jaccard
    SO = "so"  # Sorensen
    SA = "sa"  # Salton (cosine)
    HD = "hd"  # hub depressed
    HP = "hp"  # hub promoted
    LLHN = "llhn"  # Leicht-Holme-Newman

    @classmethod
    def parse(cls, text: str) -> "MetricId":
        """
        Look up a metric by its identifier, case-insensitively.

        Raises:
            ValueError: If the identifier is unknown.

        """
        try:
            return cls(text.strip().lower())
        except ValueError:
            known = ", ".join(m.value for m in cls)
            msg = f"Unknown metric {text!r}; expected one of: {known}"
            raise ValueError(msg) from None


class Orientation(Enum):
    """Which end of the score ranking the engine removes."""

    REMOVE_MAX = "max"
    REMOVE_MIN = "min"


class RecomputePolicy(str, Enum):
    """How edge scores are refreshed after each removal."""

    FULL = "full"
    NEIGHBORHOOD = "neighborhood"


class StopReason(Enum):
    """Why a divisive run ended."""

    TARGET_REACHED = "target_reached"
    EXHAUSTED = "exhausted"
    DEADLOCK = "deadlock"


SIMILARITY_METRICS: tuple[MetricId, ...] = (
    MetricId.CN,
    MetricId.AA,
    MetricId.RA,
    MetricId.PA,
    MetricId.JA,
    MetricId.SO,
    MetricId.SA,
    MetricId.HD,
    MetricId.HP,
    MetricId.LLHN,
)

_ORIENTATION_BY_METRIC: dict[MetricId, Orientation] = {
    MetricId.BETWEENNESS: Orientation.REMOVE_MAX,
    MetricId.RADICCHI: Orientation.REMOVE_MIN,
    **dict.fromkeys(SIMILARITY_METRICS, Orientation.REMOVE_MIN),
}

# scores that depend only on the endpoints' neighbourhoods
_LOCAL_METRICS = frozenset((MetricId.RADICCHI, *SIMILARITY_METRICS))


def get_orientation(metric: MetricId) -> Orientation:
    """Return the fixed removal orientation of a metric."""
    return _ORIENTATION_BY_METRIC[metric]


def is_locality_eligible(metric: MetricId) -> bool:
    """
    Tell whether NEIGHBORHOOD rescoring is exact for a metric.

    Args:
        metric: The metric to check.

    Returns:
        True for Radicchi and the ten similarity indices, False for betweenness,
        whose scores change across a whole component after every removal.

    """
    return metric in _LOCAL_METRICS
