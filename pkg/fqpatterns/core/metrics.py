from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

TRIALS_RUN = Counter(
    "fqp_trials_total",
    "Monte Carlo trials executed",
    ["family"],
    registry=REGISTRY,
)
PATTERNS_COUNTED = Counter(
    "fqp_patterns_counted_total",
    "Patterns found inside sampled sets",
    ["family"],
    registry=REGISTRY,
)
POINTS_DELETED = Counter(
    "fqp_points_deleted_total",
    "Points removed by the deletion construction",
    ["family"],
    registry=REGISTRY,
)
CAP_REJECTIONS = Counter(
    "fqp_cap_rejections_total",
    "Requests rejected by a resource cap",
    ["cap"],
    registry=REGISTRY,
)
SHARD_LATENCY = Histogram(
    "fqp_shard_seconds",
    "Wall time of one trial shard",
    ["family"],
    buckets=[0.01, 0.05, 0.1, 0.5, 1, 5, 10, 30, 60, 300],
    registry=REGISTRY,
)


def write_metrics(path: str) -> None:
    """Dump the registry in node-exporter textfile format."""
    write_to_textfile(path, REGISTRY)
