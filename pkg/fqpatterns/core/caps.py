from fqpatterns.core.config import settings
from fqpatterns.core.errors import TooLarge
from fqpatterns.core.metrics import CAP_REJECTIONS


def enforce_cap(what: str, value: int, setting: str) -> None:
    """Raise TooLarge when `value` exceeds settings.<setting>."""
    cap = int(getattr(settings, setting))
    if value > cap:
        CAP_REJECTIONS.labels(setting).inc()
        raise TooLarge(what, value, cap, setting)
