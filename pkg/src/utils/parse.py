import numpy as np

from src.errors import UsageError


class Parse:
    @staticmethod
    def state_spec(text: str) -> tuple[str, dict[str, float]]:
        """
        Parses ``name:key=value,key=value``, e.g. ``packet:x0=0,sigma=1,k=2``

        Returns: (name, {key: value})
        """
        name, _, arguments = text.strip().partition(":")
        if not name:
            raise UsageError(f"state spec {text!r} has no state name")
        values = {}
        for item in filter(None, (part.strip() for part in arguments.split(","))):
            key, separator, raw = item.partition("=")
            if not separator or not key:
                raise UsageError(f"expected key=value in state spec, got {item!r}")
            values[key.strip()] = Parse.number(raw, key.strip())
        return name, values

    @staticmethod
    def number(raw: str, name: str) -> float:
        try:
            value = float(raw)
        except ValueError as err:
            raise UsageError(f"{name} needs a number, got {raw!r}") from err
        if not np.isfinite(value):
            raise UsageError(f"{name} must be finite, got {raw!r}")
        return value

    @staticmethod
    def value_range(text: str, name: str) -> list[float]:
        """
        Either a comma list ``0,0.5,1`` or ``start:stop:count`` with both ends
        included
        """
        text = text.strip()
        if not text:
            raise UsageError(f"{name} range is empty")
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"{name} range must be start:stop:count, got {text!r}")
            start, stop = (Parse.number(part, name) for part in parts[:2])
            count = Parse.number(parts[2], name)
            if not count.is_integer() or count < 1:
                raise UsageError(f"{name} range count must be a positive integer")
            return np.linspace(start, stop, int(count)).tolist()
        values = [Parse.number(part, name) for part in text.split(",") if part.strip()]
        if not values:
            raise UsageError(f"{name} range is empty")
        return values

    @staticmethod
    def op_list(text: str) -> list[str]:
        ops = [op.strip() for op in text.split(",") if op.strip()]
        if not ops:
            raise UsageError("operator list is empty")
        return ops

    @staticmethod
    def tolerances(items: list[str]) -> dict[str, float]:
        """
        ``name=value`` overrides, e.g. ``csf_tolerance=1e-9``
        """
        overrides = {}
        for item in items:
            key, separator, raw = item.partition("=")
            if not separator:
                raise UsageError(f"expected name=value for a tolerance, got {item!r}")
            overrides[key.strip()] = Parse.number(raw, key.strip())
        return overrides
