"""Report containers shared by the 2D and 3D robustness calculators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .util import fmt_g17


@dataclass
class RobustnessReport:
    """Outcome of one robustness computation.

    ``kind`` names the measure (``internal``, ``external``, ``full_line_bound``,
    ``partial_s``, ``partial_u``, ``partial_any``); ``method`` is how it was
    obtained (``exact``, ``sampled`` or ``search``).  Searches that find no
    class-reducing cut report ``status="no_reduction_found"`` with
    ``value=None`` instead of raising.
    """

    kind: str
    value: Optional[float]
    method: str
    witness: Optional[dict] = None
    status: str = "ok"
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "value": self.value,
            "method": self.method,
            "witness": self.witness,
            "status": self.status,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json_dumps_g17(self.as_dict())


_SENTINEL = ""  # private-use char; never appears in report content


def json_dumps_g17(obj: Any, indent: int = 2) -> str:
    """JSON text with every float rendered at 17 significant digits."""

    def convert(o: Any) -> Any:
        if isinstance(o, float):
            return f"{_SENTINEL}{fmt_g17(o)}{_SENTINEL}"
        if isinstance(o, dict):
            return {k: convert(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [convert(v) for v in o]
        return o

    text = json.dumps(convert(obj), indent=indent, ensure_ascii=False)
    return text.replace(f'"{_SENTINEL}', "").replace(f'{_SENTINEL}"', "")
