"""Certificates of effective convergence."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

__all__ = ["ConvergenceCert"]


@dataclass
class ConvergenceCert:
    """A sequence of oracles, its limit, and a recursive rate of convergence.

    ``modulus(n, k)`` is a threshold: for every index ``m >= modulus(n, k)``
    the ``m``-th term is within ``2**-k`` of the limit on the data indexed
    by ``n``.  For distributions ``n`` selects the window ``w_n``; for
    characteristic functions it is a bound ``M`` on ``|t|``.

    Window convergence alone does not pin down how fast ``mu_m(e^{itx})``
    converges, so a distribution certificate used for frequency-domain
    transfers also carries ``exp_modulus(t, k)``: a threshold beyond which
    ``|mu_m(e^{itx}) - mu(e^{itx})| < 2**-k`` at the dyadic frequency ``t``.
    """

    sequence: Callable[[int], Any]
    limit: Any
    modulus: Callable[[int, int], int]
    start: int = 0
    exp_modulus: Optional[Callable[[Any, int], int]] = None
    label: str = ""
    _terms: Dict[int, Any] = field(default_factory=dict, repr=False)

    def term(self, m: int):
        t = self._terms.get(m)
        if t is None:
            t = self.sequence(m)
            self._terms[m] = t
        return t

    def threshold(self, n: int, k: int) -> int:
        return max(self.start, int(self.modulus(n, k)))
