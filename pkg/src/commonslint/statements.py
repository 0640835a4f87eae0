"""Dynamic statement templates: ``{value} of households in {region.name} ...``.

Placeholders are dotted paths in braces. The ``value`` placeholder is
formatted according to the measure's type; other placeholders are
substituted verbatim from the context.
"""

from __future__ import annotations

import re
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping

from .errors import RenderError
from .schema import DEFAULT_STATEMENT_PLACEHOLDERS

_PLACEHOLDER_RE = re.compile(r"\{([^{}]*)\}")


def extract_placeholders(template: str) -> list[str]:
    return _PLACEHOLDER_RE.findall(template)


def format_value(value, measure_type: str | None = None) -> str:
    """Format a data value for display in a rendered statement.

    percent: one decimal (ties away from zero) plus a trailing "%".
    count: thousands-grouped integer. Anything else renders raw.
    """
    if measure_type == "percent":
        quantized = Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
        return f"{quantized}%"
    if measure_type == "count":
        rounded = int(Decimal(str(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))
        return f"{rounded:,}"
    return str(value)


def render_statement(
    template: str,
    context: Mapping[str, object],
    value_format: str | None = None,
    *,
    allowed: frozenset[str] | None = None,
) -> str:
    """Substitute every placeholder in a statement template.

    ``context`` maps dotted placeholder paths to values. Raises RenderError
    for placeholders outside the allowed set, for allowed placeholders the
    context does not supply, and for stray braces that are not valid
    placeholder syntax.
    """
    allowed_set = DEFAULT_STATEMENT_PLACEHOLDERS if allowed is None else allowed

    literal_parts = _PLACEHOLDER_RE.split(template)[::2]
    if any("{" in part or "}" in part for part in literal_parts):
        raise RenderError(f"malformed placeholder syntax in template: {template!r}")

    def substitute(match: re.Match) -> str:
        name = match.group(1)
        if name not in allowed_set:
            raise RenderError(f"unknown placeholder {{{name}}}")
        if name not in context:
            raise RenderError(f"missing context value for {{{name}}}")
        value = context[name]
        if name == "value":
            return format_value(value, value_format)
        return str(value)

    return _PLACEHOLDER_RE.sub(substitute, template)
