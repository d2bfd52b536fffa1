"""
Compact text rendering of reports.
"""

from typing import Any

from pydantic import BaseModel


def _scalar(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    if value is None:
        return "-"
    return str(value)


def _inline(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_inline(item) for item in value) + "]"
    if isinstance(value, dict):
        return " ".join(f"{key}={_inline(item)}" for key, item in value.items())
    return _scalar(value)


def _render(data: dict[str, Any], indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict) and value and all(not isinstance(v, (dict, list)) for v in value.values()):
            lines.append(f"{pad}{key}: {_inline(value)}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _render(value, indent + 1, lines)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  - {_inline(item)}" for item in value)
        else:
            lines.append(f"{pad}{key}: {_inline(value)}")


def render_text(result: BaseModel) -> str:
    """
    Render any report model as indented ``key: value`` lines.

    Lists of records take one line per record; floats keep four significant digits.
    """
    lines: list[str] = []
    _render(result.model_dump(mode="json"), 0, lines)
    return "\n".join(lines) + "\n"
