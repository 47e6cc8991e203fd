"""
Informes Markdown legibles (6 cifras significativas) a partir de plantillas jinja2.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined

logger = logging.getLogger("acidfront.reporting")

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"


def sig6(value: Any) -> str:
    try:
        return f"{float(value):.6g}"
    except (TypeError, ValueError):
        return str(value)


class ReportRenderer:
    def __init__(self, template_dir: Path = TEMPLATE_DIR):
        self.template_dir = template_dir
        self.env = Environment(
            loader=FileSystemLoader(str(template_dir)),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["sig6"] = sig6

    def render(self, template_name: str, output_path: Path, **context: Any) -> Path:
        content = self.env.get_template(template_name).render(**context)
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(content, encoding="utf-8")
        logger.info(f"Informe generado en: {output_path}")
        return output_path
