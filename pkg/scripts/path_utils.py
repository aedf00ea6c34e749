"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Packaged resources and the output tree
"""

from pathlib import Path
from typing import Union


def get_project_root() -> Path:
    """Checkout root; scripts/ sits directly below it"""
    return Path(__file__).resolve().parent.parent


def get_fixtures_dir() -> Path:
    """Packaged LGF/CRV/OBK/front documents"""
    return get_project_root() / "fixtures"


def get_templates_dir() -> Path:
    """Jinja2 templates used by the SVG renderer"""
    return get_project_root() / "templates"


def ensure_output_dirs(output_dir: Union[str, Path]) -> Path:
    """
    Create the output tree under output_dir

    Layout: fronts/ (front and surgery documents), reports/ (realization
    reports) and svg/. Relative paths resolve against the working directory.
    """
    base = Path(output_dir)
    for sub in ("fronts", "reports", "svg"):
        (base / sub).mkdir(parents=True, exist_ok=True)
    return base
