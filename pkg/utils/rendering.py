"""보고서 텍스트 렌더링 (jinja2)"""

import os

from jinja2 import Environment, FileSystemLoader

current_script_path = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_script_path)
template_search_path = os.path.join(project_root, "templates")

if not os.path.isdir(template_search_path):
    # fallback: 현재 작업 디렉토리 기준 (main.py 등에서 실행될 때)
    template_search_path = "templates"

env = Environment(loader=FileSystemLoader(
    searchpath=template_search_path), trim_blocks=True, lstrip_blocks=True)


def _fmt(value, digits: int = 6) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


env.filters["fmt"] = _fmt


def render(template_name: str, **context) -> str:
    """templates/ 아래의 템플릿을 렌더링"""
    return env.get_template(template_name).render(**context)
