# apps/experiments/config.py
"""
Run configuration for the solve command.

A run is one JSON document, read from a file or from standard input when
the path is '-'. Command-line flags override fields of the document, and
the merged mapping is validated by RunConfigForm.
"""

import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from django.conf import settings

from apps.collocation.exceptions import InvalidArgument
from apps.oracles.exact import CaseParams
from apps.solver.problems import Model, TimeConfig

from .forms import RunConfigForm, validate


@dataclass(frozen=True)
class RunConfig:
    model: str
    case_id: str
    dt: float
    t_final: float
    m_nodes: Optional[int] = None
    mx: Optional[int] = None
    my: Optional[int] = None
    sigma: Optional[float] = None
    reynolds: Optional[float] = None
    nu: Optional[float] = None
    sample_every: int = 1
    output_dir: str = ''
    emit_pointwise: bool = False
    startup: str = 'implicit'

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, data, overrides=None):
        """Merge ``overrides`` (None values ignored) over ``data`` and validate."""
        merged = dict(data or {})
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})

        unknown = sorted(set(merged) - set(cls.field_names()))
        if unknown:
            raise InvalidArgument(f"unknown config field(s): {', '.join(unknown)}")

        cleaned = validate(RunConfigForm(data=merged))
        values = {name: cleaned.get(name) for name in cls.field_names()}
        values['output_dir'] = values['output_dir'] or str(settings.BURGERS_OUTPUT_DIR)
        values['emit_pointwise'] = bool(values['emit_pointwise'])
        return cls(**values)

    @property
    def is_coupled(self):
        return self.model == Model.COUPLED.value

    def case_params(self):
        return CaseParams(
            sigma=self.sigma,
            nu=self.nu,
            reynolds=self.reynolds,
            m_nodes=self.m_nodes,
            mx=self.mx,
            my=self.my,
        )

    def time_config(self):
        return TimeConfig(dt=self.dt, t_final=self.t_final, startup=self.startup)

    def to_dict(self):
        """JSON-ready echo; unset optional fields (including the derived one of reynolds/nu) are left out."""
        return {key: value for key, value in asdict(self).items() if value is not None}


def read_config_document(path, stdin=None):
    """Parse the JSON document at ``path`` ('-' reads ``stdin``)."""
    try:
        if path == '-':
            text = (stdin or sys.stdin).read()
        else:
            text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise InvalidArgument(f"cannot read config {path}: {exc.strerror or exc}") from None

    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"config {path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(document, dict):
        raise InvalidArgument(f"config {path} must be a JSON object")
    return document


def load_config(path=None, overrides=None, stdin=None):
    """RunConfig from an optional JSON document plus flag overrides."""
    document = read_config_document(path, stdin=stdin) if path else {}
    return RunConfig.from_mapping(document, overrides)
