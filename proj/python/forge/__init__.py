"""Python access to the forge core: pipelines, built-in examples and a few kernels."""

import json

from . import _core
from ._core import (
    ForgeError,
    angle,
    cyclic_group,
    delta,
    embedded_path_count,
    free_abelian_group,
    free_group,
    free_product,
    parallelism,
    permutation_group,
    set_parallelism,
)

__all__ = [
    "ForgeError",
    "angle",
    "builtin_example",
    "builtin_examples",
    "cyclic_group",
    "delta",
    "embedded_path_count",
    "free_abelian_group",
    "free_group",
    "free_product",
    "parallelism",
    "permutation_group",
    "run",
    "set_parallelism",
]


def builtin_examples():
    """(name, summary) pairs of the built-in pipelines."""
    return list(_core.builtin_names())


def builtin_example(name):
    """The spec of a built-in pipeline as a dict, or None."""
    text = _core.builtin_json(name)
    return None if text is None else json.loads(text)


def run(spec, radius=None, audits_only=False, timings=False):
    """Runs a pipeline given as a dict, a JSON string or a built-in name; returns the report dict."""
    if isinstance(spec, str) and not spec.lstrip().startswith("{"):
        found = builtin_example(spec)
        if found is None:
            raise ValueError(f"no built-in example named {spec!r}")
        spec = found
    text = spec if isinstance(spec, str) else json.dumps(spec)
    return json.loads(_core.run_pipeline_json(text, radius, audits_only, timings))
