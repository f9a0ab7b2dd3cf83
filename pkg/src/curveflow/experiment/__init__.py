"""Initial curves, configuration, presets, output writers and the CLI driver."""

from .config import ExperimentConfig, load_config, parse_config_text
from .initial_curves import make_circle, make_ellipse, make_spiral
from .output import emit_csv, emit_svg, read_curve_csv
from .presets import PRESETS, Preset, get_preset
from .runner import RunResult, format_table, run_experiment, run_refinement_study
