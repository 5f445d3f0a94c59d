"""Structured text prompts describing a prediction scene.

Two variants share one skeleton and differ only in how lanes are written:
``bezier`` emits the four fitted control points per lane, ``discretized``
emits points resampled every ``discretization_spacing`` meters.  The template
is canonical and byte-stable: tab between columns, newline per row, blank
line between sections, so renderings can be compared as golden files.

The exact discretized wording is this package's own; only the Bezier variant
has a golden reference rendering in the test data.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from . import bezier
from .errors import InvalidInputError
from .geometry import resample_polyline
from .scene import Lane, PredictionInstance
from .tokenization import TokenCounter, default_token_counter, truncate
from .validation import check_scalar

VARIANTS = ("bezier", "discretized")

PREAMBLE = (
    "You are an expert self-driving-car model, that can predict the future "
    "trajectory for a given vehicle, while also incorporating its current and "
    "past states, its current and possible future lanes and also information "
    "about other vehicles, pedestrians, drivable areas and other important "
    "sets of features."
)

TASK = (
    "Task:\n"
    "Please predict the future trajectory for the given vehicle for the next "
    "6 seconds, from a set number of fixed trajectories."
)

FRAME_SENTENCE = (
    "The 2D coordinate system (x,y) is from the prediction vehicle’s own "
    "frame of view."
)

BEZIER_SENTENCE = (
    "Lane information is encoded as the 4 control points of a cubic Bezier "
    "curve. The first and last control point match with the beginning and "
    "end of the lane."
)

FINAL_LINE = "Predicted trajectory number: "


@dataclass(frozen=True)
class PromptConfig:
    variant: str = "bezier"
    max_tokens: int = 512
    discretization_spacing: float = 1.0

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise InvalidInputError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if int(self.max_tokens) < 1:
            raise InvalidInputError("max_tokens must be positive")
        object.__setattr__(self, "max_tokens", int(self.max_tokens))
        spacing = check_scalar(self.discretization_spacing, "discretization_spacing")
        if spacing <= 0:
            raise InvalidInputError("discretization_spacing must be positive")
        object.__setattr__(self, "discretization_spacing", spacing)


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    token_count: int
    truncated: bool


def fmt_number(value: float) -> str:
    """Round half away from zero to 2 decimals, then strip trailing zeros
    and a trailing decimal point (6.28 -> "6.28", -8.80 -> "-8.8")."""
    quantized = Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    text = str(quantized)
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text == "-0":
        text = "0"
    return text


def _fmt_time(value: float) -> str:
    # History timestamps keep one decimal so "-2.0" does not collapse to "-2".
    return f"{float(value):.1f}"


def _lane_sentence(config: PromptConfig) -> str:
    if config.variant == "bezier":
        return BEZIER_SENTENCE
    spacing = fmt_number(config.discretization_spacing)
    unit = "meter" if spacing == "1" else "meters"
    return (
        f"Lane information is given as (x,y) points sampled every {spacing} "
        f"{unit} along the lane."
    )


def _lane_rows(lane: Lane, config: PromptConfig) -> list[str]:
    if config.variant == "bezier":
        points = bezier.fit_lane(lane.polyline).control_points
    else:
        points = resample_polyline(lane.polyline, config.discretization_spacing)
    return [f"{fmt_number(x)}\t{fmt_number(y)}" for x, y in points]


def _lane_block(lane: Lane, title: str, config: PromptConfig) -> str:
    kind = "Bezier curve" if config.variant == "bezier" else "discretized"
    lines = [f"{title} ({kind}, as explained above):", "x[m]\ty[m]"]
    lines.extend(_lane_rows(lane, config))
    return "\n".join(lines)


def render_text(instance: PredictionInstance, config: PromptConfig) -> str:
    """The full prompt before any token budget is applied."""
    agent = instance.agent
    vehicle_lines = [
        "Prediction Vehicle:",
        f"Category: {agent.category}",
        f"Current Speed: {fmt_number(agent.speed)}[m/s]",
        f"Current Acceleration: {fmt_number(agent.acceleration)}[m/s²]",
        f"Current Yaw rate: {fmt_number(agent.yaw_rate)}[2π/s]",
        "Past (x,y) positions in meters, sampled at 2 Hertz:",
        "Time[s]\tx[m]\ty[m]",
    ]
    for t, x, y in instance.history:
        vehicle_lines.append(f"{_fmt_time(t)}\t{fmt_number(x)}\t{fmt_number(y)}")

    sections = [
        PREAMBLE,
        TASK,
        "Context Information:\n" + FRAME_SENTENCE + "\n" + _lane_sentence(config),
        "\n".join(vehicle_lines),
    ]
    if instance.current_lane is not None:
        sections.append(_lane_block(instance.current_lane, "Current Lane Information", config))
    for lane in instance.outgoing_lanes:
        sections.append(_lane_block(lane, "Possible Outgoing Lane Information", config))
    sections.append(FINAL_LINE)
    return "\n\n".join(sections)


def render_prompt(instance: PredictionInstance, config: PromptConfig | None = None,
                  counter: TokenCounter | None = None) -> RenderedPrompt:
    """Render the prompt for one instance, then apply the token budget."""
    config = config or PromptConfig()
    counter = counter or default_token_counter()
    text = render_text(instance, config)
    cut_text, was_cut = truncate(text, config.max_tokens, counter)
    return RenderedPrompt(cut_text, counter.count(cut_text), was_cut)
