"""Python access to the crossbar simulator core."""

from ._xbar import (  # noqa: F401
    CalibrationError,
    Config,
    ConfigError,
    ModelError,
    __version__,
    calibrate,
    diode_current,
    figure,
    figure_ids,
    max_supported_array,
    read_retention,
    render_figure,
    run_spec,
    sense_margin,
    simulate_write,
    threshold_voltage,
    write_energy,
)


def records(table):
    """Rows of a figure or sweep table as dicts keyed by column."""
    return [dict(zip(table["columns"], row)) for row in table["rows"]]
