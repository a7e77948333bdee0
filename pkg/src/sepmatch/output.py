"""CSV / JSON / SVG emitters with fixed schemas.

Column order is part of the interface; see ``COLUMNS``.
"""
import csv
import enum
import io
import json

import numpy as np

SCHEMA_VERSION = 1

COLUMNS = {
    "bench": ("n", "method", "phase", "mean_time", "std_time", "trials"),
    "train": ("step", "loss", "si_sdr", "auc_sdr", "collapse_rate"),
    "compare": ("n", "method", "si_sdr", "auc_sdr", "collapse_rate", "wall_time", "relative_time"),
    "eval": ("scene", "n", "length", "si_sdr", "auc_sdr"),
    "assign": ("target", "prediction", "cost"),
}


def fmt_value(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def csv_text(kind, rows):
    cols = COLUMNS[kind]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([fmt_value(row[c]) for c in cols])
    return buf.getvalue()


def write_csv(path, kind, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(kind, rows))


def json_text(command, **payload):
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    doc.update(payload)
    return json.dumps(_jsonable(doc), indent=2, sort_keys=False)


def write_svg(path, series, xlabel, ylabel, loglog=False, title=None):
    """Static line chart; ``series`` maps a label to ``(x, y)`` sequences."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    styles = ["-", "--", ":", "-."]
    for k, (label, (x, y)) in enumerate(series.items()):
        ax.plot(x, y, styles[k % len(styles)], marker="o", ms=3, label=label)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
