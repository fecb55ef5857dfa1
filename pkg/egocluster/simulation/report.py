# -*- coding: utf-8 -*-
# Описание: Вывод отчётов исследования в CSV и markdown.

import csv
import io

from egocluster.simulation.study import PowerTable, SimReport

FORMATS = ("csv", "markdown")
MARKDOWN_METRICS = (("bias", "bias"), ("sd", "SD"), ("rmse", "RMSE"),
                    ("rejection_rate", "reject"), ("coverage", "cover"))
ESTIMAND_LABELS = (("tau", "τ"), ("gamma", "γ"))


def _check(designs, fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError("unknown report format '{}', expected one of {}".format(fmt, FORMATS))
    if not designs:
        raise ValueError("report has no designs")


def emit_report(report: SimReport, fmt: str) -> bytes:
    """
    CSV: строки design, estimand, metric, value с числами в полной точности.
    markdown: по строке на дизайн, три знака после запятой.
    """
    _check(report.designs, fmt)
    if fmt == "csv":
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(["design", "estimand", "metric", "value"])
        for design, estimand, metric, value in report.rows():
            writer.writerow([design, estimand, metric, repr(float(value))])
        return output.getvalue().encode("utf-8")

    header = ["design"]
    for _, label in ESTIMAND_LABELS:
        header.extend("{} {}".format(name, label) for _, name in MARKDOWN_METRICS)
    header.extend(["K_n", "r̄", "b", "failures"])
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for design in report.designs:
        cells = [design]
        for estimand, _ in ESTIMAND_LABELS:
            cells.extend("{:.3f}".format(report.value(design, estimand, metric)) for metric, _ in MARKDOWN_METRICS)
        cells.extend("{:.3f}".format(report.value(design, "tau", metric)) for metric in ("mean_K_n", "mean_r_bar", "mean_b"))
        cells.append("{:d}".format(int(report.value(design, "tau", "failures"))))
        lines.append("| " + " | ".join(cells) + " |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_power(table: PowerTable, fmt: str) -> bytes:
    """
    Доли отвержений: CSV design, estimand, effect, rejection_rate или markdown (строка на дизайн).
    """
    _check(table.designs, fmt)
    if fmt == "csv":
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(["design", "estimand", "effect", "rejection_rate"])
        for design, effect, rate in table.rows():
            writer.writerow([design, table.estimand, repr(float(effect)), repr(float(rate))])
        return output.getvalue().encode("utf-8")

    header = ["design"] + ["{} = {:g}".format(table.estimand, effect) for effect in table.effects]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for design in table.designs:
        cells = [design] + ["{:.3f}".format(table.rates[(design, effect)]) for effect in table.effects]
        lines.append("| " + " | ".join(cells) + " |")
    return ("\n".join(lines) + "\n").encode("utf-8")
