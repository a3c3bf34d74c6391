"""Writers for the CLI and service outputs: CSV tables, JSON records and PPM phase images."""

import csv
from typing import IO, Iterable, Sequence

import numpy as np
from PIL import Image, ImageColor

from app.schemas import (
    ArcLabelRecord,
    ArcRecord,
    AsympRecord,
    ComplexValue,
    CrossoverRecord,
    DirichletRecord,
    EvalRecord,
    MeinardusRecord,
    PhaseRecord,
)
from app.services.asymptotics import CompareRow, Estimate, MeinardusResult
from app.services.phases import ArcLabel, PhaseClass, PhaseMap
from app.services.series import CoeffPoly
from app.services.weights import DirichletData, WeightSequence
from app.utils.helpers import format_float, format_number

EMPTY_COLOR = (255, 255, 255)
BOUNDARY_COLOR = (0, 0, 0)

COMPARE_HEADER = ("n", "exact_re", "exact_im", "est_re", "est_im", "rel_err")


def label_color(h: int, k: int) -> tuple[int, int, int]:
    """
    Fixed color per arc label. The hue is the Farey position min(h, k - h)/k,
    so mirrored labels (h, k) and (k - h, k) share a color.
    """
    hue = round(360 * min(h, k - h) / k)
    lightness = 45 + 5 * (k % 4)
    red, green, blue = ImageColor.getrgb(f"hsl({hue}, 80%, {lightness}%)")[:3]
    return red, green, blue


def phase_image(phase_map: PhaseMap) -> Image.Image:
    pixels = np.empty((phase_map.height, phase_map.width, 3), dtype=np.uint8)
    pixels[:] = EMPTY_COLOR
    labels = {
        (int(h), int(k))
        for h, k in zip(phase_map.h[phase_map.k > 0], phase_map.k[phase_map.k > 0])
    }
    for h, k in labels:
        pixels[(phase_map.h == h) & (phase_map.k == k)] = label_color(h, k)
    pixels[phase_map.boundary] = BOUNDARY_COLOR
    return Image.fromarray(pixels)


def write_ppm(phase_map: PhaseMap, target) -> None:
    """Binary PPM (P6), 8-bit channels."""
    phase_image(phase_map).save(target, format="PPM")


def write_phase_csv(phase_map: PhaseMap, stream: IO[str]) -> None:
    """One row per pixel center: x,y,h,k,boundary (h = k = 0 outside the disk)."""
    writer = csv.writer(stream)
    writer.writerow(("x", "y", "h", "k", "boundary"))
    for row in range(phase_map.height):
        for col in range(phase_map.width):
            z = phase_map.pixel_center(row, col)
            writer.writerow(
                (
                    format_float(z.real),
                    format_float(z.imag),
                    int(phase_map.h[row, col]),
                    int(phase_map.k[row, col]),
                    int(bool(phase_map.boundary[row, col])),
                )
            )


def write_expansion_csv(polys: Iterable[CoeffPoly], stream: IO[str]) -> None:
    """Row n holds the coefficients of z^0..z^n of Q_n."""
    writer = csv.writer(stream)
    for poly in polys:
        writer.writerow([format_number(c) for c in poly.coeffs])


def write_compare_csv(rows: Sequence[CompareRow], stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(COMPARE_HEADER)
    for row in rows:
        writer.writerow(
            (
                row.n,
                format_float(row.exact.real),
                format_float(row.exact.imag),
                format_float(row.estimate.real),
                format_float(row.estimate.imag),
                format_float(row.rel_err),
            )
        )


def write_json_lines(records: Iterable, stream: IO[str]) -> None:
    for record in records:
        stream.write(record.model_dump_json())
        stream.write("\n")


def _label(arc: ArcLabel) -> ArcLabelRecord:
    return ArcLabelRecord(h=arc.h, k=arc.k)


def eval_record(n: int, value: complex) -> EvalRecord:
    return EvalRecord(n=n, re=value.real, im=value.imag)


def asymp_record(seq: WeightSequence, est: Estimate) -> AsympRecord:
    alternate = est.alternate
    return AsympRecord(
        family=seq.describe(),
        z=ComplexValue.of(est.z),
        n=est.n,
        value=ComplexValue.of(est.value),
        arcs=[
            ArcRecord(
                h=a.arc.h,
                k=a.arc.k,
                branch=a.branch.value,
                omega=ComplexValue.of(a.omega),
                saddle=ComplexValue.of(a.saddle),
                product=ComplexValue.of(a.product),
            )
            for a in est.arcs
        ],
        mu=est.mu,
        dominant=_label(est.phase.dominant),
        alternate=None if alternate is None else ComplexValue.of(alternate),
    )


def phase_record(seq: WeightSequence, phase: PhaseClass) -> PhaseRecord:
    return PhaseRecord(
        family=seq.describe(),
        z=ComplexValue.of(phase.z),
        dominant=_label(phase.dominant),
        major_arcs=[_label(a) for a in phase.major_arcs],
        margin=phase.margin,
        boundary=phase.boundary,
        growth=phase.growth,
    )


def dirichlet_record(seq: WeightSequence, data: DirichletData) -> DirichletRecord:
    return DirichletRecord(
        family=seq.describe(),
        k=data.k,
        values_at_zero=[ComplexValue.of(v) for v in data.values_at_zero],
        residues=[ComplexValue.of(v) for v in data.residues],
        b=[ComplexValue.of(v) for v in data.b],
        c=[ComplexValue.of(v) for v in data.c],
    )


def meinardus_record(seq: WeightSequence, result: MeinardusResult) -> MeinardusRecord:
    return MeinardusRecord(
        family=seq.describe(),
        n=result.n,
        value=result.value,
        log_value=result.log_value,
        residue=result.residue,
        d_zero=result.d_zero,
        d_prime_zero=result.d_prime_zero,
        kappa=result.kappa,
        constant=result.constant,
    )


def crossover_record(seq: WeightSequence, x_star: float) -> CrossoverRecord:
    return CrossoverRecord(family=seq.describe(), crossover=x_star)
