"""Companion gnuplot scripts for the emitted data files."""

from __future__ import annotations

from typing import Optional

_HEADER = """\
# Generated by giantcz; run with: gnuplot -p {script}
set datafile separator ","
set key top right
set grid
"""


def _header(script: str, title: str, output: Optional[str]) -> str:
    text = _HEADER.format(script=script)
    if output:
        text += f'set terminal pngcairo size 900,600\nset output "{output}"\n'
    return text + f'set title "{title}"\n'


def build_dynamics_script(csv_name: str, title: str, output: Optional[str] = None) -> str:
    """Populations n11, n20, n02 and the norm against tJ.

    Examples:
        >>> "n20" in build_dynamics_script("3e_dynamics.csv", "3e")
        True
    """
    return (
        _header(csv_name.replace(".csv", ".gp"), title, output)
        + 'set xlabel "tJ"\n'
        + 'set ylabel "population"\n'
        + "set yrange [0:1.05]\n"
        + f'plot "{csv_name}" using 1:2 skip 1 with lines title "n11", \\\n'
        + '     "" using 1:3 skip 1 with lines title "n20", \\\n'
        + '     "" using 1:4 skip 1 with lines title "n02", \\\n'
        + '     "" using 1:5 skip 1 with lines dashtype 2 title "norm"\n'
    )


def build_fidelity_script(
    csv_name: str, title: str, gate_time: float, output: Optional[str] = None
) -> str:
    return (
        _header(csv_name.replace(".csv", ".gp"), title, output)
        + 'set xlabel "tJ"\n'
        + 'set ylabel "fidelity"\n'
        + "set yrange [0:1]\n"
        + f"set arrow from {gate_time:.6g}, graph 0 to {gate_time:.6g}, graph 1 nohead dashtype 3\n"
        + f'plot "{csv_name}" using 1:2 skip 1 with lines title "process fidelity", \\\n'
        + '     "" using 1:3 skip 1 with lines title "average fidelity"\n'
    )


def build_sweep_script(csv_name: str, title: str, output: Optional[str] = None) -> str:
    """Best fidelity (left axis) and gate time (right axis) against g/J."""
    return (
        _header(csv_name.replace(".csv", ".gp"), title, output)
        + 'set xlabel "g/J"\n'
        + 'set ylabel "best process fidelity"\n'
        + 'set y2label "gate time tau J"\n'
        + "set ytics nomirror\n"
        + "set y2tics\n"
        + f'plot "{csv_name}" using 1:2 skip 1 with linespoints title "F_process,max", \\\n'
        + '     "" using 1:4 skip 1 axes x1y2 with linespoints title "tau J"\n'
    )


def build_df_scan_script(scan_csv: str, title: str, output: Optional[str] = None) -> str:
    return (
        _header(scan_csv.replace(".csv", ".gp"), title, output)
        + 'set xlabel "zeta"\n'
        + 'set ylabel "omega_DF / J"\n'
        + "set yrange [-2:2]\n"
        + f'plot "{scan_csv}" using 1:3 skip 1 with points pointtype 7 title "DF frequency"\n'
    )


def build_band_script(band_csv: str, df_csv: str, title: str, output: Optional[str] = None) -> str:
    """Cosine band with the decoherence-free points on top."""
    return (
        _header(band_csv.replace(".csv", ".gp"), title, output)
        + 'set xlabel "k"\n'
        + 'set ylabel "omega / J"\n'
        + "set xrange [0:pi]\n"
        + f'plot "{band_csv}" using 1:2 skip 1 with lines title "omega(k)", \\\n'
        + f'     "{df_csv}" using 1:2 skip 1 with points pointtype 7 pointsize 1.5 title "DF"\n'
    )
