"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--words 1000 20000 200000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from polysemy import _backend
from polysemy.model import DictionaryTotals, meanings_total, predicted_spectrum, solve_parameters
from polysemy.simulate import SimConfig, sample_spectrum


def cases(n_words):
    m = _backend.BACKENDS["python"].meanings_by_rank(n_words, 1.0)
    seeds = np.arange(16, dtype=np.uint64)
    return {
        "meanings_total": lambda k: k.meanings_total(n_words, 1.0),
        "spectrum_counts(k=80)": lambda k: k.spectrum_counts(m, 80),
        "uniform_block(16 rows)": lambda k: k.uniform_block(seeds, n_words),
    }


def pipeline(n_words):
    totals = DictionaryTotals(n_words, meanings_total(n_words, 1.0))

    def run():
        fit = solve_parameters(totals)
        predicted_spectrum(fit)
        sample_spectrum(SimConfig(0, 10, fit))

    return run


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--words", type=int, nargs="+", default=[1000, 20000, 200000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    names = sorted(_backend.BACKENDS)
    if len(names) < 2:
        print("compiled kernels not built; only the numpy fallback is available")
    header = f"{'L':>8}  {'kernel':<26}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for n_words in args.words:
        rows = dict(cases(n_words))
        rows["solve+predict+sample x10"] = None
        for label, fn in rows.items():
            times = []
            for name in names:
                _backend.set_backend(name)
                call = pipeline(n_words) if fn is None else (lambda f=fn, k=_backend.active: f(k))
                times.append(best_of(call, args.repeat))
            line = f"{n_words:>8}  {label:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if len(times) == 2:
                line += f"{times[1] / times[0]:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
