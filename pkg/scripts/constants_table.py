"""Table of C_-(alpha), C_+(alpha) and the corollary shift log(alpha)/(alpha - 1) as CSV."""

import argparse
import csv
import math
import sys

from lcentropy import applications as app


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="1.01,1.1,1.2411164,1.5,2,3,5,10,100,inf")
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["alpha", "log_ratio", "C_minus", "C_plus", "ratio"])
    for a in (float(s) for s in args.alphas.split(",")):
        c = app.epi_constants(a)
        w.writerow([a, app.log_ratio(a), c.C_minus, c.C_plus, c.ratio])
    print(f"# alpha* = {app.alpha_star():.12f}; max D(X||Z) = {app.HALF_LOG_2PI_OVER_E:.10f}",
          file=sys.stderr)
    assert math.isclose(app.log_ratio(app.alpha_star()), 0.5 * math.log(6))


if __name__ == "__main__":
    main()
