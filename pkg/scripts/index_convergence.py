"""Show how slowly the Simonenko ratio u phi'(u)/phi(u) approaches its limit.

For the near-linear catalog entries the ratio decays like an inverse
power of ln u, so a window inside [1e-8, 1e12] is far from the limit.
The index estimators therefore sample in log space up to ln u = 5000.
"""
import argparse

import numpy as np

from orlicz_lab.io import parse_function
from orlicz_lab.orlicz import growth_indices, simonenko_ratio

DEFAULT = ["phi_r:r=1", "phi_a:a=1", "phi_b:b=1", "example55", "power:p=2"]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("functions", nargs="*", default=DEFAULT)
    parser.add_argument("--log-u", type=float, nargs="+", default=[10, 30, 100, 1000, 5000],
                        help="ln u values at which to print the ratio")
    args = parser.parse_args(argv)
    s = np.asarray(args.log_u)
    header = "function".ljust(14) + "".join(f"ln u={x:<8g}" for x in s) + "  alpha     beta"
    print(header)
    for text in args.functions:
        phi = parse_function(text)
        r = 1.0 + np.asarray(phi.kappa(s))
        rep = growth_indices(phi)
        print(text.ljust(14) + "".join(f"{x:<13.6f}" for x in r)
              + f"  {rep.alpha_inf:<8.4f}  {rep.beta_inf:.4f}")
    print(f"\nphi_b at u = 1e8: {float(simonenko_ratio(parse_function('phi_b:b=1'), 1e8)):.4f}")


if __name__ == "__main__":
    main()
