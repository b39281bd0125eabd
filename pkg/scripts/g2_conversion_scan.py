"""Heralded g2 against conversion efficiency for click detectors.

Fits the mean pair number to a target g2 at unit conversion, then prints the
exact and sampled g2 for a list of conversion efficiencies. Shows how far the
threshold-detector g2 drifts with loss.
"""
import argparse

from qpgsim import photonstats as ps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", type=float, default=0.32)
    ap.add_argument("--herald", type=float, default=0.25)
    ap.add_argument("--signal", type=float, default=0.25)
    ap.add_argument("--modes", type=int, default=1)
    ap.add_argument("--etas", default="0.1,0.25,0.5,0.755,1.0")
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    channel = ps.ChannelModel(args.herald, args.signal)
    mu = ps.fit_mean_pairs(args.target, channel, args.modes)
    src = ps.SourceModel(mu, args.modes, ps.minimal_truncation(mu, args.modes))
    print(f"mean pairs {mu:.6f}")
    print(f"{'eta':>6} {'g2 exact':>12} {'g2 sampled':>12} {'stderr':>9}")
    for eta in (float(x) for x in args.etas.split(",")):
        ch = channel.replace(conversion_efficiency=eta)
        ex = ps.heralded_g2(src, ch).value
        try:
            mc = ps.heralded_g2(src, ch, "monte_carlo", trials=args.trials, seed=args.seed)
            print(f"{eta:6.3f} {ex:12.8f} {mc.value:12.6f} {mc.stderr:9.6f}")
        except ps.MonteCarloUnderflow as exc:
            print(f"{eta:6.3f} {ex:12.8f}   ({exc})")


if __name__ == "__main__":
    main()
